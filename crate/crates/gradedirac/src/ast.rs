//! Syntax tree. Positions are carried for diagnostics but ignored by equality,
//! so a printed and reparsed document compares equal to the original.

use num_bigint::BigInt;

use crate::error::Pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Wedge => "^",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Wedge => 3,
        }
    }
}

/// Built-in operators written functionally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    /// `d(a)`
    D,
    /// `i(U, a)`
    Interior,
    /// `sn(U, V)`
    Sn,
    /// `lie(U, a)`
    Lie,
    /// `graph(w)`, the graph of a form as a Dirac structure
    Graph,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::D, Func::Interior, Func::Sn, Func::Lie, Func::Graph];

    pub fn name(self) -> &'static str {
        match self {
            Func::D => "d",
            Func::Interior => "i",
            Func::Sn => "sn",
            Func::Lie => "lie",
            Func::Graph => "graph",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::D | Func::Graph => 1,
            _ => 2,
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Num(BigInt),
    /// Declared name, coordinate, or `d<coordinate>`.
    Name(String),
    /// `@coordinate`
    Partial(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Vec<Expr>),
    /// `(U, α)`, a section of the graded bundle.
    Pair(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, Eq)]
pub struct Expr {
    pub node: Node,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl Expr {
    pub fn new(node: Node, pos: Pos) -> Self {
        Expr { node, pos }
    }

    pub fn precedence(&self) -> u8 {
        match &self.node {
            Node::Bin(op, _, _) => op.precedence(),
            Node::Neg(_) => 4,
            Node::Pow(_, _) => 5,
            _ => 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartSpec {
    Coordinates(Vec<String>),
    /// Canonical multi-cotangent chart with base dimension `n` and fiber dimension `m`.
    Field {
        n: usize,
        m: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiracSpec {
    Graph(Expr),
    /// Generated by level-one sections `(U, α)` of order `k`.
    LevelOne {
        k: usize,
        sections: Vec<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub name: String,
    pub args: Vec<Expr>,
    /// `in NAME`
    pub within: Option<String>,
    /// Trailing `key value` options such as `bound 3`.
    pub options: Vec<(String, u64)>,
}

impl Directive {
    pub fn option(&self, key: &str) -> Option<u64> {
        self.options.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Chart {
        name: String,
        spec: ChartSpec,
    },
    Form {
        degree: usize,
        name: String,
        expr: Expr,
    },
    Mv {
        name: String,
        expr: Expr,
    },
    Poly {
        name: String,
        expr: Expr,
    },
    Span {
        name: String,
        forms: Vec<Expr>,
    },
    Poisson {
        name: String,
        omega: Expr,
    },
    Dirac {
        name: String,
        spec: DiracSpec,
    },
    Observable {
        name: String,
        expr: Expr,
    },
    Hamiltonian {
        name: String,
        expr: Expr,
    },
    Section {
        name: String,
        components: Vec<Expr>,
    },
    Check(Directive),
    Compute(Directive),
}

#[derive(Clone, Debug, Eq)]
pub struct Stmt {
    pub decl: Decl,
    pub pos: Pos,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.decl == other.decl
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub stmts: Vec<Stmt>,
}
