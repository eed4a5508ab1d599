//! Recursive-descent parser with kind checking.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, `^`, unary `-`, `**`.
//! All binary operators associate to the left.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::ast::{BinOp, ChartSpec, Decl, DiracSpec, Directive, Document, Expr, Func, Node, Stmt};
use crate::error::{DslError, Pos};
use crate::lexer::{lex, Tok, Token};
use crate::types::{lookup, Kind, Signature, Within};

pub const STATEMENT_KEYWORDS: [&str; 12] = [
    "chart",
    "form",
    "mv",
    "poly",
    "span",
    "poisson",
    "dirac",
    "observable",
    "hamiltonian",
    "section",
    "check",
    "compute",
];

pub fn parse(src: &str) -> Result<Document, DslError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        i: 0,
        scope: Scope::default(),
    };
    let mut stmts = Vec::new();
    while p.peek() != &Tok::Eof {
        stmts.push(p.statement()?);
    }
    Ok(Document { stmts })
}

/// Names visible to expressions and their kinds.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub coords: Vec<String>,
    pub field: Option<(usize, usize)>,
    pub names: BTreeMap<String, Kind>,
    pub has_chart: bool,
}

impl Scope {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    /// Kind of a bare name: declaration, coordinate, then `d<coordinate>`.
    pub fn resolve(&self, name: &str) -> Option<Kind> {
        if let Some(k) = self.names.get(name) {
            return Some(*k);
        }
        if self.coord_index(name).is_some() {
            return Some(Kind::Poly);
        }
        name.strip_prefix('d')
            .and_then(|rest| self.coord_index(rest))
            .map(|_| Kind::Form(1))
    }

    pub fn field_coords(n: usize, m: usize) -> Vec<String> {
        gradedirac_core::field_theory::FieldChart { n, m }.names()
    }

    fn set_chart(&mut self, spec: &ChartSpec) {
        self.has_chart = true;
        match spec {
            ChartSpec::Coordinates(c) => self.coords = c.clone(),
            ChartSpec::Field { n, m } => {
                self.coords = Scope::field_coords(*n, *m);
                self.field = Some((*n, *m));
            }
        }
    }

    /// Kind of an expression, with positioned errors.
    pub fn infer(&self, e: &Expr) -> Result<Kind, DslError> {
        let dim = self.dim();
        let deg_err = |message: String| DslError::Degree {
            pos: e.pos,
            message,
        };
        let cap = |k: Kind| -> Result<Kind, DslError> {
            match k {
                Kind::Form(d) | Kind::Mv(d) if d > dim => Err(DslError::Degree {
                    pos: e.pos,
                    message: format!("degree {d} exceeds the chart dimension {dim}"),
                }),
                _ => Ok(k),
            }
        };
        match &e.node {
            Node::Num(_) => Ok(Kind::Poly),
            Node::Name(n) => self.resolve(n).ok_or_else(|| DslError::UnknownIdentifier {
                pos: e.pos,
                name: n.clone(),
            }),
            Node::Partial(n) => match self.coord_index(n) {
                Some(_) => Ok(Kind::Mv(1)),
                None => Err(DslError::UnknownIdentifier {
                    pos: e.pos,
                    name: format!("@{n}"),
                }),
            },
            Node::Neg(a) => {
                let k = self.infer(a)?;
                if k.is_algebraic() {
                    Ok(k)
                } else {
                    Err(deg_err(format!("cannot negate a {k}")))
                }
            }
            Node::Pow(a, _) => match self.infer(a)? {
                Kind::Poly => Ok(Kind::Poly),
                k => Err(deg_err(format!(
                    "powers need a polynomial base, found a {k}"
                ))),
            },
            Node::Bin(op, a, b) => {
                let (ka, kb) = (self.infer(a)?, self.infer(b)?);
                for k in [ka, kb] {
                    if !k.is_algebraic() {
                        return Err(deg_err(format!("`{}` cannot take a {k}", op.symbol())));
                    }
                }
                match op {
                    BinOp::Add | BinOp::Sub => {
                        if ka == kb {
                            Ok(ka)
                        } else {
                            Err(deg_err(format!(
                                "degree mismatch: {ka} {} {kb}",
                                op.symbol()
                            )))
                        }
                    }
                    BinOp::Mul => match (ka, kb) {
                        (Kind::Poly, k) | (k, Kind::Poly) => Ok(k),
                        _ => Err(deg_err(format!(
                            "`*` needs a polynomial factor, found {ka} and {kb}; use `^` for wedge"
                        ))),
                    },
                    BinOp::Div => match &b.node {
                        Node::Num(n) if !n.is_zero() => Ok(ka),
                        Node::Num(_) => Err(deg_err(String::from("division by zero"))),
                        _ => Err(deg_err(String::from(
                            "only division by a number literal is supported",
                        ))),
                    },
                    BinOp::Wedge => match (ka, kb) {
                        (Kind::Poly, k) | (k, Kind::Poly) if !matches!(k, Kind::Section { .. }) => {
                            Ok(k)
                        }
                        (Kind::Form(p), Kind::Form(q)) => cap(Kind::Form(p + q)),
                        (Kind::Mv(p), Kind::Mv(q)) => cap(Kind::Mv(p + q)),
                        _ => Err(deg_err(format!("cannot wedge a {ka} with a {kb}"))),
                    },
                }
            }
            Node::Call(f, args) => {
                let kinds = args
                    .iter()
                    .map(|a| self.infer(a))
                    .collect::<Result<Vec<_>, _>>()?;
                match (f, kinds.as_slice()) {
                    (Func::D, [k]) => match k.form_degree() {
                        Some(p) => cap(Kind::form(p + 1)),
                        None => Err(deg_err(format!("d() needs a form, found a {k}"))),
                    },
                    (Func::Interior, [Kind::Mv(p), k]) => match k.form_degree() {
                        Some(q) if q >= *p => Ok(Kind::form(q - p)),
                        Some(q) => Err(deg_err(format!(
                            "cannot contract a {p}-vector into a {q}-form"
                        ))),
                        None => Err(deg_err(format!("i() needs a form second, found a {k}"))),
                    },
                    (Func::Sn, [Kind::Mv(p), Kind::Mv(q)]) => cap(Kind::mv(p + q - 1)),
                    (Func::Lie, [Kind::Mv(p), k]) => match k.form_degree() {
                        Some(q) if q + 1 >= *p => Ok(Kind::form(q + 1 - p)),
                        Some(q) => Err(deg_err(format!(
                            "Lie derivative of a {q}-form along a {p}-vector"
                        ))),
                        None => Err(deg_err(format!("lie() needs a form second, found a {k}"))),
                    },
                    (Func::Graph, [Kind::Form(q)]) if *q >= 2 => Ok(Kind::Dirac(q - 1)),
                    _ => Err(deg_err(format!(
                        "{}() cannot take ({})",
                        f.name(),
                        kinds
                            .iter()
                            .map(|k| k.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ))),
                }
            }
            Node::Pair(u, a) => match (self.infer(u)?, self.infer(a)?) {
                (Kind::Mv(p), k) => match k.form_degree() {
                    Some(q) if q >= 1 => Ok(Kind::Section { k: p + q - 1, p }),
                    _ => Err(deg_err(format!(
                        "a section pairs a multivector with a form, found {k}"
                    ))),
                },
                (k, _) => Err(deg_err(format!(
                    "a section starts with a multivector, found a {k}"
                ))),
            },
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    scope: Scope,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        expected.dedup();
        Err(DslError::Syntax {
            pos: self.pos(),
            found: self.peek().to_string(),
            expected,
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            let sym = format!("`{}`", tok.symbol());
            self.fail(&[&sym])
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.pos();
                self.bump();
                Ok((s, pos))
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[&format!("`{kw}`")]),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn small_int(&mut self) -> PResult<(u64, Pos)> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                n.to_u64()
                    .filter(|v| *v <= u32::MAX as u64)
                    .map(|v| (v, pos))
                    .ok_or_else(|| DslError::Degree {
                        pos,
                        message: format!("number {n} is too large here"),
                    })
            }
            _ => self.fail(&["number"]),
        }
    }

    fn declare(&mut self, name: &str, pos: Pos, kind: Kind) -> PResult<()> {
        if self.scope.resolve(name).is_some() || crate::ast::Func::from_name(name).is_some() {
            return Err(DslError::Redeclared {
                pos,
                name: name.to_string(),
            });
        }
        self.scope.names.insert(name.to_string(), kind);
        Ok(())
    }

    fn require_chart(&self, pos: Pos) -> PResult<()> {
        if self.scope.has_chart {
            Ok(())
        } else {
            Err(DslError::Degree {
                pos,
                message: String::from("a chart must be declared first"),
            })
        }
    }

    fn require_field(&self, pos: Pos, what: &str) -> PResult<(usize, usize)> {
        self.scope.field.ok_or_else(|| DslError::Degree {
            pos,
            message: format!("{what} needs a field chart, e.g. `chart Z field(2, 1);`"),
        })
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        let kw = match self.peek() {
            Tok::Ident(s) if STATEMENT_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return self.fail(&STATEMENT_KEYWORDS),
        };
        self.bump();
        if kw == "chart" {
            if self.scope.has_chart {
                return Err(DslError::Degree {
                    pos,
                    message: String::from("only one chart may be declared"),
                });
            }
        } else {
            self.require_chart(pos)?;
        }
        let decl = match kw.as_str() {
            "chart" => self.chart()?,
            "form" => {
                let (tag, tpos) = self.ident()?;
                let degree = tag
                    .strip_prefix('a')
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or(DslError::Syntax {
                        pos: tpos,
                        found: format!("identifier `{tag}`"),
                        expected: vec![String::from("degree tag such as `a2`")],
                    })?;
                let (name, npos) = self.ident()?;
                self.expect(Tok::Eq)?;
                let expr = self.expr()?;
                let k = self.scope.infer(&expr)?;
                if k != Kind::form(degree) {
                    return Err(DslError::Degree {
                        pos: expr.pos,
                        message: format!(
                            "`{name}` is declared as a {degree}-form but the expression is a {k}"
                        ),
                    });
                }
                self.declare(&name, npos, k)?;
                Decl::Form { degree, name, expr }
            }
            "mv" | "poly" | "observable" | "hamiltonian" => {
                let (name, npos) = self.ident()?;
                self.expect(Tok::Eq)?;
                let expr = self.expr()?;
                let k = self.scope.infer(&expr)?;
                let bad = |want: String| DslError::Degree {
                    pos: expr.pos,
                    message: format!("`{name}` must be {want}, found a {k}"),
                };
                let (decl, kind) = match kw.as_str() {
                    "mv" => {
                        if !matches!(k, Kind::Mv(_)) {
                            return Err(bad(String::from("a multivector field")));
                        }
                        (
                            Decl::Mv {
                                name: name.clone(),
                                expr,
                            },
                            k,
                        )
                    }
                    "poly" => {
                        if k != Kind::Poly {
                            return Err(bad(String::from("a polynomial")));
                        }
                        (
                            Decl::Poly {
                                name: name.clone(),
                                expr,
                            },
                            k,
                        )
                    }
                    "observable" => {
                        let (n, _) = self.require_field(pos, "an observable")?;
                        if k != Kind::form(n - 1) {
                            return Err(bad(format!("an {}-form", n - 1)));
                        }
                        (
                            Decl::Observable {
                                name: name.clone(),
                                expr,
                            },
                            Kind::Observable,
                        )
                    }
                    _ => {
                        self.require_field(pos, "a Hamiltonian")?;
                        if k != Kind::Poly {
                            return Err(bad(String::from("a polynomial")));
                        }
                        (
                            Decl::Hamiltonian {
                                name: name.clone(),
                                expr,
                            },
                            Kind::Hamiltonian,
                        )
                    }
                };
                self.declare(&name, npos, kind)?;
                decl
            }
            "span" => {
                let (name, npos) = self.ident()?;
                self.expect(Tok::Eq)?;
                self.expect(Tok::Lt)?;
                let forms = self.expr_list(Tok::Gt)?;
                let mut degree = None;
                for f in &forms {
                    let k = self.scope.infer(f)?;
                    let d = match k {
                        Kind::Form(d) => d,
                        _ => {
                            return Err(DslError::Degree {
                                pos: f.pos,
                                message: format!("a span holds forms, found a {k}"),
                            })
                        }
                    };
                    if degree.is_some_and(|e| e != d) {
                        return Err(DslError::Degree {
                            pos: f.pos,
                            message: String::from("all forms of a span must have the same degree"),
                        });
                    }
                    degree = Some(d);
                }
                let Some(d) = degree else {
                    return Err(DslError::Degree {
                        pos: npos,
                        message: String::from("a span needs at least one form"),
                    });
                };
                self.declare(&name, npos, Kind::Span(d))?;
                Decl::Span { name, forms }
            }
            "poisson" => {
                let (name, npos) = self.ident()?;
                self.expect(Tok::Eq)?;
                self.keyword("multisymplectic")?;
                self.expect(Tok::LParen)?;
                let omega = self.expr()?;
                self.expect(Tok::RParen)?;
                let k = self.top_form(&omega)?;
                self.declare(&name, npos, Kind::Poisson(k))?;
                Decl::Poisson { name, omega }
            }
            "dirac" => {
                let (name, npos) = self.ident()?;
                self.expect(Tok::Eq)?;
                let (spec, k) = if self.is_keyword("graph") {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let omega = self.expr()?;
                    self.expect(Tok::RParen)?;
                    let k = self.top_form(&omega)?;
                    (DiracSpec::Graph(omega), k)
                } else if self.is_keyword("generated") {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let (k, kpos) = self.small_int()?;
                    let k = k as usize;
                    self.expect(Tok::RParen)?;
                    if k == 0 || k > self.scope.dim() {
                        return Err(DslError::Degree {
                            pos: kpos,
                            message: format!("order {k} out of range 1..={}", self.scope.dim()),
                        });
                    }
                    self.expect(Tok::LBracket)?;
                    let sections = self.expr_list(Tok::RBracket)?;
                    for s in &sections {
                        let kind = self.scope.infer(s)?;
                        if kind != (Kind::Section { k, p: 1 }) {
                            return Err(DslError::Degree {
                                pos: s.pos,
                                message: format!(
                                    "expected a level-one section of order {k}, found a {kind}"
                                ),
                            });
                        }
                    }
                    (DiracSpec::LevelOne { k, sections }, k)
                } else {
                    return self.fail(&["`graph`", "`generated`"]);
                };
                self.declare(&name, npos, Kind::Dirac(k))?;
                Decl::Dirac { name, spec }
            }
            "section" => {
                let (n, m) = self.require_field(pos, "a candidate section")?;
                let (name, npos) = self.ident()?;
                self.expect(Tok::Eq)?;
                self.expect(Tok::LBracket)?;
                let components = self.expr_list(Tok::RBracket)?;
                if components.len() != m + n * m {
                    return Err(DslError::Degree {
                        pos: npos,
                        message: format!(
                            "a section needs {} components, found {}",
                            m + n * m,
                            components.len()
                        ),
                    });
                }
                for c in &components {
                    let k = self.scope.infer(c)?;
                    if k != Kind::Poly {
                        return Err(DslError::Degree {
                            pos: c.pos,
                            message: format!("section components are polynomials, found a {k}"),
                        });
                    }
                }
                self.declare(&name, npos, Kind::Candidate)?;
                Decl::Section { name, components }
            }
            "check" => Decl::Check(self.directive(true)?),
            _ => Decl::Compute(self.directive(false)?),
        };
        self.expect(Tok::Semi)?;
        Ok(Stmt { decl, pos })
    }

    /// Order `k` of a `(k+1)`-form used to build a structure.
    fn top_form(&self, omega: &Expr) -> PResult<usize> {
        match self.scope.infer(omega)? {
            Kind::Form(d) if d >= 2 => Ok(d - 1),
            k => Err(DslError::Degree {
                pos: omega.pos,
                message: format!("expected a form of degree at least 2, found a {k}"),
            }),
        }
    }

    fn chart(&mut self) -> PResult<Decl> {
        let (name, _) = self.ident()?;
        let spec = if self.is_keyword("field") {
            self.bump();
            self.expect(Tok::LParen)?;
            let (n, npos) = self.small_int()?;
            self.expect(Tok::Comma)?;
            let (m, _) = self.small_int()?;
            self.expect(Tok::RParen)?;
            let (n, m) = (n as usize, m as usize);
            if n == 0 || m == 0 || n + m + n * m + 1 > 32 {
                return Err(DslError::Degree {
                    pos: npos,
                    message: format!("field chart ({n}, {m}) is empty or exceeds 32 coordinates"),
                });
            }
            ChartSpec::Field { n, m }
        } else {
            self.expect(Tok::LParen)?;
            let mut coords = Vec::new();
            loop {
                let (c, cpos) = self.ident()?;
                if coords.contains(&c) || Func::from_name(&c).is_some() {
                    return Err(DslError::Redeclared { pos: cpos, name: c });
                }
                coords.push(c);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
            if coords.len() > 32 {
                return Err(DslError::Degree {
                    pos: self.pos(),
                    message: String::from("at most 32 coordinates are supported"),
                });
            }
            ChartSpec::Coordinates(coords)
        };
        self.scope.set_chart(&spec);
        Ok(Decl::Chart { name, spec })
    }

    fn directive(&mut self, check: bool) -> PResult<Directive> {
        let (mut name, npos) = self.ident()?;
        // hyphenated names: adjacent `ident - ident`
        while *self.peek() == Tok::Minus
            && self.toks[self.i].start == self.toks[self.i - 1].end
            && matches!(self.toks[self.i + 1].tok, Tok::Ident(_))
            && self.toks[self.i + 1].start == self.toks[self.i].end
        {
            self.bump();
            let (part, _) = self.ident()?;
            name.push('-');
            name.push_str(&part);
        }
        let sig: &Signature = match lookup(check, &name) {
            Some(s) => s,
            None => {
                let table = if check {
                    crate::types::CHECKS
                } else {
                    crate::types::COMPUTES
                };
                let mut expected: Vec<String> =
                    table.iter().map(|s| format!("`{}`", s.name)).collect();
                expected.sort();
                return Err(DslError::Syntax {
                    pos: npos,
                    found: format!("identifier `{name}`"),
                    expected,
                });
            }
        };
        if sig.field {
            self.require_field(npos, &format!("`{name}`"))?;
        }
        let mut args = Vec::new();
        for (j, slot) in sig.required.iter().chain(sig.optional).enumerate() {
            if j > 0 {
                if j >= sig.required.len() && *self.peek() != Tok::Comma {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
            let e = self.expr()?;
            let k = self.scope.infer(&e)?;
            if !slot.accepts(k) {
                return Err(DslError::Degree {
                    pos: e.pos,
                    message: format!("`{name}` expects {} here, found a {k}", slot.describe()),
                });
            }
            args.push(e);
        }
        if name == "equal" {
            let (a, b) = (self.scope.infer(&args[0])?, self.scope.infer(&args[1])?);
            if a != b {
                return Err(DslError::Degree {
                    pos: args[1].pos,
                    message: format!("cannot compare a {a} with a {b}"),
                });
            }
        }
        let mut within = None;
        if sig.within != Within::No && self.is_keyword("in") {
            self.bump();
            let (s, spos) = self.ident()?;
            match self.scope.names.get(&s) {
                Some(Kind::Poisson(_)) => within = Some(s),
                Some(k) => {
                    return Err(DslError::Degree {
                        pos: spos,
                        message: format!("`in` needs a Poisson structure, found a {k}"),
                    })
                }
                None => return Err(DslError::UnknownIdentifier { pos: spos, name: s }),
            }
        } else if sig.within == Within::Required {
            let mut expected = vec!["`in`"];
            if !args.is_empty() && sig.optional.len() + sig.required.len() > args.len() {
                expected.push("`,`");
            }
            return self.fail(&expected);
        }
        let mut options: Vec<(String, u64)> = Vec::new();
        while let Tok::Ident(key) = self.peek().clone() {
            if !sig.options.contains(&key.as_str()) {
                break;
            }
            let kpos = self.pos();
            self.bump();
            if options.iter().any(|(k, _)| *k == key) {
                return Err(DslError::Redeclared {
                    pos: kpos,
                    name: key,
                });
            }
            let (v, _) = self.small_int()?;
            options.push((key, v));
        }
        if *self.peek() != Tok::Semi {
            let mut expected: Vec<String> = vec![String::from("`;`")];
            expected.extend(
                sig.options
                    .iter()
                    .filter(|o| !options.iter().any(|(k, _)| k == *o))
                    .map(|o| format!("`{o}`")),
            );
            if sig.within != Within::No && within.is_none() {
                expected.push(String::from("`in`"));
            }
            if args.len() < sig.required.len() + sig.optional.len()
                && args.len() >= sig.required.len()
            {
                expected.push(String::from("`,`"));
            }
            let refs: Vec<&str> = expected.iter().map(String::as_str).collect();
            return self.fail(&refs);
        }
        Ok(Directive {
            name,
            args,
            within,
            options,
        })
    }

    fn expr_list(&mut self, close: Tok) -> PResult<Vec<Expr>> {
        let mut out = Vec::new();
        if *self.peek() == close {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                t if *t == close => {
                    self.bump();
                    return Ok(out);
                }
                _ => {
                    let c = format!("`{}`", close.symbol());
                    return self.fail(&["`,`", &c, "operator"]);
                }
            }
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::new(Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.wedge()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.wedge()?;
                    lhs = Expr::new(Node::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs)), pos);
                }
                Tok::Slash => {
                    self.bump();
                    let npos = self.pos();
                    let n = match self.peek().clone() {
                        Tok::Int(n) => n,
                        _ => return self.fail(&["number"]),
                    };
                    self.bump();
                    let rhs = Expr::new(Node::Num(n), npos);
                    lhs = Expr::new(Node::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs)), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn wedge(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Caret {
            let pos = self.pos();
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::new(Node::Bin(BinOp::Wedge, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            let pos = self.pos();
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::new(Node::Neg(Box::new(inner)), pos));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::StarStar {
            let pos = self.pos();
            self.bump();
            let (e, _) = self.small_int()?;
            return Ok(Expr::new(Node::Pow(Box::new(base), e as u32), pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::new(Node::Num(n), pos))
            }
            Tok::Partial(s) => {
                self.bump();
                Ok(Expr::new(Node::Partial(s), pos))
            }
            Tok::Ident(s) => {
                self.bump();
                match Func::from_name(&s) {
                    Some(f) if *self.peek() == Tok::LParen => {
                        self.bump();
                        let mut args = vec![self.expr()?];
                        for _ in 1..f.arity() {
                            self.expect(Tok::Comma)?;
                            args.push(self.expr()?);
                        }
                        self.expect(Tok::RParen)?;
                        Ok(Expr::new(Node::Call(f, args), pos))
                    }
                    _ => Ok(Expr::new(Node::Name(s), pos)),
                }
            }
            Tok::LParen => {
                self.bump();
                let first = self.expr()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let second = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Expr::new(
                        Node::Pair(Box::new(first), Box::new(second)),
                        pos,
                    ));
                }
                match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        Ok(first)
                    }
                    _ => self.fail(&["`)`", "`,`", "operator"]),
                }
            }
            _ => self.fail(&["number", "identifier", "`@name`", "`(`", "`-`"]),
        }
    }
}

/// Numeric literal value, for callers that evaluate `Node::Num`.
pub fn literal(n: &BigInt) -> gradedirac_core::Scalar {
    gradedirac_core::Scalar::from_integer(n.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(src: &str) -> DslError {
        parse(src).unwrap_err()
    }

    #[test]
    fn example_generator() {
        let doc = parse("chart R4 (x,y,z,t);\nform a2 w = (dx + y*dz)^dt;").unwrap();
        assert_eq!(doc.stmts.len(), 2);
        match &doc.stmts[1].decl {
            Decl::Form { degree, name, expr } => {
                assert_eq!((*degree, name.as_str()), (2, "w"));
                assert!(matches!(expr.node, Node::Bin(BinOp::Wedge, _, _)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let doc = parse("chart R (x, y);\npoly f = -x**2 + x*y - 3/4;").unwrap();
        let Decl::Poly { expr, .. } = &doc.stmts[1].decl else {
            panic!()
        };
        let Node::Bin(BinOp::Sub, lhs, rhs) = &expr.node else {
            panic!("{expr:?}")
        };
        assert!(matches!(rhs.node, Node::Bin(BinOp::Div, _, _)));
        let Node::Bin(BinOp::Add, neg, _) = &lhs.node else {
            panic!()
        };
        assert!(matches!(&neg.node, Node::Neg(inner) if matches!(inner.node, Node::Pow(_, 2))));
    }

    #[test]
    fn syntax_error_has_position_and_expected() {
        match err("chart R (x, y);\nform a1 w = (dx + ;") {
            DslError::Syntax {
                pos,
                expected,
                found,
            } => {
                assert_eq!(pos, Pos { line: 2, col: 19 });
                assert!(expected.contains(&String::from("identifier")));
                assert_eq!(found, "`;`");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degree_mismatch_is_positioned() {
        match err("chart R (x, y);\nform a2 w = dx + x;") {
            DslError::Degree { pos, .. } => assert_eq!(pos, Pos { line: 2, col: 16 }),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            err("chart R (x, y);\nform a1 w = dx^dy;"),
            DslError::Degree { .. }
        ));
    }

    #[test]
    fn unknown_identifier() {
        match err("chart R (x, y);\nmv v = @z;") {
            DslError::UnknownIdentifier { pos, name } => {
                assert_eq!(pos, Pos { line: 2, col: 8 });
                assert_eq!(name, "@z");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn directives() {
        let doc = parse(
            "chart R4 (x,y,z,t);\nform a2 w = (dx + y*dz)^dt;\nspan S2 = <w>;\ncheck closed-sections S2 bound 3;",
        )
        .unwrap();
        let Decl::Check(d) = &doc.stmts[3].decl else {
            panic!()
        };
        assert_eq!(d.name, "closed-sections");
        assert_eq!(d.option("bound"), Some(3));
        assert!(matches!(
            err("chart R (x);\ncheck frobnicate x;"),
            DslError::Syntax { .. }
        ));
        assert!(matches!(
            err("chart R (x, y);\ncheck closed @x;"),
            DslError::Degree { .. }
        ));
    }

    #[test]
    fn field_chart_names() {
        let doc = parse(
            "chart Z field(2, 1);\nobservable a = y1*dx2 + p1_1*dx2;\nhamiltonian h = p1_1**2/2;",
        );
        assert!(doc.is_ok(), "{doc:?}");
        assert!(matches!(
            err("chart R (x, y);\nhamiltonian h = x;"),
            DslError::Degree { .. }
        ));
    }
}
