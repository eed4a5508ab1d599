//! Random well-typed documents, used to exercise the printer and parser.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::ast::{BinOp, ChartSpec, Decl, DiracSpec, Directive, Document, Expr, Func, Node, Stmt};
use crate::error::Pos;

const COORDS: [&str; 6] = ["x", "y", "z", "t", "u", "w"];

fn e(node: Node) -> Expr {
    Expr::new(node, Pos::default())
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    e(Node::Bin(op, Box::new(a), Box::new(b)))
}

fn num(v: u32) -> Expr {
    e(Node::Num(BigInt::from(v)))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sort {
    Poly,
    Form(usize),
    Mv(usize),
    Section(usize, usize),
    Observable,
    Hamiltonian,
    Candidate,
}

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    coords: Vec<String>,
    names: Vec<(String, Sort)>,
    counter: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn dim(&self) -> usize {
        self.coords.len()
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    fn coord(&mut self) -> String {
        self.coords
            .choose(self.rng)
            .expect("nonempty chart")
            .clone()
    }

    fn named(&mut self, sort: Sort) -> Option<Expr> {
        let pool: Vec<_> = self
            .names
            .iter()
            .filter(|(_, s)| *s == sort)
            .map(|(n, _)| n.clone())
            .collect();
        pool.choose(self.rng).map(|n| e(Node::Name(n.clone())))
    }

    /// Shared wrappers: negation, sums and scaling keep the sort.
    fn wrap(
        &mut self,
        depth: u32,
        sort: Sort,
        inner: impl Fn(&mut Self, u32) -> Expr,
    ) -> Option<Expr> {
        if depth == 0 {
            return None;
        }
        Some(match self.rng.gen_range(0..5) {
            0 => e(Node::Neg(Box::new(inner(self, depth - 1)))),
            1 => bin(BinOp::Add, inner(self, depth - 1), inner(self, depth - 1)),
            2 => bin(BinOp::Sub, inner(self, depth - 1), inner(self, depth - 1)),
            3 => bin(
                BinOp::Div,
                inner(self, depth - 1),
                num(self.rng.gen_range(1..10)),
            ),
            _ => {
                let p = self.poly(depth - 1);
                let x = inner(self, depth - 1);
                if sort != Sort::Poly && self.rng.gen_bool(0.5) {
                    bin(BinOp::Mul, x, p)
                } else {
                    bin(BinOp::Mul, p, x)
                }
            }
        })
    }

    fn poly(&mut self, depth: u32) -> Expr {
        if depth > 0 && self.rng.gen_bool(0.5) {
            if self.rng.gen_bool(0.2) {
                let base = self.poly(depth - 1);
                return e(Node::Pow(Box::new(base), self.rng.gen_range(0..4)));
            }
            if let Some(x) = self.wrap(depth, Sort::Poly, |g, d| g.poly(d)) {
                return x;
            }
        }
        match self.rng.gen_range(0..4) {
            0 => num(self.rng.gen_range(0..20)),
            1 => self.named(Sort::Poly).unwrap_or_else(|| num(1)),
            _ => {
                let c = self.coord();
                e(Node::Name(c))
            }
        }
    }

    fn form(&mut self, deg: usize, depth: u32) -> Expr {
        if deg == 0 {
            return self.poly(depth);
        }
        let n = self.dim();
        if depth > 0 {
            match self.rng.gen_range(0..8) {
                0 | 1 => {
                    if let Some(x) = self.wrap(depth, Sort::Form(deg), |g, d| g.form(deg, d)) {
                        return x;
                    }
                }
                2 => {
                    let p = self.rng.gen_range(1..=deg);
                    let (a, b) = (self.form(p, depth - 1), self.form(deg - p, depth - 1));
                    if deg - p > 0 {
                        return bin(BinOp::Wedge, a, b);
                    }
                }
                3 => {
                    let inner = self.form(deg - 1, depth - 1);
                    return e(Node::Call(Func::D, vec![inner]));
                }
                4 if deg < n => {
                    let p = self.rng.gen_range(1..=n - deg);
                    let (u, a) = (self.mv(p, depth - 1), self.form(deg + p, depth - 1));
                    return e(Node::Call(Func::Interior, vec![u, a]));
                }
                5 if deg < n => {
                    let p = self.rng.gen_range(1..=n - deg + 1);
                    let (u, a) = (self.mv(p, depth - 1), self.form(deg + p - 1, depth - 1));
                    return e(Node::Call(Func::Lie, vec![u, a]));
                }
                _ => {}
            }
        }
        if let Some(x) = self
            .named(Sort::Form(deg))
            .filter(|_| self.rng.gen_bool(0.5))
        {
            return x;
        }
        let mut out = e(Node::Name(format!("d{}", self.coord())));
        let mut picked = Vec::new();
        for _ in 1..deg {
            let c = self
                .coords
                .iter()
                .filter(|c| !picked.contains(*c))
                .cloned()
                .collect::<Vec<_>>()
                .choose(self.rng)
                .cloned()
                .expect("degree within chart");
            picked.push(c.clone());
            out = bin(BinOp::Wedge, out, e(Node::Name(format!("d{c}"))));
        }
        out
    }

    fn mv(&mut self, deg: usize, depth: u32) -> Expr {
        if deg == 0 {
            return self.poly(depth);
        }
        if depth > 0 {
            match self.rng.gen_range(0..6) {
                0 | 1 => {
                    if let Some(x) = self.wrap(depth, Sort::Mv(deg), |g, d| g.mv(deg, d)) {
                        return x;
                    }
                }
                2 if deg >= 2 => {
                    let p = self.rng.gen_range(1..deg);
                    let (a, b) = (self.mv(p, depth - 1), self.mv(deg - p, depth - 1));
                    return bin(BinOp::Wedge, a, b);
                }
                3 => {
                    let p = self.rng.gen_range(1..=deg);
                    let (a, b) = (self.mv(p, depth - 1), self.mv(deg + 1 - p, depth - 1));
                    return e(Node::Call(Func::Sn, vec![a, b]));
                }
                _ => {}
            }
        }
        if let Some(x) = self.named(Sort::Mv(deg)).filter(|_| self.rng.gen_bool(0.5)) {
            return x;
        }
        let mut out = e(Node::Partial(self.coord()));
        for _ in 1..deg {
            out = bin(BinOp::Wedge, out, e(Node::Partial(self.coord())));
        }
        out
    }

    fn of_sort(&mut self, sort: Sort, depth: u32) -> Expr {
        match sort {
            Sort::Poly => self.poly(depth),
            Sort::Form(d) => self.form(d, depth),
            Sort::Mv(d) => self.mv(d, depth),
            Sort::Section(p, q) => {
                let (u, a) = (self.mv(p, depth), self.form(q, depth));
                e(Node::Pair(Box::new(u), Box::new(a)))
            }
            Sort::Observable | Sort::Hamiltonian | Sort::Candidate => {
                self.named(sort).expect("declared before use")
            }
        }
    }

    fn directive(&mut self, name: &str, args: Vec<Expr>) -> Directive {
        Directive {
            name: name.to_string(),
            args,
            within: None,
            options: Vec::new(),
        }
    }

    fn statement(&mut self) -> Decl {
        let n = self.dim();
        let depth = self.rng.gen_range(0..4);
        match self.rng.gen_range(0..14) {
            0 => {
                let name = self.fresh("f");
                let expr = self.poly(depth);
                self.names.push((name.clone(), Sort::Poly));
                Decl::Poly { name, expr }
            }
            1 | 2 => {
                let degree = self.rng.gen_range(1..=n);
                let name = self.fresh("om");
                let expr = self.form(degree, depth);
                self.names.push((name.clone(), Sort::Form(degree)));
                Decl::Form { degree, name, expr }
            }
            3 => {
                let deg = self.rng.gen_range(1..=n);
                let name = self.fresh("m");
                let expr = self.mv(deg, depth);
                self.names.push((name.clone(), Sort::Mv(deg)));
                Decl::Mv { name, expr }
            }
            4 => {
                let deg = self.rng.gen_range(1..=n);
                let count = self.rng.gen_range(1..4);
                let forms = (0..count).map(|_| self.form(deg, depth)).collect();
                Decl::Span {
                    name: self.fresh("S"),
                    forms,
                }
            }
            5 if n >= 2 => {
                let deg = self.rng.gen_range(2..=n);
                let expr = self.form(deg, depth);
                if self.rng.gen_bool(0.5) {
                    Decl::Poisson {
                        name: self.fresh("P"),
                        omega: expr,
                    }
                } else {
                    Decl::Dirac {
                        name: self.fresh("D"),
                        spec: DiracSpec::Graph(expr),
                    }
                }
            }
            6 => {
                let k = self.rng.gen_range(1..=n);
                let count = self.rng.gen_range(1..3);
                let sections = (0..count)
                    .map(|_| self.of_sort(Sort::Section(1, k), depth))
                    .collect();
                Decl::Dirac {
                    name: self.fresh("D"),
                    spec: DiracSpec::LevelOne { k, sections },
                }
            }
            7 => {
                let deg = self.rng.gen_range(0..=n);
                let arg = self.form(deg, depth);
                let name = *["closed", "exact"].choose(self.rng).expect("nonempty");
                Decl::Check(self.directive(name, vec![arg]))
            }
            8 => {
                let sort = *[
                    Sort::Poly,
                    Sort::Form(self.rng.gen_range(1..=n)),
                    Sort::Mv(self.rng.gen_range(1..=n)),
                ]
                .choose(self.rng)
                .expect("nonempty");
                let (a, b) = (self.of_sort(sort, depth), self.of_sort(sort, depth));
                Decl::Check(self.directive("equal", vec![a, b]))
            }
            9 => {
                let degs: Vec<usize> = (0..3).map(|_| self.rng.gen_range(1..=n.min(3))).collect();
                let mut args: Vec<Expr> = degs.iter().map(|&d| self.mv(d, depth)).collect();
                if self.rng.gen_bool(0.5) {
                    let q = self.rng.gen_range(0..=n);
                    args.push(self.form(q, depth));
                }
                Decl::Check(self.directive("sn-identities", args))
            }
            10 => {
                let p = self.rng.gen_range(1..=n);
                let q = self.rng.gen_range(1..=n + 1 - p);
                let (a, b) = (self.mv(p, depth), self.mv(q, depth));
                Decl::Compute(self.directive("sn", vec![a, b]))
            }
            11 => {
                let p = self.rng.gen_range(1..=n);
                let u = self.mv(p, depth);
                let q = self.rng.gen_range(p..=n);
                let a = self.form(q, depth);
                let name = *["interior", "lie"].choose(self.rng).expect("nonempty");
                Decl::Compute(self.directive(name, vec![u, a]))
            }
            12 => {
                let k = self.rng.gen_range(1..=n);
                let p = self.rng.gen_range(1..=k);
                let s = self.of_sort(Sort::Section(p, k + 1 - p), depth);
                let q = self.rng.gen_range(1..=k);
                let t = self.of_sort(Sort::Section(q, k + 1 - q), depth);
                let name = *["pairing", "courant"].choose(self.rng).expect("nonempty");
                Decl::Compute(self.directive(name, vec![s, t]))
            }
            _ => {
                let name = *[
                    "sn-suite",
                    "graph-suite",
                    "linear-roundtrip",
                    "auxiliary-lemma",
                ]
                .choose(self.rng)
                .expect("nonempty");
                let mut d = self.directive(name, Vec::new());
                d.options.push(("dim".into(), self.rng.gen_range(2..6)));
                if name == "linear-roundtrip" || name == "auxiliary-lemma" {
                    d.options.push(("order".into(), self.rng.gen_range(1..4)));
                }
                Decl::Check(d)
            }
        }
    }
}

impl<R: Rng> Gen<'_, R> {
    /// Declarations and directives that need a field chart with base dimension `n`
    /// and fiber dimension `m`.
    fn field_statement(&mut self, n: usize, m: usize, quotient: &[String]) -> Decl {
        let depth = self.rng.gen_range(0..3);
        let full = std::mem::replace(&mut self.coords, quotient.to_vec());
        let pick =
            |g: &mut Self, sort: Sort| g.names.iter().filter(|(_, s)| *s == sort).count() > 0;
        let decl = match self.rng.gen_range(0..6) {
            0 => {
                let name = self.fresh("obs");
                let expr = self.form(n - 1, depth);
                self.names.push((name.clone(), Sort::Observable));
                Decl::Observable { name, expr }
            }
            1 => {
                let name = self.fresh("h");
                let expr = self.poly(depth);
                self.names.push((name.clone(), Sort::Hamiltonian));
                Decl::Hamiltonian { name, expr }
            }
            2 => {
                self.coords = self.coords[..n].to_vec();
                let name = self.fresh("psi");
                let components = (0..m + n * m).map(|_| self.poly(depth)).collect();
                self.names.push((name.clone(), Sort::Candidate));
                Decl::Section { name, components }
            }
            3 if pick(self, Sort::Candidate) && pick(self, Sort::Hamiltonian) => {
                let args = vec![
                    self.named(Sort::Candidate).expect("checked"),
                    self.named(Sort::Hamiltonian).expect("checked"),
                ];
                let name = *["hdw", "residuals"].choose(self.rng).expect("nonempty");
                let d = self.directive(name, args);
                if name == "hdw" {
                    Decl::Check(d)
                } else {
                    Decl::Compute(d)
                }
            }
            4 if pick(self, Sort::Observable) && pick(self, Sort::Hamiltonian) => {
                let a = self.named(Sort::Observable).expect("checked");
                let h = self.named(Sort::Hamiltonian).expect("checked");
                if self.rng.gen_bool(0.5) {
                    Decl::Check(self.directive("conserved", vec![a, h]))
                } else {
                    Decl::Compute(self.directive("bracket", vec![a, h]))
                }
            }
            5 if pick(self, Sort::Observable) => {
                let a = self.named(Sort::Observable).expect("checked");
                let b = self.named(Sort::Observable).expect("checked");
                let eta = self.form(n, depth);
                Decl::Check(self.directive("antirep", vec![a, b, eta]))
            }
            _ => {
                self.coords = full.clone();
                let deg = self.rng.gen_range(1..=3);
                let expr = self.form(deg, depth);
                Decl::Check(self.directive("closed", vec![expr]))
            }
        };
        self.coords = full;
        decl
    }
}

/// A document with random declarations and directives over either a coordinate
/// chart or a field chart. Every name is declared before use and every degree
/// is consistent.
pub fn document<R: Rng>(rng: &mut R) -> Document {
    let field = rng.gen_bool(0.25);
    let (chart, coords) = if field {
        let (n, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let names = gradedirac_core::field_theory::FieldChart::new(n, m)
            .expect("small chart")
            .names();
        (
            Decl::Chart {
                name: "Z".into(),
                spec: ChartSpec::Field { n, m },
            },
            names,
        )
    } else {
        let n = rng.gen_range(1..=COORDS.len());
        let coords: Vec<String> = COORDS[..n].iter().map(|s| s.to_string()).collect();
        (
            Decl::Chart {
                name: format!("R{n}"),
                spec: ChartSpec::Coordinates(coords.clone()),
            },
            coords,
        )
    };
    let mut g = Gen {
        rng,
        coords: coords.clone(),
        names: Vec::new(),
        counter: 0,
    };
    let mut stmts = vec![Stmt {
        decl: chart.clone(),
        pos: Pos::default(),
    }];
    let count = g.rng.gen_range(1..12);
    for _ in 0..count {
        let decl = match &chart {
            Decl::Chart {
                spec: ChartSpec::Field { n, m },
                ..
            } if g.rng.gen_bool(0.6) => {
                let quotient = coords[..coords.len() - 1].to_vec();
                g.field_statement(*n, *m, &quotient)
            }
            _ => g.statement(),
        };
        stmts.push(Stmt {
            decl,
            pos: Pos::default(),
        });
    }
    Document { stmts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::printer::print_document;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_documents_parse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let doc = document(&mut rng);
            let text = print_document(&doc);
            let parsed = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(parsed, doc, "{text}");
        }
    }
}
