//! Canonical text form of a document. Parsing the output yields an equal document.

use std::fmt::Write;

use crate::ast::{ChartSpec, Decl, DiracSpec, Directive, Document, Expr, Node};

pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    for s in &doc.stmts {
        out.push_str(&print_decl(&s.decl));
        out.push('\n');
    }
    out
}

fn list(items: &[Expr]) -> String {
    items.iter().map(print_expr).collect::<Vec<_>>().join(", ")
}

pub fn print_decl(d: &Decl) -> String {
    match d {
        Decl::Chart { name, spec } => match spec {
            ChartSpec::Coordinates(c) => format!("chart {name} ({});", c.join(", ")),
            ChartSpec::Field { n, m } => format!("chart {name} field({n}, {m});"),
        },
        Decl::Form { degree, name, expr } => {
            format!("form a{degree} {name} = {};", print_expr(expr))
        }
        Decl::Mv { name, expr } => format!("mv {name} = {};", print_expr(expr)),
        Decl::Poly { name, expr } => format!("poly {name} = {};", print_expr(expr)),
        Decl::Span { name, forms } => format!("span {name} = <{}>;", list(forms)),
        Decl::Poisson { name, omega } => {
            format!("poisson {name} = multisymplectic({});", print_expr(omega))
        }
        Decl::Dirac { name, spec } => match spec {
            DiracSpec::Graph(w) => format!("dirac {name} = graph({});", print_expr(w)),
            DiracSpec::LevelOne { k, sections } => {
                format!("dirac {name} = generated({k}) [{}];", list(sections))
            }
        },
        Decl::Observable { name, expr } => format!("observable {name} = {};", print_expr(expr)),
        Decl::Hamiltonian { name, expr } => format!("hamiltonian {name} = {};", print_expr(expr)),
        Decl::Section { name, components } => format!("section {name} = [{}];", list(components)),
        Decl::Check(dir) => format!("check {};", print_directive(dir)),
        Decl::Compute(dir) => format!("compute {};", print_directive(dir)),
    }
}

pub fn print_directive(d: &Directive) -> String {
    let mut s = d.name.clone();
    if !d.args.is_empty() {
        s.push(' ');
        s.push_str(&list(&d.args));
    }
    if let Some(w) = &d.within {
        let _ = write!(s, " in {w}");
    }
    for (k, v) in &d.options {
        let _ = write!(s, " {k} {v}");
    }
    s
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_child(s: &mut String, e: &Expr, parens: bool) {
    if parens {
        s.push('(');
        write_expr(s, e);
        s.push(')');
    } else {
        write_expr(s, e);
    }
}

fn write_expr(s: &mut String, e: &Expr) {
    match &e.node {
        Node::Num(n) => {
            let _ = write!(s, "{n}");
        }
        Node::Name(n) => s.push_str(n),
        Node::Partial(n) => {
            s.push('@');
            s.push_str(n);
        }
        Node::Neg(a) => {
            s.push('-');
            write_child(s, a, a.precedence() < e.precedence());
        }
        Node::Pow(a, k) => {
            write_child(s, a, a.precedence() <= e.precedence());
            let _ = write!(s, "**{k}");
        }
        Node::Bin(op, a, b) => {
            let p = e.precedence();
            write_child(s, a, a.precedence() < p);
            match op.precedence() {
                1 => {
                    let _ = write!(s, " {} ", op.symbol());
                }
                _ => s.push_str(op.symbol()),
            }
            write_child(s, b, b.precedence() <= p);
        }
        Node::Call(f, args) => {
            s.push_str(f.name());
            s.push('(');
            s.push_str(&list(args));
            s.push(')');
        }
        Node::Pair(u, a) => {
            s.push('(');
            write_expr(s, u);
            s.push_str(", ");
            write_expr(s, a);
            s.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn round_trip(src: &str) -> String {
        let doc = parse(src).unwrap();
        let printed = print_document(&doc);
        assert_eq!(parse(&printed).unwrap(), doc, "{printed}");
        printed
    }

    #[test]
    fn canonical_spacing_and_parens() {
        let out = round_trip(
            "chart R4 (x,y,z,t);\nform a2 w=(dx+y*dz)^dt;\npoly f = -(x - y)**2 - -x/3;",
        );
        assert_eq!(
            out,
            "chart R4 (x, y, z, t);\nform a2 w = (dx + y*dz)^dt;\npoly f = -(x - y)**2 - -x/3;\n"
        );
    }

    #[test]
    fn right_operands_keep_grouping() {
        let out = round_trip("chart R (x, y);\npoly f = x - (y - x);\npoly g = (x**2)**3;");
        assert!(out.contains("x - (y - x)"));
        assert!(out.contains("(x**2)**3"));
    }

    #[test]
    fn directives_and_structures() {
        round_trip(
            "chart R3 (x, y, z);\nform a3 w = dx^dy^dz;\npoisson S = multisymplectic(w);\ndirac D = generated(1) [(@x, dy), (@y, -dx)];\ncheck hamiltonian x*dy in S bound 2;\ncompute bracket x*dy, z*dx in S;\ncheck sn-identities @x, x*@y, @x^@z;",
        );
    }
}
