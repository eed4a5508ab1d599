//! Static kinds of expressions and the directive signatures checked at parse time.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Poly,
    Form(usize),
    Mv(usize),
    /// Section of `∨_p ⊕ Λ^{k+1−p}` of order `k`.
    Section {
        k: usize,
        p: usize,
    },
    Span(usize),
    /// Graded Poisson structure of order `k`.
    Poisson(usize),
    Dirac(usize),
    Observable,
    Hamiltonian,
    Candidate,
}

impl Kind {
    /// Degree-0 forms and multivectors are functions.
    pub fn form(d: usize) -> Kind {
        if d == 0 {
            Kind::Poly
        } else {
            Kind::Form(d)
        }
    }

    pub fn mv(d: usize) -> Kind {
        if d == 0 {
            Kind::Poly
        } else {
            Kind::Mv(d)
        }
    }

    /// Form degree, treating functions as 0-forms.
    pub fn form_degree(self) -> Option<usize> {
        match self {
            Kind::Poly => Some(0),
            Kind::Form(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_algebraic(self) -> bool {
        matches!(
            self,
            Kind::Poly | Kind::Form(_) | Kind::Mv(_) | Kind::Section { .. }
        )
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Poly => f.write_str("polynomial"),
            Kind::Form(d) => write!(f, "{d}-form"),
            Kind::Mv(d) => write!(f, "{d}-vector field"),
            Kind::Section { k, p } => write!(f, "section of level {p} and order {k}"),
            Kind::Span(d) => write!(f, "span of {d}-forms"),
            Kind::Poisson(k) => write!(f, "graded Poisson structure of order {k}"),
            Kind::Dirac(k) => write!(f, "graded Dirac structure of order {k}"),
            Kind::Observable => f.write_str("observable"),
            Kind::Hamiltonian => f.write_str("Hamiltonian"),
            Kind::Candidate => f.write_str("candidate section"),
        }
    }
}

/// Argument slot of a directive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Form of any degree, or a function.
    Form,
    Mv,
    Section,
    Span,
    Poisson,
    Dirac,
    Observable,
    Hamiltonian,
    Candidate,
    Any,
}

impl Slot {
    pub fn accepts(self, k: Kind) -> bool {
        match self {
            Slot::Form => k.form_degree().is_some(),
            Slot::Mv => matches!(k, Kind::Mv(_)),
            Slot::Section => matches!(k, Kind::Section { .. }),
            Slot::Span => matches!(k, Kind::Span(_)),
            Slot::Poisson => matches!(k, Kind::Poisson(_)),
            Slot::Dirac => matches!(k, Kind::Dirac(_)),
            Slot::Observable => k == Kind::Observable,
            Slot::Hamiltonian => k == Kind::Hamiltonian,
            Slot::Candidate => k == Kind::Candidate,
            Slot::Any => true,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Slot::Form => "a form",
            Slot::Mv => "a multivector field",
            Slot::Section => "a section (U, a)",
            Slot::Span => "a span",
            Slot::Poisson => "a Poisson structure",
            Slot::Dirac => "a Dirac structure",
            Slot::Observable => "an observable",
            Slot::Hamiltonian => "a Hamiltonian",
            Slot::Candidate => "a candidate section",
            Slot::Any => "an expression",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Signature {
    pub name: &'static str,
    pub required: &'static [Slot],
    pub optional: &'static [Slot],
    /// Whether `in NAME` is allowed, and whether it is required.
    pub within: Within,
    pub options: &'static [&'static str],
    /// Needs the canonical field chart.
    pub field: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Within {
    No,
    Optional,
    Required,
}

const fn sig(name: &'static str, required: &'static [Slot]) -> Signature {
    Signature {
        name,
        required,
        optional: &[],
        within: Within::No,
        options: &[],
        field: false,
    }
}

use Slot::*;

pub const CHECKS: &[Signature] = &[
    sig("closed", &[Form]),
    sig("exact", &[Form]),
    Signature {
        within: Within::Required,
        options: &["bound"],
        ..sig("hamiltonian", &[Form])
    },
    sig("weak-lagrangian", &[Dirac]),
    Signature {
        options: &["bound"],
        ..sig("involutive", &[Dirac])
    },
    Signature {
        options: &["degree", "cases"],
        ..sig("poisson-properties", &[Poisson])
    },
    Signature {
        options: &["bound"],
        ..sig("closed-sections", &[Span])
    },
    Signature {
        field: true,
        ..sig("antirep", &[Observable, Observable, Form])
    },
    Signature {
        field: true,
        ..sig("hdw", &[Candidate, Hamiltonian])
    },
    Signature {
        field: true,
        ..sig("conservation", &[Candidate, Observable, Hamiltonian])
    },
    Signature {
        field: true,
        ..sig("conserved", &[Observable, Hamiltonian])
    },
    sig("equal", &[Any, Any]),
    Signature {
        optional: &[Form],
        ..sig("sn-identities", &[Mv, Mv, Mv])
    },
    Signature {
        options: &["dim", "cases"],
        ..sig("sn-suite", &[])
    },
    Signature {
        options: &["dim", "cases"],
        ..sig("graph-suite", &[])
    },
    Signature {
        options: &["dim", "order", "cases"],
        ..sig("linear-roundtrip", &[])
    },
    Signature {
        options: &["dim", "order", "cases"],
        ..sig("auxiliary-lemma", &[])
    },
];

pub const COMPUTES: &[Signature] = &[
    sig("value", &[Any]),
    sig("d", &[Form]),
    sig("sn", &[Mv, Mv]),
    sig("lie", &[Mv, Form]),
    sig("interior", &[Mv, Form]),
    sig("pairing", &[Section, Section]),
    sig("courant", &[Section, Section]),
    Signature {
        within: Within::Optional,
        options: &["bound"],
        ..sig("bracket", &[Any, Any])
    },
    Signature {
        options: &["bound"],
        ..sig("closed-sections", &[Span])
    },
    sig("extend", &[Poisson]),
    sig("reconstruct", &[Poisson]),
    Signature {
        field: true,
        ..sig("field", &[Observable])
    },
    Signature {
        field: true,
        ..sig("residuals", &[Candidate, Hamiltonian])
    },
];

pub fn lookup(check: bool, name: &str) -> Option<&'static Signature> {
    let table = if check { CHECKS } else { COMPUTES };
    table.iter().find(|s| s.name == name)
}
