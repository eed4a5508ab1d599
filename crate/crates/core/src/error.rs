use alloc::string::String;

/// Errors raised by the kernel. Every variant names the offending quantities.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("chart mismatch: dimension {left} vs {right}")]
    ChartMismatch { left: usize, right: usize },

    #[error("degree {degree} out of range 0..={max} ({context})")]
    DegreeOutOfRange {
        degree: usize,
        max: usize,
        context: &'static str,
    },

    #[error("interior product of a {mv_degree}-vector into a {form_degree}-form")]
    InteriorDegree {
        mv_degree: usize,
        form_degree: usize,
    },

    #[error("Schouten-Nijenhuis bracket is undefined for degree-0 arguments")]
    ZeroDegreeBracket,

    #[error("homotopy operator applied to a 0-form")]
    HomotopyOnFunction,

    #[error("form is not closed: {0}")]
    NotClosed(String),

    #[error("precondition failed: {0}")]
    PreconditionFailure(String),

    #[error("form is not Hamiltonian: {0}")]
    NotHamiltonian(String),

    #[error("result does not descend to the quotient: {0}")]
    DescentFailure(String),

    #[error("variable index {index} exceeds the supported range")]
    VariableRange { index: usize },

    #[error("dimension {0} exceeds the supported maximum of 32")]
    DimensionTooLarge(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
