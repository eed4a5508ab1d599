//! A small document language for graded Dirac and graded Poisson structures,
//! its evaluator and report format.

pub mod ast;
pub mod error;
pub mod generate;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod report;
pub mod runtime;
pub mod suites;
pub mod types;

pub use error::DslError;
pub use report::{Report, Status};
pub use runtime::{run, Mode, Options};

/// Parses and runs a document.
pub fn run_source(src: &str, opts: &Options) -> Result<Report, DslError> {
    let doc = parser::parse(src)?;
    run(&doc, opts)
}
