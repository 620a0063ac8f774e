//! SLCO abstract syntax, textual parser, pretty printer and validator.

pub mod ast;
mod diagnostic;
mod lexer;
mod parser;
mod printer;
mod validate;

pub use ast::*;
pub use diagnostic::{Diagnostic, Diagnostics, Severity};
pub use lexer::is_keyword;
pub use parser::{parse_expression, parse_model};
pub use printer::{expr_to_string, print_model};
pub use validate::validate_model;

/// Parses `text` and validates the result, returning all errors on failure.
pub fn load_model(text: &str) -> Result<Model, Diagnostics> {
    let model = parse_model(text)?;
    let errors: Vec<_> = validate_model(&model).into_iter().filter(Diagnostic::is_error).collect();
    if errors.is_empty() {
        Ok(model)
    } else {
        Err(Diagnostics(errors))
    }
}
