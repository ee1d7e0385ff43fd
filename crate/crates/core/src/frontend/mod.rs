//! Text input, principal-part normalization, reports and the command line.

pub mod cli;
pub mod normalize;
pub mod parser;
pub mod report;

pub use cli::{run_cli, CliOutput};
pub use normalize::{normalize_principal_part, Normalized};
pub use parser::{parse_param_expression, parse_system, print_system, ParseError, SystemSource};
