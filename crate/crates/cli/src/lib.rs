//! Expression DSL for the command-line interface: syntax trees, the
//! recursive-descent parser, and lowering to exact library values.

pub mod ast;
pub mod lower;
pub mod parse;
