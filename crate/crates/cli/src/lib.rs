//! Bundle format, expression text and command implementations behind the
//! `lca` binary.

pub mod bundle;
pub mod commands;
pub mod corpus;
pub mod expr;
pub mod json;

pub use bundle::{Bundle, InputError};
