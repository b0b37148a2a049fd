//! Parsing group descriptions and writing reports.

mod dsl;
mod emit;

pub use dsl::{parse, parse_element, render, render_element, ParseError, Rendered, MAX_REPEAT};
pub use emit::{emit, emit_json, emit_text, parse_report, Format};
