//! CSV and record formatting.

use super::config::RunConfig;
use crate::error::Error;

pub const TOOL: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Shortest text that parses back to the identical `f64`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Row status for a per-point result.
pub fn status(err: Option<&Error>) -> &'static str {
    match err {
        None => "ok",
        Some(Error::Cancellation { .. }) => "cancellation",
        Some(Error::NonConvergence { .. }) => "nonconvergence",
        Some(Error::BracketEdge { .. }) => "bracket-edge",
        Some(Error::Domain(_)) => "domain",
        Some(Error::Config(_)) => "config",
        Some(Error::Io(_)) => "io",
    }
}

/// Comment lines above a CSV header or record body.
pub fn header(command: &str, extra: &[String], config: &RunConfig) -> String {
    let mut s = format!("# {TOOL} {command}\n");
    for line in extra {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    s.push_str(&config.echo());
    s
}
