//! `#`-prefixed metadata headers for output files.
//!
//! The first line is the format stamp, the following comment lines hold the
//! resolved configuration as TOML so a run can be replayed from its output.

use std::fmt::Write as _;

pub const FORMAT_STAMP: &str = "# freebound-output 1";

pub fn metadata_header(config_toml: &str) -> String {
    let mut out = String::from(FORMAT_STAMP);
    out.push('\n');
    for line in config_toml.lines() {
        let _ = writeln!(out, "# {line}");
    }
    out
}

/// Recovers the configuration text embedded by [`metadata_header`], or
/// returns the input unchanged when it carries no header.
pub fn config_from_header(text: &str) -> String {
    let mut lines = text.lines();
    match lines.next() {
        Some(first) if first.trim_end() == FORMAT_STAMP => lines
            .take_while(|l| l.starts_with('#'))
            .map(|l| {
                let body = &l[1..];
                format!("{}\n", body.strip_prefix(' ').unwrap_or(body))
            })
            .collect(),
        _ => text.to_string(),
    }
}
