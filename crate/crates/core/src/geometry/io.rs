//! Plain-text coefficient files.
//!
//! ```text
//! # optional comment lines
//! radial,8
//! 0.75,0,0,...
//! ```
//!
//! The first non-comment line names the parameterization and the order `N`;
//! the second holds the `2N+1` coefficients in storage order.

use super::curves::Parameterization;
use super::fourier::TrigSeries;
use crate::{Error, Result};

pub fn format_coefficients(kind: Parameterization, series: &TrigSeries) -> String {
    let values: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
    format!(
        "{},{}\n{}\n",
        kind.as_str(),
        series.order(),
        values.join(",")
    )
}

pub fn parse_coefficients(text: &str) -> Result<(Parameterization, TrigSeries)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing coefficient header".into()))?;
    let (kind, order) = header
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("bad coefficient header `{header}`")))?;
    let kind: Parameterization = kind.parse()?;
    let order: usize = order
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad order in header `{header}`")))?;
    let body = lines
        .next()
        .ok_or_else(|| Error::Parse("missing coefficient line".into()))?;
    let coeffs = body
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coefficient `{v}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if coeffs.len() != 2 * order + 1 {
        return Err(Error::DimensionMismatch {
            expected: 2 * order + 1,
            got: coeffs.len(),
        });
    }
    Ok((kind, TrigSeries::new(coeffs)?))
}
