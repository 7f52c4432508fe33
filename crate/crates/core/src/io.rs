//! Text formats for distributions.
//!
//! Either one distribution per line as whitespace-separated decimals
//! (blank lines and `#` comments ignored), or JSON: a single array of
//! numbers or an array of such arrays.

use crate::{Distribution, Error, Result};

fn build(values: Vec<f64>, renormalize: bool) -> Result<Distribution> {
    if renormalize {
        Distribution::normalized(&values)
    } else {
        Distribution::new(values)
    }
}

/// Parses every distribution in `text`. With `renormalize`, rows are
/// treated as raw weights and divided by their sums.
pub fn parse_distributions(text: &str, renormalize: bool) -> Result<Vec<Distribution>> {
    let trimmed = text.trim_start();
    let rows: Vec<Vec<f64>> = if trimmed.starts_with('[') {
        let value: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        let nested = value
            .as_array()
            .is_some_and(|a| a.first().is_some_and(|v| v.is_array()));
        if nested {
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            vec![serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?]
        }
    } else {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|tok| {
                        tok.parse::<f64>()
                            .map_err(|_| Error::Parse(format!("bad number {tok:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?
    };
    if rows.is_empty() {
        return Err(Error::Parse("no distributions found".into()));
    }
    rows.into_iter().map(|r| build(r, renormalize)).collect()
}

/// Formats a distribution as one line of the text format.
pub fn format_distribution(p: &Distribution) -> String {
    p.probs()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
