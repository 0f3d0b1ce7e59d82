//! Unit-suffix parsing for radiometry flags: `1.767um2`, `10ms`, `550nm`.
//!
//! Values convert to base SI (m², s, m) at the flag boundary so the core
//! arithmetic never sees units. A bare number is taken in the base unit.
//! Suffixes are lowercase and matched longest-first.

use hyperlens::Error as CoreError;

fn parse_with_suffixes(
    text: &str,
    what: &'static str,
    suffixes: &[(&str, f64)],
) -> Result<f64, CoreError> {
    let bad = |message: String| CoreError::ParseError {
        token: text.to_string(),
        message,
    };
    let (number, scale) = suffixes
        .iter()
        .find_map(|(suffix, scale)| text.strip_suffix(suffix).map(|rest| (rest, *scale)))
        .unwrap_or((text, 1.0));
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| bad(format!("expected a {what} like {}", example(suffixes))))?;
    if !value.is_finite() {
        return Err(bad(format!("{what} must be finite")));
    }
    Ok(value * scale)
}

fn example(suffixes: &[(&str, f64)]) -> String {
    format!("`1.5{}`", suffixes[0].0)
}

/// Area in m². Suffixes: `um2`, `mm2`, `cm2`, `m2`; bare numbers are m².
pub fn parse_area(text: &str) -> Result<f64, CoreError> {
    parse_with_suffixes(
        text,
        "area",
        &[("um2", 1e-12), ("mm2", 1e-6), ("cm2", 1e-4), ("m2", 1.0)],
    )
}

/// Length in m. Suffixes: `nm`, `um`, `mm`, `cm`, `m`; bare numbers are m.
pub fn parse_length(text: &str) -> Result<f64, CoreError> {
    parse_with_suffixes(
        text,
        "length",
        &[("nm", 1e-9), ("um", 1e-6), ("mm", 1e-3), ("cm", 1e-2), ("m", 1.0)],
    )
}

/// Duration in s. Suffixes: `ns`, `us`, `ms`, `s`; bare numbers are s.
pub fn parse_duration(text: &str) -> Result<f64, CoreError> {
    parse_with_suffixes(
        text,
        "duration",
        &[("ns", 1e-9), ("us", 1e-6), ("ms", 1e-3), ("s", 1.0)],
    )
}
