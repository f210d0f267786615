//! Exact rational helpers: decimal parsing and fixed-point rendering.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact distance values and thresholds.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a decimal or fraction: `{0}`")]
pub struct ParseDecimalError(String);

/// Parses `0.035`, `3`, `-1.5` or `7/200` exactly.
pub fn parse_decimal(text: &str) -> Result<Rational, ParseDecimalError> {
    let err = || ParseDecimalError(text.to_string());
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| err())?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 15 {
        return Err(err());
    }
    let int: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| err())?
    };
    let scale = 10i64.pow(frac_part.len() as u32);
    let frac: i64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| err())?
    };
    let numer = int
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac))
        .ok_or_else(err)?;
    let value = Rational::new(numer, scale);
    Ok(if negative { -value } else { value })
}

/// Renders `value` with exactly `places` decimals, rounding half away from zero.
pub fn format_decimal(value: &Rational, places: u32) -> String {
    let scale = 10i128.pow(places);
    let numer = *value.numer() as i128;
    let denom = *value.denom() as i128;
    let scaled = numer.abs() * scale;
    let mut q = scaled / denom;
    if (scaled % denom) * 2 >= denom {
        q += 1;
    }
    let sign = if value.is_negative() && !(q.is_zero()) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{q}");
    }
    let int = q / scale;
    let frac = q % scale;
    format!("{sign}{int}.{frac:0width$}", width = places as usize)
}

/// Lossy conversion for display and heuristics only.
pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}
