//! Fixed-precision rendering for exported tables.
//!
//! Values are rounded half-to-even on their exact binary value, so `0.125`
//! renders as `0.12` at two places while `0.135` (stored slightly above the
//! tie) renders as `0.14`. The standard formatter already rounds this way;
//! these helpers pin the behavior and the placeholder for undefined cells.

/// Decimal places used for indicator columns.
pub const INDICATOR_DECIMALS: usize = 2;
/// Decimal places used for elasticity columns.
pub const QQE_DECIMALS: usize = 3;
/// Cell text for undefined values in elasticity tables.
pub const UNDEFINED: &str = "-";

pub fn fixed(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    // Avoid "-0.00" for tiny negatives.
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn fixed_or(value: Option<f64>, decimals: usize, undefined: &str) -> String {
    value.map_or_else(|| undefined.to_string(), |v| fixed(v, decimals))
}
