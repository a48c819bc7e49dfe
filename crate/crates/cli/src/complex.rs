//! Complex literals of the form `±a±bi`: mandatory `i` suffix, no spaces,
//! `.` as decimal point. U+2212 is accepted as a minus sign.

use gcore::C64;

use crate::error::CliError;

/// Parses one literal such as `0.1+0.2i`, `-3e-2-1i` or `−0.3+0i`.
pub fn parse_complex(text: &str) -> Result<C64, String> {
    let s = text.replace('\u{2212}', "-");
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if s.chars().any(char::is_whitespace) {
        return Err(format!("complex literal '{text}' contains whitespace"));
    }
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| format!("complex literal '{text}' must end with 'i' (form a+bi)"))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(|| format!("complex literal '{text}' has no imaginary part (form a+bi)"))?;
    let re = parse_real(&body[..split]).ok_or_else(|| format!("invalid real part in '{text}'"))?;
    let im = parse_real(&body[split..]).ok_or_else(|| format!("invalid imaginary part in '{text}'"))?;
    Ok(C64::new(re, im))
}

/// Signed decimal with optional exponent; rejects `inf`, `nan` and bare signs.
fn parse_real(s: &str) -> Option<f64> {
    let digits = s.trim_start_matches(['+', '-']);
    if s.len() - digits.len() > 1 || !digits.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        return None;
    }
    if !digits.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-')) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Comma-separated list of literals; `context` prefixes error messages.
pub fn parse_outcome(text: &str, context: &str) -> Result<Vec<C64>, CliError> {
    text.split(',')
        .enumerate()
        .map(|(k, field)| {
            parse_complex(field).map_err(|e| CliError::Validation(format!("{context}: field {}: {e}", k + 1)))
        })
        .collect()
}
