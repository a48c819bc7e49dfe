//! Fixed-significant-digit decimal output.

use gcore::C64;

/// `digits` significant digits; fixed notation for exponents in
/// `[-5, digits)`, scientific otherwise.
pub fn sig(value: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let sci = format!("{:.*e}", digits - 1, value);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp).max(0) as usize, value)
    } else {
        sci
    }
}

/// `a+bi` in the input grammar.
pub fn complex(z: C64, digits: usize) -> String {
    let im = sig(z.im, digits);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", sig(z.re, digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(core::f64::consts::FRAC_1_PI, 12), "0.318309886184");
        assert_eq!(sig(0.1170996630486417, 12), "0.117099663049");
        assert_eq!(sig(123.456, 4), "123.5");
        assert_eq!(sig(9.9996, 4), "10.00");
        assert_eq!(sig(1.5e-9, 3), "1.50e-9");
        assert_eq!(sig(-2.0, 3), "-2.00");
        assert_eq!(sig(0.0, 12), "0");
    }

    #[test]
    fn complex_round_trips_through_parser() {
        let z = C64::new(-0.25, 1e-7);
        assert_eq!(crate::complex::parse_complex(&complex(z, 17)).unwrap(), z);
    }
}
