//! Small numerical helpers shared across modules.

use crate::error::{Error, Result};

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them be zero).
/// Stops when the bracket is narrower than `rel_tol * max(|lo|, |hi|)` or
/// after 400 halvings.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::NumericFailure(format!(
            "root not bracketed on [{lo:e}, {hi:e}] (f = {f_lo:e}, {f_hi:e})"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * lo.abs().max(hi.abs()) || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Returns an error unless `values` is non-increasing.
pub(crate) fn require_non_increasing(values: &[f64], what: &str) -> Result<()> {
    if let Some(k) = values.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument(format!(
            "{what} must be non-increasing, but entry {} exceeds entry {}",
            k + 2,
            k + 1
        )));
    }
    Ok(())
}

/// Formats `x` like C's `%.{sig}g`: `sig` significant digits, trailing zeros
/// removed, exponent notation outside `1e-4 <= |x| < 10^sig`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NumericFailure(_))
        ));
    }

    #[test]
    fn sig_formatting_matches_printf_g() {
        assert_eq!(format_sig(0.10132118364233778, 9), "0.101321184");
        assert_eq!(format_sig(1.0, 9), "1");
        assert_eq!(format_sig(-2.5e-7, 9), "-2.5e-07");
        assert_eq!(format_sig(123456789012.0, 9), "1.23456789e+11");
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(1e-5, 3), "1e-05");
        assert_eq!(format_sig(0.0001, 3), "0.0001");
    }
}
