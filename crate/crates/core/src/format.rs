//! Fixed-significant-digit number rendering for reports and CSV.

/// Renders `x` with `digits` significant digits. Plain decimal notation is
/// used for decimal exponents in `-5..=15`, scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// Full precision used in CSV output.
pub fn full(x: f64) -> String {
    sig(x, 17)
}

/// Precision used in human-readable reports.
pub fn short(x: f64) -> String {
    sig(x, 10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_significant_digits() {
        assert_eq!(short(11f64.log2()), "3.459431619");
        assert_eq!(sig(0.25, 3), "0.250");
        assert_eq!(sig(1234.5678, 6), "1234.57");
        assert_eq!(sig(0.0, 17), "0");
        assert_eq!(sig(1e-9, 3), "1.00e-9");
        assert_eq!(sig(-2.5, 2), "-2.5");
    }

    proptest::proptest! {
        #[test]
        fn full_precision_round_trips(x in -1e6f64..1e6) {
            let back: f64 = full(x).parse().unwrap();
            proptest::prop_assert_eq!(back, x);
        }
    }
}
