//! Shortest-faithful number formatting for the mesh file writers.
//!
//! All writers format coordinates with 12 significant digits in the C
//! `%.12g` style. Re-parsing a formatted value and formatting it again is
//! byte-stable, which is what the write/read/write round-trip tests pin down.

/// Format with `sig` significant digits, `%g`-style: fixed point for
/// moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn fmt_g(x: f64, sig: usize) -> String {
    debug_assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= sig as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let prec = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", prec, x)).to_string()
    }
}

/// The writers' default: 12 significant digits.
pub fn fmt_g12(x: f64) -> String {
    fmt_g(x, 12)
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
    fn plain_values() {
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(-0.0), "0");
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(-31.0), "-31");
        assert_eq!(fmt_g12(0.5), "0.5");
        assert_eq!(fmt_g12(62.0 / 56.0), "1.10714285714");
    }

    #[test]
    fn extreme_values_go_scientific() {
        assert_eq!(fmt_g12(1.5e-7), "1.5e-7");
        assert_eq!(fmt_g12(1e15), "1e15");
        assert_eq!(fmt_g12(-2.25e13), "-2.25e13");
    }

    #[test]
    fn decade_promotion_is_consistent() {
        // rounds up into the next decade; fixed/scientific choice must follow
        // the rounded exponent
        assert_eq!(fmt_g(0.99999999999999, 12), "1");
        assert_eq!(fmt_g(9.9999e11, 4), "1e12");
    }

    #[test]
    fn format_parse_format_is_stable() {
        let mut rng = ionmesh_core::math::SplitMix64::new(0xF0);
        for _ in 0..20_000 {
            let x = (rng.next_f64() - 0.5) * 10f64.powi((rng.next_u64() % 20) as i32 - 8);
            let once = fmt_g12(x);
            let back: f64 = once.parse().unwrap();
            assert_eq!(fmt_g12(back), once, "unstable for {x:e}");
        }
    }
}
