//! Fixed numeric formats used by every CSV writer.

/// Formats `x` with `digits` significant digits, trimming trailing zeros,
/// switching to exponent notation outside `[1e-5, 10^digits)`.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
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

/// Twelve significant digits, the default for metric and volume tables.
pub fn real(x: f64) -> String {
    format_sig(x, 12)
}

/// Three decimal places with negative zero folded to zero.
pub fn fixed3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}
