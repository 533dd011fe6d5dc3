//! Fixed-width number formatting for machine-readable output.
//!
//! Every float prints with exactly 12 significant digits (positional when
//! the exponent allows, scientific otherwise); shortest-roundtrip printing
//! is deliberately avoided so golden outputs stay byte-identical across
//! platforms. No locale is consulted.

/// 12-significant-digit rendering of a float.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let neg = x < 0.0;
    let sci = format!("{:.11e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 12);
    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let int = &digits[..split];
            let frac = &digits[split..];
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("0.{zeros}{digits}")
        }
    } else {
        format!("{mant}e{exp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// JSON-safe rendering: infinities become quoted strings.
pub fn sig12_json(x: f64) -> String {
    if x.is_infinite() {
        format!("\"{}\"", sig12(x))
    } else {
        sig12(x)
    }
}

pub fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}
