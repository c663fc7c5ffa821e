//! Number formatting for command output.

use serde_json::{Number, Value};

/// `%g`-style formatting with `digits` significant digits: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros removed.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
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

/// Human-readable number: 12 significant digits.
pub fn human(x: f64) -> String {
    sig(x, 12)
}

/// JSON number in fixed 12-significant-digit scientific notation, or
/// `null` for non-finite values.
pub fn json_num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{:.11e}", x);
    Value::Number(text.parse::<Number>().expect("valid JSON number"))
}

pub fn json_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_num(x)).collect())
}

pub fn json_rows<'a>(rows: impl Iterator<Item = &'a [f64]>) -> Value {
    Value::Array(rows.map(json_vec).collect())
}
