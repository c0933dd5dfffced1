//! Number rendering for CSV output: 17 significant digits, plain decimal.

use coulomb_core::ExtendedReal;

/// `x` with 17 significant digits in decimal notation (no exponent).
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // the exponent of the correctly rounded 17-digit form
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (16 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

pub fn ext(a: ExtendedReal) -> String {
    match a {
        ExtendedReal::Finite(x) => num(x),
        ExtendedReal::Infinite => "inf".into(),
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Joins fields with commas and terminates with LF.
pub fn row<I: IntoIterator<Item = String>>(fields: I) -> String {
    let mut s = fields.into_iter().collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}
