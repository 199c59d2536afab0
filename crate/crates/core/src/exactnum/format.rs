//! Text rendering of polynomials with exact coefficients.

use num_traits::{One, Signed, Zero};

use super::rational::Rational;

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

pub fn superscript(n: i64) -> String {
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for ch in n.unsigned_abs().to_string().chars() {
        s.push(SUPERSCRIPTS[ch.to_digit(10).unwrap() as usize]);
    }
    s
}

pub fn power(var: &str, e: i64, unicode: bool) -> String {
    match (e, unicode) {
        (1, _) => var.to_string(),
        (_, true) => format!("{var}{}", superscript(e)),
        (_, false) => format!("{var}^{e}"),
    }
}

fn minus(unicode: bool) -> &'static str {
    if unicode {
        "−"
    } else {
        "-"
    }
}

/// Renders `sum c_e var^e` in the order given.
pub fn terms<'a>(
    items: impl IntoIterator<Item = (i64, &'a Rational)>,
    var: &str,
    unicode: bool,
) -> String {
    let mut out = String::new();
    for (e, c) in items {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push_str(minus(unicode));
            }
        } else {
            out.push_str(if neg { minus(unicode) } else { "+" });
        }
        let a = c.abs();
        if e == 0 {
            out.push_str(&a.to_string());
        } else {
            if !a.is_one() {
                out.push_str(&a.to_string());
            }
            out.push_str(&power(var, e, unicode));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn poly_ascending(coeffs: &[Rational], var: &str, unicode: bool) -> String {
    terms(
        coeffs.iter().enumerate().map(|(i, c)| (i as i64, c)),
        var,
        unicode,
    )
}
