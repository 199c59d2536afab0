use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{DenFactor, LaurentPoly, QFunction};
use crate::exactnum::format::{power, terms};
use crate::exactnum::rational::Rational;
use crate::exactnum::QPoly;

fn minus(unicode: bool) -> &'static str {
    if unicode {
        "−"
    } else {
        "-"
    }
}

/// Scalar coefficients of a Laurent polynomial over the point ring.
fn scalar_terms(p: &LaurentPoly) -> Vec<(i64, Rational)> {
    p.terms()
        .map(|(e, c)| (e, c.scalar_part().clone()))
        .collect()
}

/// Content with the sign of the lowest-order term, so the primitive part
/// starts with a positive coefficient.
fn content(coeffs: &[(i64, Rational)]) -> Rational {
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for (_, c) in coeffs {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    let c = Rational::new(num, den);
    match coeffs.first() {
        Some((_, lead)) if lead.is_negative() => -c,
        _ => c,
    }
}

fn render_numerator(coeffs: &[(i64, Rational)], wrap: bool, unicode: bool) -> String {
    if coeffs.is_empty() {
        return "0".into();
    }
    let c = content(coeffs);
    let prim: Vec<(i64, Rational)> = coeffs.iter().map(|(e, a)| (*e, a / &c)).collect();
    let body = terms(prim.iter().map(|(e, a)| (*e, a)), "q", unicode);
    let single_one = prim.len() == 1 && prim[0].0 == 0;
    if single_one {
        return render_rational(&c, unicode);
    }
    let multi = prim.len() > 1;
    if c.is_one() {
        if wrap && multi {
            format!("({body})")
        } else {
            body
        }
    } else if !multi {
        // a single monomial needs no parentheses
        if (-&c).is_one() {
            format!("{}{body}", minus(unicode))
        } else {
            format!("{}{body}", render_rational(&c, unicode))
        }
    } else if (-&c).is_one() {
        format!("{}({body})", minus(unicode))
    } else {
        format!("{}({body})", render_rational(&c, unicode))
    }
}

fn render_rational(c: &Rational, unicode: bool) -> String {
    if c.is_negative() {
        format!("{}{}", minus(unicode), -c)
    } else {
        c.to_string()
    }
}

fn render_den_factor(f: &DenFactor, unicode: bool) -> String {
    let c = f.unit.scalar_part();
    let base = {
        let lin = power("q", f.power as i64, unicode);
        let sign = if c.is_negative() { "+" } else { minus(unicode) };
        let a = c.abs();
        if a.is_one() {
            format!("(1{sign}{lin})")
        } else {
            format!("(1{sign}{a}{lin})")
        }
    };
    match (f.mult, unicode) {
        (1, _) => base,
        (m, true) => format!("{base}{}", crate::exactnum::format::superscript(m as i64)),
        (m, false) => format!("{base}^{m}"),
    }
}

fn to_qpoly(coeffs: &[(i64, Rational)], shift: i64) -> QPoly {
    let top = coeffs.iter().map(|(e, _)| e + shift).max().unwrap_or(0);
    let mut v = vec![Rational::zero(); top as usize + 1];
    for (e, c) in coeffs {
        v[(e + shift) as usize] += c;
    }
    QPoly::new(v)
}

impl QFunction {
    /// Reduced-fraction string for functions over the point ring, e.g.
    /// `2875(1−3q)/(1−q)²`. Returns `None` for nontrivial coefficient rings.
    pub fn reduced_string(&self, unicode: bool) -> Option<String> {
        if self.spec().rank() != 1 {
            return None;
        }
        let c = self.cancel();
        let num = scalar_terms(&c.num);
        if c.den.is_empty() || num.is_empty() {
            return Some(render_numerator(&num, false, unicode));
        }
        // cancel() only removes whole factors; check nothing else is shared
        let shift = num.first().map_or(0, |(e, _)| (-e).max(0));
        let n = to_qpoly(&num, shift);
        let d = to_qpoly(&scalar_terms(&c.denominator_poly()), 0);
        let g = n.gcd(&d);
        if g.degree() == Some(0) {
            let den: String = c
                .den
                .iter()
                .map(|f| render_den_factor(f, unicode))
                .collect();
            return Some(format!("{}/{}", render_numerator(&num, true, unicode), den));
        }
        let (n, _) = n.div_rem(&g);
        let (d, _) = d.div_rem(&g);
        let lead = d.coeff(0);
        let n = n.scale(&lead.recip());
        let d = d.scale(&lead.recip());
        let num: Vec<(i64, Rational)> = n
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 - shift, c.clone()))
            .collect();
        let den_terms: Vec<(i64, Rational)> = d
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c.clone()))
            .collect();
        Some(format!(
            "{}/({})",
            render_numerator(&num, true, unicode),
            terms(den_terms.iter().map(|(e, c)| (*e, c)), "q", unicode)
        ))
    }
}

impl fmt::Display for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.reduced_string(false) {
            return f.write_str(&s);
        }
        let num: Vec<String> = self
            .num
            .terms()
            .map(|(e, c)| match e {
                0 => format!("({c})"),
                _ => format!("({c})*{}", power("q", e, false)),
            })
            .collect();
        let num = if num.is_empty() {
            "0".to_string()
        } else {
            num.join(" + ")
        };
        if self.den.is_empty() {
            return f.write_str(&num);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|d| {
                let base = format!("(1 - ({})*{})", d.unit, power("q", d.power as i64, false));
                if d.mult == 1 {
                    base
                } else {
                    format!("{base}^{}", d.mult)
                }
            })
            .collect();
        write!(f, "[{num}] / [{}]", den.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{RingElement, RingSpec};

    fn scalar_q(c: &[i64], den: &[(i64, u32, u32)]) -> QFunction {
        let s = RingSpec::point();
        let num = LaurentPoly::from_terms(
            &s,
            c.iter()
                .enumerate()
                .map(|(i, &x)| (i as i64, RingElement::from_int(&s, x))),
        )
        .unwrap();
        let den = den
            .iter()
            .map(|&(u, r, m)| DenFactor::new(RingElement::from_int(&s, u), r, m).unwrap())
            .collect();
        QFunction::new(num, den).unwrap()
    }

    #[test]
    fn reduced_strings() {
        let f = scalar_q(&[2875, -8625], &[(1, 1, 2)]);
        assert_eq!(f.reduced_string(true).unwrap(), "2875(1−3q)/(1−q)²");
        assert_eq!(f.reduced_string(false).unwrap(), "2875(1-3q)/(1-q)^2");
        let g = scalar_q(&[0, 0, 32, 32], &[(1, 1, 4)]);
        assert_eq!(g.reduced_string(true).unwrap(), "32(q²+q³)/(1−q)⁴");
        // (1-q)(1-3q)/(1-q)^3 cancels to the same string
        let h = scalar_q(&[2875, -4 * 2875, 3 * 2875], &[(1, 1, 3)]);
        assert_eq!(h.reduced_string(true).unwrap(), "2875(1−3q)/(1−q)²");
        assert_eq!(scalar_q(&[5], &[]).reduced_string(true).unwrap(), "5");
        assert_eq!(
            scalar_q(&[0, -5750], &[(1, 1, 2)])
                .reduced_string(true)
                .unwrap(),
            "−5750q/(1−q)²"
        );
        assert_eq!(
            scalar_q(&[0, 0, 1], &[(1, 1, 4)])
                .reduced_string(false)
                .unwrap(),
            "q^2/(1-q)^4"
        );
        assert_eq!(
            scalar_q(&[], &[(1, 1, 1)]).reduced_string(true).unwrap(),
            "0"
        );
        assert_eq!(
            scalar_q(&[1], &[(-1, 1, 1)]).reduced_string(false).unwrap(),
            "1/(1+q)"
        );
    }

    #[test]
    fn partial_gcd_falls_back_to_expanded_form() {
        // (1+q)/(1-q^2) = 1/(1-q)
        let f = scalar_q(&[1, 1], &[(1, 2, 1)]);
        assert_eq!(f.reduced_string(false).unwrap(), "1/(1-q)");
    }
}
