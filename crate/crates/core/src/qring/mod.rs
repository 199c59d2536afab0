//! Rational functions of `q` over a coefficient ring, kept with factored
//! denominators `∏ (1 - c·q^r)^m`, and the split into the Laurent-polynomial
//! part `𝒦₊` and the proper part `𝒦₋`.

mod display;
mod laurent;

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffring::{adams, RingElement, RingSpec};
use crate::{Error, Result};

pub use laurent::LaurentPoly;

/// The factor `(1 - unit·q^power)^mult`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenFactor {
    pub unit: RingElement,
    pub power: u32,
    pub mult: u32,
}

impl DenFactor {
    pub fn new(unit: RingElement, power: u32, mult: u32) -> Result<Self> {
        if !unit.is_unit() {
            return Err(Error::NotUnit);
        }
        if power == 0 || mult == 0 {
            return Err(Error::Precondition {
                op: "DenFactor::new",
                msg: format!("power and multiplicity must be positive (got {power}, {mult})"),
            });
        }
        Ok(DenFactor { unit, power, mult })
    }

    fn same_base(&self, other: &DenFactor) -> bool {
        self.power == other.power && self.unit == other.unit
    }

    /// `1 - unit·q^power`
    pub fn base_poly(&self) -> LaurentPoly {
        LaurentPoly::one_minus(&self.unit, self.power as i64)
    }

    pub fn expand(&self) -> LaurentPoly {
        self.base_poly().pow(self.mult)
    }
}

/// A rational function `numerator / ∏ (1 - c_i q^{r_i})^{m_i}`.
#[derive(Clone, Debug)]
pub struct QFunction {
    num: LaurentPoly,
    den: Vec<DenFactor>,
}

fn push_factor(den: &mut Vec<DenFactor>, f: DenFactor) {
    match den.iter_mut().find(|g| g.same_base(&f)) {
        Some(g) => g.mult += f.mult,
        None => den.push(f),
    }
}

fn expand_all(den: &[DenFactor], spec: &Arc<RingSpec>) -> LaurentPoly {
    den.iter()
        .fold(LaurentPoly::one(spec), |acc, f| &acc * &f.expand())
}

/// Lowest common multiple of two factor multisets (per-base maximum).
fn lcm(a: &[DenFactor], b: &[DenFactor]) -> Vec<DenFactor> {
    let mut out: Vec<DenFactor> = a.to_vec();
    for f in b {
        match out.iter_mut().find(|g| g.same_base(f)) {
            Some(g) => g.mult = g.mult.max(f.mult),
            None => out.push(f.clone()),
        }
    }
    out
}

/// `big / small` as multisets; `small` must be contained in `big`.
fn cofactor(big: &[DenFactor], small: &[DenFactor]) -> Vec<DenFactor> {
    let mut out = Vec::new();
    for f in big {
        let used = small.iter().find(|g| g.same_base(f)).map_or(0, |g| g.mult);
        if f.mult > used {
            out.push(DenFactor {
                mult: f.mult - used,
                ..f.clone()
            });
        }
    }
    out
}

impl QFunction {
    pub fn new(num: LaurentPoly, den: Vec<DenFactor>) -> Result<Self> {
        let mut merged = Vec::new();
        for f in den {
            if f.unit.spec() != num.spec() {
                return Err(Error::RingMismatch(
                    num.spec().orders().to_vec(),
                    f.unit.spec().orders().to_vec(),
                ));
            }
            if !f.unit.is_unit() {
                return Err(Error::NotUnit);
            }
            push_factor(&mut merged, f);
        }
        Ok(QFunction { num, den: merged })
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        QFunction {
            num,
            den: Vec::new(),
        }
    }

    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        Self::from_poly(LaurentPoly::zero(spec))
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::from_poly(LaurentPoly::one(spec))
    }

    pub fn constant(c: RingElement) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `1 / (1 - unit·q^power)^mult`
    pub fn inverse_factor(unit: RingElement, power: u32, mult: u32) -> Result<Self> {
        let spec = unit.spec().clone();
        Self::new(
            LaurentPoly::one(&spec),
            vec![DenFactor::new(unit, power, mult)?],
        )
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        self.num.spec()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &[DenFactor] {
        &self.den
    }

    pub fn denominator_poly(&self) -> LaurentPoly {
        expand_all(&self.den, self.spec())
    }

    /// Total q-degree of the expanded denominator.
    pub fn denominator_degree(&self) -> i64 {
        self.den
            .iter()
            .map(|f| f.power as i64 * f.mult as i64)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.spec() != other.spec() {
            return Err(Error::RingMismatch(
                self.spec().orders().to_vec(),
                other.spec().orders().to_vec(),
            ));
        }
        Ok(())
    }

    /// Numerators of `self` and `other` over their common denominator.
    fn over_common(&self, other: &Self) -> (LaurentPoly, LaurentPoly, Vec<DenFactor>) {
        let l = lcm(&self.den, &other.den);
        let a = &self.num * &expand_all(&cofactor(&l, &self.den), self.spec());
        let b = &other.num * &expand_all(&cofactor(&l, &other.den), self.spec());
        (a, b, l)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let (a, b, den) = self.over_common(other);
        Ok(QFunction { num: &a + &b, den })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let (a, b, den) = self.over_common(other);
        Ok(QFunction { num: &a - &b, den })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut den = self.den.clone();
        for f in &other.den {
            push_factor(&mut den, f.clone());
        }
        Ok(QFunction {
            num: &self.num * &other.num,
            den,
        })
    }

    pub fn neg(&self) -> Self {
        QFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        QFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        QFunction {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QFunction {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    /// Divides by `(1 - unit·q^power)^mult`.
    pub fn div_factor(&self, f: DenFactor) -> Result<Self> {
        let mut den = self.den.clone();
        if f.unit.spec() != self.spec() {
            return Err(Error::RingMismatch(
                self.spec().orders().to_vec(),
                f.unit.spec().orders().to_vec(),
            ));
        }
        push_factor(&mut den, f);
        Ok(QFunction {
            num: self.num.clone(),
            den,
        })
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn cancel(&self) -> Self {
        if self.num.is_zero() {
            return QFunction::zero(self.spec());
        }
        let shift = self.num.min_exp().unwrap().min(0);
        let mut num = self.num.shift(-shift);
        let mut den = Vec::new();
        for f in &self.den {
            let base = f.base_poly();
            let mut left = f.mult;
            while left > 0 {
                match num.div_rem(&base) {
                    Ok((quo, rem)) if rem.is_zero() => {
                        num = quo;
                        left -= 1;
                    }
                    _ => break,
                }
            }
            if left > 0 {
                den.push(DenFactor {
                    mult: left,
                    ..f.clone()
                });
            }
        }
        QFunction {
            num: num.shift(shift),
            den,
        }
    }

    /// Value at `q = 0`.
    pub fn eval_q0(&self) -> Result<RingElement> {
        let c = self.cancel();
        if c.num.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::PoleAtZero);
        }
        // every denominator factor is 1 at q = 0
        Ok(c.num.coeff(0))
    }

    /// Structural `𝒦₋` membership: numerator has no negative exponents and
    /// q-degree strictly below the denominator's.
    pub fn is_proper(&self) -> bool {
        match (self.num.min_exp(), self.num.max_exp()) {
            (None, _) => true,
            (Some(lo), Some(hi)) => lo >= 0 && hi < self.denominator_degree(),
            _ => unreachable!(),
        }
    }

    pub fn map_coeffs(
        &self,
        target: &Arc<RingSpec>,
        f: impl Fn(&RingElement) -> RingElement,
    ) -> Result<Self> {
        let num = self.num.map_coeffs(target, &f);
        let den = self
            .den
            .iter()
            .map(|d| DenFactor::new(f(&d.unit), d.power, d.mult))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num, den)
    }
}

pub fn qf_arith_add(a: &QFunction, b: &QFunction) -> Result<QFunction> {
    a.try_add(b)
}

pub fn qf_arith_mul(a: &QFunction, b: &QFunction) -> Result<QFunction> {
    a.try_mul(b)
}

/// `a == b` as rational functions, decided by cross-multiplication.
pub fn qf_equal(a: &QFunction, b: &QFunction) -> bool {
    if a.spec() != b.spec() {
        return false;
    }
    let (x, y, _) = a.over_common(b);
    x == y
}

impl PartialEq for QFunction {
    fn eq(&self, other: &Self) -> bool {
        qf_equal(self, other)
    }
}

/// The polarization split `f = plus + minus`, with `plus` a Laurent
/// polynomial and `minus` proper and regular at `q = 0`.
pub fn split_polarization(f: &QFunction) -> Result<(LaurentPoly, QFunction)> {
    for d in &f.den {
        if !d.unit.is_unit() {
            return Err(Error::Precondition {
                op: "split_polarization",
                msg: "denominator factor is not 1 at q = 0".into(),
            });
        }
    }
    let spec = f.spec().clone();
    if f.num.is_zero() {
        return Ok((LaurentPoly::zero(&spec), QFunction::zero(&spec)));
    }
    let den = f.denominator_poly();
    let s = (-f.num.min_exp().unwrap()).max(0);
    // f = q^{-s} M / D with M a polynomial
    let m = f.num.shift(s);
    let (a, b) = m.div_rem(&den)?;
    // q^{-s} B / D: peel off the first s Taylor coefficients of B / D
    let mut plus = a.shift(-s);
    let mut rem = b;
    if s > 0 {
        let inv = den.series_inverse(s as usize)?;
        let mut taylor = LaurentPoly::zero(&spec);
        for i in 0..s {
            let mut c = RingElement::zero(&spec);
            for (e, bc) in rem.terms() {
                if e <= i {
                    c = &c + &(bc * &inv[(i - e) as usize]);
                }
            }
            taylor = &taylor + &LaurentPoly::monomial(c, i);
        }
        rem = &rem - &(&taylor * &den);
        debug_assert!(rem.min_exp().is_none_or(|e| e >= s));
        rem = rem.shift(-s);
        plus = &plus + &taylor.shift(-s);
    }
    let minus = QFunction {
        num: rem,
        den: f.den.clone(),
    };
    Ok((plus, minus))
}

/// `ψ^k` on coefficients with `q ↦ q^k`.
pub fn qf_adams(k: u32, f: &QFunction) -> QFunction {
    assert!(k >= 1, "qf_adams needs k >= 1");
    let k64 = k as i64;
    let den: Vec<DenFactor> = f
        .den
        .iter()
        .map(|d| DenFactor {
            unit: adams(k64, &d.unit),
            power: d.power * k,
            mult: d.mult,
        })
        .collect();
    let mut out = QFunction {
        num: f.num.adams(k64),
        den: Vec::new(),
    };
    for d in den {
        push_factor(&mut out.den, d);
    }
    out
}

pub fn qf_eval_q0(f: &QFunction) -> Result<RingElement> {
    f.eval_q0()
}

#[derive(Serialize, Deserialize)]
struct QFunctionJson {
    ring: Vec<u32>,
    num: Vec<(i64, RingElement)>,
    den: Vec<(RingElement, u32, u32)>,
}

impl Serialize for QFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QFunctionJson {
            ring: self.spec().orders().to_vec(),
            num: self.num.terms().map(|(e, c)| (e, c.clone())).collect(),
            den: self
                .den
                .iter()
                .map(|d| (d.unit.clone(), d.power, d.mult))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = QFunctionJson::deserialize(d)?;
        let spec = RingSpec::new(j.ring).map_err(D::Error::custom)?;
        let num = LaurentPoly::from_terms(&spec, j.num).map_err(D::Error::custom)?;
        let den = j
            .den
            .into_iter()
            .map(|(u, r, m)| DenFactor::new(u, r, m))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        QFunction::new(num, den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::line_class;

    fn pt() -> Arc<RingSpec> {
        RingSpec::point()
    }

    fn qpoly(spec: &Arc<RingSpec>, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_terms(
            spec,
            c.iter()
                .enumerate()
                .map(|(i, &x)| (i as i64, RingElement::from_int(spec, x))),
        )
        .unwrap()
    }

    fn one_minus_q(spec: &Arc<RingSpec>, r: u32, m: u32) -> QFunction {
        QFunction::inverse_factor(RingElement::one(spec), r, m).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let s = pt();
        let a = QFunction::from_poly(qpoly(&s, &[1, -1]));
        let b = one_minus_q(&s, 1, 1);
        assert!(qf_equal(&a.try_mul(&b).unwrap(), &QFunction::one(&s)));

        let sp = RingSpec::projective(2);
        let p = RingElement::p(&sp, 0);
        let f = QFunction::inverse_factor(p.clone(), 1, 1).unwrap();
        let two_f = f.scale(&RingElement::from_int(&sp, 2));
        assert!(qf_equal(&f.try_add(&f).unwrap(), &two_f));
        // the lcm keeps a single factor
        assert_eq!(f.try_add(&f).unwrap().denominator().len(), 1);
        assert_eq!(f.try_add(&f).unwrap().denominator()[0].mult, 1);

        let g = one_minus_q(&s, 1, 1).shift(1);
        let g2 = g.try_mul(&g).unwrap();
        assert!(qf_equal(&g2, &one_minus_q(&s, 1, 2).shift(2)));
    }

    #[test]
    fn equality_examples() {
        let s = pt();
        let a = QFunction::from_poly(qpoly(&s, &[1, 0, -1]))
            .try_mul(&one_minus_q(&s, 1, 1))
            .unwrap();
        assert!(qf_equal(&a, &QFunction::from_poly(qpoly(&s, &[1, 1]))));
        assert!(!qf_equal(&one_minus_q(&s, 1, 1), &one_minus_q(&s, 1, 2)));
    }

    #[test]
    fn split_examples() {
        let s = pt();
        let f = QFunction::from_poly(qpoly(&s, &[1, -1]));
        let (plus, minus) = split_polarization(&f).unwrap();
        assert_eq!(plus, qpoly(&s, &[1, -1]));
        assert!(minus.is_zero());

        let f = one_minus_q(&s, 1, 1);
        let (plus, minus) = split_polarization(&f).unwrap();
        assert!(plus.is_zero());
        assert!(qf_equal(&minus, &f));
    }

    #[test]
    fn split_with_negative_exponents() {
        let s = pt();
        // q^{-2}/(1-q) = q^{-2} + q^{-1} + 1/(1-q)
        let f = one_minus_q(&s, 1, 1).shift(-2);
        let (plus, minus) = split_polarization(&f).unwrap();
        let expect =
            LaurentPoly::from_terms(&s, [(-2, RingElement::one(&s)), (-1, RingElement::one(&s))])
                .unwrap();
        assert_eq!(plus, expect);
        assert!(qf_equal(&minus, &one_minus_q(&s, 1, 1)));
        assert!(minus.is_proper());
    }

    #[test]
    fn adams_examples() {
        let sp = RingSpec::projective(3);
        let p = RingElement::p(&sp, 0);
        let f = QFunction::inverse_factor(p.clone(), 1, 1).unwrap();
        let g = QFunction::inverse_factor(line_class(&sp, &[2]).unwrap(), 2, 1).unwrap();
        assert!(qf_equal(&qf_adams(2, &f), &g));

        let s = pt();
        let h = QFunction::from_poly(qpoly(&s, &[1, -1]));
        let mut expect = vec![0; 4];
        expect[0] = 1;
        expect[3] = -1;
        assert!(qf_equal(
            &qf_adams(3, &h),
            &QFunction::from_poly(qpoly(&s, &expect))
        ));

        let k = one_minus_q(&s, 1, 2).shift(1);
        assert!(qf_equal(&qf_adams(2, &k), &one_minus_q(&s, 2, 2).shift(2)));
    }

    #[test]
    fn eval_at_zero() {
        let s = pt();
        let f = QFunction::from_poly(qpoly(&s, &[2875, -8625]))
            .try_mul(&one_minus_q(&s, 1, 2))
            .unwrap();
        assert_eq!(f.eval_q0().unwrap(), RingElement::from_int(&s, 2875));
        let g = QFunction::from_poly(qpoly(&s, &[1, -1]));
        assert!(g.eval_q0().unwrap().is_one());
        let h = QFunction::from_poly(qpoly(&s, &[0, 0, 32, 32]))
            .try_mul(&one_minus_q(&s, 1, 4))
            .unwrap();
        assert!(h.eval_q0().unwrap().is_zero());
        assert_eq!(
            one_minus_q(&s, 1, 1).shift(-1).eval_q0(),
            Err(Error::PoleAtZero)
        );
    }

    #[test]
    fn cancel_removes_divisible_factors() {
        let s = pt();
        // (1-q^2)/(1-q)^3 -> (1+q)/(1-q)^2
        let f = QFunction::from_poly(qpoly(&s, &[1, 0, -1]))
            .try_mul(&one_minus_q(&s, 1, 3))
            .unwrap();
        let c = f.cancel();
        assert_eq!(c.denominator()[0].mult, 2);
        assert!(qf_equal(&c, &f));
    }

    #[test]
    fn json_roundtrip() {
        let sp = RingSpec::projective(1);
        let f = QFunction::inverse_factor(RingElement::p(&sp, 0), 1, 2)
            .unwrap()
            .shift(3);
        let j = serde_json::to_string(&f).unwrap();
        let back: QFunction = serde_json::from_str(&j).unwrap();
        assert!(qf_equal(&f, &back));
        assert_eq!(serde_json::to_string(&back).unwrap(), j);
    }
}
