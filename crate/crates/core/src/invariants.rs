//! One-point invariants from I-function coefficients.
//!
//! The K-theoretic Poincaré pairing on `ℙᴺ` is the residue at `P = 1` of
//! `(…) dP / P`. With `P = 1 - u`, it becomes the coefficient of `u^{-1}` in
//! the expansion of `(…) / P` as a Laurent series in `u` with coefficients
//! rational in `q`. The overall sign is fixed by `χ(ℙᴺ, 𝒪) = 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeffring::{RingElement, RingSpec};
use crate::exactnum::rational::{self, int, Rational};
use crate::ifunctions::{i_complete_intersection, GeometrySpec};
use crate::qring::{split_polarization, LaurentPoly, QFunction};
use crate::{Error, Result};

fn pt() -> Arc<RingSpec> {
    RingSpec::point()
}

fn qconst(c: Rational) -> QFunction {
    QFunction::constant(RingElement::scalar(&pt(), c))
}

/// Generalized binomial coefficient `C(n, k)` for integer `n`.
fn binomial(n: i64, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc = acc * int(n - i) / int(i + 1);
    }
    acc
}

/// A Laurent series in `u` with coefficients rational in `q`, known for
/// exponents strictly below `precision`.
#[derive(Clone, Debug)]
pub struct LaurentInU {
    coeffs: BTreeMap<i64, QFunction>,
    precision: i64,
}

impl LaurentInU {
    pub fn zero(precision: i64) -> Self {
        LaurentInU {
            coeffs: BTreeMap::new(),
            precision,
        }
    }

    /// Exclusive upper bound of the known exponents.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn coeff(&self, e: i64) -> Result<QFunction> {
        if e >= self.precision {
            return Err(Error::InsufficientOrder {
                order: self.precision,
                msg: format!("coefficient of u^{e} is not determined"),
            });
        }
        Ok(self
            .coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| QFunction::zero(&pt())))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &QFunction)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn push(&mut self, e: i64, c: QFunction) -> Result<()> {
        if e >= self.precision {
            return Ok(());
        }
        let sum = match self.coeffs.remove(&e) {
            Some(prev) => prev.try_add(&c)?,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(e, sum);
        }
        Ok(())
    }

    pub fn mul(&self, other: &LaurentInU) -> Result<LaurentInU> {
        let va = self.valuation();
        let vb = other.valuation();
        let prec = match (va, vb) {
            (Some(a), Some(b)) => (self.precision + b).min(other.precision + a),
            (None, Some(b)) => self.precision + b,
            (Some(a), None) => other.precision + a,
            (None, None) => self.precision.min(other.precision),
        };
        let mut out = LaurentInU::zero(prec);
        for (ea, a) in &self.coeffs {
            for (eb, b) in &other.coeffs {
                if ea + eb < prec {
                    out.push(ea + eb, a.try_mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    /// Drops everything at or above `precision`.
    pub fn truncate(&mut self, precision: i64) {
        self.precision = self.precision.min(precision);
        let p = self.precision;
        self.coeffs.retain(|&e, _| e < p);
    }

    /// Cancels common factors in every coefficient.
    pub fn simplify(&mut self) {
        for c in self.coeffs.values_mut() {
            *c = c.cancel();
        }
    }
}

/// One factor of a residue integrand, as a function of `P` and `q`.
#[derive(Clone, Debug)]
pub enum UFactor {
    /// `P^a`
    PPow(i64),
    /// `(1 - P^b)^c`
    OneMinusPPow { b: i64, c: i64 },
    /// `(1 - P^e q^r)^f`
    OneMinusPq { e: i64, r: i64, f: i64 },
    /// A class of `K⁰(ℙᴺ)`, i.e. a polynomial in `u` known modulo `u^{N+1}`.
    Class(RingElement),
    /// A Laurent polynomial in `q` with `K⁰(ℙᴺ)` coefficients.
    QClass(LaurentPoly),
    /// `(1 - c·q^r)^f` with `c` a unit of `K⁰(ℙᴺ)`.
    OneMinusClassQ { c: RingElement, r: i64, f: i64 },
    /// A function of `q` alone.
    Scalar(QFunction),
}

impl UFactor {
    /// Splits a `QFunction` over `K⁰(ℙᴺ)` into integrand factors.
    pub fn from_qfunction(f: &QFunction) -> Vec<UFactor> {
        let mut out = vec![UFactor::QClass(f.numerator().clone())];
        for d in f.denominator() {
            out.push(UFactor::OneMinusClassQ {
                c: d.unit.clone(),
                r: d.power as i64,
                f: -(d.mult as i64),
            });
        }
        out
    }
}

/// Exact `u`-series of `(1-u)^a` truncated below `prec`.
fn p_power_series(a: i64, prec: i64) -> Vec<Rational> {
    (0..prec.max(0) as usize)
        .map(|k| {
            let b = binomial(a, k);
            if k % 2 == 1 {
                -b
            } else {
                b
            }
        })
        .collect()
}

fn rational_series(coeffs: &[Rational], shift: i64, precision: i64) -> LaurentInU {
    let mut s = LaurentInU::zero(precision);
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            s.coeffs.insert(k as i64 + shift, qconst(c.clone()));
        }
    }
    s.truncate(precision);
    s
}

/// `(1 + t)^f` for a series `t` of positive valuation, through `prec`.
fn one_plus_pow(t: &LaurentInU, f: i64, prec: i64) -> Result<LaurentInU> {
    let mut out = LaurentInU::zero(prec);
    out.push(0, QFunction::one(&pt()))?;
    let mut tk = LaurentInU::zero(prec);
    tk.push(0, QFunction::one(&pt()))?;
    let mut t = t.clone();
    t.truncate(prec);
    for k in 1..prec.max(0) as usize {
        tk = tk.mul(&t)?;
        tk.truncate(prec);
        if tk.coeffs.is_empty() {
            break;
        }
        let b = binomial(f, k);
        if b.is_zero() {
            continue;
        }
        for (e, c) in tk.terms() {
            out.push(e, c.scale(&RingElement::scalar(&pt(), b.clone())))?;
        }
    }
    out.truncate(t.precision);
    Ok(out)
}

/// `(1 - s q^r)^f` as a `QFunction` over the point, for `r ≠ 0`, `s ≠ 0`.
fn one_minus_sq_pow(s: &Rational, r: i64, f: i64) -> Result<QFunction> {
    let p = pt();
    let sc = RingElement::scalar(&p, s.clone());
    if f >= 0 {
        return Ok(QFunction::from_poly(
            LaurentPoly::one_minus(&sc, r).pow(f as u32),
        ));
    }
    let m = (-f) as u32;
    if r > 0 {
        return QFunction::inverse_factor(sc, r as u32, m);
    }
    // 1 - s q^{-t} = -s q^{-t} (1 - s^{-1} q^t)
    let t = -r;
    let inv = RingElement::scalar(&p, s.recip());
    let base = QFunction::inverse_factor(inv, t as u32, m)?;
    let pref = (-s.clone()).recip();
    let mut c = Rational::one();
    for _ in 0..m {
        c *= &pref;
    }
    Ok(base.shift(t * m as i64).scale(&RingElement::scalar(&p, c)))
}

/// `(1 - c(u) q^r)^f` where `c(u)` is a `u`-series with nonzero rational
/// constant term `s` and rational coefficients.
fn one_minus_cq_pow(c: &[Rational], c_prec: i64, r: i64, f: i64, prec: i64) -> Result<LaurentInU> {
    let s = c.first().cloned().unwrap_or_else(Rational::zero);
    if s.is_zero() {
        return Err(Error::NotUnit);
    }
    let prec = prec.min(c_prec);
    if r == 0 {
        // (1 - c(u))^f with 1 - s ≠ 0 required for valuation 0
        let d = Rational::one() - &s;
        if d.is_zero() {
            return Err(Error::Precondition {
                op: "expand_in_u",
                msg: "factor (1 - c) with c(0) = 1 must use OneMinusPPow".into(),
            });
        }
        // 1 - c(u) = d (1 + t), t = -(c - s)/d
        let t_coeffs: Vec<Rational> = c
            .iter()
            .enumerate()
            .map(|(k, x)| if k == 0 { Rational::zero() } else { -x / &d })
            .collect();
        let t = rational_series(&t_coeffs, 0, prec);
        let series = one_plus_pow(&t, f, prec)?;
        let mut scale = Rational::one();
        for _ in 0..f.unsigned_abs() {
            scale *= &d;
        }
        if f < 0 {
            scale = scale.recip();
        }
        return scale_series(&series, &qconst(scale));
    }
    // 1 - c q^r = (1 - s q^r)(1 + w), w = -(q^r / (1 - s q^r))·(c - s)
    let pref = one_minus_sq_pow(&s, r, f)?;
    let rho = one_minus_sq_pow(&s, r, -1)?.shift(r);
    let mut w = LaurentInU::zero(prec);
    for (k, x) in c.iter().enumerate().skip(1) {
        if !x.is_zero() {
            w.push(k as i64, rho.scale(&RingElement::scalar(&pt(), -x)))?;
        }
    }
    let series = one_plus_pow(&w, f, prec)?;
    scale_series(&series, &pref)
}

fn scale_series(s: &LaurentInU, c: &QFunction) -> Result<LaurentInU> {
    let mut out = LaurentInU::zero(s.precision);
    for (e, x) in s.terms() {
        out.push(e, x.try_mul(c)?)?;
    }
    Ok(out)
}

fn single_generator(spec: &Arc<RingSpec>) -> Result<u32> {
    match spec.orders() {
        [n] => Ok(*n),
        other => Err(Error::Precondition {
            op: "expand_in_u",
            msg: format!("residues need a single-generator ring, got {other:?}"),
        }),
    }
}

fn class_coeffs(c: &RingElement) -> Result<(Vec<Rational>, i64)> {
    let n = single_generator(c.spec())?;
    Ok(((0..n).map(|j| c.coeff(&[j])).collect(), n as i64))
}

/// Valuation of a factor and a function that expands its normalized part
/// (the factor divided by `u^valuation`) below a given precision.
fn valuation(f: &UFactor) -> Result<Option<i64>> {
    Ok(match f {
        UFactor::PPow(_) | UFactor::OneMinusPq { .. } | UFactor::OneMinusClassQ { .. } => Some(0),
        UFactor::OneMinusPPow { b, c } => {
            if *b == 0 {
                if *c == 0 {
                    Some(0)
                } else if *c > 0 {
                    None
                } else {
                    return Err(Error::DivisionByZero);
                }
            } else {
                Some(*c)
            }
        }
        UFactor::Class(c) => {
            let (v, _) = class_coeffs(c)?;
            v.iter().position(|x| !x.is_zero()).map(|p| p as i64)
        }
        UFactor::QClass(p) => {
            single_generator(p.spec())?;
            let n = p.spec().orders()[0];
            (0..n)
                .find(|&j| p.terms().any(|(_, c)| !c.coeff(&[j]).is_zero()))
                .map(|j| j as i64)
        }
        UFactor::Scalar(q) => (!q.is_zero()).then_some(0),
    })
}

/// Expands `factor / u^v` below `prec` (relative exponents).
fn expand_normalized(f: &UFactor, v: i64, prec: i64) -> Result<LaurentInU> {
    match f {
        UFactor::PPow(a) => Ok(rational_series(&p_power_series(*a, prec), 0, prec)),
        UFactor::OneMinusPPow { b, c } => {
            if *b == 0 {
                return Ok(rational_series(&[Rational::one()], 0, prec));
            }
            // 1 - (1-u)^b = u·h(u), h(0) = b
            let full = p_power_series(*b, prec + 1);
            let h: Vec<Rational> = full.iter().skip(1).map(|x| -x).collect();
            let b0 = h[0].clone();
            let t: Vec<Rational> = h
                .iter()
                .enumerate()
                .map(|(k, x)| if k == 0 { Rational::zero() } else { x / &b0 })
                .collect();
            let series = one_plus_pow(&rational_series(&t, 0, prec), *c, prec)?;
            let mut scale = Rational::one();
            for _ in 0..c.unsigned_abs() {
                scale *= &b0;
            }
            if *c < 0 {
                scale = scale.recip();
            }
            scale_series(&series, &qconst(scale))
        }
        UFactor::OneMinusPq { e, r, f } => {
            if *r == 0 {
                return expand_normalized(&UFactor::OneMinusPPow { b: *e, c: *f }, v, prec);
            }
            let c = p_power_series(*e, prec);
            one_minus_cq_pow(&c, i64::MAX, *r, *f, prec)
        }
        UFactor::OneMinusClassQ { c, r, f } => {
            let (coeffs, n) = class_coeffs(c)?;
            if *r == 0 && coeffs[0].is_one() {
                return Err(Error::Precondition {
                    op: "expand_in_u",
                    msg: "(1 - c) with c(0) = 1 has positive valuation; use OneMinusPPow".into(),
                });
            }
            one_minus_cq_pow(&coeffs, n, *r, *f, prec)
        }
        UFactor::Class(c) => {
            let (coeffs, n) = class_coeffs(c)?;
            let shifted: Vec<Rational> = coeffs.into_iter().skip(v as usize).collect();
            Ok(rational_series(&shifted, 0, prec.min(n - v)))
        }
        UFactor::QClass(p) => {
            let n = single_generator(p.spec())? as i64;
            let point = pt();
            let mut s = LaurentInU::zero(prec.min(n - v));
            for j in v..n {
                let terms: Vec<(i64, RingElement)> = p
                    .terms()
                    .map(|(e, c)| (e, RingElement::scalar(&point, c.coeff(&[j as u32]))))
                    .collect();
                let lp = LaurentPoly::from_terms(&point, terms)?;
                s.push(j - v, QFunction::from_poly(lp))?;
            }
            Ok(s)
        }
        UFactor::Scalar(q) => {
            let mut s = LaurentInU::zero(prec);
            s.push(0, q.clone())?;
            Ok(s)
        }
    }
}

/// Expands the product of `factors` (with `P = 1 - u`) through `u^order`.
/// The returned series records how far its coefficients are determined.
pub fn expand_in_u(factors: &[UFactor], order: i64) -> Result<LaurentInU> {
    let target = order + 1;
    let mut vals = Vec::with_capacity(factors.len());
    for f in factors {
        match valuation(f)? {
            Some(v) => vals.push(v),
            // an identically zero factor
            None => return Ok(LaurentInU::zero(target)),
        }
    }
    let total: i64 = vals.iter().sum();
    let mut acc = LaurentInU::zero(target - total);
    acc.push(0, QFunction::one(&pt()))?;
    for (f, &v) in factors.iter().zip(&vals) {
        // relative precision needed for the normalized product
        let need = target - total;
        let s = expand_normalized(f, v, need.max(0))?;
        acc = acc.mul(&s)?;
        acc.truncate(need);
    }
    let mut out = LaurentInU::zero(acc.precision + total);
    for (e, c) in acc.terms() {
        out.push(e + total, c.cancel())?;
    }
    Ok(out)
}

/// The pairing residue: the `u^{-1}` coefficient of the integrand, which
/// must already include the measure factor `1/P`.
pub fn residue_at_p1(factors: &[UFactor]) -> Result<QFunction> {
    let s = expand_in_u(factors, -1)?;
    s.coeff(-1).map(|c| c.cancel())
}

fn euler_integrand(n: u32, euler_factors: &[i64]) -> Vec<UFactor> {
    let mut f: Vec<UFactor> = euler_factors
        .iter()
        .map(|&l| UFactor::OneMinusPPow { b: l, c: 1 })
        .collect();
    f.push(UFactor::OneMinusPPow {
        b: 1,
        c: -(n as i64 + 1),
    });
    f.push(UFactor::PPow(-1));
    f
}

/// `χ(ℙᴺ, a·∏_j (1 - P^{l_j}))`, i.e. the Euler characteristic of `a`
/// restricted to the complete intersection cut out by `O(l_j)`.
pub fn euler_char(n: u32, a: &RingElement, euler_factors: &[i64]) -> Result<Rational> {
    if a.spec().orders() != [n + 1] {
        return Err(Error::RingMismatch(vec![n + 1], a.spec().orders().to_vec()));
    }
    let mut factors = vec![UFactor::Class(a.clone())];
    factors.extend(euler_integrand(n, euler_factors));
    let r = residue_at_p1(&factors)?;
    let num = r.numerator();
    if !r.denominator().is_empty() || !num.is_constant() {
        return Err(Error::Precondition {
            op: "euler_char",
            msg: "integrand depends on q".into(),
        });
    }
    Ok(num.coeff(0).scalar_part().clone())
}

/// One row of the invariant table: `⟨P^a/(1-qL)⟩_{0,1,1}`.
#[derive(Clone, Debug)]
pub struct InvariantRow {
    pub class_exponent: u32,
    pub value: QFunction,
    pub at_q0: Rational,
}

impl Serialize for InvariantRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("InvariantRow", 5)?;
        st.serialize_field("class", &format!("P^{}", self.class_exponent))?;
        st.serialize_field("invariant", &self.value.reduced_string(true))?;
        st.serialize_field("invariant_ascii", &self.value.reduced_string(false))?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("at_q0", &rational::to_string(&self.at_q0))?;
        st.end()
    }
}

/// The `𝒦₋` part of the degree-1 coefficient of the complete-intersection
/// I-function.
pub fn degree_one_minus_part(n: u32, degrees: &[i64]) -> Result<QFunction> {
    let spec = GeometrySpec::projective(n, degrees, 1);
    let i = i_complete_intersection(&spec)?;
    let (_, minus) = split_polarization(&i.get(&[1]))?;
    if !minus.is_proper() {
        return Err(Error::Precondition {
            op: "one_point_degree_one",
            msg: "split did not produce a proper fraction".into(),
        });
    }
    Ok(minus)
}

/// Pairs the `𝒦₋` part against `P^a` on the complete intersection:
/// the residue of `g·P^a·∏(1 - P^{l_j}) / ((1-P)^{N+1} ∏ den · P)`.
pub fn pair_minus_part(n: u32, degrees: &[i64], minus: &QFunction, a: u32) -> Result<QFunction> {
    let mut factors = UFactor::from_qfunction(minus);
    factors.push(UFactor::PPow(a as i64));
    factors.extend(euler_integrand(n, degrees));
    residue_at_p1(&factors)
}

/// Degree-one one-point invariants of the complete intersection of
/// `O(l_j)`-hypersurfaces in `ℙᴺ`, one per basis class `P^a`,
/// `a = 0..=N - #l`.
pub fn one_point_degree_one(n: u32, degrees: &[i64]) -> Result<Vec<InvariantRow>> {
    invariants_from_minus(n, degrees, &degree_one_minus_part(n, degrees)?)
}

/// Invariant table from an already split `𝒦₋` part over `K⁰(ℙᴺ)`.
pub fn invariants_from_minus(
    n: u32,
    degrees: &[i64],
    minus: &QFunction,
) -> Result<Vec<InvariantRow>> {
    if minus.spec().orders() != [n + 1] {
        return Err(Error::RingMismatch(
            vec![n + 1],
            minus.spec().orders().to_vec(),
        ));
    }
    if !minus.is_proper() {
        return Err(Error::Precondition {
            op: "invariants",
            msg: "input is not in 𝒦₋ (not a proper fraction)".into(),
        });
    }
    let dim = n as i64 - degrees.len() as i64;
    if dim < 0 {
        return Err(Error::InvalidSpec(
            "more equations than ambient dimension".into(),
        ));
    }
    (0..=dim as u32)
        .map(|a| {
            let value = pair_minus_part(n, degrees, minus, a)?;
            let at_q0 = value.eval_q0()?.scalar_part().clone();
            Ok(InvariantRow {
                class_exponent: a,
                value,
                at_q0,
            })
        })
        .collect()
}

/// Gram matrix `G_{ab} = χ(P^{a+b}·∏(1 - P^{l_j}))`, `a, b = 0..=N - #l`.
pub fn gram_matrix(n: u32, degrees: &[i64]) -> Result<Vec<Vec<Rational>>> {
    let spec = RingSpec::projective(n);
    let dim = n as usize - degrees.len();
    let p = RingElement::p(&spec, 0);
    (0..=dim)
        .map(|a| {
            (0..=dim)
                .map(|b| euler_char(n, &p.pow((a + b) as i64)?, degrees))
                .collect()
        })
        .collect()
}

/// Exact inverse by Gauss–Jordan elimination; `None` if singular.
pub fn invert_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Re-expands `Σ_a Φ^a ⟨Φ_a/(1-qL)⟩` with the Gram-dual basis and compares
/// it with the `𝒦₋` part in `K⁰(X) = ℚ[u]/(u^{dim X + 1})`.
pub fn dual_basis_roundtrip(n: u32, degrees: &[i64]) -> Result<bool> {
    let minus = degree_one_minus_part(n, degrees)?;
    let rows = one_point_degree_one(n, degrees)?;
    let gram = gram_matrix(n, degrees)?;
    let ginv = invert_matrix(&gram).ok_or_else(|| Error::Precondition {
        op: "dual_basis_roundtrip",
        msg: "Gram matrix is singular".into(),
    })?;
    let dim = rows.len() as i64 - 1;
    let target = expand_in_u(&UFactor::from_qfunction(&minus), dim)?;
    for j in 0..=dim {
        // coefficient of u^j in Σ_{a,b} Ginv[a][b] P^b inv_a
        let mut acc = QFunction::zero(&pt());
        for (a, row) in rows.iter().enumerate() {
            for (b, g) in ginv[a].iter().enumerate() {
                let pb = p_power_series(b as i64, dim + 1);
                let c = g * &pb[j as usize];
                if c.is_zero() {
                    continue;
                }
                acc = acc.try_add(&row.value.scale(&RingElement::scalar(&pt(), c)))?;
            }
        }
        if acc != target.coeff(j)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;
    use crate::qring::DenFactor;

    fn scalar_q(c: &[i64], den: &[(u32, u32)]) -> QFunction {
        let p = pt();
        let num = LaurentPoly::from_terms(
            &p,
            c.iter()
                .enumerate()
                .map(|(i, &x)| (i as i64, RingElement::from_int(&p, x))),
        )
        .unwrap();
        let den = den
            .iter()
            .map(|&(r, m)| DenFactor::new(RingElement::one(&p), r, m).unwrap())
            .collect();
        QFunction::new(num, den).unwrap()
    }

    #[test]
    fn simple_pole() {
        let s = expand_in_u(&[UFactor::OneMinusPPow { b: 1, c: -1 }], 0).unwrap();
        assert_eq!(s.coeff(-1).unwrap(), QFunction::one(&pt()));
        assert!(s.coeff(0).unwrap().is_zero());
        assert!(s.coeff(1).is_err());
    }

    #[test]
    fn quintic_euler_factor_leading_term() {
        // (1-P^5)/(1-P)^5 · 1/P = 5u^{-4} - 10u^{-3} + 10u^{-2} - 5u^{-1} + ... times Σ u^j
        let f = [
            UFactor::OneMinusPPow { b: 5, c: 1 },
            UFactor::OneMinusPPow { b: 1, c: -5 },
            UFactor::PPow(-1),
        ];
        let s = expand_in_u(&f, 0).unwrap();
        assert_eq!(s.valuation(), Some(-4));
        // independent: partial sums of 5, -10, 10, -5, 1
        let expect = [5, -5, 5, 0, 1];
        for (k, &c) in expect.iter().enumerate() {
            assert_eq!(
                s.coeff(k as i64 - 4).unwrap(),
                scalar_q(&[c], &[]),
                "u^{}",
                k as i64 - 4
            );
        }
    }

    #[test]
    fn geometric_in_q() {
        // 1/(1 - Pq) = 1/(1-q) - q u/(1-q)^2 + O(u^2)
        let s = expand_in_u(&[UFactor::OneMinusPq { e: 1, r: 1, f: -1 }], 1).unwrap();
        assert_eq!(s.coeff(0).unwrap(), scalar_q(&[1], &[(1, 1)]));
        assert_eq!(s.coeff(1).unwrap(), scalar_q(&[0, -1], &[(1, 2)]));
        assert_eq!(s.precision(), 2);
    }

    #[test]
    fn euler_characteristics() {
        for n in 1..=6 {
            let one = RingElement::one(&RingSpec::projective(n));
            assert_eq!(euler_char(n, &one, &[]).unwrap(), int(1), "N={n}");
        }
        let s1 = RingSpec::projective(1);
        let p = RingElement::p(&s1, 0);
        // χ(ℙ¹, O(1)) = 2 with O(1) = P^{-1}
        assert_eq!(euler_char(1, &p.pow(-1).unwrap(), &[]).unwrap(), int(2));
        // χ(ℙ¹, O(-1)) = 0
        assert_eq!(euler_char(1, &p, &[]).unwrap(), int(0));
        // χ(O_X) for the quintic threefold is 1 - h^{0,3} = 0
        let one4 = RingElement::one(&RingSpec::projective(4));
        assert_eq!(euler_char(4, &one4, &[5]).unwrap(), int(0));
        // a cubic curve in ℙ²: χ(O) = 1 - g = 0; a conic: 1
        let one2 = RingElement::one(&RingSpec::projective(2));
        assert_eq!(euler_char(2, &one2, &[3]).unwrap(), int(0));
        assert_eq!(euler_char(2, &one2, &[2]).unwrap(), int(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(-1, 3), int(-1));
        assert_eq!(binomial(-2, 2), int(3));
        assert_eq!(binomial(3, 5), int(0));
    }

    #[test]
    fn matrix_inverse() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = invert_matrix(&m).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert!(invert_matrix(&[vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
        let _ = rat(1, 2);
    }

    #[test]
    fn negative_q_power_factor() {
        // (1 - P q^{-1})^{-1} at u = 0 is 1/(1 - q^{-1}) = -q/(1-q)
        let s = expand_in_u(&[UFactor::OneMinusPq { e: 1, r: -1, f: -1 }], 0).unwrap();
        assert_eq!(s.coeff(0).unwrap(), scalar_q(&[0, -1], &[(1, 1)]));
    }

    #[test]
    fn quintic_and_two_quadrics() {
        let rows = one_point_degree_one(4, &[5]).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(
            rows[0].value.reduced_string(true).unwrap(),
            "2875(1−3q)/(1−q)²"
        );
        assert_eq!(rows[0].at_q0, int(2875));
        for r in &rows {
            assert!(r.value.is_proper());
        }
        let rows = one_point_degree_one(5, &[2, 2]).unwrap();
        assert_eq!(
            rows[0].value.reduced_string(true).unwrap(),
            "32(q²+q³)/(1−q)⁴"
        );
        assert!(dual_basis_roundtrip(4, &[5]).unwrap());
        assert!(dual_basis_roundtrip(5, &[2, 2]).unwrap());
    }
}
