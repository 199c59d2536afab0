//! Laurent polynomials in `q` with coefficients in a truncated ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::coeffring::{adams, RingElement, RingSpec};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    spec: Arc<RingSpec>,
    // zero coefficients are never stored
    terms: BTreeMap<i64, RingElement>,
}

impl LaurentPoly {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        LaurentPoly {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: RingElement) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::constant(RingElement::one(spec))
    }

    /// `c · q^e`
    pub fn monomial(c: RingElement, e: i64) -> Self {
        let mut p = Self::zero(c.spec());
        p.add_term(e, c);
        p
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        spec: &Arc<RingSpec>,
        terms: impl IntoIterator<Item = (i64, RingElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(spec);
        for (e, c) in terms {
            if c.spec() != spec {
                return Err(Error::RingMismatch(
                    spec.orders().to_vec(),
                    c.spec().orders().to_vec(),
                ));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// `1 - c·q^r`
    pub fn one_minus(c: &RingElement, r: i64) -> Self {
        let spec = c.spec();
        let mut p = Self::one(spec);
        p.add_term(r, -c);
        p
    }

    fn add_term(&mut self, e: i64, c: RingElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RingElement)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> RingElement {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(&self.spec))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        let mut out = Self::zero(&self.spec);
        for (&e, a) in &self.terms {
            out.add_term(e, a * c);
        }
        out
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = Self::one(&self.spec);
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `ψ^k` to coefficients and sends `q ↦ q^k`.
    pub fn adams(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.spec);
        for (&e, c) in &self.terms {
            out.add_term(e * k, adams(k, c));
        }
        out
    }

    /// Applies a ring map to every coefficient.
    pub fn map_coeffs(
        &self,
        target: &Arc<RingSpec>,
        f: impl Fn(&RingElement) -> RingElement,
    ) -> Self {
        let mut out = Self::zero(target);
        for (&e, c) in &self.terms {
            out.add_term(e, f(c));
        }
        out
    }

    /// Division by a polynomial (nonnegative exponents) whose leading
    /// coefficient is a unit. `self` must have no negative exponents.
    /// Returns `(quotient, remainder)` with `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        let dd = divisor.max_exp().ok_or(Error::DivisionByZero)?;
        if divisor.min_exp().unwrap() < 0 || self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::Precondition {
                op: "div_rem",
                msg: "negative exponents in polynomial division".into(),
            });
        }
        let lead_inv = divisor.coeff(dd).invert()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.spec);
        while let Some(top) = rem.max_exp() {
            if top < dd {
                break;
            }
            let c = &rem.coeff(top) * &lead_inv;
            let shift = top - dd;
            for (e, d) in divisor.terms() {
                rem.add_term(e + shift, -&(&c * d));
            }
            // nilpotent coefficients can leave the top term nonzero only if
            // the leading coefficient were not a unit
            debug_assert!(!rem.terms.contains_key(&top));
            quot.add_term(shift, c);
        }
        Ok((quot, rem))
    }

    /// Power series `1/self` through `q^(n-1)`; requires a unit constant term
    /// and no negative exponents.
    pub fn series_inverse(&self, n: usize) -> Result<Vec<RingElement>> {
        if self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::PoleAtZero);
        }
        let c0 = self.coeff(0).invert()?;
        let mut inv: Vec<RingElement> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = if i == 0 {
                RingElement::one(&self.spec)
            } else {
                RingElement::zero(&self.spec)
            };
            for (e, d) in self.terms() {
                let e = e as usize;
                if e == 0 || e > i {
                    continue;
                }
                acc = &acc - &(d * &inv[i - e]);
            }
            inv.push(&acc * &c0);
        }
        Ok(inv)
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&self.spec);
        for (&ea, a) in &self.terms {
            for (&eb, b) in &rhs.terms {
                out.add_term(ea + eb, a * b);
            }
        }
        out
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(i64, &RingElement)> = self.terms().collect();
        v.serialize(s)
    }
}
