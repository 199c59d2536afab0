//! Truncated coefficient rings `ℚ[u_1,…,u_K]/(u_i^{n_i+1})`.
//!
//! These model `K⁰` of a product of projective spaces, with the tautological
//! classes `P_i = 1 - u_i`. Elements are stored densely over the monomial
//! basis `u^a`, `0 ≤ a_i ≤ n_i`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::rational::{self, int, Rational};
use crate::{Error, Result};

/// Nilpotency orders `n_i + 1`, one per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    orders: Vec<u32>,
}

impl RingSpec {
    pub fn new(orders: Vec<u32>) -> Result<Arc<Self>> {
        if orders.is_empty() {
            return Err(Error::InvalidSpec(
                "ring needs at least one generator".into(),
            ));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidSpec(format!(
                "nilpotency orders must be positive, got {orders:?}"
            )));
        }
        Ok(Arc::new(RingSpec { orders }))
    }

    /// `K⁰(ℙᴺ)`: a single generator with `u^{N+1} = 0`.
    pub fn projective(n: u32) -> Arc<Self> {
        Self::new(vec![n + 1]).unwrap()
    }

    /// The ground field (a point).
    pub fn point() -> Arc<Self> {
        Self::new(vec![1]).unwrap()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    /// Dimension over ℚ.
    pub fn rank(&self) -> usize {
        self.orders.iter().map(|&o| o as usize).product()
    }

    fn encode(&self, exps: &[u32]) -> Option<usize> {
        let mut idx = 0;
        for (&e, &o) in exps.iter().zip(&self.orders) {
            if e >= o {
                return None;
            }
            idx = idx * o as usize + e as usize;
        }
        Some(idx)
    }

    fn decode(&self, mut idx: usize) -> Vec<u32> {
        let mut exps = vec![0; self.orders.len()];
        for (slot, &o) in exps.iter_mut().zip(&self.orders).rev() {
            *slot = (idx % o as usize) as u32;
            idx /= o as usize;
        }
        exps
    }
}

/// An element of the ring described by its [`RingSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    spec: Arc<RingSpec>,
    coeffs: Vec<Rational>,
}

impl RingElement {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        RingElement {
            spec: spec.clone(),
            coeffs: vec![Rational::zero(); spec.rank()],
        }
    }

    pub fn scalar(spec: &Arc<RingSpec>, c: Rational) -> Self {
        let mut r = Self::zero(spec);
        r.coeffs[0] = c;
        r
    }

    pub fn from_int(spec: &Arc<RingSpec>, c: i64) -> Self {
        Self::scalar(spec, int(c))
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::scalar(spec, Rational::one())
    }

    /// `c · u^exps`; zero if any exponent reaches its nilpotency order.
    pub fn monomial(spec: &Arc<RingSpec>, exps: &[u32], c: Rational) -> Result<Self> {
        check_arity(spec, exps.len())?;
        let mut r = Self::zero(spec);
        if let Some(i) = spec.encode(exps) {
            r.coeffs[i] = c;
        }
        Ok(r)
    }

    /// The generator `u_i`.
    pub fn u(spec: &Arc<RingSpec>, i: usize) -> Self {
        let mut exps = vec![0; spec.num_generators()];
        exps[i] = 1;
        Self::monomial(spec, &exps, Rational::one()).unwrap()
    }

    /// The tautological class `P_i = 1 - u_i`.
    pub fn p(spec: &Arc<RingSpec>, i: usize) -> Self {
        &Self::one(spec) - &Self::u(spec, i)
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn scalar_part(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// True when the element lies in ℚ·1.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Nonzero terms as `(exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.spec.decode(i), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.spec
            .encode(exps)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(Rational::zero)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::RingMismatch(
                self.spec.orders.clone(),
                other.spec.orders.clone(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RingElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Inverse of a unit: `(s + n)^{-1} = s^{-1} Σ_j (-n/s)^j`, a finite sum
    /// since `n` is nilpotent.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let s_inv = self.coeffs[0].recip();
        let one = Self::one(&self.spec);
        // t = -n/s
        let mut t = self.scale(&-&s_inv);
        t.coeffs[0] = Rational::zero();
        let mut acc = one.clone();
        let mut pow = one;
        loop {
            pow = &pow * &t;
            if pow.is_zero() {
                break;
            }
            acc = &acc + &pow;
        }
        Ok(acc.scale(&s_inv))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(&self.spec);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Evaluates this element as a polynomial in the `u_i`, substituting
    /// `u_i ↦ images[i]`.
    pub fn substitute(&self, images: &[RingElement]) -> RingElement {
        let target = images[0].spec.clone();
        let powers: Vec<Vec<RingElement>> = images
            .iter()
            .zip(self.spec.orders.iter())
            .map(|(img, &o)| {
                let mut v = vec![RingElement::one(&target)];
                for _ in 1..o {
                    let next = v.last().unwrap() * img;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = RingElement::zero(&target);
        for (exps, c) in self.terms() {
            let mut m = RingElement::scalar(&target, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    m = &m * &powers[i][e as usize];
                }
            }
            out = &out + &m;
        }
        out
    }

    /// Embeds into a larger ring whose generators include these ones at
    /// `positions`.
    pub fn embed(&self, target: &Arc<RingSpec>, positions: &[usize]) -> Result<RingElement> {
        check_arity(&self.spec, positions.len())?;
        let images: Vec<_> = positions
            .iter()
            .map(|&p| RingElement::u(target, p))
            .collect();
        Ok(self.substitute(&images))
    }
}

fn check_arity(spec: &RingSpec, got: usize) -> Result<()> {
    if got != spec.num_generators() {
        return Err(Error::ArityMismatch {
            expected: spec.num_generators(),
            got,
        });
    }
    Ok(())
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.spec, rhs.spec, "ring mismatch");
        RingElement {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.spec, rhs.spec, "ring mismatch");
        RingElement {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl std::ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.spec, rhs.spec, "ring mismatch");
        let spec = &self.spec;
        let mut out = RingElement::zero(spec);
        if self.is_scalar() {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.is_scalar() {
            return self.scale(&rhs.coeffs[0]);
        }
        let lhs_terms: Vec<_> = self.terms().map(|(e, c)| (e, c.clone())).collect();
        let rhs_terms: Vec<_> = rhs.terms().map(|(e, c)| (e, c.clone())).collect();
        let mut buf = vec![0u32; spec.num_generators()];
        for (ea, ca) in &lhs_terms {
            for (eb, cb) in &rhs_terms {
                for (slot, (x, y)) in buf.iter_mut().zip(ea.iter().zip(eb)) {
                    *slot = x + y;
                }
                if let Some(i) = spec.encode(&buf) {
                    out.coeffs[i] += ca * cb;
                }
            }
        }
        out
    }
}

/// Ring handle exposing the canonical constants.
#[derive(Clone, Debug)]
pub struct Ring {
    spec: Arc<RingSpec>,
}

pub fn ring_make(spec: Arc<RingSpec>) -> Ring {
    Ring { spec }
}

impl Ring {
    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }
    pub fn zero(&self) -> RingElement {
        RingElement::zero(&self.spec)
    }
    pub fn one(&self) -> RingElement {
        RingElement::one(&self.spec)
    }
    pub fn u(&self, i: usize) -> RingElement {
        RingElement::u(&self.spec, i)
    }
    pub fn p(&self, i: usize) -> RingElement {
        RingElement::p(&self.spec, i)
    }
}

/// Adams operation: the ring endomorphism `P_i ↦ P_i^k`.
///
/// `k = 0` sends every `P_i` to 1, i.e. projects onto the scalar part.
pub fn adams(k: i64, a: &RingElement) -> RingElement {
    let spec = a.spec.clone();
    let one = RingElement::one(&spec);
    let images: Vec<_> = (0..spec.num_generators())
        .map(|i| &one - &RingElement::p(&spec, i).pow(k).unwrap())
        .collect();
    a.substitute(&images)
}

/// `∏_i P_i^{a_i}`.
pub fn line_class(spec: &Arc<RingSpec>, exponents: &[i64]) -> Result<RingElement> {
    check_arity(spec, exponents.len())?;
    let mut acc = RingElement::one(spec);
    for (i, &e) in exponents.iter().enumerate() {
        if e != 0 {
            acc = &acc * &RingElement::p(spec, i).pow(e)?;
        }
    }
    Ok(acc)
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.spec.num_generators();
        let mut out = String::new();
        for (exps, c) in self.terms() {
            let mono: String = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let var = if k == 1 {
                        "u".to_string()
                    } else {
                        format!("u{}", i + 1)
                    };
                    if e == 1 {
                        var
                    } else {
                        format!("{var}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            let neg = c < &Rational::zero();
            if !out.is_empty() {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let a = if neg { -c } else { c.clone() };
            match (mono.is_empty(), a.is_one()) {
                (true, _) => out.push_str(&a.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => out.push_str(&format!("{a}*{mono}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Serialize, Deserialize)]
struct RingElementJson {
    spec: Vec<u32>,
    terms: Vec<(Vec<u32>, String)>,
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RingElementJson {
            spec: self.spec.orders.clone(),
            terms: self
                .terms()
                .map(|(e, c)| (e, rational::to_string(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RingElementJson::deserialize(d)?;
        let spec = RingSpec::new(j.spec).map_err(D::Error::custom)?;
        let mut out = RingElement::zero(&spec);
        for (exps, c) in j.terms {
            check_arity(&spec, exps.len()).map_err(D::Error::custom)?;
            let c = rational::parse(&c).map_err(D::Error::custom)?;
            let i = spec.encode(&exps).ok_or_else(|| {
                D::Error::custom(format!("exponent {exps:?} exceeds nilpotency bound"))
            })?;
            out.coeffs[i] += c;
        }
        Ok(out)
    }
}
