//! The cyclotomic fields ℚ(η) = ℚ[x]/Φ_k(x), η a primitive k-th root of unity.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::QPoly;
use super::rational::Rational;
use crate::Error;

/// Divisors of `k` in increasing order.
pub fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|d| k.is_multiple_of(*d)).collect()
}

fn cyclotomic_qpoly(k: u64) -> QPoly {
    assert!(k >= 1, "cyclotomic order must be positive");
    // x^k - 1
    let mut num = QPoly::monomial(Rational::one(), k as usize);
    num = &num - &QPoly::one();
    for d in divisors(k) {
        if d < k {
            let (quo, rem) = num.div_rem(&cyclotomic_qpoly(d));
            debug_assert!(rem.is_zero());
            num = quo;
        }
    }
    num
}

/// Φ_k as ascending integer coefficients.
pub fn cyclotomic_polynomial(k: u64) -> Vec<BigInt> {
    cyclotomic_qpoly(k)
        .coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Field {
    order: u64,
    modulus: QPoly,
}

/// An element of ℚ(η_k), stored as its reduced polynomial in η.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    field: Arc<Field>,
    // length == deg Φ_k
    coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Mul,
    Div,
}

impl CyclotomicNumber {
    fn from_poly(field: Arc<Field>, p: &QPoly) -> Self {
        let r = p.div_rem(&field.modulus).1;
        let n = field.modulus.degree().unwrap();
        let coeffs = (0..n).map(|i| r.coeff(i)).collect();
        CyclotomicNumber { field, coeffs }
    }

    fn field_for(order: u64) -> Arc<Field> {
        Arc::new(Field {
            order,
            modulus: cyclotomic_qpoly(order),
        })
    }

    pub fn from_rational(order: u64, c: Rational) -> Self {
        Self::from_poly(Self::field_for(order), &QPoly::constant(c))
    }

    pub fn zero(order: u64) -> Self {
        Self::from_rational(order, Rational::zero())
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// η^e for any integer e.
    pub fn eta_pow(order: u64, e: i64) -> Self {
        let e = e.rem_euclid(order as i64) as usize;
        Self::from_poly(Self::field_for(order), &QPoly::monomial(Rational::one(), e))
    }

    /// Element with the given coefficients in η (any length; reduced).
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Self {
        Self::from_poly(Self::field_for(order), &QPoly::new(coeffs))
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| if i == 0 { c.is_one() } else { c.is_zero() })
    }

    fn poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    fn check(&self, other: &Self) -> Result<(), Error> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(Self::from_poly(
            self.field.clone(),
            &(&self.poly() + &other.poly()),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(Self::from_poly(
            self.field.clone(),
            &(&self.poly() - &other.poly()),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::from_poly(self.field.clone(), &-&self.poly())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(Self::from_poly(
            self.field.clone(),
            &(&self.poly() * &other.poly()),
        ))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_poly(self.field.clone(), &self.poly().scale(c))
    }

    /// Inverse via the extended gcd against Φ_k.
    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.poly().ext_gcd(&self.field.modulus);
        // Φ_k is irreducible, so any nonzero reduced element is coprime to it.
        debug_assert_eq!(g, QPoly::one());
        Ok(Self::from_poly(self.field.clone(), &s))
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        self.mul(&other.inv()?)
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = super::format::poly_ascending(&self.coeffs, "η", true);
        f.write_str(&s)
    }
}

pub fn cyc_arith(
    a: &CyclotomicNumber,
    b: &CyclotomicNumber,
    op: CycOp,
) -> Result<CyclotomicNumber, Error> {
    match op {
        CycOp::Add => a.add(b),
        CycOp::Mul => a.mul(b),
        CycOp::Div => a.div(b),
    }
}

/// Polynomials in x over ℚ(η), ascending coefficients.
fn cyc_poly_mul(a: &[CyclotomicNumber], b: &[CyclotomicNumber], k: u64) -> Vec<CyclotomicNumber> {
    let mut out = vec![CyclotomicNumber::zero(k); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y).unwrap()).unwrap();
        }
    }
    out
}

/// Checks `(Σ_{i<k} η^{-il} x^i)(η^{-l} x - 1) = x^k - 1` in ℚ(η)[x],
/// comparing every coefficient up to `max(k, degree_bound)`.
pub fn check_root_sum_identity(k: u64, l: i64, degree_bound: usize) -> bool {
    assert!(k >= 1);
    let geometric: Vec<_> = (0..k as i64)
        .map(|i| CyclotomicNumber::eta_pow(k, -i * l))
        .collect();
    let linear = vec![
        CyclotomicNumber::one(k).neg(),
        CyclotomicNumber::eta_pow(k, -l),
    ];
    let lhs = cyc_poly_mul(&geometric, &linear, k);
    let top = (k as usize).max(degree_bound);
    (0..=top).all(|i| {
        let expected = if i == 0 {
            CyclotomicNumber::one(k).neg()
        } else if i == k as usize {
            CyclotomicNumber::one(k)
        } else {
            CyclotomicNumber::zero(k)
        };
        let got = lhs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CyclotomicNumber::zero(k));
        got == expected
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
    }

    #[test]
    fn eta_relations() {
        for k in 1..=8u64 {
            assert!(CyclotomicNumber::eta_pow(k, k as i64).is_one());
            assert!(CyclotomicNumber::eta_pow(k, -(k as i64) * 3).is_one());
        }
        // 1 + η + η² = 0 for k = 3
        let s = (0..3).fold(CyclotomicNumber::zero(3), |acc, i| {
            acc.add(&CyclotomicNumber::eta_pow(3, i)).unwrap()
        });
        assert!(s.is_zero());
    }

    #[test]
    fn arithmetic_examples() {
        let eta2 = CyclotomicNumber::eta_pow(2, 1);
        assert!(eta2.mul(&eta2).unwrap().is_one());

        // (1+η)(1+η²) with η² = -1: (1+η)·0 = 0
        let a = CyclotomicNumber::from_coeffs(4, vec![int(1), int(1)]);
        let b = CyclotomicNumber::from_coeffs(4, vec![int(1), int(0), int(1)]);
        assert!(b.is_zero());
        assert!(cyc_arith(&a, &b, CycOp::Mul).unwrap().is_zero());

        let c = CyclotomicNumber::from_coeffs(5, vec![rat(1, 2), int(-3), int(0), int(2)]);
        assert!(cyc_arith(&c, &c, CycOp::Div).unwrap().is_one());
    }

    #[test]
    fn errors() {
        let a = CyclotomicNumber::one(3);
        let b = CyclotomicNumber::one(4);
        assert!(matches!(a.add(&b), Err(Error::OrderMismatch(3, 4))));
        let z = CyclotomicNumber::zero(3);
        assert!(matches!(a.div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn root_sums() {
        assert!(check_root_sum_identity(1, 7, 1));
        assert!(check_root_sum_identity(2, 1, 2));
        assert!(check_root_sum_identity(3, 3, 3));
    }
}
