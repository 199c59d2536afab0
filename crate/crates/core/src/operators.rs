//! Operator identities checked as exact truncated algebra: q-Gamma
//! telescoping, Euler–Maclaurin with Bernoulli data, Möbius inversion and
//! pole cancellation at `q = 1`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffring::{line_class, RingElement, RingSpec};
use crate::exactnum::rational::{self, int, Rational};
use crate::exactnum::{CyclotomicNumber, QPoly};
use crate::ifunctions::{
    i_toric_fibration, j_product, j_projective, lefschetz_modify, ToricFibrationSpec,
};
use crate::qring::{qf_equal, LaurentPoly, QFunction};
use crate::{Error, Result};

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, i| acc * int(i))
}

fn binomial(n: usize, k: usize) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Bernoulli numbers with `B_1 = +1/2` (from `t/(1 - e^{-t})`) and the
/// Bernoulli polynomials of `t e^{tx}/(e^t - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliTable {
    pub numbers: Vec<Rational>,
    pub polynomials: Vec<QPoly>,
}

/// `B_0..B_{2M}` and `B_0(x)..B_M(x)`.
pub fn bernoulli(m: usize) -> BernoulliTable {
    // (1 - e^{-t})/t = Σ_j (-1)^j t^j/(j+1)!, so
    // Σ_{j=0}^{n} (-1)^j/(j+1)! · B_{n-j}/(n-j)! = [n = 0].
    let top = 2 * m;
    let mut numbers: Vec<Rational> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut acc = if n == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
        for j in 1..=n {
            let c = factorial(j + 1).recip() * &numbers[n - j] / factorial(n - j);
            if j % 2 == 1 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        numbers.push(acc * factorial(n));
    }
    // B_m(x) = Σ_j C(m,j) (-1)^j B_j x^{m-j}
    let polynomials = (0..=m)
        .map(|deg| {
            let mut c = vec![Rational::zero(); deg + 1];
            for (j, b) in numbers.iter().enumerate().take(deg + 1) {
                let s = if j % 2 == 1 { -b.clone() } else { b.clone() };
                c[deg - j] = binomial(deg, j) * s;
            }
            QPoly::new(c)
        })
        .collect();
    BernoulliTable {
        numbers,
        polynomials,
    }
}

impl BernoulliTable {
    pub fn order(&self) -> usize {
        self.polynomials.len() - 1
    }

    /// `(Σ B_m(x) t^m/m!)·(e^t - 1)/t = e^{tx}` coefficient-wise in `t`
    /// through `t^M`, as polynomials in `x`.
    pub fn check_generating_function(&self) -> bool {
        let m = self.order();
        (0..=m).all(|n| {
            let mut lhs = QPoly::zero();
            for j in 0..=n {
                // (e^t - 1)/t has t^j coefficient 1/(j+1)!
                let c = (factorial(n - j) * factorial(j + 1)).recip();
                lhs = &lhs + &self.polynomials[n - j].scale(&c);
            }
            lhs == QPoly::monomial(factorial(n).recip(), n)
        })
    }
}

/// Euler–Maclaurin expansion of `Σ_{r≥1} e^{-rz∂} (z∂)^{-1} f`, keyed by the
/// power of `z` from `-1` through `z_order`.
pub type EmExpansion = BTreeMap<i64, QPoly>;

/// `∫_0^x f/z - f/2 + Σ_k B_{2k}/(2k)! f^{(2k-1)} z^{2k-1}`.
pub fn euler_maclaurin(f: &QPoly, z_order: usize) -> EmExpansion {
    let mut out = EmExpansion::new();
    let mut put = |e: i64, p: QPoly| {
        if !p.is_zero() && e <= z_order as i64 {
            out.insert(e, p);
        }
    };
    put(-1, f.integral());
    put(0, f.scale(&Rational::new((-1).into(), 2.into())));
    let table = bernoulli(z_order.div_ceil(2).max(1));
    let mut deriv = f.derivative();
    let mut k = 1;
    while !deriv.is_zero() && 2 * k - 1 <= z_order {
        put(
            2 * k as i64 - 1,
            deriv.scale(&(&table.numbers[2 * k] / factorial(2 * k))),
        );
        deriv = deriv.derivative().derivative();
        k += 1;
    }
    out
}

/// Applies `Σ_n B_n (-z∂)^n/n!` (the series of `z∂/(e^{z∂} - 1)`) to
/// `∫_0^x f / z` and compares with `euler_maclaurin`.
pub fn euler_maclaurin_oracle_check(f: &QPoly, z_order: usize) -> bool {
    let table = bernoulli((z_order + 1).div_ceil(2) + 1);
    let mut oracle = EmExpansion::new();
    let mut d = f.integral();
    for n in 0..=z_order + 1 {
        if d.is_zero() {
            break;
        }
        let sign = if n % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        let c = sign * &table.numbers[n] / factorial(n);
        let term = d.scale(&c);
        if !term.is_zero() {
            oracle.insert(n as i64 - 1, term);
        }
        d = d.derivative();
    }
    oracle.retain(|&e, _| e <= z_order as i64);
    oracle == euler_maclaurin(f, z_order)
}

/// `1/(k(1 - q^k))` for `k = 1..=M`, the coefficients of `log Γ_q(x)`.
pub fn gamma_log(m: usize) -> Result<Vec<QFunction>> {
    let pt = RingSpec::point();
    (1..=m)
        .map(|k| {
            Ok(
                QFunction::inverse_factor(RingElement::one(&pt), k as u32, 1)?
                    .scale(&RingElement::scalar(&pt, int(k as i64).recip())),
            )
        })
        .collect()
}

/// Coefficients of `log Γ_{q^{-1}}(x)`: `1/(k(1 - q^{-k})) = -q^k/(k(1 - q^k))`.
pub fn gamma_log_inverse(m: usize) -> Result<Vec<QFunction>> {
    let pt = RingSpec::point();
    Ok(gamma_log(m)?
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.shift(i as i64 + 1).scale(&RingElement::from_int(&pt, -1)))
        .collect())
}

/// Per `x^k`: coefficient of `log Γ_{q^{-1}}(x) - log Γ_{q^{-1}}(x q^m)`.
fn gamma_ratio_log(m: u32, x_degree: usize) -> Result<Vec<QFunction>> {
    let pt = RingSpec::point();
    gamma_log_inverse(x_degree)?
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let k = i as i64 + 1;
            c.try_sub(&c.shift(m as i64 * k))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| {
            v.into_iter()
                .map(|c| if c.is_zero() { QFunction::zero(&pt) } else { c })
                .collect()
        })
}

/// `log Γ_{q^{-1}}(x) - log Γ_{q^{-1}}(x q^m) = Σ_{r=1}^{m} log(1 - x q^r)`
/// through `x^M`.
pub fn gamma_telescoping_check(m: u32, x_degree: usize) -> Result<bool> {
    let pt = RingSpec::point();
    let lhs = gamma_ratio_log(m, x_degree)?;
    Ok(lhs.iter().enumerate().all(|(i, l)| {
        let k = i as i64 + 1;
        let terms = (1..=m as i64).map(|r| (r * k, RingElement::scalar(&pt, -int(k).recip())));
        let rhs = QFunction::from_poly(LaurentPoly::from_terms(&pt, terms).unwrap());
        qf_equal(l, &rhs)
    }))
}

/// `exp` of an `x`-series with zero constant term, through `x^n`.
fn exp_series(g: &[QFunction], n: usize) -> Result<Vec<QFunction>> {
    let pt = RingSpec::point();
    let mut f = vec![QFunction::one(&pt)];
    // n F_n = Σ_{j=1}^{n} j G_j F_{n-j}
    for i in 1..=n {
        let mut acc = QFunction::zero(&pt);
        for j in 1..=i.min(g.len()) {
            acc = acc.try_add(
                &g[j - 1]
                    .try_mul(&f[i - j])?
                    .scale(&RingElement::from_int(&pt, j as i64)),
            )?;
        }
        f.push(
            acc.scale(&RingElement::scalar(&pt, int(i as i64).recip()))
                .cancel(),
        );
    }
    Ok(f)
}

/// The factor `∏_{r=1}^{m} (1 - x q^r)` rebuilt as `Γ_{q^{-1}}(x)/Γ_{q^{-1}}(x q^m)`
/// from the q-Gamma logarithms; coefficients in `x` as Laurent polynomials.
pub fn gamma_ratio_product(m: u32) -> Result<Vec<LaurentPoly>> {
    let log = gamma_ratio_log(m, m as usize)?;
    exp_series(&log, m as usize)?
        .into_iter()
        .map(|c| {
            let c = c.cancel();
            if !c.denominator().is_empty() {
                return Err(Error::Precondition {
                    op: "gamma_ratio_product",
                    msg: "Γ-ratio coefficient is not a Laurent polynomial".into(),
                });
            }
            Ok(c.numerator().clone())
        })
        .collect()
}

/// Quantum Lefschetz through the `𝒟_q`-module route: for each `d ≤ D`, the
/// `Q^d` coefficient of `J_{ℙᴺ}` is multiplied by the Γ-ratio factor at
/// `x = P^l`, `m = l d` and compared with `lefschetz_modify`.
pub fn lefschetz_operator_equivalence(n: u32, l: i64, max_degree: i64) -> Result<bool> {
    if l < 1 {
        return Err(Error::InvalidSpec(format!(
            "bundle degree must be positive, got {l}"
        )));
    }
    let j = j_projective(n, max_degree)?;
    let direct = lefschetz_modify(&j, &[l], &[l])?;
    let spec = j.spec().clone();
    let pl = line_class(&spec, &[l])?;
    let results: Vec<bool> = (0..=max_degree)
        .into_par_iter()
        .map(|d| {
            let m = (l * d) as u32;
            let coeffs = gamma_ratio_product(m)?;
            let mut factor = LaurentPoly::zero(&spec);
            let mut x = RingElement::one(&spec);
            for c in &coeffs {
                let lifted = c.map_coeffs(&spec, |r| {
                    RingElement::scalar(&spec, r.scalar_part().clone())
                });
                factor = &factor + &lifted.scale(&x);
                x = &x * &pl;
            }
            let via_gamma = j.get(&[d]).mul_poly(&factor);
            Ok(qf_equal(&via_gamma, &direct.get(&[d])))
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().all(|b| b))
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Solves `l s_l = Σ_{k|l} k t_k` for `t`; `s[i]` holds `s_{i+1}`.
pub fn mobius_invert(s: &[Rational]) -> Vec<Rational> {
    (1..=s.len() as u64)
        .map(|k| {
            let mut acc = Rational::zero();
            for d in crate::exactnum::cyclotomic::divisors(k) {
                let mu = mobius(k / d);
                if mu != 0 {
                    acc += int(mu) * int(d as i64) * &s[d as usize - 1];
                }
            }
            acc / int(k as i64)
        })
        .collect()
}

/// `s_l = (1/l) Σ_{k|l} k t_k`.
pub fn mobius_forward(t: &[Rational]) -> Vec<Rational> {
    (1..=t.len() as u64)
        .map(|l| {
            let acc: Rational = crate::exactnum::cyclotomic::divisors(l)
                .into_iter()
                .map(|k| int(k as i64) * &t[k as usize - 1])
                .sum();
            acc / int(l as i64)
        })
        .collect()
}

pub fn mobius_roundtrip(s: &[Rational]) -> bool {
    mobius_forward(&mobius_invert(s)) == s
}

/// Euler-class specialization `s_l = -1/l`.
pub fn euler_specialization(l_max: usize) -> Vec<Rational> {
    (1..=l_max as i64).map(|l| -int(l).recip()).collect()
}

/// One term `scalar / (1 - η^e w^m)` tagged by a symbolic ψ-label.
#[derive(Clone, Debug)]
pub struct PoleTerm {
    pub scalar: CyclotomicNumber,
    pub zeta_exponent: i64,
    pub w_power: u64,
    pub label: String,
}

/// A sum of pole terms in `w = q^{1/k}` over `ℚ(η_k)`.
#[derive(Clone, Debug)]
pub struct PoleSeries {
    pub root_order: u64,
    terms: Vec<PoleTerm>,
}

impl PoleSeries {
    pub fn new(root_order: u64) -> Self {
        assert!(root_order >= 1);
        PoleSeries {
            root_order,
            terms: Vec::new(),
        }
    }

    /// Adds a term; zero scalars are dropped.
    pub fn push(
        &mut self,
        scalar: CyclotomicNumber,
        zeta_exponent: i64,
        w_power: u64,
        label: String,
    ) -> Result<()> {
        if scalar.order() != self.root_order {
            return Err(Error::OrderMismatch(self.root_order, scalar.order()));
        }
        if w_power == 0 {
            return Err(Error::InvalidSpec("w_power must be positive".into()));
        }
        if !scalar.is_zero() {
            self.terms.push(PoleTerm {
                scalar,
                zeta_exponent,
                w_power,
                label,
            });
        }
        Ok(())
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    /// Per-label residue at `w = 1`, up to the common factor `-1`.
    pub fn residues_at_one(&self) -> Result<BTreeMap<String, CyclotomicNumber>> {
        let k = self.root_order;
        let mut out: BTreeMap<String, CyclotomicNumber> = BTreeMap::new();
        for t in &self.terms {
            if !CyclotomicNumber::eta_pow(k, t.zeta_exponent).is_one() {
                continue;
            }
            let r = t.scalar.scale(&int(t.w_power as i64).recip());
            let e = out
                .entry(t.label.clone())
                .or_insert_with(|| CyclotomicNumber::zero(k));
            *e = e.add(&r)?;
        }
        Ok(out)
    }
}

fn rational_in(k: u64, c: Rational) -> CyclotomicNumber {
    CyclotomicNumber::from_rational(k, c)
}

fn check_multiple(k: u64, l_max: u64) -> Result<()> {
    if k == 0 || !l_max.is_multiple_of(k) {
        return Err(Error::Precondition {
            op: "pole_series",
            msg: format!("truncation {l_max} is not a multiple of root order {k}"),
        });
    }
    Ok(())
}

/// `log R_η - log R_k` with `s_l = -1/l`, in `w = q^{1/k}`.
pub fn pole_series_r(k: u64, l_max: u64) -> Result<PoleSeries> {
    check_multiple(k, l_max)?;
    let mut ps = PoleSeries::new(k);
    for l in 1..=l_max {
        let li = l as i64;
        ps.push(
            rational_in(k, -int(li).recip()),
            -li,
            l,
            format!("ψ^{l} E^∨"),
        )?;
    }
    for lp in 1..=l_max / k {
        ps.push(
            rational_in(k, int(lp as i64).recip()),
            0,
            lp * k * k,
            format!("ψ^{} E^∨", lp * k),
        )?;
    }
    Ok(ps)
}

/// `log(□_η □_k^{-1})` in `w = q^{1/k}`.
pub fn pole_series_box(k: u64, l_max: u64) -> Result<PoleSeries> {
    check_multiple(k, l_max)?;
    let mut ps = PoleSeries::new(k);
    for i in 1..=l_max {
        let ii = i as i64;
        ps.push(
            rational_in(k, int(ii).recip()),
            -ii,
            i,
            format!("ψ^{i} T^∨"),
        )?;
    }
    for i in 1..=l_max / k {
        ps.push(
            rational_in(k, -int(i as i64).recip()),
            0,
            i * k * k,
            format!("ψ^{} T^∨", i * k),
        )?;
    }
    Ok(ps)
}

/// True iff every label's residue at `w = 1` vanishes.
pub fn check_regular_at_one(ps: &PoleSeries) -> Result<bool> {
    Ok(ps
        .residues_at_one()?
        .values()
        .all(CyclotomicNumber::is_zero))
}

/// Outcome of one named identity check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn new(suite: &str, name: String, outcome: Result<bool>) -> Self {
        let (passed, detail) = match outcome {
            Ok(b) => (b, None),
            Err(e) => (false, Some(e.to_string())),
        };
        CheckResult {
            suite: suite.into(),
            name,
            passed,
            detail,
        }
    }
}

pub fn suite_gamma(x_degree: usize) -> Vec<CheckResult> {
    (0..=5)
        .map(|m| {
            CheckResult::new(
                "gamma",
                format!("telescoping m={m} M={x_degree}"),
                gamma_telescoping_check(m, x_degree),
            )
        })
        .collect()
}

pub fn suite_em(z_order: usize) -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = (0..=6)
        .map(|j| {
            let f = QPoly::monomial(Rational::one(), j);
            CheckResult::new(
                "em",
                format!("x^{j} z-order {z_order}"),
                Ok(euler_maclaurin_oracle_check(&f, z_order)),
            )
        })
        .collect();
    let t = bernoulli(z_order);
    out.push(CheckResult::new(
        "em",
        format!("bernoulli generating function M={z_order}"),
        Ok(t.check_generating_function()),
    ));
    out
}

/// Euler case plus a deterministic pseudo-random roundtrip batch.
pub fn suite_mobius(l_max: usize, samples: usize, seed: u64) -> Vec<CheckResult> {
    let t = mobius_invert(&euler_specialization(l_max));
    let euler_ok = t.iter().enumerate().all(|(i, x)| {
        if i == 0 {
            *x == -Rational::one()
        } else {
            x.is_zero()
        }
    });
    let mut out = vec![CheckResult::new(
        "mobius",
        format!("euler case L={l_max}"),
        Ok(euler_ok),
    )];
    let mut state = seed;
    let mut next = || {
        // splitmix64
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let all = (0..samples).all(|_| {
        let len = 1 + (next() % l_max as u64) as usize;
        let s: Vec<Rational> = (0..len)
            .map(|_| {
                let num = (next() % 201) as i64 - 100;
                let den = 1 + (next() % 30) as i64;
                Rational::new(num.into(), den.into())
            })
            .collect();
        mobius_roundtrip(&s)
    });
    out.push(CheckResult::new(
        "mobius",
        format!("roundtrip {samples} random inputs L≤{l_max}"),
        Ok(all),
    ));
    out
}

pub fn suite_poles(ks: &[u64]) -> Vec<CheckResult> {
    ks.iter()
        .flat_map(|&k| {
            let l = 12 * k;
            [
                CheckResult::new(
                    "poles",
                    format!("R k={k} L={l}"),
                    pole_series_r(k, l).and_then(|p| check_regular_at_one(&p)),
                ),
                CheckResult::new(
                    "poles",
                    format!("box k={k} L={l}"),
                    pole_series_box(k, l).and_then(|p| check_regular_at_one(&p)),
                ),
            ]
        })
        .collect()
}

/// The toric presentation of `ℙ^{N_1} × … × ℙ^{N_K}` (charge matrix of
/// block rows of ones over a point) against the product J-function.
pub fn toric_product_consistency(dims: &[u32], max_degree: i64) -> Result<bool> {
    let total: u32 = dims.iter().map(|n| n + 1).sum();
    let mut m = Vec::new();
    let mut col = 0;
    for &n in dims {
        let mut row = vec![0; total as usize];
        for c in row.iter_mut().skip(col).take(n as usize + 1) {
            *c = 1;
        }
        col += n as usize + 1;
        m.push(row);
    }
    let orders = dims.iter().map(|n| n + 1).collect();
    let spec = ToricFibrationSpec::over_point(m, orders, vec![(0, max_degree); dims.len()])?;
    Ok(i_toric_fibration(&spec)?.equals(&j_product(dims, max_degree)?))
}

pub fn suite_toric(max_degree: i64) -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = (1..=3)
        .map(|n| {
            CheckResult::new(
                "toric",
                format!("ℙ^{n} presentation D={max_degree}"),
                toric_product_consistency(&[n], max_degree),
            )
        })
        .collect();
    out.push(CheckResult::new(
        "toric",
        format!("ℙ^1×ℙ^1 presentation D={max_degree}"),
        toric_product_consistency(&[1, 1], max_degree),
    ));
    out
}

pub fn suite_lefschetz(max_degree: i64) -> Vec<CheckResult> {
    [(4u32, 5i64), (1, 1), (2, 3)]
        .iter()
        .map(|&(n, l)| {
            CheckResult::new(
                "lefschetz-equiv",
                format!("N={n} l={l} D={max_degree}"),
                lefschetz_operator_equivalence(n, l, max_degree),
            )
        })
        .collect()
}

/// Renders a rational for reports.
pub fn fmt_rational(r: &Rational) -> String {
    rational::to_string(r)
}
