//! Generators for explicit J- and I-function series.
//!
//! * `j_projective` / `j_product`: the small J-function of `ℙᴺ` (or a
//!   product of projective spaces) at zero input.
//! * `lefschetz_modify` / `i_complete_intersection`: the hypergeometric
//!   modification `Q^d ↦ Q^d ∏_{r=1}^{⟨c₁(L),d⟩} (1 - L^∨ q^r)` for convex
//!   line bundles.
//! * `i_toric_fibration`: the I-function of a toric fibration `E → B` built
//!   from a point on the cone of the base.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffring::{line_class, RingElement, RingSpec};
use crate::qring::{DenFactor, LaurentPoly, QFunction};
use crate::series::{series_map, NovikovSeries, Truncation};
use crate::{Error, Result};

/// `1 - q` over the given ring.
pub fn dilaton(spec: &Arc<RingSpec>) -> LaurentPoly {
    LaurentPoly::one_minus(&RingElement::one(spec), 1)
}

/// J-function of `ℙ^{N_1} × … × ℙ^{N_K}`:
/// `(1-q) Σ_d Q^d / ∏_i ∏_{r=1}^{d_i} (1 - P_i q^r)^{N_i+1}`, all `d_i ≤ max_degree`.
pub fn j_product(dims: &[u32], max_degree: i64) -> Result<NovikovSeries> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidSpec(format!(
            "projective dimensions must be positive, got {dims:?}"
        )));
    }
    if max_degree < 0 {
        return Err(Error::InvalidSpec("truncation must be nonnegative".into()));
    }
    let spec = RingSpec::new(dims.iter().map(|n| n + 1).collect())?;
    let mut s = NovikovSeries::new(&spec, vec![(0, max_degree); dims.len()])?;
    for d in degree_box(&s.truncation().clone()) {
        let mut den = Vec::new();
        for (i, (&di, &n)) in d.iter().zip(dims).enumerate() {
            let p = RingElement::p(&spec, i);
            for r in 1..=di as u32 {
                den.push(DenFactor::new(p.clone(), r, n + 1)?);
            }
        }
        s.insert(d, QFunction::new(dilaton(&spec), den)?)?;
    }
    Ok(s)
}

/// J-function of `ℙᴺ` through `Q^max_degree`.
pub fn j_projective(n: u32, max_degree: i64) -> Result<NovikovSeries> {
    j_product(&[n], max_degree)
}

/// All multidegrees in a truncation window, in lexicographic order.
pub fn degree_box(trunc: &Truncation) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in trunc {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// `∏_{r=lo}^{hi} (1 - c q^r)` as a Laurent polynomial (1 if `lo > hi`).
pub fn q_product(c: &RingElement, lo: i64, hi: i64) -> LaurentPoly {
    (lo..=hi).fold(LaurentPoly::one(c.spec()), |acc, r| {
        &acc * &LaurentPoly::one_minus(c, r)
    })
}

/// Multiplies the `Q^d` coefficient by `∏_{r=1}^{⟨c₁(L),d⟩} (1 - L^∨ q^r)`,
/// where `L^∨ = ∏ P_i^{dual_exponents[i]}` and `⟨c₁(L),d⟩ = Σ pairing[i]·d_i`.
pub fn lefschetz_modify(
    s: &NovikovSeries,
    dual_exponents: &[i64],
    pairing: &[i64],
) -> Result<NovikovSeries> {
    if pairing.len() != s.num_vars() {
        return Err(Error::ArityMismatch {
            expected: s.num_vars(),
            got: pairing.len(),
        });
    }
    let dual = line_class(s.spec(), dual_exponents)?;
    series_map(s, |d, f| {
        let m: i64 = d.iter().zip(pairing).map(|(a, b)| a * b).sum();
        if m < 0 {
            return Err(Error::Precondition {
                op: "lefschetz_modify",
                msg: format!("negative pairing {m} at degree {d:?}; bundle is not convex"),
            });
        }
        Ok(f.mul_poly(&q_product(&dual, 1, m)))
    })
}

/// A complete intersection in `ℙ^{N_1} × … × ℙ^{N_K}` cut out by sections of
/// line bundles `O(l_1, …, l_K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometrySpec {
    /// Projective dimensions `N_i` of the ambient factors.
    pub ambient: Vec<u32>,
    /// Multidegree of each line bundle, one entry per ambient factor.
    pub bundles: Vec<Vec<i64>>,
    /// Novikov truncation (maximum degree per variable).
    pub trunc: i64,
}

impl GeometrySpec {
    /// Complete intersection of hypersurfaces of the given degrees in `ℙᴺ`.
    pub fn projective(n: u32, degrees: &[i64], trunc: i64) -> Self {
        GeometrySpec {
            ambient: vec![n],
            bundles: degrees.iter().map(|&l| vec![l]).collect(),
            trunc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient.is_empty() || self.ambient.contains(&0) {
            return Err(Error::InvalidSpec(
                "ambient dimensions must be positive".into(),
            ));
        }
        for b in &self.bundles {
            if b.len() != self.ambient.len() {
                return Err(Error::InvalidSpec(format!(
                    "bundle degree {b:?} has wrong length for ambient {:?}",
                    self.ambient
                )));
            }
            if b.iter().any(|&l| l < 0) || b.iter().all(|&l| l == 0) {
                return Err(Error::InvalidSpec(format!(
                    "bundle degrees must be nonnegative and not all zero, got {b:?}"
                )));
            }
        }
        if self.trunc < 0 {
            return Err(Error::InvalidSpec("truncation must be nonnegative".into()));
        }
        Ok(())
    }

    /// Dimension of the complete intersection.
    pub fn dimension(&self) -> i64 {
        self.ambient.iter().map(|&n| n as i64).sum::<i64>() - self.bundles.len() as i64
    }
}

/// `J` of the ambient space followed by one Lefschetz modification per bundle.
pub fn i_complete_intersection(spec: &GeometrySpec) -> Result<NovikovSeries> {
    spec.validate()?;
    let mut s = j_product(&spec.ambient, spec.trunc)?;
    for l in &spec.bundles {
        // O(l)^∨ = ∏ P_i^{l_i}, ⟨c₁(O(l)), d⟩ = Σ l_i d_i
        s = lefschetz_modify(&s, l, l)?;
    }
    Ok(s)
}

/// Data for the I-function of a toric fibration with fiber `ℂᴺ // T^K`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToricFibrationSpec {
    /// `K × N` charge matrix `m_{ij}`.
    pub m_matrix: Vec<Vec<i64>>,
    /// Nilpotency orders of the fiber classes `𝒫_i` in the coefficient ring.
    pub fiber_orders: Vec<u32>,
    /// A point on the cone of the base `B`.
    pub base_series: NovikovSeries,
    /// `L_j^∨` as exponents of the base ring generators, one row per `j`.
    pub bundle_dual_exponents: Vec<Vec<i64>>,
    /// `⟨c₁(L_j), D⟩ = Σ_b bundle_base_degrees[j][b]·D_b`, one row per `j`.
    pub bundle_base_degrees: Vec<Vec<i64>>,
    /// Two-sided window for the fiber degrees `d ∈ ℤ^K`.
    pub fiber_truncation: Truncation,
}

impl ToricFibrationSpec {
    /// A toric variety: base is a point and all `L_j` are trivial.
    pub fn over_point(
        m_matrix: Vec<Vec<i64>>,
        fiber_orders: Vec<u32>,
        fiber_truncation: Truncation,
    ) -> Result<Self> {
        let pt = RingSpec::point();
        let mut base = NovikovSeries::new(&pt, vec![(0, 0)])?;
        base.insert(vec![0], QFunction::from_poly(dilaton(&pt)))?;
        let n = m_matrix.first().map_or(0, Vec::len);
        Ok(ToricFibrationSpec {
            m_matrix,
            fiber_orders,
            base_series: base,
            bundle_dual_exponents: vec![vec![0]; n],
            bundle_base_degrees: vec![vec![0]; n],
            fiber_truncation,
        })
    }

    pub fn k(&self) -> usize {
        self.m_matrix.len()
    }

    pub fn n(&self) -> usize {
        self.m_matrix.first().map_or(0, Vec::len)
    }

    fn base_is_point(&self) -> bool {
        self.base_series.spec().rank() == 1
    }

    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.k(), self.n());
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if k == 0 || n == 0 {
            return bad("charge matrix must be nonempty".into());
        }
        if self.m_matrix.iter().any(|row| row.len() != n) {
            return bad("charge matrix rows have unequal length".into());
        }
        if self.fiber_orders.len() != k {
            return bad(format!("expected {k} fiber nilpotency orders"));
        }
        if self.fiber_truncation.len() != k {
            return bad(format!("expected {k} fiber truncation windows"));
        }
        let base_gens = self.base_series.spec().num_generators();
        let base_vars = self.base_series.num_vars();
        if self.bundle_dual_exponents.len() != n
            || self
                .bundle_dual_exponents
                .iter()
                .any(|r| r.len() != base_gens)
        {
            return bad(format!("bundle_dual_exponents must be {n} × {base_gens}"));
        }
        if self.bundle_base_degrees.len() != n
            || self
                .bundle_base_degrees
                .iter()
                .any(|r| r.len() != base_vars)
        {
            return bad(format!("bundle_base_degrees must be {n} × {base_vars}"));
        }
        if self.base_is_point()
            && self
                .base_series
                .iter()
                .any(|(d, _)| d.iter().any(|&x| x != 0))
        {
            return bad("a point base only has degree-0 data".into());
        }
        Ok(())
    }

    /// Ring of the total space: fiber generators followed by the base ones
    /// (the base is omitted when it is a point).
    pub fn total_ring(&self) -> Result<Arc<RingSpec>> {
        let mut orders = self.fiber_orders.clone();
        if !self.base_is_point() {
            orders.extend_from_slice(self.base_series.spec().orders());
        }
        RingSpec::new(orders)
    }

    fn total_truncation(&self) -> Truncation {
        let mut t = self.fiber_truncation.clone();
        if !self.base_is_point() {
            t.extend(self.base_series.truncation().iter().copied());
        }
        t
    }
}

/// `U_j(𝒟) = Σ_i d_i m_{ij} + ⟨c₁(L_j), D⟩` for each `j`.
pub fn toric_u_degree(spec: &ToricFibrationSpec, d: &[i64], base_degree: &[i64]) -> Vec<i64> {
    (0..spec.n())
        .map(|j| {
            let fiber: i64 = d
                .iter()
                .zip(&spec.m_matrix)
                .map(|(di, row)| di * row[j])
                .sum();
            let base: i64 = base_degree
                .iter()
                .zip(&spec.bundle_base_degrees[j])
                .map(|(a, b)| a * b)
                .sum();
            fiber + base
        })
        .collect()
}

/// `U_j(𝒫) = ∏_i 𝒫_i^{m_{ij}} · L_j^∨` in the total ring.
pub fn toric_u_class(
    spec: &ToricFibrationSpec,
    ring: &Arc<RingSpec>,
    j: usize,
) -> Result<RingElement> {
    let k = spec.k();
    let mut exps: Vec<i64> = spec.m_matrix.iter().map(|row| row[j]).collect();
    if ring.num_generators() > k {
        exps.extend_from_slice(&spec.bundle_dual_exponents[j]);
    }
    line_class(ring, &exps)
}

/// The I-function of the toric fibration. Each doubly infinite product is
/// reduced to its finite part:
///
/// * `U_j(𝒟) > 0`: `1 / ∏_{r=1}^{U_j(𝒟)} (1 - U_j(𝒫) q^r)`
/// * `U_j(𝒟) = 0`: `1`
/// * `U_j(𝒟) < 0`: `∏_{r=U_j(𝒟)+1}^{0} (1 - U_j(𝒫) q^r)`
pub fn i_toric_fibration(spec: &ToricFibrationSpec) -> Result<NovikovSeries> {
    spec.validate()?;
    let ring = spec.total_ring()?;
    let k = spec.k();
    let base_positions: Vec<usize> = (k..ring.num_generators()).collect();
    let u_classes = (0..spec.n())
        .map(|j| toric_u_class(spec, &ring, j))
        .collect::<Result<Vec<_>>>()?;

    let base_coeffs: Vec<(Vec<i64>, QFunction)> = spec
        .base_series
        .iter()
        .map(|(d, f)| {
            let g = if spec.base_is_point() {
                f.map_coeffs(&ring, |c| {
                    RingElement::scalar(&ring, c.scalar_part().clone())
                })?
            } else {
                f.map_coeffs(&ring, |c| c.embed(&ring, &base_positions).unwrap())?
            };
            Ok((d.clone(), g))
        })
        .collect::<Result<_>>()?;

    let fiber_degrees = degree_box(&spec.fiber_truncation);
    let jobs: Vec<_> = fiber_degrees
        .iter()
        .flat_map(|d| base_coeffs.iter().map(move |b| (d, b)))
        .collect();

    let coeffs: Vec<(Vec<i64>, QFunction)> = jobs
        .par_iter()
        .map(|(d, (base_d, base_f))| {
            let u = toric_u_degree(spec, d, base_d);
            let mut num = LaurentPoly::one(&ring);
            let mut den = Vec::new();
            for (uj, class) in u.iter().zip(&u_classes) {
                if *uj > 0 {
                    for r in 1..=*uj as u32 {
                        den.push(DenFactor::new(class.clone(), r, 1)?);
                    }
                } else if *uj < 0 {
                    num = &num * &q_product(class, uj + 1, 0);
                }
            }
            let f = QFunction::new(num, den)?.try_mul(base_f)?;
            let mut deg = (*d).clone();
            if !spec.base_is_point() {
                deg.extend_from_slice(base_d);
            }
            Ok((deg, f))
        })
        .collect::<Result<_>>()?;

    let mut out = NovikovSeries::new(&ring, spec.total_truncation())?;
    for (d, f) in coeffs {
        out.insert(d, f)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::qf_equal;

    fn p_power_den(spec: &Arc<RingSpec>, d: u32, mult: u32) -> Vec<DenFactor> {
        let p = RingElement::p(spec, 0);
        (1..=d)
            .map(|r| DenFactor::new(p.clone(), r, mult).unwrap())
            .collect()
    }

    #[test]
    fn j_projective_coefficients() {
        let j = j_projective(1, 2).unwrap();
        let spec = j.spec().clone();
        assert!(qf_equal(
            &j.get(&[0]),
            &QFunction::from_poly(dilaton(&spec))
        ));
        let d1 = QFunction::new(dilaton(&spec), p_power_den(&spec, 1, 2)).unwrap();
        assert!(qf_equal(&j.get(&[1]), &d1));
        assert!(j.has_dilaton_shift());

        let j4 = j_projective(4, 2).unwrap();
        let s4 = j4.spec().clone();
        let d2 = QFunction::new(dilaton(&s4), p_power_den(&s4, 2, 5)).unwrap();
        assert!(qf_equal(&j4.get(&[2]), &d2));
        assert_eq!(j4.get(&[2]).denominator(), d2.denominator());
    }

    #[test]
    fn lefschetz_examples() {
        let j = j_projective(4, 1).unwrap();
        let i = lefschetz_modify(&j, &[5], &[5]).unwrap();
        assert!(qf_equal(&i.get(&[0]), &j.get(&[0])));
        let spec = j.spec().clone();
        let p5 = line_class(&spec, &[5]).unwrap();
        let expect = QFunction::new(
            &dilaton(&spec) * &q_product(&p5, 1, 5),
            p_power_den(&spec, 1, 5),
        )
        .unwrap();
        assert!(qf_equal(&i.get(&[1]), &expect));
        assert!(lefschetz_modify(&j, &[1], &[-1]).is_err());
    }

    #[test]
    fn hyperplane_cancels() {
        let i = i_complete_intersection(&GeometrySpec::projective(2, &[1], 1)).unwrap();
        let spec = i.spec().clone();
        let expect = QFunction::new(dilaton(&spec), p_power_den(&spec, 1, 2)).unwrap();
        assert!(qf_equal(&i.get(&[1]), &expect));
    }

    #[test]
    fn empty_bundle_list_is_ambient() {
        let i = i_complete_intersection(&GeometrySpec::projective(3, &[], 2)).unwrap();
        assert!(i.equals(&j_projective(3, 2).unwrap()));
    }

    #[test]
    fn u_degrees() {
        let id = ToricFibrationSpec::over_point(
            vec![vec![1, 0], vec![0, 1]],
            vec![1, 1],
            vec![(0, 1), (0, 1)],
        )
        .unwrap();
        assert_eq!(toric_u_degree(&id, &[3, -2], &[0]), vec![3, -2]);

        let p1 = ToricFibrationSpec::over_point(vec![vec![1, 1]], vec![2], vec![(0, 2)]).unwrap();
        assert_eq!(toric_u_degree(&p1, &[2], &[0]), vec![2, 2]);

        // P(O ⊕ O(a)) over ℙ¹ with a = 3
        let mut bundle = p1.clone();
        bundle.base_series = j_projective(1, 2).unwrap();
        bundle.bundle_dual_exponents = vec![vec![0], vec![3]];
        bundle.bundle_base_degrees = vec![vec![0], vec![3]];
        assert_eq!(toric_u_degree(&bundle, &[1], &[2]), vec![1, 7]);
    }

    #[test]
    fn toric_projective_presentation() {
        for n in 1..=3u32 {
            let spec = ToricFibrationSpec::over_point(
                vec![vec![1; n as usize + 1]],
                vec![n + 1],
                vec![(-2, 3)],
            )
            .unwrap();
            let i = i_toric_fibration(&spec).unwrap();
            let j = j_projective(n, 3).unwrap();
            for d in 0..=3 {
                assert!(qf_equal(&i.get(&[d]), &j.get(&[d])), "N={n} d={d}");
            }
            // negative degrees are killed by (1 - P)^{N+1} = 0
            assert!(i.get(&[-1]).is_zero());
            assert!(i.get(&[-2]).is_zero());
        }
    }

    #[test]
    fn toric_origin_is_dilaton() {
        let spec = ToricFibrationSpec::over_point(
            vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]],
            vec![2, 2],
            vec![(0, 1), (0, 1)],
        )
        .unwrap();
        let i = i_toric_fibration(&spec).unwrap();
        assert!(qf_equal(
            &i.get(&[0, 0]),
            &QFunction::from_poly(dilaton(i.spec()))
        ));
    }

    #[test]
    fn projective_bundle_over_p1() {
        // E = P(O ⊕ O(a)) over ℙ¹; fiber class P_F, base class P_B.
        let a = 1;
        let mut spec =
            ToricFibrationSpec::over_point(vec![vec![1, 1]], vec![2], vec![(-1, 1)]).unwrap();
        spec.base_series = j_projective(1, 1).unwrap();
        spec.bundle_dual_exponents = vec![vec![0], vec![a]];
        spec.bundle_base_degrees = vec![vec![0], vec![a]];
        let i = i_toric_fibration(&spec).unwrap();
        let ring = i.spec().clone();
        assert_eq!(ring.orders(), &[2, 2]);
        // (d, D) = (1, 1): U = (1, 1 + a) = (1, 2)
        let pf = RingElement::p(&ring, 0);
        let pb = RingElement::p(&ring, 1);
        let u2 = &pf * &pb;
        let expect = QFunction::new(
            dilaton(&ring),
            vec![
                DenFactor::new(pb.clone(), 1, 2).unwrap(),
                DenFactor::new(pf.clone(), 1, 1).unwrap(),
                DenFactor::new(u2.clone(), 1, 1).unwrap(),
                DenFactor::new(u2, 2, 1).unwrap(),
            ],
        )
        .unwrap();
        assert!(qf_equal(&i.get(&[1, 1]), &expect));
        // (d, D) = (-1, 1): U = (-1, 0) gives the numerator factor (1 - P_F)
        let expect = QFunction::new(
            &dilaton(&ring) * &LaurentPoly::one_minus(&pf, 0),
            vec![DenFactor::new(pb, 1, 2).unwrap()],
        )
        .unwrap();
        assert!(qf_equal(&i.get(&[-1, 1]), &expect));
        assert!(!expect.is_zero());
    }
}
