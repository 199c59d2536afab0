//! Novikov-truncated series `Σ_d Q^d f_d(q)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffring::RingSpec;
use crate::qring::{qf_adams, split_polarization, QFunction};
use crate::{Error, Result};

/// Per-variable inclusive degree window `[lo, hi]`.
pub type Truncation = Vec<(i64, i64)>;

#[derive(Clone, Debug)]
pub struct NovikovSeries {
    spec: Arc<RingSpec>,
    truncation: Truncation,
    // only nonzero coefficients, keyed by multidegree
    coeffs: BTreeMap<Vec<i64>, QFunction>,
}

impl NovikovSeries {
    pub fn new(spec: &Arc<RingSpec>, truncation: Truncation) -> Result<Self> {
        if truncation.is_empty() {
            return Err(Error::InvalidSpec(
                "series needs at least one Novikov variable".into(),
            ));
        }
        if let Some((lo, hi)) = truncation.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidSpec(format!(
                "empty truncation window [{lo}, {hi}]"
            )));
        }
        Ok(NovikovSeries {
            spec: spec.clone(),
            truncation,
            coeffs: BTreeMap::new(),
        })
    }

    /// One Novikov variable with degrees `0..=max_degree`.
    pub fn single(spec: &Arc<RingSpec>, max_degree: i64) -> Result<Self> {
        Self::new(spec, vec![(0, max_degree)])
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn num_vars(&self) -> usize {
        self.truncation.len()
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn in_bounds(&self, d: &[i64]) -> bool {
        d.len() == self.num_vars()
            && d.iter()
                .zip(&self.truncation)
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Stores `f` at degree `d`. Zero coefficients are dropped; degrees
    /// outside the window are rejected.
    pub fn insert(&mut self, d: Vec<i64>, f: QFunction) -> Result<()> {
        if !self.in_bounds(&d) {
            return Err(Error::Precondition {
                op: "NovikovSeries::insert",
                msg: format!("degree {d:?} outside truncation {:?}", self.truncation),
            });
        }
        if f.spec() != &self.spec {
            return Err(Error::RingMismatch(
                self.spec.orders().to_vec(),
                f.spec().orders().to_vec(),
            ));
        }
        if f.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, f);
        }
        Ok(())
    }

    /// Coefficient at `d` (zero when absent).
    pub fn get(&self, d: &[i64]) -> QFunction {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(|| QFunction::zero(&self.spec))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &QFunction)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree-0 coefficient is a Laurent polynomial (dilaton shift plus an
    /// input in `𝒦₊`).
    pub fn has_dilaton_shift(&self) -> bool {
        let zero = vec![0; self.num_vars()];
        match split_polarization(&self.get(&zero)) {
            Ok((_, minus)) => minus.is_zero(),
            Err(_) => false,
        }
    }

    /// Exact coefficient-wise equality.
    pub fn equals(&self, other: &NovikovSeries) -> bool {
        if self.spec != other.spec || self.truncation != other.truncation {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter()
            .all(|d| crate::qring::qf_equal(&self.get(d), &other.get(d)))
    }

    pub fn try_add(&self, other: &NovikovSeries) -> Result<NovikovSeries> {
        if self.truncation != other.truncation {
            return Err(Error::Precondition {
                op: "NovikovSeries::add",
                msg: "truncation mismatch".into(),
            });
        }
        let mut out = self.clone();
        for (d, f) in &other.coeffs {
            let sum = out.get(d).try_add(f)?;
            out.insert(d.clone(), sum)?;
        }
        Ok(out)
    }
}

/// Applies a per-degree transform to every stored coefficient. Coefficients
/// are processed in parallel; the result does not depend on scheduling.
pub fn series_map<F>(s: &NovikovSeries, f: F) -> Result<NovikovSeries>
where
    F: Fn(&[i64], &QFunction) -> Result<QFunction> + Sync,
{
    let mapped: Vec<(Vec<i64>, QFunction)> = s
        .coeffs
        .par_iter()
        .map(|(d, c)| f(d, c).map(|v| (d.clone(), v)))
        .collect::<Result<_>>()?;
    let mut out = NovikovSeries {
        coeffs: BTreeMap::new(),
        ..s.clone()
    };
    for (d, c) in mapped {
        if c.spec() != &out.spec {
            return Err(Error::RingMismatch(
                out.spec.orders().to_vec(),
                c.spec().orders().to_vec(),
            ));
        }
        if !c.is_zero() {
            out.coeffs.insert(d, c);
        }
    }
    Ok(out)
}

/// `ψ^k` on a series: `Q^d ↦ Q^{kd}` with `qf_adams` on coefficients.
/// Degrees pushed outside the window are dropped.
pub fn series_adams(k: u32, s: &NovikovSeries) -> NovikovSeries {
    assert!(k >= 1, "series_adams needs k >= 1");
    let mut out = NovikovSeries {
        coeffs: BTreeMap::new(),
        ..s.clone()
    };
    for (d, c) in &s.coeffs {
        let kd: Vec<i64> = d.iter().map(|x| x * k as i64).collect();
        if out.in_bounds(&kd) {
            out.coeffs.insert(kd, qf_adams(k, c));
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    vars: usize,
    trunc: Vec<(i64, i64)>,
    ring: Vec<u32>,
    coeffs: Vec<(Vec<i64>, QFunction)>,
}

impl Serialize for NovikovSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            vars: self.num_vars(),
            trunc: self.truncation.clone(),
            ring: self.spec.orders().to_vec(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d.clone(), c.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NovikovSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SeriesJson::deserialize(d)?;
        if j.vars != j.trunc.len() {
            return Err(D::Error::custom(format!(
                "vars = {} but {} truncation windows",
                j.vars,
                j.trunc.len()
            )));
        }
        let spec = RingSpec::new(j.ring).map_err(D::Error::custom)?;
        let mut s = NovikovSeries::new(&spec, j.trunc).map_err(D::Error::custom)?;
        for (deg, c) in j.coeffs {
            s.insert(deg, c).map_err(D::Error::custom)?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::RingElement;
    use crate::qring::{qf_equal, LaurentPoly};

    fn sample() -> NovikovSeries {
        let spec = RingSpec::projective(1);
        let p = RingElement::p(&spec, 0);
        let mut s = NovikovSeries::single(&spec, 3).unwrap();
        let one_minus_q = LaurentPoly::one_minus(&RingElement::one(&spec), 1);
        s.insert(vec![0], QFunction::from_poly(one_minus_q.clone()))
            .unwrap();
        let c1 = QFunction::inverse_factor(p, 1, 2)
            .unwrap()
            .mul_poly(&one_minus_q);
        s.insert(vec![1], c1).unwrap();
        s
    }

    #[test]
    fn map_identity_and_q_shift() {
        let s = sample();
        let id = series_map(&s, |_, f| Ok(f.clone())).unwrap();
        assert!(id.equals(&s));
        let shifted = series_map(&s, |d, f| Ok(f.shift(d[0]))).unwrap();
        assert!(qf_equal(&shifted.get(&[0]), &s.get(&[0])));
        assert!(qf_equal(&shifted.get(&[1]), &s.get(&[1]).shift(1)));
        assert!(s.has_dilaton_shift());
    }

    #[test]
    fn adams_moves_degrees() {
        let s = sample();
        assert!(series_adams(1, &s).equals(&s));
        let t = series_adams(2, &s);
        assert!(t.get(&[1]).is_zero());
        assert!(qf_equal(&t.get(&[2]), &qf_adams(2, &s.get(&[1]))));
        let mut s2 = s.clone();
        s2.insert(vec![2], s.get(&[1])).unwrap();
        // degree 2 would map to 6, outside the window
        let t3 = series_adams(3, &s2);
        assert_eq!(t3.len(), 2);
        assert!(qf_equal(&t3.get(&[3]), &qf_adams(3, &s.get(&[1]))));
    }

    #[test]
    fn bounds_enforced() {
        let mut s = sample();
        let f = s.get(&[0]);
        assert!(s.insert(vec![4], f.clone()).is_err());
        assert!(s.insert(vec![0, 0], f).is_err());
        assert!(NovikovSeries::new(&RingSpec::point(), vec![(2, 1)]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let s = sample();
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.starts_with(r#"{"vars":1,"trunc":[[0,3]],"ring":[2],"coeffs":"#));
        let back: NovikovSeries = serde_json::from_str(&j).unwrap();
        assert!(back.equals(&s));
        assert_eq!(serde_json::to_string(&back).unwrap(), j);
    }
}
