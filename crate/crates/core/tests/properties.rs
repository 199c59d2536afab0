use std::sync::Arc;

use proptest::prelude::*;
use qkgw_core::coeffring::{adams, RingElement, RingSpec};
use qkgw_core::exactnum::rational::{int, Rational};
use qkgw_core::exactnum::CyclotomicNumber;
use qkgw_core::invariants::euler_char;
use qkgw_core::operators::{mobius_forward, mobius_invert};
use qkgw_core::qring::{qf_adams, qf_equal, split_polarization, DenFactor, LaurentPoly, QFunction};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| int(n) / int(d))
}

fn cyclotomic(k: u64) -> impl Strategy<Value = CyclotomicNumber> {
    prop::collection::vec(small_rational(), k as usize)
        .prop_map(move |c| CyclotomicNumber::from_coeffs(k, c))
}

fn cyc_triple() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber, CyclotomicNumber)> {
    (1u64..=6).prop_flat_map(|k| (cyclotomic(k), cyclotomic(k), cyclotomic(k)))
}

/// Element of `ℚ[u_1, u_2]/(u_1^3, u_2^2)` from its six coefficients.
fn ring_element(spec: &Arc<RingSpec>, coeffs: &[Rational]) -> RingElement {
    let mut acc = RingElement::zero(spec);
    let mut it = coeffs.iter();
    for a in 0..spec.orders()[0] {
        for b in 0..spec.orders()[1] {
            let m = RingElement::monomial(spec, &[a, b], it.next().unwrap().clone()).unwrap();
            acc = &acc + &m;
        }
    }
    acc
}

fn two_gen() -> Arc<RingSpec> {
    RingSpec::new(vec![3, 2]).unwrap()
}

fn ring_pair() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
    (
        prop::collection::vec(small_rational(), 6),
        prop::collection::vec(small_rational(), 6),
    )
}

/// A function over `K⁰(ℙ²)` with denominator `∏ (1 - P q^r)^{m_r}`.
fn qfunction() -> impl Strategy<Value = QFunction> {
    (
        prop::collection::vec((-2i64..=6, prop::collection::vec(-5i64..=5, 3)), 1..5),
        prop::collection::vec((1u32..=3, 1u32..=3), 0..3),
    )
        .prop_map(|(num, den)| {
            let spec = RingSpec::projective(2);
            let u = RingElement::u(&spec, 0);
            let terms = num.into_iter().map(|(e, c)| {
                let el = &(&RingElement::from_int(&spec, c[0]) + &u.scale(&int(c[1])))
                    + &(&u * &u).scale(&int(c[2]));
                (e, el)
            });
            let num = LaurentPoly::from_terms(&spec, terms).unwrap();
            let p = RingElement::p(&spec, 0);
            let den = den
                .into_iter()
                .map(|(r, m)| DenFactor::new(p.clone(), r, m).unwrap())
                .collect();
            QFunction::new(num, den).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_field_axioms((a, b, c) in cyc_triple()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
            prop_assert_eq!(b.mul(&a).unwrap().div(&a).unwrap(), b);
        }
    }

    #[test]
    fn adams_is_a_ring_endomorphism((x, y) in ring_pair(), k in -3i64..=4, l in -2i64..=3) {
        let spec = two_gen();
        let a = ring_element(&spec, &x);
        let b = ring_element(&spec, &y);
        prop_assert_eq!(adams(k, &(&a + &b)), &adams(k, &a) + &adams(k, &b));
        prop_assert_eq!(adams(k, &(&a * &b)), &adams(k, &a) * &adams(k, &b));
        prop_assert_eq!(adams(k, &adams(l, &a)), adams(k * l, &a));
        prop_assert_eq!(adams(1, &a), a.clone());
        // ψ^k on a line class is its k-th power
        let line = &RingElement::p(&spec, 0) * &RingElement::p(&spec, 1);
        prop_assert_eq!(adams(k, &line), line.pow(k).unwrap());
    }

    #[test]
    fn split_reassembles(f in qfunction()) {
        let (plus, minus) = split_polarization(&f).unwrap();
        prop_assert!(minus.is_zero() || minus.is_proper());
        prop_assert!(minus.is_zero() || minus.eval_q0().is_ok());
        let back = QFunction::from_poly(plus).try_add(&minus).unwrap();
        prop_assert!(qf_equal(&back, &f));
    }

    #[test]
    fn split_is_linear(f in qfunction(), g in qfunction()) {
        let (pf, mf) = split_polarization(&f).unwrap();
        let (pg, mg) = split_polarization(&g).unwrap();
        let (ps, ms) = split_polarization(&f.try_add(&g).unwrap()).unwrap();
        prop_assert_eq!(ps, &pf + &pg);
        prop_assert!(qf_equal(&ms, &mf.try_add(&mg).unwrap()));
    }

    #[test]
    fn qf_adams_multiplicative(f in qfunction(), g in qfunction(), k in 1u32..=3) {
        let lhs = qf_adams(k, &f.try_mul(&g).unwrap());
        let rhs = qf_adams(k, &f).try_mul(&qf_adams(k, &g)).unwrap();
        prop_assert!(qf_equal(&lhs, &rhs));
    }

    #[test]
    fn mobius_roundtrips(s in prop::collection::vec(small_rational(), 1..=24)) {
        prop_assert_eq!(mobius_forward(&mobius_invert(&s)), s.clone());
        prop_assert_eq!(mobius_invert(&mobius_forward(&s)), s);
    }

    #[test]
    fn euler_char_of_line_bundles(n in 1u32..=5, m in -8i64..=8) {
        // χ(ℙᴺ, O(m)) = C(m+N, N), with O(m) = P^{-m}
        let spec = RingSpec::projective(n);
        let line = RingElement::p(&spec, 0).pow(-m).unwrap();
        let expected = (1..=n as i64).fold(int(1), |acc, i| acc * int(m + i) / int(i));
        prop_assert_eq!(euler_char(n, &line, &[]).unwrap(), expected);
    }
}
