//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values are built here independently of the library
//! code paths they check.

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use qkgw_core::coeffring::{RingElement, RingSpec};
use qkgw_core::exactnum::rational::int;
use qkgw_core::exactnum::QPoly;
use qkgw_core::ifunctions::{
    i_complete_intersection, i_toric_fibration, j_product, j_projective, GeometrySpec,
    ToricFibrationSpec,
};
use qkgw_core::invariants::{dual_basis_roundtrip, euler_char, gram_matrix, invert_matrix};
use qkgw_core::operators::{
    bernoulli, check_regular_at_one, euler_maclaurin_oracle_check, euler_specialization,
    gamma_telescoping_check, lefschetz_operator_equivalence, mobius_invert, mobius_roundtrip,
    pole_series_box, pole_series_r,
};
use qkgw_core::qring::{qf_equal, DenFactor, LaurentPoly, QFunction};
use serde_json::Value;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn point_qf(num: &[(i64, i64)], den: &[(u32, u32)]) -> QFunction {
    let p = RingSpec::point();
    let n = LaurentPoly::from_terms(
        &p,
        num.iter().map(|&(e, c)| (e, RingElement::from_int(&p, c))),
    )
    .unwrap();
    let d = den
        .iter()
        .map(|&(r, m)| DenFactor::new(RingElement::one(&p), r, m).unwrap())
        .collect();
    QFunction::new(n, d).unwrap()
}

fn run_cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qkgw"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn invariant_row0(args: &[&str]) -> Result<(QFunction, String, String), String> {
    let doc = run_cli(args)?;
    let row = &doc["result"]["rows"][0];
    let value: QFunction =
        serde_json::from_value(row["value"].clone()).map_err(|e| e.to_string())?;
    Ok((
        value,
        row["invariant"].as_str().unwrap_or_default().to_string(),
        row["at_q0"].as_str().unwrap_or_default().to_string(),
    ))
}

fn within(t: Instant, limit: Duration) -> Outcome {
    ensure(
        t.elapsed() < limit,
        format!("took {:?}, limit {:?}", t.elapsed(), limit),
    )
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let (v, s, q0) = invariant_row0(&["invariants", "--N", "4", "--degrees", "5", "--trunc", "1"])?;
    // 2875(1 - 3q)/(1 - q)^2
    let expected = point_qf(&[(0, 2875), (1, -8625)], &[(1, 2)]);
    ensure(qf_equal(&v, &expected), format!("value {v}"))?;
    ensure(s == "2875(1−3q)/(1−q)²", format!("string {s}"))?;
    ensure(q0 == "2875", format!("q=0 value {q0}"))?;
    within(t, Duration::from_secs(5))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let (v, s, _) =
        invariant_row0(&["invariants", "--N", "5", "--degrees", "2,2", "--trunc", "1"])?;
    // 32(q^2 + q^3)/(1 - q)^4
    let expected = point_qf(&[(2, 32), (3, 32)], &[(1, 4)]);
    ensure(qf_equal(&v, &expected), format!("value {v}"))?;
    ensure(s == "32(q²+q³)/(1−q)⁴", format!("string {s}"))?;
    within(t, Duration::from_secs(5))
}

fn criterion_3() -> Outcome {
    for n in 1..=5u32 {
        let mut cases: Vec<Vec<i64>> = vec![vec![], vec![1], vec![2], vec![n as i64 + 1]];
        if n >= 2 {
            cases.push(vec![2, 2]);
        }
        if n >= 3 {
            cases.push(vec![2, 3]);
        }
        for ls in cases {
            let s = i_complete_intersection(&GeometrySpec::projective(n, &ls, 3))
                .map_err(|e| e.to_string())?;
            let spec = RingSpec::projective(n);
            let p = RingElement::p(&spec, 0);
            for d in 0..=3i64 {
                // (1-q) ∏_j ∏_{r=1}^{l_j d} (1 - P^{l_j} q^r) / ∏_{r=1}^{d} (1 - P q^r)^{N+1}
                let mut num = LaurentPoly::one_minus(&RingElement::one(&spec), 1);
                for &l in &ls {
                    let pl = p.pow(l).unwrap();
                    for r in 1..=l * d {
                        num = &num * &LaurentPoly::one_minus(&pl, r);
                    }
                }
                let den: Vec<DenFactor> = (1..=d as u32)
                    .map(|r| DenFactor::new(p.clone(), r, n + 1).unwrap())
                    .collect();
                let expected = QFunction::new(num, den.clone()).unwrap();
                let got = s.get(&[d]);
                ensure(
                    qf_equal(&got, &expected),
                    format!("N={n} l={ls:?} d={d}: value differs"),
                )?;
                ensure(
                    got.denominator() == den.as_slice(),
                    format!("N={n} l={ls:?} d={d}: denominator not verbatim"),
                )?;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    ensure(
        lefschetz_operator_equivalence(4, 5, 3).map_err(|e| e.to_string())?,
        "routes disagree",
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    for m in 0..=5 {
        ensure(
            gamma_telescoping_check(m, 8).map_err(|e| e.to_string())?,
            format!("gamma m={m}"),
        )?;
    }
    for j in 0..=6 {
        ensure(
            euler_maclaurin_oracle_check(&QPoly::monomial(int(1), j), 10),
            format!("EM x^{j}"),
        )?;
    }
    let tab = bernoulli(10);
    ensure(
        tab.check_generating_function(),
        "Bernoulli generating function",
    )?;
    let t_euler = mobius_invert(&euler_specialization(24));
    ensure(
        t_euler[0] == -int(1) && t_euler[1..].iter().all(Zero::is_zero),
        "Möbius Euler case",
    )?;
    // 100 reproducible pseudo-random inputs (linear congruential)
    let mut x: u64 = 12345;
    for _ in 0..100 {
        let mut next = || {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (x >> 33) as i64
        };
        let len = 1 + (next() % 24) as usize;
        let s: Vec<_> = (0..len)
            .map(|_| int(next() % 41 - 20) / int(1 + next() % 9))
            .collect();
        ensure(mobius_roundtrip(&s), "Möbius roundtrip")?;
    }
    for k in 1..=4u64 {
        let r = pole_series_r(k, 12 * k).map_err(|e| e.to_string())?;
        let b = pole_series_box(k, 12 * k).map_err(|e| e.to_string())?;
        ensure(
            check_regular_at_one(&r).map_err(|e| e.to_string())?,
            format!("R poles k={k}"),
        )?;
        ensure(
            check_regular_at_one(&b).map_err(|e| e.to_string())?,
            format!("box poles k={k}"),
        )?;
    }
    within(t, Duration::from_secs(30))
}

fn criterion_6() -> Outcome {
    for n in 1..=3u32 {
        for d in 0..=3i64 {
            let spec = ToricFibrationSpec::over_point(
                vec![vec![1; n as usize + 1]],
                vec![n + 1],
                vec![(0, d)],
            )
            .map_err(|e| e.to_string())?;
            let toric = i_toric_fibration(&spec).map_err(|e| e.to_string())?;
            let j = j_projective(n, d).map_err(|e| e.to_string())?;
            ensure(toric.equals(&j), format!("ℙ^{n} D={d}"))?;
        }
    }
    let spec = ToricFibrationSpec::over_point(
        vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]],
        vec![2, 2],
        vec![(0, 3), (0, 3)],
    )
    .map_err(|e| e.to_string())?;
    let toric = i_toric_fibration(&spec).map_err(|e| e.to_string())?;
    // product formula: J_{ℙ¹×ℙ¹} coefficient is (1-q)/(∏(1-P₁q^r)² ∏(1-P₂q^r)²)
    let ring = toric.spec().clone();
    for d1 in 0..=3i64 {
        for d2 in 0..=3i64 {
            let mut den = Vec::new();
            for (i, di) in [d1, d2].into_iter().enumerate() {
                for r in 1..=di as u32 {
                    den.push(DenFactor::new(RingElement::p(&ring, i), r, 2).unwrap());
                }
            }
            let expected =
                QFunction::new(LaurentPoly::one_minus(&RingElement::one(&ring), 1), den).unwrap();
            ensure(
                qf_equal(&toric.get(&[d1, d2]), &expected),
                format!("ℙ¹×ℙ¹ degree ({d1},{d2})"),
            )?;
        }
    }
    ensure(
        toric.equals(&j_product(&[1, 1], 3).map_err(|e| e.to_string())?),
        "ℙ¹×ℙ¹ vs j_product",
    )
}

fn criterion_7() -> Outcome {
    for n in 1..=6u32 {
        let one = RingElement::one(&RingSpec::projective(n));
        let chi = euler_char(n, &one, &[]).map_err(|e| e.to_string())?;
        ensure(chi.is_one(), format!("χ(ℙ^{n}, 𝒪) = {chi}"))?;
    }
    let g = gram_matrix(4, &[5]).map_err(|e| e.to_string())?;
    ensure(g.len() == 4, "quintic Gram matrix is 4×4")?;
    ensure(invert_matrix(&g).is_some(), "quintic Gram matrix singular")?;
    // G_ab = χ(ℙ⁴, O(-a-b)) - χ(ℙ⁴, O(-a-b-5)), with χ(ℙᴺ, O(m)) = C(m+N, N)
    let chi = |m: i64| (1..=4i64).fold(int(1), |acc, i| acc * int(m + i) / int(i));
    for (a, row) in g.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            let m = -((a + b) as i64);
            ensure(
                *x == chi(m) - chi(m - 5),
                format!("Gram entry ({a},{b}) = {x}"),
            )?;
        }
    }
    ensure(
        dual_basis_roundtrip(4, &[5]).map_err(|e| e.to_string())?,
        "dual-basis roundtrip",
    )
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("quintic one-point invariant 2875(1−3q)/(1−q)²", criterion_1),
        ("two-quadrics invariant 32(q²+q³)/(1−q)⁴", criterion_2),
        (
            "I-function coefficients in factored form, N ≤ 5, d ≤ 3",
            criterion_3,
        ),
        ("Lefschetz operator equivalence (4, 5, 3)", criterion_4),
        ("verification suite: gamma, EM, Möbius, poles", criterion_5),
        ("toric presentations of ℙᴺ and ℙ¹×ℙ¹", criterion_6),
        (
            "pairing normalization and dual-basis roundtrip",
            criterion_7,
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(()) => println!("criterion {}: PASS  {name}  ({:.2?})", i + 1, t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}  ({e})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
