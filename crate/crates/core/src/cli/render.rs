//! Text renderings. These are for reading only and are never parsed back.

use std::fmt::Write;

use super::{Metadata, SplitEntry};
use crate::exactnum::format::power;
use crate::exactnum::rational;
use crate::invariants::InvariantRow;
use crate::operators::CheckResult;
use crate::qring::LaurentPoly;
use crate::series::NovikovSeries;

fn header(meta: &Metadata) -> String {
    let trunc: Vec<String> = meta
        .truncation
        .iter()
        .map(|(lo, hi)| format!("[{lo},{hi}]"))
        .collect();
    format!(
        "# {} {} {}  ring={:?}  truncation={}\n",
        meta.tool,
        meta.version,
        meta.command,
        meta.ring,
        trunc.join("×")
    )
}

fn degree_label(d: &[i64]) -> String {
    match d {
        [x] => power("Q", *x, true),
        _ => {
            let parts: Vec<String> = d
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| power(&format!("Q{}", i + 1), x, true))
                .collect();
            if parts.is_empty() {
                "1".into()
            } else {
                parts.join("·")
            }
        }
    }
}

fn laurent(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .map(|(e, c)| match e {
            0 => format!("({c})"),
            _ => format!("({c})·{}", power("q", e, true)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub(super) fn series_text(meta: &Metadata, s: &NovikovSeries) -> String {
    let mut out = header(meta);
    for (d, f) in s.iter() {
        let _ = writeln!(out, "{}: {}", degree_label(d), f);
    }
    out
}

pub(super) fn split_text(meta: &Metadata, entries: &[SplitEntry]) -> String {
    let mut out = header(meta);
    for e in entries {
        let _ = writeln!(out, "{}:", degree_label(&e.degree));
        let _ = writeln!(out, "  plus:  {}", laurent(&e.plus));
        let _ = writeln!(out, "  minus: {}", e.minus);
    }
    out
}

pub(super) fn invariants_text(meta: &Metadata, rows: &[InvariantRow]) -> String {
    let mut out = header(meta);
    for r in rows {
        let inv = r
            .value
            .reduced_string(true)
            .unwrap_or_else(|| r.value.to_string());
        let _ = writeln!(
            out,
            "⟨P^{}/(1−qL)⟩  {}  at q=0: {}",
            r.class_exponent,
            inv,
            rational::to_string(&r.at_q0)
        );
    }
    out
}

pub(super) fn verify_text(checks: &[CheckResult]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status}  {:<16} {}", c.suite, c.name);
        if let Some(d) = &c.detail {
            let _ = write!(out, "  ({d})");
        }
        out.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", checks.len(), failed);
    out
}
