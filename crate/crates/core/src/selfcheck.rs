//! A built-in invariant suite over fixed small fields.  Every module gets a
//! handful of checks with frozen inputs and expected outcomes; the CLI's
//! `selfcheck` command runs them all and reports one line per check.

use std::collections::BTreeSet;

use crate::codes::{
    build_code, classify_by_ranks, det_shifted_vandermonde, has_zero_sum_k_subset, is_self_dual,
    min_distance_bruteforce, zero_sum_k_subsets, Budgets, EvalSet, Family, MultiplierVector,
    Verdict,
};
use crate::constructions::{
    build_thm33, build_thm34, build_thm35, build_thm36, build_thm37, scan_lengths,
};
use crate::error::{Error, Result};
use crate::exchange::{document_from_pipeline, reverify, CodeDocument, DistanceStatus};
use crate::gf::{Fe, FieldCtx, FieldSpec};
use crate::lambda::{eta_profile, pipeline, solve_lambda};
use crate::linalg::MatrixFq;

fn fail(msg: impl Into<String>) -> Error {
    Error::VerificationFailed(msg.into())
}

fn ensure(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg.to_string()))
    }
}

fn prime_field(p: u64) -> Result<FieldCtx> {
    FieldCtx::new(FieldSpec::find(p, 1)?)
}

/// F_9 represented modulo x^2 - x - 1, whose canonical generator is x.
fn f9() -> Result<FieldCtx> {
    FieldCtx::new(FieldSpec::new(3, 2, vec![2, 2, 1])?)
}

fn field_axioms() -> Result<()> {
    for ctx in [prime_field(13)?, f9()?, FieldCtx::new(FieldSpec::find(5, 2)?)?] {
        let q = ctx.q();
        let elems: Vec<Fe> = ctx.elements().collect();
        for &a in &elems {
            for &b in &elems {
                ensure(
                    ctx.mul(a, b) == ctx.mul(b, a) && ctx.add(a, b) == ctx.add(b, a),
                    "commutativity",
                )?;
                for &c in &elems {
                    if ctx.mul(ctx.add(a, b), c)
                        != ctx.add(ctx.mul(a, c), ctx.mul(b, c))
                    {
                        return Err(fail(format!("distributivity fails in F_{q}")));
                    }
                }
            }
            if a != Fe::ZERO {
                let inv = ctx.inv(a)?;
                ensure(ctx.mul(a, inv) == Fe::ONE, "inverse roundtrip")?;
            }
        }
        let g = ctx.generator();
        let mut seen = BTreeSet::new();
        let mut x = Fe::ONE;
        for _ in 0..q - 1 {
            seen.insert(x);
            x = ctx.mul(x, g);
        }
        ensure(
            x == Fe::ONE && seen.len() as u64 == q - 1,
            "generator must have order q - 1",
        )?;
    }
    Ok(())
}

fn character_properties() -> Result<()> {
    for ctx in [prime_field(13)?, f9()?] {
        let q = ctx.q();
        let mut residues = 0u64;
        for x in ctx.elements().skip(1) {
            let ex = ctx.eta(x)?;
            if ex == 1 {
                residues += 1;
                let r = ctx.sqrt(x)?;
                ensure(ctx.mul(r, r) == x, "sqrt of a residue must square back")?;
            }
            for y in ctx.elements().skip(1) {
                if ctx.eta(ctx.mul(x, y))? != ex * ctx.eta(y)? {
                    return Err(fail(format!("eta is not multiplicative in F_{q}")));
                }
            }
        }
        ensure(residues == (q - 1) / 2, "half the nonzero elements are squares")?;
        ensure(
            ctx.eta(ctx.minus_one())? == if q % 4 == 1 { 1 } else { -1 },
            "eta(-1) is determined by q mod 4",
        )?;
    }
    Ok(())
}

fn linalg_oracles() -> Result<()> {
    let ctx = prime_field(7)?;
    let m = MatrixFq::new(
        3,
        3,
        [2, 5, 1, 0, 3, 4, 6, 1, 2].iter().map(|&v| Fe(v)).collect(),
    )?;
    // Cofactor expansion along the first row, reduced modulo 7.
    let det = m.det(&ctx)?;
    let cofactor = {
        let minor = |c0: usize| {
            let mut vals = Vec::new();
            for r in 1..3 {
                for c in 0..3 {
                    if c != c0 {
                        vals.push(m.get(r, c));
                    }
                }
            }
            ctx.sub(ctx.mul(vals[0], vals[3]), ctx.mul(vals[1], vals[2]))
        };
        let mut acc = Fe::ZERO;
        for c in 0..3 {
            let term = ctx.mul(m.get(0, c), minor(c));
            acc = if c % 2 == 0 {
                ctx.add(acc, term)
            } else {
                ctx.sub(acc, term)
            };
        }
        acc
    };
    ensure(det == cofactor, "det must match cofactor expansion")?;

    let (r1, pivots) = m.rref(&ctx);
    let (r2, _) = r1.rref(&ctx);
    ensure(r1.entries() == r2.entries(), "rref must be idempotent")?;
    ensure(pivots.len() == m.rank(&ctx), "pivot count equals rank")?;

    let wide = MatrixFq::new(
        2,
        4,
        [1, 2, 3, 4, 0, 1, 2, 3].iter().map(|&v| Fe(v)).collect(),
    )?;
    for v in wide.nullspace_basis(&ctx) {
        for r in 0..wide.rows() {
            let dot = (0..wide.cols()).fold(Fe::ZERO, |acc, c| {
                ctx.add(acc, ctx.mul(wide.get(r, c), v[c]))
            });
            ensure(dot == Fe::ZERO, "nullspace vectors must annihilate rows")?;
        }
    }
    Ok(())
}

fn determinant_identity() -> Result<()> {
    let ctx = prime_field(13)?;
    let pts: Vec<Fe> = (1..=6).map(Fe).collect();
    let mut sign: Option<Fe> = None;
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                let sel: Vec<Fe> = [a, b, c].iter().map(|&i| pts[i]).collect();
                let det = det_shifted_vandermonde(&ctx, &sel);
                let sum = sel.iter().fold(Fe::ZERO, |acc, &x| ctx.add(acc, x));
                let mut prod = Fe::ONE;
                for i in 0..3 {
                    for j in i + 1..3 {
                        prod = ctx.mul(prod, ctx.sub(sel[j], sel[i]));
                    }
                }
                let rhs = ctx.mul(sum, prod);
                if rhs == Fe::ZERO {
                    ensure(det == Fe::ZERO, "zero sum must force zero determinant")?;
                    continue;
                }
                let ratio = ctx.mul(det, ctx.inv(rhs)?);
                match sign {
                    None => {
                        ensure(
                            ratio == Fe::ONE || ratio == ctx.minus_one(),
                            "determinant ratio must be +/-1",
                        )?;
                        sign = Some(ratio);
                    }
                    Some(s) => ensure(ratio == s, "sign must be constant for fixed k")?,
                }
            }
        }
    }
    Ok(())
}

fn classification_matches_zero_sum() -> Result<()> {
    let ctx = prime_field(11)?;
    let budgets = Budgets::default();
    let mut sets = Vec::new();
    for a in 0..11u64 {
        for b in a + 1..11 {
            for c in b + 1..11 {
                for d in c + 1..11 {
                    sets.push(vec![Fe(a), Fe(b), Fe(c), Fe(d)]);
                }
            }
        }
    }
    ensure(sets.len() == 330, "C(11, 4) = 330")?;
    for elems in sets {
        let points = EvalSet::adhoc(&ctx, elems)?;
        for k in 2..4 {
            let lambda = MultiplierVector::ones(points.len());
            let code = build_code(&ctx, &points, k, &lambda)?;
            let cls = classify_by_ranks(&ctx, &code, budgets.rank_scan)?;
            let witness = has_zero_sum_k_subset(&ctx, &points, k, budgets.subset_search)?;
            let agree = match cls.verdict {
                Verdict::Mds => witness.is_none(),
                Verdict::Nmds => witness.is_some(),
                Verdict::Other => false,
            };
            ensure(agree, "rank classification must match the zero-sum predicate")?;
        }
    }
    Ok(())
}

fn distance_oracle() -> Result<()> {
    let ctx = prime_field(13)?;
    let budgets = Budgets::default();

    let nmds = build_thm33(&ctx, 6)?;
    let out = pipeline(&ctx, &nmds, &budgets)?;
    ensure(out.distance == Some(3), "the [6, 3] code over F_13 has distance 3")?;

    let mds = EvalSet::adhoc(&ctx, vec![Fe(2), Fe(5), Fe(6), Fe(0)])?;
    let out = pipeline(&ctx, &mds, &budgets)?;
    ensure(
        out.classification.verdict == Verdict::Mds && out.distance == Some(3),
        "the [4, 2] code on {2, 5, 6, 0} is MDS with distance 3",
    )?;

    // Cross-validate the brute force against direct nearest-neighbour search
    // on a small code: every nonzero word of the [4, 2] code re-enumerated.
    let code = build_code(&ctx, &mds, 2, &MultiplierVector::ones(4))?;
    let g = code.generator();
    let mut best = u64::MAX;
    for a in 0..13u64 {
        for b in 0..13u64 {
            if a == 0 && b == 0 {
                continue;
            }
            let mut w = 0;
            for c in 0..4 {
                let v = ctx.add(ctx.mul(Fe(a), g.get(0, c)), ctx.mul(Fe(b), g.get(1, c)));
                if v != Fe::ZERO {
                    w += 1;
                }
            }
            best = best.min(w);
        }
    }
    ensure(
        best == min_distance_bruteforce(&ctx, &code, budgets.distance)?,
        "odometer and direct enumeration must agree",
    )
}

fn lambda_solver() -> Result<()> {
    let ctx = prime_field(13)?;
    let points = build_thm33(&ctx, 6)?;
    let lambda = solve_lambda(&ctx, &points)?;
    let profile = eta_profile(&ctx, &points)?;
    ensure(profile.uniform(), "construction points have a uniform character")?;

    let code = build_code(&ctx, &points, 3, &lambda)?;
    ensure(is_self_dual(&ctx, &code).holds, "solved multipliers give G * G^T = 0")?;

    let budgets = Budgets::default();
    let out = pipeline(&ctx, &points, &budgets)?;
    ensure(
        out.classification.verdict == Verdict::Nmds,
        "the golden [6, 3] code is NMDS",
    )?;
    ensure(
        out.zero_sum_witness.is_some(),
        "an NMDS verdict carries a zero-sum witness",
    )?;

    let rejected = EvalSet::adhoc(&ctx, vec![Fe(1), Fe(2)]);
    match rejected.and_then(|p| solve_lambda(&ctx, &p)) {
        Err(Error::SumNotZero) => Ok(()),
        other => Err(fail(format!(
            "a set with nonzero sum must be rejected, got {other:?}"
        ))),
    }
}

fn builders() -> Result<()> {
    let budgets = Budgets::default();
    let check = |ctx: &FieldCtx, points: &EvalSet, n: usize| -> Result<()> {
        ensure(points.len() == n, "construction length")?;
        let out = pipeline(ctx, points, &budgets)?;
        ensure(
            out.classification.verdict == Verdict::Nmds && out.self_dual.holds,
            "every construction yields a self-dual NMDS code",
        )
    };

    let f13 = prime_field(13)?;
    check(&f13, &build_thm33(&f13, 4)?, 4)?;
    check(&f13, &build_thm33(&f13, 6)?, 6)?;

    let f25 = FieldCtx::new(FieldSpec::find(5, 2)?)?;
    check(&f25, &build_thm34(&f25, 4, 6, 1, None)?, 6)?;
    check(&f25, &build_thm36(&f25, 5, 1, 1)?, 10)?;
    check(&f25, &build_thm36(&f25, 5, 0, 2)?, 4)?;

    let f9 = f9()?;
    let t35 = build_thm35(&f9, 1, 1)?;
    let got: Vec<u64> = t35.elements().iter().map(|e| e.value()).collect();
    let want: Vec<u64> = [6u64, 2, 3, 5, 7, 1]
        .iter()
        .map(|&e| f9.pow(f9.generator(), e).value())
        .collect();
    ensure(got == want, "frozen element order for the [6, 3] code over F_9")?;
    check(&f9, &t35, 6)?;
    check(&f9, &build_thm36(&f9, 3, 1, 1)?, 6)?;
    check(&f9, &build_thm37(&f9, 2, 0)?, 6)?;
    Ok(())
}

fn scan() -> Result<()> {
    let report = scan_lengths(9)?;
    let expect: &[(Family, &[u64])] = &[
        (Family::T33, &[4]),
        (Family::T34, &[4]),
        (Family::T35, &[6]),
        (Family::T36, &[6]),
        (Family::T37, &[6]),
    ];
    for &(family, lengths) in expect {
        let got: Vec<u64> = report.family_set(family).iter().copied().collect();
        if got != lengths {
            return Err(fail(format!(
                "family {family} over F_9: expected {lengths:?}, got {got:?}"
            )));
        }
    }
    ensure(
        report.union.iter().copied().collect::<Vec<_>>() == vec![4, 6],
        "union of feasible lengths over F_9",
    )?;

    let report = scan_lengths(13)?;
    ensure(
        report.family_set(Family::T33).iter().copied().collect::<Vec<_>>() == vec![4, 6]
            && report.union_count() == 2,
        "over F_13 only the cyclotomic family applies",
    )
}

fn exchange_roundtrip() -> Result<()> {
    let ctx = prime_field(13)?;
    let points = build_thm33(&ctx, 6)?;
    let budgets = Budgets::default();
    let out = pipeline(&ctx, &points, &budgets)?;
    let doc = document_from_pipeline(&ctx, &points, &out);
    let json = doc.to_json();
    let parsed = CodeDocument::from_json(&json)
        .map_err(|e| fail(format!("roundtrip parse failed: {e}")))?;
    ensure(parsed == doc, "document roundtrip")?;
    ensure(parsed.to_json() == json, "serialization is deterministic")?;
    let report = reverify(&doc, &budgets).map_err(|e| fail(format!("reverify failed: {e}")))?;
    ensure(report.distance == DistanceStatus::Measured(3), "reverified distance")?;

    let mut bad = doc.clone();
    bad.generator[0][0] = (bad.generator[0][0] + 1) % ctx.q();
    match reverify(&bad, &budgets) {
        Err(Error::VerificationFailed(_)) => {}
        other => {
            return Err(fail(format!(
                "a corrupted generator must fail verification, got {other:?}"
            )))
        }
    }

    let subsets = zero_sum_k_subsets(&ctx, &points, 3, budgets.subset_search, usize::MAX)
        .map_err(|e| fail(format!("witness enumeration failed: {e}")))?;
    ensure(
        !subsets.is_empty() && subsets.iter().all(|s| s.len() == 3),
        "the golden set has zero-sum triples",
    )
}

type Check = (&'static str, fn() -> Result<()>);

/// Runs every check, returning its name and outcome; never panics.
pub fn run_all() -> Vec<(&'static str, Result<()>)> {
    let checks: Vec<Check> = vec![
        ("field arithmetic axioms (F_13, F_9, F_25)", field_axioms),
        ("quadratic character and square roots", character_properties),
        ("matrix determinant, rref and nullspace oracles", linalg_oracles),
        ("shifted Vandermonde determinant identity", determinant_identity),
        ("rank classification vs zero-sum predicate (F_11)", classification_matches_zero_sum),
        ("minimum distance brute force", distance_oracle),
        ("multiplier solver and pipeline", lambda_solver),
        ("construction families at smallest parameters", builders),
        ("feasible-length scan on F_9 and F_13", scan),
        ("document roundtrip and re-verification", exchange_roundtrip),
    ];
    checks.into_iter().map(|(name, f)| (name, f())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_selfcheck_passes() {
        for (name, outcome) in run_all() {
            if let Err(e) = outcome {
                panic!("selfcheck {name:?} failed: {e}");
            }
        }
    }

    #[test]
    fn selfcheck_names_are_unique() {
        let names: Vec<&str> = run_all().into_iter().map(|(n, _)| n).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
    }
}
