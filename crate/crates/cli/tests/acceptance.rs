//! The acceptance gate: ten numbered criteria covering a worked F_9 instance,
//! parameter sweeps of every construction family, the determinant identity,
//! the rank/zero-sum oracle equivalence, the multiplier nullspace property,
//! the feasible-length scan, and mutation robustness of the verifier.  Each
//! test prints one PASS line (visible with `--nocapture`).

use std::collections::HashMap;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nmds::codes::{
    build_code, classify_by_ranks, det_shifted_vandermonde, for_each_combination,
    has_zero_sum_k_subset, is_self_dual, zero_sum_k_subsets, Budgets, EvalSet, Evidence,
    MultiplierVector, Verdict,
};
use nmds::constructions::{build_thm33, build_thm34, build_thm36, build_thm37, verify_fiber_product};
use nmds::error::Error;
use nmds::exchange::CodeDocument;
use nmds::gf::{factor_prime_power, Fe, FieldCtx, FieldSpec};
use nmds::lambda::{eta_profile, pipeline, solve_lambda, verification_matrix};
use nmds::linalg::MatrixFq;

fn nmds_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmds"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn field(p: u64, m: u32) -> FieldCtx {
    FieldCtx::new(FieldSpec::find(p, m).unwrap()).unwrap()
}

fn field_q(q: u64) -> FieldCtx {
    let (p, m) = factor_prime_power(q).unwrap();
    field(p, m)
}

/// The q = 9 instance from the source construction: a [6, 3, 3] NMDS
/// self-dual code whose dependent triple {a, a^2, a^7} (a the primitive
/// element) appears among the zero-sum candidates.
#[test]
fn criterion_01_q9_worked_instance() {
    let start = Instant::now();
    let out = nmds_bin(&["construct", "--theorem", "3.5", "--r", "3", "--s", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = CodeDocument::from_json(&stdout_of(&out)).unwrap();
    assert_eq!((doc.field.p, doc.field.m), (3, 2));
    assert_eq!((doc.n, doc.k), (6, 3));
    assert!(doc.checks.self_dual);
    assert_eq!(doc.classification.verdict, "NMDS");
    assert_eq!(doc.classification.distance, Some(3));

    let ctx = doc.context().unwrap();
    let alpha = ctx.generator();
    let mut triple: Vec<usize> = [1u64, 2, 7]
        .iter()
        .map(|&e| {
            let v = ctx.pow(alpha, e).value();
            doc.eval_set
                .iter()
                .position(|&x| x == v)
                .expect("power of the primitive element is an evaluation point")
        })
        .collect();
    triple.sort_unstable();
    assert_eq!(doc.witness, Some(triple.clone()));

    let elements: Vec<Fe> = doc
        .eval_set
        .iter()
        .map(|&v| ctx.element(v).unwrap())
        .collect();
    let points = EvalSet::adhoc(&ctx, elements).unwrap();
    let candidates = zero_sum_k_subsets(&ctx, &points, 3, 1_000_000, usize::MAX).unwrap();
    assert!(
        candidates.contains(&triple),
        "{triple:?} not among dependent-triple candidates {candidates:?}"
    );

    let entries: Vec<Fe> = doc
        .generator
        .iter()
        .flatten()
        .map(|&v| ctx.element(v).unwrap())
        .collect();
    let generator = MatrixFq::new(doc.k, doc.n, entries).unwrap();
    let mut scratch = Vec::new();
    assert!(generator.rank_of_columns(&ctx, &triple, &mut scratch) < 3);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 01: PASS — [6,3,3] NMDS self-dual over F_9, dependent triple {triple:?} certified ({elapsed:?})"
    );
}

/// Every admissible cyclotomic length over q in {13, 17, 25, 29, 37} gives a
/// self-dual NMDS code; the distance is enumerated exactly when q^{n/2} fits
/// the default budget and rank-certified otherwise.
#[test]
fn criterion_02_cyclotomic_sweep() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let mut cases = 0usize;
    for q in [13u64, 17, 25, 29, 37] {
        assert_eq!(q % 4, 1);
        let ctx = field_q(q);
        let mut n = 4u64;
        while n < q - 1 {
            if (q - 1) % n == 0 {
                let points = build_thm33(&ctx, n).unwrap();
                let out = pipeline(&ctx, &points, &budgets).unwrap();
                assert!(out.self_dual.holds, "q = {q}, n = {n}");
                assert_eq!(out.classification.verdict, Verdict::Nmds, "q = {q}, n = {n}");
                let k = n / 2;
                if (q as u128).pow(k as u32) <= 10_000_000 {
                    assert_eq!(out.distance, Some(k), "distance n - k for q = {q}, n = {n}");
                } else {
                    assert_eq!(out.distance, None);
                    assert!(matches!(
                        out.classification.evidence,
                        Evidence::DependentKSubset { .. }
                    ));
                }
                cases += 1;
            }
            n += 2;
        }
    }
    assert_eq!(cases, 14, "2 + 2 + 4 + 2 + 4 admissible lengths");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 02: PASS — {cases} cyclotomic instances, all NMDS self-dual ({elapsed:?})");
}

/// The multiplicative-coset instance q = 25, e = 4, f = 6, t = 1 gives an
/// NMDS self-dual [6, 3, 3] code with the distance fully enumerated.
#[test]
fn criterion_03_coset_instance_q25() {
    let start = Instant::now();
    let ctx = field(5, 2);
    let points = build_thm34(&ctx, 4, 6, 1, None).unwrap();
    assert_eq!(points.len(), 6);
    let out = pipeline(&ctx, &points, &Budgets::default()).unwrap();
    assert!(out.self_dual.holds);
    assert_eq!(out.classification.verdict, Verdict::Nmds);
    assert_eq!(out.distance, Some(3), "25^3 codewords enumerated");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 03: PASS — [6,3,3] NMDS self-dual over F_25 ({elapsed:?})");
}

/// The additive-subspace instance q = 25, r = 5, level 1, t = 2 gives an
/// NMDS self-dual [20, 10] code certified purely by subset rank conditions
/// (C(20, 11) = 167960 checks on each side of k).
#[test]
fn criterion_04_subspace_instance_q25() {
    let start = Instant::now();
    let ctx = field(5, 2);
    let points = build_thm36(&ctx, 5, 1, 2).unwrap();
    assert_eq!(points.len(), 20);
    let out = pipeline(&ctx, &points, &Budgets::default()).unwrap();
    assert!(out.self_dual.holds);
    assert_eq!(out.code.k(), 10);
    assert_eq!(out.classification.verdict, Verdict::Nmds);
    assert_eq!(out.distance, None, "25^10 words exceed the distance budget");
    match &out.classification.evidence {
        Evidence::DependentKSubset {
            k_minus_one_checked,
            k_plus_one_checked,
            ..
        } => {
            assert_eq!(*k_minus_one_checked, 167_960, "C(20, 9)");
            assert_eq!(*k_plus_one_checked, 167_960, "C(20, 11)");
        }
        other => panic!("expected a dependent k-subset, got {other:?}"),
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("criterion 04: PASS — [20,10] NMDS self-dual rank-certified, 167960 checks each side ({elapsed:?})");
}

/// The trace-fiber instance p = 3, m = 1, t = 2, s = 0 gives an NMDS
/// self-dual [6, 3, 3] code over F_9, and each fiber satisfies the product
/// formula prod(X - a) = X^r + X - h coefficient by coefficient.
#[test]
fn criterion_05_trace_fiber_instance_f9() {
    let start = Instant::now();
    let ctx = field(3, 2);
    let points = build_thm37(&ctx, 2, 0).unwrap();
    assert_eq!(points.len(), 6);

    let r = 3u64;
    for fiber in points.elements().chunks(r as usize) {
        let h = ctx.trace_to_subfield(fiber[0], r).unwrap();
        for &a in fiber {
            assert_eq!(ctx.trace_to_subfield(a, r).unwrap(), h);
        }
        verify_fiber_product(&ctx, fiber, h, r).unwrap();
    }

    let out = pipeline(&ctx, &points, &Budgets::default()).unwrap();
    assert!(out.self_dual.holds);
    assert_eq!(out.classification.verdict, Verdict::Nmds);
    assert_eq!(out.distance, Some(3));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 05: PASS — [6,3,3] NMDS self-dual over F_9, fiber products verified ({elapsed:?})");
}

/// Property suite for the shifted Vandermonde determinant: over 1000 seeded
/// random tuples the determinant equals a fixed sign times the point sum
/// times the difference product, vanishing exactly on zero sums or repeats.
#[test]
fn criterion_06_determinant_identity_suite() {
    let start = Instant::now();
    let contexts: Vec<FieldCtx> = [13u64, 25, 81].iter().map(|&q| field_q(q)).collect();
    let mut rng = StdRng::seed_from_u64(0x4e4d_4453);
    let mut sign_by_k: HashMap<usize, i8> = HashMap::new();
    let mut zero_cases = 0usize;
    for trial in 0..1000 {
        let ctx = &contexts[rng.gen_range(0..contexts.len())];
        let q = ctx.q();
        let k = rng.gen_range(1..=6usize);
        let mut pts: Vec<Fe> = (0..k)
            .map(|_| ctx.element(rng.gen_range(0..q)).unwrap())
            .collect();
        if trial % 7 == 0 {
            // force a zero-sum tuple
            let partial = pts[..k - 1]
                .iter()
                .fold(Fe::ZERO, |acc, &x| ctx.add(acc, x));
            pts[k - 1] = ctx.neg(partial);
        }
        if trial % 10 == 0 && k >= 2 {
            // force a collision
            pts[k - 1] = pts[0];
        }

        let det = det_shifted_vandermonde(ctx, &pts);
        let sum = pts.iter().fold(Fe::ZERO, |acc, &x| ctx.add(acc, x));
        let mut diff_prod = Fe::ONE;
        for i in 0..k {
            for j in i + 1..k {
                diff_prod = ctx.mul(diff_prod, ctx.sub(pts[j], pts[i]));
            }
        }
        let rhs = ctx.mul(sum, diff_prod);
        if rhs == Fe::ZERO {
            assert_eq!(
                det,
                Fe::ZERO,
                "det must vanish exactly on zero sum or collision"
            );
            zero_cases += 1;
            continue;
        }
        assert_ne!(det, Fe::ZERO);
        let ratio = ctx.mul(det, ctx.inv(rhs).unwrap());
        let sign = if ratio == Fe::ONE {
            1i8
        } else if ratio == ctx.minus_one() {
            -1i8
        } else {
            panic!("determinant ratio {ratio} is not +/-1 for k = {k}");
        };
        match sign_by_k.get(&k) {
            None => {
                sign_by_k.insert(k, sign);
            }
            Some(&s) => assert_eq!(s, sign, "sign must be constant for k = {k} across fields"),
        }
    }
    assert!(zero_cases >= 100, "forced degenerate tuples were exercised");
    assert!(sign_by_k.len() >= 5, "all small k values were drawn");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "criterion 06: PASS — determinant identity on 1000 tuples, signs {:?} ({elapsed:?})",
        {
            let mut s: Vec<(usize, i8)> = sign_by_k.into_iter().collect();
            s.sort_unstable();
            s
        }
    );
}

/// Exhaustive oracle equivalence over F_11: for every point set of size 4-7
/// and every intermediate dimension, rank classification and the zero-sum
/// predicate agree, with no set classifying outside {MDS, NMDS}.
#[test]
fn criterion_07_rank_vs_zero_sum_exhaustive_f11() {
    let start = Instant::now();
    let ctx = field(11, 1);
    let budgets = Budgets::default();
    let mut checked = 0usize;
    for size in 4..=7usize {
        for_each_combination(11, size, |combo| {
            let elements: Vec<Fe> = combo
                .iter()
                .map(|&v| ctx.element(v as u64).unwrap())
                .collect();
            let points = EvalSet::adhoc(&ctx, elements).unwrap();
            for k in 2..size {
                let code =
                    build_code(&ctx, &points, k, &MultiplierVector::ones(size)).unwrap();
                let classification = classify_by_ranks(&ctx, &code, budgets.rank_scan).unwrap();
                let witness =
                    has_zero_sum_k_subset(&ctx, &points, k, budgets.subset_search).unwrap();
                let agree = match classification.verdict {
                    Verdict::Mds => witness.is_none(),
                    Verdict::Nmds => witness.is_some(),
                    Verdict::Other => false,
                };
                assert!(
                    agree,
                    "mismatch at {combo:?}, k = {k}: verdict {}, witness {witness:?}",
                    classification.verdict.label()
                );
                checked += 1;
            }
            true
        });
    }
    assert_eq!(checked, 330 * 2 + 462 * 3 + 462 * 4 + 330 * 5);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!("criterion 07: PASS — {checked} classifications over F_11, zero mismatches ({elapsed:?})");
}

/// Nullspace property of the multiplier system: for seeded random zero-sum
/// sets the system matrix has corank one with nullspace proportional to the
/// inverse point products, and uniform character profiles always solve to a
/// self-dual code.
#[test]
fn criterion_08_multiplier_nullspace_property() {
    let start = Instant::now();
    let f13 = field_q(13);
    let f25 = field_q(25);
    let mut rng = StdRng::seed_from_u64(0x6c61_6d62);
    let mut done = 0usize;
    let mut solved = 0usize;
    while done < 200 {
        let ctx = if rng.gen_bool(0.5) { &f13 } else { &f25 };
        let q = ctx.q();
        let size = [4usize, 6, 8][rng.gen_range(0..3)];
        let mut pts: Vec<Fe> = Vec::with_capacity(size);
        while pts.len() < size - 1 {
            let c = ctx.element(rng.gen_range(0..q)).unwrap();
            if !pts.contains(&c) {
                pts.push(c);
            }
        }
        let last = ctx.neg(pts.iter().fold(Fe::ZERO, |acc, &x| ctx.add(acc, x)));
        if pts.contains(&last) {
            continue;
        }
        pts.push(last);
        let points = EvalSet::adhoc(ctx, pts).unwrap();

        let system = verification_matrix(ctx, &points);
        assert_eq!(system.rank(ctx), size - 1, "rank must be 2k - 1");
        let nullspace = system.nullspace_basis(ctx);
        assert_eq!(nullspace.len(), 1);
        let v = &nullspace[0];
        let scale = ctx.mul(v[0], nmds::codes::pi_a(ctx, &points, 0));
        assert_ne!(scale, Fe::ZERO);
        for (i, &vi) in v.iter().enumerate().skip(1) {
            assert_eq!(
                ctx.mul(vi, nmds::codes::pi_a(ctx, &points, i)),
                scale,
                "nullspace is proportional to the inverse products"
            );
        }

        let profile = eta_profile(ctx, &points).unwrap();
        match solve_lambda(ctx, &points) {
            Ok(lambda) => {
                assert!(profile.uniform());
                let code = build_code(ctx, &points, size / 2, &lambda).unwrap();
                assert!(is_self_dual(ctx, &code).holds);
                solved += 1;
            }
            Err(Error::NonUniformCharacter) => assert!(!profile.uniform()),
            Err(e) => panic!("unexpected solver failure: {e}"),
        }
        done += 1;
    }
    assert!(solved > 0, "some profiles must be uniform");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("criterion 08: PASS — 200 zero-sum sets, corank 1 throughout, {solved} solved to self-dual ({elapsed:?})");
}

/// Feasible-length scan at q = 10201: the closed-form count for the mixed
/// coset family is exactly 1250, the union dominates it, and the report
/// documents agreement or the exact discrepancy with the reference counts
/// (1528, 1586, 5211) whose aggregation rule is not specified.
#[test]
fn criterion_09_scan_reference_counts() {
    let start = Instant::now();

    let out = nmds_bin(&["scan", "--q", "10201"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.contains("theorem 3.5: 1250 lengths"),
        "closed-form count for r = 101 must be exact:\n{text}"
    );
    let union: u64 = text
        .lines()
        .find_map(|l| l.strip_prefix("union: "))
        .and_then(|rest| rest.split(' ').next())
        .and_then(|n| n.parse().ok())
        .expect("union line present");
    assert!(union >= 1250);
    assert!(text.contains("reference: 1528"));
    assert!(
        text.contains("agreement") || text.contains("discrepancy"),
        "the report must document the comparison:\n{text}"
    );

    for (q, reference) in [("11449", "1586"), ("39601", "5211")] {
        let out = nmds_bin(&["scan", "--q", q]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout_of(&out);
        assert!(text.contains(&format!("reference: {reference}")));
        assert!(text.contains("agreement") || text.contains("discrepancy"));
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 09: PASS — scan counts reported against all three references, union {union} >= 1250 ({elapsed:?})");
}

/// Mutation robustness: corrupting any single generator entry of the
/// criterion-1 document makes verification exit 3.
#[test]
fn criterion_10_mutation_robustness() {
    let out = nmds_bin(&["construct", "--theorem", "3.5", "--r", "3", "--s", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = CodeDocument::from_json(&stdout_of(&out)).unwrap();
    let q = doc.context().unwrap().q();

    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut mutations = 0usize;
    for r in 0..doc.k {
        for c in 0..doc.n {
            let mut bad = doc.clone();
            bad.generator[r][c] = (bad.generator[r][c] + 1) % q;
            let path = dir.path().join(format!("mutated_{r}_{c}.json"));
            std::fs::write(&path, bad.to_json()).unwrap();
            let verify = nmds_bin(&["verify", path.to_str().unwrap()]);
            assert_eq!(
                verify.status.code(),
                Some(3),
                "generator entry ({r}, {c}) must fail verification"
            );
            mutations += 1;
        }
    }
    assert_eq!(mutations, 18);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 10: PASS — all {mutations} single-entry corruptions rejected with exit 3 ({elapsed:?})");
}
