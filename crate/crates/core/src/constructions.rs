//! Builders for the five families of zero-sum evaluation sets, and the
//! length scanner.
//!
//! Each `build_*` function assembles a concrete evaluation set from subgroup
//! cosets, subspace cosets or trace fibers, together with an explicit
//! half-size zero-sum witness, then re-verifies every claimed property by
//! direct computation: distinctness, total sum zero, witness sum zero, and a
//! uniform quadratic-character profile.  Nothing is taken on faith from the
//! parameter conditions.
//!
//! `scan_lengths` answers the converse question — which code lengths the
//! families can reach over a given field — by pure parameter arithmetic,
//! applying exactly the same feasibility rules as the builders.

use crate::codes::{zero_sum_search, EvalSet, Family, Provenance};
use crate::error::{Error, Result};
use crate::gf::{factor_prime_power, Fe, FieldCtx};
use crate::lambda::eta_profile;
use std::collections::{BTreeMap, BTreeSet};

/// Cap on candidates visited by the order search in `build_thm36` at level
/// zero, where a valid offset ordering must be found rather than written down.
const ORDERING_SEARCH_BUDGET: u64 = 2_000_000;

fn param_map(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs
        .iter()
        .map(|&(k, v)| (k.to_string(), v))
        .collect()
}

/// Final gate for every builder: distinct elements, an in-range sorted
/// witness summing to zero (checked by `EvalSet::new`), total sum zero, and a
/// uniform character profile.
fn finish_eval_set(
    ctx: &FieldCtx,
    family: Family,
    params: BTreeMap<String, u64>,
    elements: Vec<Fe>,
    witness: Vec<usize>,
) -> Result<EvalSet> {
    let set = EvalSet::new(
        ctx,
        elements,
        Some(witness),
        Provenance::Construction { family, params },
    )?;
    if set.sum(ctx) != Fe::ZERO {
        return Err(Error::VerificationFailed(format!(
            "family {family}: constructed set does not sum to zero"
        )));
    }
    let profile = eta_profile(ctx, &set)?;
    if !profile.uniform() {
        return Err(Error::VerificationFailed(format!(
            "family {family}: character profile is not uniform"
        )));
    }
    Ok(set)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Sorted list of all divisors of `x`.
fn divisors(x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= x {
        if x % d == 0 {
            out.push(d);
            if d != x / d {
                out.push(x / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Smallest exponent u with p^u >= t (t >= 1).
fn ceil_log(p: u64, t: u64) -> u32 {
    let mut u = 0;
    let mut acc: u64 = 1;
    while acc < t {
        acc *= p;
        u += 1;
    }
    u
}

/// The square root r with r^2 = q, available only when the extension degree
/// is even.
fn subfield_order(p: u64, m: u32, q: u64) -> Result<u64> {
    if m % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "q = {q} is not the square of a prime power"
        )));
    }
    Ok(p.pow(m / 2))
}

// ---------------------------------------------------------------------------
// Family 3.3: roots of unity
// ---------------------------------------------------------------------------

fn validate_thm33(q: u64, n: u64) -> Result<()> {
    if q % 4 != 1 {
        return Err(Error::InvalidParams(format!("q = {q} must be 1 mod 4")));
    }
    if n % 2 != 0 || n < 4 {
        return Err(Error::InvalidParams(format!(
            "n = {n} must be even and at least 4"
        )));
    }
    if n >= q - 1 || (q - 1) % n != 0 {
        return Err(Error::InvalidParams(format!(
            "n = {n} must be a proper divisor of q - 1 = {}",
            q - 1
        )));
    }
    Ok(())
}

/// Evaluation set from roots of unity: for n = 2 mod 4 the full group of
/// n-th roots, otherwise the (n/2)-th roots together with one square coset.
pub fn build_thm33(ctx: &FieldCtx, n: u64) -> Result<EvalSet> {
    let q = ctx.q();
    validate_thm33(q, n)?;
    let g = ctx.generator();
    let params = param_map(&[("q", q), ("n", n)]);

    let (elements, witness) = if n % 4 == 2 {
        let theta = ctx.pow(g, (q - 1) / n);
        let mut elements = Vec::with_capacity(n as usize);
        let mut x = Fe::ONE;
        for _ in 0..n {
            x = ctx.mul(x, theta);
            elements.push(x);
        }
        // the even powers theta^2, theta^4, ..., theta^n form the index-2
        // subgroup, which sums to zero
        let witness = (0..n as usize).filter(|i| i % 2 == 1).collect();
        (elements, witness)
    } else {
        let m = n / 2;
        let theta = ctx.pow(g, (q - 1) / m);
        let mut subgroup = Vec::with_capacity(m as usize);
        let mut x = Fe::ONE;
        for _ in 0..m {
            x = ctx.mul(x, theta);
            subgroup.push(x);
        }
        // smallest even power of g outside the subgroup; membership means
        // being killed by the m-th power map
        let mut beta = None;
        for j in 1..=(q - 1) / 2 {
            let cand = ctx.pow(g, 2 * j);
            if ctx.pow(cand, m) != Fe::ONE {
                beta = Some(cand);
                break;
            }
        }
        let Some(beta) = beta else {
            return Err(Error::InvalidParams(
                "no square lies outside the subgroup; n is too close to q - 1".into(),
            ));
        };
        let mut elements = subgroup.clone();
        elements.extend(subgroup.iter().map(|&x| ctx.mul(beta, x)));
        let witness = (0..m as usize).collect();
        (elements, witness)
    };
    finish_eval_set(ctx, Family::T33, params, elements, witness)
}

// ---------------------------------------------------------------------------
// Family 3.4: cosets of one multiplicative subgroup
// ---------------------------------------------------------------------------

fn validate_thm34(q: u64, r: u64, e: u64, f: u64, t: u64) -> Result<u64> {
    if e == 0 || f == 0 || e.checked_mul(f) != Some(q - 1) {
        return Err(Error::InvalidParams(format!(
            "e * f must equal q - 1 = {}, got e = {e}, f = {f}",
            q - 1
        )));
    }
    if e % 2 != 0 {
        return Err(Error::InvalidParams(format!("e = {e} must be even")));
    }
    if f < 2 {
        return Err(Error::InvalidParams(
            "f must be at least 2 so each coset sums to zero".into(),
        ));
    }
    let cap = (r + 1) / gcd(r + 1, f);
    if t == 0 || t > cap {
        return Err(Error::InvalidParams(format!(
            "t = {t} must lie in 1..={cap} for f = {f}"
        )));
    }
    if (t * f) % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "n = t*f = {} must be even",
            t * f
        )));
    }
    if t * f < 4 {
        return Err(Error::InvalidParams(format!(
            "n = t*f = {} must be at least 4",
            t * f
        )));
    }
    if t % 2 == 1 && f < 4 {
        return Err(Error::WitnessCheckFailed(
            "odd t needs f >= 4 so the half-coset witness sums to zero".into(),
        ));
    }
    Ok(cap)
}

/// Evaluation set from t cosets of the order-f subgroup, the cosets selected
/// by powers of an element of order r + 1.
pub fn build_thm34(
    ctx: &FieldCtx,
    e: u64,
    f: u64,
    t: u64,
    indices: Option<&[u64]>,
) -> Result<EvalSet> {
    let q = ctx.q();
    let r = subfield_order(ctx.p(), ctx.m(), q)?;
    let cap = validate_thm34(q, r, e, f, t)?;

    let default_indices: Vec<u64> = (0..t).collect();
    let idx: &[u64] = indices.unwrap_or(&default_indices);
    if idx.len() != t as usize {
        return Err(Error::InvalidParams(format!(
            "expected {t} coset indices, got {}",
            idx.len()
        )));
    }
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] % cap == idx[b] % cap {
                return Err(Error::CosetCollision {
                    i: idx[a],
                    j: idx[b],
                });
            }
        }
    }

    let g = ctx.generator();
    let alpha = ctx.pow(g, e);
    let beta = ctx.pow(g, r - 1);
    let mut elements = Vec::with_capacity((t * f) as usize);
    for &i in idx {
        let base = ctx.pow(beta, i);
        let mut x = base;
        for _ in 0..f {
            x = ctx.mul(x, alpha);
            elements.push(x);
        }
    }
    // witness: whole cosets when t is even, otherwise the even-power half of
    // every coset
    let witness: Vec<usize> = if t % 2 == 0 {
        (0..((t / 2) * f) as usize).collect()
    } else {
        let mut w = Vec::with_capacity((t * f / 2) as usize);
        for lam in 0..t {
            for s in (2..=f).step_by(2) {
                w.push((lam * f + s - 1) as usize);
            }
        }
        w
    };

    let mut params = param_map(&[("e", e), ("f", f), ("t", t)]);
    if indices.is_some() {
        for (pos, &i) in idx.iter().enumerate() {
            params.insert(format!("i{pos}"), i);
        }
    }
    finish_eval_set(ctx, Family::T34, params, elements, witness)
}

// ---------------------------------------------------------------------------
// Family 3.5: cosets of the two norm subgroups
// ---------------------------------------------------------------------------

fn validate_thm35(r: u64, s: u64, t: u64) -> Result<()> {
    if s == 0 || s > (r + 1) / 2 {
        return Err(Error::InvalidParams(format!(
            "s = {s} must lie in 1..={}",
            (r + 1) / 2
        )));
    }
    if t == 0 || t > (r - 1) / 2 {
        return Err(Error::InvalidParams(format!(
            "t = {t} must lie in 1..={}",
            (r - 1) / 2
        )));
    }
    let ok = (r % 4 == 1 && s % 2 == 0) || (r % 4 == 3 && s % 2 == 1);
    if !ok {
        return Err(Error::ParityViolation(format!(
            "r = {r} mod 4 = {} requires s {}",
            r % 4,
            if r % 4 == 1 { "even" } else { "odd" }
        )));
    }
    Ok(())
}

/// Evaluation set from s square cosets of the subfield unit group and t
/// non-square cosets of the order-(r+1) subgroup; n = s(r-1) + t(r+1).
pub fn build_thm35(ctx: &FieldCtx, s: u64, t: u64) -> Result<EvalSet> {
    let q = ctx.q();
    let r = subfield_order(ctx.p(), ctx.m(), q)?;
    validate_thm35(r, s, t)?;

    let g = ctx.generator();
    let gamma = ctx.pow(g, r + 1); // order r - 1
    let beta = ctx.pow(g, r - 1); // order r + 1
    let n = (s * (r - 1) + t * (r + 1)) as usize;
    let mut elements = Vec::with_capacity(n);
    for i in 1..=s {
        let base = ctx.pow(g, 2 * i);
        let mut x = base;
        for _ in 0..r - 1 {
            x = ctx.mul(x, gamma);
            elements.push(x);
        }
    }
    for j in 1..=t {
        let base = ctx.pow(g, 2 * j - 1);
        let mut x = base;
        for _ in 0..r + 1 {
            x = ctx.mul(x, beta);
            elements.push(x);
        }
    }

    let witness: Vec<usize> = if r >= 5 {
        // even-power halves of every coset
        let mut w = Vec::with_capacity(n / 2);
        for i in 0..s {
            let base = (i * (r - 1)) as usize;
            for u in (2..=r - 1).step_by(2) {
                w.push(base + u as usize - 1);
            }
        }
        let part2 = (s * (r - 1)) as usize;
        for j in 0..t {
            let base = part2 + (j * (r + 1)) as usize;
            for u in (2..=r + 1).step_by(2) {
                w.push(base + u as usize - 1);
            }
        }
        w
    } else {
        // r = 3 forces s = t = 1 and n = 6; the halved cosets degenerate, so
        // use the known dependent triple {g, g^2, g^7} when the chosen
        // modulus realizes it, else the first zero-sum triple found
        let triple = [g, ctx.pow(g, 2), ctx.pow(g, 7)];
        let sum = triple
            .iter()
            .fold(Fe::ZERO, |acc, &x| ctx.add(acc, x));
        if sum == Fe::ZERO {
            let mut w: Vec<usize> = triple
                .iter()
                .map(|v| {
                    elements
                        .iter()
                        .position(|e| e == v)
                        .expect("odd powers of g all appear in the set")
                })
                .collect();
            w.sort_unstable();
            w
        } else {
            match zero_sum_search(ctx, &elements, 3, ORDERING_SEARCH_BUDGET, 1)?
                .into_iter()
                .next()
            {
                Some(w) => w,
                None => {
                    return Err(Error::WitnessCheckFailed(
                        "no zero-sum triple exists in the r = 3 set".into(),
                    ))
                }
            }
        }
    };

    let params = param_map(&[("r", r), ("s", s), ("t", t)]);
    finish_eval_set(ctx, Family::T35, params, elements, witness)
}

// ---------------------------------------------------------------------------
// Family 3.6: cosets of an intermediate-field subspace
// ---------------------------------------------------------------------------

fn validate_thm36(p: u64, m: u32, q: u64, r: u64, l: u32, t: u64) -> Result<u64> {
    let (pr, sp) = factor_prime_power(r)?;
    if pr != p {
        return Err(Error::InvalidParams(format!(
            "subfield order {r} is not a power of the field characteristic {p}"
        )));
    }
    if m % 2 != 0 || (m / 2) % sp != 0 {
        return Err(Error::InvalidParams(format!(
            "F_{r} must embed in the half-degree subfield of F_{q}"
        )));
    }
    let degree = m / sp; // dimension of F_q over F_r
    if l >= degree {
        return Err(Error::InvalidParams(format!(
            "l = {l} must be less than {degree}"
        )));
    }
    if t == 0 || t > (r - 1) / 2 {
        return Err(Error::InvalidParams(format!(
            "t = {t} must lie in 1..={}",
            (r - 1) / 2
        )));
    }
    let n = 2 * t * r.pow(l);
    if n < 4 {
        return Err(Error::InvalidParams(format!(
            "n = 2*t*r^l = {n} must be at least 4"
        )));
    }
    Ok(n)
}

/// For level l = 0 the offsets must themselves carry the zero sums: find the
/// first two disjoint size-t subsets of the subfield that each sum to zero.
fn disjoint_zero_sum_offsets(
    ctx: &FieldCtx,
    subfield: &[Fe],
    t: usize,
) -> Result<Vec<Fe>> {
    let r = subfield.len();
    let mut visited = 0u64;
    let mut result: Option<Vec<Fe>> = None;
    let mut over_budget = false;
    crate::codes::for_each_combination(r, t, |w_idx| {
        visited += 1;
        if visited > ORDERING_SEARCH_BUDGET {
            over_budget = true;
            return false;
        }
        let w_sum = w_idx
            .iter()
            .fold(Fe::ZERO, |acc, &i| ctx.add(acc, subfield[i]));
        if w_sum != Fe::ZERO {
            return true;
        }
        let in_w: BTreeSet<usize> = w_idx.iter().copied().collect();
        let rest: Vec<usize> = (0..r).filter(|i| !in_w.contains(i)).collect();
        let mut found_v: Option<Vec<usize>> = None;
        crate::codes::for_each_combination(rest.len(), t, |v_pos| {
            visited += 1;
            if visited > ORDERING_SEARCH_BUDGET {
                over_budget = true;
                return false;
            }
            let v_sum = v_pos
                .iter()
                .fold(Fe::ZERO, |acc, &i| ctx.add(acc, subfield[rest[i]]));
            if v_sum == Fe::ZERO {
                found_v = Some(v_pos.iter().map(|&i| rest[i]).collect());
                return false;
            }
            true
        });
        if let Some(v_idx) = found_v {
            let mut xi: Vec<Fe> = w_idx.iter().map(|&i| subfield[i]).collect();
            xi.extend(v_idx.iter().map(|&i| subfield[i]));
            result = Some(xi);
            return false;
        }
        !over_budget
    });
    match result {
        Some(xi) => Ok(xi),
        None if over_budget => Err(Error::SearchBudgetExceeded {
            required: crate::codes::binomial(r, t),
            budget: ORDERING_SEARCH_BUDGET,
        }),
        None => Err(Error::WitnessCheckFailed(
            "no pair of disjoint zero-sum offset sets exists at level 0".into(),
        )),
    }
}

/// Offset ordering for levels >= 1: integer multiples of one in zigzag order
/// 0, 1, -1, 2, -2, ..., then the remaining subfield elements in ascending
/// +/- pairs.  Any ordering works here (the subspace size is divisible by
/// the characteristic); this one is just the fixed canonical choice.
fn zigzag_offsets(ctx: &FieldCtx, subfield: &[Fe], count: usize) -> Vec<Fe> {
    let p = ctx.p();
    let mut seq = Vec::with_capacity(count);
    let mut used = BTreeSet::new();
    let push = |seq: &mut Vec<Fe>, used: &mut BTreeSet<Fe>, x: Fe| {
        if used.insert(x) {
            seq.push(x);
        }
    };
    push(&mut seq, &mut used, Fe::ZERO);
    for c in 1..=(p - 1) / 2 {
        let x = ctx.element(c).expect("prime-subfield encoding");
        push(&mut seq, &mut used, x);
        push(&mut seq, &mut used, ctx.neg(x));
    }
    for &x in subfield {
        if seq.len() >= count {
            break;
        }
        if !used.contains(&x) {
            push(&mut seq, &mut used, x);
            push(&mut seq, &mut used, ctx.neg(x));
        }
    }
    seq.truncate(count);
    seq
}

/// Evaluation set from 2t cosets of an l-dimensional subspace over the
/// subfield of order r, shifted by scaled copies of one fixed offset.
pub fn build_thm36(ctx: &FieldCtx, r: u64, l: u32, t: u64) -> Result<EvalSet> {
    let q = ctx.q();
    validate_thm36(ctx.p(), ctx.m(), q, r, l, t)?;
    let subfield = ctx.subfield_elements(r)?;

    // the subspace: all subfield-linear combinations of 1, g, ..., g^(l-1)
    let g = ctx.generator();
    let mut span = BTreeSet::new();
    span.insert(Fe::ZERO);
    for j in 0..l {
        let basis_vec = ctx.pow(g, j as u64);
        let mut next = BTreeSet::new();
        for &h in &span {
            for &c in &subfield {
                next.insert(ctx.add(h, ctx.mul(c, basis_vec)));
            }
        }
        span = next;
    }
    let h_sub: Vec<Fe> = span.iter().copied().collect();
    if h_sub.len() != r.pow(l) as usize {
        return Err(Error::VerificationFailed(format!(
            "subspace has {} elements, expected {}",
            h_sub.len(),
            r.pow(l)
        )));
    }

    let (alpha_off, xi) = if l == 0 {
        (Fe::ONE, disjoint_zero_sum_offsets(ctx, &subfield, t as usize)?)
    } else {
        let mut alpha = None;
        for v in 0..q {
            let cand = ctx.element(v)?;
            if !span.contains(&cand) {
                alpha = Some(cand);
                break;
            }
        }
        let alpha = alpha.ok_or_else(|| {
            Error::InvalidParams("subspace covers the whole field".into())
        })?;
        (alpha, zigzag_offsets(ctx, &subfield, 2 * t as usize))
    };
    if xi.len() != 2 * t as usize {
        return Err(Error::InvalidParams(format!(
            "need 2t = {} distinct offsets but the subfield only provides {}",
            2 * t,
            xi.len()
        )));
    }

    let mut elements = Vec::with_capacity((2 * t * r.pow(l)) as usize);
    for &x in &xi {
        let off = ctx.mul(x, alpha_off);
        for &h in &h_sub {
            elements.push(ctx.add(h, off));
        }
    }
    let witness = (0..(t as usize) * h_sub.len()).collect();

    let params = param_map(&[("r", r), ("l", l as u64), ("t", t)]);
    finish_eval_set(ctx, Family::T36, params, elements, witness)
}

// ---------------------------------------------------------------------------
// Family 3.7: trace fibers plus subspace cosets
// ---------------------------------------------------------------------------

fn validate_thm37(p: u64, m: u32, q: u64, t: u64, s: u64) -> Result<(u64, u32)> {
    let r = subfield_order(p, m, q)?;
    if t % 2 != 0 || t == 0 || t > r {
        return Err(Error::InvalidParams(format!(
            "t = {t} must be even with 1 <= t <= r = {r}"
        )));
    }
    if s % 2 != 0 {
        return Err(Error::InvalidParams(format!("s = {s} must be even")));
    }
    let t_prime = ceil_log(p, t);
    let coset_space = p.pow(m / 2 - t_prime);
    if s > coset_space - 1 {
        return Err(Error::InvalidParams(format!(
            "s = {s} must be at most {}",
            coset_space - 1
        )));
    }
    Ok((r, t_prime))
}

/// Evaluation set from t full fibers of the trace map onto the subfield,
/// plus s cosets (in +/- pairs) of the subspace the fiber shifts live in.
pub fn build_thm37(ctx: &FieldCtx, t: u64, s: u64) -> Result<EvalSet> {
    let q = ctx.q();
    let p = ctx.p();
    let (r, t_prime) = validate_thm37(p, ctx.m(), q, t, s)?;
    let subfield = ctx.subfield_elements(r)?;
    let g = ctx.generator();

    // subspace H inside the subfield: prime-field span of 1, nu, ...,
    // nu^(t'-1), nu a generator of the subfield unit group
    let nu = ctx.pow(g, (q - 1) / (r - 1));
    let mut span = BTreeSet::new();
    span.insert(Fe::ZERO);
    for j in 0..t_prime {
        let basis_vec = ctx.pow(nu, j as u64);
        let mut next = BTreeSet::new();
        for &h in &span {
            for c in 0..p {
                let scalar = ctx.element(c)?;
                next.insert(ctx.add(h, ctx.mul(scalar, basis_vec)));
            }
        }
        span = next;
    }
    let h_sub: Vec<Fe> = span.iter().copied().collect();
    if h_sub.len() != p.pow(t_prime) as usize {
        return Err(Error::VerificationFailed(format!(
            "trace-shift subspace has {} elements, expected {}",
            h_sub.len(),
            p.pow(t_prime)
        )));
    }
    let h_targets = &h_sub[..t as usize];

    // every fiber of x + x^r over h is h/2 + the kernel line; the kernel is
    // spanned by g^((r+1)/2), whose (r-1)-th power is -1
    let delta = ctx.pow(g, (r + 1) / 2);
    let half = ctx.inv(ctx.element(2)?)?;
    let mut elements = Vec::with_capacity((t * r + s * p.pow(t_prime)) as usize);
    for &h in h_targets {
        let x0 = ctx.mul(h, half);
        let mut fiber: Vec<Fe> = subfield
            .iter()
            .map(|&c| ctx.add(x0, ctx.mul(c, delta)))
            .collect();
        fiber.sort_unstable();
        fiber.dedup();
        if fiber.len() != r as usize {
            return Err(Error::VerificationFailed(format!(
                "trace fiber of {h} has {} elements, expected {r}",
                fiber.len()
            )));
        }
        for &x in &fiber {
            if ctx.trace_to_subfield(x, r)? != h {
                return Err(Error::VerificationFailed(format!(
                    "element {x} has the wrong trace for fiber {h}"
                )));
            }
        }
        verify_fiber_product(ctx, &fiber, h, r)?;
        elements.extend_from_slice(&fiber);
    }

    // s/2 +/- pairs of subspace cosets inside the subfield, representatives
    // picked by smallest encoding
    if s > 0 {
        let mut covered: BTreeSet<Fe> = span.clone();
        let mut reps = Vec::with_capacity(s as usize / 2);
        while reps.len() < s as usize / 2 {
            let Some(&b) = subfield.iter().find(|x| !covered.contains(x)) else {
                return Err(Error::RepresentativePairingImpossible);
            };
            reps.push(b);
            for &h in &h_sub {
                covered.insert(ctx.add(b, h));
                covered.insert(ctx.add(ctx.neg(b), h));
            }
        }
        let mut rep_seq = reps.clone();
        rep_seq.extend(reps.iter().map(|&b| ctx.neg(b)));
        for &b in &rep_seq {
            let mut coset: Vec<Fe> = h_sub.iter().map(|&h| ctx.add(b, h)).collect();
            coset.sort_unstable();
            elements.extend_from_slice(&coset);
        }
    }

    // witness: first t/2 fibers and first s/2 cosets
    let mut witness: Vec<usize> = (0..(t / 2 * r) as usize).collect();
    let coset_base = (t * r) as usize;
    let coset_len = h_sub.len();
    witness.extend(coset_base..coset_base + (s as usize / 2) * coset_len);

    let params = param_map(&[("p", p), ("m", (ctx.m() / 2) as u64), ("t", t), ("s", s)]);
    finish_eval_set(ctx, Family::T37, params, elements, witness)
}

/// Checks the closed form for a trace fiber: the monic polynomial with the
/// fiber as its root set must be X^r + X - h, coefficient by coefficient.
pub fn verify_fiber_product(ctx: &FieldCtx, fiber: &[Fe], h: Fe, r: u64) -> Result<()> {
    let mut coeffs = vec![Fe::ONE]; // constant polynomial 1
    for &a in fiber {
        // multiply by (X - a)
        let mut next = vec![Fe::ZERO; coeffs.len() + 1];
        for (d, &c) in coeffs.iter().enumerate() {
            next[d + 1] = ctx.add(next[d + 1], c);
            next[d] = ctx.add(next[d], ctx.mul(ctx.neg(a), c));
        }
        coeffs = next;
    }
    let mut expected = vec![Fe::ZERO; r as usize + 1];
    expected[0] = ctx.neg(h);
    expected[1] = Fe::ONE;
    expected[r as usize] = Fe::ONE;
    if coeffs != expected {
        return Err(Error::VerificationFailed(format!(
            "fiber product polynomial for {h} does not match X^{r} + X - {h}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Length scanner
// ---------------------------------------------------------------------------

/// Which even lengths in [4, 2q+2] each family reaches over F_q, by pure
/// parameter arithmetic (no field elements are ever constructed).
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub q: u64,
    /// All five families in id order, possibly with empty length sets.
    pub per_family: Vec<(Family, BTreeSet<u64>)>,
    pub union: BTreeSet<u64>,
}

impl ScanReport {
    pub fn union_count(&self) -> u64 {
        self.union.len() as u64
    }

    /// Number of even candidate lengths in [4, 2q+2], the scan window.
    pub fn candidate_count(&self) -> u64 {
        self.q
    }

    pub fn ratio(&self) -> f64 {
        self.union.len() as f64 / self.q as f64
    }

    pub fn family_set(&self, family: Family) -> &BTreeSet<u64> {
        &self
            .per_family
            .iter()
            .find(|(f, _)| *f == family)
            .expect("all families present")
            .1
    }
}

/// External reference totals for the union count at selected field sizes,
/// used for cross-checking scan output.
pub fn reference_union_count(q: u64) -> Option<u64> {
    match q {
        10201 => Some(1528),
        11449 => Some(1586),
        39601 => Some(5211),
        _ => None,
    }
}

pub fn scan_lengths(q: u64) -> Result<ScanReport> {
    let (p, m) = factor_prime_power(q)?;
    let max_n = 2 * q + 2;

    let mut t33 = BTreeSet::new();
    if q % 4 == 1 {
        for n in divisors(q - 1) {
            if validate_thm33(q, n).is_ok() && n <= max_n {
                t33.insert(n);
            }
        }
    }

    let mut t34 = BTreeSet::new();
    let mut t35 = BTreeSet::new();
    let mut t36 = BTreeSet::new();
    let mut t37 = BTreeSet::new();
    if m % 2 == 0 {
        let r = p.pow(m / 2);

        for e in divisors(q - 1) {
            if e % 2 != 0 {
                continue;
            }
            let f = (q - 1) / e;
            let cap = (r + 1) / gcd(r + 1, f);
            for t in 1..=cap {
                let n = t * f;
                if n > max_n {
                    break;
                }
                if validate_thm34(q, r, e, f, t).is_ok() {
                    t34.insert(n);
                }
            }
        }

        for s in 1..=(r + 1) / 2 {
            for t in 1..=(r - 1) / 2 {
                if validate_thm35(r, s, t).is_ok() {
                    let n = s * (r - 1) + t * (r + 1);
                    if (4..=max_n).contains(&n) {
                        t35.insert(n);
                    }
                }
            }
        }

        for sp in divisors((m / 2) as u64) {
            let rf = p.pow(sp as u32);
            let degree = m / sp as u32;
            for l in 0..degree {
                for t in 1..=(rf - 1) / 2 {
                    match validate_thm36(p, m, q, rf, l, t) {
                        Ok(n) if n <= max_n => {
                            t36.insert(n);
                        }
                        Ok(_) => break,
                        Err(_) => {}
                    }
                }
            }
        }

        for t in (2..=r).step_by(2) {
            let t_prime = ceil_log(p, t);
            let coset_space = p.pow(m / 2 - t_prime);
            for s in (0..coset_space).step_by(2) {
                if validate_thm37(p, m, q, t, s).is_err() {
                    continue;
                }
                let n = t * r + s * p.pow(t_prime);
                if n > max_n {
                    break;
                }
                if n >= 4 {
                    t37.insert(n);
                }
            }
        }
    }

    let per_family = vec![
        (Family::T33, t33),
        (Family::T34, t34),
        (Family::T35, t35),
        (Family::T36, t36),
        (Family::T37, t37),
    ];
    let mut union = BTreeSet::new();
    for (_, set) in &per_family {
        union.extend(set.iter().copied());
    }
    Ok(ScanReport {
        q,
        per_family,
        union,
    })
}
