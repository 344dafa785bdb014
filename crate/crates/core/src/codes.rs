//! Evaluation-set codes and their exact classification.
//!
//! A code here is spanned by rows of monomial evaluations over a set of
//! distinct points a_1, ..., a_n, scaled per column by a nonzero multiplier:
//! the row exponents are (k, k-2, k-3, ..., 1, 0) — the exponent k-1 is
//! deliberately absent.  For such matrices the determinant of any k columns
//! factors as (sum of the points) times the Vandermonde product, which links
//! the distance classification of the code to zero-sum subsets of the points.

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};
use crate::linalg::MatrixFq;
use std::collections::BTreeMap;
use std::collections::HashMap;

/// Enumeration budgets used by the exact checks.  All defaults are generous
/// for desk-scale parameters; callers (and the CLI via environment variables)
/// can override them.
#[derive(Copy, Clone, Debug)]
pub struct Budgets {
    /// Max number of codewords `q^k` enumerated by the distance brute force.
    pub distance: u64,
    /// Max total number of column subsets ranked by the classifier.
    pub rank_scan: u64,
    /// Max number of candidates visited by zero-sum subset searches.
    pub subset_search: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            distance: 10_000_000,
            rank_scan: 1_000_000,
            subset_search: 10_000_000,
        }
    }
}

/// Which construction family produced an evaluation set.  The identifiers
/// ("3.3" ... "3.7") are the stable names the CLI exposes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    T33,
    T34,
    T35,
    T36,
    T37,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::T33 => "3.3",
            Family::T34 => "3.4",
            Family::T35 => "3.5",
            Family::T36 => "3.6",
            Family::T37 => "3.7",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "3.3" => Some(Family::T33),
            "3.4" => Some(Family::T34),
            "3.5" => Some(Family::T35),
            "3.6" => Some(Family::T36),
            "3.7" => Some(Family::T37),
            _ => None,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Where an evaluation set (and the code built from it) came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Construction {
        family: Family,
        params: BTreeMap<String, u64>,
    },
    Adhoc,
}

/// An ordered set of distinct evaluation points, optionally carrying a
/// witness: a sorted index subset of size n/2 whose elements sum to zero.
/// Both properties are checked eagerly at construction.
#[derive(Clone, Debug)]
pub struct EvalSet {
    elements: Vec<Fe>,
    witness: Option<Vec<usize>>,
    provenance: Provenance,
}

impl EvalSet {
    pub fn new(
        ctx: &FieldCtx,
        elements: Vec<Fe>,
        witness: Option<Vec<usize>>,
        provenance: Provenance,
    ) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(elements.len());
        for &e in &elements {
            debug_assert!(e.value() < ctx.q());
            if !seen.insert(e) {
                return Err(Error::DuplicatePoint { value: e.value() });
            }
        }
        if let Some(w) = &witness {
            if w.len() != elements.len() / 2 || elements.len() % 2 != 0 {
                return Err(Error::WitnessCheckFailed(format!(
                    "witness has {} indices, expected {}",
                    w.len(),
                    elements.len() / 2
                )));
            }
            if w.windows(2).any(|p| p[0] >= p[1]) || w.iter().any(|&i| i >= elements.len()) {
                return Err(Error::WitnessCheckFailed(
                    "witness indices must be sorted, distinct and in range".into(),
                ));
            }
            let mut acc = Fe::ZERO;
            for &i in w {
                acc = ctx.add(acc, elements[i]);
            }
            if acc != Fe::ZERO {
                return Err(Error::WitnessCheckFailed(
                    "witness elements do not sum to zero".into(),
                ));
            }
        }
        Ok(EvalSet {
            elements,
            witness,
            provenance,
        })
    }

    pub fn adhoc(ctx: &FieldCtx, elements: Vec<Fe>) -> Result<Self> {
        Self::new(ctx, elements, None, Provenance::Adhoc)
    }

    pub fn elements(&self) -> &[Fe] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn witness(&self) -> Option<&[usize]> {
        self.witness.as_deref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn sum(&self, ctx: &FieldCtx) -> Fe {
        self.elements
            .iter()
            .fold(Fe::ZERO, |acc, &e| ctx.add(acc, e))
    }
}

/// Per-column scaling factors; all entries verified nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierVector(Vec<Fe>);

impl MultiplierVector {
    pub fn new(values: Vec<Fe>) -> Result<Self> {
        if let Some(index) = values.iter().position(|&v| v == Fe::ZERO) {
            return Err(Error::ZeroMultiplier { index });
        }
        Ok(MultiplierVector(values))
    }

    pub fn ones(n: usize) -> Self {
        MultiplierVector(vec![Fe::ONE; n])
    }

    pub fn values(&self) -> &[Fe] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A linear code given by an explicit generator matrix of verified rank k.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: MatrixFq,
    provenance: Provenance,
}

impl LinearCode {
    /// Wraps a raw generator matrix, re-verifying that its rank equals its
    /// row count.
    pub fn from_generator(ctx: &FieldCtx, generator: MatrixFq, provenance: Provenance) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if k == 0 || n <= k {
            return Err(Error::NotEnoughPoints { n, k });
        }
        let rank = generator.rank(ctx);
        if rank != k {
            return Err(Error::VerificationFailed(format!(
                "generator has rank {rank}, expected {k}"
            )));
        }
        Ok(LinearCode {
            n,
            k,
            generator,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &MatrixFq {
        &self.generator
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// The row exponent sequence (k, k-2, k-3, ..., 1, 0); for k = 1 it is just
/// (1).  Note the gap: k-1 never appears.
pub fn exponent_pattern(k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    out.push(k as u64);
    for e in (0..k.saturating_sub(1)).rev() {
        out.push(e as u64);
    }
    out
}

/// The k x |points| matrix with entry a_j^{e_r} for the pattern exponents,
/// without column multipliers.  The exponent-0 row is all ones even when 0 is
/// among the points.
pub fn pattern_matrix(ctx: &FieldCtx, points: &[Fe], k: usize) -> MatrixFq {
    let exps = exponent_pattern(k);
    let mut m = MatrixFq::zeros(k, points.len());
    for (r, &e) in exps.iter().enumerate() {
        for (c, &a) in points.iter().enumerate() {
            let v = if e == 0 { Fe::ONE } else { ctx.pow(a, e) };
            m.set(r, c, v);
        }
    }
    m
}

/// Builds the code with generator entry lambda_j * a_j^{e_r} and verifies its
/// rank is exactly k.
pub fn build_code(
    ctx: &FieldCtx,
    points: &EvalSet,
    k: usize,
    lambda: &MultiplierVector,
) -> Result<LinearCode> {
    let n = points.len();
    if k == 0 || n <= k {
        return Err(Error::NotEnoughPoints { n, k });
    }
    if lambda.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} points but {} multipliers",
            lambda.len()
        )));
    }
    let mut g = pattern_matrix(ctx, points.elements(), k);
    for r in 0..k {
        for c in 0..n {
            g.set(r, c, ctx.mul(lambda.values()[c], g.get(r, c)));
        }
    }
    LinearCode::from_generator(ctx, g, points.provenance().clone())
}

/// (a_1 + ... + a_k) * prod_{s<t} (a_t - a_s): the closed form for the
/// determinant of the k-point pattern matrix, up to a sign depending only
/// on k.
pub fn det_shifted_vandermonde(ctx: &FieldCtx, points: &[Fe]) -> Fe {
    let mut sum = Fe::ZERO;
    for &a in points {
        sum = ctx.add(sum, a);
    }
    let mut prod = Fe::ONE;
    for t in 1..points.len() {
        for s in 0..t {
            prod = ctx.mul(prod, ctx.sub(points[t], points[s]));
        }
    }
    ctx.mul(sum, prod)
}

/// Outcome of the self-duality test, keeping the Gram product G G^T as the
/// re-checkable certificate.
#[derive(Clone, Debug)]
pub struct SelfDualCheck {
    pub holds: bool,
    pub length_is_twice_dimension: bool,
    pub gram: MatrixFq,
    pub generator_rank: usize,
}

pub fn is_self_dual(ctx: &FieldCtx, code: &LinearCode) -> SelfDualCheck {
    let g = code.generator();
    let gram = g
        .mat_mul(ctx, &g.transpose())
        .expect("G and G^T are always compatible");
    let length_ok = code.n() == 2 * code.k();
    let rank = g.rank(ctx);
    SelfDualCheck {
        holds: length_ok && gram.is_zero() && rank == code.k(),
        length_is_twice_dimension: length_ok,
        gram,
        generator_rank: rank,
    }
}

/// Exact minimum distance by enumerating all q^k - 1 nonzero messages.
pub fn min_distance_bruteforce(ctx: &FieldCtx, code: &LinearCode, budget: u64) -> Result<u64> {
    let q = ctx.q();
    let (n, k) = (code.n(), code.k());
    let total = (q as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let g = code.generator();
    let mut digits = vec![0u64; k];
    let mut word = vec![Fe::ZERO; n];
    let mut best = n as u64;
    'messages: loop {
        // odometer step: walking digit i from encoding c to c+1 changes the
        // codeword by (elem(c+1) - elem(c)) * row_i; over prime fields that
        // delta is always one, over extensions it varies with digit carries
        let mut i = 0;
        loop {
            if i == k {
                break 'messages;
            }
            let cur = digits[i];
            let next = if cur + 1 == q { 0 } else { cur + 1 };
            let delta = ctx.sub(Fe(next), Fe(cur));
            let row = g.row(i);
            if delta == Fe::ONE {
                for (w, &r) in word.iter_mut().zip(row) {
                    *w = ctx.add(*w, r);
                }
            } else {
                for (w, &r) in word.iter_mut().zip(row) {
                    *w = ctx.add(*w, ctx.mul(delta, r));
                }
            }
            digits[i] = next;
            if next != 0 {
                break;
            }
            i += 1;
        }
        let mut weight = 0u64;
        for &w in &word {
            if w != Fe::ZERO {
                weight += 1;
                if weight >= best {
                    break;
                }
            }
        }
        if weight < best {
            best = weight;
            if best == 1 {
                break;
            }
        }
    }
    Ok(best)
}

/// MDS / NMDS / other, decided purely by column-subset ranks.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Mds,
    Nmds,
    Other,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Mds => "MDS",
            Verdict::Nmds => "NMDS",
            Verdict::Other => "OTHER",
        }
    }
}

/// Re-checkable evidence backing a verdict: every cited subset can be ranked
/// again independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Every k-column subset has full rank (MDS).
    AllKSubsetsFullRank { k_subsets_checked: u64 },
    /// NMDS: all (k-1)-subsets independent, this k-subset dependent, all
    /// (k+1)-subsets of rank k.
    DependentKSubset {
        indices: Vec<usize>,
        rank: usize,
        k_minus_one_checked: u64,
        k_plus_one_checked: u64,
    },
    /// Some k-1 columns are already dependent.
    DependentSmallSubset { indices: Vec<usize>, rank: usize },
    /// Some k+1 columns have rank below k.
    DeficientLargeSubset { indices: Vec<usize>, rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// Classifies a code by scanning column subsets of sizes k-1, k and k+1:
/// MDS means every k-subset is independent; NMDS means (k-1)-subsets are
/// independent, some k-subset is dependent, and (k+1)-subsets all have rank
/// k.  A failure of the first condition short-circuits to OTHER.
pub fn classify_by_ranks(ctx: &FieldCtx, code: &LinearCode, budget: u64) -> Result<Classification> {
    let (n, k) = (code.n(), code.k());
    let work = binomial(n, k - 1)
        .saturating_add(binomial(n, k))
        .saturating_add(binomial(n, k + 1));
    if work > budget as u128 {
        return Err(Error::CombinatorialBudgetExceeded {
            required: work,
            budget,
        });
    }
    let g = code.generator();
    let mut scratch = Vec::new();

    if k >= 2 {
        let mut bad: Option<(Vec<usize>, usize)> = None;
        for_each_combination(n, k - 1, |idx| {
            let r = g.rank_of_columns(ctx, idx, &mut scratch);
            if r != k - 1 {
                bad = Some((idx.to_vec(), r));
                return false;
            }
            true
        });
        if let Some((indices, rank)) = bad {
            return Ok(Classification {
                verdict: Verdict::Other,
                evidence: Evidence::DependentSmallSubset { indices, rank },
            });
        }
    }

    let mut dependent: Option<(Vec<usize>, usize)> = None;
    let mut k_checked = 0u64;
    for_each_combination(n, k, |idx| {
        k_checked += 1;
        let r = g.rank_of_columns(ctx, idx, &mut scratch);
        if r < k {
            dependent = Some((idx.to_vec(), r));
            return false;
        }
        true
    });
    let Some((indices, rank)) = dependent else {
        return Ok(Classification {
            verdict: Verdict::Mds,
            evidence: Evidence::AllKSubsetsFullRank {
                k_subsets_checked: k_checked,
            },
        });
    };

    let mut deficient: Option<(Vec<usize>, usize)> = None;
    let mut kp1_checked = 0u64;
    for_each_combination(n, k + 1, |idx| {
        kp1_checked += 1;
        let r = g.rank_of_columns(ctx, idx, &mut scratch);
        if r != k {
            deficient = Some((idx.to_vec(), r));
            return false;
        }
        true
    });
    if let Some((indices, rank)) = deficient {
        return Ok(Classification {
            verdict: Verdict::Other,
            evidence: Evidence::DeficientLargeSubset { indices, rank },
        });
    }
    Ok(Classification {
        verdict: Verdict::Nmds,
        evidence: Evidence::DependentKSubset {
            indices,
            rank,
            k_minus_one_checked: binomial(n, k - 1) as u64,
            k_plus_one_checked: kp1_checked,
        },
    })
}

/// First (lexicographically) size-k index subset of the evaluation set whose
/// elements sum to zero, if any.  Enumerates (k-1)-prefixes and completes the
/// last index by value lookup; switches to a meet-in-the-middle table when the
/// prefix space alone would blow the budget.
pub fn has_zero_sum_k_subset(
    ctx: &FieldCtx,
    points: &EvalSet,
    k: usize,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "subset size {k} out of range for {n} points"
        )));
    }
    let elems = points.elements();
    if k == 1 {
        return Ok(elems
            .iter()
            .position(|&e| e == Fe::ZERO)
            .map(|i| vec![i]));
    }
    let prefix_work = binomial(n, k - 1);
    if prefix_work <= budget as u128 {
        let found = zero_sum_search(ctx, elems, k, u64::MAX, 1)?;
        return Ok(found.into_iter().next());
    }
    if binomial(n, k) > 10_000_000 {
        return meet_in_the_middle(ctx, elems, k, budget);
    }
    Err(Error::SearchBudgetExceeded {
        required: prefix_work,
        budget,
    })
}

/// All zero-sum k-subsets of the evaluation set in lexicographic order, up
/// to `limit` of them.  Unlike `has_zero_sum_k_subset` this always uses the
/// direct prefix walk, so the budget bounds C(n, k-1).
pub fn zero_sum_k_subsets(
    ctx: &FieldCtx,
    points: &EvalSet,
    k: usize,
    budget: u64,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "subset size {k} out of range for {n} points"
        )));
    }
    if k == 1 {
        return Ok(points
            .elements()
            .iter()
            .position(|&e| e == Fe::ZERO)
            .map(|i| vec![i])
            .into_iter()
            .collect());
    }
    zero_sum_search(ctx, points.elements(), k, budget, limit)
}

/// Lexicographic enumeration of zero-sum k-subsets: walks (k-1)-prefixes in
/// order and completes each by looking up the negated prefix sum.  Collects up
/// to `limit` witnesses; `budget` caps the number of prefixes visited.
pub(crate) fn zero_sum_search(
    ctx: &FieldCtx,
    elems: &[Fe],
    k: usize,
    budget: u64,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = elems.len();
    debug_assert!(k >= 2 && k <= n);
    let index_of: HashMap<Fe, usize> = elems
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let mut found = Vec::new();
    let mut visited = 0u64;
    let mut over_budget = false;
    for_each_combination(n, k - 1, |prefix| {
        visited += 1;
        if visited > budget {
            over_budget = true;
            return false;
        }
        let mut acc = Fe::ZERO;
        for &i in prefix {
            acc = ctx.add(acc, elems[i]);
        }
        let need = ctx.neg(acc);
        if let Some(&j) = index_of.get(&need) {
            if j > *prefix.last().unwrap() {
                let mut w = prefix.to_vec();
                w.push(j);
                found.push(w);
                if found.len() >= limit {
                    return false;
                }
            }
        }
        true
    });
    if over_budget && found.len() < limit {
        return Err(Error::SearchBudgetExceeded {
            required: binomial(n, k - 1),
            budget,
        });
    }
    Ok(found)
}

fn meet_in_the_middle(
    ctx: &FieldCtx,
    elems: &[Fe],
    k: usize,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    let n = elems.len();
    let half = n / 2;
    let left = &elems[..half];
    let right = &elems[half..];
    let mut work: u128 = 0;
    for i in 0..=k.min(half) {
        if k - i <= n - half {
            work += binomial(half, i) + binomial(n - half, k - i);
        }
    }
    if work > budget as u128 {
        return Err(Error::SearchBudgetExceeded {
            required: work,
            budget,
        });
    }
    // size -> (sum -> lexicographically first index set achieving it)
    let mut by_size: Vec<HashMap<Fe, Vec<usize>>> = vec![HashMap::new(); k.min(half) + 1];
    for (size, bucket) in by_size.iter_mut().enumerate() {
        for_each_combination(half, size, |idx| {
            let mut acc = Fe::ZERO;
            for &i in idx {
                acc = ctx.add(acc, left[i]);
            }
            bucket.entry(acc).or_insert_with(|| idx.to_vec());
            true
        });
    }
    let mut result: Option<Vec<usize>> = None;
    for (size, bucket) in by_size.iter().enumerate() {
        let rsize = k - size;
        if rsize > n - half {
            continue;
        }
        for_each_combination(n - half, rsize, |idx| {
            let mut acc = Fe::ZERO;
            for &i in idx {
                acc = ctx.add(acc, right[i]);
            }
            if let Some(lpart) = bucket.get(&ctx.neg(acc)) {
                let mut w = lpart.clone();
                w.extend(idx.iter().map(|&i| i + half));
                result = Some(w);
                return false;
            }
            true
        });
        if result.is_some() {
            break;
        }
    }
    Ok(result)
}

/// pi_A(a_i) = prod_{j != i} (a_i - a_j); never zero for distinct points.
pub fn pi_a(ctx: &FieldCtx, points: &EvalSet, i: usize) -> Fe {
    let elems = points.elements();
    let mut prod = Fe::ONE;
    for (j, &e) in elems.iter().enumerate() {
        if j != i {
            prod = ctx.mul(prod, ctx.sub(elems[i], e));
        }
    }
    prod
}

/// Calls `f` on each k-subset of {0..n} in lexicographic order until it
/// returns false.  The empty subset (k = 0) is visited once.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}
