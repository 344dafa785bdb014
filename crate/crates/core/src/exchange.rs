//! A JSON document format for constructed codes, carrying enough data to
//! re-verify every claim from scratch: the field, the evaluation set, the
//! multipliers, the generator matrix, the classification with its evidence,
//! and the distance status.
//!
//! Serialization is deterministic: struct fields keep declaration order,
//! parameter maps are sorted, and [`CodeDocument::to_json`] always produces
//! the same bytes for the same document.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::codes::{
    build_code, classify_by_ranks, has_zero_sum_k_subset, is_self_dual, min_distance_bruteforce,
    Budgets, EvalSet, Evidence, Family, LinearCode, MultiplierVector, Provenance, Verdict,
};
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx, FieldSpec};
use crate::lambda::PipelineOutput;
use crate::linalg::MatrixFq;

/// Names the construction family and parameters that produced the
/// evaluation set, so a verifier can tell recipe-built documents from
/// ad-hoc ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub family: String,
    pub params: BTreeMap<String, u64>,
}

/// Serializable mirror of [`Evidence`]; every variant cites concrete column
/// subsets or exhaustive counts that the verifier re-checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvidenceDoc {
    AllKSubsetsFullRank {
        k_subsets_checked: u64,
    },
    DependentKSubset {
        indices: Vec<usize>,
        rank: usize,
        k_minus_one_checked: u64,
        k_plus_one_checked: u64,
    },
    DependentSmallSubset {
        indices: Vec<usize>,
        rank: usize,
    },
    DeficientLargeSubset {
        indices: Vec<usize>,
        rank: usize,
    },
}

impl From<&Evidence> for EvidenceDoc {
    fn from(e: &Evidence) -> Self {
        match e {
            Evidence::AllKSubsetsFullRank { k_subsets_checked } => {
                EvidenceDoc::AllKSubsetsFullRank {
                    k_subsets_checked: *k_subsets_checked,
                }
            }
            Evidence::DependentKSubset {
                indices,
                rank,
                k_minus_one_checked,
                k_plus_one_checked,
            } => EvidenceDoc::DependentKSubset {
                indices: indices.clone(),
                rank: *rank,
                k_minus_one_checked: *k_minus_one_checked,
                k_plus_one_checked: *k_plus_one_checked,
            },
            Evidence::DependentSmallSubset { indices, rank } => EvidenceDoc::DependentSmallSubset {
                indices: indices.clone(),
                rank: *rank,
            },
            Evidence::DeficientLargeSubset { indices, rank } => EvidenceDoc::DeficientLargeSubset {
                indices: indices.clone(),
                rank: *rank,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDoc {
    /// "MDS", "NMDS" or "OTHER".
    pub verdict: String,
    /// Exact minimum distance, absent when the measurement was skipped.
    pub distance: Option<u64>,
    pub evidence: EvidenceDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksDoc {
    pub self_dual: bool,
    pub generator_rank: usize,
    /// "measured" or "skipped".
    pub distance_status: String,
    /// Lexicographically first zero-sum index subset of size k, if any.
    pub zero_sum_witness: Option<Vec<usize>>,
}

/// The full exchange document.  Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub recipe: Option<Recipe>,
    pub eval_set: Vec<u64>,
    pub lambda: Vec<u64>,
    pub witness: Option<Vec<usize>>,
    /// Row-major k x n generator matrix in canonical element encodings.
    pub generator: Vec<Vec<u64>>,
    pub classification: ClassificationDoc,
    pub checks: ChecksDoc,
}

/// Outcome of the distance portion of a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceStatus {
    Measured(u64),
    Skipped,
}

/// A verification transcript: one printable line per re-checked claim, plus
/// the distance outcome so callers can surface the skip explicitly.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub distance: DistanceStatus,
}

/// Packages a pipeline result into a document.  The recipe is taken from the
/// evaluation set's provenance.
pub fn document_from_pipeline(ctx: &FieldCtx, points: &EvalSet, out: &PipelineOutput) -> CodeDocument {
    let code = &out.code;
    let recipe = match points.provenance() {
        Provenance::Construction { family, params } => Some(Recipe {
            family: family.id().to_string(),
            params: params.clone(),
        }),
        Provenance::Adhoc => None,
    };
    let generator = (0..code.k())
        .map(|r| code.generator().row(r).iter().map(|e| e.value()).collect())
        .collect();
    let distance_status = if out.distance.is_some() {
        "measured"
    } else {
        "skipped"
    };
    CodeDocument {
        field: ctx.spec().clone(),
        n: code.n(),
        k: code.k(),
        recipe,
        eval_set: points.elements().iter().map(|e| e.value()).collect(),
        lambda: out.lambda.values().iter().map(|e| e.value()).collect(),
        witness: points.witness().map(|w| w.to_vec()),
        generator,
        classification: ClassificationDoc {
            verdict: out.classification.verdict.label().to_string(),
            distance: out.distance,
            evidence: EvidenceDoc::from(&out.classification.evidence),
        },
        checks: ChecksDoc {
            self_dual: out.self_dual.holds,
            generator_rank: out.self_dual.generator_rank,
            distance_status: distance_status.to_string(),
            zero_sum_witness: out.zero_sum_witness.clone(),
        },
    }
}

impl CodeDocument {
    /// Deterministic pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialization");
        s.push('\n');
        s
    }

    /// Parses and structurally validates a document.  Violations of the
    /// schema (bad field, wrong lengths, out-of-range encodings, duplicate
    /// points, malformed witness shape) are reported as
    /// [`Error::MalformedDocument`]; mathematical claims are left to
    /// [`reverify`].
    pub fn from_json(text: &str) -> Result<CodeDocument> {
        let doc: CodeDocument = serde_json::from_str(text)
            .map_err(|e| Error::MalformedDocument(format!("not a code document: {e}")))?;
        doc.validate_structure()?;
        Ok(doc)
    }

    /// Builds the field context described by the document.
    pub fn context(&self) -> Result<FieldCtx> {
        let spec = FieldSpec::new(self.field.p, self.field.m, self.field.modulus.clone())
            .map_err(|e| Error::MalformedDocument(format!("bad field description: {e}")))?;
        FieldCtx::new(spec).map_err(|e| Error::MalformedDocument(format!("bad field: {e}")))
    }

    fn validate_structure(&self) -> Result<()> {
        let malformed = |msg: String| Err(Error::MalformedDocument(msg));
        let ctx = self.context()?;
        let q = ctx.q();
        let n = self.n;
        let k = self.k;
        if n == 0 || k == 0 || k >= n {
            return malformed(format!("degenerate dimensions [{n}, {k}]"));
        }
        if self.eval_set.len() != n {
            return malformed(format!(
                "eval_set has {} entries, expected n = {n}",
                self.eval_set.len()
            ));
        }
        if self.lambda.len() != n {
            return malformed(format!(
                "lambda has {} entries, expected n = {n}",
                self.lambda.len()
            ));
        }
        for &v in self.eval_set.iter().chain(&self.lambda) {
            if v >= q {
                return malformed(format!("element encoding {v} out of range for q = {q}"));
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for &v in &self.eval_set {
            if !seen.insert(v) {
                return malformed(format!("duplicate evaluation point {v}"));
            }
        }
        if self.lambda.contains(&0) {
            return malformed("zero multiplier".into());
        }
        if let Some(w) = &self.witness {
            if w.len() != n / 2 || n % 2 != 0 {
                return malformed(format!(
                    "witness has {} indices, expected n/2 = {}",
                    w.len(),
                    n / 2
                ));
            }
            if w.windows(2).any(|p| p[0] >= p[1]) || w.iter().any(|&i| i >= n) {
                return malformed("witness indices must be sorted, distinct and below n".into());
            }
        }
        if self.generator.len() != k || self.generator.iter().any(|row| row.len() != n) {
            return malformed(format!("generator is not a {k} x {n} matrix"));
        }
        if self.generator.iter().flatten().any(|&v| v >= q) {
            return malformed(format!("generator entry out of range for q = {q}"));
        }
        if !matches!(self.classification.verdict.as_str(), "MDS" | "NMDS" | "OTHER") {
            return malformed(format!("unknown verdict {:?}", self.classification.verdict));
        }
        match self.checks.distance_status.as_str() {
            "measured" if self.classification.distance.is_none() => {
                return malformed("distance_status is \"measured\" but no distance given".into());
            }
            "skipped" if self.classification.distance.is_some() => {
                return malformed("distance_status is \"skipped\" but a distance is given".into());
            }
            "measured" | "skipped" => {}
            other => return malformed(format!("unknown distance_status {other:?}")),
        }
        let check_indices = |indices: &[usize], what: &str| {
            if indices.windows(2).any(|p| p[0] >= p[1]) || indices.iter().any(|&i| i >= n) {
                return malformed(format!(
                    "{what} evidence indices must be sorted, distinct and below n"
                ));
            }
            Ok(())
        };
        match &self.classification.evidence {
            EvidenceDoc::AllKSubsetsFullRank { .. } => {}
            EvidenceDoc::DependentKSubset { indices, .. } => check_indices(indices, "k-subset")?,
            EvidenceDoc::DependentSmallSubset { indices, .. } => {
                check_indices(indices, "small-subset")?
            }
            EvidenceDoc::DeficientLargeSubset { indices, .. } => {
                check_indices(indices, "large-subset")?
            }
        }
        if let Some(r) = &self.recipe {
            if Family::parse(&r.family).is_none() {
                return malformed(format!("unknown construction family {:?}", r.family));
            }
        }
        Ok(())
    }

    fn provenance(&self) -> Provenance {
        match &self.recipe {
            Some(r) => Provenance::Construction {
                family: Family::parse(&r.family).expect("validated"),
                params: r.params.clone(),
            },
            None => Provenance::Adhoc,
        }
    }
}

fn claim(msg: String) -> Error {
    Error::VerificationFailed(msg)
}

/// Re-verifies every claim in a document against exact recomputation: the
/// witness, the generator (both its own rank/self-duality and its agreement
/// with the evaluation set and multipliers), the rank classification with
/// its evidence, the zero-sum cross-check, and the distance.  A distance
/// claim that no longer fits in the budget is skipped, not failed; every
/// other mismatch is an error.
pub fn reverify(doc: &CodeDocument, budgets: &Budgets) -> Result<VerifyReport> {
    doc.validate_structure()?;
    let ctx = doc.context()?;
    let mut lines = Vec::new();
    lines.push(format!(
        "field: F_{} (p = {}, m = {})",
        ctx.q(),
        ctx.p(),
        ctx.m()
    ));
    lines.push(format!("code: [{}, {}]", doc.n, doc.k));

    let elements: Vec<Fe> = doc
        .eval_set
        .iter()
        .map(|&v| ctx.element(v))
        .collect::<Result<_>>()
        .map_err(|e| claim(format!("evaluation set rejected: {e}")))?;
    let points = EvalSet::new(&ctx, elements, doc.witness.clone(), doc.provenance())
        .map_err(|e| claim(format!("evaluation set rejected: {e}")))?;
    match points.witness() {
        Some(w) => lines.push(format!("witness: ok, indices {w:?} sum to zero")),
        None => lines.push("witness: none declared".into()),
    }

    let lambda = MultiplierVector::new(
        doc.lambda
            .iter()
            .map(|&v| ctx.element(v))
            .collect::<Result<_>>()
            .map_err(|e| claim(format!("multipliers rejected: {e}")))?,
    )
    .map_err(|e| claim(format!("multipliers rejected: {e}")))?;

    let entries: Vec<Fe> = doc
        .generator
        .iter()
        .flatten()
        .map(|&v| ctx.element(v))
        .collect::<Result<_>>()
        .map_err(|e| claim(format!("generator entries rejected: {e}")))?;
    let doc_matrix = MatrixFq::new(doc.k, doc.n, entries)
        .map_err(|e| claim(format!("generator shape rejected: {e}")))?;
    let doc_code = LinearCode::from_generator(&ctx, doc_matrix.clone(), doc.provenance())
        .map_err(|e| claim(format!("generator rank check failed: {e}")))?;
    if doc.checks.generator_rank != doc.k {
        return Err(claim(format!(
            "document claims generator rank {}, expected k = {}",
            doc.checks.generator_rank, doc.k
        )));
    }

    let sd = is_self_dual(&ctx, &doc_code);
    if !sd.holds {
        return Err(claim(if sd.length_is_twice_dimension {
            "self-duality failed: G * G^T is not zero".into()
        } else {
            format!("self-duality failed: n = {} is not 2k = {}", doc.n, 2 * doc.k)
        }));
    }
    if !doc.checks.self_dual {
        return Err(claim("document does not claim self-duality".into()));
    }
    lines.push(format!("self-dual: ok (rank {}, G * G^T = 0)", doc.k));

    let rebuilt = build_code(&ctx, &points, doc.k, &lambda)
        .map_err(|e| claim(format!("could not rebuild the generator: {e}")))?;
    if rebuilt.generator().entries() != doc_matrix.entries() {
        return Err(claim(
            "generator does not match the evaluation set and multipliers".into(),
        ));
    }
    lines.push("generator: matches the evaluation set and multipliers".into());

    let fresh = classify_by_ranks(&ctx, &doc_code, budgets.rank_scan)?;
    if fresh.verdict.label() != doc.classification.verdict {
        return Err(claim(format!(
            "rank classification gives {}, document claims {}",
            fresh.verdict.label(),
            doc.classification.verdict
        )));
    }
    let fresh_evidence = EvidenceDoc::from(&fresh.evidence);
    if fresh_evidence != doc.classification.evidence {
        return Err(claim(format!(
            "classification evidence mismatch: recomputed {fresh_evidence:?}, document has {:?}",
            doc.classification.evidence
        )));
    }
    lines.push(format!(
        "classification: {} re-established with matching evidence",
        fresh.verdict.label()
    ));

    let zero_sum = has_zero_sum_k_subset(&ctx, &points, doc.k, budgets.subset_search)?;
    let coherent = match fresh.verdict {
        Verdict::Mds => zero_sum.is_none(),
        Verdict::Nmds => zero_sum.is_some(),
        Verdict::Other => false,
    };
    if !coherent {
        return Err(claim(format!(
            "zero-sum cross-check disagrees with verdict {}",
            fresh.verdict.label()
        )));
    }
    if zero_sum != doc.checks.zero_sum_witness {
        return Err(claim(format!(
            "zero-sum witness mismatch: recomputed {zero_sum:?}, document has {:?}",
            doc.checks.zero_sum_witness
        )));
    }
    if doc.witness.is_some() && fresh.verdict != Verdict::Nmds {
        return Err(claim(
            "document declares a dependency witness but is not NMDS".into(),
        ));
    }
    match &zero_sum {
        Some(w) => lines.push(format!("zero-sum cross-check: ok, subset {w:?}")),
        None => lines.push("zero-sum cross-check: ok, no zero-sum k-subset".into()),
    }

    let expected = match fresh.verdict {
        Verdict::Mds => doc.n - doc.k + 1,
        Verdict::Nmds => doc.n - doc.k,
        Verdict::Other => unreachable!("rejected above"),
    } as u64;
    let words = (ctx.q() as u128).checked_pow(doc.k as u32);
    let within = matches!(words, Some(w) if w <= budgets.distance as u128);
    let distance = if within {
        let d = min_distance_bruteforce(&ctx, &doc_code, budgets.distance)?;
        if d != expected {
            return Err(claim(format!(
                "measured distance {d}, but verdict {} requires {expected}",
                fresh.verdict.label()
            )));
        }
        if let Some(claimed) = doc.classification.distance {
            if claimed != d {
                return Err(claim(format!(
                    "document claims distance {claimed}, measured {d}"
                )));
            }
        }
        lines.push(format!("distance: measured {d} (= expected {expected})"));
        DistanceStatus::Measured(d)
    } else {
        lines.push("distance: skipped".into());
        DistanceStatus::Skipped
    };

    Ok(VerifyReport { lines, distance })
}
