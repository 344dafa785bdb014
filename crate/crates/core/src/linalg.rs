//! Dense exact linear algebra over F_q: reduced row echelon form, rank,
//! determinant, nullspace.  Everything is plain Gaussian elimination with
//! first-nonzero pivoting, so results are deterministic.

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};

/// Row-major matrix over the field of some [`FieldCtx`]; operations take the
/// context explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    entries: Vec<Fe>,
}

impl MatrixFq {
    pub fn new(rows: usize, cols: usize, entries: Vec<Fe>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(MatrixFq { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixFq {
            rows,
            cols,
            entries: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == Fe::ZERO)
    }

    pub fn transpose(&self) -> MatrixFq {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// New matrix made of the given columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> MatrixFq {
        let mut out = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn mat_mul(&self, ctx: &FieldCtx, other: &MatrixFq) -> Result<MatrixFq> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self.get(r, i);
                if a == Fe::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, ctx.add(cur, ctx.mul(a, other.get(i, c))));
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and the pivot column list.  Pivots are chosen
    /// as the first nonzero entry in each column, making the result the
    /// unique RREF.
    pub fn rref(&self, ctx: &FieldCtx) -> (MatrixFq, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(sel) = (pr..m.rows).find(|&r| m.get(r, pc) != Fe::ZERO) else {
                continue;
            };
            m.swap_rows(pr, sel);
            let inv = ctx.inv(m.get(pr, pc)).expect("pivot is nonzero");
            for c in pc..m.cols {
                m.set(pr, c, ctx.mul(inv, m.get(pr, c)));
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let factor = m.get(r, pc);
                if factor == Fe::ZERO {
                    continue;
                }
                for c in pc..m.cols {
                    let v = ctx.sub(m.get(r, c), ctx.mul(factor, m.get(pr, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let mut scratch = self.entries.clone();
        rank_in_place(ctx, &mut scratch, self.rows, self.cols)
    }

    /// Rank of the submatrix formed by the listed columns, reusing a caller
    /// scratch buffer; this is the hot path of the classification scans.
    pub fn rank_of_columns(&self, ctx: &FieldCtx, idx: &[usize], scratch: &mut Vec<Fe>) -> usize {
        let cols = idx.len();
        scratch.clear();
        scratch.reserve(self.rows * cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for &c in idx {
                scratch.push(row[c]);
            }
        }
        rank_in_place(ctx, scratch, self.rows, cols)
    }

    /// Determinant by elimination with row-swap sign tracking.
    pub fn det(&self, ctx: &FieldCtx) -> Result<Fe> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut m = self.entries.clone();
        let mut negate = false;
        let mut det = Fe::ONE;
        for col in 0..n {
            let Some(sel) = (col..n).find(|&r| m[r * n + col] != Fe::ZERO) else {
                return Ok(Fe::ZERO);
            };
            if sel != col {
                for c in 0..n {
                    m.swap(col * n + c, sel * n + c);
                }
                negate = !negate;
            }
            let pivot = m[col * n + col];
            det = ctx.mul(det, pivot);
            let inv = ctx.inv(pivot).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = ctx.mul(m[r * n + col], inv);
                if factor == Fe::ZERO {
                    continue;
                }
                for c in col..n {
                    m[r * n + c] = ctx.sub(m[r * n + c], ctx.mul(factor, m[col * n + c]));
                }
            }
        }
        Ok(if negate { ctx.neg(det) } else { det })
    }

    /// Basis of the right nullspace { v : M v = 0 }, one vector per free
    /// column of the RREF.
    pub fn nullspace_basis(&self, ctx: &FieldCtx) -> Vec<Vec<Fe>> {
        let (r, pivots) = self.rref(ctx);
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            pivot_of_col[pc] = Some(i);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for MatrixFq {
    type Output = Fe;
    fn index(&self, (r, c): (usize, usize)) -> &Fe {
        &self.entries[r * self.cols + c]
    }
}

/// Forward elimination on a row-major buffer; returns the rank.
fn rank_in_place(ctx: &FieldCtx, m: &mut [Fe], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(sel) = (rank..rows).find(|&r| m[r * cols + col] != Fe::ZERO) else {
            continue;
        };
        if sel != rank {
            for c in col..cols {
                m.swap(rank * cols + c, sel * cols + c);
            }
        }
        let inv = ctx.inv(m[rank * cols + col]).expect("pivot is nonzero");
        for r in rank + 1..rows {
            let lead = m[r * cols + col];
            if lead == Fe::ZERO {
                continue;
            }
            let factor = ctx.mul(lead, inv);
            m[r * cols + col] = Fe::ZERO;
            for c in col + 1..cols {
                m[r * cols + c] = ctx.sub(m[r * cols + c], ctx.mul(factor, m[rank * cols + c]));
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn f13() -> FieldCtx {
        FieldCtx::new(FieldSpec::find(13, 1).unwrap()).unwrap()
    }

    fn f5() -> FieldCtx {
        FieldCtx::new(FieldSpec::find(5, 1).unwrap()).unwrap()
    }

    fn mat(ctx: &FieldCtx, rows: usize, cols: usize, vals: &[u64]) -> MatrixFq {
        let entries = vals.iter().map(|&v| ctx.element(v).unwrap()).collect();
        MatrixFq::new(rows, cols, entries).unwrap()
    }

    /// Tiny deterministic generator so the cross-checks need no external rng.
    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self, bound: u64) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 33) % bound
        }
    }

    #[test]
    fn identity_has_full_rank() {
        let ctx = f13();
        let id = MatrixFq::identity(4);
        assert_eq!(id.rank(&ctx), 4);
        assert_eq!(id.det(&ctx).unwrap(), Fe::ONE);
        assert!(id.nullspace_basis(&ctx).is_empty());
    }

    #[test]
    fn det_matches_cofactor_expansion_on_2x2() {
        let ctx = f13();
        let mut rng = Lcg(7);
        for _ in 0..200 {
            let v: Vec<u64> = (0..4).map(|_| rng.next(13)).collect();
            let m = mat(&ctx, 2, 2, &v);
            let ad = ctx.mul(m.get(0, 0), m.get(1, 1));
            let bc = ctx.mul(m.get(0, 1), m.get(1, 0));
            assert_eq!(m.det(&ctx).unwrap(), ctx.sub(ad, bc));
        }
    }

    #[test]
    fn det_matches_cofactor_expansion_on_3x3() {
        let ctx = f13();
        let mut rng = Lcg(99);
        for _ in 0..200 {
            let v: Vec<u64> = (0..9).map(|_| rng.next(13)).collect();
            let m = mat(&ctx, 3, 3, &v);
            // cofactor expansion along the first row
            let minor = |r0: usize, c0: usize| {
                let mut vals = Vec::new();
                for r in 0..3 {
                    for c in 0..3 {
                        if r != r0 && c != c0 {
                            vals.push(m.get(r, c));
                        }
                    }
                }
                let sub = MatrixFq::new(2, 2, vals).unwrap();
                let ad = ctx.mul(sub.get(0, 0), sub.get(1, 1));
                let bc = ctx.mul(sub.get(0, 1), sub.get(1, 0));
                ctx.sub(ad, bc)
            };
            let mut acc = ctx.mul(m.get(0, 0), minor(0, 0));
            acc = ctx.sub(acc, ctx.mul(m.get(0, 1), minor(0, 1)));
            acc = ctx.add(acc, ctx.mul(m.get(0, 2), minor(0, 2)));
            assert_eq!(m.det(&ctx).unwrap(), acc);
        }
    }

    #[test]
    fn singularity_det_and_rank_agree() {
        let ctx = f13();
        let mut rng = Lcg(1234);
        for _ in 0..300 {
            let n = 2 + (rng.next(3) as usize);
            let v: Vec<u64> = (0..n * n).map(|_| rng.next(13)).collect();
            let m = mat(&ctx, n, n, &v);
            let full = m.rank(&ctx) == n;
            assert_eq!(m.det(&ctx).unwrap() != Fe::ZERO, full);
            assert_eq!(m.rank(&ctx), m.transpose().rank(&ctx));
        }
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let ctx = f5();
        // spec example: nullspace of [1 1] over F_5 is the span of (1, 4)
        let m = mat(&ctx, 1, 2, &[1, 1]);
        let basis = m.nullspace_basis(&ctx);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // proportional to (1, 4): v = c * (1, 4)
        let c = v[0];
        assert_eq!(v[1], ctx.mul(c, ctx.element(4).unwrap()));

        let ctx = f13();
        let mut rng = Lcg(5);
        for _ in 0..100 {
            let rows = 1 + rng.next(3) as usize;
            let cols = rows + 1 + rng.next(3) as usize;
            let vals: Vec<u64> = (0..rows * cols).map(|_| rng.next(13)).collect();
            let m = mat(&ctx, rows, cols, &vals);
            let basis = m.nullspace_basis(&ctx);
            assert_eq!(basis.len(), cols - m.rank(&ctx));
            for v in basis {
                for r in 0..rows {
                    let mut acc = Fe::ZERO;
                    for (c, &vc) in v.iter().enumerate() {
                        acc = ctx.add(acc, ctx.mul(m.get(r, c), vc));
                    }
                    assert_eq!(acc, Fe::ZERO);
                }
            }
        }
    }

    #[test]
    fn rref_is_idempotent() {
        let ctx = f13();
        let mut rng = Lcg(31);
        for _ in 0..100 {
            let vals: Vec<u64> = (0..12).map(|_| rng.next(13)).collect();
            let m = mat(&ctx, 3, 4, &vals);
            let (r1, p1) = m.rref(&ctx);
            let (r2, p2) = r1.rref(&ctx);
            assert_eq!(r1, r2);
            assert_eq!(p1, p2);
            assert_eq!(p1.len(), m.rank(&ctx));
        }
    }

    #[test]
    fn select_columns_and_scratch_rank_agree() {
        let ctx = f13();
        let mut rng = Lcg(8);
        let vals: Vec<u64> = (0..30).map(|_| rng.next(13)).collect();
        let m = mat(&ctx, 3, 10, &vals);
        let mut scratch = Vec::new();
        for idx in [&[0usize, 1, 2][..], &[4, 7], &[9, 0, 3, 5]] {
            let sub = m.select_columns(idx);
            assert_eq!(
                sub.rank(&ctx),
                m.rank_of_columns(&ctx, idx, &mut scratch)
            );
        }
    }

    #[test]
    fn mat_mul_checks_dimensions() {
        let ctx = f13();
        let a = MatrixFq::zeros(2, 3);
        let b = MatrixFq::zeros(2, 3);
        assert!(matches!(
            a.mat_mul(&ctx, &b),
            Err(Error::DimensionMismatch(_))
        ));
        let id = MatrixFq::identity(3);
        let c = mat(&ctx, 2, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(c.mat_mul(&ctx, &id).unwrap(), c);
    }
}
