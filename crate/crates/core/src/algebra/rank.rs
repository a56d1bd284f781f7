//! Rank of sparse matrices over prime fields.
//!
//! Elimination runs in two phases. The sparse phase picks pivots greedily in
//! Markowitz fashion (a shortest remaining row, and within it the column with
//! the fewest entries) and eliminates right-looking on sorted sparse rows.
//! Once the active submatrix becomes denser than a threshold, the remainder is
//! copied into a dense array and finished by ordinary Gaussian elimination,
//! whose row updates are spread over threads when the `parallel` feature is on.

use crate::algebra::field::PrimeField;
use crate::algebra::sparse::SparseMatrix;
use crate::par;

/// Tuning knobs for [`rank_and_kernel_with`].
#[derive(Clone, Copy, Debug)]
pub struct RankOptions {
    /// Active-submatrix density above which elimination switches to dense.
    pub dense_threshold: f64,
    /// Use the thread pool for dense row updates (ignored without the `parallel` feature).
    pub parallel: bool,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            dense_threshold: 0.2,
            parallel: true,
        }
    }
}

impl RankOptions {
    pub fn sequential() -> Self {
        RankOptions {
            parallel: false,
            ..Self::default()
        }
    }
}

/// `(rank, cols - rank)` of `m`. The kernel itself is never built.
pub fn rank_and_kernel(m: &SparseMatrix) -> (usize, usize) {
    rank_and_kernel_with(m, &RankOptions::default())
}

pub fn rank_and_kernel_with(m: &SparseMatrix, opts: &RankOptions) -> (usize, usize) {
    let rank = rank_with(m, opts);
    (rank, m.cols() - rank)
}

pub fn rank(m: &SparseMatrix) -> usize {
    rank_with(m, &RankOptions::default())
}

pub fn rank_with(m: &SparseMatrix, opts: &RankOptions) -> usize {
    if m.rows() == 0 || m.cols() == 0 || m.nnz() == 0 {
        return 0;
    }
    let f = m.field();
    let rows: Vec<Vec<(u32, u64)>> = m.clone().into_rows();
    let mut elim = SparseEliminator::new(f, rows, m.cols());
    let sparse_rank = elim.run(opts.dense_threshold);
    let (dense, ncols) = elim.into_dense();
    sparse_rank + dense_rank(f, dense, ncols, opts.parallel)
}

struct SparseEliminator {
    field: PrimeField,
    rows: Vec<Vec<(u32, u64)>>,
    active: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_done: Vec<bool>,
    active_rows: usize,
    active_cols: usize,
    active_nnz: usize,
}

impl SparseEliminator {
    fn new(field: PrimeField, rows: Vec<Vec<(u32, u64)>>, cols: usize) -> Self {
        let mut col_rows = vec![Vec::new(); cols];
        let mut active = vec![false; rows.len()];
        let mut active_rows = 0;
        let mut active_nnz = 0;
        for (r, row) in rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            active[r] = true;
            active_rows += 1;
            active_nnz += row.len();
            for &(c, _) in row {
                col_rows[c as usize].push(r as u32);
            }
        }
        let active_cols = col_rows.iter().filter(|l| !l.is_empty()).count();
        SparseEliminator {
            field,
            rows,
            active,
            col_rows,
            col_done: vec![false; cols],
            active_rows,
            active_cols,
            active_nnz,
        }
    }

    fn density(&self) -> f64 {
        if self.active_rows == 0 || self.active_cols == 0 {
            return 0.0;
        }
        self.active_nnz as f64 / (self.active_rows as f64 * self.active_cols as f64)
    }

    /// Eliminates sparse pivots until done or too dense; returns pivots found.
    fn run(&mut self, threshold: f64) -> usize {
        let mut rank = 0;
        loop {
            if self.active_rows == 0 || self.density() > threshold {
                return rank;
            }
            // shortest active row
            let mut best: Option<(usize, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !self.active[r] {
                    continue;
                }
                if row.is_empty() {
                    continue;
                }
                if best.map_or(true, |(_, len)| row.len() < len) {
                    best = Some((r, row.len()));
                    if row.len() == 1 {
                        break;
                    }
                }
            }
            let Some((pr, _)) = best else {
                return rank;
            };
            let (pc, pv) = *self.rows[pr]
                .iter()
                .min_by_key(|&&(c, _)| (self.col_rows[c as usize].len(), c))
                .expect("nonempty row");
            let pivot_row = std::mem::take(&mut self.rows[pr]);
            self.deactivate(pr, pivot_row.len());
            let inv = self.field.inv(pv).expect("nonzero pivot");
            let others = std::mem::take(&mut self.col_rows[pc as usize]);
            for &r2 in &others {
                let r2 = r2 as usize;
                if !self.active[r2] {
                    continue;
                }
                let Ok(pos) = self.rows[r2].binary_search_by_key(&pc, |e| e.0) else {
                    continue;
                };
                let factor = self.field.mul(self.rows[r2][pos].1, inv);
                let row = std::mem::take(&mut self.rows[r2]);
                let old_len = row.len();
                let merged = self.axpy(&row, &pivot_row, factor, r2);
                self.active_nnz = self.active_nnz + merged.len() - old_len;
                self.rows[r2] = merged;
                if self.rows[r2].is_empty() {
                    self.deactivate(r2, 0);
                }
            }
            self.col_done[pc as usize] = true;
            self.active_cols = self.active_cols.saturating_sub(1);
            rank += 1;
        }
    }

    fn deactivate(&mut self, r: usize, len: usize) {
        self.active[r] = false;
        self.active_rows -= 1;
        self.active_nnz -= len;
    }

    /// `row - factor * pivot`, registering fill-in in the column lists.
    fn axpy(&mut self, row: &[(u32, u64)], pivot: &[(u32, u64)], factor: u64, r: usize) -> Vec<(u32, u64)> {
        let f = self.field;
        let fs = f.shoup(factor);
        let mut out = Vec::with_capacity(row.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot.len() {
            let ci = row.get(i).map_or(u32::MAX, |e| e.0);
            let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
            if ci < cj {
                out.push(row[i]);
                i += 1;
            } else if cj < ci {
                let v = f.neg(f.mul_shoup(pivot[j].1, factor, fs));
                if v != 0 {
                    out.push((cj, v));
                    self.col_rows[cj as usize].push(r as u32);
                }
                j += 1;
            } else {
                let v = f.sub(row[i].1, f.mul_shoup(pivot[j].1, factor, fs));
                if v != 0 {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn into_dense(self) -> (Vec<Vec<u64>>, usize) {
        let mut map = vec![u32::MAX; self.col_done.len()];
        let mut ncols = 0u32;
        for (r, row) in self.rows.iter().enumerate() {
            if !self.active[r] {
                continue;
            }
            for &(c, _) in row {
                if map[c as usize] == u32::MAX {
                    map[c as usize] = ncols;
                    ncols += 1;
                }
            }
        }
        let dense = self
            .rows
            .iter()
            .enumerate()
            .filter(|(r, row)| self.active[*r] && !row.is_empty())
            .map(|(_, row)| {
                let mut d = vec![0u64; ncols as usize];
                for &(c, v) in row {
                    d[map[c as usize] as usize] = v;
                }
                d
            })
            .collect();
        (dense, ncols as usize)
    }
}

/// Rank of a dense row-major matrix by Gaussian elimination.
pub fn dense_rank(f: PrimeField, mut rows: Vec<Vec<u64>>, ncols: usize, parallel: bool) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        let inv = f.inv(pivot[col]).expect("nonzero pivot");
        par::for_each_mut(tail, parallel, |row| {
            let a = row[col];
            if a == 0 {
                return;
            }
            let w = f.mul(a, inv);
            let ws = f.shoup(w);
            row[col] = 0;
            for j in col + 1..ncols {
                let pj = pivot[j];
                if pj != 0 {
                    row[j] = f.sub(row[j], f.mul_shoup(pj, w, ws));
                }
            }
        });
        rank += 1;
    }
    rank
}

/// Basis of the right kernel `{x : M x = 0}`, computed densely. Only for callers
/// that actually need kernel vectors; rank queries never go through here.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<u64>> {
    dense_kernel(m.field(), m.to_dense(), m.cols())
}

/// Kernel basis of a dense matrix given by its rows, one vector per free column.
pub fn dense_kernel(f: PrimeField, mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][col]).unwrap();
        for v in rows[rank].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let w = row[col];
            for j in col..ncols {
                row[j] = f.sub(row[j], f.mul(w, pivot[j]));
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u64; ncols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[r][free]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_oracle(f: PrimeField, m: &SparseMatrix) -> usize {
        dense_rank(f, m.to_dense(), m.cols(), false)
    }

    #[test]
    fn trivial_cases() {
        let f = PrimeField::new(1_000_003).unwrap();
        assert_eq!(rank_and_kernel(&SparseMatrix::zero(f, 5, 7)), (0, 7));
        assert_eq!(rank_and_kernel(&SparseMatrix::identity(f, 6)), (6, 0));
    }

    #[test]
    fn rank_two_over_f7() {
        let f = PrimeField::new(7).unwrap();
        let m = SparseMatrix::from_dense(f, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 5]], 3)
            .unwrap();
        assert_eq!(rank_and_kernel(&m), (2, 1));
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        assert!(m.apply(&ker[0]).iter().all(|&v| v == 0));
    }

    fn random_matrix(
        p: u64,
    ) -> impl Strategy<Value = (usize, usize, Vec<(usize, usize, u64)>)> {
        (1usize..14, 1usize..14).prop_flat_map(move |(r, c)| {
            let entries = proptest::collection::vec((0..r, 0..c, 1..p), 0..(r * c));
            (Just(r), Just(c), entries)
        })
    }

    fn build(p: u64, r: usize, c: usize, e: Vec<(usize, usize, u64)>) -> SparseMatrix {
        let f = PrimeField::new(p).unwrap();
        let mut seen = std::collections::HashSet::new();
        let e: Vec<_> = e.into_iter().filter(|t| seen.insert((t.0, t.1))).collect();
        SparseMatrix::from_triplets(f, r, c, e).unwrap()
    }

    proptest! {
        #[test]
        fn sparse_matches_dense((r, c, e) in random_matrix(5)) {
            let m = build(5, r, c, e);
            let f = m.field();
            let expected = dense_oracle(f, &m);
            for threshold in [0.0, 0.2, 2.0] {
                let opts = RankOptions { dense_threshold: threshold, parallel: false };
                prop_assert_eq!(rank_with(&m, &opts), expected);
            }
            prop_assert_eq!(kernel_basis(&m).len(), c - expected);
        }

        #[test]
        fn transpose_and_permutation_invariance((r, c, e) in random_matrix(7), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let m = build(7, r, c, e);
            let base = rank_and_kernel(&m);
            prop_assert_eq!(rank(&m.transpose()), base.0);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..r).collect();
            let mut cp: Vec<usize> = (0..c).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            prop_assert_eq!(rank_and_kernel(&m.permuted(&rp, &cp)), base);
        }

        #[test]
        fn subadditive_under_hcat((r, c, e) in random_matrix(3), (c2, e2) in (1usize..10, proptest::collection::vec((0usize..64, 0usize..64, 1u64..3), 0..40))) {
            let a = build(3, r, c, e);
            let e2: Vec<_> = e2.into_iter().map(|(i, j, v)| (i % r, j % c2, v)).collect();
            let b = build(3, r, c2, e2);
            prop_assert!(rank(&a.hcat(&b).unwrap()) <= rank(&a) + rank(&b));
        }
    }
}
