//! Sparse matrices over a prime field, stored row-wise.

use std::collections::BTreeMap;

use crate::algebra::field::PrimeField;
use crate::error::{Error, Result};

/// A sparse matrix with rows sorted by column and no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(u32, u64)>>,
}

impl SparseMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i as u32, 1)]).collect();
        SparseMatrix {
            field,
            rows: n,
            cols: n,
            data,
        }
    }

    /// Builds from `(row, col, value)` triples. Values are taken as field elements
    /// and must already be reduced; zeros, duplicates and out-of-range indices are rejected.
    pub fn from_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        if cols > u32::MAX as usize {
            return Err(Error::InvalidMatrix(format!("{cols} columns")));
        }
        let mut data = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            if v >= field.modulus() {
                return Err(Error::FieldMismatch(format!(
                    "entry {v} at ({r},{c}) is not an element of F_{}",
                    field.modulus()
                )));
            }
            if v == 0 {
                return Err(Error::InvalidMatrix(format!("stored zero at ({r},{c})")));
            }
            data[r].push((c as u32, v));
        }
        for (r, row) in data.iter_mut().enumerate() {
            row.sort_unstable_by_key(|e| e.0);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate entry at ({r},{})",
                    w[0].0
                )));
            }
        }
        Ok(SparseMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds from a dense row-major matrix, dropping zeros.
    pub fn from_dense(field: PrimeField, dense: &[Vec<u64>], cols: usize) -> Result<Self> {
        let entries = dense.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(move |(c, &v)| (r, c, v))
        });
        Self::from_triplets(field, dense.len(), cols, entries)
    }

    /// Builds from already-sorted rows; used by the Koszul assembler.
    pub(crate) fn from_sorted_rows(
        field: PrimeField,
        cols: usize,
        data: Vec<Vec<(u32, u64)>>,
    ) -> Self {
        debug_assert!(data.iter().all(|r| r
            .windows(2)
            .all(|w| w[0].0 < w[1].0)
            && r.iter().all(|&(c, v)| (c as usize) < cols && v != 0)));
        SparseMatrix {
            field,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(u32, u64)] {
        &self.data[r]
    }

    pub(crate) fn into_rows(self) -> Vec<Vec<(u32, u64)>> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r]
            .binary_search_by_key(&(c as u32), |e| e.0)
            .map(|i| self.data[r][i].1)
            .unwrap_or(0)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c as usize, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            data[c].push((r as u32, v));
        }
        SparseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("hcat of matrices over different fields".into()));
        }
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hcat {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let off = self.cols as u32;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|&(c, v)| (c + off, v)));
                row
            })
            .collect();
        Ok(SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch("product of matrices over different fields".into()));
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "product {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<u32, u64> = BTreeMap::new();
                for &(k, a) in row {
                    for &(c, b) in &rhs.data[k as usize] {
                        let e = acc.entry(c).or_insert(0);
                        *e = f.add(*e, f.mul(a, b));
                    }
                }
                acc.into_iter().filter(|e| e.1 != 0).collect()
            })
            .collect();
        Ok(SparseMatrix {
            field: f,
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// Applies the matrix to a dense vector.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let f = self.field;
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(0, |s, &(c, v)| f.add(s, f.mul(v, x[c as usize])))
            })
            .collect()
    }

    /// Permutes rows and columns: entry (r, c) moves to (row_perm[r], col_perm[c]).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut data = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            data[row_perm[r]].push((col_perm[c] as u32, v));
        }
        for row in &mut data {
            row.sort_unstable_by_key(|e| e.0);
        }
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn rejects_malformed_input() {
        let f = f7();
        assert!(SparseMatrix::from_triplets(f, 2, 2, [(2, 0, 1)]).is_err());
        assert!(SparseMatrix::from_triplets(f, 2, 2, [(0, 0, 0)]).is_err());
        assert!(SparseMatrix::from_triplets(f, 2, 2, [(0, 0, 1), (0, 0, 2)]).is_err());
        assert!(matches!(
            SparseMatrix::from_triplets(f, 2, 2, [(0, 0, 9)]),
            Err(Error::FieldMismatch(_))
        ));
    }

    #[test]
    fn product_and_transpose() {
        let f = f7();
        let a = SparseMatrix::from_dense(f, &[vec![1, 2], vec![0, 3]], 2).unwrap();
        let b = SparseMatrix::from_dense(f, &[vec![4, 0], vec![5, 6]], 2).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.to_dense(), vec![vec![0, 5], vec![1, 4]]);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![2, 3]]);
        assert!(a.hcat(&SparseMatrix::zero(PrimeField::new(5).unwrap(), 2, 1)).is_err());
    }
}
