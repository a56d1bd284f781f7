//! Expressing vectors in a fixed basis.

use crate::algebra::field::PrimeField;
use crate::error::{Error, Result};

/// A basis reduced once to echelon form, so that many targets can be
/// expressed in it cheaply.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    field: PrimeField,
    len: usize,
    size: usize,
    /// Echelon rows; `rows[k]` has a leading 1 at `pivots[k]`.
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    /// `rows[k] = Σ_j combos[k][j] * basis[j]`.
    combos: Vec<Vec<u64>>,
}

impl SpanSolver {
    pub fn new(field: PrimeField, basis: &[Vec<u64>], len: usize) -> Result<Self> {
        let size = basis.len();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(size);
        let mut pivots: Vec<usize> = Vec::with_capacity(size);
        let mut combos: Vec<Vec<u64>> = Vec::with_capacity(size);
        for (j, v) in basis.iter().enumerate() {
            if v.len() != len {
                return Err(Error::DimensionMismatch(format!(
                    "basis vector of length {} (expected {len})",
                    v.len()
                )));
            }
            let mut row = v.clone();
            let mut combo = vec![0u64; size];
            combo[j] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                let a = row[pc];
                if a != 0 {
                    sub_scaled(field, &mut row, &rows[k], a);
                    sub_scaled(field, &mut combo, &combos[k], a);
                }
            }
            let Some(pc) = row.iter().position(|&x| x != 0) else {
                return Err(Error::DependentBasis);
            };
            let inv = field.inv(row[pc]).unwrap();
            scale(field, &mut row, inv);
            scale(field, &mut combo, inv);
            // keep earlier rows reduced at the new pivot
            for k in 0..rows.len() {
                let a = rows[k][pc];
                if a != 0 {
                    let (r, c) = (row.clone(), combo.clone());
                    sub_scaled(field, &mut rows[k], &r, a);
                    sub_scaled(field, &mut combos[k], &c, a);
                }
            }
            rows.push(row);
            pivots.push(pc);
            combos.push(combo);
        }
        Ok(SpanSolver {
            field,
            len,
            size,
            rows,
            pivots,
            combos,
        })
    }

    pub fn dim(&self) -> usize {
        self.size
    }

    /// Coordinates of `target` in the basis, or `None` if it is outside the span.
    pub fn coordinates(&self, target: &[u64]) -> Result<Option<Vec<u64>>> {
        if target.len() != self.len {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} (expected {})",
                target.len(),
                self.len
            )));
        }
        let f = self.field;
        let mut residual = target.to_vec();
        let mut coords = vec![0u64; self.size];
        for (k, &pc) in self.pivots.iter().enumerate() {
            let a = residual[pc];
            if a != 0 {
                sub_scaled(f, &mut residual, &self.rows[k], a);
                for (c, &b) in coords.iter_mut().zip(&self.combos[k]) {
                    *c = f.add(*c, f.mul(a, b));
                }
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        Ok(Some(coords))
    }
}

/// Coordinates of `target` as a combination of `basis`, or `None` if not in the span.
/// A dependent basis is an error.
pub fn coordinates_in_span(
    field: PrimeField,
    basis: &[Vec<u64>],
    target: &[u64],
) -> Result<Option<Vec<u64>>> {
    SpanSolver::new(field, basis, target.len())?.coordinates(target)
}

fn sub_scaled(f: PrimeField, row: &mut [u64], other: &[u64], a: u64) {
    let s = f.shoup(a);
    for (x, &y) in row.iter_mut().zip(other) {
        if y != 0 {
            *x = f.sub(*x, f.mul_shoup(y, a, s));
        }
    }
}

fn scale(f: PrimeField, row: &mut [u64], a: u64) {
    for x in row.iter_mut() {
        *x = f.mul(*x, a);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_vectors() {
        let f = PrimeField::new(1_000_003).unwrap();
        let e1 = vec![1, 0];
        let e2 = vec![0, 1];
        assert_eq!(
            coordinates_in_span(f, &[e1.clone(), e2.clone()], &[1, 1]).unwrap(),
            Some(vec![1, 1])
        );
        assert_eq!(coordinates_in_span(f, &[e1], &e2).unwrap(), None);
    }

    #[test]
    fn example_over_f5() {
        let f = PrimeField::new(5).unwrap();
        let c = coordinates_in_span(f, &[vec![1, 2], vec![0, 1]], &[2, 0]).unwrap();
        assert_eq!(c, Some(vec![2, 1]));
    }

    #[test]
    fn dependent_basis_is_an_error() {
        let f = PrimeField::new(5).unwrap();
        let r = coordinates_in_span(f, &[vec![1, 2], vec![2, 4]], &[1, 2]);
        assert!(matches!(r, Err(Error::DependentBasis)));
    }

    proptest! {
        #[test]
        fn reproduces_target(coeffs in proptest::collection::vec(0u64..11, 3), seed in 0u64..1000) {
            let f = PrimeField::new(11).unwrap();
            // triangular basis is independent
            let basis: Vec<Vec<u64>> = (0..3)
                .map(|i| (0..5).map(|j| if j == i { 1 } else if j > i { (seed + i as u64 * 7 + j as u64) % 11 } else { 0 }).collect())
                .collect();
            let target: Vec<u64> = (0..5)
                .map(|j| (0..3).fold(0, |s, i| f.add(s, f.mul(coeffs[i], basis[i][j]))))
                .collect();
            let c = coordinates_in_span(f, &basis, &target).unwrap().unwrap();
            prop_assert_eq!(c, coeffs);
        }
    }
}
