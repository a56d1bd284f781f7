//! Finitely supported graded S(V)-modules given by their multiplication maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{PrimeField, SparseMatrix};
use crate::error::{Error, Result};

/// A graded module `B = ⊕ B_q` over `S(V)`, `dim V = n`, known in degrees
/// `q_min..=q_max`. `mult[q - q_min][i]` is the action `B_q -> B_{q+1}` of the
/// i-th basis vector of V, as a `dim B_{q+1} x dim B_q` matrix.
#[derive(Clone, Debug)]
pub struct GradedModule {
    field: PrimeField,
    n: usize,
    q_min: i64,
    dims: Vec<usize>,
    mult: Vec<Vec<SparseMatrix>>,
    /// Columns of each multiplication matrix, for building differentials.
    columns: Vec<Vec<Vec<Vec<(u32, u64)>>>>,
    zero_below: bool,
    zero_above: bool,
}

impl GradedModule {
    /// `dims[k]` is `dim B_{q_min + k}`; `mult[k]` holds the n maps out of that degree.
    /// `zero_below` records that `B_q = 0` for every `q < q_min`.
    pub fn new(
        field: PrimeField,
        n: usize,
        q_min: i64,
        dims: Vec<usize>,
        mult: Vec<Vec<SparseMatrix>>,
        zero_below: bool,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("module with no degrees".into()));
        }
        if mult.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} multiplication levels, got {}",
                dims.len(),
                dims.len() - 1,
                mult.len()
            )));
        }
        for (k, level) in mult.iter().enumerate() {
            if level.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "degree {} has {} multiplication maps (n = {n})",
                    q_min + k as i64,
                    level.len()
                )));
            }
            for m in level {
                if m.field() != field {
                    return Err(Error::FieldMismatch("multiplication map over another field".into()));
                }
                if m.rows() != dims[k + 1] || m.cols() != dims[k] {
                    return Err(Error::DimensionMismatch(format!(
                        "map out of degree {} is {}x{}, expected {}x{}",
                        q_min + k as i64,
                        m.rows(),
                        m.cols(),
                        dims[k + 1],
                        dims[k]
                    )));
                }
            }
        }
        let columns = mult
            .iter()
            .map(|level| level.iter().map(|m| m.transpose().into_rows()).collect())
            .collect();
        Ok(GradedModule {
            field,
            n,
            q_min,
            dims,
            mult,
            columns,
            zero_below,
            zero_above: false,
        })
    }

    /// Records that `B_q = 0` for every `q > q_max`.
    pub fn with_zero_above(mut self) -> Self {
        self.zero_above = true;
        self
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `dim V`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q_min(&self) -> i64 {
        self.q_min
    }

    pub fn q_max(&self) -> i64 {
        self.q_min + self.dims.len() as i64 - 1
    }

    pub fn zero_below(&self) -> bool {
        self.zero_below
    }

    /// `dim B_q`, when known.
    pub fn dim(&self, q: i64) -> Result<usize> {
        if q < self.q_min {
            return if self.zero_below {
                Ok(0)
            } else {
                Err(Error::MissingDegree(q))
            };
        }
        match self.dims.get((q - self.q_min) as usize) {
            Some(&d) => Ok(d),
            None if self.zero_above => Ok(0),
            None => Err(Error::MissingDegree(q)),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The action of the i-th basis vector of V on `B_q`.
    pub fn mult(&self, q: i64, i: usize) -> Result<&SparseMatrix> {
        self.level(q)?
            .get(i)
            .ok_or_else(|| Error::OutOfRange(format!("basis index {i} with n = {}", self.n)))
    }

    fn level(&self, q: i64) -> Result<&Vec<SparseMatrix>> {
        if q < self.q_min || q >= self.q_max() {
            return Err(Error::MissingDegree(q + 1));
        }
        Ok(&self.mult[(q - self.q_min) as usize])
    }

    /// Column `b` of the action of `v_i` on `B_q`.
    pub(crate) fn image(&self, q: i64, i: usize, b: usize) -> &[(u32, u64)] {
        &self.columns[(q - self.q_min) as usize][i][b]
    }

    /// Relabels the basis of V: the new i-th vector is the old `perm[i]`-th.
    pub fn permute_v(&self, perm: &[usize]) -> Result<Self> {
        let mult = self
            .mult
            .iter()
            .map(|level| perm.iter().map(|&i| level[i].clone()).collect())
            .collect();
        let mut out =
            Self::new(self.field, self.n, self.q_min, self.dims.clone(), mult, self.zero_below)?;
        out.zero_above = self.zero_above;
        Ok(out)
    }

    /// Checks the module law `μ_{q+1,i} μ_{q,j} = μ_{q+1,j} μ_{q,i}`.
    pub fn verify(&self) -> Result<()> {
        for k in 0..self.mult.len().saturating_sub(1) {
            let q = self.q_min + k as i64;
            let (lo, hi) = (&self.mult[k], &self.mult[k + 1]);
            for i in 0..self.n {
                for j in i + 1..self.n {
                    let a = hi[i].mul(&lo[j])?;
                    let b = hi[j].mul(&lo[i])?;
                    if a != b {
                        return Err(Error::NotAModule { q, i, j });
                    }
                }
            }
        }
        Ok(())
    }

    /// `B_0` = field, all other `B_q = 0`.
    pub fn trivial(field: PrimeField, n: usize) -> Self {
        Self::new(field, n, 0, vec![1], Vec::new(), true)
            .expect("well formed")
            .with_zero_above()
    }

    /// Coordinate ring of the rational normal curve of degree `d`:
    /// `B_q` = binary forms of degree `d q`, `V = B_1`, for `q = 0..=q_max`.
    pub fn rational_normal_curve(field: PrimeField, d: usize, q_max: usize) -> Self {
        // monomial s^a t^{dq-a} has index a in degree q
        let n = d + 1;
        let dims: Vec<usize> = (0..=q_max).map(|q| d * q + 1).collect();
        let mult = (0..q_max)
            .map(|q| {
                (0..n)
                    .map(|i| {
                        let entries = (0..dims[q]).map(|a| (a + i, a, 1u64));
                        SparseMatrix::from_triplets(field, dims[q + 1], dims[q], entries)
                            .expect("monomial shift")
                    })
                    .collect()
            })
            .collect();
        Self::new(field, n, 0, dims, mult, true).expect("well formed")
    }

    /// Synthetic module with `B_0 = k`, `B_1 = V` and `B_2` a random quotient of
    /// `S^2 V` of dimension `dim2`; deterministic in `seed`.
    pub fn random_quadratic(field: PrimeField, n: usize, dim2: usize, seed: u64) -> Result<Self> {
        let sym2 = n * (n + 1) / 2;
        if dim2 > sym2 {
            return Err(Error::OutOfRange(format!(
                "dim B_2 = {dim2} exceeds dim S^2 V = {sym2}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = field.modulus();
        // projection S^2 V -> k^dim2, columns indexed by i <= j
        let proj: Vec<Vec<u64>> = (0..sym2)
            .map(|_| (0..dim2).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let pair = |i: usize, j: usize| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            a * n - a * (a + 1) / 2 + b
        };
        let level0 = (0..n)
            .map(|i| SparseMatrix::from_triplets(field, n, 1, [(i, 0, 1)]).unwrap())
            .collect();
        let level1 = (0..n)
            .map(|i| {
                let entries = (0..n).flat_map(|j| {
                    let col = &proj[pair(i, j)];
                    col.iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(move |(r, &v)| (r, j, v))
                        .collect::<Vec<_>>()
                });
                SparseMatrix::from_triplets(field, dim2, n, entries).unwrap()
            })
            .collect();
        Self::new(field, n, 0, vec![1, n, dim2], vec![level0, level1], true)
    }
}
