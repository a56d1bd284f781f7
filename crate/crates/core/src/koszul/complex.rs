//! Koszul differentials `d_{p,q}: Λ^p V ⊗ B_q -> Λ^{p-1} V ⊗ B_{q+1}` and the
//! dimensions of their cohomology.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::rank::{rank_with, RankOptions};
use crate::algebra::SparseMatrix;
use crate::error::{Error, Result};
use crate::koszul::module::GradedModule;
use crate::koszul::wedge::{binomial, WedgeBasis};
use crate::par;

/// Builds `d_{p,q}`. Columns are indexed by `(I, b)` as `rank(I) * dim B_q + b`
/// and rows by `(J, c)` as `rank(J) * dim B_{q+1} + c`; on a basis element
/// `(i_1 < … < i_p) ⊗ b` the image is `Σ_j (-1)^{j-1} (… î_j …) ⊗ μ_{q,i_j}(b)`.
pub fn build_differential(m: &GradedModule, p: i64, q: i64) -> Result<SparseMatrix> {
    build_differential_with(m, p, q, true)
}

pub fn build_differential_with(
    m: &GradedModule,
    p: i64,
    q: i64,
    parallel: bool,
) -> Result<SparseMatrix> {
    if p < 0 {
        return Err(Error::OutOfRange(format!("exterior power p = {p}")));
    }
    let n = m.n();
    let dim_src = m.dim(q)?;
    let wedge_src = WedgeBasis::new(n, p as usize);
    let cols = wedge_src.len() * dim_src;
    let target_wedges = binomial(n as i64, p - 1) as usize;
    if target_wedges == 0 {
        return Ok(SparseMatrix::zero(m.field(), 0, cols));
    }
    let dim_tgt = m.dim(q + 1)?;
    let rows = target_wedges * dim_tgt;
    if cols == 0 || rows == 0 {
        return Ok(SparseMatrix::zero(m.field(), rows, cols));
    }
    // the maps are needed only when both ends are nonzero
    m.mult(q, 0)?;
    let f = m.field();
    let wedge_tgt = WedgeBasis::new(n, p as usize - 1);
    let tuples = wedge_src.tuples();
    // one block of entries per source wedge, built independently
    let blocks: Vec<Vec<(u32, u32, u64)>> = par::map(&tuples, parallel, |tuple| {
        let ci = wedge_src.rank(tuple);
        let mut out = Vec::new();
        let mut rest = Vec::with_capacity(tuple.len());
        for (j, &ij) in tuple.iter().enumerate() {
            rest.clear();
            rest.extend(tuple.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &t)| t));
            let row_base = wedge_tgt.rank(&rest) * dim_tgt;
            let negate = j % 2 == 1;
            for b in 0..dim_src {
                let col = (ci * dim_src + b) as u32;
                for &(c, v) in m.image(q, ij, b) {
                    let v = if negate { f.neg(v) } else { v };
                    out.push(((row_base + c as usize) as u32, col, v));
                }
            }
        }
        out
    });
    let mut data: Vec<Vec<(u32, u64)>> = vec![Vec::new(); rows];
    for block in blocks {
        for (r, c, v) in block {
            data[r as usize].push((c, v));
        }
    }
    for row in &mut data {
        row.sort_unstable_by_key(|e| e.0);
    }
    Ok(SparseMatrix::from_sorted_rows(f, cols, data))
}

/// Shape and rank of one differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankInfo {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

/// Memo of differential ranks keyed by `(p, q)`. The first finished computation
/// for a key is stored, and every reader afterwards sees that same value.
#[derive(Debug, Default)]
pub struct RankCache {
    slots: Mutex<HashMap<(i64, i64), Arc<OnceLock<RankInfo>>>>,
}

impl RankCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(
        &self,
        key: (i64, i64),
        compute: impl FnOnce() -> Result<RankInfo>,
    ) -> Result<RankInfo> {
        let slot = {
            let mut slots = self.slots.lock().expect("rank cache poisoned");
            Arc::clone(slots.entry(key).or_default())
        };
        if let Some(v) = slot.get() {
            return Ok(*v);
        }
        let v = compute()?;
        Ok(*slot.get_or_init(|| v))
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("rank cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One cell `K_{p,q}` with the data used to compute it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellInfo {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
    /// `rank d_{p,q}` and its shape.
    pub out: RankInfo,
    /// `rank d_{p+1,q-1}`.
    pub rank_in: usize,
}

/// The Koszul complex of a module, with memoized differential ranks.
#[derive(Debug)]
pub struct KoszulComplex<'a> {
    module: &'a GradedModule,
    cache: RankCache,
    opts: RankOptions,
}

impl<'a> KoszulComplex<'a> {
    pub fn new(module: &'a GradedModule) -> Self {
        Self::with_options(module, RankOptions::default())
    }

    pub fn with_options(module: &'a GradedModule, opts: RankOptions) -> Self {
        KoszulComplex {
            module,
            cache: RankCache::new(),
            opts,
        }
    }

    pub fn module(&self) -> &GradedModule {
        self.module
    }

    pub fn options(&self) -> RankOptions {
        self.opts
    }

    pub fn differential(&self, p: i64, q: i64) -> Result<SparseMatrix> {
        build_differential_with(self.module, p, q, self.opts.parallel)
    }

    /// Rank of `d_{p,q}`, computed at most once per complex.
    pub fn rank(&self, p: i64, q: i64) -> Result<RankInfo> {
        let n = self.module.n() as i64;
        // d_{p,q} vanishes for trivial reasons in these cases; no matrix needed
        if p < 0 || p > n || p == 0 || self.module.dim(q)? == 0 {
            let rows = if p >= 1 && p <= n + 1 {
                binomial(n, p - 1) as usize * self.module.dim(q + 1).unwrap_or(0)
            } else {
                0
            };
            let cols = binomial(n, p) as usize * self.module.dim(q)?;
            return Ok(RankInfo { rows, cols, rank: 0 });
        }
        self.cache.get_or_compute((p, q), || {
            let d = self.differential(p, q)?;
            Ok(RankInfo {
                rows: d.rows(),
                cols: d.cols(),
                rank: rank_with(&d, &self.opts),
            })
        })
    }

    /// `dim K_{p,q} = dim ker d_{p,q} - rank d_{p+1,q-1}`.
    pub fn cell(&self, p: i64, q: i64) -> Result<CellInfo> {
        let n = self.module.n() as i64;
        if p < 0 || p > n {
            let zero = RankInfo { rows: 0, cols: 0, rank: 0 };
            return Ok(CellInfo { p, q, dim: 0, out: zero, rank_in: 0 });
        }
        let dim_q = self.module.dim(q)?;
        let total = binomial(n, p) as usize * dim_q;
        let out = self.rank(p, q)?;
        let rank_in = if self.module.dim(q - 1)? == 0 {
            0
        } else {
            self.rank(p + 1, q - 1)?.rank
        };
        let dim = total as i64 - out.rank as i64 - rank_in as i64;
        if dim < 0 {
            return Err(Error::NegativeDimension { p, q });
        }
        Ok(CellInfo {
            p,
            q,
            dim: dim as usize,
            out,
            rank_in,
        })
    }

    pub fn dimension(&self, p: i64, q: i64) -> Result<usize> {
        Ok(self.cell(p, q)?.dim)
    }

    pub fn cached_ranks(&self) -> usize {
        self.cache.len()
    }
}

/// `dim K_{p,q}(B, V)`.
pub fn koszul_dimension(m: &GradedModule, p: i64, q: i64) -> Result<usize> {
    KoszulComplex::new(m).dimension(p, q)
}

/// Euler characteristic `Σ_{j ≥ 0} (-1)^j C(n, p_top - j) dim B_j` of the strand
/// `0 -> Λ^{p_top} V ⊗ B_0 -> Λ^{p_top-1} V ⊗ B_1 -> …`, in exact integers.
pub fn euler_strand(m: &GradedModule, p_top: i64) -> Result<i64> {
    let n = m.n() as i64;
    let mut chi: i128 = 0;
    for j in 0..=p_top.max(-1) {
        let wedge = binomial(n, p_top - j) as i128;
        if wedge == 0 {
            continue;
        }
        let d = m.dim(j)? as i128;
        let term = wedge * d;
        chi += if j % 2 == 0 { term } else { -term };
    }
    Ok(chi as i64)
}

/// Checks `d_{p,q} ∘ d_{p+1,q-1} = 0` for every pair of differentials the
/// module determines and returns how many compositions were checked.
pub fn check_d_squared(m: &GradedModule, parallel: bool) -> Result<usize> {
    let n = m.n() as i64;
    let keys: Vec<(i64, i64)> = (m.q_min() + 1..m.q_max())
        .flat_map(|q| (1..n).map(move |p| (p, q)))
        .collect();
    let checked = par::map(&keys, parallel, |&(p, q)| -> Result<usize> {
        let outer = build_differential_with(m, p, q, false)?;
        let inner = build_differential_with(m, p + 1, q - 1, false)?;
        if !outer.mul(&inner)?.is_zero() {
            return Err(Error::InvalidMatrix(format!("d_{{{p},{q}}} d_{{{},{}}} != 0", p + 1, q - 1)));
        }
        Ok(1)
    });
    checked.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn f() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn trivial_module_row_zero() {
        let m = GradedModule::trivial(f(), 4);
        for p in 0..=4 {
            assert_eq!(koszul_dimension(&m, p, 0).unwrap(), binomial(4, p) as usize);
        }
    }

    #[test]
    fn empty_wedge_gives_empty_matrix() {
        let m = GradedModule::rational_normal_curve(f(), 3, 2);
        let d = build_differential(&m, 5, 0).unwrap();
        assert_eq!((d.rows(), d.cols()), (binomial(4, 4) as usize * 4, 0));
        let d = build_differential(&m, 0, 1).unwrap();
        assert_eq!((d.rows(), d.cols()), (0, 4));
        assert!(build_differential(&m, -1, 0).is_err());
        assert!(matches!(build_differential(&m, 1, 2), Err(Error::MissingDegree(3))));
    }

    #[test]
    fn single_wedge_is_identity() {
        // n = 2, B_0 = k, B_1 = k^2, μ_{0,i} = e_i
        let field = f();
        let mu = |i: usize| SparseMatrix::from_triplets(field, 2, 1, [(i, 0, 1)]).unwrap();
        let m = GradedModule::new(field, 2, 0, vec![1, 2], vec![vec![mu(0), mu(1)]], true).unwrap();
        let d = build_differential(&m, 1, 0).unwrap();
        assert_eq!(d.to_dense(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn twisted_cubic_strand() {
        let m = GradedModule::rational_normal_curve(f(), 3, 2);
        let cx = KoszulComplex::new(&m);
        // Λ^3 V ⊗ B_0 -> Λ^2 V ⊗ B_1 is injective; Λ^2 V ⊗ B_0 -> V ⊗ B_1 too
        assert_eq!(cx.rank(3, 0).unwrap().rank, 4);
        assert_eq!(cx.rank(2, 0).unwrap().rank, 6);
        assert_eq!(cx.dimension(1, 1).unwrap(), 3);
        assert_eq!(cx.dimension(2, 1).unwrap(), 2);
        assert_eq!(cx.dimension(3, 1).unwrap(), 0);
    }

    #[test]
    fn d_squared_is_zero() {
        let m = GradedModule::rational_normal_curve(f(), 4, 3);
        for q in 1..=2 {
            for p in 0..=5 {
                let outer = build_differential(&m, p, q).unwrap();
                let inner = build_differential(&m, p + 1, q - 1).unwrap();
                assert!(outer.mul(&inner).unwrap().is_zero(), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn cache_is_shared() {
        let m = GradedModule::rational_normal_curve(f(), 3, 2);
        let cx = KoszulComplex::new(&m);
        let a = cx.cell(2, 1).unwrap();
        let before = cx.cached_ranks();
        let b = cx.cell(2, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(cx.cached_ranks(), before);
    }

    #[test]
    fn euler_of_point_module() {
        let m = GradedModule::trivial(f(), 5);
        assert_eq!(euler_strand(&m, 5).unwrap(), 1);
    }
}
