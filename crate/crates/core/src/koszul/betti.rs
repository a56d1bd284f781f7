//! Betti tables and their text/CSV forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::rank::RankOptions;
use crate::error::{Error, Result};
use crate::koszul::complex::KoszulComplex;
use crate::koszul::module::GradedModule;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiCell {
    pub dim: usize,
    /// Shape of `d_{p,q}`.
    pub rows_out: usize,
    pub cols_out: usize,
    pub rank_out: usize,
    /// Rank of `d_{p+1,q-1}`.
    pub rank_in: usize,
    pub prime: u64,
}

/// `dim K_{p,q}` over a rectangle of `(p, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub n: usize,
    pub prime: u64,
    pub cells: BTreeMap<(i64, i64), BettiCell>,
}

impl BettiTable {
    pub fn get(&self, p: i64, q: i64) -> Option<usize> {
        self.cells.get(&(p, q)).map(|c| c.dim)
    }

    pub fn p_values(&self) -> Vec<i64> {
        let mut ps: Vec<i64> = self.cells.keys().map(|k| k.0).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn q_values(&self) -> Vec<i64> {
        let mut qs: Vec<i64> = self.cells.keys().map(|k| k.1).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// Values of a strand `q` ordered by `p`.
    pub fn row(&self, q: i64) -> Vec<usize> {
        self.p_values()
            .into_iter()
            .filter_map(|p| self.get(p, q))
            .collect()
    }

    /// Dimensions only, for comparing tables across primes.
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.cells.iter().map(|(&k, c)| (k, c.dim)).collect()
    }

    /// Diagram with one row per `q` and one column per `p`, right aligned.
    pub fn to_diagram(&self) -> String {
        let ps = self.p_values();
        let qs = self.q_values();
        let label_w = qs
            .iter()
            .map(|q| format!("{q}:").len())
            .chain(std::iter::once("total:".len()))
            .max()
            .unwrap_or(6);
        let col_w: Vec<usize> = ps
            .iter()
            .map(|&p| {
                let total: usize = qs.iter().filter_map(|&q| self.get(p, q)).sum();
                qs.iter()
                    .filter_map(|&q| self.get(p, q))
                    .map(|v| v.to_string().len())
                    .chain([p.to_string().len(), total.to_string().len()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        let mut s = String::new();
        let _ = write!(s, "{:>label_w$}", "");
        for (p, w) in ps.iter().zip(&col_w) {
            let _ = write!(s, " {p:>w$}");
        }
        s.push('\n');
        let _ = write!(s, "{:>label_w$}", "total:");
        for (&p, w) in ps.iter().zip(&col_w) {
            let total: usize = qs.iter().filter_map(|&q| self.get(p, q)).sum();
            let _ = write!(s, " {total:>w$}");
        }
        s.push('\n');
        for &q in &qs {
            let _ = write!(s, "{:>label_w$}", format!("{q}:"));
            for (&p, w) in ps.iter().zip(&col_w) {
                match self.get(p, q) {
                    Some(v) => {
                        let _ = write!(s, " {v:>w$}");
                    }
                    None => {
                        let _ = write!(s, " {:>w$}", "-");
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    /// CSV with header `p,q,dim,rank_out,rank_in,prime`, ordered by `(q, p)`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,dim,rank_out,rank_in,prime\n");
        let mut keys: Vec<_> = self.cells.keys().copied().collect();
        keys.sort_by_key(|&(p, q)| (q, p));
        for (p, q) in keys {
            let c = &self.cells[&(p, q)];
            let _ = writeln!(s, "{p},{q},{},{},{},{}", c.dim, c.rank_out, c.rank_in, c.prime);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        if header.trim() != "p,q,dim,rank_out,rank_in,prime" {
            return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
        }
        let mut t = BettiTable::default();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 6 {
                return Err(Error::Parse(format!("bad CSV line {line:?}")));
            }
            let num = |i: usize| -> Result<i64> {
                fields[i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number {:?}", fields[i])))
            };
            let cell = BettiCell {
                dim: num(2)? as usize,
                rows_out: 0,
                cols_out: 0,
                rank_out: num(3)? as usize,
                rank_in: num(4)? as usize,
                prime: num(5)? as u64,
            };
            t.prime = cell.prime;
            t.cells.insert((num(0)?, num(1)?), cell);
        }
        Ok(t)
    }
}

/// Computes every `K_{p,q}` in the given ranges. Differentials shared between
/// neighbouring cells are ranked once; cells are evaluated concurrently.
pub fn betti_table(
    m: &GradedModule,
    p_range: std::ops::RangeInclusive<i64>,
    q_range: std::ops::RangeInclusive<i64>,
) -> Result<BettiTable> {
    betti_table_with(m, p_range, q_range, RankOptions::default())
}

pub fn betti_table_with(
    m: &GradedModule,
    p_range: std::ops::RangeInclusive<i64>,
    q_range: std::ops::RangeInclusive<i64>,
    opts: RankOptions,
) -> Result<BettiTable> {
    let cx = KoszulComplex::with_options(m, opts);
    let keys: Vec<(i64, i64)> = q_range
        .flat_map(|q| p_range.clone().map(move |p| (p, q)))
        .collect();
    let prime = m.field().modulus();
    let cells = par::map(&keys, opts.parallel, |&(p, q)| {
        cx.cell(p, q).map(|c| {
            (
                (p, q),
                BettiCell {
                    dim: c.dim,
                    rows_out: c.out.rows,
                    cols_out: c.out.cols,
                    rank_out: c.out.rank,
                    rank_in: c.rank_in,
                    prime,
                },
            )
        })
    });
    Ok(BettiTable {
        n: m.n(),
        prime,
        cells: cells.into_iter().collect::<Result<_>>()?,
    })
}

/// Vanishing of `h^1(L^{q-1})` and `h^1(L^q)`, as certified by the curve backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualityHypotheses {
    pub h1_prev: usize,
    pub h1_cur: usize,
}

/// `dim K_{p,q}(C, L) - dim K_{r-1-p, 2-q}(C; K_C, L)` with `r = h^0(L) - 1`.
pub fn duality_gap(
    untwisted: &BettiTable,
    twisted: &BettiTable,
    r: i64,
    p: i64,
    q: i64,
    hyp: DualityHypotheses,
) -> Result<i64> {
    if hyp.h1_prev != 0 || hyp.h1_cur != 0 {
        return Err(Error::DualityUncertified(format!(
            "h1(L^{}) = {}, h1(L^{}) = {}",
            q - 1,
            hyp.h1_prev,
            q,
            hyp.h1_cur
        )));
    }
    if untwisted.prime != twisted.prime {
        return Err(Error::FieldMismatch(format!(
            "tables over F_{} and F_{}",
            untwisted.prime, twisted.prime
        )));
    }
    let lhs = untwisted
        .get(p, q)
        .ok_or_else(|| Error::OutOfRange(format!("untwisted cell ({p},{q}) not computed")))?;
    let (pd, qd) = (r - 1 - p, 2 - q);
    let rhs = twisted
        .get(pd, qd)
        .ok_or_else(|| Error::OutOfRange(format!("twisted cell ({pd},{qd}) not computed")))?;
    Ok(lhs as i64 - rhs as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::koszul::wedge::binomial;

    fn f() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn trivial_module_table() {
        let m = GradedModule::trivial(f(), 3);
        let t = betti_table(&m, 0..=3, 0..=0).unwrap();
        assert_eq!(t.row(0), (0..=3).map(|p| binomial(3, p) as usize).collect::<Vec<_>>());
    }

    #[test]
    fn twisted_cubic_diagram_and_csv() {
        let m = GradedModule::rational_normal_curve(f(), 3, 2);
        let t = betti_table(&m, 0..=3, 0..=1).unwrap();
        assert_eq!(t.row(1), vec![0, 3, 2, 0]);
        assert_eq!(t.row(0), vec![1, 0, 0, 0]);
        let d = t.to_diagram();
        assert!(d.lines().any(|l| l.trim_start().starts_with("1:") && l.ends_with("0 3 2 0")), "{d}");
        let back = BettiTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back.dims(), t.dims());
    }

    #[test]
    fn empty_range() {
        let m = GradedModule::trivial(f(), 3);
        #[allow(clippy::reversed_empty_ranges)]
        let t = betti_table(&m, 1..=0, 0..=0).unwrap();
        assert!(t.cells.is_empty());
        assert_eq!(t.to_diagram().lines().count(), 2);
    }

    #[test]
    fn duality_refuses_uncertified() {
        let t = BettiTable::default();
        let r = duality_gap(&t, &t, 3, 0, 2, DualityHypotheses { h1_prev: 1, h1_cur: 0 });
        assert!(matches!(r, Err(Error::DualityUncertified(_))));
    }
}
