//! Riemann–Roch spaces by the adjoint method.
//!
//! `L(M H - E)` with `E` effective (and `E >= Δ` on a nodal curve) is the space
//! of degree-M forms modulo `F` whose valuation at every place is at least the
//! coefficient of E there. Forms are handled through their normal forms modulo
//! `F`, so unknowns are coefficients of standard monomials.
//!
//! Arbitrary divisors `c H + Σ n_P P` are brought to that shape with auxiliary
//! lines: a line through a smooth point `P` cuts `P + R` with `R` the residual
//! intersection, so `P ~ H - R`. The residual need not split over the field; it
//! is encoded by a polynomial `r(u)` on the line and imposes `r | G(P + u Q)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{dense_kernel, dense_rank, upoly, PrimeField};
use crate::curves::curve::{fmt_point, PlaneCurve};
use crate::curves::divisor::Divisor;
use crate::curves::forms::{cross, dot, monomial_table, normalize_point, Form};
use crate::curves::place::{expand_branch, monomial_series, PlaceKey};
use crate::error::{Error, Result};

/// A basis of `L(D)` as forms of a fixed degree, with certified `h^0` and `h^1`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub divisor: Divisor,
    pub degree: usize,
    pub basis: Vec<Form>,
    pub h0: usize,
    pub h1: usize,
}

/// The line `{P + u Q}`; its intersection with the curve away from the base
/// point (with the multiplicity of the base removed) is `residual(u) = 0`.
#[derive(Clone, Debug)]
pub struct AuxLine {
    pub base: [u64; 3],
    pub dir: [u64; 3],
    pub equation: [u64; 3],
    /// Monic.
    pub residual: Vec<u64>,
    pub anchored: bool,
}

/// One step of a linear-equivalence certificate: the line `equation = 0`
/// cuts `removed + residual`, so `removed ~ H - residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub equation: [u64; 3],
    pub removed: Vec<[u64; 3]>,
    pub residual: Vec<[u64; 3]>,
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub divisor: Divisor,
    pub certificate: Vec<Certificate>,
}

/// Power-series precision for valuation demands up to `maxval`.
pub fn default_precision(maxval: usize) -> usize {
    4 * maxval + 8
}

/// Linear conditions on the standard-monomial coefficients of a degree-M form.
struct Conditions<'a> {
    curve: &'a PlaneCurve,
    degree: usize,
    std_idx: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl<'a> Conditions<'a> {
    fn new(curve: &'a PlaneCurve, degree: usize) -> Self {
        let std_idx = curve
            .reducer()
            .standard_mask(degree)
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
            .collect();
        Conditions {
            curve,
            degree,
            std_idx,
            rows: Vec::new(),
        }
    }

    fn unknowns(&self) -> usize {
        self.std_idx.len()
    }

    /// `ord_key(G) >= order`.
    fn vanish_at(&mut self, key: &PlaceKey, order: usize, precision: usize) -> Result<()> {
        if order == 0 {
            return Ok(());
        }
        let cap = self.curve.precision_cap();
        if order > cap {
            return Err(Error::PrecisionCap(cap));
        }
        let n = precision.max(order).min(cap);
        let place = expand_branch(self.curve, key, n)?;
        let table = monomial_series(self.curve, &place, self.degree, order);
        for s in 0..order {
            self.rows.push(self.std_idx.iter().map(|&i| table[i][s]).collect());
        }
        Ok(())
    }

    /// `residual(u) | G(base + u dir)`.
    fn vanish_on_residual(&mut self, line: &AuxLine) {
        let f = self.curve.field();
        let r = &line.residual;
        let d = r.len() - 1;
        if d == 0 {
            return;
        }
        let base = [
            vec![line.base[0], line.dir[0]],
            vec![line.base[1], line.dir[1]],
            vec![line.base[2], line.dir[2]],
        ];
        let table = monomial_table(self.degree, &base, vec![1u64], |a, b| {
            upoly::rem(f, &upoly::mul(f, a, b), r)
        });
        for s in 0..d {
            self.rows
                .push(self.std_idx.iter().map(|&i| table[i].get(s).copied().unwrap_or(0)).collect());
        }
    }

    fn kernel(self) -> Vec<Form> {
        let f = self.curve.field();
        let n = self.unknowns();
        let total = crate::curves::forms::num_monomials(self.degree);
        dense_kernel(f, self.rows, n)
            .into_iter()
            .map(|v| {
                let mut coeffs = vec![0u64; total];
                for (&i, c) in self.std_idx.iter().zip(v) {
                    coeffs[i] = c;
                }
                Form {
                    degree: self.degree,
                    coeffs,
                }
            })
            .collect()
    }

    fn kernel_dim(self) -> usize {
        let n = self.unknowns();
        n - dense_rank(self.curve.field(), self.rows, n, false)
    }
}

fn max_order(d: &Divisor) -> usize {
    d.places().map(|(_, n)| n.unsigned_abs() as usize).max().unwrap_or(0)
}

/// `L(D)` for `D = M H - E` with `E` effective and, on a nodal curve, every node
/// branch in E (unless `M = 0`); `M >= e - 3` or `M <= 0`. The result is
/// checked against Riemann–Roch with `h^1 = h^0(K - D)`.
pub fn riemann_roch_space(curve: &PlaneCurve, d: &Divisor) -> Result<LinearSystem> {
    let d = d.canonicalized(curve)?;
    let e = curve.degree() as i64;
    let m = d.hyperplane;
    if !d.places_nonpositive() {
        return Err(Error::Normalization(format!(
            "{d} has positive coefficients; normalize it first"
        )));
    }
    if m > 0 && m < e - 3 {
        return Err(Error::Normalization(format!(
            "hyperplane coefficient {m} is below e - 3 = {}",
            e - 3
        )));
    }
    if m > 0 {
        for node in curve.nodes() {
            for branch in 0..2 {
                let key = PlaceKey::Branch { node: node.point, branch };
                if d.coefficient(&key) >= 0 {
                    return Err(Error::Normalization(format!(
                        "{d} lacks the adjoint condition at {key}"
                    )));
                }
            }
        }
    }
    let basis = if m < 0 {
        Vec::new()
    } else {
        let mut cond = Conditions::new(curve, m as usize);
        let precision = default_precision(max_order(&d));
        for (key, n) in d.places() {
            cond.vanish_at(key, (-n) as usize, precision)?;
        }
        cond.kernel()
    };
    let h0 = basis.len();
    let k_minus_d = &Divisor::canonical(curve) - &d;
    let h1 = h0_of(curve, &k_minus_d)?;
    let deg = d.degree(curve);
    let genus = curve.genus();
    if h0 as i64 - h1 as i64 != deg - genus + 1 {
        return Err(Error::RiemannRoch {
            divisor: d.to_string(),
            h0,
            h1,
            deg,
            genus,
        });
    }
    Ok(LinearSystem {
        divisor: d,
        degree: m.max(0) as usize,
        basis,
        h0,
        h1,
    })
}

/// `h^0(D)` for an arbitrary divisor, without a basis and without the
/// Riemann–Roch self-check.
pub fn h0_of(curve: &PlaneCurve, d: &Divisor) -> Result<usize> {
    let d = d.canonicalized(curve)?;
    if d.degree(curve) < 0 {
        return Ok(0);
    }
    let f = curve.field();
    let e = curve.degree() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_11e5 ^ f.modulus());
    let mut special: Vec<[u64; 3]> = d
        .places()
        .filter_map(|(k, _)| match k {
            PlaceKey::Point(p) => Some(*p),
            PlaceKey::Branch { .. } => None,
        })
        .collect();
    special.extend(curve.nodes().iter().map(|n| n.point));
    let mut lines: Vec<AuxLine> = Vec::new();
    let mut reqs: Vec<(PlaceKey, usize)> = Vec::new();
    let mut m = d.hyperplane;
    for (key, n) in d.places() {
        if let PlaceKey::Point(p) = key {
            if n > 0 {
                for _ in 0..n {
                    lines.push(sample_line(curve, Some((*p, 1)), &special, &lines, &mut rng)?);
                    m += 1;
                }
            } else {
                reqs.push((*key, (-n) as usize));
            }
        }
    }
    for node in curve.nodes() {
        let keys = [0u8, 1].map(|branch| PlaceKey::Branch { node: node.point, branch });
        let nb = keys.map(|k| d.coefficient(&k));
        let k = (1 + nb[0].max(nb[1])).max(0);
        for _ in 0..k {
            lines.push(sample_line(curve, Some((node.point, 2)), &special, &lines, &mut rng)?);
            m += 1;
        }
        for (key, n) in keys.iter().zip(nb) {
            reqs.push((*key, (k - n) as usize));
        }
    }
    while m < (e - 3).max(0) {
        lines.push(sample_line(curve, None, &special, &lines, &mut rng)?);
        m += 1;
    }
    let mut cond = Conditions::new(curve, m as usize);
    let precision = default_precision(reqs.iter().map(|r| r.1).max().unwrap_or(0));
    for (key, order) in &reqs {
        cond.vanish_at(key, *order, precision)?;
    }
    for line in &lines {
        cond.vanish_on_residual(line);
    }
    Ok(cond.kernel_dim())
}

fn proportional(f: PrimeField, a: &[u64; 3], b: &[u64; 3]) -> bool {
    cross(f, a, b).iter().all(|&c| c == 0)
}

fn random_vector<R: Rng>(f: PrimeField, rng: &mut R) -> [u64; 3] {
    let p = f.modulus();
    [rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)]
}

/// A line through `base` (a point of multiplicity `mult` on the curve) or, with
/// no base, a line off every special point, whose residual intersection is
/// reduced and disjoint from the special points and from the other lines.
fn sample_line<R: Rng>(
    curve: &PlaneCurve,
    base: Option<([u64; 3], usize)>,
    special: &[[u64; 3]],
    lines: &[AuxLine],
    rng: &mut R,
) -> Result<AuxLine> {
    let f = curve.field();
    let e = curve.degree();
    for _ in 0..64 {
        let q = random_vector(f, rng);
        if curve.form().eval(f, &q) == 0 {
            continue;
        }
        let (p, mult) = match base {
            Some((p, mult)) => (p, mult),
            None => {
                let p = random_vector(f, rng);
                if curve.form().eval(f, &p) == 0 {
                    continue;
                }
                (p, 0)
            }
        };
        if proportional(f, &p, &q) {
            continue;
        }
        let poly = curve.restrict_to_line(&p, &q);
        if poly.len() != e + 1 || poly[..mult].iter().any(|&c| c != 0) {
            continue;
        }
        let r = poly[mult..].to_vec();
        if r[0] == 0 || !upoly::is_squarefree(f, &r) {
            continue;
        }
        let equation = cross(f, &p, &q);
        let hits_special = special
            .iter()
            .any(|x| dot(f, &equation, x) == 0 && !(base.is_some() && proportional(f, x, &p)));
        if hits_special {
            continue;
        }
        let clash = lines.iter().any(|other| {
            let x = cross(f, &equation, &other.equation);
            if x.iter().all(|&c| c == 0) {
                return true;
            }
            curve.form().eval(f, &x) == 0
                && !(base.is_some() && other.anchored && proportional(f, &x, &p) && proportional(f, &x, &other.base))
        });
        if clash {
            continue;
        }
        return Ok(AuxLine {
            base: p,
            dir: q,
            equation,
            residual: upoly::monic(f, r),
            anchored: base.is_some(),
        });
    }
    Err(Error::Sampling(match base {
        Some((p, _)) => format!("no admissible auxiliary line through {}", fmt_point(&p)),
        None => "no admissible auxiliary line".into(),
    }))
}

/// Residual points `base + u dir` for the roots `u` of `r`, if `r` splits into
/// distinct roots giving smooth points off `occupied`.
pub(crate) fn split_residual(
    curve: &PlaneCurve,
    base: &[u64; 3],
    dir: &[u64; 3],
    r: &[u64],
    occupied: &[[u64; 3]],
) -> Option<Vec<[u64; 3]>> {
    let f = curve.field();
    let roots = upoly::distinct_split_roots(f, r)?;
    let mut pts = Vec::with_capacity(roots.len());
    for u in roots {
        let x = [
            f.add(base[0], f.mul(u, dir[0])),
            f.add(base[1], f.mul(u, dir[1])),
            f.add(base[2], f.mul(u, dir[2])),
        ];
        let x = normalize_point(f, &x)?;
        if !curve.is_smooth_point(&x) || curve.node_index(&x).is_some() || occupied.contains(&x) {
            return None;
        }
        pts.push(x);
    }
    Some(pts)
}

/// Brings `D` to the shape `M H - E` with `E` effective and `M >= e - 3`, by
/// lines whose residual intersections split into rational points. Positive
/// places must be smooth rational points.
pub fn normalize_divisor<R: Rng>(curve: &PlaneCurve, d: &Divisor, rng: &mut R) -> Result<Normalized> {
    const BUDGET: usize = 32;
    let f = curve.field();
    let e = curve.degree() as i64;
    let d = d.canonicalized(curve)?;
    let mut queue: Vec<[u64; 3]> = Vec::new();
    let mut out = Divisor::hyperplane(d.hyperplane);
    for (key, n) in d.places() {
        match key {
            PlaceKey::Point(p) if n > 0 => queue.extend(std::iter::repeat(*p).take(n as usize)),
            PlaceKey::Branch { .. } if n > 0 => {
                return Err(Error::Normalization(format!(
                    "positive coefficient at the node branch {key}"
                )))
            }
            _ => out.add_place(*key, n),
        }
    }
    let mut occupied: Vec<[u64; 3]> = d.places().map(|(k, _)| k.point()).collect();
    let mut certificate = Vec::new();
    let mut record = |out: &mut Divisor, occupied: &mut Vec<[u64; 3]>, equation, removed, residual: Vec<[u64; 3]>| {
        out.hyperplane += 1;
        for x in &residual {
            out.add_place(PlaceKey::Point(*x), -1);
            occupied.push(*x);
        }
        certificate.push(Certificate {
            equation,
            removed,
            residual,
        });
    };
    while let Some(x) = queue.pop() {
        // the line through two distinct positive points first
        if let Some(j) = queue.iter().position(|y| *y != x) {
            let y = queue[j];
            let mut done = false;
            for _ in 0..BUDGET {
                let c = rng.gen_range(1..f.modulus());
                let w = [
                    f.add(y[0], f.mul(c, x[0])),
                    f.add(y[1], f.mul(c, x[1])),
                    f.add(y[2], f.mul(c, x[2])),
                ];
                if curve.form().eval(f, &w) == 0 {
                    continue;
                }
                let poly = curve.restrict_to_line(&x, &w);
                // u = 0 is x and u = -1/c is y
                let uy = f.neg(f.inv(c).unwrap());
                let (r, rest) = upoly::divrem(f, &poly, &[0, f.neg(uy), 1]);
                if rest.iter().any(|&v| v != 0) || upoly::eval(f, &r, 0) == 0 || upoly::eval(f, &r, uy) == 0 {
                    break;
                }
                if let Some(pts) = split_residual(curve, &x, &w, &r, &occupied) {
                    queue.remove(j);
                    record(&mut out, &mut occupied, cross(f, &x, &y), vec![x, y], pts);
                    done = true;
                }
                break;
            }
            if done {
                continue;
            }
        }
        let mut done = false;
        for _ in 0..BUDGET {
            let q = random_vector(f, rng);
            if curve.form().eval(f, &q) == 0 || proportional(f, &x, &q) {
                continue;
            }
            let poly = curve.restrict_to_line(&x, &q);
            if poly.first() != Some(&0) {
                continue;
            }
            let r = poly[1..].to_vec();
            if r[0] == 0 {
                continue;
            }
            if let Some(pts) = split_residual(curve, &x, &q, &r, &occupied) {
                record(&mut out, &mut occupied, cross(f, &x, &q), vec![x], pts);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Normalization(format!(
                "no line through {} with a residual splitting into distinct rational points after {BUDGET} attempts; try another prime or configuration",
                fmt_point(&x)
            )));
        }
    }
    // forms of degree M < e - 3 need not cut a complete series
    while out.hyperplane > 0 && out.hyperplane < e - 3 {
        let mut done = false;
        for _ in 0..BUDGET {
            let p = random_vector(f, rng);
            let q = random_vector(f, rng);
            if curve.form().eval(f, &p) == 0 || curve.form().eval(f, &q) == 0 || proportional(f, &p, &q) {
                continue;
            }
            let r = curve.restrict_to_line(&p, &q);
            if let Some(pts) = split_residual(curve, &p, &q, &r, &occupied) {
                record(&mut out, &mut occupied, cross(f, &p, &q), Vec::new(), pts);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Normalization(format!(
                "no line splitting completely found after {BUDGET} attempts; try another prime"
            )));
        }
    }
    Ok(Normalized {
        divisor: out,
        certificate,
    })
}
