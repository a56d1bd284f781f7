//! Plane curves with ordinary nodes.

use rand::Rng;

use crate::algebra::{upoly, PrimeField};
use crate::curves::forms::{monomial_table, normalize_point, Form, Reducer};
use crate::error::{Error, Result};

/// Default cap on power-series precision.
pub const DEFAULT_PRECISION_CAP: usize = 1 << 14;

/// A node with its two tangent directions `(α, β)` in the local chart of the
/// point (see [`LocalChart`]), sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub point: [u64; 3],
    pub tangents: [[u64; 2]; 2],
}

/// Taylor expansion of `F` at a point: the point is scaled so that coordinate
/// `chart` is 1, and `g[a][b]` is the coefficient of `s^a w^b` in
/// `F(P + s e_u + w e_v)` with `(u, v) = others`.
#[derive(Clone, Debug)]
pub struct LocalChart {
    pub point: [u64; 3],
    pub chart: usize,
    pub others: [usize; 2],
    pub g: Vec<Vec<u64>>,
}

impl LocalChart {
    pub fn coeff(&self, a: usize, b: usize) -> u64 {
        self.g.get(a).and_then(|r| r.get(b)).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct PlaneCurve {
    field: PrimeField,
    form: Form,
    partials: [Form; 3],
    reducer: Reducer,
    nodes: Vec<Node>,
    precision_cap: usize,
}

impl PlaneCurve {
    /// Validates the declared nodes: each must lie on the curve, have vanishing
    /// gradient, and have two distinct tangents defined over the field.
    pub fn new(field: PrimeField, form: Form, node_points: &[[u64; 3]]) -> Result<Self> {
        if form.degree == 0 || form.is_zero() {
            return Err(Error::Geometry("curve must be a nonzero form of positive degree".into()));
        }
        let partials = [form.partial(field, 0), form.partial(field, 1), form.partial(field, 2)];
        let reducer = Reducer::new(field, form.clone()).expect("nonzero form");
        let mut curve = PlaneCurve {
            field,
            form,
            partials,
            reducer,
            nodes: Vec::new(),
            precision_cap: DEFAULT_PRECISION_CAP,
        };
        let mut nodes: Vec<Node> = Vec::new();
        for p in node_points {
            let p = normalize_point(field, p)
                .ok_or_else(|| Error::Geometry("node at the zero vector".into()))?;
            if nodes.iter().any(|n| n.point == p) {
                return Err(Error::Geometry(format!("node {} declared twice", fmt_point(&p))));
            }
            nodes.push(curve.analyze_node(&p)?);
        }
        curve.nodes = nodes;
        Ok(curve)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.form.degree
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    pub fn precision_cap(&self) -> usize {
        self.precision_cap
    }

    pub fn with_precision_cap(mut self, cap: usize) -> Self {
        self.precision_cap = cap.max(1);
        self
    }

    /// Arithmetic genus minus the number of nodes.
    pub fn genus(&self) -> i64 {
        let e = self.degree() as i64;
        (e - 1) * (e - 2) / 2 - self.nodes.len() as i64
    }

    /// Degree of projection from a node (or from a point of the curve when
    /// smooth): an upper bound for the gonality, not a certified value.
    pub fn gonality_hint(&self) -> i64 {
        let e = self.degree() as i64;
        let h = if self.nodes.is_empty() { e - 1 } else { e - 2 };
        h.max(1)
    }

    pub fn contains(&self, p: &[u64; 3]) -> bool {
        self.form.eval(self.field, p) == 0
    }

    pub fn gradient(&self, p: &[u64; 3]) -> [u64; 3] {
        [
            self.partials[0].eval(self.field, p),
            self.partials[1].eval(self.field, p),
            self.partials[2].eval(self.field, p),
        ]
    }

    pub fn is_smooth_point(&self, p: &[u64; 3]) -> bool {
        self.contains(p) && self.gradient(p).iter().any(|&c| c != 0)
    }

    pub fn node_index(&self, p: &[u64; 3]) -> Option<usize> {
        let p = normalize_point(self.field, p)?;
        self.nodes.iter().position(|n| n.point == p)
    }

    /// `F(P + u Q)` as a polynomial in `u`.
    pub fn restrict_to_line(&self, p: &[u64; 3], q: &[u64; 3]) -> Vec<u64> {
        let f = self.field;
        let base = [vec![p[0], q[0]], vec![p[1], q[1]], vec![p[2], q[2]]];
        let table = monomial_table(self.degree(), &base, vec![1u64], |a, b| upoly::mul(f, a, b));
        let mut out = vec![0u64; self.degree() + 1];
        for (m, &c) in table.iter().zip(&self.form.coeffs) {
            if c == 0 {
                continue;
            }
            for (i, &v) in m.iter().enumerate() {
                out[i] = f.add(out[i], f.mul(c, v));
            }
        }
        upoly::trim(out)
    }

    pub fn local_chart(&self, p: &[u64; 3]) -> Result<LocalChart> {
        let f = self.field;
        let point = normalize_point(f, p).ok_or_else(|| Error::Geometry("zero vector".into()))?;
        let chart = (0..3).rev().find(|&i| point[i] != 0).unwrap();
        let others = match chart {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let e = self.degree();
        let (u0, v0) = (point[others[0]], point[others[1]]);
        let binom = binomial_table(e);
        let pow = |x: u64, k: usize| f.pow(x, k as u64);
        let mut g = vec![vec![0u64; e + 1]; e + 1];
        for (exps, c) in self.form.terms() {
            let (a, b) = (exps[others[0]], exps[others[1]]);
            // (u0 + s)^a (v0 + w)^b
            for i in 0..=a {
                let ci = f.mul(binom[a][i], pow(u0, a - i));
                for j in 0..=b {
                    let cj = f.mul(binom[b][j], pow(v0, b - j));
                    g[i][j] = f.add(g[i][j], f.mul(c, f.mul(ci, cj)));
                }
            }
        }
        Ok(LocalChart {
            point,
            chart,
            others,
            g,
        })
    }

    fn analyze_node(&self, p: &[u64; 3]) -> Result<Node> {
        let f = self.field;
        if !self.contains(p) {
            return Err(Error::Geometry(format!("node {} is not on the curve", fmt_point(p))));
        }
        if self.gradient(p).iter().any(|&c| c != 0) {
            return Err(Error::Geometry(format!("declared node {} is a smooth point", fmt_point(p))));
        }
        let lc = self.local_chart(p)?;
        let (g20, g11, g02) = (lc.coeff(2, 0), lc.coeff(1, 1), lc.coeff(0, 2));
        let disc = f.sub(f.mul(g11, g11), f.mul(4 % f.modulus(), f.mul(g20, g02)));
        if disc == 0 {
            return Err(Error::Geometry(format!(
                "singular point {} is not an ordinary node",
                fmt_point(p)
            )));
        }
        let mut tangents = if g02 != 0 {
            let root = f.sqrt(disc).ok_or_else(|| {
                Error::Geometry(format!("node {} has tangents not defined over F_{}", fmt_point(p), f.modulus()))
            })?;
            let den = f
                .inv(f.mul(2 % f.modulus(), g02))
                .ok_or_else(|| Error::Geometry("characteristic 2 is not supported".into()))?;
            let l1 = f.mul(f.sub(f.neg(g11), root), den);
            let l2 = f.mul(f.add(f.neg(g11), root), den);
            [[1, l1], [1, l2]]
        } else {
            // q = s (g20 s + g11 w)
            let l = f.mul(f.neg(g20), f.inv(g11).unwrap());
            [[0, 1], [1, l]]
        };
        tangents.sort_unstable();
        Ok(Node {
            point: lc.point,
            tangents,
        })
    }

    /// A random smooth rational point off the nodes, by intersecting with a
    /// random vertical line `x = a z`.
    pub fn random_point<R: Rng>(&self, rng: &mut R, attempts: usize) -> Option<[u64; 3]> {
        let f = self.field;
        for _ in 0..attempts {
            let a = rng.gen_range(0..f.modulus());
            let poly = self.restrict_to_line(&[a, 0, 1], &[0, 1, 0]);
            let roots = upoly::roots(f, &poly);
            if roots.is_empty() {
                continue;
            }
            let y = roots[rng.gen_range(0..roots.len())];
            let p = [a, y, 1];
            if self.is_smooth_point(&p) && self.node_index(&p).is_none() {
                return Some(p);
            }
        }
        None
    }
}

fn binomial_table(n: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 };
        }
    }
    t
}

pub fn fmt_point(p: &[u64; 3]) -> String {
    format!("({}:{}:{})", p[0], p[1], p[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    /// y^2 z - x^2 (x + z)
    fn nodal_cubic() -> PlaneCurve {
        let f = f();
        let form = Form::from_terms(f, 3, [([0, 2, 1], 1), ([3, 0, 0], f.neg(1)), ([2, 0, 1], f.neg(1))]);
        PlaneCurve::new(f, form, &[[0, 0, 1]]).unwrap()
    }

    #[test]
    fn nodal_cubic_tangents() {
        let c = nodal_cubic();
        assert_eq!(c.genus(), 0);
        // y = ±x
        let t = c.nodes()[0].tangents;
        assert_eq!(t, [[1, 1], [1, f().neg(1)]]);
    }

    #[test]
    fn fermat_quartic() {
        let f = f();
        let form = Form::from_terms(f, 4, [([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], f.neg(1))]);
        let c = PlaneCurve::new(f, form, &[]).unwrap();
        assert_eq!((c.genus(), c.gonality_hint()), (3, 3));
        assert!(c.contains(&[1, 0, 1]));
        assert!(c.is_smooth_point(&[0, 1, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = c.random_point(&mut rng, 100).unwrap();
        assert!(c.is_smooth_point(&p));
        // declaring a smooth point as a node is rejected
        assert!(PlaneCurve::new(f, c.form().clone(), &[[1, 0, 1]]).is_err());
    }

    #[test]
    fn restriction_to_a_line() {
        let c = nodal_cubic();
        // through the node along x = 0: F(0, u, 1) = u^2
        assert_eq!(c.restrict_to_line(&[0, 0, 1], &[0, 1, 0]), vec![0, 0, 1]);
    }

    #[test]
    fn cusp_is_rejected() {
        let f = f();
        let form = Form::from_terms(f, 3, [([0, 2, 1], 1), ([3, 0, 0], f.neg(1))]);
        assert!(PlaneCurve::new(f, form, &[[0, 0, 1]]).is_err());
    }
}
