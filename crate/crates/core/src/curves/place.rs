//! Places of a nodal plane curve and valuations of forms along them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curves::curve::{fmt_point, PlaneCurve};
use crate::curves::forms::{monomial_table, normalize_point, Form};
use crate::curves::series::{self, Bivariate, Series};
use crate::error::{Error, Result};

/// A point of the normalization: a smooth rational point, or one of the two
/// branches through a node (branch 0 or 1, in the order of the node's tangents).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PlaceKey {
    Point([u64; 3]),
    Branch { node: [u64; 3], branch: u8 },
}

impl PlaceKey {
    pub fn point(&self) -> [u64; 3] {
        match *self {
            PlaceKey::Point(p) => p,
            PlaceKey::Branch { node, .. } => node,
        }
    }
}

impl fmt::Display for PlaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceKey::Point(p) => write!(f, "{}", fmt_point(p)),
            PlaceKey::Branch { node, branch } => write!(f, "{}#{}", fmt_point(node), branch + 1),
        }
    }
}

/// How the local parameter enters the chart coordinates `(s, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// s = t, w = Y
    SmoothS,
    /// w = t, s = Y
    SmoothW,
    /// s = t, w = t Y
    NodeS,
    /// w = t, s = t Y
    NodeW,
}

/// A branch parametrization `t -> (X(t) : Y(t) : Z(t))` correct modulo `t^N`.
#[derive(Clone, Debug)]
pub struct Place {
    pub key: PlaceKey,
    pub precision: usize,
    pub series: [Series; 3],
}

impl Place {
    /// `F(series) mod t^N`, which must vanish.
    pub fn residual(&self, curve: &PlaneCurve) -> Series {
        eval_form(curve, curve.form(), &self.series, self.precision)
    }
}

/// Normalizes the key against the curve: smooth points must be smooth and off
/// the nodes, branch keys must name a declared node.
pub fn canonical_key(curve: &PlaneCurve, key: &PlaceKey) -> Result<PlaceKey> {
    let f = curve.field();
    match *key {
        PlaceKey::Point(p) => {
            let p = normalize_point(f, &p).ok_or_else(|| Error::Geometry("zero vector".into()))?;
            if !curve.contains(&p) {
                return Err(Error::Geometry(format!("point off curve: {}", fmt_point(&p))));
            }
            if !curve.is_smooth_point(&p) {
                return Err(Error::Geometry(format!(
                    "point {} is singular; name one of its branches instead",
                    fmt_point(&p)
                )));
            }
            Ok(PlaceKey::Point(p))
        }
        PlaceKey::Branch { node, branch } => {
            let node = normalize_point(f, &node).ok_or_else(|| Error::Geometry("zero vector".into()))?;
            if curve.node_index(&node).is_none() {
                return Err(Error::Geometry(format!("{} is not a declared node", fmt_point(&node))));
            }
            if branch > 1 {
                return Err(Error::Geometry(format!("node branch {} out of range", branch + 1)));
            }
            Ok(PlaceKey::Branch { node, branch })
        }
    }
}

/// Newton expansion of the branch named by `key` to precision `n`.
pub fn expand_branch(curve: &PlaneCurve, key: &PlaceKey, n: usize) -> Result<Place> {
    if n == 0 {
        return Err(Error::Geometry("precision request below 1".into()));
    }
    let key = canonical_key(curve, key)?;
    let f = curve.field();
    let lc = curve.local_chart(&key.point())?;
    let e = curve.degree();
    let (mode, y0) = match key {
        PlaceKey::Point(_) => {
            if lc.coeff(0, 1) != 0 {
                (Mode::SmoothS, 0)
            } else {
                (Mode::SmoothW, 0)
            }
        }
        PlaceKey::Branch { node, branch } => {
            let idx = curve.node_index(&node).unwrap();
            let [alpha, beta] = curve.nodes()[idx].tangents[branch as usize];
            if alpha != 0 {
                (Mode::NodeS, f.mul(beta, f.inv(alpha).unwrap()))
            } else {
                (Mode::NodeW, 0)
            }
        }
    };
    let mut h = vec![vec![0u64; e + 1]; e + 1];
    for a in 0..=e {
        for b in 0..=e - a {
            let c = lc.coeff(a, b);
            if c == 0 {
                continue;
            }
            let (i, j) = match mode {
                Mode::SmoothS => (a, b),
                Mode::SmoothW => (b, a),
                Mode::NodeS => (a + b - 2, b),
                Mode::NodeW => (a + b - 2, a),
            };
            h[i][j] = c;
        }
    }
    let y = Bivariate { coeffs: h }.newton_root(f, y0, n)?;
    let mut t = vec![0u64; n];
    if n > 1 {
        t[1] = 1;
    }
    let ty = {
        let mut v = vec![0u64; n];
        v[1..].copy_from_slice(&y[..n - 1]);
        v
    };
    let (s, w) = match mode {
        Mode::SmoothS => (t, y),
        Mode::SmoothW => (y, t),
        Mode::NodeS => (t, ty),
        Mode::NodeW => (ty, t),
    };
    let mut coords: [Series; 3] = [vec![0; n], vec![0; n], vec![0; n]];
    coords[lc.chart][0] = 1;
    for (slot, delta) in [(lc.others[0], s), (lc.others[1], w)] {
        let mut v = delta;
        v[0] = f.add(v[0], lc.point[slot]);
        coords[slot] = v;
    }
    let place = Place {
        key,
        precision: n,
        series: coords,
    };
    if place.residual(curve).iter().any(|&c| c != 0) {
        return Err(Error::Geometry(format!("branch expansion at {key} failed to converge")));
    }
    Ok(place)
}

/// Series of every monomial of degree `d` along the place, modulo `t^m`.
pub fn monomial_series(curve: &PlaneCurve, place: &Place, d: usize, m: usize) -> Vec<Series> {
    let f = curve.field();
    let m = m.min(place.precision);
    let base = [
        place.series[0][..m].to_vec(),
        place.series[1][..m].to_vec(),
        place.series[2][..m].to_vec(),
    ];
    let mut one = vec![0u64; m];
    if m > 0 {
        one[0] = 1;
    }
    monomial_table(d, &base, one, |a, b| series::mul(f, a, b, m))
}

fn eval_form(curve: &PlaneCurve, g: &Form, coords: &[Series; 3], n: usize) -> Series {
    let f = curve.field();
    let mut one = vec![0u64; n];
    one[0] = 1;
    let table = monomial_table(g.degree, coords, one, |a, b| series::mul(f, a, b, n));
    let mut out = vec![0u64; n];
    for (m, &c) in table.iter().zip(&g.coeffs) {
        if c == 0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(m) {
            *o = f.add(*o, f.mul(c, v));
        }
    }
    out
}

/// Order of `G` along the place. When the order reaches the precision the
/// branch is re-expanded at twice the precision, up to the curve's cap.
pub fn form_valuation(curve: &PlaneCurve, g: &Form, place: &Place) -> Result<usize> {
    if g.is_zero() {
        return Err(Error::PrecisionCap(place.precision));
    }
    let mut n = place.precision;
    let mut current = place.clone();
    loop {
        let val = eval_form(curve, g, &current.series, n);
        if let Some(o) = series::order(&val) {
            return Ok(o);
        }
        if n >= curve.precision_cap() {
            return Err(Error::PrecisionCap(curve.precision_cap()));
        }
        n = (2 * n).min(curve.precision_cap());
        current = expand_branch(curve, &current.key, n)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn f() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    fn nodal_cubic() -> PlaneCurve {
        let f = f();
        let form = Form::from_terms(f, 3, [([0, 2, 1], 1), ([3, 0, 0], f.neg(1)), ([2, 0, 1], f.neg(1))]);
        PlaneCurve::new(f, form, &[[0, 0, 1]]).unwrap()
    }

    #[test]
    fn parabola() {
        // y z - x^2 at (0:0:1): x = t, y = t^2
        let f = f();
        let form = Form::from_terms(f, 2, [([0, 1, 1], 1), ([2, 0, 0], f.neg(1))]);
        let c = PlaneCurve::new(f, form, &[]).unwrap();
        let p = expand_branch(&c, &PlaceKey::Point([0, 0, 1]), 6).unwrap();
        assert_eq!(p.series[0], vec![0, 1, 0, 0, 0, 0]);
        assert_eq!(p.series[1], vec![0, 0, 1, 0, 0, 0]);
        assert_eq!(p.series[2], vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn nodal_cubic_branches() {
        // y = ±t sqrt(1 + t) = ±(t + t^2/2 - t^3/8 + ...)
        let f = f();
        let c = nodal_cubic();
        let half = f.inv(2).unwrap();
        let eighth = f.inv(8).unwrap();
        let node = [0, 0, 1];
        let b0 = expand_branch(&c, &PlaceKey::Branch { node, branch: 0 }, 4).unwrap();
        assert_eq!(b0.series[0], vec![0, 1, 0, 0]);
        assert_eq!(b0.series[1], vec![0, 1, half, f.neg(eighth)]);
        let b1 = expand_branch(&c, &PlaceKey::Branch { node, branch: 1 }, 4).unwrap();
        assert_eq!(b1.series[1], vec![0, f.neg(1), f.neg(half), eighth]);
    }

    #[test]
    fn valuations_at_the_node() {
        let f = f();
        let c = nodal_cubic();
        let node = [0, 0, 1];
        let b0 = expand_branch(&c, &PlaceKey::Branch { node, branch: 0 }, 8).unwrap();
        let b1 = expand_branch(&c, &PlaceKey::Branch { node, branch: 1 }, 8).unwrap();
        // y - x is the tangent of branch 0
        let tangent = Form::from_terms(f, 1, [([0, 1, 0], 1), ([1, 0, 0], f.neg(1))]);
        assert_eq!(form_valuation(&c, &tangent, &b0).unwrap(), 2);
        assert_eq!(form_valuation(&c, &tangent, &b1).unwrap(), 1);
        let z = Form::from_terms(f, 1, [([0, 0, 1], 1)]);
        assert_eq!(form_valuation(&c, &z, &b0).unwrap(), 0);
    }

    #[test]
    fn smooth_tangent_and_precision_growth() {
        let c = nodal_cubic();
        // x = 3, y^2 = 36 at z = 1
        let p = [3, 6, 1];
        assert!(c.is_smooth_point(&p));
        let place = expand_branch(&c, &PlaceKey::Point(p), 2).unwrap();
        let g = c.gradient(&p);
        let tangent = Form { degree: 1, coeffs: g.to_vec() };
        assert!(form_valuation(&c, &tangent, &place).unwrap() >= 2);
        // F itself vanishes identically: the cap is reached
        let small = c.clone().with_precision_cap(16);
        assert!(matches!(
            form_valuation(&small, small.form(), &place),
            Err(Error::PrecisionCap(16))
        ));
        assert!(expand_branch(&c, &PlaceKey::Point(p), 0).is_err());
        assert!(expand_branch(&c, &PlaceKey::Point([1, 1, 1]), 4).is_err());
    }
}
