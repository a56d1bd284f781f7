//! Explicit curve models: a curve, named marked points and named divisors,
//! plus the random constructions used to produce them.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{dense_kernel, PrimeField};
use crate::curves::curve::{fmt_point, PlaneCurve};
use crate::curves::divisor::Divisor;
use crate::curves::forms::{monomials, normalize_point, Form};
use crate::curves::place::PlaceKey;
use crate::curves::rr::{riemann_roch_space, split_residual};
use crate::error::{Error, Result};
use crate::koszul::GradedModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Canonical,
    None,
}

/// `base + hyperplane · H + Σ coeff · point`, with points referred to by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorExpr {
    pub base: Base,
    pub hyperplane: i64,
    #[serde(default)]
    pub places: BTreeMap<String, i64>,
}

impl DivisorExpr {
    pub fn new(base: Base, hyperplane: i64) -> Self {
        DivisorExpr {
            base,
            hyperplane,
            places: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, coeff: i64) -> Self {
        *self.places.entry(name.to_string()).or_insert(0) += coeff;
        self
    }
}

#[derive(Clone, Debug)]
pub struct CurveModel {
    pub name: String,
    pub curve: PlaneCurve,
    pub points: BTreeMap<String, [u64; 3]>,
    pub divisors: BTreeMap<String, DivisorExpr>,
}

impl CurveModel {
    pub fn field(&self) -> PrimeField {
        self.curve.field()
    }

    pub fn point(&self, name: &str) -> Result<[u64; 3]> {
        self.points
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown point {name:?}")))
    }

    pub fn resolve(&self, expr: &DivisorExpr) -> Result<Divisor> {
        let mut d = match expr.base {
            Base::Canonical => Divisor::canonical(&self.curve),
            Base::None => Divisor::zero(),
        };
        d.hyperplane += expr.hyperplane;
        for (name, &n) in &expr.places {
            d.add_place(PlaceKey::Point(self.point(name)?), n);
        }
        d.canonicalized(&self.curve)
    }

    pub fn divisor(&self, name: &str) -> Result<Divisor> {
        let expr = self
            .divisors
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown divisor {name:?}")))?;
        self.resolve(expr)
    }

    /// Marked points lie on the curve, are smooth, off the nodes and pairwise distinct.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let mut seen: BTreeMap<[u64; 3], &str> = BTreeMap::new();
        for (name, p) in &self.points {
            let q = normalize_point(f, p)
                .ok_or_else(|| Error::Geometry(format!("point {name} is the zero vector")))?;
            if !self.curve.contains(&q) {
                return Err(Error::Geometry(format!("point off curve: {name} = {}", fmt_point(&q))));
            }
            if !self.curve.is_smooth_point(&q) || self.curve.node_index(&q).is_some() {
                return Err(Error::Geometry(format!("point {name} = {} is singular", fmt_point(&q))));
            }
            if let Some(other) = seen.insert(q, name) {
                return Err(Error::Geometry(format!("points {other} and {name} coincide")));
            }
        }
        for name in self.divisors.keys() {
            self.divisor(name)?;
        }
        Ok(())
    }
}

/// A model given directly as a graded module rather than by a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Synthetic {
    /// Coordinate ring of the rational normal curve of the given degree.
    RationalNormalCurve { degree: usize, q_max: usize },
}

impl Synthetic {
    pub fn module(&self, field: PrimeField) -> GradedModule {
        match *self {
            Synthetic::RationalNormalCurve { degree, q_max } => {
                GradedModule::rational_normal_curve(field, degree, q_max)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Model {
    Curve(CurveModel),
    Synthetic {
        name: String,
        field: PrimeField,
        synthetic: Synthetic,
    },
}

impl Model {
    pub fn name(&self) -> &str {
        match self {
            Model::Curve(m) => &m.name,
            Model::Synthetic { name, .. } => name,
        }
    }

    pub fn field(&self) -> PrimeField {
        match self {
            Model::Curve(m) => m.field(),
            Model::Synthetic { field, .. } => *field,
        }
    }

    pub fn as_curve(&self) -> Option<&CurveModel> {
        match self {
            Model::Curve(m) => Some(m),
            Model::Synthetic { .. } => None,
        }
    }

    /// Caps the power-series precision used for valuations on the curve.
    pub fn with_precision_cap(self, cap: usize) -> Self {
        match self {
            Model::Curve(mut m) => {
                m.curve = m.curve.with_precision_cap(cap);
                Model::Curve(m)
            }
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Model::Curve(m) => m.validate(),
            Model::Synthetic { .. } => Ok(()),
        }
    }
}

fn random_affine_point<R: Rng>(f: PrimeField, rng: &mut R) -> [u64; 3] {
    [rng.gen_range(0..f.modulus()), rng.gen_range(0..f.modulus()), 1]
}

/// A random degree-`e` curve with `delta` ordinary nodes at random points, all
/// with tangents over the field. Resampled until the canonical series has the
/// expected dimension, which rules out extra singularities and reducible
/// members in practice.
pub fn random_nodal_curve<R: Rng>(f: PrimeField, e: usize, delta: usize, rng: &mut R) -> Result<PlaneCurve> {
    let mons = monomials(e);
    for _ in 0..50 {
        let mut nodes: Vec<[u64; 3]> = Vec::with_capacity(delta);
        while nodes.len() < delta {
            let p = random_affine_point(f, rng);
            if !nodes.contains(&p) {
                nodes.push(p);
            }
        }
        // F and its partials vanish at every node (Euler's relation makes F(N) = 0 redundant)
        let mut rows = Vec::with_capacity(3 * delta);
        for n in &nodes {
            for v in 0..3 {
                rows.push(
                    mons.iter()
                        .map(|m| {
                            if m[v] == 0 {
                                return 0;
                            }
                            let mut c = f.reduce(m[v] as u64);
                            for (w, &k) in m.iter().enumerate() {
                                let k = if w == v { k - 1 } else { k };
                                c = f.mul(c, f.pow(n[w], k as u64));
                            }
                            c
                        })
                        .collect(),
                );
            }
        }
        let kernel = dense_kernel(f, rows, mons.len());
        if kernel.is_empty() {
            continue;
        }
        // tangents are rational with probability 1/2 per node: retry combinations
        for _ in 0..256 {
            let mut coeffs = vec![0u64; mons.len()];
            for v in &kernel {
                let c = rng.gen_range(0..f.modulus());
                for (a, &b) in coeffs.iter_mut().zip(v) {
                    *a = f.add(*a, f.mul(c, b));
                }
            }
            let form = Form { degree: e, coeffs };
            if form.is_zero() {
                continue;
            }
            let Ok(curve) = PlaneCurve::new(f, form, &nodes) else {
                continue;
            };
            if curve.genus() >= 1 {
                match riemann_roch_space(&curve, &Divisor::canonical(&curve)) {
                    Ok(k) if k.h0 as i64 == curve.genus() => {}
                    _ => continue,
                }
            }
            return Ok(curve);
        }
    }
    Err(Error::Sampling(format!(
        "no admissible {delta}-nodal curve of degree {e} over F_{}",
        f.modulus()
    )))
}

/// A random smooth point distinct from `avoid`.
pub fn fresh_point<R: Rng>(curve: &PlaneCurve, rng: &mut R, avoid: &[[u64; 3]]) -> Result<[u64; 3]> {
    for _ in 0..1000 {
        if let Some(p) = curve.random_point(rng, 100) {
            if !avoid.contains(&p) {
                return Ok(p);
            }
        }
    }
    Err(Error::Sampling("no rational point found".into()))
}

/// Two points `x, y` lying on a common line whose remaining intersection with
/// the curve splits into distinct rational smooth points. `x` is random; the
/// line is a random member of the pencil through `x`, resampled until it
/// splits, and `y` is one of its residual points.
pub fn sample_pencil_pair<R: Rng>(
    curve: &PlaneCurve,
    rng: &mut R,
    avoid: &[[u64; 3]],
) -> Result<([u64; 3], [u64; 3])> {
    let f = curve.field();
    for _ in 0..20 {
        let x = fresh_point(curve, rng, avoid)?;
        let mut occupied = avoid.to_vec();
        occupied.push(x);
        for _ in 0..20_000 {
            let q = [rng.gen_range(0..f.modulus()), rng.gen_range(0..f.modulus()), rng.gen_range(0..f.modulus())];
            if curve.form().eval(f, &q) == 0 {
                continue;
            }
            let poly = curve.restrict_to_line(&x, &q);
            if poly.len() != curve.degree() + 1 || poly[0] != 0 || poly[1] == 0 {
                continue;
            }
            if let Some(pts) = split_residual(curve, &x, &q, &poly[1..], &occupied) {
                let y = pts[rng.gen_range(0..pts.len())];
                return Ok((x, y));
            }
        }
    }
    Err(Error::Sampling("no split line found in the pencils tried".into()))
}
