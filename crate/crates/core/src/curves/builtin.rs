//! Built-in models, generated deterministically from a seed and a prime.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::PrimeField;
use crate::curves::model::{
    fresh_point, random_nodal_curve, sample_pencil_pair, Base, CurveModel, DivisorExpr, Model, Synthetic,
};
use crate::error::{Error, Result};

pub const DEFAULT_PRIMES: [u64; 3] = [1_000_003, 1_000_033, 1_000_037];
pub const DEFAULT_SEED: u64 = 20_240_229;

/// Number of extra marked points `z1, z2, ...` and of point pairs `x_i, y_i`.
pub const EXTRA_POINTS: usize = 3;
pub const POINT_PAIRS: usize = 3;

#[derive(Clone, Copy, Debug)]
pub struct CurveRecipe {
    pub name: &'static str,
    pub summary: &'static str,
    pub degree: usize,
    pub nodes: usize,
    /// The bundle `L = M H - Δ - (e_1 + ... + e_s)`.
    pub bundle_hyperplane: i64,
    pub bundle_points: usize,
}

impl CurveRecipe {
    pub fn genus(&self) -> i64 {
        let e = self.degree as i64;
        (e - 1) * (e - 2) / 2 - self.nodes as i64
    }

    pub fn bundle_degree(&self) -> i64 {
        self.bundle_hyperplane * self.degree as i64 - 2 * self.nodes as i64 - self.bundle_points as i64
    }
}

pub const CURVES: &[CurveRecipe] = &[
    CurveRecipe {
        name: "g2-quartic",
        summary: "genus 2, plane quartic with one node, bundle of degree 4",
        degree: 4,
        nodes: 1,
        bundle_hyperplane: 2,
        bundle_points: 2,
    },
    CurveRecipe {
        name: "g3-quartic",
        summary: "genus 3, smooth plane quartic, bundle of degree 7",
        degree: 4,
        nodes: 0,
        bundle_hyperplane: 3,
        bundle_points: 5,
    },
    CurveRecipe {
        name: "g4-quintic",
        summary: "genus 4, plane quintic with two nodes, bundle of degree 8",
        degree: 5,
        nodes: 2,
        bundle_hyperplane: 4,
        bundle_points: 8,
    },
    CurveRecipe {
        name: "g5-sextic",
        summary: "genus 5, plane sextic with five nodes, bundle of degree 11",
        degree: 6,
        nodes: 5,
        bundle_hyperplane: 5,
        bundle_points: 9,
    },
    CurveRecipe {
        name: "g5-trigonal",
        summary: "genus 5, plane quintic with one node (trigonal), bundle of degree 11",
        degree: 5,
        nodes: 1,
        bundle_hyperplane: 4,
        bundle_points: 7,
    },
    CurveRecipe {
        name: "g7-septic",
        summary: "genus 7, plane septic with eight nodes, bundle of degree 15",
        degree: 7,
        nodes: 8,
        bundle_hyperplane: 6,
        bundle_points: 11,
    },
];

pub const TWISTED_CUBIC: &str = "twisted-cubic";

pub fn builtin_names() -> Vec<&'static str> {
    std::iter::once(TWISTED_CUBIC)
        .chain(CURVES.iter().map(|r| r.name))
        .collect()
}

pub fn recipe(name: &str) -> Option<&'static CurveRecipe> {
    CURVES.iter().find(|r| r.name == name)
}

pub fn pair_divisor_name(i: usize) -> String {
    format!("K+x{i}+y{i}")
}

pub fn builtin(name: &str, prime: u64, seed: u64) -> Result<Model> {
    let field = PrimeField::new(prime)?;
    if name == TWISTED_CUBIC {
        return Ok(Model::Synthetic {
            name: name.to_string(),
            field,
            synthetic: Synthetic::RationalNormalCurve { degree: 3, q_max: 2 },
        });
    }
    let idx = CURVES
        .iter()
        .position(|r| r.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown built-in model {name:?}")))?;
    let r = &CURVES[idx];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((idx as u64 + 1) << 40) ^ prime);
    let curve = random_nodal_curve(field, r.degree, r.nodes, &mut rng)?;
    let mut points = BTreeMap::new();
    let mut taken: Vec<[u64; 3]> = Vec::new();
    let mut bundle = DivisorExpr::new(Base::Canonical, r.bundle_hyperplane - (r.degree as i64 - 3));
    for i in 1..=r.bundle_points {
        let p = fresh_point(&curve, &mut rng, &taken)?;
        taken.push(p);
        points.insert(format!("e{i}"), p);
        bundle = bundle.with(&format!("e{i}"), -1);
    }
    for i in 1..=EXTRA_POINTS {
        let p = fresh_point(&curve, &mut rng, &taken)?;
        taken.push(p);
        points.insert(format!("z{i}"), p);
    }
    let mut divisors = BTreeMap::new();
    divisors.insert("L".to_string(), bundle);
    divisors.insert("K".to_string(), DivisorExpr::new(Base::Canonical, 0));
    for i in 1..=POINT_PAIRS {
        let (x, y) = sample_pencil_pair(&curve, &mut rng, &taken)?;
        taken.extend([x, y]);
        points.insert(format!("x{i}"), x);
        points.insert(format!("y{i}"), y);
        divisors.insert(
            pair_divisor_name(i),
            DivisorExpr::new(Base::Canonical, 0)
                .with(&format!("x{i}"), 1)
                .with(&format!("y{i}"), 1),
        );
    }
    let model = CurveModel {
        name: name.to_string(),
        curve,
        points,
        divisors,
    };
    model.validate()?;
    Ok(Model::Curve(model))
}
