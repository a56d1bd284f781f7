//! Divisors `m H + Σ n_P P` on the normalization of a nodal plane curve.

use std::collections::BTreeMap;
use std::fmt;

use crate::curves::curve::PlaneCurve;
use crate::curves::place::{canonical_key, PlaceKey};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    pub hyperplane: i64,
    places: BTreeMap<PlaceKey, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn hyperplane(m: i64) -> Self {
        Divisor {
            hyperplane: m,
            places: BTreeMap::new(),
        }
    }

    pub fn place(key: PlaceKey, n: i64) -> Self {
        let mut d = Self::zero();
        d.add_place(key, n);
        d
    }

    /// Sum of all node branches with coefficient 1.
    pub fn adjoint(curve: &PlaneCurve) -> Self {
        let mut d = Self::zero();
        for node in curve.nodes() {
            for branch in 0..2 {
                d.add_place(PlaceKey::Branch { node: node.point, branch }, 1);
            }
        }
        d
    }

    /// `(e - 3) H - Δ`.
    pub fn canonical(curve: &PlaneCurve) -> Self {
        let mut d = Self::hyperplane(curve.degree() as i64 - 3);
        d -= &Self::adjoint(curve);
        d
    }

    pub fn add_place(&mut self, key: PlaceKey, n: i64) {
        let e = self.places.entry(key).or_insert(0);
        *e += n;
        if *e == 0 {
            self.places.remove(&key);
        }
    }

    pub fn places(&self) -> impl Iterator<Item = (&PlaceKey, i64)> {
        self.places.iter().map(|(k, &v)| (k, v))
    }

    pub fn coefficient(&self, key: &PlaceKey) -> i64 {
        self.places.get(key).copied().unwrap_or(0)
    }

    pub fn num_places(&self) -> usize {
        self.places.len()
    }

    pub fn degree(&self, curve: &PlaneCurve) -> i64 {
        self.hyperplane * curve.degree() as i64 + self.places.values().sum::<i64>()
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut d = Self::hyperplane(self.hyperplane * k);
        for (key, n) in self.places() {
            d.add_place(*key, n * k);
        }
        d
    }

    /// Whether every place coefficient is `<= 0`.
    pub fn places_nonpositive(&self) -> bool {
        self.places.values().all(|&n| n <= 0)
    }

    /// Rewrites every key in the curve's canonical form, validating it.
    pub fn canonicalized(&self, curve: &PlaneCurve) -> Result<Self> {
        let mut d = Self::hyperplane(self.hyperplane);
        for (key, n) in self.places() {
            d.add_place(canonical_key(curve, key)?, n);
        }
        Ok(d)
    }
}

impl std::ops::AddAssign<&Divisor> for Divisor {
    fn add_assign(&mut self, rhs: &Divisor) {
        self.hyperplane += rhs.hyperplane;
        for (key, n) in rhs.places() {
            self.add_place(*key, n);
        }
    }
}

impl std::ops::SubAssign<&Divisor> for Divisor {
    fn sub_assign(&mut self, rhs: &Divisor) {
        self.hyperplane -= rhs.hyperplane;
        for (key, n) in rhs.places() {
            self.add_place(*key, -n);
        }
    }
}

impl std::ops::Add<&Divisor> for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut d = self.clone();
        d += rhs;
        d
    }
}

impl std::ops::Sub<&Divisor> for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        let mut d = self.clone();
        d -= rhs;
        d
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}H", self.hyperplane)?;
        for (key, n) in self.places() {
            if n < 0 {
                write!(f, " - {}{key}", if n == -1 { String::new() } else { format!("{}", -n) })?;
            } else {
                write!(f, " + {}{key}", if n == 1 { String::new() } else { format!("{n}") })?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::curves::forms::Form;

    #[test]
    fn canonical_degree() {
        let f = PrimeField::new(1_000_003).unwrap();
        let form = Form::from_terms(f, 3, [([0, 2, 1], 1), ([3, 0, 0], f.neg(1)), ([2, 0, 1], f.neg(1))]);
        let c = PlaneCurve::new(f, form, &[[0, 0, 1]]).unwrap();
        let k = Divisor::canonical(&c);
        assert_eq!(k.degree(&c), 2 * c.genus() - 2);
        let p = Divisor::place(PlaceKey::Point([3, 6, 1]), 2);
        let d = &k + &p;
        assert_eq!(d.degree(&c), 0);
        assert_eq!((&d - &p), k);
        assert_eq!(d.scaled(2).degree(&c), 0);
        assert!(!d.places_nonpositive());
        assert_eq!(k.to_string(), "0H - (0:0:1)#1 - (0:0:1)#2");
    }
}
