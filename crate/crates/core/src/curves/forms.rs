//! Homogeneous forms in x, y, z as dense coefficient vectors.
//!
//! Monomials of degree d are indexed in descending graded reverse
//! lexicographic order with x > y > z: `x^i y^j z^k` sits at
//! `k(d+1) - k(k-1)/2 + j`, so index 0 is `x^d`.

use crate::algebra::PrimeField;

pub type Exps = [usize; 3];

pub fn num_monomials(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

pub fn monomial_index(d: usize, e: Exps) -> usize {
    debug_assert_eq!(e[0] + e[1] + e[2], d);
    let (j, k) = (e[1], e[2]);
    k * (d + 1) - k * k.saturating_sub(1) / 2 + j
}

/// Exponent vectors of degree `d` in index order.
pub fn monomials(d: usize) -> Vec<Exps> {
    let mut out = Vec::with_capacity(num_monomials(d));
    for k in 0..=d {
        for j in 0..=d - k {
            out.push([d - j - k, j, k]);
        }
    }
    out
}

/// Values of every monomial of degree `d` at `base = (x, y, z)`, in index
/// order, for any commutative multiplication (field elements, truncated
/// series, polynomials modulo something).
pub fn monomial_table<T: Clone>(d: usize, base: &[T; 3], one: T, mul: impl Fn(&T, &T) -> T) -> Vec<T> {
    let powers: Vec<Vec<T>> = base
        .iter()
        .map(|b| {
            let mut p = vec![one.clone()];
            for i in 1..=d {
                let next = mul(&p[i - 1], b);
                p.push(next);
            }
            p
        })
        .collect();
    monomials(d)
        .into_iter()
        .map(|[i, j, k]| {
            let xy = mul(&powers[0][i], &powers[1][j]);
            mul(&xy, &powers[2][k])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub degree: usize,
    pub coeffs: Vec<u64>,
}

impl Form {
    pub fn zero(degree: usize) -> Self {
        Form {
            degree,
            coeffs: vec![0; num_monomials(degree)],
        }
    }

    pub fn from_terms(f: PrimeField, degree: usize, terms: impl IntoIterator<Item = (Exps, u64)>) -> Self {
        let mut g = Self::zero(degree);
        for (e, c) in terms {
            let i = monomial_index(degree, e);
            g.coeffs[i] = f.add(g.coeffs[i], c);
        }
        g
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exps, u64)> + '_ {
        monomials(self.degree)
            .into_iter()
            .zip(self.coeffs.iter().copied())
            .filter(|&(_, c)| c != 0)
    }

    /// Index of the leading monomial, if nonzero.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn eval(&self, f: PrimeField, p: &[u64; 3]) -> u64 {
        let table = monomial_table(self.degree, p, 1u64, |a, b| f.mul(*a, *b));
        self.coeffs
            .iter()
            .zip(&table)
            .fold(0, |acc, (&c, &m)| f.add(acc, f.mul(c, m)))
    }

    pub fn mul(&self, f: PrimeField, other: &Form) -> Form {
        let d = self.degree + other.degree;
        let mut out = Form::zero(d);
        let rhs: Vec<(Exps, u64)> = other.terms().collect();
        for (a, ca) in self.terms() {
            for &(b, cb) in &rhs {
                let i = monomial_index(d, [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
                out.coeffs[i] = f.add(out.coeffs[i], f.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, f: PrimeField, c: u64) -> Form {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Partial derivative in variable `v` (0, 1, 2 for x, y, z).
    pub fn partial(&self, f: PrimeField, v: usize) -> Form {
        if self.degree == 0 {
            return Form::zero(0);
        }
        let d = self.degree - 1;
        let mut out = Form::zero(d);
        for (mut e, c) in self.terms() {
            if e[v] == 0 {
                continue;
            }
            let c = f.mul(c, f.reduce(e[v] as u64));
            e[v] -= 1;
            let i = monomial_index(d, e);
            out.coeffs[i] = f.add(out.coeffs[i], c);
        }
        out
    }

    /// The line through two points, as the linear form `det(p, q, ·)`.
    pub fn line_through(f: PrimeField, p: &[u64; 3], q: &[u64; 3]) -> Form {
        let c = cross(f, p, q);
        Form {
            degree: 1,
            coeffs: c.to_vec(),
        }
    }
}

pub fn cross(f: PrimeField, a: &[u64; 3], b: &[u64; 3]) -> [u64; 3] {
    let m = |x: u64, y: u64| f.mul(x, y);
    [
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

pub fn dot(f: PrimeField, a: &[u64; 3], b: &[u64; 3]) -> u64 {
    (0..3).fold(0, |acc, i| f.add(acc, f.mul(a[i], b[i])))
}

/// Scales a nonzero projective point so that its last nonzero coordinate is 1.
pub fn normalize_point(f: PrimeField, p: &[u64; 3]) -> Option<[u64; 3]> {
    let c = (0..3).rev().find(|&i| p[i] != 0)?;
    let inv = f.inv(p[c]).unwrap();
    Some([f.mul(p[0], inv), f.mul(p[1], inv), f.mul(p[2], inv)])
}

/// Reduction of forms modulo a fixed nonzero form `F`: every monomial divisible
/// by the leading monomial of `F` is eliminated. The result depends only on the
/// class of the input modulo `F`.
#[derive(Clone, Debug)]
pub struct Reducer {
    field: PrimeField,
    modulus: Form,
    lead: Exps,
    lead_inv: u64,
}

impl Reducer {
    pub fn new(field: PrimeField, modulus: Form) -> Option<Self> {
        let li = modulus.leading_index()?;
        let lead = monomials(modulus.degree)[li];
        let lead_inv = field.inv(modulus.coeffs[li]).unwrap();
        Some(Reducer {
            field,
            modulus,
            lead,
            lead_inv,
        })
    }

    fn divisible(&self, e: &Exps) -> bool {
        (0..3).all(|i| e[i] >= self.lead[i])
    }

    /// Whether each monomial of degree `d` is standard (not divisible by the leading monomial).
    pub fn standard_mask(&self, d: usize) -> Vec<bool> {
        monomials(d).iter().map(|e| !self.divisible(e)).collect()
    }

    pub fn standard_count(&self, d: usize) -> usize {
        self.standard_mask(d).iter().filter(|&&s| s).count()
    }

    pub fn reduce(&self, g: &Form) -> Form {
        let f = self.field;
        let d = g.degree;
        if d < self.modulus.degree {
            return g.clone();
        }
        let mons = monomials(d);
        let fterms: Vec<(Exps, u64)> = self.modulus.terms().collect();
        let mut c = g.coeffs.clone();
        // in this order, each step only touches later indices
        for idx in 0..c.len() {
            if c[idx] == 0 || !self.divisible(&mons[idx]) {
                continue;
            }
            let e = mons[idx];
            let q = [e[0] - self.lead[0], e[1] - self.lead[1], e[2] - self.lead[2]];
            let s = f.mul(c[idx], self.lead_inv);
            for &(t, ct) in &fterms {
                let i = monomial_index(d, [t[0] + q[0], t[1] + q[1], t[2] + q[2]]);
                c[i] = f.sub(c[i], f.mul(s, ct));
            }
            debug_assert_eq!(c[idx], 0);
        }
        Form { degree: d, coeffs: c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn indexing_matches_enumeration() {
        for d in 0..8 {
            let m = monomials(d);
            assert_eq!(m.len(), num_monomials(d));
            for (i, e) in m.iter().enumerate() {
                assert_eq!(monomial_index(d, *e), i);
            }
        }
        assert_eq!(monomials(2)[0], [2, 0, 0]);
        assert_eq!(monomials(2)[5], [0, 0, 2]);
    }

    #[test]
    fn product_evaluates_as_product() {
        let f = f();
        let a = Form::from_terms(f, 2, [([2, 0, 0], 3), ([0, 1, 1], 5), ([0, 0, 2], 7)]);
        let b = Form::from_terms(f, 1, [([1, 0, 0], 2), ([0, 1, 0], f.neg(1))]);
        let p = [11, 13, 17];
        assert_eq!(a.mul(f, &b).eval(f, &p), f.mul(a.eval(f, &p), b.eval(f, &p)));
    }

    #[test]
    fn reduction_is_well_defined_modulo_f() {
        let f = f();
        let big = Form::from_terms(f, 3, [([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1), ([1, 1, 1], 4)]);
        let r = Reducer::new(f, big.clone()).unwrap();
        let g = Form::from_terms(f, 5, [([4, 1, 0], 2), ([1, 2, 2], 9), ([5, 0, 0], 1)]);
        let h = Form::from_terms(f, 2, [([1, 1, 0], 3), ([0, 0, 2], 8)]);
        let shifted = {
            let mut c = g.coeffs.clone();
            for (x, y) in c.iter_mut().zip(&big.mul(f, &h).coeffs) {
                *x = f.add(*x, *y);
            }
            Form { degree: 5, coeffs: c }
        };
        let a = r.reduce(&g);
        assert_eq!(a, r.reduce(&shifted));
        let mask = r.standard_mask(5);
        assert!(a.coeffs.iter().zip(&mask).all(|(&c, &s)| s || c == 0));
        assert_eq!(r.standard_count(5), num_monomials(5) - num_monomials(2));
    }

    #[test]
    fn partials_satisfy_euler() {
        let f = f();
        let g = Form::from_terms(f, 3, [([2, 1, 0], 4), ([0, 1, 2], 6), ([1, 1, 1], 1)]);
        let p = [3, 5, 7];
        let lhs = (0..3).fold(0, |acc, v| f.add(acc, f.mul(p[v], g.partial(f, v).eval(f, &p))));
        assert_eq!(lhs, f.mul(3, g.eval(f, &p)));
    }
}
