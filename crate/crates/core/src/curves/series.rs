//! Truncated power series in one variable `t` and Newton lifting of simple roots.

use crate::algebra::PrimeField;
use crate::error::{Error, Result};

pub type Series = Vec<u64>;

/// `a * b mod t^n`.
pub fn mul(f: PrimeField, a: &[u64], b: &[u64], n: usize) -> Series {
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// `1 / a mod t^n`, for `a(0) != 0`.
pub fn inv(f: PrimeField, a: &[u64], n: usize) -> Option<Series> {
    let a0 = f.inv(*a.first()?)?;
    let mut out = vec![0u64; n];
    if n == 0 {
        return Some(out);
    }
    out[0] = a0;
    for k in 1..n {
        let mut s = 0;
        for j in 1..=k.min(a.len() - 1) {
            s = f.add(s, f.mul(a[j], out[k - j]));
        }
        out[k] = f.neg(f.mul(s, a0));
    }
    Some(out)
}

/// Order of vanishing, `None` if zero to the available precision.
pub fn order(a: &[u64]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

/// `H(t, Y) = Σ h[i][j] t^i Y^j`.
#[derive(Clone, Debug)]
pub struct Bivariate {
    pub coeffs: Vec<Vec<u64>>,
}

impl Bivariate {
    fn y_degree(&self) -> usize {
        self.coeffs.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Coefficient of `Y^j` as a polynomial in t.
    fn y_coeff(&self, j: usize, n: usize) -> Series {
        let mut out = vec![0u64; n];
        for (i, row) in self.coeffs.iter().enumerate().take(n) {
            if let Some(&c) = row.get(j) {
                out[i] = c;
            }
        }
        out
    }

    /// `(H(t, y), ∂H/∂Y(t, y)) mod t^n`, both by Horner's rule in Y.
    fn eval_with_derivative(&self, f: PrimeField, y: &[u64], n: usize) -> (Series, Series) {
        let deg = self.y_degree();
        let mut val = vec![0u64; n];
        let mut der = vec![0u64; n];
        for j in (0..deg).rev() {
            let c = self.y_coeff(j, n);
            if j >= 1 {
                der = mul(f, &der, y, n);
                let jj = f.reduce(j as u64);
                for (d, &ci) in der.iter_mut().zip(&c) {
                    *d = f.add(*d, f.mul(ci, jj));
                }
            }
            val = mul(f, &val, y, n);
            for (v, &ci) in val.iter_mut().zip(&c) {
                *v = f.add(*v, ci);
            }
        }
        (val, der)
    }

    pub fn eval(&self, f: PrimeField, y: &[u64], n: usize) -> Series {
        self.eval_with_derivative(f, y, n).0
    }

    /// The unique series `Y` with `Y(0) = y0` and `H(t, Y) ≡ 0 mod t^n`, when
    /// `y0` is a simple root of `H(0, ·)`.
    pub fn newton_root(&self, f: PrimeField, y0: u64, n: usize) -> Result<Series> {
        if n == 0 {
            return Err(Error::Geometry("precision must be at least 1".into()));
        }
        let mut y = vec![y0];
        let mut prec = 1;
        let check = self.eval(f, &y, 1);
        if check[0] != 0 {
            return Err(Error::Geometry("initial value is not a root".into()));
        }
        while prec < n {
            prec = (2 * prec).min(n);
            y.resize(prec, 0);
            let (h, dh) = self.eval_with_derivative(f, &y, prec);
            let dinv = inv(f, &dh, prec)
                .ok_or_else(|| Error::Geometry("root is not simple".into()))?;
            let step = mul(f, &h, &dinv, prec);
            for (a, b) in y.iter_mut().zip(&step) {
                *a = f.sub(*a, *b);
            }
        }
        debug_assert!(self.eval(f, &y, n).iter().all(|&c| c == 0));
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let f = f();
        let a = vec![1, f.neg(1)];
        assert_eq!(inv(f, &a, 5).unwrap(), vec![1; 5]);
    }

    #[test]
    fn square_root_of_one_plus_t() {
        // Y^2 - (1 + t) = 0, Y(0) = 1: 1 + t/2 - t^2/8 + t^3/16
        let f = f();
        let h = Bivariate {
            coeffs: vec![vec![f.neg(1), 0, 1], vec![f.neg(1)]],
        };
        let y = h.newton_root(f, 1, 4).unwrap();
        let q = |a: u64, b: u64| f.mul(a, f.inv(b).unwrap());
        assert_eq!(y, vec![1, q(1, 2), f.neg(q(1, 8)), q(1, 16)]);
        assert!(h.newton_root(f, 0, 4).is_err());
    }
}
