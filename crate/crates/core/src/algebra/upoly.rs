//! Dense univariate polynomials over a prime field (coefficients low to high).

use crate::algebra::field::PrimeField;

pub type UPoly = Vec<u64>;

pub fn trim(mut a: UPoly) -> UPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn eval(f: PrimeField, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn mul(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

pub fn sub(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: PrimeField, a: &[u64], b: &[u64]) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = f.inv(b[db]).unwrap();
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; da - db + 1];
    for i in (db..=da).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        let t = f.mul(c, inv);
        q[i - db] = t;
        for j in 0..=db {
            r[i - db + j] = f.sub(r[i - db + j], f.mul(t, b[j]));
        }
    }
    (trim(q), trim(r))
}

pub fn rem(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    divrem(f, a, b).1
}

pub fn monic(f: PrimeField, a: UPoly) -> UPoly {
    let a = trim(a);
    match a.last() {
        None => a,
        Some(&lc) => {
            let inv = f.inv(lc).unwrap();
            a.into_iter().map(|c| f.mul(c, inv)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, x)
}

pub fn derivative(f: PrimeField, a: &[u64]) -> UPoly {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.reduce(i as u64)))
        .collect();
    trim(out)
}

/// `base^e mod m`.
pub fn powmod(f: PrimeField, base: &[u64], mut e: u64, m: &[u64]) -> UPoly {
    let mut result = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(f, &mul(f, &result, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    result
}

pub fn is_squarefree(f: PrimeField, a: &[u64]) -> bool {
    let d = derivative(f, a);
    if d.is_empty() {
        return degree(a).map_or(false, |d| d == 0);
    }
    degree(&gcd(f, a, &d)) == Some(0)
}

/// Product of the distinct linear factors of `a` over the field.
pub fn rational_part(f: PrimeField, a: &[u64]) -> UPoly {
    let a = monic(f, a.to_vec());
    if degree(&a).unwrap_or(0) == 0 {
        return vec![1];
    }
    let xp = powmod(f, &[0, 1], f.modulus(), &a);
    gcd(f, &a, &sub(f, &xp, &[0, 1]))
}

/// All roots in the field of a nonzero polynomial (without multiplicity), sorted.
pub fn roots(f: PrimeField, a: &[u64]) -> Vec<u64> {
    let g = rational_part(f, a);
    let mut out = Vec::new();
    split_linear(f, g, &mut out);
    out.sort_unstable();
    out
}

/// The roots, if `a` splits into distinct linear factors over the field.
pub fn distinct_split_roots(f: PrimeField, a: &[u64]) -> Option<Vec<u64>> {
    let d = degree(a)?;
    let r = roots(f, a);
    (r.len() == d).then_some(r)
}

// Cantor-Zassenhaus equal-degree splitting with shifts a = 0, 1, 2, ...
fn split_linear(f: PrimeField, g: UPoly, out: &mut Vec<u64>) {
    let Some(d) = degree(&g) else { return };
    match d {
        0 => {}
        1 => {
            let inv = f.inv(g[1]).unwrap();
            out.push(f.neg(f.mul(g[0], inv)));
        }
        _ if f.modulus() == 2 => {
            for x in 0..2 {
                if eval(f, &g, x) == 0 {
                    out.push(x);
                }
            }
        }
        _ => {
            let e = (f.modulus() - 1) / 2;
            for shift in 0.. {
                let h = powmod(f, &[shift % f.modulus(), 1], e, &g);
                let cand = gcd(f, &g, &sub(f, &h, &[1]));
                let dc = degree(&cand).unwrap_or(0);
                if dc > 0 && dc < d {
                    let (q, _) = divrem(f, &g, &cand);
                    split_linear(f, cand, out);
                    split_linear(f, monic(f, q), out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_products() {
        let f = PrimeField::new(1_000_003).unwrap();
        let mut p = vec![1u64];
        for r in [3u64, 17, 999_999, 424_242] {
            p = mul(f, &p, &[f.neg(r), 1]);
        }
        assert_eq!(roots(f, &p), vec![3, 17, 424_242, 999_999]);
        assert_eq!(distinct_split_roots(f, &p).unwrap().len(), 4);
        // x^2 - (non-residue) has no roots
        let nr = (2..).find(|&a| !f.is_square(a)).unwrap();
        let q = mul(f, &p, &[f.neg(nr), 0, 1]);
        assert_eq!(roots(f, &q).len(), 4);
        assert!(distinct_split_roots(f, &q).is_none());
        // repeated root
        let sq = mul(f, &[f.neg(5), 1], &[f.neg(5), 1]);
        assert!(!is_squarefree(f, &sq));
        assert!(distinct_split_roots(f, &sq).is_none());
    }

    #[test]
    fn division() {
        let f = PrimeField::new(7).unwrap();
        let a = vec![1, 2, 3, 4];
        let b = vec![5, 1];
        let (q, r) = divrem(f, &a, &b);
        assert_eq!(sub(f, &a, &mul(f, &q, &b)), r);
    }
}
