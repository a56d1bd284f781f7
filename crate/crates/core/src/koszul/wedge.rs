//! Lexicographic indexing of strictly increasing tuples (a basis of Λ^p V).

/// Binomial coefficient as `u64`; zero when `k > n` or either is negative.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Bijection between strictly increasing `p`-tuples from `{0..n}` and
/// `[0, C(n,p))`, ordered lexicographically.
#[derive(Clone, Debug)]
pub struct WedgeBasis {
    n: usize,
    p: usize,
    // table[i][j] = C(i, j)
    table: Vec<Vec<usize>>,
}

impl WedgeBasis {
    pub fn new(n: usize, p: usize) -> Self {
        let table = (0..=n)
            .map(|i| (0..=p).map(|j| binomial(i as i64, j as i64) as usize).collect())
            .collect();
        WedgeBasis { n, p, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        if self.p > self.n {
            0
        } else {
            self.table[self.n][self.p]
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn c(&self, a: usize, b: usize) -> usize {
        if b > a {
            0
        } else {
            self.table[a][b]
        }
    }

    /// Lexicographic rank of an increasing tuple (0-based entries).
    pub fn rank(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.p);
        // Tuples before `tuple` are counted through the complement ordering:
        // rank = C(n,p) - 1 - Σ_j C(n-1-t_j, p-j).
        let total = self.len();
        let mut colex = 0;
        for (j, &t) in tuple.iter().enumerate() {
            colex += self.c(self.n - 1 - t, self.p - j);
        }
        total - 1 - colex
    }

    /// Inverse of [`WedgeBasis::rank`].
    pub fn unrank(&self, mut r: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.p);
        let mut next = 0;
        for j in 0..self.p {
            let remaining = self.p - j;
            let mut t = next;
            loop {
                // tuples starting with t at this position
                let count = self.c(self.n - 1 - t, remaining - 1);
                if r < count {
                    break;
                }
                r -= count;
                t += 1;
            }
            out.push(t);
            next = t + 1;
        }
        out
    }

    /// All tuples in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.len());
        if self.p > self.n {
            return out;
        }
        let mut cur: Vec<usize> = (0..self.p).collect();
        loop {
            out.push(cur.clone());
            let mut i = self.p;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.n - self.p + i {
                    cur[i] += 1;
                    for k in i + 1..self.p {
                        cur[k] = cur[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 4), 5);
        assert_eq!(binomial(9, 4), 126);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn small_enumeration() {
        let w = WedgeBasis::new(4, 2);
        let t = w.tuples();
        assert_eq!(
            t,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        for (i, tup) in t.iter().enumerate() {
            assert_eq!(w.rank(tup), i);
        }
        assert_eq!(WedgeBasis::new(3, 4).len(), 0);
        assert_eq!(WedgeBasis::new(3, 0).tuples(), vec![Vec::<usize>::new()]);
    }

    proptest! {
        #[test]
        fn rank_unrank_roundtrip(n in 0usize..12, p in 0usize..12) {
            let w = WedgeBasis::new(n, p);
            let tuples = w.tuples();
            prop_assert_eq!(tuples.len(), w.len());
            for (r, t) in tuples.iter().enumerate() {
                prop_assert!(t.windows(2).all(|x| x[0] < x[1]));
                prop_assert_eq!(w.unrank(r), t.clone());
                prop_assert_eq!(w.rank(t), r);
            }
        }
    }
}
