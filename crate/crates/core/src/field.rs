//! Arithmetic in `Z/pZ` and rank by incremental row reduction.

use crate::error::{Error, Result};

/// A prime field with modulus below `2^32`, so products fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Rejects unless the characteristic is strictly larger than `bound`.
    pub fn require_above(&self, bound: u64) -> Result<()> {
        if self.p <= bound {
            return Err(Error::ModulusTooSmall {
                modulus: self.p,
                required: bound,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }
}

/// Row space of a growing set of vectors, kept in echelon form.
///
/// Stored rows have a leading 1 at their pivot and zeros at every pivot of
/// rows stored before them, so reducing a new vector against the stored
/// rows in insertion order clears all pivot columns.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    width: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, width: usize) -> Self {
        EchelonBasis {
            field,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Adds a vector; returns whether it enlarged the row space.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.width, "row width mismatch");
        if self.is_full() {
            return false;
        }
        let f = self.field;
        let p = f.p;
        // Entries grow by at most (p-1)^2 per elimination step and are only
        // reduced when the next step could overflow.
        let step = (p - 1) * (p - 1);
        let budget = (u64::MAX - p).checked_div(step).unwrap_or(u64::MAX);
        let mut pending = 0;
        v.iter_mut().for_each(|x| *x %= p);
        for (pivot, row) in &self.rows {
            let c = v[*pivot] % p;
            if c == 0 {
                continue;
            }
            if pending == budget {
                v.iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
            let neg = p - c;
            for (x, &r) in v[*pivot..].iter_mut().zip(&row[*pivot..]) {
                *x += neg * r;
            }
            pending += 1;
        }
        v.iter_mut().for_each(|x| *x %= p);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let scale = f.inv(v[pivot]);
        for x in &mut v[pivot..] {
            *x = f.mul(*x, scale);
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn extend<I: IntoIterator<Item = Vec<u64>>>(&mut self, rows: I) -> usize {
        rows.into_iter().map(|r| self.insert(r) as usize).sum()
    }
}

/// Rank of a dense matrix over the field.
pub fn rank(field: PrimeField, width: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> usize {
    let mut basis = EchelonBasis::new(field, width);
    basis.extend(rows);
    basis.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites_and_large() {
        assert!(PrimeField::new(1_000_003).is_ok());
        assert!(PrimeField::new(65_537).is_ok());
        assert!(PrimeField::new(1_000_001).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new((1u64 << 32) + 15).is_err());
    }

    #[test]
    fn inverse() {
        let f = PrimeField::new(1_000_003).unwrap();
        for a in [1, 2, 3, 999_999, 123_456] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn small_ranks() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(
            rank(f, 3, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 0]]),
            1
        );
        assert_eq!(
            rank(f, 3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]),
            2
        );
        assert_eq!(rank(f, 2, vec![vec![1, 3], vec![3, 2]]), 1); // 3*3 = 9 = 2 mod 7
        assert_eq!(rank(f, 0, Vec::<Vec<u64>>::new()), 0);
    }

    /// Determinant by cofactor expansion, independent of the echelon code.
    fn det(f: PrimeField, m: &[Vec<u64>]) -> u64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut acc = 0;
        for j in 0..n {
            let minor: Vec<Vec<u64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let term = f.mul(m[0][j], det(f, &minor));
            acc = if j % 2 == 0 {
                f.add(acc, term)
            } else {
                f.sub(acc, term)
            };
        }
        acc
    }

    proptest! {
        #[test]
        fn full_rank_iff_nonzero_determinant(entries in proptest::collection::vec(0u64..5, 16)) {
            let f = PrimeField::new(5).unwrap();
            let m: Vec<Vec<u64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let r = rank(f, 4, m.clone());
            prop_assert_eq!(r == 4, det(f, &m) != 0);
        }

        #[test]
        fn largest_modulus_does_not_overflow(entries in proptest::collection::vec(0u64..4_294_967_291, 25)) {
            let f = PrimeField::new(4_294_967_291).unwrap();
            let mut m: Vec<Vec<u64>> = entries.chunks(5).map(|c| c.to_vec()).collect();
            prop_assert_eq!(rank(f, 5, m.clone()) == 5, det(f, &m) != 0);
            m[4] = (0..5).map(|c| f.add(m[0][c], f.mul(3, m[1][c]))).collect();
            prop_assert!(rank(f, 5, m.clone()) < 5);
        }

        #[test]
        fn rank_is_order_independent(entries in proptest::collection::vec(0u64..3, 20)) {
            let f = PrimeField::new(3).unwrap();
            let m: Vec<Vec<u64>> = entries.chunks(5).map(|c| c.to_vec()).collect();
            let mut rev = m.clone();
            rev.reverse();
            let t: Vec<Vec<u64>> = (0..5).map(|c| m.iter().map(|r| r[c]).collect()).collect();
            prop_assert_eq!(rank(f, 5, m.clone()), rank(f, 5, rev));
            prop_assert_eq!(rank(f, 5, m), rank(f, 4, t));
        }
    }
}
