//! Multiplicity uples and exact binomial coefficients.
//!
//! A [`Uple`] keeps its entries exactly as given, negative values included.
//! Every relation (equivalence, containment, domination) is decided on the
//! sorted positive part, so `(3, -1, 2)` and `(2, 3)` are equivalent.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Binomial coefficient with the zero-extension convention: `C(a, b) = 0`
/// whenever `b < 0` or `a < b` (negative `a` included).
pub fn binomial(a: i64, b: i64) -> BigUint {
    if b < 0 || a < b {
        return BigUint::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Machine-word binomial for rank-scale quantities. Panics on overflow,
/// which at desk scale indicates a caller bug.
pub fn binomial_u64(a: i64, b: i64) -> u64 {
    let v = binomial(a, b);
    u64::try_from(&v).unwrap_or_else(|_| panic!("C({a},{b}) = {v} does not fit in u64"))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Uple(Vec<i64>);

impl Uple {
    pub fn new(entries: Vec<i64>) -> Self {
        Uple(entries)
    }

    /// `count` copies of `value`; the homogeneous uple written `k̄` on `count` points.
    pub fn homogeneous(value: i64, count: usize) -> Self {
        Uple(vec![value; count])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries > 0, in their original order.
    pub fn positive_part(&self) -> Uple {
        Uple(self.0.iter().copied().filter(|&a| a > 0).collect())
    }

    /// `|A|`: sum of `max(a_i, 0)`.
    pub fn size(&self) -> i64 {
        self.0.iter().map(|&a| a.max(0)).sum()
    }

    /// `ℓ(A)`: number of positive entries.
    pub fn length(&self) -> usize {
        self.0.iter().filter(|&&a| a > 0).count()
    }

    pub fn max_entry(&self) -> Option<i64> {
        self.0.iter().copied().max()
    }

    /// Positive part sorted in descending order; the canonical form.
    pub fn canonical(&self) -> Uple {
        let mut v: Vec<i64> = self.0.iter().copied().filter(|&a| a > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Uple(v)
    }

    pub fn sorted_desc(&self) -> Uple {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Uple(v)
    }

    /// Adds `r` to every entry. No clamping.
    pub fn shift(&self, r: i64) -> Uple {
        Uple(self.0.iter().map(|&a| a + r).collect())
    }

    /// The Macaulay dual `(m+1-k_1, ..., m+1-k_d)`.
    pub fn dual(&self, m: u32) -> Uple {
        let top = m as i64 + 1;
        Uple(self.0.iter().map(|&k| top - k).collect())
    }

    /// "A may be written as B": equal positive parts as multisets.
    pub fn equivalent(&self, other: &Uple) -> bool {
        self.canonical() == other.canonical()
    }

    /// `B ⊆ A` on positive parts, as multisets.
    pub fn contains(&self, sub: &Uple) -> bool {
        let mine = self.canonical();
        let theirs = sub.canonical();
        let mut i = 0;
        for &v in &theirs.0 {
            while i < mine.0.len() && mine.0[i] > v {
                i += 1;
            }
            if i == mine.0.len() || mine.0[i] != v {
                return false;
            }
            i += 1;
        }
        true
    }

    /// `self ≤ other`: after sorting, entrywise domination with `ℓ(self) ≤ ℓ(other)`.
    pub fn dominated_by(&self, other: &Uple) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.0.len() <= b.0.len() && a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
    }

    pub fn is_homogeneous(&self) -> bool {
        let p = self.canonical();
        p.0.windows(2).all(|w| w[0] == w[1])
    }

    /// All entries but possibly one are equal (positive part).
    pub fn is_quasihomogeneous(&self) -> bool {
        let p = self.canonical();
        p.0.len() <= 2
            || p.0[1..].windows(2).all(|w| w[0] == w[1])
            || p.0[..p.0.len() - 1].windows(2).all(|w| w[0] == w[1])
    }

    /// Distinct positive values (descending) with their multiplicities.
    pub fn value_groups(&self) -> Vec<(i64, usize)> {
        let mut groups: Vec<(i64, usize)> = Vec::new();
        for v in self.canonical().0 {
            match groups.last_mut() {
                Some((last, c)) if *last == v => *c += 1,
                _ => groups.push((v, 1)),
            }
        }
        groups
    }

    /// Grouped enumeration of the distinct sub-multisets of the positive part.
    pub fn sub_multisets(&self) -> SubMultisets {
        SubMultisets::from_groups(self.value_groups())
    }
}

impl From<Vec<i64>> for Uple {
    fn from(v: Vec<i64>) -> Self {
        Uple(v)
    }
}

impl fmt::Display for Uple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Parses `2,2,3` and the shorthand `3x10` (ten entries equal to 3); the two
/// may be mixed, e.g. `4,3x2`.
impl FromStr for Uple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::MalformedUple(s.to_string());
        let s_trim = s.trim();
        if s_trim.is_empty() {
            return Ok(Uple::default());
        }
        let mut out = Vec::new();
        for tok in s_trim.split(',') {
            let tok = tok.trim();
            if let Some((v, c)) = tok.split_once('x') {
                let v: i64 = v.trim().parse().map_err(|_| bad())?;
                let c: usize = c.trim().parse().map_err(|_| bad())?;
                out.extend(std::iter::repeat_n(v, c));
            } else {
                out.push(tok.parse().map_err(|_| bad())?);
            }
        }
        Ok(Uple(out))
    }
}

/// One distinct sub-multiset together with the number of index subsets realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubMultiset {
    pub uple: Uple,
    pub weight: BigUint,
    pub length: usize,
    pub size: i64,
}

/// Odometer over `chosen[i] ∈ 0..=count[i]` for each distinct value.
pub struct SubMultisets {
    groups: Vec<(i64, usize)>,
    chosen: Vec<usize>,
    done: bool,
}

impl SubMultisets {
    /// Enumerates from explicit `(value, count)` groups; values need not be positive.
    pub fn from_groups(groups: Vec<(i64, usize)>) -> Self {
        let chosen = vec![0; groups.len()];
        SubMultisets {
            groups,
            chosen,
            done: false,
        }
    }
}

impl Iterator for SubMultisets {
    type Item = SubMultiset;

    fn next(&mut self) -> Option<SubMultiset> {
        if self.done {
            return None;
        }
        let mut entries = Vec::new();
        let mut weight = BigUint::one();
        let mut size = 0;
        for (&(v, c), &k) in self.groups.iter().zip(&self.chosen) {
            entries.extend(std::iter::repeat_n(v, k));
            weight *= binomial(c as i64, k as i64);
            size += v * k as i64;
        }
        let item = SubMultiset {
            length: entries.len(),
            uple: Uple(entries),
            weight,
            size,
        };

        let mut i = 0;
        loop {
            if i == self.groups.len() {
                self.done = true;
                break;
            }
            if self.chosen[i] < self.groups[i].1 {
                self.chosen[i] += 1;
                break;
            }
            self.chosen[i] = 0;
            i += 1;
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Multiply-then-divide with falling factorials, no symmetry shortcut.
    fn binomial_oracle(a: u64, b: u64) -> BigUint {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for i in 0..b {
            num *= a - i;
            den *= i + 1;
        }
        num / den
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(7, 2), big(21));
        assert_eq!(binomial(2, 3), big(0));
        assert_eq!(binomial(91, 4), binomial_oracle(91, 4));
        assert_eq!(binomial(91, 4), big(2_672_670));
        assert_eq!(binomial(-3, 2), big(0));
        assert_eq!(binomial(5, -1), big(0));
        assert_eq!(binomial(0, 0), big(1));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(Uple::new(vec![3, 2]).shift(-1), Uple::new(vec![2, 1]));
        assert_eq!(Uple::new(vec![2, 2]).shift(-3), Uple::new(vec![-1, -1]));
        assert_eq!(Uple::new(vec![4, 3, 1]).shift(0), Uple::new(vec![4, 3, 1]));
    }

    fn collect(u: &Uple) -> BTreeMap<Vec<i64>, BigUint> {
        u.sub_multisets().map(|s| (s.uple.0, s.weight)).collect()
    }

    #[test]
    fn sub_multiset_examples() {
        let got = collect(&Uple::new(vec![2, 2]));
        let want: BTreeMap<_, _> =
            [(vec![], big(1)), (vec![2], big(2)), (vec![2, 2], big(1))].into();
        assert_eq!(got, want);

        let got = collect(&Uple::new(vec![3]));
        assert_eq!(got, [(vec![], big(1)), (vec![3], big(1))].into());

        // literal 2^3 subset enumeration
        let a = [2i64, 2, 5];
        let mut literal: BTreeMap<Vec<i64>, BigUint> = BTreeMap::new();
        for mask in 0u32..8 {
            let mut s: Vec<i64> = (0..3)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| a[i])
                .collect();
            s.sort_unstable_by(|x, y| y.cmp(x));
            *literal.entry(s).or_default() += 1u32;
        }
        let got = collect(&Uple::new(a.to_vec()));
        assert_eq!(got.len(), 6);
        assert_eq!(got, literal);
        assert_eq!(got.values().sum::<BigUint>(), big(8));
    }

    #[test]
    fn bookkeeping() {
        let a = Uple::new(vec![3, -1, 0, 2]);
        assert_eq!(a.size(), 5);
        assert_eq!(a.length(), 2);
        assert_eq!(a.positive_part(), Uple::new(vec![3, 2]));
        assert!(a.equivalent(&Uple::new(vec![2, 3])));
        assert!(Uple::new(vec![4, 3, 3, 1]).contains(&Uple::new(vec![3, 1, 3])));
        assert!(!Uple::new(vec![4, 3, 1]).contains(&Uple::new(vec![3, 3])));
        assert!(Uple::new(vec![1, 3]).dominated_by(&Uple::new(vec![2, 4, 1])));
        assert!(!Uple::new(vec![5]).dominated_by(&Uple::new(vec![4, 4])));
        assert!(Uple::new(vec![3, 2, 2, 2]).is_quasihomogeneous());
        assert!(!Uple::new(vec![3, 3, 2, 1]).is_quasihomogeneous());
    }

    #[test]
    fn parse_shorthand() {
        assert_eq!("3x10".parse::<Uple>().unwrap(), Uple::homogeneous(3, 10));
        assert_eq!("4, 3x2".parse::<Uple>().unwrap(), Uple::new(vec![4, 3, 3]));
        assert_eq!("2,2".parse::<Uple>().unwrap().to_string(), "2,2");
        assert!("2,,2".parse::<Uple>().is_err());
        assert!("ax3".parse::<Uple>().is_err());
    }

    #[test]
    fn weighted_count_is_two_to_length_exhaustive() {
        // every multiset of length ≤ 20 over three values
        for c1 in 0..=20usize {
            for c2 in 0..=(20 - c1) {
                for c3 in 0..=(20 - c1 - c2) {
                    let mut v = vec![1i64; c1];
                    v.extend(std::iter::repeat_n(2, c2));
                    v.extend(std::iter::repeat_n(7, c3));
                    let u = Uple::new(v);
                    let total: BigUint = u.sub_multisets().map(|s| s.weight).sum();
                    assert_eq!(total, BigUint::one() << u.length());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn binomial_symmetry(a in 0i64..200, b in 0i64..200) {
            prop_assume!(b <= a);
            prop_assert_eq!(binomial(a, b), binomial(a, a - b));
        }

        #[test]
        fn positive_part_preserves_bookkeeping(v in proptest::collection::vec(-5i64..8, 0..12)) {
            let a = Uple::new(v);
            let p = a.positive_part();
            prop_assert_eq!(p.size(), a.size());
            prop_assert_eq!(p.length(), a.length());
            prop_assert!(a.equivalent(&p));
        }

        #[test]
        fn shift_round_trip(v in proptest::collection::vec(-10i64..10, 0..10), r in -20i64..20) {
            let a = Uple::new(v);
            prop_assert_eq!(a.shift(r).shift(-r), a);
        }

        #[test]
        fn display_parse_round_trip(v in proptest::collection::vec(-9i64..30, 0..10)) {
            let a = Uple::new(v);
            prop_assert_eq!(a.to_string().parse::<Uple>().unwrap(), a);
        }

        #[test]
        fn sub_multisets_are_contained(v in proptest::collection::vec(1i64..5, 0..8)) {
            let a = Uple::new(v);
            for s in a.sub_multisets() {
                prop_assert!(a.contains(&s.uple));
                prop_assert!(s.uple.dominated_by(&a));
            }
        }
    }
}
