//! Fröberg's function `F` and the Fröberg–Iarrobino function `G`.
//!
//! Conventions fixed here and relied upon elsewhere:
//!
//! * `F` is clamped to 0 as soon as some nonempty sub-multiset `A' ⊆ A` has
//!   `F'(A')_m ≤ 0`, i.e. as soon as the ideal generated by part of the forms
//!   is already expected to fill degree `m` (equivalently `G'` of the dual
//!   sub-configuration reaches `dim R_m`).
//! * `G(A)_m = dim R_m - F(dual)_m` with `dual = (m+1-k_i)`; a dual entry
//!   `≤ 0` means a point of multiplicity `≥ m+1`, which fills degree `m`.
//! * Dimension `n` is projective: the ring has `n+1` variables and
//!   `dim R_m = C(n+m, n)`. `n = 0` is accepted so that the recursion can
//!   descend from `P^1`.
//!
//! [`g_obstruction_sum`] and [`g_recursion`] are alternative routes to `G`
//! used as internal oracles. The recursion is
//!
//! ```text
//! G(A)_m = deg(A) - Σ_{j=1..d} Σ_{i=0..k_j-1} G^{(n-1)}( ((k_1..k_{j-1}) + (i-m))⁺ )_i
//! ```
//!
//! which is exactly the shape of the obstruction bound in
//! [`crate::obstruction`]: point `j` is added one level at a time, and at
//! level `i` its predecessors induce a configuration in the slicing
//! hyperplane evaluated in degree `i`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::uples::{binomial, SubMultisets, Uple};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjecturalValue {
    #[serde(with = "crate::decimal::biguint")]
    pub value: BigUint,
    pub clamped: bool,
    #[serde(with = "crate::decimal::biguint")]
    pub ambient_dim: BigUint,
}

impl ConjecturalValue {
    pub fn is_full(&self) -> bool {
        self.value == self.ambient_dim
    }
}

/// `dim R_m = C(n+m, n)`.
pub fn ambient_dim(n: u32, m: u32) -> BigUint {
    binomial(n as i64 + m as i64, n as i64)
}

/// Degree of a fat point scheme: `Σ C(n+k_i-1, n)` over positive entries.
pub fn scheme_degree(n: u32, mults: &Uple) -> BigUint {
    mults
        .entries()
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| binomial(n as i64 + k - 1, n as i64))
        .sum()
}

/// Generator-degree groups; negative degrees are read as 0.
fn degree_groups(a: &Uple) -> Vec<(i64, usize)> {
    let mut v: Vec<i64> = a.entries().iter().map(|&x| x.max(0)).collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    let mut groups: Vec<(i64, usize)> = Vec::new();
    for x in v {
        match groups.last_mut() {
            Some((last, c)) if *last == x => *c += 1,
            _ => groups.push((x, 1)),
        }
    }
    groups
}

fn signed(v: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v)
}

fn f_prime_groups(n: u32, groups: Vec<(i64, usize)>, m: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for sub in SubMultisets::from_groups(groups) {
        let term = signed(sub.weight * binomial(n as i64 + m as i64 - sub.size, n as i64));
        if sub.length % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `F'(A)_m = Σ_{B ⊆ A} (-1)^{ℓ(B)} C(n+m-|B|, n)`, the expected codimension
/// of an ideal generated by forms of degrees `A` if all relations were Koszul.
/// Every chosen generator flips the sign, degree-0 ones included.
pub fn f_prime(n: u32, a: &Uple, m: u32) -> BigInt {
    f_prime_groups(n, degree_groups(a), m)
}

/// Fröberg's conjectural codimension of generic forms of degrees `A` in degree `m`.
pub fn f(n: u32, a: &Uple, m: u32) -> ConjecturalValue {
    let ambient = ambient_dim(n, m);
    let groups = degree_groups(a);
    if groups.iter().any(|&(v, _)| v == 0) {
        // unit ideal
        return ConjecturalValue {
            value: BigUint::zero(),
            clamped: false,
            ambient_dim: ambient,
        };
    }
    for sub in SubMultisets::from_groups(groups.clone()) {
        if sub.length == 0 {
            continue;
        }
        let sub_groups = degree_groups(&sub.uple);
        if !f_prime_groups(n, sub_groups, m).is_positive() {
            return ConjecturalValue {
                value: BigUint::zero(),
                clamped: true,
                ambient_dim: ambient,
            };
        }
    }
    let value = f_prime_groups(n, groups, m);
    ConjecturalValue {
        value: value.to_biguint().expect("unclamped F' is positive"),
        clamped: false,
        ambient_dim: ambient,
    }
}

/// `G(A)_m`, the conjectural Hilbert function in degree `m` of a generic
/// union of fat points with multiplicities `A` in `P^n`. Nonpositive
/// multiplicities are dropped.
pub fn g(n: u32, a: &Uple, m: u32) -> ConjecturalValue {
    let ambient = ambient_dim(n, m);
    let mults = a.positive_part();
    let dual = mults.dual(m);
    if dual.entries().iter().any(|&x| x <= 0) {
        return ConjecturalValue {
            value: ambient.clone(),
            clamped: true,
            ambient_dim: ambient,
        };
    }
    let fv = f(n, &dual, m);
    let value = signed(ambient.clone()) - signed(fv.value);
    ConjecturalValue {
        value: value
            .to_biguint()
            .unwrap_or_else(|| panic!("G({a})_{m} in P^{n} went negative")),
        clamped: fv.clamped,
        ambient_dim: ambient,
    }
}

fn require_not_full(n: u32, a: &Uple, m: u32, what: &str) -> Result<()> {
    if g(n, a, m).is_full() {
        return Err(Error::Precondition(format!(
            "{what} needs G({a})_{m} < C({n}+{m},{n}) in P^{n}"
        )));
    }
    Ok(())
}

/// The alternating plane-counting form of `G`: the `t`-th term counts the
/// `(t-1)`-planes spanned by `t` of the points in the base locus.
///
/// `Σ_{t≥1} (-1)^{t-1} Σ_{ℓ(B)=t, B⊆A} C(n + |B| - t - (t-1)m, n)`.
/// Only valid when `G < dim R_m`; otherwise rejected.
pub fn g_obstruction_sum(n: u32, a: &Uple, m: u32) -> Result<BigInt> {
    require_not_full(n, a, m, "the obstruction-sum form")?;
    let (n, m) = (n as i64, m as i64);
    let mut acc = BigInt::zero();
    for sub in a.sub_multisets() {
        let t = sub.length as i64;
        if t == 0 {
            continue;
        }
        let term = signed(sub.weight * binomial(n + sub.size - t - (t - 1) * m, n));
        if t % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `G` recomputed from `G` one dimension down, point by point and level by
/// level (see the module docs for the index convention). Entries are taken
/// in the order given; the result does not depend on that order.
pub fn g_recursion(n: u32, a: &Uple, m: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("recursion needs n ≥ 1".into()));
    }
    require_not_full(n, a, m, "the recursion")?;
    let mults = a.positive_part();
    let k = mults.entries();
    let mut induced = BigUint::zero();
    for j in 0..k.len() {
        let prefix = Uple::new(k[..j].to_vec());
        for i in 0..k[j] {
            let c = prefix.shift(i - m as i64).positive_part();
            induced += g(n - 1, &c, i as u32).value;
        }
    }
    Ok(scheme_degree(n, &mults) - induced)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancingWitness {
    pub a: Uple,
    pub b: Uple,
    #[serde(with = "crate::decimal::biguint")]
    pub g_a: BigUint,
    #[serde(with = "crate::decimal::biguint")]
    pub g_b: BigUint,
    #[serde(with = "crate::decimal::biguint")]
    pub ambient_dim: BigUint,
}

impl BalancingWitness {
    /// `G(A) ≥ G(B)`.
    pub fn holds(&self) -> bool {
        self.g_a >= self.g_b
    }

    /// Whether "`G(A) = G(B)` exactly when `G(B)` is full" holds for this pair.
    /// It does not always: on `P^1` rebalancing preserves the degree, and
    /// e.g. `(6,4,4)` vs `(5,5,4)` in `P^2`, degree 7, both give 35 < 36.
    pub fn equality_only_when_full(&self) -> bool {
        (self.g_a == self.g_b) == (self.g_b == self.ambient_dim)
    }
}

/// Moves one unit of multiplicity from the largest entry to the second
/// largest, `(k_1, k_2, ...) → (k_1-1, k_2+1, ...)`, and compares `G`.
/// Rebalancing never raises `G`.
pub fn balancing_compare(n: u32, a: &Uple, m: u32) -> Result<BalancingWitness> {
    let sorted = a.canonical();
    let k = sorted.entries();
    if k.len() < 2 || k[0] < k[1] + 2 {
        return Err(Error::Precondition(format!(
            "balancing needs k_1 ≥ k_2 + 2 after sorting, got ({sorted})"
        )));
    }
    let mut b = k.to_vec();
    b[0] -= 1;
    b[1] += 1;
    let b = Uple::new(b);
    let ga = g(n, &sorted, m);
    let gb = g(n, &b, m);
    Ok(BalancingWitness {
        a: sorted,
        b,
        g_a: ga.value,
        g_b: gb.value,
        ambient_dim: ga.ambient_dim,
    })
}
