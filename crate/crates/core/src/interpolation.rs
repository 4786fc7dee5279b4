//! Actual Hilbert functions by rank over a prime field.
//!
//! A point `p` of multiplicity `k` imposes on degree-`m` forms the
//! conditions "every partial derivative of order `k-1` vanishes at `p`". With
//! the characteristic above `m` the Euler relation makes lower orders
//! redundant, so the rows for one fat point number `C(n+k-1, n)`. When
//! `k-1 > m` every order-`(k-1)` partial of a degree-`m` form is zero; the
//! point then imposes everything, and rows of order `m` are used instead.
//!
//! Columns are the degree-`m` monomials in graded-lexicographic order (the
//! `x0` exponent decreasing first).

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::conjectural::ambient_dim;
use crate::error::{Error, Result};
use crate::field::{EchelonBasis, PrimeField};
use crate::seed;
use crate::uples::{binomial_u64, Uple};

const POINT_STREAM: u64 = 0x7074;
const FORM_STREAM: u64 = 0x6c66;

/// All exponent vectors in `n+1` variables of total degree `m`, in
/// graded-lexicographic order.
pub fn enumerate_monomials(n: u32, m: u32) -> Vec<Vec<u32>> {
    fn fill(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == vars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            fill(vars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    fill(n as usize + 1, m, &mut Vec::new(), &mut out);
    out
}

/// Degree-`m` monomials with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: u32,
    degree: u32,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: u32, degree: u32) -> Self {
        let exps = enumerate_monomials(n, degree);
        let index = exps
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        MonomialBasis {
            n,
            degree,
            exps,
            index,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        self.index.get(exp).copied()
    }
}

/// `b!/(b-a)!` mod p for all `0 ≤ a ≤ b ≤ m`, flattened as `[b][a]`.
fn falling_table(field: PrimeField, m: u32) -> Vec<Vec<u64>> {
    (0..=m as u64)
        .map(|b| {
            let mut row = vec![1u64];
            for a in 1..=b {
                let prev = *row.last().unwrap();
                row.push(field.mul(prev, field.reduce(b - a + 1)));
            }
            row
        })
        .collect()
}

fn power_table(field: PrimeField, point: &[u64], m: u32) -> Vec<Vec<u64>> {
    point
        .iter()
        .map(|&c| {
            let mut row = vec![1 % field.modulus()];
            for _ in 0..m {
                let prev = *row.last().unwrap();
                row.push(field.mul(prev, c));
            }
            row
        })
        .collect()
}

/// Rows "all partials of exactly `order` vanish at `point`" against `basis`.
pub fn derivative_rows_of_order(
    field: PrimeField,
    basis: &MonomialBasis,
    point: &[u64],
    order: u32,
) -> Result<Vec<Vec<u64>>> {
    let m = basis.degree();
    field.require_above(m as u64)?;
    if point.len() != basis.n() as usize + 1 {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: basis.n() as usize + 1,
            found: point.len(),
        });
    }
    if order > m {
        return Ok(Vec::new());
    }
    let falling = falling_table(field, m);
    let pows = power_table(field, point, m);
    let rows = enumerate_monomials(basis.n(), order)
        .into_iter()
        .map(|alpha| {
            basis
                .exponents()
                .iter()
                .map(|beta| {
                    let mut c = 1;
                    for ((&b, &a), pw) in beta.iter().zip(&alpha).zip(&pows) {
                        if b < a {
                            return 0;
                        }
                        c = field.mul(
                            c,
                            field.mul(falling[b as usize][a as usize], pw[(b - a) as usize]),
                        );
                        if c == 0 {
                            return 0;
                        }
                    }
                    c
                })
                .collect()
        })
        .collect();
    Ok(rows)
}

/// The conditions imposed by a point of multiplicity `k` on degree-`m` forms.
pub fn derivative_rows(
    field: PrimeField,
    basis: &MonomialBasis,
    point: &[u64],
    k: u32,
) -> Result<Vec<Vec<u64>>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    derivative_rows_of_order(field, basis, point, (k - 1).min(basis.degree()))
}

/// Points with multiplicities in `P^n` over `Z/pZ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatPointConfig {
    pub n: u32,
    pub modulus: u64,
    pub points: Vec<Vec<u64>>,
    pub mults: Uple,
}

/// Whether two nonzero vectors are proportional.
pub(crate) fn proportional(field: PrimeField, a: &[u64], b: &[u64]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if field.mul(a[i], b[j]) != field.mul(a[j], b[i]) {
                return false;
            }
        }
    }
    true
}

impl FatPointConfig {
    pub fn new(n: u32, modulus: u64, points: Vec<Vec<u64>>, mults: Uple) -> Result<Self> {
        let field = PrimeField::new(modulus)?;
        if points.len() != mults.len() {
            return Err(Error::LengthMismatch {
                points: points.len(),
                mults: mults.len(),
            });
        }
        for (index, &value) in mults.entries().iter().enumerate() {
            if value < 1 {
                return Err(Error::NonPositiveMultiplicity { index, value });
            }
        }
        let points: Vec<Vec<u64>> = points
            .into_iter()
            .map(|p| p.into_iter().map(|c| field.reduce(c)).collect())
            .collect();
        for (index, p) in points.iter().enumerate() {
            if p.len() != n as usize + 1 {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: n as usize + 1,
                    found: p.len(),
                });
            }
            if p.iter().all(|&c| c == 0) {
                return Err(Error::ZeroPoint(index));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if proportional(field, &points[i], &points[j]) {
                    return Err(Error::CoincidentPoints(i, j));
                }
            }
        }
        Ok(FatPointConfig {
            n,
            modulus,
            points,
            mults,
        })
    }

    /// Random points for `mults` (sorted descending), reproducible from
    /// `(seed, n, mults, trial)`. First coordinates are nonzero.
    pub fn generic(n: u32, mults: &Uple, modulus: u64, seed: u64, trial: u64) -> Result<Self> {
        let mults = mults.sorted_desc();
        if let Some((index, &value)) = mults.entries().iter().enumerate().find(|(_, &k)| k < 1) {
            return Err(Error::NonPositiveMultiplicity { index, value });
        }
        let mut key = vec![POINT_STREAM, n as u64, mults.len() as u64];
        key.extend(mults.entries().iter().map(|&k| k as u64));
        key.push(trial);
        let points = sample_points(n, mults.len(), modulus, seed, &key)?;
        Self::new(n, modulus, points, mults)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.modulus).expect("validated at construction")
    }

    /// `Σ C(n+k_i-1, n)`.
    pub fn degree(&self) -> u64 {
        self.mults
            .entries()
            .iter()
            .map(|&k| binomial_u64(self.n as i64 + k - 1, self.n as i64))
            .sum()
    }

    pub fn max_mult(&self) -> u32 {
        self.mults.max_entry().unwrap_or(0).max(0) as u32
    }
}

/// `count` projectively distinct random points of `P^n` with nonzero first
/// coordinate, drawn from the stream keyed by `(seed, key)`.
pub fn sample_points(
    n: u32,
    count: usize,
    modulus: u64,
    seed: u64,
    key: &[u64],
) -> Result<Vec<Vec<u64>>> {
    let field = PrimeField::new(modulus)?;
    let mut rng = seed::rng(seed, key);
    let mut points: Vec<Vec<u64>> = Vec::with_capacity(count);
    let mut attempts = 0;
    while points.len() < count {
        let mut p = vec![rng.random_range(1..modulus)];
        p.extend((0..n).map(|_| rng.random_range(0..modulus)));
        if points.iter().all(|q| !proportional(field, q, &p)) {
            points.push(p);
        }
        attempts += 1;
        if attempts > 64 * (count + 1) {
            return Err(Error::Precondition(format!(
                "cannot place {count} distinct points in P^{n} over Z/{modulus}"
            )));
        }
    }
    Ok(points)
}

/// How a [`HilbertValue`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RankOracle,
    Formula,
    Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertValue {
    pub value: u64,
    pub method: Method,
    pub modulus: u64,
    /// `None` for explicitly given points.
    pub seed: Option<u64>,
    pub trials: u32,
}

fn check_modulus(field: PrimeField, m: u32, max_mult: u32) -> Result<()> {
    field.require_above(m.max(max_mult) as u64)
}

/// Rank of the stacked derivative rows of an explicit configuration.
pub fn hpts_rank(config: &FatPointConfig, m: u32) -> Result<HilbertValue> {
    let field = config.field();
    check_modulus(field, m, config.max_mult())?;
    Ok(HilbertValue {
        value: condition_rank(config, m)?,
        method: Method::RankOracle,
        modulus: config.modulus,
        seed: None,
        trials: 1,
    })
}

fn condition_rank(config: &FatPointConfig, m: u32) -> Result<u64> {
    let field = config.field();
    let basis = MonomialBasis::new(config.n, m);
    let mut echelon = EchelonBasis::new(field, basis.len());
    for (p, &k) in config.points.iter().zip(config.mults.entries()) {
        echelon.extend(derivative_rows(field, &basis, p, k as u32)?);
        if echelon.is_full() {
            break;
        }
    }
    Ok(echelon.rank() as u64)
}

/// The generic value: maximum rank over `trials` seeded random
/// configurations. Stops early once the rank reaches `min(deg, dim R_m)`,
/// which no further trial can exceed.
pub fn hpts_generic(
    n: u32,
    mults: &Uple,
    m: u32,
    modulus: u64,
    seed: u64,
    trials: u32,
) -> Result<HilbertValue> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let field = PrimeField::new(modulus)?;
    let max_mult = mults.max_entry().unwrap_or(0).max(0) as u32;
    check_modulus(field, m, max_mult)?;
    let mut best = 0;
    for trial in 0..trials as u64 {
        let config = FatPointConfig::generic(n, mults, modulus, seed, trial)?;
        let cap = config
            .degree()
            .min(binomial_u64(n as i64 + m as i64, n as i64));
        best = best.max(condition_rank(&config, m)?);
        if best == cap {
            break;
        }
    }
    Ok(HilbertValue {
        value: best,
        method: Method::RankOracle,
        modulus,
        seed: Some(seed),
        trials,
    })
}

/// Linear forms (as coefficient vectors) raised to given powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerIdealConfig {
    pub n: u32,
    pub modulus: u64,
    pub linear_forms: Vec<Vec<u64>>,
    pub powers: Uple,
}

impl PowerIdealConfig {
    pub fn new(n: u32, modulus: u64, linear_forms: Vec<Vec<u64>>, powers: Uple) -> Result<Self> {
        PrimeField::new(modulus)?;
        if linear_forms.len() != powers.len() {
            return Err(Error::LengthMismatch {
                points: linear_forms.len(),
                mults: powers.len(),
            });
        }
        for (index, &value) in powers.entries().iter().enumerate() {
            if value < 0 {
                return Err(Error::NonPositiveMultiplicity { index, value });
            }
        }
        for (index, l) in linear_forms.iter().enumerate() {
            if l.len() != n as usize + 1 {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: n as usize + 1,
                    found: l.len(),
                });
            }
        }
        Ok(PowerIdealConfig {
            n,
            modulus,
            linear_forms,
            powers,
        })
    }

    /// Random forms reproducible from `(seed, n, powers)`.
    pub fn generic(n: u32, powers: &Uple, modulus: u64, seed: u64) -> Result<Self> {
        let mut key = vec![FORM_STREAM, n as u64, powers.len() as u64];
        key.extend(powers.entries().iter().map(|&a| a as u64));
        let forms = sample_points(n, powers.len(), modulus, seed, &key)?;
        Self::new(n, modulus, forms, powers.clone())
    }
}

/// Coefficients of `l^a` on the degree-`a` monomial basis.
fn power_of_linear_form(field: PrimeField, l: &[u64], a: u32) -> (MonomialBasis, Vec<u64>) {
    let basis = MonomialBasis::new(l.len() as u32 - 1, a);
    let fact: Vec<u64> = (0..=a as u64)
        .scan(1u64, |acc, i| {
            if i > 0 {
                *acc = field.mul(*acc, i);
            }
            Some(*acc)
        })
        .collect();
    let pows = power_table(field, l, a);
    let coeffs = basis
        .exponents()
        .iter()
        .map(|delta| {
            let mut c = fact[a as usize];
            for (&e, pw) in delta.iter().zip(&pows) {
                c = field.mul(c, field.mul(field.inv(fact[e as usize]), pw[e as usize]));
            }
            c
        })
        .collect();
    (basis, coeffs)
}

/// `dim R_m - dim J_m` for `J = (l_1^{a_1}, ...)`.
pub fn hpowlin_dim(config: &PowerIdealConfig, m: u32) -> Result<u64> {
    let field = PrimeField::new(config.modulus)?;
    field.require_above(m as u64)?;
    let target = MonomialBasis::new(config.n, m);
    let mut echelon = EchelonBasis::new(field, target.len());
    for (l, &a) in config.linear_forms.iter().zip(config.powers.entries()) {
        let a = a as u32;
        if a > m || echelon.is_full() {
            continue;
        }
        let (src, coeffs) = power_of_linear_form(field, l, a);
        for gamma in enumerate_monomials(config.n, m - a) {
            let mut row = vec![0; target.len()];
            let mut exp = vec![0; gamma.len()];
            for (delta, &c) in src.exponents().iter().zip(&coeffs) {
                for ((e, &d), &g) in exp.iter_mut().zip(delta).zip(&gamma) {
                    *e = d + g;
                }
                row[target.index_of(&exp).expect("degree m monomial")] = c;
            }
            echelon.insert(row);
        }
    }
    Ok((target.len() - echelon.rank()) as u64)
}

/// `HPOWLIN` for seeded random forms.
pub fn hpowlin_generic(
    n: u32,
    powers: &Uple,
    m: u32,
    modulus: u64,
    seed: u64,
) -> Result<HilbertValue> {
    let config = PowerIdealConfig::generic(n, powers, modulus, seed)?;
    Ok(HilbertValue {
        value: hpowlin_dim(&config, m)?,
        method: Method::RankOracle,
        modulus,
        seed: Some(seed),
        trials: 1,
    })
}

/// Both sides of the apolarity identity for one random point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityCheck {
    pub hpts: u64,
    pub hpowlin: u64,
    pub ambient_dim: u64,
    /// `hpts - (dim R_m - hpowlin)`; zero when duality holds.
    pub residual: i64,
}

/// Reads the same random vectors once as points carrying `A` and once as
/// linear forms raised to `m+1-k_i`, and compares the two ranks.
pub fn duality_residual(
    n: u32,
    mults: &Uple,
    m: u32,
    modulus: u64,
    seed: u64,
) -> Result<DualityCheck> {
    if let Some(&k) = mults.entries().iter().find(|&&k| k < 1 || k > m as i64) {
        return Err(Error::Precondition(format!(
            "duality needs 1 ≤ k_i ≤ m, got k = {k} with m = {m}"
        )));
    }
    let points = FatPointConfig::generic(n, mults, modulus, seed, 0)?;
    let hpts = hpts_rank(&points, m)?.value;
    let forms = PowerIdealConfig::new(n, modulus, points.points.clone(), points.mults.dual(m))?;
    let hpowlin = hpowlin_dim(&forms, m)?;
    let ambient = u64::try_from(ambient_dim(n, m)).expect("desk-scale ambient dimension");
    Ok(DualityCheck {
        hpts,
        hpowlin,
        ambient_dim: ambient,
        residual: hpts as i64 - (ambient as i64 - hpowlin as i64),
    })
}
