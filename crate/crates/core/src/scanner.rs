//! Parameter sweeps comparing generic Hilbert functions with `G`, the
//! sufficient conditions for equality as predicates, and the inequality
//! chain behind the large counterexamples.
//!
//! Cells run in parallel; results come back in grid order and depend only on
//! `(grid, modulus, seed, trials)`.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{Cache, CacheKey};
use crate::conjectural::{ambient_dim, g};
use crate::error::{Error, Result};
use crate::interpolation::{hpts_generic, HilbertValue};
use crate::uples::{binomial, Uple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "equal")]
    Equal,
    #[serde(rename = "hpts_less")]
    HptsLess,
    #[serde(rename = "VIOLATION_hpts_greater")]
    ViolationHptsGreater,
}

impl Relation {
    pub fn of(hpts: u64, g: &BigUint) -> Self {
        match BigUint::from(hpts).cmp(g) {
            std::cmp::Ordering::Equal => Relation::Equal,
            std::cmp::Ordering::Less => Relation::HptsLess,
            std::cmp::Ordering::Greater => Relation::ViolationHptsGreater,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::HptsLess => "hpts_less",
            Relation::ViolationHptsGreater => "VIOLATION_hpts_greater",
        }
    }
}

/// Homogeneous cells where equality with `G` is not conjectured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExceptionClass {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "d=n+3")]
    NPlus3,
    #[serde(rename = "d=n+4")]
    NPlus4,
    #[serde(rename = "n2_d7or8")]
    N2D7Or8,
    #[serde(rename = "n3_d9_m2k")]
    N3D9M2k,
    #[serde(rename = "n4_d14_m2k_k2or3")]
    N4D14M2kK2Or3,
}

impl ExceptionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExceptionClass::None => "none",
            ExceptionClass::NPlus3 => "d=n+3",
            ExceptionClass::NPlus4 => "d=n+4",
            ExceptionClass::N2D7Or8 => "n2_d7or8",
            ExceptionClass::N3D9M2k => "n3_d9_m2k",
            ExceptionClass::N4D14M2kK2Or3 => "n4_d14_m2k_k2or3",
        }
    }
}

/// Exception class of `k̄` on `d` points; non-homogeneous uples are never
/// exceptional.
pub fn classify_exception(n: u32, a: &Uple, m: u32) -> ExceptionClass {
    let a = a.positive_part();
    if a.is_empty() || !a.is_homogeneous() {
        return ExceptionClass::None;
    }
    let (d, k, m) = (a.len() as u64, a.entries()[0] as u64, m as u64);
    let n = n as u64;
    if d == n + 3 {
        ExceptionClass::NPlus3
    } else if d == n + 4 {
        ExceptionClass::NPlus4
    } else if n == 2 && (d == 7 || d == 8) {
        ExceptionClass::N2D7Or8
    } else if n == 3 && d == 9 && m == 2 * k {
        ExceptionClass::N3D9M2k
    } else if n == 4 && d == 14 && m == 2 * k && (k == 2 || k == 3) {
        ExceptionClass::N4D14M2kK2Or3
    } else {
        ExceptionClass::None
    }
}

/// The alternative reading of the exception list, which names `d = n+5`
/// in place of `d = n+4`.
pub fn alt_exception(n: u32, a: &Uple) -> bool {
    let a = a.positive_part();
    !a.is_empty() && a.is_homogeneous() && a.len() as u64 == n as u64 + 5
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Rnc,
    Plus1,
    Nplus3,
    CtrCandidate,
}

impl Predicate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Predicate::Rnc => "rnc",
            Predicate::Plus1 => "plus1",
            Predicate::Nplus3 => "nplus3",
            Predicate::CtrCandidate => "ctr_candidate",
        }
    }
}

/// `|A| ≤ mn + 1` or `ℓ(A) ≤ n + 1`.
pub fn rnc_predicate(n: u32, a: &Uple, m: u32) -> bool {
    a.size() as i128 <= m as i128 * n as i128 + 1 || a.length() as u64 <= n as u64 + 1
}

/// `d ≤ max(n+1, (n+3)(n+2) / 2(k²-1))`, cross-multiplied.
pub fn plus1_predicate(n: u32, d: u32, k: u32) -> Result<bool> {
    if k < 2 {
        return Err(Error::Precondition(format!("plus1 needs k ≥ 2, got {k}")));
    }
    let (n, d, k) = (n as u128, d as u128, k as u128);
    Ok(d <= n + 1 || 2 * d * (k * k - 1) <= (n + 3) * (n + 2))
}

/// `|A| ≤ mn + 1` for exactly `n + 3` points.
pub fn nplus3_predicate(n: u32, a: &Uple, m: u32) -> Result<bool> {
    if a.length() as u64 != n as u64 + 3 {
        return Err(Error::Precondition(format!(
            "nplus3 needs n+3 = {} points, got {}",
            n + 3,
            a.length()
        )));
    }
    Ok(a.size() as i128 <= m as i128 * n as i128 + 1)
}

/// The largest `m` with `mn ≤ (n+3)k - 2`.
pub fn m_of(n: u32, k: u32) -> u32 {
    assert!(n >= 1 && k >= 1, "m_of needs n, k ≥ 1");
    (((n as u64 + 3) * k as u64 - 2) / n as u64) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtrFlags {
    /// `G(d, k̄)_m < C(n+m, n)`.
    pub max: bool,
    /// `(n+3)k ≥ mn + 2`.
    pub rn1: bool,
    /// `(d-1)(2k-1-m) ≤ (k-1)(n-1) + 1`.
    pub rn2: bool,
    /// `(n+5) C(n+k-1, n) ≤ C(n+m, n)`.
    pub surrogate: bool,
}

impl CtrFlags {
    /// All three conditions under which a generic `k̄`-scheme falls short of `G`.
    pub fn predicts_failure(&self) -> bool {
        self.max && self.rn1 && self.rn2
    }
}

pub fn ctr_inequalities(n: u32, k: u32, m: u32, d: u32) -> CtrFlags {
    let (ni, ki, mi, di) = (n as i128, k as i128, m as i128, d as i128);
    let max = !g(n, &Uple::homogeneous(k as i64, d as usize), m).is_full();
    let surrogate =
        BigUint::from(n + 5) * binomial(n as i64 + k as i64 - 1, n as i64) <= ambient_dim(n, m);
    CtrFlags {
        max,
        rn1: (ni + 3) * ki >= mi * ni + 2,
        rn2: (di - 1) * (2 * ki - 1 - mi) <= (ki - 1) * (ni - 1) + 1,
        surrogate,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRow {
    pub k: u32,
    pub m: u32,
    pub max: bool,
    pub rn1: bool,
    pub rn2: bool,
    pub surrogate: bool,
}

/// Published threshold for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ReferenceValue {
    Exact { value: u32 },
    Interval { low: u32, high: u32 },
    Unknown,
}

pub fn reference_k(n: u32) -> ReferenceValue {
    match n {
        4 | 5 => ReferenceValue::Exact { value: 88 },
        6 => ReferenceValue::Exact { value: 141 },
        7 => ReferenceValue::Interval {
            low: 231,
            high: 648,
        },
        _ => ReferenceValue::Unknown,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    Discrepancy,
    InsideInterval,
    OutsideInterval,
    /// The surrogate fails at `k_max`, so no threshold exists in range.
    NotFound,
    NoReference,
}

/// Leading coefficients (in `k`) of the two sides of the surrogate, scaled
/// by `n!`: `(n+5) n^n` on the left and `(n+3)^n` on the right. When the
/// right one is larger the inequality holds for every large `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticMargin {
    #[serde(with = "crate::decimal::biguint")]
    pub lhs: BigUint,
    #[serde(with = "crate::decimal::biguint")]
    pub rhs: BigUint,
    pub eventually_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KOfReport {
    pub n: u32,
    pub k_max: u32,
    /// Least `k0` with the surrogate true on all of `k0..=k_max`.
    pub computed: Option<u32>,
    /// The same, counting only `k` for which (rn2) holds on `n+5` points.
    pub computed_rn2: Option<u32>,
    pub reference: ReferenceValue,
    pub agreement: Agreement,
    pub asymptotic: AsymptoticMargin,
    pub table: Vec<KRow>,
}

fn tail_start(table: &[KRow], keep: impl Fn(&KRow) -> bool) -> Option<u32> {
    let mut start = None;
    for row in table.iter().rev().filter(|r| keep(r)) {
        if !row.surrogate {
            break;
        }
        start = Some(row.k);
    }
    start
}

/// Scans `k = 1..=k_max` for the threshold past which the surrogate holds.
pub fn k_of(n: u32, k_max: u32) -> Result<KOfReport> {
    if n == 0 || k_max == 0 {
        return Err(Error::Precondition("k_of needs n ≥ 1 and k_max ≥ 1".into()));
    }
    let d = n + 5;
    let table: Vec<KRow> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let m = m_of(n, k);
            let f = ctr_inequalities(n, k, m, d);
            KRow {
                k,
                m,
                max: f.max,
                rn1: f.rn1,
                rn2: f.rn2,
                surrogate: f.surrogate,
            }
        })
        .collect();
    let computed = tail_start(&table, |_| true);
    let computed_rn2 = tail_start(&table, |r| r.rn2);
    let reference = reference_k(n);
    let agreement = match (computed, reference) {
        (_, ReferenceValue::Unknown) => Agreement::NoReference,
        (None, _) => Agreement::NotFound,
        (Some(c), ReferenceValue::Exact { value }) if c == value => Agreement::Agree,
        (Some(_), ReferenceValue::Exact { .. }) => Agreement::Discrepancy,
        (Some(c), ReferenceValue::Interval { low, high }) if (low..=high).contains(&c) => {
            Agreement::InsideInterval
        }
        (Some(_), ReferenceValue::Interval { .. }) => Agreement::OutsideInterval,
    };
    let lhs = BigUint::from(n + 5) * BigUint::from(n).pow(n);
    let rhs = BigUint::from(n + 3).pow(n);
    Ok(KOfReport {
        n,
        k_max,
        computed,
        computed_rn2,
        reference,
        agreement,
        asymptotic: AsymptoticMargin {
            eventually_holds: rhs > lhs,
            lhs,
            rhs,
        },
        table,
    })
}

/// A Cartesian grid of cells `(d, A, m)` in one dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: u32,
    pub d: (u32, u32),
    pub k: (u32, u32),
    pub m: (u32, u32),
    /// Only `k̄` uples; otherwise every sorted uple with entries in range.
    pub homogeneous: bool,
    /// Largest admissible `C(n+m, n)`.
    pub cap: u64,
}

pub const DEFAULT_CAP: u64 = 5_000;

impl GridSpec {
    pub fn new(n: u32, d: (u32, u32), k: (u32, u32), m: (u32, u32)) -> Self {
        GridSpec {
            n,
            d,
            k,
            m,
            homogeneous: false,
            cap: DEFAULT_CAP,
        }
    }

    pub fn homogeneous(mut self) -> Self {
        self.homogeneous = true;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    /// Cells in grid order: by `d`, then uple (lexicographically descending
    /// entries), then `m`.
    pub fn cells(&self) -> Result<Vec<(Uple, u32)>> {
        if self.n == 0 || self.k.0 == 0 {
            return Err(Error::Precondition("grids need n ≥ 1 and k ≥ 1".into()));
        }
        if self.m.0 <= self.m.1 {
            let dim = binomial(self.n as i64 + self.m.1 as i64, self.n as i64);
            if dim > BigUint::from(self.cap) {
                return Err(Error::CapExceeded {
                    n: self.n,
                    m: self.m.1,
                    dim: u64::try_from(&dim).unwrap_or(u64::MAX),
                    cap: self.cap,
                });
            }
        }
        let mut out = Vec::new();
        for d in self.d.0..=self.d.1 {
            let uples = if self.homogeneous {
                (self.k.0..=self.k.1)
                    .rev()
                    .map(|k| Uple::homogeneous(k as i64, d as usize))
                    .collect()
            } else {
                descending_uples(d as usize, self.k.0 as i64, self.k.1 as i64)
            };
            for a in uples {
                for m in self.m.0..=self.m.1 {
                    out.push((a.clone(), m));
                }
            }
        }
        Ok(out)
    }
}

fn descending_uples(len: usize, lo: i64, hi: i64) -> Vec<Uple> {
    fn go(len: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Uple>) {
        if cur.len() == len {
            out.push(Uple::new(cur.clone()));
            return;
        }
        for v in (lo..=hi).rev() {
            cur.push(v);
            go(len, lo, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, lo, hi, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub modulus: u64,
    pub seed: u64,
    pub trials: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            modulus: crate::DEFAULT_MODULUS,
            seed: 0,
            trials: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: u32,
    pub d: u32,
    #[serde(rename = "A")]
    pub a: Uple,
    pub m: u32,
    pub hpts: HilbertValue,
    #[serde(with = "crate::decimal::biguint")]
    pub g_value: BigUint,
    pub relation: Relation,
    pub exception_class: ExceptionClass,
    /// Matches the `d = n+5` reading of the exception list.
    pub alt_exception: bool,
    pub predicates: Vec<Predicate>,
}

impl ScanRecord {
    pub fn has(&self, p: Predicate) -> bool {
        self.predicates.contains(&p)
    }

    pub fn predicates_joined(&self) -> String {
        self.predicates
            .iter()
            .map(|p| p.as_str())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Predicates of a cell that do not need a rank.
pub fn cell_predicates(n: u32, a: &Uple, m: u32) -> Vec<Predicate> {
    let mut out = Vec::new();
    if rnc_predicate(n, a, m) {
        out.push(Predicate::Rnc);
    }
    let pos = a.positive_part();
    let homogeneous_k = (!pos.is_empty() && pos.is_homogeneous()).then(|| pos.entries()[0] as u32);
    if let Some(k) = homogeneous_k {
        if k >= 2 && m == k + 1 && plus1_predicate(n, pos.len() as u32, k).unwrap_or(false) {
            out.push(Predicate::Plus1);
        }
    }
    if pos.len() as u64 == n as u64 + 3 && nplus3_predicate(n, &pos, m).unwrap_or(false) {
        out.push(Predicate::Nplus3);
    }
    if let Some(k) = homogeneous_k {
        let d = pos.len() as u32;
        if d >= n + 3 && ctr_inequalities(n, k, m, d).predicts_failure() {
            out.push(Predicate::CtrCandidate);
        }
    }
    out
}

/// Evaluates one cell, consulting `cache` for the rank when given.
pub fn scan_cell(
    n: u32,
    a: &Uple,
    m: u32,
    opts: ScanOptions,
    cache: Option<&Cache>,
) -> Result<ScanRecord> {
    let compute = || hpts_generic(n, a, m, opts.modulus, opts.seed, opts.trials);
    let hpts = match cache {
        Some(c) => c.get_or_insert_with(
            CacheKey::new(n, a, m, opts.modulus, opts.seed, opts.trials),
            compute,
        )?,
        None => compute()?,
    };
    let g_value = g(n, a, m).value;
    Ok(ScanRecord {
        n,
        d: a.len() as u32,
        a: a.clone(),
        m,
        relation: Relation::of(hpts.value, &g_value),
        hpts,
        g_value,
        exception_class: classify_exception(n, a, m),
        alt_exception: alt_exception(n, a),
        predicates: cell_predicates(n, a, m),
    })
}

fn scan(grid: &GridSpec, opts: ScanOptions, cache: Option<&Cache>) -> Result<Vec<ScanRecord>> {
    let cells = grid.cells()?;
    cells
        .par_iter()
        .map(|(a, m)| scan_cell(grid.n, a, *m, opts, cache))
        .collect()
}

/// Every cell of the grid; see [`violations`] for cells with `hpts > G`.
pub fn weak_scan(
    grid: &GridSpec,
    opts: ScanOptions,
    cache: Option<&Cache>,
) -> Result<Vec<ScanRecord>> {
    scan(grid, opts, cache)
}

pub fn violations(records: &[ScanRecord]) -> Vec<&ScanRecord> {
    records
        .iter()
        .filter(|r| r.relation == Relation::ViolationHptsGreater)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongScanReport {
    pub records: Vec<ScanRecord>,
    /// Indices of cells outside the exception list where `hpts ≠ G`.
    pub counterexample_candidates: Vec<usize>,
    /// Indices of exceptional cells where `hpts = G` anyway.
    pub exceptions_attaining_g: Vec<usize>,
}

/// Homogeneous sweep sorted into expected and unexpected outcomes.
pub fn strong_scan(
    grid: &GridSpec,
    opts: ScanOptions,
    cache: Option<&Cache>,
) -> Result<StrongScanReport> {
    let records = scan(&grid.clone().homogeneous(), opts, cache)?;
    let mut counterexample_candidates = Vec::new();
    let mut exceptions_attaining_g = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let exceptional = r.exception_class != ExceptionClass::None;
        match (exceptional, r.relation) {
            (false, Relation::Equal) => {}
            (false, _) => counterexample_candidates.push(i),
            (true, Relation::Equal) => exceptions_attaining_g.push(i),
            (true, _) => {}
        }
    }
    Ok(StrongScanReport {
        records,
        counterexample_candidates,
        exceptions_attaining_g,
    })
}

pub const CSV_HEADER: [&str; 11] = [
    "n",
    "d",
    "A",
    "m",
    "hpts",
    "g",
    "relation",
    "exception_class",
    "predicates",
    "seed",
    "modulus",
];

impl ScanRecord {
    pub fn csv_fields(&self) -> [String; 11] {
        [
            self.n.to_string(),
            self.d.to_string(),
            self.a.to_string(),
            self.m.to_string(),
            self.hpts.value.to_string(),
            self.g_value.to_string(),
            self.relation.as_str().to_string(),
            self.exception_class.as_str().to_string(),
            self.predicates_joined(),
            self.hpts.seed.map_or(String::new(), |s| s.to_string()),
            self.hpts.modulus.to_string(),
        ]
    }
}

impl fmt::Display for ScanRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} A=({}) m={}: hpts={} g={} {} [{}]",
            self.n,
            self.a,
            self.m,
            self.hpts.value,
            self.g_value,
            self.relation.as_str(),
            self.exception_class.as_str()
        )
    }
}
