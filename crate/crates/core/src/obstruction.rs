//! The codimension-one obstruction bound.
//!
//! Points are added one at a time and each point one multiplicity level at a
//! time. Raising point `j` from multiplicity `i` to `i+1` adds at most
//! `C(n+i-1, n-1)` conditions, minus those already forced by vanishing along
//! the lines to earlier points: a degree-`m` form through `p_r^{k_r}` and
//! `p_j^{i+1}` vanishes on `span(p_j, p_r)` to order `k_r + i - m`, and the
//! slice of those lines by the hyperplane `x0 = 0` is a fat point
//! configuration `W` in `P^{n-1}` whose Hilbert function in degree `i` is
//! subtracted. Summing over all steps gives
//!
//! ```text
//! h(Z, m) ≤ deg Z - Σ_j Σ_{i<k_j} h(W_{j,i}, i)
//! ```
//!
//! with equality exactly when `Z` has no obstructions beyond these lines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{EchelonBasis, PrimeField};
use crate::interpolation::{
    derivative_rows_of_order, hpts_rank, proportional, FatPointConfig, HilbertValue, Method,
    MonomialBasis,
};
use crate::uples::{binomial_u64, Uple};

/// Resampling attempts before [`ubda_generic`] gives up.
const MAX_ATTEMPTS: u64 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionStep {
    /// Index of the point being thickened.
    pub active_point_index: usize,
    /// Multiplicity of the active point after this step.
    pub level: u32,
    pub induced_config: FatPointConfig,
    /// `h(W, level-1)` in `P^{n-1}`.
    pub induced_h: HilbertValue,
    /// `C(n+level-2, n-1) - induced_h`.
    pub step_bound: u64,
    pub realized_increment: u64,
    /// Degree of the expected obstruction scheme at the active point,
    /// `C(n+level-2, n) + induced_h`.
    pub rho_degree: u64,
    /// `deg p^level - realized_increment`, the degree of the actual base
    /// locus at the active point; never below `rho_degree`.
    pub gamma_degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UbdaReport {
    pub config: FatPointConfig,
    pub m: u32,
    pub direct_h: HilbertValue,
    pub bound: u64,
    pub steps: Vec<ObstructionStep>,
    pub only_linear: bool,
    /// Samples discarded because induced points coincided.
    pub aborts: u32,
}

impl UbdaReport {
    /// Whether every induced configuration attains its conjectural value,
    /// the situation in which the bound must equal `G`.
    pub fn induced_match_g(&self) -> bool {
        let n = self.config.n;
        self.steps.iter().all(|s| {
            let g = crate::conjectural::g(n - 1, &s.induced_config.mults, s.level - 1).value;
            g == s.induced_h.value.into()
        })
    }
}

fn slicing_field(config: &FatPointConfig) -> Result<PrimeField> {
    if config.n == 0 {
        return Err(Error::Precondition("obstruction bounds need n ≥ 1".into()));
    }
    if let Some(i) = config.points.iter().position(|p| p[0] == 0) {
        return Err(Error::PointOnSlicingHyperplane(i));
    }
    Ok(config.field())
}

/// The configuration cut on `x0 = 0` by the lines from point `active` to
/// each earlier point `r`, with multiplicity `k_r + level - m` where positive.
///
/// In `P^0` all lines meet the hyperplane in the same point, which then
/// carries the largest multiplicity. In higher dimension two coinciding
/// slice points mean the active point is collinear with two earlier ones,
/// and the configuration is rejected as degenerate.
pub fn induced_w_config(
    config: &FatPointConfig,
    active: usize,
    level: u32,
    m: u32,
) -> Result<FatPointConfig> {
    let field = slicing_field(config)?;
    if active >= config.len() {
        return Err(Error::Precondition(format!(
            "no point {active} in a configuration of {}",
            config.len()
        )));
    }
    let k = config.mults.entries();
    let pj = &config.points[active];
    let mut points: Vec<Vec<u64>> = Vec::new();
    let mut mults = Vec::new();
    let mut sources = Vec::new();
    for (r, &kr) in k.iter().enumerate().take(active) {
        let c = kr + level as i64 - m as i64;
        if c <= 0 {
            continue;
        }
        let pr = &config.points[r];
        let q: Vec<u64> = (1..pj.len())
            .map(|t| field.sub(field.mul(pr[0], pj[t]), field.mul(pj[0], pr[t])))
            .collect();
        if config.n == 1 {
            if mults.is_empty() {
                points.push(vec![1]);
                mults.push(c);
            } else {
                mults[0] = mults[0].max(c);
            }
            continue;
        }
        if let Some(s) = points.iter().position(|p| proportional(field, p, &q)) {
            return Err(Error::DegenerateInducedConfig {
                active,
                first: sources[s],
                second: r,
            });
        }
        points.push(q);
        mults.push(c);
        sources.push(r);
    }
    FatPointConfig::new(config.n - 1, config.modulus, points, Uple::new(mults))
}

fn make_step(
    config: &FatPointConfig,
    active: usize,
    level: u32,
    m: u32,
    realized_increment: u64,
) -> Result<ObstructionStep> {
    let n = config.n as i64;
    let i = level - 1;
    let induced_config = induced_w_config(config, active, i, m)?;
    let induced_h = hpts_rank(&induced_config, i)?;
    let slice = binomial_u64(n + i as i64 - 1, n - 1);
    let point_degree = binomial_u64(n + level as i64 - 1, n);
    Ok(ObstructionStep {
        active_point_index: active,
        level,
        induced_config,
        step_bound: slice - induced_h.value,
        realized_increment,
        rho_degree: binomial_u64(n + level as i64 - 2, n) + induced_h.value,
        gamma_degree: point_degree - realized_increment,
        induced_h,
    })
}

/// One increment: `Z` plus `new_point` raised from multiplicity `k-1` to `k`,
/// with the realized gain measured by two independent rank computations.
pub fn key_step_bound(
    config_so_far: &FatPointConfig,
    new_point: &[u64],
    k: u32,
    m: u32,
) -> Result<ObstructionStep> {
    if k == 0 {
        return Err(Error::Precondition(
            "step multiplicity must be positive".into(),
        ));
    }
    let with = |mult: u32| -> Result<FatPointConfig> {
        let mut points = config_so_far.points.clone();
        let mut mults = config_so_far.mults.entries().to_vec();
        if mult > 0 {
            points.push(new_point.to_vec());
            mults.push(mult as i64);
        }
        FatPointConfig::new(
            config_so_far.n,
            config_so_far.modulus,
            points,
            Uple::new(mults),
        )
    };
    let full = with(k)?;
    let after = hpts_rank(&full, m)?.value;
    let before = hpts_rank(&with(k - 1)?, m)?.value;
    let step = make_step(&full, config_so_far.len(), k, m, after - before)?;
    debug_assert!(step.realized_increment <= step.step_bound);
    Ok(step)
}

/// The full bound for an explicit configuration, points taken in the given
/// order. One elimination pass yields every intermediate rank.
pub fn ubda_bound(config: &FatPointConfig, m: u32) -> Result<UbdaReport> {
    let field = slicing_field(config)?;
    field.require_above(m.max(config.max_mult()) as u64)?;
    let basis = MonomialBasis::new(config.n, m);
    let mut echelon = EchelonBasis::new(field, basis.len());
    let mut steps = Vec::new();
    for (j, (p, &k)) in config.points.iter().zip(config.mults.entries()).enumerate() {
        for i in 0..k as u32 {
            let before = echelon.rank();
            if i <= m && !echelon.is_full() {
                echelon.extend(derivative_rows_of_order(field, &basis, p, i)?);
            }
            steps.push(make_step(
                config,
                j,
                i + 1,
                m,
                (echelon.rank() - before) as u64,
            )?);
        }
    }
    let direct = echelon.rank() as u64;
    let induced: u64 = steps.iter().map(|s| s.induced_h.value).sum();
    let bound = config.degree() - induced;
    Ok(UbdaReport {
        config: config.clone(),
        m,
        direct_h: HilbertValue {
            value: direct,
            method: Method::RankOracle,
            modulus: config.modulus,
            seed: None,
            trials: 1,
        },
        bound,
        steps,
        only_linear: direct == bound,
        aborts: 0,
    })
}

/// [`ubda_bound`] on seeded random points, resampling when induced points
/// coincide.
pub fn ubda_generic(n: u32, mults: &Uple, m: u32, modulus: u64, seed: u64) -> Result<UbdaReport> {
    let mut aborts = 0;
    for trial in 0..MAX_ATTEMPTS {
        let config = FatPointConfig::generic(n, mults, modulus, seed, trial)?;
        match ubda_bound(&config, m) {
            Err(Error::DegenerateInducedConfig { .. }) => aborts += 1,
            Err(e) => return Err(e),
            Ok(mut report) => {
                report.aborts = aborts;
                report.direct_h.seed = Some(seed);
                return Ok(report);
            }
        }
    }
    Err(Error::Precondition(format!(
        "{MAX_ATTEMPTS} samples in a row had coinciding induced points"
    )))
}

/// Outcome of comparing `Z` with its decrement `Z^{-1}` (every multiplicity
/// lowered by one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lconj2Outcome {
    /// `deg Z^{-1} - h(Z^{-1}, m-1)`.
    pub alpha: u64,
    pub h: u64,
    pub degree: u64,
    /// `h(Z, m) ≤ deg Z - alpha`.
    pub holds: bool,
}

pub fn lconj2_check(config: &FatPointConfig, m: u32) -> Result<Lconj2Outcome> {
    if m == 0 {
        return Err(Error::Precondition(
            "the decrement comparison needs m ≥ 1".into(),
        ));
    }
    let (points, mults): (Vec<_>, Vec<_>) = config
        .points
        .iter()
        .zip(config.mults.entries())
        .filter(|&(_, &k)| k > 1)
        .map(|(p, &k)| (p.clone(), k - 1))
        .unzip();
    let lower = FatPointConfig::new(config.n, config.modulus, points, Uple::new(mults))?;
    let alpha = lower.degree() - hpts_rank(&lower, m - 1)?.value;
    let h = hpts_rank(config, m)?.value;
    let degree = config.degree();
    Ok(Lconj2Outcome {
        alpha,
        h,
        degree,
        holds: h + alpha <= degree,
    })
}

/// Rank of `config` with the active point at a reduced multiplicity; used by
/// tests to check the one-pass prefix ranks.
#[cfg(test)]
fn prefix_rank(config: &FatPointConfig, j: usize, level: u32, m: u32) -> u64 {
    use crate::interpolation::derivative_rows;
    let field = config.field();
    let basis = MonomialBasis::new(config.n, m);
    let mut e = EchelonBasis::new(field, basis.len());
    for (r, (p, &k)) in config
        .points
        .iter()
        .zip(config.mults.entries())
        .enumerate()
        .take(j + 1)
    {
        let k = if r == j { level } else { k as u32 };
        e.extend(derivative_rows(field, &basis, p, k).unwrap());
    }
    e.rank() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjectural::g;
    use crate::DEFAULT_MODULUS as P;
    use num_bigint::BigUint;

    fn u(v: &[i64]) -> Uple {
        Uple::new(v.to_vec())
    }

    fn report(n: u32, a: &[i64], m: u32) -> UbdaReport {
        ubda_generic(n, &u(a), m, P, 0).unwrap()
    }

    #[test]
    fn induced_examples() {
        let config =
            FatPointConfig::new(2, P, vec![vec![1, 0, 0], vec![1, 1, 2]], u(&[2, 2])).unwrap();
        let w = induced_w_config(&config, 1, 1, 2).unwrap();
        assert_eq!(w.n, 1);
        assert_eq!(w.mults, u(&[1]));
        assert_eq!(w.points, vec![vec![1, 2]]);
        assert!(induced_w_config(&config, 1, 0, 2).unwrap().is_empty());

        let on_plane =
            FatPointConfig::new(2, P, vec![vec![0, 1, 0], vec![1, 1, 2]], u(&[2, 2])).unwrap();
        assert!(matches!(
            induced_w_config(&on_plane, 1, 1, 2),
            Err(Error::PointOnSlicingHyperplane(0))
        ));
    }

    #[test]
    fn collinear_priors_are_degenerate() {
        let config = FatPointConfig::new(
            2,
            P,
            vec![vec![1, 0, 0], vec![1, 2, 0], vec![1, 1, 0]],
            u(&[2, 2, 2]),
        )
        .unwrap();
        assert!(matches!(
            induced_w_config(&config, 2, 1, 2),
            Err(Error::DegenerateInducedConfig {
                active: 2,
                first: 0,
                second: 1
            })
        ));
    }

    #[test]
    fn projective_line_merges_into_one_point() {
        let config = FatPointConfig::new(
            1,
            P,
            vec![vec![1, 0], vec![1, 1], vec![1, 2]],
            u(&[3, 2, 2]),
        )
        .unwrap();
        let w = induced_w_config(&config, 2, 1, 2).unwrap();
        assert_eq!((w.points.clone(), w.mults), (vec![vec![1]], u(&[2])));
    }

    #[test]
    fn ubda_examples() {
        let r = report(2, &[2, 2], 2);
        assert_eq!((r.bound, r.direct_h.value, r.only_linear), (5, 5, true));
        let induced: Vec<u64> = r.steps.iter().map(|s| s.induced_h.value).collect();
        assert_eq!(induced, vec![0, 0, 0, 1]);

        let r = report(2, &[1, 1], 1);
        assert_eq!((r.bound, r.direct_h.value), (2, 2));

        let r = report(2, &[1], 3);
        assert_eq!((r.bound, r.direct_h.value), (1, 1));

        // the conic through five points is not a linear obstruction
        let r = report(2, &[2; 5], 4);
        assert_eq!(r.direct_h.value, 14);
        assert_eq!(r.bound, 15);
        assert!(!r.only_linear);
    }

    #[test]
    fn key_step_examples() {
        let q = FatPointConfig::new(2, P, vec![vec![1, 5, 7]], u(&[2])).unwrap();
        let s = key_step_bound(&q, &[1, 3, 11], 2, 2).unwrap();
        assert_eq!(s.induced_h.value, 1);
        assert_eq!((s.step_bound, s.realized_increment), (1, 1));

        let empty = FatPointConfig::new(2, P, vec![], u(&[])).unwrap();
        let s = key_step_bound(&empty, &[1, 3, 11], 1, 3).unwrap();
        assert!(s.induced_config.is_empty());
        assert_eq!((s.step_bound, s.realized_increment), (1, 1));

        let q3 = FatPointConfig::new(2, P, vec![vec![1, 5, 7]], u(&[3])).unwrap();
        let s = key_step_bound(&q3, &[1, 3, 11], 3, 3).unwrap();
        assert_eq!(s.induced_config.mults, u(&[2]));
        assert_eq!(s.induced_h.value, 2);
    }

    #[test]
    fn steps_compose_to_the_bound() {
        for (n, a, m) in [
            (2, vec![3, 2, 2], 4),
            (3, vec![2, 2, 2, 1], 3),
            (2, vec![4, 3, 2, 2, 1], 5),
        ] {
            let r = report(n, &a, m);
            let c = &r.config;
            let mut sum = 0;
            for s in &r.steps {
                let j = s.active_point_index;
                let so_far = FatPointConfig::new(
                    c.n,
                    c.modulus,
                    c.points[..j].to_vec(),
                    Uple::new(c.mults.entries()[..j].to_vec()),
                )
                .unwrap();
                let alone = key_step_bound(&so_far, &c.points[j], s.level, m).unwrap();
                assert_eq!(&alone, s);
                assert_eq!(
                    s.realized_increment,
                    prefix_rank(c, j, s.level, m) - prefix_rank(c, j, s.level - 1, m)
                );
                sum += s.step_bound;
            }
            assert_eq!(sum, r.bound);
        }
    }

    #[test]
    fn telescoping_single_point() {
        for n in 1..5i64 {
            for k in 1..7i64 {
                let sum: u64 = (0..k).map(|i| binomial_u64(n + i - 1, n - 1)).sum();
                assert_eq!(sum, binomial_u64(n + k - 1, n));
            }
        }
        let r = report(3, &[4], 6);
        assert_eq!(r.bound, 20);
        assert_eq!(r.direct_h.value, 20);
    }

    #[test]
    fn dominance_and_accounting_on_a_grid() {
        for n in 1..4 {
            for a in [
                vec![1, 1, 1],
                vec![2, 2, 1],
                vec![3, 2, 2, 1],
                vec![2, 2, 2, 2, 2],
                vec![4, 2, 2, 2],
            ] {
                for m in 0..8 {
                    for seed in 0..3 {
                        let r = ubda_generic(n, &u(&a), m, P, seed).unwrap();
                        assert!(r.bound >= r.direct_h.value, "{n} {a:?} {m}");
                        for s in &r.steps {
                            assert!(s.realized_increment <= s.step_bound);
                            assert!(s.gamma_degree >= s.rho_degree);
                        }
                        let cells_g = g(n, &u(&a), m);
                        if !cells_g.is_full() && r.induced_match_g() {
                            assert_eq!(BigUint::from(r.bound), cells_g.value);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lconj2_examples_and_grid() {
        let c = FatPointConfig::generic(2, &u(&[2, 2]), P, 0, 0).unwrap();
        let o = lconj2_check(&c, 2).unwrap();
        assert_eq!((o.alpha, o.h, o.degree, o.holds), (0, 5, 6, true));
        let c = FatPointConfig::generic(2, &u(&[1]), P, 0, 0).unwrap();
        assert!(lconj2_check(&c, 3).unwrap().holds);
        for (n, a, m) in [
            (3, vec![2, 2, 2], 2),
            (2, vec![3, 3, 2, 2, 2], 4),
            (3, vec![4, 3, 2], 5),
        ] {
            let c = FatPointConfig::generic(n, &u(&a), P, 0, 0).unwrap();
            assert!(lconj2_check(&c, m).unwrap().holds);
        }
    }

    #[test]
    fn serializes_every_step() {
        let r = report(2, &[2, 2], 2);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["steps"].as_array().unwrap().len(), 4);
        assert_eq!(v["steps"][3]["induced_h"]["value"], 1);
        assert_eq!(v["only_linear"], true);
    }
}
