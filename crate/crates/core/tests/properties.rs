use num_bigint::BigUint;
use proptest::prelude::*;

use fatpoint_hilbert::interpolation::{hpts_generic, hpts_rank};
use fatpoint_hilbert::obstruction::ubda_bound;
use fatpoint_hilbert::scanner::{plus1_predicate, rnc_predicate, strong_scan, ScanOptions};
use fatpoint_hilbert::{g, FatPointConfig, GridSpec, Uple, DEFAULT_MODULUS};

const P: u64 = DEFAULT_MODULUS;

#[test]
fn trial_value_is_stable_across_seeds() {
    let cells: [(u32, &[i64], u32); 6] = [
        (2, &[2, 2, 1], 3),
        (2, &[3, 2, 2, 1], 4),
        (3, &[2, 2, 2, 2], 3),
        (3, &[3, 3, 2], 4),
        (2, &[2, 2, 2, 2, 2], 4),
        (4, &[2, 2, 2, 2, 2, 2], 3),
    ];
    for (n, a, m) in cells {
        let a = Uple::new(a.to_vec());
        let base = hpts_generic(n, &a, m, P, 0, 1).unwrap().value;
        let same = (0..20)
            .filter(|&s| hpts_generic(n, &a, m, P, s, 1).unwrap().value == base)
            .count();
        assert!(same >= 19, "n={n} A=({a}) m={m}: {same}/20 seeds agree");
    }
}

#[test]
fn plus1_cells_attain_g() {
    for n in 1..=3u32 {
        for k in 2..=4u32 {
            for d in 1..=6u32 {
                if !plus1_predicate(n, d, k).unwrap() {
                    continue;
                }
                let a = Uple::homogeneous(k as i64, d as usize);
                let h = hpts_generic(n, &a, k + 1, P, 0, 3).unwrap().value;
                assert_eq!(BigUint::from(h), g(n, &a, k + 1).value, "n={n} d={d} k={k}");
            }
        }
    }
}

#[test]
fn rnc_cells_attain_g() {
    for n in 1..=3u32 {
        for d in 1..=(n + 1) as usize {
            for k in 1..=4 {
                for m in 0..=8 {
                    let a = Uple::homogeneous(k, d);
                    if !rnc_predicate(n, &a, m) {
                        continue;
                    }
                    let h = hpts_generic(n, &a, m, P, 0, 3).unwrap().value;
                    assert_eq!(BigUint::from(h), g(n, &a, m).value, "n={n} A=({a}) m={m}");
                }
            }
        }
    }
}

#[test]
fn strong_scan_in_plane_has_no_unexpected_cells() {
    let grid = GridSpec::new(2, (1, 9), (1, 4), (0, 12)).homogeneous();
    let report = strong_scan(&grid, ScanOptions::default(), None).unwrap();
    let first = report
        .counterexample_candidates
        .first()
        .map(|&i| report.records[i].to_string());
    assert!(report.counterexample_candidates.is_empty(), "{first:?}");
    assert!(!report.exceptions_attaining_g.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn explicit_points_bounded_by_generic_and_ubda(
        pts in prop::collection::vec(prop::collection::vec(1u64..50, 3), 1..5),
        mults in prop::collection::vec(1i64..4, 4),
        m in 0u32..7,
    ) {
        let d = pts.len();
        let a = Uple::new(mults[..d].to_vec());
        let Ok(config) = FatPointConfig::new(2, P, pts, a.clone()) else {
            return Ok(());
        };
        let special = hpts_rank(&config, m).unwrap().value;
        let generic = hpts_generic(2, &a, m, P, 0, 3).unwrap().value;
        prop_assert!(special <= generic);
        if let Ok(r) = ubda_bound(&config, m) {
            prop_assert!(r.bound >= special);
        }
    }
}
