//! Closed-form kernels against brute-force enumeration.

mod support;

use fflab::field::{Fq, Laurent};
use fflab::haar::{strip_measure, ExactMeasure, UltraBall};

const INSTANCES: usize = 200;

fn check(name: &str, f: fn(&Fq, u64, usize) -> support::Tally, seed: u64, need_both: bool) {
    for p in [2, 3] {
        let fq = Fq::prime(p).unwrap();
        let t = f(&fq, seed + p as u64, INSTANCES);
        assert_eq!(t.mismatches, 0, "{name} q={p}: {:?}", t.first);
        if need_both {
            // both outcomes occur, so agreement is not vacuous
            assert!(t.positives >= 20 && t.instances - t.positives >= 20, "{name} q={p}: {t:?}");
        }
    }
}

#[test]
fn sup_linear_matches_grid_maximum() {
    check("sup", support::sup_linear, 80, false);
}

#[test]
fn fractional_part_matches_enumerated_p() {
    check("fractional part", support::fractional_part, 90, false);
}

#[test]
fn strip_measure_matches_cell_count() {
    check("strip measure", support::strip, 100, true);
}

#[test]
fn membership_matches_enumerated_p() {
    check("membership", support::membership, 110, true);
}

#[test]
fn strip_measure_drops_negligible_uncertified_slopes() {
    let fq = Fq::prime(2).unwrap();
    let b = UltraBall::unit(1);
    // slope known only as O(T^-10): it moves the value by < 2^-9 on B
    let beta = vec![Laurent::big_o(-9)];
    let y = Laurent::t_pow(-3);
    assert_eq!(strip_measure(&beta, &y, 2, &b, &fq).unwrap(), ExactMeasure::q_pow(2, 0));
    assert_eq!(strip_measure(&beta, &y, 3, &b, &fq).unwrap(), ExactMeasure::zero(2));
    assert_eq!(strip_measure(&beta, &y, 9, &b, &fq).unwrap(), ExactMeasure::zero(2));
    // below that the unknown slope matters
    assert!(strip_measure(&beta, &y, 10, &b, &fq).is_err());
}
