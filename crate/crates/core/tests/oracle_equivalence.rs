//! Fock-space oracle against the closed-form probabilities.

use std::f64::consts::FRAC_PI_2;

use pbl_core::closed_form::{gpy_table_angles, p_gpy_class1, p_gpy_2and2, p_twc, CLASS1_ROWS, TWO_AND_TWO_ROWS};
use pbl_core::fock::{probability_table, SourceSpec};
use pbl_core::lhv::gpy::p_gpy_one_side_empty;
use pbl_core::Outcome;

#[test]
fn single_photon_table_matches_formula() {
    for alpha in [0.2, 0.55, 1.1] {
        for (t1, t2) in [(0.0, 0.0), (1.3, 0.2), (-0.4, 2.9)] {
            let table = probability_table(&SourceSpec::twc(alpha, t1, t2), 0.5, 7).unwrap();
            for (n, p) in &table {
                let want = p_twc(*n, alpha, t1 - t2).unwrap();
                assert!((p - want).abs() < 1e-12, "{n}: {p} vs {want}");
            }
        }
    }
}

#[test]
fn zero_photon_event_never_fires() {
    let table = probability_table(&SourceSpec::twc(0.7, 0.1, 0.2), 0.5, 4).unwrap();
    assert_eq!(table[&Outcome::new(0, 0, 0, 0)], 0.0);
}

#[test]
fn squeezed_rows_need_the_quarter_period_shift() {
    let (alpha, gamma) = (0.5, 0.25);
    let (t1, t2) = (0.3, 0.2);
    let table = probability_table(&SourceSpec::gpy(alpha, gamma, t1, t2), 0.5, 8).unwrap();
    let n = Outcome::new(0, 1, 0, 1);
    let (a1, a2) = gpy_table_angles(t1, t2);
    let shifted = p_gpy_class1(n, alpha, gamma, a1, a2).unwrap();
    let literal = p_gpy_class1(n, alpha, gamma, t1, t2).unwrap();
    assert!((table[&n] - shifted).abs() < 1e-14);
    assert!((table[&n] - literal).abs() > 1e-4);
}

#[test]
fn squeezed_rows_match_oracle() {
    for (alpha, gamma) in [(0.3, 0.05), (0.7, 0.4), (0.9, 0.6)] {
        for (t1, t2) in [(0.0, FRAC_PI_2), (1.0, 1.0), (2.2, -0.5)] {
            let table = probability_table(&SourceSpec::gpy(alpha, gamma, t1, t2), 0.5, 8).unwrap();
            let (a1, a2) = gpy_table_angles(t1, t2);
            for row in &CLASS1_ROWS {
                for n in row.orbit {
                    let want = p_gpy_class1(*n, alpha, gamma, a1, a2).unwrap();
                    assert!((table[n] - want).abs() < 1e-13, "{n}");
                }
            }
            for row in &TWO_AND_TWO_ROWS {
                for n in row.orbit {
                    let want = p_gpy_2and2(*n, alpha, gamma, a1, a2).unwrap();
                    assert!((table[n] - want).abs() < 1e-13, "{n}");
                }
            }
        }
    }
}

#[test]
fn one_side_empty_events_match_oracle() {
    let (alpha, gamma) = (0.6, 0.3);
    let table = probability_table(&SourceSpec::gpy(alpha, gamma, 0.4, 1.7), 0.5, 8).unwrap();
    for (n, p) in &table {
        if n.alice() == (0, 0) || n.bob() == (0, 0) {
            let want = p_gpy_one_side_empty(*n, alpha, gamma).unwrap();
            assert!((p - want).abs() < 1e-14, "{n}");
        }
    }
}
