//! End-to-end checks of the LHV constructions.

use std::f64::consts::{FRAC_PI_2, TAU};

use pbl_core::closed_form::p_twc;
use pbl_core::lhv::sampler::sample_table;
use pbl_core::lhv::{
    build_submodel_table_gpy, build_submodel_table_twc, verify_model, verify_model_with, HiddenState, JointMethod,
    Submodel,
};
use pbl_core::Outcome;

#[test]
fn twc_model_reproduces_quantum_statistics_up_to_threshold() {
    for alpha2 in [0.05f64, 0.3025, 0.6, 0.85] {
        let table = build_submodel_table_twc(alpha2.sqrt(), 8).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let (t1, t2) = (TAU * f64::from(i) / 16.0, TAU * f64::from(j) / 16.0);
                let r = verify_model_with(&table, t1, t2, JointMethod::ClosedForm);
                assert!(r.max_deviation < 1e-9, "α² = {alpha2}: {:?}", r.worst_event);
            }
        }
    }
}

#[test]
fn larsson_quadrature_matches_closed_form_on_grid() {
    let table = build_submodel_table_twc(0.55, 6).unwrap();
    for ws in &table.submodels {
        if let Submodel::LarssonTwc(_) = ws.submodel {
            for i in 0..16 {
                for j in 0..16 {
                    let (t1, t2) = (TAU * f64::from(i) / 16.0, TAU * f64::from(j) / 16.0);
                    for e in ws.submodel.support() {
                        let q = ws.submodel.joint_quadrature(e, t1, t2);
                        let c = ws.submodel.joint_closed_form(e, t1, t2);
                        assert!((q - c).abs() < 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn responses_are_valid_for_every_submodel() {
    let tables = [
        build_submodel_table_twc(0.8, 7).unwrap(),
        build_submodel_table_gpy(0.6, 0.3, 6).unwrap(),
    ];
    for table in &tables {
        for ws in &table.submodels {
            for li in 0..64 {
                let lambda = TAU * f64::from(li) / 64.0;
                for ti in 0..16 {
                    let theta = TAU * f64::from(ti) / 16.0;
                    for coin in 0..2 {
                        let h = HiddenState::new(lambda, coin).unwrap();
                        for d in [ws.submodel.alice_response(theta, h), ws.submodel.bob_response(theta, h)] {
                            assert!((d.total() - 1.0).abs() < 1e-14);
                            assert!(d.iter().all(|(_, p)| (-1e-15..=1.0 + 1e-15).contains(&p)));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn gpy_model_matches_covered_events() {
    for (alpha2, gamma) in [(0.3f64, 0.09), (0.5, 0.5), (0.2, 0.3)] {
        let table = build_submodel_table_gpy(alpha2.sqrt(), gamma, 6).unwrap();
        for (t1, t2) in [(0.0, 0.0), (0.7, 2.1), (FRAC_PI_2, 0.3)] {
            let r = verify_model(&table, t1, t2);
            assert!(r.max_deviation < 1e-10, "{:?}", r.worst_event);
            assert_eq!(r.uncovered.len(), 9);
        }
    }
}

#[test]
fn sampled_marginal_ignores_remote_setting() {
    let alpha = 0.55;
    let table = build_submodel_table_twc(alpha, 10).unwrap();
    let trials = 1_000_000;
    let a = sample_table(&table, 0.4, 0.0, 3, trials, 16).unwrap();
    let b = sample_table(&table, 0.4, 2.0, 4, trials, 16).unwrap();
    let marginal = |s: &pbl_core::lhv::SampleCounts, local: (u32, u32)| {
        s.counts.iter().filter(|(n, _)| n.alice() == local).map(|(_, c)| *c as f64).sum::<f64>() / trials as f64
    };
    for local in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)] {
        let (pa, pb) = (marginal(&a, local), marginal(&b, local));
        let p = 0.5 * (pa + pb);
        let sd = (2.0 * p * (1.0 - p) / trials as f64).sqrt();
        assert!((pa - pb).abs() < 5.0 * sd.max(1e-9), "{local:?}: {pa} vs {pb}");
    }
    let p = p_twc(Outcome::new(0, 1, 0, 1), alpha, 0.4).unwrap();
    let sd = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((a.frequency(Outcome::new(0, 1, 0, 1)) - p).abs() < 5.0 * sd);
}
