use pbl_core::closed_form::p_twc;
use pbl_core::lhv::gpy::{gpy_alpha2_window, gpy_threshold_diagonal};
use pbl_core::lhv::sampler::{sample_table, DEFAULT_STREAMS};
use pbl_core::lhv::twc::alpha_threshold_twc_bisection;
use pbl_core::lhv::{
    alpha_threshold_twc, build_submodel_table_gpy, build_submodel_table_twc, delta_twc, verify_model, SubmodelTable,
};
use pbl_core::Outcome;

use super::outcome_cells;
use crate::args::{LhvAction, Params, Setup};
use crate::error::CliError;
use crate::record::{Cell, ResultRecord, Table};

pub fn run(action: LhvAction, p: &Params) -> Result<ResultRecord, CliError> {
    match action {
        LhvAction::Verify => verify(p),
        LhvAction::Sample => sample(p),
        LhvAction::Threshold => threshold(p),
    }
}

fn model_table(p: &Params, rec: &mut ResultRecord, default_cutoff: u32) -> Result<(SubmodelTable, f64, f64), CliError> {
    let setup = p.setup(&[Setup::Twc, Setup::Gpy])?;
    let alpha2 = p.require_alpha2()?;
    let cutoff = p.cutoff_or(default_cutoff)?;
    rec.param("setup", setup.name()).param("alpha2", alpha2).param("cutoff", cutoff);
    match setup {
        Setup::Twc => {
            let (t1, t2) = p.lo_phases()?;
            rec.param("theta1", t1).param("theta2", t2);
            Ok((build_submodel_table_twc(alpha2.sqrt(), cutoff)?, t1, t2))
        }
        _ => {
            let gamma = p.require_gamma()?;
            let (a1, a2) = p.table_angles()?;
            rec.param("gamma", gamma).param("theta1_table", a1).param("theta2_table", a2);
            Ok((build_submodel_table_gpy(alpha2.sqrt(), gamma, cutoff)?, a1, a2))
        }
    }
}

fn verify(p: &Params) -> Result<ResultRecord, CliError> {
    let mut rec = ResultRecord::new("lhv verify");
    let (table, t1, t2) = model_table(p, &mut rec, 8)?;
    let report = verify_model(&table, t1, t2);
    let mut out = Table::new(&["k", "l", "r", "s", "model", "quantum", "deviation"]);
    for d in &report.deviations {
        let mut row = outcome_cells(d.event);
        row.extend([Cell::from(d.model), Cell::from(d.quantum), Cell::from(d.deviation)]);
        out.push(row);
    }
    let mut uncovered = Table::new(&["k", "l", "r", "s"]);
    for &n in &report.uncovered {
        uncovered.push(outcome_cells(n));
    }
    rec.scalar("max_deviation", report.max_deviation)
        .scalar("worst_event", report.worst_event.map_or(Cell::Null, |n| n.to_string().into()))
        .scalar("events_checked", report.events_checked)
        .scalar("submodels", table.submodels.len())
        .scalar("total_weight", table.total_weight())
        .table("deviations", out)
        .table("uncovered", uncovered);
    Ok(rec)
}

/// Events with at least this many expected counts enter the z-score check.
const Z_MIN_EXPECTED: f64 = 100.0;

fn sample(p: &Params) -> Result<ResultRecord, CliError> {
    let mut rec = ResultRecord::new("lhv sample");
    if p.setup(&[Setup::Twc, Setup::Gpy])? != Setup::Twc {
        return Err(CliError::Invalid("sampling supports --setup twc only".into()));
    }
    let (table, t1, t2) = model_table(p, &mut rec, 12)?;
    let trials = p.n.unwrap_or(1_000_000);
    let seed = p.seed.unwrap_or(0);
    if trials == 0 {
        return Err(CliError::Invalid("--n must be at least 1".into()));
    }
    rec.param("n", trials).param("seed", seed).param("streams", DEFAULT_STREAMS);
    let counts = sample_table(&table, t1, t2, seed, trials, DEFAULT_STREAMS)?;
    let alpha = table.alpha();

    let mut out = Table::new(&["k", "l", "r", "s", "count", "frequency", "probability", "expected", "z"]);
    let mut max_z = 0.0f64;
    for n in Outcome::enumerate(table.cutoff) {
        let prob = p_twc(n, alpha, t1 - t2)?;
        let expected = prob * trials as f64;
        let count = counts.count(n);
        if count == 0 && expected < 1.0 {
            continue;
        }
        let z = (expected > 0.0).then(|| (count as f64 - expected) / (expected * (1.0 - prob)).sqrt());
        if expected >= Z_MIN_EXPECTED {
            max_z = max_z.max(z.unwrap_or(0.0).abs());
        }
        let mut row = outcome_cells(n);
        row.extend([
            Cell::from(count),
            Cell::from(counts.frequency(n)),
            Cell::from(prob),
            Cell::from(expected),
            Cell::from(z),
        ]);
        out.push(row);
    }
    rec.scalar("max_abs_z", max_z)
        .scalar("z_min_expected", Z_MIN_EXPECTED)
        .scalar("tail_count", counts.tail)
        .table("counts", out);
    Ok(rec)
}

fn threshold(p: &Params) -> Result<ResultRecord, CliError> {
    let setup = p.setup(&[Setup::Twc, Setup::Gpy])?;
    let mut rec = ResultRecord::new("lhv threshold");
    rec.param("setup", setup.name());
    match setup {
        Setup::Twc => {
            // zero of the exact Δ(1,0,0,0), which includes the Bessel term
            let (mut lo, mut hi) = (0.5f64, 1.5f64);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if delta_twc(1, 0, mid.sqrt())? > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            rec.scalar("alpha2_threshold", alpha_threshold_twc())
                .scalar("alpha2_threshold_bisection", alpha_threshold_twc_bisection())
                .scalar("alpha2_exact_delta_zero", 0.5 * (lo + hi));
        }
        _ => {
            let mut curve = Table::new(&["gamma", "alpha2_lower", "alpha2_upper"]);
            for i in 0..20 {
                let gamma = f64::from(i) * 0.05;
                let (lo, hi) = match gpy_alpha2_window(gamma) {
                    Ok((lo, hi)) => (Some(lo), Some(hi)),
                    Err(_) => (None, None),
                };
                curve.push(vec![Cell::from(gamma), Cell::from(lo), Cell::from(hi)]);
            }
            rec.scalar("alpha2_threshold_diagonal", gpy_threshold_diagonal())
                .table("boundary", curve);
        }
    }
    Ok(rec)
}
