use pbl_core::closed_form::{p_gpy_tabulated, p_twc};
use pbl_core::fock::{probability_table, SourceSpec};

use super::{lo_from_table, outcome_cells};
use crate::args::{Params, Setup};
use crate::error::CliError;
use crate::record::{Cell, ResultRecord, Table};

const COLUMNS: [&str; 8] = ["k", "l", "r", "s", "oracle", "closed_form", "abs_diff", "source"];

pub fn run(setup: Setup, p: &Params) -> Result<ResultRecord, CliError> {
    let alpha2 = p.require_alpha2()?;
    let alpha = alpha2.sqrt();
    let cutoff = p.cutoff_or(8)?;
    let t = p.transmittivity_or(0.5)?;
    // the closed forms describe a balanced beamsplitter
    let balanced = t == 0.5;
    let mut rec = ResultRecord::new(&format!("prob {}", setup.name()));
    rec.param("alpha2", alpha2).param("cutoff", cutoff).param("transmittivity", t);

    let (source, closed): (SourceSpec, Box<dyn Fn(pbl_core::Outcome) -> Option<f64>>) = match setup {
        Setup::Twc => {
            let (t1, t2) = p.lo_phases()?;
            rec.param("theta1", t1).param("theta2", t2);
            (
                SourceSpec::twc(alpha, t1, t2),
                Box::new(move |n| balanced.then(|| p_twc(n, alpha, t1 - t2).ok()).flatten()),
            )
        }
        Setup::Gpy => {
            let gamma = p.require_gamma()?;
            let (a1, a2) = p.table_angles()?;
            let (t1, t2) = lo_from_table(a1, a2);
            rec.param("gamma", gamma).param("theta1", t1).param("theta2", t2).param("theta_sum", a1 + a2);
            (
                SourceSpec::gpy(alpha, gamma, t1, t2),
                Box::new(move |n| balanced.then(|| p_gpy_tabulated(n, alpha, gamma, a1, a2).ok()).flatten()),
            )
        }
        Setup::TwoTerm => return Err(CliError::Invalid("prob supports --setup twc or gpy".into())),
    };

    let table = probability_table(&source, t, cutoff)?;
    let mut out = Table::new(&COLUMNS);
    let (mut total, mut worst) = (0.0, 0.0f64);
    for (n, oracle) in table {
        total += oracle;
        let cf = closed(n);
        let diff = cf.map(|c| (c - oracle).abs());
        if let Some(d) = diff {
            worst = worst.max(d);
        }
        let mut row = outcome_cells(n);
        row.extend([
            Cell::from(oracle),
            Cell::from(cf),
            Cell::from(diff),
            Cell::from(if cf.is_some() { "closed-form" } else { "oracle-only" }),
        ]);
        out.push(row);
    }
    rec.scalar("oracle_total", total)
        .scalar("truncation_tail", source.truncation_tail(cutoff))
        .scalar("max_abs_diff", worst)
        .table("probabilities", out);
    Ok(rec)
}
