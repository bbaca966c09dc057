pub mod bell;
pub mod lhv;
pub mod prob;

use std::f64::consts::FRAC_PI_2;

use pbl_core::Outcome;

use crate::record::Cell;

pub(crate) fn outcome_cells(n: Outcome) -> Vec<Cell> {
    n.as_array().iter().map(|&c| Cell::from(c)).collect()
}

/// Oscillator phases that realise the given table-convention angles.
pub(crate) fn lo_from_table(t1: f64, t2: f64) -> (f64, f64) {
    (t1 - FRAC_PI_2, t2 - FRAC_PI_2)
}
