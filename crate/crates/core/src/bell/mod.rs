//! Bell-inequality evaluators and parameter optimization.

use serde::Serialize;

pub mod cglmp;
pub mod ch;
pub mod chsh;
pub mod optimize;

pub use cglmp::{cglmp_mixing_bound, cglmp_value, lambda_mix, CglmpAssignment, CountTable};
pub use ch::{two_term_boundary, two_term_ch, ch_value, optimize_ch_gpy, optimize_ch_twc, ChOptimum};
pub use chsh::{chsh_value, chsh_violation_boundary, intensity_correlation, optimize_chsh_settings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Chsh,
    Ch,
    Cglmp4,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ParameterPoint {
    pub alpha2: Option<f64>,
    pub gamma: Option<f64>,
    pub transmittivity: Option<f64>,
    pub settings: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellResult {
    pub inequality: Inequality,
    pub point: ParameterPoint,
    pub value: f64,
    /// `None` when the inequality is one-sided.
    pub lower_bound: Option<f64>,
    pub upper_bound: f64,
    pub violated: bool,
}

impl BellResult {
    pub fn new(inequality: Inequality, point: ParameterPoint, value: f64) -> Self {
        let (lower_bound, upper_bound) = match inequality {
            Inequality::Chsh => (Some(-2.0), 2.0),
            Inequality::Ch => (Some(-1.0), 0.0),
            Inequality::Cglmp4 => (None, 2.0),
        };
        let violated = value > upper_bound || lower_bound.is_some_and(|lo| value < lo);
        BellResult {
            inequality,
            point,
            value,
            lower_bound,
            upper_bound,
            violated,
        }
    }
}
