//! Clauser–Horne inequality with local oscillators switched on and off.

use serde::Serialize;

use super::optimize::{axis, grid_min, nelder_mead};
use super::{BellResult, Inequality, ParameterPoint};
use crate::closed_form::{onoff_probs_gpy, onoff_probs_twc, onoff_probs_two_term, OnOffProbs};
use crate::error::{check_amplitude, check_unit_interval, Error, Result};

pub const GRID_STEP: f64 = 0.02;
const SIMPLEX_TOL: f64 = 1e-6;

/// `P(A,B) + P(A,B′) + P(A′,B) − P(A′,B′) − P(A) − P(B)`, local bounds
/// `[−1, 0]`.
pub fn ch_value(probs: &OnOffProbs) -> Result<BellResult> {
    ch_value_at(probs, ParameterPoint::default())
}

pub fn ch_value_at(probs: &OnOffProbs, point: ParameterPoint) -> Result<BellResult> {
    for p in probs.as_array() {
        check_unit_interval("probability", p)?;
    }
    let value = probs.p_ab + probs.p_ab_prime + probs.p_a_prime_b
        - probs.p_a_prime_b_prime
        - probs.p_a
        - probs.p_b;
    Ok(BellResult::new(Inequality::Ch, point, value))
}

/// Interval of transmittivity, `(½e^{α²}, 1)`, on which the single-photon
/// CH value drops below −1.
pub fn twc_violation_window(alpha2: f64) -> (f64, f64) {
    (0.5 * alpha2.exp(), 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChOptimum {
    pub alpha2: f64,
    pub gamma: Option<f64>,
    pub transmittivity: f64,
    pub value: f64,
    pub probs: OnOffProbs,
    /// Transmittivity window `(lower, upper)` required for a violation.
    pub window: (f64, f64),
    pub result: BellResult,
}

fn inside_unit(p: &[f64]) -> bool {
    p.iter().all(|&v| v > 0.0 && v < 1.0)
}

fn twc_ch(alpha2: f64, t: f64) -> Result<(OnOffProbs, BellResult)> {
    let probs = onoff_probs_twc(alpha2.sqrt(), t)?;
    let point = ParameterPoint {
        alpha2: Some(alpha2),
        transmittivity: Some(t),
        ..Default::default()
    };
    Ok((probs, ch_value_at(&probs, point)?))
}

fn gpy_ch(alpha2: f64, gamma: f64, t: f64) -> Result<(OnOffProbs, BellResult)> {
    let probs = onoff_probs_gpy(alpha2.sqrt(), gamma, t)?;
    let point = ParameterPoint {
        alpha2: Some(alpha2),
        gamma: Some(gamma),
        transmittivity: Some(t),
        ..Default::default()
    };
    Ok((probs, ch_value_at(&probs, point)?))
}

/// Minimizes the single-photon CH value over `(α², T) ∈ (0,1)²`.
pub fn optimize_ch_twc() -> Result<ChOptimum> {
    let objective = |p: &[f64]| {
        if !inside_unit(p) {
            return f64::INFINITY;
        }
        twc_ch(p[0], p[1]).map_or(f64::INFINITY, |(_, r)| r.value)
    };
    let axes = vec![axis(GRID_STEP, 1.0, GRID_STEP), axis(GRID_STEP, 1.0, GRID_STEP)];
    let coarse = grid_min(objective, &axes);
    let fine = nelder_mead(objective, &coarse.point, GRID_STEP / 2.0, SIMPLEX_TOL, 10_000);
    let (alpha2, t) = (fine.point[0], fine.point[1]);
    let (probs, result) = twc_ch(alpha2, t)?;
    Ok(ChOptimum {
        alpha2,
        gamma: None,
        transmittivity: t,
        value: result.value,
        probs,
        window: twc_violation_window(alpha2),
        result,
    })
}

/// Maximizes the squeezed-vacuum CH value over `(α², γ, T) ∈ (0,1)³`.
pub fn optimize_ch_gpy() -> Result<ChOptimum> {
    let objective = |p: &[f64]| {
        if !inside_unit(p) {
            return f64::INFINITY;
        }
        gpy_ch(p[0], p[1], p[2]).map_or(f64::INFINITY, |(_, r)| -r.value)
    };
    let ax = axis(GRID_STEP, 1.0, GRID_STEP);
    let coarse = grid_min(objective, &[ax.clone(), ax.clone(), ax]);
    let fine = nelder_mead(objective, &coarse.point, GRID_STEP / 2.0, SIMPLEX_TOL, 10_000);
    let (alpha2, gamma, t) = (fine.point[0], fine.point[1], fine.point[2]);
    let (probs, result) = gpy_ch(alpha2, gamma, t)?;
    Ok(ChOptimum {
        alpha2,
        gamma: Some(gamma),
        transmittivity: t,
        value: result.value,
        probs,
        window: (0.5, 1.0),
        result,
    })
}

/// CH value with two-term truncated oscillators of equal phase.
pub fn two_term_ch(alpha: f64, transmittivity: f64) -> Result<BellResult> {
    let probs = onoff_probs_two_term(alpha, transmittivity)?;
    let point = ParameterPoint {
        alpha2: Some(alpha * alpha),
        transmittivity: Some(transmittivity),
        ..Default::default()
    };
    ch_value_at(&probs, point)
}

/// Transmittivity at which the two-term CH value reaches −1, by bisection
/// on `[½, 1]`.
pub fn two_term_boundary(alpha: f64) -> Result<f64> {
    check_amplitude(alpha)?;
    let excess = |t: f64| two_term_ch(alpha, t).map(|r| r.value + 1.0);
    let (mut lo, mut hi) = (0.5, 1.0 - 1e-12);
    if excess(lo)? <= 0.0 || excess(hi)? >= 0.0 {
        return Err(Error::NoRoot("two-term CH boundary"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
