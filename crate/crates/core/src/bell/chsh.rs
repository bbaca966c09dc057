//! Intensity-correlation CHSH test for the single-photon source.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::optimize::nelder_mead;
use super::{BellResult, Inequality, ParameterPoint};
use crate::error::{check_amplitude, Error, Result};
use crate::fock::{probability_table, SourceSpec};

/// Grid step for the setting search.
pub const SETTING_STEP: f64 = PI / 90.0;

/// `⟨(N_c1 − N_d1)(N_c2 − N_d2)⟩ / ⟨(N_c1 + N_d1)(N_c2 + N_d2)⟩` from the
/// Fock-space table with a balanced beamsplitter.
pub fn intensity_correlation(alpha: f64, theta1: f64, theta2: f64, cutoff: u32) -> Result<f64> {
    check_amplitude(alpha)?;
    if alpha == 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "correlation needs alpha > 0",
        });
    }
    let table = probability_table(&SourceSpec::twc(alpha, theta1, theta2), 0.5, cutoff)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (n, p) in table {
        let (k, l, r, s) = (f64::from(n.k), f64::from(n.l), f64::from(n.r), f64::from(n.s));
        num += p * (k - l) * (r - s);
        den += p * (k + l) * (r + s);
    }
    assert!(den > 0.0, "zero coincidence intensity");
    Ok(num / den)
}

/// `|E(θ1,θ2) + E(θ1,θ2′) + E(θ1′,θ2) − E(θ1′,θ2′)|` for settings
/// `[θ1, θ1′, θ2, θ2′]`.
pub fn chsh_value(alpha: f64, settings: [f64; 4], cutoff: u32) -> Result<BellResult> {
    let [a, a2, b, b2] = settings;
    let e = |x: f64, y: f64| intensity_correlation(alpha, x, y, cutoff);
    let value = (e(a, b)? + e(a, b2)? + e(a2, b)? - e(a2, b2)?).abs();
    Ok(BellResult::new(
        Inequality::Chsh,
        ParameterPoint {
            alpha2: Some(alpha * alpha),
            settings: settings.to_vec(),
            ..Default::default()
        },
        value,
    ))
}

/// Maximizes the CHSH value over settings. The correlation depends on the
/// setting difference only, so `θ2 = 0` is fixed and the other three angles
/// are scanned on a `π/90` grid, then refined by simplex search.
pub fn optimize_chsh_settings(alpha: f64, cutoff: u32) -> Result<BellResult> {
    let steps = (TAU / SETTING_STEP).round() as usize;
    let table: Vec<f64> = (0..steps)
        .into_par_iter()
        .map(|j| intensity_correlation(alpha, j as f64 * SETTING_STEP, 0.0, cutoff))
        .collect::<Result<_>>()?;
    let e = |j: isize| table[j.rem_euclid(steps as isize) as usize];

    let mut best = (f64::NEG_INFINITY, [0isize; 3]);
    let candidates: Vec<(f64, [isize; 3])> = (0..steps as isize)
        .into_par_iter()
        .map(|a| {
            let mut local = (f64::NEG_INFINITY, [0isize; 3]);
            for a2 in 0..steps as isize {
                for b2 in 0..steps as isize {
                    let v = (e(a) + e(a - b2) + e(a2) - e(a2 - b2)).abs();
                    if v > local.0 {
                        local = (v, [a, a2, b2]);
                    }
                }
            }
            local
        })
        .collect();
    for c in candidates {
        if c.0 > best.0 {
            best = c;
        }
    }

    let start: Vec<f64> = best.1.iter().map(|&i| i as f64 * SETTING_STEP).collect();
    let objective = |p: &[f64]| {
        chsh_value(alpha, [p[0], p[1], 0.0, p[2]], cutoff).map_or(f64::INFINITY, |r| -r.value)
    };
    let refined = nelder_mead(objective, &start, SETTING_STEP, 1e-6, 2000);
    let p = if -refined.value >= best.0 { refined.point } else { start };
    chsh_value(alpha, [p[0], p[1], 0.0, p[2]], cutoff)
}

/// `α²` at which the optimized CHSH value crosses 2, by bisection on
/// `[lo, hi]`.
pub fn chsh_violation_boundary(lo: f64, hi: f64, cutoff: u32) -> Result<f64> {
    let excess = |x: f64| optimize_chsh_settings(x.sqrt(), cutoff).map(|r| r.value - 2.0);
    let (mut lo, mut hi) = (lo, hi);
    if excess(lo)? <= 0.0 || excess(hi)? > 0.0 {
        return Err(Error::NoRoot("CHSH violation boundary"));
    }
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    #[test]
    fn correlation_properties() {
        let alpha = 0.5;
        assert!(intensity_correlation(alpha, 0.7, 0.7, 10).unwrap().abs() < 1e-12);
        for d in [0.3, 1.0, 2.5] {
            let plus = intensity_correlation(alpha, d, 0.0, 10).unwrap();
            let minus = intensity_correlation(alpha, 0.0, d, 10).unwrap();
            assert!((plus + minus).abs() < 1e-12);
        }
        for j in 0..36 {
            let e = intensity_correlation(alpha, f64::from(j) * 0.1745, 0.2, 10).unwrap();
            assert!(e.abs() <= 1.0);
        }
        assert!(intensity_correlation(0.0, 0.0, 0.0, 10).is_err());
    }

    #[test]
    fn degenerate_settings() {
        let alpha = 0.4;
        let r = chsh_value(alpha, [FRAC_PI_2, FRAC_PI_2, 0.0, 0.0], 10).unwrap();
        let e = intensity_correlation(alpha, FRAC_PI_2, 0.0, 10).unwrap();
        assert!((r.value - 2.0 * e.abs()).abs() < 1e-12);
        assert!(r.value <= 2.0 && !r.violated);
    }
}
