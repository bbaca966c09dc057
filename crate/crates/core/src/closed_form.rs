//! Closed-form detection probabilities.
//!
//! * the single-photon (TWC) homodyne statistics `p(n)`,
//! * the squeezed-vacuum (GPY) four-photon tables for class-1 and (2&2)
//!   events,
//! * on/off event probabilities for both sources.
//!
//! # Angle convention of the GPY tables
//!
//! The GPY rows are written in terms of `cos(θ1 + θ2)`. With the
//! beamsplitter convention of [`crate::fock`], they hold when each table angle
//! is the local-oscillator phase advanced by a quarter period:
//! `θ_j(table) = θ_j(LO) + π/2`. [`gpy_table_angles`] performs that mapping.
//! All `p_gpy_*` functions take table angles.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_amplitude, check_squeezing, check_unit_interval, Error, Result};
use crate::outcome::Outcome;
use crate::special::factorial;

fn check_positive_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(alpha)
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "closed form needs alpha > 0 (A(α, n) contains 1/(2α²))",
        })
    }
}

/// `A(α, n) = e^{−2α²} (α²/2)^{k+l+r+s} / (2α² k! l! r! s!)`.
pub fn a_prefactor(n: Outcome, alpha: f64) -> Result<f64> {
    check_positive_alpha(alpha)?;
    let x = alpha * alpha;
    let fact = factorial(n.k) * factorial(n.l) * factorial(n.r) * factorial(n.s);
    Ok((-2.0 * x).exp() * (x / 2.0).powi(n.total() as i32) / (2.0 * x * fact))
}

fn diffs(n: Outcome) -> (f64, f64) {
    (
        f64::from(n.k) - f64::from(n.l),
        f64::from(n.r) - f64::from(n.s),
    )
}

/// Single-photon source probability
/// `A(α,n)[(k−l)² + (r−s)² + 2(k−l)(r−s) sin θ12]`.
pub fn p_twc(n: Outcome, alpha: f64, theta12: f64) -> Result<f64> {
    let a = a_prefactor(n, alpha)?;
    let (dk, dr) = diffs(n);
    Ok(a * (dk * dk + dr * dr + 2.0 * dk * dr * theta12.sin()))
}

/// `B(α,n) = A(α,n)[(k−l)² + (r−s)²]`.
pub fn b_prefactor(n: Outcome, alpha: f64) -> Result<f64> {
    let a = a_prefactor(n, alpha)?;
    let (dk, dr) = diffs(n);
    Ok(a * (dk * dk + dr * dr))
}

/// Fringe visibility `2(k−l)(r−s) / ((k−l)² + (r−s)²)`.
pub fn visibility(n: Outcome) -> Result<f64> {
    let (dk, dr) = diffs(n);
    if dk == 0.0 || dr == 0.0 {
        return Err(Error::UndefinedVisibility(n));
    }
    Ok(2.0 * dk * dr / (dk * dk + dr * dr))
}

/// Maps local-oscillator phases to the angle convention of the GPY tables.
pub fn gpy_table_angles(theta1_lo: f64, theta2_lo: f64) -> (f64, f64) {
    (theta1_lo + FRAC_PI_2, theta2_lo + FRAC_PI_2)
}

/// `P(0,0,0,0) = e^{−2α²}(1 − γ²)`.
pub fn gpy_vacuum_probability(alpha: f64, gamma: f64) -> f64 {
    (-2.0 * alpha * alpha).exp() * (1.0 - gamma * gamma)
}

/// One row of the class-1 table: `p(n)/P0 = A/P0 · (α⁴ + c_gamma γ² + c_cos α²γ cos(θ1+θ2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Class1Row {
    pub orbit: &'static [Outcome],
    /// `A/P0 = a_coef · (α²)^a_power`
    pub a_coef: f64,
    pub a_power: i32,
    pub c_gamma: f64,
    pub c_cos: f64,
}

impl Class1Row {
    pub fn a_over_p0(&self, alpha: f64) -> f64 {
        self.a_coef * (alpha * alpha).powi(self.a_power)
    }

    /// `α⁴ + c_gamma γ²`, the setting-independent part of the bracket.
    pub fn flat_part(&self, alpha: f64, gamma: f64) -> f64 {
        alpha.powi(4) + self.c_gamma * gamma * gamma
    }

    pub fn probability(&self, alpha: f64, gamma: f64, theta_sum: f64) -> f64 {
        gpy_vacuum_probability(alpha, gamma)
            * self.a_over_p0(alpha)
            * (self.flat_part(alpha, gamma) + self.c_cos * alpha * alpha * gamma * theta_sum.cos())
    }
}

const fn o(k: u32, l: u32, r: u32, s: u32) -> Outcome {
    Outcome::new(k, l, r, s)
}

pub static CLASS1_ROWS: [Class1Row; 8] = [
    Class1Row { orbit: &[o(0, 1, 0, 1), o(1, 0, 1, 0)], a_coef: 0.25, a_power: 0, c_gamma: 1.0, c_cos: 2.0 },
    Class1Row {
        orbit: &[o(0, 1, 0, 2), o(0, 2, 0, 1), o(1, 0, 2, 0), o(2, 0, 1, 0)],
        a_coef: 1.0 / 16.0,
        a_power: 1,
        c_gamma: 4.0,
        c_cos: 4.0,
    },
    Class1Row {
        orbit: &[o(0, 1, 0, 3), o(0, 3, 0, 1), o(1, 0, 3, 0), o(3, 0, 1, 0)],
        a_coef: 1.0 / 96.0,
        a_power: 2,
        c_gamma: 9.0,
        c_cos: 6.0,
    },
    Class1Row { orbit: &[o(0, 1, 1, 0), o(1, 0, 0, 1)], a_coef: 0.25, a_power: 0, c_gamma: 1.0, c_cos: -2.0 },
    Class1Row {
        orbit: &[o(0, 1, 1, 2), o(1, 0, 2, 1), o(1, 2, 0, 1), o(2, 1, 1, 0)],
        a_coef: 1.0 / 32.0,
        a_power: 2,
        c_gamma: 1.0,
        c_cos: 2.0,
    },
    Class1Row {
        orbit: &[o(0, 1, 2, 0), o(0, 2, 1, 0), o(1, 0, 0, 2), o(2, 0, 0, 1)],
        a_coef: 1.0 / 16.0,
        a_power: 1,
        c_gamma: 4.0,
        c_cos: -4.0,
    },
    Class1Row {
        orbit: &[o(0, 1, 2, 1), o(1, 0, 1, 2), o(1, 2, 1, 0), o(2, 1, 0, 1)],
        a_coef: 1.0 / 32.0,
        a_power: 2,
        c_gamma: 1.0,
        c_cos: -2.0,
    },
    Class1Row {
        orbit: &[o(0, 1, 3, 0), o(0, 3, 1, 0), o(1, 0, 0, 3), o(3, 0, 0, 1)],
        a_coef: 1.0 / 96.0,
        a_power: 2,
        c_gamma: 9.0,
        c_cos: -6.0,
    },
];

/// Lexicographically smallest image of `n` under the symmetries that keep a
/// GPY table row fixed: the joint swap `k↔l, r↔s` and the party exchange.
pub fn canonical_representative(n: Outcome) -> Outcome {
    let both = n.swap_alice().swap_bob();
    [n, both, n.swap_parties(), both.swap_parties()]
        .into_iter()
        .min()
        .expect("non-empty orbit")
}

pub fn class1_row(n: Outcome) -> Result<&'static Class1Row> {
    let canon = canonical_representative(n);
    CLASS1_ROWS
        .iter()
        .find(|row| canonical_representative(row.orbit[0]) == canon)
        .ok_or(Error::OutcomeNotCovered(n))
}

fn check_gpy_params(alpha: f64, gamma: f64) -> Result<()> {
    check_amplitude(alpha)?;
    check_squeezing(gamma)?;
    Ok(())
}

/// Class-1 event probability from the table (angles in table convention).
pub fn p_gpy_class1(n: Outcome, alpha: f64, gamma: f64, theta1: f64, theta2: f64) -> Result<f64> {
    check_gpy_params(alpha, gamma)?;
    Ok(class1_row(n)?.probability(alpha, gamma, theta1 + theta2))
}

/// One (2&2) row:
/// `p/P0 = pref · (α⁸ + c_const α⁴γ² + c_cos2 α⁴γ² cos 2Σ + c_cos1 α²γ(α⁴ + 2γ²) cos Σ + 4γ⁴)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoAndTwoRow {
    pub orbit: &'static [Outcome],
    pub prefactor: f64,
    pub c_const: f64,
    pub c_cos2: f64,
    pub c_cos1: f64,
}

impl TwoAndTwoRow {
    pub fn probability(&self, alpha: f64, gamma: f64, theta_sum: f64) -> f64 {
        let x = alpha * alpha;
        let g2 = gamma * gamma;
        let bracket = x.powi(4)
            + self.c_const * x * x * g2
            + self.c_cos2 * x * x * g2 * (2.0 * theta_sum).cos()
            + self.c_cos1 * x * gamma * (x * x + 2.0 * g2) * theta_sum.cos()
            + 4.0 * g2 * g2;
        gpy_vacuum_probability(alpha, gamma) * self.prefactor * bracket
    }
}

pub static TWO_AND_TWO_ROWS: [TwoAndTwoRow; 4] = [
    TwoAndTwoRow {
        orbit: &[o(0, 2, 1, 1), o(1, 1, 0, 2), o(1, 1, 2, 0), o(2, 0, 1, 1)],
        prefactor: 1.0 / 32.0,
        c_const: 0.0,
        c_cos2: -4.0,
        c_cos1: 0.0,
    },
    TwoAndTwoRow {
        orbit: &[o(0, 2, 0, 2), o(2, 0, 2, 0)],
        prefactor: 1.0 / 64.0,
        c_const: 16.0,
        c_cos2: 4.0,
        c_cos1: 8.0,
    },
    TwoAndTwoRow {
        orbit: &[o(0, 2, 2, 0), o(2, 0, 0, 2)],
        prefactor: 1.0 / 64.0,
        c_const: 16.0,
        c_cos2: 4.0,
        c_cos1: -8.0,
    },
    TwoAndTwoRow { orbit: &[o(1, 1, 1, 1)], prefactor: 1.0 / 16.0, c_const: 0.0, c_cos2: 4.0, c_cos1: 0.0 },
];

pub fn two_and_two_row(n: Outcome) -> Result<&'static TwoAndTwoRow> {
    TWO_AND_TWO_ROWS
        .iter()
        .find(|row| row.orbit.contains(&n))
        .ok_or(Error::OutcomeNotCovered(n))
}

/// (2&2) event probability from the table (angles in table convention).
pub fn p_gpy_2and2(n: Outcome, alpha: f64, gamma: f64, theta1: f64, theta2: f64) -> Result<f64> {
    check_gpy_params(alpha, gamma)?;
    Ok(two_and_two_row(n)?.probability(alpha, gamma, theta1 + theta2))
}

/// Any tabulated GPY event, class-1 or (2&2).
pub fn p_gpy_tabulated(n: Outcome, alpha: f64, gamma: f64, theta1: f64, theta2: f64) -> Result<f64> {
    p_gpy_class1(n, alpha, gamma, theta1, theta2).or_else(|_| p_gpy_2and2(n, alpha, gamma, theta1, theta2))
}

/// Event probabilities entering the CH combination.
///
/// Primed events use the local oscillator ("on" setting): a single photon in
/// `d` and none in `c`. Unprimed events have the oscillator off and count a
/// single photon at either detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnOffProbs {
    pub p_ab: f64,
    pub p_ab_prime: f64,
    pub p_a_prime_b: f64,
    pub p_a_prime_b_prime: f64,
    pub p_a: f64,
    pub p_b: f64,
}

impl OnOffProbs {
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.p_ab,
            self.p_ab_prime,
            self.p_a_prime_b,
            self.p_a_prime_b_prime,
            self.p_a,
            self.p_b,
        ]
    }
}

/// Single-photon source, oscillator phases `α1 = iα2`.
pub fn onoff_probs_twc(alpha: f64, transmittivity: f64) -> Result<OnOffProbs> {
    check_amplitude(alpha)?;
    let t = check_unit_interval("transmittivity", transmittivity)?;
    let x = alpha * alpha;
    let single = 0.5 * x * (-x).exp() * (1.0 - t);
    Ok(OnOffProbs {
        p_ab: 0.0,
        p_ab_prime: single,
        p_a_prime_b: single,
        p_a_prime_b_prime: 2.0 * x * (-2.0 * x).exp() * t * (1.0 - t),
        p_a: 0.5,
        p_b: 0.5,
    })
}

/// Squeezed-vacuum source, oscillator phases chosen for destructive
/// interference in `P(A′,B′)`.
pub fn onoff_probs_gpy(alpha: f64, gamma: f64, transmittivity: f64) -> Result<OnOffProbs> {
    check_amplitude(alpha)?;
    check_squeezing(gamma)?;
    let t = check_unit_interval("transmittivity", transmittivity)?;
    let x = alpha * alpha;
    let pair = gamma * gamma * (1.0 - gamma * gamma);
    let single = (-x).exp() * pair * t;
    Ok(OnOffProbs {
        p_ab: pair,
        p_ab_prime: single,
        p_a_prime_b: single,
        p_a_prime_b_prime: (-2.0 * x).exp() * (1.0 - gamma * gamma) * (t * gamma - x * (1.0 - t)).powi(2),
        p_a: pair,
        p_b: pair,
    })
}

/// Two-term truncated oscillators `(1 + α_j a_j†)/√(1+α²)` with equal phases,
/// signal `(b1† + b2†)/√2`.
pub fn onoff_probs_two_term(alpha: f64, transmittivity: f64) -> Result<OnOffProbs> {
    check_amplitude(alpha)?;
    let t = check_unit_interval("transmittivity", transmittivity)?;
    let x = alpha * alpha;
    let r = 1.0 - t;
    let single = r * x / (2.0 * (1.0 + x));
    Ok(OnOffProbs {
        p_ab: 0.0,
        p_ab_prime: single,
        p_a_prime_b: single,
        // (TR/2)|α1 + α2|²/(1+α²)² with α1 = α2
        p_a_prime_b_prime: 0.5 * t * r * 4.0 * x / (1.0 + x).powi(2),
        p_a: 0.5,
        p_b: 0.5,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    #[test]
    fn twc_examples() {
        let alpha: f64 = 0.55;
        let x = alpha * alpha;
        for th in [0.0, 0.4, FRAC_PI_2] {
            assert_eq!(p_twc(o(1, 1, 2, 2), alpha, th).unwrap(), 0.0);
        }
        let p = p_twc(o(0, 1, 0, 1), alpha, FRAC_PI_2).unwrap();
        assert!((p - (-2.0 * x).exp() * x / 2.0).abs() < 1e-16);
        let p = p_twc(o(2, 0, 1, 0), alpha, 0.0).unwrap();
        assert!((p - 5.0 * (-2.0 * x).exp() * x * x / 32.0).abs() < 1e-16);
        assert!(p_twc(o(1, 0, 0, 0), 0.0, 0.0).is_err());
    }

    #[test]
    fn visibility_examples() {
        assert_eq!(visibility(o(1, 0, 1, 0)).unwrap(), 1.0);
        assert_eq!(visibility(o(1, 0, 0, 1)).unwrap(), -1.0);
        assert!((visibility(o(2, 0, 1, 0)).unwrap() - 0.8).abs() < 1e-15);
        assert!(visibility(o(1, 1, 1, 0)).is_err());
        assert!(visibility(o(1, 0, 2, 2)).is_err());
    }

    #[test]
    fn b_prefactor_examples() {
        let alpha = 0.7;
        let a = |n| a_prefactor(n, alpha).unwrap();
        let b = |n| b_prefactor(n, alpha).unwrap();
        assert!((b(o(1, 0, 1, 0)) - 2.0 * a(o(1, 0, 1, 0))).abs() < 1e-16);
        assert!((b(o(1, 1, 0, 1)) - a(o(1, 1, 0, 1))).abs() < 1e-16);
        for n in [o(1, 0, 1, 0), o(3, 1, 0, 2), o(0, 2, 1, 0)] {
            assert!((p_twc(n, alpha, 0.0).unwrap() - b(n)).abs() < 1e-16);
        }
    }

    #[test]
    fn class1_examples() {
        let (alpha, gamma, t1, t2): (f64, f64, f64, f64) = (0.6, 0.2, 0.3, 0.5);
        let p0 = gpy_vacuum_probability(alpha, gamma);
        let (x, c) = (alpha * alpha, (t1 + t2).cos());
        let p = p_gpy_class1(o(0, 1, 0, 1), alpha, gamma, t1, t2).unwrap();
        assert!((p - p0 * 0.25 * (x * x + 2.0 * x * gamma * c + gamma * gamma)).abs() < 1e-16);
        let p = p_gpy_class1(o(0, 1, 1, 0), alpha, gamma, t1, t2).unwrap();
        assert!((p - p0 * 0.25 * (x * x - 2.0 * x * gamma * c + gamma * gamma)).abs() < 1e-16);
        let p = p_gpy_class1(o(0, 1, 0, 3), alpha, gamma, t1, t2).unwrap();
        let want = p0 * x * x / 96.0 * (x * x + 6.0 * x * gamma * c + 9.0 * gamma * gamma);
        assert!((p - want).abs() < 1e-17);
        assert!(matches!(
            p_gpy_class1(o(1, 1, 1, 1), alpha, gamma, t1, t2),
            Err(Error::OutcomeNotCovered(_))
        ));
    }

    #[test]
    fn class1_orbits_are_closed_and_disjoint() {
        let mut seen = Vec::new();
        for (i, row) in CLASS1_ROWS.iter().enumerate() {
            for &n in row.orbit {
                assert!(!seen.contains(&n), "{n} listed twice");
                seen.push(n);
                assert!(std::ptr::eq(class1_row(n).unwrap(), &CLASS1_ROWS[i]));
                // single swaps land in the row with opposite cosine sign
                let flipped = class1_row(n.swap_alice()).unwrap();
                assert_eq!(flipped.c_cos, -row.c_cos);
                assert_eq!(flipped.c_gamma, row.c_gamma);
            }
        }
        assert_eq!(seen.len(), 28);
    }

    #[test]
    fn class1_depends_on_angle_sum_only() {
        for row in &CLASS1_ROWS {
            let n = row.orbit[0];
            let p = p_gpy_class1(n, 0.5, 0.3, 0.4, 0.9).unwrap();
            let q = p_gpy_class1(n, 0.5, 0.3, 0.4 + 1.7, 0.9 - 1.7).unwrap();
            assert!((p - q).abs() < 1e-16);
        }
    }

    #[test]
    fn two_and_two_examples() {
        let (alpha, gamma, t1, t2): (f64, f64, f64, f64) = (0.6, 0.25, 0.2, 0.1);
        let p0 = gpy_vacuum_probability(alpha, gamma);
        let (x, c2) = (alpha * alpha, (2.0 * (t1 + t2)).cos());
        let g2 = gamma * gamma;
        let p = p_gpy_2and2(o(1, 1, 1, 1), alpha, gamma, t1, t2).unwrap();
        assert!((p - p0 / 16.0 * (x.powi(4) + 4.0 * x * x * g2 * c2 + 4.0 * g2 * g2)).abs() < 1e-17);
        let p = p_gpy_2and2(o(0, 2, 1, 1), alpha, gamma, t1, t2).unwrap();
        assert!((p - p0 / 32.0 * (x.powi(4) - 4.0 * x * x * g2 * c2 + 4.0 * g2 * g2)).abs() < 1e-17);
        let p = p_gpy_2and2(o(0, 2, 0, 2), alpha, 0.0, t1, t2).unwrap();
        assert!((p - gpy_vacuum_probability(alpha, 0.0) * x.powi(4) / 64.0).abs() < 1e-17);
        assert!(p_gpy_2and2(o(0, 1, 0, 1), alpha, gamma, t1, t2).is_err());
    }

    #[test]
    fn onoff_twc_values() {
        let alpha = 0.196f64.sqrt();
        let p = onoff_probs_twc(alpha, 0.804).unwrap();
        assert!((p.p_a_prime_b_prime - 0.0417).abs() < 5e-5);
        assert!((p.p_a_prime_b - 0.0157).abs() < 1e-4);
        assert_eq!(p.p_ab_prime, p.p_a_prime_b);
        for (a, t) in [(0.0, 0.0), (0.4, 0.3), (1.0, 1.0)] {
            let p = onoff_probs_twc(a, t).unwrap();
            assert_eq!((p.p_ab, p.p_a, p.p_b), (0.0, 0.5, 0.5));
        }
    }

    #[test]
    fn onoff_gpy_values() {
        let p = onoff_probs_gpy(0.2f64.sqrt(), 0.175, 0.799).unwrap();
        assert!((p.p_ab - 0.0299).abs() < 5e-4);
        assert!((p.p_a_prime_b_prime - 0.0065).abs() < 5e-4);
        let (alpha, t): (f64, f64) = (0.5, 0.7);
        let p = onoff_probs_gpy(alpha, 0.0, t).unwrap();
        let x = alpha * alpha;
        assert_eq!([p.p_ab, p.p_ab_prime, p.p_a_prime_b, p.p_a, p.p_b], [0.0; 5]);
        assert!((p.p_a_prime_b_prime - (-2.0 * x).exp() * x * x * (1.0 - t).powi(2)).abs() < 1e-16);
        assert!(onoff_probs_gpy(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn table_angles_shift_each_phase() {
        let (a, b) = gpy_table_angles(0.1, -0.2);
        assert!((a + b - (PI - 0.1)).abs() < 1e-15);
    }
}
