//! Partial LHV model for the squeezed-vacuum source.
//!
//! Covers the class-1 events (one party sees a single photon, the other up
//! to three), every event in which one party sees nothing, and nothing else.
//! All angles are in the convention of the closed-form GPY tables (see
//! [`crate::closed_form::gpy_table_angles`]).

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::{LocalDistribution, Party, Submodel, SubmodelTable, TableSource, WeightedSubmodel};
use crate::closed_form::{class1_row, gpy_vacuum_probability, Class1Row};
use crate::error::{check_amplitude, check_squeezing, Error, Result};
use crate::outcome::{LocalOutcome, Outcome};
use crate::special::factorial;

/// Probability of each zero-count event inside one submodel.
pub const ZERO_EVENT_PROBABILITY: f64 = 0.5 - 1.0 / PI;

/// Count pairs of the multi-photon party for each submodel. The `(0,1)`
/// orbit is carried by Alice alone.
const SUBMODEL_PAIRS: [(Party, LocalOutcome); 7] = [
    (Party::Alice, (0, 1)),
    (Party::Alice, (0, 2)),
    (Party::Alice, (0, 3)),
    (Party::Alice, (1, 2)),
    (Party::Bob, (0, 2)),
    (Party::Bob, (0, 3)),
    (Party::Bob, (1, 2)),
];

const SINGLE_PLUS: LocalOutcome = (1, 0);
const SINGLE_MINUS: LocalOutcome = (0, 1);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LarssonGpy {
    /// Party with the modulated response.
    pub modulated_party: Party,
    pub plus: LocalOutcome,
    pub minus: LocalOutcome,
    pub c_gamma: f64,
    pub c_cos: f64,
    pub visibility: f64,
}

fn joint(party: Party, multi: LocalOutcome, single: LocalOutcome) -> Outcome {
    match party {
        Party::Alice => Outcome::from_local(multi, single),
        Party::Bob => Outcome::from_local(single, multi),
    }
}

impl LarssonGpy {
    fn new(party: Party, pair: LocalOutcome, alpha: f64, gamma: f64) -> Result<(Self, &'static Class1Row)> {
        let row = class1_row(joint(party, pair, SINGLE_PLUS))?;
        let swapped = (pair.1, pair.0);
        let (plus, minus) = if row.c_cos > 0.0 { (pair, swapped) } else { (swapped, pair) };
        let flat = row.flat_part(alpha, gamma);
        let visibility = row.c_cos.abs() * alpha * alpha * gamma / flat;
        Ok((
            LarssonGpy {
                modulated_party: party,
                plus,
                minus,
                c_gamma: row.c_gamma,
                c_cos: row.c_cos.abs(),
                visibility,
            },
            row,
        ))
    }

    pub fn support(&self) -> [Outcome; 6] {
        let p = self.modulated_party;
        [
            joint(p, self.plus, SINGLE_PLUS),
            joint(p, self.plus, SINGLE_MINUS),
            joint(p, self.minus, SINGLE_PLUS),
            joint(p, self.minus, SINGLE_MINUS),
            joint(p, (0, 0), SINGLE_PLUS),
            joint(p, (0, 0), SINGLE_MINUS),
        ]
    }

    pub(crate) fn response(&self, party: Party, theta: f64, lambda: f64) -> LocalDistribution {
        if party == self.modulated_party {
            LocalDistribution::modulated(self.visibility, (theta - lambda).cos(), self.plus, self.minus)
        } else {
            LocalDistribution::heaviside((theta + lambda).cos(), SINGLE_PLUS, SINGLE_MINUS)
        }
    }

    /// Integrated joint probability as a function of `θ1 + θ2`.
    pub fn joint_closed_form(&self, event: Outcome, theta_sum: f64) -> Result<f64> {
        match self.support().iter().position(|&s| s == event) {
            Some(i) if i < 4 => {
                let sign = if i == 0 || i == 3 { 1.0 } else { -1.0 };
                Ok((1.0 + sign * self.visibility * theta_sum.cos()) / TAU)
            }
            Some(_) => Ok(ZERO_EVENT_PROBABILITY),
            None => Err(Error::OutcomeNotCovered(event)),
        }
    }
}

/// Response of `party` in submodel `sub` for table angle `theta` and hidden `λ`.
pub fn gpy_response(sub: &LarssonGpy, party: Party, theta: f64, lambda: f64) -> Result<LocalDistribution> {
    let d = sub.response(party, theta, lambda);
    d.validate("squeezed-vacuum submodel response")?;
    Ok(d)
}

/// Probability of an event in which at least one party sees no photons,
/// for a balanced beamsplitter.
pub fn p_gpy_one_side_empty(n: Outcome, alpha: f64, gamma: f64) -> Result<f64> {
    check_amplitude(alpha)?;
    check_squeezing(gamma)?;
    let (busy, empty) = if n.alice() == (0, 0) { (n.bob(), n.alice()) } else { (n.alice(), n.bob()) };
    if empty != (0, 0) {
        return Err(Error::OutcomeNotCovered(n));
    }
    let half = alpha * alpha / 2.0;
    Ok(gpy_vacuum_probability(alpha, gamma) * half.powi((busy.0 + busy.1) as i32)
        / (factorial(busy.0) * factorial(busy.1)))
}

/// `Δ_(0,0,0,1)` from the closed polynomial: the most restrictive
/// compensating weight of the model.
pub fn delta_gpy(alpha: f64, gamma: f64) -> Result<f64> {
    check_amplitude(alpha)?;
    check_squeezing(gamma)?;
    let x = alpha * alpha;
    let g2 = gamma * gamma;
    let poly = 2.0 * x.powi(4) + 3.0 * x.powi(3) + 6.0 * x * x * (g2 + 2.0) + 12.0 * x * g2 + 12.0 * g2;
    Ok(gpy_vacuum_probability(alpha, gamma) * (x / 2.0 - (PI - 2.0) / 48.0 * poly))
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `α²` at which `Δ_(0,0,0,1)` changes sign along `γ = α²`.
pub fn gpy_threshold_diagonal() -> f64 {
    let f = |x: f64| delta_gpy(x.sqrt(), x).unwrap_or(f64::NAN);
    bisect(f, 0.3, 0.9)
}

/// Interval of `α²` (within `(0, 2]`) on which `Δ_(0,0,0,1) ≥ 0` for fixed
/// `γ`.
pub fn gpy_alpha2_window(gamma: f64) -> Result<(f64, f64)> {
    check_squeezing(gamma)?;
    let f = |x: f64| delta_gpy(x.sqrt(), gamma).unwrap_or(f64::NAN);
    let grid: Vec<f64> = (1..=2000).map(|i| f64::from(i) * 1e-3).collect();
    let first = grid.iter().position(|&x| f(x) >= 0.0).ok_or(Error::NoRoot("Δ(0,0,0,1) window"))?;
    let lower = if first == 0 { 0.0 } else { bisect(f, grid[first - 1], grid[first]) };
    let upper = match grid[first..].iter().position(|&x| f(x) < 0.0) {
        Some(i) => bisect(f, grid[first + i - 1], grid[first + i]),
        None => return Err(Error::NoRoot("Δ(0,0,0,1) upper boundary")),
    };
    Ok((lower, upper))
}

/// Class-1 Larsson submodels of weight `2π·A·(α⁴ + c_gamma γ²)`, trivial
/// submodels for events with an empty side, and compensating weights for the
/// four single-photon events.
pub fn build_submodel_table_gpy(alpha: f64, gamma: f64, cutoff: u32) -> Result<SubmodelTable> {
    check_amplitude(alpha)?;
    check_squeezing(gamma)?;
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "model needs alpha > 0",
        });
    }
    let mut larsson = Vec::with_capacity(SUBMODEL_PAIRS.len());
    for (party, pair) in SUBMODEL_PAIRS {
        let (sub, row) = LarssonGpy::new(party, pair, alpha, gamma)?;
        let weight = TAU * gpy_vacuum_probability(alpha, gamma) * row.a_over_p0(alpha) * row.flat_part(alpha, gamma);
        larsson.push(WeightedSubmodel {
            submodel: Submodel::LarssonGpy(sub),
            weight,
        });
    }

    let threshold = gpy_threshold_diagonal();
    let mut submodels = Vec::new();
    for n in Outcome::enumerate(cutoff) {
        if n.alice() != (0, 0) && n.bob() != (0, 0) {
            continue;
        }
        let p = p_gpy_one_side_empty(n, alpha, gamma)?;
        let leaked: f64 = larsson
            .iter()
            .filter(|ws| ws.submodel.support()[4..].contains(&n))
            .map(|ws| ws.weight * ZERO_EVENT_PROBABILITY)
            .sum();
        let weight = p - leaked;
        if weight < 0.0 {
            return Err(Error::NegativeWeight {
                event: n,
                value: weight,
                alpha2: alpha * alpha,
                threshold,
            });
        }
        submodels.push(WeightedSubmodel {
            submodel: Submodel::TrivialGpy(n),
            weight,
        });
    }
    submodels.extend(larsson);
    let total: f64 = submodels.iter().map(|s| s.weight).sum();
    Ok(SubmodelTable {
        source: TableSource::Gpy { alpha, gamma },
        cutoff,
        submodels,
        expected_deficit: 1.0 - total,
    })
}

/// Events the model is known not to reproduce.
pub fn uncovered_events() -> Vec<Outcome> {
    crate::closed_form::TWO_AND_TWO_ROWS
        .iter()
        .flat_map(|row| row.orbit.iter().copied())
        .collect()
}
