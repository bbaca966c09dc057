//! Full LHV model for the single-photon source.
//!
//! Events with setting-independent probability come from trivial
//! submodels. Each interference orbit `(k,l,r,s)`, `k>l`, `r>s`, gets a
//! Larsson-type submodel of weight `2πB`, whose leakage into the zero-count
//! events `(k,l,0,0)` and `(0,0,r,s)` is compensated by trivial submodels of
//! weight `Δ`.

use std::f64::consts::{E, PI, TAU};

use serde::Serialize;

use super::{HiddenState, LocalDistribution, Submodel, SubmodelTable, TableSource, WeightedSubmodel};
use crate::closed_form::{b_prefactor, p_twc, visibility};
use crate::error::{check_amplitude, Error, Result};
use crate::fock::SourceSpec;
use crate::outcome::Outcome;
use crate::special::{bessel_i0, factorial, lambert_w0};

/// Probability of each zero-count event inside one Larsson submodel.
pub const ZERO_EVENT_PROBABILITY: f64 = 0.25 - 1.0 / TAU;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LarssonTwc {
    outcome: Outcome,
    visibility: f64,
}

impl LarssonTwc {
    /// Submodel for the orbit of `n`; requires `k > l` and `r > s`.
    pub fn new(n: Outcome) -> Result<Self> {
        if n.k <= n.l || n.r <= n.s {
            return Err(Error::OutcomeNotCovered(n));
        }
        Ok(LarssonTwc {
            outcome: n,
            visibility: visibility(n)?,
        })
    }

    pub fn outcome(&self) -> Outcome {
        self.outcome
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    /// Four interference events followed by four zero-count events.
    pub fn support(&self) -> [Outcome; 8] {
        let n = self.outcome;
        let (a, b) = (n.alice(), n.bob());
        let (sa, sb) = ((a.1, a.0), (b.1, b.0));
        [
            n,
            n.swap_alice(),
            n.swap_bob(),
            n.swap_alice().swap_bob(),
            Outcome::from_local((0, 0), b),
            Outcome::from_local((0, 0), sb),
            Outcome::from_local(a, (0, 0)),
            Outcome::from_local(sa, (0, 0)),
        ]
    }

    /// Integrated joint probability as a function of `θ12 = θ1 − θ2`.
    pub fn joint_closed_form(&self, event: Outcome, theta12: f64) -> Result<f64> {
        let support = self.support();
        match support.iter().position(|&s| s == event) {
            Some(i) if i < 4 => {
                let sign = if (event.k > event.l) == (event.r > event.s) { 1.0 } else { -1.0 };
                Ok((1.0 + self.visibility * sign * theta12.sin()) / TAU)
            }
            Some(_) => Ok(ZERO_EVENT_PROBABILITY),
            None => Err(Error::OutcomeNotCovered(event)),
        }
    }
}

/// Alice's response. For `x = 0` she uses the modulated rule on
/// `sin(θ − λ)`; for `x = 1` the deterministic rule on `cos(θ − λ)`.
pub fn alice_response_twc(sub: &LarssonTwc, theta: f64, hidden: HiddenState) -> LocalDistribution {
    let (plus, minus) = (sub.outcome.alice(), sub.outcome.swap_alice().alice());
    let phase = theta - hidden.lambda();
    if hidden.coin() == 0 {
        LocalDistribution::modulated(sub.visibility, phase.sin(), plus, minus)
    } else {
        LocalDistribution::heaviside(phase.cos(), plus, minus)
    }
}

/// Bob's response, with the roles of the two rules exchanged relative to
/// Alice. In the modulated branch the argument is `sin(λ − θ)`.
pub fn bob_response_twc(sub: &LarssonTwc, theta: f64, hidden: HiddenState) -> LocalDistribution {
    let (plus, minus) = (sub.outcome.bob(), sub.outcome.swap_bob().bob());
    if hidden.coin() == 0 {
        LocalDistribution::heaviside((theta - hidden.lambda()).cos(), plus, minus)
    } else {
        LocalDistribution::modulated(sub.visibility, (hidden.lambda() - theta).sin(), plus, minus)
    }
}

/// Joint probability of `event` by quadrature of the defining λ-integral.
pub fn joint_probability_analytic(sub: &LarssonTwc, event: Outcome, theta1: f64, theta2: f64) -> Result<f64> {
    if !sub.support().contains(&event) {
        return Err(Error::OutcomeNotCovered(event));
    }
    Ok(Submodel::LarssonTwc(*sub).joint_quadrature(event, theta1, theta2))
}

fn check_unequal(k: u32, l: u32) -> Result<()> {
    if k == l {
        return Err(Error::InvalidParameter {
            name: "k",
            value: f64::from(k),
            reason: "Δ is defined for k ≠ l only",
        });
    }
    Ok(())
}

fn delta_prefactor(k: u32, l: u32, x: f64) -> f64 {
    (-2.0 * x).exp() * 2f64.powi(-(k as i32) - (l as i32) - 3) * x.powi(k as i32 + l as i32 - 1)
        / (factorial(k) * factorial(l))
}

/// Exact weight `Δ_(k,l,0,0)` of the compensating trivial submodel with all
/// Larsson orbits included. By symmetry it also equals `Δ_(0,0,k,l)`.
pub fn delta_twc(k: u32, l: u32, alpha: f64) -> Result<f64> {
    check_unequal(k, l)?;
    check_amplitude(alpha)?;
    let x = alpha * alpha;
    let d2 = (f64::from(k) - f64::from(l)).powi(2);
    let bracket = -(PI - 2.0) * x.exp() * (x + d2) + (PI - 2.0) * bessel_i0(x) * d2 + 4.0 * d2;
    Ok(delta_prefactor(k, l, x) * bracket)
}

/// `Δ_(k,l,0,0)` with `I0` replaced by its lower bound 1. It never exceeds
/// the exact value.
pub fn delta_twc_lower_bound(k: u32, l: u32, alpha: f64) -> Result<f64> {
    check_unequal(k, l)?;
    check_amplitude(alpha)?;
    let x = alpha * alpha;
    let d2 = (f64::from(k) - f64::from(l)).powi(2);
    let bracket = -(PI - 2.0) * x.exp() * (x + d2) + (PI + 2.0) * d2;
    Ok(delta_prefactor(k, l, x) * bracket)
}

/// Largest `α²` for which the lower bound on `Δ_(1,0,0,0)` is non-negative:
/// `W((2e + eπ)/(π − 2)) − 1`.
pub fn alpha_threshold_twc() -> f64 {
    lambert_w0((2.0 * E + E * PI) / (PI - 2.0)) - 1.0
}

/// Same threshold from bisection on `π + 2 − (π − 2)(1 + α²)e^{α²} = 0`.
pub fn alpha_threshold_twc_bisection() -> f64 {
    let g = |x: f64| PI + 2.0 - (PI - 2.0) * (1.0 + x) * x.exp();
    let (mut lo, mut hi) = (0.0, 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn is_zero_event(n: Outcome) -> bool {
    (n.r == 0 && n.s == 0 && n.k != n.l) || (n.k == 0 && n.l == 0 && n.r != n.s)
}

fn ordered(pair: (u32, u32)) -> (u32, u32) {
    (pair.0.max(pair.1), pair.0.min(pair.1))
}

/// Weights: `2πB` per Larsson orbit, `p(n)` for the remaining
/// setting-independent events and `Δ` (restricted to the included orbits)
/// for the zero-count events. Zero-probability trivial events are omitted.
pub fn build_submodel_table_twc(alpha: f64, cutoff: u32) -> Result<SubmodelTable> {
    check_amplitude(alpha)?;
    let x = alpha * alpha;
    let threshold = alpha_threshold_twc();
    if x <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "model needs alpha > 0",
        });
    }
    if x >= threshold {
        let event = Outcome::new(1, 0, 0, 0);
        return Err(Error::NegativeWeight {
            event,
            value: delta_twc_lower_bound(1, 0, alpha)?,
            alpha2: x,
            threshold,
        });
    }

    let events = Outcome::enumerate(cutoff);
    let mut larsson = Vec::new();
    for &n in &events {
        if n.k > n.l && n.r > n.s {
            larsson.push((LarssonTwc::new(n)?, b_prefactor(n, alpha)?));
        }
    }

    let mut submodels = Vec::with_capacity(events.len());
    for &n in &events {
        if n.k != n.l && n.r != n.s {
            continue;
        }
        let p = p_twc(n, alpha, 0.0)?;
        if is_zero_event(n) {
            let (key, by_alice) = if n.bob() == (0, 0) {
                (ordered(n.alice()), true)
            } else {
                (ordered(n.bob()), false)
            };
            let leaked: f64 = larsson
                .iter()
                .filter(|(sub, _)| {
                    let o = sub.outcome();
                    if by_alice { o.alice() == key } else { o.bob() == key }
                })
                .map(|(_, b)| b)
                .sum();
            let delta = p - (PI / 2.0 - 1.0) * leaked;
            if delta < 0.0 {
                return Err(Error::NegativeWeight {
                    event: n,
                    value: delta,
                    alpha2: x,
                    threshold,
                });
            }
            submodels.push(WeightedSubmodel {
                submodel: Submodel::TrivialTwc(n),
                weight: delta,
            });
        } else if p > 0.0 {
            submodels.push(WeightedSubmodel {
                submodel: Submodel::TrivialTwc(n),
                weight: p,
            });
        }
    }
    for (sub, b) in larsson {
        submodels.push(WeightedSubmodel {
            submodel: Submodel::LarssonTwc(sub),
            weight: TAU * b,
        });
    }

    Ok(SubmodelTable {
        source: TableSource::Twc { alpha },
        cutoff,
        submodels,
        expected_deficit: SourceSpec::twc(alpha, 0.0, 0.0).truncation_tail(cutoff),
    })
}
