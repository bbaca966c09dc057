//! Local hidden-variable models for the two homodyne experiments.
//!
//! A model is a convex combination of submodels. Each submodel shares a
//! hidden state `(λ, x)` between the parties, and every party answers from
//! its own setting and the hidden state alone.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::outcome::{LocalOutcome, Outcome};

pub mod gpy;
pub mod quadrature;
pub mod sampler;
pub mod twc;
mod verify;

pub use gpy::{build_submodel_table_gpy, gpy_response, LarssonGpy};
pub use sampler::{sample_table, sample_twc, SampleCounts};
pub use twc::{
    alice_response_twc, alpha_threshold_twc, bob_response_twc, build_submodel_table_twc, delta_twc,
    joint_probability_analytic, LarssonTwc,
};
pub use verify::{verify_model, verify_model_with, EventDeviation, JointMethod, VerificationReport};

/// Tolerance used for all λ-integrals.
pub const QUADRATURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HiddenState {
    lambda: f64,
    coin: u8,
}

impl HiddenState {
    pub fn new(lambda: f64, coin: u8) -> Result<Self> {
        if !(0.0..TAU).contains(&lambda) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must lie in [0, 2π)",
            });
        }
        if coin > 1 {
            return Err(Error::InvalidParameter {
                name: "x",
                value: f64::from(coin),
                reason: "coin must be 0 or 1",
            });
        }
        Ok(HiddenState { lambda, coin })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn coin(&self) -> u8 {
        self.coin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Party {
    Alice,
    Bob,
}

/// Probability distribution over at most three local events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDistribution {
    entries: [(LocalOutcome, f64); 3],
    len: usize,
}

impl LocalDistribution {
    pub fn certain(outcome: LocalOutcome) -> Self {
        LocalDistribution {
            entries: [(outcome, 1.0), ((0, 0), 0.0), ((0, 0), 0.0)],
            len: 1,
        }
    }

    /// `plus` if `g ≥ 0`, otherwise `minus`.
    pub(crate) fn heaviside(g: f64, plus: LocalOutcome, minus: LocalOutcome) -> Self {
        Self::certain(if g >= 0.0 { plus } else { minus })
    }

    /// `(1−V)/π + V·max(±f, 0)` on `plus`/`minus`, remainder on `(0,0)`.
    pub(crate) fn modulated(visibility: f64, f: f64, plus: LocalOutcome, minus: LocalOutcome) -> Self {
        let flat = (1.0 - visibility) / PI;
        let p_plus = flat + visibility * f.max(0.0);
        let p_minus = flat + visibility * (-f).max(0.0);
        LocalDistribution {
            entries: [(plus, p_plus), (minus, p_minus), ((0, 0), 1.0 - p_plus - p_minus)],
            len: 3,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (LocalOutcome, f64)> + '_ {
        self.entries[..self.len].iter().copied()
    }

    pub fn probability(&self, outcome: LocalOutcome) -> f64 {
        self.iter().filter(|(o, _)| *o == outcome).map(|(_, p)| p).sum()
    }

    pub fn total(&self) -> f64 {
        self.iter().map(|(_, p)| p).sum()
    }

    /// Inverse-CDF draw for `u ∈ [0, 1)`.
    pub fn sample(&self, u: f64) -> LocalOutcome {
        let mut acc = 0.0;
        for (o, p) in self.iter() {
            acc += p;
            if u < acc {
                return o;
            }
        }
        self.entries[self.len - 1].0
    }

    pub(crate) fn validate(&self, context: &str) -> Result<()> {
        for (_, p) in self.iter() {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::InvalidProbability {
                    value: p,
                    context: context.to_string(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Submodel {
    /// Both parties deterministically report the event.
    TrivialTwc(Outcome),
    LarssonTwc(LarssonTwc),
    TrivialGpy(Outcome),
    LarssonGpy(LarssonGpy),
}

impl Submodel {
    pub fn alice_response(&self, theta1: f64, hidden: HiddenState) -> LocalDistribution {
        match self {
            Submodel::TrivialTwc(n) | Submodel::TrivialGpy(n) => LocalDistribution::certain(n.alice()),
            Submodel::LarssonTwc(sub) => alice_response_twc(sub, theta1, hidden),
            Submodel::LarssonGpy(sub) => sub.response(Party::Alice, theta1, hidden.lambda()),
        }
    }

    pub fn bob_response(&self, theta2: f64, hidden: HiddenState) -> LocalDistribution {
        match self {
            Submodel::TrivialTwc(n) | Submodel::TrivialGpy(n) => LocalDistribution::certain(n.bob()),
            Submodel::LarssonTwc(sub) => bob_response_twc(sub, theta2, hidden),
            Submodel::LarssonGpy(sub) => sub.response(Party::Bob, theta2, hidden.lambda()),
        }
    }

    /// Events with non-zero probability for some settings.
    pub fn support(&self) -> Vec<Outcome> {
        match self {
            Submodel::TrivialTwc(n) | Submodel::TrivialGpy(n) => vec![*n],
            Submodel::LarssonTwc(sub) => sub.support().to_vec(),
            Submodel::LarssonGpy(sub) => sub.support().to_vec(),
        }
    }

    /// Joint probability from the integrated closed form.
    pub fn joint_closed_form(&self, event: Outcome, theta1: f64, theta2: f64) -> f64 {
        match self {
            Submodel::TrivialTwc(n) | Submodel::TrivialGpy(n) => f64::from(u8::from(*n == event)),
            Submodel::LarssonTwc(sub) => sub.joint_closed_form(event, theta1 - theta2).unwrap_or(0.0),
            Submodel::LarssonGpy(sub) => sub.joint_closed_form(event, theta1 + theta2).unwrap_or(0.0),
        }
    }

    /// Joint probability `(1/2π) ∫dλ (1/2) Σ_x P_A P_B` by quadrature.
    pub fn joint_quadrature(&self, event: Outcome, theta1: f64, theta2: f64) -> f64 {
        let integrand = |lambda: f64| {
            let lambda = lambda.rem_euclid(TAU);
            (0..2u8)
                .map(|coin| {
                    let h = HiddenState { lambda, coin };
                    self.alice_response(theta1, h).probability(event.alice())
                        * self.bob_response(theta2, h).probability(event.bob())
                })
                .sum::<f64>()
                / 2.0
        };
        let mut kinks = Vec::with_capacity(16);
        for base in [theta1, -theta1, theta2, -theta2] {
            kinks.extend((0..4).map(|m| base + f64::from(m) * FRAC_PI_2));
        }
        quadrature::integrate_period(integrand, &kinks, QUADRATURE_TOL) / TAU
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "setup", rename_all = "lowercase")]
pub enum TableSource {
    Twc { alpha: f64 },
    Gpy { alpha: f64, gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedSubmodel {
    pub submodel: Submodel,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubmodelTable {
    pub source: TableSource,
    pub cutoff: u32,
    pub submodels: Vec<WeightedSubmodel>,
    /// Reference mass outside the table: the analytic truncation tail for
    /// the single-photon source, the uncovered plus truncated mass otherwise.
    pub expected_deficit: f64,
}

impl SubmodelTable {
    pub fn total_weight(&self) -> f64 {
        self.submodels.iter().map(|s| s.weight).sum()
    }

    pub fn alpha(&self) -> f64 {
        match self.source {
            TableSource::Twc { alpha } | TableSource::Gpy { alpha, .. } => alpha,
        }
    }

    /// Model distribution over all events reached by some submodel.
    pub fn distribution(&self, theta1: f64, theta2: f64, method: JointMethod) -> std::collections::BTreeMap<Outcome, f64> {
        let mut out = std::collections::BTreeMap::new();
        for ws in &self.submodels {
            for event in ws.submodel.support() {
                let p = match method {
                    JointMethod::ClosedForm => ws.submodel.joint_closed_form(event, theta1, theta2),
                    JointMethod::Quadrature => ws.submodel.joint_quadrature(event, theta1, theta2),
                };
                *out.entry(event).or_insert(0.0) += ws.weight * p;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hidden_state_domain() {
        assert!(HiddenState::new(0.0, 0).is_ok());
        assert!(HiddenState::new(TAU, 0).is_err());
        assert!(HiddenState::new(-0.1, 1).is_err());
        assert!(HiddenState::new(1.0, 2).is_err());
    }

    #[test]
    fn modulated_is_normalized() {
        for v in [0.1, 0.5, 1.0] {
            for f in [-1.0, -0.3, 0.0, 0.8, 1.0] {
                let d = LocalDistribution::modulated(v, f, (1, 0), (0, 1));
                assert!((d.total() - 1.0).abs() < 1e-15);
                d.validate("test").unwrap();
            }
        }
        let d = LocalDistribution::modulated(0.5, 0.2, (2, 0), (0, 2));
        assert_eq!(d.sample(0.0), (2, 0));
        assert_eq!(d.sample(0.999_999), (0, 0));
    }
}
