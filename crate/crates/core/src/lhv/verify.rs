use std::collections::BTreeMap;

use serde::Serialize;

use super::{gpy, SubmodelTable, TableSource};
use crate::closed_form::{p_gpy_class1, p_twc};
use crate::outcome::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JointMethod {
    /// Integrated per-submodel formulas.
    ClosedForm,
    /// Quadrature of the λ-integral of the response functions.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventDeviation {
    pub event: Outcome,
    pub model: f64,
    pub quantum: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub max_deviation: f64,
    pub worst_event: Option<Outcome>,
    pub events_checked: usize,
    pub deviations: Vec<EventDeviation>,
    /// Events outside the model's scope, not compared.
    pub uncovered: Vec<Outcome>,
}

/// Compares the model against the quantum prediction using quadrature.
pub fn verify_model(table: &SubmodelTable, theta1: f64, theta2: f64) -> VerificationReport {
    verify_model_with(table, theta1, theta2, JointMethod::Quadrature)
}

pub fn verify_model_with(table: &SubmodelTable, theta1: f64, theta2: f64, method: JointMethod) -> VerificationReport {
    let model = table.distribution(theta1, theta2, method);
    let (targets, uncovered): (BTreeMap<Outcome, f64>, Vec<Outcome>) = match table.source {
        TableSource::Twc { alpha } => (
            Outcome::enumerate(table.cutoff)
                .into_iter()
                .map(|n| (n, p_twc(n, alpha, theta1 - theta2).expect("alpha validated by table")))
                .collect(),
            Vec::new(),
        ),
        TableSource::Gpy { alpha, gamma } => {
            let mut targets = BTreeMap::new();
            for n in Outcome::enumerate(table.cutoff) {
                let p = if n.alice() == (0, 0) || n.bob() == (0, 0) {
                    gpy::p_gpy_one_side_empty(n, alpha, gamma).ok()
                } else {
                    p_gpy_class1(n, alpha, gamma, theta1, theta2).ok()
                };
                if let Some(p) = p {
                    targets.insert(n, p);
                }
            }
            let uncovered = gpy::uncovered_events()
                .into_iter()
                .filter(|n| n.total() <= table.cutoff)
                .collect();
            (targets, uncovered)
        }
    };

    let mut deviations = Vec::with_capacity(targets.len());
    for (&event, &quantum) in &targets {
        let m = model.get(&event).copied().unwrap_or(0.0);
        deviations.push(EventDeviation {
            event,
            model: m,
            quantum,
            deviation: (m - quantum).abs(),
        });
    }
    // mass the model puts on events it should not reach
    for (&event, &m) in &model {
        if !targets.contains_key(&event) {
            deviations.push(EventDeviation {
                event,
                model: m,
                quantum: f64::NAN,
                deviation: m.abs(),
            });
        }
    }
    let worst = deviations.iter().max_by(|a, b| a.deviation.total_cmp(&b.deviation));
    VerificationReport {
        max_deviation: worst.map_or(0.0, |w| w.deviation),
        worst_event: worst.map(|w| w.event),
        events_checked: deviations.len(),
        deviations,
        uncovered,
    }
}
