//! Monte Carlo sampling of a submodel table.
//!
//! Seed contract: the trials are split into `streams` nearly equal blocks
//! (the first `N mod streams` blocks get one extra trial). Block `i` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`. Each trial consumes
//! five uniforms in order: submodel, λ, coin, Alice, Bob. Counts are merged
//! in block order, so results do not depend on the thread count.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{build_submodel_table_twc, HiddenState, SubmodelTable};
use crate::error::{Error, Result};
use crate::outcome::Outcome;

pub const DEFAULT_STREAMS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleCounts {
    pub trials: u64,
    pub counts: BTreeMap<Outcome, u64>,
    /// Trials that landed in the mass outside the table.
    pub tail: u64,
    pub seed: u64,
    pub streams: u32,
}

impl SampleCounts {
    pub fn count(&self, n: Outcome) -> u64 {
        self.counts.get(&n).copied().unwrap_or(0)
    }

    pub fn frequency(&self, n: Outcome) -> f64 {
        self.count(n) as f64 / self.trials as f64
    }

    pub fn frequencies(&self) -> BTreeMap<Outcome, f64> {
        self.counts.keys().map(|&n| (n, self.frequency(n))).collect()
    }
}

fn run_stream(table: &SubmodelTable, cumulative: &[f64], theta1: f64, theta2: f64, seed: u64, stream: u32, trials: u64) -> (BTreeMap<Outcome, u64>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(stream));
    let mut counts = BTreeMap::new();
    let mut tail = 0;
    for _ in 0..trials {
        let u: f64 = rng.random();
        let lambda = TAU * rng.random::<f64>();
        let coin = u8::from(rng.random::<bool>());
        let ua: f64 = rng.random();
        let ub: f64 = rng.random();
        let idx = cumulative.partition_point(|&c| c <= u);
        if idx == cumulative.len() {
            tail += 1;
            continue;
        }
        let sub = &table.submodels[idx].submodel;
        let hidden = HiddenState::new(lambda.min(TAU * (1.0 - f64::EPSILON)), coin).expect("λ in range");
        let a = sub.alice_response(theta1, hidden).sample(ua);
        let b = sub.bob_response(theta2, hidden).sample(ub);
        *counts.entry(Outcome::from_local(a, b)).or_insert(0) += 1;
    }
    (counts, tail)
}

/// Samples `trials` events from `table` at settings `(θ1, θ2)`.
pub fn sample_table(table: &SubmodelTable, theta1: f64, theta2: f64, seed: u64, trials: u64, streams: u32) -> Result<SampleCounts> {
    if trials == 0 || streams == 0 {
        return Err(Error::InvalidParameter {
            name: "N",
            value: trials as f64,
            reason: "need at least one trial and one stream",
        });
    }
    let cumulative: Vec<f64> = table
        .submodels
        .iter()
        .scan(0.0, |acc, s| {
            *acc += s.weight;
            Some(*acc)
        })
        .collect();
    let per = trials / u64::from(streams);
    let extra = trials % u64::from(streams);
    let blocks: Vec<_> = (0..streams)
        .into_par_iter()
        .map(|i| {
            let n = per + u64::from(u64::from(i) < extra);
            run_stream(table, &cumulative, theta1, theta2, seed, i, n)
        })
        .collect();
    let mut out = SampleCounts {
        trials,
        counts: BTreeMap::new(),
        tail: 0,
        seed,
        streams,
    };
    for (counts, tail) in blocks {
        for (n, c) in counts {
            *out.counts.entry(n).or_insert(0) += c;
        }
        out.tail += tail;
    }
    Ok(out)
}

/// Samples the full single-photon model.
pub fn sample_twc(alpha: f64, theta1: f64, theta2: f64, seed: u64, trials: u64, cutoff: u32) -> Result<SampleCounts> {
    let table = build_submodel_table_twc(alpha, cutoff)?;
    sample_table(&table, theta1, theta2, seed, trials, DEFAULT_STREAMS)
}
