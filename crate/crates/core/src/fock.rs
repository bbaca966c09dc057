//! Truncated Fock-space simulator for passive linear optics.
//!
//! States are sparse maps from occupation tuples to complex amplitudes. Every
//! state carries a cutoff on the *total* photon number; since beamsplitters
//! conserve photon number, probabilities of outcomes at or below the cutoff
//! are exact, and everything above it is accounted for as truncation tail.
//!
//! Beamsplitter convention (reflection picks up a factor `i`):
//!
//! ```text
//! a† → √T c† + i√R d†
//! b† → i√R c† + √T d†
//! ```

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_amplitude, check_finite, check_squeezing, check_unit_interval, Error, Result};
use crate::outcome::Outcome;
use crate::special::{binomial, factorial, poisson_tail};

/// Amplitudes with `|a|²` below this are dropped after each transformation.
pub const PRUNE_NORM_SQR: f64 = 1e-30;

/// Mode order of every detection state: `(c1, d1, c2, d2)`.
pub const DETECTOR_MODES: [&str; 4] = ["c1", "d1", "c2", "d2"];

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    modes: Vec<String>,
    terms: BTreeMap<Vec<u32>, Complex64>,
    cutoff: u32,
}

impl FockVector {
    pub fn vacuum<S: AsRef<str>>(modes: &[S], cutoff: u32) -> Self {
        let modes: Vec<String> = modes.iter().map(|m| m.as_ref().to_owned()).collect();
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; modes.len()], Complex64::new(1.0, 0.0));
        Self { modes, terms, cutoff }
    }

    /// Builds a state from explicit terms. Terms whose total photon number
    /// exceeds `cutoff` are dropped.
    pub fn from_terms<S, I>(modes: &[S], terms: I, cutoff: u32) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let modes: Vec<String> = modes.iter().map(|m| m.as_ref().to_owned()).collect();
        let mut map = BTreeMap::new();
        for (occ, amp) in terms {
            if occ.len() != modes.len() {
                return Err(Error::InvalidParameter {
                    name: "occupation",
                    value: occ.len() as f64,
                    reason: "occupation tuple length must equal the number of modes",
                });
            }
            if occ.iter().sum::<u32>() <= cutoff {
                *map.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
            }
        }
        let mut v = Self { modes, terms: map, cutoff };
        v.prune();
        Ok(v)
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn amplitude(&self, occupation: &[u32]) -> Complex64 {
        self.terms
            .get(occupation)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    fn mode_index(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m == label)
            .ok_or_else(|| Error::UnknownMode(label.to_owned()))
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm_sqr() >= PRUNE_NORM_SQR);
    }

    /// Tensor product `self ⊗ other`, keeping terms with total photon number
    /// `<= cutoff`.
    pub fn tensor(&self, other: &FockVector, cutoff: u32) -> FockVector {
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        let mut terms = BTreeMap::new();
        for (a, va) in &self.terms {
            let na: u32 = a.iter().sum();
            if na > cutoff {
                continue;
            }
            for (b, vb) in &other.terms {
                if na + b.iter().sum::<u32>() > cutoff {
                    continue;
                }
                let mut occ = a.clone();
                occ.extend_from_slice(b);
                terms.insert(occ, va * vb);
            }
        }
        let mut v = FockVector { modes, terms, cutoff };
        v.prune();
        v
    }

    /// Sum of two states on the same modes.
    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch {
                expected: self.modes.clone(),
                found: other.modes.clone(),
            });
        }
        let mut terms = self.terms.clone();
        for (occ, amp) in &other.terms {
            *terms.entry(occ.clone()).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        let mut v = FockVector {
            modes: self.modes.clone(),
            terms,
            cutoff: self.cutoff.max(other.cutoff),
        };
        v.prune();
        Ok(v)
    }

    pub fn scale(&self, factor: Complex64) -> FockVector {
        let mut v = self.clone();
        for amp in v.terms.values_mut() {
            *amp *= factor;
        }
        v.prune();
        v
    }

    /// Permutes the modes into the given label order.
    pub fn reorder<S: AsRef<str>>(&self, labels: &[S]) -> Result<FockVector> {
        if labels.len() != self.modes.len() {
            return Err(Error::ModeMismatch {
                expected: labels.iter().map(|l| l.as_ref().to_owned()).collect(),
                found: self.modes.clone(),
            });
        }
        let perm = labels
            .iter()
            .map(|l| self.mode_index(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let terms = self
            .terms
            .iter()
            .map(|(occ, amp)| (perm.iter().map(|&i| occ[i]).collect(), *amp))
            .collect();
        Ok(FockVector {
            modes: labels.iter().map(|l| l.as_ref().to_owned()).collect(),
            terms,
            cutoff: self.cutoff,
        })
    }
}

/// Coherent state `|α e^{iθ}⟩` on one mode, truncated at `cutoff` photons.
pub fn coherent_expansion(mode: &str, alpha: f64, theta: f64, cutoff: u32) -> Result<FockVector> {
    check_amplitude(alpha)?;
    check_finite("theta", theta)?;
    let beta = Complex64::from_polar(alpha, theta);
    let vac = (-0.5 * alpha * alpha).exp();
    let terms = (0..=cutoff).map(|n| {
        let amp = vac * beta.powu(n) / factorial(n).sqrt();
        (vec![n], amp)
    });
    FockVector::from_terms(&[mode], terms, cutoff)
}

/// `(|01⟩ + i|10⟩)/√2` on modes `(b1, b2)`: a single photon after a balanced
/// beamsplitter.
pub fn single_photon_split() -> FockVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    FockVector::from_terms(
        &["b1", "b2"],
        [
            (vec![0, 1], Complex64::new(h, 0.0)),
            (vec![1, 0], Complex64::new(0.0, h)),
        ],
        1,
    )
    .expect("two-mode terms")
}

/// Two-mode squeezed vacuum `√(1−γ²) Σ γ^k |k,k⟩` on `(b1, b2)`.
pub fn two_mode_squeezed(gamma: f64, cutoff: u32) -> Result<FockVector> {
    check_squeezing(gamma)?;
    let norm = (1.0 - gamma * gamma).sqrt();
    let terms = (0..=cutoff / 2).map(|k| (vec![k, k], Complex64::new(norm * gamma.powi(k as i32), 0.0)));
    FockVector::from_terms(&["b1", "b2"], terms, cutoff)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamsplitterSpec {
    pub input_a: String,
    pub input_b: String,
    pub output_c: String,
    pub output_d: String,
    pub transmittivity: f64,
}

impl BeamsplitterSpec {
    pub fn new(input_a: &str, input_b: &str, output_c: &str, output_d: &str, transmittivity: f64) -> Result<Self> {
        check_unit_interval("transmittivity", transmittivity)?;
        Ok(Self {
            input_a: input_a.to_owned(),
            input_b: input_b.to_owned(),
            output_c: output_c.to_owned(),
            output_d: output_d.to_owned(),
            transmittivity,
        })
    }

    pub fn reflectivity(&self) -> f64 {
        1.0 - self.transmittivity
    }
}

/// Substitutes the creation operators of `bs.input_a`, `bs.input_b` by their
/// output-mode expansions. The output modes take the input modes' positions.
pub fn apply_beamsplitter(state: &FockVector, bs: &BeamsplitterSpec) -> Result<FockVector> {
    check_unit_interval("transmittivity", bs.transmittivity)?;
    let ia = state.mode_index(&bs.input_a)?;
    let ib = state.mode_index(&bs.input_b)?;
    if ia == ib {
        return Err(Error::InvalidParameter {
            name: "beamsplitter inputs",
            value: ia as f64,
            reason: "input modes must differ",
        });
    }
    let t = Complex64::new(bs.transmittivity.sqrt(), 0.0);
    let r = Complex64::new(0.0, bs.reflectivity().sqrt());

    let mut acc: HashMap<Vec<u32>, Complex64> = HashMap::new();
    for (occ, amp) in &state.terms {
        let (na, nb) = (occ[ia], occ[ib]);
        let norm_in = (factorial(na) * factorial(nb)).sqrt();
        // (t c† + r d†)^na (r c† + t d†)^nb
        for i in 0..=na {
            let ca = binomial(na, i) * t.powu(i) * r.powu(na - i);
            for j in 0..=nb {
                let cb = binomial(nb, j) * r.powu(j) * t.powu(nb - j);
                let c = i + j;
                let d = na + nb - c;
                let factor = (factorial(c) * factorial(d)).sqrt() / norm_in;
                let mut out = occ.clone();
                out[ia] = c;
                out[ib] = d;
                *acc.entry(out).or_insert(Complex64::new(0.0, 0.0)) += amp * ca * cb * factor;
            }
        }
    }
    let mut modes = state.modes.clone();
    modes[ia] = bs.output_c.clone();
    modes[ib] = bs.output_d.clone();
    let mut v = FockVector {
        modes,
        terms: acc.into_iter().collect(),
        cutoff: state.cutoff,
    };
    v.prune();
    Ok(v)
}

/// `|⟨k,l,r,s|Ψ⟩|²` for a state on the detector modes `(c1, d1, c2, d2)`.
pub fn outcome_probability(state: &FockVector, n: Outcome) -> Result<f64> {
    if state.modes.iter().map(String::as_str).ne(DETECTOR_MODES) {
        return Err(Error::ModeMismatch {
            expected: DETECTOR_MODES.iter().map(|m| m.to_string()).collect(),
            found: state.modes.clone(),
        });
    }
    Ok(state.amplitude(&n.as_array()).norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalOscillator {
    pub alpha: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SignalState {
    SinglePhotonSplit,
    TwoModeSqueezed { gamma: f64 },
}

/// Signal state on `(b1, b2)` plus one local oscillator per party.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub signal: SignalState,
    pub lo1: LocalOscillator,
    pub lo2: LocalOscillator,
}

impl SourceSpec {
    pub fn twc(alpha: f64, theta1: f64, theta2: f64) -> Self {
        Self {
            signal: SignalState::SinglePhotonSplit,
            lo1: LocalOscillator { alpha, theta: theta1 },
            lo2: LocalOscillator { alpha, theta: theta2 },
        }
    }

    pub fn gpy(alpha: f64, gamma: f64, theta1: f64, theta2: f64) -> Self {
        Self {
            signal: SignalState::TwoModeSqueezed { gamma },
            lo1: LocalOscillator { alpha, theta: theta1 },
            lo2: LocalOscillator { alpha, theta: theta2 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_amplitude(self.lo1.alpha)?;
        check_amplitude(self.lo2.alpha)?;
        check_finite("theta1", self.lo1.theta)?;
        check_finite("theta2", self.lo2.theta)?;
        if let SignalState::TwoModeSqueezed { gamma } = self.signal {
            check_squeezing(gamma)?;
        }
        Ok(())
    }

    /// Probability mass of total photon numbers above `cutoff`.
    pub fn truncation_tail(&self, cutoff: u32) -> f64 {
        let lo_mean = self.lo1.alpha.powi(2) + self.lo2.alpha.powi(2);
        // P(N_lo > m), with N_lo ~ Poisson(lo_mean); m < 0 means certain
        let lo_tail = |m: i64| {
            if m < 0 {
                1.0
            } else {
                poisson_tail(lo_mean, m as u32)
            }
        };
        match self.signal {
            SignalState::SinglePhotonSplit => lo_tail(i64::from(cutoff) - 1),
            SignalState::TwoModeSqueezed { gamma } => {
                let g2 = gamma * gamma;
                let pairs_max = cutoff / 2;
                let within: f64 = (0..=pairs_max)
                    .map(|k| (1.0 - g2) * g2.powi(k as i32) * lo_tail(i64::from(cutoff) - 2 * i64::from(k)))
                    .sum();
                within + g2.powi(pairs_max as i32 + 1)
            }
        }
    }

    fn signal_state(&self, cutoff: u32) -> Result<FockVector> {
        match self.signal {
            SignalState::SinglePhotonSplit => Ok(single_photon_split()),
            SignalState::TwoModeSqueezed { gamma } => two_mode_squeezed(gamma, cutoff),
        }
    }
}

/// Full state at the detectors `(c1, d1, c2, d2)`: each local oscillator
/// `a_j` is mixed with signal mode `b_j` on a beamsplitter of transmittivity
/// `transmittivity`.
pub fn detection_state(source: &SourceSpec, transmittivity: f64, cutoff: u32) -> Result<FockVector> {
    source.validate()?;
    check_unit_interval("transmittivity", transmittivity)?;
    let a1 = coherent_expansion("a1", source.lo1.alpha, source.lo1.theta, cutoff)?;
    let a2 = coherent_expansion("a2", source.lo2.alpha, source.lo2.theta, cutoff)?;
    let input = a1
        .tensor(&source.signal_state(cutoff)?, cutoff)
        .tensor(&a2, cutoff);
    let bs1 = BeamsplitterSpec::new("a1", "b1", "c1", "d1", transmittivity)?;
    let bs2 = BeamsplitterSpec::new("a2", "b2", "c2", "d2", transmittivity)?;
    let out = apply_beamsplitter(&apply_beamsplitter(&input, &bs1)?, &bs2)?;
    out.reorder(&DETECTOR_MODES)
}

/// Probabilities of every outcome with total photon number `<= cutoff`,
/// zero entries included, in lexicographic order of `(k, l, r, s)`.
pub fn probability_table(source: &SourceSpec, transmittivity: f64, cutoff: u32) -> Result<BTreeMap<Outcome, f64>> {
    let state = detection_state(source, transmittivity, cutoff)?;
    Outcome::enumerate(cutoff)
        .into_iter()
        .map(|n| Ok((n, outcome_probability(&state, n)?)))
        .collect()
}
