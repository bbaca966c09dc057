//! Four-outcome CGLMP inequality and the mixing bound for the
//! squeezed-vacuum source.

use serde::Serialize;

use super::{BellResult, Inequality, ParameterPoint};
use crate::error::{check_squeezing, check_unit_interval, Error, Result};
use crate::outcome::LocalOutcome;

pub const OUTCOMES: usize = 4;

/// Count pairs that carry a CGLMP value, in table index order.
pub const COUNT_PAIRS: [LocalOutcome; OUTCOMES] = [(0, 0), (0, 2), (2, 0), (1, 1)];

/// Joint probabilities for one pair of settings, indexed by the positions of
/// Alice's and Bob's count pairs in [`COUNT_PAIRS`].
pub type CountTable = [[f64; OUTCOMES]; OUTCOMES];

/// Values `0..4` assigned to each count pair, per party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CglmpAssignment {
    alice: [usize; OUTCOMES],
    bob: [usize; OUTCOMES],
}

fn is_permutation(values: &[usize; OUTCOMES]) -> bool {
    let mut seen = [false; OUTCOMES];
    for &v in values {
        if v >= OUTCOMES || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl CglmpAssignment {
    /// `alice[i]` is the value Alice reports for `COUNT_PAIRS[i]`.
    pub fn new(alice: [usize; OUTCOMES], bob: [usize; OUTCOMES]) -> Result<Self> {
        if !is_permutation(&alice) || !is_permutation(&bob) {
            return Err(Error::InvalidAssignment);
        }
        Ok(CglmpAssignment { alice, bob })
    }

    pub fn alice(&self) -> [usize; OUTCOMES] {
        self.alice
    }

    pub fn bob(&self) -> [usize; OUTCOMES] {
        self.bob
    }
}

impl Default for CglmpAssignment {
    fn default() -> Self {
        CglmpAssignment {
            alice: [0, 1, 2, 3],
            bob: [0, 1, 2, 3],
        }
    }
}

/// `P(A = B + shift mod 4)` for one settings pair.
fn offset_probability(table: &CountTable, assignment: &CglmpAssignment, shift: i64) -> f64 {
    let mut sum = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let (a, b) = (assignment.alice[i] as i64, assignment.bob[j] as i64);
            if (a - b - shift).rem_euclid(OUTCOMES as i64) == 0 {
                sum += p;
            }
        }
    }
    sum
}

/// Standard CGLMP expression for `d = 4` over settings `joint[x][y]`
/// (Alice `x ∈ {0,1}`, Bob `y ∈ {0,1}`). Local bound 2, algebraic maximum 4.
pub fn cglmp_value(joint: &[[CountTable; 2]; 2], assignment: &CglmpAssignment) -> Result<BellResult> {
    for (x, row) in joint.iter().enumerate() {
        for (y, table) in row.iter().enumerate() {
            let total: f64 = table.iter().flatten().sum();
            if (total - 1.0).abs() > 1e-9 || table.iter().flatten().any(|&p| p < 0.0) {
                return Err(Error::NotNormalized(x, y, total));
            }
        }
    }
    // P(A_x = B_y + k)
    let ab = |x: usize, y: usize, k: i64| offset_probability(&joint[x][y], assignment, k);
    // P(B_y = A_x + k)
    let ba = |x: usize, y: usize, k: i64| offset_probability(&joint[x][y], assignment, -k);

    let d = OUTCOMES as i64;
    let mut value = 0.0;
    for k in 0..d / 2 {
        let coeff = 1.0 - 2.0 * k as f64 / (d - 1) as f64;
        let positive = ab(0, 0, k) + ba(1, 0, k + 1) + ab(1, 1, k) + ba(0, 1, k);
        let negative = ab(0, 0, -k - 1) + ba(1, 0, -k) + ab(1, 1, -k - 1) + ba(0, 1, -k - 1);
        value += coeff * (positive - negative);
    }
    Ok(BellResult::new(Inequality::Cglmp4, ParameterPoint::default(), value))
}

/// `λ = p(2&2) / (p(2&2) + p(0&2))` with `p(2&2) ∝ (α⁸ + 4γ⁴ + 4γ²α⁴)/4`
/// and `p(0&2) ∝ α⁴`.
pub fn lambda_mix(alpha: f64, gamma: f64) -> Result<f64> {
    check_squeezing(gamma)?;
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must be finite and non-negative",
        });
    }
    if alpha == 0.0 && gamma == 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "mixing weight undefined when alpha and gamma both vanish",
        });
    }
    let x2 = alpha.powi(4);
    let g2 = gamma * gamma;
    let p22 = (x2 * x2 + 4.0 * g2 * g2 + 4.0 * g2 * x2) / 4.0;
    Ok(p22 / (p22 + x2))
}

/// `4λ + (2/3)(1 − λ) = (10/3)λ + 2/3`.
pub fn cglmp_mixing_bound(lambda: f64) -> Result<f64> {
    check_unit_interval("lambda", lambda)?;
    Ok(10.0 / 3.0 * lambda + 2.0 / 3.0)
}
