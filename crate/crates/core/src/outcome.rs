use std::fmt;

use serde::{Deserialize, Serialize};

/// Photon counts `(k, l, r, s)` at detectors `(c1, d1, c2, d2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub k: u32,
    pub l: u32,
    pub r: u32,
    pub s: u32,
}

/// Counts at one party's two detectors.
pub type LocalOutcome = (u32, u32);

impl Outcome {
    pub const fn new(k: u32, l: u32, r: u32, s: u32) -> Self {
        Self { k, l, r, s }
    }

    pub fn from_local(alice: LocalOutcome, bob: LocalOutcome) -> Self {
        Self::new(alice.0, alice.1, bob.0, bob.1)
    }

    pub fn total(&self) -> u32 {
        self.k + self.l + self.r + self.s
    }

    pub fn alice(&self) -> LocalOutcome {
        (self.k, self.l)
    }

    pub fn bob(&self) -> LocalOutcome {
        (self.r, self.s)
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.k, self.l, self.r, self.s]
    }

    /// `k ↔ l`
    pub fn swap_alice(&self) -> Self {
        Self::new(self.l, self.k, self.r, self.s)
    }

    /// `r ↔ s`
    pub fn swap_bob(&self) -> Self {
        Self::new(self.k, self.l, self.s, self.r)
    }

    pub fn swap_parties(&self) -> Self {
        Self::new(self.r, self.s, self.k, self.l)
    }

    /// All outcomes with total photon number `<= cutoff`, in lexicographic order.
    pub fn enumerate(cutoff: u32) -> Vec<Outcome> {
        let mut out = Vec::new();
        for k in 0..=cutoff {
            for l in 0..=cutoff - k {
                for r in 0..=cutoff - k - l {
                    for s in 0..=cutoff - k - l - r {
                        out.push(Outcome::new(k, l, r, s));
                    }
                }
            }
        }
        out
    }
}

impl From<[u32; 4]> for Outcome {
    fn from(a: [u32; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.l, self.r, self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let all = Outcome::enumerate(3);
        // C(3 + 4, 4)
        assert_eq!(all.len(), 35);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|n| n.total() <= 3));
    }

    #[test]
    fn swaps() {
        let n = Outcome::new(1, 2, 3, 4);
        assert_eq!(n.swap_alice(), Outcome::new(2, 1, 3, 4));
        assert_eq!(n.swap_bob(), Outcome::new(1, 2, 4, 3));
        assert_eq!(n.swap_parties(), Outcome::new(3, 4, 1, 2));
        assert_eq!(n.to_string(), "(1,2,3,4)");
    }
}
