use serde::{Deserialize, Serialize};

use crate::combinatorics;
use crate::{Error, Result};

/// Largest supported ground-set size; vertices are stored as 128-bit masks.
pub const MAX_GROUND_SET: u32 = 128;

/// The triple `(n, r, s)` defining a distance graph `G(n,r,s)`: vertices are
/// r-subsets of `[n]`, edges join subsets intersecting in exactly `s`
/// elements. `s = 0` gives the Kneser graph `K(n,r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphParams {
    pub n: u32,
    pub r: u32,
    pub s: u32,
}

impl GraphParams {
    /// Validates `0 <= s < r <= n <= 128`. `s >= r` is rejected because
    /// adjacency would be vacuous or reflexive.
    pub fn new(n: u32, r: u32, s: u32) -> Result<Self> {
        if n == 0 || n > MAX_GROUND_SET {
            return Err(Error::InvalidParams(format!(
                "n must be in 1..={MAX_GROUND_SET}, got {n}"
            )));
        }
        if r == 0 || r > n {
            return Err(Error::InvalidParams(format!(
                "r must satisfy 1 <= r <= n = {n}, got {r}"
            )));
        }
        if s >= r {
            return Err(Error::InvalidParams(format!(
                "s must satisfy 0 <= s < r = {r}, got {s}"
            )));
        }
        Ok(Self { n, r, s })
    }

    /// Number of vertices, `C(n, r)`.
    pub fn vertex_count(&self) -> u128 {
        combinatorics::binom_u128(self.n, self.r)
    }

    /// Kneser parameters: `s = 0` and `r <= n/2`.
    pub fn is_kneser(&self) -> bool {
        self.s == 0 && 2 * self.r <= self.n
    }
}

impl std::fmt::Display for GraphParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "G({},{},{})", self.n, self.r, self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GraphParams::new(5, 2, 0).is_ok());
        assert!(GraphParams::new(5, 2, 2).is_err());
        assert!(GraphParams::new(5, 2, 3).is_err());
        assert!(GraphParams::new(5, 6, 0).is_err());
        assert!(GraphParams::new(0, 1, 0).is_err());
        assert!(GraphParams::new(300, 2, 0).is_err());
    }

    #[test]
    fn vertex_count_petersen() {
        let p = GraphParams::new(5, 2, 0).unwrap();
        assert_eq!(p.vertex_count(), 10);
        assert!(p.is_kneser());
    }
}
