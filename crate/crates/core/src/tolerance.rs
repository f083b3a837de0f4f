use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every check in the crate.
///
/// `rank` and `degen` are relative (scaled by the largest singular value or
/// eigenvalue in play); the rest are absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub norm: f64,
    pub herm: f64,
    pub idem: f64,
    pub rank: f64,
    pub degen: f64,
    pub orth: f64,
    pub recon: f64,
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-10,
            herm: 1e-10,
            idem: 1e-10,
            rank: 1e-8,
            degen: 1e-8,
            orth: 1e-9,
            recon: 1e-9,
            eig: 1e-9,
        }
    }
}

impl Tolerances {
    /// Negative-eigenvalue allowance for density operators.
    pub fn psd(&self) -> f64 {
        self.herm
    }
}
