//! Wigner's counting argument against quantum self-replication: a random
//! collision matrix must satisfy `N²R` equations with only `N + R + NR`
//! free unknowns.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WignerCount {
    pub equations: u128,
    pub unknowns: u128,
    pub overdetermined: bool,
}

impl WignerCount {
    pub fn ratio(&self) -> f64 {
        self.equations as f64 / self.unknowns as f64
    }
}

/// `n` is the organism's Hilbert-space dimension, `r` that of the rest.
/// Zero inputs are clamped to 1.
pub fn wigner_count(n: u64, r: u64) -> WignerCount {
    let (n, r) = (n.max(1) as u128, r.max(1) as u128);
    let equations = n * n * r;
    let unknowns = n + r + n * r;
    WignerCount {
        equations,
        unknowns,
        overdetermined: equations > unknowns,
    }
}
