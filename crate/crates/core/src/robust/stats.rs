use super::Observation;
use crate::scalar::{times, Int};

/// Extremes of the observed remainders reduced modulo `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeStats<T> {
    pub residues: Vec<T>,
    pub alpha: T,
    pub beta: T,
    /// Smallest residue strictly above `d/2`.
    pub mu: Option<T>,
    /// Largest residue strictly below `d/2`. Diagnostic only.
    pub nu: Option<T>,
}

impl<T: Int> ExtremeStats<T> {
    pub fn from_residues(residues: Vec<T>, d: &T) -> Self {
        assert!(!residues.is_empty(), "at least one residue");
        let alpha = residues.iter().max().cloned().unwrap();
        let beta = residues.iter().min().cloned().unwrap();
        let mu = residues.iter().filter(|&r| &times(2, r) > d).min().cloned();
        let nu = residues.iter().filter(|&r| &times(2, r) < d).max().cloned();
        Self {
            residues,
            alpha,
            beta,
            mu,
            nu,
        }
    }

    pub fn spread(&self) -> T {
        self.alpha.clone() - self.beta.clone()
    }
}

pub fn compute_stats<T: Int>(obs: &Observation<'_, T>) -> ExtremeStats<T> {
    let d = obs.mods().d();
    let residues = obs.rbar().iter().map(|r| r.mod_floor(d)).collect();
    ExtremeStats::from_residues(residues, d)
}
