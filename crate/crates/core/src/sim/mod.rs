//! Verification harness: error injection, exhaustive and seeded random
//! campaigns, and the counterexample showing the `d/4` bound is sharp.

mod campaign;
mod cases;
mod general_sweep;
mod report;
mod sharpness;

use crate::error::{CrtError, Result};
use crate::exact::{CleanInstance, RobustModuliSet};
use crate::robust::Observation;
use crate::scalar::Int;

pub use campaign::{
    exhaustive_sweep, random_campaign, Algorithm, CampaignConfig, ErrorBound, Mode, TrialRecord,
    GENERATOR,
};
pub use cases::{classify, WrapCase};
pub use general_sweep::{general_bound, general_sweep, GeneralSweepReport};
pub use report::{AlgorithmReport, CampaignReport, CheckReport, FailureWitness, MAX_WITNESSES};
pub use sharpness::{is_probable_prime, sharpness_witness, AlgorithmOutcome, SharpnessWitness};

/// Additive remainder errors `rbar_i - r_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErrorVector<T> {
    pub delta: Vec<T>,
}

impl<T: Int> ErrorVector<T> {
    pub fn new(delta: Vec<T>) -> Self {
        Self { delta }
    }

    pub fn zeros(k: usize) -> Self {
        Self {
            delta: vec![T::zero(); k],
        }
    }
}

/// `rbar_i = clamp(r_i + delta_i, 0, d*m_i - 1)`.
pub fn inject_errors<'a, T: Int>(
    mods: &'a RobustModuliSet<T>,
    inst: &CleanInstance<T>,
    ev: &ErrorVector<T>,
) -> Result<Observation<'a, T>> {
    if ev.delta.len() != inst.r.len() {
        return Err(CrtError::LengthMismatch {
            expected: inst.r.len(),
            got: ev.delta.len(),
        });
    }
    let rbar = inst
        .r
        .iter()
        .zip(&ev.delta)
        .map(|(r, e)| r.clone() + e.clone())
        .collect();
    Observation::new(mods, rbar)
}

/// The errors actually present after clamping.
pub fn effective_errors<T: Int>(
    inst: &CleanInstance<T>,
    obs: &Observation<'_, T>,
) -> ErrorVector<T> {
    ErrorVector::new(
        obs.rbar()
            .iter()
            .zip(&inst.r)
            .map(|(rb, r)| rb.clone() - r.clone())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inject_examples() {
        let mods = RobustModuliSet::from_moduli(vec![3i64, 5], 100).unwrap();
        let inst = mods.instance_from_n(1234).unwrap();
        let obs = inject_errors(&mods, &inst, &ErrorVector::new(vec![10, -13])).unwrap();
        assert_eq!(obs.rbar(), &[44, 221]);
        assert!(!obs.clamped());

        let inst = mods.instance_from_n(5).unwrap();
        let obs = inject_errors(&mods, &inst, &ErrorVector::new(vec![-10, 0])).unwrap();
        assert_eq!(obs.rbar()[0], 0);
        assert!(obs.clamped());
        assert_eq!(effective_errors(&inst, &obs).delta, vec![-5, 0]);

        let inst = mods.instance_from_n(1499).unwrap();
        let obs = inject_errors(&mods, &inst, &ErrorVector::new(vec![3, 3])).unwrap();
        assert_eq!(obs.rbar(), &[299, 499]);

        let inst = mods.instance_from_n(777).unwrap();
        let obs = inject_errors(&mods, &inst, &ErrorVector::zeros(2)).unwrap();
        assert_eq!(obs.rbar(), inst.r.as_slice());
        assert!(inject_errors(&mods, &inst, &ErrorVector::zeros(3)).is_err());
    }
}
