use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CrtError, Result};
use crate::robust::{clamp, GeneralModuliSet};
use crate::scalar::{times, Int};

/// Outcome of [`general_sweep`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralSweepReport {
    pub moduli: Vec<String>,
    pub error_bound: String,
    pub ref_index: usize,
    pub total_trials: u64,
    /// Trials where the recovered quotient equals `floor(N / n_ref)`.
    pub quotient_exact: u64,
    /// Trials where `|N - n_hat|` equals the (clamped) error on `r_ref`.
    pub error_identity: u64,
    pub clamped_trials: u64,
    /// First failing trial indices, at most 100.
    pub failures: Vec<u64>,
}

/// Largest integer error strictly inside the generalized bound: `4B < tau4`.
pub fn general_bound<T: Int>(gm: &GeneralModuliSet<T>) -> T {
    let four = times(4, &T::one());
    num_integer::Integer::div_ceil(gm.tau4(), &four) - T::one()
}

/// Every `N` in `[0, lcm)` against every error vector with `|delta_i| <= bound`.
pub fn general_sweep<T: Int>(gm: &GeneralModuliSet<T>, bound: &T) -> Result<GeneralSweepReport> {
    let too_large = || CrtError::InvalidParams("sweep is too large".into());
    let k = gm.moduli().len();
    let range = gm.lcm().to_u64().ok_or_else(too_large)?;
    let width = times(2, bound)
        .to_u64()
        .and_then(|w| w.checked_add(1))
        .ok_or_else(too_large)?;
    let block = (0..k)
        .try_fold(1u64, |acc, _| acc.checked_mul(width))
        .ok_or_else(too_large)?;
    let total = range.checked_mul(block).ok_or_else(too_large)?;
    let s = gm.ref_index();
    let n_ref = &gm.moduli()[s];

    let trial = |t: u64| -> Result<(bool, bool, bool)> {
        let n = T::from_u64(t / block).expect("fits");
        let mut rest = t % block;
        let mut clamped = false;
        let mut rbar = Vec::with_capacity(k);
        let mut r = Vec::with_capacity(k);
        for ni in gm.moduli() {
            let delta = T::from_u64(rest % width).expect("fits") - bound.clone();
            rest /= width;
            let ri = n.mod_floor(ni);
            let (rb, c) = clamp(ri.clone() + delta, ni);
            clamped |= c;
            r.push(ri);
            rbar.push(rb);
        }
        let rec = gm.recover(&rbar)?;
        let quotient_ok = rec.q_hat == n.div_floor(n_ref);
        let error_ok = (n - rec.n_hat).abs() == (rbar[s].clone() - r[s].clone()).abs();
        Ok((quotient_ok, error_ok, clamped))
    };

    let (quotient_exact, error_identity, clamped_trials, mut failures) = (0..total)
        .into_par_iter()
        .map(|t| {
            trial(t).map(|(q, e, c)| {
                (
                    q as u64,
                    e as u64,
                    c as u64,
                    if q && e { vec![] } else { vec![t] },
                )
            })
        })
        .try_reduce(
            || (0, 0, 0, Vec::new()),
            |a, b| {
                let mut f = a.3;
                f.extend(b.3);
                f.sort_unstable();
                f.truncate(super::MAX_WITNESSES);
                Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2, f))
            },
        )?;
    failures.sort_unstable();

    Ok(GeneralSweepReport {
        moduli: gm.moduli().iter().map(ToString::to_string).collect(),
        error_bound: bound.to_string(),
        ref_index: s,
        total_trials: total,
        quotient_exact,
        error_identity,
        clamped_trials,
        failures,
    })
}
