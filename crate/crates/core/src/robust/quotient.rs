use super::{Branch, Method, Observation, Reconstruction};
use crate::error::{CrtError, Result};
use crate::exact::{CleanInstance, RobustModuliSet};
use crate::modular::{mod_inverse, mod_least_nonneg, round_half, CoprimeModuliSet};
use crate::scalar::Int;

/// `[(rbar_i - rbar_1)/d]` for every `i` (the first entry is 0).
fn rounded_differences<T: Int>(obs: &Observation<'_, T>) -> Vec<T> {
    let d = obs.mods().d();
    let first = &obs.rbar()[0];
    obs.rbar()
        .iter()
        .map(|r| round_half(&(r.clone() - first.clone()), d))
        .collect()
}

/// Given `q_1`, recovers the remaining quotients from
/// `q_1*m_1 - q_i*m_i = (r_i - r_1)/d` and averages the per-modulus estimates.
fn finish<T: Int>(
    obs: &Observation<'_, T>,
    q1: T,
    diffs: &[T],
    method: Method,
) -> Result<Reconstruction<T>> {
    let mods = obs.mods();
    let moduli = mods.base().moduli();
    let lead = q1 * moduli[0].clone();

    let mut q_hat = Vec::with_capacity(moduli.len());
    for (index, (delta, m)) in diffs.iter().zip(moduli).enumerate() {
        let (q, rem) = (lead.clone() - delta.clone()).div_rem(m);
        if !rem.is_zero() {
            return Err(CrtError::NonExactQuotient { index });
        }
        q_hat.push(q);
    }
    let per_modulus: Vec<T> = q_hat
        .iter()
        .zip(mods.full_moduli())
        .zip(obs.rbar())
        .map(|((q, full), r)| full.clone() * q.clone() + r.clone())
        .collect();
    let sum = per_modulus.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let n_hat = round_half(&sum, &T::from_usize_exact(per_modulus.len()));

    Ok(Reconstruction {
        n_hat,
        method,
        branch: Branch::None,
        q_hat: Some(q_hat),
        gamma_hat: None,
        per_modulus: Some(per_modulus),
        n0_hat: None,
        stats: None,
    })
}

/// Recovers the quotients `q_i = (N - r_i)/(d*m_i)` with a single Bezout sum
/// and reconstructs `N` from them.
///
/// `q_1 = sum_{i>=2} [(rbar_i - rbar_1)/d] * u_i * (M_1/m_i)  mod M_1`.
/// The rounded differences are exact when every error is below `d/4`, so the
/// recovered quotients are the true ones.
pub fn reconstruct_quotient<T: Int>(obs: &Observation<'_, T>) -> Result<Reconstruction<T>> {
    let base = obs.mods().base();
    let diffs = rounded_differences(obs);
    let big_m1 = base.cofactors()[0].clone();

    let mut q1 = T::zero();
    for ((delta, u), m) in diffs.iter().zip(base.bezout()).zip(base.moduli()).skip(1) {
        let term = delta.clone() * u.clone() * (big_m1.clone() / m.clone());
        q1 = (q1 + term).mod_floor(&big_m1);
    }
    finish(obs, q1, &diffs, Method::Quotient)
}

/// Precomputed data for the two-stage quotient recovery.
#[derive(Debug, Clone)]
pub struct WangXiaTables<T> {
    /// `m_1^{-1} mod m_i` for `i = 2..k`.
    inverses: Vec<T>,
    tail: CoprimeModuliSet<T>,
}

impl<T: Int> WangXiaTables<T> {
    pub fn new(mods: &RobustModuliSet<T>) -> Result<Self> {
        let moduli = mods.base().moduli();
        if moduli.len() < 2 {
            return Err(CrtError::InvalidParams(
                "two-stage recovery needs k >= 2".into(),
            ));
        }
        let m1 = &moduli[0];
        let inverses = moduli[1..]
            .iter()
            .map(|m| {
                mod_inverse(m1, m).ok_or_else(|| CrtError::Invariant("m_1 not invertible".into()))
            })
            .collect::<Result<Vec<T>>>()?;
        let tail = CoprimeModuliSet::new(moduli[1..].to_vec())?;
        Ok(Self { inverses, tail })
    }

    pub fn reconstruct(&self, obs: &Observation<'_, T>) -> Result<Reconstruction<T>> {
        let moduli = obs.mods().base().moduli();
        if moduli.len() != self.inverses.len() + 1 {
            return Err(CrtError::LengthMismatch {
                expected: self.inverses.len() + 1,
                got: moduli.len(),
            });
        }
        let diffs = rounded_differences(obs);
        let xi: Vec<T> = diffs[1..]
            .iter()
            .zip(&self.inverses)
            .zip(&moduli[1..])
            .map(|((delta, inv), m)| mod_least_nonneg(&(delta.clone() * inv.clone()), m))
            .collect();
        let q1 = self.tail.crt_solve(&xi)?;
        finish(obs, q1, &diffs, Method::WangXia)
    }
}

/// The original two-stage quotient recovery: solve
/// `q_1 = [(rbar_i - rbar_1)/d] * m_1^{-1} (mod m_i)` for `i = 2..k` by a CRT
/// over `m_2..m_k`, then proceed as [`reconstruct_quotient`].
pub fn reconstruct_wang_xia<T: Int>(obs: &Observation<'_, T>) -> Result<Reconstruction<T>> {
    WangXiaTables::new(obs.mods())?.reconstruct(obs)
}

/// `q_j` of a clean instance from the remainder differences alone.
pub fn quotient_via_congruence<T: Int>(
    mods: &RobustModuliSet<T>,
    inst: &CleanInstance<T>,
    j: usize,
) -> Result<T> {
    let base = mods.base();
    if j >= base.len() {
        return Err(CrtError::InvalidParams(format!("index {j} out of range")));
    }
    let d = mods.d();
    let big_mj = base.cofactors()[j].clone();
    let mut acc = T::zero();
    for (i, ((ri, u), m)) in inst
        .r
        .iter()
        .zip(base.bezout())
        .zip(base.moduli())
        .enumerate()
    {
        if i == j {
            continue;
        }
        let (delta, rem) = (ri.clone() - inst.r[j].clone()).div_rem(d);
        if !rem.is_zero() {
            return Err(CrtError::Inconsistent { i: j, j: i });
        }
        let term = delta * u.clone() * (big_mj.clone() / m.clone());
        acc = (acc + term).mod_floor(&big_mj);
    }
    Ok(acc)
}
