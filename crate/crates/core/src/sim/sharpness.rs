use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::campaign::Algorithm;
use crate::error::{CrtError, Result};
use crate::exact::{CleanInstance, RobustModuliSet};
use crate::modular::mod_inverse;
use crate::robust::{
    compute_stats, reconstruct_extremes, reconstruct_quotient, reconstruct_wang_xia,
};
use crate::robust::{ExtremeStats, Observation};
use crate::scalar::{times, Int};

/// Two consistent systems modulo `(d*p, d*q)` that both explain the
/// observation `(d, 3d/2)` with every error of magnitude exactly `d/4`, yet
/// whose solutions are more than `d/2` apart.
#[derive(Debug, Clone)]
pub struct SharpnessWitness<T> {
    pub p: T,
    pub q: T,
    pub d: T,
    /// `p^{-1} mod q`.
    pub v: T,
    pub mods: RobustModuliSet<T>,
    pub observation: Vec<T>,
    /// `r = (3d/4, 7d/4)`, `N_1 = d*v*p + 3d/4`.
    pub instance1: CleanInstance<T>,
    /// `r = (5d/4, 5d/4)`, `N_2 = 5d/4`.
    pub instance2: CleanInstance<T>,
    pub deltas1: Vec<T>,
    pub deltas2: Vec<T>,
    pub gap: T,
    pub stats: ExtremeStats<T>,
    pub outcomes: Vec<AlgorithmOutcome<T>>,
}

/// What one algorithm makes of the shared observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmOutcome<T> {
    pub algorithm: Algorithm,
    pub n_hat: Option<T>,
    pub error: Option<String>,
    /// `4|N_1 - n_hat| < d`
    pub within_bound_of_n1: bool,
    /// `4|N_2 - n_hat| < d`
    pub within_bound_of_n2: bool,
}

pub fn sharpness_witness<T: Int>(p: T, q: T, d: T) -> Result<SharpnessWitness<T>> {
    let four = times(4, &T::one());
    if !d.is_positive() || !(d.clone() % four.clone()).is_zero() {
        return Err(CrtError::InvalidParams(
            "d must be a positive multiple of 4".into(),
        ));
    }
    if p == q {
        return Err(CrtError::InvalidParams("p and q must be distinct".into()));
    }
    for x in [&p, &q] {
        if !is_probable_prime(&x.to_big()) {
            return Err(CrtError::InvalidParams(format!("{x} is not prime")));
        }
    }
    let quarter = d.clone() / four;
    let mods = RobustModuliSet::from_moduli(vec![p.clone(), q.clone()], d.clone())?;
    let v =
        mod_inverse(&p, &q).ok_or_else(|| CrtError::Invariant("p not invertible mod q".into()))?;

    let n1 = d.clone() * v.clone() * p.clone() + times(3, &quarter);
    let n2 = times(5, &quarter);
    let observation = vec![d.clone(), times(6, &quarter)];

    let instance1 = mods.solve_exact(&[times(3, &quarter), times(7, &quarter)])?;
    let instance2 = mods.solve_exact(&[times(5, &quarter), times(5, &quarter)])?;
    let invariant = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(CrtError::Invariant(format!("sharpness witness: {what}")))
        }
    };
    invariant(instance1.n == n1, "N_1 closed form")?;
    invariant(instance2.n == n2, "N_2 closed form")?;
    invariant(
        mods.instance_from_n(n1.clone())? == instance1,
        "instance 1 round trip",
    )?;

    let diff = |inst: &CleanInstance<T>| -> Vec<T> {
        observation
            .iter()
            .zip(&inst.r)
            .map(|(o, r)| o.clone() - r.clone())
            .collect()
    };
    let deltas1 = diff(&instance1);
    let deltas2 = diff(&instance2);
    invariant(
        deltas1.iter().chain(&deltas2).all(|e| e.abs() == quarter),
        "every error has magnitude d/4",
    )?;

    let gap = (n1 - n2).abs();
    invariant(times(2, &gap) > d, "solutions more than d/2 apart")?;

    let obs = Observation::new(&mods, observation.clone())?;
    invariant(!obs.clamped(), "observation in range")?;
    let stats = compute_stats(&obs);
    invariant(times(2, &stats.spread()) == d, "alpha - beta = d/2")?;

    let within = |n: &T, n_hat: &T| times(4, &(n.clone() - n_hat.clone()).abs()) < d;
    let outcomes = Algorithm::ALL
        .iter()
        .map(|&algorithm| {
            let result = match algorithm {
                Algorithm::Quotient => reconstruct_quotient(&obs),
                Algorithm::WangXia => reconstruct_wang_xia(&obs),
                Algorithm::Extremes => reconstruct_extremes(&obs),
            };
            match result {
                Ok(rec) => AlgorithmOutcome {
                    algorithm,
                    within_bound_of_n1: within(&instance1.n, &rec.n_hat),
                    within_bound_of_n2: within(&instance2.n, &rec.n_hat),
                    n_hat: Some(rec.n_hat),
                    error: None,
                },
                Err(e) => AlgorithmOutcome {
                    algorithm,
                    n_hat: None,
                    error: Some(e.to_string()),
                    within_bound_of_n1: false,
                    within_bound_of_n2: false,
                },
            }
        })
        .collect::<Vec<_>>();
    invariant(
        outcomes
            .iter()
            .all(|o| !(o.within_bound_of_n1 && o.within_bound_of_n2)),
        "no estimate serves both instances",
    )?;

    Ok(SharpnessWitness {
        p,
        q,
        d,
        v,
        mods,
        observation,
        instance1,
        instance2,
        deltas1,
        deltas2,
        gap,
        stats,
        outcomes,
    })
}

/// Trial division by small primes, then Miller-Rabin with the first twelve
/// prime bases (deterministic below 3.3e24).
pub fn is_probable_prime(n: &BigInt) -> bool {
    const SMALL: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for p in SMALL {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one: BigInt = n - 1u32;
    let mut odd = n_minus_one.clone();
    let mut s = 0u32;
    while (&odd % 2u32).is_zero() {
        odd /= 2u32;
        s += 1;
    }
    'bases: for a in SMALL {
        let mut x = BigInt::from(a).modpow(&odd, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
