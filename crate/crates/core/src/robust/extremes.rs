use super::{compute_stats, Branch, Method, Observation, Reconstruction};
use crate::error::{CrtError, Result};
use crate::scalar::{times, Int};

/// Reconstructs `N` directly from the corrupted remainders using the
/// extremes of `rbar_i mod d` to detect wraparound of the common remainder.
///
/// When every `|rbar_i - r_i| < d/4` for some consistent `N`, the output
/// satisfies `|N - n_hat| < d/4`.
pub fn reconstruct_extremes<T: Int>(obs: &Observation<'_, T>) -> Result<Reconstruction<T>> {
    let mods = obs.mods();
    let d = mods.d();
    let stats = compute_stats(obs);
    let low = &times(2, &stats.spread()) < d;

    let gamma_hat: Vec<T> = if low {
        obs.rbar().iter().map(|r| r.div_floor(d)).collect()
    } else {
        let mu = stats.mu.clone().ok_or(CrtError::DegenerateStats)?;
        let shift = d.clone() - mu;
        obs.rbar()
            .iter()
            .map(|r| (r.clone() + shift.clone()).div_floor(d))
            .collect()
    };

    let n0_hat = mods.base().crt_solve(&gamma_hat)?;
    let mut n_hat = d.clone() * n0_hat.clone();
    let branch = if low {
        let k = T::from_usize_exact(stats.residues.len());
        let sum = stats
            .residues
            .iter()
            .fold(T::zero(), |acc, r| acc + r.clone());
        n_hat = n_hat + sum.div_floor(&k);
        Branch::LowSpread
    } else {
        Branch::HighSpread
    };

    Ok(Reconstruction {
        n_hat,
        method: Method::Extremes,
        branch,
        q_hat: None,
        gamma_hat: Some(gamma_hat),
        per_modulus: None,
        n0_hat: Some(n0_hat),
        stats: Some(stats),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RobustModuliSet;

    fn run(rbar: &[i64]) -> Result<Reconstruction<i64>> {
        let mods = RobustModuliSet::from_moduli(vec![3i64, 5], 100).unwrap();
        reconstruct_extremes(&Observation::new(&mods, rbar.to_vec()).unwrap())
    }

    #[test]
    fn low_spread_example() {
        let r = run(&[44, 221]).unwrap();
        assert_eq!(r.branch, Branch::LowSpread);
        assert_eq!(r.gamma_hat, Some(vec![0, 2]));
        assert_eq!(r.n0_hat, Some(12));
        assert_eq!(r.n_hat, 1232);
        assert!(4 * (1234 - r.n_hat).abs() < 100);
    }

    #[test]
    fn case_a_example() {
        let r = run(&[190, 85]).unwrap();
        assert_eq!(r.branch, Branch::LowSpread);
        assert_eq!(r.gamma_hat, Some(vec![1, 0]));
        assert_eq!(r.n0_hat, Some(10));
        assert_eq!(r.n_hat, 1087);
    }

    #[test]
    fn case_d_example() {
        let r = run(&[195, 115]).unwrap();
        assert_eq!(r.branch, Branch::HighSpread);
        assert_eq!(r.stats.as_ref().unwrap().mu, Some(95));
        assert_eq!(r.gamma_hat, Some(vec![2, 1]));
        assert_eq!(r.n0_hat, Some(11));
        assert_eq!(r.n_hat, 1100);
    }

    #[test]
    fn zero_error_is_exact() {
        assert_eq!(run(&[34, 234]).unwrap().n_hat, 1234);
    }

    #[test]
    fn high_spread_without_mu_is_degenerate() {
        // residues (0, 50): spread is exactly d/2 and nothing exceeds d/2
        assert_eq!(run(&[100, 50]), Err(CrtError::DegenerateStats));
    }
}
