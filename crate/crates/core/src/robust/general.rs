//! Quotient recovery for arbitrary moduli `n_i` whose pairwise gcds differ.

use super::clamp;
use crate::error::{CrtError, Result};
use crate::modular::{bezout_coefficients, round_half};
use crate::scalar::Int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralModuliSet<T> {
    n: Vec<T>,
    dij: Vec<Vec<T>>,
    lcm: T,
    v: Vec<T>,
    tau4: T,
    ref_index: usize,
}

/// Result of [`general_recover_quotient`]. `ref_index` is 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralRecovery<T> {
    pub ref_index: usize,
    pub q_hat: T,
    pub n_hat: T,
}

impl<T: Int> GeneralModuliSet<T> {
    pub fn new(n: Vec<T>) -> Result<Self> {
        if n.len() < 2 {
            return Err(CrtError::InvalidParams("need at least two moduli".into()));
        }
        for (index, ni) in n.iter().enumerate() {
            if !ni.is_positive() {
                return Err(CrtError::NonPositiveModulus { index });
            }
        }
        let k = n.len();
        let dij: Vec<Vec<T>> = (0..k)
            .map(|i| (0..k).map(|j| n[i].gcd(&n[j])).collect())
            .collect();
        let lcm = n.iter().fold(T::one(), |acc, x| acc.lcm(x));
        let cofactors: Vec<T> = n.iter().map(|x| lcm.clone() / x.clone()).collect();
        let (g, v) = bezout_coefficients(&cofactors);
        if !g.is_one() {
            return Err(CrtError::Invariant(
                "cofactors of the lcm are not coprime".into(),
            ));
        }

        // max over i of min over j != i; first index wins ties
        let mut ref_index = 0;
        let mut tau4 = T::zero();
        for (i, row) in dij.iter().enumerate() {
            let row_min = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .min()
                .expect("k >= 2");
            if i == 0 || row_min > tau4 {
                tau4 = row_min;
                ref_index = i;
            }
        }
        Ok(Self {
            n,
            dij,
            lcm,
            v,
            tau4,
            ref_index,
        })
    }

    pub fn moduli(&self) -> &[T] {
        &self.n
    }

    pub fn gcd(&self, i: usize, j: usize) -> &T {
        &self.dij[i][j]
    }

    pub fn lcm(&self) -> &T {
        &self.lcm
    }

    /// `v_i` with `sum v_i M/n_i = 1`.
    pub fn coefficients(&self) -> &[T] {
        &self.v
    }

    /// `max_i min_{j != i} gcd(n_i, n_j)`; errors must satisfy `4|e| < tau4`.
    pub fn tau4(&self) -> &T {
        &self.tau4
    }

    /// 0-based index attaining `tau4`.
    pub fn ref_index(&self) -> usize {
        self.ref_index
    }

    /// Recovers the quotient `(N - r_ref)/n_ref` and the estimate
    /// `n_ref*q + rbar_ref`. Remainders are clamped into `[0, n_i)` first.
    pub fn recover(&self, rbar: &[T]) -> Result<GeneralRecovery<T>> {
        if rbar.len() != self.n.len() {
            return Err(CrtError::LengthMismatch {
                expected: self.n.len(),
                got: rbar.len(),
            });
        }
        let rbar: Vec<T> = rbar
            .iter()
            .zip(&self.n)
            .map(|(r, n)| clamp(r.clone(), n).0)
            .collect();
        let s = self.ref_index;
        let n_ref = &self.n[s];
        let modulus = self.lcm.clone() / n_ref.clone();

        let mut q = T::zero();
        for (j, ((r, nj), vj)) in rbar.iter().zip(&self.n).zip(&self.v).enumerate() {
            if j == s {
                continue;
            }
            let d = &self.dij[s][j];
            let (factor, rem) =
                (d.clone() * self.lcm.clone()).div_rem(&(n_ref.clone() * nj.clone()));
            if !rem.is_zero() {
                return Err(CrtError::Invariant(
                    "d*M/(n_ref*n_j) is not an integer".into(),
                ));
            }
            let delta = round_half(&(r.clone() - rbar[s].clone()), d);
            q = (q + delta * vj.clone() * factor).mod_floor(&modulus);
        }
        let n_hat = n_ref.clone() * q.clone() + rbar[s].clone();
        Ok(GeneralRecovery {
            ref_index: s,
            q_hat: q,
            n_hat,
        })
    }
}

pub fn build_general<T: Int>(n: Vec<T>) -> Result<GeneralModuliSet<T>> {
    GeneralModuliSet::new(n)
}

pub fn general_recover_quotient<T: Int>(
    gm: &GeneralModuliSet<T>,
    rbar: &[T],
) -> Result<GeneralRecovery<T>> {
    gm.recover(rbar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let g = build_general(vec![120i64, 200, 450]).unwrap();
        assert_eq!((*g.gcd(0, 1), *g.gcd(0, 2), *g.gcd(1, 2)), (40, 30, 50));
        assert_eq!(*g.lcm(), 1800);
        assert_eq!(g.ref_index(), 1);
        assert_eq!(*g.tau4(), 40);
        let v = g.coefficients();
        assert_eq!(v[0] * 15 + v[1] * 9 + v[2] * 4, 1);

        let g = build_general(vec![3i64, 5]).unwrap();
        assert_eq!(
            (*g.gcd(0, 1), *g.lcm(), *g.tau4(), g.ref_index()),
            (1, 15, 1, 0)
        );

        let g = build_general(vec![4i64, 6]).unwrap();
        assert_eq!((*g.gcd(0, 1), *g.lcm()), (2, 12));
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(build_general(vec![5i64]).is_err());
        assert!(build_general(vec![5i64, 0]).is_err());
    }

    #[test]
    fn recover_examples() {
        let g = build_general(vec![120i64, 200, 450]).unwrap();
        let r = g.recover(&[57, 177, 327]).unwrap();
        assert_eq!((r.ref_index, r.q_hat, r.n_hat), (1, 3, 777));
        let r = g.recover(&[66, 170, 320]).unwrap();
        assert_eq!((r.q_hat, r.n_hat), (3, 770));
        let r = g.recover(&[0, 0, 0]).unwrap();
        assert_eq!((r.q_hat, r.n_hat), (0, 0));

        let g = build_general(vec![3i64, 5]).unwrap();
        assert_eq!(g.recover(&[2, 1]).unwrap().n_hat, 11);
    }

    #[test]
    fn recovery_is_independent_of_bezout_representative() {
        // v = (0, 1, -2) is the representative used in the worked example
        let mut g = build_general(vec![120i64, 200, 450]).unwrap();
        g.v = vec![0, 1, -2];
        assert_eq!(g.recover(&[66, 170, 320]).unwrap().q_hat, 3);
    }
}
