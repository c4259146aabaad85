//! Error-free solver for the system `x = r_i (mod d*m_i)` with pairwise
//! coprime `m_i`.

use crate::error::{CrtError, Result};
use crate::modular::{mod_least_nonneg, CoprimeModuliSet};
use crate::scalar::Int;

/// Moduli `d*m_1, ..., d*m_k` sharing the common factor `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustModuliSet<T> {
    base: CoprimeModuliSet<T>,
    d: T,
    full_moduli: Vec<T>,
    range: T,
}

impl<T: Int> RobustModuliSet<T> {
    pub fn new(base: CoprimeModuliSet<T>, d: T) -> Result<Self> {
        if !d.is_positive() {
            return Err(CrtError::InvalidParams("d must be positive".into()));
        }
        let full_moduli = base
            .moduli()
            .iter()
            .map(|m| d.clone() * m.clone())
            .collect();
        let range = d.clone() * base.product().clone();
        Ok(Self {
            base,
            d,
            full_moduli,
            range,
        })
    }

    /// Builds the coprime base from `moduli` and attaches `d`.
    pub fn from_moduli(moduli: Vec<T>, d: T) -> Result<Self> {
        Self::new(CoprimeModuliSet::new(moduli)?, d)
    }

    pub fn base(&self) -> &CoprimeModuliSet<T> {
        &self.base
    }

    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// `d*m_i`.
    pub fn full_moduli(&self) -> &[T] {
        &self.full_moduli
    }

    /// The dynamic range `d*M`.
    pub fn range(&self) -> &T {
        &self.range
    }

    /// Builds the clean instance for a known true value `n` in `[0, dM)`.
    pub fn instance_from_n(&self, n: T) -> Result<CleanInstance<T>> {
        if n.is_negative() || n >= self.range {
            return Err(CrtError::OutOfRange);
        }
        let a = n.mod_floor(&self.d);
        let n0 = (n.clone() - a.clone()) / self.d.clone();
        let mut r = Vec::with_capacity(self.len());
        let mut gamma = Vec::with_capacity(self.len());
        let mut q = Vec::with_capacity(self.len());
        for (full, m) in self.full_moduli.iter().zip(self.base.moduli()) {
            let (qi, ri) = n.div_mod_floor(full);
            gamma.push(n0.mod_floor(m));
            r.push(ri);
            q.push(qi);
        }
        Ok(CleanInstance {
            n,
            r,
            a,
            gamma,
            q,
            n0,
        })
    }

    /// Solves the system exactly.
    ///
    /// Computes `N = d*N0 + a` from the digits and cross-checks it against
    /// `sum r_i u_i M_i mod dM`; disagreement is reported as an invariant error.
    pub fn solve_exact(&self, r: &[T]) -> Result<CleanInstance<T>> {
        if r.len() != self.len() {
            return Err(CrtError::LengthMismatch {
                expected: self.len(),
                got: r.len(),
            });
        }
        for (index, (ri, full)) in r.iter().zip(&self.full_moduli).enumerate() {
            if ri.is_negative() || ri >= full {
                return Err(CrtError::RemainderOutOfRange { index });
            }
        }
        if let Some(j) = first_inconsistent(r, &self.d) {
            return Err(CrtError::Inconsistent { i: 0, j });
        }

        let a = r[0].mod_floor(&self.d);
        let mut gamma = Vec::with_capacity(r.len());
        for (i, ri) in r.iter().enumerate() {
            let (g, rem) = (ri.clone() - a.clone()).div_rem(&self.d);
            if !rem.is_zero() {
                return Err(CrtError::Invariant(format!(
                    "(r_{i} - a) not divisible by d"
                )));
            }
            gamma.push(g);
        }
        let n0 = self.base.crt_solve(&gamma)?;
        let n = self.d.clone() * n0.clone() + a.clone();

        let direct = self.solve_direct(r);
        if direct != n {
            return Err(CrtError::Invariant(format!(
                "digit path gives {n}, direct Bezout path gives {direct}"
            )));
        }

        let mut q = Vec::with_capacity(r.len());
        for (i, (ri, full)) in r.iter().zip(&self.full_moduli).enumerate() {
            let (qi, rem) = (n.clone() - ri.clone()).div_rem(full);
            if !rem.is_zero() {
                return Err(CrtError::NonExactQuotient { index: i });
            }
            q.push(qi);
        }
        Ok(CleanInstance {
            n,
            r: r.to_vec(),
            a,
            gamma,
            q,
            n0,
        })
    }

    /// `sum r_i u_i M_i` reduced into `[0, dM)`. Valid only for consistent `r`.
    pub fn solve_direct(&self, r: &[T]) -> T {
        let mut acc = T::zero();
        for ((ri, u), c) in r.iter().zip(self.base.bezout()).zip(self.base.cofactors()) {
            let term = mod_least_nonneg(&(ri.clone() * u.clone() * c.clone()), &self.range);
            acc = (acc + term).mod_floor(&self.range);
        }
        acc
    }
}

/// Index of the first remainder not congruent to `r[0]` modulo `d`.
fn first_inconsistent<T: Int>(r: &[T], d: &T) -> Option<usize> {
    let first = r.first()?.mod_floor(d);
    r.iter().position(|ri| ri.mod_floor(d) != first)
}

/// True iff all pairwise differences of `r` are divisible by `d`.
pub fn check_consistency<T: Int>(r: &[T], d: &T) -> bool {
    first_inconsistent(r, d).is_none()
}

/// The true state of an error-free instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanInstance<T> {
    /// True value `N` in `[0, dM)`.
    pub n: T,
    /// `r_i = N mod d*m_i`.
    pub r: Vec<T>,
    /// Common remainder `N mod d`.
    pub a: T,
    /// Digits `(r_i - a)/d`.
    pub gamma: Vec<T>,
    /// Quotients `(N - r_i)/(d*m_i)`.
    pub q: Vec<T>,
    /// `(N - a)/d`.
    pub n0: T,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn set(m: &[i64], d: i64) -> RobustModuliSet<i64> {
        RobustModuliSet::from_moduli(m.to_vec(), d).unwrap()
    }

    fn brute(m: &[i64], d: i64, r: &[i64]) -> Option<i64> {
        let range = d * m.iter().product::<i64>();
        (0..range).find(|x| r.iter().zip(m).all(|(ri, mi)| x % (d * mi) == *ri))
    }

    #[test]
    fn consistency_examples() {
        assert!(check_consistency(&[34i64, 234], &100));
        assert!(!check_consistency(&[34i64, 233], &100));
        assert!(check_consistency(&[0i64], &7));
    }

    #[test]
    fn solve_examples() {
        let s = set(&[3, 5], 100);
        assert_eq!(brute(&[3, 5], 100, &[34, 234]), Some(1234));
        let inst = s.solve_exact(&[34, 234]).unwrap();
        assert_eq!(inst.n, 1234);
        assert_eq!(inst.a, 34);
        assert_eq!(inst.gamma, vec![0, 2]);
        assert_eq!(inst.n0, 12);
        assert_eq!(inst.q, vec![4, 2]);

        assert_eq!(s.solve_exact(&[0, 0]).unwrap().n, 0);

        let s1 = set(&[3, 5], 1);
        assert_eq!(brute(&[3, 5], 1, &[2, 1]), Some(11));
        assert_eq!(s1.solve_exact(&[2, 1]).unwrap().n, 11);
    }

    #[test]
    fn solve_rejects_inconsistent_and_out_of_range() {
        let s = set(&[3, 5], 100);
        assert_eq!(
            s.solve_exact(&[34, 233]),
            Err(CrtError::Inconsistent { i: 0, j: 1 })
        );
        assert_eq!(
            s.solve_exact(&[300, 0]),
            Err(CrtError::RemainderOutOfRange { index: 0 })
        );
        assert_eq!(
            s.solve_exact(&[-1, 0]),
            Err(CrtError::RemainderOutOfRange { index: 0 })
        );
        assert!(matches!(
            s.solve_exact(&[1]),
            Err(CrtError::LengthMismatch { .. })
        ));
        assert!(RobustModuliSet::from_moduli(vec![3i64, 5], 0).is_err());
    }

    #[test]
    fn instance_from_n_examples() {
        let s = set(&[3, 5], 100);
        assert_eq!(s.instance_from_n(1234).unwrap().r, vec![34, 234]);
        let zero = s.instance_from_n(0).unwrap();
        assert_eq!((zero.r, zero.a, zero.q), (vec![0, 0], 0, vec![0, 0]));
        let inst = s.instance_from_n(1105).unwrap();
        assert_eq!(inst.r, vec![205, 105]);
        assert_eq!(inst.a, 5);
        assert_eq!(inst.gamma, vec![2, 1]);
        assert_eq!(inst.q, vec![3, 2]);
        assert_eq!(s.instance_from_n(1500), Err(CrtError::OutOfRange));
        assert_eq!(s.instance_from_n(-1), Err(CrtError::OutOfRange));
    }

    #[test]
    fn single_modulus_is_degenerate_but_valid() {
        let s = set(&[7], 10);
        let inst = s.solve_exact(&[42]).unwrap();
        assert_eq!(inst.n, 42);
        assert_eq!(inst.q, vec![0]);
    }

    #[test]
    fn clean_instance_identities() {
        let s = set(&[4, 9, 5], 6);
        for n in 0..*s.range() {
            let inst = s.instance_from_n(n).unwrap();
            assert_eq!(n, 6 * inst.n0 + inst.a);
            for i in 0..3 {
                assert_eq!(inst.r[i], inst.gamma[i] * 6 + inst.a);
                assert_eq!(n, s.full_moduli()[i] * inst.q[i] + inst.r[i]);
            }
        }
    }

    #[test]
    fn d_one_matches_classic_crt() {
        let s = set(&[3, 5, 7], 1);
        for x in 0..105 {
            let r = [x % 3, x % 5, x % 7];
            assert_eq!(
                s.solve_exact(&r).unwrap().n,
                s.base().crt_solve(&r).unwrap()
            );
        }
    }

    proptest! {
        #[test]
        fn round_trip_bigint(n in 0u64..u64::MAX, d in 1u32..10_000) {
            let moduli: Vec<BigInt> = [1009i64, 1013, 1019, 1021, 1031]
                .iter().map(|&m| BigInt::from(m)).collect();
            let s = RobustModuliSet::from_moduli(moduli, BigInt::from(d)).unwrap();
            let n = BigInt::from(n) % s.range();
            let inst = s.instance_from_n(n.clone()).unwrap();
            prop_assert_eq!(s.solve_exact(&inst.r).unwrap(), inst);
        }
    }
}
