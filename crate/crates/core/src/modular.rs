//! Exact modular arithmetic primitives: extended gcd, Bezout chains, the
//! classic CRT, and the rounding and remainder conventions used throughout.

use crate::error::{CrtError, Result};
use crate::scalar::Int;

/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn extended_gcd<T: Int>(a: &T, b: &T) -> (T, T, T) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Folds `extended_gcd` left to right so that `sum(coeffs[i] * values[i]) == g`
/// where `g` is the gcd of all values.
pub fn bezout_coefficients<T: Int>(values: &[T]) -> (T, Vec<T>) {
    let mut iter = values.iter();
    let Some(first) = iter.next() else {
        return (T::zero(), Vec::new());
    };
    let mut g = first.abs();
    let mut coeffs = vec![if first.is_negative() {
        -T::one()
    } else {
        T::one()
    }];
    for v in iter {
        let (next, x, y) = extended_gcd(&g, v);
        for c in coeffs.iter_mut() {
            *c = c.clone() * x.clone();
        }
        coeffs.push(y);
        g = next;
    }
    (g, coeffs)
}

/// Least non-negative remainder of `h` modulo `m` (`m >= 1`).
pub fn mod_least_nonneg<T: Int>(h: &T, m: &T) -> T {
    debug_assert!(m.is_positive());
    h.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists, in `[0, m)`.
pub fn mod_inverse<T: Int>(a: &T, m: &T) -> Option<T> {
    let (g, x, _) = extended_gcd(a, m);
    if g.is_one() {
        Some(mod_least_nonneg(&x, m))
    } else {
        None
    }
}

/// An exact signed fraction with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedRatio<T> {
    numerator: T,
    denominator: T,
}

impl<T: Int> SignedRatio<T> {
    pub fn new(numerator: T, denominator: T) -> Result<Self> {
        if denominator.is_zero() {
            return Err(CrtError::ZeroDenominator);
        }
        if denominator.is_negative() {
            Ok(Self {
                numerator: -numerator,
                denominator: -denominator,
            })
        } else {
            Ok(Self {
                numerator,
                denominator,
            })
        }
    }

    pub fn numerator(&self) -> &T {
        &self.numerator
    }

    pub fn denominator(&self) -> &T {
        &self.denominator
    }

    /// The unique integer `n` with `x - 1/2 <= n < x + 1/2`.
    ///
    /// Exact halves go down: `[7/2] = 3`, `[-1/2] = -1`.
    pub fn round_half(&self) -> T {
        let two = T::one() + T::one();
        let num = two.clone() * self.numerator.clone() - self.denominator.clone();
        let den = two * self.denominator.clone();
        num_integer::Integer::div_ceil(&num, &den)
    }
}

/// `[num / den]` for a positive denominator.
pub fn round_half<T: Int>(num: &T, den: &T) -> T {
    SignedRatio::new(num.clone(), den.clone())
        .expect("non-zero denominator")
        .round_half()
}

/// A set of pairwise coprime moduli with everything the closed-form CRT needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeModuliSet<T> {
    moduli: Vec<T>,
    product: T,
    cofactors: Vec<T>,
    bezout: Vec<T>,
    // u_i * M_i reduced into [0, M)
    idempotents: Vec<T>,
}

impl<T: Int> CoprimeModuliSet<T> {
    /// Builds the set, checking coprimality and the identity `sum u_i M_i = 1`.
    pub fn new(moduli: Vec<T>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(CrtError::EmptyModuli);
        }
        for (index, m) in moduli.iter().enumerate() {
            if !m.is_positive() {
                return Err(CrtError::NonPositiveModulus { index });
            }
        }
        for i in 0..moduli.len() {
            for j in i + 1..moduli.len() {
                if !moduli[i].gcd(&moduli[j]).is_one() {
                    return Err(CrtError::NotCoprime { i, j });
                }
            }
        }
        let product = moduli.iter().fold(T::one(), |acc, m| acc * m.clone());
        let cofactors: Vec<T> = moduli.iter().map(|m| product.clone() / m.clone()).collect();
        let (g, bezout) = bezout_coefficients(&cofactors);
        let identity = bezout
            .iter()
            .zip(&cofactors)
            .fold(T::zero(), |acc, (u, c)| acc + u.clone() * c.clone());
        if !g.is_one() || !identity.is_one() {
            return Err(CrtError::Invariant(
                "Bezout identity does not sum to 1".into(),
            ));
        }
        let idempotents = bezout
            .iter()
            .zip(&cofactors)
            .map(|(u, c)| mod_least_nonneg(&(u.clone() * c.clone()), &product))
            .collect();
        Ok(Self {
            moduli,
            product,
            cofactors,
            bezout,
            idempotents,
        })
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn moduli(&self) -> &[T] {
        &self.moduli
    }

    /// `M`, the product of all moduli.
    pub fn product(&self) -> &T {
        &self.product
    }

    /// `M_i = M / m_i`.
    pub fn cofactors(&self) -> &[T] {
        &self.cofactors
    }

    /// `u_i` with `sum u_i M_i = 1`. Not canonicalized.
    pub fn bezout(&self) -> &[T] {
        &self.bezout
    }

    /// Solves `x = residues_i (mod m_i)` for the unique `x` in `[0, M)`.
    pub fn crt_solve(&self, residues: &[T]) -> Result<T> {
        if residues.len() != self.len() {
            return Err(CrtError::LengthMismatch {
                expected: self.len(),
                got: residues.len(),
            });
        }
        let mut acc = T::zero();
        for ((r, m), e) in residues.iter().zip(&self.moduli).zip(&self.idempotents) {
            let term = mod_least_nonneg(r, m) * e.clone();
            acc = (acc + term).mod_floor(&self.product);
        }
        Ok(acc)
    }
}

/// Convenience wrapper matching the free-function form.
pub fn bezout_chain<T: Int>(moduli: Vec<T>) -> Result<CoprimeModuliSet<T>> {
    CoprimeModuliSet::new(moduli)
}

pub fn crt_solve<T: Int>(residues: &[T], mods: &CoprimeModuliSet<T>) -> Result<T> {
    mods.crt_solve(residues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn brute_crt(residues: &[i64], moduli: &[i64]) -> i64 {
        let m: i64 = moduli.iter().product();
        (0..m)
            .find(|x| {
                residues
                    .iter()
                    .zip(moduli)
                    .all(|(r, mi)| x.rem_euclid(*mi) == r.rem_euclid(*mi))
            })
            .unwrap()
    }

    #[test]
    fn extended_gcd_examples() {
        let (g, x, y) = extended_gcd(&3i64, &5);
        assert_eq!(g, 1);
        assert_eq!(3 * x + 5 * y, 1);
        assert_eq!(extended_gcd(&0i64, &7), (7, 0, 1));
        let (g, x, y) = extended_gcd(&12i64, &18);
        assert_eq!(g, 6);
        assert_eq!(12 * x + 18 * y, 6);
    }

    #[test]
    fn extended_gcd_negative_operands() {
        for (a, b) in [(-12i64, 18), (12, -18), (-12, -18), (-7, 0), (0, 0)] {
            let (g, x, y) = extended_gcd(&a, &b);
            assert!(g >= 0);
            assert_eq!(a * x + b * y, g);
        }
    }

    #[test]
    fn bezout_chain_examples() {
        let s = bezout_chain(vec![3i64, 5]).unwrap();
        assert_eq!(s.cofactors(), &[5, 3]);
        let u = s.bezout();
        assert_eq!(5 * u[0] + 3 * u[1], 1);

        let s = bezout_chain(vec![7i64]).unwrap();
        assert_eq!(s.bezout(), &[1]);
        assert_eq!(s.product(), &7);

        let s = bezout_chain(vec![2i64, 3, 5]).unwrap();
        let u = s.bezout();
        assert_eq!(15 * u[0] + 10 * u[1] + 6 * u[2], 1);
    }

    #[test]
    fn bezout_chain_rejects_bad_moduli() {
        assert_eq!(
            bezout_chain(vec![4i64, 6]),
            Err(CrtError::NotCoprime { i: 0, j: 1 })
        );
        assert_eq!(
            bezout_chain(vec![3i64, 0]),
            Err(CrtError::NonPositiveModulus { index: 1 })
        );
        assert_eq!(bezout_chain(Vec::<i64>::new()), Err(CrtError::EmptyModuli));
    }

    #[test]
    fn crt_solve_examples() {
        let s = bezout_chain(vec![3i64, 5]).unwrap();
        assert_eq!(s.crt_solve(&[0, 0]).unwrap(), 0);
        assert_eq!(brute_crt(&[2, 1], &[3, 5]), 11);
        assert_eq!(s.crt_solve(&[2, 1]).unwrap(), 11);
        let s = bezout_chain(vec![3i64, 5, 7]).unwrap();
        assert_eq!(brute_crt(&[0, 2, 1], &[3, 5, 7]), 57);
        assert_eq!(s.crt_solve(&[0, 2, 1]).unwrap(), 57);
        assert!(matches!(
            s.crt_solve(&[1]),
            Err(CrtError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn crt_round_trip_exhaustive() {
        for moduli in [
            vec![3i64, 5],
            vec![3, 5, 7],
            vec![4, 9, 25],
            vec![11, 13, 17, 19],
        ] {
            let s = bezout_chain(moduli.clone()).unwrap();
            for x in 0..*s.product() {
                let res: Vec<i64> = moduli.iter().map(|m| x % m).collect();
                assert_eq!(s.crt_solve(&res).unwrap(), x);
            }
        }
    }

    #[test]
    fn crt_matches_brute_force_with_unreduced_residues() {
        let moduli = [3i64, 5, 7];
        let s = bezout_chain(moduli.to_vec()).unwrap();
        for res in [[-1i64, 7, 100], [5, -5, 13], [0, 0, -8]] {
            assert_eq!(s.crt_solve(&res).unwrap(), brute_crt(&res, &moduli));
        }
    }

    #[test]
    fn round_half_examples() {
        assert_eq!(round_half(&-80i64, &100), -1);
        assert_eq!(round_half(&50i64, &100), 0);
        assert_eq!(round_half(&7i64, &2), 3);
        assert_eq!(round_half(&-1i64, &2), -1);
        assert_eq!(round_half(&-105i64, &100), -1);
        assert_eq!(SignedRatio::new(1i64, -2).unwrap().round_half(), -1);
        assert_eq!(SignedRatio::new(1i64, 0), Err(CrtError::ZeroDenominator));
    }

    #[test]
    fn mod_least_nonneg_examples() {
        assert_eq!(mod_least_nonneg(&-5i64, &100), 95);
        assert_eq!(mod_least_nonneg(&1234i64, &300), 34);
        assert_eq!(mod_least_nonneg(&34i64, &100), 34);
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(&7i64, &11), Some(8));
        assert_eq!(mod_inverse(&3i64, &5), Some(2));
        assert_eq!(mod_inverse(&4i64, &6), None);
    }

    #[test]
    fn bigint_moduli_beyond_u128() {
        let p: BigInt = "340282366920938463463374607431768211507".parse().unwrap();
        let q: BigInt = "170141183460469231731687303715884105727".parse().unwrap();
        let s = bezout_chain(vec![p.clone(), q.clone()]).unwrap();
        let x: BigInt = "12345678901234567890123456789012345678901234567890"
            .parse()
            .unwrap();
        let res = vec![&x % &p, &x % &q];
        assert_eq!(s.crt_solve(&res).unwrap(), x);
    }

    proptest! {
        #[test]
        fn extended_gcd_identity(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
            let (g, x, y) = extended_gcd(&a, &b);
            prop_assert!(g >= 0);
            prop_assert_eq!(a * x + b * y, g);
            prop_assert_eq!(g, num_integer::gcd(a, b));
        }

        #[test]
        fn round_half_is_identity_on_integers(n in -1_000_000_000i64..1_000_000_000) {
            prop_assert_eq!(round_half(&n, &1), n);
        }

        #[test]
        fn round_half_within_half_open_window(num in -1_000_000i64..1_000_000, den in 1i64..10_000) {
            let n = round_half(&num, &den);
            // n - num/den in [-1/2, 1/2)  <=>  -den <= 2(n*den - num) < den
            let twice = 2 * (n * den - num);
            prop_assert!(-den <= twice && twice < den);
        }

        #[test]
        fn mod_least_nonneg_range(h in any::<i64>().prop_map(|h| h / 4), m in 1i64..1_000_000) {
            let g = mod_least_nonneg(&h, &m);
            prop_assert!(0 <= g && g < m);
            prop_assert_eq!((g - h).rem_euclid(m), 0);
        }

        #[test]
        fn crt_round_trip_large(x in 0u64..u64::MAX) {
            let moduli: Vec<BigInt> = [1_000_003i64, 1_000_033, 1_000_037, 998_244_353]
                .iter().map(|&m| BigInt::from(m)).collect();
            let s = bezout_chain(moduli.clone()).unwrap();
            let x = BigInt::from(x) % s.product();
            let res: Vec<BigInt> = moduli.iter().map(|m| &x % m).collect();
            prop_assert_eq!(s.crt_solve(&res).unwrap(), x);
        }
    }
}
