use num_bigint::BigInt;
use proptest::prelude::*;
use robust_crt::sim::{inject_errors, ErrorVector};
use robust_crt::{
    reconstruct_extremes, reconstruct_quotient, reconstruct_wang_xia, round_half, Observation,
    RobustModuliSet,
};

#[test]
fn quotient_estimate_is_rounded_mean_of_errors() {
    let mods = RobustModuliSet::from_moduli(vec![4i64, 9, 5], 13).unwrap();
    let b = 3;
    for n in (0..*mods.range()).step_by(7) {
        let inst = mods.instance_from_n(n).unwrap();
        for e0 in -b..=b {
            for e1 in -b..=b {
                for e2 in -b..=b {
                    let obs =
                        inject_errors(&mods, &inst, &ErrorVector::new(vec![e0, e1, e2])).unwrap();
                    let eff: Vec<i64> =
                        obs.rbar().iter().zip(&inst.r).map(|(a, b)| a - b).collect();
                    let rec = reconstruct_quotient(&obs).unwrap();
                    assert_eq!(rec.q_hat.as_ref(), Some(&inst.q));
                    let shift = rec.n_hat - n;
                    assert_eq!(shift, round_half(&eff.iter().sum::<i64>(), &3));
                    assert!(
                        *eff.iter().min().unwrap() <= shift && shift <= *eff.iter().max().unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn zero_error_reproduces_n_for_every_algorithm() {
    let mods = RobustModuliSet::from_moduli(vec![3i64, 5, 7], 12).unwrap();
    for n in 0..*mods.range() {
        let inst = mods.instance_from_n(n).unwrap();
        let obs = Observation::new(&mods, inst.r.clone()).unwrap();
        assert_eq!(reconstruct_quotient(&obs).unwrap().n_hat, n);
        assert_eq!(reconstruct_wang_xia(&obs).unwrap().n_hat, n);
        let ext = reconstruct_extremes(&obs).unwrap();
        assert_eq!(ext.n_hat, n);
        assert_eq!(ext.branch.as_str(), "low-spread");
    }
}

#[test]
fn odd_d_uses_largest_integer_below_quarter() {
    // d = 13: |delta| <= 3 is strictly below 13/4
    let mods = RobustModuliSet::from_moduli(vec![2i64, 3], 13).unwrap();
    for n in 0..*mods.range() {
        let inst = mods.instance_from_n(n).unwrap();
        for e0 in -3..=3 {
            for e1 in -3..=3 {
                let obs = inject_errors(&mods, &inst, &ErrorVector::new(vec![e0, e1])).unwrap();
                for rec in [
                    reconstruct_quotient(&obs).unwrap(),
                    reconstruct_extremes(&obs).unwrap(),
                ] {
                    assert!(4 * (rec.n_hat - n).abs() < 13, "N={n} delta=({e0},{e1})");
                }
            }
        }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_holds_beyond_machine_words(
        seed_n in any::<u128>(),
        d in 4u64..1_000_000_000,
        raw_errors in proptest::collection::vec(any::<i64>(), 5),
    ) {
        let moduli: Vec<BigInt> = [1_000_000_007u64, 998_244_353, 1_000_000_009, 754_974_721, 167_772_161]
            .iter().map(|&m| big(m)).collect();
        let mods = RobustModuliSet::from_moduli(moduli, big(d)).unwrap();
        let n = BigInt::from(seed_n) * BigInt::from(seed_n) % mods.range();
        let inst = mods.instance_from_n(n.clone()).unwrap();
        let b = (d as i64 + 3) / 4 - 1;
        let delta: Vec<BigInt> = raw_errors.iter().map(|e| BigInt::from(e.rem_euclid(2 * b + 1) - b)).collect();
        let obs = inject_errors(&mods, &inst, &ErrorVector::new(delta)).unwrap();
        let d_big = big(d);
        let within = |n_hat: &BigInt| num_traits::Signed::abs(&(&n - n_hat)) * 4 < d_big;

        let q = reconstruct_quotient(&obs).unwrap();
        prop_assert_eq!(q.q_hat.as_ref(), Some(&inst.q));
        prop_assert!(within(&q.n_hat));
        prop_assert_eq!(&reconstruct_wang_xia(&obs).unwrap().n_hat, &q.n_hat);

        let e = reconstruct_extremes(&obs).unwrap();
        prop_assert!(within(&e.n_hat));
    }
}
