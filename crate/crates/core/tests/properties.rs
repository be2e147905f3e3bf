use fuzzcyl::{FinitePartialBijection, Interval};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn interval() -> impl Strategy<Value = Interval<f64>> {
    (-4i32..4, 0i32..4, any::<bool>(), any::<bool>()).prop_map(|(lo, len, lc, hc)| {
        let (lo, hi) = (lo as f64 * 0.5, (lo + len) as f64 * 0.5);
        match (lc, hc) {
            (true, true) => Interval::closed(lo, hi),
            (true, false) => Interval::closed_open(lo, hi),
            (false, true) => Interval::open_closed(lo, hi),
            (false, false) => Interval::open(lo, hi),
        }
    })
}

fn bijection() -> impl Strategy<Value = FinitePartialBijection> {
    (1usize..7, any::<u64>()).prop_map(|(m, seed)| FinitePartialBijection::random(&mut ChaCha8Rng::seed_from_u64(seed), m))
}

proptest! {
    #[test]
    fn intersection_is_pointwise_and(a in interval(), b in interval(), k in -10i32..10) {
        let x = k as f64 * 0.25;
        prop_assert_eq!(a.intersect(&b).contains(x, 0.0), a.contains(x, 0.0) && b.contains(x, 0.0));
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
    }

    #[test]
    fn partial_bijections_form_an_inverse_semigroup(t in bijection(), seed in any::<u64>()) {
        let u = FinitePartialBijection::random(&mut ChaCha8Rng::seed_from_u64(seed), t.size());
        let ti = t.inverse();
        prop_assert_eq!(t.compose(&ti).compose(&t), t.clone());
        prop_assert_eq!(ti.compose(&t).compose(&ti), ti.clone());
        prop_assert_eq!(t.compose(&u).inverse(), u.inverse().compose(&ti));
        prop_assert!(t.compose(&ti).is_idempotent());
    }
}
