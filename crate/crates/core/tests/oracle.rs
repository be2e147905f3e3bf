use std::collections::BTreeMap;
use std::time::Instant;

use fuzzcyl::finite_oracle::checks::{identity_suite, standard_keys};
use fuzzcyl::finite_oracle::{orbit_grid, sample_interval_to_finite, Exact, FinitePartialBijection};
use fuzzcyl::random::random_element;
use fuzzcyl::{CrossedProductElement, Cylinder, Error, Interval, SupportedFunction};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn exact_suite_on_every_small_bijection() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in 0..=3 {
        for theta in FinitePartialBijection::enumerate_all(m) {
            let r = identity_suite::<Exact, _>(&theta, 3, &mut rng, 2);
            assert!(r.all_pass(), "θ = {theta}\n{r}");
        }
    }
}

#[test]
fn random_instances_up_to_eight_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t = Instant::now();
    for _ in 0..12 {
        let m = rng.gen_range(4..=8);
        let theta = FinitePartialBijection::random(&mut rng, m);
        let r = identity_suite::<Exact, _>(&theta, 4, &mut rng, 4);
        assert!(r.all_pass(), "θ = {theta}\n{r}");
        let r = identity_suite::<Complex<f64>, _>(&theta, 4, &mut rng, 4);
        assert!(r.all_pass(), "θ = {theta}\n{r}");
    }
    eprintln!("random suites: {:?}, {} keys", t.elapsed(), standard_keys(4).len());
}

#[test]
fn shift_grid_agrees_with_the_interval_algebra() {
    let cyl = Cylinder::finite(0.0, 1.0, 0.25).unwrap();
    let grid = orbit_grid(&cyl, 0.125, 64).unwrap();
    assert_eq!(grid.len(), 4);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let elems: Vec<_> = (0..6).map(|_| random_element(&mut rng, &cyl, 3, 3)).collect();
    let bad = SupportedFunction::real(cyl.carrier(), |_| 1.0, "one");
    let (inst, r) = sample_interval_to_finite(&cyl, &grid, &elems, Some((1, bad)), 1e-10).unwrap();
    assert_eq!(inst.action.size(), 4);
    assert!(r.all_pass(), "{r}");

    // uniform grid k/8 is invariant as well
    let grid: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
    let (_, r) = sample_interval_to_finite(&cyl, &grid, &elems, None, 1e-10).unwrap();
    assert!(r.all_pass(), "{r}");

    let zero = CrossedProductElement::from_terms(&cyl, BTreeMap::new());
    let (_, r) = sample_interval_to_finite(&cyl, &grid, &[zero], None, 0.0).unwrap();
    assert!(r.all_pass());
}

#[test]
fn poincare_grid_is_rejected() {
    let cyl = Cylinder::general(fuzzcyl::BijectionFamily::new(fuzzcyl::FamilyKind::Poincare, Interval::closed(0.0, 1.0)).unwrap().at(0.1).unwrap());
    assert!(matches!(orbit_grid(&cyl, 0.5, 256), Err(Error::GridIncompatible(_))));
    let grid: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
    assert!(matches!(sample_interval_to_finite(&cyl, &grid, &[], None, 1e-10), Err(Error::GridIncompatible(_))));
}

#[test]
fn covariance_needs_the_source_projection() {
    use fuzzcyl::finite_oracle::{FiniteAction, FiniteAlgebraElement, Quotient};
    use fuzzcyl::partial_bijection::SemigroupElement;
    let act = FiniteAction::new(FinitePartialBijection::shift(4), Quotient::Eager);
    let s = SemigroupElement::power(1);
    let a: Vec<Exact> = (0..4).map(|k| Exact::new((k + 1).into(), 0.into())).collect();
    let u = FiniteAlgebraElement::<Exact>::unitary(&act, s);
    let lhs = u.multiply(&FiniteAlgebraElement::function(&act, a.clone())).unwrap();
    let project = |p: Vec<Exact>| a.iter().zip(p).map(|(x, y)| x * y).collect::<Vec<_>>();
    let with_source = FiniteAlgebraElement::function(&act, act.act(s, &project(act.partial_identity(s.star()))));
    let with_target = FiniteAlgebraElement::function(&act, act.act(s, &project(act.partial_identity(s))));
    assert_eq!(lhs, with_source.multiply(&u).unwrap());
    assert_ne!(lhs, with_target.multiply(&u).unwrap());
}

#[test]
fn quotient_relations_fail_together_without_the_quotient() {
    use fuzzcyl::finite_oracle::checks::quotient_relations;
    use fuzzcyl::finite_oracle::{FiniteAction, Quotient};
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let keys = standard_keys(2);
    let plain = FiniteAction::new(FinitePartialBijection::shift(4), Quotient::None);
    assert_eq!(quotient_relations::<Exact, _>(&plain, &keys, &mut rng), [false; 3]);
    let eager = FiniteAction::new(FinitePartialBijection::shift(4), Quotient::Eager);
    assert_eq!(quotient_relations::<Exact, _>(&eager, &keys, &mut rng), [true; 3]);
}
