use std::sync::Arc;

use fuzzcyl::crossed_product::generator_u;
use fuzzcyl::random::random_element;
use fuzzcyl::{CrossedProductElement, Cylinder, Interval, SupportedFunction};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cylinders() -> Vec<(&'static str, Arc<Cylinder<f64>>)> {
    vec![
        ("finite 1/4", Cylinder::finite(0.0, 1.0, 0.25).unwrap()),
        ("finite 1/8", Cylinder::finite(0.0, 1.0, 0.125).unwrap()),
        ("half-finite", Cylinder::half_finite(0.0, 0.5).unwrap()),
        ("infinite", Cylinder::infinite(0.5).unwrap()),
    ]
}

#[test]
fn associative_and_anti_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, cyl) in cylinders() {
        let mut worst = (0.0f64, 0.0f64);
        for _ in 0..40 {
            let x = random_element(&mut rng, &cyl, 2, 3);
            let y = random_element(&mut rng, &cyl, 2, 3);
            let z = random_element(&mut rng, &cyl, 2, 3);
            let l = x.multiply(&y).unwrap().multiply(&z).unwrap();
            let r = x.multiply(&y.multiply(&z).unwrap()).unwrap();
            worst.0 = worst.0.max(l.residual(&r));
            let s = x.multiply(&y).unwrap().involution();
            let t = y.involution().multiply(&x.involution()).unwrap();
            worst.1 = worst.1.max(s.residual(&t));
        }
        assert!(worst.0 <= 1e-9 && worst.1 <= 1e-9, "{name}: {worst:?}");
    }
}

#[test]
fn products_stay_in_their_ideals() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (name, cyl) in cylinders() {
        for _ in 0..30 {
            let x = random_element(&mut rng, &cyl, 3, 3);
            let y = random_element(&mut rng, &cyl, 3, 3);
            for (&n, f) in x.terms() {
                for (&m, g) in y.terms() {
                    let t = cyl.term_product(n, f, g).unwrap();
                    assert!(t.in_ideal(&cyl.ideal(n + m)), "{name}: δ{n}·δ{m} gives {}", t.support());
                }
            }
        }
    }
}

#[test]
fn projectors_equal_range_idempotents_in_products() {
    // pₖδ₀ and UᵏU*ᵏ act identically
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (name, cyl) in cylinders() {
        let u = generator_u(&cyl);
        for k in 1..=3u32 {
            let uk = u.pow(k).unwrap();
            let q = uk.multiply(&uk.involution()).unwrap();
            let p = CrossedProductElement::projector(&cyl, k as i64);
            assert!(q.residual(&p) <= 1e-15, "{name}");
            for _ in 0..10 {
                let x = random_element(&mut rng, &cyl, 2, 3);
                let a = x.multiply(&p).unwrap().multiply(&x).unwrap();
                let b = x.multiply(&q).unwrap().multiply(&x).unwrap();
                assert!(a.residual(&b) <= 1e-12, "{name}");
            }
        }
    }
}

#[test]
fn nilpotency_degree_is_first_empty_ideal() {
    for (h, n) in [(0.25, 5), (0.125, 9), (0.3, 4)] {
        let cyl = Cylinder::finite(0.0, 1.0, h).unwrap();
        let first_empty = (1..).find(|&k| cyl.ideal(k).is_empty()).unwrap();
        assert_eq!(first_empty, n);
        assert_eq!(cyl.order_n(), Some(n));
        let u = generator_u(&cyl);
        let degree = (1..20u32).find(|&k| u.pow(k).unwrap().is_zero()).unwrap();
        assert_eq!(degree as i64, first_empty);
    }
}

#[test]
fn additivity_and_zero() {
    let cyl = Cylinder::finite(0.0, 1.0, 0.25).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = random_element(&mut rng, &cyl, 2, 3);
    let zero = CrossedProductElement::zero(&cyl);
    assert_eq!(x.multiply(&zero).unwrap().residual(&zero), 0.0);
    assert_eq!(x.sub(&x).unwrap().max_abs_on(&cyl.grid(101)), 0.0);
    let f = SupportedFunction::constant(cyl.carrier(), Complex::new(2.0, 0.0));
    let two = CrossedProductElement::function(&cyl, f);
    assert!(two.multiply(&x).unwrap().residual(&x.add(&x).unwrap()) <= 1e-15);
    assert!(Interval::<f64>::closed(0.0, 1.0).contains(0.5, 0.0));
}
