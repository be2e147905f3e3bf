use fuzzcyl::crossed_product::generator_u;
use fuzzcyl::random::{random_element, random_function};
use fuzzcyl::representation::{adjoint, compress, covariance_check, frobenius, max_abs};
use fuzzcyl::{CrossedProductElement, Cylinder, MatrixRep, SupportedFunction};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn homomorphism_on_finite_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [4usize, 8, 64] {
        let h = 1.0 / n as f64;
        let cyl = Cylinder::finite(0.0, 1.0, h).unwrap();
        let rep = MatrixRep::from_cylinder(&cyl, &[h / 2.0], 1000).unwrap();
        assert_eq!(rep.dim(), n);
        for _ in 0..25 {
            let x = random_element(&mut rng, &cyl, 3, 3);
            let y = random_element(&mut rng, &cyl, 3, 3);
            let lhs = rep.represent(&x.multiply(&y).unwrap());
            let rhs = rep.represent(&x) * rep.represent(&y);
            assert!(frobenius(&(lhs - rhs)) <= 1e-9 * n as f64);
            let star = rep.represent(&x.involution());
            assert!(max_abs(&(star - adjoint(&rep.represent(&x)))) <= 1e-10);
            let sum = rep.represent(&x.add(&y).unwrap());
            assert!(max_abs(&(sum - rep.represent(&x) - rep.represent(&y))) <= 1e-15);
        }
        assert_eq!(rep.nilpotency_index(), Some(n));
    }
}

#[test]
fn covariance_on_finite_and_truncated_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let cases = [
        (Cylinder::finite(0.0, 1.0, 0.25).unwrap(), 0.125),
        (Cylinder::finite(0.0, 1.0, 0.125).unwrap(), 0.0625),
        (Cylinder::half_finite(0.0, 0.25).unwrap(), 0.125),
        (Cylinder::infinite(0.125).unwrap(), 0.0625),
    ];
    for (cyl, x0) in cases {
        let rep = MatrixRep::from_cylinder(&cyl, &[x0], 64).unwrap();
        let samples: Vec<_> = (0..5).map(|_| random_function(&mut rng, cyl.carrier(), cyl.carrier())).collect();
        let report = covariance_check(&cyl, &rep, &samples, 3, 1e-10).unwrap();
        assert!(report.all_pass(), "{:?}\n{report}", cyl);
    }
}

#[test]
fn finite_rep_is_a_corner_of_the_infinite_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [4usize, 8] {
        let h = 1.0 / n as f64;
        let fin = Cylinder::finite(0.0, 1.0, h).unwrap();
        let inf = Cylinder::infinite(h).unwrap();
        let rep_f = MatrixRep::from_cylinder(&fin, &[h / 2.0], 1000).unwrap();
        let rep_i = MatrixRep::from_cylinder(&inf, &[h / 2.0], 4 * n + 1).unwrap();
        let idx = rep_i.indices_in(&fin.carrier());
        assert_eq!(idx.len(), n);
        assert_eq!(compress(rep_i.v(), &idx), *rep_f.v());
        let x = random_element(&mut rng, &fin, 2, 3);
        let lifted = CrossedProductElement::from_terms(
            &inf,
            x.terms().iter().map(|(&k, f)| (k, f.with_carrier(inf.carrier()))),
        );
        let diff = compress(&rep_i.represent(&lifted), &idx) - rep_f.represent(&x);
        assert!(max_abs(&diff) <= 1e-12);
        let u_inf = generator_u(&inf);
        assert_eq!(compress(&rep_i.represent(&u_inf), &idx), rep_f.represent(&generator_u(&fin)));
    }
}

#[test]
fn diagonal_functions() {
    let cyl = Cylinder::finite(0.0, 1.0, 0.25).unwrap();
    let rep = MatrixRep::from_cylinder(&cyl, &[0.125], 10).unwrap();
    let f = SupportedFunction::exp_ikx(cyl.carrier(), 3.0);
    let m = rep.represent(&CrossedProductElement::function(&cyl, f.clone()));
    for (k, &x) in rep.points().iter().enumerate() {
        assert_eq!(m[(k, k)], f.eval(x));
    }
    assert_eq!(m[(1, 0)], Complex::new(0.0, 0.0));
}
