use fuzzcyl::random::random_element;
use fuzzcyl::star_product::{
    classical_limit_check, first_order_term, interior_grid, phi_grid, poisson_bracket, psi, psi_inv, star,
};
use fuzzcyl::{BijectionFamily, CrossedProductElement, Cylinder, CylinderFunction, FamilyKind, Interval, PoissonCoefficient, SupportedFunction};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unit() -> Interval<f64> {
    Interval::closed(0.0, 1.0)
}

fn poly(cs: &[f64]) -> SupportedFunction<f64> {
    SupportedFunction::polynomial(unit(), cs.iter().map(|&c| Complex::new(c, 0.0)).collect())
}

const HBARS: [f64; 3] = [1e-1, 1e-2, 1e-3];

#[test]
fn shift_limit_is_first_order() {
    let fam = BijectionFamily::new(FamilyKind::Shift, unit()).unwrap();
    let f = CylinderFunction::fourier_mode(unit(), 1);
    let g = CylinderFunction::from_x(poly(&[0.0, 0.0, 1.0]));
    let rep = classical_limit_check(&fam, &f, &g, &HBARS, &PoissonCoefficient::of_family(&fam)).unwrap();
    assert!(rep.order_in(0.9, 1.1), "{rep:?}");
    // R(ℏ) = ℏ exactly for g = x²
    for row in &rep.rows {
        assert!((row.residual - row.hbar).abs() <= 1e-9, "{row:?}");
    }
    assert!(rep.last().unwrap().commutator_error <= 0.1);
}

#[test]
fn poincare_limit_is_first_order() {
    let fam = BijectionFamily::new(FamilyKind::Poincare, unit()).unwrap();
    let f = CylinderFunction::fourier_mode(unit(), 1);
    let g = CylinderFunction::from_x(poly(&[0.0, 1.0]));
    let rep = classical_limit_check(&fam, &f, &g, &HBARS, &PoissonCoefficient::of_family(&fam)).unwrap();
    assert!(rep.order_in(0.9, 1.1), "{rep:?}");
    assert!(rep.last().unwrap().commutator_error <= 0.1, "{rep:?}");
    // the finite-difference β drives the same check to the same conclusion
    let fd = PoissonCoefficient::finite_difference(&fam, 1e-4);
    let rep_fd = classical_limit_check(&fam, &f, &g, &HBARS, &fd).unwrap();
    assert!(rep_fd.order_in(0.9, 1.1), "{rep_fd:?}");
}

#[test]
fn printed_sign_does_not_vanish() {
    // With the first-order term taken as −iℏβ∂_φf∂ₓg the residual stays at
    // 2|β∂_φf∂ₓg| instead of going to zero.
    let fam = BijectionFamily::new(FamilyKind::Shift, unit()).unwrap();
    let beta = PoissonCoefficient::of_family(&fam);
    let f = CylinderFunction::fourier_mode(unit(), 1);
    let g = CylinderFunction::from_x(poly(&[0.0, 1.0]));
    let h = 1e-3;
    let cyl = Cylinder::from_family(&fam, h).unwrap();
    let fs = star(&cyl, &f, &g).unwrap();
    let lhs = fs.sub(&f.mul(&g)).scale(Complex::new(1.0 / h, 0.0));
    let correct = first_order_term(&f, &g, &beta);
    let printed = correct.scale(Complex::new(-1.0, 0.0));
    let xs = interior_grid(&unit(), 2.0 * h, 101);
    let phis = phi_grid(16);
    assert!(lhs.residual_on(&correct, &xs, &phis) <= 1e-9);
    assert!((lhs.residual_on(&printed, &xs, &phis) - 2.0).abs() <= 1e-9);
}

#[test]
fn star_is_associative_and_commutative_on_x_only() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cyl = Cylinder::finite(0.0, 1.0, 0.125).unwrap();
    for _ in 0..10 {
        let [a, b, c] = [0, 1, 2].map(|_| psi(&random_element(&mut rng, &cyl, 2, 2)));
        let l = star(&cyl, &star(&cyl, &a, &b).unwrap(), &c).unwrap();
        let r = star(&cyl, &a, &star(&cyl, &b, &c).unwrap()).unwrap();
        assert!(l.approx_eq(&r, 1e-9));
    }
    let f = CylinderFunction::from_x(poly(&[1.0, 2.0]));
    let g = CylinderFunction::from_x(SupportedFunction::exp_ikx(unit(), 1.0));
    assert!(star(&cyl, &f, &g).unwrap().approx_eq(&f.mul(&g), 1e-15));
}

#[test]
fn psi_is_linear_and_invertible() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let cyl = Cylinder::finite(0.0, 1.0, 0.25).unwrap();
    for _ in 0..20 {
        let x = random_element(&mut rng, &cyl, 3, 3);
        let y = random_element(&mut rng, &cyl, 3, 3);
        let back = psi_inv(&cyl, &psi(&x), 3, 1e-12).unwrap();
        assert!(back.residual(&x) <= 1e-13);
        let sum = psi(&x.add(&y).unwrap());
        assert!(sum.approx_eq(&psi(&x).add(&psi(&y)), 1e-15));
    }
    let f = psi(&CrossedProductElement::function(&cyl, poly(&[0.0, 1.0])));
    assert_eq!(f.eval(0.5, 0.0), f.eval(0.5, 2.0));
}

#[test]
fn bracket_identities() {
    let beta = PoissonCoefficient::new(|x: f64| -(1.0 - x).powi(2) / 2.0, "poincare");
    let f = CylinderFunction::new(unit(), [(1, poly(&[0.5, 1.0])), (-1, poly(&[0.0, 0.0, 1.0]))]);
    let g = CylinderFunction::new(unit(), [(0, poly(&[1.0, 0.0, 1.0])), (2, poly(&[0.0, 2.0]))]);
    let k = CylinderFunction::new(unit(), [(-1, SupportedFunction::exp_ikx(unit(), 2.0))]);
    let anti = poisson_bracket(&f, &g, &beta).add(&poisson_bracket(&g, &f, &beta));
    assert!(anti.approx_eq(&CylinderFunction::zero(unit()), 1e-12));
    let leibniz_l = poisson_bracket(&f, &g.mul(&k), &beta);
    let leibniz_r = poisson_bracket(&f, &g, &beta).mul(&k).add(&g.mul(&poisson_bracket(&f, &k, &beta)));
    assert!(leibniz_l.approx_eq(&leibniz_r, 1e-10));
}
