//! Seeded random functions and elements for property suites.

use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

use crate::crossed_product::{CrossedProductElement, Cylinder};
use crate::function_algebra::SupportedFunction;
use crate::interval::Interval;
use crate::scalar::Scalar;

fn unit_complex<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    Complex::new(T::lit(rng.gen_range(-1.0..=1.0)), T::lit(rng.gen_range(-1.0..=1.0)))
}

/// A random subinterval of a finite window, closed or half-open at random.
pub fn random_subinterval<T: Scalar, R: Rng + ?Sized>(rng: &mut R, iv: &Interval<T>) -> Interval<T> {
    let Some((lo, hi)) = iv.sample_window() else {
        return Interval::empty();
    };
    let (lo, hi) = (lo.as_f64(), hi.as_f64());
    let mut a = rng.gen_range(lo..=hi);
    let mut b = rng.gen_range(lo..=hi);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    Interval::new(T::lit(a), T::lit(b), true, rng.gen_bool(0.5)).intersect(iv)
}

/// A quadratic in the variable rescaled to `[−1, 1]` over the sampling
/// window, complex coefficients in the unit square; with probability 1/3
/// cut down to a random subinterval of `support`.
pub fn random_function<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    carrier: Interval<T>,
    support: Interval<T>,
) -> SupportedFunction<T> {
    let (lo, hi) = carrier.sample_window().unwrap_or((-T::one(), T::one()));
    let two = T::lit(2.0);
    let mid = (lo + hi) / two;
    let half = ((hi - lo) / two).max(T::lit(1e-3));
    let cs: [Complex<T>; 3] = [unit_complex(rng), unit_complex(rng), unit_complex(rng)];
    let f = move |x: T| {
        let t = (x - mid) / half;
        cs[0] + cs[1] * t + cs[2] * t * t
    };
    let df = move |x: T| {
        let t = (x - mid) / half;
        (cs[1] + cs[2] * t * two) / half
    };
    let f = SupportedFunction::new(carrier, support, f, "rand").with_derivative(df);
    if rng.gen_bool(1.0 / 3.0) {
        f.restrict(&random_subinterval(rng, &support))
    } else {
        f
    }
}

/// `Σ fₙδₙ` with `terms` distinct keys drawn from `[−max_key, max_key]`,
/// each `fₙ` random and supported in `Iₙ`.
pub fn random_element<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    cyl: &Arc<Cylinder<T>>,
    max_key: i64,
    terms: usize,
) -> CrossedProductElement<T> {
    let mut keys: Vec<i64> = (-max_key..=max_key).collect();
    let mut chosen = Vec::new();
    while chosen.len() < terms && !keys.is_empty() {
        chosen.push(keys.swap_remove(rng.gen_range(0..keys.len())));
    }
    chosen.sort_unstable();
    let carrier = cyl.carrier();
    let parts: Vec<_> = chosen
        .into_iter()
        .map(|n| (n, random_function(rng, carrier, cyl.ideal(n))))
        .collect();
    CrossedProductElement::from_terms(cyl, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn elements_respect_ideals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cyl = Cylinder::finite(0.0, 1.0, 0.125).unwrap();
        for _ in 0..50 {
            let x = random_element(&mut rng, &cyl, 3, 3);
            assert!(x.support_violations().is_empty());
            assert!(x.terms().len() <= 3);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let cyl = Cylinder::infinite(0.1).unwrap();
        let a = random_element(&mut ChaCha8Rng::seed_from_u64(1), &cyl, 2, 3);
        let b = random_element(&mut ChaCha8Rng::seed_from_u64(1), &cyl, 2, 3);
        assert_eq!(a.residual(&b), 0.0);
    }
}
