use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Exact complex rationals.
pub type Exact = Complex<Rational64>;

/// Scalars of the finite oracle: a commutative `*`-ring with a size.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    fn conj(&self) -> Self;

    /// `|z|` as `f64`, used only to report residuals.
    fn magnitude(&self) -> f64;

    /// A small random value (exactly representable for exact types).
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Tolerance for "equal" in identity checks.
    fn tolerance() -> f64;
}

impl Coefficient for Complex<f64> {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn tolerance() -> f64 {
        1e-14
    }
}

impl Coefficient for Exact {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn magnitude(&self) -> f64 {
        let (re, im) = (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN));
        re.hypot(im)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut q = || Rational64::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        Complex::new(q(), q())
    }

    fn tolerance() -> f64 {
        0.0
    }
}
