//! Complex functions on an interval that carry their support, i.e. elements
//! of the ideals `F(Iₙ)` of the function algebra `F(I)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::partial_bijection::PartialBijection;
use crate::scalar::Scalar;

pub type ComplexMap<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// Default number of sample points for grid comparisons.
pub const DEFAULT_GRID: usize = 101;

/// Step of the central-difference fallback for `d/dx`.
pub const FD_STEP: f64 = 1e-5;

/// Which function algebra elements are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// All (bounded) functions; partial identities available.
    Bounded,
    /// Continuous functions: indicators are rejected.
    Continuous,
    /// Continuous functions vanishing at the boundary of the carrier.
    Vanishing,
}

/// A complex-valued function on `carrier` that is exactly zero off `support`.
#[derive(Clone)]
pub struct SupportedFunction<T> {
    raw: ComplexMap<T>,
    deriv: Option<ComplexMap<T>>,
    support: Interval<T>,
    carrier: Interval<T>,
    continuous: bool,
    label: String,
}

impl<T: Scalar> fmt::Debug for SupportedFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {} (support {})", self.label, self.carrier, self.support)
    }
}

impl<T: Scalar> SupportedFunction<T> {
    /// Wraps `f`; the support is clipped to the carrier.
    pub fn new<F>(carrier: Interval<T>, support: Interval<T>, f: F, label: impl Into<String>) -> Self
    where
        F: Fn(T) -> Complex<T> + Send + Sync + 'static,
    {
        SupportedFunction {
            raw: Arc::new(f),
            deriv: None,
            support: support.intersect(&carrier),
            carrier,
            continuous: true,
            label: label.into(),
        }
    }

    /// Real-valued convenience constructor supported on the whole carrier.
    pub fn real<F>(carrier: Interval<T>, f: F, label: impl Into<String>) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::new(carrier, carrier, move |x| Complex::new(f(x), T::zero()), label)
    }

    /// Attaches an exact derivative, used instead of finite differences.
    pub fn with_derivative<F>(mut self, d: F) -> Self
    where
        F: Fn(T) -> Complex<T> + Send + Sync + 'static,
    {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn zero(carrier: Interval<T>) -> Self {
        Self::new(carrier, Interval::empty(), |_| Complex::new(T::zero(), T::zero()), "0")
            .with_derivative(|_| Complex::new(T::zero(), T::zero()))
    }

    pub fn constant(carrier: Interval<T>, c: Complex<T>) -> Self {
        Self::new(carrier, carrier, move |_| c, format!("{c}"))
            .with_derivative(|_| Complex::new(T::zero(), T::zero()))
    }

    /// The partial identity `p_S`: 1 on `S`, 0 elsewhere.
    pub fn partial_identity(iv: Interval<T>, carrier: Interval<T>) -> Self {
        let mut p = Self::new(carrier, iv, |_| Complex::new(T::one(), T::zero()), format!("p{iv}"))
            .with_derivative(|_| Complex::new(T::zero(), T::zero()));
        p.continuous = iv.intersect(&carrier) == carrier || iv.is_empty();
        p
    }

    /// `Σ cₖ xᵏ` (Horner).
    pub fn polynomial(carrier: Interval<T>, coeffs: Vec<Complex<T>>) -> Self {
        let dcoeffs: Vec<Complex<T>> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * T::from_usize(k).unwrap())
            .collect();
        let label = format!("poly{coeffs:?}");
        let horner = |cs: &[Complex<T>], x: T| {
            cs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * x + c)
        };
        Self::new(carrier, carrier, move |x| horner(&coeffs, x), label).with_derivative(move |x| horner(&dcoeffs, x))
    }

    /// `x ↦ e^{ikx}`.
    pub fn exp_ikx(carrier: Interval<T>, k: T) -> Self {
        Self::new(carrier, carrier, move |x| Complex::new(T::zero(), k * x).exp(), format!("exp(i{k}x)"))
            .with_derivative(move |x| Complex::new(T::zero(), k) * Complex::new(T::zero(), k * x).exp())
    }

    /// `x ↦ √(ax + b)`, zero where the radicand is negative.
    pub fn sqrt_affine(carrier: Interval<T>, a: T, b: T) -> Self {
        Self::new(
            carrier,
            carrier,
            move |x| Complex::new((a * x + b).max(T::zero()).sqrt(), T::zero()),
            format!("sqrt({a}x+{b})"),
        )
        .with_derivative(move |x| {
            let r = a * x + b;
            let d = if r > T::zero() { a / (T::lit(2.0) * r.sqrt()) } else { T::zero() };
            Complex::new(d, T::zero())
        })
    }

    pub fn support(&self) -> Interval<T> {
        self.support
    }

    pub fn carrier(&self) -> Interval<T> {
        self.carrier
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    /// Value at `x`; exactly zero off the support.
    pub fn eval(&self, x: T) -> Complex<T> {
        if self.support.contains(x, T::membership_tol()) {
            (self.raw)(x)
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }

    /// `f'(x)`: exact if known, else a central difference with step
    /// `FD_STEP` (meaningful only away from support boundaries).
    pub fn derivative(&self, x: T) -> Complex<T> {
        if !self.support.contains(x, T::membership_tol()) {
            return Complex::new(T::zero(), T::zero());
        }
        match &self.deriv {
            Some(d) => d(x),
            None => {
                let h = T::lit(FD_STEP);
                ((self.raw)(x + h) - (self.raw)(x - h)) / (h + h)
            }
        }
    }

    /// The derivative as a function (finite differences if needed).
    pub fn derivative_fn(&self) -> Self {
        let me = self.clone();
        Self::new(self.carrier, self.support, move |x| me.derivative(x), format!("d({})", self.label))
    }

    /// Pointwise product; support is the intersection.
    pub fn multiply(&self, other: &Self) -> Self {
        let (f, g) = (self.raw.clone(), other.raw.clone());
        let mut out = Self::new(
            self.carrier,
            self.support.intersect(&other.support),
            move |x| f(x) * g(x),
            format!("({})*({})", self.label, other.label),
        );
        if let (Some(df), Some(dg)) = (&self.deriv, &other.deriv) {
            let (f, g, df, dg) = (self.raw.clone(), other.raw.clone(), df.clone(), dg.clone());
            out = out.with_derivative(move |x| df(x) * g(x) + f(x) * dg(x));
        }
        out.continuous = self.continuous && other.continuous;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, T::one(), "+")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -T::one(), "-")
    }

    fn combine(&self, other: &Self, sign: T, op: &str) -> Self {
        let (f, g) = (self.clone(), other.clone());
        let mut out = Self::new(
            self.carrier,
            self.support.hull(&other.support),
            move |x| f.eval(x) + g.eval(x) * sign,
            format!("({}){op}({})", self.label, other.label),
        );
        if self.deriv.is_some() && other.deriv.is_some() {
            let (f, g) = (self.clone(), other.clone());
            out = out.with_derivative(move |x| f.derivative(x) + g.derivative(x) * sign);
        }
        out.continuous = self.continuous && other.continuous;
        out
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let f = self.raw.clone();
        let mut out = Self::new(self.carrier, self.support, move |x| f(x) * c, format!("{c}*({})", self.label));
        if let Some(d) = &self.deriv {
            let d = d.clone();
            out = out.with_derivative(move |x| d(x) * c);
        }
        out.continuous = self.continuous;
        out
    }

    pub fn conj(&self) -> Self {
        let f = self.raw.clone();
        let mut out = Self::new(self.carrier, self.support, move |x| f(x).conj(), format!("conj({})", self.label));
        if let Some(d) = &self.deriv {
            let d = d.clone();
            out = out.with_derivative(move |x| d(x).conj());
        }
        out.continuous = self.continuous;
        out
    }

    /// Applies `h` to the values, keeping the support.
    pub fn map_values<F>(&self, h: F, label: &str) -> Self
    where
        F: Fn(Complex<T>) -> Complex<T> + Send + Sync + 'static,
    {
        let f = self.raw.clone();
        let mut out = Self::new(self.carrier, self.support, move |x| h(f(x)), format!("{label}({})", self.label));
        out.continuous = self.continuous;
        out
    }

    /// Same values, support cut down to `support ∩ iv`.
    pub fn restrict(&self, iv: &Interval<T>) -> Self {
        let support = self.support.intersect(iv);
        let mut out = self.clone();
        out.continuous = self.continuous && support == self.support;
        out.support = support;
        out.label = format!("{}|{}", self.label, iv);
        out
    }

    /// Whether the support lies inside `ideal` up to membership tolerance.
    pub fn in_ideal(&self, ideal: &Interval<T>) -> bool {
        self.support.is_subset(ideal, T::membership_tol())
    }

    /// The induced action `f ↦ f ∘ α⁻¹`, defined for `f ∈ F(dom α)`; the
    /// result lives in `F(ran α)` with support `α(supp f)`.
    pub fn pullback(&self, alpha: &PartialBijection<T>) -> Result<Self> {
        if !self.in_ideal(&alpha.domain()) {
            return Err(Error::IdealViolation {
                support: self.support.to_string(),
                ideal: alpha.domain().to_string(),
                context: format!(", pulling back {} along {}", self.label, alpha.label()),
            });
        }
        Ok(self.transport(alpha))
    }

    /// `pullback` after first restricting to the domain of `α`.
    pub fn transport(&self, alpha: &PartialBijection<T>) -> Self {
        let support = alpha.image(&self.support);
        let (f, inv) = (self.raw.clone(), alpha.inverse_map());
        let mut out = Self::new(self.carrier, support, move |x| f(inv(x)), format!("{}∘{}^-1", self.label, alpha.label()));
        out.continuous = self.continuous;
        out
    }

    /// `f ∘ β` for a bijection `β` onto this function's carrier, returned on
    /// `β`'s source carrier: changes variables without the ideal bookkeeping.
    pub fn compose_with(&self, beta: &PartialBijection<T>, new_carrier: Interval<T>) -> Self {
        let support = beta.preimage(&self.support);
        let (f, b) = (self.raw.clone(), beta.forward_map());
        let mut out = Self::new(new_carrier, support, move |x| f(b(x)), format!("{}∘{}", self.label, beta.label()));
        out.continuous = self.continuous;
        out
    }

    /// Same function, viewed on another carrier; the support is clipped to it.
    pub fn with_carrier(&self, carrier: Interval<T>) -> Self {
        let mut out = self.clone();
        out.support = self.support.intersect(&carrier);
        out.continuous = self.continuous && out.support == self.support;
        out.carrier = carrier;
        out
    }

    /// Grid points used for comparisons: `n` uniform points of the carrier
    /// (or its sampling window when unbounded).
    pub fn grid(&self, n: usize) -> Vec<T> {
        self.carrier.grid(n)
    }

    pub fn max_residual_on(&self, other: &Self, points: &[T]) -> T {
        points
            .iter()
            .map(|&x| (self.eval(x) - other.eval(x)).norm())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_on(&self, points: &[T]) -> T {
        points.iter().map(|&x| self.eval(x).norm()).fold(T::zero(), T::max)
    }

    /// Grid equality. Blind to anything that happens between grid points,
    /// endpoint closedness included.
    pub fn approx_equal(&self, other: &Self, grid_size: usize, tol: T) -> bool {
        self.max_residual_on(other, &self.grid(grid_size)) <= tol
    }

    /// Checks membership in the given flavor of function algebra.
    pub fn validate(&self, flavor: Flavor) -> Result<()> {
        match flavor {
            Flavor::Bounded => Ok(()),
            Flavor::Continuous if !self.continuous => {
                Err(Error::Precondition(format!("{} is not continuous", self.label)))
            }
            Flavor::Continuous => Ok(()),
            Flavor::Vanishing => {
                self.validate(Flavor::Continuous)?;
                if self.support.is_empty() {
                    return Ok(());
                }
                let tol = T::membership_tol().sqrt();
                let (lo, hi) = self.carrier.sample_window().unwrap();
                for edge in [lo, hi, self.support.lo(), self.support.hi()] {
                    if edge.is_finite() && (self.raw)(edge).norm() > tol {
                        return Err(Error::Precondition(format!(
                            "{} does not vanish at the boundary point {edge}",
                            self.label
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial_bijection::restricted_shift_action;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0)
    }

    fn x_fn() -> SupportedFunction<f64> {
        SupportedFunction::polynomial(unit(), vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)])
    }

    #[test]
    fn products_of_partial_identities() {
        let p1 = SupportedFunction::partial_identity(Interval::closed(0.25, 1.0), unit());
        let pm1 = SupportedFunction::partial_identity(Interval::closed(0.0, 0.75), unit());
        let cap = SupportedFunction::partial_identity(Interval::closed(0.25, 0.75), unit());
        assert!(p1.multiply(&pm1).approx_equal(&cap, DEFAULT_GRID, 0.0));
        assert_eq!(p1.multiply(&pm1).support(), cap.support());
        assert!(p1.multiply(&p1).approx_equal(&p1, DEFAULT_GRID, 0.0));
        assert_eq!(p1.eval(0.5).re, 1.0);
        assert_eq!(p1.eval(0.1).re, 0.0);
        let none = SupportedFunction::partial_identity(Interval::empty(), unit());
        assert!(none.approx_equal(&SupportedFunction::zero(unit()), DEFAULT_GRID, 0.0));
    }

    #[test]
    fn pointwise_arithmetic() {
        let x = x_fn();
        assert!((x.multiply(&x).eval(0.3).re - 0.09).abs() < 1e-16);
        let one = SupportedFunction::partial_identity(unit(), unit());
        assert!(x.multiply(&one).approx_equal(&x, DEFAULT_GRID, 0.0));
        let shifted = SupportedFunction::real(unit(), |x| x + 1e-6, "x+eps");
        assert!(!x.approx_equal(&shifted, DEFAULT_GRID, 1e-9));
    }

    #[test]
    fn grid_blind_to_closedness() {
        let a = SupportedFunction::partial_identity(Interval::closed(0.0, 0.5), unit());
        let b = SupportedFunction::partial_identity(Interval::closed_open(0.0, 0.5), unit());
        // 100 points avoid x = 1/2
        assert!(a.approx_equal(&b, 100, 0.0));
        assert!(!a.approx_equal(&b, DEFAULT_GRID, 0.0));
    }

    #[test]
    fn pullback_along_shift() {
        let s = restricted_shift_action(unit(), 0.25, 1);
        let pm1 = SupportedFunction::partial_identity(s.domain(), unit());
        let p1 = SupportedFunction::partial_identity(s.range(), unit());
        assert!(pm1.pullback(&s).unwrap().approx_equal(&p1, DEFAULT_GRID, 0.0));
        let f = x_fn().restrict(&Interval::closed(0.0, 0.75));
        assert!((f.pullback(&s).unwrap().eval(0.5).re - 0.25).abs() < 1e-16);
        assert!(x_fn().pullback(&s).is_err());
        let id = PartialBijection::identity(unit());
        assert!(x_fn().pullback(&id).unwrap().approx_equal(&x_fn(), DEFAULT_GRID, 0.0));
        // back and forth
        let back = f.pullback(&s).unwrap().pullback(&s.inverse()).unwrap();
        assert!(back.approx_equal(&f, DEFAULT_GRID, 1e-15));
    }

    #[test]
    fn restriction() {
        let one = SupportedFunction::constant(unit(), Complex::new(1.0, 0.0));
        let r = one.restrict(&Interval::closed(0.25, 0.5));
        assert_eq!(r.eval(0.3).re, 1.0);
        assert_eq!(r.eval(0.6).re, 0.0);
        assert!(one.restrict(&Interval::empty()).approx_equal(&SupportedFunction::zero(unit()), DEFAULT_GRID, 0.0));
        let iv = Interval::closed(0.2, 0.7);
        let p = SupportedFunction::partial_identity(iv, unit());
        assert!(x_fn().restrict(&iv).approx_equal(&x_fn().multiply(&p), DEFAULT_GRID, 0.0));
    }

    #[test]
    fn derivatives() {
        let e = SupportedFunction::exp_ikx(unit(), 2.0);
        let fd = SupportedFunction::new(unit(), unit(), |x: f64| Complex::new(0.0, 2.0 * x).exp(), "e");
        for x in [0.2, 0.5, 0.8] {
            assert!((e.derivative(x) - fd.derivative(x)).norm() < 1e-8);
        }
        let sq = SupportedFunction::sqrt_affine(unit(), 2.0, 1.0);
        assert!((sq.derivative(1.5f64.min(1.0)) - Complex::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn flavors() {
        let p = SupportedFunction::partial_identity(Interval::closed(0.25, 1.0), unit());
        assert!(p.validate(Flavor::Bounded).is_ok());
        assert!(p.validate(Flavor::Continuous).is_err());
        let bump = SupportedFunction::real(unit(), |x| x * (1.0 - x), "bump");
        assert!(bump.validate(Flavor::Vanishing).is_ok());
        assert!(x_fn().validate(Flavor::Vanishing).is_err());
        assert!(x_fn().validate(Flavor::Continuous).is_ok());
    }

    #[test]
    fn conjugation_is_an_involution() {
        let e = SupportedFunction::exp_ikx(unit(), 3.0);
        let f = x_fn().scale(Complex::new(0.0, 1.0));
        assert!(e.multiply(&f).conj().approx_equal(&e.conj().multiply(&f.conj()), DEFAULT_GRID, 1e-15));
        assert!(e.conj().conj().approx_equal(&e, DEFAULT_GRID, 0.0));
    }
}
