//! Fourier-finite functions on the cylinder `I × S¹`, the map
//! `Ψ: Σ fₙδₙ ↦ Σ fₙ(x)e^{inφ}` and its inverse, the induced star product
//! and its first-order (Poisson) behaviour as ℏ → 0.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::crossed_product::{CrossedProductElement, Cylinder};
use crate::error::{Error, Result};
use crate::function_algebra::{SupportedFunction, DEFAULT_GRID};
use crate::interval::{uniform, Interval};
use crate::partial_bijection::BijectionFamily;
use crate::scalar::Scalar;

/// Number of φ samples used by grid comparisons.
pub const PHI_GRID: usize = 16;

/// Values below this are treated as exact zeros by the limit fit.
pub const NOISE_FLOOR: f64 = 1e-9;

/// `Σ fₙ(x) e^{inφ}` with finitely many coefficient functions. Unlike a
/// crossed-product element the coefficients are not tied to ideals, so
/// pointwise products stay in this type.
#[derive(Clone)]
pub struct CylinderFunction<T> {
    carrier: Interval<T>,
    coeffs: BTreeMap<i64, SupportedFunction<T>>,
}

impl<T: Scalar> std::fmt::Debug for CylinderFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

impl<T: Scalar> CylinderFunction<T> {
    pub fn new<I>(carrier: Interval<T>, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, SupportedFunction<T>)>,
    {
        let mut out = CylinderFunction { carrier, coeffs: BTreeMap::new() };
        for (n, f) in coeffs {
            out.accumulate(n, f);
        }
        out
    }

    pub fn zero(carrier: Interval<T>) -> Self {
        Self::new(carrier, [])
    }

    /// `f(x)`, independent of φ.
    pub fn from_x(f: SupportedFunction<T>) -> Self {
        Self::new(f.carrier(), [(0, f)])
    }

    /// `e^{inφ}`.
    pub fn fourier_mode(carrier: Interval<T>, n: i64) -> Self {
        Self::new(carrier, [(n, SupportedFunction::constant(carrier, Complex::new(T::one(), T::zero())))])
    }

    fn accumulate(&mut self, n: i64, f: SupportedFunction<T>) {
        if f.support().is_empty() {
            return;
        }
        let merged = match self.coeffs.remove(&n) {
            Some(g) => g.add(&f),
            None => f,
        };
        self.coeffs.insert(n, merged);
    }

    pub fn carrier(&self) -> Interval<T> {
        self.carrier
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, SupportedFunction<T>> {
        &self.coeffs
    }

    pub fn coefficient(&self, n: i64) -> Option<&SupportedFunction<T>> {
        self.coeffs.get(&n)
    }

    /// Largest `|n|` with a stored coefficient.
    pub fn fourier_degree(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// Hull of the coefficient supports.
    pub fn support(&self) -> Interval<T> {
        self.coeffs.values().fold(Interval::empty(), |acc, f| acc.hull(&f.support()))
    }

    pub fn eval(&self, x: T, phi: T) -> Complex<T> {
        self.coeffs.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (&n, f)| {
            acc + f.eval(x) * Complex::new(T::zero(), T::from_i64(n).unwrap() * phi).exp()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, f) in &other.coeffs {
            out.accumulate(n, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.carrier, self.coeffs.iter().map(|(&n, f)| (n, f.scale(c))))
    }

    /// Pointwise (commutative) product: convolution of the coefficients.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.carrier);
        for (&n, f) in &self.coeffs {
            for (&m, g) in &other.coeffs {
                out.accumulate(n + m, f.multiply(g));
            }
        }
        out
    }

    /// Multiplication by a real function of `x`.
    pub fn mul_real(&self, beta: &PoissonCoefficient<T>) -> Self {
        let b = SupportedFunction::real(self.carrier, {
            let beta = beta.beta.clone();
            move |x| beta(x)
        }, beta.label.clone());
        Self::new(self.carrier, self.coeffs.iter().map(|(&n, f)| (n, f.multiply(&b))))
    }

    /// `∂ₓ`, coefficientwise (analytic where known, else central differences).
    pub fn dx(&self) -> Self {
        Self::new(self.carrier, self.coeffs.iter().map(|(&n, f)| (n, f.derivative_fn())))
    }

    /// `∂_φ`: multiplies coefficient `n` by `in`.
    pub fn dphi(&self) -> Self {
        Self::new(
            self.carrier,
            self.coeffs
                .iter()
                .filter(|(&n, _)| n != 0)
                .map(|(&n, f)| (n, f.scale(Complex::new(T::zero(), T::from_i64(n).unwrap())))),
        )
    }

    /// `max |f − g|` over `xs × φs`.
    pub fn residual_on(&self, other: &Self, xs: &[T], phis: &[T]) -> T {
        let mut worst = T::zero();
        for &x in xs {
            for &p in phis {
                worst = worst.max((self.eval(x, p) - other.eval(x, p)).norm());
            }
        }
        worst
    }

    pub fn max_abs_on(&self, xs: &[T], phis: &[T]) -> T {
        self.residual_on(&Self::zero(self.carrier), xs, phis)
    }

    /// Coefficient maps agree on a grid of the carrier.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.residual_on(other, &self.carrier.grid(DEFAULT_GRID), &phi_grid(PHI_GRID)) <= tol
    }
}

/// `φⱼ = −π + 2πj/k`.
pub fn phi_grid<T: Scalar>(k: usize) -> Vec<T> {
    let two_pi = T::PI() + T::PI();
    (0..k).map(|j| -T::PI() + two_pi * T::from_usize(j).unwrap() / T::from_usize(k).unwrap()).collect()
}

/// `Ψ`: relabels `δₙ` as `e^{inφ}`.
pub fn psi<T: Scalar>(x: &CrossedProductElement<T>) -> CylinderFunction<T> {
    CylinderFunction::new(x.cylinder().carrier(), x.terms().iter().map(|(&n, f)| (n, f.clone())))
}

/// Quadrature node count for coefficients up to `max_n`.
pub fn node_count(max_n: i64) -> usize {
    4 * max_n.max(1) as usize + 1
}

/// `Ψ⁻¹` for a callable `f(x, φ)`: Fourier coefficients by trapezoidal
/// quadrature (exact for trigonometric polynomials of degree below `K/2`),
/// clipped to the ideals. Coefficients beyond `max_n` up to `2·max_n` are
/// probed and reported as aliasing when they exceed `tol`.
pub fn psi_inv_fn<T, F>(cyl: &Arc<Cylinder<T>>, f: F, max_n: i64, tol: T) -> Result<CrossedProductElement<T>>
where
    T: Scalar,
    F: Fn(T, T) -> Complex<T> + Send + Sync + 'static,
{
    let k = node_count(max_n);
    let nodes = phi_grid::<T>(k);
    let f = Arc::new(f);
    let carrier = cyl.carrier();
    let coefficient = |n: i64, support: Interval<T>| {
        let (f, nodes) = (f.clone(), nodes.clone());
        let kk = T::from_usize(k).unwrap();
        let nn = T::from_i64(n).unwrap();
        SupportedFunction::new(
            carrier,
            support,
            move |x| {
                nodes
                    .iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, &p| acc + f(x, p) * Complex::new(T::zero(), -nn * p).exp())
                    / kk
            },
            format!("c{n}"),
        )
    };
    let grid = carrier.grid(DEFAULT_GRID);
    for n in (max_n + 1)..=(2 * max_n.max(1)) {
        for m in [n, -n] {
            let magnitude = coefficient(m, carrier).max_abs_on(&grid);
            if magnitude > tol {
                return Err(Error::Aliasing { n: m, max_n, magnitude: magnitude.as_f64() });
            }
        }
    }
    let mut terms = Vec::new();
    for n in -max_n..=max_n {
        let c = coefficient(n, cyl.ideal(n));
        if c.max_abs_on(&grid) > tol {
            terms.push((n, c));
        }
    }
    Ok(CrossedProductElement::from_terms(cyl, terms))
}

/// `Ψ⁻¹` of a Fourier-finite cylinder function.
pub fn psi_inv<T: Scalar>(cyl: &Arc<Cylinder<T>>, f: &CylinderFunction<T>, max_n: i64, tol: T) -> Result<CrossedProductElement<T>> {
    let g = f.clone();
    psi_inv_fn(cyl, move |x, p| g.eval(x, p), max_n, tol)
}

/// `f ⋆ g = Ψ(Ψ⁻¹(f)·Ψ⁻¹(g))`.
pub fn star<T: Scalar>(cyl: &Arc<Cylinder<T>>, f: &CylinderFunction<T>, g: &CylinderFunction<T>) -> Result<CylinderFunction<T>> {
    let tol = T::membership_tol();
    let x = psi_inv(cyl, f, f.fourier_degree(), tol)?;
    let y = psi_inv(cyl, g, g.fourier_degree(), tol)?;
    Ok(psi(&x.multiply(&y)?))
}

/// `β(x) = ∂α_ℏ(x)/∂ℏ` at ℏ = 0.
#[derive(Clone)]
pub struct PoissonCoefficient<T> {
    beta: Arc<dyn Fn(T) -> T + Send + Sync>,
    label: String,
}

impl<T: Scalar> std::fmt::Debug for PoissonCoefficient<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "β[{}]", self.label)
    }
}

impl<T: Scalar> PoissonCoefficient<T> {
    pub fn new<F: Fn(T) -> T + Send + Sync + 'static>(beta: F, label: impl Into<String>) -> Self {
        PoissonCoefficient { beta: Arc::new(beta), label: label.into() }
    }

    /// The family's closed-form β.
    pub fn of_family(family: &BijectionFamily<T>) -> Self {
        let fam = family.clone();
        Self::new(move |x| fam.beta(x), format!("beta({})", family.kind()))
    }

    /// β by centered differences in ℏ with the given step.
    pub fn finite_difference(family: &BijectionFamily<T>, step: T) -> Self {
        let fam = family.clone();
        Self::new(move |x| fam.beta_fd(x, step), format!("beta_fd({})", family.kind()))
    }

    pub fn eval(&self, x: T) -> T {
        (self.beta)(x)
    }
}

/// `{f, g} = β(∂ₓf ∂_φg − ∂_φf ∂ₓg)`.
pub fn poisson_bracket<T: Scalar>(f: &CylinderFunction<T>, g: &CylinderFunction<T>, beta: &PoissonCoefficient<T>) -> CylinderFunction<T> {
    f.dx().mul(&g.dphi()).sub(&f.dphi().mul(&g.dx())).mul_real(beta)
}

/// The first-order term of `f ⋆ g − fg`: `iℏβ ∂_φf ∂ₓg` without the ℏ.
pub fn first_order_term<T: Scalar>(f: &CylinderFunction<T>, g: &CylinderFunction<T>, beta: &PoissonCoefficient<T>) -> CylinderFunction<T> {
    f.dphi().mul(&g.dx()).mul_real(beta).scale(Complex::new(T::zero(), T::one()))
}

/// Sample points at distance ≥ `margin` from the boundary of `support`.
pub fn interior_grid<T: Scalar>(support: &Interval<T>, margin: T, n: usize) -> Vec<T> {
    let Some((lo, hi)) = support.sample_window() else {
        return Vec::new();
    };
    let (lo, hi) = (lo + margin, hi - margin);
    if lo > hi {
        return Vec::new();
    }
    uniform(lo, hi, n)
}

/// One row of a classical-limit sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub hbar: f64,
    /// `max |(f⋆g − fg)/ℏ − iβ∂_φf∂ₓg|` on the interior grid.
    pub residual: f64,
    /// `max |(f⋆g − g⋆f)/(−iℏ) − {f,g}| / max |{f,g}|`.
    pub commutator_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// Slope of `log R` against `log ℏ`; `None` when all residuals sit at
    /// the noise floor (the expansion is exact).
    pub order: Option<f64>,
    pub exact: bool,
}

impl LimitReport {
    /// Linear (or better) convergence, or an exact expansion.
    pub fn converges(&self) -> bool {
        self.exact || self.order.is_some_and(|p| p >= 0.9)
    }

    pub fn order_in(&self, lo: f64, hi: f64) -> bool {
        self.order.is_some_and(|p| (lo..=hi).contains(&p))
    }

    pub fn last(&self) -> Option<&LimitRow> {
        self.rows.last()
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() || ys.iter().any(|&y| !(y > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Measures `R(ℏ)` and the commutator limit for each ℏ (strictly
/// decreasing) on one grid kept `2ℏ·max(1, degree)` away from the boundary
/// of the common support, ℏ being the largest of the sweep.
pub fn classical_limit_check<T: Scalar>(
    family: &BijectionFamily<T>,
    f: &CylinderFunction<T>,
    g: &CylinderFunction<T>,
    hbars: &[T],
    beta: &PoissonCoefficient<T>,
) -> Result<LimitReport> {
    if hbars.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::Precondition("ℏ values must be strictly decreasing".into()));
    }
    for &h in hbars {
        family.check_hbar(h)?;
        if !(h > T::zero()) {
            return Err(Error::InadmissibleHbar { hbar: h.as_f64(), reason: "the limit needs ℏ > 0".into() });
        }
    }
    let degree = T::from_i64(f.fourier_degree().max(g.fourier_degree()).max(1)).unwrap();
    let common = f.support().intersect(&g.support()).intersect(&family.carrier());
    let first = first_order_term(f, g, beta);
    let bracket = poisson_bracket(f, g, beta);
    let phis = phi_grid::<T>(PHI_GRID);
    let fg = f.mul(g);
    // one grid for the whole sweep, so residuals are comparable across ℏ
    let widest = hbars.first().copied().unwrap_or_else(T::zero);
    let xs = interior_grid(&common, (widest + widest) * degree, DEFAULT_GRID);
    if xs.is_empty() && !hbars.is_empty() {
        return Err(Error::EmptyDomain(format!("no interior points of {common} at ℏ = {widest}")));
    }
    let mut rows = Vec::new();
    for &h in hbars {
        let cyl = Cylinder::from_family(family, h)?;
        let fs = star(&cyl, f, g)?;
        let gs = star(&cyl, g, f)?;
        let inv_h = Complex::new(T::one() / h, T::zero());
        let lhs = fs.sub(&fg).scale(inv_h);
        let residual = lhs.residual_on(&first, &xs, &phis);
        let comm = fs.sub(&gs).scale(Complex::new(T::zero(), T::one() / h));
        let scale = bracket.max_abs_on(&xs, &phis);
        let diff = comm.residual_on(&bracket, &xs, &phis);
        let commutator_error = if scale > T::zero() { diff / scale } else { diff };
        rows.push(LimitRow { hbar: h.as_f64(), residual: residual.as_f64(), commutator_error: commutator_error.as_f64() });
    }
    let exact = rows.iter().all(|r| r.residual <= NOISE_FLOOR);
    let order = if exact {
        None
    } else {
        let xs: Vec<f64> = rows.iter().map(|r| r.hbar).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.residual).collect();
        log_log_slope(&xs, &ys)
    };
    Ok(LimitReport { rows, order, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed_product::generator_u;
    use crate::FamilyKind;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0)
    }

    fn x_fn() -> SupportedFunction<f64> {
        SupportedFunction::polynomial(unit(), vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)])
    }

    #[test]
    fn psi_of_u() {
        let cyl = Cylinder::finite(0.0, 1.0, 0.25).unwrap();
        let f = psi(&generator_u(&cyl));
        assert_eq!(f.coefficients().keys().copied().collect::<Vec<_>>(), vec![1]);
        let z = f.eval(0.5, 0.3);
        assert!((z - Complex::new(0.0, 0.3).exp()).norm() < 1e-15);
        assert_eq!(f.eval(0.1, 0.3), Complex::new(0.0, 0.0));
    }

    #[test]
    fn quadrature_inverts_psi() {
        let cyl = Cylinder::finite(0.0, 1.0, 0.25).unwrap();
        let e = SupportedFunction::exp_ikx(unit(), 2.0);
        let x = CrossedProductElement::from_terms(&cyl, [(-1, e.clone()), (0, x_fn()), (2, e)]);
        let back = psi_inv(&cyl, &psi(&x), 2, 1e-12).unwrap();
        assert!(back.residual(&x) <= 1e-14);
        assert!(matches!(psi_inv(&cyl, &psi(&x), 1, 1e-12), Err(Error::Aliasing { n: 2, .. })));
    }

    #[test]
    fn uu_star_through_star() {
        let cyl = Cylinder::finite(0.0, 1.0, 0.25).unwrap();
        let f = CylinderFunction::new(unit(), [(1, cyl.partial_identity(1))]);
        let g = CylinderFunction::new(unit(), [(-1, cyl.partial_identity(-1))]);
        let p = star(&cyl, &f, &g).unwrap();
        assert!(p.approx_eq(&CylinderFunction::from_x(cyl.partial_identity(1)), 1e-14));
    }

    #[test]
    fn bracket_by_hand() {
        // shift: {x e^{iφ}, x} = −i x e^{iφ}
        let beta = PoissonCoefficient::new(|_| 1.0, "1");
        let f = CylinderFunction::new(unit(), [(1, x_fn())]);
        let g = CylinderFunction::from_x(x_fn());
        let b = poisson_bracket(&f, &g, &beta);
        let want = f.scale(Complex::new(0.0, -1.0));
        assert!(b.approx_eq(&want, 1e-10));
        assert!(poisson_bracket(&f, &f, &beta).approx_eq(&CylinderFunction::zero(unit()), 1e-12));
    }

    #[test]
    fn slope_fit() {
        let p = log_log_slope(&[0.1, 0.01, 0.001], &[0.2, 0.02, 0.002]).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert!(log_log_slope(&[0.1, 0.01], &[0.0, 0.0]).is_none());
    }

    #[test]
    fn shift_limit_with_linear_g_is_exact() {
        let fam = BijectionFamily::new(FamilyKind::Shift, unit()).unwrap();
        let f = CylinderFunction::fourier_mode(unit(), 1);
        let g = CylinderFunction::from_x(x_fn());
        let rep = classical_limit_check(&fam, &f, &g, &[0.1, 0.01, 0.001], &PoissonCoefficient::of_family(&fam)).unwrap();
        assert!(rep.exact && rep.converges(), "{rep:?}");
    }
}
