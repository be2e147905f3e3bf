//! The α-fuzzy cylinder `Cyl(I, α)`: finite sums `Σ fₙδₙ` with `fₙ` supported
//! in `Iₙ = ran αⁿ`, twisted multiplication and involution.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_algebra::{SupportedFunction, DEFAULT_GRID};
use crate::interval::Interval;
use crate::partial_bijection::{restricted_shift_action, BijectionFamily, FamilyKind, PartialBijection};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

/// Upper bound on the search for the first empty ideal.
pub const NILPOTENCY_SEARCH_CAP: i64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CylinderKind {
    /// Shift on `[a, b]`.
    Finite,
    /// Shift on `[a, ∞)`.
    HalfFinite,
    /// Unrestricted shift on ℝ.
    Infinite,
    /// Any other partial bijection.
    General,
}

impl fmt::Display for CylinderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CylinderKind::Finite => "finite",
            CylinderKind::HalfFinite => "half_finite",
            CylinderKind::Infinite => "infinite",
            CylinderKind::General => "general",
        })
    }
}

/// The algebra handle: carrier, generator and a cache of its powers.
pub struct Cylinder<T> {
    alpha: PartialBijection<T>,
    kind: CylinderKind,
    hbar: Option<T>,
    powers: RwLock<BTreeMap<i64, PartialBijection<T>>>,
}

impl<T: Scalar> fmt::Debug for Cylinder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyl({}, {}, {:?})", self.alpha.carrier(), self.alpha.label(), self.kind)
    }
}

impl<T: Scalar> Cylinder<T> {
    /// Shift cylinders on `[a,b]`, `[a,∞)` or ℝ with step ℏ.
    pub fn shift(kind: CylinderKind, interval: Interval<T>, hbar: T) -> Result<Arc<Self>> {
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(Error::InadmissibleHbar { hbar: hbar.as_f64(), reason: "shift cylinders need ℏ > 0".into() });
        }
        let fits = !interval.is_empty()
            && match kind {
                CylinderKind::Finite => interval.is_bounded(),
                CylinderKind::HalfFinite => interval.lo().is_finite() && interval.hi() == T::infinity(),
                CylinderKind::Infinite => interval.lo() == T::neg_infinity() && interval.hi() == T::infinity(),
                CylinderKind::General => false,
            };
        if !fits {
            return Err(Error::Precondition(format!("{interval} is not a carrier for a {kind} cylinder")));
        }
        let alpha = restricted_shift_action(interval, hbar, 1).with_label(format!("S({hbar})"));
        Ok(Arc::new(Cylinder { alpha, kind, hbar: Some(hbar), powers: RwLock::new(BTreeMap::new()) }))
    }

    pub fn finite(a: T, b: T, hbar: T) -> Result<Arc<Self>> {
        Self::shift(CylinderKind::Finite, Interval::closed(a, b), hbar)
    }

    pub fn half_finite(a: T, hbar: T) -> Result<Arc<Self>> {
        Self::shift(CylinderKind::HalfFinite, Interval::at_least(a), hbar)
    }

    pub fn infinite(hbar: T) -> Result<Arc<Self>> {
        Self::shift(CylinderKind::Infinite, Interval::real_line(), hbar)
    }

    /// The cylinder of an arbitrary partial bijection of its carrier.
    pub fn general(alpha: PartialBijection<T>) -> Arc<Self> {
        Arc::new(Cylinder { alpha, kind: CylinderKind::General, hbar: None, powers: RwLock::new(BTreeMap::new()) })
    }

    /// The member of a family at ℏ; shift families become shift cylinders.
    pub fn from_family(family: &BijectionFamily<T>, hbar: T) -> Result<Arc<Self>> {
        let carrier = family.carrier();
        if family.kind() == FamilyKind::Shift && hbar > T::zero() {
            let kind = if carrier.is_bounded() {
                CylinderKind::Finite
            } else if carrier.lo().is_finite() && carrier.hi() == T::infinity() {
                CylinderKind::HalfFinite
            } else if carrier.lo() == T::neg_infinity() && carrier.hi() == T::infinity() {
                CylinderKind::Infinite
            } else {
                CylinderKind::General
            };
            if kind != CylinderKind::General {
                return Self::shift(kind, carrier, hbar);
            }
        }
        let alpha = family.at(hbar)?;
        Ok(Arc::new(Cylinder { alpha, kind: CylinderKind::General, hbar: Some(hbar), powers: RwLock::new(BTreeMap::new()) }))
    }

    /// `Cyl(α⁻¹)`, which has the same elements with indices flipped.
    pub fn inverse(&self) -> Arc<Self> {
        Arc::new(Cylinder {
            alpha: self.alpha.inverse(),
            kind: CylinderKind::General,
            hbar: self.hbar,
            powers: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn alpha(&self) -> &PartialBijection<T> {
        &self.alpha
    }

    pub fn carrier(&self) -> Interval<T> {
        self.alpha.carrier()
    }

    pub fn kind(&self) -> CylinderKind {
        self.kind
    }

    pub fn hbar(&self) -> Option<T> {
        self.hbar
    }

    /// `αⁿ`, exact translations for shift kinds, iterated composition otherwise.
    pub fn power(&self, n: i64) -> PartialBijection<T> {
        if let Some(p) = self.powers.read().unwrap().get(&n) {
            return p.clone();
        }
        let p = match (self.kind, self.hbar) {
            (CylinderKind::General, _) | (_, None) => self.alpha.power(n),
            (_, Some(h)) => restricted_shift_action(self.carrier(), h, n),
        };
        self.powers.write().unwrap().insert(n, p.clone());
        p
    }

    /// `Iₙ`.
    pub fn ideal(&self, n: i64) -> Interval<T> {
        self.power(n).range()
    }

    /// `I₁ ∩ I₋₁`.
    pub fn i_cap(&self) -> Interval<T> {
        self.ideal(1).intersect(&self.ideal(-1))
    }

    /// For finite shift cylinders, the smallest natural `N` with `Nℏ > b − a`.
    pub fn order_n(&self) -> Option<i64> {
        match (self.kind, self.hbar) {
            (CylinderKind::Finite, Some(h)) => {
                let ratio = self.carrier().length() / h;
                Some(ratio.floor().to_i64()? + 1)
            }
            _ => None,
        }
    }

    /// Smallest `n ≥ 1` with `Iₙ = ∅`; `None` if the ideals stabilize or the
    /// search cap is reached first.
    pub fn first_empty_index(&self) -> Option<i64> {
        if matches!(self.kind, CylinderKind::Infinite | CylinderKind::HalfFinite) {
            return None;
        }
        // Iₙ₊₁ = α(Iₙ ∩ dom α)
        let mut range = self.carrier();
        for n in 1..=NILPOTENCY_SEARCH_CAP {
            let next = self.alpha.image(&range);
            if next.is_empty() {
                return Some(n);
            }
            if next.approx_eq(&range, T::zero()) {
                return None;
            }
            range = next;
        }
        None
    }

    pub fn grid(&self, n: usize) -> Vec<T> {
        self.carrier().grid(n)
    }

    /// The partial identity `pₙ` as a function.
    pub fn partial_identity(&self, n: i64) -> SupportedFunction<T> {
        SupportedFunction::partial_identity(self.ideal(n), self.carrier())
    }

    /// The product rule on a single pair of terms:
    /// `fₙδₙ · gₘδₘ = fₙ·(gₘ|_{I₋ₙ} ∘ α⁻ⁿ) δₙ₊ₘ`; returns the
    /// coefficient of `δₙ₊ₘ`.
    pub fn term_product(&self, n: i64, f: &SupportedFunction<T>, g: &SupportedFunction<T>) -> Result<SupportedFunction<T>> {
        let a = self.power(n);
        let moved = g.restrict(&a.domain()).pullback(&a)?;
        Ok(f.multiply(&moved))
    }
}

/// An element `Σ fₙδₙ` of a cylinder algebra; the zero element has no terms.
#[derive(Clone)]
pub struct CrossedProductElement<T> {
    cyl: Arc<Cylinder<T>>,
    terms: BTreeMap<i64, SupportedFunction<T>>,
}

impl<T: Scalar> fmt::Debug for CrossedProductElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, t) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "[{}]δ{n}", t.label())?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<T: Scalar> CrossedProductElement<T> {
    pub fn zero(cyl: &Arc<Cylinder<T>>) -> Self {
        CrossedProductElement { cyl: cyl.clone(), terms: BTreeMap::new() }
    }

    /// `f·pₙ δₙ`: the function is clipped to `Iₙ`.
    pub fn monomial(cyl: &Arc<Cylinder<T>>, n: i64, f: SupportedFunction<T>) -> Self {
        Self::from_terms(cyl, [(n, f)])
    }

    /// `fδₙ`, rejecting `f` whose support leaves `Iₙ`.
    pub fn monomial_strict(cyl: &Arc<Cylinder<T>>, n: i64, f: SupportedFunction<T>) -> Result<Self> {
        Self::from_terms_strict(cyl, [(n, f)])
    }

    /// `fδ₀`.
    pub fn function(cyl: &Arc<Cylinder<T>>, f: SupportedFunction<T>) -> Self {
        Self::monomial(cyl, 0, f)
    }

    /// `pₙδ₀`.
    pub fn projector(cyl: &Arc<Cylinder<T>>, n: i64) -> Self {
        Self::function(cyl, cyl.partial_identity(n))
    }

    /// Clipping constructor; repeated keys are summed.
    pub fn from_terms<I>(cyl: &Arc<Cylinder<T>>, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, SupportedFunction<T>)>,
    {
        let mut out = Self::zero(cyl);
        for (n, f) in terms {
            let f = f.restrict(&cyl.ideal(n));
            out.accumulate(n, f);
        }
        out
    }

    /// Strict constructor: every support must lie in its ideal.
    pub fn from_terms_strict<I>(cyl: &Arc<Cylinder<T>>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, SupportedFunction<T>)>,
    {
        let mut out = Self::zero(cyl);
        for (n, f) in terms {
            let ideal = cyl.ideal(n);
            if !f.in_ideal(&ideal) {
                return Err(Error::IdealViolation {
                    support: f.support().to_string(),
                    ideal: ideal.to_string(),
                    context: format!(", term δ{n}"),
                });
            }
            out.accumulate(n, f);
        }
        Ok(out)
    }

    fn accumulate(&mut self, n: i64, f: SupportedFunction<T>) {
        if f.support().is_empty() {
            return;
        }
        let merged = match self.terms.remove(&n) {
            Some(g) => g.add(&f),
            None => f,
        };
        self.terms.insert(n, merged);
    }

    pub fn cylinder(&self) -> &Arc<Cylinder<T>> {
        &self.cyl
    }

    pub fn terms(&self) -> &BTreeMap<i64, SupportedFunction<T>> {
        &self.terms
    }

    pub fn term(&self, n: i64) -> Option<&SupportedFunction<T>> {
        self.terms.get(&n)
    }

    pub fn keys(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    /// No stored terms. Grid-zero terms are not detected; see `is_zero`.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `fₙ(x)`, zero for absent keys.
    pub fn coefficient(&self, n: i64, x: T) -> Complex<T> {
        self.terms.get(&n).map_or_else(|| Complex::new(T::zero(), T::zero()), |f| f.eval(x))
    }

    fn same_cylinder(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.cyl, &other.cyl) {
            Ok(())
        } else {
            Err(Error::MismatchedGenerators)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_cylinder(other)?;
        let mut out = self.clone();
        for (&n, f) in &other.terms {
            out.accumulate(n, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        CrossedProductElement {
            cyl: self.cyl.clone(),
            terms: self.terms.iter().map(|(&n, f)| (n, f.scale(c))).collect(),
        }
    }

    /// Bilinear extension of the term product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_cylinder(other)?;
        let mut out = Self::zero(&self.cyl);
        for (&n, f) in &self.terms {
            for (&m, g) in &other.terms {
                let t = self.cyl.term_product(n, f, g)?;
                out.accumulate(n + m, t);
            }
        }
        Ok(out)
    }

    /// `(fₙδₙ)* = (conj fₙ ∘ αⁿ) δ₋ₙ`.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(&self.cyl);
        for (&n, f) in &self.terms {
            let back = self.cyl.power(-n);
            out.accumulate(-n, f.conj().transport(&back));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::function(&self.cyl, SupportedFunction::constant(self.cyl.carrier(), Complex::new(T::one(), T::zero())));
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// `xy − yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// `max |fₙ(x) − gₙ(x)|` over all keys and the given points.
    pub fn residual_on(&self, other: &Self, points: &[T]) -> T {
        let zero = SupportedFunction::zero(self.cyl.carrier());
        let mut keys: Vec<i64> = self.keys().chain(other.keys()).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|n| {
                let a = self.terms.get(&n).unwrap_or(&zero);
                let b = other.terms.get(&n).unwrap_or(&zero);
                a.max_residual_on(b, points)
            })
            .fold(T::zero(), T::max)
    }

    /// Residual on the default grid of the carrier.
    pub fn residual(&self, other: &Self) -> T {
        self.residual_on(other, &self.cyl.grid(DEFAULT_GRID))
    }

    pub fn max_abs_on(&self, points: &[T]) -> T {
        self.terms.values().map(|f| f.max_abs_on(points)).fold(T::zero(), T::max)
    }

    /// Zero on the default grid.
    pub fn is_zero(&self) -> bool {
        self.max_abs_on(&self.cyl.grid(DEFAULT_GRID)) == T::zero()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.residual(other) <= tol
    }

    /// Keys whose function leaves its ideal beyond membership tolerance.
    pub fn support_violations(&self) -> Vec<i64> {
        self.terms
            .iter()
            .filter(|(&n, f)| !f.in_ideal(&self.cyl.ideal(n)))
            .map(|(&n, _)| n)
            .collect()
    }

    /// The same element presented in `Cyl(α⁻¹)`: `fδₙ ↦ fδ₋ₙ`.
    pub fn reindexed(&self, inverse_cyl: &Arc<Cylinder<T>>) -> Self {
        CrossedProductElement {
            cyl: inverse_cyl.clone(),
            terms: self.terms.iter().map(|(&n, f)| (-n, f.clone())).collect(),
        }
    }
}

/// `U = p₁δ₁`.
pub fn generator_u<T: Scalar>(cyl: &Arc<Cylinder<T>>) -> CrossedProductElement<T> {
    CrossedProductElement::monomial(cyl, 1, cyl.partial_identity(1))
}

/// Whether `x ∈ Cyl(α)` and `y ∈ Cyl(α⁻¹)` are the same element, i.e. the
/// coefficients agree after `n ↦ −n`.
pub fn equal_as_cyl<T: Scalar>(x: &CrossedProductElement<T>, y: &CrossedProductElement<T>, tol: T) -> bool {
    let points = x.cylinder().grid(DEFAULT_GRID);
    let mut keys: Vec<i64> = x.keys().chain(y.keys().map(|n| -n)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().all(|n| {
        points
            .iter()
            .all(|&p| (x.coefficient(n, p) - y.coefficient(-n, p)).norm() <= tol)
    })
}

/// The presentation of `Cyl(α)` by `U`, `U*` and `F(I)`:
/// `UU* = p₁`, `U*U = p₋₁`, `Uf = ((p₋₁f)∘α⁻¹)U`, `U*f = ((p₁f)∘α)U*`,
/// `UU*U = U`, `U*UU* = U*`, and, when some `Iₖ` is empty, `Uᵏ = 0 ≠ Uᵏ⁻¹`.
pub fn u_relations_check<T: Scalar>(
    cyl: &Arc<Cylinder<T>>,
    samples: &[SupportedFunction<T>],
    tol: T,
) -> Result<Report> {
    let e = |x: &CrossedProductElement<T>, y: &CrossedProductElement<T>| x.residual(y).as_f64();
    let tol = tol.as_f64();
    let u = generator_u(cyl);
    let us = u.involution();
    let alpha = cyl.power(1);
    let mut report = Report::new();

    report.push(Check::residual("U U* = p1", e(&u.multiply(&us)?, &CrossedProductElement::projector(cyl, 1)), tol));
    report.push(Check::residual("U* U = p-1", e(&us.multiply(&u)?, &CrossedProductElement::projector(cyl, -1)), tol));
    report.push(Check::residual("U U* U = U", e(&u.multiply(&us)?.multiply(&u)?, &u), tol));
    report.push(Check::residual("U* U U* = U*", e(&us.multiply(&u)?.multiply(&us)?, &us), tol));
    report.push(Check::residual("U* = p-1 δ-1", e(&us, &CrossedProductElement::monomial(cyl, -1, cyl.partial_identity(-1))), tol));

    let (mut left, mut right) = (T::zero().as_f64(), T::zero().as_f64());
    for f in samples {
        let fd = CrossedProductElement::function(cyl, f.clone());
        let moved = f.multiply(&cyl.partial_identity(-1)).pullback(&alpha)?;
        let lhs = u.multiply(&fd)?;
        let rhs = CrossedProductElement::function(cyl, moved).multiply(&u)?;
        left = left.max(e(&lhs, &rhs));
        let moved = f.multiply(&cyl.partial_identity(1)).pullback(&alpha.inverse())?;
        let lhs = us.multiply(&fd)?;
        let rhs = CrossedProductElement::function(cyl, moved).multiply(&us)?;
        right = right.max(e(&lhs, &rhs));
    }
    report.push(Check::residual("U f = ((p-1 f)∘α⁻¹) U", left, tol));
    report.push(Check::residual("U* f = ((p1 f)∘α) U*", right, tol));

    if let Some(k) = cyl.first_empty_index() {
        let uk = u.pow(k as u32)?;
        let before = u.pow(k as u32 - 1)?;
        report.push(Check::flag(format!("U^{k} = 0"), uk.is_empty() && uk.is_zero()));
        report.push(Check::flag(format!("U^{} != 0", k - 1), !before.is_zero()).with_detail(format!(
            "nilpotency index {k} = first empty ideal index"
        )));
    }
    Ok(report)
}

/// On a set `S` of fixed points of α, elements supported in `S` form a
/// commuting subalgebra. Checks the precondition, closure and commutativity.
pub fn fixed_point_subalgebra_check<T: Scalar>(
    cyl: &Arc<Cylinder<T>>,
    fixed: Interval<T>,
    elems: &[CrossedProductElement<T>],
    tol: T,
) -> Result<Report> {
    let mut report = Report::new();
    if fixed.is_empty() {
        report.push(Check::flag("fixed-point precondition", true).with_detail("S is empty; vacuous"));
        return Ok(report);
    }
    let alpha = cyl.alpha();
    let pts = fixed.grid(DEFAULT_GRID);
    let moved = pts
        .iter()
        .map(|&x| match alpha.apply(x) {
            Some(y) => (y - x).abs().as_f64(),
            None => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    let pre = Check::residual("fixed-point precondition", moved, tol.as_f64());
    if !pre.pass {
        report.push(pre.with_detail(format!("{} moves points of {fixed}", alpha.label())));
        return Ok(report);
    }
    report.push(pre);
    let outside = elems.iter().flat_map(|x| x.terms().values()).any(|f| !f.support().is_subset(&fixed, T::membership_tol()));
    if outside {
        report.push(Check::flag("elements supported in S", false));
        return Ok(report);
    }
    let mut closed = true;
    let mut worst = (0.0f64, None);
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate().skip(i + 1) {
            let xy = x.multiply(y)?;
            closed &= xy.terms().values().all(|f| f.support().is_subset(&fixed, T::membership_tol()));
            let r = xy.residual(&y.multiply(x)?).as_f64();
            if r > worst.0 || (worst.1.is_none() && r > tol.as_f64()) {
                worst = (r, Some((i, j)));
            }
        }
    }
    report.push(Check::flag("closure in S", closed));
    let mut c = Check::residual("commutativity", worst.0, tol.as_f64());
    if let (false, Some((i, j))) = (c.pass, worst.1) {
        c = c.with_detail(format!("elements {i} and {j} do not commute"));
    }
    report.push(c);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn quarter() -> Arc<Cylinder<f64>> {
        Cylinder::finite(0.0, 1.0, 0.25).unwrap()
    }

    #[test]
    fn ideals_of_shift_cylinders() {
        let cyl = quarter();
        assert_eq!(cyl.order_n(), Some(5));
        assert_eq!(cyl.ideal(4), Interval::point(1.0));
        assert!(cyl.ideal(5).is_empty() && cyl.ideal(-5).is_empty());
        assert_eq!(cyl.first_empty_index(), Some(5));
        assert_eq!(cyl.i_cap(), Interval::closed(0.25, 0.75));
        let half = Cylinder::half_finite(0.0, 0.1).unwrap();
        assert!(half.ideal(3).approx_eq(&Interval::at_least(0.3), 1e-15));
        assert_eq!(half.ideal(-3), Interval::at_least(0.0));
        assert_eq!(half.first_empty_index(), None);
        let inf = Cylinder::infinite(0.1).unwrap();
        assert_eq!(inf.ideal(7), Interval::real_line());
        assert!(Cylinder::finite(0.0, 1.0, 0.0).is_err());
        assert!(Cylinder::shift(CylinderKind::HalfFinite, Interval::closed(0.0, 1.0), 0.1).is_err());
    }

    #[test]
    fn u_and_its_adjoint() {
        let cyl = quarter();
        let u = generator_u(&cyl);
        let us = u.involution();
        assert_eq!(us.keys().collect::<Vec<_>>(), vec![-1]);
        assert_eq!(us.term(-1).unwrap().support(), Interval::closed(0.0, 0.75));
        let uus = u.multiply(&us).unwrap();
        assert_eq!(uus.residual(&CrossedProductElement::projector(&cyl, 1)), 0.0);
        let samples = vec![SupportedFunction::polynomial(cyl.carrier(), vec![c(1.0), c(-2.0), Complex::new(0.0, 1.0)])];
        let rep = u_relations_check(&cyl, &samples, 1e-12).unwrap();
        assert!(rep.all_pass(), "{rep}");
        assert!(rep.get("U^5 = 0").is_some());
    }

    #[test]
    fn shift_moves_functions_right() {
        // U f(x) = (p-1 f)(x − ℏ) U
        let cyl = quarter();
        let f = SupportedFunction::polynomial(cyl.carrier(), vec![c(0.0), c(1.0)]);
        let uf = generator_u(&cyl).multiply(&CrossedProductElement::function(&cyl, f)).unwrap();
        let t = uf.term(1).unwrap();
        assert!((t.eval(0.5).re - 0.25).abs() < 1e-15);
        assert_eq!(t.eval(0.1).re, 0.0);
    }

    #[test]
    fn infinite_u_is_unitary() {
        let cyl = Cylinder::infinite(0.3).unwrap();
        let u = generator_u(&cyl);
        let one = CrossedProductElement::function(&cyl, SupportedFunction::constant(cyl.carrier(), c(1.0)));
        assert_eq!(u.multiply(&u.involution()).unwrap().residual(&one), 0.0);
        assert_eq!(u.involution().multiply(&u).unwrap().residual(&one), 0.0);
    }

    #[test]
    fn strict_construction() {
        let cyl = quarter();
        let f = SupportedFunction::constant(cyl.carrier(), c(1.0));
        assert!(CrossedProductElement::monomial_strict(&cyl, 1, f.clone()).is_err());
        assert!(CrossedProductElement::monomial_strict(&cyl, 0, f.clone()).is_ok());
        let clipped = CrossedProductElement::monomial(&cyl, 2, f);
        assert_eq!(clipped.term(2).unwrap().support(), Interval::closed(0.5, 1.0));
        assert!(CrossedProductElement::monomial(&cyl, 6, cyl.partial_identity(0)).is_empty());
    }

    #[test]
    fn mismatched_cylinders() {
        let (a, b) = (quarter(), quarter());
        let x = generator_u(&a);
        assert_eq!(x.multiply(&generator_u(&b)).unwrap_err(), Error::MismatchedGenerators);
    }

    #[test]
    fn inverse_presentation() {
        let cyl = quarter();
        let inv = cyl.inverse();
        let u = generator_u(&cyl);
        let us_inv = generator_u(&inv).involution();
        assert!(equal_as_cyl(&u, &us_inv, 0.0));
        let f = SupportedFunction::exp_ikx(cyl.carrier(), 2.0);
        let x = CrossedProductElement::from_terms(&cyl, [(0, f.clone()), (2, f)]);
        assert!(equal_as_cyl(&x, &x.reindexed(&inv), 0.0));
        let y = u.multiply(&x).unwrap();
        let y_inv = u.reindexed(&inv).multiply(&x.reindexed(&inv)).unwrap();
        assert!(equal_as_cyl(&y, &y_inv, 1e-15));
        assert!(!equal_as_cyl(&u, &u.reindexed(&inv).involution(), 0.0));
    }

    #[test]
    fn double_involution() {
        let cyl = quarter();
        let f = SupportedFunction::exp_ikx(cyl.carrier(), 1.5);
        let x = CrossedProductElement::monomial(&cyl, 2, f);
        assert!(x.involution().involution().approx_eq(&x, 1e-15));
    }
}
