//! Two-generator subalgebras `A = √φ_ρ U` of a cylinder: the commutator
//! profile `C`, the bijection it determines through
//! `α(u) + (ℏ/2)C(α(u)) = u − (ℏ/2)C(u)`, the piecewise relations of
//! `[A, A*]` and `½(AA* + A*A)`, and boundary continuity.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::crossed_product::{CrossedProductElement, Cylinder};
use crate::error::{Error, Result};
use crate::function_algebra::{SupportedFunction, DEFAULT_GRID};
use crate::interval::Interval;
use crate::partial_bijection::{poincare, BijectionFamily, Expr, FamilyKind, PartialBijection, RealMap, POINCARE_HBAR_MAX};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

/// Bisection stops once the bracket is this narrow (relative).
pub const BISECTION_TOL: f64 = 1e-14;

/// Levels `k` of the approach sequence `u₁ ± 2⁻ᵏ·width`.
pub const APPROACH_LEVELS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    PlanePlus,
    PlaneMinus,
    Poincare,
    Custom,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileKind::PlanePlus => "plane_plus",
            ProfileKind::PlaneMinus => "plane_minus",
            ProfileKind::Poincare => "poincare",
            ProfileKind::Custom => "custom",
        })
    }
}

impl FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane_plus" => Ok(ProfileKind::PlanePlus),
            "plane_minus" => Ok(ProfileKind::PlaneMinus),
            "poincare" => Ok(ProfileKind::Poincare),
            "custom" => Ok(ProfileKind::Custom),
            _ => Err(Error::Precondition(format!("unknown commutator profile {s:?}"))),
        }
    }
}

/// The commutator function `C` in `[A, A*] = ℏC(R²)`.
#[derive(Clone)]
pub struct CommutatorProfile<T> {
    kind: ProfileKind,
    c: RealMap<T>,
    expr: Option<Expr>,
}

impl<T: Scalar> fmt::Debug for CommutatorProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.expr {
            Some(e) => write!(f, "C[{}: {e}]", self.kind),
            None => write!(f, "C[{}]", self.kind),
        }
    }
}

impl<T: Scalar> CommutatorProfile<T> {
    /// `C ≡ +1`.
    pub fn plane_plus() -> Self {
        CommutatorProfile { kind: ProfileKind::PlanePlus, c: Arc::new(|_| T::one()), expr: None }
    }

    /// `C ≡ −1`.
    pub fn plane_minus() -> Self {
        CommutatorProfile { kind: ProfileKind::PlaneMinus, c: Arc::new(|_| -T::one()), expr: None }
    }

    /// `C(u) = (1 − u)²/2`.
    pub fn poincare() -> Self {
        CommutatorProfile {
            kind: ProfileKind::Poincare,
            c: Arc::new(|u: T| (T::one() - u).powi(2) / T::lit(2.0)),
            expr: None,
        }
    }

    /// `C` given by an expression in `u` (`h` is ignored).
    pub fn custom(expr: Expr) -> Self {
        let e = expr.clone();
        CommutatorProfile { kind: ProfileKind::Custom, c: Arc::new(move |u| e.eval(u, T::zero())), expr: Some(expr) }
    }

    pub fn custom_fn<F: Fn(T) -> T + Send + Sync + 'static>(c: F) -> Self {
        CommutatorProfile { kind: ProfileKind::Custom, c: Arc::new(c), expr: None }
    }

    pub fn of_kind(kind: ProfileKind) -> Result<Self> {
        match kind {
            ProfileKind::PlanePlus => Ok(Self::plane_plus()),
            ProfileKind::PlaneMinus => Ok(Self::plane_minus()),
            ProfileKind::Poincare => Ok(Self::poincare()),
            ProfileKind::Custom => Err(Error::Precondition("custom profiles need an expression".into())),
        }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn expr(&self) -> Option<&Expr> {
        self.expr.as_ref()
    }

    pub fn eval(&self, u: T) -> T {
        (self.c)(u)
    }

    /// `x + (ℏ/2)C(x) − u + (ℏ/2)C(u)`: zero iff `x = α_ℏ(u)`.
    pub fn defect(&self, u: T, x: T, h: T) -> T {
        let half = h / T::lit(2.0);
        x + half * self.eval(x) - u + half * self.eval(u)
    }

    /// `α_ℏ(u)` pointwise, without domain bookkeeping; any sign of ℏ.
    pub fn alpha_at(&self, u: T, h: T) -> T {
        match self.kind {
            ProfileKind::PlanePlus => u - h,
            ProfileKind::PlaneMinus => u + h,
            ProfileKind::Poincare => poincare::forward(u, h),
            ProfileKind::Custom => {
                let half = h / T::lit(2.0);
                let target = u - half * self.eval(u);
                let c = self.c.clone();
                bisect(move |x| x + half * c(x) - target, u, h.abs() * (T::one() + self.eval(u).abs()))
            }
        }
    }

    /// `α_ℏ⁻¹(x)` pointwise.
    pub fn alpha_inverse_at(&self, x: T, h: T) -> T {
        match self.kind {
            ProfileKind::PlanePlus => x + h,
            ProfileKind::PlaneMinus => x - h,
            ProfileKind::Poincare => poincare::inverse(x, h),
            ProfileKind::Custom => {
                let half = h / T::lit(2.0);
                let target = x + half * self.eval(x);
                let c = self.c.clone();
                bisect(move |u| u - half * c(u) - target, x, h.abs() * (T::one() + self.eval(x).abs()))
            }
        }
    }
}

/// Root of an increasing `g` near `guess`; NaN when no sign change is found.
fn bisect<T: Scalar>(g: impl Fn(T) -> T, guess: T, scale: T) -> T {
    let mut w = scale.max(T::lit(1e-12));
    let (mut lo, mut hi) = (guess - w, guess + w);
    let mut tries = 0;
    while !(g(lo) <= T::zero() && g(hi) >= T::zero()) {
        tries += 1;
        if tries > 60 || !w.is_finite() {
            return T::nan();
        }
        w = w + w;
        lo = guess - w;
        hi = guess + w;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if g(mid) <= T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::lit(BISECTION_TOL) * (T::one() + mid.abs()) {
            break;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Solves `α + (ℏ/2)C(α) = u − (ℏ/2)C(u)` on `interval`: closed forms for the
/// built-in profiles, bisection (verified on a grid) for custom ones.
pub fn solve_alpha_from_c<T: Scalar>(profile: &CommutatorProfile<T>, interval: Interval<T>, hbar: T) -> Result<PartialBijection<T>> {
    if !(hbar > T::zero()) || !hbar.is_finite() {
        return Err(Error::InadmissibleHbar { hbar: hbar.as_f64(), reason: "need ℏ > 0".into() });
    }
    let alpha = match profile.kind {
        ProfileKind::PlanePlus => BijectionFamily::new(FamilyKind::PlanePlus, interval)?.at(hbar)?,
        ProfileKind::PlaneMinus => BijectionFamily::new(FamilyKind::PlaneMinus, interval)?.at(hbar)?,
        ProfileKind::Poincare => BijectionFamily::new(FamilyKind::Poincare, interval)?.at(hbar)?,
        ProfileKind::Custom => {
            let (p, q) = (profile.clone(), profile.clone());
            let a = PartialBijection::from_maps(
                interval,
                Interval::real_line(),
                Arc::new(move |u| p.alpha_at(u, hbar)),
                Arc::new(move |x| q.alpha_inverse_at(x, hbar)),
                format!("alpha[{profile:?}]({hbar})"),
            )?;
            for u in a.domain().grid(DEFAULT_GRID) {
                let x = a.eval(u);
                if !x.is_finite() {
                    return Err(Error::Bracketing { at: u.as_f64() });
                }
            }
            a
        }
    };
    if alpha.is_empty() {
        return Err(Error::EmptyDomain(format!("α from {profile:?} on {interval} at ℏ = {hbar}")));
    }
    Ok(alpha)
}

/// `max |defect|` of the defining equation over an `n`-point grid of `dom α`.
pub fn defining_equation_residual<T: Scalar>(profile: &CommutatorProfile<T>, alpha: &PartialBijection<T>, hbar: T, n: usize) -> T {
    alpha
        .domain()
        .grid(n)
        .into_iter()
        .map(|u| profile.defect(u, alpha.eval(u), hbar).abs())
        .fold(T::zero(), T::max)
}

/// `ρ: J → I` and `φ_ρ = ρ + (ℏ/2)C(ρ)` on `J`.
#[derive(Clone, Debug)]
pub struct Reparametrization<T: Scalar> {
    pub rho: PartialBijection<T>,
    pub phi: SupportedFunction<T>,
}

impl<T: Scalar> Reparametrization<T> {
    pub fn new(rho: PartialBijection<T>, profile: &CommutatorProfile<T>, hbar: T) -> Self {
        let (r, p) = (rho.forward_map(), profile.clone());
        let half = hbar / T::lit(2.0);
        let phi = SupportedFunction::real(rho.domain(), move |t| r(t) + half * p.eval(r(t)), "phi_rho");
        Reparametrization { rho, phi }
    }

    pub fn identity(interval: Interval<T>, profile: &CommutatorProfile<T>, hbar: T) -> Self {
        Self::new(PartialBijection::identity(interval).with_label("rho=id"), profile, hbar)
    }
}

/// Everything needed to build `A = √φ_ρ U` in `Cyl(J, ρ⁻¹∘α∘ρ)`.
#[derive(Clone, Debug)]
pub struct TwoGenSetup<T: Scalar> {
    pub profile: CommutatorProfile<T>,
    pub hbar: T,
    /// `α` on `I`.
    pub alpha: PartialBijection<T>,
    pub rep: Reparametrization<T>,
    /// `Cyl(J, α_ρ)`.
    pub cyl: Arc<Cylinder<T>>,
}

impl<T: Scalar> TwoGenSetup<T> {
    /// General setup; `rho` maps `J` onto `interval` (identity if `None`).
    pub fn new(profile: CommutatorProfile<T>, interval: Interval<T>, hbar: T, rho: Option<PartialBijection<T>>) -> Result<Self> {
        let alpha = solve_alpha_from_c(&profile, interval, hbar)?;
        let rho = rho.unwrap_or_else(|| PartialBijection::identity(interval).with_label("rho=id"));
        if !rho.range().approx_eq(&interval, T::membership_tol()) || !rho.domain().approx_eq(&rho.carrier(), T::zero()) {
            return Err(Error::Precondition(format!("ρ must map its whole carrier onto {interval}")));
        }
        let alpha_rho = alpha.conjugate_by(&rho.inverse());
        let cyl = Cylinder::general(alpha_rho);
        let rep = Reparametrization::new(rho, &profile, hbar);
        Ok(TwoGenSetup { profile, hbar, alpha, rep, cyl })
    }

    /// `C = ±1` on `I = [a, ∞)` with `ρ = id`.
    pub fn plane(kind: ProfileKind, a: T, hbar: T) -> Result<Self> {
        if !matches!(kind, ProfileKind::PlanePlus | ProfileKind::PlaneMinus) {
            return Err(Error::Precondition(format!("{kind} is not a plane profile")));
        }
        Self::new(CommutatorProfile::of_kind(kind)?, Interval::at_least(a), hbar, None)
    }

    /// `C(u) = (1−u)²/2` on `I = [ρ₀, 1]` with `ρ = id`.
    pub fn poincare(hbar: T) -> Result<Self> {
        check_poincare_hbar(hbar)?;
        Self::new(CommutatorProfile::poincare(), Interval::closed(poincare::rho0(hbar), T::one()), hbar, None)
    }

    pub fn j(&self) -> Interval<T> {
        self.cyl.carrier()
    }

    /// `J₁ \ J₋₁`, `J₁ ∩ J₋₁`, `J₋₁ \ J₁`.
    pub fn regions(&self) -> [Vec<Interval<T>>; 3] {
        let (j1, jm1) = (self.cyl.ideal(1), self.cyl.ideal(-1));
        [j1.difference(&jm1), vec![j1.intersect(&jm1)], jm1.difference(&j1)]
    }

    /// `ρ(t)` and `C(ρ(t))`.
    fn rho_c(&self, t: T) -> (T, T) {
        let r = self.rep.rho.eval(t);
        (r, self.profile.eval(r))
    }

    /// The closed forms of `[A, A*]` and `½(AA* + A*A)` at `t` in region `k`.
    pub fn closed_form(&self, region: usize, t: T) -> (T, T) {
        let (r, c) = self.rho_c(t);
        let h = self.hbar;
        let half = T::lit(0.5);
        match region {
            0 => {
                let phi = r + half * h * c;
                (phi, half * phi)
            }
            1 => (h * c, r),
            _ => (-r + half * h * c, half * (r - half * h * c)),
        }
    }

    /// Region index of `t`, if in `J`.
    pub fn region_of(&self, t: T) -> Option<usize> {
        let (j1, jm1) = (self.cyl.ideal(1), self.cyl.ideal(-1));
        let tol = T::membership_tol();
        match (j1.contains(t, tol), jm1.contains(t, tol)) {
            (true, false) => Some(0),
            (true, true) => Some(1),
            (false, true) => Some(2),
            (false, false) => None,
        }
    }

    /// `√φ_ρ`, principal branch, zero where `φ_ρ < 0`.
    pub fn sqrt_phi(&self) -> SupportedFunction<T> {
        self.rep
            .phi
            .map_values(|z| Complex::new(z.re.max(T::zero()).sqrt(), T::zero()), "sqrt")
    }

    /// `A = √φ_ρ U`.
    pub fn generator(&self) -> Result<CrossedProductElement<T>> {
        let u = crate::crossed_product::generator_u(&self.cyl);
        CrossedProductElement::function(&self.cyl, self.sqrt_phi()).multiply(&u)
    }

    /// `min φ_ρ` on the grid of `J` and where it is attained.
    pub fn phi_minimum(&self) -> (T, T) {
        self.j()
            .grid(DEFAULT_GRID * 10)
            .into_iter()
            .map(|t| (self.rep.phi.eval(t).re, t))
            .fold((T::infinity(), T::nan()), |a, b| if b.0 < a.0 { b } else { a })
    }
}

fn check_poincare_hbar<T: Scalar>(hbar: T) -> Result<()> {
    if !(hbar > T::zero()) || !(hbar < T::lit(POINCARE_HBAR_MAX)) {
        return Err(Error::InadmissibleHbar { hbar: hbar.as_f64(), reason: "the Poincaré example needs 0 < ℏ < 2√2 − 2".into() });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionResidual {
    pub region: String,
    pub intervals: Vec<String>,
    pub points: usize,
    pub commutator_residual: f64,
    pub anticommutator_residual: f64,
}

/// Outcome of the two-generator suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoGenReport {
    pub regions: Vec<RegionResidual>,
    pub phi_min: f64,
    pub generator_valid: bool,
    /// Statement of the corollary with `AA*` vanishing on `J₁\J₋₁` and
    /// `A*A` on `J₋₁\J₁`, as printed; see the crate documentation.
    pub printed_corollary_holds: bool,
    pub checks: Report,
}

impl TwoGenReport {
    pub fn all_pass(&self) -> bool {
        self.checks.all_pass()
    }
}

/// Points of an interval's grid that lie in it (open ends dropped).
fn region_points<T: Scalar>(iv: &Interval<T>, n: usize) -> Vec<T> {
    iv.grid(n).into_iter().filter(|&t| iv.contains(t, T::zero())).collect()
}

/// Builds `A`, computes `[A, A*]` and `½(AA* + A*A)` in the crossed product
/// and compares them region by region with the closed forms; also checks the
/// corollary, the defining equation and `[A, g] = A(g − (p₁g)∘α)`.
pub fn two_gen_relations<T: Scalar>(setup: &TwoGenSetup<T>, samples: &[SupportedFunction<T>], tol: T) -> Result<TwoGenReport> {
    let tol_f = tol.as_f64();
    let cyl = &setup.cyl;
    let a = setup.generator()?;
    let a_star = a.involution();
    let aa = a.multiply(&a_star)?;
    let a_a = a_star.multiply(&a)?;
    let comm = aa.sub(&a_a)?;
    let anti = aa.add(&a_a)?.scale(Complex::new(T::lit(0.5), T::zero()));
    let mut checks = Report::new();

    let (phi_min, at) = setup.phi_minimum();
    let generator_valid = phi_min >= -T::membership_tol();
    checks.push(
        Check::flag("phi_rho >= 0 on J", generator_valid)
            .with_detail(format!("min φ_ρ = {phi_min} at {at}")),
    );

    let only_diagonal = [&comm, &anti].iter().all(|x| x.keys().all(|n| n == 0));
    checks.push(Check::flag("[A,A*], AA*+A*A are diagonal", only_diagonal));

    let zero = SupportedFunction::zero(cyl.carrier());
    let c0 = comm.term(0).cloned().unwrap_or_else(|| zero.clone());
    let a0 = anti.term(0).cloned().unwrap_or_else(|| zero.clone());
    let aa0 = aa.term(0).cloned().unwrap_or_else(|| zero.clone());
    let a_a0 = a_a.term(0).cloned().unwrap_or_else(|| zero.clone());

    let names = ["J1 \\ J-1", "J1 ∩ J-1", "J-1 \\ J1"];
    let mut regions = Vec::new();
    let (mut printed_ok, mut direct_ok, mut corollary_eq) = (true, true, T::zero());
    let small = T::membership_tol().sqrt();
    for (k, pieces) in setup.regions().iter().enumerate() {
        let pts: Vec<T> = pieces.iter().flat_map(|iv| region_points(iv, DEFAULT_GRID)).collect();
        let (mut rc, mut ra) = (T::zero(), T::zero());
        for &t in &pts {
            let (c, h) = setup.closed_form(k, t);
            rc = rc.max((c0.eval(t) - Complex::new(c, T::zero())).norm());
            ra = ra.max((a0.eval(t) - Complex::new(h, T::zero())).norm());
            match k {
                0 => {
                    printed_ok &= aa0.eval(t).norm() <= small;
                    direct_ok &= a_a0.eval(t).norm() <= small;
                }
                2 => {
                    printed_ok &= a_a0.eval(t).norm() <= small;
                    direct_ok &= aa0.eval(t).norm() <= small;
                }
                _ => {
                    let r2 = a0.eval(t).re;
                    let want = setup.hbar * setup.profile.eval(r2);
                    corollary_eq = corollary_eq.max((c0.eval(t).re - want).abs());
                }
            }
        }
        checks.push(Check::residual(format!("[A,A*] on {}", names[k]), rc.as_f64(), tol_f));
        checks.push(Check::residual(format!("(AA*+A*A)/2 on {}", names[k]), ra.as_f64(), tol_f));
        regions.push(RegionResidual {
            region: names[k].into(),
            intervals: pieces.iter().map(|iv| iv.to_string()).collect(),
            points: pts.len(),
            commutator_residual: rc.as_f64(),
            anticommutator_residual: ra.as_f64(),
        });
    }
    checks.push(Check::flag("A*A = 0 on J1\\J-1 and AA* = 0 on J-1\\J1", direct_ok));
    checks.push(Check::residual("[A,A*] = hbar C((AA*+A*A)/2) on J1∩J-1", corollary_eq.as_f64(), tol_f));

    // defining equation with R² = ρ, in I coordinates
    let eq = defining_equation_residual(&setup.profile, &setup.alpha, setup.hbar, DEFAULT_GRID);
    checks.push(Check::residual("2gen equation, R^2 = rho", eq.as_f64(), 1e-10f64.max(tol_f / 10.0)));

    let increasing = {
        let vals: Vec<T> = setup.alpha.domain().grid(DEFAULT_GRID).into_iter().map(|u| setup.alpha.eval(u)).collect();
        vals.windows(2).all(|w| w[1] > w[0])
    };
    checks.push(Check::flag("alpha strictly increasing on I", increasing));

    // the same with R² read off the computed anticommutator where u and
    // α_ρ(u) both lie in J₁ ∩ J₋₁
    let cap = setup.cyl.i_cap();
    let alpha_rho = setup.cyl.alpha();
    let half_h = setup.hbar / T::lit(2.0);
    let mut eq2 = T::zero();
    for t in region_points(&cap, DEFAULT_GRID) {
        let Some(s) = alpha_rho.apply(t) else { continue };
        if !cap.contains(s, T::membership_tol()) {
            continue;
        }
        let (r2, r2a) = (a0.eval(t).re, a0.eval(s).re);
        let d = r2a + half_h * setup.profile.eval(r2a) - r2 + half_h * setup.profile.eval(r2);
        eq2 = eq2.max(d.abs());
    }
    checks.push(Check::residual("2gen equation, R^2 = (AA*+A*A)/2", eq2.as_f64(), 1e-10f64.max(tol_f / 10.0)));

    // [A, g] = A(g − (p₁g)∘α_ρ)
    let mut rg = T::zero();
    let back = cyl.power(-1);
    for g in samples {
        let g = g.with_carrier(cyl.carrier());
        let gd = CrossedProductElement::function(cyl, g.clone());
        let lhs = a.commutator(&gd)?;
        let moved = g.multiply(&cyl.partial_identity(1)).pullback(&back)?;
        let rhs = a.multiply(&CrossedProductElement::function(cyl, g.sub(&moved)))?;
        rg = rg.max(lhs.residual(&rhs));
    }
    checks.push(Check::residual("[A,g] = A(g - (p1 g)∘alpha)", rg.as_f64(), tol_f));

    Ok(TwoGenReport { regions, phi_min: phi_min.as_f64(), generator_valid, printed_corollary_holds: printed_ok, checks })
}

/// One border case of the continuity propositions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryCase {
    /// `"J1\\J-1"` (first proposition) or `"J-1\\J1"` (mirrored).
    pub region: String,
    pub u0: f64,
    pub u1: f64,
    /// `u₀ = α_ρ(u₁)` (resp. `u₁ = α_ρ(u₀)`) within 1e−9.
    pub orbit_link: bool,
    /// Values of `[A,A*]` and `½(AA*+A*A)` at `u₀`.
    pub value_at_u0: [f64; 2],
    /// Right limit minus left limit at `u₁`, both functions.
    pub jump_at_u1: [f64; 2],
    pub zero_at_u0: bool,
    pub continuous_at_u1: bool,
    /// `ρ(u₀) ± (ℏ/2)C(ρ(u₀)) = 0`, checked when both hold.
    pub border_equation: Option<bool>,
}

impl BoundaryCase {
    /// The two sides of the equivalence agree.
    pub fn iff_holds(&self) -> bool {
        self.zero_at_u0 == self.continuous_at_u1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub cases: Vec<BoundaryCase>,
    pub generator_valid: bool,
    pub phi_at_border: Option<f64>,
    /// Both regions empty: nothing to check.
    pub vacuous: bool,
}

impl BoundaryReport {
    pub fn iff_pairs_hold(&self) -> bool {
        self.cases.iter().all(|c| c.iff_holds() && c.orbit_link && c.border_equation != Some(false))
    }
}

/// Locates `u₀, u₁` for each nonempty border region, estimates one-sided
/// limits of the relation functions at `u₁` by `u₁ ± 2⁻ᵏ·width`, and
/// reports the equivalence "zero at `u₀` ⇔ continuous at `u₁`".
pub fn boundary_continuity_check<T: Scalar>(setup: &TwoGenSetup<T>) -> Result<BoundaryReport> {
    let j = setup.j();
    let alpha_rho = setup.cyl.alpha();
    let [r1, _, r3] = setup.regions();
    let mut cases = Vec::new();
    let mut phi_at_border = None;
    let link_tol = T::lit(1e-9);
    for (k, pieces) in [(0usize, r1), (2usize, r3)] {
        for piece in pieces {
            let (lo, hi) = (piece.lo(), piece.hi());
            // u₀ is the end of the piece on the border of J
            let (u0, u1) = if lo.is_finite() && (lo - j.lo()).abs() <= link_tol {
                (lo, hi)
            } else if hi.is_finite() && (hi - j.hi()).abs() <= link_tol {
                (hi, lo)
            } else {
                continue;
            };
            if !u1.is_finite() {
                continue;
            }
            let orbit_link = if k == 0 {
                (alpha_rho.eval(u1) - u0).abs() <= link_tol
            } else {
                (alpha_rho.eval(u0) - u1).abs() <= link_tol
            };
            let value = setup.closed_form(k, u0);
            let width = (u1 - u0).abs();
            let step = width / T::lit(2f64.powi(APPROACH_LEVELS as i32));
            let inside = if u1 > u0 { u1 - step } else { u1 + step };
            let outside = if u1 > u0 { u1 + step } else { u1 - step };
            let near = setup.closed_form(k, inside);
            let far = setup.closed_form(setup.region_of(outside).unwrap_or(1), outside);
            let (left, right) = if u1 > u0 { (near, far) } else { (far, near) };
            let jump = [(right.0 - left.0).as_f64(), (right.1 - left.1).as_f64()];
            let lim_tol = |v: T| 1e-6 * (1.0 + v.abs().as_f64());
            let continuous_at_u1 = jump[0].abs() <= lim_tol(left.0) && jump[1].abs() <= lim_tol(left.1);
            let zero_at_u0 = value.0.abs() <= T::lit(1e-9) && value.1.abs() <= T::lit(1e-9);
            let (r, c) = setup.rho_c(u0);
            let half = setup.hbar / T::lit(2.0);
            let border = if k == 0 { r + half * c } else { r - half * c };
            let border_equation = (zero_at_u0 && continuous_at_u1).then(|| border.abs() <= T::lit(1e-9));
            phi_at_border.get_or_insert(setup.rep.phi.eval(u0).re.as_f64());
            cases.push(BoundaryCase {
                region: if k == 0 { "J1\\J-1".into() } else { "J-1\\J1".into() },
                u0: u0.as_f64(),
                u1: u1.as_f64(),
                orbit_link,
                value_at_u0: [value.0.as_f64(), value.1.as_f64()],
                jump_at_u1: jump,
                zero_at_u0,
                continuous_at_u1,
                border_equation,
            });
        }
    }
    let generator_valid = setup.phi_minimum().0 >= -T::membership_tol();
    let vacuous = cases.is_empty();
    Ok(BoundaryReport { cases, generator_valid, phi_at_border, vacuous })
}

/// Constants of the Poincaré example.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoincareConstants {
    pub hbar: f64,
    /// Zero of `φ = ρ + (ℏ/4)(1−ρ)²`.
    pub rho0: f64,
    /// `α(v) = 0`.
    pub v: f64,
    pub alpha_at_0: f64,
    pub alpha_at_1: f64,
    /// `α⁻¹(ρ₀)`.
    pub a_inv: f64,
}

pub fn poincare_constants<T: Scalar>(hbar: T) -> Result<(PoincareConstants, Report)> {
    check_poincare_hbar(hbar)?;
    let rho0 = poincare::rho0(hbar);
    let v = poincare::v(hbar);
    let consts = PoincareConstants {
        hbar: hbar.as_f64(),
        rho0: rho0.as_f64(),
        v: v.as_f64(),
        alpha_at_0: poincare::forward(T::zero(), hbar).as_f64(),
        alpha_at_1: poincare::forward(T::one(), hbar).as_f64(),
        a_inv: poincare::inverse(rho0, hbar).as_f64(),
    };
    let h = consts.hbar;
    let alpha_v = poincare::forward(v, hbar).as_f64();
    let mut r = Report::new();
    r.push(Check::residual("alpha(1) = 1", (consts.alpha_at_1 - 1.0).abs(), 1e-9));
    r.push(Check::residual("|alpha(0) + h/2| <= h^2", (consts.alpha_at_0 + h / 2.0).abs(), h * h));
    r.push(Check::residual("|rho0 + h/4| <= h^2", (consts.rho0 + h / 4.0).abs(), h * h));
    r.push(Check::residual("|v - h/2| <= h^2", (consts.v - h / 2.0).abs(), h * h));
    r.push(Check::residual("alpha(v) = 0", alpha_v.abs(), 1e-9));
    Ok((consts, r))
}
