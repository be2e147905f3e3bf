use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Expr, PartialBijection};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Largest ℏ (exclusive) for which the Poincaré map is defined on `[0,1]`.
pub const POINCARE_HBAR_MAX: f64 = 0.828_427_124_746_190_1; // 2√2 − 2

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Shift,
    PlanePlus,
    PlaneMinus,
    Poincare,
    Custom,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Shift => "shift",
            FamilyKind::PlanePlus => "plane_plus",
            FamilyKind::PlaneMinus => "plane_minus",
            FamilyKind::Poincare => "poincare",
            FamilyKind::Custom => "custom",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "shift" => FamilyKind::Shift,
            "plane_plus" => FamilyKind::PlanePlus,
            "plane_minus" => FamilyKind::PlaneMinus,
            "poincare" => FamilyKind::Poincare,
            "custom" => FamilyKind::Custom,
            _ => return Err(Error::Precondition(format!("unknown family kind {s:?}"))),
        })
    }
}

/// Closed forms of the Poincaré-disc bijection, solving
/// `x + (ℏ/4)(1−x)² = u − (ℏ/4)(1−u)²` on the branch that tends to the
/// identity. All formulas are written to avoid cancellation at small ℏ.
pub mod poincare {
    use crate::scalar::Scalar;

    /// `α_ℏ(u)`; finite for `1 − ℏs − ℏ²s²/4 ≥ 0`, `s = 1 − u`.
    pub fn forward<T: Scalar>(u: T, h: T) -> T {
        let s = T::one() - u;
        let q = s + h * s * s / T::lit(4.0);
        let eps = -h * q;
        T::one() - T::lit(2.0) * q / ((T::one() + eps).sqrt() + T::one())
    }

    /// `α_ℏ⁻¹(x)`.
    pub fn inverse<T: Scalar>(x: T, h: T) -> T {
        let s = T::one() - x;
        let q = s - h * s * s / T::lit(4.0);
        let eta = h * q;
        T::one() - T::lit(2.0) * q / ((T::one() + eta).sqrt() + T::one())
    }

    /// Where the radicand is nonnegative and the "+" branch increases.
    pub fn natural_domain<T: Scalar>(h: T) -> (T, T) {
        let c = T::lit(2.0) * T::SQRT_2() - T::lit(2.0);
        (T::one() - c / h, T::one() + T::lit(2.0) / h)
    }

    /// Zero of `ρ + (ℏ/4)(1−ρ)²`: `1 − 2/ℏ + (2/ℏ)√(1−ℏ)`.
    pub fn rho0<T: Scalar>(h: T) -> T {
        T::one() - T::lit(2.0) / ((T::one() - h).sqrt() + T::one())
    }

    /// `v = α_ℏ⁻¹(0)`.
    pub fn v<T: Scalar>(h: T) -> T {
        inverse(T::zero(), h)
    }

    /// `v` from the textbook expression `1 + 2/ℏ − √(4+4ℏ−ℏ²)/ℏ`.
    pub fn v_textbook<T: Scalar>(h: T) -> T {
        T::one() + T::lit(2.0) / h - (T::lit(4.0) + T::lit(4.0) * h - h * h).sqrt() / h
    }

    /// `α_ℏ(0)` from `1 − 2/ℏ + √(4−4ℏ−ℏ²)/ℏ`.
    pub fn alpha_at_0_textbook<T: Scalar>(h: T) -> T {
        T::one() - T::lit(2.0) / h + (T::lit(4.0) - T::lit(4.0) * h - h * h).sqrt() / h
    }
}

/// A one-parameter family ℏ ↦ α_ℏ of partial bijections of a fixed carrier,
/// with α₀ = identity.
#[derive(Clone, Debug)]
pub struct BijectionFamily<T> {
    kind: FamilyKind,
    carrier: Interval<T>,
    custom: Option<(Expr, Expr)>,
    natural_domain: Interval<T>,
}

impl<T: Scalar> BijectionFamily<T> {
    pub fn new(kind: FamilyKind, carrier: Interval<T>) -> Result<Self> {
        if kind == FamilyKind::Custom {
            return Err(Error::Precondition("custom families need expressions; use BijectionFamily::custom".into()));
        }
        if carrier.is_empty() {
            return Err(Error::EmptyDomain("family carrier".into()));
        }
        Ok(BijectionFamily { kind, carrier, custom: None, natural_domain: Interval::real_line() })
    }

    /// A user family from forward/inverse expressions in `x` and `h`.
    pub fn custom(carrier: Interval<T>, forward: Expr, inverse: Expr, natural_domain: Option<Interval<T>>) -> Result<Self> {
        if carrier.is_empty() {
            return Err(Error::EmptyDomain("family carrier".into()));
        }
        Ok(BijectionFamily {
            kind: FamilyKind::Custom,
            carrier,
            custom: Some((forward, inverse)),
            natural_domain: natural_domain.unwrap_or_else(Interval::real_line),
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn carrier(&self) -> Interval<T> {
        self.carrier
    }

    pub fn expressions(&self) -> Option<&(Expr, Expr)> {
        self.custom.as_ref()
    }

    /// The defining formula `α_h(x)` without any domain restriction; valid
    /// for small negative `h` too, which finite differences use.
    pub fn formula(&self, x: T, h: T) -> T {
        match self.kind {
            FamilyKind::Shift | FamilyKind::PlaneMinus => x + h,
            FamilyKind::PlanePlus => x - h,
            FamilyKind::Poincare => poincare::forward(x, h),
            FamilyKind::Custom => self.custom.as_ref().unwrap().0.eval(x, h),
        }
    }

    /// `∂α_ℏ(x)/∂ℏ` at ℏ = 0: closed form for built-in kinds, a central
    /// difference for custom ones.
    pub fn beta(&self, x: T) -> T {
        match self.kind {
            FamilyKind::Shift | FamilyKind::PlaneMinus => T::one(),
            FamilyKind::PlanePlus => -T::one(),
            FamilyKind::Poincare => -(T::one() - x).powi(2) / T::lit(2.0),
            FamilyKind::Custom => self.beta_fd(x, T::lit(1e-5)),
        }
    }

    /// Centered finite difference of ℏ ↦ α_ℏ(x) at ℏ = 0.
    pub fn beta_fd(&self, x: T, step: T) -> T {
        (self.formula(x, step) - self.formula(x, -step)) / (step + step)
    }

    pub fn check_hbar(&self, hbar: T) -> Result<()> {
        let bad = |reason: &str| Err(Error::InadmissibleHbar { hbar: hbar.as_f64(), reason: reason.into() });
        if !(hbar >= T::zero()) || !hbar.is_finite() {
            return bad("must be finite and nonnegative");
        }
        if self.kind == FamilyKind::Poincare && hbar >= T::lit(POINCARE_HBAR_MAX) {
            return bad("the Poincaré map needs ℏ < 2√2 − 2");
        }
        Ok(())
    }

    /// The member α_ℏ restricted to the carrier. At ℏ = 0 this is the
    /// identity by definition, whatever the kind.
    pub fn at(&self, hbar: T) -> Result<PartialBijection<T>> {
        self.check_hbar(hbar)?;
        if hbar == T::zero() {
            return Ok(PartialBijection::identity(self.carrier).with_label(format!("{}(0)", self.kind)));
        }
        let h = hbar;
        let label = format!("{}({})", self.kind, hbar);
        let (natural, fwd, inv): (Interval<T>, super::RealMap<T>, super::RealMap<T>) = match self.kind {
            FamilyKind::Shift | FamilyKind::PlaneMinus => {
                (Interval::real_line(), Arc::new(move |x| x + h), Arc::new(move |y| y - h))
            }
            FamilyKind::PlanePlus => (Interval::real_line(), Arc::new(move |x| x - h), Arc::new(move |y| y + h)),
            FamilyKind::Poincare => {
                let (lo, hi) = poincare::natural_domain(h);
                (
                    Interval::closed(lo, hi),
                    Arc::new(move |u| poincare::forward(u, h)),
                    Arc::new(move |x| poincare::inverse(x, h)),
                )
            }
            FamilyKind::Custom => {
                let (f, g) = self.custom.clone().unwrap();
                (self.natural_domain, Arc::new(move |x| f.eval(x, h)), Arc::new(move |y| g.eval(y, h)))
            }
        };
        let b = PartialBijection::from_maps(self.carrier, natural, fwd, inv, label)?;
        if b.is_empty() {
            return Err(Error::EmptyDomain(format!("{} at ℏ = {} on {}", self.kind, hbar, self.carrier)));
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0)
    }

    #[test]
    fn poincare_fixes_one() {
        let fam = BijectionFamily::new(FamilyKind::Poincare, unit()).unwrap();
        for h in [0.2, 0.1, 0.05, 0.8] {
            let a = fam.at(h).unwrap();
            assert!((a.eval(1.0) - 1.0).abs() <= 1e-15);
            assert!(a.round_trip_error(101) < 1e-14);
        }
    }

    #[test]
    fn poincare_near_zero() {
        let h = 0.1f64;
        let a0 = poincare::forward(0.0, h);
        assert!((a0 + h / 2.0).abs() <= h * h);
        assert!((a0 - poincare::alpha_at_0_textbook(h)).abs() < 1e-14);
        assert!((poincare::v(h) - poincare::v_textbook(h)).abs() < 1e-14);
        assert!(poincare::forward(poincare::v(h), h).abs() < 1e-15);
        // hand evaluation: 1 − 20 + 10·√3.59
        assert!((a0 - (-0.052_704_678_5)).abs() < 1e-9, "{a0}");
    }

    #[test]
    fn poincare_image_of_unit() {
        let fam = BijectionFamily::new(FamilyKind::Poincare, Interval::closed(0.0, 1.0)).unwrap();
        let wide = BijectionFamily::new(FamilyKind::Poincare, Interval::closed(-1.0, 1.0)).unwrap();
        let a = wide.at(0.1).unwrap();
        let img = unit().image_monotone(|u| a.eval(u), (None, None)).unwrap();
        assert!((img.lo() - poincare::forward(0.0, 0.1f64)).abs() < 1e-15);
        assert_eq!(img.hi(), 1.0);
        // restricted to [0,1] the range starts at 0 and the domain at v
        let b = fam.at(0.1).unwrap();
        assert_eq!(b.range().lo(), 0.0);
        assert!((b.domain().lo() - poincare::v(0.1f64)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_hbar() {
        let fam = BijectionFamily::new(FamilyKind::Poincare, unit()).unwrap();
        assert!(fam.at(0.83).is_err());
        assert!(fam.at(-0.1).is_err());
        assert!(fam.at(f64::NAN).is_err());
        assert!(BijectionFamily::new(FamilyKind::Shift, unit()).unwrap().at(2.0).is_err());
    }

    #[test]
    fn classical_limit() {
        for kind in [FamilyKind::Shift, FamilyKind::PlanePlus, FamilyKind::PlaneMinus, FamilyKind::Poincare] {
            let fam = BijectionFamily::new(kind, unit()).unwrap();
            let id = fam.at(0.0).unwrap();
            assert_eq!(id.domain(), unit());
            let mut prev = f64::INFINITY;
            for h in [1e-1, 1e-2, 1e-3] {
                let a = fam.at(h).unwrap();
                let dev = a.domain().grid(101).into_iter().map(|x| (a.eval(x) - x).abs()).fold(0.0, f64::max);
                assert!(dev < prev && dev <= h * (1.0 + 1e-9), "{kind} {h} {dev}");
                prev = dev;
            }
        }
    }

    #[test]
    fn derivative_in_hbar() {
        let h = 1e-3;
        for kind in [FamilyKind::PlanePlus, FamilyKind::PlaneMinus, FamilyKind::Shift, FamilyKind::Poincare] {
            let fam = BijectionFamily::new(kind, unit()).unwrap();
            let a = fam.at(h).unwrap();
            for x in a.domain().grid(101) {
                let quotient = (a.eval(x) - x) / h;
                let b = fam.beta(x);
                assert!((quotient - b).abs() <= 0.05 * b.abs().max(1e-2), "{kind} x={x}");
                assert!((fam.beta_fd(x, 1e-4) - b).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn custom_family() {
        let f: Expr = "x + h*(1-x)".parse().unwrap();
        let g: Expr = "(x - h)/(1 - h)".parse().unwrap();
        let fam = BijectionFamily::custom(unit(), f, g, None).unwrap();
        let a = fam.at(0.1).unwrap();
        assert!((a.range().lo() - 0.1).abs() < 1e-15);
        assert_eq!(a.domain(), unit());
        assert!(a.round_trip_error(101) < 1e-15);
        assert!((fam.beta(0.25) - 0.75).abs() < 1e-8);
    }
}
