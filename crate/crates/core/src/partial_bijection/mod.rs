//! Partial bijections between subintervals of a carrier interval.
//!
//! Both directions are kept as closures; nothing here inverts numerically.

mod expr;
mod family;
mod semigroup;

use std::fmt;
use std::sync::Arc;

pub use expr::Expr;
pub use family::{poincare, BijectionFamily, FamilyKind, POINCARE_HBAR_MAX};
pub use semigroup::{compose_word, SemigroupElement};

use crate::error::Result;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Pure real map shared between bijections.
pub type RealMap<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A continuous strictly monotone bijection `domain → range`, both inside
/// `carrier`. The empty bijection (empty domain and range) is an ordinary
/// value.
#[derive(Clone)]
pub struct PartialBijection<T> {
    carrier: Interval<T>,
    domain: Interval<T>,
    range: Interval<T>,
    forward: RealMap<T>,
    inverse: RealMap<T>,
    label: String,
}

impl<T: Scalar> fmt::Debug for PartialBijection<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialBijection")
            .field("label", &self.label)
            .field("carrier", &self.carrier.to_string())
            .field("domain", &self.domain.to_string())
            .field("range", &self.range.to_string())
            .finish()
    }
}

impl<T: Scalar> PartialBijection<T> {
    /// Restricts a globally given monotone pair `(forward, inverse)` to the
    /// carrier: the domain is the largest subset of `carrier ∩ natural_domain`
    /// mapped into the carrier.
    pub fn from_maps(
        carrier: Interval<T>,
        natural_domain: Interval<T>,
        forward: RealMap<T>,
        inverse: RealMap<T>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let d0 = carrier.intersect(&natural_domain);
        let f = forward.clone();
        let range = d0.image_monotone(move |x| f(x), (None, None))?.intersect(&carrier);
        let g = inverse.clone();
        let domain = range.image_monotone(move |y| g(y), (None, None))?.intersect(&d0);
        Ok(PartialBijection { carrier, domain, range, forward, inverse, label: label.into() })
    }

    /// Assembles a bijection from already-known domain and range.
    pub fn from_parts(
        carrier: Interval<T>,
        domain: Interval<T>,
        range: Interval<T>,
        forward: RealMap<T>,
        inverse: RealMap<T>,
        label: impl Into<String>,
    ) -> Self {
        PartialBijection { carrier, domain, range, forward, inverse, label: label.into() }
    }

    pub fn identity(carrier: Interval<T>) -> Self {
        Self::identity_on(carrier, carrier)
    }

    /// The idempotent `1_S` for `S ⊆ carrier`.
    pub fn identity_on(carrier: Interval<T>, set: Interval<T>) -> Self {
        let set = set.intersect(&carrier);
        PartialBijection {
            carrier,
            domain: set,
            range: set,
            forward: Arc::new(|x| x),
            inverse: Arc::new(|x| x),
            label: "id".into(),
        }
    }

    pub fn empty(carrier: Interval<T>) -> Self {
        Self::identity_on(carrier, Interval::empty()).with_label("empty")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn carrier(&self) -> Interval<T> {
        self.carrier
    }

    pub fn domain(&self) -> Interval<T> {
        self.domain
    }

    pub fn range(&self) -> Interval<T> {
        self.range
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn forward_map(&self) -> RealMap<T> {
        self.forward.clone()
    }

    pub fn inverse_map(&self) -> RealMap<T> {
        self.inverse.clone()
    }

    /// `α(x)` without a domain check.
    pub fn eval(&self, x: T) -> T {
        (self.forward)(x)
    }

    /// `α⁻¹(y)` without a range check.
    pub fn eval_inverse(&self, y: T) -> T {
        (self.inverse)(y)
    }

    pub fn apply(&self, x: T) -> Option<T> {
        self.domain.contains(x, T::membership_tol()).then(|| (self.forward)(x))
    }

    pub fn apply_inverse(&self, y: T) -> Option<T> {
        self.range.contains(y, T::membership_tol()).then(|| (self.inverse)(y))
    }

    pub fn inverse(&self) -> Self {
        PartialBijection {
            carrier: self.carrier,
            domain: self.range,
            range: self.domain,
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
            label: format!("({})^-1", self.label),
        }
    }

    /// `α(S ∩ dom α)`.
    pub fn image(&self, set: &Interval<T>) -> Interval<T> {
        let s = set.intersect(&self.domain);
        let f = self.forward.clone();
        s.image_monotone(move |x| f(x), (None, None))
            .map(|iv| iv.intersect(&self.range))
            .unwrap_or_else(|_| Interval::empty())
    }

    /// `α⁻¹(S ∩ ran α)`.
    pub fn preimage(&self, set: &Interval<T>) -> Interval<T> {
        self.inverse().image(set)
    }

    /// `self ∘ inner` on the largest domain where it makes sense.
    pub fn compose(&self, inner: &Self) -> Self {
        let mid = inner.range.intersect(&self.domain);
        if mid.is_empty() {
            return Self::empty(self.carrier);
        }
        let domain = inner.preimage(&mid).intersect(&inner.domain);
        let range = self.image(&mid).intersect(&self.range);
        if domain.is_empty() || range.is_empty() {
            return Self::empty(self.carrier);
        }
        let (f1, f2) = (self.forward.clone(), inner.forward.clone());
        let (g1, g2) = (self.inverse.clone(), inner.inverse.clone());
        PartialBijection {
            carrier: self.carrier,
            domain,
            range,
            forward: Arc::new(move |x| f1(f2(x))),
            inverse: Arc::new(move |y| g2(g1(y))),
            label: format!("{}∘{}", self.label, inner.label),
        }
    }

    /// `αⁿ` by iterated composition; identity on the carrier for `n = 0`.
    pub fn power(&self, n: i64) -> Self {
        if n == 0 {
            return Self::identity(self.carrier);
        }
        let base = if n > 0 { self.clone() } else { self.inverse() };
        let mut acc = base.clone();
        for _ in 1..n.unsigned_abs() {
            if acc.is_empty() {
                break;
            }
            acc = base.compose(&acc);
        }
        debug_assert!(
            domains_agree(&acc.range, &self.closed_form_range(n)),
            "iterated range {} disagrees with the intersection formula {}",
            acc.range,
            self.closed_form_range(n)
        );
        acc.with_label(format!("({})^{n}", self.label))
    }

    /// `Iₙ = α^{n−1}(I∩) ∩ … ∩ α(I∩)` with `I∩ = I₁ ∩ I₋₁`, computed without
    /// forming the power itself. For `n < 0` the same formula with `α⁻¹`.
    pub fn closed_form_range(&self, n: i64) -> Interval<T> {
        match n {
            0 => self.carrier,
            1 => self.range,
            -1 => self.domain,
            _ if n < 0 => self.inverse().closed_form_range(-n),
            _ => {
                let cap = self.domain.intersect(&self.range);
                let mut t = self.image(&cap);
                let mut acc = t;
                for _ in 2..n {
                    if acc.is_empty() {
                        break;
                    }
                    t = self.image(&t);
                    acc = acc.intersect(&t);
                }
                acc
            }
        }
    }

    /// `β ∘ α ∘ β⁻¹` for a bijection `β` of the whole carrier onto a new one.
    pub fn conjugate_by(&self, beta: &Self) -> Self {
        let inner = self.compose(&beta.inverse());
        let whole = beta.compose(&inner);
        PartialBijection { carrier: beta.range, ..whole }
            .with_label(format!("{}∘{}∘{}^-1", beta.label, self.label, beta.label))
    }

    /// Pointwise agreement: same domain (within `tol`) and values on an
    /// `n`-point grid of the domain.
    pub fn agrees_with(&self, other: &Self, n: usize, tol: T) -> bool {
        if !domains_agree(&self.domain, &other.domain) || !domains_agree(&self.range, &other.range) {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        self.domain.grid(n).into_iter().all(|x| {
            let (a, b) = ((self.forward)(x), (other.forward)(x));
            a == b || (a - b).abs() <= tol * (T::one() + a.abs())
        })
    }

    /// `max |α⁻¹(α(x)) − x|` over an `n`-point grid of the domain.
    pub fn round_trip_error(&self, n: usize) -> T {
        self.domain
            .grid(n)
            .into_iter()
            .map(|x| ((self.inverse)((self.forward)(x)) - x).abs())
            .fold(T::zero(), T::max)
    }
}

/// Interval equality up to membership tolerance; a degenerate interval of
/// zero length and the empty set are not distinguished.
pub fn domains_agree<T: Scalar>(a: &Interval<T>, b: &Interval<T>) -> bool {
    let tol = T::membership_tol() * T::lit(1e3);
    match (a.is_empty(), b.is_empty()) {
        (true, true) => true,
        (false, false) => {
            let close = |x: T, y: T| x == y || (x - y).abs() <= tol;
            close(a.lo(), b.lo()) && close(a.hi(), b.hi())
        }
        (true, false) => b.length() <= tol,
        (false, true) => a.length() <= tol,
    }
}

/// The partial bijection `x ↦ x + nℏ` between `X ∩ (X − nℏ)` and
/// `X ∩ (X + nℏ)`: the restriction of the global translation action to `X`.
pub fn restricted_shift_action<T: Scalar>(interval: Interval<T>, hbar: T, n: i64) -> PartialBijection<T> {
    let t = T::from_i64(n).unwrap() * hbar;
    let shifted = |s: T| {
        if interval.is_empty() {
            Interval::empty()
        } else {
            Interval::new(interval.lo() + s, interval.hi() + s, interval.lo_closed(), interval.hi_closed())
        }
    };
    let range = interval.intersect(&shifted(t));
    let domain = interval.intersect(&shifted(-t));
    PartialBijection::from_parts(
        interval,
        domain,
        range,
        Arc::new(move |x| x + t),
        Arc::new(move |y| y - t),
        format!("shift({n}h)"),
    )
}
