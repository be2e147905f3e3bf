use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bijection::FinitePartialBijection;
use super::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::partial_bijection::SemigroupElement;

/// Whether `a δ_s` is identified with `a δ_t` for `s ≤ t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quotient {
    /// The algebra `L(A, S, α)` itself: keys are full semigroup elements.
    None,
    /// The algebraic crossed product: every key `ε₊ε₋θ^m` is reduced to `θ^m`.
    Eager,
}

/// The action of the inverse semigroup generated by one finite partial
/// bijection `θ` on `A = ℂ^M`, `α_s(f) = f ∘ θ_s⁻¹` on the range of `θ_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAction {
    theta: FinitePartialBijection,
    quotient: Quotient,
}

impl FiniteAction {
    pub fn new(theta: FinitePartialBijection, quotient: Quotient) -> Arc<Self> {
        Arc::new(FiniteAction { theta, quotient })
    }

    pub fn theta(&self) -> &FinitePartialBijection {
        &self.theta
    }

    pub fn size(&self) -> usize {
        self.theta.size()
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    pub fn realize(&self, s: SemigroupElement) -> FinitePartialBijection {
        self.theta.realize(s)
    }

    /// The key under which `s` is stored.
    pub fn key(&self, s: SemigroupElement) -> SemigroupElement {
        match self.quotient {
            Quotient::None => s,
            Quotient::Eager => SemigroupElement::power(s.m),
        }
    }

    /// Indicator of the range of `θ_s`: the partial identity `p_s`.
    pub fn partial_identity<C: Coefficient>(&self, s: SemigroupElement) -> Vec<C> {
        let r = self.realize(s);
        (0..self.size()).map(|k| if r.in_range(k) { C::one() } else { C::zero() }).collect()
    }

    /// `α_s(p_{s*} f)`.
    pub fn act<C: Coefficient>(&self, s: SemigroupElement, f: &[C]) -> Vec<C> {
        let r = self.realize(s);
        (0..self.size())
            .map(|k| r.apply_inverse(k).map_or_else(C::zero, |j| f[j].clone()))
            .collect()
    }
}

/// A finitely supported `S → ℂ^M`, `x(s)` supported on the range of `θ_s`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebraElement<C> {
    action: Arc<FiniteAction>,
    terms: BTreeMap<SemigroupElement, Vec<C>>,
}

impl<C: Coefficient> PartialEq for FiniteAlgebraElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action && self.sub(other).map(|d| d.terms.is_empty()).unwrap_or(false)
    }
}

fn is_zero<C: Coefficient>(v: &[C]) -> bool {
    v.iter().all(Zero::is_zero)
}

use num_traits::Zero;

impl<C: Coefficient> FiniteAlgebraElement<C> {
    pub fn zero(action: &Arc<FiniteAction>) -> Self {
        FiniteAlgebraElement { action: action.clone(), terms: BTreeMap::new() }
    }

    /// `(p_s a) δ_s`.
    pub fn monomial(action: &Arc<FiniteAction>, s: SemigroupElement, a: Vec<C>) -> Self {
        assert_eq!(a.len(), action.size(), "coefficient vector of the wrong length");
        let p = action.partial_identity::<C>(s);
        let a: Vec<C> = a.into_iter().zip(p).map(|(x, p)| x * p).collect();
        let mut out = Self::zero(action);
        out.accumulate(s, a);
        out
    }

    /// `a δ_s`, refusing `a` with values outside the range of `θ_s`.
    pub fn monomial_strict(action: &Arc<FiniteAction>, s: SemigroupElement, a: Vec<C>) -> Result<Self> {
        let r = action.realize(s);
        let bad: Vec<usize> = (0..action.size()).filter(|&k| !r.in_range(k) && !a[k].is_zero()).collect();
        if !bad.is_empty() {
            return Err(Error::IdealViolation {
                support: format!("{bad:?}"),
                ideal: format!("{:?}", r.range()),
                context: format!(" at key {s}"),
            });
        }
        Ok(Self::monomial(action, s, a))
    }

    /// `a δ_e`.
    pub fn function(action: &Arc<FiniteAction>, a: Vec<C>) -> Self {
        Self::monomial(action, SemigroupElement::IDENTITY, a)
    }

    /// `U_s = p_s δ_s`.
    pub fn unitary(action: &Arc<FiniteAction>, s: SemigroupElement) -> Self {
        Self::monomial(action, s, action.partial_identity(s))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, action: &Arc<FiniteAction>, keys: &[SemigroupElement], terms: usize) -> Self {
        let mut out = Self::zero(action);
        for _ in 0..terms {
            let s = keys[rng.gen_range(0..keys.len())];
            let a = (0..action.size()).map(|_| C::sample(rng)).collect();
            out = out.add(&Self::monomial(action, s, a)).expect("same action");
        }
        out
    }

    fn accumulate(&mut self, s: SemigroupElement, a: Vec<C>) {
        let key = self.action.key(s);
        let slot = self.terms.entry(key).or_insert_with(|| vec![C::zero(); a.len()]);
        for (x, y) in slot.iter_mut().zip(a) {
            *x = x.clone() + y;
        }
        if is_zero(slot) {
            self.terms.remove(&key);
        }
    }

    pub fn action(&self) -> &Arc<FiniteAction> {
        &self.action
    }

    pub fn terms(&self) -> &BTreeMap<SemigroupElement, Vec<C>> {
        &self.terms
    }

    pub fn term(&self, s: SemigroupElement) -> Option<&Vec<C>> {
        self.terms.get(&self.action.key(s))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.action, &other.action) || self.action == other.action {
            Ok(())
        } else {
            Err(Error::MismatchedGenerators)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let mut out = self.clone();
        for (&s, a) in &other.terms {
            out.accumulate(s, a.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: C) -> Self {
        let mut out = Self::zero(&self.action);
        for (&s, a) in &self.terms {
            out.accumulate(s, a.iter().map(|x| x.clone() * c.clone()).collect());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-C::one()))
    }

    /// `(x·y)(s) = Σ_{rt=s} α_r(α_{r*}(x(r)) y(t))`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let act = &self.action;
        let mut out = Self::zero(act);
        for (&r, a) in &self.terms {
            let back = act.act(r.star(), a);
            for (&t, b) in &other.terms {
                let inner: Vec<C> = back.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).collect();
                out.accumulate(r.product(t), act.act(r, &inner));
            }
        }
        Ok(out)
    }

    /// `x*(s) = α_s(x(s*)^*)`.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(&self.action);
        for (&s, a) in &self.terms {
            let conj: Vec<C> = a.iter().map(Coefficient::conj).collect();
            out.accumulate(s.star(), self.action.act(s.star(), &conj));
        }
        out
    }

    /// `max |x(s)_k − y(s)_k|`.
    pub fn residual(&self, other: &Self) -> f64 {
        match self.sub(other) {
            Ok(d) => d.terms.values().flatten().map(Coefficient::magnitude).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }

    /// Keys whose coefficient is nonzero outside the range of `θ_s`.
    pub fn support_violations(&self) -> Vec<SemigroupElement> {
        self.terms
            .iter()
            .filter(|(s, a)| {
                let r = self.action.realize(**s);
                a.iter().enumerate().any(|(k, x)| !r.in_range(k) && !x.is_zero())
            })
            .map(|(s, _)| *s)
            .collect()
    }

    /// Inserts `a δ_s` verbatim, bypassing the support clip; for testing
    /// detection of ideal violations.
    pub fn insert_unchecked(&mut self, s: SemigroupElement, a: Vec<C>) {
        self.accumulate(s, a);
    }
}
