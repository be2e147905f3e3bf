//! Bridge from interval cylinders to the finite oracle: a finite set of
//! points invariant under `α` and `α⁻¹` turns the cylinder into an exact
//! finite instance, and products must agree pointwise.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use super::algebra::{FiniteAction, FiniteAlgebraElement, Quotient};
use super::bijection::FinitePartialBijection;
use crate::crossed_product::{CrossedProductElement, Cylinder};
use crate::error::{Error, Result};
use crate::function_algebra::SupportedFunction;
use crate::partial_bijection::SemigroupElement;
use crate::report::{Check, Report};
use crate::representation::build_orbit;
use crate::scalar::Scalar;

/// A cylinder restricted to an invariant grid.
#[derive(Clone, Debug, Serialize)]
pub struct SampledInstance {
    pub points: Vec<f64>,
    #[serde(skip)]
    pub action: Arc<FiniteAction>,
}

/// The orbit of `x0`, which must be finite (at most `max_points` points).
pub fn orbit_grid<T: Scalar>(cyl: &Cylinder<T>, x0: T, max_points: usize) -> Result<Vec<T>> {
    let orbit = build_orbit(cyl.alpha(), x0, max_points)?;
    if orbit.is_truncated() {
        return Err(Error::GridIncompatible(format!(
            "the orbit of {x0} under {} has more than {max_points} points",
            cyl.alpha().label()
        )));
    }
    Ok(orbit.points.clone())
}

fn locate<T: Scalar>(points: &[T], y: T, tol: T) -> Option<usize> {
    points.iter().position(|&p| (p - y).abs() <= tol * (T::one() + y.abs()))
}

/// Builds the finite instance, failing when `α` or `α⁻¹` moves a grid point
/// off the grid.
pub fn discretize<T: Scalar>(cyl: &Cylinder<T>, points: &[T], tol: T) -> Result<SampledInstance> {
    let alpha = cyl.alpha();
    let mut map = vec![None; points.len()];
    for (i, &x) in points.iter().enumerate() {
        if let Some(y) = alpha.apply(x) {
            map[i] = Some(locate(points, y, tol).ok_or_else(|| {
                Error::GridIncompatible(format!("α({x}) = {y} is not a grid point"))
            })?);
        }
        if let Some(y) = alpha.apply_inverse(x) {
            locate(points, y, tol)
                .ok_or_else(|| Error::GridIncompatible(format!("α⁻¹({x}) = {y} is not a grid point")))?;
        }
    }
    let theta = FinitePartialBijection::from_map(map)?;
    Ok(SampledInstance {
        points: points.iter().map(|p| p.as_f64()).collect(),
        action: FiniteAction::new(theta, Quotient::Eager),
    })
}

impl SampledInstance {
    /// `x ↦ Σ (f_n|grid) δ_{θ^n}`, values taken verbatim (no clipping).
    pub fn sample<T: Scalar>(&self, x: &CrossedProductElement<T>) -> FiniteAlgebraElement<Complex<f64>> {
        let mut out = FiniteAlgebraElement::zero(&self.action);
        for (&n, f) in x.terms() {
            out.insert_unchecked(SemigroupElement::power(n), self.sample_fn(f));
        }
        out
    }

    pub fn sample_fn<T: Scalar>(&self, f: &SupportedFunction<T>) -> Vec<Complex<f64>> {
        self.points
            .iter()
            .map(|&p| {
                let z = f.eval(T::lit(p));
                Complex::new(z.re.as_f64(), z.im.as_f64())
            })
            .collect()
    }
}

/// Agreement of the interval crossed product and the oracle on the grid:
/// products and involutions of all pairs from `elems`, plus detection of a
/// deliberately misplaced coefficient `f δ_n`.
pub fn sample_interval_to_finite<T: Scalar>(
    cyl: &Arc<Cylinder<T>>,
    points: &[T],
    elems: &[CrossedProductElement<T>],
    violation: Option<(i64, SupportedFunction<T>)>,
    tol: f64,
) -> Result<(SampledInstance, Report)> {
    let inst = discretize(cyl, points, T::membership_tol())?;
    let mut r = Report::new();
    let (mut prod, mut inv) = (0.0f64, 0.0f64);
    let sampled: Vec<_> = elems.iter().map(|x| inst.sample(x)).collect();
    let mut flagged_input = false;
    for (x, xs) in elems.iter().zip(&sampled) {
        flagged_input |= !xs.support_violations().is_empty();
        inv = inv.max(inst.sample(&x.involution()).residual(&xs.involution()));
        for (y, ys) in elems.iter().zip(&sampled) {
            prod = prod.max(inst.sample(&x.multiply(y)?).residual(&xs.multiply(ys)?));
        }
    }
    r.push(Check::flag("sampled elements respect the ideals", !flagged_input));
    r.push(Check::residual("sample(xy) = sample(x) sample(y)", prod, tol));
    r.push(Check::residual("sample(x*) = sample(x)*", inv, tol));
    if let Some((n, f)) = violation {
        let interval = matches!(
            CrossedProductElement::from_terms_strict(cyl, BTreeMap::from([(n, f.clone())])),
            Err(Error::IdealViolation { .. })
        );
        let oracle = FiniteAlgebraElement::monomial_strict(&inst.action, SemigroupElement::power(n), inst.sample_fn(&f)).is_err();
        r.push(
            Check::flag("support violation flagged by both paths", interval && oracle)
                .with_detail(format!("interval: {interval}, oracle: {oracle}")),
        );
    }
    Ok((inst, r))
}
