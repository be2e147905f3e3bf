//! Point-orbit representations: the orbit `{αⁿ(x₀)}`, the shift matrix `V`,
//! diagonal `π(f)` and `Σ fₙδₙ ↦ Σ π(fₙ)Vⁿ`.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use crate::crossed_product::{CrossedProductElement, Cylinder};
use crate::error::{Error, Result};
use crate::function_algebra::SupportedFunction;
use crate::interval::Interval;
use crate::partial_bijection::PartialBijection;
use crate::report::{Check, Report};
use crate::scalar::Scalar;

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Points closer than this are the same orbit point.
pub const MERGE_TOL: f64 = 1e-12;

/// `xₙ = αⁿ(x₀)` for `n₋ ≤ n ≤ n₊`, stored in index order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Orbit<T> {
    pub base: T,
    pub n_minus: i64,
    pub n_plus: i64,
    pub points: Vec<T>,
    /// More points exist below `n₋` but were cut by the budget.
    pub truncated_below: bool,
    pub truncated_above: bool,
    /// `α(x₀) = x₀`.
    pub fixed_point: bool,
}

impl<T: Scalar> Orbit<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `xₙ`, if recorded.
    pub fn point(&self, n: i64) -> Option<T> {
        (self.n_minus..=self.n_plus).contains(&n).then(|| self.points[(n - self.n_minus) as usize])
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_below || self.truncated_above
    }

    /// `max |α(xₙ) − xₙ₊₁|` over recorded consecutive pairs.
    pub fn step_residual(&self, alpha: &PartialBijection<T>) -> T {
        self.points
            .windows(2)
            .map(|w| (alpha.eval(w[0]) - w[1]).abs())
            .fold(T::zero(), T::max)
    }
}

/// Iterates α and α⁻¹ alternately from `x₀` until both sides leave the
/// domain/range or `truncation` points are recorded.
pub fn build_orbit<T: Scalar>(alpha: &PartialBijection<T>, x0: T, truncation: usize) -> Result<Orbit<T>> {
    if !alpha.carrier().contains(x0, T::zero()) {
        return Err(Error::Precondition(format!("base point {x0} is not in {}", alpha.carrier())));
    }
    if truncation == 0 {
        return Err(Error::Precondition("orbit truncation must be at least 1".into()));
    }
    let fixed_point = alpha.apply(x0).is_some_and(|y| y == x0);
    let (mut fwd, mut bwd) = (Vec::new(), Vec::new());
    let (mut fwd_open, mut bwd_open) = (!fixed_point, !fixed_point);
    let (mut hi, mut lo) = (x0, x0);
    let mut forward_turn = true;
    while 1 + fwd.len() + bwd.len() < truncation && (fwd_open || bwd_open) {
        if (forward_turn && fwd_open) || !bwd_open {
            match alpha.apply(hi).filter(|&y| y != hi) {
                Some(y) => {
                    fwd.push(y);
                    hi = y;
                }
                None => fwd_open = false,
            }
        } else {
            match alpha.apply_inverse(lo).filter(|&y| y != lo) {
                Some(y) => {
                    bwd.push(y);
                    lo = y;
                }
                None => bwd_open = false,
            }
        }
        forward_turn = !forward_turn;
    }
    let truncated_above = fwd_open && alpha.apply(hi).is_some_and(|y| y != hi);
    let truncated_below = bwd_open && alpha.apply_inverse(lo).is_some_and(|y| y != lo);
    let n_minus = -(bwd.len() as i64);
    let n_plus = fwd.len() as i64;
    let points: Vec<T> = bwd.into_iter().rev().chain(std::iter::once(x0)).chain(fwd).collect();
    Ok(Orbit { base: x0, n_minus, n_plus, points, truncated_below, truncated_above, fixed_point })
}

fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// Conjugate transpose.
pub fn adjoint<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    m.transpose().map(|c| c.conj())
}

pub fn frobenius<T: Scalar>(m: &CMatrix<T>) -> T {
    m.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
}

pub fn max_abs<T: Scalar>(m: &CMatrix<T>) -> T {
    m.iter().map(|c| c.norm()).fold(T::zero(), T::max)
}

/// The square submatrix on the given indices.
pub fn compress<T: Scalar>(m: &CMatrix<T>, idx: &[usize]) -> CMatrix<T> {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// A representation on `ℓ²` of one or several disjoint orbits.
#[derive(Clone, Debug)]
pub struct MatrixRep<T: Scalar> {
    orbits: Vec<Orbit<T>>,
    offsets: Vec<usize>,
    points: Vec<T>,
    v: CMatrix<T>,
}

impl<T: Scalar> MatrixRep<T> {
    pub fn new(orbit: Orbit<T>) -> Self {
        Self::direct_sum(vec![orbit])
    }

    /// Block-diagonal sum; an orbit sharing a point with an earlier one is
    /// the same orbit and is skipped.
    pub fn direct_sum(orbits: Vec<Orbit<T>>) -> Self {
        let tol = T::lit(MERGE_TOL);
        let mut kept: Vec<Orbit<T>> = Vec::new();
        for o in orbits {
            let dup = kept
                .iter()
                .any(|k| k.points.iter().any(|&p| o.points.iter().any(|&q| (p - q).abs() <= tol)));
            if !dup && !o.is_empty() {
                kept.push(o);
            }
        }
        let mut offsets = Vec::new();
        let mut points = Vec::new();
        for o in &kept {
            offsets.push(points.len());
            points.extend(o.points.iter().copied());
        }
        let dim = points.len();
        let mut v = CMatrix::from_element(dim, dim, czero());
        for (o, &off) in kept.iter().zip(&offsets) {
            if o.fixed_point {
                v[(off, off)] = cone();
            }
            for k in 1..o.len() {
                v[(off + k, off + k - 1)] = cone();
            }
        }
        MatrixRep { orbits: kept, offsets, points, v }
    }

    /// Builds the orbits of several base points under the cylinder's α.
    pub fn from_cylinder(cyl: &Cylinder<T>, bases: &[T], truncation: usize) -> Result<Self> {
        let orbits = bases
            .iter()
            .map(|&x| build_orbit(cyl.alpha(), x, truncation))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::direct_sum(orbits))
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn orbits(&self) -> &[Orbit<T>] {
        &self.orbits
    }

    pub fn v(&self) -> &CMatrix<T> {
        &self.v
    }

    pub fn v_star(&self) -> CMatrix<T> {
        adjoint(&self.v)
    }

    /// `Vⁿ`, with `V*^{|n|}` for negative `n`.
    pub fn v_power(&self, n: i64) -> CMatrix<T> {
        let mut out = CMatrix::from_element(self.dim(), self.dim(), czero());
        self.for_each_step(n, |row, col, _| out[(row, col)] = cone());
        out
    }

    /// Calls `visit(row, col, x_row)` for every nonzero entry of `Vⁿ`.
    fn for_each_step(&self, n: i64, mut visit: impl FnMut(usize, usize, T)) {
        for (o, &off) in self.orbits.iter().zip(&self.offsets) {
            if o.fixed_point {
                visit(off, off, o.points[0]);
                continue;
            }
            let len = o.len() as i64;
            for k in 0..len {
                let target = k + n;
                if (0..len).contains(&target) {
                    visit(off + target as usize, off + k as usize, o.points[target as usize]);
                }
            }
        }
    }

    /// `π(f) = diag f(xₖ)`.
    pub fn pi(&self, f: &SupportedFunction<T>) -> CMatrix<T> {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(self.dim(), self.points.iter().map(|&x| f.eval(x))))
    }

    /// `Σ π(fₙ)Vⁿ`, assembled entrywise.
    pub fn represent(&self, x: &CrossedProductElement<T>) -> CMatrix<T> {
        let mut out = CMatrix::from_element(self.dim(), self.dim(), czero());
        for (&n, f) in x.terms() {
            self.for_each_step(n, |row, col, at| out[(row, col)] += f.eval(at));
        }
        out
    }

    /// Indices whose `n`-step neighbourhood reaches a truncated edge; rows
    /// and columns there are excluded from covariance residuals.
    pub fn edge_indices(&self, n: i64) -> Vec<bool> {
        let reach = n.unsigned_abs() as usize;
        let mut excluded = vec![false; self.dim()];
        for (o, &off) in self.orbits.iter().zip(&self.offsets) {
            for k in 0..o.len() {
                let near_lo = o.truncated_below && k < reach;
                let near_hi = o.truncated_above && k + reach >= o.len();
                excluded[off + k] = near_lo || near_hi;
            }
        }
        excluded
    }

    /// Indices of orbit points lying in `iv`.
    pub fn indices_in(&self, iv: &Interval<T>) -> Vec<usize> {
        (0..self.dim()).filter(|&k| iv.contains(self.points[k], T::zero())).collect()
    }

    /// Smallest `L` with `V^L = 0`, if any (searched up to `dim + 1`).
    pub fn nilpotency_index(&self) -> Option<usize> {
        (1..=self.dim() + 1).find(|&l| self.v_power(l as i64).iter().all(|c| *c == czero()))
    }
}

fn masked_max<T: Scalar>(m: &CMatrix<T>, excluded: &[bool]) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !excluded[i] && !excluded[j] {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

fn diagonal_indicator<T: Scalar>(rep: &MatrixRep<T>, iv: &Interval<T>) -> CMatrix<T> {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        rep.dim(),
        rep.points.iter().map(|&x| if iv.contains(x, T::membership_tol()) { cone() } else { czero() }),
    ))
}

/// Covariance of `(π, V)` for `n ∈ [−max_n, max_n]`:
/// (i) `Vₙπ(f)Vₙ* = π(f ∘ α⁻ⁿ)` for `f ∈ F(I₋ₙ)`;
/// (ii) `VₙVₙ*`, `Vₙ*Vₙ` are the 0/1 diagonal projectors onto `{xₖ ∈ Iₙ}`, `{xₖ ∈ I₋ₙ}`;
/// (iii) `π(pₙ) = VₙVₙ*`.
pub fn covariance_check<T: Scalar>(
    cyl: &Cylinder<T>,
    rep: &MatrixRep<T>,
    samples: &[SupportedFunction<T>],
    max_n: i64,
    tol: T,
) -> Result<Report> {
    let (mut r1, mut r2, mut r3) = (T::zero(), T::zero(), T::zero());
    let mut projector_shape = true;
    for n in -max_n..=max_n {
        let vn = rep.v_power(n);
        let vn_star = adjoint(&vn);
        let excluded = rep.edge_indices(n);
        let alpha_n = cyl.power(n);
        for f in samples {
            let f = f.restrict(&cyl.ideal(-n));
            let lhs = &vn * rep.pi(&f) * &vn_star;
            let rhs = rep.pi(&f.pullback(&alpha_n)?);
            r1 = r1.max(masked_max(&(lhs - rhs), &excluded));
        }
        let range_proj = &vn * &vn_star;
        let domain_proj = &vn_star * &vn;
        for p in [&range_proj, &domain_proj] {
            let offdiag = p.iter().enumerate().any(|(idx, c)| idx % rep.dim() != idx / rep.dim() && *c != czero());
            let zero_one = p.diagonal().iter().all(|c| *c == czero() || *c == cone());
            projector_shape &= !offdiag && zero_one;
        }
        r2 = r2.max(masked_max(&(&range_proj - diagonal_indicator(rep, &cyl.ideal(n))), &excluded));
        r2 = r2.max(masked_max(&(&domain_proj - diagonal_indicator(rep, &cyl.ideal(-n))), &excluded));
        r3 = r3.max(masked_max(&(rep.pi(&cyl.partial_identity(n)) - &range_proj), &excluded));
    }
    let tol = tol.as_f64();
    let mut report = Report::new();
    report.push(Check::residual("covariance (i): V_n π(f) V_n* = π(α_n(f))", r1.as_f64(), tol));
    report.push(Check::flag("covariance (ii): V_n V_n*, V_n* V_n are 0/1 diagonal", projector_shape));
    report.push(Check::residual("covariance (ii): projector supports are I_n, I_-n", r2.as_f64(), tol));
    report.push(Check::residual("covariance (iii): π(p_n) = V_n V_n*", r3.as_f64(), tol));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter() -> std::sync::Arc<Cylinder<f64>> {
        Cylinder::finite(0.0, 1.0, 0.25).unwrap()
    }

    #[test]
    fn generic_orbit_of_quarter_shift() {
        let cyl = quarter();
        let o = build_orbit(cyl.alpha(), 0.125, 100).unwrap();
        assert_eq!(o.points, vec![0.125, 0.375, 0.625, 0.875]);
        assert_eq!((o.n_minus, o.n_plus), (0, 3));
        assert!(!o.is_truncated());
        let commensurate = build_orbit(cyl.alpha(), 0.0, 100).unwrap();
        assert_eq!(commensurate.len(), 5);
        assert!(build_orbit(cyl.alpha(), 1.5, 10).is_err());
    }

    #[test]
    fn half_finite_orbit_is_truncated_above() {
        let cyl = Cylinder::half_finite(0.0, 0.1).unwrap();
        let o = build_orbit(cyl.alpha(), 0.05, 16).unwrap();
        assert_eq!(o.n_minus, 0);
        assert_eq!(o.len(), 16);
        assert!(o.truncated_above && !o.truncated_below);
        let inf = Cylinder::infinite(0.1).unwrap();
        let o = build_orbit(inf.alpha(), 0.05, 9).unwrap();
        assert_eq!((o.n_minus, o.n_plus), (-4, 4));
        assert!(o.truncated_above && o.truncated_below);
    }

    #[test]
    fn shift_matrix_and_projectors() {
        let cyl = quarter();
        let rep = MatrixRep::from_cylinder(&cyl, &[0.125], 100).unwrap();
        assert_eq!(rep.dim(), 4);
        let v = rep.v();
        assert_eq!(v[(1, 0)], cone());
        assert_eq!(v[(0, 1)], czero());
        let vsv = rep.v_star() * v;
        assert_eq!(vsv, CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cone(), cone(), cone(), czero()])));
        assert_eq!(rep.pi(&cyl.partial_identity(-1)), vsv);
        assert_eq!(v * rep.v_star() * v, *v);
        assert_eq!(rep.nilpotency_index(), Some(4));
        let u = crate::crossed_product::generator_u(&cyl);
        assert_eq!(rep.represent(&u), *v);
    }

    #[test]
    fn duplicate_bases_merge() {
        let cyl = quarter();
        let rep = MatrixRep::from_cylinder(&cyl, &[0.125, 0.625, 0.2], 100).unwrap();
        assert_eq!(rep.orbits().len(), 2);
        assert_eq!(rep.dim(), 8);
        assert_eq!(rep.v()[(4, 3)], czero());
    }

    #[test]
    fn fixed_point_orbit() {
        let fam = crate::BijectionFamily::new(crate::FamilyKind::Poincare, Interval::closed(0.0, 1.0)).unwrap();
        let alpha = fam.at(0.1).unwrap();
        let o = build_orbit(&alpha, 1.0, 10).unwrap();
        assert!(o.fixed_point && o.len() == 1);
        let o = build_orbit(&alpha, 0.5, 40).unwrap();
        // α lowers points, α⁻¹ pushes them up toward 1
        assert!(o.points.windows(2).all(|w| w[0] > w[1]));
        assert!(o.truncated_below && !o.truncated_above);
        assert!(o.step_residual(&alpha) <= 1e-12);
    }
}
