use std::collections::BTreeSet;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::algebra::{FiniteAction, FiniteAlgebraElement};
use super::coefficient::Coefficient;
use crate::partial_bijection::SemigroupElement;

/// The point representation on `ℓ²` of a union of `θ`-orbits:
/// `π(f)|y⟩ = f(y)|y⟩` and `V_s|y⟩ = |θ_s(y)⟩`.
#[derive(Clone, Debug)]
pub struct FiniteCovariantRep {
    action: Arc<FiniteAction>,
    points: Vec<usize>,
    index: Vec<Option<usize>>,
}

impl FiniteCovariantRep {
    /// Closes `bases` under `θ` and `θ⁻¹`.
    pub fn new(action: &Arc<FiniteAction>, bases: &[usize]) -> Self {
        let theta = action.theta();
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = bases.iter().copied().filter(|&b| b < action.size()).collect();
        while let Some(y) = stack.pop() {
            if seen.insert(y) {
                stack.extend(theta.apply(y));
                stack.extend(theta.apply_inverse(y));
            }
        }
        let points: Vec<usize> = seen.into_iter().collect();
        let mut index = vec![None; action.size()];
        for (i, &y) in points.iter().enumerate() {
            index[y] = Some(i);
        }
        FiniteCovariantRep { action: action.clone(), points, index }
    }

    /// `ℓ²({0, …, M−1})`.
    pub fn regular(action: &Arc<FiniteAction>) -> Self {
        Self::new(action, &(0..action.size()).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn action(&self) -> &Arc<FiniteAction> {
        &self.action
    }

    pub fn v<C: Coefficient>(&self, s: SemigroupElement) -> DMatrix<C> {
        let r = self.action.realize(s);
        let mut m = DMatrix::from_element(self.dim(), self.dim(), C::zero());
        for (j, &y) in self.points.iter().enumerate() {
            if let Some(i) = r.apply(y).and_then(|t| self.index[t]) {
                m[(i, j)] = C::one();
            }
        }
        m
    }

    pub fn pi<C: Coefficient>(&self, f: &[C]) -> DMatrix<C> {
        let mut m = DMatrix::from_element(self.dim(), self.dim(), C::zero());
        for (i, &y) in self.points.iter().enumerate() {
            m[(i, i)] = f[y].clone();
        }
        m
    }

    /// `(π × V)(x) = Σ π(x(s)) V_s`.
    pub fn represent<C: Coefficient>(&self, x: &FiniteAlgebraElement<C>) -> DMatrix<C> {
        let mut m = DMatrix::from_element(self.dim(), self.dim(), C::zero());
        for (&s, a) in x.terms() {
            m += self.pi(a) * self.v::<C>(s);
        }
        m
    }
}

pub fn adjoint<C: Coefficient>(m: &DMatrix<C>) -> DMatrix<C> {
    DMatrix::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

/// `max |a_ij − b_ij|`.
pub fn matrix_residual<C: Coefficient>(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x.clone() - y.clone()).magnitude()).fold(0.0, f64::max)
}

/// Entries are exactly 0 or 1.
pub fn is_zero_one<C: Coefficient>(m: &DMatrix<C>) -> bool {
    m.iter().all(|x| x.is_zero() || x.is_one())
}
