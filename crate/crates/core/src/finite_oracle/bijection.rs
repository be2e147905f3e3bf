use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::partial_bijection::SemigroupElement;

/// A partial injection of `{0, …, M−1}` stored as forward and inverse tables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinitePartialBijection {
    map: Vec<Option<usize>>,
    inv: Vec<Option<usize>>,
}

impl FinitePartialBijection {
    /// Builds from a table `k ↦ map[k]`; fails unless injective and in range.
    pub fn from_map(map: Vec<Option<usize>>) -> Result<Self> {
        let size = map.len();
        let mut inv = vec![None; size];
        for (k, &t) in map.iter().enumerate() {
            if let Some(t) = t {
                if t >= size {
                    return Err(Error::Precondition(format!("{k} ↦ {t} leaves {{0..{size}}}")));
                }
                if let Some(other) = inv[t] {
                    return Err(Error::Precondition(format!("{other} and {k} both map to {t}")));
                }
                inv[t] = Some(k);
            }
        }
        Ok(FinitePartialBijection { map, inv })
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = vec![None; size];
        for (k, t) in pairs {
            if k >= size {
                return Err(Error::Precondition(format!("{k} is outside {{0..{size}}}")));
            }
            if map[k].replace(t).is_some() {
                return Err(Error::Precondition(format!("{k} is mapped twice")));
            }
        }
        Self::from_map(map)
    }

    pub fn identity(size: usize) -> Self {
        Self::identity_on(size, 0..size)
    }

    pub fn empty(size: usize) -> Self {
        FinitePartialBijection { map: vec![None; size], inv: vec![None; size] }
    }

    pub fn identity_on(size: usize, set: impl IntoIterator<Item = usize>) -> Self {
        let mut map = vec![None; size];
        for k in set {
            map[k] = Some(k);
        }
        FinitePartialBijection { inv: map.clone(), map }
    }

    /// `k ↦ k + 1` on `{0, …, M−2}`.
    pub fn shift(size: usize) -> Self {
        let map = (0..size).map(|k| (k + 1 < size).then_some(k + 1)).collect();
        Self::from_map(map).expect("the shift is injective")
    }

    /// A uniformly random domain and an injective assignment on it.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Self {
        let mut targets: Vec<usize> = (0..size).collect();
        for i in (1..size).rev() {
            targets.swap(i, rng.gen_range(0..=i));
        }
        let map = (0..size).map(|k| rng.gen_bool(0.7).then_some(targets[k])).collect();
        Self::from_map(map).expect("a permutation restricted is injective")
    }

    /// Every partial injection of an `M`-point set (`M ≤ 5` is sensible).
    pub fn enumerate_all(size: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut map = vec![None; size];
        let mut used = vec![false; size];
        fn rec(k: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, out: &mut Vec<FinitePartialBijection>) {
            if k == map.len() {
                out.push(FinitePartialBijection::from_map(map.clone()).unwrap());
                return;
            }
            map[k] = None;
            rec(k + 1, map, used, out);
            for t in 0..map.len() {
                if !used[t] {
                    used[t] = true;
                    map[k] = Some(t);
                    rec(k + 1, map, used, out);
                    used[t] = false;
                }
            }
            map[k] = None;
        }
        rec(0, &mut map, &mut used, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, k: usize) -> Option<usize> {
        self.map.get(k).copied().flatten()
    }

    pub fn apply_inverse(&self, k: usize) -> Option<usize> {
        self.inv.get(k).copied().flatten()
    }

    pub fn in_domain(&self, k: usize) -> bool {
        self.apply(k).is_some()
    }

    pub fn in_range(&self, k: usize) -> bool {
        self.apply_inverse(k).is_some()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.size()).filter(|&k| self.in_domain(k)).collect()
    }

    pub fn range(&self) -> Vec<usize> {
        (0..self.size()).filter(|&k| self.in_range(k)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.iter().enumerate().all(|(k, t)| t.is_none_or(|t| t == k))
    }

    /// `self ∘ inner` on the largest domain where it makes sense.
    pub fn compose(&self, inner: &Self) -> Self {
        assert_eq!(self.size(), inner.size(), "composing maps of different sets");
        let map = inner.map.iter().map(|t| t.and_then(|t| self.apply(t))).collect();
        Self::from_map(map).expect("composition of injections is injective")
    }

    pub fn inverse(&self) -> Self {
        FinitePartialBijection { map: self.inv.clone(), inv: self.map.clone() }
    }

    pub fn power(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(self.size()), |acc, _| acc.compose(&base))
    }

    /// `θ^{g₁} ∘ … ∘ θ^{g_k}`.
    pub fn compose_word(&self, word: &[i64]) -> Self {
        word.iter().fold(Self::identity(self.size()), |acc, &g| acc.compose(&self.power(g)))
    }

    /// `ε_{n₊} ε_{n₋} θ^m` with `ε_k` the identity on the range of `θ^k`.
    pub fn realize(&self, s: SemigroupElement) -> Self {
        let e = |k: i64| Self::identity_on(self.size(), self.power(k).range());
        e(s.n_plus).compose(&e(s.n_minus)).compose(&self.power(s.m))
    }
}

impl fmt::Display for FinitePartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.domain().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}→{}", self.map[k].unwrap())?;
        }
        f.write_str("}")
    }
}

/// All words of length `1..=max_len` over `letters`.
pub fn words(letters: &[i64], max_len: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |&g| w.iter().copied().chain([g]).collect()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_powers() {
        let b = FinitePartialBijection::shift(5);
        assert_eq!(b.domain(), vec![0, 1, 2, 3]);
        assert_eq!(b.power(2).domain(), vec![0, 1, 2]);
        assert_eq!(b.power(0), FinitePartialBijection::identity(5));
        assert!(b.power(5).is_empty());
        assert_eq!(b.power(-1), b.inverse());
    }

    #[test]
    fn rejects_non_injective() {
        assert!(FinitePartialBijection::from_map(vec![Some(1), Some(1)]).is_err());
        assert!(FinitePartialBijection::from_pairs(2, [(0, 2)]).is_err());
    }

    #[test]
    fn symmetric_inverse_monoid_sizes() {
        // Σ_k C(n,k)² k!
        let sizes: Vec<usize> = (0..=4).map(|n| FinitePartialBijection::enumerate_all(n).len()).collect();
        assert_eq!(sizes, vec![1, 2, 7, 34, 209]);
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(words(&[1, -1], 3).len(), 2 + 4 + 8);
    }
}
