use std::fmt;

use serde::{Deserialize, Serialize};

use super::PartialBijection;
use crate::scalar::Scalar;

/// `ε_{n₊} ε_{n₋} α^m` in the inverse semigroup generated by one partial
/// bijection, where `ε_k = α^k α^{−k}` is the identity on `I_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemigroupElement {
    pub n_plus: i64,
    pub n_minus: i64,
    pub m: i64,
}

impl SemigroupElement {
    pub const IDENTITY: Self = SemigroupElement { n_plus: 0, n_minus: 0, m: 0 };

    /// `α^m` itself.
    pub fn power(m: i64) -> Self {
        SemigroupElement { n_plus: m.max(0), n_minus: m.min(0), m }
    }

    /// The idempotent `ε_k`.
    pub fn idempotent(k: i64) -> Self {
        SemigroupElement { n_plus: k.max(0), n_minus: k.min(0), m: 0 }
    }

    /// Canonical form of the word `α^{g₁} ∘ … ∘ α^{g_k}`.
    ///
    /// Using `α^g α^h = ε_g α^{g+h}` repeatedly the word collapses to
    /// `ε_{S₁} ⋯ ε_{S_k} α^{S_k}` with left partial sums `S_j`; nested
    /// domains leave only the extreme indices.
    pub fn canonicalize(word: &[i64]) -> Self {
        let mut s = 0i64;
        let (mut hi, mut lo) = (0i64, 0i64);
        for &g in word {
            s += g;
            hi = hi.max(s);
            lo = lo.min(s);
        }
        SemigroupElement { n_plus: hi, n_minus: lo, m: s }
    }

    pub fn product(self, rhs: Self) -> Self {
        SemigroupElement {
            n_plus: self.n_plus.max(self.m + rhs.n_plus),
            n_minus: self.n_minus.min(self.m + rhs.n_minus),
            m: self.m + rhs.m,
        }
    }

    pub fn star(self) -> Self {
        SemigroupElement { n_plus: self.n_plus - self.m, n_minus: self.n_minus - self.m, m: -self.m }
    }

    pub fn is_idempotent(self) -> bool {
        self.m == 0
    }

    /// Domain idempotent `s* s`.
    pub fn source(self) -> Self {
        self.star().product(self)
    }

    /// Range idempotent `s s*`.
    pub fn target(self) -> Self {
        self.product(self.star())
    }

    /// Realizes the element as a partial bijection of the interval.
    pub fn realize<T: Scalar>(self, alpha: &PartialBijection<T>) -> PartialBijection<T> {
        let carrier = alpha.carrier();
        let e_plus = PartialBijection::identity_on(carrier, alpha.power(self.n_plus).range());
        let e_minus = PartialBijection::identity_on(carrier, alpha.power(self.n_minus).range());
        e_plus.compose(&e_minus).compose(&alpha.power(self.m))
    }
}

impl fmt::Display for SemigroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}e{}a{}", self.n_plus, self.n_minus, self.m)
    }
}

/// Direct composition of a word, rightmost factor applied first.
pub fn compose_word<T: Scalar>(word: &[i64], alpha: &PartialBijection<T>) -> PartialBijection<T> {
    word.iter()
        .fold(PartialBijection::identity(alpha.carrier()), |acc, &g| acc.compose(&alpha.power(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::partial_bijection::restricted_shift_action;

    #[test]
    fn small_words() {
        assert_eq!(SemigroupElement::canonicalize(&[1, -1]), SemigroupElement { n_plus: 1, n_minus: 0, m: 0 });
        assert_eq!(SemigroupElement::canonicalize(&[3]), SemigroupElement { n_plus: 3, n_minus: 0, m: 3 });
        assert_eq!(SemigroupElement::canonicalize(&[-1, 1]), SemigroupElement::idempotent(-1));
    }

    #[test]
    fn product_matches_concatenation() {
        let words: [&[i64]; 5] = [&[1], &[2, -3, 1], &[-1, 1], &[2, 2, -1], &[-2]];
        for a in words {
            for b in words {
                let cat: Vec<i64> = a.iter().chain(b).copied().collect();
                let lhs = SemigroupElement::canonicalize(a).product(SemigroupElement::canonicalize(b));
                assert_eq!(lhs, SemigroupElement::canonicalize(&cat));
            }
            let s = SemigroupElement::canonicalize(a);
            let rev: Vec<i64> = a.iter().rev().map(|g| -g).collect();
            assert_eq!(s.star(), SemigroupElement::canonicalize(&rev));
            assert_eq!(s.product(s.star()).product(s), s);
        }
    }

    #[test]
    fn realization_matches_composition() {
        let alpha = restricted_shift_action(Interval::closed(0.0, 1.0), 0.25, 1);
        for word in [vec![2, -3, 1], vec![1, -1], vec![-2, 1, 1], vec![3, -1, -1]] {
            let s = SemigroupElement::canonicalize(&word);
            assert!(s.realize(&alpha).agrees_with(&compose_word(&word, &alpha), 101, 1e-15), "{word:?}");
        }
    }
}
