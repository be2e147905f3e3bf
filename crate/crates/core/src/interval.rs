//! Real intervals with independently open, closed or infinite endpoints.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of interior points used by the monotonicity probe.
pub const MONOTONE_SAMPLES: usize = 33;

/// A (possibly empty, possibly unbounded) real interval.
///
/// Emptiness is a flag; an empty interval never carries meaningful endpoints.
/// Infinite endpoints are always open and a degenerate interval `[a,a]` is
/// always closed.
#[derive(Clone, Copy, Debug)]
pub struct Interval<T> {
    lo: T,
    hi: T,
    lo_closed: bool,
    hi_closed: bool,
    empty: bool,
}

impl<T: Scalar> Interval<T> {
    /// Normalizing constructor. Inverted or NaN bounds give the empty interval.
    pub fn new(lo: T, hi: T, lo_closed: bool, hi_closed: bool) -> Self {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == T::infinity() || hi == T::neg_infinity() {
            return Self::empty();
        }
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        if lo == hi && !(lo_closed && hi_closed) {
            return Self::empty();
        }
        Interval { lo, hi, lo_closed, hi_closed, empty: false }
    }

    pub fn empty() -> Self {
        Interval { lo: T::zero(), hi: T::zero(), lo_closed: false, hi_closed: false, empty: true }
    }

    pub fn closed(lo: T, hi: T) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: T, hi: T) -> Self {
        Self::new(lo, hi, false, false)
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: T, hi: T) -> Self {
        Self::new(lo, hi, true, false)
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: T, hi: T) -> Self {
        Self::new(lo, hi, false, true)
    }

    pub fn point(x: T) -> Self {
        Self::closed(x, x)
    }

    pub fn real_line() -> Self {
        Self::open(T::neg_infinity(), T::infinity())
    }

    /// `[a, ∞)`
    pub fn at_least(a: T) -> Self {
        Self::new(a, T::infinity(), true, false)
    }

    /// `(-∞, b]`
    pub fn at_most(b: T) -> Self {
        Self::new(T::neg_infinity(), b, false, true)
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_bounded(&self) -> bool {
        self.empty || (self.lo.is_finite() && self.hi.is_finite())
    }

    pub fn is_degenerate(&self) -> bool {
        !self.empty && self.lo == self.hi
    }

    /// Lebesgue length; zero for empty or degenerate intervals.
    pub fn length(&self) -> T {
        if self.empty {
            T::zero()
        } else {
            self.hi - self.lo
        }
    }

    /// Membership with closed endpoints widened by `tol` and open endpoints
    /// narrowed by `tol`. Exact when `tol == 0`.
    pub fn contains(&self, x: T, tol: T) -> bool {
        if self.empty || x.is_nan() {
            return false;
        }
        let above = if self.lo_closed { x >= self.lo - tol } else { x > self.lo + tol };
        let below = if self.hi_closed { x <= self.hi + tol } else { x < self.hi - tol };
        above && below
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.empty || other.empty {
            return Self::empty();
        }
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo) {
            Some(Ordering::Greater) => (self.lo, self.lo_closed),
            Some(Ordering::Less) => (other.lo, other.lo_closed),
            _ => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Less) => (self.hi, self.hi_closed),
            Some(Ordering::Greater) => (other.hi, other.hi_closed),
            _ => (self.hi, self.hi_closed && other.hi_closed),
        };
        Self::new(lo, hi, lo_closed, hi_closed)
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        if self.empty {
            return *other;
        }
        if other.empty {
            return *self;
        }
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo) {
            Some(Ordering::Less) => (self.lo, self.lo_closed),
            Some(Ordering::Greater) => (other.lo, other.lo_closed),
            _ => (self.lo, self.lo_closed || other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Greater) => (self.hi, self.hi_closed),
            Some(Ordering::Less) => (other.hi, other.hi_closed),
            _ => (self.hi, self.hi_closed || other.hi_closed),
        };
        Self::new(lo, hi, lo_closed, hi_closed)
    }

    /// `self \ other` as at most two intervals, left piece first.
    pub fn difference(&self, other: &Self) -> Vec<Self> {
        if self.empty {
            return Vec::new();
        }
        if self.intersect(other).is_empty() {
            return vec![*self];
        }
        let left = Self::new(self.lo, other.lo, self.lo_closed, !other.lo_closed).intersect(self);
        let right = Self::new(other.hi, self.hi, !other.hi_closed, self.hi_closed).intersect(self);
        [left, right].into_iter().filter(|iv| !iv.is_empty()).collect()
    }

    /// `self ⊆ other`. With `tol > 0` endpoints are compared numerically only,
    /// ignoring closedness inside the tolerance band.
    pub fn is_subset(&self, other: &Self, tol: T) -> bool {
        if self.empty {
            return true;
        }
        if other.empty {
            return false;
        }
        if tol > T::zero() {
            return self.lo >= other.lo - tol && self.hi <= other.hi + tol;
        }
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }

    /// Endpoint-wise comparison within `tol`, including closedness flags.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        if self.empty || other.empty {
            return self.empty == other.empty;
        }
        let close = |a: T, b: T| a == b || (a - b).abs() <= tol;
        close(self.lo, other.lo)
            && close(self.hi, other.hi)
            && self.lo_closed == other.lo_closed
            && self.hi_closed == other.hi_closed
    }

    /// Finite window used for sampling: the interval itself when bounded,
    /// otherwise a window of width at least 16 around the finite part.
    pub fn sample_window(&self) -> Option<(T, T)> {
        if self.empty {
            return None;
        }
        let eight = T::lit(8.0);
        let sixteen = T::lit(16.0);
        let lo = if self.lo.is_finite() {
            self.lo
        } else if self.hi.is_finite() {
            (self.hi - sixteen).min(-eight)
        } else {
            -eight
        };
        let hi = if self.hi.is_finite() { self.hi } else { eight.max(lo + sixteen) };
        Some((lo, hi))
    }

    /// `n` uniformly spaced points of the sample window, endpoints included.
    pub fn grid(&self, n: usize) -> Vec<T> {
        let Some((lo, hi)) = self.sample_window() else {
            return Vec::new();
        };
        uniform(lo, hi, n)
    }

    /// Image under a continuous strictly monotone map.
    ///
    /// `limits` supplies the map's values at `-∞` and `+∞` when the interval
    /// is unbounded; when absent the map is evaluated there directly.
    pub fn image_monotone<F>(&self, map: F, limits: (Option<T>, Option<T>)) -> Result<Self>
    where
        F: Fn(T) -> T,
    {
        if self.empty {
            return Ok(Self::empty());
        }
        let at = |x: T, lim: Option<T>| -> Result<T> {
            let y = if x.is_infinite() { lim.unwrap_or_else(|| map(x)) } else { map(x) };
            if y.is_nan() {
                Err(Error::UndefinedMap { interval: self.to_string(), at: x.to_string() })
            } else {
                Ok(y)
            }
        };
        let ylo = at(self.lo, limits.0)?;
        let yhi = at(self.hi, limits.1)?;
        if self.is_degenerate() {
            return Ok(Self::point(ylo));
        }
        let increasing = yhi >= ylo;
        check_monotone(self, &map, increasing)?;
        Ok(if increasing {
            Self::new(ylo, yhi, self.lo_closed, self.hi_closed)
        } else {
            Self::new(yhi, ylo, self.hi_closed, self.lo_closed)
        })
    }
}

/// Uniform grid on `[lo, hi]` with both endpoints.
pub fn uniform<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![(lo + hi) / T::lit(2.0)],
        _ => {
            let step = (hi - lo) / T::from_usize(n - 1).unwrap();
            (0..n)
                .map(|k| if k == n - 1 { hi } else { lo + step * T::from_usize(k).unwrap() })
                .collect()
        }
    }
}

fn check_monotone<T: Scalar, F: Fn(T) -> T>(iv: &Interval<T>, map: &F, increasing: bool) -> Result<()> {
    let Some((lo, hi)) = iv.sample_window() else {
        return Ok(());
    };
    // interior points only: endpoints may be excluded or at infinity
    let pts = uniform(lo, hi, MONOTONE_SAMPLES + 2);
    let vals: Vec<T> = pts[1..pts.len() - 1].iter().map(|&x| map(x)).collect();
    for (k, w) in vals.windows(2).enumerate() {
        let ordered = if increasing { w[1] >= w[0] } else { w[1] <= w[0] };
        if !ordered || w[0].is_nan() || w[1].is_nan() {
            return Err(Error::NonMonotone {
                interval: iv.to_string(),
                detail: format!("f({}) = {}, f({}) = {}", pts[k + 1], w[0], pts[k + 2], w[1]),
            });
        }
    }
    Ok(())
}

impl<T: Scalar> PartialEq for Interval<T> {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, T::zero())
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return f.write_str("empty");
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

fn parse_endpoint<T: Scalar>(s: &str) -> Option<T> {
    let s = s.trim();
    match s {
        "inf" | "+inf" | "infinity" | "+infinity" | "∞" | "+∞" => return Some(T::infinity()),
        "-inf" | "-infinity" | "-∞" => return Some(T::neg_infinity()),
        _ => {}
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: T = num.trim().parse().ok()?;
        let den: T = den.trim().parse().ok()?;
        return Some(num / den);
    }
    s.parse().ok()
}

impl<T: Scalar> FromStr for Interval<T> {
    type Err = Error;

    /// Accepts `[a,b]`, `[a,b)`, `(a,b]`, `(a,b)`, `empty`; endpoints may be
    /// `inf`/`-inf` or simple fractions like `1/4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::IntervalSyntax(s.to_string());
        let t = s.trim();
        if t.eq_ignore_ascii_case("empty") || t == "∅" {
            return Ok(Self::empty());
        }
        let lo_closed = match t.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_closed = match t.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let body = &t[1..t.len() - 1];
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        let lo = parse_endpoint::<T>(a).ok_or_else(bad)?;
        let hi = parse_endpoint::<T>(b).ok_or_else(bad)?;
        if (lo_closed && lo.is_infinite()) || (hi_closed && hi.is_infinite()) {
            return Err(bad());
        }
        Ok(Self::new(lo, hi, lo_closed, hi_closed))
    }
}

impl<T: Scalar> Serialize for Interval<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Interval<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
