//! Finite unions of open intervals on the line and their pairwise interaction.

use alloc::vec::Vec;

use crate::{check_order, Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Sorted union of disjoint open intervals; endpoints may be infinite.
///
/// Intervals that touch are merged, so the representation is canonical.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalUnion {
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn line() -> Self {
        IntervalUnion {
            parts: alloc::vec![(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    /// Builds the union of arbitrary intervals; empty and NaN ones are dropped.
    pub fn new(raw: &[(f64, f64)]) -> Self {
        let mut v: Vec<(f64, f64)> = raw.iter().copied().filter(|(a, b)| a < b).collect();
        v.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut parts: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match parts.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => parts.push((a, b)),
            }
        }
        IntervalUnion { parts }
    }

    /// Like [`IntervalUnion::new`] but rejects overlapping or unsorted input.
    pub fn strict(raw: &[(f64, f64)]) -> Result<Self> {
        for w in raw.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::Domain("intervals must be sorted and disjoint"));
            }
        }
        if raw.iter().any(|(a, b)| !(a < b)) {
            return Err(Error::Domain("interval with a >= b"));
        }
        Ok(Self::new(raw))
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.parts.iter().all(|(a, b)| a.is_finite() && b.is_finite())
    }

    pub fn measure(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|&(a, b)| a < x && x < b)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut left = f64::NEG_INFINITY;
        for &(a, b) in &self.parts {
            if a > left {
                out.push((left, a));
            }
            left = b;
        }
        if left < f64::INFINITY {
            out.push((left, f64::INFINITY));
        }
        IntervalUnion { parts: out }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a1, b1) = self.parts[i];
            let (a2, b2) = other.parts[j];
            let a = a1.max(a2);
            let b = b1.min(b2);
            if a < b {
                out.push((a, b));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion { parts: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.parts.clone();
        all.extend_from_slice(&other.parts);
        Self::new(&all)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Restriction to (lo, hi).
    pub fn clip(&self, lo: f64, hi: f64) -> Self {
        self.intersect(&IntervalUnion::new(&[(lo, hi)]))
    }
}

/// Integral of |x - y|^{-1-s} over A x B for open intervals A left of B.
fn pair_left_right(a: (f64, f64), b: (f64, f64), s: f64) -> Result<f64> {
    let (a1, a2) = a;
    let (b1, b2) = b;
    if a1 == f64::NEG_INFINITY && b2 == f64::INFINITY {
        return Err(Error::DivergentInteraction);
    }
    let d = |x: f64| x.powf(1.0 - s);
    // d(b1-a1) - d(b1-a2) - d(b2-a1) + d(b2-a2); when one endpoint is
    // infinite the two terms containing it cancel in the limit (1 - s < 1).
    let mut total = -d(b1 - a2);
    match (a1.is_finite(), b2.is_finite()) {
        (true, true) => total += d(b1 - a1) - d(b2 - a1) + d(b2 - a2),
        (true, false) => total += d(b1 - a1),
        (false, true) => total += d(b2 - a2),
        (false, false) => unreachable!(),
    }
    Ok(total / (s * (1.0 - s)))
}

/// I(A, B) = int_A int_B |x - y|^{-1-s} dy dx for disjoint interval unions.
///
/// Intervals may share endpoints. Overlap of positive length, or a pair
/// reaching -inf on one side and +inf on the other, diverges.
pub fn interaction_1d(a: &IntervalUnion, b: &IntervalUnion, s: f64) -> Result<f64> {
    check_order(s)?;
    let mut total = 0.0;
    for &p in a.parts() {
        for &q in b.parts() {
            total += if p.1 <= q.0 {
                pair_left_right(p, q, s)?
            } else if q.1 <= p.0 {
                pair_left_right(q, p, s)?
            } else {
                return Err(Error::DivergentInteraction);
            };
        }
    }
    Ok(total)
}
