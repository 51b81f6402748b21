//! Finite unions of half-open intervals `[a, b)` with exact measure arithmetic.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalSet {
    // sorted, pairwise disjoint, non-adjacent, non-empty
    parts: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The interval `[a, b)`; empty when `b <= a`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::from_intervals([(a, b)])
    }

    /// Union of arbitrary (possibly overlapping) intervals.
    pub fn from_intervals<I: IntoIterator<Item = (f64, f64)>>(it: I) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = Vec::new();
        for (a, b) in it {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::arg(format!("non-finite interval [{a}, {b})")));
            }
            if b > a {
                v.push((a, b));
            }
        }
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut parts: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match parts.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => parts.push((a, b)),
            }
        }
        Ok(IntervalSet { parts })
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.parts.partition_point(|p| p.1 <= x);
        i < self.parts.len() && self.parts[i].0 <= x
    }

    pub fn inf(&self) -> Option<f64> {
        self.parts.first().map(|p| p.0)
    }

    pub fn sup(&self) -> Option<f64> {
        self.parts.last().map(|p| p.1)
    }

    pub fn translate(&self, c: f64) -> Self {
        IntervalSet {
            parts: self.parts.iter().map(|(a, b)| (a + c, b + c)).collect(),
        }
    }

    /// Image under `x -> s x` for `s > 0`.
    pub fn dilate(&self, s: f64) -> Self {
        assert!(s > 0.0, "dilation factor must be positive");
        IntervalSet {
            parts: self.parts.iter().map(|(a, b)| (a * s, b * s)).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        IntervalSet::from_intervals(self.parts.iter().chain(&other.parts).copied())
            .expect("finite inputs")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.parts.len() && j < other.parts.len() {
            let (a1, b1) = self.parts[i];
            let (a2, b2) = other.parts[j];
            let a = a1.max(a2);
            let b = b1.min(b2);
            if b > a {
                out.push((a, b));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { parts: out }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }
}
