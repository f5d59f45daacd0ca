//! Finite unions of disjoint intervals in [0, ∞): the query language for
//! hitting probabilities and sup-measure evaluations.

use crate::error::{Error, Result};

/// An interval (left, right), optionally closed on the right.
///
/// For random closed sets generated by a stable subordinator the endpoint
/// convention is immaterial (fixed points are hit with probability 0); it
/// matters only for discrete functionals such as partial maxima over k/n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub left: f64,
    pub right: f64,
    pub right_closed: bool,
}

impl Interval {
    pub fn open(left: f64, right: f64) -> Result<Self> {
        Self::build(left, right, false)
    }

    /// (left, right]
    pub fn left_open(left: f64, right: f64) -> Result<Self> {
        Self::build(left, right, true)
    }

    fn build(left: f64, right: f64, right_closed: bool) -> Result<Self> {
        if !(left >= 0.0) || !left.is_finite() {
            return Err(Error::Interval {
                left,
                right,
                reason: "left endpoint must be finite and >= 0",
            });
        }
        if !(right > left) || !right.is_finite() {
            return Err(Error::Interval {
                left,
                right,
                reason: "requires left < right < inf",
            });
        }
        Ok(Self {
            left,
            right,
            right_closed,
        })
    }

    pub fn len(&self) -> f64 {
        self.right - self.left
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.left && (x < self.right || (self.right_closed && x == self.right))
    }
}

/// Sorted, pairwise disjoint intervals. The empty union is allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        for w in intervals.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.left < a.right {
                return Err(Error::Interval {
                    left: b.left,
                    right: b.right,
                    reason: "intervals must be sorted and disjoint",
                });
            }
        }
        Ok(Self { intervals })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Single open interval (a, b).
    pub fn open(a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            intervals: vec![Interval::open(a, b)?],
        })
    }

    /// Single interval (a, b].
    pub fn left_open(a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            intervals: vec![Interval::left_open(a, b)?],
        })
    }

    /// Open intervals from (left, right) pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let v = pairs
            .iter()
            .map(|&(a, b)| Interval::open(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.intervals.iter()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// Supremum of the union, 0 when empty.
    pub fn sup(&self) -> f64 {
        self.intervals.last().map_or(0.0, |i| i.right)
    }

    /// Shortest component length (∞ when empty).
    pub fn min_length(&self) -> f64 {
        self.intervals
            .iter()
            .map(Interval::len)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn translate(&self, r: f64) -> Result<Self> {
        let v = self
            .intervals
            .iter()
            .map(|i| Interval::build(i.left + r, i.right + r, i.right_closed))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        let v = self
            .intervals
            .iter()
            .map(|i| Interval::build(i.left * c, i.right * c, i.right_closed))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    /// True when `self` is contained in `other` (as open sets).
    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|i| {
            other
                .intervals
                .iter()
                .any(|o| o.left <= i.left && i.right <= o.right)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Interval::open(-0.1, 1.0).is_err());
        assert!(Interval::open(1.0, 1.0).is_err());
        assert!(IntervalUnion::from_pairs(&[(0.0, 1.0), (0.5, 2.0)]).is_err());
        assert!(IntervalUnion::from_pairs(&[(1.0, 2.0), (0.0, 0.5)]).is_err());
        // adjacent open intervals are disjoint
        assert!(IntervalUnion::from_pairs(&[(0.0, 1.0), (1.0, 2.0)]).is_ok());
        let closed = Interval::left_open(0.0, 1.0).unwrap();
        let next = Interval::open(1.0, 2.0).unwrap();
        assert!(IntervalUnion::new(vec![closed, next]).is_ok());
        assert!(IntervalUnion::new(vec![closed, Interval::left_open(0.5, 2.0).unwrap()]).is_err());
        assert!(IntervalUnion::empty().is_empty());
    }

    #[test]
    fn membership_and_transforms() {
        let q = IntervalUnion::from_pairs(&[(0.5, 1.0), (2.0, 3.0)]).unwrap();
        assert!(q.contains(0.75) && !q.contains(1.0) && !q.contains(1.5));
        assert_eq!(q.sup(), 3.0);
        assert_eq!(q.min_length(), 0.5);
        let t = q.translate(1.0).unwrap();
        assert_eq!(t.intervals()[0].left, 1.5);
        let s = q.scale(2.0).unwrap();
        assert_eq!(s.intervals()[1].right, 6.0);
        assert!(IntervalUnion::left_open(0.0, 1.0).unwrap().contains(1.0));
        let inner = IntervalUnion::from_pairs(&[(0.6, 0.9)]).unwrap();
        assert!(inner.is_subset_of(&q));
        assert!(!q.is_subset_of(&inner));
    }
}
