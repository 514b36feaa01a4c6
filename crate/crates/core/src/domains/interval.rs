use serde::Serialize;

use crate::real::Real;

/// Finite union of closed subintervals of `[0, 1]`, kept sorted and
/// pairwise disjoint (touching intervals are merged).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSet<F> {
    intervals: Vec<(F, F)>,
}

impl<F: Real> IntervalSet<F> {
    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    pub fn unit() -> Self {
        Self { intervals: vec![(F::zero(), F::one())] }
    }

    /// Clips to `[0, 1]`, drops empty pieces, sorts and merges.
    pub fn from_intervals(pieces: impl IntoIterator<Item = (F, F)>) -> Self {
        let mut v: Vec<(F, F)> = pieces
            .into_iter()
            .map(|(lo, hi)| (lo.max(F::zero()), hi.min(F::one())))
            .filter(|(lo, hi)| lo <= hi)
            .collect();
        v.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut out: Vec<(F, F)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(F, F)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: F) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= t && t <= hi)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for &(a0, a1) in &self.intervals {
            for &(b0, b1) in &other.intervals {
                let (lo, hi) = (a0.max(b0), a1.min(b1));
                if lo <= hi {
                    out.push((lo, hi));
                }
            }
        }
        Self::from_intervals(out)
    }

    /// Image under `t ↦ 1 − t`.
    pub fn reflect(&self) -> Self {
        Self::from_intervals(self.intervals.iter().map(|&(lo, hi)| (F::one() - hi, F::one() - lo)))
    }

    /// Image under `t ↦ t + delta (mod 1)`, split back into `[0, 1]`.
    pub fn shift_mod1(&self, delta: F) -> Self {
        let d = delta - delta.floor();
        let mut out = Vec::new();
        for &(lo, hi) in &self.intervals {
            let (lo, hi) = (lo + d, hi + d);
            if hi <= F::one() {
                out.push((lo, hi));
            } else if lo >= F::one() {
                out.push((lo - F::one(), hi - F::one()));
            } else {
                out.push((lo, F::one()));
                out.push((F::zero(), hi - F::one()));
            }
        }
        Self::from_intervals(out)
    }

    pub fn total_length(&self) -> F {
        self.intervals.iter().fold(F::zero(), |acc, &(lo, hi)| acc + (hi - lo))
    }

    /// Distance from `t` to the nearest interval endpoint.
    pub fn distance_to_endpoint(&self, t: F) -> F {
        self.intervals.iter().flat_map(|&(lo, hi)| [lo, hi]).fold(F::infinity(), |acc, x| acc.min((t - x).abs()))
    }
}
