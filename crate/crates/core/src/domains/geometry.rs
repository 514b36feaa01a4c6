use crate::real::Real;

use super::{Epsilon, RegionTag};

pub(crate) fn csc<F: Real>(x: F) -> F {
    let s = x.sin();
    if s <= F::min_positive_value() {
        F::infinity()
    } else {
        s.recip()
    }
}

pub(crate) fn cot<F: Real>(x: F) -> F {
    let (s, c) = x.sin_cos();
    if s <= F::min_positive_value() {
        F::infinity()
    } else {
        c / s
    }
}

/// `1 − √(1 − a⁻⁴)` as `a⁻⁴ / (1 + √(1 − a⁻⁴))`; equals 1 for `a ≤ 1`.
pub(crate) fn stable_cusp_width<F: Real>(a: F) -> F {
    let x = (a * a).recip().powi(2);
    if x >= F::one() {
        F::one()
    } else {
        x / (F::one() + (F::one() - x).sqrt())
    }
}

/// `a² − √(a⁴ − 1)` as `1 / (a² + √(a⁴ − 1))`; equals `a²` for `a ≤ 1`.
pub(crate) fn stable_cusp_width_kna<F: Real>(a2: F) -> F {
    if a2 <= F::one() {
        a2
    } else {
        (a2 + (a2 * a2 - F::one()).sqrt()).recip()
    }
}

/// Residual minimum that maps NaN to −∞.
pub(crate) fn min_margin<F: Real>(items: &[F]) -> F {
    items.iter().fold(F::infinity(), |acc, &x| if x.is_nan() { F::neg_infinity() } else { acc.min(x) })
}

/// Trigonometric thresholds of the four thin regions at fixed `(a, θ, ε)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RegionGeometry<F> {
    pub a2: F,
    /// `sgn(θ)` with `sgn(0) = +1`.
    pub sign: F,
    /// `ε − |θ|`.
    pub theta_margin: F,
    pub csc_plus: F,
    pub csc_minus: F,
    pub cot_plus: F,
    pub cot_minus: F,
    /// `1 − √(1 − a⁻⁴)`.
    pub width: F,
}

impl<F: Real> RegionGeometry<F> {
    pub fn new(a: F, theta: F, e: &Epsilon<F>) -> Self {
        let th = theta.abs();
        let eps = e.value();
        Self {
            a2: a * a,
            sign: if theta < F::zero() { -F::one() } else { F::one() },
            theta_margin: eps - th,
            csc_plus: csc(eps + th),
            csc_minus: csc(eps - th),
            cot_plus: cot(eps + th),
            cot_minus: cot(eps - th),
            width: stable_cusp_width(a),
        }
    }

    pub fn cot_sum(&self) -> F {
        self.cot_plus + self.cot_minus
    }

    /// Residuals of the a-range conditions of each region.
    pub fn a_margins(&self, tag: RegionTag) -> (F, F) {
        let a2 = self.a2;
        match tag {
            RegionTag::ThinF1 => (F::infinity(), self.csc_plus - a2),
            RegionTag::ThinF2 => (a2 - self.csc_plus, self.csc_minus - a2),
            RegionTag::ThinF3 => (a2 - self.csc_minus, self.cot_sum() - a2),
            RegionTag::ThinF4 => (a2 - self.csc_minus, F::infinity()),
            _ => unreachable!("classical tags have no thin geometry"),
        }
    }

    /// The single t-interval of a region, as an actual `[lo, hi]` in t.
    pub fn t_window(&self, tag: RegionTag) -> (F, F) {
        let c_plus = self.cot_plus / self.a2;
        let c_minus = self.cot_minus / self.a2;
        // sgn(θ)·t ∈ [lo, hi]
        let (lo, hi) = match tag {
            RegionTag::ThinF1 => return (-F::half(), F::half()),
            RegionTag::ThinF2 => (-c_plus, self.width),
            RegionTag::ThinF3 => (-c_plus, c_minus - F::one()),
            RegionTag::ThinF4 => return (-self.width, self.width),
            _ => unreachable!("classical tags have no thin geometry"),
        };
        if self.sign > F::zero() {
            (lo, hi)
        } else {
            (-hi, -lo)
        }
    }
}
