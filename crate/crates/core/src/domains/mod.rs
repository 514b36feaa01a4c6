//! Membership in the classical fundamental set `F = F¹ ∪ F²` and the thin
//! set `F_ε = F¹_ε ∪ … ∪ F⁴_ε`, the admissible t-ranges, and reduction of a
//! group element into either set.

mod boundary;
mod geometry;
mod interval;
mod membership;
mod reduce;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Cone;
use crate::real::Real;

pub use boundary::{region_boundary_polyline, BoundaryRow, POLYLINE_A_MAX, POLYLINE_A_MIN};
pub use interval::IntervalSet;
pub use membership::{
    admissible_t_set, canonical_t_representative, classical_margins, classical_membership, classical_membership_with,
    thin_margins, thin_margins_kna, thin_membership, thin_membership_kna, thin_membership_kna_with,
    thin_membership_with,
};
pub use reduce::{reduce_to_classical, reduce_to_thin, ClassicalReduction, ThinReduction};

/// Half-angle of the cone `C_ε`.
///
/// Values in `(0, π/6)` are always accepted. `π/6` itself is only accepted
/// through [`Epsilon::allow_max`], in which case Siegel containment is not
/// guaranteed and [`Epsilon::siegel_checked`] returns `false`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Epsilon<F> {
    value: F,
}

impl<F: Real> Epsilon<F> {
    pub fn new(value: F) -> Result<Self> {
        if value > F::zero() && value < F::FRAC_PI_6() {
            Ok(Self { value })
        } else {
            Err(Error::EpsilonOutOfRange(value.to_f64().unwrap_or(f64::NAN)))
        }
    }

    /// Like [`Epsilon::new`] but also admits `ε = π/6`.
    pub fn allow_max(value: F) -> Result<Self> {
        if value > F::zero() && value <= F::FRAC_PI_6() * (F::one() + F::epsilon()) {
            Ok(Self { value: value.min(F::FRAC_PI_6()) })
        } else {
            Err(Error::EpsilonOutOfRange(value.to_f64().unwrap_or(f64::NAN)))
        }
    }

    pub fn value(&self) -> F {
        self.value
    }

    /// Whether the Siegel-set containment holds for this ε.
    pub fn siegel_checked(&self) -> bool {
        self.value < F::FRAC_PI_6()
    }

    pub fn cone(&self) -> Cone<F> {
        Cone::new(self.value).expect("epsilon already validated")
    }
}

/// Piece of `F` or `F_ε` a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RegionTag {
    ClassicalF1,
    ClassicalF2,
    ThinF1,
    ThinF2,
    ThinF3,
    ThinF4,
}

impl RegionTag {
    pub const THIN: [RegionTag; 4] = [RegionTag::ThinF1, RegionTag::ThinF2, RegionTag::ThinF3, RegionTag::ThinF4];
    pub const CLASSICAL: [RegionTag; 2] = [RegionTag::ClassicalF1, RegionTag::ClassicalF2];

    pub fn name(&self) -> &'static str {
        match self {
            RegionTag::ClassicalF1 => "ClassicalF1",
            RegionTag::ClassicalF2 => "ClassicalF2",
            RegionTag::ThinF1 => "ThinF1",
            RegionTag::ThinF2 => "ThinF2",
            RegionTag::ThinF3 => "ThinF3",
            RegionTag::ThinF4 => "ThinF4",
        }
    }
}

impl std::fmt::Display for RegionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Position of a point relative to a closed region at tolerance τ.
///
/// `distance` is the smallest residual of the region's defining
/// inequalities, each written as `g(x) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Membership<F> {
    Interior,
    Boundary { distance: F },
    Outside,
}

impl<F> Membership<F> {
    pub fn is_outside(&self) -> bool {
        matches!(self, Membership::Outside)
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, Membership::Interior)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Membership::Interior => "Interior",
            Membership::Boundary { .. } => "Boundary",
            Membership::Outside => "Outside",
        }
    }
}

/// Result of a membership query: `region` is `None` exactly when the point
/// is outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification<F> {
    pub membership: Membership<F>,
    pub region: Option<RegionTag>,
}

/// `1 − √(1 − a⁻⁴)`, the half-width of the cusp of `F⁴_ε` at `a → ∞`,
/// evaluated without cancellation.
pub fn cusp_width<F: Real>(a: F) -> Result<F> {
    if !(a > F::one()) {
        return Err(Error::InvalidArgument(format!("cusp width needs a > 1, got {a}")));
    }
    Ok(geometry::stable_cusp_width(a))
}

/// The textbook form `1 − √(1 − a⁻⁴)`; loses all precision for large `a`.
pub fn cusp_width_naive<F: Real>(a: F) -> F {
    F::one() - (F::one() - a.powi(-4)).sqrt()
}

/// The Siegel set `{|θ| < ε, |T| ≤ cot(ε + |θ|)}` at tolerance τ.
pub fn siegel_contains<F: Real>(c: &crate::linalg::KnaCoords<F>, e: &Epsilon<F>) -> bool {
    siegel_contains_with(c, e, F::BOUNDARY_TOL)
}

pub fn siegel_contains_with<F: Real>(c: &crate::linalg::KnaCoords<F>, e: &Epsilon<F>, tau: F) -> bool {
    let th = c.theta.abs();
    th < e.value() && c.big_t.abs() <= geometry::cot(e.value() + th) + tau
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::KnaCoords;
    use std::f64::consts::FRAC_PI_6;

    #[test]
    fn epsilon_domain() {
        assert!(Epsilon::new(0.1).is_ok());
        assert!(Epsilon::new(FRAC_PI_6).is_err());
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(-0.1).is_err());
        let e = Epsilon::allow_max(FRAC_PI_6).unwrap();
        assert!(!e.siegel_checked());
        assert!(Epsilon::new(0.2).unwrap().siegel_checked());
        assert!(Epsilon::allow_max(0.6).is_err());
    }

    #[test]
    fn nonempty_third_region_on_theta_grid() {
        for eps in [0.01, 0.1, 0.3, FRAC_PI_6 - 1e-6] {
            for i in 0..200 {
                let th = eps * i as f64 / 200.0;
                let (m, p) = (eps - th, eps + th);
                let csc = 1.0 / m.sin();
                let cot_sum = m.cos() / m.sin() + p.cos() / p.sin();
                assert!(csc <= cot_sum * (1.0 + 1e-12), "eps={eps} theta={th}");
            }
        }
    }

    #[test]
    fn cusp_width_values() {
        assert!(cusp_width(1.0f64).is_err());
        assert!((cusp_width(1.0 + 1e-9f64).unwrap() - 1.0).abs() < 1e-4);
        let w = cusp_width(10.0f64).unwrap();
        assert!((w - 5.000125006250391e-5).abs() < 1e-18, "{w:e}");
        assert!((w - cusp_width_naive(10.0)).abs() / w < 1e-10);
    }

    #[test]
    fn cusp_width_shrinks() {
        let mut prev = 1.0;
        for i in 1..100 {
            let w = cusp_width(1.0 + i as f64 * 0.25).unwrap();
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn siegel_examples() {
        let e = Epsilon::allow_max(FRAC_PI_6).unwrap();
        assert!(siegel_contains(&KnaCoords::new(0.0, 1.0, 0.5), &e));
        assert!(!siegel_contains(&KnaCoords::new(0.0, 1.0, 2.0), &e));
        assert!(!siegel_contains(&KnaCoords::new(0.6, 1.0, 0.0), &e));
    }
}
