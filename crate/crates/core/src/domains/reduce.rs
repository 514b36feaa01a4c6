use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{complete_basis, cone_minimal_vector, frac, gauss_reduce, UnitalLattice};
use crate::linalg::{from_kan, round_to_unimodular, KanCoords, Mat2, UnimodularInt};
use crate::real::Real;

use super::membership::{canonical_t_representative_with, classical_membership};
use super::{Epsilon, RegionTag};

/// `g·γ = g′` with `g′` in the thin fundamental set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThinReduction<F> {
    pub gprime: Mat2<F>,
    pub gamma: UnimodularInt,
    pub region: RegionTag,
    pub coords: KanCoords<F>,
    /// Largest entry of `g·γ − g′`.
    pub residual: F,
}

/// `g·γ = g′` with `g′` in the classical fundamental set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalReduction<F> {
    pub gprime: Mat2<F>,
    pub gamma: UnimodularInt,
    pub region: RegionTag,
    pub coords: KanCoords<F>,
    pub residual: F,
}

fn shear(gamma: UnimodularInt, k: i64) -> UnimodularInt {
    UnimodularInt { p: gamma.p, r: gamma.r + k * gamma.p, q: gamma.q, s: gamma.s + k * gamma.q }
}

// Checks g·γ against g′ and that γ can be recovered by rounding g⁻¹g′.
fn check_residual<F: Real>(g: &Mat2<F>, gamma: &UnimodularInt, gprime: &Mat2<F>) -> Result<F> {
    let residual = g.act(gamma).max_abs_diff(gprime);
    let tolerance = F::DET_TOL * F::one().max(g.norm());
    if !(residual <= tolerance) {
        return Err(Error::Residual {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
        });
    }
    let rounded = round_to_unimodular(&(g.unimodular_inverse() * *gprime), F::INTEGRAL_TOL)?;
    if rounded != *gamma {
        return Err(Error::Residual { residual: residual.to_f64().unwrap_or(f64::NAN), tolerance: 0.0 });
    }
    Ok(residual)
}

/// Maps `g` to its representative in `F_ε`: the first column becomes the
/// shortest lattice vector in the cone `C_ε` and `t` is moved into the
/// matching region's window.
pub fn reduce_to_thin<F: Real>(g: &Mat2<F>, e: &Epsilon<F>) -> Result<ThinReduction<F>> {
    let lattice = UnitalLattice::new(*g)?;
    let u = cone_minimal_vector(&lattice, &e.cone())?;
    let basis = complete_basis(&lattice, &u)?;
    let t_raw = basis.t_raw;
    let t0 = frac(t_raw);
    let k0 = (t0 - t_raw).round().to_i64().ok_or(Error::NonFinite)?;
    let theta = u.vec.angle();
    let a = u.vec.norm();
    let (t_star, shift, region) = canonical_t_representative_with(t0, a, theta, e, F::BOUNDARY_TOL)?;
    let coords = KanCoords::new(theta, a, t_star);
    let gprime = from_kan(&coords)?;
    let gamma = shear(basis.gamma(), k0 + shift);
    let residual = check_residual(g, &gamma, &gprime)?;
    Ok(ThinReduction { gprime, gamma, region, coords, residual })
}

/// Maps `g` to its representative in the classical set `F`: the first
/// column becomes a shortest lattice vector and `t ∈ [−½, ½]`.
pub fn reduce_to_classical<F: Real>(g: &Mat2<F>) -> Result<ClassicalReduction<F>> {
    let lattice = UnitalLattice::new(*g)?;
    let (reduced, gamma0) = gauss_reduce(&lattice)?;
    let (u, v) = (reduced.basis().u(), reduced.basis().v());
    let t_raw = v.dot(u) / u.norm_sqr();
    let k = -t_raw.round();
    let coords = KanCoords::new(u.angle(), u.norm(), t_raw + k);
    let gprime = from_kan(&coords)?;
    let gamma = shear(gamma0, k.to_i64().ok_or(Error::NonFinite)?);
    let residual = check_residual(g, &gamma, &gprime)?;
    let region = classical_membership(&coords).region.ok_or(Error::NotAdmissible {
        t: coords.t.to_f64().unwrap_or(f64::NAN),
        a: coords.a.to_f64().unwrap_or(f64::NAN),
        theta: coords.theta.to_f64().unwrap_or(f64::NAN),
    })?;
    Ok(ClassicalReduction { gprime, gamma, region, coords, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::thin_membership;
    use crate::linalg::iwasawa_kan;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn eps() -> Epsilon<f64> {
        Epsilon::new(PI / 12.0).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let r = reduce_to_thin(&Mat2::identity(), &eps()).unwrap();
        assert!(r.gamma.is_identity());
        assert_eq!(r.gprime, Mat2::identity());
        assert_eq!(r.region, RegionTag::ThinF1);
    }

    #[test]
    fn unipotent_shift_removed() {
        let r = reduce_to_thin(&Mat2::unipotent(5.0), &eps()).unwrap();
        assert_eq!(r.gamma.rows(), [[1, -5], [0, 1]]);
        assert!(r.gprime.max_abs_diff(&Mat2::identity()) < 1e-15);
    }

    #[test]
    fn quarter_turn() {
        let r = reduce_to_thin(&Mat2::rotation(FRAC_PI_2), &eps()).unwrap();
        assert_eq!(r.gamma.rows(), [[0, 1], [-1, 0]]);
        assert!(r.gprime.max_abs_diff(&Mat2::identity()) < 1e-15);
    }

    #[test]
    fn interior_point_is_idempotent() {
        let g = from_kan(&KanCoords::new(0.05, 1.7, 0.01)).unwrap();
        let c = thin_membership(&iwasawa_kan(&g).unwrap(), &eps());
        assert!(c.membership.is_interior());
        let r = reduce_to_thin(&g, &eps()).unwrap();
        assert!(r.gamma.is_identity());
        assert!(r.gprime.max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn classical_examples() {
        let r = reduce_to_classical(&Mat2::<f64>::identity()).unwrap();
        assert!(r.gamma.is_identity());
        assert_eq!(r.gprime, Mat2::identity());

        let r = reduce_to_classical(&Mat2::diagonal(3.0f64)).unwrap();
        assert!((r.coords.a - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.region, RegionTag::ClassicalF1);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(reduce_to_thin(&Mat2::new(1.0, 0.0, 0.0, 2.0), &eps()).is_err());
        assert!(reduce_to_classical(&Mat2::new(1.0, 0.0, 0.0, 2.0)).is_err());
    }
}
