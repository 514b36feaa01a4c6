use serde::Serialize;

use crate::domains::Epsilon;
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, UnitalLattice};
use crate::linalg::Vec2;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Coefficients range over `[−coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
    /// Multiplier on `‖u‖` for the admissibility ball.
    pub ball_radius_factor: f64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { coeff_bound: 200, ball_radius_factor: 1.0, tolerance: 1e-9 }
    }
}

impl OracleConfig {
    pub fn with_bound(coeff_bound: i64) -> Self {
        Self { coeff_bound, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.coeff_bound < 1 {
            return Err(Error::InvalidArgument(format!("coeff_bound must be >= 1, got {}", self.coeff_bound)));
        }
        Ok(())
    }
}

fn in_open_cone<F: Real>(x: F, y: F, tan_eps: F) -> bool {
    x > F::zero() && y.abs() < tan_eps * x
}

fn c<F: Real>(k: i64) -> F {
    F::from_i64(k).unwrap()
}

/// Shortest lattice point in the cone by a plain double loop over the
/// coefficient box. Fails if the box cannot be shown to contain every point
/// of the resulting norm.
pub fn oracle_min_in_cone<F: Real>(
    l: &UnitalLattice<F>,
    e: &Epsilon<F>,
    cfg: &OracleConfig,
) -> Result<LatticePoint<F>> {
    cfg.validate()?;
    let b = l.basis();
    let (u, v) = (Vec2::new(b.m11, b.m21), Vec2::new(b.m12, b.m22));
    let tan_eps = e.value().tan();
    let n = cfg.coeff_bound;
    let mut best: Option<(F, i64, i64, Vec2<F>)> = None;
    for p in -n..=n {
        for q in -n..=n {
            let x = c::<F>(p) * u.x + c::<F>(q) * v.x;
            let y = c::<F>(p) * u.y + c::<F>(q) * v.y;
            if in_open_cone(x, y, tan_eps) {
                let n2 = x * x + y * y;
                if best.as_ref().is_none_or(|(m, ..)| n2 < *m) {
                    best = Some((n2, p, q, Vec2::new(x, y)));
                }
            }
        }
    }
    let (n2, p, q, w) = best.ok_or(Error::OracleBoundExhausted(n))?;
    // Any w with ‖w‖ ≤ R has |q| ≤ ‖u‖R and |p| ≤ ‖v‖R (unit determinant).
    let r = n2.sqrt();
    let needed = (u.norm().max(v.norm()) * r).ceil();
    if needed > c(n) {
        return Err(Error::OracleBoundExhausted(n));
    }
    Ok(LatticePoint::new(p, q, w))
}

/// Decides by enumeration whether `a(cos θ, sin θ)` is a shortest cone
/// vector of the lattice spanned by it and `u^⊥ + t·u`.
pub fn oracle_admissible_t<F: Real>(a: F, theta: F, e: &Epsilon<F>, t: F, cfg: &OracleConfig) -> Result<bool> {
    cfg.validate()?;
    if !(a > F::zero()) || theta.abs() >= e.value() || t < F::zero() || t > F::one() {
        return Err(Error::InvalidArgument(format!("oracle_admissible_t: a={a}, theta={theta}, t={t}")));
    }
    let (s, co) = theta.sin_cos();
    let u = Vec2::new(a * co, a * s);
    let a2 = a * a;
    let v = Vec2::new(-u.y / a2 + t * u.x, u.x / a2 + t * u.y);
    let tol = F::lit(cfg.tolerance);
    let radius = a * F::lit(cfg.ball_radius_factor) * (F::one() + tol);
    let shorter = a * (F::one() - tol);
    let tan_eps = e.value().tan();

    let n = cfg.coeff_bound;
    // |q| ≤ ‖u‖·R, |p| ≤ ‖v‖·R inside the ball.
    let q_need = (u.norm() * radius).ceil();
    let p_need = (v.norm() * radius).ceil();
    if q_need > c(n) || p_need > c(n) {
        return Err(Error::OracleBoundExhausted(n));
    }

    // Row q: ‖p·u + q·v‖² ≤ R² is a quadratic in p.
    let (uu, uv, vv, r2) = (u.dot(u), u.dot(v), v.dot(v), radius * radius);
    for q in -n..=n {
        let qf = c::<F>(q);
        let disc = (qf * uv) * (qf * uv) - uu * (qf * qf * vv - r2);
        if disc < F::zero() {
            continue;
        }
        let root = disc.sqrt();
        let p_lo = ((-qf * uv - root) / uu).floor().max(c(-n));
        let p_hi = ((-qf * uv + root) / uu).ceil().min(c(n));
        let (p_lo, p_hi) = (p_lo.to_i64().unwrap(), p_hi.to_i64().unwrap());
        for p in p_lo..=p_hi {
            let pf = c::<F>(p);
            let x = pf * u.x + qf * v.x;
            let y = pf * u.y + qf * v.y;
            if in_open_cone(x, y, tan_eps) && (x * x + y * y).sqrt() < shorter {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat2;
    use std::f64::consts::{FRAC_PI_6, PI};

    #[test]
    fn standard_lattice() {
        let e = Epsilon::new(FRAC_PI_6 - 1e-3).unwrap();
        let w = oracle_min_in_cone(&UnitalLattice::standard(), &e, &OracleConfig::with_bound(20)).unwrap();
        assert_eq!((w.p, w.q), (1, 0));
        let rot = UnitalLattice::new(Mat2::new(0.0, -1.0, 1.0, 0.0)).unwrap();
        let w = oracle_min_in_cone(&rot, &e, &OracleConfig::with_bound(20)).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn admissibility_examples() {
        let e = Epsilon::allow_max(FRAC_PI_6).unwrap();
        let cfg = OracleConfig::default();
        for t in [0.0, 0.3, 0.5, 0.77, 1.0] {
            assert!(oracle_admissible_t(0.9, 0.0, &e, t, &cfg).unwrap());
        }
        assert!(!oracle_admissible_t(2.0, 0.0, &e, 0.5, &cfg).unwrap());
        assert!(oracle_admissible_t(2.0, 0.0, &e, 0.99, &cfg).unwrap());
    }

    #[test]
    fn rejects_bad_arguments() {
        let e = Epsilon::new(PI / 12.0).unwrap();
        let cfg = OracleConfig::default();
        assert!(oracle_admissible_t(1.0, 0.3, &e, 0.5, &cfg).is_err());
        assert!(oracle_admissible_t(1.0, 0.0, &e, 1.5, &cfg).is_err());
        assert!(oracle_min_in_cone(&UnitalLattice::standard(), &e, &OracleConfig::with_bound(0)).is_err());
        assert!(matches!(
            oracle_admissible_t(30.0, 0.0, &e, 0.5, &OracleConfig::with_bound(5)),
            Err(Error::OracleBoundExhausted(5))
        ));
    }
}
