//! Unital lattices in ℝ², their shortest vectors, and the shortest vector
//! inside an open cone about the positive x-axis.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, UnimodularInt, Vec2};
use crate::real::Real;

/// Relative slack used when comparing lattice-vector norms.
const NORM_REL_TOL: f64 = 1e-12;

/// Largest coefficient box probed while looking for a first cone point.
pub const MAX_CONE_BOX: i64 = 1 << 30;

/// Lattice `ℤu + ℤv` spanned by the columns of a unit-determinant basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitalLattice<F> {
    basis: Mat2<F>,
}

impl<F: Real> UnitalLattice<F> {
    pub fn new(basis: Mat2<F>) -> Result<Self> {
        Self::with_tolerance(basis, F::DET_TOL)
    }

    pub fn with_tolerance(basis: Mat2<F>, det_tol: F) -> Result<Self> {
        if !basis.is_finite() {
            return Err(Error::NonFinite);
        }
        let d = basis.det();
        if (d - F::one()).abs() > det_tol {
            return Err(Error::NotUnimodular { det: d.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Self { basis })
    }

    /// ℤ².
    pub fn standard() -> Self {
        Self { basis: Mat2::identity() }
    }

    /// Lattice generated by an equilateral triangle of area ½, with one
    /// minimal vector on the positive x-axis.
    pub fn hexagonal() -> Self {
        let a = F::lit(4.0 / 3.0).powf(F::lit(0.25));
        Self { basis: Mat2::new(a, a * F::half(), F::zero(), a.recip()) }
    }

    pub fn basis(&self) -> &Mat2<F> {
        &self.basis
    }

    /// Point `p·u + q·v` of this lattice.
    pub fn point(&self, p: i64, q: i64) -> LatticePoint<F> {
        LatticePoint::new(p, q, combine(&self.basis, p, q))
    }

    /// Mirror image across the x-axis, re-oriented to keep det = +1.
    pub fn reflect_x(&self) -> Self {
        let b = &self.basis;
        Self { basis: Mat2::new(b.m11, -b.m12, -b.m21, b.m22) }
    }
}

/// A lattice point together with its coefficients in the lattice's stored
/// basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticePoint<F> {
    pub p: i64,
    pub q: i64,
    pub vec: Vec2<F>,
}

impl<F: Real> LatticePoint<F> {
    pub fn new(p: i64, q: i64, vec: Vec2<F>) -> Self {
        Self { p, q, vec }
    }

    pub fn norm(&self) -> F {
        self.vec.norm()
    }

    pub fn is_primitive(&self) -> bool {
        self.p.gcd(&self.q) == 1
    }
}

/// Open cone `{(x, y) : x > 0, |y/x| < tan ε}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cone<F> {
    eps: F,
}

impl<F: Real> Cone<F> {
    /// Accepts half-angles in `(0, π/6]`.
    pub fn new(eps: F) -> Result<Self> {
        let max = F::FRAC_PI_6() * (F::one() + F::epsilon());
        if !(eps > F::zero() && eps <= max) {
            return Err(Error::EpsilonOutOfRange(eps.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> F {
        self.eps
    }

    pub fn contains(&self, w: Vec2<F>) -> bool {
        cone_contains(self, w)
    }
}

pub fn cone_contains<F: Real>(c: &Cone<F>, w: Vec2<F>) -> bool {
    w.x > F::zero() && (w.y / w.x).abs() < c.eps.tan()
}

fn combine<F: Real>(b: &Mat2<F>, p: i64, q: i64) -> Vec2<F> {
    let (pf, qf) = (F::from_i64(p).unwrap(), F::from_i64(q).unwrap());
    b.u().scale(pf) + b.v().scale(qf)
}

fn int<F: Real>(x: F) -> i64 {
    x.to_i64().unwrap_or(if x > F::zero() { i64::MAX } else { i64::MIN })
}

/// Lagrange–Gauss reduction. Returns the reduced lattice (same lattice,
/// basis `(u*, v*)` with `‖u*‖ = Φ(L)` and `|⟨v*,u*⟩| ≤ ½‖u*‖²`) and the
/// `γ` with `basis·γ = reduced basis`.
pub fn gauss_reduce<F: Real>(l: &UnitalLattice<F>) -> Result<(UnitalLattice<F>, UnimodularInt)> {
    const SWAP: UnimodularInt = UnimodularInt { p: 0, r: -1, q: 1, s: 0 };
    let mut b1 = l.basis.u();
    let mut b2 = l.basis.v();
    if b1.norm_sqr() == F::zero() || b2.norm_sqr() == F::zero() || b1.cross(b2).abs() < F::epsilon() {
        return Err(Error::DegenerateBasis);
    }
    let mut gamma = UnimodularInt::IDENTITY;
    if b2.norm_sqr() < b1.norm_sqr() {
        (b1, b2) = (b2, -b1);
        gamma = gamma * SWAP;
    }
    for _ in 0..10_000 {
        let mu = (b2.dot(b1) / b1.norm_sqr()).round();
        if !mu.is_finite() {
            return Err(Error::DegenerateBasis);
        }
        let m = int(mu);
        if m != 0 {
            b2 = b2 - b1.scale(mu);
            gamma = gamma * UnimodularInt { p: 1, r: -m, q: 0, s: 1 };
        }
        if b2.norm_sqr() < b1.norm_sqr() {
            (b1, b2) = (b2, -b1);
            gamma = gamma * SWAP;
        } else {
            let reduced = UnitalLattice { basis: l.basis.act(&gamma) };
            return Ok((reduced, gamma));
        }
    }
    Err(Error::DegenerateBasis)
}

/// Minimal norm of a nonzero lattice point.
pub fn phi<F: Real>(l: &UnitalLattice<F>) -> Result<F> {
    let (red, _) = gauss_reduce(l)?;
    Ok(red.basis.u().norm())
}

fn coeff<F: Real>(x: i64) -> F {
    F::from_i64(x).unwrap()
}

/// Calls `visit(p', q', w)` for every point `w = p'u* + q'v*` of norm at
/// most `radius`, in reduced coordinates.
fn for_each_in_ball<F: Real>(reduced: &Mat2<F>, radius: F, mut visit: impl FnMut(i64, i64, Vec2<F>)) {
    let (u, v) = (reduced.u(), reduced.v());
    let det = reduced.det().abs();
    let q_max = int((radius * u.norm() / det).floor()) + 1;
    let p_max = int((radius * v.norm() / det).floor()) + 1;
    let r2 = radius * radius;
    for q in -q_max..=q_max {
        let qv = v.scale(coeff(q));
        for p in -p_max..=p_max {
            let w = u.scale(coeff(p)) + qv;
            if w.norm_sqr() <= r2 {
                visit(p, q, w);
            }
        }
    }
}

// Reduced coordinates back to the stored basis: (p, q)ᵀ = γ·(p', q')ᵀ.
fn to_original(gamma: &UnimodularInt, p: i64, q: i64) -> (i64, i64) {
    (gamma.p * p + gamma.r * q, gamma.q * p + gamma.s * q)
}

/// Every nonzero lattice point of norm `Φ(L)` (up to a relative 1e-12),
/// sorted by angle. Closed under negation.
pub fn shortest_vectors<F: Real>(l: &UnitalLattice<F>) -> Result<Vec<LatticePoint<F>>> {
    let (red, gamma) = gauss_reduce(l)?;
    let radius = red.basis.u().norm() * (F::one() + F::lit(NORM_REL_TOL));
    let mut out = Vec::new();
    for_each_in_ball(&red.basis, radius, |p, q, w| {
        if p != 0 || q != 0 {
            let (p0, q0) = to_original(&gamma, p, q);
            out.push(LatticePoint::new(p0, q0, w));
        }
    });
    out.sort_by(|x, y| x.vec.angle().partial_cmp(&y.vec.angle()).unwrap());
    Ok(out)
}

// Candidate ordering: ‖w‖ first, then the documented tie-break.
fn better<F: Real>(cand: &LatticePoint<F>, best: &LatticePoint<F>) -> bool {
    let (nc, nb) = (cand.vec.norm_sqr(), best.vec.norm_sqr());
    let slack = F::lit(2.0 * NORM_REL_TOL) * nb;
    if nc < nb - slack {
        return true;
    }
    if nc > nb + slack {
        return false;
    }
    let (tc, tb) = (cand.vec.angle(), best.vec.angle());
    let key = |t: F, p: &LatticePoint<F>| (t.abs(), if t >= F::zero() { 0 } else { 1 }, p.q, p.p);
    let (kc, kb) = (key(tc, cand), key(tb, best));
    match kc.0.partial_cmp(&kb.0) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Greater) => false,
        _ => (kc.1, kc.2, kc.3) < (kb.1, kb.2, kb.3),
    }
}

// Range of real p' for which p'u* + q'v* lies strictly inside both
// half-planes bounding the cone.
fn cone_row_range<F: Real>(u: Vec2<F>, v: Vec2<F>, q: F, eps: F) -> Option<(F, F)> {
    let (s, c) = eps.sin_cos();
    let normals = [Vec2::new(s, c), Vec2::new(s, -c)];
    let (mut lo, mut hi) = (F::neg_infinity(), F::infinity());
    for n in normals {
        let alpha = u.dot(n);
        let beta = q * v.dot(n);
        if alpha > F::zero() {
            lo = lo.max(-beta / alpha);
        } else if alpha < F::zero() {
            hi = hi.min(-beta / alpha);
        } else if !(beta > F::zero()) {
            return None;
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// The shortest lattice vector inside the open cone, `Φ_ε(L)` being its
/// norm. Ties (a measure-zero set of lattices) are broken by smallest `|θ|`,
/// then positive `θ`, then smallest `q`, then smallest `p`.
pub fn cone_minimal_vector<F: Real>(l: &UnitalLattice<F>, c: &Cone<F>) -> Result<LatticePoint<F>> {
    let (red, gamma) = gauss_reduce(l)?;
    let (u, v) = (red.basis.u(), red.basis.v());

    // Doubling box search for some cone point; its norm bounds the answer.
    let mut bound = 1i64;
    let r0 = loop {
        let mut found: Option<F> = None;
        for q in -bound..=bound {
            let Some((lo, hi)) = cone_row_range(u, v, coeff(q), c.eps) else { continue };
            let p_lo = (int(lo.max(coeff(-bound)).ceil()) - 1).max(-bound);
            let p_hi = (int(hi.min(coeff(bound)).floor()) + 1).min(bound);
            for p in p_lo..=p_hi {
                let w = u.scale(coeff(p)) + v.scale(coeff(q));
                if cone_contains(c, w) {
                    let n = w.norm();
                    found = Some(found.map_or(n, |m| m.min(n)));
                }
            }
        }
        if let Some(r) = found {
            break r;
        }
        if bound >= MAX_CONE_BOX {
            return Err(Error::ConeSearchExhausted(MAX_CONE_BOX));
        }
        bound *= 2;
    };

    let mut best: Option<LatticePoint<F>> = None;
    for_each_in_ball(&red.basis, r0 * (F::one() + F::lit(NORM_REL_TOL)), |p, q, w| {
        if cone_contains(c, w) {
            let (p0, q0) = to_original(&gamma, p, q);
            let cand = LatticePoint::new(p0, q0, w);
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
    });
    best.ok_or(Error::ConeSearchExhausted(bound))
}

pub fn phi_eps<F: Real>(l: &UnitalLattice<F>, c: &Cone<F>) -> Result<F> {
    Ok(cone_minimal_vector(l, c)?.norm())
}

/// A primitive lattice vector `u` completed to a positively oriented basis
/// `(u, v)`, `v = r·b₁ + s·b₂` in terms of the stored basis `(b₁, b₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletedBasis<F> {
    pub u: LatticePoint<F>,
    pub r: i64,
    pub s: i64,
    pub v: Vec2<F>,
    /// `⟨v,u⟩/⟨u,u⟩` before reduction mod 1.
    pub t_raw: F,
}

impl<F: Real> CompletedBasis<F> {
    /// The change of basis `[[p, r], [q, s]]` from the stored basis.
    pub fn gamma(&self) -> UnimodularInt {
        UnimodularInt { p: self.u.p, r: self.r, q: self.u.q, s: self.s }
    }
}

pub fn complete_basis<F: Real>(l: &UnitalLattice<F>, u: &LatticePoint<F>) -> Result<CompletedBasis<F>> {
    let e = u.p.extended_gcd(&u.q);
    let (g, x, y) = if e.gcd < 0 { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
    if g != 1 {
        return Err(Error::NotPrimitive { p: u.p, q: u.q });
    }
    // p·s − q·r = p·x + q·y = 1
    let (r, s) = (-y, x);
    let uvec = combine(&l.basis, u.p, u.q);
    let v = combine(&l.basis, r, s);
    Ok(CompletedBasis { u: LatticePoint::new(u.p, u.q, uvec), r, s, v, t_raw: v.dot(uvec) / uvec.norm_sqr() })
}

/// The unipotent parameter of the lattice relative to its primitive vector
/// `u`, reduced into `[0, 1)`.
pub fn t_parameter<F: Real>(l: &UnitalLattice<F>, u: &LatticePoint<F>) -> Result<F> {
    Ok(frac(complete_basis(l, u)?.t_raw))
}

pub(crate) fn frac<F: Real>(t: F) -> F {
    let f = t - t.floor();
    if f >= F::one() {
        F::zero()
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_kan, KanCoords};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

    fn lat(m11: f64, m12: f64, m21: f64, m22: f64) -> UnitalLattice<f64> {
        UnitalLattice::new(Mat2::new(m11, m12, m21, m22)).unwrap()
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(UnitalLattice::new(Mat2::new(1.0, 0.0, 0.0, 2.0)).is_err());
        assert!(UnitalLattice::new(Mat2::new(f64::INFINITY, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn gauss_examples() {
        let (red, g) = gauss_reduce(&UnitalLattice::<f64>::standard()).unwrap();
        assert_eq!(*red.basis(), Mat2::identity());
        assert!(g.is_identity());

        let (red, g) = gauss_reduce(&lat(1.0, 5.0, 0.0, 1.0)).unwrap();
        assert_eq!(*red.basis(), Mat2::identity());
        assert_eq!(g.rows(), [[1, -5], [0, 1]]);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&UnitalLattice::<f64>::standard()).unwrap(), 1.0);
        let hex = phi(&UnitalLattice::<f64>::hexagonal()).unwrap();
        assert!((hex - (4.0f64 / 3.0).powf(0.25)).abs() < 1e-15);
        assert!((phi(&lat(10.0, 0.0, 0.0, 0.1)).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn shortest_vectors_examples() {
        let z2 = shortest_vectors(&UnitalLattice::<f64>::standard()).unwrap();
        let mut coeffs: Vec<_> = z2.iter().map(|w| (w.p, w.q)).collect();
        coeffs.sort();
        assert_eq!(coeffs, vec![(-1, 0), (0, -1), (0, 1), (1, 0)]);

        let hex = shortest_vectors(&UnitalLattice::<f64>::hexagonal()).unwrap();
        assert_eq!(hex.len(), 6);

        let skinny = lat(0.5, 0.3, 0.0, 2.0);
        let sv = shortest_vectors(&skinny).unwrap();
        assert_eq!(sv.len(), 2);
        assert_eq!(sv[0].vec, -sv[1].vec);
    }

    #[test]
    fn cone_examples() {
        let c = Cone::new(FRAC_PI_6).unwrap();
        assert!(cone_contains(&c, Vec2::new(1.0, 0.0)));
        assert!(!cone_contains(&c, Vec2::new(1.0, FRAC_PI_6.tan())));
        assert!(!cone_contains(&c, Vec2::new(-1.0, 0.0)));
        assert!(Cone::new(0.0).is_err());
        assert!(Cone::new(0.6).is_err());
    }

    #[test]
    fn cone_minimal_examples() {
        let c = Cone::new(FRAC_PI_6).unwrap();
        let z = cone_minimal_vector(&UnitalLattice::standard(), &c).unwrap();
        assert_eq!((z.p, z.q, z.vec), (1, 0, Vec2::new(1.0, 0.0)));
        assert_eq!(phi_eps(&UnitalLattice::standard(), &c).unwrap(), 1.0);

        let rotated = lat(0.0, -1.0, 1.0, 0.0);
        let w = cone_minimal_vector(&rotated, &c).unwrap();
        assert_eq!((w.p, w.q), (0, -1));
        assert!((w.vec.x - 1.0).abs() < 1e-15 && w.vec.y.abs() < 1e-15);

        let hex = phi_eps(&UnitalLattice::hexagonal(), &c).unwrap();
        assert!((hex - (4.0f64 / 3.0).powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn cone_minimal_far_from_short_basis() {
        // Shortest vector points straight up; the cone needs a long vector.
        let g = from_kan(&KanCoords::new(FRAC_PI_2, 0.3, 0.37)).unwrap();
        let l = UnitalLattice::new(g).unwrap();
        let c = Cone::new(PI / 24.0).unwrap();
        let w = cone_minimal_vector(&l, &c).unwrap();
        assert!(c.contains(w.vec));
        assert!(w.is_primitive());
        assert!(w.norm() >= phi(&l).unwrap());
    }

    #[test]
    fn t_parameter_examples() {
        let z = UnitalLattice::<f64>::standard();
        assert_eq!(t_parameter(&z, &z.point(1, 0)).unwrap(), 0.0);
        let sheared = lat(1.0, 0.5, 0.0, 1.0);
        assert_eq!(t_parameter(&sheared, &sheared.point(1, 0)).unwrap(), 0.5);
        assert_eq!(t_parameter(&z, &z.point(2, 0)), Err(Error::NotPrimitive { p: 2, q: 0 }));
    }

    #[test]
    fn completion_is_positively_oriented() {
        let l = lat(2.0, 1.0, 1.0, 1.0);
        for (p, q) in [(3, -2), (-5, 7), (0, -1), (1, 1)] {
            let cb = complete_basis(&l, &l.point(p, q)).unwrap();
            assert_eq!(cb.gamma().det(), 1);
            assert!((cb.u.vec.cross(cb.v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn frac_stays_below_one() {
        assert_eq!(frac(-1e-20f64), 0.0);
        assert_eq!(frac(2.25f64), 0.25);
    }
}
