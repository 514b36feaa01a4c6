//! 2×2 real and integer matrices and the two Iwasawa parametrizations of
//! SL(2,ℝ).
//!
//! A group element `g = (u, v)` is stored by entries; its columns `u` and `v`
//! are the generators of the lattice it represents. The KAN coordinates write
//! `g = k(θ)·diag(a, a⁻¹)·n(t)` and the KNA coordinates write
//! `g = k(θ)·n(T)·diag(a, a⁻¹)`, related by `T = a²t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// A vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec2<F> {
    pub x: F,
    pub y: F,
}

impl<F: Real> Vec2<F> {
    pub fn new(x: F, y: F) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> F {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sqr(self) -> F {
        self.dot(self)
    }

    pub fn norm(self) -> F {
        self.x.hypot(self.y)
    }

    /// Oriented area `det(self, other)`.
    pub fn cross(self, other: Self) -> F {
        self.x * other.y - self.y * other.x
    }

    /// Polar angle in `(−π, π]`.
    pub fn angle(self) -> F {
        self.y.atan2(self.x)
    }

    pub fn scale(self, k: F) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<F: Real> Add for Vec2<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<F: Real> Sub for Vec2<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<F: Real> Neg for Vec2<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Real 2×2 matrix `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2<F> {
    pub m11: F,
    pub m12: F,
    pub m21: F,
    pub m22: F,
}

impl<F: Real> Mat2<F> {
    pub fn new(m11: F, m12: F, m21: F, m22: F) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::new(F::one(), F::zero(), F::zero(), F::one())
    }

    pub fn from_columns(u: Vec2<F>, v: Vec2<F>) -> Self {
        Self::new(u.x, v.x, u.y, v.y)
    }

    /// Rotation `k(θ)`.
    pub fn rotation(theta: F) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    /// `diag(a, a⁻¹)`.
    pub fn diagonal(a: F) -> Self {
        Self::new(a, F::zero(), F::zero(), a.recip())
    }

    /// Upper unipotent `n(t)`.
    pub fn unipotent(t: F) -> Self {
        Self::new(F::one(), t, F::zero(), F::one())
    }

    pub fn u(&self) -> Vec2<F> {
        Vec2::new(self.m11, self.m21)
    }

    pub fn v(&self) -> Vec2<F> {
        Vec2::new(self.m12, self.m22)
    }

    pub fn det(&self) -> F {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn is_finite(&self) -> bool {
        self.m11.is_finite() && self.m12.is_finite() && self.m21.is_finite() && self.m22.is_finite()
    }

    /// Inverse, assuming unit determinant (adjugate).
    pub fn unimodular_inverse(&self) -> Self {
        Self::new(self.m22, -self.m12, -self.m21, self.m11)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> F {
        (self.m11 * self.m11 + self.m12 * self.m12 + self.m21 * self.m21 + self.m22 * self.m22).sqrt()
    }

    pub fn entries(&self) -> [F; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        self.entries().iter().zip(other.entries().iter()).fold(F::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }

    /// `self · γ` for an integer matrix acting on the columns.
    pub fn act(&self, gamma: &UnimodularInt) -> Self {
        *self * gamma.to_mat2::<F>()
    }
}

impl<F: Real> Mul for Mat2<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }
}

/// `(θ, a, t)` with `g = k(θ)·diag(a, a⁻¹)·n(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KanCoords<F> {
    pub theta: F,
    pub a: F,
    pub t: F,
}

impl<F: Real> KanCoords<F> {
    pub fn new(theta: F, a: F, t: F) -> Self {
        Self { theta, a, t }
    }

    pub fn to_kna(self) -> KnaCoords<F> {
        KnaCoords::new(self.theta, self.a, self.a * self.a * self.t)
    }
}

/// `(θ, a, T)` with `g = k(θ)·n(T)·diag(a, a⁻¹)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnaCoords<F> {
    pub theta: F,
    pub a: F,
    #[serde(rename = "T")]
    pub big_t: F,
}

impl<F: Real> KnaCoords<F> {
    pub fn new(theta: F, a: F, big_t: F) -> Self {
        Self { theta, a, big_t }
    }

    pub fn to_kan(self) -> KanCoords<F> {
        KanCoords::new(self.theta, self.a, self.big_t / (self.a * self.a))
    }
}

/// Integer matrix `[[p, r], [q, s]]` of determinant 1, acting on generator
/// pairs from the right: `(u, v) ↦ (pu + qv, ru + sv)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UnimodularInt {
    pub p: i64,
    pub r: i64,
    pub q: i64,
    pub s: i64,
}

impl UnimodularInt {
    pub const IDENTITY: Self = Self { p: 1, r: 0, q: 0, s: 1 };

    /// Builds `[[p, r], [q, s]]`, rejecting determinants other than 1.
    pub fn new(p: i64, r: i64, q: i64, s: i64) -> Result<Self> {
        let det = p as i128 * s as i128 - q as i128 * r as i128;
        if det != 1 {
            return Err(Error::IntegerDeterminant(det));
        }
        Ok(Self { p, r, q, s })
    }

    pub fn det(&self) -> i128 {
        self.p as i128 * self.s as i128 - self.q as i128 * self.r as i128
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.p, self.r], [self.q, self.s]]
    }

    pub fn to_mat2<F: Real>(&self) -> Mat2<F> {
        let f = |x: i64| F::from_i64(x).expect("integer representable");
        Mat2::new(f(self.p), f(self.r), f(self.q), f(self.s))
    }
}

impl Neg for UnimodularInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self { p: -self.p, r: -self.r, q: -self.q, s: -self.s }
    }
}

impl Mul for UnimodularInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            p: self.p * o.p + self.r * o.q,
            r: self.p * o.r + self.r * o.s,
            q: self.q * o.p + self.s * o.q,
            s: self.q * o.r + self.s * o.s,
        }
    }
}

impl fmt::Display for UnimodularInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.r, self.q, self.s)
    }
}

pub fn det<F: Real>(g: &Mat2<F>) -> F {
    g.det()
}

/// The vector `(−u₂, u₁)/‖u‖²`: orthogonal to `u`, of length `‖u‖⁻¹`, and
/// completing `u` to a basis of unit determinant.
pub fn perp<F: Real>(u: Vec2<F>) -> Result<Vec2<F>> {
    let n2 = u.norm_sqr();
    if n2 == F::zero() || !n2.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(Vec2::new(-u.y / n2, u.x / n2))
}

fn check_unimodular<F: Real>(g: &Mat2<F>, tol: F) -> Result<()> {
    if !g.is_finite() {
        return Err(Error::NonFinite);
    }
    let d = g.det();
    if (d - F::one()).abs() > tol {
        return Err(Error::NotUnimodular { det: d.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(())
}

// θ and a are computed once here so KAN and KNA agree bit for bit.
fn rotation_and_scale<F: Real>(u: Vec2<F>) -> (F, F) {
    (u.angle(), u.norm())
}

pub fn iwasawa_kan<F: Real>(g: &Mat2<F>) -> Result<KanCoords<F>> {
    iwasawa_kan_with(g, F::DET_TOL)
}

pub fn iwasawa_kan_with<F: Real>(g: &Mat2<F>, det_tol: F) -> Result<KanCoords<F>> {
    check_unimodular(g, det_tol)?;
    let (u, v) = (g.u(), g.v());
    let (theta, a) = rotation_and_scale(u);
    Ok(KanCoords::new(theta, a, v.dot(u) / u.dot(u)))
}

pub fn iwasawa_kna<F: Real>(g: &Mat2<F>) -> Result<KnaCoords<F>> {
    iwasawa_kna_with(g, F::DET_TOL)
}

pub fn iwasawa_kna_with<F: Real>(g: &Mat2<F>, det_tol: F) -> Result<KnaCoords<F>> {
    check_unimodular(g, det_tol)?;
    let (u, v) = (g.u(), g.v());
    let (theta, a) = rotation_and_scale(u);
    Ok(KnaCoords::new(theta, a, v.dot(u)))
}

pub fn from_kan<F: Real>(c: &KanCoords<F>) -> Result<Mat2<F>> {
    if !(c.a > F::zero()) || !c.a.is_finite() {
        return Err(Error::NonPositiveScale(c.a.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(Mat2::rotation(c.theta) * Mat2::diagonal(c.a) * Mat2::unipotent(c.t))
}

pub fn from_kna<F: Real>(c: &KnaCoords<F>) -> Result<Mat2<F>> {
    if !(c.a > F::zero()) || !c.a.is_finite() {
        return Err(Error::NonPositiveScale(c.a.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(Mat2::rotation(c.theta) * Mat2::unipotent(c.big_t) * Mat2::diagonal(c.a))
}

/// Rounds every entry to the nearest integer and checks the result lies in
/// SL(2,ℤ).
pub fn round_to_unimodular<F: Real>(m: &Mat2<F>, tol: F) -> Result<UnimodularInt> {
    let mut out = [0i64; 4];
    for (slot, x) in out.iter_mut().zip(m.entries()) {
        let nearest = x.round();
        let distance = (x - nearest).abs();
        if !(distance <= tol) {
            return Err(Error::NotIntegral {
                entry: x.to_f64().unwrap_or(f64::NAN),
                distance: distance.to_f64().unwrap_or(f64::NAN),
            });
        }
        *slot = nearest.to_i64().ok_or(Error::NonFinite)?;
    }
    let [p, r, q, s] = out;
    UnimodularInt::new(p, r, q, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn det_examples() {
        assert_eq!(det(&Mat2::<f64>::identity()), 1.0);
        assert_eq!(det(&Mat2::new(2.0, 0.0, 0.0, 0.5)), 1.0);
        assert_eq!(det(&Mat2::new(3.0, 2.0, 4.0, 3.0)), 1.0);
    }

    #[test]
    fn perp_examples() {
        assert_eq!(perp(Vec2::new(1.0, 0.0)).unwrap(), Vec2::new(0.0, 1.0));
        assert_eq!(perp(Vec2::new(0.0, 2.0)).unwrap(), Vec2::new(-0.5, 0.0));
        let w = perp(Vec2::new(3.0f64, 4.0)).unwrap();
        assert!((w.x + 4.0 / 25.0).abs() < 1e-16 && (w.y - 3.0 / 25.0).abs() < 1e-16);
        let u = Vec2::new(3.0f64, 4.0);
        assert!(u.dot(w).abs() < 1e-15);
        assert!((u.cross(w) - 1.0).abs() < 1e-15);
        assert_eq!(perp(Vec2::<f64>::new(0.0, 0.0)), Err(Error::ZeroVector));
    }

    #[test]
    fn kan_examples() {
        let c = iwasawa_kan(&Mat2::<f64>::identity()).unwrap();
        assert_eq!((c.theta, c.a, c.t), (0.0, 1.0, 0.0));

        let rot = Mat2::from_columns(Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0));
        let c = iwasawa_kan(&rot).unwrap();
        assert!((c.theta - FRAC_PI_2).abs() < 1e-15);
        assert_eq!((c.a, c.t), (1.0, 0.0));

        let g = Mat2::new(3.0f64, 2.0, 4.0, 3.0);
        let c = iwasawa_kan(&g).unwrap();
        assert!((c.theta - 4f64.atan2(3.0)).abs() < 1e-15);
        assert!((c.a - 5.0).abs() < 1e-15);
        assert!((c.t - 18.0 / 25.0).abs() < 1e-15);
        let back = from_kan(&c).unwrap();
        assert!(back.max_abs_diff(&g) < 1e-12 * g.norm());
    }

    #[test]
    fn kna_examples() {
        let c = iwasawa_kna(&Mat2::<f64>::identity()).unwrap();
        assert_eq!((c.theta, c.a, c.big_t), (0.0, 1.0, 0.0));
        let g = Mat2::new(3.0f64, 2.0, 4.0, 3.0);
        let c = iwasawa_kna(&g).unwrap();
        assert!((c.big_t - 18.0).abs() < 1e-14);
        let k = iwasawa_kan(&g).unwrap();
        assert_eq!(k.theta, c.theta);
        assert_eq!(k.a, c.a);
        assert!((c.big_t - k.a * k.a * k.t).abs() < 1e-12 * c.big_t.abs());
        assert!(from_kna(&c).unwrap().max_abs_diff(&g) < 1e-12 * g.norm());
    }

    #[test]
    fn non_unimodular_rejected_with_det() {
        let err = iwasawa_kan(&Mat2::new(1.0, 0.0, 0.0, 2.0)).unwrap_err();
        assert_eq!(err, Error::NotUnimodular { det: 2.0 });
        assert!(iwasawa_kna(&Mat2::new(f64::NAN, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn from_kan_closed_form() {
        assert_eq!(from_kan(&KanCoords::new(0.0, 1.0, 0.0)).unwrap(), Mat2::identity());
        let g = from_kan(&KanCoords::new(0.0, 2.5, -0.75)).unwrap();
        assert_eq!(g, Mat2::new(2.5, 2.5 * -0.75, 0.0, 0.4));
        assert!(from_kan(&KanCoords::new(0.0, 0.0, 1.0)).is_err());
        assert!(from_kna(&KnaCoords::new(0.0, -1.0, 1.0)).is_err());
    }

    #[test]
    fn rounding() {
        let m = Mat2::new(1.0 + 1e-9, -1e-9, 1e-9, 1.0 - 1e-9);
        assert_eq!(round_to_unimodular(&m, 1e-6).unwrap(), UnimodularInt::IDENTITY);
        let m = Mat2::new(0.0, 1.0, -1.0, 0.0);
        let g = round_to_unimodular(&m, 1e-6).unwrap();
        assert_eq!(g.rows(), [[0, 1], [-1, 0]]);
        assert_eq!(g.det(), 1);
        let bad = Mat2::new(1.5, 0.0, 0.0, 1.0);
        assert!(matches!(round_to_unimodular(&bad, 1e-6), Err(Error::NotIntegral { .. })));
        let det2 = Mat2::new(2.0, 0.0, 0.0, 1.0);
        assert_eq!(round_to_unimodular(&det2, 1e-6), Err(Error::IntegerDeterminant(2)));
    }

    #[test]
    fn integer_algebra() {
        let g = UnimodularInt::new(2, 1, 1, 1).unwrap();
        let h = UnimodularInt::new(1, -5, 0, 1).unwrap();
        assert_eq!((g * h).det(), 1);
        assert_eq!((-UnimodularInt::IDENTITY).det(), 1);
        let m: Mat2<f64> = g.to_mat2();
        assert_eq!(m.act(&h), m * h.to_mat2());
        assert!(UnimodularInt::new(2, 0, 0, 1).is_err());
    }

    #[test]
    fn single_precision_round_trip() {
        let c = KanCoords::new(0.3f32, 1.7, -0.4);
        let g = from_kan(&c).unwrap();
        let back = iwasawa_kan(&g).unwrap();
        assert!((back.theta - c.theta).abs() < 1e-5);
        assert!((back.a - c.a).abs() < 1e-5);
        assert!((back.t - c.t).abs() < 1e-5);
    }
}
