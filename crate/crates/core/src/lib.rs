//! Thin fundamental sets for SL(2,ℤ) acting on SL(2,ℝ).
//!
//! A group element `g = (u, v)` is read as the unital lattice `ℤu + ℤv`.
//! The classical reduction chooses `u` as a shortest lattice vector; the
//! thin reduction chooses it as the shortest lattice vector inside the open
//! cone `C_ε` of half-angle ε about the positive x-axis, which keeps the
//! rotation part of `g = kan` within ε of the identity.
//!
//! The crate is organised as
//!
//! - [`linalg`]: 2×2 matrices, KAN/KNA coordinates, SL(2,ℤ) elements;
//! - [`lattice`]: Lagrange–Gauss reduction, `Φ(L)`, `Φ_ε(L)`;
//! - [`domains`]: closed-form membership, admissible t-sets, reduction;
//! - [`verify`]: brute-force oracles, stabilizer enumeration and a
//!   Monte-Carlo check of the L² inequality.
//!
//! Everything is generic over [`Real`]; the `f64` aliases below are what
//! most callers want.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domains;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod real;
pub mod verify;

pub use error::{Error, Result};
pub use real::Real;

pub type Mat2f64 = linalg::Mat2<f64>;
pub type Vec2f64 = linalg::Vec2<f64>;
pub type KanCoordsf64 = linalg::KanCoords<f64>;
pub type KnaCoordsf64 = linalg::KnaCoords<f64>;
pub type UnitalLatticef64 = lattice::UnitalLattice<f64>;
pub type LatticePointf64 = lattice::LatticePoint<f64>;
pub type Conef64 = lattice::Cone<f64>;
pub type Epsilonf64 = domains::Epsilon<f64>;
pub type IntervalSetf64 = domains::IntervalSet<f64>;
pub type ThinReductionf64 = domains::ThinReduction<f64>;

pub type Mat2f32 = linalg::Mat2<f32>;
pub type KanCoordsf32 = linalg::KanCoords<f32>;
pub type Epsilonf32 = domains::Epsilon<f32>;
