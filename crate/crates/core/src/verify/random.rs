use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::UnitalLattice;
use crate::linalg::{from_kan, KanCoords, Mat2};
use crate::real::Real;

// Sub-stream offsets per component; chunk indices are added to these.
pub const STREAM_GROUP: u64 = 0;
pub const STREAM_LATTICE: u64 = 1 << 32;
pub const STREAM_LHS: u64 = 2 << 32;
pub const STREAM_RHS: u64 = 3 << 32;

/// Generator for one sub-stream of a master seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// θ uniform on (−π, π], log a uniform on [log 0.2, log 5], t uniform on
/// [−2, 2].
pub fn random_kan<F: Real, R: Rng + ?Sized>(rng: &mut R) -> KanCoords<F> {
    let theta = PI - rng.gen_range(0.0..2.0 * PI);
    let a = rng.gen_range(0.2f64.ln()..=5.0f64.ln()).exp();
    let t = rng.gen_range(-2.0..=2.0);
    KanCoords::new(F::lit(theta), F::lit(a), F::lit(t))
}

pub fn random_group_element<F: Real, R: Rng + ?Sized>(rng: &mut R) -> Mat2<F> {
    from_kan(&random_kan(rng)).expect("a > 0")
}

pub fn random_lattice<F: Real, R: Rng + ?Sized>(rng: &mut R) -> UnitalLattice<F> {
    UnitalLattice::new(random_group_element(rng)).expect("rotation·diag·unipotent has det 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Mat2<f64> = random_group_element(&mut stream_rng(7, STREAM_GROUP));
        let b: Mat2<f64> = random_group_element(&mut stream_rng(7, STREAM_GROUP));
        let c: Mat2<f64> = random_group_element(&mut stream_rng(7, STREAM_GROUP + 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unit_determinant() {
        let mut rng = stream_rng(1, STREAM_GROUP);
        for _ in 0..1000 {
            let g: Mat2<f64> = random_group_element(&mut rng);
            assert!((g.det() - 1.0).abs() < 1e-12);
        }
    }
}
