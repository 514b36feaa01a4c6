use rayon::prelude::*;
use serde::Serialize;

use crate::domains::{thin_membership_kna, Epsilon};
use crate::error::{Error, Result};
use crate::lattice::{phi, UnitalLattice};
use crate::linalg::{from_kna, KnaCoords, Mat2};
use crate::real::Real;

use super::random::{stream_rng, STREAM_LHS, STREAM_RHS};
use rand::Rng;

pub const MIN_MC_SAMPLES: u64 = 10_000;

// Fixed chunking keeps the result independent of the worker count.
const CHUNK: u64 = 1 << 14;

/// A right-Γ-invariant function on G, i.e. a function of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum TestFunction {
    /// `max(0, 1 − ((Φ(L) − center)/width)²)²`; identically zero when
    /// `width <= 0`.
    BumpOfPhi { center: f64, width: f64 },
}

impl TestFunction {
    pub fn bump_of_phi(center: f64, width: f64) -> Self {
        TestFunction::BumpOfPhi { center, width }
    }

    pub fn eval<F: Real>(&self, g: &Mat2<F>) -> f64 {
        match *self {
            TestFunction::BumpOfPhi { center, width } => {
                if width <= 0.0 {
                    return 0.0;
                }
                let Ok(l) = UnitalLattice::with_tolerance(*g, F::lit(1e-6)) else { return 0.0 };
                let Ok(m) = phi(&l) else { return 0.0 };
                let z = (m.to_f64().unwrap() - center) / width;
                let b = (1.0 - z * z).max(0.0);
                b * b
            }
        }
    }

    /// An a-window outside of which `f(k_θ n_T a)` vanishes for every
    /// `|T| ≤ 1/ε`: `Φ ≤ a` and `Φ ≤ ‖v‖ ≤ √(1 + T²)/a`.
    pub fn default_a_window(&self, eps: f64) -> (f64, f64) {
        match *self {
            TestFunction::BumpOfPhi { center, width } => {
                let w = width.max(0.0);
                let lo = (center - w).max(1e-3);
                (0.95 * lo, 1.05 * (1.0 + 1.0 / (eps * eps)).sqrt() / lo)
            }
        }
    }
}

/// Both sides of `∫_{|θ|<ε} ∫_{|T|<1/ε} ∫ |f|² da/a dT dθ ≥ ∫_{F_ε} |f|²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub lhs_estimate: f64,
    pub lhs_stderr: f64,
    pub rhs_estimate: f64,
    pub rhs_stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub epsilon: f64,
    pub a_window: (f64, f64),
    /// Fraction of right-hand proposals that landed in `F_ε`.
    pub acceptance_rate: f64,
}

impl McReport {
    pub fn margin(&self) -> f64 {
        self.lhs_estimate - self.rhs_estimate
    }

    pub fn combined_stderr(&self) -> f64 {
        self.lhs_stderr.hypot(self.rhs_stderr)
    }

    /// `lhs ≥ rhs − k·σ`.
    pub fn holds_within(&self, k: f64) -> bool {
        self.margin() >= -k * self.combined_stderr()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
    accepted: u64,
}

impl Moments {
    fn merge(self, o: Self) -> Self {
        Self {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            accepted: self.accepted + o.accepted,
        }
    }

    /// `volume · mean` and its standard error.
    fn estimate(&self, volume: f64) -> (f64, f64) {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = if self.n > 1 { ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        (volume * mean, volume * (var / n).sqrt())
    }
}

fn run_chunks(
    samples: u64,
    seed: u64,
    stream: u64,
    f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> (f64, bool) + Sync,
) -> Moments {
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, stream + c);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut m = Moments { n, ..Moments::default() };
            for _ in 0..n {
                let (x, acc) = f(&mut rng);
                m.sum += x;
                m.sum_sq += x * x;
                m.accepted += acc as u64;
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

fn check_support<F: Real>(f: &TestFunction, eps: f64, a_window: (f64, f64)) -> Result<()> {
    let t_max = 1.0 / eps;
    for &a in &[a_window.0, a_window.1] {
        for i in 0..=8 {
            let theta = eps * (i as f64 / 4.0 - 1.0) * (1.0 - 1e-9);
            for j in 0..=20 {
                let big_t = t_max * (j as f64 / 10.0 - 1.0);
                let g = from_kna(&KnaCoords::new(F::lit(theta), F::lit(a), F::lit(big_t)))?;
                let value = f.eval(&g);
                if value != 0.0 {
                    return Err(Error::SupportCheck { a, value });
                }
            }
        }
    }
    Ok(())
}

/// Monte-Carlo estimate of both sides of the L² inequality.
///
/// The left side samples `(θ, T, log a)` uniformly on
/// `[−ε, ε] × [−1/ε, 1/ε] × log(a_window)`. The right side proposes
/// uniformly on the box `|θ| < ε`, `|T| ≤ cot ε` containing the Siegel set
/// and keeps proposals inside `F_ε`. Both use the measure `dθ dT da/a`.
pub fn mc_l2_inequality<F: Real>(
    f: &TestFunction,
    e: &Epsilon<F>,
    samples: u64,
    seed: u64,
    a_window: (f64, f64),
) -> Result<McReport> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_MC_SAMPLES} samples, got {samples}")));
    }
    let (a_lo, a_hi) = a_window;
    if !(a_lo > 0.0 && a_hi > a_lo) {
        return Err(Error::InvalidArgument(format!("bad a-window ({a_lo}, {a_hi})")));
    }
    let eps = e.value().to_f64().unwrap();
    check_support::<F>(f, eps, a_window)?;
    let (ln_lo, ln_hi) = (a_lo.ln(), a_hi.ln());
    let log_span = ln_hi - ln_lo;

    let t_lhs = 1.0 / eps;
    let lhs = run_chunks(samples, seed, STREAM_LHS, |rng| {
        let theta = rng.gen_range(-eps..eps);
        let big_t = rng.gen_range(-t_lhs..t_lhs);
        let a = rng.gen_range(ln_lo..ln_hi).exp();
        let g = from_kna(&KnaCoords::new(F::lit(theta), F::lit(a), F::lit(big_t))).expect("a > 0");
        let v = f.eval(&g);
        (v * v, true)
    });

    let t_rhs = if e.siegel_checked() { 1.0 / eps.tan() } else { 1.0 / eps };
    let rhs = run_chunks(samples, seed, STREAM_RHS, |rng| {
        let theta = rng.gen_range(-eps..eps);
        let big_t = rng.gen_range(-t_rhs..t_rhs);
        let a = rng.gen_range(ln_lo..ln_hi).exp();
        let c = KnaCoords::new(F::lit(theta), F::lit(a), F::lit(big_t));
        if thin_membership_kna(&c, e).membership.is_outside() {
            return (0.0, false);
        }
        let v = f.eval(&from_kna(&c).expect("a > 0"));
        (v * v, true)
    });
    if rhs.accepted == 0 {
        return Err(Error::ZeroAcceptance);
    }

    let (lhs_estimate, lhs_stderr) = lhs.estimate(2.0 * eps * 2.0 * t_lhs * log_span);
    let (rhs_estimate, rhs_stderr) = rhs.estimate(2.0 * eps * 2.0 * t_rhs * log_span);
    Ok(McReport {
        lhs_estimate,
        lhs_stderr,
        rhs_estimate,
        rhs_stderr,
        samples,
        seed,
        epsilon: eps,
        a_window,
        acceptance_rate: rhs.accepted as f64 / samples as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_function() {
        let e = Epsilon::new(PI / 12.0).unwrap();
        let f = TestFunction::bump_of_phi(0.9, 0.0);
        let r = mc_l2_inequality(&f, &e, 10_000, 3, (0.5, 20.0)).unwrap();
        assert_eq!((r.lhs_estimate, r.rhs_estimate, r.lhs_stderr, r.rhs_stderr), (0.0, 0.0, 0.0, 0.0));
        assert!(r.acceptance_rate > 0.0);
    }

    #[test]
    fn bump_values() {
        let f = TestFunction::bump_of_phi(1.0, 0.5);
        assert_eq!(f.eval(&Mat2::<f64>::identity()), 1.0);
        let g = Mat2::diagonal(1.25f64);
        assert!((f.eval(&g) - (1.0f64 - 0.4 * 0.4).powi(2)).abs() < 1e-12);
        assert_eq!(f.eval(&Mat2::diagonal(3.0f64)), 0.0);
    }

    #[test]
    fn support_violation_detected() {
        let e = Epsilon::new(PI / 12.0).unwrap();
        let f = TestFunction::bump_of_phi(0.9, 0.05);
        assert!(matches!(mc_l2_inequality(&f, &e, 10_000, 1, (0.9, 5.0)), Err(Error::SupportCheck { .. })));
        assert!(mc_l2_inequality(&f, &e, 100, 1, f.default_a_window(PI / 12.0)).is_err());
    }

    #[test]
    fn deterministic() {
        let e = Epsilon::new(PI / 12.0).unwrap();
        let f = TestFunction::bump_of_phi(0.9, 0.05);
        let w = f.default_a_window(PI / 12.0);
        let a = mc_l2_inequality(&f, &e, 40_000, 11, w).unwrap();
        let b = mc_l2_inequality(&f, &e, 40_000, 11, w).unwrap();
        assert_eq!(a, b);
    }
}
