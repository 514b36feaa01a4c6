use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

use super::geometry::RegionGeometry;
use super::{Epsilon, RegionTag};

/// Smallest `a` sampled for the `F¹_ε` strip (the cusp at 0 is cut off here).
pub const POLYLINE_A_MIN: f64 = 0.25;
/// Largest `a` sampled for the `F⁴_ε` cusp.
pub const POLYLINE_A_MAX: f64 = 10.0;

/// One sample of a region's t-window at a fixed `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRow<F> {
    pub region: RegionTag,
    pub a: F,
    pub t_lo: F,
    pub t_hi: F,
}

fn log_grid<F: Real>(lo: F, hi: F, n: usize) -> Vec<F> {
    let (l0, l1) = (lo.ln(), hi.ln());
    let last = F::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * F::from_usize(i).unwrap() / last).exp()
            }
        })
        .collect()
}

/// Samples each region's t-window on `n` log-spaced values of `a` spanning
/// its a-range. Rows come grouped by region in tag order.
pub fn region_boundary_polyline<F: Real>(e: &Epsilon<F>, theta: F, n: usize) -> Result<Vec<BoundaryRow<F>>> {
    if theta.abs() >= e.value() {
        return Err(Error::ThetaOutsideCone {
            theta: theta.to_f64().unwrap_or(f64::NAN),
            epsilon: e.value().to_f64().unwrap_or(f64::NAN),
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("polyline needs n >= 2, got {n}")));
    }
    // a-ranges depend only on θ, so evaluate the thresholds once at a = 1.
    let g0 = RegionGeometry::new(F::one(), theta, e);
    let a_plus = g0.csc_plus.sqrt();
    let a_minus = g0.csc_minus.sqrt();
    let a_top = g0.cot_sum().sqrt();
    let a_max = F::lit(POLYLINE_A_MAX).max(a_top);
    let ranges = [
        (RegionTag::ThinF1, F::lit(POLYLINE_A_MIN).min(a_plus), a_plus),
        (RegionTag::ThinF2, a_plus, a_minus),
        (RegionTag::ThinF3, a_minus, a_top),
        (RegionTag::ThinF4, a_minus, a_max),
    ];
    let mut rows = Vec::with_capacity(4 * n);
    for (tag, lo, hi) in ranges {
        for a in log_grid(lo, hi, n) {
            let (t_lo, t_hi) = RegionGeometry::new(a, theta, e).t_window(tag);
            rows.push(BoundaryRow { region: tag, a, t_lo, t_hi });
        }
    }
    Ok(rows)
}
