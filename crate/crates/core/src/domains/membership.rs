use crate::error::{Error, Result};
use crate::linalg::{KanCoords, KnaCoords};
use crate::real::Real;

use super::geometry::{cot, csc, min_margin, stable_cusp_width_kna, RegionGeometry};
use super::{Classification, Epsilon, IntervalSet, Membership, RegionTag};

// Interior beats boundary; among equals the earlier tag wins.
fn classify<F: Real>(margins: &[(RegionTag, F)], tau: F) -> Classification<F> {
    if let Some(&(tag, _)) = margins.iter().find(|(_, m)| *m > tau) {
        return Classification { membership: Membership::Interior, region: Some(tag) };
    }
    if let Some(&(tag, m)) = margins.iter().find(|(_, m)| *m >= -tau) {
        return Classification { membership: Membership::Boundary { distance: m }, region: Some(tag) };
    }
    Classification { membership: Membership::Outside, region: None }
}

fn interval_margin<F: Real>(x: F, lo: F, hi: F) -> [F; 2] {
    [x - lo, hi - x]
}

/// Residuals of `F¹` and `F²`; θ plays no role.
pub fn classical_margins<F: Real>(c: &KanCoords<F>) -> [(RegionTag, F); 2] {
    let (a, t) = (c.a, c.t);
    let t2 = t * t;
    let a_max = F::lit(4.0 / 3.0).powf(F::lit(0.25));
    let f1 = min_margin(&[F::one() - a, F::half() - t.abs()]);
    let f2 = min_margin(&[a - F::one(), a_max - a, t2 - (F::one() - a.powi(-4)), F::lit(0.25) - t2]);
    [(RegionTag::ClassicalF1, f1), (RegionTag::ClassicalF2, f2)]
}

pub fn classical_membership<F: Real>(c: &KanCoords<F>) -> Classification<F> {
    classical_membership_with(c, F::BOUNDARY_TOL)
}

pub fn classical_membership_with<F: Real>(c: &KanCoords<F>, tau: F) -> Classification<F> {
    classify(&classical_margins(c), tau)
}

/// Residuals of the four thin regions in KAN coordinates.
pub fn thin_margins<F: Real>(c: &KanCoords<F>, e: &Epsilon<F>) -> [(RegionTag, F); 4] {
    let g = RegionGeometry::new(c.a, c.theta, e);
    RegionTag::THIN.map(|tag| {
        let (a_lo, a_hi) = g.a_margins(tag);
        let (t_lo, t_hi) = g.t_window(tag);
        let [m_lo, m_hi] = interval_margin(c.t, t_lo, t_hi);
        (tag, min_margin(&[g.theta_margin, a_lo, a_hi, m_lo, m_hi]))
    })
}

pub fn thin_membership<F: Real>(c: &KanCoords<F>, e: &Epsilon<F>) -> Classification<F> {
    thin_membership_with(c, e, F::BOUNDARY_TOL)
}

pub fn thin_membership_with<F: Real>(c: &KanCoords<F>, e: &Epsilon<F>, tau: F) -> Classification<F> {
    classify(&thin_margins(c, e), tau)
}

/// Residuals of the four thin regions written directly in `T = a²t`.
pub fn thin_margins_kna<F: Real>(c: &KnaCoords<F>, e: &Epsilon<F>) -> [(RegionTag, F); 4] {
    let eps = e.value();
    let th = c.theta.abs();
    let sign = if c.theta < F::zero() { -F::one() } else { F::one() };
    let a2 = c.a * c.a;
    let st = sign * c.big_t;
    let (csc_p, csc_m) = (csc(eps + th), csc(eps - th));
    let (cot_p, cot_m) = (cot(eps + th), cot(eps - th));
    let w = stable_cusp_width_kna(a2);
    let theta_m = eps - th;

    let f1 = min_margin(&[theta_m, csc_p - a2, F::half() * a2 - c.big_t.abs()]);
    let f2 = min_margin(&[theta_m, a2 - csc_p, csc_m - a2, st + cot_p, w - st]);
    let f3 = min_margin(&[theta_m, a2 - csc_m, cot_p + cot_m - a2, st + cot_p, cot_m - a2 - st]);
    let f4 = min_margin(&[theta_m, a2 - csc_m, w - c.big_t.abs()]);
    [(RegionTag::ThinF1, f1), (RegionTag::ThinF2, f2), (RegionTag::ThinF3, f3), (RegionTag::ThinF4, f4)]
}

pub fn thin_membership_kna<F: Real>(c: &KnaCoords<F>, e: &Epsilon<F>) -> Classification<F> {
    thin_membership_kna_with(c, e, F::BOUNDARY_TOL)
}

pub fn thin_membership_kna_with<F: Real>(c: &KnaCoords<F>, e: &Epsilon<F>, tau: F) -> Classification<F> {
    classify(&thin_margins_kna(c, e), tau)
}

fn check_theta<F: Real>(theta: F, e: &Epsilon<F>) -> Result<()> {
    if theta.abs() < e.value() {
        Ok(())
    } else {
        Err(Error::ThetaOutsideCone {
            theta: theta.abs().to_f64().unwrap_or(f64::NAN),
            epsilon: e.value().to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// The set of `t ∈ [0, 1]` for which `a(cos θ, sin θ)` is the shortest cone
/// vector of the lattice it spans together with `u^⊥ + t·u`.
pub fn admissible_t_set<F: Real>(a: F, theta: F, e: &Epsilon<F>) -> Result<IntervalSet<F>> {
    check_theta(theta, e)?;
    if theta < F::zero() {
        return Ok(admissible_t_set(a, -theta, e)?.reflect());
    }
    if a <= F::one() {
        return Ok(IntervalSet::unit());
    }
    let eps = e.value();
    let a_inv2 = (a * a).recip();
    let s = ((F::one() - a_inv2) * (F::one() + a_inv2)).sqrt();
    let c_minus = a_inv2 * cot(eps - theta);
    let c_plus = a_inv2 * cot(eps + theta);
    let upper = IntervalSet::from_intervals([(F::zero(), c_minus), (s, F::one())]);
    let lower = IntervalSet::from_intervals([(F::one() - c_plus, F::one()), (F::zero(), F::one() - s)]);
    Ok(upper.intersection(&lower).intersection(&IntervalSet::unit()))
}

/// Moves `t` by an integer into the t-window of the region it belongs to.
/// Returns `(t*, shift, region)` with `t* = t + shift`.
pub fn canonical_t_representative<F: Real>(t: F, a: F, theta: F, e: &Epsilon<F>) -> Result<(F, i64, RegionTag)> {
    canonical_t_representative_with(t, a, theta, e, F::BOUNDARY_TOL)
}

pub(crate) fn canonical_t_representative_with<F: Real>(
    t: F,
    a: F,
    theta: F,
    e: &Epsilon<F>,
    tau: F,
) -> Result<(F, i64, RegionTag)> {
    check_theta(theta, e)?;
    let g = RegionGeometry::new(a, theta, e);
    for tag in RegionTag::THIN {
        let (a_lo, a_hi) = g.a_margins(tag);
        if a_lo < -tau || a_hi < -tau {
            continue;
        }
        let (lo, hi) = g.t_window(tag);
        let k = (lo - tau - t).ceil();
        if t + k <= hi + tau {
            let shift = k.to_i64().ok_or(Error::NonFinite)?;
            return Ok((t + k, shift, tag));
        }
    }
    Err(Error::NotAdmissible {
        t: t.to_f64().unwrap_or(f64::NAN),
        a: a.to_f64().unwrap_or(f64::NAN),
        theta: theta.to_f64().unwrap_or(f64::NAN),
    })
}
