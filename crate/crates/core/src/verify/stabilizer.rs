use std::collections::BTreeSet;

use num_integer::Integer;

use crate::domains::{classical_membership_with, thin_membership_with, Epsilon};
use crate::error::Result;
use crate::linalg::{iwasawa_kan_with, Mat2, UnimodularInt};
use crate::real::Real;

/// Which fundamental set a stabilizer count refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FundamentalSet<F> {
    Thin(Epsilon<F>),
    Classical,
}

impl<F: Real> FundamentalSet<F> {
    fn contains(&self, g: &Mat2<F>, tau: F) -> bool {
        // det(gγ) = det(g); only closeness to the set matters here.
        let Ok(c) = iwasawa_kan_with(g, F::lit(0.5)) else { return false };
        let cls = match self {
            FundamentalSet::Thin(e) => thin_membership_with(&c, e, tau),
            FundamentalSet::Classical => classical_membership_with(&c, tau),
        };
        !cls.membership.is_outside()
    }

    // Necessary condition on the first column of gγ.
    fn admits_first_column(&self, x: F, y: F, tau: F) -> bool {
        match self {
            FundamentalSet::Thin(e) => x > F::zero() && y.atan2(x).abs() <= e.value() + tau,
            FundamentalSet::Classical => (x * x + y * y).sqrt() <= F::lit(4.0 / 3.0).powf(F::lit(0.25)) + tau,
        }
    }
}

// Integer k with lo ≤ base + k·step ≤ hi, as an inclusive range.
fn k_range(base: i64, step: i64, bound: i64) -> Option<(i64, i64)> {
    if step == 0 {
        return (base.abs() <= bound).then_some((i64::MIN, i64::MAX));
    }
    let (a, b) = ((-bound - base), (bound - base));
    let (lo, hi) = if step > 0 {
        (Integer::div_ceil(&a, &step), Integer::div_floor(&b, &step))
    } else {
        let s = -step;
        (Integer::div_ceil(&-b, &s), Integer::div_floor(&-a, &s))
    };
    (lo <= hi).then_some((lo, hi))
}

pub fn stabilizer_enumeration<F: Real>(
    g: &Mat2<F>,
    set: &FundamentalSet<F>,
    entry_bound: i64,
) -> Result<Vec<UnimodularInt>> {
    stabilizer_enumeration_with(g, set, entry_bound, F::BOUNDARY_TOL)
}

/// Every `γ ∈ SL(2,ℤ)` with entries in `[−entry_bound, entry_bound]` such
/// that `g·γ` lies in the closure of the fundamental set at tolerance τ,
/// sorted.
pub fn stabilizer_enumeration_with<F: Real>(
    g: &Mat2<F>,
    set: &FundamentalSet<F>,
    entry_bound: i64,
    tau: F,
) -> Result<Vec<UnimodularInt>> {
    let n = entry_bound;
    let mut found = BTreeSet::new();
    for p in -n..=n {
        for q in -n..=n {
            let (pf, qf) = (F::from_i64(p).unwrap(), F::from_i64(q).unwrap());
            let x = g.m11 * pf + g.m12 * qf;
            let y = g.m21 * pf + g.m22 * qf;
            if !set.admits_first_column(x, y, tau) {
                continue;
            }
            let e = p.extended_gcd(&q);
            if e.gcd.abs() != 1 {
                continue;
            }
            // p·s − q·r = 1
            let (r0, s0) = if e.gcd == 1 { (-e.y, e.x) } else { (e.y, -e.x) };
            let Some((k1, k2)) = k_range(r0, p, n) else { continue };
            let Some((k3, k4)) = k_range(s0, q, n) else { continue };
            for k in k1.max(k3)..=k2.min(k4) {
                let gamma = UnimodularInt { p, r: r0 + k * p, q, s: s0 + k * q };
                debug_assert_eq!(gamma.det(), 1);
                if set.contains(&g.act(&gamma), tau) {
                    found.insert(gamma);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Number of classes of the list under `γ ~ −γ`.
pub fn pairs_up_to_sign(list: &[UnimodularInt]) -> usize {
    let classes: BTreeSet<UnimodularInt> = list.iter().map(|&g| g.max(-g)).collect();
    classes.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_kan, KanCoords};
    use std::f64::consts::PI;

    #[test]
    fn k_ranges() {
        assert_eq!(k_range(3, 2, 10), Some((-6, 3)));
        assert_eq!(k_range(3, -2, 10), Some((-3, 6)));
        assert_eq!(k_range(3, 0, 10), Some((i64::MIN, i64::MAX)));
        assert_eq!(k_range(11, 0, 10), None);
    }

    #[test]
    fn interior_thin_point_is_alone() {
        let e = Epsilon::new(PI / 12.0).unwrap();
        let g = from_kan(&KanCoords::new(0.05, 1.7, 0.01)).unwrap();
        let list = stabilizer_enumeration(&g, &FundamentalSet::Thin(e), 20).unwrap();
        assert_eq!(list, vec![UnimodularInt::IDENTITY]);
    }

    #[test]
    fn interior_classical_point_has_sign_pair() {
        let g = from_kan(&KanCoords::new(1.0, 0.8, 0.2)).unwrap();
        let list = stabilizer_enumeration(&g, &FundamentalSet::Classical, 20).unwrap();
        assert_eq!(list, vec![-UnimodularInt::IDENTITY, UnimodularInt::IDENTITY]);
        assert_eq!(pairs_up_to_sign(&list), 1);
    }

    #[test]
    fn hexagonal_corner() {
        let g = from_kan(&KanCoords::new(0.0, (4.0f64 / 3.0).powf(0.25), 0.5)).unwrap();
        let list = stabilizer_enumeration(&g, &FundamentalSet::Classical, 10).unwrap();
        assert_eq!(list.len(), 12);
        assert_eq!(pairs_up_to_sign(&list), 6);
    }
}
