//! Batch drivers over the verification machinery, producing serializable
//! reports with a pass flag. The CLI's `verify` command is a thin wrapper.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::domains::{admissible_t_set, classical_margins, reduce_to_classical, reduce_to_thin, thin_margins, Epsilon};
use crate::error::{Error, Result};
use crate::lattice::{cone_minimal_vector, UnitalLattice};
use crate::linalg::{from_kan, KanCoords, Mat2, UnimodularInt};

use super::montecarlo::{mc_l2_inequality, McReport, TestFunction};
use super::oracle::{oracle_admissible_t, oracle_min_in_cone, OracleConfig};
use super::random::{random_group_element, random_lattice, stream_rng, STREAM_GROUP, STREAM_LATTICE};
use super::stabilizer::{pairs_up_to_sign, stabilizer_enumeration, FundamentalSet};

const MAX_ORACLE_BOUND: i64 = 3200;

/// Runs `f` with the oracle's default bound, doubling it while exhausted.
pub fn with_growing_bound<T>(mut f: impl FnMut(&OracleConfig) -> Result<T>) -> Result<T> {
    let mut cfg = OracleConfig::default();
    loop {
        match f(&cfg) {
            Err(Error::OracleBoundExhausted(n)) if n < MAX_ORACLE_BOUND => cfg.coeff_bound = 2 * n,
            other => return other,
        }
    }
}

// ---------------------------------------------------------------- oracle

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSuiteConfig {
    pub epsilons: Vec<f64>,
    pub thetas: usize,
    pub a2_values: usize,
    pub a2_range: (f64, f64),
    pub t_values: usize,
    /// Grid points this close to an endpoint of the closed-form set are
    /// not compared.
    pub endpoint_exclusion: f64,
    pub cone_lattices: usize,
    pub cone_epsilons: Vec<f64>,
    pub cone_tolerance: f64,
    pub seed: u64,
}

impl Default for OracleSuiteConfig {
    fn default() -> Self {
        Self {
            epsilons: vec![PI / 24.0, PI / 12.0, PI / 8.0, PI / 6.0 - 0.01],
            thetas: 9,
            a2_values: 20,
            a2_range: (0.25, 10.0),
            t_values: 200,
            endpoint_exclusion: 1e-6,
            cone_lattices: 10_000,
            cone_epsilons: vec![PI / 24.0, PI / 12.0],
            cone_tolerance: 1e-12,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub epsilon: f64,
    pub theta: f64,
    pub a: f64,
    pub t: f64,
    pub closed_form: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub compared: usize,
    pub excluded: usize,
    pub mismatches: Vec<GridPoint>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeMismatch {
    pub index: usize,
    pub epsilon: f64,
    pub fast_norm: f64,
    pub oracle_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeReport {
    pub lattices: usize,
    pub max_norm_diff: f64,
    pub mismatches: Vec<ConeMismatch>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSuiteReport {
    pub grid: GridReport,
    pub cone: ConeReport,
    pub pass: bool,
}

/// `n` points on `(−ε, ε)` excluding the ends.
pub fn theta_grid(eps: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| -eps + 2.0 * eps * i as f64 / (n + 1) as f64).collect()
}

/// `n` log-spaced values covering `[lo, hi]` with exact endpoints.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| match i {
                0 => lo,
                i if i == n - 1 => hi,
                i => (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp(),
            })
            .collect(),
    }
}

fn unit_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5],
        _ => (0..n).map(|j| j as f64 / (n - 1) as f64).collect(),
    }
}

pub fn admissible_grid(cfg: &OracleSuiteConfig) -> Result<GridReport> {
    let mut cells = Vec::new();
    for &eps in &cfg.epsilons {
        let e = Epsilon::new(eps)?;
        for theta in theta_grid(eps, cfg.thetas) {
            for a2 in log_grid(cfg.a2_range.0, cfg.a2_range.1, cfg.a2_values) {
                cells.push((e, theta, a2.sqrt()));
            }
        }
    }
    let ts = unit_grid(cfg.t_values);
    let per_cell: Vec<Result<(usize, usize, Vec<GridPoint>)>> = cells
        .par_iter()
        .map(|&(e, theta, a)| {
            let set = admissible_t_set(a, theta, &e)?;
            let (mut compared, mut excluded, mut bad) = (0, 0, Vec::new());
            for &t in &ts {
                if set.distance_to_endpoint(t) <= cfg.endpoint_exclusion {
                    excluded += 1;
                    continue;
                }
                compared += 1;
                let closed_form = set.contains(t);
                let oracle = with_growing_bound(|o| oracle_admissible_t(a, theta, &e, t, o))?;
                if closed_form != oracle {
                    bad.push(GridPoint { epsilon: e.value(), theta, a, t, closed_form, oracle });
                }
            }
            Ok((compared, excluded, bad))
        })
        .collect();
    let mut report = GridReport { compared: 0, excluded: 0, mismatches: Vec::new(), pass: false };
    for cell in per_cell {
        let (c, x, bad) = cell?;
        report.compared += c;
        report.excluded += x;
        report.mismatches.extend(bad);
    }
    report.pass = report.mismatches.is_empty() && report.compared > 0;
    Ok(report)
}

pub fn cone_agreement(cfg: &OracleSuiteConfig) -> Result<ConeReport> {
    if cfg.cone_epsilons.is_empty() {
        return Err(Error::InvalidArgument("no cone epsilons".into()));
    }
    let cones = cfg.cone_epsilons.iter().map(|&x| Epsilon::new(x)).collect::<Result<Vec<_>>>()?;
    let mut rng = stream_rng(cfg.seed, STREAM_LATTICE);
    let lattices: Vec<UnitalLattice<f64>> = (0..cfg.cone_lattices).map(|_| random_lattice(&mut rng)).collect();
    let diffs: Vec<Result<ConeMismatch>> = lattices
        .par_iter()
        .enumerate()
        .map(|(index, l)| {
            let e = cones[index % cones.len()];
            let fast = cone_minimal_vector(l, &e.cone())?;
            let slow = with_growing_bound(|o| oracle_min_in_cone(l, &e, o))?;
            Ok(ConeMismatch { index, epsilon: e.value(), fast_norm: fast.norm(), oracle_norm: slow.norm() })
        })
        .collect();
    let mut report =
        ConeReport { lattices: cfg.cone_lattices, max_norm_diff: 0.0, mismatches: Vec::new(), pass: false };
    for d in diffs {
        let d = d?;
        let diff = (d.fast_norm - d.oracle_norm).abs();
        report.max_norm_diff = report.max_norm_diff.max(diff);
        if !(diff <= cfg.cone_tolerance) {
            report.mismatches.push(d);
        }
    }
    report.pass = report.mismatches.is_empty();
    Ok(report)
}

pub fn run_oracle_suite(cfg: &OracleSuiteConfig) -> Result<OracleSuiteReport> {
    let grid = admissible_grid(cfg)?;
    let cone = cone_agreement(cfg)?;
    let pass = grid.pass && cone.pass;
    Ok(OracleSuiteReport { grid, cone, pass })
}

// ------------------------------------------------------------ stabilizer

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizerSuiteConfig {
    pub epsilon: f64,
    pub thin_points: usize,
    pub classical_points: usize,
    pub entry_bound: i64,
    /// Points are kept only if some region margin exceeds this.
    pub interior_margin: f64,
    pub seed: u64,
}

impl Default for StabilizerSuiteConfig {
    fn default() -> Self {
        Self {
            epsilon: PI / 12.0,
            thin_points: 100,
            classical_points: 100,
            entry_bound: 50,
            interior_margin: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizerFailure {
    pub gprime: Mat2<f64>,
    pub found: Vec<UnimodularInt>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizerSuiteReport {
    pub thin_points: usize,
    /// Thin points whose list was exactly `{I}`.
    pub thin_singletons: usize,
    pub classical_points: usize,
    /// Classical points whose list was exactly `{−I, I}`.
    pub classical_sign_pairs: usize,
    /// Raw list length at the hexagonal corner `a = (4/3)^{1/4}, t = 1/2`.
    pub hexagonal_raw: usize,
    /// The same list counted up to `γ ~ −γ`.
    pub hexagonal_pairs: usize,
    pub failures: Vec<StabilizerFailure>,
    pub pass: bool,
}

/// Reduced random elements of `F_ε` that are interior by `margin`.
pub fn interior_thin_points(e: &Epsilon<f64>, count: usize, margin: f64, seed: u64) -> Result<Vec<Mat2<f64>>> {
    let mut rng = stream_rng(seed, STREAM_GROUP);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let red = reduce_to_thin(&random_group_element(&mut rng), e)?;
        if thin_margins(&red.coords, e).iter().any(|&(_, m)| m > margin) {
            out.push(red.gprime);
        }
    }
    Ok(out)
}

pub fn interior_classical_points(count: usize, margin: f64, seed: u64) -> Result<Vec<Mat2<f64>>> {
    let mut rng = stream_rng(seed, STREAM_GROUP + 1);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let red = reduce_to_classical(&random_group_element::<f64, _>(&mut rng))?;
        if classical_margins(&red.coords).iter().any(|&(_, m)| m > margin) {
            out.push(red.gprime);
        }
    }
    Ok(out)
}

pub fn hexagonal_corner() -> Mat2<f64> {
    from_kan(&KanCoords::new(0.0, (4.0f64 / 3.0).powf(0.25), 0.5)).expect("a > 0")
}

pub fn run_stabilizer_suite(cfg: &StabilizerSuiteConfig) -> Result<StabilizerSuiteReport> {
    let e = Epsilon::new(cfg.epsilon)?;
    let thin = FundamentalSet::Thin(e);
    let classical = FundamentalSet::Classical;
    let identity = vec![UnimodularInt::IDENTITY];
    let sign_pair = vec![-UnimodularInt::IDENTITY, UnimodularInt::IDENTITY];

    let check = |points: Vec<Mat2<f64>>, set: &FundamentalSet<f64>, want: &[UnimodularInt]| {
        points
            .par_iter()
            .map(|g| {
                let found = stabilizer_enumeration(g, set, cfg.entry_bound)?;
                Ok((found == want).then_some(()).ok_or(StabilizerFailure { gprime: *g, found }))
            })
            .collect::<Result<Vec<_>>>()
    };
    let thin_results =
        check(interior_thin_points(&e, cfg.thin_points, cfg.interior_margin, cfg.seed)?, &thin, &identity)?;
    let classical_results =
        check(interior_classical_points(cfg.classical_points, cfg.interior_margin, cfg.seed)?, &classical, &sign_pair)?;
    let hex = stabilizer_enumeration(&hexagonal_corner(), &classical, cfg.entry_bound)?;

    let thin_singletons = thin_results.iter().filter(|r| r.is_ok()).count();
    let classical_sign_pairs = classical_results.iter().filter(|r| r.is_ok()).count();
    let failures: Vec<_> = thin_results.into_iter().chain(classical_results).filter_map(|r| r.err()).collect();
    let hexagonal_pairs = pairs_up_to_sign(&hex);
    Ok(StabilizerSuiteReport {
        thin_points: cfg.thin_points,
        thin_singletons,
        classical_points: cfg.classical_points,
        classical_sign_pairs,
        hexagonal_raw: hex.len(),
        hexagonal_pairs,
        pass: failures.is_empty() && hexagonal_pairs == 6,
        failures,
    })
}

// -------------------------------------------------------------------- L²

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2SuiteConfig {
    pub epsilons: Vec<f64>,
    pub functions: Vec<TestFunction>,
    pub samples: u64,
    pub seed: u64,
    /// Allowed deficit in units of the combined standard error.
    pub sigmas: f64,
}

impl Default for L2SuiteConfig {
    fn default() -> Self {
        Self {
            epsilons: vec![PI / 24.0, PI / 12.0, PI / 8.0],
            functions: vec![TestFunction::bump_of_phi(0.9, 0.05)],
            samples: 1_000_000,
            seed: 42,
            sigmas: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2Case {
    pub function: TestFunction,
    pub report: McReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2SuiteReport {
    pub cases: Vec<L2Case>,
    pub pass: bool,
}

pub fn run_l2_suite(cfg: &L2SuiteConfig) -> Result<L2SuiteReport> {
    let mut cases = Vec::new();
    for f in &cfg.functions {
        for &eps in &cfg.epsilons {
            let e = Epsilon::new(eps)?;
            let report = mc_l2_inequality(f, &e, cfg.samples, cfg.seed, f.default_a_window(eps))?;
            let pass = report.holds_within(cfg.sigmas);
            cases.push(L2Case { function: *f, report, pass });
        }
    }
    let pass = !cases.is_empty() && cases.iter().all(|c| c.pass);
    Ok(L2SuiteReport { cases, pass })
}
