use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use thinfd::domains::{
    admissible_t_set, canonical_t_representative, classical_margins, classical_membership_with, reduce_to_classical,
    reduce_to_thin, region_boundary_polyline, thin_margins, thin_margins_kna, thin_membership_kna_with,
    thin_membership_with, Classification, Epsilon, RegionTag,
};
use thinfd::linalg::{iwasawa_kan_with, iwasawa_kna_with, KanCoords, KnaCoords, Mat2, UnimodularInt};
use thinfd::verify::suites::{
    run_l2_suite, run_oracle_suite, run_stabilizer_suite, L2SuiteConfig, L2SuiteReport, OracleSuiteConfig,
    OracleSuiteReport, StabilizerSuiteConfig, StabilizerSuiteReport,
};
use thinfd::verify::{random_group_element, stream_rng, STREAM_GROUP};
use thinfd::Real;

use crate::output::{boundary_csv, emit, write_out, CliError, EXIT_REDUCTION, EXIT_VERIFY};
use crate::{svg, Format, GlobalOpts, Mode, Suite};

fn epsilon(o: &GlobalOpts) -> Result<Epsilon<f64>, CliError> {
    use std::f64::consts::FRAC_PI_6;
    // `pi/6` as typed rounds one ulp below the constant.
    let value = if (o.epsilon - FRAC_PI_6).abs() <= 4.0 * f64::EPSILON { FRAC_PI_6 } else { o.epsilon };
    let e = if o.allow_eps_max { Epsilon::allow_max(value) } else { Epsilon::new(value) };
    e.map_err(|e| CliError::from_lib(e, crate::output::EXIT_INVALID))
}

fn tau(o: &GlobalOpts) -> Result<f64, CliError> {
    match o.tol {
        Some(t) if !(t >= 0.0 && t.is_finite()) => Err(CliError::invalid(format!("--tol must be >= 0, got {t}"))),
        Some(t) => Ok(t),
        None => Ok(f64::BOUNDARY_TOL),
    }
}

fn reject_format(o: &GlobalOpts, what: &str) -> Result<(), CliError> {
    if o.format != Format::Json {
        return Err(CliError::invalid(format!("{what} only supports --format json")));
    }
    Ok(())
}

/// Four reals from one or several arguments, separated by spaces or commas.
fn parse_matrix(args: &[String]) -> Result<Mat2<f64>, CliError> {
    let nums = args
        .iter()
        .flat_map(|a| a.split([' ', ',', '\t']))
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| CliError::invalid(format!("bad matrix entry {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let [m11, m12, m21, m22] = nums[..] else {
        return Err(CliError::invalid(format!("expected 4 matrix entries, got {}", nums.len())));
    };
    let m = Mat2::new(m11, m12, m21, m22);
    if !m.is_finite() {
        return Err(CliError::invalid("matrix entries must be finite"));
    }
    Ok(m)
}

/// Checks `|det − 1| ≤ tol` and rescales onto det 1.
fn unimodular_input(args: &[String], o: &GlobalOpts) -> Result<Mat2<f64>, CliError> {
    let m = parse_matrix(args)?;
    let det = m.det();
    let tol = o.tol.unwrap_or(f64::DET_TOL);
    if !((det - 1.0).abs() <= tol) {
        return Err(CliError::invalid(format!("determinant {det} is not 1 within {tol:e}")));
    }
    let s = det.sqrt().recip();
    Ok(Mat2::new(m.m11 * s, m.m12 * s, m.m21 * s, m.m22 * s))
}

#[derive(Serialize)]
#[serde(untagged)]
enum Coords {
    Kan(KanCoords<f64>),
    Kna(KnaCoords<f64>),
}

pub fn decompose(o: &GlobalOpts, matrix: &[String], mode: Mode) -> Result<(), CliError> {
    reject_format(o, "decompose")?;
    let g = unimodular_input(matrix, o)?;
    let loose = 1.0;
    let lib = |e| CliError::from_lib(e, crate::output::EXIT_INVALID);
    let coords = match mode {
        Mode::Kan => Coords::Kan(iwasawa_kan_with(&g, loose).map_err(lib)?),
        Mode::Kna => Coords::Kna(iwasawa_kna_with(&g, loose).map_err(lib)?),
    };
    emit(o, &coords)
}

fn rows(m: &Mat2<f64>) -> [[f64; 2]; 2] {
    [[m.m11, m.m12], [m.m21, m.m22]]
}

#[derive(Serialize)]
struct ReduceReport {
    fundamental_set: &'static str,
    epsilon: Option<f64>,
    gprime: [[f64; 2]; 2],
    gamma: [[i64; 2]; 2],
    region: RegionTag,
    coords: KanCoords<f64>,
    residual: f64,
}

pub fn reduce(o: &GlobalOpts, matrix: &[String]) -> Result<(), CliError> {
    reject_format(o, "reduce")?;
    let g = unimodular_input(matrix, o)?;
    let fail = |e| CliError::from_lib(e, EXIT_REDUCTION);
    let report = if o.classical {
        let r = reduce_to_classical(&g).map_err(fail)?;
        ReduceReport {
            fundamental_set: "classical",
            epsilon: None,
            gprime: rows(&r.gprime),
            gamma: r.gamma.rows(),
            region: r.region,
            coords: r.coords,
            residual: r.residual,
        }
    } else {
        let e = epsilon(o)?;
        let r = reduce_to_thin(&g, &e).map_err(fail)?;
        ReduceReport {
            fundamental_set: "thin",
            epsilon: Some(e.value()),
            gprime: rows(&r.gprime),
            gamma: r.gamma.rows(),
            region: r.region,
            coords: r.coords,
            residual: r.residual,
        }
    };
    emit(o, &report)
}

#[derive(Serialize)]
struct MembershipReport {
    fundamental_set: &'static str,
    epsilon: Option<f64>,
    tolerance: f64,
    coords: Coords,
    #[serde(flatten)]
    classification: Classification<f64>,
    /// Smallest residual of each region's inequalities, positive inside.
    margins: Vec<(RegionTag, f64)>,
}

pub fn membership(o: &GlobalOpts, theta: f64, a: f64, t: f64, mode: Mode) -> Result<(), CliError> {
    reject_format(o, "membership")?;
    if !(a > 0.0 && a.is_finite() && theta.is_finite() && t.is_finite()) {
        return Err(CliError::invalid(format!("need finite theta, t and a > 0; got ({theta}, {a}, {t})")));
    }
    let tau = tau(o)?;
    let report = if o.classical {
        let c = match mode {
            Mode::Kan => KanCoords::new(theta, a, t),
            Mode::Kna => KnaCoords::new(theta, a, t).to_kan(),
        };
        MembershipReport {
            fundamental_set: "classical",
            epsilon: None,
            tolerance: tau,
            coords: Coords::Kan(c),
            classification: classical_membership_with(&c, tau),
            margins: classical_margins(&c).to_vec(),
        }
    } else {
        let e = epsilon(o)?;
        let (coords, classification, margins) = match mode {
            Mode::Kan => {
                let c = KanCoords::new(theta, a, t);
                (Coords::Kan(c), thin_membership_with(&c, &e, tau), thin_margins(&c, &e).to_vec())
            }
            Mode::Kna => {
                let c = KnaCoords::new(theta, a, t);
                (Coords::Kna(c), thin_membership_kna_with(&c, &e, tau), thin_margins_kna(&c, &e).to_vec())
            }
        };
        MembershipReport {
            fundamental_set: "thin",
            epsilon: Some(e.value()),
            tolerance: tau,
            coords,
            classification,
            margins,
        }
    };
    emit(o, &report)
}

#[derive(Serialize)]
struct Canonical {
    t: f64,
    t_star: f64,
    shift: i64,
    region: RegionTag,
}

#[derive(Serialize)]
struct TSetReport {
    epsilon: f64,
    a: f64,
    theta: f64,
    intervals: Vec<(f64, f64)>,
    total_length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    canonical: Option<Canonical>,
}

pub fn t_set(o: &GlobalOpts, a: f64, theta: f64, t: Option<f64>) -> Result<(), CliError> {
    reject_format(o, "t-set")?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(CliError::invalid(format!("a must be positive, got {a}")));
    }
    let e = epsilon(o)?;
    let lib = |e| CliError::from_lib(e, crate::output::EXIT_INVALID);
    let set = admissible_t_set(a, theta, &e).map_err(lib)?;
    let canonical = t
        .map(|t| {
            let (t_star, shift, region) = canonical_t_representative(t, a, theta, &e).map_err(lib)?;
            Ok::<_, CliError>(Canonical { t, t_star, shift, region })
        })
        .transpose()?;
    emit(
        o,
        &TSetReport {
            epsilon: e.value(),
            a,
            theta,
            intervals: set.intervals().to_vec(),
            total_length: set.total_length(),
            canonical,
        },
    )
}

pub fn boundary(o: &GlobalOpts, theta: f64, n: usize) -> Result<(), CliError> {
    let e = epsilon(o)?;
    let rows =
        region_boundary_polyline(&e, theta, n).map_err(|e| CliError::from_lib(e, crate::output::EXIT_INVALID))?;
    match o.format {
        Format::Csv => write_out(o, boundary_csv(&rows).as_bytes()),
        Format::Svg => write_out(o, svg::render(&rows, e.value(), theta).as_bytes()),
        Format::Json => emit(o, &rows),
    }
}

#[derive(Serialize, Default)]
struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleSuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stabilizer: Option<StabilizerSuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l2: Option<L2SuiteReport>,
    /// Stabilizer lists are raw SL(2,ℤ) elements; `hexagonal_pairs` counts
    /// them up to ±I.
    convention: &'static str,
    pass: bool,
}

pub fn verify(o: &GlobalOpts, suite: Suite, points: usize, entry_bound: i64, lattices: usize) -> Result<(), CliError> {
    reject_format(o, "verify")?;
    let e = epsilon(o)?;
    let fail = |e| CliError::from_lib(e, EXIT_VERIFY);
    let wants = |s| suite == Suite::All || suite == s;
    let mut report = VerifyReport { convention: "raw SL(2,Z) lists; pairs counted up to -I", ..Default::default() };
    if wants(Suite::Oracle) {
        let cfg = OracleSuiteConfig { cone_lattices: lattices, seed: o.seed, ..OracleSuiteConfig::default() };
        report.oracle = Some(run_oracle_suite(&cfg).map_err(fail)?);
    }
    if wants(Suite::Stabilizer) {
        let mut cfg = StabilizerSuiteConfig {
            epsilon: e.value(),
            thin_points: points,
            classical_points: points,
            entry_bound,
            seed: o.seed,
            ..StabilizerSuiteConfig::default()
        };
        if let Some(t) = o.tol {
            cfg.interior_margin = cfg.interior_margin.max(t);
        }
        report.stabilizer = Some(run_stabilizer_suite(&cfg).map_err(fail)?);
    }
    if wants(Suite::L2) {
        let mut cfg = L2SuiteConfig { seed: o.seed, ..L2SuiteConfig::default() };
        if let Some(n) = o.samples {
            cfg.samples = n;
        }
        report.l2 = Some(run_l2_suite(&cfg).map_err(fail)?);
    }
    report.pass = report.oracle.as_ref().is_none_or(|r| r.pass)
        && report.stabilizer.as_ref().is_none_or(|r| r.pass)
        && report.l2.as_ref().is_none_or(|r| r.pass);
    emit(o, &report)?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::new(EXIT_VERIFY, "verification failed"))
    }
}

#[derive(Serialize)]
struct Timing {
    name: &'static str,
    count: u64,
    seconds: f64,
    per_second: f64,
}

#[derive(Serialize)]
struct BenchReport {
    seed: u64,
    epsilon: f64,
    threads: usize,
    timings: Vec<Timing>,
    /// Sum of `|γ|` entries over all thin reductions; equal across runs with
    /// the same seed.
    checksum: i64,
}

pub fn bench(o: &GlobalOpts) -> Result<(), CliError> {
    use rayon::prelude::*;
    reject_format(o, "bench")?;
    let e = epsilon(o)?;
    let n = o.samples.unwrap_or(100_000);
    if n == 0 {
        return Err(CliError::invalid("--samples must be >= 1"));
    }
    let mut rng = stream_rng(o.seed, STREAM_GROUP);
    let gs: Vec<Mat2<f64>> = (0..n).map(|_| random_group_element(&mut rng)).collect();
    let fail = |e| CliError::from_lib(e, EXIT_REDUCTION);
    let abs_sum = |g: &UnimodularInt| g.p.abs() + g.q.abs() + g.r.abs() + g.s.abs();

    let mut timings = Vec::new();
    let mut time = |name, f: &mut dyn FnMut() -> Result<(), CliError>| {
        let start = Instant::now();
        f()?;
        let seconds = start.elapsed().as_secs_f64();
        timings.push(Timing { name, count: n, seconds, per_second: n as f64 / seconds.max(1e-12) });
        Ok::<_, CliError>(())
    };

    let mut checksum = 0;
    time("reduce_to_thin", &mut || {
        checksum = gs
            .par_iter()
            .map(|g| reduce_to_thin(g, &e).map(|r| abs_sum(&r.gamma)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(fail)?
            .iter()
            .sum();
        Ok(())
    })?;
    time("reduce_to_classical", &mut || {
        gs.par_iter().try_for_each(|g| reduce_to_classical(g).map(drop)).map_err(fail)
    })?;
    let mut prng = stream_rng(o.seed, STREAM_GROUP + 1);
    let probes: Vec<KanCoords<f64>> = (0..n)
        .map(|_| {
            let eps = e.value();
            KanCoords::new(prng.gen_range(-eps..eps), prng.gen_range(0.3f64..4.0), prng.gen_range(-0.6..0.6))
        })
        .collect();
    time("thin_membership", &mut || {
        let inside = probes
            .par_iter()
            .filter(|c| !thin_membership_with(c, &e, f64::BOUNDARY_TOL).membership.is_outside())
            .count();
        std::hint::black_box(inside);
        Ok(())
    })?;
    emit(o, &BenchReport { seed: o.seed, epsilon: e.value(), threads: rayon::current_num_threads(), timings, checksum })
}
