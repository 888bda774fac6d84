//! Turns a validated configuration into a report of computed series.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{BigRational, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use folner::averaging::{classic_ratio, subexponential_ratio};
use folner::continuum::{ContinuumError, LeafDomain};
use folner::examples::f2::levelwise::{
    averaging_mass_series, boundary_mass_series, cylinder_mass_series, difference_mass_series,
    harmonicity_series, quasi_invariance_series,
};
use folner::examples::f2::{
    f2_averaging_set, BoundaryPoint, Letter, OrbitPoint, Word,
};
use folner::examples::grid::{ball_size, grid_ball, grid_window};
use folner::examples::horocycle::horocycle_domain;
use folner::examples::sol::sol_domain;
use folner::orbit::WindowError;

use crate::config::{Arithmetic, RunConfig, TabulatedCocycle};
use crate::report::Report;
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.example.as_str() {
        "f2-boundary" => run_f2(cfg),
        "grid-1d" => run_grid(cfg, 1),
        "grid-2d" => run_grid(cfg, 2),
        "grid-3d" => run_grid(cfg, 3),
        "horocycle" => run_continuum(cfg, None),
        "sol" => run_continuum(cfg, Some(cfg.lambda.expect("validated"))),
        other => Err(CliError::Config(format!("unknown example {other:?}"))),
    }
}

pub fn horizon(e: impl std::fmt::Display) -> CliError {
    CliError::Horizon(e.to_string())
}

fn window_error(e: WindowError) -> CliError {
    match e {
        WindowError::HorizonExceeded { .. } => horizon(e),
        other => CliError::Config(other.to_string()),
    }
}

fn continuum_error(e: ContinuumError) -> CliError {
    match e {
        ContinuumError::BudgetExceeded { .. } | ContinuumError::DepthExceeded { .. } => horizon(e),
        other => CliError::Config(other.to_string()),
    }
}

/// Rationals render as `p/q` in exact mode (plain integer when q = 1)
/// and as doubles in float mode.
fn scalar(arith: Arithmetic, r: &BigRational) -> Value {
    match arith {
        Arithmetic::Exact => Value::String(rational_string(r)),
        Arithmetic::Float => float(r.to_f64().unwrap_or(f64::NAN)),
    }
}

pub fn rational_string(r: &BigRational) -> String {
    if r.denom() == &num::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{x}")))
}

fn common_settings(cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n_max".into(), json!(cfg.n_max));
    m.insert(
        "arithmetic".into(),
        json!(match cfg.arithmetic {
            Arithmetic::Exact => "exact",
            Arithmetic::Float => "float",
        }),
    );
    m
}

/// All cylinder words of depth 1 through `depth`.
pub fn cylinder_family(depth: u32) -> Vec<Word> {
    let mut out = Vec::new();
    for d in 1..=depth {
        out.extend(folner::examples::f2::cylinders_of_depth(d));
    }
    out
}

fn run_f2(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = Arc::new(
        BoundaryPoint::parse(&cfg.preperiod, &cfg.period)
            .map_err(|e| CliError::Config(e.to_string()))?,
    );
    if let Some(path) = &cfg.cocycle {
        return run_f2_tabulated(cfg, &x, &TabulatedCocycle::load(path)?);
    }
    let n_max = cfg.n_max;
    let mass = averaging_mass_series(&x, n_max);
    let boundary = boundary_mass_series(&x, n_max);
    let diff: Vec<(Letter, Vec<BigRational>)> = Letter::ALL
        .iter()
        .map(|l| (*l, difference_mass_series(&x, *l, n_max)))
        .collect();

    let family = cylinder_family(cfg.cylinder_depth);
    let mut harm_max = vec![BigRational::zero(); n_max as usize + 1];
    let mut quasi_max = vec![BigRational::zero(); n_max as usize + 1];
    for w in &family {
        let h = harmonicity_series(&x, w, n_max);
        for (acc, v) in harm_max.iter_mut().zip(&h) {
            if v > acc {
                *acc = v.clone();
            }
        }
        for l in Letter::ALL {
            let q = quasi_invariance_series(&x, l, w, n_max);
            for (acc, v) in quasi_max.iter_mut().zip(&q) {
                if v > acc {
                    *acc = v.clone();
                }
            }
        }
    }

    // worst deviation of empirical cylinder mass from the uniform value
    // over the deepest requested cylinders
    let depth = cfg.cylinder_depth;
    let mut weak_gap = vec![BigRational::zero(); n_max as usize + 1];
    if depth >= 1 {
        let uniform = BigRational::new(
            1.into(),
            num::BigInt::from(4) * num::pow(num::BigInt::from(3), depth as usize - 1),
        );
        for w in folner::examples::f2::cylinders_of_depth(depth) {
            let series = cylinder_mass_series(&x, &w, n_max);
            for (n, v) in series.iter().enumerate() {
                let nu = v / mass[n].clone();
                let gap = (nu - uniform.clone()).abs();
                if gap > weak_gap[n] {
                    weak_gap[n] = gap;
                }
            }
        }
    }

    let mut report = Report::new(&cfg.example);
    report.settings = common_settings(cfg);
    report
        .settings
        .insert("base".into(), json!(x.to_string()));
    report
        .settings
        .insert("cylinder_depth".into(), json!(depth));
    report.columns = vec![
        "n".into(),
        "mass".into(),
        "boundary_ratio".into(),
        "delta_a".into(),
        "delta_A".into(),
        "delta_b".into(),
        "delta_B".into(),
        "harmonicity_defect_max".into(),
        "quasi_invariance_defect_max".into(),
        "weak_star_gap".into(),
    ];
    for n in 0..=n_max as usize {
        let mut row = Map::new();
        row.insert("n".into(), json!(n));
        row.insert("mass".into(), scalar(cfg.arithmetic, &mass[n]));
        row.insert(
            "boundary_ratio".into(),
            scalar(cfg.arithmetic, &(boundary[n].clone() / mass[n].clone())),
        );
        for (l, series) in &diff {
            row.insert(
                format!("delta_{}", l.to_char()),
                scalar(cfg.arithmetic, &(series[n].clone() / mass[n].clone())),
            );
        }
        row.insert(
            "harmonicity_defect_max".into(),
            scalar(cfg.arithmetic, &(harm_max[n].clone() / mass[n].clone())),
        );
        row.insert(
            "quasi_invariance_defect_max".into(),
            scalar(cfg.arithmetic, &(quasi_max[n].clone() / mass[n].clone())),
        );
        row.insert(
            "weak_star_gap".into(),
            scalar(cfg.arithmetic, &weak_gap[n]),
        );
        report.rows.push(row);
    }
    Ok(report)
}

/// Weight of one germ under a tabulated cocycle, relative to the base.
fn tabulated_weight(
    table: &TabulatedCocycle,
    z: &OrbitPoint,
) -> Result<BigRational, CliError> {
    let key = z.germ().to_string();
    let level = table.levels.get(&key).ok_or_else(|| {
        CliError::Horizon(format!("tabulated cocycle has no entry for germ {key}"))
    })?;
    Ok(folner::examples::f2::three_pow::<BigRational>(-level))
}

fn run_f2_tabulated(
    cfg: &RunConfig,
    x: &Arc<BoundaryPoint>,
    table: &TabulatedCocycle,
) -> Result<Report, CliError> {
    let mut report = Report::new(&cfg.example);
    report.settings = common_settings(cfg);
    report
        .settings
        .insert("base".into(), json!(x.to_string()));
    report.settings.insert("cocycle".into(), json!("tabulated"));
    report.columns = vec![
        "n".into(),
        "mass".into(),
        "delta_a".into(),
        "delta_A".into(),
        "delta_b".into(),
        "delta_B".into(),
    ];
    for n in 0..=cfg.n_max {
        let set = f2_averaging_set(x, n);
        let mut mass = BigRational::zero();
        for z in &set {
            mass += tabulated_weight(table, z)?;
        }
        let mut row = Map::new();
        row.insert("n".into(), json!(n));
        row.insert("mass".into(), scalar(cfg.arithmetic, &mass));
        for gamma in Letter::ALL {
            let moved = shift_difference(&set, gamma);
            let mut dmass = BigRational::zero();
            for z in &moved {
                dmass += tabulated_weight(table, z)?;
            }
            row.insert(
                format!("delta_{}", gamma.to_char()),
                scalar(cfg.arithmetic, &(dmass / mass.clone())),
            );
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// Difference set under one generator, computed through the total group
/// action rather than a finite window.
fn shift_difference(set: &BTreeSet<OrbitPoint>, gamma: Letter) -> BTreeSet<OrbitPoint> {
    let mut out = BTreeSet::new();
    for z in set {
        if !set.contains(&z.apply(gamma)) {
            out.insert(z.clone());
        }
        let back = z.apply(gamma.inverse());
        if !set.contains(&back) {
            out.insert(back);
        }
    }
    out
}

fn run_grid(cfg: &RunConfig, d: u32) -> Result<Report, CliError> {
    let window = grid_window(d, cfg.n_max + 2).map_err(|e| CliError::Config(e.to_string()))?;
    let axes = &["x", "y", "z"][..d as usize];
    let mut report = Report::new(&cfg.example);
    report.settings = common_settings(cfg);
    report.settings.insert("dimension".into(), json!(d));
    report.columns = vec!["n".into(), "ball_size".into()];
    for axis in axes {
        report.columns.push(format!("ratio_{axis}"));
    }
    report.columns.push("growth_ratio".into());
    for n in 1..=cfg.n_max {
        let ball = grid_ball(d, n).map_err(|e| CliError::Config(e.to_string()))?;
        let mut row = Map::new();
        row.insert("n".into(), json!(n));
        row.insert(
            "ball_size".into(),
            json!(ball_size(d, n).map_err(|e| CliError::Config(e.to_string()))?),
        );
        for axis in axes {
            let r = classic_ratio(&window, &ball, &format!("{axis}+"))
                .map_err(|e| CliError::Config(e.to_string()))?;
            row.insert(format!("ratio_{axis}"), scalar(cfg.arithmetic, &r));
        }
        let growth =
            subexponential_ratio(&window, &[0, 0, 0], n).map_err(window_error_of)?;
        row.insert("growth_ratio".into(), scalar(cfg.arithmetic, &growth));
        report.rows.push(row);
    }
    Ok(report)
}

fn window_error_of(e: folner::averaging::AveragingError) -> CliError {
    match e {
        folner::averaging::AveragingError::Window(w) => window_error(w),
        other => CliError::Config(other.to_string()),
    }
}

fn run_continuum(cfg: &RunConfig, lambda: Option<f64>) -> Result<Report, CliError> {
    let mut report = Report::new(&cfg.example);
    report.settings = common_settings(cfg);
    report
        .settings
        .insert("quad_tol".into(), float_setting(cfg.quad_tol));
    if let Some(l) = lambda {
        report.settings.insert("lambda".into(), float_setting(l));
    }
    report.columns = vec![
        "n".into(),
        "area_closed".into(),
        "area_quadrature".into(),
        "area_rel_gap".into(),
        "length_closed".into(),
        "length_quadrature".into(),
        "length_rel_gap".into(),
        "isoperimetric_ratio".into(),
        "scaled_ratio".into(),
        "evaluations".into(),
    ];
    for n in 1..=cfg.n_max {
        let dom = domain_for(n, lambda).map_err(continuum_error)?;
        let check = dom
            .quadrature_validate(cfg.quad_tol)
            .map_err(continuum_error)?;
        let ratio = dom.isoperimetric_ratio();
        let mut row = Map::new();
        row.insert("n".into(), json!(n));
        row.insert("area_closed".into(), float(check.area_closed));
        row.insert("area_quadrature".into(), float(check.area_quadrature));
        row.insert("area_rel_gap".into(), float(check.area_rel_gap));
        row.insert("length_closed".into(), float(check.length_closed));
        row.insert("length_quadrature".into(), float(check.length_quadrature));
        row.insert("length_rel_gap".into(), float(check.length_rel_gap));
        row.insert("isoperimetric_ratio".into(), float(ratio));
        row.insert("scaled_ratio".into(), float(ratio * n as f64));
        row.insert("evaluations".into(), json!(check.evaluations));
        report.rows.push(row);
    }
    Ok(report)
}

fn float_setting(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn domain_for(n: u32, lambda: Option<f64>) -> Result<LeafDomain, ContinuumError> {
    match lambda {
        None => horocycle_domain(n),
        Some(l) => sol_domain(n, l),
    }
}
