//! The `verify` subcommand: deterministic self-checks per example.
//! Every check reports one pass/fail line with the measured extreme.

use std::sync::Arc;

use num::{BigRational, Zero};
use serde_json::json;

use folner::averaging::subexponential_ratio;
use folner::cocycle::{harmonic_defect_at, Cocycle};
use folner::examples::f2::levelwise::{
    averaging_mass_series, boundary_mass_series, cylinder_mass_series, harmonicity_series,
    quasi_invariance_series,
};
use folner::examples::f2::{
    busemann_cocycle, cylinders_of_depth, orbit_window, BoundaryPoint, Letter, OrbitPoint,
};
use folner::examples::grid::{ball_size, grid_ball, grid_window, shift_difference_size};
use folner::examples::sol::sol_domain;

use crate::config::RunConfig;
use crate::report::Report;
use crate::runner::{domain_for, rational_string};
use crate::CliError;

pub fn verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut report = match cfg.example.as_str() {
        "f2-boundary" => verify_f2(cfg)?,
        "grid-1d" => verify_grid(cfg, 1)?,
        "grid-2d" => verify_grid(cfg, 2)?,
        "grid-3d" => verify_grid(cfg, 3)?,
        "horocycle" => verify_continuum(cfg, None)?,
        "sol" => verify_continuum(cfg, Some(cfg.lambda.expect("validated")))?,
        other => return Err(CliError::Config(format!("unknown example {other:?}"))),
    };
    report.settings.insert("n_max".into(), json!(cfg.n_max));
    Ok(report)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn verify_f2(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = Arc::new(
        BoundaryPoint::parse(&cfg.preperiod, &cfg.period)
            .map_err(|e| CliError::Config(e.to_string()))?,
    );
    let mut report = Report::new(&cfg.example);
    report
        .settings
        .insert("base".into(), json!(x.to_string()));
    if cfg.cocycle.is_some() {
        return Err(CliError::Config(
            "verify covers the built-in weight cocycle; run a tabulated cocycle with `run`".into(),
        ));
    }
    let n_max = cfg.n_max;

    let mass = averaging_mass_series(&x, n_max);
    let linear = (0..=n_max as usize).all(|n| mass[n] == rat(n as i64 + 1, 1));
    report.push_check(
        "mass-linear",
        linear,
        format!("weighted set mass equals n + 1 for n <= {n_max}"),
    );

    let boundary = boundary_mass_series(&x, n_max);
    let two = (1..=n_max as usize).all(|n| boundary[n] == rat(2, 1));
    report.push_check(
        "boundary-mass-two",
        two,
        format!("weighted boundary mass equals 2 for 1 <= n <= {n_max}"),
    );

    let delta: Cocycle<OrbitPoint, BigRational> = busemann_cocycle(&x);
    let basepoint = OrbitPoint::base_point(Arc::clone(&x));
    let window = orbit_window(&x, 5);
    let interior = window
        .ball(&basepoint, 4)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut worst = BigRational::zero();
    for z in &interior {
        let d = harmonic_defect_at(&delta, &window, z, &basepoint)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if d > worst {
            worst = d;
        }
    }
    report.push_check(
        "interior-harmonicity",
        worst.is_zero(),
        format!(
            "max defect {} over {} interior vertices",
            rational_string(&worst),
            interior.len()
        ),
    );

    // the decay bound: unnormalized defect series never exceed
    // 2 * sup|f| * (number of generators) * (boundary mass)
    let family = crate::runner::cylinder_family(cfg.cylinder_depth.max(1));
    let mut worst_series = BigRational::zero();
    for w in &family {
        for v in harmonicity_series(&x, w, n_max) {
            if v > worst_series {
                worst_series = v;
            }
        }
        for l in Letter::ALL {
            for v in quasi_invariance_series(&x, l, w, n_max) {
                if v > worst_series {
                    worst_series = v;
                }
            }
        }
    }
    report.push_check(
        "defect-decay-bound",
        worst_series <= rat(16, 1),
        format!(
            "max unnormalized defect {} over {} cylinders (bound 16)",
            rational_string(&worst_series),
            family.len()
        ),
    );

    let depth = cfg.cylinder_depth.max(1);
    let mut partition_ok = true;
    for d in 1..=depth {
        let mut acc = vec![BigRational::zero(); n_max as usize + 1];
        for w in cylinders_of_depth(d) {
            let series = cylinder_mass_series(&x, &w, n_max);
            for (a, v) in acc.iter_mut().zip(series.iter()) {
                *a += v.clone();
            }
        }
        partition_ok &= acc == mass;
    }
    report.push_check(
        "cylinder-partition",
        partition_ok,
        format!("depth <= {depth} cylinder masses sum to the set mass"),
    );

    Ok(report)
}

fn verify_grid(cfg: &RunConfig, d: u32) -> Result<Report, CliError> {
    let mut report = Report::new(&cfg.example);
    report.settings.insert("dimension".into(), json!(d));
    let count_cap = cfg.n_max.min(20);
    let mut counts_ok = true;
    for n in 0..=count_cap {
        let ball = grid_ball(d, n).map_err(|e| CliError::Config(e.to_string()))?;
        counts_ok &= ball.len() as u64 == ball_size(d, n).map_err(|e| CliError::Config(e.to_string()))?;
    }
    report.push_check(
        "ball-count-closed-form",
        counts_ok,
        format!("enumerated ball sizes match the closed form for n <= {count_cap}"),
    );

    let diff_cap = cfg.n_max.min(12);
    let window = grid_window(d, diff_cap + 2).map_err(|e| CliError::Config(e.to_string()))?;
    let mut diffs_ok = true;
    let mut symmetric_ok = true;
    for n in 0..=diff_cap {
        let ball = grid_ball(d, n).map_err(|e| CliError::Config(e.to_string()))?;
        let expected = shift_difference_size(d, n).map_err(|e| CliError::Config(e.to_string()))?;
        let mut sizes = Vec::new();
        for axis in &["x", "y", "z"][..d as usize] {
            for suffix in ['+', '-'] {
                let moved = window
                    .difference_set(&ball, &format!("{axis}{suffix}"))
                    .map_err(|e| CliError::Config(e.to_string()))?;
                sizes.push(moved.len() as u64);
            }
        }
        diffs_ok &= sizes.iter().all(|s| *s == expected);
        symmetric_ok &= sizes.windows(2).all(|w| w[0] == w[1]);
    }
    report.push_check(
        "shift-difference-closed-form",
        diffs_ok,
        format!("difference set sizes match the closed form for n <= {diff_cap}"),
    );
    report.push_check(
        "axis-symmetry",
        symmetric_ok,
        "difference set sizes agree across every generator".into(),
    );

    if d == 2 {
        let mut bound_ok = true;
        let mut worst = BigRational::zero();
        for n in 1..=cfg.n_max.min(50) {
            let num = shift_difference_size(2, n).unwrap();
            let den = ball_size(2, n).unwrap();
            let ratio = BigRational::new((num as i64).into(), (den as i64).into());
            let scaled = ratio.clone() * rat(n as i64, 1);
            if scaled > worst {
                worst = scaled;
            }
            bound_ok &= ratio <= rat(8, n as i64);
        }
        report.push_check(
            "ratio-eight-over-n",
            bound_ok,
            format!("n * ratio stays at {} or below (bound 8)", rational_string(&worst)),
        );
    }

    let growth_cap = cfg.n_max.min(20);
    let growth_window =
        grid_window(d, growth_cap + 2).map_err(|e| CliError::Config(e.to_string()))?;
    let mut monotone_ok = true;
    let mut prev: Option<BigRational> = None;
    for n in 1..=growth_cap {
        let g = subexponential_ratio(&growth_window, &[0, 0, 0], n)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(p) = &prev {
            monotone_ok &= g <= *p;
        }
        prev = Some(g);
    }
    report.push_check(
        "growth-ratio-monotone",
        monotone_ok,
        format!("two-sided growth ratio is nonincreasing for n <= {growth_cap}"),
    );

    Ok(report)
}

fn verify_continuum(cfg: &RunConfig, lambda: Option<f64>) -> Result<Report, CliError> {
    let mut report = Report::new(&cfg.example);
    if let Some(l) = lambda {
        report.settings.insert("lambda".into(), json!(l));
    }
    let cap = cfg.n_max.min(20);

    let mut area_ok = true;
    let mut quad_ok = true;
    let mut worst_gap = 0.0f64;
    let mut length_ok = true;
    for n in 1..=cap {
        let dom = domain_for(n, lambda).map_err(|e| CliError::Config(e.to_string()))?;
        area_ok &= (dom.modified_area() - 2.0 * n as f64).abs() <= 1e-12 * n as f64;
        length_ok &= dom.modified_boundary_length() < 6.0;
        let check = dom.quadrature_validate(cfg.quad_tol).map_err(|e| {
            CliError::Horizon(format!("quadrature failed at n = {n}: {e}"))
        })?;
        quad_ok &= check.pass;
        worst_gap = worst_gap.max(check.area_rel_gap).max(check.length_rel_gap);
    }
    report.push_check(
        "area-closed-form",
        area_ok,
        format!("weighted area equals 2n for n <= {cap}"),
    );
    report.push_check(
        "quadrature-agreement",
        quad_ok,
        format!("worst relative gap {worst_gap:.3e} at tolerance {:.1e}", cfg.quad_tol),
    );
    report.push_check(
        "boundary-length-bound",
        length_ok,
        format!("weighted boundary length stays under 6 for n <= {cap}"),
    );

    if let Some(configured) = lambda {
        let mut invariant_ok = true;
        let mut worst = 0.0f64;
        for n in 1..=cap {
            let mut areas = Vec::new();
            for l in [configured, 1.5, 10.0] {
                let dom = sol_domain(n, l).map_err(|e| CliError::Config(e.to_string()))?;
                areas.push(dom.modified_area());
            }
            for pair in areas.windows(2) {
                let gap = (pair[0] - pair[1]).abs();
                worst = worst.max(gap);
                invariant_ok &= gap <= 1e-12 * n as f64;
            }
        }
        report.push_check(
            "area-lambda-invariance",
            invariant_ok,
            format!("worst cross-factor area gap {worst:.3e}"),
        );
    } else {
        let mut band_ok = true;
        let mut ran = false;
        for n in 10..=cap.max(10) {
            if n > cap {
                break;
            }
            ran = true;
            let dom = domain_for(n, None).map_err(|e| CliError::Config(e.to_string()))?;
            let scaled = dom.isoperimetric_ratio() * n as f64;
            band_ok &= (2.9..=3.0).contains(&scaled);
        }
        report.push_check(
            "scaled-ratio-band",
            band_ok,
            if ran {
                format!("n * ratio stays in [2.9, 3.0] for 10 <= n <= {cap}")
            } else {
                "vacuous: n_max is below 10".into()
            },
        );
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn every_catalog_entry_verifies_clean() {
        for entry in catalog::entries() {
            let cfg = entry.default_config();
            let report = verify(&cfg).unwrap();
            assert!(!report.checks.is_empty(), "{}", entry.name);
            for c in &report.checks {
                assert!(c.passed, "{}: {} ({})", entry.name, c.name, c.detail);
            }
        }
    }

    #[test]
    fn verify_report_is_deterministic() {
        let cfg = catalog::find("f2-boundary").unwrap().default_config();
        let a = verify(&cfg).unwrap().render(crate::config::Format::Json);
        let b = verify(&cfg).unwrap().render(crate::config::Format::Json);
        assert_eq!(a, b);
    }
}
