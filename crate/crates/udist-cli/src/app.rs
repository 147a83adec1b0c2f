//! Command implementations and the error-to-exit-code mapping.
//!
//! Exit codes: 0 success, 1 verification failure, 2 unreadable input or
//! schema violation, 3 invalid geometry or parameter domain, 4 requested
//! target outside the attainable range.

use std::fmt;
use std::path::Path;

use udist::geom::Point2;
use udist::oracle;
use udist::support::{DistanceDistribution, Support};

use crate::model::ModelFile;
use crate::output::{write_table, Format};
use crate::scene::SceneFile;

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Geometry(String),
    NoSolution(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::NoSolution(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Geometry(m) => write!(f, "geometry error: {m}"),
            CliError::NoSolution(m) => write!(f, "{m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<udist::Error> for CliError {
    fn from(err: udist::Error) -> Self {
        match err {
            udist::Error::NoSolution { .. } => CliError::NoSolution(err.to_string()),
            _ => CliError::Geometry(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Schema(format!("i/o: {err}"))
    }
}

pub fn load_scene(path: &Path) -> Result<SceneFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

pub fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

#[cfg(feature = "parallel")]
fn map_values<U: Send>(values: Vec<f64>, f: impl Fn(f64) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    values.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_values<U: Send>(values: Vec<f64>, f: impl Fn(f64) -> U + Sync + Send) -> Vec<U> {
    values.into_iter().map(f).collect()
}

pub fn cmd_cdf(
    scene_path: &Path,
    d_grid: Option<usize>,
    d: Option<f64>,
    out: Option<&Path>,
    format: Format,
) -> Result<(), CliError> {
    let scene = load_scene(scene_path)?;
    let site = scene.site()?;
    let support = scene.support()?;
    let dist = DistanceDistribution::new(site, &support)?;
    let b = dist.bounds();
    let ds: Vec<f64> = match (d_grid, d) {
        (Some(n), None) => {
            if n < 2 {
                return Err(CliError::Schema("--d-grid must be at least 2".into()));
            }
            (0..n)
                .map(|i| b.d_lo + (b.d_hi - b.d_lo) * i as f64 / (n - 1) as f64)
                .collect()
        }
        (None, Some(v)) => vec![v],
        _ => {
            return Err(CliError::Schema(
                "exactly one of --d-grid and --d is required".into(),
            ))
        }
    };
    let rows = map_values(ds, |x| vec![x, dist.cdf(x)]);
    write_table(out, format, &["d", "F"], &rows)?;
    Ok(())
}

pub fn cmd_pdf(
    scene_path: &Path,
    grid: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<(), CliError> {
    if grid < 2 {
        return Err(CliError::Schema("--grid must be at least 2".into()));
    }
    let scene = load_scene(scene_path)?;
    let site = scene.site()?;
    let support = scene.support()?;
    let dist = DistanceDistribution::new(site, &support)?;
    let b = dist.bounds();
    // Closed-form densities are evaluated exactly at cell midpoints;
    // supports without one (any polygon in the mix) fall back to the
    // cell-average difference table over the same range.
    let probe = dist.pdf(0.5 * (b.d_lo + b.d_hi));
    let rows: Vec<Vec<f64>> = if probe.is_some() {
        let ds: Vec<f64> = (0..grid)
            .map(|i| b.d_lo + (b.d_hi - b.d_lo) * (i as f64 + 0.5) / grid as f64)
            .collect();
        map_values(ds, |x| vec![x, dist.pdf(x).expect("probed closed-form")])
    } else {
        dist.density_table(grid)?
            .into_iter()
            .map(|(x, f)| vec![x, f])
            .collect()
    };
    write_table(out, format, &["d", "f"], &rows)?;
    Ok(())
}

fn parse_a_grid(spec: &str, log_a: bool) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |m: &str| CliError::Schema(format!("--a-grid '{spec}': {m}"));
    if parts.len() != 3 {
        return Err(bad("expected START:STOP:COUNT"));
    }
    let start: f64 = parts[0].parse().map_err(|_| bad("START is not a number"))?;
    let stop: f64 = parts[1].parse().map_err(|_| bad("STOP is not a number"))?;
    let count: usize = parts[2].parse().map_err(|_| bad("COUNT is not an integer"))?;
    if count < 2 {
        return Err(bad("COUNT must be at least 2"));
    }
    if !(stop > start) {
        return Err(bad("STOP must exceed START"));
    }
    if log_a && start <= 0.0 {
        return Err(bad("log spacing needs START > 0"));
    }
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            if log_a {
                (start.ln() + (stop.ln() - start.ln()) * t).exp()
            } else {
                start + (stop - start) * t
            }
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_hazard(
    model_path: &Path,
    a_grid: &str,
    log_a: bool,
    distance_cells: usize,
    magnitude_cells: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<(), CliError> {
    let file = load_model(model_path)?;
    let model = file.to_model(distance_cells, magnitude_cells)?;
    let thresholds = parse_a_grid(a_grid, log_a)?;
    let rates = model.hazard_curve(&thresholds);
    let t = file.horizon_years;
    let rows: Vec<Vec<f64>> = thresholds
        .iter()
        .zip(&rates)
        .map(|(a, rate)| vec![*a, rate * t, -(-(rate * t)).exp_m1()])
        .collect();
    write_table(out, format, &["a", "lambda_t", "p_exceed"], &rows)?;
    Ok(())
}

pub fn cmd_design_pga(
    model_path: &Path,
    epsilon: f64,
    tol: f64,
    distance_cells: usize,
    magnitude_cells: usize,
) -> Result<(), CliError> {
    let file = load_model(model_path)?;
    let model = file.to_model(distance_cells, magnitude_cells)?;
    let a = model.design_value(epsilon, file.horizon_years, tol)?;
    println!("{a:.16e}");
    Ok(())
}

fn quantile(cdf: impl Fn(f64) -> f64, lo: f64, hi: f64, q: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if cdf(m) < q {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Compares the exact CDF against seeded Monte Carlo at nine quantiles
/// (and against a raster overlap for plain polygon supports).  `tamper_bias`
/// is a negative-control hook: it shifts the "exact" values before the
/// comparison and must make verification fail.
pub fn cmd_verify(
    scene_path: &Path,
    samples: u64,
    seed: u64,
    tamper_bias: f64,
) -> Result<(), CliError> {
    let scene = load_scene(scene_path)?;
    let site = scene.site()?;
    let support = scene.support()?;
    let dist = DistanceDistribution::new(site, &support)?;
    let b = dist.bounds();
    println!(
        "verify {}: support range [{:.6e}, {:.6e}], {} samples, seed {}",
        scene_path.display(),
        b.d_lo,
        b.d_hi,
        samples,
        seed
    );

    let qs: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let ds: Vec<f64> = qs
        .iter()
        .map(|q| quantile(|x| dist.cdf(x), b.d_lo, b.d_hi, *q))
        .collect();
    let estimates =
        oracle::mc_cdf(&support, site, &ds, samples, seed).map_err(CliError::from)?;

    let mut worst: Option<(f64, String)> = None;
    let mut all_ok = true;
    for ((q, d), (p, se)) in qs.iter().zip(&ds).zip(&estimates) {
        let exact = dist.cdf(*d) + tamper_bias;
        let tol = (4.0 * se).max(1e-3);
        let err = (exact - p).abs();
        let ok = err <= tol;
        all_ok &= ok;
        let line = format!(
            "  q={q:.1} d={d:.6e} exact={exact:.6e} mc={p:.6e} se={se:.1e} |diff|={err:.2e} tol={tol:.2e} {}",
            if ok { "ok" } else { "FAIL" }
        );
        println!("{line}");
        if worst.as_ref().is_none_or(|(w, _)| err / tol > *w) {
            worst = Some((err / tol, line.trim_start().to_string()));
        }
    }

    // Polygon supports admit an independent planar raster check.
    if let Support::Polygon(p3) = &support {
        let proj = p3.frame().project(site);
        let d = ds[4];
        if d * d > proj.offset * proj.offset {
            let r = (d * d - proj.offset * proj.offset).sqrt();
            let overlap =
                oracle::raster_overlap(p3.planar(), Point2::new(proj.x, proj.y), r, 4000);
            let exact = dist.cdf(d) + tamper_bias;
            let est = overlap / p3.area();
            let err = (exact - est).abs();
            let tol = 5e-3;
            let ok = err <= tol;
            all_ok &= ok;
            let line = format!(
                "raster d={d:.6e} exact={exact:.6e} raster={est:.6e} |diff|={err:.2e} tol={tol:.1e} {}",
                if ok { "ok" } else { "FAIL" }
            );
            println!("  {line}");
            if worst.as_ref().is_none_or(|(w, _)| err / tol > *w) {
                worst = Some((err / tol, line));
            }
        }
    }

    let (_, worst_line) = worst.expect("at least one comparison");
    println!("worst offender: {worst_line}");
    if all_ok {
        println!("verification passed");
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "worst offender: {worst_line}"
        )))
    }
}
