//! Subcommands and their flags.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anisoperim::solver::{area_profile, constant_symmetric, solve_general, solve_p_limit, verify_lower_bound};
use anisoperim::{AnisotropicNorm, ConvexDomain, CutKind, IsoResult, NormFamily, SolverOptions, Vec2, WulffShape};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{from_core, CliError};
use crate::executor::RayonExecutor;
use crate::output::{self, Document, Num, Provenance, ResultJson, Svg, VerificationJson};
use crate::spec::{load, DomainSpec, Loaded, NormSpec};

const WULFF_POINTS: usize = 720;
const NORMAL_SAMPLES: usize = 16;
const DEFAULT_PROFILE_POINTS: usize = 16;
const DEFAULT_VERIFY_SAMPLES: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "anisoperim", version, about = "Anisotropic relative isoperimetric constants of convex planar domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Norm spec: a JSON file path or inline JSON.
    #[arg(long, global = true)]
    pub norm: Option<String>,
    /// Domain spec: a JSON file path or inline JSON.
    #[arg(long, global = true)]
    pub domain: Option<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random samples for verification.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Areas for `profile` as start:stop:count.
    #[arg(long, global = true)]
    pub k_grid: Option<String>,
    /// Solver setting override, name=value; repeatable.
    #[arg(long = "tol", global = true)]
    pub tol: Vec<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Compute C_H(Ω) and its minimizing cuts.
    Constant {
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Write the Wulff boundary as CSV and SVG.
    Wulff,
    /// Write the isoperimetric profile (k, μ(k)) as CSV.
    Profile,
    /// Test a constant against random cuts.
    Verify {
        /// A number, or `auto` to solve for C_H first.
        #[arg(long, default_value = "auto")]
        c: String,
    },
    /// Draw the domain, the minimizing cuts and the Wulff shape.
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    ClosedForm,
    Search,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Constant { .. } => "constant",
            Command::Wulff => "wulff",
            Command::Profile => "profile",
            Command::Verify { .. } => "verify",
            Command::Plot => "plot",
        }
    }
}

/// Validated inputs of a run.
struct Setup {
    norm_spec: Loaded<NormSpec>,
    norm: AnisotropicNorm,
    domain_spec: Option<Loaded<DomainSpec>>,
    domain: Option<ConvexDomain>,
    options: SolverOptions,
    tolerances: BTreeMap<String, Num>,
}

impl Setup {
    fn domain(&self) -> Result<&ConvexDomain, CliError> {
        self.domain.as_ref().ok_or_else(|| CliError::Spec("--domain is required".into()))
    }

    fn provenance(&self, cli: &Cli, samples: usize) -> Provenance {
        Provenance {
            tool: "anisoperim",
            version: anisoperim::VERSION,
            command: cli.command.name().into(),
            norm: self.norm_spec.raw.clone(),
            domain: self.domain_spec.as_ref().map(|d| d.raw.clone()),
            seed: cli.seed,
            samples,
            tolerances: self.tolerances.clone(),
        }
    }
}

fn apply_tolerances(overrides: &[String], options: &mut SolverOptions) -> Result<BTreeMap<String, Num>, CliError> {
    for item in overrides {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Spec(format!("--tol expects name=value, got '{item}'")))?;
        let name = name.trim();
        let value = value.trim();
        let real = || -> Result<f64, CliError> {
            match value.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
                _ => Err(CliError::Spec(format!("--tol {name}: '{value}' is not a nonnegative number"))),
            }
        };
        let count = || -> Result<usize, CliError> {
            match value.parse::<usize>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(CliError::Spec(format!("--tol {name}: '{value}' is not a positive integer"))),
            }
        };
        match name {
            "tie" => options.tie_rel_tol = real()?,
            "contact" => options.contact_tol = real()?,
            "nm_x_tol" => options.nelder_mead.x_tol = real()?,
            "nm_f_tol" => options.nelder_mead.f_tol = real()?,
            "nm_max_iter" => options.nelder_mead.max_iter = count()?,
            "chord_grid" => options.chord_grid = count()?,
            "arc_pair_grid" => options.arc_pair_grid = count()?,
            "arc_sweep_levels" => options.arc_sweep_levels = count()?,
            "seeds" => options.seeds = count()?,
            "profile_grid" => options.profile_grid = count()?,
            "max_reported" => options.max_reported = count()?,
            _ => return Err(CliError::Spec(format!("unknown tolerance '{name}'"))),
        }
    }
    let o = &*options;
    Ok(BTreeMap::from([
        ("tie".into(), Num(o.tie_rel_tol)),
        ("contact".into(), Num(o.contact_tol)),
        ("nm_x_tol".into(), Num(o.nelder_mead.x_tol)),
        ("nm_f_tol".into(), Num(o.nelder_mead.f_tol)),
        ("nm_max_iter".into(), Num(o.nelder_mead.max_iter as f64)),
        ("chord_grid".into(), Num(o.chord_grid as f64)),
        ("arc_pair_grid".into(), Num(o.arc_pair_grid as f64)),
        ("arc_sweep_levels".into(), Num(o.arc_sweep_levels as f64)),
        ("seeds".into(), Num(o.seeds as f64)),
        ("profile_grid".into(), Num(o.profile_grid as f64)),
        ("max_reported".into(), Num(o.max_reported as f64)),
    ]))
}

fn setup(cli: &Cli) -> Result<Setup, CliError> {
    let norm_arg = cli.norm.as_deref().ok_or_else(|| CliError::Spec("--norm is required".into()))?;
    let norm_spec: Loaded<NormSpec> = load(norm_arg, "norm")?;
    let norm = norm_spec.spec.build()?;
    let (domain_spec, domain) = match cli.domain.as_deref() {
        Some(arg) => {
            let spec: Loaded<DomainSpec> = load(arg, "domain")?;
            let domain = spec.spec.build(&norm)?;
            (Some(spec), Some(domain))
        }
        None => (None, None),
    };
    let mut options = SolverOptions {
        seed: cli.seed,
        executor: Arc::new(RayonExecutor),
        ..SolverOptions::default()
    };
    let tolerances = apply_tolerances(&cli.tol, &mut options)?;
    Ok(Setup {
        norm_spec,
        norm,
        domain_spec,
        domain,
        options,
        tolerances,
    })
}

/// Parses `start:stop:count` into `count` evenly spaced values, both ends included.
pub fn parse_k_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Spec(format!("--k-grid expects start:stop:count, got '{s}'"));
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect())
}

fn centrosymmetric(omega: &ConvexDomain) -> bool {
    omega.symmetric_about().is_some() || omega.is_centrosymmetric(1e-9 * omega.diameter()).is_some()
}

/// Picks the solver from the norm family and the symmetry of the domain.
fn solve(norm: &AnisotropicNorm, omega: &ConvexDomain, options: &SolverOptions, method: MethodArg) -> Result<IsoResult, CliError> {
    let result = match method {
        MethodArg::ClosedForm => constant_symmetric(norm, omega, options),
        MethodArg::Search => solve_general(norm, omega, options),
        MethodArg::Auto if matches!(norm.family(), NormFamily::MaxApprox { .. }) => solve_p_limit(norm, omega, options),
        MethodArg::Auto if centrosymmetric(omega) => constant_symmetric(norm, omega, options),
        MethodArg::Auto => solve_general(norm, omega, options),
    };
    result.map_err(from_core)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

#[derive(Serialize)]
struct Diagnostics {
    error: String,
}

/// Writes `diagnostics.json` for numeric failures before passing the error on.
fn record_numeric<T>(cli: &Cli, setup: &Setup, samples: usize, r: Result<T, CliError>) -> Result<T, CliError> {
    if let Err(CliError::Numeric(msg)) = &r {
        let doc = Document {
            provenance: setup.provenance(cli, samples),
            body: Diagnostics { error: msg.clone() },
        };
        write(&cli.out, "diagnostics.json", &output::to_json(&doc))?;
    }
    r
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let setup = setup(cli)?;
    match &cli.command {
        Command::Constant { method } => cmd_constant(cli, &setup, *method),
        Command::Wulff => cmd_wulff(cli, &setup),
        Command::Profile => cmd_profile(cli, &setup),
        Command::Verify { c } => cmd_verify(cli, &setup, c),
        Command::Plot => cmd_plot(cli, &setup),
    }
}

fn cmd_constant(cli: &Cli, setup: &Setup, method: MethodArg) -> Result<(), CliError> {
    let omega = setup.domain()?;
    let samples = cli.samples.unwrap_or(0);
    let options = SolverOptions {
        verify_samples: samples,
        ..setup.options.clone()
    };
    let result = record_numeric(cli, setup, samples, solve(&setup.norm, omega, &options, method))?;
    let doc = Document {
        provenance: setup.provenance(cli, samples),
        body: ResultJson::from(&result),
    };
    write(&cli.out, "constant.json", &output::to_json(&doc))?;
    println!("c_h = {}", result.c_h);
    println!("method = {}", result.method.name());
    match result.verification {
        Some(v) if v.violations > 0 => Err(CliError::Violation {
            violations: v.violations,
            samples: v.samples,
        }),
        _ => Ok(()),
    }
}

fn cmd_wulff(cli: &Cli, setup: &Setup) -> Result<(), CliError> {
    let norm = setup.norm_spec.spec.drawable()?;
    let shape = WulffShape::new(&norm).map_err(from_core)?;
    let boundary: Vec<Vec2> = shape.polyline(WULFF_POINTS).into_iter().map(|(_, p)| p).collect();

    let mut extent = boundary.clone();
    let mut arrows = Vec::with_capacity(NORMAL_SAMPLES);
    let scale = match &setup.domain {
        Some(omega) => 0.15 * omega.diameter(),
        None => 0.3,
    };
    for i in 0..NORMAL_SAMPLES {
        let (base, nu) = match &setup.domain {
            Some(omega) => {
                let s = (i as f64 + 0.5) / NORMAL_SAMPLES as f64;
                let frame = omega.boundary_frame_one_sided(s, anisoperim::geometry::OneSide::After);
                (frame.point, frame.normal)
            }
            None => {
                let theta = TAU * i as f64 / NORMAL_SAMPLES as f64;
                (shape.boundary_point(theta), Vec2::from_angle(theta))
            }
        };
        let grad = norm.gradient(nu).map_err(from_core)?;
        arrows.push((base, base + nu * scale, base + grad * scale));
        extent.extend([base + nu * scale, base + grad * scale]);
    }
    let domain_pts = setup.domain.as_ref().map(output::domain_points);
    if let Some(pts) = &domain_pts {
        extent.extend_from_slice(pts);
    }

    let mut svg = Svg::covering(&extent);
    if let Some(pts) = &domain_pts {
        svg.polyline(pts, true, "#444444", 1.5, "#f2f2f2");
    }
    svg.polyline(&boundary, true, "#1f5fbf", 1.5, "none");
    for (base, nu_tip, grad_tip) in arrows {
        svg.arrow(base, nu_tip, "#888888");
        svg.arrow(base, grad_tip, "#c0392b");
        svg.dot(base, "#222222");
    }
    svg.caption(&format!("Wulff shape of the {} norm; grey: normal, red: gradient of H", setup.norm.family().name()));

    write(&cli.out, "wulff.csv", &output::wulff_csv(&shape, WULFF_POINTS))?;
    write(&cli.out, "wulff.svg", &svg.finish())?;
    println!("kappa = {}", shape.kappa());
    Ok(())
}

fn cmd_profile(cli: &Cli, setup: &Setup) -> Result<(), CliError> {
    let omega = setup.domain()?;
    let half = 0.5 * omega.area();
    let ks = match &cli.k_grid {
        Some(s) => parse_k_grid(s)?,
        None => (1..=DEFAULT_PROFILE_POINTS)
            .map(|i| half * i as f64 / DEFAULT_PROFILE_POINTS as f64)
            .collect(),
    };
    let points = area_profile(&setup.norm, omega, &ks, &setup.options).map_err(from_core);
    let points = record_numeric(cli, setup, 0, points)?;
    write(&cli.out, "profile.csv", &output::profile_csv(&points))?;
    if let Some(last) = points.last() {
        println!("mu({}) = {}", last.k, last.mu);
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyBody {
    c_source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<&'static str>,
    passed: bool,
    #[serde(flatten)]
    summary: VerificationJson,
}

fn cmd_verify(cli: &Cli, setup: &Setup, c_arg: &str) -> Result<(), CliError> {
    let omega = setup.domain()?;
    let samples = cli.samples.unwrap_or(DEFAULT_VERIFY_SAMPLES);
    let (c, source, method) = if c_arg.trim() == "auto" {
        let result = record_numeric(cli, setup, samples, solve(&setup.norm, omega, &setup.options, MethodArg::Auto))?;
        (result.c_h, "auto", Some(result.method.name()))
    } else {
        let c: f64 = c_arg
            .trim()
            .parse()
            .map_err(|_| CliError::Spec(format!("--c expects a number or 'auto', got '{c_arg}'")))?;
        (c, "given", None)
    };
    // The sampler needs a smooth norm; a max-norm run samples with its last approximant.
    let norm = setup.norm_spec.spec.drawable()?;
    let summary = verify_lower_bound(&norm, omega, c, samples, cli.seed, &setup.options).map_err(from_core);
    let summary = record_numeric(cli, setup, samples, summary)?;
    let doc = Document {
        provenance: setup.provenance(cli, samples),
        body: VerifyBody {
            c_source: source,
            method,
            passed: summary.violations == 0,
            summary: VerificationJson::from(&summary),
        },
    };
    write(&cli.out, "verify.json", &output::to_json(&doc))?;
    println!("c = {c}");
    println!("violations = {} of {}", summary.violations, summary.samples);
    println!("worst_ratio = {}", summary.worst_ratio);
    if summary.violations > 0 {
        return Err(CliError::Violation {
            violations: summary.violations,
            samples: summary.samples,
        });
    }
    Ok(())
}

fn cmd_plot(cli: &Cli, setup: &Setup) -> Result<(), CliError> {
    let omega = setup.domain()?;
    let result = record_numeric(cli, setup, 0, solve(&setup.norm, omega, &setup.options, MethodArg::Auto))?;
    let domain_pts = output::domain_points(omega);
    let cuts: Vec<Vec<Vec2>> = result.minimizers.iter().map(|m| output::cut_points(m, 256)).collect();

    let mut overlays = Vec::new();
    let drawable = setup.norm_spec.spec.drawable().ok();
    if let Some(norm) = &drawable {
        let shape = WulffShape::new(norm).map_err(from_core)?;
        let unit: Vec<Vec2> = shape.polyline(WULFF_POINTS).into_iter().map(|(_, p)| p).collect();
        for m in &result.minimizers {
            if let CutKind::WulffArc { arc, .. } = &m.cut.kind {
                overlays.push(unit.iter().map(|&p| arc.center + p * arc.radius).collect::<Vec<_>>());
            }
        }
        if overlays.is_empty() {
            // No arc to complete: show the Wulff shape at the centroid, a quarter of the diameter across.
            let width = unit.iter().map(|p| p.norm()).fold(0.0, f64::max) * 2.0;
            let k = 0.25 * omega.diameter() / width;
            let c = omega.centroid();
            overlays.push(unit.iter().map(|&p| c + p * k).collect());
        }
    }

    let mut svg = Svg::covering(&domain_pts);
    svg.polyline(&domain_pts, true, "#444444", 1.5, "#f2f2f2");
    for o in &overlays {
        svg.dashed(o, true, "#1f5fbf");
    }
    for pts in &cuts {
        svg.polyline(pts, false, "#c0392b", 2.0, "none");
        if let (Some(a), Some(b)) = (pts.first(), pts.last()) {
            svg.dot(*a, "#c0392b");
            svg.dot(*b, "#c0392b");
        }
    }
    svg.caption(&format!(
        "C_H = {} ({}, {} minimizer{}{})",
        result.c_h,
        result.method.name(),
        result.minimizers.len(),
        if result.minimizers.len() == 1 { "" } else { "s" },
        if result.continuum { ", continuum" } else { "" }
    ));
    write(&cli.out, "plot.svg", &svg.finish())?;
    println!("c_h = {}", result.c_h);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_grid_parsing() {
        assert_eq!(parse_k_grid("0.5:1.5:3").unwrap(), vec![0.5, 1.0, 1.5]);
        assert_eq!(parse_k_grid("2:9:1").unwrap(), vec![2.0]);
        assert!(parse_k_grid("1:2").is_err());
        assert!(parse_k_grid("1:2:0").is_err());
        assert!(parse_k_grid("a:2:3").is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let mut o = SolverOptions::default();
        let t = apply_tolerances(&["tie=1e-8".into(), "chord_grid=64".into()], &mut o).unwrap();
        assert_eq!(o.tie_rel_tol, 1e-8);
        assert_eq!(o.chord_grid, 64);
        assert_eq!(t["chord_grid"], Num(64.0));
        assert!(apply_tolerances(&["bogus=1".into()], &mut o).is_err());
        assert!(apply_tolerances(&["tie".into()], &mut o).is_err());
        assert!(apply_tolerances(&["seeds=-1".into()], &mut o).is_err());
    }
}
