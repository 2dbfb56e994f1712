use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use corona_lab::blaschke::carleson_diagnostics;
use corona_lab::corona::{
    bezout_exact, bezout_numeric, check_certificate, cluster_scenario, measure_delta, BezoutCertificate,
    CoronaInstance,
};
use corona_lab::hoffman::{compose_trace, l2_distance_to_identity};
use corona_lab::ladder::ladder_construct;
use corona_lab::measures::{
    align_arcs, fit_simple_density, graded_partition, pushforward_density, quartiles, AlignCase, FitOptions,
};
use corona_lab::{BlaschkeProduct, DiscPoint, DiscSequence, OrthogonalArc};

use crate::cli::{Command, Common, Method};
use crate::config::{self, ConfigError, PartitionSpec};
use crate::selftest;

/// A run that completed but did not meet its acceptance condition.
#[derive(Debug)]
pub struct Failed {
    pub kind: &'static str,
    pub message: String,
}

impl fmt::Display for Failed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for Failed {}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit<T: Serialize>(common: &Common, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(common.out.as_deref(), &text)
}

fn inline<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> Result<T, ConfigError> {
    config::parse(flag, text)
}

fn point_arg(flag: &str, text: &str) -> Result<DiscPoint, ConfigError> {
    inline(flag, text)
}

/// A single `[re, im]` or a list of them; points may lie on the circle.
fn points_arg(flag: &str, text: &str) -> Result<Vec<Complex64>, ConfigError> {
    let value: serde_json::Value = inline(flag, text)?;
    let one = value.as_array().is_some_and(|a| a.first().is_some_and(|x| x.is_number()));
    if one {
        Ok(vec![inline(flag, text)?])
    } else {
        inline(flag, text)
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::new(flag, "", "missing required argument"))
}

fn instance(path: &Path) -> Result<CoronaInstance> {
    let f: config::InstanceFile = config::load(path)?;
    Ok(CoronaInstance::new(f.functions, f.grid)?)
}

pub fn run(command: Command) -> Result<()> {
    let (name, common) = describe(&command);
    if common.selftest {
        let report = selftest::run(name, common.seed);
        emit(common, &report)?;
        if report.failed > 0 {
            return Err(Failed {
                kind: "selftest",
                message: format!("{} of {} checks failed", report.failed, report.checks.len()),
            }
            .into());
        }
        return Ok(());
    }
    match command {
        Command::CoronaSolve {
            input,
            method,
            degree_cap,
            tol,
            common,
        } => {
            let inst = instance(&required(input, "--in")?)?;
            let polynomial = inst.functions.iter().all(|f| f.as_polynomial().is_some());
            let cert = match method {
                Method::Exact => bezout_exact(&inst.functions, &inst.grid)?,
                Method::Auto if polynomial => bezout_exact(&inst.functions, &inst.grid)?,
                Method::Auto | Method::Numeric => bezout_numeric(&inst, degree_cap, tol)?,
            };
            emit(&common, &cert)
        }
        Command::CoronaCheck {
            input,
            cert,
            tol,
            common,
        } => {
            let inst = instance(&required(input, "--in")?)?;
            let cert: BezoutCertificate = config::load_artifact(&required(cert, "--cert")?)?;
            let report = check_certificate(&inst, &cert, tol, common.seed);
            emit(&common, &report)?;
            if !report.passed {
                return Err(Failed {
                    kind: "check_failed",
                    message: format!("residual {:e} exceeds {:e}", report.residual_sup, tol),
                }
                .into());
            }
            Ok(())
        }
        Command::Delta { input, common } => {
            let f: config::InstanceFile = config::load(&required(input, "--in")?)?;
            let report = measure_delta(&f.functions, &f.grid)?;
            emit(&common, &json!({ "delta": report.delta, "argmin": report.argmin, "grid": f.grid }))
        }
        Command::InterpCheck {
            input,
            points,
            threshold,
            common,
        } => {
            let pts: Vec<DiscPoint> = match (input, points) {
                (Some(path), _) => config::load::<config::SequenceFile>(&path)?.points,
                (None, Some(text)) => inline("--points", &text)?,
                (None, None) => return Err(ConfigError::new("--points", "", "missing required argument").into()),
            };
            let diag = carleson_diagnostics(&pts);
            let seq = DiscSequence::new(pts);
            emit(
                &common,
                &json!({
                    "constant": diag.constant,
                    "tail": diag.tail,
                    "thin": diag.is_thin(threshold),
                    "threshold": threshold,
                    "blaschke_sum": seq.blaschke_sum(),
                }),
            )
        }
        Command::BlaschkeEval {
            zeros,
            at,
            rotation,
            eta,
            common,
        } => {
            let zeros: Vec<DiscPoint> = inline("--zeros", &required(zeros, "--zeros")?)?;
            let at = points_arg("--at", &required(at, "--at")?)?;
            let b = BlaschkeProduct::with_rotation(zeros, rotation);
            let values = at
                .iter()
                .map(|&z| {
                    let v = b.evaluate(z)?;
                    Ok(json!({ "z": z, "value": v, "modulus": v.norm() }))
                })
                .collect::<corona_lab::Result<Vec<_>>>()?;
            let mut out = json!({ "points": values });
            if let Some(eta) = eta {
                out["lower_bound"] = json!(b.modulus_lower_bound(eta)?);
                out["eta"] = json!(eta);
            }
            emit(&common, &out)
        }
        Command::Ladder { input, common } => {
            let f: config::LadderFile = config::load(&required(input, "--in")?)?;
            let lad = ladder_construct(&f.zeros, &DiscSequence::new(f.candidates), &f.config)?;
            emit(&common, &lad)
        }
        Command::HoffmanTrace { input, csv, common } => {
            let f: config::TraceFile = config::load(&required(input, "--in")?)?;
            let trace = compose_trace(
                &f.function,
                &DiscSequence::new(f.sequence),
                f.grid_radius,
                f.grid_size,
                f.threshold,
            )?;
            if let Some(path) = csv {
                write_text(Some(&path), &trace.to_csv())?;
            }
            emit(&common, &trace)
        }
        Command::L2Identity {
            zeros,
            c,
            n_fft,
            coeffs,
            common,
        } => {
            let zeros: Vec<DiscPoint> = inline("--zeros", &required(zeros, "--zeros")?)?;
            let c = point_arg("--c", &required(c, "--c")?)?;
            let report = l2_distance_to_identity(&BlaschkeProduct::new(zeros), c, n_fft)?;
            let mut out = serde_json::to_value(&report)?;
            if !coeffs {
                if let Some(map) = out.as_object_mut() {
                    map.remove("coeffs");
                }
            }
            emit(&common, &out)
        }
        Command::MeasureFit { input, common } => {
            let f: config::FitFile = config::load(&required(input, "--in")?)?;
            let mut options = FitOptions {
                nodes: common.nodes,
                ..FitOptions::default()
            };
            if let Some(max_iter) = f.max_iter {
                options.max_iter = max_iter;
            }
            let cells = match f.partition {
                PartitionSpec::Cells(cells) => cells,
                PartitionSpec::Graded {
                    window,
                    cells_per_side,
                    ratio,
                } => {
                    options.window = window;
                    graded_partition(window, cells_per_side, ratio)?
                }
            };
            let fit = fit_simple_density(&f.targets, &cells, f.eps, &options)?;
            emit(&common, &fit)
        }
        Command::Quartiles { density, common } => {
            let s = config::load::<config::DensityFile>(&required(density, "--density")?)?.density()?;
            emit(&common, &quartiles(&s))
        }
        Command::Pushforward {
            density,
            c,
            samples,
            csv,
            common,
        } => {
            let s = config::load::<config::DensityFile>(&required(density, "--density")?)?.density()?;
            let c = point_arg("--c", &required(c, "--c")?)?;
            let u = pushforward_density(&s, c);
            let grid: Vec<(f64, f64)> = (0..samples)
                .map(|k| {
                    let t = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                    (t, u.eval(t))
                })
                .collect();
            if let Some(path) = csv {
                let mut text = String::from("theta,density\n");
                for (t, v) in &grid {
                    text.push_str(&format!("{t},{v}\n"));
                }
                write_text(Some(&path), &text)?;
            }
            emit(
                &common,
                &json!({
                    "c": c,
                    "mass": u.mass(common.nodes),
                    "breakpoints": u.breakpoints(),
                    "samples": grid,
                }),
            )
        }
        Command::AlignArcs {
            density,
            alpha,
            beta,
            case,
            common,
        } => {
            let s = config::load::<config::DensityFile>(&required(density, "--density")?)?.density()?;
            let target = OrthogonalArc::new(required(alpha, "--alpha")?, required(beta, "--beta")?)?;
            let case: AlignCase = required(case, "--case")?
                .parse()
                .map_err(|e: corona_lab::Error| ConfigError::new("--case", "", e.to_string()))?;
            let aligned = align_arcs(&s, &target, case)?;
            let q = quartiles(&aligned);
            let miss = OrthogonalArc::new(q.alpha, q.beta)?.distance_to(target.midpoint().z());
            emit(
                &common,
                &json!({
                    "density": aligned,
                    "quartiles": q,
                    "target_midpoint": target.midpoint(),
                    "midpoint_distance": miss,
                }),
            )
        }
        Command::ClusterScenario { input, common } => {
            let f: config::ClusterFile = config::load(&required(input, "--in")?)?;
            let report = cluster_scenario(&f.functions, &DiscSequence::new(f.sequence), f.eps)?;
            emit(&common, &report)
        }
    }
}

fn describe(command: &Command) -> (&'static str, &Common) {
    match command {
        Command::CoronaSolve { common, .. } => ("corona-solve", common),
        Command::CoronaCheck { common, .. } => ("corona-check", common),
        Command::Delta { common, .. } => ("delta", common),
        Command::InterpCheck { common, .. } => ("interp-check", common),
        Command::BlaschkeEval { common, .. } => ("blaschke-eval", common),
        Command::Ladder { common, .. } => ("ladder", common),
        Command::HoffmanTrace { common, .. } => ("hoffman-trace", common),
        Command::L2Identity { common, .. } => ("l2-identity", common),
        Command::MeasureFit { common, .. } => ("measure-fit", common),
        Command::Quartiles { common, .. } => ("quartiles", common),
        Command::Pushforward { common, .. } => ("pushforward", common),
        Command::AlignArcs { common, .. } => ("align-arcs", common),
        Command::ClusterScenario { common, .. } => ("cluster-scenario", common),
    }
}

