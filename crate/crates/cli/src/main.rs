use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cyclavg::averaging::{averaged_from_integrals, DEFAULT_BRACKET, DEFAULT_TOL};
use cyclavg::classifier::scan;
use cyclavg::flow::{
    find_fixed_points_with, return_map_steps, FixedPointOptions, DEFAULT_FIXED_POINT_TOL, DEFAULT_STEPS,
};
use cyclavg::pipeline::{run_pipeline, synthesize_b, PipelineOptions, PipelineOutput};
use cyclavg::presets::{self, Preset, PresetSystem};
use cyclavg::{
    angular_integrals, classify, continuation_check, descartes_bound, lower_bound_count, positive_roots,
    AveragedFunction, Error, MonomialSystem, PerturbationSpec,
};

const TOOL: &str = "cyclavg";

#[derive(Parser)]
#[command(name = "cyclavg", version, about = "Limit cycles of centers perturbed by homogeneous fields")]
struct Cli {
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// JSON file with a perturbation spec or a preset document.
    file: Option<PathBuf>,
    /// Use a named preset instead of a file.
    #[arg(long, conflicts_with = "file")]
    preset: Option<String>,
    /// Quadrature tolerance for the angular integrals.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Clone)]
struct Sim {
    /// RK4 steps per revolution.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Search interval for fixed points of the return map.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    bracket: Option<Vec<f64>>,
    /// Bisection width for fixed points.
    #[arg(long, default_value_t = DEFAULT_FIXED_POINT_TOL)]
    fp_tol: f64,
    /// Directory for return-map CSV tables.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Angular integrals and the guaranteed number of limit cycles.
    Integrals(Input),
    /// The averaged function h(z).
    Averaged(Input),
    /// Positive roots of h with their interval degrees.
    Roots {
        #[command(flatten)]
        input: Input,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        bracket: Option<Vec<f64>>,
    },
    /// Choose b so that h vanishes at the given radii.
    Synthesize {
        #[command(flatten)]
        input: Input,
        #[arg(long, num_args = 1.., required = true)]
        targets: Vec<f64>,
    },
    /// Fixed points of the return map, or single images with --r0.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sim: Sim,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, num_args = 1..)]
        r0: Vec<f64>,
    },
    /// Track fixed points toward the averaged roots as eps shrinks.
    Continuation {
        #[command(flatten)]
        input: Input,
        #[arg(long, num_args = 1.., required = true)]
        eps: Vec<f64>,
        /// Predicted radii; defaults to the simple roots of h.
        #[arg(long, num_args = 1..)]
        root: Vec<f64>,
    },
    /// Non-existence certificate for (a x^p y^q, b x^i y^j + c x^k y^l).
    Classify {
        /// JSON file with a monomial system or a monomial preset.
        #[arg(required_unless_present_any = ["scan", "preset"])]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        preset: Option<String>,
        /// Classify every system with exponents up to N and coefficients in {-1, 0, 1}.
        #[arg(long, value_name = "N", conflicts_with_all = ["file", "preset"])]
        scan: Option<u32>,
    },
    /// Synthesize, find roots, simulate and continue in one run.
    Pipeline {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sim: Sim,
        #[arg(long, num_args = 1..)]
        targets: Vec<f64>,
        #[arg(long, num_args = 1..)]
        eps: Vec<f64>,
    },
    /// Rerun a worked example end to end.
    Repro {
        #[command(subcommand)]
        which: Repro,
        #[command(flatten)]
        sim: Sim,
    },
    /// List presets, or print one as JSON.
    Preset { name: Option<String> },
}

#[derive(Subcommand, Clone, Copy)]
enum Repro {
    Example1,
    Example2,
    Vdp,
    Lienard {
        #[arg(long)]
        m: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
    payload: Option<Value>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into(), payload: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidTerm(_)
            | Error::InvalidField(_)
            | Error::InvalidSpec(_)
            | Error::Orientation(_)
            | Error::InvalidArgument(_)
            | Error::RepeatedExponent(_)
            | Error::ZeroEpsilon
            | Error::Precondition(_) => 2,
            Error::NoMatch { .. } => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string(), payload: None }
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, payload) = match run(&cli.command) {
        Ok(v) => (0, Some(v)),
        Err(f) => {
            eprintln!("error: {}", f.message);
            (f.code, f.payload)
        }
    };
    if let Some(payload) = payload {
        let doc = json!({
            "header": { "tool": TOOL, "version": env!("CARGO_PKG_VERSION") },
            "payload": payload,
        });
        let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n";
        let written = match &cli.out {
            Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A bare system, or a preset document whose `spec` holds one, optionally
/// wrapped in this tool's output envelope.
fn load_system(file: &Option<PathBuf>, preset: &Option<String>) -> Result<PresetSystem, Failure> {
    if let Some(name) = preset {
        return Ok(presets::by_name(name)?.spec);
    }
    let path = file.as_ref().ok_or_else(|| Failure::input("need a FILE or --preset"))?;
    let mut value = read_json(path)?;
    if value.get("header").is_some() {
        value = value["payload"].take();
    }
    if value.get("name").is_some() && value.get("spec").is_some() {
        let p: Preset = serde_json::from_value(value).map_err(|e| Failure::input(format!("preset: {e}")))?;
        return Ok(p.spec);
    }
    if value.get("fields").is_some() {
        return serde_json::from_value(value)
            .map(PresetSystem::Perturbation)
            .map_err(|e| Failure::input(format!("perturbation spec: {e}")));
    }
    serde_json::from_value(value)
        .map(PresetSystem::Monomial)
        .map_err(|e| Failure::input(format!("monomial system: {e}")))
}

fn load_spec(input: &Input) -> Result<PerturbationSpec, Failure> {
    if !(input.tol > 0.0) {
        return Err(Failure::input("--tol must be positive"));
    }
    match load_system(&input.file, &input.preset)? {
        PresetSystem::Perturbation(s) => Ok(s.normalized()),
        PresetSystem::Monomial(_) => Err(Failure::input("expected a perturbation spec, got a monomial system")),
    }
}

fn load_monomial(file: &Option<PathBuf>, preset: &Option<String>) -> Result<MonomialSystem, Failure> {
    match load_system(file, preset)? {
        PresetSystem::Monomial(s) => Ok(s),
        PresetSystem::Perturbation(_) => Err(Failure::input("expected a monomial system, got a perturbation spec")),
    }
}

fn bracket_arg(b: &Option<Vec<f64>>) -> Option<(f64, f64)> {
    b.as_ref().map(|v| (v[0], v[1]))
}

/// Residual tolerance for root finding, relative to the largest coefficient.
fn root_tol(h: &AveragedFunction) -> f64 {
    let scale = h.coefficients().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    1e-9 * scale.max(f64::MIN_POSITIVE)
}

fn averaged(spec: &PerturbationSpec, tol: f64) -> Result<(Vec<cyclavg::AngularIntegral>, AveragedFunction), Failure> {
    let integrals = angular_integrals(spec, tol)?;
    let h = averaged_from_integrals(spec, &integrals)?;
    Ok((integrals, h))
}

fn fixed_point_options(sim: &Sim) -> Result<FixedPointOptions, Failure> {
    if sim.steps == 0 {
        return Err(Failure::input("--steps must be positive"));
    }
    Ok(FixedPointOptions { steps: sim.steps, ..FixedPointOptions::default() })
}

fn write_csv(dir: &Path, eps: f64, csv: &str) -> Result<String, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("return_map_eps_{eps}.csv"));
    fs::write(&path, csv).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Integrals(input) => {
            let spec = load_spec(input)?;
            let integrals = angular_integrals(&spec, input.tol)?;
            Ok(json!({
                "integrals": integrals,
                "nonzero": integrals.iter().filter(|e| e.nonzero).count(),
                "lower_bound": lower_bound_count(&spec)?,
            }))
        }
        Command::Averaged(input) => {
            let spec = load_spec(input)?;
            let (integrals, h) = averaged(&spec, input.tol)?;
            Ok(json!({ "integrals": integrals, "h": h, "descartes": descartes_bound(&h) }))
        }
        Command::Roots { input, bracket } => {
            let spec = load_spec(input)?;
            let (_, h) = averaged(&spec, input.tol)?;
            let report = positive_roots(&h, bracket_arg(bracket).unwrap_or(DEFAULT_BRACKET), root_tol(&h))?;
            Ok(json!({ "h": h, "roots": report }))
        }
        Command::Synthesize { input, targets } => {
            let spec = load_spec(input)?;
            let integrals = angular_integrals(&spec, input.tol)?;
            let spec = spec.with_b(synthesize_b(&spec, &integrals, targets)?)?;
            let h = averaged_from_integrals(&spec, &integrals)?;
            let roots = positive_roots(&h, DEFAULT_BRACKET, root_tol(&h))?;
            Ok(json!({ "b": spec.b(), "h": h, "roots": roots.roots, "spec": spec }))
        }
        Command::Simulate { input, sim, eps, r0 } => {
            let mut spec = load_spec(input)?;
            if let Some(e) = eps {
                spec = spec.with_epsilon(*e);
            }
            let opts = fixed_point_options(sim)?;
            if !r0.is_empty() {
                let samples = r0
                    .iter()
                    .map(|&r| return_map_steps(&spec, r, opts.steps))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(json!({ "eps": spec.epsilon(), "samples": samples }));
            }
            let bracket = match bracket_arg(&sim.bracket) {
                Some(b) => b,
                None => {
                    let (_, h) = averaged(&spec, input.tol)?;
                    let roots = positive_roots(&h, DEFAULT_BRACKET, root_tol(&h))?.roots;
                    match (roots.first(), roots.last()) {
                        (Some(a), Some(b)) => (0.5 * a.z, 1.5 * b.z),
                        _ => (0.1, 10.0),
                    }
                }
            };
            let scan = find_fixed_points_with(&spec, bracket, sim.fp_tol, &opts)?;
            let csv = match &sim.csv {
                Some(dir) => Some(write_csv(dir, spec.epsilon(), &scan.to_csv())?),
                None => None,
            };
            Ok(json!({
                "eps": spec.epsilon(),
                "bracket": bracket,
                "certificates": scan.certificates,
                "failures": scan.failures,
                "csv": csv,
            }))
        }
        Command::Continuation { input, eps, root } => {
            let spec = load_spec(input)?;
            let roots = if root.is_empty() {
                let (_, h) = averaged(&spec, input.tol)?;
                let report = positive_roots(&h, DEFAULT_BRACKET, root_tol(&h))?;
                report.roots.iter().filter(|r| r.interval_degree != 0).map(|r| r.z).collect()
            } else {
                root.clone()
            };
            let tables = roots
                .iter()
                .map(|&z| continuation_check(&spec, eps, z))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({ "tables": tables }))
        }
        Command::Classify { file, preset, scan: Some(n) } => {
            let _ = (file, preset);
            if *n > 6 {
                return Err(Failure::input("--scan is limited to exponents <= 6"));
            }
            let summary = scan(*n);
            if summary.failures.is_empty() {
                Ok(to_value(&summary))
            } else {
                Err(Failure {
                    code: 3,
                    message: format!("{} systems were not certified", summary.failures.len()),
                    payload: Some(to_value(&summary)),
                })
            }
        }
        Command::Classify { file, preset, scan: None } => {
            let sys = load_monomial(file, preset)?;
            Ok(to_value(&classify(&sys)?))
        }
        Command::Pipeline { input, sim, targets, eps } => {
            let spec = load_spec(input)?;
            let targets = (!targets.is_empty()).then(|| targets.clone());
            pipeline(&spec, input.tol, sim, targets, eps.clone())
        }
        Command::Repro { which, sim } => {
            let (preset, eps) = match which {
                Repro::Example1 => (presets::example1(), vec![0.01]),
                Repro::Example2 => (presets::example2(), vec![0.01, 0.005]),
                Repro::Vdp => (presets::vdp(), vec![0.02, 0.01, 0.005]),
                Repro::Lienard { m } => (presets::lienard(*m)?, vec![0.005]),
            };
            let spec = preset.perturbation().expect("repro presets are perturbations").normalized();
            let targets = (!preset.expected.targets.is_empty()).then(|| preset.expected.targets.clone());
            let mut v = pipeline(&spec, DEFAULT_TOL, sim, targets, eps)?;
            v["preset"] = json!(preset.name);
            v["expected"] = to_value(&preset.expected);
            Ok(v)
        }
        Command::Preset { name: None } => {
            let names: Vec<String> = presets::catalog().into_iter().map(|p| p.name).collect();
            Ok(json!({ "presets": names }))
        }
        Command::Preset { name: Some(name) } => Ok(to_value(&presets::by_name(name)?)),
    }
}

fn pipeline(
    spec: &PerturbationSpec,
    tol: f64,
    sim: &Sim,
    targets: Option<Vec<f64>>,
    eps: Vec<f64>,
) -> Outcome {
    let opts = PipelineOptions {
        targets,
        eps,
        tol,
        bracket: bracket_arg(&sim.bracket),
        fixed_point_tol: sim.fp_tol,
        fixed_point: fixed_point_options(sim)?,
    };
    let PipelineOutput { report, scans } = run_pipeline(spec, &opts)?;
    let mut csv = Vec::new();
    if let Some(dir) = &sim.csv {
        for (e, scan) in &scans {
            csv.push(write_csv(dir, *e, &scan.to_csv())?);
        }
    }
    let mut v = to_value(&report);
    v["csv"] = json!(csv);
    if report.count_matches {
        Ok(v)
    } else {
        Err(Failure {
            code: 4,
            message: format!("simulated fixed-point count differs from the predicted {}", report.predicted),
            payload: Some(v),
        })
    }
}
