//! `lp-euler`: command-line front end for the spectral toolkit.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical-blow-up stop,
//! 1 internal error. Diagnostics go to stderr; data goes to declared files
//! (or stdout for the print-style subcommands).

mod manifest;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lp_euler_core::error::Error as CoreError;
use lp_euler_core::euler2d::{self, InitialCondition, SimConfig};
use lp_euler_core::field::{SpectralField, VectorField};
use lp_euler_core::grid::Grid;
use lp_euler_core::io as fio;
use lp_euler_core::lp::decompose;
use lp_euler_core::norms;
use lp_euler_core::ops::leray;
use lp_euler_core::para::bony;
use lp_euler_core::verify::{run_inequality_with_s, FieldGenSpec, GenKind, InequalityId};

use manifest::ManifestBuilder;

const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (field-format 1, report-schema 1)"
);

#[derive(Parser)]
#[command(name = "lp-euler", version, long_version = LONG_VERSION)]
#[command(about = "Littlewood-Paley calculus, estimate verification and 2D Euler simulation")]
struct Cli {
    /// Cap internal parallelism (0 = all cores). Results never depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a field into dyadic bands and write one file per band.
    Decompose(DecomposeArgs),
    /// Compute a norm of a field and print it as JSON.
    Norm(NormArgs),
    /// Apply the Leray projection to a vector field.
    Project(ProjectArgs),
    /// Write the three Bony parts of a product and a residual report.
    Bony(BonyArgs),
    /// Run an inequality ensemble and write its report.
    Verify(VerifyArgs),
    /// Integrate the 2D Euler equations and track norm diagnostics.
    Simulate(SimulateArgs),
    /// Merge inequality reports and simulation summaries.
    Report(ReportArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input field file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Use the homogeneous (dotted) calculus.
    #[arg(long)]
    homogeneous: bool,
    /// Directory for band files and the manifest.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct NormArgs {
    /// Input field file (or vector-field directory for tl/w1inf/besov).
    #[arg(long = "in")]
    input: PathBuf,
    /// One of: lp, linf, w1inf, tl, besov.
    #[arg(long)]
    space: String,
    /// Smoothness exponent for tl/besov.
    #[arg(long, default_value_t = 3.0)]
    s: f64,
    /// Integrability exponent ("inf" allowed).
    #[arg(long, default_value = "1")]
    p: String,
    /// Summability exponent ("inf" allowed).
    #[arg(long, default_value = "inf")]
    q: String,
    #[arg(long)]
    homogeneous: bool,
}

#[derive(Args)]
struct ProjectArgs {
    /// Input vector-field directory.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output vector-field directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BonyArgs {
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    g: PathBuf,
    #[arg(long)]
    homogeneous: bool,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Estimate id (bernstein, peetre, conv_bound, coro1, coro2, moser,
    /// commutator, riesz, leray, pressure).
    #[arg(long)]
    id: String,
    /// Points per axis.
    #[arg(long, default_value_t = 128)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Box scale L.
    #[arg(long = "box-scale", default_value_t = 1.0)]
    l: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Smoothness (defaults to d + 1).
    #[arg(long)]
    s: Option<f64>,
    /// Report destination.
    #[arg(long)]
    json: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Preset: taylor-green, shear, random-smooth, vortex-pair.
    #[arg(long, conflicts_with = "in_field")]
    preset: Option<String>,
    /// Start from a vorticity field file instead of a preset.
    #[arg(long = "in-field")]
    in_field: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long = "box-scale", default_value_t = 1.0)]
    l: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long = "t-end", default_value_t = 1.0)]
    t_end: f64,
    #[arg(long, default_value_t = 3.0)]
    s: f64,
    /// Envelope constant; fitted from the run when omitted.
    #[arg(long)]
    c0: Option<f64>,
    /// Seed for the random-smooth preset.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Spectrum slope for the random-smooth preset.
    #[arg(long, default_value_t = 4.0)]
    slope: f64,
    /// Steps between diagnostic samples.
    #[arg(long = "monitor-period", default_value_t = 20)]
    monitor_period: usize,
    /// Disable the 2/3-rule dealiasing of the transport term.
    #[arg(long = "no-dealias")]
    no_dealias: bool,
    /// Time-series destination (CSV).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Summary destination (JSON).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Input report files (inequality reports or simulation summaries).
    #[arg(long, num_args = 0.., value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Merged JSON destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classified by exit code.
enum Failure {
    Validation(String),
    Internal(String),
}

type CmdResult = Result<u8, Failure>;

fn classify(err: CoreError) -> Failure {
    match err {
        CoreError::NumericalBlowUp { .. } => Failure::Internal(err.to_string()),
        _ => Failure::Validation(err.to_string()),
    }
}

fn io_failure(path: &Path, err: std::io::Error) -> Failure {
    Failure::Validation(format!("{}: {err}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    let outcome = match &cli.command {
        Command::Decompose(args) => cmd_decompose(args),
        Command::Norm(args) => cmd_norm(args),
        Command::Project(args) => cmd_project(args),
        Command::Bony(args) => cmd_bony(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Report(args) => report::cmd_report(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_scalar(path: &Path) -> Result<SpectralField, Failure> {
    fio::read_field(path).map_err(classify)
}

fn read_vector(path: &Path) -> Result<VectorField, Failure> {
    fio::read_vector_field(path).map_err(classify)
}

fn parse_exponent(name: &'static str, raw: &str) -> Result<f64, Failure> {
    if raw == "inf" {
        return Ok(f64::INFINITY);
    }
    raw.parse::<f64>()
        .map_err(|e| Failure::Validation(format!("bad --{name} {raw:?}: {e}")))
}

fn cmd_decompose(args: &DecomposeArgs) -> CmdResult {
    let mut manifest = ManifestBuilder::new("decompose");
    let field = read_scalar(&args.input)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| io_failure(&args.out_dir, e))?;

    let dec = decompose(&field, args.homogeneous);
    let reconstruction_error = dec.reconstruction_error(&field);
    for (j, band) in &dec.bands {
        let name = if *j < 0 {
            format!("band_m{}.fld", -j)
        } else {
            format!("band_{j}.fld")
        };
        let path = args.out_dir.join(name);
        fio::write_field(band, &path).map_err(classify)?;
        manifest.output(&path);
    }

    #[derive(serde::Serialize)]
    struct BandManifest {
        j_min: i32,
        j_max: i32,
        homogeneous: bool,
        reconstruction_error: f64,
    }
    let band_manifest = BandManifest {
        j_min: dec.j_min,
        j_max: dec.j_max,
        homogeneous: args.homogeneous,
        reconstruction_error,
    };
    let manifest_path = args.out_dir.join("manifest.json");
    std::fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&band_manifest).unwrap() + "\n",
    )
    .map_err(|e| io_failure(&manifest_path, e))?;
    manifest.output(&manifest_path);

    let g = field.grid();
    manifest.grid(g.d(), g.n(), g.box_scale());
    let run_path = args.out_dir.join("run_manifest.json");
    manifest
        .write(&run_path)
        .map_err(|e| io_failure(&run_path, e))?;
    Ok(0)
}

fn cmd_norm(args: &NormArgs) -> CmdResult {
    let p = parse_exponent("p", &args.p)?;
    let q = parse_exponent("q", &args.q)?;
    let is_vector = args.input.join("manifest.json").is_file();

    let value = if is_vector {
        let u = read_vector(&args.input)?;
        match args.space.as_str() {
            "tl" => norms::tl_norm_vector(&u, args.s, args.homogeneous),
            "w1inf" => norms::w1inf_norm(&u).map_err(classify)?,
            "besov" => norms::besov_norm_vector(&u, args.s, p, q).map_err(classify)?,
            other => {
                return Err(Failure::Validation(format!(
                    "space {other:?} is not defined for vector fields (use tl, w1inf or besov)"
                )))
            }
        }
    } else {
        let f = read_scalar(&args.input)?;
        match args.space.as_str() {
            "lp" => norms::lp_norm(&f, p).map_err(classify)?,
            "linf" => norms::linf_norm(&f).map_err(classify)?,
            "w1inf" => norms::w1inf_norm_scalar(&f).map_err(classify)?,
            "tl" => norms::tl_norm(&f, args.s, args.homogeneous),
            "besov" => norms::besov_norm(&f, args.s, p, q).map_err(classify)?,
            other => {
                return Err(Failure::Validation(format!(
                    "unknown space {other:?} (expected lp, linf, w1inf, tl or besov)"
                )))
            }
        }
    };
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
    Ok(0)
}

fn cmd_project(args: &ProjectArgs) -> CmdResult {
    let mut manifest = ManifestBuilder::new("project");
    let u = read_vector(&args.input)?;
    let projected = leray(&u);
    fio::write_vector_field(&projected, &args.out).map_err(classify)?;
    let mut outputs: Vec<PathBuf> = std::fs::read_dir(&args.out)
        .map_err(|e| io_failure(&args.out, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fld" || x == "json"))
        .collect();
    outputs.sort();
    for path in outputs {
        manifest.output(path);
    }
    let g = u.grid();
    manifest.grid(g.d(), g.n(), g.box_scale());
    let run_path = args.out.join("run_manifest.json");
    manifest
        .write(&run_path)
        .map_err(|e| io_failure(&run_path, e))?;
    Ok(0)
}

fn cmd_bony(args: &BonyArgs) -> CmdResult {
    let mut manifest = ManifestBuilder::new("bony");
    let f = read_scalar(&args.f)?;
    let g = read_scalar(&args.g)?;
    if f.grid() != g.grid() {
        return Err(Failure::Validation(
            "fields for bony must share one grid".into(),
        ));
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| io_failure(&args.out_dir, e))?;
    let dec = bony(&f, &g, args.homogeneous);
    for (name, part) in [
        ("t_fg.fld", &dec.para_fg),
        ("t_gf.fld", &dec.para_gf),
        ("remainder.fld", &dec.remainder),
    ] {
        let path = args.out_dir.join(name);
        fio::write_field(part, &path).map_err(classify)?;
        manifest.output(&path);
    }
    #[derive(serde::Serialize)]
    struct Residual {
        homogeneous: bool,
        residual: f64,
    }
    let residual_path = args.out_dir.join("residual.json");
    std::fs::write(
        &residual_path,
        serde_json::to_string_pretty(&Residual {
            homogeneous: args.homogeneous,
            residual: dec.residual,
        })
        .unwrap()
            + "\n",
    )
    .map_err(|e| io_failure(&residual_path, e))?;
    manifest.output(&residual_path);
    let gr = f.grid();
    manifest.grid(gr.d(), gr.n(), gr.box_scale());
    let run_path = args.out_dir.join("run_manifest.json");
    manifest
        .write(&run_path)
        .map_err(|e| io_failure(&run_path, e))?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let mut manifest = ManifestBuilder::new("verify");
    let id: InequalityId = args.id.parse().map_err(classify)?;
    let grid = Grid::new(args.d, args.n, args.l).map_err(classify)?;
    let s = args.s.unwrap_or((args.d + 1) as f64);
    let kind = match id {
        InequalityId::Commutator | InequalityId::Pressure => GenKind::DivFreeVector,
        _ => GenKind::Scalar,
    };
    let ensemble = FieldGenSpec::default_for(&grid, s, args.seed, kind);
    let report = run_inequality_with_s(id, &ensemble, args.trials, &grid, s).map_err(classify)?;
    std::fs::write(
        &args.json,
        serde_json::to_string_pretty(&report).unwrap() + "\n",
    )
    .map_err(|e| io_failure(&args.json, e))?;
    eprintln!(
        "{id}: n={n} trials={t} excluded={e} max_ratio={mr:.6e} mean={me:.6e} p95={p:.6e}",
        n = args.n,
        t = report.trials,
        e = report.excluded,
        mr = report.max_ratio,
        me = report.mean_ratio,
        p = report.p95_ratio,
    );
    manifest.seed(args.seed);
    manifest.grid(args.d, args.n, args.l);
    manifest.output(&args.json);
    let run_path = args.json.with_extension("manifest.json");
    manifest
        .write(&run_path)
        .map_err(|e| io_failure(&run_path, e))?;
    Ok(0)
}

fn format_float(v: f64) -> String {
    // 17 significant digits round-trip any f64.
    format!("{v:.16e}")
}

fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let mut manifest = ManifestBuilder::new("simulate");
    let grid = Grid::new(2, args.n, args.l).map_err(classify)?;

    let (omega0, seeds) = if let Some(path) = &args.in_field {
        (read_scalar(path)?, vec![])
    } else {
        let preset_name = args.preset.as_deref().unwrap_or("taylor-green");
        let ic = match preset_name.parse::<InitialCondition>().map_err(classify)? {
            InitialCondition::RandomSmooth { .. } => InitialCondition::RandomSmooth {
                seed: args.seed,
                slope: args.slope,
            },
            other => other,
        };
        let seeds = match &ic {
            InitialCondition::RandomSmooth { seed, .. } => vec![*seed],
            _ => vec![],
        };
        (
            euler2d::initial_vorticity(&ic, &grid).map_err(classify)?,
            seeds,
        )
    };

    let mut config = SimConfig::new(
        grid.clone(),
        args.dt,
        args.t_end,
        InitialCondition::TaylorGreen,
    );
    config.s = args.s;
    config.c0 = args.c0;
    config.dealias = !args.no_dealias;
    config.monitor_period = args.monitor_period;

    let trajectory = euler2d::simulate_from(&config, omega0).map_err(classify)?;
    for w in &trajectory.warnings {
        eprintln!("warning: {w}");
    }

    if let Some(csv_path) = &args.csv {
        let mut text =
            String::from("t,energy,enstrophy,linf_u,linf_grad_u,f_norm,besov_1_inf_1,envelope\n");
        for s in &trajectory.samples {
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                format_float(s.t),
                format_float(s.energy),
                format_float(s.enstrophy),
                format_float(s.linf_u),
                format_float(s.linf_grad_u),
                format_float(s.f_norm),
                format_float(s.besov_1_inf_1),
                format_float(s.envelope),
            ));
        }
        std::fs::write(csv_path, text).map_err(|e| io_failure(csv_path, e))?;
        manifest.output(csv_path);
    }

    let global = euler2d::two_d_global_check(&trajectory);
    #[derive(serde::Serialize)]
    struct Summary {
        u0_f_norm: f64,
        #[serde(rename = "fitted_C0")]
        fitted_c0: f64,
        #[serde(rename = "T0_estimate")]
        t0_estimate: f64,
        blowup_stop: bool,
        global_check: String,
    }
    let summary = Summary {
        u0_f_norm: trajectory.u0_f_norm,
        fitted_c0: trajectory.c0,
        t0_estimate: euler2d::blowup_time(trajectory.u0_f_norm, trajectory.c0),
        blowup_stop: trajectory.blowup_stop,
        global_check: if global.passed { "pass" } else { "fail" }.to_string(),
    };
    let summary_text = serde_json::to_string_pretty(&summary).unwrap() + "\n";
    if let Some(json_path) = &args.json {
        std::fs::write(json_path, &summary_text).map_err(|e| io_failure(json_path, e))?;
        manifest.output(json_path);
    } else {
        print!("{summary_text}");
    }

    for seed in seeds {
        manifest.seed(seed);
    }
    manifest.grid(2, args.n, args.l);
    if let Some(primary) = args.json.as_ref().or(args.csv.as_ref()) {
        let run_path = primary.with_extension("manifest.json");
        manifest
            .write(&run_path)
            .map_err(|e| io_failure(&run_path, e))?;
    }

    if trajectory.blowup_stop {
        eprintln!("numerical blow-up stop: trajectory truncated");
        return Ok(3);
    }
    Ok(0)
}
