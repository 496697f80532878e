//! Command-line front end. Every command writes CSV (or, for `validate`, a
//! plain-text report).
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 validation failure.

pub mod figure;
pub mod format;
pub mod sweep;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::interferometer::{squeezing_for_mean_photons, Variant};
use crate::validation::{self, Tolerances};
use figure::{CurveKind, FigureId};
use format::{fmt_sig, write_csv};
use sweep::{NoiseFlags, OptimalSpec, SweepSpec, DEFAULT_R_RANGE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "oam-parity",
    version,
    about = "OAM-enhanced angular displacement estimation with a TMSV source and parity detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parity signal vs phi
    Signal(PhiArgs),
    /// Sensitivity and signal vs phi
    Sensitivity(PhiArgs),
    /// Optimal sensitivity vs squeezing, with reference limits
    Optimal(OptimalArgs),
    /// Write the data of one figure (one CSV per curve plus manifest.csv)
    Figure(FigureArgs),
    /// Run the cross-check suite
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct SourceArgs {
    #[arg(long, default_value = "ideal")]
    variant: Variant,
    /// Squeezing parameter
    #[arg(long, conflicts_with = "nbar")]
    r: Option<f64>,
    /// Total mean photon number N = 2 sinh^2 r
    #[arg(long)]
    nbar: Option<f64>,
    /// OAM quantum number
    #[arg(long, default_value_t = 1)]
    ell: u32,
}

#[derive(Debug, Args)]
struct NoiseArgs {
    /// Photon loss L
    #[arg(long)]
    loss: Option<f64>,
    /// Mean dark counts d
    #[arg(long)]
    dark: Option<f64>,
    /// Thermal photon number of the environment
    #[arg(long)]
    nth: Option<f64>,
    /// Virtual beam splitter transmissivity T
    #[arg(long)]
    transmissivity: Option<f64>,
}

impl NoiseArgs {
    fn flags(&self) -> NoiseFlags {
        NoiseFlags {
            loss: self.loss,
            dark: self.dark,
            nth: self.nth,
            transmissivity: self.transmissivity,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the sweep
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Read and write angles in degrees
    #[arg(long)]
    degrees: bool,
}

#[derive(Debug, Args)]
struct PhiArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi_min: f64,
    /// Default: pi/(2 ell)
    #[arg(long, allow_negative_numbers = true)]
    phi_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    phi_steps: usize,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OptimalArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = DEFAULT_R_RANGE.0, conflicts_with_all = ["r", "nbar"])]
    r_min: f64,
    #[arg(long, default_value_t = DEFAULT_R_RANGE.1, conflicts_with_all = ["r", "nbar"])]
    r_max: f64,
    #[arg(long, default_value_t = DEFAULT_R_RANGE.2, conflicts_with_all = ["r", "nbar"])]
    r_steps: usize,
    #[command(flatten)]
    noise: NoiseArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// One of 2a, 2b, 3a, 3b, 4a, 4b, 5
    id: String,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Override a check tolerance, e.g. `dark_vs_ideal=0.4`
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation,
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Validation) => {
            let _ = writeln!(stderr, "validation failed");
            EXIT_VALIDATION
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Signal(args) => phi_command(args, false, stdout),
        Command::Sensitivity(args) => phi_command(args, true, stdout),
        Command::Optimal(args) => optimal_command(args, stdout),
        Command::Figure(args) => figure_command(args),
        Command::Validate(args) => validate_command(args, stdout),
    }
}

fn resolve_r(source: &SourceArgs) -> Result<Option<f64>, String> {
    match (source.r, source.nbar) {
        (Some(r), _) => Ok(Some(r)),
        (None, Some(n)) => {
            if !(n >= 0.0 && n.is_finite()) {
                return Err(format!("--nbar must be non-negative and finite, got {n}"));
            }
            Ok(Some(squeezing_for_mean_photons(n)))
        }
        (None, None) => Ok(None),
    }
}

fn check_jobs(jobs: usize) -> Result<usize, String> {
    if jobs == 0 {
        Err("--jobs must be at least 1".into())
    } else {
        Ok(jobs)
    }
}

fn emit(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    header: &[&str],
    rows: &[Vec<f64>],
) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            write_csv(BufWriter::new(file), header, rows)?;
        }
        None => write_csv(stdout, header, rows)?,
    }
    Ok(())
}

fn phi_command(
    args: PhiArgs,
    with_sensitivity: bool,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let jobs = check_jobs(args.output.jobs)?;
    let noise = args.noise.flags().resolve(args.source.variant)?;
    let r = resolve_r(&args.source)?.unwrap_or(1.0);
    let ell = args.source.ell;
    if ell == 0 {
        return Err(Failure::Usage("--ell must be at least 1".into()));
    }
    let to_rad = |x: f64| {
        if args.output.degrees {
            x.to_radians()
        } else {
            x
        }
    };
    let phi_max = args
        .phi_max
        .map(to_rad)
        .unwrap_or_else(|| SweepSpec::default_phi_max(ell));
    let spec = SweepSpec::new(
        args.source.variant,
        r,
        ell,
        (to_rad(args.phi_min), phi_max, args.phi_steps),
        noise,
    )?;
    let to_out = |x: f64| {
        if args.output.degrees {
            x.to_degrees()
        } else {
            x
        }
    };
    let points = spec.evaluate(jobs);
    if with_sensitivity {
        let rows: Vec<Vec<f64>> = points
            .iter()
            .map(|p| vec![to_out(p[0]), p[2], p[1]])
            .collect();
        emit(
            &args.output.out,
            stdout,
            &["phi", "delta_phi", "signal"],
            &rows,
        )
    } else {
        let rows: Vec<Vec<f64>> = points.iter().map(|p| vec![to_out(p[0]), p[1]]).collect();
        emit(&args.output.out, stdout, &["phi", "signal"], &rows)
    }
}

const OPTIMAL_HEADER: [&str; 6] = ["r", "N", "phi_opt", "delta_phi_min", "hl", "snl"];

fn optimal_rows(spec: &OptimalSpec, jobs: usize, degrees: bool) -> Vec<Vec<f64>> {
    spec.evaluate(jobs)
        .iter()
        .map(|row| {
            let mut row = row.to_vec();
            if degrees {
                row[2] = row[2].to_degrees();
            }
            row
        })
        .collect()
}

fn optimal_command(args: OptimalArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let jobs = check_jobs(args.output.jobs)?;
    let noise = args.noise.flags().resolve(args.source.variant)?;
    let range = match resolve_r(&args.source)? {
        Some(r) => (r, r, 1),
        None => (args.r_min, args.r_max, args.r_steps),
    };
    let spec = OptimalSpec::new(args.source.variant, args.source.ell, range, noise)?;
    let rows = optimal_rows(&spec, jobs, args.output.degrees);
    emit(&args.output.out, stdout, &OPTIMAL_HEADER, &rows)
}

const MANIFEST_HEADER: [&str; 16] = [
    "file",
    "figure",
    "kind",
    "variant",
    "ell",
    "r",
    "r_min",
    "r_max",
    "r_steps",
    "phi_min",
    "phi_max",
    "phi_steps",
    "loss",
    "dark",
    "nth",
    "transmissivity",
];

/// Writes every curve of `id` into `dir`, plus `manifest.csv`. Returns the
/// curve file paths.
pub fn write_figure(id: FigureId, dir: &Path, jobs: usize) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let curves = figure::curves(id);
    let mut manifest = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(dir.join("manifest.csv"))?;
    manifest.write_record(MANIFEST_HEADER)?;
    let mut paths = Vec::new();
    for curve in &curves {
        let path = dir.join(&curve.file);
        let file = BufWriter::new(File::create(&path)?);
        let noise = curve.noise();
        let blank = String::new;
        let (kind, ell, r, r_range, phi_range) = match &curve.kind {
            CurveKind::Phi(spec) => {
                let rows: Vec<Vec<f64>> = spec
                    .evaluate(jobs)
                    .iter()
                    .map(|p| vec![p[0], p[2], p[1]])
                    .collect();
                write_csv(file, &["phi", "delta_phi", "signal"], &rows)?;
                (
                    "sensitivity_vs_phi",
                    spec.ell,
                    fmt_sig(spec.r),
                    [blank(), blank(), blank()],
                    [
                        fmt_sig(spec.phi_min),
                        fmt_sig(spec.phi_max),
                        spec.phi_steps.to_string(),
                    ],
                )
            }
            CurveKind::Optimal(spec) => {
                write_csv(file, &OPTIMAL_HEADER, &optimal_rows(spec, jobs, false))?;
                (
                    "optimal_vs_r",
                    spec.ell,
                    blank(),
                    [
                        fmt_sig(spec.r_min),
                        fmt_sig(spec.r_max),
                        spec.r_steps.to_string(),
                    ],
                    [blank(), blank(), blank()],
                )
            }
        };
        let variant = curve.variant();
        let relevant = |v: Variant, x: f64| if variant == v { fmt_sig(x) } else { blank() };
        let mut record = vec![
            curve.file.clone(),
            id.to_string(),
            kind.to_string(),
            variant.to_string(),
            ell.to_string(),
            r,
        ];
        record.extend(r_range);
        record.extend(phi_range);
        record.extend([
            relevant(Variant::Loss, noise.loss()),
            relevant(Variant::Dark, noise.dark_rate()),
            relevant(Variant::Thermal, noise.n_thermal()),
            relevant(Variant::Thermal, noise.transmissivity()),
        ]);
        manifest.write_record(&record)?;
        paths.push(path);
    }
    manifest.flush()?;
    Ok(paths)
}

fn figure_command(args: FigureArgs) -> Result<(), Failure> {
    let jobs = check_jobs(args.jobs)?;
    let id: FigureId = args.id.parse()?;
    write_figure(id, &args.out, jobs).map_err(|e| {
        Failure::Usage(format!(
            "cannot write figure {id} to {}: {e}",
            args.out.display()
        ))
    })?;
    Ok(())
}

fn validate_command(args: ValidateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut tolerances = Tolerances::default();
    for spec in &args.tolerances {
        tolerances.apply_override(spec)?;
    }
    let checks = validation::run(&tolerances);
    for check in &checks {
        writeln!(stdout, "{}", check.report_line())?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(
        stdout,
        "{} checks, {} passed, {} failed",
        checks.len(),
        checks.len() - failed,
        failed
    )?;
    if failed > 0 {
        Err(Failure::Validation)
    } else {
        Ok(())
    }
}
