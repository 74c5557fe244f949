//! Command-line front end. Every command writes its report to an
//! [`io::Write`] and returns a process exit code: 0 on success, 1 for
//! configuration or input errors, 2 when a relation or consistency check fails.

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::sector::{reduce_sector, Classification};
use crate::analysis::spectrum::{
    analytic_spectrum, compare_spectra, numeric_spectrum, Level, SpectrumReport,
};
use crate::analysis::topology::{sector_invariants_from, topological_invariants, TopologyReport};
use crate::config::{ConfigError, ModelConfig};
use crate::error::FssqmError;
use crate::fock::StructureFunctionSpec;
use crate::model::FssqmModel;
use crate::verifier::{all_passed, audit, RelationResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fssqm",
    version,
    about = "Fractional supersymmetric quantum mechanics on truncated Fock spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Audit every operator identity of the model.
    Verify(VerifyArgs),
    /// Analytic and numeric spectra side by side.
    Spectrum(SpectrumArgs),
    /// Per-sector classification, ground data and invariants.
    Sectors(SectorsArgs),
    /// Sweep one C_λ-extended parameter.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the config tolerance.
    #[arg(long, env = "FSSQM_TOL")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "table")]
    pub format: ReportFormat,
    /// Add wall-clock timings to the JSON report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Args)]
pub struct SectorsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "table")]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    /// Index μ of the scanned α_μ.
    #[arg(long)]
    pub alpha_index: usize,
    /// Index absorbing the change so that Σα stays 0.
    #[arg(long)]
    pub compensate: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    /// Number of rows; ignored when from == to.
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Verify(a) => &a.common,
            Command::Spectrum(a) => &a.common,
            Command::Sectors(a) => &a.common,
            Command::Scan(a) => &a.common,
        }
    }
}

/// Runs a parsed command. The report goes to `out`, diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a, out),
        Command::Spectrum(a) => cmd_spectrum(a, out),
        Command::Sectors(a) => cmd_sectors(a, out),
        Command::Scan(a) => cmd_scan(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] FssqmError),
    #[error("{0}")]
    Usage(String),
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

fn load(common: &Common) -> Result<(ModelConfig, f64), CliError> {
    let config = ModelConfig::load(&common.config)?;
    let tol = config.effective_tolerance(common.tol)?;
    Ok((config, tol))
}

#[derive(Debug, Serialize)]
pub struct SectorSummary {
    pub mu: usize,
    pub classification: Classification,
    pub numeric_classification: Classification,
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    pub charged_ground_states: Vec<usize>,
    /// First three levels as (energy, multiplicity).
    pub levels: Vec<(f64, usize)>,
    pub zero_mode_counts: Vec<usize>,
    pub delta: Vec<Vec<i64>>,
}

pub fn sector_summaries(model: &FssqmModel) -> Result<Vec<SectorSummary>, FssqmError> {
    (0..model.lambda)
        .map(|mu| {
            let s = reduce_sector(model, mu)?;
            let t = sector_invariants_from(model, &s);
            Ok(SectorSummary {
                mu,
                classification: s.classification,
                numeric_classification: s.numeric_classification,
                ground_energy: s.ground_energy,
                ground_degeneracy: s.ground_degeneracy,
                charged_ground_states: s.charged_ground_states.clone(),
                levels: s
                    .levels
                    .iter()
                    .take(3)
                    .map(|l| (l.energy, l.multiplicity))
                    .collect(),
                zero_mode_counts: t.zero_mode_counts,
                delta: t.delta,
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub build_ms: f64,
    pub audit_ms: f64,
    pub analysis_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub config: ModelConfig,
    pub tolerance: f64,
    pub passed: bool,
    pub audit: Vec<RelationResult>,
    pub spectrum: SpectrumReport,
    pub topology: TopologyReport,
    pub sectors: Vec<SectorSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (config, tol) = load(&args.common)?;
    let t0 = Instant::now();
    let model = config.build()?;
    let build_ms = elapsed_ms(t0);
    let t1 = Instant::now();
    let results = audit(&model, tol);
    let audit_ms = elapsed_ms(t1);
    let passed = all_passed(&results);
    match args.format {
        ReportFormat::Json => {
            let t2 = Instant::now();
            let n_levels = (model.safe_dim() / model.lambda).min(6);
            let spectrum = analytic_spectrum(&model, n_levels)?;
            let topology = topological_invariants(&model)?;
            let sectors = sector_summaries(&model)?;
            let timings = args.timings.then(|| Timings {
                build_ms,
                audit_ms,
                analysis_ms: elapsed_ms(t2),
            });
            let report = RunReport {
                config,
                tolerance: tol,
                passed,
                audit: results,
                spectrum,
                topology,
                sectors,
                timings,
            };
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        ReportFormat::Table | ReportFormat::Csv => {
            let csv = args.format == ReportFormat::Csv;
            if csv {
                writeln!(out, "name,residual,tolerance,passed")?;
            } else {
                writeln!(
                    out,
                    "{:<36} {:>11} {:>9}  {:<4}  relation",
                    "name", "residual", "tol", ""
                )?;
            }
            for r in &results {
                if csv {
                    writeln!(
                        out,
                        "{},{:e},{:e},{}",
                        r.name, r.residual, r.tolerance, r.passed
                    )?;
                } else {
                    writeln!(
                        out,
                        "{:<36} {:>11.3e} {:>9.1e}  {:<4}  {}",
                        r.name,
                        r.residual,
                        r.tolerance,
                        if r.passed { "ok" } else { "FAIL" },
                        r.formula
                    )?;
                }
            }
            if !csv {
                let failed = results.iter().filter(|r| !r.passed).count();
                writeln!(out, "{} relations, {} failed", results.len(), failed)?;
                if args.timings {
                    writeln!(out, "build {build_ms:.1} ms, audit {audit_ms:.1} ms")?;
                }
            }
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn members_column(level: &Level) -> (String, String) {
    let states = level
        .members
        .iter()
        .map(|s| format!("b{}n{}", s.block, s.n))
        .collect::<Vec<_>>()
        .join(";");
    let grades = level
        .members
        .iter()
        .map(|s| format!("q^{}", s.block))
        .collect::<Vec<_>>()
        .join(";");
    (states, grades)
}

#[derive(Debug, Serialize)]
struct SpectrumOutput<'a> {
    consistent: bool,
    analytic: &'a SpectrumReport,
    numeric: &'a SpectrumReport,
}

pub fn cmd_spectrum(args: &SpectrumArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (config, tol) = load(&args.common)?;
    let model = config.build()?;
    let analytic = analytic_spectrum(&model, args.levels)?.merged();
    let numeric = numeric_spectrum(&model, args.levels)?;
    let consistent = compare_spectra(&analytic, &numeric, tol).is_ok();
    match args.format {
        ReportFormat::Csv => {
            writeln!(
                out,
                "level,energy,multiplicity,numeric_energy,numeric_multiplicity,states,grades"
            )?;
            for (k, a) in analytic.levels.iter().enumerate() {
                let (ne, nm) = numeric
                    .levels
                    .get(k)
                    .map(|l| (l.energy.to_string(), l.multiplicity.to_string()))
                    .unwrap_or_default();
                let (states, grades) = members_column(a);
                writeln!(
                    out,
                    "{k},{},{},{ne},{nm},{states},{grades}",
                    a.energy, a.multiplicity
                )?;
            }
        }
        ReportFormat::Json | ReportFormat::Table => {
            let o = SpectrumOutput {
                consistent,
                analytic: &analytic,
                numeric: &numeric,
            };
            serde_json::to_writer_pretty(&mut *out, &o)?;
            writeln!(out)?;
        }
    }
    Ok(if consistent { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_sectors(args: &SectorsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (config, _) = load(&args.common)?;
    let model = config.build()?;
    let sectors = sector_summaries(&model)?;
    let consistent = sectors
        .iter()
        .all(|s| s.classification == s.numeric_classification);
    match args.format {
        ReportFormat::Json | ReportFormat::Csv => {
            serde_json::to_writer_pretty(&mut *out, &sectors)?;
            writeln!(out)?;
        }
        ReportFormat::Table => {
            for s in &sectors {
                let levels = s
                    .levels
                    .iter()
                    .map(|(e, m)| format!("{e} (x{m})"))
                    .collect::<Vec<_>>()
                    .join(", ");
                writeln!(out, "mu = {}: {}", s.mu, s.classification)?;
                writeln!(
                    out,
                    "  ground energy {}, degeneracy {}, first levels {}",
                    s.ground_energy, s.ground_degeneracy, levels
                )?;
                if s.numeric_classification != s.classification {
                    writeln!(
                        out,
                        "  numeric classification: {}",
                        s.numeric_classification
                    )?;
                }
                if !s.charged_ground_states.is_empty()
                    && s.classification != Classification::BrokenZeroEnergy
                {
                    writeln!(
                        out,
                        "  ground states moved by Q: {:?}",
                        s.charged_ground_states
                    )?;
                }
                writeln!(out, "  zero modes per grade {:?}", s.zero_mode_counts)?;
                for row in &s.delta {
                    let cells = row.iter().map(|d| format!("{d:>3}")).collect::<String>();
                    writeln!(out, "  delta {cells}")?;
                }
            }
        }
    }
    Ok(if consistent { EXIT_OK } else { EXIT_FAILED })
}

/// Values swept by a scan: `steps` evenly spaced points including both ends,
/// or a single point when `from == to`.
pub fn scan_values(from: f64, to: f64, steps: usize) -> Vec<f64> {
    if from == to || steps <= 1 {
        return vec![from];
    }
    (0..steps)
        .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
        // drop interpolation noise such as 0.20000000000000007
        .map(|v| format!("{v:.12e}").parse().unwrap_or(v))
        .collect()
}

fn base_alpha(config: &ModelConfig) -> Result<Vec<f64>, CliError> {
    match &config.structure_function {
        StructureFunctionSpec::CLambdaExtended { alpha } => Ok(alpha.clone()),
        StructureFunctionSpec::Oscillator => Ok(vec![0.0; config.lambda]),
        StructureFunctionSpec::Table { .. } => Err(CliError::Usage(
            "scan needs a c_lambda_extended or oscillator structure function".into(),
        )),
    }
}

pub fn cmd_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (config, tol) = load(&args.common)?;
    let lambda = config.lambda;
    if lambda < 2 {
        return Err(FssqmError::InvalidLambda(lambda).into());
    }
    let alpha0 = base_alpha(&config)?;
    let (i, j) = (args.alpha_index, args.compensate);
    if i >= lambda || j >= lambda || i == j {
        return Err(CliError::Usage(format!(
            "alpha index {i} and compensating index {j} must be distinct and below lambda = {lambda}"
        )));
    }
    if !(args.from.is_finite() && args.to.is_finite()) {
        return Err(CliError::Usage("scan bounds must be finite".into()));
    }
    let mut header = format!("step,alpha_{i},alpha_{j},valid,audit_passed");
    for mu in 0..lambda {
        header.push_str(&format!(",ground_degeneracy_mu{mu}"));
    }
    for mu in 0..lambda {
        header.push_str(&format!(",classification_mu{mu}"));
    }
    header.push_str(",note");
    writeln!(out, "{header}")?;

    let mut all_ok = true;
    for (step, value) in scan_values(args.from, args.to, args.steps)
        .into_iter()
        .enumerate()
    {
        let mut alpha = alpha0.clone();
        alpha[j] -= value - alpha[i];
        alpha[i] = value;
        let mut cfg = config.clone();
        cfg.structure_function = StructureFunctionSpec::CLambdaExtended {
            alpha: alpha.clone(),
        };
        let row = cfg.build().map_err(|e| e.to_string()).and_then(|model| {
            let sectors = sector_summaries(&model).map_err(|e| e.to_string())?;
            Ok((all_passed(&audit(&model, tol)), sectors))
        });
        match row {
            Ok((passed, sectors)) => {
                all_ok &= passed;
                let degs = sectors
                    .iter()
                    .map(|s| format!(",{}", s.ground_degeneracy))
                    .collect::<String>();
                let classes = sectors
                    .iter()
                    .map(|s| format!(",{}", s.classification))
                    .collect::<String>();
                writeln!(
                    out,
                    "{step},{},{},true,{passed}{degs}{classes},",
                    alpha[i], alpha[j]
                )?;
            }
            Err(note) => {
                let empty = ",".repeat(2 * lambda);
                writeln!(
                    out,
                    "{step},{},{},false,false{empty},{}",
                    alpha[i],
                    alpha[j],
                    note.replace([',', '\n'], ";")
                )?;
            }
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FAILED })
}

/// Entry point shared by the binary: parses `args`, runs the command with the
/// report sent to `--out` or stdout, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut stderr = io::stderr();
    match &cli.command.common().out {
        Some(path) => match std::fs::File::create(path) {
            Ok(file) => {
                let mut w = io::BufWriter::new(file);
                let code = run(&cli, &mut w, &mut stderr);
                if let Err(e) = w.flush() {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
                code
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                EXIT_INPUT
            }
        },
        None => run(&cli, &mut io::stdout().lock(), &mut stderr),
    }
}
