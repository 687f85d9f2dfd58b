//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | a golden check failed |
//! | 2 | bad usage or input (unknown workload, malformed parameters or table) |
//! | 3 | the design does not fit and `--allow-oversubscribed` was not given |
//! | 4 | a file could not be read or written, or the architecture config is invalid |

mod bench;
mod golden;
mod workload;

pub use bench::{
    bench_csv, bench_row, calibrated_energy, run_bench, BenchRow, BENCH_CSV_HEADER,
    CALIBRATION_WORKLOAD,
};
pub use golden::{run_golden, GoldenSummary, MAX_DIM, MAX_STEPS, TOLERANCE};
pub use workload::{
    builtin_workloads, bw_params, find, parse_workloads, render_workloads, Workload,
};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::arch::ArchConfig;
use crate::dse::{search, DseError, SearchSpace};
use crate::mapper::{map_loop_rnn, validate, MappingParams};
use crate::sim::{
    replay, simulate_loop, SimError, SimOptions, SimReport, CSV_HEADER, TRACE_CSV_HEADER,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "loopcell",
    version,
    about = "Loop-based RNN mapping model for a spatial accelerator"
)]
pub struct Cli {
    /// Architecture config (TOML); the built-in default when omitted.
    #[arg(long, global = true)]
    pub arch: Option<PathBuf>,
    /// Workload table (TOML); the built-in table when omitted.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the cell model and the 8-bit datapath against independent oracles.
    Golden {
        /// Workload name; every row of the table when omitted.
        #[arg(long)]
        workload: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Simulate one workload.
    Simulate {
        #[arg(long)]
        workload: String,
        /// `hu,ru,rv` or `key=value` pairs; the workload's own, else searched.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        allow_oversubscribed: bool,
        /// Write a per-cycle activity trace (CSV) to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Search mapping parameters and print the frontier.
    Dse {
        #[arg(long)]
        workload: String,
        #[arg(long)]
        allow_oversubscribed: bool,
    },
    /// Run the whole table.
    Bench,
    /// Print the layout of a mapped design.
    Describe {
        #[arg(long)]
        workload: String,
        #[arg(long)]
        params: Option<String>,
    },
    /// Print the workload table as TOML.
    Table,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn io(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: m.into(),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let code = match e {
            SimError::Oversubscribed(_) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DseError> for CliError {
    fn from(e: DseError) -> Self {
        let code = match e {
            DseError::NoValidCandidate => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_arch(path: Option<&Path>) -> CliResult<ArchConfig> {
    match path {
        Some(p) => ArchConfig::from_file(p).map_err(|e| CliError::io(e.to_string())),
        None => Ok(ArchConfig::default_config()),
    }
}

fn load_table(path: Option<&Path>) -> CliResult<Vec<Workload>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::io(format!("cannot read {}: {e}", p.display())))?;
            parse_workloads(&text).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))
        }
        None => Ok(builtin_workloads()),
    }
}

fn pick(table: &[Workload], name: &str) -> CliResult<Workload> {
    find(table, name).cloned().ok_or_else(|| {
        let names: Vec<&str> = table.iter().map(|w| w.name.as_str()).collect();
        CliError::usage(format!(
            "unknown workload `{name}` (known: {})",
            names.join(", ")
        ))
    })
}

fn parse_params(s: &str) -> CliResult<MappingParams> {
    s.parse()
        .map_err(|e: crate::mapper::MapError| CliError::usage(e.to_string()))
}

/// Explicit parameters, else the workload's, else the search result.
fn resolve_params(
    w: &Workload,
    explicit: Option<&str>,
    cfg: &ArchConfig,
    allow_oversubscribed: bool,
) -> CliResult<MappingParams> {
    if let Some(s) = explicit {
        return parse_params(s);
    }
    if let Some(p) = w.params {
        return Ok(p);
    }
    let dims = w.dims().map_err(|e| CliError::usage(e.to_string()))?;
    let mut space = SearchSpace::default_for(&dims, cfg);
    space.allow_oversubscribed = allow_oversubscribed;
    Ok(search(&dims, cfg, &space)?.best)
}

fn comparison(w: &Workload, r: &SimReport) -> Vec<(&'static str, Option<f64>)> {
    let lat = r.latency_s * 1e3;
    let tf = r.eff_flops / 1e12;
    vec![
        ("ref_latency_ms", w.ref_latency_ms),
        ("latency_ratio", w.ref_latency_ms.map(|p| lat / p)),
        ("ref_tflops", w.ref_tflops),
        ("tflops_ratio", w.ref_tflops.map(|p| tf / p)),
        ("ref_power_w", w.ref_power_w),
        (
            "power_ratio",
            w.ref_power_w.zip(r.power_w).map(|(p, m)| m / p),
        ),
    ]
}

fn has_reference(w: &Workload) -> bool {
    w.ref_latency_ms.is_some() || w.ref_tflops.is_some() || w.ref_power_w.is_some()
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Simulation output for one workload; columns after [`CSV_HEADER`] appear
/// only when the workload carries reference numbers.
pub fn render_simulation(w: &Workload, r: &SimReport, format: Format) -> CliResult<String> {
    let cmp = comparison(w, r);
    match format {
        Format::Csv => {
            let mut head = CSV_HEADER.to_string();
            let mut row = r.csv_row();
            if has_reference(w) {
                for (k, v) in &cmp {
                    head.push(',');
                    head.push_str(k);
                    row.push(',');
                    row.push_str(&cell(*v));
                }
            }
            Ok(format!("{head}\n{row}\n"))
        }
        Format::Json => {
            let mut v = serde_json::to_value(r).expect("report serializes");
            v["workload"] = w.name.clone().into();
            if has_reference(w) {
                let m: serde_json::Map<String, serde_json::Value> = cmp
                    .into_iter()
                    .map(|(k, x)| (k.to_string(), x.into()))
                    .collect();
                v["comparison"] = m.into();
            }
            Ok(format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("json")
            ))
        }
        Format::Text => Err(CliError::usage("simulate supports --format json|csv")),
    }
}

fn cmd_golden(
    table: &[Workload],
    name: Option<&str>,
    seed: u64,
    format: Format,
) -> CliResult<(String, bool)> {
    let rows: Vec<Workload> = match name {
        Some(n) => vec![pick(table, n)?],
        None => table.to_vec(),
    };
    let mut out = Vec::new();
    for w in &rows {
        out.push(run_golden(w, seed).map_err(|e| CliError::usage(e.to_string()))?);
    }
    let pass = out.iter().all(|s| s.pass);
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out).expect("json")),
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            for s in &out {
                wtr.serialize(s).expect("in-memory write");
            }
            String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => out
            .iter()
            .map(|s| {
                format!(
                    "{} {} H={} D={} T={} seed={}: max deviation {:e}, {}/{} 8-bit dots exact{} -> {}\n",
                    s.name,
                    s.kind,
                    s.h,
                    s.d,
                    s.t,
                    s.seed,
                    s.max_deviation,
                    s.dot_checks - s.dot_mismatches,
                    s.dot_checks,
                    match s.lstm1_identical {
                        Some(true) => ", LSTM-1 rows bit-identical",
                        Some(false) => ", LSTM-1 rows DIFFER",
                        None => "",
                    },
                    if s.pass { "PASS" } else { "FAIL" }
                )
            })
            .collect(),
    };
    Ok((text, pass))
}

fn write_trace(
    path: &Path,
    design: &crate::mapper::MappedDesign,
    dims: &crate::rnn::CellDims,
) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::io(format!("cannot write {}: {e}", path.display()));
    let mut f = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(f, "{TRACE_CSV_HEADER}").map_err(io)?;
    let mut err = None;
    replay(design, dims, |row| {
        if err.is_none() {
            if let Err(e) = writeln!(f, "{}", row.csv_row()) {
                err = Some(e);
            }
        }
    });
    if let Some(e) = err {
        return Err(io(e));
    }
    f.flush().map_err(io)
}

/// Runs a parsed command; returns the text to print and the exit code.
pub fn execute(cli: &Cli) -> CliResult<(String, u8)> {
    let cfg = load_arch(cli.arch.as_deref())?;
    let table = load_table(cli.table.as_deref())?;
    let format = cli.format;
    match &cli.command {
        Command::Golden { workload, seed } => {
            let (text, pass) = cmd_golden(
                &table,
                workload.as_deref(),
                *seed,
                format.unwrap_or(Format::Text),
            )?;
            Ok((text, if pass { EXIT_OK } else { EXIT_CHECK_FAILED }))
        }
        Command::Simulate {
            workload,
            params,
            allow_oversubscribed,
            trace,
        } => {
            let w = pick(&table, workload)?;
            let dims = w.dims().map_err(|e| CliError::usage(e.to_string()))?;
            let p = resolve_params(&w, params.as_deref(), &cfg, *allow_oversubscribed)?;
            let design =
                map_loop_rnn(&dims, &p, &cfg).map_err(|e| CliError::usage(e.to_string()))?;
            let opts = SimOptions {
                allow_oversubscribed: *allow_oversubscribed,
            };
            let mut r = simulate_loop(&design, &dims, &cfg, opts)?;
            if let Some(c) = calibrated_energy(&cfg) {
                r = r.with_energy(&c)?;
            }
            if let Some(path) = trace {
                write_trace(path, &design, &dims)?;
            }
            Ok((
                render_simulation(&w, &r, format.unwrap_or(Format::Json))?,
                EXIT_OK,
            ))
        }
        Command::Dse {
            workload,
            allow_oversubscribed,
        } => {
            let w = pick(&table, workload)?;
            let dims = w.dims().map_err(|e| CliError::usage(e.to_string()))?;
            let mut space = SearchSpace::default_for(&dims, &cfg);
            space.allow_oversubscribed = *allow_oversubscribed;
            let res = search(&dims, &cfg, &space)?;
            let text = match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = format!("{CSV_HEADER}\n");
                    for r in &res.frontier {
                        s.push_str(&r.csv_row());
                        s.push('\n');
                    }
                    s
                }
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "workload": w.name,
                        "best": res.best.to_string(),
                        "enumerated": res.enumerated,
                        "valid": res.valid,
                        "frontier": res.frontier,
                    }))
                    .expect("json")
                ),
                Format::Text => return Err(CliError::usage("dse supports --format json|csv")),
            };
            Ok((text, EXIT_OK))
        }
        Command::Bench => {
            let rows = run_bench(&table, &cfg).map_err(CliError::usage)?;
            let text = match format.unwrap_or(Format::Csv) {
                Format::Csv => bench_csv(&rows),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows).expect("json")),
                Format::Text => return Err(CliError::usage("bench supports --format json|csv")),
            };
            Ok((text, EXIT_OK))
        }
        Command::Describe { workload, params } => {
            let w = pick(&table, workload)?;
            let dims = w.dims().map_err(|e| CliError::usage(e.to_string()))?;
            let p = resolve_params(&w, params.as_deref(), &cfg, true)?;
            let design =
                map_loop_rnn(&dims, &p, &cfg).map_err(|e| CliError::usage(e.to_string()))?;
            let violations = validate(&design, &cfg);
            let text = match format.unwrap_or(Format::Text) {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "design": design,
                        "violations": violations,
                    }))
                    .expect("json")
                ),
                Format::Text => {
                    let mut s = design.describe();
                    if violations.is_empty() {
                        s.push_str("fits the architecture\n");
                    }
                    for v in &violations {
                        s.push_str(&format!("does not fit: {v}\n"));
                    }
                    s
                }
                Format::Csv => return Err(CliError::usage("describe supports --format text|json")),
            };
            Ok((text, EXIT_OK))
        }
        Command::Table => Ok((render_workloads(&table), EXIT_OK)),
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(m) => {
                    eprintln!("error: {m}");
                    EXIT_IO
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
