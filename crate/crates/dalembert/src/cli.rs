//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dalembert_core::causet::{bdg_action, ActionReport};
use dalembert_core::coefficients::{compute_c, layer_count};
use dalembert_core::diagrams::{
    cancellation_report, check_feasible, count_b, count_restricted, count_tilde, enumerate_b,
    is_in_restricted_class, theorem_check,
};
use dalembert_core::evenstrings::{
    constrained_paths, constrained_strings, count_constrained_paths, count_constrained_strings,
};
use dalembert_core::sprinkling::{density_from_ell, estimate_box, DiamondConfig, FieldSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::{read_causal_set, to_i128, write_csv, write_json, CoefficientTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "dalembert",
    version,
    about = "Coefficients, chord diagrams and causal-set operators for the discrete d'Alembertian"
)]
pub struct Cli {
    /// Output format; tables default to CSV, reports to JSON.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficients C_i^(d) and their scaled integer forms.
    Coeffs {
        #[arg(long)]
        dim: u32,
    },
    /// Counts (or lists) coloured noncrossing partial chord diagrams.
    Enumerate(EnumerateArgs),
    /// Checks the diagram counts and the insertion cancellation against C_i^(d).
    Verify {
        #[arg(long)]
        dim: u32,
        /// Largest layer index to check; defaults to all of them.
        #[arg(long)]
        max_i: Option<u32>,
    },
    /// Constrained binary strings and lattice paths for even dimensions.
    Strings {
        #[arg(long)]
        dim: u32,
        #[arg(long = "i")]
        index: u32,
        /// Print the strings themselves.
        #[arg(long)]
        list: bool,
        /// With --list, print lattice paths (R/U) instead of strings.
        #[arg(long, requires = "list")]
        paths: bool,
    },
    /// Interval abundances and action of a causal set read from JSON.
    Action {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dim: u32,
        #[command(flatten)]
        scale: Scale,
    },
    /// Monte Carlo estimate of the operator at the tip of a sprinkled diamond.
    Sprinkle {
        #[arg(long)]
        dim: u32,
        #[command(flatten)]
        scale: Scale,
        #[arg(long, default_value_t = 1.0)]
        half_height: f64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// `c`, a monomial such as `t^2` or `0.5*x*t`, or `table:v0,v1,...`.
        #[arg(long, default_value = "1")]
        field: String,
        /// Also write one CSV row per trial to this file.
        #[arg(long)]
        per_trial: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub chords: usize,
    #[arg(long)]
    pub points: usize,
    /// Print the elements instead of counting them.
    #[arg(long)]
    pub list: bool,
    /// Restrict to fewer than this many bare points before each constrained first end.
    #[arg(long, requires = "place_bound")]
    pub gap_bound: Option<usize>,
    /// Number of leading insertion places that carry the gap constraint.
    #[arg(long, requires = "gap_bound")]
    pub place_bound: Option<usize>,
    /// Count the restricted class up to exchanging red and blue.
    #[arg(long, requires = "gap_bound")]
    pub tilde: bool,
}

/// Discreteness scale, given directly or through the density `ρ = ℓ^(-d)`.
#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct Scale {
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(long)]
    pub density: Option<f64>,
}

impl Scale {
    fn density(&self, d: u32) -> Option<f64> {
        self.density
            .or_else(|| self.ell.map(|ell| density_from_ell(d, ell)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerateRow {
    pub chords: usize,
    pub points: usize,
    pub class: String,
    pub gap_bound: Option<usize>,
    pub place_bound: Option<usize>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementRow {
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub d: u32,
    pub i: u32,
    pub chords: usize,
    pub points: usize,
    pub scaled: i128,
    pub signed_count: i128,
    pub theorem: bool,
    pub elements: usize,
    pub mismatches: usize,
    pub strays: usize,
    pub cancellation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StringsRow {
    pub d: u32,
    pub i: u32,
    pub strings: i128,
    pub paths: i128,
    /// `(-1)^(i-1) C_i^(d)`.
    pub coefficient: i128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SprinkleSummary {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub rho: f64,
    pub ell: f64,
    pub dimension: u32,
    pub half_height: f64,
    pub field: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TrialRow {
    trial: u64,
    value: f64,
}

/// Flat CSV form of an action report.
#[derive(Debug, Serialize)]
struct ActionRow {
    dimension: u32,
    length_scale: f64,
    n: usize,
    abundances: String,
    action: f64,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
/// Reports go to `out` unless `--output` names a file; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = execute(&cli, &mut buffer).and_then(|status| {
        match &cli.output {
            Some(path) => std::fs::write(path, &buffer)?,
            None => out.write_all(&buffer)?,
        }
        Ok(status)
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit<S: Serialize>(rows: &[S], format: Format, out: &mut Vec<u8>) -> Result<()> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(&rows, out),
    }
}

/// Runs the parsed command, writing its report to `out`. Returns 1 when a
/// verification found a mismatch and 0 otherwise.
pub fn execute(cli: &Cli, out: &mut Vec<u8>) -> Result<i32> {
    let table_format = cli.format.unwrap_or(Format::Csv);
    let report_format = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Coeffs { dim } => {
            let table = CoefficientTable::new(*dim)?;
            match table_format {
                Format::Csv => write_csv(&table.rows, out)?,
                Format::Json => write_json(&table, out)?,
            }
        }
        Command::Enumerate(args) => enumerate(args, table_format, out)?,
        Command::Verify { dim, max_i } => return verify(*dim, *max_i, table_format, out),
        Command::Strings {
            dim,
            index,
            list,
            paths,
        } => strings(*dim, *index, *list, *paths, table_format, out)?,
        Command::Action { input, dim, scale } => {
            let file = File::open(input).map_err(|source| CliError::Read {
                path: input.clone(),
                source,
            })?;
            let set = read_causal_set(BufReader::new(file))?;
            let ell = match scale.density {
                Some(rho) if rho > 0.0 => rho.powf(-1.0 / *dim as f64),
                Some(rho) => {
                    return Err(CliError::Usage(format!(
                        "density must be positive, got {rho}"
                    )))
                }
                None => scale.ell.unwrap_or(1.0),
            };
            let report = bdg_action(&set, *dim, ell)?;
            match report_format {
                Format::Json => write_json(&report, out)?,
                Format::Csv => write_csv(&[action_row(&report)], out)?,
            }
        }
        Command::Sprinkle {
            dim,
            scale,
            half_height,
            trials,
            field,
            per_trial,
        } => {
            let rho = scale
                .density(*dim)
                .ok_or_else(|| CliError::Usage("one of --density or --ell is required".into()))?;
            let spec: FieldSpec = field.parse()?;
            let config = DiamondConfig::new(*dim, rho, *half_height, cli.seed)?;
            let estimate = estimate_box(&config, &spec, *trials)?;
            if let Some(path) = per_trial {
                let rows: Vec<TrialRow> = estimate
                    .samples
                    .iter()
                    .enumerate()
                    .map(|(trial, &value)| TrialRow {
                        trial: trial as u64,
                        value,
                    })
                    .collect();
                write_csv(&rows, File::create(path)?)?;
            }
            let summary = SprinkleSummary {
                mean: estimate.mean,
                std_error: estimate.std_error,
                trials: estimate.trials,
                rho,
                ell: estimate.ell,
                dimension: *dim,
                half_height: *half_height,
                field: field.clone(),
                seed: cli.seed,
            };
            match report_format {
                Format::Json => write_json(&summary, out)?,
                Format::Csv => write_csv(&[summary], out)?,
            }
        }
    }
    Ok(0)
}

fn action_row(report: &ActionReport) -> ActionRow {
    let abundances: Vec<String> = report.abundances.iter().map(u64::to_string).collect();
    ActionRow {
        dimension: report.dimension,
        length_scale: report.length_scale,
        n: report.size,
        abundances: abundances.join(" "),
        action: report.action,
    }
}

fn enumerate(args: &EnumerateArgs, format: Format, out: &mut Vec<u8>) -> Result<()> {
    let (n, m) = (args.chords, args.points);
    check_feasible(n, m)?;
    let bounds = args.gap_bound.zip(args.place_bound);
    if args.list {
        if args.tilde {
            return Err(CliError::Usage(
                "--tilde counts classes and cannot be combined with --list".into(),
            ));
        }
        let rows: Vec<ElementRow> = enumerate_b(n, m)
            .into_iter()
            .filter(|b| bounds.is_none_or(|(gap, place)| is_in_restricted_class(b, gap, place)))
            .map(|b| ElementRow {
                element: b.to_string(),
            })
            .collect();
        return emit(&rows, format, out);
    }
    let (class, count) = match bounds {
        None => ("all", count_b(n, m)),
        Some((gap, place)) if args.tilde => ("tilde", count_tilde(n, m, gap, place)),
        Some((gap, place)) => ("restricted", count_restricted(n, m, gap, place)),
    };
    let row = EnumerateRow {
        chords: n,
        points: m,
        class: class.into(),
        gap_bound: args.gap_bound,
        place_bound: args.place_bound,
        count,
    };
    emit(&[row], format, out)
}

fn verify(d: u32, max_i: Option<u32>, format: Format, out: &mut Vec<u8>) -> Result<i32> {
    let top = layer_count(d.max(2));
    let max_i = max_i.unwrap_or(top);
    if d < 2 || max_i == 0 || max_i > top {
        return Err(CliError::Usage(format!(
            "--max-i must lie in 1..={top} for dimension {d}"
        )));
    }
    let mut rows = Vec::new();
    for i in 1..=max_i {
        let check = theorem_check(d, i)?;
        let report = cancellation_report(d, i)?;
        rows.push(VerifyRow {
            d,
            i,
            chords: check.chords,
            points: check.points,
            scaled: to_i128(&check.scaled_coefficient)?,
            signed_count: to_i128(&check.signed_count())?,
            theorem: check.holds(),
            elements: report.elements,
            mismatches: report.mismatches,
            strays: report.strays,
            cancellation: report.collapses(),
        });
    }
    emit(&rows, format, out)?;
    Ok(if rows.iter().all(|r| r.theorem && r.cancellation) {
        0
    } else {
        1
    })
}

fn strings(
    d: u32,
    i: u32,
    list: bool,
    paths: bool,
    format: Format,
    out: &mut Vec<u8>,
) -> Result<()> {
    if list {
        let rows: Vec<ElementRow> = if paths {
            constrained_paths(d, i)?
                .iter()
                .map(|p| ElementRow {
                    element: p.to_string(),
                })
                .collect()
        } else {
            constrained_strings(d, i)?
                .iter()
                .map(|s| ElementRow {
                    element: s.to_string(),
                })
                .collect()
        };
        return emit(&rows, format, out);
    }
    let c = compute_c(d, i)?;
    let signed = if i % 2 == 1 { c } else { -c };
    if !signed.is_integer() {
        return Err(CliError::Usage(format!("C_{i}^({d}) is not an integer")));
    }
    let row = StringsRow {
        d,
        i,
        strings: to_i128(&count_constrained_strings(d, i)?)?,
        paths: to_i128(&count_constrained_paths(d, i)?)?,
        coefficient: to_i128(&signed.to_integer())?,
    };
    emit(&[row], format, out)
}
