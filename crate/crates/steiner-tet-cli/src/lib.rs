//! Command dispatch, file IO, and serialization for the `steiner-tet`
//! binary.
//!
//! Commands: `solve` (frame + certification + Simpson construction + twist,
//! optional variational cross-check), `ft` (single unweighted node),
//! `twist` (from given or solved intercepts), `check` (certification only),
//! `oracle` (direct minimizer only), `export` (tree as OBJ line mesh or
//! edge CSV), `batch` (newline-delimited instances, processed concurrently,
//! output order preserved).

pub mod export;
pub mod instance;
pub mod pipeline;
pub mod record;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;

use instance::InstanceFile;
use pipeline::{all_pairings, ft_record, solve_record, status_of, Settings};
use record::{DegeneracyOut, OracleOut, ResultRecord, TwistOut, CSV_HEADER};
use steiner_tet::{
    check_nondegenerate, minimize_two_nodes, skew_frame, solve_simpson, twist_angle,
    SteinerTree, WeightSystem,
};

/// Exit status 2: the input file failed validation.
pub const EXIT_INVALID_INPUT: i32 = 2;
/// Exit status 3: the solver failed (no convergence or a degenerate
/// instance).
pub const EXIT_SOLVER_FAILURE: i32 = 3;

/// A command failure with its exit code and machine-readable payload.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub context: Option<String>,
}

impl CliError {
    pub fn invalid(message: String) -> Self {
        CliError { code: EXIT_INVALID_INPUT, message, context: None }
    }

    pub fn solver(message: String, context: Option<String>) -> Self {
        CliError { code: EXIT_SOLVER_FAILURE, message, context }
    }

    pub fn io(message: String) -> Self {
        CliError { code: 1, message, context: None }
    }

    /// The `{code, message, context}` object printed to stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct ErrObj<'a> {
            code: i32,
            message: &'a str,
            context: Option<&'a str>,
        }
        serde_json::to_string(&ErrObj {
            code: self.code,
            message: &self.message,
            context: self.context.as_deref(),
        })
        .expect("error object serializes")
    }

    fn from_status(status: &str, message: String) -> Self {
        if status == "invalid" {
            CliError::invalid(message)
        } else {
            CliError::solver(message, Some(status.to_string()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Obj,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BatchFormat {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "steiner-tet",
    about = "Weighted Steiner minimal trees for tetrahedra: two-node construction, certification, twist angle, and variational cross-checks",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct CommonArgs {
    /// Instance file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Relative convergence tolerance (overrides the instance file).
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap (overrides the instance file).
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the two-node problem: frame, certification, Simpson line,
    /// nodes, cost, and twist angle.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Cross-check against the direct variational minimizer.
        #[arg(long)]
        oracle: bool,
        /// Seed for the oracle's random restarts.
        #[arg(long)]
        seed: Option<u64>,
        /// Include the intercept iterate trace in the output.
        #[arg(long)]
        trace: bool,
        /// Solve all three edge pairings and report each.
        #[arg(long)]
        all_pairings: bool,
        /// Also include the unweighted single-node block.
        #[arg(long)]
        ft: bool,
    },
    /// Solve the unweighted single Fermat-Torricelli point system.
    Ft {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Twist angle from given intercepts, or from a fresh solve.
    Twist {
        #[command(flatten)]
        common: CommonArgs,
        /// First intercept; solved when omitted.
        #[arg(long)]
        t12: Option<f64>,
        /// Second intercept; solved when omitted.
        #[arg(long)]
        t34: Option<f64>,
    },
    /// Non-degeneracy certification only.
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Direct variational minimizer only.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Seed for the random restarts.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of restarts.
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Solve and export the tree geometry.
    Export {
        #[command(flatten)]
        common: CommonArgs,
        /// Output format.
        #[arg(long, value_enum, default_value_t = ExportFormat::Obj)]
        format: ExportFormat,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve many instances (one JSON object per input line), concurrently,
    /// preserving input order.
    Batch {
        #[command(flatten)]
        common: CommonArgs,
        /// Output format.
        #[arg(long, value_enum, default_value_t = BatchFormat::Json)]
        format: BatchFormat,
        /// Cross-check each instance against the variational minimizer.
        #[arg(long)]
        oracle: bool,
        /// Base seed for oracle restarts (instances may override).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("record serializes")
}

fn load_single(common: &CommonArgs) -> Result<(InstanceFile, steiner_tet::TetInstance), CliError> {
    let text = read_input(&common.input)?;
    let inst = InstanceFile::parse(&text)?;
    let tet = inst.to_instance()?;
    Ok((inst, tet))
}

/// Runs one command line (without the program name) and returns what should
/// be printed on stdout.
pub fn run(args: &[String]) -> Result<String, CliError> {
    let mut full = vec!["steiner-tet".to_string()];
    full.extend_from_slice(args);
    let cli = Cli::try_parse_from(full).map_err(|e| CliError::invalid(e.to_string()))?;
    dispatch(cli)
}

fn strict(rec: ResultRecord) -> Result<ResultRecord, CliError> {
    if rec.status == "ok" {
        Ok(rec)
    } else {
        Err(CliError::from_status(
            &rec.status,
            rec.error.clone().unwrap_or_else(|| rec.status.clone()),
        ))
    }
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Solve { common, oracle, seed, trace, all_pairings: all, ft } => {
            let (inst, tet) = load_single(&common)?;
            let mut settings = Settings::merged(&inst, common.tol, common.max_iter, seed);
            settings.oracle = oracle;
            settings.trace = trace;
            settings.with_ft = ft;
            let id = inst.id_or(common.input.display().to_string().as_str());

            #[derive(Serialize)]
            struct SolveOut {
                #[serde(flatten)]
                record: ResultRecord,
                #[serde(skip_serializing_if = "Option::is_none")]
                ft: Option<record::FtRecord>,
            }

            let ft_block = if ft {
                Some(ft_record(&tet, id.clone(), &settings).map_err(|e| {
                    CliError::from_status(status_of(&e), e.to_string())
                })?)
            } else {
                None
            };

            if all {
                let mut outs = Vec::new();
                for variant in all_pairings(&tet) {
                    outs.push(solve_record(&variant, id.clone(), &settings));
                }
                Ok(json(&outs))
            } else {
                let rec = strict(solve_record(&tet, id, &settings))?;
                Ok(json(&SolveOut { record: rec, ft: ft_block }))
            }
        }
        Command::Ft { common } => {
            let (inst, tet) = load_single(&common)?;
            let settings = Settings::merged(&inst, common.tol, common.max_iter, None);
            let id = inst.id_or(common.input.display().to_string().as_str());
            let rec = ft_record(&tet, id, &settings)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;
            Ok(json(&rec))
        }
        Command::Twist { common, t12, t34 } => {
            let (inst, tet) = load_single(&common)?;
            let settings = Settings::merged(&inst, common.tol, common.max_iter, None);
            let frame = skew_frame(&tet)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;
            let (t12, t34) = match (t12, t34) {
                (Some(a), Some(b)) => (a, b),
                (None, None) => {
                    let w = WeightSystem::from_weights(&tet.weights)
                        .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;
                    let sol = solve_simpson(&frame, &w, settings.tol, settings.max_iter)
                        .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;
                    (sol.t12, sol.t34)
                }
                _ => {
                    return Err(CliError::invalid(
                        "--t12 and --t34 must be given together".to_string(),
                    ))
                }
            };
            let rep = twist_angle(&frame, t12, t34)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;

            #[derive(Serialize)]
            struct TwistCmdOut {
                id: String,
                t12: f64,
                t34: f64,
                #[serde(flatten)]
                twist: TwistOut,
            }
            Ok(json(&TwistCmdOut {
                id: inst.id_or(common.input.display().to_string().as_str()),
                t12,
                t34,
                twist: TwistOut::from_report(&rep),
            }))
        }
        Command::Check { common } => {
            let (inst, tet) = load_single(&common)?;
            let w = WeightSystem::from_weights(&tet.weights)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;
            let report = check_nondegenerate(&tet, &w)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;

            #[derive(Serialize)]
            struct CheckOut {
                id: String,
                pairing: &'static str,
                #[serde(flatten)]
                degeneracy: DegeneracyOut,
            }
            Ok(json(&CheckOut {
                id: inst.id_or(common.input.display().to_string().as_str()),
                pairing: tet.pairing.as_str(),
                degeneracy: DegeneracyOut::from_report(&report),
            }))
        }
        Command::Oracle { common, seed, restarts } => {
            let (inst, tet) = load_single(&common)?;
            let settings = Settings::merged(&inst, common.tol, common.max_iter, seed);
            let w = WeightSystem::from_weights(&tet.weights)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;
            let res = minimize_two_nodes(&tet, &w, settings.tol, 50_000, restarts, settings.seed)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;

            #[derive(Serialize)]
            struct OracleCmdOut {
                id: String,
                #[serde(flatten)]
                oracle: OracleOut,
            }
            Ok(json(&OracleCmdOut {
                id: inst.id_or(common.input.display().to_string().as_str()),
                oracle: OracleOut::new(&res),
            }))
        }
        Command::Export { common, format, output } => {
            let (inst, tet) = load_single(&common)?;
            let settings = Settings::merged(&inst, common.tol, common.max_iter, None);
            let id = inst.id_or(common.input.display().to_string().as_str());
            let rec = strict(solve_record(&tet, id, &settings))?;
            let nodes = rec.nodes.as_ref().expect("ok record has nodes");
            let w = WeightSystem::from_weights(&tet.weights)
                .map_err(|e| CliError::from_status(status_of(&e), e.to_string()))?;
            let tree = SteinerTree::assemble(
                &tet,
                &w,
                &steiner_tet::SteinerNodes {
                    o12: steiner_tet::Point3::new(nodes.o12[0], nodes.o12[1], nodes.o12[2]),
                    o34: steiner_tet::Point3::new(nodes.o34[0], nodes.o34[1], nodes.o34[2]),
                    cost: nodes.cost,
                },
            );
            let payload = match format {
                ExportFormat::Obj => export::export_obj(&tree),
                ExportFormat::Csv => export::export_csv(&tree),
            };
            match output {
                Some(path) => {
                    std::fs::write(&path, &payload).map_err(|e| {
                        CliError::io(format!("cannot write {}: {e}", path.display()))
                    })?;
                    Ok(format!("wrote {}\n", path.display()))
                }
                None => Ok(payload),
            }
        }
        Command::Batch { common, format, oracle, seed } => {
            let text = read_input(&common.input)?;
            let lines: Vec<(usize, &str)> = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .collect();

            let records: Vec<ResultRecord> = lines
                .par_iter()
                .map(|(idx, line)| {
                    let fallback = format!("line-{}", idx + 1);
                    match InstanceFile::parse(line).and_then(|inst| {
                        let tet = inst.to_instance()?;
                        Ok((inst, tet))
                    }) {
                        Ok((inst, tet)) => {
                            let mut settings =
                                Settings::merged(&inst, common.tol, common.max_iter, seed);
                            // Instance seed wins over the base seed.
                            if let Some(s) = inst.seed {
                                settings.seed = s;
                            }
                            settings.oracle = oracle;
                            solve_record(&tet, inst.id_or(&fallback), &settings)
                        }
                        Err(e) => {
                            let mut rec = ResultRecord::empty(fallback, "12-34");
                            rec.status = "invalid".to_string();
                            rec.error = Some(e.message);
                            rec
                        }
                    }
                })
                .collect();

            match format {
                BatchFormat::Json => {
                    let mut out = String::new();
                    for rec in &records {
                        out.push_str(&serde_json::to_string(rec).expect("record serializes"));
                        out.push('\n');
                    }
                    Ok(out)
                }
                BatchFormat::Csv => {
                    let mut out = String::from(CSV_HEADER);
                    out.push('\n');
                    for rec in &records {
                        out.push_str(&rec.csv_row());
                        out.push('\n');
                    }
                    Ok(out)
                }
            }
        }
    }
}

/// Convenience wrapper used by tests: run with `&str` arguments.
pub fn run_args(args: &[&str]) -> Result<String, CliError> {
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    run(&owned)
}

// Re-exported for integration tests.
pub use record::round6;

#[cfg(test)]
mod tests {
    use crate::record::{deg6, round6};

    #[test]
    fn deg6_rounds_to_six_decimals() {
        assert_eq!(deg6(std::f64::consts::PI), 180.0);
        assert_eq!(round6(125.2643896827), 125.26439);
    }
}
