//! `eja` — seeded verification campaigns over Euclidean Jordan algebras and
//! the bioctonionic plane, with machine-readable reports.
//!
//! Exit codes: 0 = all checks passed, 1 = a check failed, 2 = configuration
//! error (bad descriptor, refused precondition, usage).

use clap::{Args, Parser, Subcommand};
use eja_core::campaigns;
use eja_core::error::EjaError;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "eja", version, about = "Jordan algebra transition-probability verification campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Report file; stdout when omitted
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Report format; json carries the full report, csv and jsonl only the
    /// record rows
    #[arg(long, default_value = "json", value_parser = ["json", "csv", "jsonl"])]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan identity, trace, Peirce and rank checks on one algebra
    VerifyCore {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual tolerance for the identity and Peirce checks
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Midpoint campaign: between-point and halving defects over atom pairs
    Lemma1 {
        #[arg(long)]
        algebra: String,
        /// Random atom pairs
        #[arg(long, default_value_t = 500)]
        trials: u64,
        /// Forced orthogonal pairs (exercises the symmetry route)
        #[arg(long)]
        orthogonal: Option<u64>,
        /// Forced near-equal pairs
        #[arg(long)]
        near_equal: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Planted two-point homogeneity witnesses
    Homogeneity {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run the bounded search on H(3,O) and report success rates
        #[arg(long, default_value_t = false)]
        best_effort: bool,
        /// Evaluation budget per search (octonion family only)
        #[arg(long, default_value_t = 60000)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Witnesses for orthogonal pairs (transition zero on both sides)
    BitSymmetry {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Non-homogeneity of a direct sum: bounded witness search must fail
    ReducibleDemo {
        /// First summand (simple, rank ≥ 2)
        #[arg(long)]
        algebra: String,
        /// Second summand
        #[arg(long)]
        algebra2: String,
        #[arg(long, default_value_t = 10000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bioctonionic plane: certifications, states, metric, midpoint search
    Bioct {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluation budget for each midpoint search
        #[arg(long, default_value_t = 50000)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Greedy maximal chain of pairwise orthogonal atoms
    Rank {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

struct Rendered {
    json: String,
    csv: String,
    jsonl: String,
    pass: bool,
}

fn render<T: serde::Serialize>(report: &T, csv: String, jsonl: Option<String>, pass: bool) -> Result<Rendered, EjaError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| EjaError::Numerical(format!("serialization failed: {e}")))?;
    let jsonl = match jsonl {
        Some(lines) => lines,
        None => serde_json::to_string(report)
            .map_err(|e| EjaError::Numerical(format!("serialization failed: {e}")))?
            + "\n",
    };
    Ok(Rendered {
        json: json + "\n",
        csv,
        jsonl,
        pass,
    })
}

fn summary_csv(pairs: &[(&str, String)]) -> String {
    let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
    let row: Vec<String> = pairs.iter().map(|(_, v)| v.clone()).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn run(command: Command) -> Result<(Rendered, OutputArgs), EjaError> {
    match command {
        Command::VerifyCore {
            algebra,
            trials,
            seed,
            tol,
            output,
        } => {
            let report = campaigns::verify_core(&algebra, trials, seed, tol)?;
            let csv = summary_csv(&[
                ("algebra", report.config.algebra.clone().unwrap_or_default()),
                ("dimension", report.dimension.to_string()),
                ("rank", report.rank.to_string()),
                ("jordan_identity_max", format!("{:.17e}", report.jordan_identity_max)),
                ("unit_action_max", format!("{:.17e}", report.unit_action_max)),
                ("trace_unit_error", format!("{:.17e}", report.trace_unit_error)),
                ("atom_trace_max_error", format!("{:.17e}", report.atom_trace_max_error)),
                ("peirce_law_max", format!("{:.17e}", report.peirce_law_max)),
                ("orthogonal_rank", report.orthogonal_rank.to_string()),
                ("pass", report.pass.to_string()),
            ]);
            let pass = report.pass;
            Ok((render(&report, csv, None, pass)?, output))
        }
        Command::Lemma1 {
            algebra,
            trials,
            orthogonal,
            near_equal,
            seed,
            tol,
            output,
        } => {
            let orthogonal = orthogonal.unwrap_or(trials / 5);
            let near_equal = near_equal.unwrap_or(trials / 10);
            let report =
                campaigns::midpoint_campaign(&algebra, trials, orthogonal, near_equal, seed, tol)?;
            let csv = campaigns::midpoint_records_csv(&report.records);
            let jsonl = campaigns::records_jsonl(&report.records);
            let pass = report.pass;
            Ok((render(&report, csv, Some(jsonl), pass)?, output))
        }
        Command::Homogeneity {
            algebra,
            trials,
            seed,
            best_effort,
            budget,
            output,
        } => {
            let octonion = matches!(
                eja_core::jordan::Descriptor::parse(&algebra)?,
                eja_core::jordan::Descriptor::Matrix(_, eja_core::hypercomplex::Division::Octonion)
            );
            let report = if octonion && best_effort {
                campaigns::octonion_witness_campaign(&algebra, trials, seed, budget as usize)?
            } else {
                campaigns::homogeneity_campaign(&algebra, trials, seed, best_effort)?
            };
            let csv = campaigns::witness_records_csv(&report.records);
            let jsonl = campaigns::records_jsonl(&report.records);
            let pass = report.pass;
            Ok((render(&report, csv, Some(jsonl), pass)?, output))
        }
        Command::BitSymmetry {
            algebra,
            trials,
            seed,
            output,
        } => {
            let report = campaigns::bit_symmetry_campaign(&algebra, trials, seed, false)?;
            let csv = campaigns::witness_records_csv(&report.records);
            let jsonl = campaigns::records_jsonl(&report.records);
            let pass = report.pass;
            Ok((render(&report, csv, Some(jsonl), pass)?, output))
        }
        Command::ReducibleDemo {
            algebra,
            algebra2,
            trials,
            seed,
            output,
        } => {
            let report = campaigns::reducible_demo(&algebra, &algebra2, trials, seed)?;
            let csv = summary_csv(&[
                ("algebra", report.report.algebra.clone()),
                ("samples", report.report.samples.to_string()),
                ("transition_q1", format!("{:.17e}", report.report.transition_q1)),
                ("transition_q2", format!("{:.17e}", report.report.transition_q2)),
                (
                    "automorphisms_fixing_p",
                    report.report.automorphisms_fixing_p.to_string(),
                ),
                ("max_block_leak", format!("{:.17e}", report.report.max_block_leak)),
                ("witnesses_found", report.report.witnesses_found.to_string()),
                ("pass", report.pass.to_string()),
            ]);
            let pass = report.pass;
            eprintln!("{}", report.report.verdict);
            Ok((render(&report, csv, None, pass)?, output))
        }
        Command::Bioct {
            trials,
            seed,
            budget,
            output,
        } => {
            let report = campaigns::bioct_campaign(trials, seed, budget)?;
            let csv = campaigns::midpoint_search_csv(&report.midpoint_general);
            let jsonl = campaigns::records_jsonl(&report.midpoint_general);
            let pass = report.pass;
            Ok((render(&report, csv, Some(jsonl), pass)?, output))
        }
        Command::Rank {
            algebra,
            seed,
            output,
        } => {
            let report = campaigns::rank_check(&algebra, seed)?;
            let csv = summary_csv(&[
                ("algebra", report.config.algebra.clone().unwrap_or_default()),
                ("orthogonal_rank", report.orthogonal_rank.to_string()),
                ("descriptor_rank", report.descriptor_rank.to_string()),
                ("pass", report.pass.to_string()),
            ]);
            let pass = report.pass;
            Ok((render(&report, csv, None, pass)?, output))
        }
    }
}

fn emit(rendered: &Rendered, output: &OutputArgs) -> std::io::Result<()> {
    let body = match output.format.as_str() {
        "csv" => &rendered.csv,
        "jsonl" => &rendered.jsonl,
        _ => &rendered.json,
    };
    match &output.out {
        Some(path) => std::fs::write(path, body),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((rendered, output)) => {
            if let Err(e) = emit(&rendered, &output) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if rendered.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
