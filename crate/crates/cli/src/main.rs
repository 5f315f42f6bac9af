use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graph_balance::bench::{self, BenchError, BenchOptions};
use graph_balance::format::{self, assignment_to_orientation, parse_assignment};
use graph_balance::generate::{generate, Family};
use graph_balance::oracle::{brute_force_opt, DEFAULT_BUDGET};
use graph_balance::{build_network, solve, Instance, NetworkParams, Orientation, Weights};
use num_rational::Ratio;

#[derive(Parser)]
#[command(name = "gbal", version, about = "Two-weight graph balancing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orient an instance and print the assignment.
    Solve {
        file: PathBuf,
        /// Also write the assignment file here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an assignment file against an instance and recompute its makespan.
    Verify { file: PathBuf, assignment: PathBuf },
    /// Exact optimum by exhaustive search.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Generate an instance: random, parallel, starmix or cyclemix.
    Gen {
        family: Family,
        /// Vertices (machines).
        n: usize,
        /// Edges (jobs).
        m: usize,
        /// Weight pair as <w_small>/<w_big>.
        weights: Weights,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a benchmark suite, e.g. `random:6:10:2/5:50,exhaustive:3:4:1/2`.
    Bench {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_oracle: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Print the balance network N(p, q) as an arc list.
    Network { file: PathBuf, p: u64, q: u64 },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Text,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn input(e: impl Display) -> Self {
        Failure::Input(e.to_string())
    }

    fn internal(e: impl Display) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    format::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// `7 (= 7/5 × w_big)`: raw value first, then in units of the big weight.
fn describe(inst: &Instance, total: u64) -> String {
    let raw = inst.unit() * total;
    let scaled = Ratio::new(total, inst.big_weight());
    format!("{raw} (= {scaled} × w_big)")
}

fn print_assignment(o: &Orientation) {
    print!("{}", format::serialize_assignment(o));
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { file, output } => {
            let inst = load(&file)?;
            let report = solve(&inst).map_err(|e| {
                if e.is_internal() {
                    Failure::internal(e)
                } else {
                    Failure::input(e)
                }
            })?;
            println!("makespan {}", describe(&inst, report.total));
            println!("branch {}", report.branch);
            if let Some(s) = report.search {
                let q = |q: Option<u64>| q.map_or("-".to_string(), |q| q.to_string());
                println!(
                    "search k={} q_a={} q_b={} lst_threshold={}",
                    s.k,
                    q(s.q_a),
                    q(s.q_b),
                    s.lst_threshold
                );
            }
            println!("assignment");
            print_assignment(&report.orientation);
            if let Some(path) = output {
                fs::write(&path, format::serialize_assignment(&report.orientation))
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
        }
        Command::Verify { file, assignment } => {
            let inst = load(&file)?;
            let table = parse_assignment(&read(&assignment)?, inst.job_count())
                .map_err(|e| Failure::Input(format!("{}: {e}", assignment.display())))?;
            let o = assignment_to_orientation(&table).map_err(Failure::input)?;
            let ms = inst.makespan(&o).map_err(Failure::input)?;
            println!("ok makespan {}", describe(&inst, inst.total(ms)));
        }
        Command::Oracle { file, budget } => {
            let inst = load(&file)?;
            let r = brute_force_opt(&inst, budget).map_err(Failure::input)?;
            println!("opt {}", describe(&inst, inst.total(r.opt)));
            println!("explored {}", r.explored);
            println!("assignment");
            print_assignment(&r.witness);
        }
        Command::Gen {
            family,
            n,
            m,
            weights,
            seed,
        } => {
            let inst = generate(family, n, m, weights, seed).map_err(Failure::input)?;
            print!("{}", format::serialize(&inst));
        }
        Command::Bench {
            suite,
            seed,
            no_oracle,
            budget,
            format,
        } => {
            let entries = bench::parse_suite(&suite).map_err(Failure::input)?;
            let options = BenchOptions {
                seed,
                oracle: !no_oracle,
                budget,
            };
            let report = bench::run(&entries, &options).map_err(|e| match &e {
                BenchError::Solve { source, .. } if source.is_internal() => Failure::internal(e),
                _ => Failure::input(e),
            })?;
            match format {
                OutputFormat::Csv => {
                    print!("{}", report.to_csv());
                    eprint!("{}", report.summary());
                }
                OutputFormat::Text => print!("{}", report.to_text()),
            }
            if report.violations() > 0 {
                return Err(Failure::Internal(format!(
                    "{} instances exceed ratio 3/2",
                    report.violations()
                )));
            }
        }
        Command::Network { file, p, q } => {
            let inst = load(&file)?;
            let net = build_network(&inst, NetworkParams::new(p, q)).map_err(Failure::input)?;
            print!("{}", net.to_arc_list());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: input: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: internal: {msg}");
            ExitCode::from(2)
        }
    }
}
