use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ilw_cli::output::{env_output_root, output_root};
use ilw_cli::scenarios::Check;
use ilw_cli::RunError;
use ilw_core::solutions::solve_soliton;
use ilw_core::symbols::{symbol_table, SymbolRow, SYMBOL_TABLE_HEADER};
use ilw_core::{Depth, Grid};

#[derive(Parser)]
#[command(name = "ilw", version, about = "Scenario runner for the intermediate long wave toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config.
    Run { config: PathBuf },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
    /// Run every *.toml in a directory in parallel.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Print xi, omega, omega', q, L, psi and the BO gap as CSV.
    SymbolTable {
        #[arg(allow_negative_numbers = true)]
        delta: f64,
        #[arg(allow_negative_numbers = true)]
        xi_min: f64,
        #[arg(allow_negative_numbers = true)]
        xi_max: f64,
        n: usize,
    },
    /// Print resolved soliton parameters c, delta, a, b, residual, peak as CSV.
    SolitonTable {
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 2048)]
        n: usize,
        #[arg(long, default_value_t = 100.0)]
        length: f64,
        #[arg(required = true)]
        speeds: Vec<f64>,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        println!("  {verdict} {} = {:e} ({:?} {:e})", c.name, c.value, c.relation, c.threshold);
    }
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => {
            let cfg = match ilw_cli::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            let root = output_root(&cfg, env_output_root());
            match ilw_cli::run(&cfg, &root) {
                Ok(r) => {
                    println!("{} ({:.2} s)", r.dir.display(), r.wall_time);
                    print_checks(&r.checks);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Validate { config } => {
            let issues = ilw_cli::validate(&config);
            if issues.is_empty() {
                println!("ok");
                return ExitCode::SUCCESS;
            }
            for i in &issues {
                println!("{i}");
            }
            ExitCode::from(2)
        }
        Command::Batch { dir, workers } => {
            let results = match ilw_cli::batch(&dir, env_output_root(), workers) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let mut code = 0;
            for (path, r) in results {
                match r {
                    Ok(r) => {
                        println!("{}: {}", path.display(), r.dir.display());
                        print_checks(&r.checks);
                    }
                    Err(e) => {
                        println!("{}: error: {e}", path.display());
                        code = code.max(e.exit_code());
                    }
                }
            }
            ExitCode::from(code as u8)
        }
        Command::SymbolTable { delta, xi_min, xi_max, n } => {
            let rows = Depth::new(delta).and_then(|d| symbol_table(d, xi_min, xi_max, n));
            match rows {
                Ok(rows) => {
                    println!("{SYMBOL_TABLE_HEADER}");
                    for r in rows.iter().map(SymbolRow::csv) {
                        println!("{r}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&RunError::Config(vec![ilw_cli::config::Issue::new("", e.to_string())])),
            }
        }
        Command::SolitonTable { delta, n, length, speeds } => {
            let grid = match Grid::new(n, length) {
                Ok(g) => g,
                Err(e) => return fail(&RunError::Config(vec![ilw_cli::config::Issue::new("n", e.to_string())])),
            };
            println!("c,delta,a,b,residual,peak");
            for c in speeds {
                match solve_soliton(c, delta, &grid, 1e-8) {
                    Ok(q) => println!("{:e},{:e},{:e},{:e},{:e},{:e}", q.c, q.delta, q.a, q.b, q.residual, q.peak()),
                    Err(e @ ilw_core::Error::InvalidParameter { .. }) => {
                        return fail(&RunError::Config(vec![ilw_cli::config::Issue::new("", e.to_string())]))
                    }
                    Err(e) => return fail(&RunError::Numerical(e)),
                }
            }
            ExitCode::SUCCESS
        }
    }
}
