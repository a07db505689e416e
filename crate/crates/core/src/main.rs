use std::process::ExitCode;

use clap::Parser;
use surfembed::cli::{list_experiments, run_experiment, Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            print!("{}", list_experiments());
            Ok(())
        }
        Command::Run(args) => args.resolve().and_then(|cfg| {
            let report = run_experiment(&cfg)?;
            for row in &report.errors {
                println!("n = {:4}  dx = {:.5}  L1 = {:.3e}  L2 = {:.3e}  Linf = {:.3e}", row.n, row.dx, row.l1, row.l2, row.linf);
            }
            if let Some(r) = &report.rates {
                let f = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
                println!("rates  L1 {}  L2 {}  Linf {}", f(r.l1), f(r.l2), f(r.linf));
            }
            for m in &report.meshes {
                println!("n = {:4}  steps {}  mass {:.6} -> {:.6}", m.n, m.stats.steps, m.initial_mass, m.final_mass);
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("output written to {}", cfg.out.display());
            Ok(())
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
