use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use paradecov_core::heuristic::recover_boolean;
use paradecov_core::io::{frame_file_name, load_scenario, render_frame, write_results};
use paradecov_core::oracle::{brute_force, DEFAULT_LIMIT};
use paradecov_core::simulator::run;
use paradecov_core::timing::{sweep, CSV_HEADER};

#[derive(Parser)]
#[command(
    name = "paradecov",
    version,
    about = "Aerial guard placement over a moving parade route"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every step of a scenario.
    Run {
        scenario: PathBuf,
        /// JSON Lines output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for per-step SVG frames.
        #[arg(long)]
        frames: Option<PathBuf>,
        /// Override the scenario's sampling seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare the heuristic against exhaustive search on one step.
    Oracle {
        scenario: PathBuf,
        #[arg(long)]
        step: usize,
        /// Maximum number of subsets to enumerate.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Time the solver over team sizes and candidate counts (CSV).
    Bench {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        robots: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        candidates: Vec<usize>,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_run(
    path: &PathBuf,
    out: Option<&PathBuf>,
    frames: Option<&PathBuf>,
    seed: Option<u64>,
) -> Result<()> {
    let mut scenario = load_scenario(path)?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    let result = run(&scenario)?;
    write_results(output(out)?, &result, scenario.name.as_deref())
        .context("cannot write results")?;

    if let Some(dir) = frames {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for rec in &result.records {
            let inst = scenario.route_instance(rec.step_index)?;
            let svg = render_frame(&scenario, rec, &inst)?;
            let file = dir.join(frame_file_name(rec.step_index));
            fs::write(&file, svg).with_context(|| format!("cannot write {}", file.display()))?;
        }
    }

    let t = &result.totals;
    eprintln!(
        "{} steps, min coverage {} (mean {:.3}), solve time mean {:.4}s max {:.4}s, {} rounded",
        t.steps,
        t.min_t_boolean,
        t.mean_t_boolean,
        t.mean_solve_seconds,
        t.max_solve_seconds,
        t.rounded_steps
    );
    Ok(())
}

fn cmd_oracle(path: &PathBuf, step: usize, limit: u64) -> Result<()> {
    let scenario = load_scenario(path)?;
    if step >= scenario.step_count() {
        bail!(
            "step {step} out of range: scenario has {} steps",
            scenario.step_count()
        );
    }
    let a = scenario.coverage_matrix(step)?;
    let exact = brute_force(&a, scenario.team_size, limit)?;
    let heuristic = recover_boolean(&a, scenario.team_size, &scenario.heuristic)?;
    println!(
        "step\toracle_value\theuristic_value\toracle_subset\theuristic_subset\tsubsets\titerations"
    );
    println!(
        "{step}\t{}\t{}\t{:?}\t{:?}\t{}\t{}",
        exact.best_value,
        heuristic.t_boolean,
        exact.best_subset,
        heuristic.selected,
        exact.subsets_evaluated,
        heuristic.iterations
    );
    Ok(())
}

fn cmd_bench(
    path: &PathBuf,
    robots: &[usize],
    candidates: &[usize],
    out: Option<&PathBuf>,
) -> Result<()> {
    let scenario = load_scenario(path)?;
    let rows = sweep(&scenario, robots, candidates)?;
    let mut w = output(out)?;
    writeln!(w, "{CSV_HEADER}")?;
    for row in &rows {
        writeln!(w, "{}", row.to_csv())?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            scenario,
            out,
            frames,
            seed,
        } => cmd_run(scenario, out.as_ref(), frames.as_ref(), *seed),
        Command::Oracle {
            scenario,
            step,
            limit,
        } => cmd_oracle(scenario, *step, *limit),
        Command::Bench {
            scenario,
            robots,
            candidates,
            out,
        } => cmd_bench(scenario, robots, candidates, out.as_ref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
