use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ggp::json::{Command as JobCommand, JobSpec, RouteDto};
use ggp::{run_job, ExitStatus, RunConfig};

#[derive(Parser)]
#[command(name = "ggp", version, about = "Deligne-Lusztig pairings and Gross-Prasad multiplicities")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Job file; `-` reads standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Comma separated routes: direct, closed, factorized.
    #[arg(long, value_delimiter = ',')]
    routes: Option<Vec<String>>,
    /// Cap on worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Rank bound of the oracle suite.
    #[arg(long)]
    oracle_bound: Option<u32>,
    /// Shift the value of one route by one (test hook).
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pair two Deligne-Lusztig characters by the selected routes.
    Pair(Common),
    /// Run the factorized route with its full sign ledger.
    Factorize(Common),
    /// Multiplicity of a series member in the restriction of another.
    Multiplicity(Common),
    /// Run the oracle suite.
    Oracle(Common),
}

fn read_job(c: &Common, command: JobCommand) -> Result<JobSpec, ggp::CliError> {
    let Some(path) = &c.input else {
        if command == JobCommand::Oracle {
            return Ok(JobSpec {
                command,
                q: None,
                pair_kind: None,
                big: None,
                small: None,
                pi: None,
                sigma: None,
                options: Default::default(),
            });
        }
        return Err(ggp::CliError::Job("--input is required".into()));
    };
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path)?
    };
    let mut job = JobSpec::parse(&text)?;
    if job.command != command {
        if matches!((command, job.command), (JobCommand::Pair, JobCommand::Factorize) | (JobCommand::Factorize, JobCommand::Pair)) {
            job.command = command;
        } else {
            return Err(ggp::CliError::Job(format!("job file is a {:?} job", job.command)));
        }
    }
    Ok(job)
}

fn config(c: &Common) -> Result<RunConfig, ggp::CliError> {
    let routes = c
        .routes
        .as_ref()
        .map(|v| v.iter().map(|s| s.parse::<RouteDto>()).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let inject_fault = c.inject_fault.as_deref().map(str::parse::<RouteDto>).transpose()?;
    Ok(RunConfig { routes, jobs: c.jobs, oracle_bound: c.oracle_bound, inject_fault })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command) = match &cli.command {
        Cmd::Pair(c) => (c, JobCommand::Pair),
        Cmd::Factorize(c) => (c, JobCommand::Factorize),
        Cmd::Multiplicity(c) => (c, JobCommand::Multiplicity),
        Cmd::Oracle(c) => (c, JobCommand::Oracle),
    };
    let result = read_job(common, command).and_then(|job| Ok((job, config(common)?))).and_then(|(job, cfg)| run_job(&job, &cfg));
    match result {
        Ok(out) => {
            println!("{}", serde_json::to_string_pretty(&out.report).expect("JSON values serialize"));
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("ggp: {msg}");
            println!("{}", serde_json::json!({ "error": msg }));
            ExitCode::from(ExitStatus::InvalidInput as u8)
        }
    }
}
