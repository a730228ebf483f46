use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use geodim_core::estimators::{estimate_dimension, Method};
use geodim_core::geograph::{read_edge_list, write_edge_list};
use geodim_core::harness::{generate, resolve_radius, run_experiment, ExperimentConfig, RadiusRule};
use geodim_core::pointcloud::{DensityKind, DensitySpec};
use geodim_core::wd::{wd, DEFAULT_DIMENSION_CAP};
use geodim_core::Error;

#[derive(Parser)]
#[command(name = "geodim", version, about = "Estimate the dimension behind a random geometric graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the table d, w_d for d = 1..=max-d.
    Wd {
        #[arg(long = "max-d")]
        max_d: u32,
    },
    /// Sample a random geometric graph and write its edge list.
    #[command(group(ArgGroup::new("radius").required(true).args(["r", "nrd", "n32rd"])))]
    Gen {
        /// torus, cube, gauss:sigma=<v> or beta:a=<v>,b=<v>
        #[arg(long)]
        density: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<f64>,
        /// Choose r so that n r^d equals this constant.
        #[arg(long)]
        nrd: Option<f64>,
        /// Choose r so that n^{3/2} r^d equals this constant.
        #[arg(long)]
        n32rd: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the dimension of a graph given as an edge list.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        /// W1, W2, W2sym, W3 or W4
        #[arg(long)]
        method: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: u32,
    },
    /// Run a Monte Carlo experiment described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Worker threads; defaults to the number of CPUs. Output does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        /// Fill the `seconds` column with wall times (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Domain(_) => 2,
        Error::Parse { .. } => 3,
        Error::Numerical(_) | Error::Io(_) => 1,
    }
}

/// `%.12g`-style: twelve significant digits, exponent form only when needed.
fn significant12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Wd { max_d } => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "d,w_d")?;
            for d in 1..=max_d {
                writeln!(out, "{d},{}", significant12(wd(d)?))?;
            }
        }
        Command::Gen {
            density,
            d,
            n,
            r,
            nrd,
            n32rd,
            seed,
            out,
        } => {
            let kind: DensityKind = density.parse()?;
            let spec = DensitySpec::new(kind, d).map_err(|e| Error::Config(e.to_string()))?;
            let rule = match (r, nrd, n32rd) {
                (Some(r), _, _) => RadiusRule::Explicit(r),
                (_, Some(c), _) => RadiusRule::Nrd(c),
                (_, _, Some(c)) => RadiusRule::N32rd(c),
                _ => unreachable!("clap requires one radius option"),
            };
            let r = resolve_radius(rule, n, d, spec.metric())?;
            let graph = generate(&spec, n, r, seed)?;
            write_edge_list(&graph, create(&out)?)?;
            eprintln!("n {} edges {} max_degree {}", graph.n(), graph.edge_count(), graph.max_degree());
        }
        Command::Estimate {
            input,
            method,
            seed,
            cap,
        } => {
            let method: Method = method.parse()?;
            let graph = read_edge_list(BufReader::new(File::open(&input)?))?;
            let outcome = estimate_dimension(&graph, method, seed, cap)?;
            println!("{}", serde_json::to_string(&outcome).expect("outcome serializes"));
        }
        Command::Simulate {
            config,
            out,
            summary,
            workers,
            timing,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let config = ExperimentConfig::from_json(&text)?;
            let report = match workers {
                Some(w) => geodim_core::harness::run_experiment_with_workers(&config, w)?,
                None => run_experiment(&config)?,
            };
            report.write_csv(create(&out)?, timing)?;
            if let Some(path) = summary {
                let mut file = create(&path)?;
                writeln!(file, "{}", report.summary_json())?;
                file.flush()?;
            }
            for s in &report.summary {
                eprintln!(
                    "n {} {}: correct {:.3} failed {:.3}",
                    s.n, s.method, s.fraction_correct, s.fraction_failed
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("geodim: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
