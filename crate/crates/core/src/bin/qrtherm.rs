use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qrtherm::error::{Error, Result};
use qrtherm::oracles::CouplingLimit;
use qrtherm::spectrum::{solve_model, ModelParams, DEFAULT_N_MAX};
use qrtherm::sweep::oracle::{oracle_table, OracleArgs, OracleKind};
use qrtherm::sweep::output::{argmax_csv, write_text};
use qrtherm::sweep::{
    argmax_theta, encode, format_float, load_config, preset, run_sweep, Axis, Cutoff, Format, Number,
    SweepConfig, SweepRecord,
};

#[derive(Parser)]
#[command(name = "qrtherm", version, about = "Heat current and g2(0) of a qubit-resonator system between two baths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Exit with status 2 if any point is unconverged.
        #[arg(long)]
        strict: bool,
        /// Record wall time per point (output is no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate one parameter point and print its record.
    Point {
        #[arg(long, allow_hyphen_values = true)]
        theta: Number,
        #[arg(long)]
        lambda: f64,
        #[arg(long = "dT")]
        d_t: f64,
        #[arg(long = "T-mean", default_value_t = 1.0)]
        t_mean: f64,
        #[arg(long, default_value_t = 1.5)]
        epsilon: f64,
        /// Fock cutoff, or "auto".
        #[arg(long, default_value = "auto")]
        nmax: String,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Run one of the built-in parameter grids.
    Preset {
        /// fig1b, fig2a, fig2b, fig2c, fig3, fig4a or fig4bcde.
        figure_id: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        format: Option<Format>,
    },
    /// Evaluate an analytic oracle: jx, jz, overlap_exact, overlap_2nd, populations.
    Oracle {
        which: String,
        #[command(flatten)]
        args: OracleCliArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the lowest energies of the Hamiltonian.
    Eig {
        #[arg(long, allow_hyphen_values = true)]
        theta: Number,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1.5)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        nmax: usize,
        #[arg(long, default_value_t = 10)]
        levels: usize,
    },
}

#[derive(Args)]
struct OracleCliArgs {
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long = "dT")]
    d_t: Option<f64>,
    #[arg(long = "T-mean")]
    t_mean: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "omega-c")]
    omega_c: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "n-prime")]
    n_prime: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// theta0 or theta90.
    #[arg(long)]
    limit: Option<CouplingLimit>,
    #[arg(long)]
    nmax: Option<usize>,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sidecar_path(out: &std::path::Path) -> PathBuf {
    let stem = out.file_stem().map_or_else(|| "sweep".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}_argmax.csv"))
}

fn run_and_write(config: &SweepConfig, out: Option<PathBuf>, format: Option<Format>, jobs: usize) -> Result<Vec<SweepRecord>> {
    let records = run_sweep(config, jobs)?;
    for r in &records {
        if let Some(reason) = &r.failure {
            eprintln!("point {} failed: {reason}", r.index);
        }
    }
    let format = format.unwrap_or(config.output.format);
    let out = out.or_else(|| config.output.path.clone());
    emit(&encode(&records, format)?, out.as_ref())?;
    if config.output.argmax_theta {
        let table = argmax_csv(&argmax_theta(&records))?;
        match &out {
            Some(path) => write_text(&sidecar_path(path), &table)?,
            None => print!("\n{table}"),
        }
    }
    Ok(records)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            format,
            jobs,
            strict,
            timing,
        } => {
            let mut config = load_config(&config)?;
            config.output.record_timing |= timing;
            let records = run_and_write(&config, out, format, jobs)?;
            let unconverged = records.iter().filter(|r| !r.converged).count();
            if unconverged > 0 {
                eprintln!("{unconverged} of {} points are unconverged", records.len());
                if strict {
                    return Err(Error::Numerical(format!("{unconverged} unconverged points")));
                }
            }
            Ok(())
        }
        Command::Point {
            theta,
            lambda,
            d_t,
            t_mean,
            epsilon,
            nmax,
            format,
        } => {
            let mut config = SweepConfig::default();
            config.model.epsilon = Number(epsilon);
            config.model.n_max = match nmax.as_str() {
                "auto" => Cutoff::Auto,
                n => Cutoff::Fixed(
                    n.parse()
                        .map_err(|_| Error::Config(format!("--nmax must be an integer or auto, got `{n}`")))?,
                ),
            };
            config.grid.theta = Axis::Fixed(theta);
            config.grid.lambda = Axis::fixed(lambda);
            config.grid.d_t = Axis::fixed(d_t);
            config.grid.t_mean = Axis::fixed(t_mean);
            config.validate()?;
            let records = run_and_write(&config, None, format, 1)?;
            match &records[0].failure {
                Some(reason) => Err(Error::Numerical(reason.clone())),
                None => Ok(()),
            }
        }
        Command::Preset {
            figure_id,
            out,
            jobs,
            format,
        } => {
            let config = preset(&figure_id)?;
            run_and_write(&config, out, format, jobs).map(|_| ())
        }
        Command::Oracle { which, args, out } => {
            let kind: OracleKind = which.parse()?;
            let args = OracleArgs {
                lambda: args.lambda,
                epsilon: args.epsilon,
                d_t: args.d_t,
                t_mean: args.t_mean,
                alpha: args.alpha,
                omega_c: args.omega_c,
                n: args.n,
                n_prime: args.n_prime,
                g: args.g,
                limit: args.limit,
                n_max: args.nmax,
            };
            emit(&oracle_table(kind, &args)?, out.as_ref())
        }
        Command::Eig {
            theta,
            lambda,
            epsilon,
            nmax,
            levels,
        } => {
            let eig = solve_model(&ModelParams::new(epsilon, lambda, theta.0, nmax)?)?;
            println!("k,energy");
            for k in 0..levels.min(eig.dim()) {
                println!("{k},{}", format_float(eig.energy(k)));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
