//! Command-line front end. Every subcommand writes CSV (header first) to stdout or
//! to `--out`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal-consistency failure.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{merge_config, parse_config};

use crate::error::Error;

const SCHEMAS: &str = "\
CSV schemas:
  kappa     s,regime,kappa,exponent,log_power
  series    s,m,m_prime,r,method,value,truncation,tail_bound
  expect    s,R,expectation,predicted_leading,ratio
  simulate  seed,s,R,l_max,n_critical,n_saddle,n_extremum,wall_time
  farfield  n,phi_star,r_pred,r_found,distance
  spectrum  seed,s,N,block_energy
  fcrit     seed,s,n_f_crit,min_abs_f
  bench     s,r,direct_median_s,asymptotic_median_s,direct_value,asymptotic_value,rel_error,recommended
  selftest  check,value,expected,pass

Configuration file (--config): one `key = value` per line, `#` comments; keys are
flag names (`r_min` and `r-min` are equivalent). Flags given on the command line win.
Thread count: --threads, else the THREADS environment variable, else all cores.";

#[derive(Debug, Parser)]
#[command(name = "wavecrit", version, about = "Critical points of Gaussian random monochromatic waves", after_help = SCHEMAS)]
struct Cli {
    /// Plain-text `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Asymptotic,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Growth constant, exponent and log power for each s.
    Kappa {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        s: Vec<f64>,
    },
    /// Weighted Neumann series Σ l^{-2s} J_{l+m}(r) J_{l+m'}(r).
    Series {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        s: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long = "mprime", default_value_t = 0)]
        m_prime: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Truncation tolerance of direct sums.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        /// Smallest r at which asymptotic values are reported.
        #[arg(long, default_value_t = 10.0)]
        min_radius: f64,
    },
    /// Kac–Rice expectation of the number of critical points in B_R.
    Expect {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        s: Vec<f64>,
        #[arg(long = "R", value_delimiter = ',', required = true)]
        radius: Vec<f64>,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        r_min: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
    },
    /// Count critical points of sampled waves.
    Simulate {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long = "R")]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to ceil(1.5 R) + 32.
        #[arg(long)]
        l_max: Option<usize>,
        #[arg(long, default_value_t = 8.0)]
        grid_density: f64,
        #[arg(long, default_value_t = 1e-10)]
        newton_tol: f64,
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
    },
    /// Match far-field predictions from |f| with found critical points.
    Farfield {
        #[arg(long, default_value_t = 6.0)]
        s: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "R", default_value_t = 80.0)]
        radius: f64,
        /// Only critical points beyond this radius are matched.
        #[arg(long, default_value_t = 40.0)]
        r_lo: f64,
    },
    /// Dyadic block energies of the density.
    Spectrum {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        blocks: u32,
    },
    /// Critical points of |f| on the circle.
    Fcrit {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 256)]
        l_max: usize,
    },
    /// Time direct against asymptotic series evaluation.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "0,1,2", allow_negative_numbers = true)]
        s: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "10,20,50,100,200,500,1000")]
        r: Vec<f64>,
        #[arg(long, default_value_t = 7)]
        reps: usize,
    },
    /// Exact identities and reference constants.
    Selftest,
}

/// Run the CLI on `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Some(path) = config::config_path(&args) {
        match merge_config(args, std::path::Path::new(&path)) {
            Ok(merged) => args = merged,
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads.or_else(|| std::env::var("THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = commands::dispatch(cli.command);
    match result {
        Ok(csv) => match cli.out {
            Some(path) => match std::fs::write(&path, csv) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    1
                }
            },
            None => {
                print!("{csv}");
                0
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_consistency() {
        2
    } else {
        1
    }
}
