use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tautring::fiber::{FiberOptions, HirzebruchFamily};
use tautring::genera::{ahat_genus, l_genus};
use tautring::groebner::Field;
use tautring::model::{Mode, ModelRing, P4Mode};
use tautring::rational::parse_rational;
use tautring::Rational;
use tautring_cli::cache::{resolve_dir, Cache};
use tautring_cli::error::{CliError, Result};
use tautring_cli::figure::{parse_csv, render_svg};
use tautring_cli::point::run_point;
use tautring_cli::sweep::{parse_order, run_sweep, to_csv, SweepRequest};
use tautring_cli::selfcheck;

#[derive(Parser)]
#[command(name = "tautring", version, about = "Tautological rings of fake quaternionic planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Genus {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "Ahat", alias = "ahat")]
    Ahat,
}

#[derive(Args)]
struct CacheArgs {
    /// Cache directory (overrides TAUTRING_CACHE).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long)]
    no_cache: bool,
}

impl CacheArgs {
    fn open(&self) -> Result<Option<Cache>> {
        if self.no_cache {
            return Ok(None);
        }
        Cache::open(resolve_dir(self.cache_dir.as_deref())).map(Some)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print K_1..K_N of the L- or Â-sequence, one per line.
    Genus { kind: Genus, n: usize },
    /// Print κ_{L_k}.
    Kappa {
        k: usize,
        #[arg(long, default_value = "signature")]
        mode: Mode,
        #[arg(long, default_value = "euler-squared")]
        p4_mode: P4Mode,
    },
    /// Print the Hirzebruch generators κ_{L_3}..κ_{L_kmax}, one per line.
    Gens {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        #[arg(long, default_value = "signature")]
        mode: Mode,
        #[arg(long, default_value = "euler-squared")]
        p4_mode: P4Mode,
    },
    /// Krull dimension of one fibre, printed as a CSV row.
    Dim {
        /// Value of P1, an integer or fraction such as `-3/2`.
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        p1: Rational,
        /// Given for free mode, omitted for signature mode.
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        p2: Option<Rational>,
        /// Checked against the presence of `--p2` when given.
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        #[arg(long, default_value = "euler-squared")]
        p4_mode: P4Mode,
        /// `rational` or `prime:N`.
        #[arg(long, default_value = "rational")]
        field: Field,
        /// `standard` or `weighted` degrevlex.
        #[arg(long, default_value = "standard")]
        order: String,
        /// Give up (exit 3) after this many seconds.
        #[arg(long)]
        timeout_seconds: Option<u64>,
        /// After a rational timeout, answer over the default prime instead of failing.
        #[arg(long)]
        prime_fallback: bool,
        /// Compute the full rational basis rather than a dimension certificate.
        #[arg(long)]
        full_basis: bool,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Run a TOML sweep request and write CSV (and optionally SVG).
    Sweep {
        request: PathBuf,
        /// Worker count; overrides the request.
        #[arg(long)]
        jobs: Option<usize>,
        /// CSV destination; overrides the request, defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// SVG destination; overrides the request.
        #[arg(long)]
        figure: Option<PathBuf>,
        /// Per-point limit; overrides the request.
        #[arg(long)]
        timeout_seconds: Option<u64>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Render a results CSV as SVG.
    Figure {
        results: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the fast invariant suite.
    Selfcheck {
        /// Replace L_2 by a wrong polynomial; the check must then fail.
        #[arg(long)]
        perturb_l2: bool,
        #[command(flatten)]
        cache: CacheArgs,
    },
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(CliError::io(path))
}

fn print(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(CliError::io("<stdout>"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Genus { kind, n } => {
            let seq = match kind {
                Genus::L => l_genus(n)?,
                Genus::Ahat => ahat_genus(n)?,
            };
            let text: String = (1..=n).map(|k| format!("{}\n", seq.get(k))).collect();
            print(&text)
        }
        Command::Kappa { k, mode, p4_mode } => print(&format!("{}\n", ModelRing::new(mode).kappa_l(k, p4_mode)?)),
        Command::Gens { kmax, mode, p4_mode } => {
            let gens = ModelRing::new(mode).hirzebruch_generators(kmax, p4_mode)?;
            print(&gens.iter().map(|g| format!("{}\n", g.value)).collect::<String>())
        }
        Command::Dim {
            p1,
            p2,
            mode,
            kmax,
            p4_mode,
            field,
            order,
            timeout_seconds,
            prime_fallback,
            full_basis,
            cache,
        } => {
            let mode = mode.unwrap_or(if p2.is_some() { Mode::Free } else { Mode::Signature });
            let family = HirzebruchFamily::new(mode, kmax, p4_mode)?;
            let opts = FiberOptions {
                field,
                order: parse_order(&order)?,
                timeout: timeout_seconds.map(Duration::from_secs),
                full_basis,
                prime_fallback,
            };
            let cache = cache.open()?;
            let record = run_point(&family, &p1, p2.as_ref(), &opts, cache.as_ref(), &warn)?;
            print(&format!("{record}\n"))
        }
        Command::Sweep {
            request,
            jobs,
            output,
            figure,
            timeout_seconds,
            cache,
        } => {
            let text = std::fs::read_to_string(&request).map_err(CliError::io(&request))?;
            let base = request.parent().unwrap_or(Path::new("."));
            let mut req = SweepRequest::from_toml(&text, base)?;
            if let Some(j) = jobs {
                req.jobs = j.max(1);
            }
            if let Some(t) = timeout_seconds {
                req.options.timeout = Some(Duration::from_secs(t));
            }
            req.output = output.or(req.output);
            req.figure = figure.or(req.figure);
            let cache = cache.open()?;
            let records = run_sweep(&req, cache.as_ref(), &warn)?;
            let csv = to_csv(&records);
            match &req.output {
                Some(path) => write_file(path, &csv)?,
                None => print(&csv)?,
            }
            if let Some(path) = &req.figure {
                write_file(path, &render_svg(&records))?;
            }
            Ok(())
        }
        Command::Figure { results, output } => {
            let text = std::fs::read_to_string(&results).map_err(CliError::io(&results))?;
            let svg = render_svg(&parse_csv(&text, &results)?);
            match output {
                Some(path) => write_file(&path, &svg),
                None => print(&svg),
            }
        }
        Command::Selfcheck { perturb_l2, cache } => {
            let cache = cache.open()?;
            let results = selfcheck::run(perturb_l2, cache.as_ref(), &warn);
            let mut failed = Vec::new();
            for r in &results {
                match &r.outcome {
                    Ok(()) => println!("ok   {}", r.name),
                    Err(why) => {
                        println!("FAIL {}: {why}", r.name);
                        failed.push(r.name);
                    }
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Check(failed.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
