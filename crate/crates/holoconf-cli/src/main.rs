use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use holoconf::catalog::MetricManifest;
use holoconf::error::{Error, Result};
use holoconf_cli::commands::{self, exit_code, parse_vector, EXIT_FAIL, EXIT_PASS};
use holoconf_cli::verify::{Suite, VerifyOptions, DEFAULT_FD_STEP};

#[derive(Parser)]
#[command(name = "holoconf", version, about = "Curvature and conformal identities of holomorphic metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Manifest path or builtin:<name>.
    #[arg(long)]
    metric: String,
    /// +1 or -1; defaults to the manifest orientation.
    #[arg(long, allow_hyphen_values = true)]
    orientation: Option<i32>,
    /// Emit JSON (the default for reports).
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full curvature report at a point.
    Report {
        #[command(flatten)]
        common: Common,
        /// Comma-separated complex coordinates; defaults to the basepoint.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Run an identity suite over sampled points.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 16)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replaces every residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        fd_step: f64,
    },
    /// Integrate a null geodesic and print it as CSV.
    TraceGeodesic {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        velocity: String,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 128)]
        steps: usize,
        /// Accepted for symmetry; the output is always CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Classify the plane spanned by two vectors.
    ClassifyPlane {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Projective-flatness checks on a named surface of the manifest.
    CheckBetaSurface {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        surface: String,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Second fundamental form of a named hypersurface.
    CheckUmbilic {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        hypersurface: String,
        #[arg(long, default_value_t = 4)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Normal derivative of W⁺ against the Cotton–York tensor of a hypersurface.
    CheckTheorem8 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        hypersurface: String,
        /// Hypersurface parameters; defaults to its basepoint.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
}

fn orientation(c: &Common) -> Result<Option<f64>> {
    match c.orientation {
        None => Ok(None),
        Some(o @ (1 | -1)) => Ok(Some(o as f64)),
        Some(o) => Err(Error::Manifest(format!("orientation must be +1 or -1, got {o}"))),
    }
}

fn point(man: &MetricManifest, s: &Option<String>) -> Result<Vec<num_complex::Complex64>> {
    match s {
        Some(s) => parse_vector(s, man.n),
        None => Ok(man.basepoint.clone()),
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Report { common, point: p } => {
            let man = MetricManifest::resolve(&common.metric)?;
            let p = point(&man, &p)?;
            println!("{}", commands::report(&man, Some(&p), orientation(&common)?)?);
            Ok(EXIT_PASS)
        }
        Command::Verify {
            common,
            suite,
            points,
            seed,
            tol,
            fd_step,
        } => {
            let man = MetricManifest::resolve(&common.metric)?;
            let opts = VerifyOptions {
                suite: suite.parse::<Suite>()?,
                points,
                seed,
                tol,
                fd_step,
                orientation: orientation(&common)?,
            };
            let summary = commands::verify(&man, &opts)?;
            if common.json {
                println!("{}", summary.to_json());
            } else {
                print!("{}", summary.table());
            }
            Ok(if summary.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::TraceGeodesic {
            common,
            point: p,
            velocity,
            t_end,
            steps,
            csv: _,
        } => {
            let man = MetricManifest::resolve(&common.metric)?;
            let x0 = point(&man, &p)?;
            let v0 = parse_vector(&velocity, man.n)?;
            print!("{}", commands::trace_geodesic(&man, &x0, &v0, t_end, steps)?);
            Ok(EXIT_PASS)
        }
        Command::ClassifyPlane { common, point: p, u, w } => {
            let man = MetricManifest::resolve(&common.metric)?;
            let p = point(&man, &p)?;
            let (u, w) = (parse_vector(&u, man.n)?, parse_vector(&w, man.n)?);
            let class = commands::classify(&man, &p, &u, &w, orientation(&common)?)?;
            println!("{}", commands::to_json(&class));
            Ok(EXIT_PASS)
        }
        Command::CheckBetaSurface {
            common,
            surface,
            points,
            seed,
            tol,
        } => {
            let man = MetricManifest::resolve(&common.metric)?;
            let opts = VerifyOptions {
                points,
                seed,
                tol,
                orientation: orientation(&common)?,
                ..VerifyOptions::default()
            };
            let summary = commands::check_beta_surface(&man, &surface, &opts)?;
            println!("{}", summary.to_json());
            Ok(if summary.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::CheckUmbilic {
            common,
            hypersurface,
            points,
            seed,
        } => {
            let man = MetricManifest::resolve(&common.metric)?;
            let r = commands::check_umbilic(&man, &hypersurface, points, seed)?;
            println!("{}", commands::to_json(&r));
            Ok(EXIT_PASS)
        }
        Command::CheckTheorem8 {
            common,
            hypersurface,
            point: q,
        } => {
            let man = MetricManifest::resolve(&common.metric)?;
            let q = q.map(|s| parse_vector(&s, man.n - 1)).transpose()?;
            let r = commands::check_theorem8(&man, &hypersurface, q.as_deref(), orientation(&common)?)?;
            println!("{}", commands::to_json(&r));
            Ok(EXIT_PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HOLOCONF_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().ok();
    }
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
