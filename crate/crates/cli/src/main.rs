mod config;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ionbound::beta::{self, Family};
use ionbound::bounds;
use ionbound::error::Error;
use ionbound::gn;
use ionbound::hartree::scf;
use ionbound::report::{self, ReproduceOptions};
use serde_json::json;

use config::{Format, Overrides, RunConfig};
use emit::Document;

#[derive(Parser, Debug)]
#[command(name = "ionbound", version, about = "Excess-charge bounds for atoms: Hartree, Gagliardo-Nirenberg and beta computations")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format; tables default to csv, documents to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// key=value file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Lower bound on C_LO (recomputes D), within [1, 2].
    #[arg(long, global = true)]
    c_lo: Option<f64>,

    /// Sharp Gagliardo-Nirenberg constant (recomputes D).
    #[arg(long, global = true)]
    c_gn: Option<f64>,

    /// Set D directly, after any C_LO or C_GN override.
    #[arg(long, global = true)]
    d_const: Option<f64>,

    #[arg(long, global = true)]
    beta_lower: Option<f64>,

    /// Radial grid nodes for the Hartree solver (config key `n`).
    #[arg(long, global = true)]
    nodes: Option<usize>,

    /// Initial grid extent for the Hartree solver, in units of 1/Z.
    #[arg(long, global = true)]
    r_max: Option<f64>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Progress and timing on stderr.
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Radial Hartree equation.
    #[command(subcommand)]
    Hartree(HartreeCmd),
    /// Sharp Gagliardo-Nirenberg constant.
    #[command(subcommand)]
    Gn(GnCmd),
    /// Continuum beta functional and discrete alpha_N.
    #[command(subcommand)]
    Beta(BetaCmd),
    /// Excess-charge bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Recompute every published number and identity; exit 1 if any check fails.
    Reproduce {
        /// Random profiles in the property sweep.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum HartreeCmd {
    /// Self-consistent solution at fixed mass.
    Solve {
        #[arg(long)]
        z: f64,
        /// Electron number (mass of the density).
        #[arg(long)]
        n: f64,
        /// Also write the radial profile in two-column text form.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Largest mass with a bound solution.
    Critical {
        #[arg(long)]
        z: f64,
        /// Bracket width relative to Z.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum GnCmd {
    /// Ground state of −Δu + u = u^{5/3} and the constant it yields.
    Compute {
        /// Bisection tolerance on u(0).
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Nasibov's analytic bound.
    Nasibov {
        #[arg(long, default_value_t = 2.0 / 3.0)]
        rho: f64,
        #[arg(long, default_value_t = 3)]
        d: u32,
    },
}

#[derive(Subcommand, Debug)]
enum BetaCmd {
    /// Minimize beta over a trial family.
    Trial {
        #[arg(long, default_value = "power-exp")]
        family: Family,
        #[arg(long, default_value_t = 80)]
        budget: usize,
    },
    /// Minimize alpha_N over point configurations.
    AlphaN {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = beta::DEFAULT_SEEDS)]
        seeds: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    /// Lieb, Nam, Hartree and main bounds for a range of Z.
    Table {
        #[arg(long, default_value_t = 1)]
        zmin: u32,
        #[arg(long, default_value_t = 118)]
        zmax: u32,
    },
    /// Every intermediate quantity at one Z.
    Compare {
        #[arg(long)]
        z: u32,
    },
    /// Last Z at which the main bound beats Nam's.
    Crossover {
        #[arg(long, default_value_t = 10_000)]
        cap: u32,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn numerical(module: &str, e: Error) -> Self {
        let code = match e {
            Error::InvalidGrid(_)
            | Error::InvalidInput(_)
            | Error::OutOfRange(_)
            | Error::CoincidentPoints(..)
            | Error::Parse(_) => 2,
            _ => 1,
        };
        let message = match e {
            // already names the module that gave up
            Error::NotConverged { .. } => e.to_string(),
            _ => format!("{module}: {e}"),
        };
        Self { code, message }
    }
}

fn module_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Hartree(_) => "hartree-scf",
        Command::Gn(_) => "gn-constant",
        Command::Beta(_) => "beta-estimator",
        Command::Bounds(_) => "bounds-engine",
        Command::Reproduce { .. } => "cli-report",
    }
}

fn command_slug(cmd: &Command) -> &'static str {
    match cmd {
        Command::Hartree(HartreeCmd::Solve { .. }) => "hartree-solve",
        Command::Hartree(HartreeCmd::Critical { .. }) => "hartree-critical",
        Command::Gn(GnCmd::Compute { .. }) => "gn-compute",
        Command::Gn(GnCmd::Nasibov { .. }) => "gn-nasibov",
        Command::Beta(BetaCmd::Trial { .. }) => "beta-trial",
        Command::Beta(BetaCmd::AlphaN { .. }) => "beta-alpha-n",
        Command::Bounds(BoundsCmd::Table { .. }) => "bounds-table",
        Command::Bounds(BoundsCmd::Compare { .. }) => "bounds-compare",
        Command::Bounds(BoundsCmd::Crossover { .. }) => "bounds-crossover",
        Command::Reproduce { .. } => "reproduce",
    }
}

fn flag_overrides(g: &Global) -> Overrides {
    Overrides {
        c_lo: g.c_lo,
        c_gn: g.c_gn,
        d_const: g.d_const,
        beta_lower: g.beta_lower,
        nodes: g.nodes,
        r_max: g.r_max,
        seed: g.seed,
        format: g.format,
        output: g.output.clone(),
        ..Default::default()
    }
}

/// Computes the document and reports whether the run counts as a success.
fn execute(cmd: &Command, rc: &RunConfig) -> Result<(Document, bool), Failure> {
    let module = module_name(cmd);
    let num = |e: Error| Failure::numerical(module, e);
    let c = &rc.constants;
    let doc = match cmd {
        Command::Hartree(HartreeCmd::Solve { z, n, profile }) => {
            let sol = scf::solve(*z, *n, &rc.scf).map_err(num)?;
            let mut v = sol.summary_json();
            if let Some(path) = profile {
                emit::write_file(path, &sol.psi.to_text()).map_err(|e| Failure { code: 1, message: e })?;
                v["profile_file"] = json!(path.display().to_string());
            }
            Document::Json(v)
        }
        Command::Hartree(HartreeCmd::Critical { z, tol }) => {
            if !(*tol > 0.0 && *tol < 1.0) {
                return Err(Failure::input(format!("--tol must lie in (0, 1), got {tol}")));
            }
            let cm = scf::critical_mass(*z, &rc.scf, *tol).map_err(num)?;
            Document::Json(json!({
                "Z": z,
                "N_c": cm.mass,
                "ratio": cm.mass / z,
                "lower": cm.lower,
                "upper": cm.upper,
                "mu_at_lower": cm.solution.mu,
                "iterations": cm.solution.iterations,
                "tolerance": tol,
            }))
        }
        Command::Gn(GnCmd::Compute { tol }) => Document::Json(gn::solve_ground_state(*tol).map_err(num)?.summary_json()),
        Command::Gn(GnCmd::Nasibov { rho, d }) => {
            let k = gn::nasibov_kn(*rho, *d).map_err(num)?;
            let alpha = gn::alpha_exponent(*rho, *d).map_err(num)?;
            let mut v = json!({ "rho": rho, "d": d, "alpha": alpha, "k_N": k });
            if *d == 3 && (*rho - 2.0 / 3.0).abs() < 1e-12 {
                v["nasibov_bound"] = json!(k.powf(8.0 / 3.0));
            }
            Document::Json(v)
        }
        Command::Beta(BetaCmd::Trial { family, budget }) => {
            Document::Json(beta::optimize_beta_upper(*family, *budget).map_err(num)?.summary_json())
        }
        Command::Beta(BetaCmd::AlphaN { n, seeds }) => {
            Document::Json(beta::minimize_alpha_n(*n, *seeds, rc.seed).map_err(num)?.summary_json())
        }
        Command::Bounds(BoundsCmd::Table { zmin, zmax }) => {
            if zmin > zmax || *zmin == 0 {
                return Err(Failure::input(format!("need 1 <= zmin <= zmax, got {zmin}..{zmax}")));
            }
            let rows = bounds::compare_table(*zmin, *zmax, c);
            Document::Table { csv: bounds::table_csv(&rows), json: bounds::table_json(&rows) }
        }
        Command::Bounds(BoundsCmd::Compare { z }) => {
            if *z == 0 {
                return Err(Failure::input("--z must be at least 1"));
            }
            let r = bounds::BoundReport::new(*z, c);
            let (delta, u0) = bounds::delta_u0(r.main, *z as f64, c);
            let mut v = serde_json::to_value(&r).expect("plain struct");
            v["delta"] = json!(delta);
            v["u0"] = json!(u0);
            v["constants"] = serde_json::to_value(c).expect("plain struct");
            Document::Json(v)
        }
        Command::Bounds(BoundsCmd::Crossover { cap }) => {
            Document::Json(serde_json::to_value(bounds::crossover_vs_nam(c, *cap)).expect("plain struct"))
        }
        Command::Reproduce { samples } => {
            let opts = ReproduceOptions {
                constants: *c,
                scf: rc.scf,
                rng_seed: rc.seed,
                property_samples: *samples,
                ..Default::default()
            };
            let rep = report::reproduce(&opts).map_err(num)?;
            for f in rep.failures() {
                eprintln!("FAIL {} {}: {} (reference {})", f.id, f.name, bounds::sig6(f.computed), f.reference);
            }
            let ok = rep.all_passed();
            return Ok((Document::Table { csv: rep.to_csv(), json: rep.to_json() }, ok));
        }
    };
    Ok((doc, true))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let file = match &cli.global.config {
        Some(p) => config::read_config(p).map_err(Failure::input)?,
        None => Overrides::default(),
    };
    let rc = RunConfig::from_overrides(&file.merged(flag_overrides(&cli.global))).map_err(Failure::input)?;
    let start = Instant::now();
    if cli.global.verbose > 0 {
        eprintln!("{}: {:?}", command_slug(&cli.command), rc);
    }
    let (doc, ok) = execute(&cli.command, &rc)?;
    let format = rc.format.unwrap_or(doc.default_format());
    let text = doc.render(format);
    let target = rc.output.clone().or_else(|| {
        std::env::var_os(config::OUTPUT_DIR_ENV)
            .map(|dir| PathBuf::from(dir).join(format!("{}.{}", command_slug(&cli.command), format.extension())))
    });
    match target {
        Some(path) => {
            emit::write_file(&path, &text).map_err(|e| Failure { code: 1, message: e })?;
            if cli.global.verbose > 0 {
                eprintln!("wrote {}", path.display());
            }
        }
        None => print!("{text}"),
    }
    if cli.global.verbose > 0 {
        eprintln!("done in {:.2}s", start.elapsed().as_secs_f64());
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
