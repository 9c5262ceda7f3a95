//! `celestial`: action spectra, domain inclusions, capacity bounds, periodic
//! orbits and contact volumes from the command line.
//!
//! Exit codes: 0 success (or inclusion holds), 1 inclusion fails, 2 invalid
//! input, 3 numerical failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;

use celestial_core::capacity::spectral_gaps;
use celestial_core::hill_orbits::{conjecture_check, find_symmetric_orbit, ShootingConfig};
use celestial_core::inclusions::{verify_fiber_inclusion, GridOptions};
use celestial_core::rkp_spectrum::{enumerate_spectrum, torus_orbit};
use celestial_core::systolic::{contact_volume_closed_form, contact_volume_mc, contact_volume_quadrature, systolic_ratio};
use celestial_core::{DomainSpec, Error, Family, PeriodicOrbit, ProblemKind, SpectrumFamily, VolumeResult};

use output::{int, render_json, Csv, Fmt, Obj};

/// Inputs this far below the Hill critical energy are taken to mean it, so
/// that a rounded `3^(4/3)/2` is accepted.
const HILL_SNAP: f64 = 5e-7;

#[derive(Parser)]
#[command(name = "celestial", version, about = "Rotating Kepler and Hill lunar problem computations")]
struct Cli {
    /// Fractional digits of every printed real.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(0..=17))]
    digits: u8,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rotating Kepler action spectrum up to an action cutoff (CSV).
    Spectrum {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        cutoff: f64,
    },
    /// Hill capacity intervals at one energy or over a sweep (CSV).
    Bounds(BoundsArgs),
    /// Fiberwise inclusion check between two domains (JSON).
    Verify(VerifyArgs),
    /// Symmetric periodic orbit by shooting (JSON).
    Orbit {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long)]
        family: Family,
        #[arg(long)]
        c: f64,
        /// Include the dense trajectory samples.
        #[arg(long)]
        with_samples: bool,
    },
    /// Contact volume and systolic ratio of the rotating Kepler level (JSON).
    Systolic {
        #[arg(long)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Relative tolerance of the quadrature.
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BoundsArgs {
    #[arg(long)]
    c: Option<f64>,
    /// `start:stop:step`, inclusive of `stop` up to rounding.
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `kind:c` with kind `rkp` or `hill`; the domain expected inside.
    #[arg(long)]
    inner: String,
    #[arg(long)]
    outer: String,
    /// Momentum rings, including the origin.
    #[arg(long, default_value_t = 64)]
    n_p: usize,
    /// Momentum directions per ring.
    #[arg(long, default_value_t = 16)]
    n_p_angles: usize,
    #[arg(long, default_value_t = 256)]
    n_theta: usize,
    #[arg(long, default_value_t = 12.0)]
    p_max: f64,
    /// Reject negative margins even within the solver tolerance.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Rkp,
    Hill,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Quadrature,
    Closed,
    Mc,
    All,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                Error::BelowCritical { .. }
                | Error::InvalidArgument(_)
                | Error::UnsupportedKind { .. }
                | Error::UndefinedClass { .. }
                | Error::NotInWindow { .. }
                | Error::Collision { .. } => 2,
                _ => 3,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    configure_threads()?;
    let f = Fmt { digits: cli.digits as usize };
    let (text, code) = match cli.command {
        Command::Spectrum { c, cutoff } => (spectrum(f, c, cutoff)?, 0),
        Command::Bounds(args) => (bounds(f, &args)?, 0),
        Command::Verify(args) => verify(f, &args)?,
        Command::Orbit { problem, family, c, with_samples } => (orbit(f, problem, family, c, with_samples)?, 0),
        Command::Systolic { c, method, seed, samples, rel_tol } => (systolic(f, c, method, seed, samples, rel_tol)?, 0),
    };
    match cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(code)
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("CELESTIAL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Input(format!("CELESTIAL_THREADS must be a positive integer, got {raw:?}")))?;
    // a second initialisation only happens in tests that call run() twice
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn snap_hill(c: f64) -> f64 {
    let critical = celestial_core::hill_critical();
    if c < critical && critical - c <= HILL_SNAP {
        critical
    } else {
        c
    }
}

fn finite(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Input(format!("{name} must be finite, got {x}")))
    }
}

fn spectrum(f: Fmt, c: f64, cutoff: f64) -> CliResult<String> {
    let entries = enumerate_spectrum(finite("c", c)?, finite("cutoff", cutoff)?)?;
    let mut csv = Csv::new(&["c", "family", "k", "l", "N", "action", "cz_index", "window_lo", "window_hi"]);
    for e in entries {
        let cz = e.cz_index.map(|i| i.to_string()).unwrap_or_default();
        let row = match e.family {
            SpectrumFamily::RetrogradeIterate { n } | SpectrumFamily::DirectIterate { n } => {
                let name = if matches!(e.family, SpectrumFamily::RetrogradeIterate { .. }) { "retrograde" } else { "direct" };
                vec![f.num(c), name.into(), String::new(), String::new(), n.to_string(), f.num(e.action), cz, String::new(), String::new()]
            }
            SpectrumFamily::Torus { k, l } => {
                let t = torus_orbit(k, l)?;
                vec![
                    f.num(c),
                    "torus".into(),
                    k.to_string(),
                    l.to_string(),
                    String::new(),
                    f.num(e.action),
                    cz,
                    f.num(t.c_minus),
                    f.num(t.c_plus),
                ]
            }
        };
        csv.row(&row);
    }
    Ok(csv.finish())
}

fn parse_sweep(s: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Input(format!("sweep must be start:stop:step with step > 0 and start <= stop, got {s:?}"));
    let parts: Vec<f64> = s.split(':').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let [a, b, h] = parts[..] else {
        return Err(bad());
    };
    if !(a.is_finite() && b.is_finite() && h > 0.0 && h.is_finite() && a <= b) {
        return Err(bad());
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(CliError::Input(format!("sweep has {} points; at most 10^6 are allowed", n + 1)));
    }
    Ok((0..=n).map(|i| a + i as f64 * h).collect())
}

fn bounds(f: Fmt, args: &BoundsArgs) -> CliResult<String> {
    let grid = match (&args.c, &args.sweep) {
        (Some(c), None) => vec![finite("c", *c)?],
        (None, Some(s)) => parse_sweep(s)?,
        _ => unreachable!("clap enforces exactly one of --c and --sweep"),
    };
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&c| {
            let c = snap_hill(c);
            spectral_gaps(c).map(|g| (c, g))
        })
        .collect::<Result<_, _>>()?;
    let mut csv = Csv::new(&["c", "family", "N", "lo", "hi", "cz_index", "P"]);
    for (c, gaps) in rows {
        for g in gaps {
            csv.row(&[
                f.num(c),
                g.label.family.to_string(),
                g.label.n.to_string(),
                f.num(g.lo),
                f.num(g.hi),
                g.cz_index.to_string(),
                g.p.to_string(),
            ]);
        }
    }
    Ok(csv.finish())
}

fn parse_domain(s: &str) -> CliResult<DomainSpec> {
    let bad = || CliError::Input(format!("domain must be kind:c with kind rkp or hill, got {s:?}"));
    let (kind, c) = s.split_once(':').ok_or_else(bad)?;
    let c: f64 = c.trim().parse().map_err(|_| bad())?;
    let c = finite("c", c)?;
    Ok(match kind.trim().to_ascii_lowercase().as_str() {
        "rkp" => DomainSpec::rkp(c)?,
        "hill" => DomainSpec::hill(snap_hill(c))?,
        _ => return Err(bad()),
    })
}

fn domain_json(f: Fmt, d: &DomainSpec) -> Value {
    let kind = match d.kind {
        ProblemKind::RotatingKepler => "rkp",
        ProblemKind::HillLunar => "hill",
        ProblemKind::Kepler => "kepler",
    };
    Obj::new().put("kind", kind).put("c", f.json(d.c)).build()
}

fn verify(f: Fmt, a: &VerifyArgs) -> CliResult<(String, u8)> {
    let inner = parse_domain(&a.inner)?;
    let outer = parse_domain(&a.outer)?;
    let opts = GridOptions { n_p: a.n_p, n_p_angles: a.n_p_angles, n_theta: a.n_theta, p_max: a.p_max, strict: a.strict };
    let r = verify_fiber_inclusion(inner, outer, &opts)?;
    let v = Obj::new()
        .put("inner", domain_json(f, &inner))
        .put("outer", domain_json(f, &outer))
        .put("holds", r.holds)
        .put("worst_margin", f.json(r.worst_margin))
        .put(
            "worst_at",
            Obj::new().put("p1", f.json(r.worst_at[0])).put("p2", f.json(r.worst_at[1])).put("theta", f.json(r.worst_at[2])).build(),
        )
        .put("kappa_min", f.json(r.kappa_min))
        .put("kappa_max", f.json(r.kappa_max))
        .put("samples", Obj::new().put("momenta", int(r.samples.0)).put("theta", int(r.samples.1)).build())
        .put("ring_trend", r.ring_trend.iter().map(|&x| f.json(x)).collect::<Vec<_>>())
        .put("disagreements", int(r.disagreements))
        .build();
    Ok((render_json(&v), if r.holds { 0 } else { 1 }))
}

fn state_json(f: Fmt, y: [f64; 4]) -> Value {
    Obj::new().put("q1", f.json(y[0])).put("q2", f.json(y[1])).put("p1", f.json(y[2])).put("p2", f.json(y[3])).build()
}

fn orbit_json(f: Fmt, problem: &str, o: &PeriodicOrbit, with_samples: bool) -> Obj {
    let mut obj = Obj::new()
        .put("problem", problem)
        .put("family", o.family.to_string())
        .put("c", f.json(o.c))
        .put("initial", state_json(f, o.initial.to_array()))
        .put("period", f.json(o.period))
        .put("action", f.json(o.action))
        .put("action_dual", f.json(o.action_dual))
        .put("energy_drift", f.json(o.energy_drift))
        .put("crossing_residual", f.json(o.crossing_residual));
    if with_samples {
        let samples: Vec<Value> = o
            .samples
            .iter()
            .map(|(t, s)| Obj::new().put("t", f.json(*t)).put("state", state_json(f, s.to_array())).build())
            .collect();
        obj = obj.put("samples", samples);
    }
    obj
}

fn orbit(f: Fmt, problem: Problem, family: Family, c: f64, with_samples: bool) -> CliResult<String> {
    let c = finite("c", c)?;
    let v = match problem {
        Problem::Hill => {
            let rep = conjecture_check(snap_hill(c), family)?;
            orbit_json(f, "hill", &rep.orbit, with_samples)
                .put("interval", Obj::new().put("lo", f.json(rep.lo)).put("hi", f.json(rep.hi)).build())
                .put("inside", rep.inside)
                .build()
        }
        Problem::Rkp => {
            let cfg = ShootingConfig::seeded(ProblemKind::RotatingKepler, family, c)?;
            let o = find_symmetric_orbit(ProblemKind::RotatingKepler, &cfg)?;
            orbit_json(f, "rkp", &o, with_samples).put("interval", Value::Null).put("inside", Value::Null).build()
        }
    };
    Ok(render_json(&v))
}

fn volume_json(f: Fmt, r: &VolumeResult) -> Value {
    let method = match r.method {
        celestial_core::VolumeMethod::Quadrature => "quadrature",
        celestial_core::VolumeMethod::ClosedForm => "closed_form",
        celestial_core::VolumeMethod::MonteCarlo => "monte_carlo",
    };
    Obj::new()
        .put("value", f.json(r.value))
        .put("method", method)
        .put("error_estimate", f.json(r.error_estimate))
        .put("samples_or_evals", int(r.samples_or_evals))
        .put("seed", r.seed.map(int).unwrap_or(Value::Null))
        .build()
}

fn systolic(f: Fmt, c: f64, method: Method, seed: u64, samples: usize, rel_tol: f64) -> CliResult<String> {
    let c = finite("c", c)?;
    let ratio = systolic_ratio(c)?;
    let mut results = Vec::new();
    if matches!(method, Method::Quadrature | Method::All) {
        results.push(contact_volume_quadrature(c, rel_tol)?);
    }
    if matches!(method, Method::Closed | Method::All) {
        results.push(contact_volume_closed_form(c)?);
    }
    if matches!(method, Method::Mc | Method::All) {
        results.push(contact_volume_mc(c, samples, seed)?);
    }
    let v = Obj::new()
        .put("c", f.json(c))
        .put("systolic_ratio", f.json(ratio))
        .put("results", results.iter().map(|r| volume_json(f, r)).collect::<Vec<_>>())
        .build();
    Ok(render_json(&v))
}
