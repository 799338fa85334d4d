//! Command-line front end. Exit codes: 0 success or pass, 1 check failed,
//! 2 usage or input-format error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::capgeom::{
    bounds_table, cap_volume, cap_volume_closed, complex_cap_volume_decomposed, monte_carlo_cap_volume, CapKind,
    DEFAULT_EPSILON,
};
use crate::explorer::{explore, ExploreConfig};
use crate::hilbert::{state_from_bloch, BlochVector, PureState, RandomStream};
use crate::protocol::{audit, AuditConfig, TabulatedProtocol, TonerBacon};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SIMULATE_SIGMAS: f64 = 6.0;

#[derive(Parser, Debug)]
#[command(name = "doublecap", version, about = "Double-cap volumes, communication bounds and qubit-channel protocols")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker thread cap; 1 gives bit-reproducible output.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Quadrature,
    Closed,
    Decomposed,
    Montecarlo,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower-bound table for n = 1..n_max qubits.
    Bounds {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=40))]
        n_max: u32,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Normalized double-cap volume.
    CapVolume {
        #[arg(long)]
        kind: CapKind,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Method::Quadrature)]
        method: Method,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Run the 2-bit protocol and compare with the Born rule.
    Simulate {
        /// 0, 1, +, -, +i, -i, bloch:THETA,PHI or amp:RE,IM;RE,IM
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Audit a tabulated protocol file.
    CheckProtocol {
        path: PathBuf,
        #[command(flatten)]
        tolerances: Tolerances,
    },
    /// Search for large independent sets in a sphere orthogonality graph.
    Explore(ExploreArgs),
}

#[derive(Args, Debug)]
struct Tolerances {
    #[arg(long, default_value_t = AuditConfig::default().eps_supp)]
    eps_supp: f64,
    #[arg(long, default_value_t = AuditConfig::default().tol_orth)]
    tol_orth: f64,
    #[arg(long, default_value_t = AuditConfig::default().tol_equivalence)]
    tol_equivalence: f64,
    #[arg(long, default_value_t = AuditConfig::default().tol_coverage)]
    tol_coverage: f64,
}

#[derive(Args, Debug)]
struct ExploreArgs {
    #[arg(long)]
    kind: CapKind,
    #[arg(long)]
    dim: usize,
    /// Number of sample points M.
    #[arg(long, short = 'M', default_value_t = 4000)]
    points: usize,
    #[arg(long, default_value_t = 2.0)]
    delta_deg: f64,
    /// Annealing moves across all restarts.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

struct Output {
    text: String,
    code: i32,
}

/// Parses `args` (including the program name), runs the command, and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::param(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result.and_then(|out| write_output(cli.out.as_ref(), &out.text).map(|_| out.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Bounds { n_max, epsilon } => cmd_bounds(*n_max, *epsilon, cli.format.unwrap_or(Format::Csv)),
        Command::CapVolume {
            kind,
            dim,
            method,
            trials,
        } => cmd_cap_volume(*kind, *dim, *method, *trials, cli.seed, cli.format.unwrap_or(Format::Csv)),
        Command::Simulate { psi, phi, trials } => {
            cmd_simulate(psi, phi, *trials, cli.seed, cli.format.unwrap_or(Format::Csv))
        }
        Command::CheckProtocol { path, tolerances } => {
            cmd_check_protocol(path, tolerances, cli.format.unwrap_or(Format::Csv))
        }
        Command::Explore(args) => cmd_explore(args, cli.seed, cli.format.unwrap_or(Format::Json)),
    }
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_line<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn ok(text: String) -> Output {
    Output { text, code: EXIT_OK }
}

fn cmd_bounds(n_max: u32, epsilon: f64, format: Format) -> Result<Output> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::param("epsilon must be positive"));
    }
    let rows = bounds_table(n_max, epsilon)?;
    if format == Format::Json {
        return Ok(ok(json_line(&rows)?));
    }
    let mut s = String::from(
        "n,N,log2_VN,real_bound_bits,complex_bound_bits,theorem2_bits,entanglement_bits,fw_log2,raig_log2,ref_2_pow_n_over_3\n",
    );
    for r in &rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.dimension,
            real(r.log2_vn),
            real(r.real_bound_bits),
            real(r.complex_bound_bits),
            real(r.theorem2_bits),
            real(r.entanglement_bits),
            real(r.fw_log2),
            real(r.raig_log2),
            real(r.ref_2_pow_n_over_3)
        );
    }
    Ok(ok(s))
}

#[derive(Serialize)]
struct VolumeReport {
    kind: CapKind,
    dim: usize,
    method: Method,
    value: f64,
    std_error: Option<f64>,
    trials: Option<u64>,
}

fn cmd_cap_volume(kind: CapKind, dim: usize, method: Method, trials: u64, seed: u64, format: Format) -> Result<Output> {
    let (value, std_error, trials) = match method {
        Method::Quadrature => (cap_volume(kind, dim)?, None, None),
        Method::Closed => (cap_volume_closed(kind, dim)?, None, None),
        Method::Decomposed => match kind {
            CapKind::Complex => (complex_cap_volume_decomposed(dim)?, None, None),
            CapKind::Real => return Err(Error::param("decomposed method applies to the complex kind only")),
        },
        Method::Montecarlo => {
            let est = monte_carlo_cap_volume(kind, dim, trials, &RandomStream::new(seed, 0))?;
            (est.estimate, Some(est.std_error), Some(est.trials))
        }
    };
    let report = VolumeReport {
        kind,
        dim,
        method,
        value,
        std_error,
        trials,
    };
    if format == Format::Json {
        return Ok(ok(json_line(&report)?));
    }
    let opt = |v: Option<String>| v.unwrap_or_default();
    Ok(ok(format!(
        "kind,dim,method,value,std_error,trials\n{},{},{},{},{},{}\n",
        kind,
        dim,
        serde_json::to_value(method)?.as_str().unwrap_or_default(),
        real(value),
        opt(std_error.map(real)),
        opt(trials.map(|t| t.to_string()))
    )))
}

/// Parses a qubit state spec: `0`, `1`, `+`, `-`, `+i`, `-i`,
/// `bloch:THETA,PHI` (radians) or `amp:RE,IM;RE,IM` (normalized on input).
pub fn parse_state(spec: &str) -> Result<PureState> {
    let bad = || Error::validation("state", format!("unrecognized state spec '{spec}'"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let amps = match spec.trim() {
        "0" => vec![c(1.0, 0.0), c(0.0, 0.0)],
        "1" => vec![c(0.0, 0.0), c(1.0, 0.0)],
        "+" => vec![c(h, 0.0), c(h, 0.0)],
        "-" => vec![c(h, 0.0), c(-h, 0.0)],
        "+i" => vec![c(h, 0.0), c(0.0, h)],
        "-i" => vec![c(h, 0.0), c(0.0, -h)],
        s => {
            if let Some(rest) = s.strip_prefix("bloch:") {
                let parts: Vec<&str> = rest.split(',').collect();
                let [theta, phi] = parts[..] else { return Err(bad()) };
                return Ok(state_from_bloch(&BlochVector::from_angles(num(theta)?, num(phi)?)));
            }
            let rest = s.strip_prefix("amp:").ok_or_else(bad)?;
            let mut amps = Vec::new();
            for pair in rest.split(';') {
                let parts: Vec<&str> = pair.split(',').collect();
                let [re, im] = parts[..] else { return Err(bad()) };
                amps.push(c(num(re)?, num(im)?));
            }
            if amps.len() != 2 {
                return Err(Error::validation("state", format!("'{spec}' must have two amplitudes")));
            }
            return PureState::normalized(amps);
        }
    };
    PureState::new(amps)
}

fn cmd_simulate(psi: &str, phi: &str, trials: u64, seed: u64, format: Format) -> Result<Output> {
    let psi = parse_state(psi)?;
    let phi = parse_state(phi)?;
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    let report = TonerBacon::default().simulate(&psi, &phi, trials, &RandomStream::new(seed, 0))?;
    let pass = report.within_sigmas(SIMULATE_SIGMAS);
    let code = if pass { EXIT_OK } else { EXIT_FAIL };
    let text = if format == Format::Json {
        json_line(&serde_json::json!({
            "frequency": report.frequency,
            "born": report.born,
            "deviation": report.deviation,
            "std_error": report.std_error,
            "trials": report.trials,
            "hits": report.hits,
            "within_6_sigma": pass,
        }))?
    } else {
        format!(
            "frequency,born,deviation,std_error,trials,hits,within_6_sigma\n{},{},{},{},{},{},{}\n",
            real(report.frequency),
            real(report.born),
            real(report.deviation),
            real(report.std_error),
            report.trials,
            report.hits,
            pass
        )
    };
    Ok(Output { text, code })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_check_protocol(path: &PathBuf, tol: &Tolerances, format: Format) -> Result<Output> {
    let tp = TabulatedProtocol::from_path(path)?;
    let config = AuditConfig {
        eps_supp: tol.eps_supp,
        tol_orth: tol.tol_orth,
        tol_equivalence: tol.tol_equivalence,
        tol_coverage: tol.tol_coverage,
    };
    let report = audit(&tp, &config)?;
    let code = if report.any_failed() { EXIT_FAIL } else { EXIT_OK };
    let text = if format == Format::Json {
        json_line(&report)?
    } else {
        let mut s = String::from("check,status,detail\n");
        for c in &report.checks {
            let _ = writeln!(s, "{},{},{}", c.check, c.status, csv_field(&c.detail));
        }
        s
    };
    Ok(Output { text, code })
}

fn cmd_explore(args: &ExploreArgs, seed: u64, format: Format) -> Result<Output> {
    if !args.delta_deg.is_finite() {
        return Err(Error::param("delta must be finite"));
    }
    let mut config = ExploreConfig::new(args.kind, args.dim, args.points, args.delta_deg.to_radians(), seed);
    if let Some(b) = args.budget {
        config.budget = b;
    }
    if let Some(r) = args.restarts {
        config.restarts = r;
    }
    let report = explore(&config)?;
    if args.timing {
        eprintln!("elapsed {:.3} s", report.elapsed_seconds);
    }
    let code = if report.feasible { EXIT_OK } else { EXIT_FAIL };
    let json = report.to_json(args.timing);
    let text = if format == Format::Json {
        json_line(&json)?
    } else {
        let obj = json.as_object().map(|o| o.iter().collect::<Vec<_>>()).unwrap_or_default();
        let header: Vec<&str> = obj.iter().map(|(k, _)| k.as_str()).collect();
        let values: Vec<String> = obj
            .iter()
            .map(|(_, v)| match v {
                serde_json::Value::Number(n) if !n.is_u64() && !n.is_i64() => real(n.as_f64().unwrap_or(f64::NAN)),
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                v => v.to_string(),
            })
            .collect();
        format!("{}\n{}\n", header.join(","), values.join(","))
    };
    Ok(Output { text, code })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::born_probability;

    #[test]
    fn named_states_parse() {
        let zero = parse_state("0").unwrap();
        let plus = parse_state("+").unwrap();
        let minus_i = parse_state("-i").unwrap();
        assert!((born_probability(&zero, &plus).unwrap() - 0.5).abs() < 1e-15);
        assert!((born_probability(&plus, &parse_state("-").unwrap()).unwrap()).abs() < 1e-15);
        assert!((born_probability(&minus_i, &parse_state("+i").unwrap()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn bloch_and_amp_specs_agree() {
        let a = parse_state("bloch:1.5707963267948966,0").unwrap();
        let b = parse_state("amp:1,0;1,0").unwrap();
        assert!((born_probability(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_specs_are_rejected() {
        for s in ["", "2", "bloch:1", "amp:1,0", "amp:1,0;0", "amp:0,0;0,0", "amp:1,0;0,0;0,0", "bloch:a,b"] {
            assert!(parse_state(s).is_err(), "{s}");
        }
    }

    #[test]
    fn csv_reals_have_17_significant_digits() {
        let s = real(std::f64::consts::PI);
        let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(run(["doublecap", "bounds", "--n-max", "0"]), EXIT_USAGE);
        assert_eq!(run(["doublecap", "cap-volume", "--kind", "real", "--dim", "3", "--method", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["doublecap", "nope"]), EXIT_USAGE);
    }
}
