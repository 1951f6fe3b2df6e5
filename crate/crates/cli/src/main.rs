//! Command-line surface for the exponential-dynamics toolkit.
//!
//! Subcommands: `potential`, `itinerary`, `kneading`, `nwt-search`, `ray`,
//! `verify`. All outputs are deterministic given flags and seed; JSON and
//! CSV emissions are byte-stable across repeated runs. Exit codes: 0 on
//! success, 1 for configuration or internal errors, 2 for domain-defined
//! undefined results (a shift hitting the partition, an uncertified trace, a
//! potential without a finite upper bound).

mod config;
mod gfmt;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use expfan::address::ExtendedAddress;
use expfan::combinatorics::{nwt_search, CombiError, NwtBounds};
use expfan::itinerary::{declared_length, itinerary, kneading, ItinError, LengthConvention};
use expfan::model::{classify, t_min, t_star, ModelCtx, ModelError};
use expfan::parse::{parse_extended, parse_external};
use expfan::rays::{ray_polyline, RayParams, RaySample};
use expfan::verify::{nwt_with, run_suite, SUITES};

use config::Config;
use gfmt::g17;

#[derive(Parser)]
#[command(name = "expfan", version, about = "Symbolic dynamics and dynamic rays of e^z + a")]
struct Cli {
    /// key = value configuration file; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified potential bounds and speed class of an address
    Potential {
        /// address, e.g. "(1)^inf", "3 [1 2]" or "gen:iterexp:1"
        #[arg(allow_hyphen_values = true)]
        addr: String,
        /// width of the certified minimal-potential interval
        #[arg(long)]
        tol: Option<f64>,
        /// sup depth for the potential bounds
        #[arg(long)]
        depth: Option<u64>,
    },
    /// Itinerary of address R relative to the partition address S
    Itinerary {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(allow_hyphen_values = true)]
        r: String,
        length: usize,
        /// emit a JSON record instead of plain text
        #[arg(long)]
        json: bool,
    },
    /// Kneading sequence of a partition address
    Kneading {
        #[arg(allow_hyphen_values = true)]
        s: String,
        length: usize,
        /// length bookkeeping for intermediate addresses
        #[arg(long, value_enum, default_value_t = LengthFlag::CountInfinity)]
        length_convention: LengthFlag,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive wandering-triangle refutation search
    NwtSearch {
        /// entry magnitude bound of the address pool
        #[arg(long)]
        entries: u64,
        /// period length bound
        #[arg(long)]
        period: usize,
        /// preperiod length bound
        #[arg(long, default_value_t = 1)]
        preperiod: usize,
        #[arg(long, default_value_t = 10)]
        horizon: u64,
        /// translate window |m| ≤ W
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// worker threads (defaults to the number of cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// cap on the number of triangles tested
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Trace dynamic rays and emit CSV/SVG
    Ray {
        /// parameter a of e^z + a, e.g. "-2" or "1+1i"
        #[arg(short = 'a', long = "a", allow_hyphen_values = true)]
        a: String,
        /// one or more addresses to trace
        #[arg(allow_hyphen_values = true, required = true)]
        addrs: Vec<String>,
        /// potential grid lo:hi:samples, e.g. 5:15:11
        #[arg(long = "t")]
        t_range: String,
        #[arg(long)]
        depth: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        /// certification threshold Q
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a named verification suite
    Verify {
        /// one of: lemma-bracket, monotonicity, endpoint-convergence,
        /// flanking, sharing-slow, unlinked-itineraries, nwt, conjugacy,
        /// vertical-order, landing, backwards-shrinking
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        /// case-count override
        #[arg(long)]
        cases: Option<u64>,
        /// nwt suite: entry bound override
        #[arg(long)]
        entries: Option<u64>,
        #[arg(long)]
        period: Option<usize>,
        #[arg(long)]
        preperiod: Option<usize>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum LengthFlag {
    /// length counts the ∞ symbol (an intermediate with k finite entries has
    /// length k+1 and k−1 kneading entries, i.e. length − 2)
    CountInfinity,
    /// length counts finite entries only (the same address has length k and
    /// its k−1 kneading entries are length − 1)
    FiniteOnly,
}

impl From<LengthFlag> for LengthConvention {
    fn from(f: LengthFlag) -> Self {
        match f {
            LengthFlag::CountInfinity => LengthConvention::CountInfinity,
            LengthFlag::FiniteOnly => LengthConvention::FiniteEntriesOnly,
        }
    }
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn config_err(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn domain_err(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        None => Config::default(),
    };
    match run(cli, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn setting<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &Config,
    key: &str,
    default: T,
) -> Result<T, Failure> {
    match flag {
        Some(v) => Ok(v),
        None => cfg.get::<T>(key).map_err(config_err).map(|v| v.unwrap_or(default)),
    }
}

fn run(cli: Cli, cfg: &Config) -> Result<u8, Failure> {
    match cli.command {
        Command::Potential { addr, tol, depth } => cmd_potential(cfg, &addr, tol, depth),
        Command::Itinerary { s, r, length, json } => cmd_itinerary(cfg, &s, &r, length, json),
        Command::Kneading { s, length, length_convention, json } => {
            cmd_kneading(cfg, &s, length, length_convention.into(), json)
        }
        Command::NwtSearch { entries, period, preperiod, horizon, window, jobs, budget } => {
            cmd_nwt(cfg, entries, period, preperiod, horizon, window, jobs, budget)
        }
        Command::Ray { a, addrs, t_range, depth, tol, q, csv, svg } => {
            cmd_ray(cfg, &a, &addrs, &t_range, depth, tol, q, csv, svg)
        }
        Command::Verify {
            suite,
            seed,
            cases,
            entries,
            period,
            preperiod,
            horizon,
            window,
            jobs,
        } => cmd_verify(cfg, &suite, seed, cases, entries, period, preperiod, horizon, window, jobs),
    }
}

#[derive(Serialize)]
struct PotentialRecord {
    addr: String,
    t_star: [f64; 2],
    t_min: Option<[f64; 2]>,
    class: String,
    depth: u64,
    tol: f64,
    t_star_tag: expfan::model::CertTag,
    t_min_tag: Option<expfan::model::CertTag>,
    t_min_error: Option<String>,
}

fn cmd_potential(
    cfg: &Config,
    addr_text: &str,
    tol: Option<f64>,
    depth: Option<u64>,
) -> Result<u8, Failure> {
    let tol = setting(tol, cfg, "tol", 1e-9)?;
    let depth = setting(depth, cfg, "depth", 24)?;
    if !(tol > 0.0) || depth < 1 {
        return Err(config_err("need tol > 0 and depth >= 1"));
    }
    let addr = parse_external(addr_text).map_err(|e| config_err(e.to_string()))?;
    let ctx = ModelCtx { tstar_depth: depth, ..ModelCtx::default() };
    let star = t_star(&ctx, &addr, depth);
    let class = classify(&ctx, &addr, depth.min(16).max(4));
    let (t_min_iv, t_min_tag, t_min_error) = match t_min(&ctx, &addr, tol, 1024) {
        Ok(iv) => (Some([iv.lo, iv.hi]), Some(iv.tag), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let record = PotentialRecord {
        addr: addr.to_text(),
        t_star: [star.lo, star.hi],
        t_min: t_min_iv,
        class: class.as_str().to_string(),
        depth,
        tol,
        t_star_tag: star.tag,
        t_min_tag,
        t_min_error: t_min_error.clone(),
    };
    println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
    Ok(if t_min_error.is_some() { 2 } else { 0 })
}

#[derive(Serialize)]
struct ItineraryRecord {
    partition: String,
    moving: Option<String>,
    entries: Vec<i64>,
    star: bool,
    declared_length: Option<usize>,
    length_convention: &'static str,
}

fn parse_partition(text: &str) -> Result<ExtendedAddress, Failure> {
    let s = parse_extended(text).map_err(|e| config_err(e.to_string()))?;
    if s.is_infinity() {
        return Err(config_err("the partition address must differ from inf"));
    }
    Ok(s)
}

fn itin_failure(e: ItinError) -> Failure {
    match e {
        ItinError::HitsPartition(_) | ItinError::Undecided(_) => domain_err(e.to_string()),
        other => config_err(other.to_string()),
    }
}

fn cmd_itinerary(
    cfg: &Config,
    s_text: &str,
    r_text: &str,
    length: usize,
    json: bool,
) -> Result<u8, Failure> {
    let cap: u64 = setting(None, cfg, "cmp-depth", 256)?;
    let s = parse_partition(s_text)?;
    let r = parse_external(r_text).map_err(|e| config_err(e.to_string()))?;
    let it = itinerary(&s, &r, length, cap).map_err(itin_failure)?;
    if json {
        let record = ItineraryRecord {
            partition: s.to_text(),
            moving: Some(r.to_text()),
            entries: it.entries.clone(),
            star: it.star_terminated,
            declared_length: None,
            length_convention: "count-infinity",
        };
        println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
    } else {
        println!("{it}");
    }
    Ok(0)
}

fn cmd_kneading(
    cfg: &Config,
    s_text: &str,
    length: usize,
    convention: LengthConvention,
    json: bool,
) -> Result<u8, Failure> {
    let cap: u64 = setting(None, cfg, "cmp-depth", 256)?;
    let s = parse_partition(s_text)?;
    let k = kneading(&s, length, cap).map_err(itin_failure)?;
    if json {
        let record = ItineraryRecord {
            partition: s.to_text(),
            moving: None,
            entries: k.entries.clone(),
            star: k.star_terminated,
            declared_length: declared_length(&s, convention),
            length_convention: match convention {
                LengthConvention::CountInfinity => "count-infinity",
                LengthConvention::FiniteEntriesOnly => "finite-only",
            },
        };
        println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
    } else {
        println!("{k}");
    }
    Ok(0)
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| config_err(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_nwt(
    cfg: &Config,
    entries: u64,
    period: usize,
    preperiod: usize,
    horizon: u64,
    window: i64,
    jobs: Option<usize>,
    budget: Option<u64>,
) -> Result<u8, Failure> {
    if period < 1 || horizon < 1 {
        return Err(config_err("need period >= 1 and horizon >= 1"));
    }
    let jobs = match jobs {
        Some(j) => Some(j),
        None => cfg.get::<usize>("jobs").map_err(config_err)?,
    };
    let budget = match budget {
        Some(b) => Some(b),
        None => cfg.get::<u64>("budget").map_err(config_err)?,
    };
    let bounds = NwtBounds {
        entry_bound: entries,
        period_bound: period,
        preperiod_bound: preperiod,
        horizon,
        translate_window: window,
        budget,
    };
    let outcome = with_pool(jobs, move || nwt_search(&bounds))?;
    match outcome {
        Ok(summary) => {
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            Ok(if summary.survivors == 0 { 0 } else { 1 })
        }
        Err(CombiError::SearchBudgetExceeded(partial)) => {
            println!("{}", serde_json::to_string_pretty(&*partial).expect("summary serializes"));
            Err(config_err("search budget exceeded; partial summary emitted"))
        }
        Err(e) => Err(config_err(e.to_string())),
    }
}

fn parse_complex(text: &str) -> Result<Complex64, Failure> {
    let t: String = text.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(config_err("empty complex number"));
    }
    if let Some(body) = t.strip_suffix('i') {
        // find the split between real and imaginary parts: the last +/− that
        // is not leading and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im: f64 = match im_s {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| config_err(format!("bad imaginary part in \"{text}\"")))?,
        };
        let re: f64 = if re_s.is_empty() {
            0.0
        } else {
            re_s.parse().map_err(|_| config_err(format!("bad real part in \"{text}\"")))?
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = t.parse().map_err(|_| config_err(format!("bad parameter \"{text}\"")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn parse_t_range(text: &str) -> Result<(f64, f64, usize), Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let lo: f64 = lo.parse().map_err(|_| config_err("bad t range lower bound"))?;
            let hi: f64 = hi.parse().map_err(|_| config_err("bad t range upper bound"))?;
            let n: usize = n.parse().map_err(|_| config_err("bad t range sample count"))?;
            Ok((lo, hi, n))
        }
        [single] => {
            let t: f64 = single.parse().map_err(|_| config_err("bad potential"))?;
            Ok((t, t, 1))
        }
        _ => Err(config_err("potential range must be lo:hi:samples")),
    }
}

#[derive(Serialize)]
struct RayFailure {
    addr: String,
    sample_index: usize,
    error: String,
}

#[derive(Serialize)]
struct RayReport {
    parameter: [f64; 2],
    traced: usize,
    failed: usize,
    failures: Vec<RayFailure>,
    csv: Option<String>,
    svg: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_ray(
    cfg: &Config,
    a_text: &str,
    addr_texts: &[String],
    t_range: &str,
    depth: Option<u64>,
    tol: Option<f64>,
    q: Option<f64>,
    csv: Option<PathBuf>,
    svg_path: Option<PathBuf>,
) -> Result<u8, Failure> {
    let depth = setting(depth, cfg, "depth", 20)?;
    let tol = setting(tol, cfg, "tol", 1e-6)?;
    let q = setting(q, cfg, "q", 5.0)?;
    let a = parse_complex(a_text)?;
    let (t_lo, t_hi, samples) = parse_t_range(t_range)?;
    let params = RayParams { q, ..RayParams::default() };
    let ctx = ModelCtx::default();

    let mut groups: Vec<(String, Vec<RaySample>)> = Vec::new();
    let mut failures = Vec::new();
    for text in addr_texts {
        let addr = parse_external(text).map_err(|e| config_err(e.to_string()))?;
        let line = ray_polyline(&params, &ctx, a, &addr, t_lo, t_hi, samples, depth, tol)
            .map_err(|e| config_err(e.to_string()))?;
        for (idx, err) in line.failures {
            failures.push(RayFailure {
                addr: addr.to_text(),
                sample_index: idx,
                error: err.to_string(),
            });
        }
        groups.push((addr.to_text(), line.samples));
    }

    if let Some(path) = &csv {
        let mut out = String::from("addr,t,re,im,residual,depth\n");
        for (label, samples) in &groups {
            for s in samples {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    label,
                    g17(s.t),
                    g17(s.re),
                    g17(s.im),
                    g17(s.residual),
                    s.depth
                ));
            }
        }
        std::fs::write(path, out)
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &svg_path {
        let doc = svg::render(&groups, 800, 600);
        std::fs::write(path, doc)
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))?;
    }

    let traced: usize = groups.iter().map(|(_, s)| s.len()).sum();
    let report = RayReport {
        parameter: [a.re, a.im],
        traced,
        failed: failures.len(),
        failures,
        csv: csv.map(|p| p.display().to_string()),
        svg: svg_path.map(|p| p.display().to_string()),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(if traced == 0 && report.failed > 0 { 2 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    cfg: &Config,
    suite: &str,
    seed: Option<u64>,
    cases: Option<u64>,
    entries: Option<u64>,
    period: Option<usize>,
    preperiod: Option<usize>,
    horizon: Option<u64>,
    window: Option<i64>,
    jobs: Option<usize>,
) -> Result<u8, Failure> {
    let seed = setting(seed, cfg, "seed", 7)?;
    let cases = match cases {
        Some(c) => Some(c),
        None => cfg.get::<u64>("cases").map_err(config_err)?,
    };
    let report = if suite == "nwt" && (entries.is_some() || horizon.is_some()) {
        let bounds = NwtBounds {
            entry_bound: entries.unwrap_or(1),
            period_bound: period.unwrap_or(2),
            preperiod_bound: preperiod.unwrap_or(1),
            horizon: horizon.unwrap_or(10),
            translate_window: window.unwrap_or(2),
            budget: None,
        };
        with_pool(jobs, move || nwt_with(&[bounds]))?
    } else {
        let suite_name = suite.to_string();
        with_pool(jobs, move || run_suite(&suite_name, seed, cases))?.ok_or_else(|| {
            config_err(format!("unknown suite \"{suite}\"; available: {}", SUITES.join(", ")))
        })?
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(if report.passed { 0 } else { 1 })
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        domain_err(e.to_string())
    }
}
