//! Command-line front end.

use crate::cache::{Cache, CacheKey};
use crate::checks::check_conjecture2;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, Rational};
use crate::geometries::{Degree, Geometry, Insertion};
use crate::series::{
    build_generating_function, gmt_upto3, j_coefficients, mirror_map, transform, GradedSeries, SeriesJson,
    Truncation,
};
use crate::vsc::{check_theorem1, vsc_residue, VscTable};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::HashMap;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "resmirror", version, about = "Exact two-point numbers, mirror maps and virtual structure constants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// JSON config file with default truncations.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cache file (JSON lines); RESMIRROR_CACHE takes precedence.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct GeometryArgs {
    /// cpn, kf0, f3, wp1, wp2 or wp3.
    #[arg(long)]
    pub geometry: String,
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Insertion label (`1`, `z`, `zw`, `w2`; an exponent such as `2` for one-class targets).
    #[arg(long, default_value = "1")]
    pub a: String,
    #[arg(long, default_value = "1")]
    pub b: String,
}

#[derive(Args, Debug, Clone)]
pub struct TruncArgs {
    /// Maximal total degree.
    #[arg(long)]
    pub trunc: Option<u32>,
    /// Truncate by `max(d_a, d_b)` instead of `d_a + d_b`.
    #[arg(long = "box")]
    pub box_trunc: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Virtual structure constants `L̃_n^{N,k,d}`.
    Vsc {
        #[arg(long = "N")]
        n_big: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
        /// Single index; all admissible indices when omitted.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, value_enum, default_value_t = VscMethod::Recursive)]
        method: VscMethod,
    },
    /// One two-point number `w(O_a O_b)_{0,d}`.
    TwoPoint {
        #[command(flatten)]
        geo: GeometryArgs,
        /// `d` or `da,db`.
        #[arg(long)]
        d: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Generating function of `w(O_a O_b)`.
    Series {
        #[command(flatten)]
        geo: GeometryArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        trunc: TruncArgs,
    },
    /// Mirror map `t(x)`.
    MirrorMap {
        #[command(flatten)]
        geo: GeometryArgs,
        #[command(flatten)]
        trunc: TruncArgs,
    },
    /// Gromov–Witten generating function (mirror transform, or the degree ≤ 3 formulas
    /// for `cpn` with `N < k`).
    Gw {
        #[command(flatten)]
        geo: GeometryArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        trunc: TruncArgs,
    },
    /// j-function coefficients.
    J {
        #[arg(long)]
        dmax: u32,
    },
    /// Consistency checks.
    Check {
        #[command(subcommand)]
        which: CheckCommand,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VscMethod {
    Recursive,
    Residue,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Recursion against the residue formula.
    Theorem1 {
        #[arg(long = "N")]
        n_big: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
    },
    /// `F_3` two-point numbers against the quantum multiplication matrices.
    Conjecture2,
}

/// Optional JSON configuration.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Default truncation per geometry name.
    pub truncation: HashMap<String, u32>,
    /// Cache file used when neither `--cache` nor the environment names one.
    pub cache: Option<PathBuf>,
}

const DEFAULT_TRUNC: u32 = 3;

/// Exit status plus the text for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((ok, out)) => Outcome { code: if ok { 0 } else { 1 }, stdout: out, stderr: String::new() },
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// 2 for invalid input, 1 for failures during computation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidDegree(_)
        | Error::InvalidInsertion(_)
        | Error::InvalidComb(_)
        | Error::InvalidArgument(_)
        | Error::Parse(_)
        | Error::NegativeExponent(_) => 2,
        _ => 1,
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    match path {
        None => Ok(Config::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("bad config: {e}")))
        }
    }
}

fn geometry(a: &GeometryArgs) -> Result<Geometry> {
    Geometry::from_name(&a.geometry, a.n, a.k)
}

/// Labels, with bare integers read as exponents of the hyperplane class on one-class
/// targets.
pub fn parse_insertion(g: &Geometry, s: &str) -> Result<Insertion> {
    let ins = match (g.is_bi(), s.trim().parse::<u32>()) {
        (false, Ok(e)) => Insertion::new(e, 0),
        _ => s.parse()?,
    };
    g.validate_insertion(&ins)?;
    Ok(ins)
}

fn truncation(cfg: &Config, g: &Geometry, t: &TruncArgs) -> Result<(u32, Truncation)> {
    let d = t.trunc.or_else(|| cfg.truncation.get(g.name()).copied()).unwrap_or(DEFAULT_TRUNC);
    if d == 0 {
        return Err(Error::InvalidArgument("--trunc must be at least 1".into()));
    }
    Ok((d, if t.box_trunc { Truncation::Box } else { Truncation::Total }))
}

fn series_out(s: &GradedSeries, g: &Geometry, fmt: Format) -> String {
    match fmt {
        Format::Table => format!("{}\n", s.render(!g.is_bi())),
        Format::Json => format!("{}\n", serde_json::to_string(&s.to_json()).unwrap()),
    }
}

fn execute(cli: &Cli) -> Result<(bool, String)> {
    let cfg = load_config(&cli.config)?;
    let default_cache = cli.cache.clone().or_else(|| cfg.cache.clone());
    let cache = Cache::from_env(default_cache.as_deref())?;
    let fmt = cli.format;
    match &cli.command {
        Command::Vsc { n_big, k, d, n, method } => {
            if *n_big < 2 || *k == 0 || *d == 0 {
                return Err(Error::InvalidArgument(format!("need N ≥ 2, k ≥ 1, d ≥ 1 (N={n_big}, k={k}, d={d})")));
            }
            let mut table = VscTable::new(*k)?;
            let idx: Vec<i64> = match n {
                Some(n) => vec![*n],
                None => (0..=table.top(*n_big, *d).map_or(-1, |t| t as i64)).collect(),
            };
            let mut vals = Vec::new();
            for &i in &idx {
                let key = CacheKey::new(
                    "vsc",
                    vec![format!("N={n_big}"), format!("k={k}")],
                    d.to_string(),
                    vec![format!("n={i}")],
                );
                let v = match method {
                    VscMethod::Recursive => cache.get_or_compute(key, "recursion", || table.value(*n_big, *d, i))?,
                    VscMethod::Residue => cache.get_or_compute(key, "residue", || vsc_residue(*n_big, *k, *d, i))?,
                };
                vals.push((i, v));
            }
            Ok((true, match fmt {
                Format::Table => vals.iter().map(|(i, v)| format!("{i}\t{}\n", fmt_rational(v))).collect(),
                Format::Json => format!(
                    "{}\n",
                    json!({"N": n_big, "k": k, "d": d,
                        "values": vals.iter().map(|(i, v)| json!({"n": i, "value": fmt_rational(v)})).collect::<Vec<_>>()})
                ),
            }))
        }
        Command::TwoPoint { geo, d, pair } => {
            let g = geometry(geo)?;
            let d: Degree = d.parse()?;
            let a = parse_insertion(&g, &pair.a)?;
            let b = parse_insertion(&g, &pair.b)?;
            let key = CacheKey::two_point(&g, &d, &a, &b);
            let v = cache.get_or_compute(key, "two_point", || g.two_point(&d, &a, &b))?;
            Ok((true, match fmt {
                Format::Table => format!("{}\n", fmt_rational(&v)),
                Format::Json => format!(
                    "{}\n",
                    json!({"geometry": g.name(), "d": d.to_string(), "a": a.label(), "b": b.label(), "value": fmt_rational(&v)})
                ),
            }))
        }
        Command::Series { geo, pair, trunc } => {
            let g = geometry(geo)?;
            let a = parse_insertion(&g, &pair.a)?;
            let b = parse_insertion(&g, &pair.b)?;
            let (t, mode) = truncation(&cfg, &g, trunc)?;
            let s = build_generating_function(&g, &a, &b, t, mode, &cache)?;
            Ok((true, series_out(&s, &g, fmt)))
        }
        Command::MirrorMap { geo, trunc } => {
            let g = geometry(geo)?;
            let (t, mode) = truncation(&cfg, &g, trunc)?;
            let m = mirror_map(&g, t, mode, &cache)?;
            Ok((true, match fmt {
                Format::Table => m
                    .t
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let name = if m.is_single() { "t".to_string() } else { format!("t{}", i + 1) };
                        format!("{name} = {}\n", s.render(!g.is_bi()))
                    })
                    .collect(),
                Format::Json => {
                    let t: Vec<SeriesJson> = m.t.iter().map(GradedSeries::to_json).collect();
                    format!("{}\n", serde_json::to_string(&json!({ "t": t })).unwrap())
                }
            }))
        }
        Command::Gw { geo, pair, trunc } => {
            let g = geometry(geo)?;
            if let Geometry::Cpn { n, k } = g {
                if n < k {
                    let mut table = VscTable::new(k)?;
                    let entries = gmt_upto3(n, k, &mut table)?;
                    return Ok((true, match fmt {
                        Format::Table => entries
                            .iter()
                            .map(|e| format!("d={}\th{}\th{}\t{}\n", e.d, e.a, e.b, fmt_rational(&e.value)))
                            .collect(),
                        Format::Json => format!("{}\n", serde_json::to_string(&entries).unwrap()),
                    }));
                }
            }
            let a = parse_insertion(&g, &pair.a)?;
            let b = parse_insertion(&g, &pair.b)?;
            let (t, mode) = truncation(&cfg, &g, trunc)?;
            let m = mirror_map(&g, t, mode, &cache)?;
            let f = build_generating_function(&g, &a, &b, t, mode, &cache)?;
            Ok((true, series_out(&transform(&f, &m)?, &g, fmt)))
        }
        Command::J { dmax } => {
            let e = j_coefficients(*dmax, &cache)?;
            Ok((true, match fmt {
                Format::Table => (0..e.j.len())
                    .map(|i| format!("j_{}={}\tw_{}={}\n", i + 1, fmt_rational(&e.j[i]), i + 1, fmt_rational(&e.w[i])))
                    .collect(),
                Format::Json => format!("{}\n", serde_json::to_string(&e).unwrap()),
            }))
        }
        Command::Check { which } => match which {
            CheckCommand::Theorem1 { n_big, k, d } => {
                if *n_big < 2 || *k == 0 || *d == 0 {
                    return Err(Error::InvalidArgument(format!("N={n_big}, k={k}, d={d}")));
                }
                let r = check_theorem1(*n_big, *k, *d)?;
                let ok = r.agrees();
                Ok((ok, match fmt {
                    Format::Table => {
                        let mut s: String = r
                            .rows
                            .iter()
                            .map(|x| {
                                let mark = if x.recursive == x.residue { "ok" } else { "MISMATCH" };
                                format!("{}\t{}\t{}\t{mark}\n", x.n, fmt_rational(&x.recursive), fmt_rational(&x.residue))
                            })
                            .collect();
                        s.push_str(if ok { "theorem1: agree\n" } else { "theorem1: MISMATCH\n" });
                        s
                    }
                    Format::Json => {
                        format!("{}\n", json!({"agrees": ok, "report": serde_json::to_value(&r).unwrap()}))
                    }
                }))
            }
            CheckCommand::Conjecture2 => {
                let rows = check_conjecture2(&cache)?;
                let ok = rows.iter().all(|r| r.agrees());
                Ok((ok, match fmt {
                    Format::Table => {
                        let mut s: String = rows
                            .iter()
                            .map(|r| {
                                let t = &r.term;
                                let mark = if r.agrees() { "ok" } else { "MISMATCH" };
                                format!(
                                    "C_{:?}\t{}\t{}\t({},{})\t{}\t{}\t{mark}\n",
                                    t.divisor,
                                    t.a,
                                    t.b,
                                    t.d.da,
                                    t.d.db,
                                    fmt_rational(&t.coef),
                                    fmt_rational(&r.computed)
                                )
                                .replace("C_Z", "C_z")
                                .replace("C_W", "C_w")
                            })
                            .collect();
                        s.push_str(if ok { "conjecture2: agree\n" } else { "conjecture2: MISMATCH\n" });
                        s
                    }
                    Format::Json => format!("{}\n", json!({"agrees": ok, "rows": rows})),
                }))
            }
        },
    }
}

/// Rational parsed from CLI output, for tests and scripts.
pub fn parse_value(s: &str) -> Result<Rational> {
    crate::exact::parse_rational(s.trim())
}
