//! Command-line interface: `char`, `kostka`, `fuse` and `verify` verbs with
//! JSON or aligned-text output and optional content-addressed caching of
//! JSON results.
//!
//! Truncation orders are given in integer units of `1/(4p)` so that every
//! invocation is exact; identical invocations produce byte-identical
//! output.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::characters::{self, CharKind, CharacterRequest};
use crate::fusion;
use crate::kostka;
use crate::model::{build_model, ModelParams, NVector, Sign};
use crate::series::{gcd, QPoly, QSeries, TermRecord};
use crate::verify::{self, Tier, VerificationReport};
use crate::Error;

#[derive(Parser)]
#[command(
    name = "doublet",
    version,
    about = "Exact characters, multiplicity polynomials and fusion decompositions \
             for the doublet algebra of (1,p) logarithmic models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Model parameter p >= 2; exponents are integers over 4p.
    #[arg(long)]
    p: i64,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["json", "text"])]
    format: String,
    /// Directory for content-addressed caching of JSON output.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a character series.
    Char {
        #[command(flatten)]
        common: CommonArgs,
        /// One of: irreducible, w-plus, w-minus, fermionic, projective,
        /// verma, coinvariant.
        #[arg(long)]
        kind: String,
        /// Module label 1..p (kinds with a single label).
        #[arg(long)]
        s: Option<i64>,
        /// Sign for the verma / coinvariant kinds: + or -.
        #[arg(long)]
        sign: Option<String>,
        /// Tensor-power multiplicities n_2,...,n_p (kind fermionic).
        #[arg(long)]
        n: Option<String>,
        /// Subalgebra label vector m_2,...,m_p (kind coinvariant).
        #[arg(long)]
        m: Option<String>,
        /// Truncation order in units of 1/(4p).
        #[arg(long)]
        trunc: i64,
    },
    /// Compute a multiplicity polynomial.
    Kostka {
        #[command(flatten)]
        common: CommonArgs,
        /// Summand label: 1..p for the projective family, 1..p-1 for the
        /// irreducible family.
        #[arg(long)]
        ell: i64,
        /// Tensor-power multiplicities n_2,...,n_p.
        #[arg(long)]
        n: String,
        /// Which polynomial: khat, kbar, felder, steinberg.
        #[arg(long, default_value = "khat", value_parser = ["khat", "kbar", "felder", "steinberg"])]
        which: String,
    },
    /// Decompose a tensor power of the simple modules.
    Fuse {
        #[command(flatten)]
        common: CommonArgs,
        /// Tensor-power multiplicities n_2,...,n_p.
        #[arg(long)]
        n: String,
        /// Emit plain multiplicity counts instead of graded polynomials.
        #[arg(long)]
        ungraded: bool,
    },
    /// Run an identity-verification suite.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Suite name: main-identity, fermionic-theta, supernomial, felder,
        /// limits, ising.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        s: Option<i64>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        m: Option<String>,
        /// Truncation order in units of 1/(4p).
        #[arg(long)]
        trunc: Option<i64>,
        /// Component index for the limits suite (0-based into n).
        #[arg(long)]
        direction: Option<usize>,
        /// Extra growth steps for the limits suite.
        #[arg(long)]
        steps: Option<i64>,
        /// Largest column count for the ising suite.
        #[arg(long)]
        m_max: Option<i64>,
    },
}

/// Exit codes: 0 success, 1 proven-tier verification failure, 2 argument
/// errors, 3 truncation-margin errors.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Truncation { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn parse_vec(text: &str, expected_len: usize, what: &str) -> Result<NVector, Error> {
    let parts: Result<Vec<u32>, _> = text.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let parts = parts.map_err(|_| {
        Error::Param(format!(
            "{what} must be comma-separated non-negative integers, got {text:?}"
        ))
    })?;
    if parts.len() != expected_len {
        return Err(Error::Param(format!(
            "{what} must have {expected_len} components, got {}",
            parts.len()
        )));
    }
    Ok(NVector(parts))
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Char {
            common,
            kind,
            s,
            sign,
            n,
            m,
            trunc,
        } => {
            let mp = build_model(common.p)?;
            let kind: CharKind = kind.parse()?;
            let sign = sign.map(|t| t.parse::<Sign>()).transpose()?;
            let n = n
                .map(|t| parse_vec(&t, (common.p - 1) as usize, "--n"))
                .transpose()?;
            let m = m
                .map(|t| parse_vec(&t, (common.p - 1) as usize, "--m"))
                .transpose()?;
            let request = CharacterRequest {
                kind: kind.clone(),
                s,
                sign,
                n: n.clone(),
                m: m.clone(),
                trunc,
            };
            let key = format!(
                "char p={} kind={kind:?} s={s:?} sign={:?} n={:?} m={:?} trunc={trunc}",
                common.p,
                request.sign,
                n.as_ref().map(|v| &v.0),
                m.as_ref().map(|v| &v.0),
            );
            with_cache(&common, &key, || {
                let series = characters::compute(&mp, &request)?;
                Ok(Output::Series(SeriesOutput::new(&mp, &series)))
            })?;
            Ok(0)
        }
        Command::Kostka { common, ell, n, which } => {
            let mp = build_model(common.p)?;
            let n = parse_vec(&n, (common.p - 1) as usize, "--n")?;
            let key = format!("kostka p={} ell={ell} n={:?} which={which}", common.p, n.0);
            with_cache(&common, &key, || {
                let poly = match which.as_str() {
                    "kbar" => kostka::kbar(&mp, ell, &n)?,
                    "felder" => kostka::khat_felder(&mp, ell, &n)?,
                    "steinberg" => kostka::khat_steinberg(&mp, &n)?,
                    _ => kostka::khat(&mp, ell, &n)?,
                };
                Ok(Output::Poly(PolyOutput::new(&mp, &poly)))
            })?;
            Ok(0)
        }
        Command::Fuse { common, n, ungraded } => {
            let mp = build_model(common.p)?;
            let n = parse_vec(&n, (common.p - 1) as usize, "--n")?;
            let key = format!("fuse p={} n={:?} ungraded={ungraded}", common.p, n.0);
            with_cache(&common, &key, || {
                if ungraded {
                    let counts = fusion::decompose_power(&mp, &n)?;
                    Ok(Output::Counts(CountsOutput::new(&mp, &n, &counts)))
                } else {
                    let graded = fusion::graded_decomposition(&mp, &n)?;
                    Ok(Output::Graded(GradedOutput::new(&mp, &n, &graded)))
                }
            })?;
            Ok(0)
        }
        Command::Verify {
            common,
            suite,
            s,
            n,
            m,
            trunc,
            direction,
            steps,
            m_max,
        } => {
            let mp = build_model(common.p)?;
            let need = |v: Option<i64>, what: &str| {
                v.ok_or_else(|| Error::Param(format!("suite {suite} requires {what}")))
            };
            let report = match suite.as_str() {
                "main-identity" => {
                    let n = parse_vec(
                        &n.ok_or_else(|| Error::Param("suite main-identity requires --n".into()))?,
                        (common.p - 1) as usize,
                        "--n",
                    )?;
                    verify::verify_main_identity(&mp, &n, need(trunc, "--trunc")?)?
                }
                "fermionic-theta" => verify::verify_fermionic_vs_theta(
                    &mp,
                    need(s, "--s")?,
                    need(trunc, "--trunc")?,
                )?,
                "supernomial" => {
                    let m = parse_vec(
                        &m.ok_or_else(|| Error::Param("suite supernomial requires --m".into()))?,
                        (common.p - 1) as usize,
                        "--m",
                    )?;
                    verify::verify_supernomial_identity(&mp, &m)?
                }
                "felder" => {
                    let m = parse_vec(
                        &m.ok_or_else(|| Error::Param("suite felder requires --m".into()))?,
                        (common.p - 1) as usize,
                        "--m",
                    )?;
                    verify::verify_felder(&mp, need(s, "--s")?, &m)?
                }
                "limits" => verify::verify_limits(
                    &mp,
                    need(s, "--s")?,
                    direction.unwrap_or(0),
                    steps.unwrap_or(2),
                    need(trunc, "--trunc")?,
                )?,
                "ising" => {
                    if common.p != 4 {
                        return Err(Error::Param("the ising suite is specific to p = 4".into()));
                    }
                    verify::verify_ising(m_max.unwrap_or(8))?
                }
                other => {
                    return Err(Error::Param(format!(
                        "unknown suite {other:?}; expected main-identity, fermionic-theta, \
                         supernomial, felder, limits or ising"
                    )))
                }
            };
            emit(&common, &Output::Report(report.clone()))?;
            if !report.passed() && report.tier == Tier::Proven {
                return Ok(1);
            }
            Ok(0)
        }
    }
}

// Output payloads. JSON rendering is canonical: fixed field order, terms
// sorted by (qnum, z), coefficients as decimal strings.

#[derive(Serialize)]
struct SeriesOutput {
    kind: &'static str,
    p: i64,
    denom: i64,
    min: i64,
    trunc: i64,
    terms: Vec<TermRecord>,
}

impl SeriesOutput {
    fn new(mp: &ModelParams, series: &QSeries) -> Self {
        SeriesOutput {
            kind: "series",
            p: mp.p(),
            denom: series.denom(),
            min: series.min_exp(),
            trunc: series.trunc(),
            terms: series.to_records(),
        }
    }
}

#[derive(Serialize)]
struct PolyOutput {
    kind: &'static str,
    p: i64,
    denom: i64,
    terms: Vec<TermRecord>,
}

impl PolyOutput {
    fn new(mp: &ModelParams, poly: &QPoly) -> Self {
        PolyOutput {
            kind: "poly",
            p: mp.p(),
            denom: poly.denom(),
            terms: poly.to_records(),
        }
    }
}

#[derive(Serialize)]
struct GradedEntry {
    object: String,
    terms: Vec<TermRecord>,
}

#[derive(Serialize)]
struct GradedOutput {
    kind: &'static str,
    p: i64,
    denom: i64,
    n: Vec<u32>,
    entries: Vec<GradedEntry>,
}

impl GradedOutput {
    fn new(mp: &ModelParams, n: &NVector, graded: &fusion::GradedDecomposition) -> Self {
        GradedOutput {
            kind: "graded-decomposition",
            p: mp.p(),
            denom: mp.denom(),
            n: n.0.clone(),
            entries: graded
                .0
                .iter()
                .map(|(obj, poly)| GradedEntry {
                    object: obj.to_string(),
                    terms: poly.to_records(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct CountEntry {
    object: String,
    count: String,
}

#[derive(Serialize)]
struct CountsOutput {
    kind: &'static str,
    p: i64,
    n: Vec<u32>,
    entries: Vec<CountEntry>,
}

impl CountsOutput {
    fn new(mp: &ModelParams, n: &NVector, counts: &fusion::FusionVector) -> Self {
        CountsOutput {
            kind: "decomposition",
            p: mp.p(),
            n: n.0.clone(),
            entries: counts
                .0
                .iter()
                .map(|(obj, mult)| CountEntry {
                    object: obj.to_string(),
                    count: mult.to_string(),
                })
                .collect(),
        }
    }
}

enum Output {
    Series(SeriesOutput),
    Poly(PolyOutput),
    Graded(GradedOutput),
    Counts(CountsOutput),
    Report(VerificationReport),
}

impl Output {
    fn to_json(&self) -> String {
        let body = match self {
            Output::Series(v) => serde_json::to_string(v),
            Output::Poly(v) => serde_json::to_string(v),
            Output::Graded(v) => serde_json::to_string(v),
            Output::Counts(v) => serde_json::to_string(v),
            Output::Report(v) => serde_json::to_string(v),
        }
        .expect("serialization cannot fail");
        body + "\n"
    }

    fn to_text(&self) -> String {
        match self {
            Output::Series(v) => {
                let mut out = format!(
                    "# series, p = {}, exponents over {}, valid on [{}, {}) (q^{} .. q^{})\n",
                    v.p,
                    v.denom,
                    v.min,
                    v.trunc,
                    fraction(v.min, v.denom),
                    fraction(v.trunc, v.denom),
                );
                out += &render_terms(&v.terms, v.denom);
                out
            }
            Output::Poly(v) => {
                let mut out = format!("# polynomial, p = {}, exponents over {}\n", v.p, v.denom);
                out += &render_terms(&v.terms, v.denom);
                out
            }
            Output::Graded(v) => {
                let mut out = format!("# graded decomposition, p = {}, n = {:?}\n", v.p, v.n);
                for entry in &v.entries {
                    out += &format!("{}:\n", entry.object);
                    out += &render_terms(&entry.terms, v.denom);
                }
                out
            }
            Output::Counts(v) => {
                let mut out = format!("# decomposition, p = {}, n = {:?}\n", v.p, v.n);
                for entry in &v.entries {
                    out += &format!("{:<6} {}\n", entry.object, entry.count);
                }
                out
            }
            Output::Report(r) => {
                let mut out = format!(
                    "suite={} tier={:?} status={} elapsed={}ms\n",
                    r.suite, r.tier, r.status, r.elapsed_ms
                );
                for (k, vv) in &r.params {
                    out += &format!("  {k} = {vv}\n");
                }
                if let Some(d) = &r.first_discrepancy {
                    out += &format!(
                        "  first discrepancy at qnum={} z={}: lhs={} rhs={}\n",
                        d.qnum, d.z, d.lhs, d.rhs
                    );
                }
                out
            }
        }
    }
}

fn fraction(num: i64, denom: i64) -> String {
    let g = gcd(num.unsigned_abs(), denom.unsigned_abs()) as i64;
    let (n, d) = (num / g, denom / g);
    if d == 1 {
        format!("{n}")
    } else {
        format!("({n}/{d})")
    }
}

fn render_terms(terms: &[TermRecord], denom: i64) -> String {
    let mut rows: BTreeMap<i64, Vec<(i64, String)>> = BTreeMap::new();
    for t in terms {
        rows.entry(t.qnum).or_default().push((t.z, t.c.clone()));
    }
    let mut out = String::new();
    for (q, zs) in rows {
        let mut line = String::new();
        for (i, (z, c)) in zs.iter().enumerate() {
            if i > 0 {
                line += " + ";
            }
            match z {
                0 => line += c,
                1 if c == "1" => line += "z",
                -1 if c == "1" => line += "z^-1",
                _ if c == "1" => line += &format!("z^{z}"),
                _ => line += &format!("{c}*z^{z}"),
            }
        }
        out += &format!("{:<12} {}\n", format!("q^{}", fraction(q, denom)), line);
    }
    out
}

fn with_cache(
    common: &CommonArgs,
    key: &str,
    compute: impl FnOnce() -> Result<Output, Error>,
) -> Result<(), Error> {
    if common.format == "json" {
        if let Some(dir) = &common.cache_dir {
            let mut hasher = Sha256::new();
            hasher.update(env!("CARGO_PKG_VERSION").as_bytes());
            hasher.update(b"|");
            hasher.update(key.as_bytes());
            let digest = hasher.finalize();
            let name: String = digest[..16].iter().map(|b| format!("{b:02x}")).collect();
            let path = dir.join(format!("{name}.json"));
            if let Ok(bytes) = std::fs::read(&path) {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(&bytes).map_err(io_err)?;
                return Ok(());
            }
            let payload = compute()?.to_json();
            std::fs::create_dir_all(dir).map_err(io_err)?;
            std::fs::write(&path, payload.as_bytes()).map_err(io_err)?;
            print!("{payload}");
            return Ok(());
        }
    }
    emit(common, &compute()?)
}

fn emit(common: &CommonArgs, output: &Output) -> Result<(), Error> {
    if common.format == "json" {
        print!("{}", output.to_json());
    } else {
        print!("{}", output.to_text());
    }
    Ok(())
}

fn io_err(err: std::io::Error) -> Error {
    Error::Param(format!("io error: {err}"))
}
