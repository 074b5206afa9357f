//! The `fracpow` command line, as a library so tests can drive it in-process.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use fracpow::miner::{conjecture_structure_with, generalize_pair, render_array, rho_report, MinerConfig};
use fracpow::symbolic::prover::{sym_verify_free, ProverOptions};
use fracpow::symbolic::{conj4r_morphism, RationalInterval, SymbolicMorphism, Q};
use fracpow::verifier::{
    locating_length_explicit, verify_free_explicit, verify_lex_least, verify_transient_free,
    AnchorHint, Status, VerifyOptions,
};
use fracpow::{catalog, find_forbidden_factor, generate_lexleast, AvoidMode, Error, ExplicitMorphism, Fraction, Word};
use serde_json::{json, Map};

pub const EXIT_USAGE: i32 = 64;

/// Jobs projected to run longer than this need --deep.
const DEEP_SECONDS: f64 = 600.0;
/// Rough cost of scanning one window, calibrated on the large sporadic cases.
const NANOS_PER_WINDOW: f64 = 100.0;

#[derive(Parser, Debug)]
#[command(name = "fracpow", version, about = "Words avoiding fractional powers and the morphisms that generate them")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prefix of the lexicographically least word avoiding a/b-powers.
    Generate {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        length: usize,
        /// exact, geq or gt
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Search a word for a forbidden power.
    Check {
        #[arg(long)]
        word: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value = "exact")]
        mode: String,
    },
    /// Verify an explicit morphism: freeness, and optionally leastness.
    Verify {
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        lex_least: bool,
        /// Largest m searched for leastness witnesses.
        #[arg(long)]
        cap: Option<usize>,
        /// Allow jobs projected to take more than ten minutes.
        #[arg(long)]
        deep: bool,
        /// Scan windows only up to this m (result is then inconclusive).
        #[arg(long)]
        max_m: Option<usize>,
        /// POSITION:LETTERS:POWER, e.g. 75018:1:18
        #[arg(long)]
        anchor: Option<String>,
    },
    /// Symbolic proof of freeness over an interval of a/b.
    Prove {
        #[arg(long)]
        symbolic: String,
        #[arg(long)]
        interval: Option<String>,
        #[arg(long, default_value_t = 10)]
        candidate_bound: i64,
        /// Skip gcd-violating points when searching for a locating length.
        #[arg(long)]
        respect_gcd: bool,
        #[arg(long)]
        json: bool,
    },
    /// Conjecture the morphism structure of a prefix.
    Mine {
        #[arg(long)]
        word: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        k: Option<usize>,
        /// Print this many rows of width k.
        #[arg(long)]
        array: Option<usize>,
        /// Write the conjectured morphism here.
        #[arg(long)]
        out: Option<String>,
    },
    /// Symbolic family through two explicit morphisms.
    Generalize {
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        /// Rational of the first morphism, if its file does not record one.
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        f2: Option<String>,
    },
    /// Explicit morphism of a symbolic family at a/b.
    Instantiate {
        #[arg(long)]
        symbolic: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
    /// The 4r-letter family member for r.
    Conj4r {
        #[arg(long)]
        r: i64,
    },
}

struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::OutOfInterval(_)
            | Error::GcdViolation(_)
            | Error::ExceptionRational(_)
            | Error::HypothesisViolation(_)
            | Error::NotProlongable(_) => 3,
            Error::NoLocatingLength(_) | Error::NoCandidate | Error::Inconsistent(_) => 2,
            _ => EXIT_USAGE,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

/// A file on disk, or else a bundled catalog entry of that name.
fn read_source(path: &str, bundled: fn(&str) -> Option<&'static str>) -> Result<String, Fail> {
    if Path::new(path).exists() {
        return fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")));
    }
    let stem = path.rsplit('/').next().unwrap_or(path).trim_end_matches(".json");
    bundled(stem)
        .map(str::to_string)
        .ok_or_else(|| usage(format!("{path}: no such file or catalog entry")))
}

fn fraction(a: u32, b: u32) -> Result<Fraction, Fail> {
    Fraction::new(a, b).map_err(|e| usage(e.to_string()))
}

fn mode(s: &str) -> Result<AvoidMode, Fail> {
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn read_word(path: &str) -> Result<Word, Fail> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    let t = text.trim();
    if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit()) {
        return Ok(Word::from_digits(t));
    }
    t.parse().map_err(|e: Error| usage(format!("{path}: {e}")))
}

fn parse_anchor(s: &str) -> Result<AnchorHint, Fail> {
    let bad = || usage(format!("--anchor {s:?}: expected POSITION:LETTERS:POWER"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let position = parts[0].parse().map_err(|_| bad())?;
    let prefix = parts[1]
        .split(',')
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| bad()))
        .collect::<Result<Vec<u32>, Fail>>()?;
    let image_power = parts[2].parse().map_err(|_| bad())?;
    Ok(AnchorHint {
        position,
        prefix,
        image_power,
    })
}

/// Windows the freeness check would scan: k·m_max for the images, plus
/// |v|·m′ for a transient (m′ bounded by the same formula on |v| + k).
fn projected_seconds(m: &ExplicitMorphism, f: Fraction) -> Option<(f64, usize)> {
    if !f.in_unit_interval() {
        return Some((0.0, 0));
    }
    let ell = locating_length_explicit(m).ok()?.ell;
    let m_max = fracpow::verifier::explicit_m_max(f, ell);
    let mut windows = (m.k * m_max) as f64;
    if let Some(v) = &m.transient {
        let m2 = fracpow::verifier::explicit_m_max(f, v.len() + m.k);
        windows += (v.len() * m2) as f64;
    }
    Some((windows * NANOS_PER_WINDOW * 1e-9, windows as usize))
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Fail> {
    let io = |e: std::io::Error| Fail(EXIT_USAGE, e.to_string());
    match cli.command {
        Command::Generate {
            a,
            b,
            length,
            mode: md,
            out: path,
        } => {
            let w = generate_lexleast(fraction(a, b)?, length, mode(&md)?);
            match path {
                Some(p) => fs::write(&p, format!("{w}\n")).map_err(io)?,
                None => writeln!(out, "{w}").map_err(io)?,
            }
            Ok(0)
        }
        Command::Check { word, a, b, mode: md } => {
            let w = read_word(&word)?;
            let f = fraction(a, b)?;
            match find_forbidden_factor(&w, f, mode(&md)?) {
                None => {
                    writeln!(out, "no forbidden factor in {} letters", w.len()).map_err(io)?;
                    Ok(0)
                }
                Some((start, len, p)) => {
                    writeln!(out, "forbidden factor at {start}, length {len}, period {p}").map_err(io)?;
                    Ok(1)
                }
            }
        }
        Command::Verify {
            morphism,
            a,
            b,
            lex_least,
            cap,
            deep,
            max_m,
            anchor,
        } => {
            let text = read_source(&morphism, catalog::explicit_source)?;
            let (m, _) = ExplicitMorphism::parse(&text)?;
            let f = fraction(a, b)?;
            let opts = VerifyOptions {
                max_m,
                cap,
                anchor: anchor.as_deref().map(parse_anchor).transpose()?,
                anchor_check_length: None,
            };
            if max_m.is_none() && !deep {
                if let Some((secs, windows)) = projected_seconds(&m, f) {
                    if secs > DEEP_SECONDS {
                        writeln!(
                            err,
                            "projected {windows} windows, about {secs:.0} s; rerun with --deep or --max-m"
                        )
                        .map_err(io)?;
                        return Ok(Status::Inconclusive.exit_code());
                    }
                }
            }
            let report = if m.transient.is_some() {
                verify_transient_free(&m, f, &opts)
            } else {
                verify_free_explicit(&m, f, &opts)
            };
            write!(out, "freeness: {report}").map_err(io)?;
            let mut status = report.status;
            if lex_least {
                let l = verify_lex_least(&m, f, cap);
                write!(out, "leastness: {l}").map_err(io)?;
                status = status.and(l.status);
            }
            writeln!(out, "status: {status}").map_err(io)?;
            Ok(status.exit_code())
        }
        Command::Prove {
            symbolic,
            interval,
            candidate_bound,
            respect_gcd,
            json,
        } => {
            let text = read_source(&symbolic, catalog::symbolic_source)?;
            let m = SymbolicMorphism::parse(&text)?;
            let i: RationalInterval = match interval {
                Some(s) => s.parse().map_err(|e: Error| usage(e.to_string()))?,
                None => m.interval.clone(),
            };
            let unit = |x: Q| x >= Q::from_integer(1) && x <= Q::from_integer(2);
            if !(unit(i.lower) && unit(i.upper) && i.lower < i.upper) {
                return Err(usage(format!("--interval {i}: must lie within [1..2] and be nonempty")));
            }
            if candidate_bound < 1 {
                return Err(usage("--candidate-bound must be at least 1"));
            }
            let mut opts = ProverOptions {
                candidate_bound,
                locating_respects_gcd: respect_gcd,
                ..ProverOptions::default()
            };
            let mut proof = sym_verify_free(&m, &i, &opts);
            if proof.locating.is_none() && !respect_gcd && !m.gcd.is_empty() {
                opts.locating_respects_gcd = true;
                let retry = sym_verify_free(&m, &i, &opts);
                if retry.locating.is_some() {
                    proof = retry;
                    proof
                        .notes
                        .push("locating length found after skipping points outside the gcd condition".into());
                }
            }
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&proof.to_json()).expect("json")).map_err(io)?;
            } else {
                write!(out, "{proof}").map_err(io)?;
            }
            Ok(proof.status.exit_code())
        }
        Command::Mine {
            word,
            a,
            b,
            k,
            array,
            out: path,
        } => {
            let w = read_word(&word)?;
            let f = fraction(a, b)?;
            let report = rho_report(&w, f);
            for c in &report.k_candidates {
                writeln!(out, "k candidate {} ({}): {}", c.k, c.method, c.evidence).map_err(io)?;
            }
            let conj = match k {
                Some(_) => conjecture_structure_with(&w, f, k, MinerConfig::default()).map_err(Fail::from),
                None => report
                    .conjecture
                    .clone()
                    .ok_or_else(|| Fail(2, report.error.clone().unwrap_or_default())),
            };
            let catalog_line = if report.catalog.is_empty() {
                "none".to_string()
            } else {
                report.catalog.join(", ")
            };
            let c = match conj {
                Ok(c) => c,
                Err(Fail(code, msg)) => {
                    writeln!(out, "catalog: {catalog_line}").map_err(io)?;
                    writeln!(err, "{msg}").map_err(io)?;
                    return Ok(code);
                }
            };
            write!(out, "{c}").map_err(io)?;
            writeln!(out, "catalog: {catalog_line}").map_err(io)?;
            if let Some(rows) = array {
                write!(out, "{}", render_array(&w, c.k, rows)).map_err(io)?;
            }
            if let (Some(p), Some(m)) = (path, &c.morphism) {
                let mut extra = Map::new();
                extra.insert("fraction".into(), json!(f.to_string()));
                let text = serde_json::to_string_pretty(&m.to_json(&extra)).expect("json");
                fs::write(&p, text + "\n").map_err(io)?;
            }
            Ok(if c.morphism.is_some() { 0 } else { 2 })
        }
        Command::Generalize { m1, m2, f1, f2 } => {
            let load = |path: &str, f: Option<String>| -> Result<(ExplicitMorphism, Fraction), Fail> {
                let text = read_source(path, catalog::explicit_source)?;
                let (m, extra) = ExplicitMorphism::parse(&text)?;
                let s = f
                    .or_else(|| extra.get("fraction").and_then(|v| v.as_str()).map(str::to_string))
                    .ok_or_else(|| usage(format!("{path}: no fraction recorded; pass --f1/--f2")))?;
                let f: Fraction = s.parse().map_err(|e: Error| usage(e.to_string()))?;
                Ok((m, f))
            };
            let (x, fx) = load(&m1, f1)?;
            let (y, fy) = load(&m2, f2)?;
            match generalize_pair(&x, fx, &y, fy) {
                Some(g) => {
                    writeln!(out, "{g}").map_err(io)?;
                    writeln!(out, "{}", serde_json::to_string_pretty(&g.to_json()).expect("json")).map_err(io)?;
                    Ok(0)
                }
                None => {
                    writeln!(out, "no integral family through {fx} and {fy}").map_err(io)?;
                    Ok(2)
                }
            }
        }
        Command::Instantiate { symbolic, a, b } => {
            let text = read_source(&symbolic, catalog::symbolic_source)?;
            let m = SymbolicMorphism::parse(&text)?;
            let f = fraction(a, b)?;
            let e = m.instantiate(f)?;
            writeln!(out, "{e}").map_err(io)?;
            let mut extra = Map::new();
            extra.insert("fraction".into(), json!(f.to_string()));
            writeln!(out, "{}", serde_json::to_string_pretty(&e.to_json(&extra)).expect("json")).map_err(io)?;
            Ok(0)
        }
        Command::Conj4r { r } => {
            let m = conj4r_morphism(r).map_err(|e| usage(e.to_string()))?;
            writeln!(out, "{m}").map_err(io)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&m.to_json()).expect("json")).map_err(io)?;
            Ok(0)
        }
    }
}

/// Parse `args` (program name first) and run the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            let _ = writeln!(err, "--jobs must be at least 1");
            return EXIT_USAGE;
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}
