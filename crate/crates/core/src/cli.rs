//! The `braidlab` command line.

use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::adjacency::{self, AdjacencyCertificate, Verdict};
use crate::braid::{fence_render, BraidWord};
use crate::cobordism::{self, DistanceResult};
use crate::error::Error;
use crate::exactmath::rational::ratio;
use crate::exactmath::{PiecewiseLinear, Rational};
use crate::invariants::{alexander_torus, upsilon_function_of, TorusKnotId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "braidlab", version, about = "Torus-knot invariants, cobordism distance and adjacency certificates")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genus, τ, υ and Alexander polynomial of T(p,q).
    Invariants {
        p: u64,
        q: u64,
        /// Use the mirror -T(p,q).
        #[arg(long)]
        mirror: bool,
    },
    /// The Υ function of T(p,q) on [0,2].
    Upsilon {
        p: u64,
        q: u64,
        #[arg(long)]
        mirror: bool,
        /// Print the exact segments (the default).
        #[arg(long, conflicts_with = "samples")]
        breakpoints: bool,
        /// Print Υ at N+1 equally spaced points of [0,2].
        #[arg(long, value_name = "N")]
        samples: Option<u32>,
    },
    /// Cobordism distance between two torus knots, e.g. `2,7 3,4` or `-2,3 U`.
    Distance {
        #[arg(allow_hyphen_values = true)]
        k: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
    },
    /// Build a subword-adjacency certificate.
    Adjacency {
        construction: Construction,
        #[arg(long)]
        m: Option<usize>,
        /// Grid only: the smaller link is T(n,m) inside T(a,b).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        /// Write the certificate here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate and print its verdict.
    Verify {
        #[arg(required_unless_present = "batch")]
        cert: Option<PathBuf>,
        /// Verify every *.json file in a directory, in parallel.
        #[arg(long, value_name = "DIR", conflicts_with = "cert")]
        batch: Option<PathBuf>,
    },
    /// Fence diagram of a positive braid literal such as `s:3 w:1,2,1`.
    Render { word: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Grid,
    Index3,
    Index4,
    Square,
    Staircase,
}

/// A failure that maps to a nonzero exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

struct Out<'a> {
    w: &'a mut dyn Write,
    json: bool,
    color: bool,
}

impl Out<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.w, "{}", s.as_ref());
    }

    fn json<T: Serialize>(&mut self, v: &T) {
        let s = serde_json::to_string_pretty(v).expect("output types serialize");
        self.line(s);
    }

    fn paint(&self, s: &str, good: bool) -> String {
        if !self.color {
            return s.to_string();
        }
        let code = if good { 32 } else { 31 };
        format!("\x1b[{code}m{s}\x1b[0m")
    }
}

fn knot(sign_mirror: bool, p: u64, q: u64) -> Result<TorusKnotId, Failure> {
    Ok(TorusKnotId::new(if sign_mirror { -1 } else { 1 }, p, q)?)
}

/// `-3t`, `-2 - t`, `0`, `1/2 - 3/2t`.
pub fn linear_expr(slope: &Rational, intercept: &Rational) -> String {
    let mut s = String::new();
    if !intercept.is_zero() || slope.is_zero() {
        s.push_str(&intercept.to_string());
    }
    if !slope.is_zero() {
        let mag = slope.abs();
        let coeff = if mag.is_one() { String::new() } else { mag.to_string() };
        match (s.is_empty(), slope.is_negative()) {
            (true, true) => s.push('-'),
            (true, false) => {}
            (false, true) => s.push_str(" - "),
            (false, false) => s.push_str(" + "),
        }
        s.push_str(&coeff);
        s.push('t');
    }
    s
}

fn print_profile(out: &mut Out, f: &PiecewiseLinear) {
    for seg in f.segments() {
        out.line(format!("[{}, {}]  {}", seg.from, seg.to, linear_expr(&seg.slope, &seg.intercept)));
    }
}

fn cmd_invariants(out: &mut Out, k: TorusKnotId) -> Result<(), Failure> {
    let alex = alexander_torus(k.p(), k.q())?;
    if out.json {
        out.json(&json!({
            "knot": k.to_string(),
            "genus": k.genus(),
            "tau": k.tau(),
            "upsilon": k.upsilon(),
            "alexander": alex,
        }));
    } else {
        out.line(k.to_string());
        out.line(format!("g={}", k.genus()));
        out.line(format!("τ={}", k.tau()));
        out.line(format!("υ={}", k.upsilon()));
        out.line(format!("Δ={alex}"));
    }
    Ok(())
}

fn cmd_upsilon(out: &mut Out, k: TorusKnotId, samples: Option<u32>) -> Result<(), Failure> {
    let f = upsilon_function_of(&k)?;
    match samples {
        None if out.json => out.json(&f),
        None => {
            out.line(format!("Υ of {k} on [0, 2]"));
            print_profile(out, &f);
        }
        Some(0) => return Err(Failure::Usage("--samples needs at least 1".into())),
        Some(n) => {
            let points: Vec<(Rational, Rational)> = (0..=n)
                .map(|i| {
                    let t = ratio(2 * i as i64, n as i64);
                    let v = f.eval(&t).expect("samples lie in [0, 2]");
                    (t, v)
                })
                .collect();
            if out.json {
                let rows: Vec<_> =
                    points.iter().map(|(t, v)| json!({"t": t.to_string(), "value": v.to_string()})).collect();
                out.json(&rows);
            } else {
                for (t, v) in points {
                    out.line(format!("{t}\t{v}"));
                }
            }
        }
    }
    Ok(())
}

fn print_distance(out: &mut Out, k: &TorusKnotId, t: &TorusKnotId, r: &DistanceResult) {
    if out.json {
        out.json(r);
        return;
    }
    out.line(format!("d({k}, {t}) = {}", r.distance));
    out.line(format!("τ gap: {}", r.tau_gap));
    out.line(format!("υ gap: {}", r.upsilon_gap));
    if !r.witness.is_empty() {
        out.line("witness:");
        for leg in &r.witness {
            out.line(format!("  {} -> {}  χ={} genus={}", leg.from, leg.to, leg.euler_characteristic, leg.genus));
        }
    }
}

fn cmd_distance(out: &mut Out, k: &str, t: &str) -> Result<(), Failure> {
    let k: TorusKnotId = k.parse()?;
    let t: TorusKnotId = t.parse()?;
    match cobordism::distance(&k, &t) {
        Ok(r) => {
            print_distance(out, &k, &t, &r);
            Ok(())
        }
        Err(e @ Error::OutOfCoveredRange(_)) => Err(Failure::Domain(format!(
            "{e}: lower bound max(|Δτ|, |Δυ|) = {}",
            cobordism::lower_bound(&k, &t)
        ))),
        Err(e) => Err(e.into()),
    }
}

fn require(v: Option<usize>, flag: &str, c: Construction) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{c:?} needs --{flag}").to_lowercase()))
}

fn build(c: Construction, m: Option<usize>, n: Option<usize>, a: Option<usize>, b: Option<usize>) -> Result<AdjacencyCertificate, Failure> {
    let cert = match c {
        Construction::Grid => adjacency::adj_grid(
            require(n, "n", c)?,
            require(m, "m", c)?,
            require(a, "a", c)?,
            require(b, "b", c)?,
        )?,
        Construction::Index3 => adjacency::adj_index3(require(m, "m", c)?)?,
        Construction::Index4 => adjacency::adj_index4(require(m, "m", c)?)?,
        Construction::Square => adjacency::adj_square(require(m, "m", c)?)?,
        Construction::Staircase => adjacency::adj_staircase(require(m, "m", c)?)?,
    };
    Ok(cert)
}

fn cmd_adjacency(out: &mut Out, cert: AdjacencyCertificate, path: Option<&Path>) -> Result<(), Failure> {
    let Some(path) = path else {
        out.line(cert.to_json());
        return Ok(());
    };
    fs::write(path, cert.to_json() + "\n").map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?;
    let summary = json!({
        "path": path.display().to_string(),
        "target": cert.target,
        "source": cert.source,
        "steps": cert.steps.len(),
        "deletions": cert.deletions(),
    });
    if out.json {
        out.json(&summary);
    } else {
        out.line(format!(
            "wrote {}: {} -> {}, {} steps, {} deletions",
            path.display(),
            cert.target,
            cert.source,
            cert.steps.len(),
            cert.deletions()
        ));
    }
    Ok(())
}

fn load(path: &Path) -> Result<AdjacencyCertificate, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    AdjacencyCertificate::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_verify(out: &mut Out, path: &Path) -> Result<(), Failure> {
    let cert = load(path).map_err(Failure::Domain)?;
    let v = adjacency::verify(&cert);
    if out.json {
        out.json(&v);
    } else {
        let s = v.to_string();
        out.line(out.paint(&s, v.is_valid()));
    }
    if v.is_valid() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_verify_batch(out: &mut Out, dir: &Path) -> Result<(), Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let results: Vec<(PathBuf, Result<Verdict, String>)> =
        files.into_par_iter().map(|p| (p.clone(), load(&p).map(|c| adjacency::verify(&c)))).collect();
    let all_valid = results.iter().all(|(_, r)| matches!(r, Ok(v) if v.is_valid()));
    let unreadable = results.iter().any(|(_, r)| r.is_err());
    if out.json {
        let rows: Vec<_> = results
            .iter()
            .map(|(p, r)| match r {
                Ok(v) => json!({"file": p.display().to_string(), "verdict": v}),
                Err(e) => json!({"file": p.display().to_string(), "error": e}),
            })
            .collect();
        out.json(&rows);
    } else {
        for (p, r) in &results {
            let (text, good) = match r {
                Ok(v) => (v.to_string(), v.is_valid()),
                Err(e) => (format!("error: {e}"), false),
            };
            let painted = out.paint(&text, good);
            out.line(format!("{}: {painted}", p.display()));
        }
    }
    match (all_valid, unreadable) {
        (true, _) => Ok(()),
        (false, true) => Err(Failure::Domain("some certificates could not be read".into())),
        (false, false) => Err(Failure::Verification),
    }
}

fn cmd_render(out: &mut Out, word: &str) -> Result<(), Failure> {
    let w: BraidWord = word.parse()?;
    let pic = fence_render(&w)?;
    if out.json {
        out.json(&json!({"word": w, "fence": pic}));
    } else {
        let _ = write!(out.w, "{pic}");
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut Out) -> Result<(), Failure> {
    match cli.command {
        Command::Invariants { p, q, mirror } => cmd_invariants(out, knot(mirror, p, q)?),
        Command::Upsilon { p, q, mirror, samples, .. } => cmd_upsilon(out, knot(mirror, p, q)?, samples),
        Command::Distance { k, t } => cmd_distance(out, &k, &t),
        Command::Adjacency { construction, m, n, a, b, out: path } => {
            let cert = build(construction, m, n, a, b)?;
            cmd_adjacency(out, cert, path.as_deref())
        }
        Command::Verify { cert: Some(path), .. } => cmd_verify(out, &path),
        Command::Verify { batch: Some(dir), .. } => cmd_verify_batch(out, &dir),
        Command::Verify { .. } => Err(Failure::Usage("verify needs a certificate path or --batch".into())),
        Command::Render { word } => cmd_render(out, &word),
    }
}

/// Parses `args` (including the program name) and runs the command; returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    let mut out = Out { w: stdout, json: cli.json, color };
    match dispatch(cli, &mut out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verification) => EXIT_VERIFY,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            EXIT_USAGE
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let color = stdout.is_terminal() && std::env::var_os("BRAIDLAB_NO_COLOR").is_none();
    let mut lock = stdout.lock();
    let mut err = std::io::stderr();
    run(std::env::args_os(), &mut lock, &mut err, color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::int;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let argv = std::iter::once("braidlab").chain(args.iter().copied());
        let code = run(argv, &mut o, &mut e, false);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn linear_expressions() {
        assert_eq!(linear_expr(&int(-3), &int(0)), "-3t");
        assert_eq!(linear_expr(&int(-1), &int(-2)), "-2 - t");
        assert_eq!(linear_expr(&int(0), &int(0)), "0");
        assert_eq!(linear_expr(&ratio(3, 2), &ratio(1, 2)), "1/2 + 3/2t");
    }

    #[test]
    fn invariants_output() {
        let (code, out, _) = run_str(&["invariants", "3", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("g=3\nτ=-3\nυ=-2\n"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["invariants", "2", "4"]).0, EXIT_DOMAIN);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["adjacency", "index3"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["distance", "3,4", "4,5"]).0, EXIT_DOMAIN);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn mirror_arguments_parse() {
        let (code, out, _) = run_str(&["distance", "-2,3", "2,3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("d(-T(2,3), T(2,3)) = 2"), "{out}");
    }

    #[test]
    fn samples_are_exact() {
        let (code, out, _) = run_str(&["upsilon", "2", "3", "--samples", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0\t0\n1/2\t-1/2\n1\t-1\n3/2\t-1/2\n2\t0\n");
    }
}
