//! Command-line front end. Exit codes: 0 all checks pass, 1 verification
//! mismatch or other failure, 2 usage error, 3 capacity exceeded.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::appendix_suite;
use crate::csscode::{CssCode, Distance, ExportFormat, Provenance};
use crate::diagram::{braid_closure, random_rmove_pair, Family, PlanarDiagram, RMove};
use crate::families::{verify_family, FamilySpec};
use crate::homalg::{min_homology_weight, DistanceMode, DEFAULT_BUDGET, DEFAULT_W_MAX};
use crate::khovanov::{build_complex, export_complex, homology, LabelBasis};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "khovcss", version, about = "CSS codes from Khovanov complexes over F2")]
pub struct Cli {
    /// Worker threads (falls back to KHOVCSS_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print failures as a JSON object on stderr.
    #[arg(long, global = true)]
    pub json_errors: bool,
    /// More progress output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a diagram as JSON.
    Gen(GenArgs),
    /// Build a complex; write dimensions, generators and differentials.
    Complex(ComplexArgs),
    /// Slice a complex into H_X, H_Z files.
    Css(CssArgs),
    /// Print [[n;k;d]] of a slice.
    Params(ParamsArgs),
    /// Compare a family against its closed forms, one JSON line per instance.
    Verify(VerifyArgs),
    /// Run the growth-rate and inequality checks.
    Asymptotics(AsymptoticsArgs),
    /// Minimum weights of random diagram pairs related by one move.
    Weights(WeightsArgs),
}

#[derive(Debug, Args, Clone)]
pub struct DiagramArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long)]
    pub l: Option<usize>,
    /// Diagram JSON file as written by `gen`.
    #[arg(long, conflicts_with_all = ["family", "braid"])]
    pub diagram: Option<PathBuf>,
    /// Braid word, comma separated signed generators, e.g. `1,1,-2`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "family")]
    pub braid: Option<String>,
    #[arg(long, requires = "braid")]
    pub strands: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct ComplexOpts {
    /// Use the unreduced complex.
    #[arg(long)]
    pub unreduced: bool,
    #[arg(long, default_value = "pm", value_parser = parse_basis)]
    pub basis: LabelBasis,
}

#[derive(Debug, Args, Clone)]
pub struct DistanceArgs {
    #[arg(long, value_enum, default_value_t = DistanceKind::Exact)]
    pub distance: DistanceKind,
    /// Search budget, log2 of the candidate count.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u32,
    /// Weight cap in bounded mode.
    #[arg(long, default_value_t = DEFAULT_W_MAX)]
    pub w_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistanceKind {
    Exact,
    Bounded,
}

impl DistanceArgs {
    #[must_use]
    pub fn mode(&self) -> DistanceMode {
        match self.distance {
            DistanceKind::Exact => DistanceMode::Exact { budget: self.budget },
            DistanceKind::Bounded => DistanceMode::Bounded { w_max: self.w_max },
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub diagram: DiagramArgs,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComplexArgs {
    #[command(flatten)]
    pub diagram: DiagramArgs,
    #[command(flatten)]
    pub opts: ComplexOpts,
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value = "complex")]
    pub stem: String,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub diagram: DiagramArgs,
    /// Slice degree (torus `r`; defaults to `l` for the other families).
    #[arg(long, alias = "degree")]
    pub r: Option<usize>,
    #[command(flatten)]
    pub opts: ComplexOpts,
}

#[derive(Debug, Args)]
pub struct CssArgs {
    #[command(flatten)]
    pub slice: SliceArgs,
    #[arg(long, default_value = "alist", value_parser = parse_format)]
    pub format: ExportFormat,
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value = "code")]
    pub stem: String,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub slice: SliceArgs,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// Print the full record as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// A single `l` or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    pub l: (usize, usize),
    #[command(flatten)]
    pub distance: DistanceArgs,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    #[arg(long, default_value_t = 200)]
    pub legendre_max: usize,
    #[arg(long, default_value_t = 2000)]
    pub best_max: usize,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long, value_parser = parse_rmove)]
    pub rmove: RMove,
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub max_crossings: usize,
    #[command(flatten)]
    pub distance: DistanceArgs,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_basis(s: &str) -> std::result::Result<LabelBasis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<ExportFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rmove(s: &str) -> std::result::Result<RMove, String> {
    match s {
        "r1p" | "r1+" => Ok(RMove::R1Positive),
        "r1n" | "r1-" => Ok(RMove::R1Negative),
        "r2" => Ok(RMove::R2),
        "r3" => Ok(RMove::R3),
        _ => Err(format!("unknown move `{s}` (r1p, r1n, r2, r3)")),
    }
}

/// `a` or `a..b` (inclusive).
pub fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Capacity(_) => (3, "capacity"),
            Error::Precondition(_)
            | Error::OutOfRange(_)
            | Error::UnsupportedFormat(_)
            | Error::Parse(_)
            | Error::EmptyCode(_) => (2, "usage"),
            Error::Structural(_) => (2, "structural"),
            Error::Io(_) => (1, "io"),
            _ => (1, "internal"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "usage", message: msg.into() }
}

type CliResult = std::result::Result<u8, Failure>;

fn load_diagram(a: &DiagramArgs) -> std::result::Result<(PlanarDiagram, Option<Family>, Option<usize>), Failure> {
    if let Some(path) = &a.diagram {
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        let d: PlanarDiagram = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return Ok((d, None, None));
    }
    if let Some(word) = &a.braid {
        let word: Vec<i32> = word
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<i32>().map_err(|e| usage(format!("braid letter `{t}`: {e}"))))
            .collect::<std::result::Result<_, _>>()?;
        let strands =
            a.strands.unwrap_or_else(|| word.iter().map(|x| x.unsigned_abs() as usize + 1).max().unwrap_or(1));
        return Ok((braid_closure(strands, &word)?, None, None));
    }
    match (a.family, a.l) {
        (Some(f), Some(l)) => Ok((crate::diagram::gen_family(f, l)?, Some(f), Some(l))),
        _ => Err(usage("select a diagram with --family and --l, --braid, or --diagram")),
    }
}

fn slice_code(s: &SliceArgs) -> std::result::Result<CssCode, Failure> {
    let (d, family, l) = load_diagram(&s.diagram)?;
    let degree = match (family, l) {
        (Some(f), Some(l)) => FamilySpec::new(f, l, s.r)?.degree(),
        _ => s.r.ok_or_else(|| usage("--r is required for this diagram"))?,
    };
    let reduced = !s.opts.unreduced;
    if reduced && !d.is_pointed() {
        return Err(usage("the reduced complex needs a pointed diagram; pass --unreduced"));
    }
    let c = build_complex(&d, reduced, s.opts.basis)?;
    let prov = Provenance {
        diagram: match (family, l) {
            (Some(f), Some(l)) => format!("{f}(l={l})"),
            _ => format!("{} crossings", d.n_crossings()),
        },
        family,
        l,
        degree: degree as i32,
        reduced,
        basis: s.opts.basis,
    };
    Ok(CssCode::from_complex_slice(&c, degree as i32, Some(prov))?)
}

fn emit(out: &mut impl Write, line: impl std::fmt::Display) -> std::result::Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| Failure::from(Error::from(e)))
}

fn json<T: Serialize>(v: &T) -> std::result::Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure::from(Error::from(e)))
}

fn cmd_gen(a: &GenArgs, out: &mut impl Write) -> CliResult {
    let (d, _, _) = load_diagram(&a.diagram)?;
    let text = serde_json::to_string_pretty(&d).map_err(Error::from)?;
    match &a.out {
        Some(p) => std::fs::write(p, text + "\n").map_err(Error::from)?,
        None => emit(out, text)?,
    }
    Ok(0)
}

fn cmd_complex(a: &ComplexArgs, out: &mut impl Write) -> CliResult {
    let (d, _, _) = load_diagram(&a.diagram)?;
    let reduced = !a.opts.unreduced;
    let c = build_complex(&d, reduced, a.opts.basis)?;
    let files = export_complex(&c, reduced, a.opts.basis, &a.out, &a.stem)?;
    emit(out, json(&serde_json::json!({ "min_degree": c.min_degree(), "dims": c.dims(), "files": files }))?)?;
    Ok(0)
}

fn cmd_css(a: &CssArgs, out: &mut impl Write) -> CliResult {
    let code = slice_code(&a.slice)?;
    let files = code.write_files(a.format, &a.out, &a.stem)?;
    for f in files {
        emit(out, f.display())?;
    }
    emit(out, format!("n = {}, k = {}", code.n(), code.k()))?;
    Ok(0)
}

fn cmd_params(a: &ParamsArgs, out: &mut impl Write) -> CliResult {
    let code = slice_code(&a.slice)?;
    let p = code.params(a.distance.mode())?;
    if a.json {
        emit(out, json(&p)?)?;
    } else {
        emit(out, &p)?;
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, out: &mut impl Write) -> CliResult {
    let ls: Vec<usize> = (a.l.0..=a.l.1).collect();
    let records = verify_family(a.family, &ls, a.distance.mode())?;
    let mut all = true;
    for r in &records {
        emit(out, json(r)?)?;
        all &= r.pass;
    }
    emit(
        out,
        format!(
            "{:<8} {:>3} {:>3} {:>24} {:>24} {:>6}",
            "family", "l", "r", "expected [[n;k;d]]", "computed [[n;k;d]]", "pass"
        ),
    )?;
    for r in &records {
        let exp = format!("[[{};{};{}]]", r.expected.n, r.expected.k, r.expected.d);
        let got = format!("[[{};{};{}]]{}", r.n, r.k, r.d, if r.d_exact { "" } else { "~" });
        emit(out, format!("{:<8} {:>3} {:>3} {exp:>24} {got:>24} {:>6}", r.family.to_string(), r.l, r.r, r.pass))?;
        for note in &r.notes {
            emit(out, format!("  note: {note}"))?;
        }
    }
    Ok(u8::from(!all))
}

fn cmd_asymptotics(a: &AsymptoticsArgs, out: &mut impl Write) -> CliResult {
    let rep = appendix_suite(a.legendre_max, a.best_max)?;
    emit(out, json(&rep)?)?;
    Ok(u8::from(!rep.pass))
}

#[derive(Serialize)]
struct WeightSide {
    crossings: usize,
    homology: Vec<usize>,
    weights: Vec<Option<Distance>>,
}

fn weight_side(d: &PlanarDiagram, mode: DistanceMode) -> Result<WeightSide> {
    let c = build_complex(d, true, LabelBasis::Pm)?;
    let h = homology(d, true)?;
    let weights = c
        .degrees()
        .map(
            |i| if h.h(i) == 0 { Ok(None) } else { min_homology_weight(&c, i, mode).map(|w| Some(Distance::from(&w))) },
        )
        .collect::<Result<_>>()?;
    Ok(WeightSide { crossings: d.n_crossings(), homology: c.degrees().map(|i| h.h(i)).collect(), weights })
}

fn cmd_weights(a: &WeightsArgs, out: &mut impl Write) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for t in 0..a.count {
        let (before, after) = random_rmove_pair(&mut rng, a.rmove, a.max_crossings)?;
        let mode = a.distance.mode();
        let line = serde_json::json!({
            "sample": t,
            "move": a.rmove,
            "shift": a.rmove.shift(),
            "before": weight_side(&before, mode)?,
            "after": weight_side(&after, mode)?,
        });
        emit(out, json(&line)?)?;
    }
    Ok(0)
}

fn configure_threads(cli: &Cli) -> std::result::Result<(), Failure> {
    let n = match cli.threads {
        Some(n) => Some(n),
        None => match std::env::var("KHOVCSS_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|e| usage(format!("KHOVCSS_THREADS=`{v}`: {e}")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(usage("thread count must be positive"));
        }
        // a pool already built by an earlier call in the same process is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs one parsed command, writing results to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut impl Write) -> u8 {
    let result = configure_threads(cli).and_then(|()| {
        if cli.verbose > 0 {
            eprintln!("khovcss: {:?}", cli.command);
        }
        match &cli.command {
            Command::Gen(a) => cmd_gen(a, out),
            Command::Complex(a) => cmd_complex(a, out),
            Command::Css(a) => cmd_css(a, out),
            Command::Params(a) => cmd_params(a, out),
            Command::Verify(a) => cmd_verify(a, out),
            Command::Asymptotics(a) => cmd_asymptotics(a, out),
            Command::Weights(a) => cmd_weights(a, out),
        }
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            if cli.json_errors {
                eprintln!("{}", serde_json::json!({ "error": f.kind, "message": f.message, "exit_code": f.code }));
            } else {
                eprintln!("khovcss: {}", f.message);
            }
            f.code
        }
    }
}

/// Entry point of the binary.
#[must_use]
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = run(&cli, &mut stdout.lock());
    ExitCode::from(code)
}
