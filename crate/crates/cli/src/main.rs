//! `blockdec`: validate, check and decompose persistence modules stored as JSON.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input
//! error, 3 decomposition left summands unsplit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use blockdec::blocks::BlockJson;
use blockdec::corpus::{random_block_sum, random_interval_sum};
use blockdec::decomp::{
    decompose_blocks, DecomposeOptions, Method, Outcome, DEFAULT_RETRIES, DEFAULT_TRIALS,
};
use blockdec::fixtures;
use blockdec::gridmod::{GridModule, GridShape, Point};
use blockdec::io::{
    read_module, residue_json, summands_json, write_module, Report, VerdictTag, ViolationJson,
};
use blockdec::koszul::{check_criterion, exactness_profile_with, CheckOptions, Verdict};
use blockdec::linalg::PrimeField;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCOMPLETE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "blockdec",
    version,
    about = "Block decomposition of multiparameter persistence modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every square commutes.
    Validate(Input),
    /// Decide whether the module is a direct sum of blocks.
    Check {
        #[command(flatten)]
        input: Input,
        /// Report the exactness profile for every cube dimension.
        #[arg(long)]
        profile: bool,
        /// Include the full homology of the witness cube.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Include wall-clock milliseconds in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Decompose into blocks, or report why that is impossible.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "auto", value_parser = parse_method)]
        method: Method,
        #[arg(long, env = "BLOCKDEC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Rebuild the sum of the blocks found and test it against the input.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Write a random scrambled sum of blocks or intervals.
    Gen(Gen),
    /// Write one of the bundled example modules.
    Fixture {
        /// One of ex37, ex38, claw-demo.
        name: String,
        #[arg(long, value_parser = parse_field)]
        field: Option<PrimeField>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Module file, or `-` for standard input.
    file: PathBuf,
    /// Read entries modulo this prime instead of the file's own.
    #[arg(long, value_parser = parse_field)]
    field: Option<PrimeField>,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "summands")]
struct Kind {
    /// Number of random blocks.
    #[arg(long)]
    blocks: Option<usize>,
    /// Number of random intervals.
    #[arg(long)]
    intervals: Option<usize>,
}

#[derive(Args)]
struct Gen {
    /// Grid sizes, comma separated, e.g. `3,3,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    shape: Vec<usize>,
    #[command(flatten)]
    kind: Kind,
    #[arg(long, env = "BLOCKDEC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_field)]
    field: Option<PrimeField>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the generated summands here.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Truth {
    Blocks(Vec<TruthBlock>),
    Intervals(Vec<Vec<Point>>),
}

#[derive(Serialize)]
struct TruthBlock {
    block: BlockJson,
    multiplicity: usize,
}

fn parse_field(s: &str) -> Result<PrimeField, String> {
    let p: u32 = s.parse().map_err(|e| format!("{e}"))?;
    PrimeField::new(p).map_err(|e| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: blockdec::Error| e.to_string())
}

/// A failure that maps to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn load(input: &Input) -> Result<GridModule, InputError> {
    let text = if input.file == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(&input.file)
            .map_err(|e| InputError(format!("{}: {e}", input.file.display())))?
    };
    Ok(read_module(&text, input.field)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), InputError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
        }
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn millis(start: Instant, enabled: bool) -> Option<f64> {
    enabled.then(|| start.elapsed().as_secs_f64() * 1e3)
}

/// Reports a commutativity failure if there is one.
fn invalid_report(m: &GridModule) -> Option<Report> {
    let v = m.validate().into_iter().next()?;
    let mut r = Report::with_verdict(VerdictTag::Invalid);
    r.violation = Some(ViolationJson::new(&v, m.field()));
    Some(r)
}

fn run(cli: Cli) -> Result<u8, InputError> {
    match cli.command {
        Command::Validate(input) => {
            let m = load(&input)?;
            let (report, code) = match invalid_report(&m) {
                Some(r) => (r, EXIT_NEGATIVE),
                None => (Report::with_verdict(VerdictTag::Valid), 0),
            };
            emit(None, &report.to_json())?;
            Ok(code)
        }
        Command::Check {
            input,
            profile,
            witness,
            jobs,
            timing,
        } => {
            let m = load(&input)?;
            if let Some(r) = invalid_report(&m) {
                emit(None, &r.to_json())?;
                return Ok(EXIT_INPUT);
            }
            let start = Instant::now();
            let opts = CheckOptions {
                jobs,
                ..Default::default()
            };
            let verdict = check_criterion(&m, &opts)?;
            let (mut report, code) = match verdict {
                Verdict::BlockDecomposable => {
                    (Report::with_verdict(VerdictTag::BlockDecomposable), 0)
                }
                Verdict::NotBlockDecomposable(mut w) => {
                    if !witness {
                        w.homology.clear();
                    }
                    let mut r = Report::with_verdict(VerdictTag::NotBlockDecomposable);
                    r.witness = Some(w);
                    (r, EXIT_NEGATIVE)
                }
            };
            if profile {
                report.profile = Some(exactness_profile_with(&m, &opts)?);
            }
            report.timing = millis(start, timing);
            emit(None, &report.to_json())?;
            Ok(code)
        }
        Command::Decompose {
            input,
            method,
            seed,
            trials,
            retries,
            jobs,
            verify,
            timing,
        } => {
            let m = load(&input)?;
            if let Some(r) = invalid_report(&m) {
                emit(None, &r.to_json())?;
                return Ok(EXIT_INPUT);
            }
            let start = Instant::now();
            let opts = DecomposeOptions {
                method,
                seed,
                trials,
                retries,
                jobs,
            };
            let (mut report, code) = match decompose_blocks(&m, &opts)? {
                Outcome::Decomposed(d) => {
                    if verify && !d.verify(&m, seed)? {
                        return Err(InputError(
                            "internal error: reassembled sum is not isomorphic to the input".into(),
                        ));
                    }
                    let mut r = Report::with_verdict(VerdictTag::BlockDecomposable);
                    r.method = Some(d.method);
                    r.decomposition = Some(summands_json(&d));
                    (r, 0)
                }
                Outcome::Failure(w) => {
                    let mut r = Report::with_verdict(VerdictTag::NotBlockDecomposable);
                    r.witness = Some(w);
                    (r, EXIT_NEGATIVE)
                }
                Outcome::Incomplete { partial, residue } => {
                    let mut r = Report::with_verdict(VerdictTag::Incomplete);
                    r.method = Some(partial.method);
                    r.decomposition = Some(summands_json(&partial));
                    r.residue = Some(residue_json(&residue));
                    (r, EXIT_INCOMPLETE)
                }
            };
            report.timing = millis(start, timing);
            emit(None, &report.to_json())?;
            Ok(code)
        }
        Command::Gen(g) => {
            let shape = GridShape::new(g.shape)?;
            let field = g.field.unwrap_or_default();
            let (m, truth) = match (g.kind.blocks, g.kind.intervals) {
                (Some(n), _) => {
                    let (m, t) = random_block_sum(&shape, n, g.seed, field)?;
                    let t = t
                        .into_iter()
                        .map(|(b, k)| TruthBlock {
                            block: b.to_json(),
                            multiplicity: k,
                        })
                        .collect();
                    (m, Truth::Blocks(t))
                }
                (None, Some(n)) => {
                    let (m, sets) = random_interval_sum(&shape, n, g.seed, field)?;
                    (
                        m,
                        Truth::Intervals(sets.iter().map(|s| s.points()).collect()),
                    )
                }
                (None, None) => unreachable!("clap requires one of --blocks, --intervals"),
            };
            emit(g.out.as_deref(), &write_module(&m))?;
            if let Some(path) = g.truth {
                let mut text = serde_json::to_string_pretty(&truth)?;
                text.push('\n');
                emit(Some(&path), &text)?;
            }
            Ok(0)
        }
        Command::Fixture { name, field, out } => {
            let m = fixtures::by_name(&name, field.unwrap_or_default())?;
            emit(out.as_deref(), &write_module(&m))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("blockdec: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
