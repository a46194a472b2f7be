//! The `toric` command line: subcommands over the kernel, a golden-corpus
//! runner and an SVG emitter.
//!
//! Exit codes: 0 computed (verdict true where there is one), 1 computed with
//! verdict false, 2 usage error or corrupt input, 3 resource cap, 4 internal
//! invariant violation or corpus/oracle mismatch.

pub mod corpus;
pub mod encode;
pub mod input;
pub mod payloads;
pub mod svg;
pub mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use toric_core::desing::{DesingOptions, STEP_CAP};
use toric_core::gstable::SUBSET_CAP;
use toric_core::{Cone, IntVector};

use payloads::Computed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Clone, Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVARIANT,
            message: message.into(),
        }
    }
}

impl From<toric_core::Error> for CliError {
    fn from(e: toric_core::Error) -> Self {
        let code = if e.is_resource_cap() {
            EXIT_CAP
        } else if e.is_invariant() || matches!(e, toric_core::Error::RayOutsideHilbertUnion(_)) {
            EXIT_INVARIANT
        } else {
            EXIT_USAGE
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Exact toric and polyhedral geometry")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Seed for randomized runs.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert basis of a cone.
    Hilbert { file: PathBuf },
    /// G-stability of a cone or fan, with witnesses.
    Gstable {
        file: PathBuf,
        /// Largest Hilbert basis for the subset condition.
        #[arg(long, default_value_t = SUBSET_CAP)]
        subset_cap: usize,
    },
    /// G-desingularization of a cone or fan by star subdivisions.
    Desing {
        file: PathBuf,
        /// Run even if the input is not G-stable.
        #[arg(long)]
        no_gstable_check: bool,
        #[arg(long, default_value_t = STEP_CAP)]
        step_cap: usize,
        /// Always subdivide at the first candidate instead of looking for a
        /// descending one.
        #[arg(long)]
        plain_choice: bool,
    },
    /// Normalized Nash blowup via the Newton polyhedron of the logarithmic
    /// Jacobian ideal.
    Nash {
        file: PathBuf,
        /// Characteristic, 0 or a prime.
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        /// Compare characteristic 0 with every relevant prime.
        #[arg(long, conflicts_with = "iterate")]
        compare_chars: bool,
        /// Blow up singular charts again.
        #[arg(long)]
        iterate: bool,
        #[arg(long, default_value_t = 4, requires = "iterate")]
        max_depth: usize,
    },
    /// Lattice polytope pipeline.
    Polytope {
        #[command(subcommand)]
        verb: PolytopeVerb,
    },
    /// Golden corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Hilbert basis and Γ_+ against bounded enumeration.
    Oracle {
        #[arg(required_unless_present = "random")]
        file: Option<PathBuf>,
        /// Check this many random 3D cones instead (uses --seed).
        #[arg(long, conflicts_with = "file")]
        random: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum PolytopeVerb {
    /// G-flatness of a polytope; with --hunt, scan the smooth families for
    /// a smooth polytope that is not G-flat.
    Gflat {
        #[arg(required_unless_present = "hunt")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        hunt: bool,
    },
    /// Smoothness: every vertex cone is unimodular.
    Smooth { file: PathBuf },
    /// Barycentric hull.
    Baryhull {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// One normalized Nash blowup of X(ω_P) in every relevant characteristic.
    Onestep { file: PathBuf },
    /// Each clause of the barycentric hull theorem.
    VerifyBaryhull { file: PathBuf },
    /// Generate a polytope family: simplex-product m n, cube d, triangle n,
    /// rhombus, hexagon, ksimplex k d, simplex d, staircase d.
    Gen {
        family: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<i64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// Re-derive every row (or one label, or one `label/id`).
    Run {
        row: Option<String>,
        /// Read the corpus from this directory instead of the bundled copy.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// List the rows.
    List {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// What a run printed and how it exited.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn digest(bytes: &[u8]) -> String {
    let hex: String = Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    format!("sha256:{hex}")
}

struct Done {
    input: Vec<u8>,
    result: Value,
    code: i32,
    /// Preformatted table output, when the generic one does not fit.
    table: Option<String>,
}

fn verdict_code(c: &Computed) -> i32 {
    match c.verdict {
        Some(false) => EXIT_FALSE,
        _ => EXIT_OK,
    }
}

fn done(input: Vec<u8>, c: Computed) -> Done {
    Done {
        input,
        code: verdict_code(&c),
        result: c.result,
        table: None,
    }
}

fn write_svg(path: &Path, svg: &str) -> Result<(), CliError> {
    std::fs::write(path, svg).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn random_3d_cone(r: &mut ChaCha8Rng) -> Cone {
    loop {
        let k = r.random_range(3..=4);
        let gens: Vec<IntVector> = (0..k)
            .map(|_| {
                IntVector::from(vec![
                    r.random_range(-3..=3),
                    r.random_range(-3..=3),
                    r.random_range(-3..=3),
                ])
            })
            .collect();
        if let Ok(c) = Cone::from_generators(3, gens) {
            if c.is_pointed() && c.is_full_dimensional() {
                return c;
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<Done, CliError> {
    match &cli.command {
        Command::Hilbert { file } => {
            let (bytes, i) = input::load(file)?;
            Ok(done(bytes, payloads::hilbert(&i)?))
        }
        Command::Gstable { file, subset_cap } => {
            let (bytes, i) = input::load(file)?;
            Ok(done(bytes, payloads::gstable(&i, *subset_cap)?))
        }
        Command::Desing {
            file,
            no_gstable_check,
            step_cap,
            plain_choice,
        } => {
            let (bytes, i) = input::load(file)?;
            let opts = DesingOptions {
                check_g_stable: !no_gstable_check,
                step_cap: *step_cap,
                seek_descent: !plain_choice,
            };
            Ok(done(bytes, payloads::desing(&i, opts)?))
        }
        Command::Nash {
            file,
            characteristic,
            compare_chars,
            iterate,
            max_depth,
        } => {
            let (bytes, i) = input::load(file)?;
            let x = i.variety()?;
            if *compare_chars {
                return Ok(done(bytes, payloads::compare(&x)?));
            }
            if *iterate {
                let c = payloads::iterate(&x, *characteristic, *max_depth)?;
                let code = if c.verdict.is_none() {
                    EXIT_CAP
                } else {
                    verdict_code(&c)
                };
                return Ok(Done {
                    input: bytes,
                    result: c.result,
                    code,
                    table: None,
                });
            }
            Ok(done(bytes, payloads::nash(&x, *characteristic)?))
        }
        Command::Polytope { verb } => polytope(verb),
        Command::Corpus { action } => corpus_action(action, cli.format),
        Command::Oracle { file, random } => {
            if let Some(n) = random {
                let mut r = ChaCha8Rng::seed_from_u64(cli.seed);
                let mut rows = Vec::new();
                let mut all = true;
                for _ in 0..*n {
                    let c = random_3d_cone(&mut r);
                    let o = payloads::oracle(&c)?;
                    all &= o.verdict == Some(true);
                    rows.push(json!({
                        "rays": o.result["cone"]["rays"].clone(),
                        "hilbert_agrees": o.result["hilbert_agrees"].clone(),
                        "gamma_plus_agrees": o.result["gamma_plus_agrees"].clone(),
                    }));
                }
                let result =
                    json!({ "seed": cli.seed.to_string(), "cones": rows, "all_agree": all });
                let code = if all { EXIT_OK } else { EXIT_INVARIANT };
                return Ok(Done {
                    input: format!("oracle --random {n} --seed {}", cli.seed).into_bytes(),
                    result,
                    code,
                    table: None,
                });
            }
            let file = file
                .as_ref()
                .expect("clap requires a file without --random");
            let (bytes, i) = input::load(file)?;
            let o = payloads::oracle(&i.cone()?)?;
            let code = if o.verdict == Some(true) {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            };
            Ok(Done {
                input: bytes,
                result: o.result,
                code,
                table: None,
            })
        }
    }
}

fn polytope(verb: &PolytopeVerb) -> Result<Done, CliError> {
    let load_p = |f: &Path| -> Result<(Vec<u8>, toric_core::polytopes::LatticePolytope), CliError> {
        let (bytes, i) = input::load(f)?;
        Ok((bytes, i.polytope()?))
    };
    match verb {
        PolytopeVerb::Gflat { hunt: true, .. } => {
            Ok(done(b"hunt".to_vec(), payloads::hunt_report()?))
        }
        PolytopeVerb::Gflat { file, .. } => {
            let (bytes, p) = load_p(
                file.as_deref()
                    .expect("clap requires a file without --hunt"),
            )?;
            Ok(done(bytes, payloads::gflat(&p)?))
        }
        PolytopeVerb::Smooth { file } => {
            let (bytes, p) = load_p(file)?;
            Ok(done(bytes, payloads::smooth(&p)?))
        }
        PolytopeVerb::Baryhull { file, svg } => {
            let (bytes, p) = load_p(file)?;
            let c = payloads::baryhull(&p)?;
            if let Some(path) = svg {
                write_svg(path, &svg::render(&p, true)?)?;
            }
            Ok(done(bytes, c))
        }
        PolytopeVerb::Onestep { file } => {
            let (bytes, p) = load_p(file)?;
            Ok(done(bytes, payloads::onestep(&p)?))
        }
        PolytopeVerb::VerifyBaryhull { file } => {
            let (bytes, p) = load_p(file)?;
            Ok(done(bytes, payloads::verify_baryhull(&p)?))
        }
        PolytopeVerb::Gen { family, args, svg } => {
            let i = input::family(family, args)?;
            let request = format!("gen {family} {args:?}").into_bytes();
            let result = match &i {
                input::Input::Polytope(p) => {
                    if let Some(path) = svg {
                        write_svg(path, &svg::render(p, false)?)?;
                    }
                    json!({
                        "family": family,
                        "polytope": encode::ivecs(p.vertices()),
                        "lattice_point_count": encode::count(p.lattice_points()?.len()),
                    })
                }
                input::Input::Product { m, n } => {
                    let ps = toric_core::polytopes::product_of_simplices(*m, *n)?;
                    json!({
                        "family": family,
                        "points": encode::ivecs(&ps.points),
                        "lattice_rank": encode::count(ps.lattice.rank()),
                        "coordinates": encode::ivecs(&ps.coordinates),
                        "cone": { "cone": encode::ivecs(ps.cone.rays()?), "role": "dual" },
                    })
                }
                input::Input::Staircase { d } => {
                    let t = toric_core::polytopes::cube_staircase_triangulation(*d)?;
                    json!({
                        "family": family,
                        "simplices": t.simplices.iter().map(encode::ivecs).collect::<Vec<_>>(),
                        "all_unimodular": t.all_unimodular,
                    })
                }
                _ => unreachable!("families produce polytopes, products or staircases"),
            };
            Ok(Done {
                input: request,
                result,
                code: EXIT_OK,
                table: None,
            })
        }
    }
}

fn corpus_action(action: &CorpusAction, format: Format) -> Result<Done, CliError> {
    let (CorpusAction::Run { dir, .. } | CorpusAction::List { dir }) = action;
    let docs = match dir {
        Some(d) => corpus::from_dir(d)?,
        None => corpus::bundled()?,
    };
    let input: Vec<u8> = docs.iter().flat_map(|d| d.bytes.iter().copied()).collect();
    match action {
        CorpusAction::List { .. } => {
            let rows: Vec<Value> = corpus::select(&docs, None)
                .iter()
                .map(|r| json!({ "row": r.name(), "check": r.check }))
                .collect();
            Ok(Done {
                input,
                result: json!({ "rows": rows }),
                code: EXIT_OK,
                table: None,
            })
        }
        CorpusAction::Run { row, .. } => {
            let rows = corpus::select(&docs, row.as_deref());
            if rows.is_empty() {
                return Err(CliError::usage(format!(
                    "no corpus row matches {:?}",
                    row.as_deref().unwrap_or("")
                )));
            }
            let outcomes: Vec<corpus::RowOutcome> =
                rows.iter().map(|r| corpus::run_row(r)).collect();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let result = json!({
                "rows": outcomes
                    .iter()
                    .map(|o| json!({
                        "row": o.name,
                        "check": o.check,
                        "status": if o.passed { "pass" } else { "fail" },
                        "diff": o.diff,
                    }))
                    .collect::<Vec<_>>(),
                "passed": encode::count(outcomes.len() - failed),
                "failed": encode::count(failed),
                "all_pass": failed == 0,
            });
            let table = (format == Format::Table).then(|| {
                let cells: Vec<Vec<String>> = outcomes
                    .iter()
                    .map(|o| {
                        let status = if o.passed {
                            "PASS".to_string()
                        } else {
                            format!("FAIL {}", Value::Array(o.diff.clone()))
                        };
                        vec![o.name.clone(), o.check.clone(), status]
                    })
                    .collect();
                let mut t = table::grid(&["row", "check", "status"], &cells);
                t.push_str(&format!(
                    "{} passed, {failed} failed\n",
                    outcomes.len() - failed
                ));
                t
            });
            let code = if failed == 0 { EXIT_OK } else { EXIT_INVARIANT };
            Ok(Done {
                input,
                result,
                code,
                table,
            })
        }
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli =
        match Cli::try_parse_from(std::iter::once("toric".to_string()).chain(args.iter().cloned()))
        {
            Ok(c) => c,
            Err(e) => {
                let text = e.render().to_string();
                return if e.use_stderr() {
                    Outcome {
                        stdout: String::new(),
                        stderr: text,
                        code: EXIT_USAGE,
                    }
                } else {
                    Outcome {
                        stdout: text,
                        stderr: String::new(),
                        code: EXIT_OK,
                    }
                };
            }
        };
    let start = Instant::now();
    let outcome = execute(&cli);
    let elapsed = start.elapsed();
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!(args));
    let (code, table, stderr) = match outcome {
        Ok(d) => {
            report.insert("input_digest".into(), Value::String(digest(&d.input)));
            report.insert("result".into(), d.result);
            (d.code, d.table, String::new())
        }
        Err(e) => {
            report.insert("error".into(), Value::String(e.message.clone()));
            report.insert("result".into(), Value::Null);
            (e.code, None, format!("error: {}\n", e.message))
        }
    };
    report.insert("exit_status".into(), json!(code));
    if cli.timing {
        report.insert("timing_ms".into(), json!(elapsed.as_millis() as u64));
    }
    let report = Value::Object(report);
    let stdout = match cli.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("JSON values serialize")
        ),
        Format::Table => table.unwrap_or_else(|| table::render(&report)),
    };
    Outcome {
        stdout,
        stderr,
        code,
    }
}
