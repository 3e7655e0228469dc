//! Command-line entry point wiring constructions, verification, bounds,
//! and search into reproducible commands with stable file formats.
//!
//! Execution errors print a one-line, prefix-tagged message on stderr
//! (`E-INPUT:`, `E-DOMAIN:`, `E-CAPACITY:`) and exit 1 (2 for capacity
//! refusals). Every command that writes an artifact also writes a run
//! manifest beside it; `repro` replays a manifest into a scratch directory
//! and compares output digests.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sumdist::bounds::{bound_rows_to_csv, BoundEvaluator};
use sumdist::constructions::{
    augment_base, conway_guy_base, lift_to_k, powers_of_two, tilde_sigma, AugmentMode, BaseSequence,
};
use sumdist::model::{parse_bigint, parse_biguint, parse_rational, Sequence};
use sumdist::search::{exact_min_m, random_construct, ExactConfig, RandomConfig};
use sumdist::verifier::{verify, Engine, PairConstraint, VerifyOptions, DEFAULT_MEMORY_BUDGET};
use sumdist::{BigRational, Error as CoreError};

use manifest::{manifest_path, parameter_map, sha256_file, sha256_hex, FileDigest, RunManifest};

const MEMORY_BUDGET_ENV: &str = "DSL_MEMORY_BUDGET";
const PRECISION_ENV: &str = "DSL_PRECISION_BITS";

#[derive(Parser)]
#[command(
    name = "sumdist",
    version,
    about = "Construct, verify, bound, and search sum-distinct sequences over size-capped subset families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an explicit sequence and write it as JSON
    Construct(ConstructArgs),
    /// Decide sum-distinctness and write a collision report
    Verify(VerifyArgs),
    /// Evaluate bound formulas over a lambda grid
    Bounds(BoundsArgs),
    /// Randomized and exact searches
    #[command(subcommand)]
    Search(SearchCmd),
    /// Re-run a manifest and compare output digests
    Repro(ReproArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Powers2,
    Tilde,
    Direct1,
    Direct2,
    Lift,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Exhaustive,
    Mitm,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Exhaustive => Engine::Exhaustive,
            EngineArg::Mitm => Engine::Mitm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Sequence length (not used by `lift`, which takes it from the input)
    #[arg(long)]
    n: Option<usize>,
    /// Target dimension for `lift`
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Base file: a certified base for direct1/direct2, or the input
    /// sequence for lift
    #[arg(long)]
    base: Option<PathBuf>,
    /// Generate and certify a Conway-Guy style base of this length
    #[arg(long)]
    base_length: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Family mode: exact rational size-cap parameter
    #[arg(long)]
    lambda: Option<String>,
    /// Support-cap mode: require |A1| + |A2| < CAP
    #[arg(long)]
    pair_cap: Option<usize>,
    /// Shifted mode: comma-separated offset added to S(A2); needs
    /// --pair-cap for the support cap
    #[arg(long)]
    shifted: Option<String>,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    /// Meet-in-the-middle table budget in bytes
    #[arg(long)]
    memory_budget: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long)]
    lambda: Option<String>,
    /// Inclusive grid START:STOP:STEP with exact decimal endpoints
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Exhaustive minimal-bound search at small scale
    Exact(ExactArgs),
    /// Seeded sample-and-repair construction
    Random(RandomArgs),
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    max_m: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record the outcome on first run, compare on later runs
    #[arg(long)]
    golden: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    lambda: String,
    /// Sampling bound M (decimal)
    #[arg(long)]
    m: String,
    /// Seed is mandatory; there is no implicit clock seed
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    retries: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record the outcome on first run, compare on later runs
    #[arg(long)]
    golden: Option<PathBuf>,
}

#[derive(Args)]
struct ReproArgs {
    manifest: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Usage(Box<clap::Error>),
    Io(String),
    Mismatch(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

fn exit_code(err: &CliError) -> ExitCode {
    match err {
        CliError::Core(CoreError::Capacity(_)) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn one_line(msg: &str) -> String {
    msg.replace('\n', " ")
}

fn render(err: &CliError) -> String {
    match err {
        CliError::Core(CoreError::Input(m)) | CliError::Core(CoreError::Contract(m)) => {
            format!("E-INPUT: {}", one_line(m))
        }
        CliError::Core(CoreError::Domain(m)) | CliError::Core(CoreError::Construction(m)) => {
            format!("E-DOMAIN: {}", one_line(m))
        }
        CliError::Core(CoreError::Capacity(m)) => format!("E-CAPACITY: {}", one_line(m)),
        CliError::Usage(e) => format!("E-INPUT: {}", one_line(&e.to_string())),
        CliError::Io(m) => format!("E-INPUT: {}", one_line(m)),
        CliError::Mismatch(m) => format!("E-DOMAIN: {}", one_line(m)),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    // Top level: help/version go to stdout, parse failures print the usage
    // text; both come from clap directly.
    match Cli::try_parse_from(std::iter::once("sumdist".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => match execute(cli.cmd, &argv, true) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{}", render(&e));
                exit_code(&e)
            }
        },
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                ExitCode::SUCCESS
            } else {
                eprint!("{}", e.render());
                ExitCode::from(1)
            }
        }
    }
}

/// Re-entrant dispatch used by `repro`: parse and execute an argument
/// vector, optionally suppressing manifest writes.
fn run_argv(argv: &[String], write_manifest: bool) -> Result<(), CliError> {
    let cli =
        Cli::try_parse_from(std::iter::once("sumdist".to_string()).chain(argv.iter().cloned()))
            .map_err(|e| CliError::Usage(Box::new(e)))?;
    execute(cli.cmd, argv, write_manifest)
}

#[derive(Default)]
struct Recorder {
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    rng_seed: Option<u64>,
}

impl Recorder {
    fn read_text(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes)
            .map_err(|_| CliError::Io(format!("{} is not UTF-8", path.display())))
    }

    fn write_text(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        Ok(())
    }
}

fn execute(cmd: Cmd, argv: &[String], write_manifest: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let mut rec = Recorder::default();
    match cmd {
        Cmd::Construct(args) => cmd_construct(args, &mut rec)?,
        Cmd::Verify(args) => cmd_verify(args, &mut rec)?,
        Cmd::Bounds(args) => cmd_bounds(args, &mut rec)?,
        Cmd::Search(SearchCmd::Exact(args)) => cmd_search_exact(args, &mut rec)?,
        Cmd::Search(SearchCmd::Random(args)) => cmd_search_random(args, &mut rec)?,
        Cmd::Repro(args) => {
            cmd_repro(args)?;
            return Ok(());
        }
    }
    if write_manifest && !rec.outputs.is_empty() {
        let man = RunManifest {
            argv: argv.to_vec(),
            parameters: parameter_map(argv),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng_seed: rec.rng_seed,
            inputs: rec.inputs.clone(),
            outputs: rec.outputs.clone(),
            wall_time_ms: started.elapsed().as_millis(),
        };
        let first = PathBuf::from(&rec.outputs[0].path);
        let text = serde_json::to_string_pretty(&man).expect("manifest serializes");
        std::fs::write(manifest_path(&first), text)
            .map_err(|e| CliError::Io(format!("cannot write manifest: {e}")))?;
    }
    Ok(())
}

fn env_memory_budget() -> Result<Option<u64>, CliError> {
    match std::env::var(MEMORY_BUDGET_ENV) {
        Ok(v) => v
            .parse::<u64>()
            .map(Some)
            .map_err(|_| CliError::Io(format!("{MEMORY_BUDGET_ENV} must be a byte count: {v}"))),
        Err(_) => Ok(None),
    }
}

fn env_precision() -> Result<u32, CliError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .parse::<u32>()
            .map_err(|_| CliError::Io(format!("{PRECISION_ENV} must be a bit count: {v}"))),
        Err(_) => Ok(64),
    }
}

fn verify_options(engine: EngineArg, budget_flag: Option<u64>) -> Result<VerifyOptions, CliError> {
    let budget = match budget_flag {
        Some(b) => b,
        None => env_memory_budget()?.unwrap_or(DEFAULT_MEMORY_BUDGET),
    };
    Ok(VerifyOptions {
        engine: engine.into(),
        memory_budget: budget,
    })
}

fn cmd_construct(args: ConstructArgs, rec: &mut Recorder) -> Result<(), CliError> {
    let need_n = || -> Result<usize, CliError> {
        args.n.ok_or_else(|| {
            CliError::Core(CoreError::Input("--n is required for this family".into()))
        })
    };
    let seq = match args.family {
        FamilyArg::Powers2 => powers_of_two(need_n()?)?,
        FamilyArg::Tilde => tilde_sigma(need_n()?)?,
        FamilyArg::Direct1 | FamilyArg::Direct2 => {
            let base = load_base(&args, rec)?;
            let mode = match args.family {
                FamilyArg::Direct1 => AugmentMode::Single,
                _ => AugmentMode::Double,
            };
            augment_base(&base, need_n()?, mode)?
        }
        FamilyArg::Lift => {
            let path = args.base.as_ref().ok_or_else(|| {
                CliError::Core(CoreError::Input(
                    "lift needs --base pointing at the input sequence".into(),
                ))
            })?;
            let text = rec.read_text(path)?;
            let input = Sequence::from_json(&text)?;
            lift_to_k(&input, args.k)?
        }
    };
    rec.write_text(&args.out, &seq.to_json())?;
    println!(
        "wrote sequence n={} k={} to {}",
        seq.n(),
        seq.k(),
        args.out.display()
    );
    Ok(())
}

fn load_base(args: &ConstructArgs, rec: &mut Recorder) -> Result<BaseSequence, CliError> {
    match (&args.base, args.base_length) {
        (Some(path), None) => {
            let text = rec.read_text(path)?;
            Ok(BaseSequence::from_json(&text)?)
        }
        (None, Some(len)) => Ok(conway_guy_base(len)?),
        _ => Err(CliError::Core(CoreError::Input(
            "give exactly one of --base FILE or --base-length L".into(),
        ))),
    }
}

fn cmd_verify(args: VerifyArgs, rec: &mut Recorder) -> Result<(), CliError> {
    let text = rec.read_text(&args.input)?;
    let seq = Sequence::from_json(&text)?;
    let constraint = match (&args.shifted, &args.lambda, args.pair_cap) {
        (Some(offsets), None, Some(cap)) => {
            let offset = offsets
                .split(',')
                .map(parse_bigint)
                .collect::<Result<Vec<_>, _>>()?;
            PairConstraint::shifted(offset, cap)
        }
        (Some(_), _, None) => {
            return Err(CliError::Core(CoreError::Input(
                "--shifted needs --pair-cap for the support cap".into(),
            )))
        }
        (Some(_), Some(_), _) => {
            return Err(CliError::Core(CoreError::Input(
                "--shifted combines with --pair-cap, not --lambda".into(),
            )))
        }
        (None, Some(lambda), None) => PairConstraint::family(parse_rational(lambda)?),
        (None, None, Some(cap)) => PairConstraint::pair_sum_cap(cap),
        _ => {
            return Err(CliError::Core(CoreError::Input(
                "give exactly one of --lambda or --pair-cap".into(),
            )))
        }
    };
    let opts = verify_options(args.engine, args.memory_budget)?;
    let report = verify(&seq, &constraint, &opts)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    rec.write_text(&args.out, &json)?;
    match &report.witness {
        Some(w) => println!("collision: A1={} A2={}", w.a1, w.a2),
        None => println!("distinct"),
    }
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<BigRational>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Core(CoreError::Input(format!(
            "grid must be START:STOP:STEP, got {spec}"
        ))));
    }
    let start = parse_rational(parts[0])?;
    let stop = parse_rational(parts[1])?;
    let step = parse_rational(parts[2])?;
    if step <= BigRational::from_integer(0.into()) || start > stop {
        return Err(CliError::Core(CoreError::Input(
            "grid needs a positive step and START <= STOP".into(),
        )));
    }
    let mut grid = Vec::new();
    let mut v = start;
    while v <= stop {
        grid.push(v.clone());
        v += &step;
        if grid.len() > 100_000 {
            return Err(CliError::Core(CoreError::Capacity(
                "grid exceeds 100000 points".into(),
            )));
        }
    }
    Ok(grid)
}

fn cmd_bounds(args: BoundsArgs, rec: &mut Recorder) -> Result<(), CliError> {
    let ev = BoundEvaluator::new(env_precision()?)?;
    let grid = match (&args.lambda, &args.grid) {
        (Some(l), None) => vec![parse_rational(l)?],
        (None, Some(g)) => parse_grid(g)?,
        _ => {
            return Err(CliError::Core(CoreError::Input(
                "give exactly one of --lambda or --grid".into(),
            )))
        }
    };
    let rows = ev.bound_table(args.n, args.k, &grid)?;
    let text = match args.format {
        FormatArg::Csv => bound_rows_to_csv(&rows),
        FormatArg::Json => serde_json::to_string_pretty(&rows).expect("rows serialize"),
    };
    match &args.out {
        Some(path) => {
            rec.write_text(path, &text)?;
            println!("wrote {} bound rows to {}", rows.len(), path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn finish_search(
    json: &str,
    out: &Option<PathBuf>,
    golden: &Option<PathBuf>,
    rec: &mut Recorder,
) -> Result<(), CliError> {
    println!("{json}");
    if let Some(path) = out {
        rec.write_text(path, json)?;
    }
    if let Some(path) = golden {
        if path.exists() {
            let existing = rec.read_text(path)?;
            if existing != json {
                return Err(CliError::Mismatch(format!(
                    "golden mismatch at {}",
                    path.display()
                )));
            }
            eprintln!("golden OK: {}", path.display());
        } else {
            rec.write_text(path, json)?;
            eprintln!("golden recorded: {}", path.display());
        }
    }
    Ok(())
}

fn cmd_search_exact(args: ExactArgs, rec: &mut Recorder) -> Result<(), CliError> {
    let lambda = parse_rational(&args.lambda)?;
    let cfg = ExactConfig {
        verify: verify_options(EngineArg::Exhaustive, None)?,
        ..ExactConfig::default()
    };
    let outcome = exact_min_m(args.n, args.k, &lambda, args.max_m, &cfg)?;
    finish_search(&outcome.to_json(), &args.out, &args.golden, rec)
}

fn cmd_search_random(args: RandomArgs, rec: &mut Recorder) -> Result<(), CliError> {
    let lambda = parse_rational(&args.lambda)?;
    let m = parse_biguint(&args.m)?;
    let cfg = RandomConfig {
        max_retries: args.retries,
        verify: verify_options(EngineArg::Auto, None)?,
        ..RandomConfig::default()
    };
    rec.rng_seed = Some(args.seed);
    let outcome = random_construct(args.n, args.k, &lambda, &m, args.seed, &cfg)?;
    finish_search(&outcome.to_json(), &args.out, &args.golden, rec)
}

fn cmd_repro(args: ReproArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.manifest)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.manifest.display())))?;
    let man: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Io(format!("invalid manifest: {e}")))?;
    if man.outputs.is_empty() {
        return Err(CliError::Mismatch(
            "manifest records no outputs to compare".into(),
        ));
    }
    let scratch = std::env::temp_dir().join(format!(
        "sumdist-repro-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0)
    ));
    std::fs::create_dir_all(&scratch)
        .map_err(|e| CliError::Io(format!("cannot create scratch dir: {e}")))?;

    let mut remapped: Vec<(String, PathBuf)> = Vec::new();
    for (i, output) in man.outputs.iter().enumerate() {
        let name = Path::new(&output.path)
            .file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "out".to_string());
        remapped.push((output.path.clone(), scratch.join(format!("{i}-{name}"))));
    }
    let argv: Vec<String> = man
        .argv
        .iter()
        .map(|a| {
            remapped
                .iter()
                .find(|(orig, _)| orig == a)
                .map(|(_, new)| new.display().to_string())
                .unwrap_or_else(|| a.clone())
        })
        .collect();

    run_argv(&argv, false)?;

    for (output, (_, new_path)) in man.outputs.iter().zip(&remapped) {
        let fresh = sha256_file(new_path).map_err(|e| {
            CliError::Mismatch(format!(
                "re-run did not produce {}: {e}",
                new_path.display()
            ))
        })?;
        if fresh != output.sha256 {
            return Err(CliError::Mismatch(format!(
                "digest mismatch for {}: recorded {} got {}",
                output.path, output.sha256, fresh
            )));
        }
    }
    let _ = std::fs::remove_dir_all(&scratch);
    println!("repro OK: {} output(s) match", man.outputs.len());
    Ok(())
}
