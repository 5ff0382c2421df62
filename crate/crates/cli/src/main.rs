mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rlzap::io::{deserialize, encode_symbols, read_dataset, read_info, serialize};
use rlzap::{bench, Alphabet, CompressedTarget, Error, FormatError, ParseParams, Reference, SchemeRegistry};

/// Reference-relative compression with random access.
#[derive(Parser)]
#[command(name = "rlzap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a target against a reference.
    Compress(CompressArgs),
    /// Write a substring of a compressed target to standard output.
    Extract(ExtractArgs),
    /// Describe an archive: header, parameters, sections and statistics.
    Info(InfoArgs),
    /// Time random substring extraction.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphabetArg {
    Dna,
    Int32,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::Dna => Alphabet::Dna,
            AlphabetArg::Int32 => Alphabet::Int32,
        }
    }
}

#[derive(Args)]
struct CompressArgs {
    /// rlzap, rlz, gdc or relptr.
    #[arg(long, default_value = "rlzap")]
    scheme: String,
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Target file. Repeat with --concat to compress several files as one target.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "dna")]
    alphabet: AlphabetArg,
    /// Concatenate all --input files in argument order.
    #[arg(long)]
    concat: bool,
    #[arg(long)]
    look_ahead: Option<usize>,
    #[arg(long)]
    min_explicit: Option<usize>,
    #[arg(long)]
    delta_bits: Option<u32>,
    #[arg(long)]
    max_lit: Option<u32>,
    #[arg(long)]
    sample_interval: Option<usize>,
    #[arg(long)]
    chunk_len: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    archive: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    /// First position, 1-based.
    #[arg(long, default_value_t = 1)]
    pos: usize,
    /// Number of symbols; defaults to the rest of the target.
    #[arg(long)]
    len: Option<usize>,
}

#[derive(Args)]
struct InfoArgs {
    #[arg(long)]
    archive: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Archive to time; repeat to compare schemes built from the same target.
    #[arg(long, required = true)]
    archive: Vec<PathBuf>,
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Substring lengths.
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_LENGTHS)]
    lengths: Vec<usize>,
    /// Symbols extracted per length.
    #[arg(long, default_value_t = bench::DEFAULT_QUERIES)]
    queries: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Repetitions per length; the fastest is reported.
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    #[arg(long)]
    json: bool,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INGEST: u8 = 3;
const EXIT_FORMAT: u8 = 4;
const EXIT_CHECKSUM: u8 = 5;
const EXIT_RANGE: u8 = 6;

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn at(path: &Path, e: impl Into<Error>) -> Self {
        let mut f = Failure::from(e.into());
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParams(_) => EXIT_USAGE,
            Error::Ingest { .. } | Error::InvalidInput(_) | Error::Encoding(_) => EXIT_INGEST,
            Error::Format(FormatError::ContentChecksum { .. }) | Error::ReferenceMismatch { .. } => EXIT_CHECKSUM,
            Error::Format(_) | Error::CorruptArchive(_) | Error::CorruptParse(_) => EXIT_FORMAT,
            Error::OutOfRange { .. } => EXIT_RANGE,
            Error::Io(_) => EXIT_OTHER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Error::from(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CliResult = Result<(), Failure>;

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::at(path, e))
}

fn load_archive(path: &Path, registry: &SchemeRegistry) -> Result<Box<dyn CompressedTarget>, Failure> {
    let bytes = read_file(path)?;
    deserialize(&bytes, registry).map_err(|e| Failure::at(path, e))
}

fn load_reference(path: &Path, alphabet: Alphabet) -> Result<Reference, Failure> {
    let symbols = read_dataset(path, alphabet).map_err(|e| Failure::at(path, e))?;
    Ok(Reference::new(symbols))
}

fn params_for(args: &CompressArgs) -> Result<ParseParams, Failure> {
    let mut p = ParseParams::for_alphabet(args.alphabet.into());
    if let Some(v) = args.look_ahead {
        p.look_ahead = v;
    }
    if let Some(v) = args.min_explicit {
        p.min_explicit_len = v;
    }
    if let Some(v) = args.delta_bits {
        p.delta_bits = v;
    }
    if let Some(v) = args.max_lit {
        p.max_lit = v;
    }
    if let Some(v) = args.sample_interval {
        p.sample_interval = v;
    }
    if let Some(v) = args.chunk_len {
        p.chunk_len = v;
    }
    p.validate()?;
    Ok(p)
}

fn compress(args: CompressArgs) -> CliResult {
    let registry = SchemeRegistry::builtin();
    let scheme = registry.get(&args.scheme).map_err(|e| Failure::usage(e.to_string()))?;
    if args.input.len() > 1 && !args.concat {
        return Err(Failure::usage("several --input files need --concat"));
    }
    let params = params_for(&args)?;
    let alphabet: Alphabet = args.alphabet.into();
    let reference = load_reference(&args.reference, alphabet)?;
    let mut target = Vec::new();
    let mut input_bytes = 0u64;
    for path in &args.input {
        let part = read_dataset(path, alphabet).map_err(|e| Failure::at(path, e))?;
        input_bytes += std::fs::metadata(path)?.len();
        target.extend(part);
    }
    let archive = scheme.compress(&target, &reference, alphabet, &params)?;
    let bytes = serialize(archive.as_ref());
    std::fs::write(&args.output, &bytes).map_err(|e| Failure::at(&args.output, e))?;
    let summary = report::CompressSummary::new(archive.as_ref(), input_bytes, bytes.len() as u64);
    let out = if args.json {
        serde_json::to_string_pretty(&summary).expect("serializable summary") + "\n"
    } else {
        summary.to_text()
    };
    print!("{out}");
    Ok(())
}

fn extract(args: ExtractArgs) -> CliResult {
    let registry = SchemeRegistry::builtin();
    let archive = load_archive(&args.archive, &registry)?;
    let alphabet = archive.meta().alphabet;
    let reference = load_reference(&args.reference, alphabet)?;
    let n = archive.len();
    if args.pos == 0 {
        return Err(Failure {
            code: EXIT_RANGE,
            message: "--pos is 1-based".into(),
        });
    }
    let start = args.pos - 1;
    let len = match args.len {
        Some(l) => l,
        None => n.saturating_sub(start),
    };
    if start > n || len > n - start {
        return Err(Failure {
            code: EXIT_RANGE,
            message: format!("range {}..{} outside target of length {n}", args.pos, start + len),
        });
    }
    let symbols = archive.extract(&reference, start, len)?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(&encode_symbols(&symbols, alphabet))?;
    stdout.flush()?;
    Ok(())
}

fn info(args: InfoArgs) -> CliResult {
    let registry = SchemeRegistry::builtin();
    let bytes = read_file(&args.archive)?;
    let header = read_info(&bytes).map_err(|e| Failure::at(&args.archive, e))?;
    let archive = deserialize(&bytes, &registry).map_err(|e| Failure::at(&args.archive, e))?;
    let summary = report::InfoSummary::new(&header, archive.as_ref());
    let out = if args.json {
        serde_json::to_string_pretty(&summary).expect("serializable summary") + "\n"
    } else {
        summary.to_text()
    };
    print!("{out}");
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> CliResult {
    if args.lengths.is_empty() || args.lengths.contains(&0) {
        return Err(Failure::usage("--lengths must be positive"));
    }
    if args.queries == 0 {
        return Err(Failure::usage("--queries must be positive"));
    }
    let registry = SchemeRegistry::builtin();
    let archives = args
        .archive
        .iter()
        .map(|p| load_archive(p, &registry))
        .collect::<Result<Vec<_>, _>>()?;
    let alphabet = archives[0].meta().alphabet;
    if archives.iter().any(|a| a.meta().alphabet != alphabet) {
        return Err(Failure::usage("archives use different alphabets"));
    }
    let reference = load_reference(&args.reference, alphabet)?;
    let mut rows = Vec::new();
    for (path, a) in args.archive.iter().zip(&archives) {
        let timings = bench::run(a.as_ref(), &reference, &args.lengths, args.queries, args.seed, args.rounds)
            .map_err(|e| Failure::at(path, e))?;
        rows.push(report::BenchLine {
            scheme: a.scheme().name(),
            archive: path.display().to_string(),
            target_len: a.len(),
            timings,
        });
    }
    let table = report::BenchTable {
        queries: args.queries,
        seed: args.seed,
        lengths: args.lengths,
        rows,
    };
    let out = if args.json {
        serde_json::to_string_pretty(&table).expect("serializable table") + "\n"
    } else {
        table.to_text()
    };
    print!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compress(a) => compress(a),
        Command::Extract(a) => extract(a),
        Command::Info(a) => info(a),
        Command::Bench(a) => bench_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rlzap: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
