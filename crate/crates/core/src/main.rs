use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use karekurucu::clueforge::{self, ClueError, ClueRequest, GenerateOptions, ProviderConfig};
use karekurucu::corpus::{self, AnswerCluePair, CorpusError, FilterConfig, FilterReport};
use karekurucu::evalkit::{self, Aggregation, EvalError};
use karekurucu::gridengine::{GenConfig, GridError};
use karekurucu::interface::{self, InterfaceError, ServiceConfig};
use karekurucu::textnorm::to_grid_form;

/// Turkish educational crossword toolkit.
#[derive(Parser)]
#[command(name = "karekurucu", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalize and deduplicate an answer/clue TSV.
    Ingest {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Source tag for rows without a `source` column.
        #[arg(long, default_value = "ingest")]
        source: String,
    },
    /// Apply the keyword (or text record) filters.
    Filter {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Input holds text records instead of answer/clue pairs.
        #[arg(long)]
        records: bool,
        /// TOML filter thresholds.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Length or category distribution as CSV.
    Stats {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        records: bool,
    },
    /// Generate clue candidates; writes an answer/clue TSV.
    Clues(CluesArgs),
    /// Build a numbered puzzle from an answer/clue TSV.
    Puzzle(PuzzleArgs),
    /// Evaluate clues.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        listen: Option<String>,
    },
}

#[derive(Args)]
struct CluesArgs {
    /// TOML provider config.
    #[arg(long)]
    provider: PathBuf,
    /// Answers to clue; repeatable.
    #[arg(long = "answer")]
    answers: Vec<String>,
    /// TSV with `answer` and optional `text`, `category`, `n` columns.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(short, default_value_t = clueforge::DEFAULT_CLUE_COUNT)]
    n: usize,
    /// Reject clues outside 5 to 15 words.
    #[arg(long)]
    strict: bool,
    /// Accept texts that do not contain the answer.
    #[arg(long)]
    allow_absent: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PuzzleArgs {
    input: PathBuf,
    /// TOML generation config.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Puzzle JSON destination (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the text rendering here.
    #[arg(long)]
    text: Option<PathBuf>,
    #[arg(long)]
    solved: bool,
    /// Write the search trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Subcommand)]
enum EvalCmd {
    /// ROUGE-1/2/L over a candidate/reference TSV.
    Rouge {
        input: PathBuf,
        #[arg(long)]
        pooled: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Acceptability rates over a ratings TSV.
    Ratings {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(m: impl ToString) -> Self {
        Failure { code: 1, message: m.to_string() }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        Failure::validation(e)
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::validation(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::validation(e)
    }
}

impl From<ClueError> for Failure {
    fn from(e: ClueError) -> Self {
        InterfaceError::from(e).into()
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        InterfaceError::from(e).into()
    }
}

impl From<InterfaceError> for Failure {
    fn from(e: InterfaceError) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

type CliResult = Result<(), Failure>;

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::validation(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_toml<T: serde::de::DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::validation(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", p.display())))
        }
    }
}

fn report(report: &FilterReport) {
    eprintln!("{}", serde_json::to_string(report).expect("report serializes"));
}

fn sidecar(input: &Path, output: Option<&Path>) -> PathBuf {
    corpus::rejected_sidecar_path(output.unwrap_or(input))
}

fn ingest(input: &Path, output: Option<&Path>, source: &str) -> CliResult {
    let out = corpus::ingest_pairs(open(input)?, source)?;
    corpus::write_pairs(sink(output)?, &out.pairs)?;
    corpus::write_rejected(File::create(sidecar(input, output))?, &out.header, &out.rejected)?;
    report(&out.report);
    Ok(())
}

fn filter(input: &Path, output: Option<&Path>, records: bool, config: Option<&Path>) -> CliResult {
    let cfg: FilterConfig = read_toml(config)?;
    cfg.validate()?;
    if records {
        let read = corpus::read_records(open(input)?)?;
        let out = corpus::filter_records(&read.records, &cfg);
        corpus::write_records(sink(output)?, &out.records)?;
        let mut rejected = read.rejected;
        rejected.extend(out.rejected);
        corpus::write_rejected(File::create(sidecar(input, output))?, &read.header, &rejected)?;
        report(&read.report.then(&out.report));
    } else {
        let read = corpus::ingest_pairs(open(input)?, "filter")?;
        let (pairs, rep, mut rejected) = corpus::filter_pairs(&read.pairs, &cfg);
        corpus::write_pairs(sink(output)?, &pairs)?;
        let mut all = read.rejected;
        all.append(&mut rejected);
        corpus::write_rejected(File::create(sidecar(input, output))?, &read.header, &all)?;
        report(&read.report.then(&rep));
    }
    Ok(())
}

fn stats(input: &Path, output: Option<&Path>, records: bool) -> CliResult {
    if records {
        let read = corpus::read_records(open(input)?)?;
        corpus::write_category_csv(sink(output)?, &corpus::category_distribution(&read.records))?;
    } else {
        let read = corpus::ingest_pairs(open(input)?, "stats")?;
        corpus::write_histogram_csv(sink(output)?, &corpus::answer_length_histogram(&read.pairs))?;
    }
    Ok(())
}

fn read_requests(path: &Path, default_n: usize) -> Result<Vec<ClueRequest>, Failure> {
    let mut rdr = csv::ReaderBuilder::new().delimiter(b'\t').quoting(false).flexible(true).from_reader(open(path)?);
    let header = rdr.headers().map_err(Failure::validation)?.clone();
    let col = |name: &str| header.iter().position(|h| h.trim() == name);
    let answer = col("answer").ok_or_else(|| Failure::validation("requests need an `answer` column"))?;
    let (text, category, n) = (col("text"), col("category"), col("n"));
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(Failure::validation)?;
        let field = |c: Option<usize>| c.and_then(|c| row.get(c)).map(str::trim).filter(|s| !s.is_empty());
        let raw = row.get(answer).unwrap_or("");
        let answer = to_grid_form(raw.trim()).map_err(|e| Failure::validation(format!("row {}: {e}", i + 1)))?;
        let n = match field(n) {
            Some(v) => v.parse().map_err(|_| Failure::validation(format!("row {}: bad n {v:?}", i + 1)))?,
            None => default_n,
        };
        out.push(ClueRequest {
            text: field(text).map(str::to_string),
            answer,
            category: field(category).map(str::to_string),
            n,
        });
    }
    Ok(out)
}

fn clues(a: &CluesArgs) -> CliResult {
    let pc: ProviderConfig = read_toml(Some(&a.provider))?;
    let provider = pc.build()?;
    let mut requests = Vec::new();
    for raw in &a.answers {
        let w = to_grid_form(raw).map_err(|e| Failure::validation(format!("{raw}: {e}")))?;
        requests.push(ClueRequest::for_answer(w, a.n));
    }
    if let Some(p) = &a.input {
        requests.extend(read_requests(p, a.n)?);
    }
    if requests.is_empty() {
        return Err(Failure::validation("give --answer or --input"));
    }
    let opts = GenerateOptions { strict_length: a.strict, allow_answer_absent: a.allow_absent };
    let mut pairs = Vec::new();
    let mut failures = 0;
    let mut last: Option<ClueError> = None;
    for req in &requests {
        match clueforge::generate(req, provider.as_ref(), opts) {
            Ok(cs) => pairs.extend(cs.into_iter().map(|c| AnswerCluePair {
                answer: c.answer,
                clue: c.clue,
                source: c.provider_id,
            })),
            Err(e) => {
                eprintln!("{}: {e}", req.answer);
                failures += 1;
                last = Some(e);
            }
        }
    }
    corpus::write_pairs(sink(a.output.as_deref())?, &pairs)?;
    match last {
        Some(e) if failures == requests.len() => Err(e.into()),
        _ => Ok(()),
    }
}

fn puzzle(a: &PuzzleArgs) -> CliResult {
    let mut cfg: GenConfig = read_toml(a.config.as_deref())?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(w) = a.width {
        cfg.width = w;
    }
    if let Some(h) = a.height {
        cfg.height = h;
    }
    if let Some(n) = a.workers {
        cfg.workers = n;
    }
    cfg.trace = a.trace.is_some();
    cfg.validate()?;
    let read = corpus::ingest_pairs(open(&a.input)?, "puzzle")?;
    let (doc, generation) = interface::build_puzzle(&read.pairs, &cfg)?;
    sink(a.output.as_deref())?.write_all(doc.to_json().as_bytes())?;
    if let Some(t) = &a.text {
        std::fs::write(t, doc.render_text(a.solved))?;
    }
    if let Some(t) = &a.trace {
        std::fs::write(t, generation.trace_jsonl())?;
    }
    eprintln!(
        "placed {} words, score {:.4}, stopped: {:?}",
        generation.score.words, generation.score.score, generation.reason
    );
    Ok(())
}

fn eval(cmd: &EvalCmd) -> CliResult {
    match cmd {
        EvalCmd::Rouge { input, pooled, output } => {
            let pairs = evalkit::read_rouge_pairs(open(input)?)?;
            let agg = if *pooled { Aggregation::Pooled } else { Aggregation::PairMean };
            let rep = evalkit::corpus_rouge(&pairs, agg)?;
            evalkit::write_rouge_report(sink(output.as_deref())?, &rep)?;
        }
        EvalCmd::Ratings { input, output } => {
            let ratings = evalkit::read_ratings(open(input)?)?;
            let rep = evalkit::acceptability_rate(&ratings)?;
            evalkit::write_ratings_report(sink(output.as_deref())?, &rep)?;
            eprintln!("acceptable: {}", rep.overall.display());
        }
    }
    Ok(())
}

fn serve(config: Option<&Path>, listen: Option<String>) -> CliResult {
    let mut cfg = ServiceConfig::load(config)?;
    if let Some(l) = listen {
        cfg.listen = l;
    }
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(interface::http::serve(cfg))?;
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::Ingest { input, output, source } => ingest(&input, output.as_deref(), &source),
        Cmd::Filter { input, output, records, config } => filter(&input, output.as_deref(), records, config.as_deref()),
        Cmd::Stats { input, output, records } => stats(&input, output.as_deref(), records),
        Cmd::Clues(a) => clues(&a),
        Cmd::Puzzle(a) => puzzle(&a),
        Cmd::Eval(e) => eval(&e),
        Cmd::Serve { config, listen } => serve(config.as_deref(), listen),
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()))
        .with_writer(io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
