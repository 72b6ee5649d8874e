//! Batch front end: `corpus`, `index`, `cluster`, `compare` and the
//! combined `run`, wired together through dump files so experiments can
//! re-cluster at many thresholds without re-indexing.
//!
//! Exit codes are a stable scripting contract: 0 success, 1 usage or
//! parameter error, 2 I/O or data error.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wordclust_core::{
    build_context_index, cluster_stats, compare_models_with, form_clusters,
    naive_similar_pairs_with, report, similar_pairs_with, BuildOptions, ContextIndex, Corpus,
    Error as CoreError, ModelReport, PairingOptions, Threshold,
};

#[derive(Parser)]
#[command(
    name = "wordclust",
    version,
    about = "Cluster words by shared sentence context",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads; defaults to all cores. Never changes output bytes.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// What to print on stdout: the aligned table or the machine TSV.
    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Report,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize, segment and intern text files into a corpus dump.
    Corpus {
        /// Input text files, processed in the given order.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,

        /// Lowercase ASCII letters during normalization.
        #[arg(long)]
        fold_ascii: bool,
    },

    /// Build the context index for one window size from a corpus dump.
    Index {
        /// Corpus dump produced by `corpus`.
        corpus: PathBuf,

        /// Window size (1..=16).
        #[arg(long)]
        n: usize,
    },

    /// Score, threshold and cluster one window size.
    Cluster {
        /// Corpus dump (always required; cluster output is words).
        #[arg(long)]
        corpus: PathBuf,

        /// Prebuilt index dump. Mutually exclusive with --n.
        #[arg(long)]
        index: Option<PathBuf>,

        /// Window size to index in memory (1..=16, default 3).
        #[arg(long)]
        n: Option<usize>,

        /// Similarity threshold, a decimal or fraction in (0, 0.5).
        #[arg(long, default_value = "0.20")]
        threshold: String,

        /// Drop words occurring fewer times than this before pairing.
        #[arg(long, default_value_t = 1)]
        min_freq: u64,

        /// Skip context words spread over more than this many words during
        /// candidate generation (scoring always uses full lists).
        #[arg(long)]
        max_context_df: Option<usize>,

        /// Recompute via all-pairs scoring and fail unless the output is
        /// byte-identical. Incompatible with --max-context-df.
        #[arg(long)]
        naive_check: bool,

        /// Also write the per-pair score TSV.
        #[arg(long)]
        pairs: bool,
    },

    /// Cluster several window sizes and tabulate one record per n.
    Compare {
        /// Corpus dump produced by `corpus`.
        #[arg(long)]
        corpus: PathBuf,

        /// Window sizes, comma separated (e.g. 3,4,5).
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,

        /// Similarity threshold, a decimal or fraction in (0, 0.5).
        #[arg(long, default_value = "0.20")]
        threshold: String,

        /// Drop words occurring fewer times than this before pairing.
        #[arg(long, default_value_t = 1)]
        min_freq: u64,

        /// Candidate-generation ceiling, as in `cluster`.
        #[arg(long)]
        max_context_df: Option<usize>,
    },

    /// corpus + index + cluster in one invocation.
    Run {
        /// Input text files, processed in the given order.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,

        /// Lowercase ASCII letters during normalization.
        #[arg(long)]
        fold_ascii: bool,

        /// Window size (1..=16).
        #[arg(long, default_value_t = 3)]
        n: usize,

        /// Similarity threshold, a decimal or fraction in (0, 0.5).
        #[arg(long, default_value = "0.20")]
        threshold: String,

        /// Drop words occurring fewer times than this before pairing.
        #[arg(long, default_value_t = 1)]
        min_freq: u64,

        /// Candidate-generation ceiling, as in `cluster`.
        #[arg(long)]
        max_context_df: Option<usize>,

        /// Verify against all-pairs scoring before writing.
        #[arg(long)]
        naive_check: bool,

        /// Also write the per-pair score TSV.
        #[arg(long)]
        pairs: bool,
    },
}

enum CliError {
    /// Bad flags or parameters: exit 1.
    Usage(String),
    /// I/O failures, malformed dumps, bad data: exit 2.
    Data(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(message) | CliError::Data(message) => f.write_str(message),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(error: CoreError) -> Self {
        match error {
            CoreError::InvalidParameter(_) => CliError::Usage(error.to_string()),
            _ => CliError::Data(error.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = if error.use_stderr() { 1 } else { 0 };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.threads {
        None => execute(&cli),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(error) => Err(CliError::Data(format!("thread pool: {error}"))),
        },
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Corpus { inputs, fold_ascii } => {
            let corpus = build_corpus_from_files(inputs, *fold_ascii)?;
            write_output(&cli.out, "corpus.dump", &corpus.dump())?;
            Ok(())
        }
        Command::Index { corpus, n } => {
            let n = validate_n(*n)?;
            let corpus = load_corpus(corpus)?;
            let index = build_context_index(&corpus, n)?;
            write_output(&cli.out, &format!("index-n{n}.dump"), &index.dump())?;
            Ok(())
        }
        Command::Cluster {
            corpus,
            index,
            n,
            threshold,
            min_freq,
            max_context_df,
            naive_check,
            pairs,
        } => {
            let corpus = load_corpus(corpus)?;
            let index = match (index, n) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "--index and --n are mutually exclusive".into(),
                    ))
                }
                (Some(path), None) => {
                    let index = load_index(path)?;
                    index.verify_corpus(&corpus)?;
                    index
                }
                (None, n) => build_context_index(&corpus, validate_n(n.unwrap_or(3))?)?,
            };
            let params = ClusterParams {
                threshold: parse_threshold(threshold)?,
                options: pairing_options(*min_freq, *max_context_df)?,
                naive_check: *naive_check,
                write_pairs: *pairs,
            };
            cluster_and_write(cli, &corpus, &index, &params)
        }
        Command::Compare {
            corpus,
            n,
            threshold,
            min_freq,
            max_context_df,
        } => {
            let ns: Vec<usize> = n
                .iter()
                .map(|&size| validate_n(size))
                .collect::<Result<_, _>>()?;
            let corpus = load_corpus(corpus)?;
            let threshold = parse_threshold(threshold)?;
            let options = pairing_options(*min_freq, *max_context_df)?;
            let model_report = compare_models_with(&corpus, &ns, threshold, &options)?;
            let tag = threshold.tag();
            write_output(
                &cli.out,
                &format!("compare-t{tag}.tsv"),
                &report::render_stats_tsv(&model_report),
            )?;
            write_output(
                &cli.out,
                &format!("compare-t{tag}.txt"),
                &report::render_stats_table(&model_report),
            )?;
            print_report(cli.format, &model_report);
            Ok(())
        }
        Command::Run {
            inputs,
            fold_ascii,
            n,
            threshold,
            min_freq,
            max_context_df,
            naive_check,
            pairs,
        } => {
            let n = validate_n(*n)?;
            let corpus = build_corpus_from_files(inputs, *fold_ascii)?;
            write_output(&cli.out, "corpus.dump", &corpus.dump())?;
            let index = build_context_index(&corpus, n)?;
            write_output(&cli.out, &format!("index-n{n}.dump"), &index.dump())?;
            let params = ClusterParams {
                threshold: parse_threshold(threshold)?,
                options: pairing_options(*min_freq, *max_context_df)?,
                naive_check: *naive_check,
                write_pairs: *pairs,
            };
            cluster_and_write(cli, &corpus, &index, &params)
        }
    }
}

struct ClusterParams {
    threshold: Threshold,
    options: PairingOptions,
    naive_check: bool,
    write_pairs: bool,
}

fn cluster_and_write(
    cli: &Cli,
    corpus: &Corpus,
    index: &ContextIndex,
    params: &ClusterParams,
) -> Result<(), CliError> {
    if params.naive_check && params.options.max_context_df.is_some() {
        return Err(CliError::Usage(
            "--naive-check cannot be combined with --max-context-df: the ceiling \
             may drop candidates that all-pairs scoring keeps"
                .into(),
        ));
    }

    let pairs = similar_pairs_with(index, corpus, params.threshold, &params.options)?;
    let set = form_clusters(&pairs, index.n(), params.threshold, corpus.vocabulary());
    let clusters_tsv = report::render_clusters_tsv(&set, corpus.vocabulary());
    let model_report = ModelReport {
        records: vec![cluster_stats(&set)],
    };
    let stats_tsv = report::render_stats_tsv(&model_report);

    if params.naive_check {
        let naive = naive_similar_pairs_with(
            index,
            corpus,
            params.threshold,
            params.options.min_frequency,
        )?;
        let naive_set = form_clusters(&naive, index.n(), params.threshold, corpus.vocabulary());
        let naive_clusters = report::render_clusters_tsv(&naive_set, corpus.vocabulary());
        let naive_stats = report::render_stats_tsv(&ModelReport {
            records: vec![cluster_stats(&naive_set)],
        });
        if pairs != naive || clusters_tsv != naive_clusters || stats_tsv != naive_stats {
            return Err(CliError::Data(
                "naive check failed: indexed and all-pairs outputs differ".into(),
            ));
        }
    }

    let tag = format!("n{}-t{}", index.n(), params.threshold.tag());
    write_output(&cli.out, &format!("clusters-{tag}.tsv"), &clusters_tsv)?;
    write_output(&cli.out, &format!("stats-{tag}.tsv"), &stats_tsv)?;
    write_output(
        &cli.out,
        &format!("stats-{tag}.txt"),
        &report::render_stats_table(&model_report),
    )?;
    if params.write_pairs {
        write_output(
            &cli.out,
            &format!("pairs-{tag}.tsv"),
            &report::render_pairs_tsv(&pairs, corpus.vocabulary()),
        )?;
    }
    print_report(cli.format, &model_report);
    Ok(())
}

fn print_report(format: Format, model_report: &ModelReport) {
    match format {
        Format::Report => print!("{}", report::render_stats_table(model_report)),
        Format::Tsv => print!("{}", report::render_stats_tsv(model_report)),
    }
}

fn validate_n(n: usize) -> Result<usize, CliError> {
    if (1..=16).contains(&n) {
        Ok(n)
    } else {
        Err(CliError::Usage(format!(
            "window size n must be in 1..=16, got {n}"
        )))
    }
}

fn parse_threshold(text: &str) -> Result<Threshold, CliError> {
    Threshold::parse(text).map_err(|error| CliError::Usage(error.to_string()))
}

fn pairing_options(
    min_frequency: u64,
    max_context_df: Option<usize>,
) -> Result<PairingOptions, CliError> {
    if min_frequency == 0 {
        return Err(CliError::Usage("--min-freq must be at least 1".into()));
    }
    Ok(PairingOptions {
        min_frequency,
        max_context_df,
    })
}

fn build_corpus_from_files(inputs: &[PathBuf], fold_ascii: bool) -> Result<Corpus, CliError> {
    let mut documents = Vec::with_capacity(inputs.len());
    for path in inputs {
        let bytes = fs::read(path)
            .map_err(|error| CliError::Data(format!("{}: {error}", path.display())))?;
        let text = String::from_utf8(bytes).map_err(|error| {
            CliError::Data(format!(
                "{}: invalid UTF-8 at byte offset {}",
                path.display(),
                error.utf8_error().valid_up_to()
            ))
        })?;
        documents.push(text);
    }
    Ok(Corpus::build(&documents, &BuildOptions { fold_ascii }))
}

fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|error| CliError::Data(format!("{}: {error}", path.display())))?;
    Corpus::parse_dump(&text)
        .map_err(|error| CliError::Data(format!("{}: {error}", path.display())))
}

fn load_index(path: &Path) -> Result<ContextIndex, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|error| CliError::Data(format!("{}: {error}", path.display())))?;
    ContextIndex::parse_dump(&text)
        .map_err(|error| CliError::Data(format!("{}: {error}", path.display())))
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|error| CliError::Data(format!("{}: {error}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|error| CliError::Data(format!("{}: {error}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(path)
}
