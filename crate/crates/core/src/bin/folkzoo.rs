use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use folkzoo::cooccurrence::{build_graph, export_graph, filter_graph, GraphFormat};
use folkzoo::extraction::MentionTable;
use folkzoo::motif_stats::{MatrixKind, MotifUnit};
use folkzoo::pca::PcaOptions;
use folkzoo::report::{
    biplot_title, load_lexicon, run_pipeline, stage_extract, stage_motifs, stage_overlay,
    stage_parse, ConfigError, PcaStage, PipelineConfig, ReportError, EXIT_IO, EXIT_OK,
    EXIT_VALIDATION,
};

#[derive(Parser)]
#[command(
    name = "folkzoo",
    version,
    about = "Animal co-occurrence and motif statistics for tale-type catalogues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a catalogue into corpus JSON.
    Parse {
        catalogue: PathBuf,
        #[arg(short, long, default_value = "corpus.json")]
        out: PathBuf,
    },
    /// Extract canonical animal mentions from corpus JSON.
    Extract(ExtractArgs),
    /// Build the substitution-adjusted co-occurrence graph.
    Cooccur {
        #[arg(long, default_value = "mentions.json")]
        mentions: PathBuf,
        /// Keep edges whose weight is strictly greater than this. Without it
        /// every edge is kept, including those cancelled to zero by substitutions.
        #[arg(long)]
        min_weight: Option<u64>,
        /// dot, graphml or json
        #[arg(long, default_value = "dot")]
        format: String,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write motif letter counts and the category and animal matrices.
    Motifs {
        #[arg(long, default_value = "corpus.json")]
        corpus: PathBuf,
        #[arg(long, default_value = "mentions.json")]
        mentions: PathBuf,
        /// Count each letter at most once per tale.
        #[arg(long)]
        per_tale: bool,
        /// occurrences or tale-presence, for the animal frequency filter.
        #[arg(long, default_value = "occurrences")]
        count_mode: String,
        #[arg(long, default_value_t = folkzoo::report::DEFAULT_ANIMAL_MIN_FREQ)]
        animal_min_freq: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// PCA of a motif-matrix CSV with CSV tables and an SVG biplot.
    Pca {
        input: PathBuf,
        /// Artifact name: writes pca_<name>_*.csv and biplot_<name>.svg.
        #[arg(long, default_value = "category")]
        name: String,
        #[arg(long, default_value_t = folkzoo::pca::DEFAULT_COMPONENTS)]
        components: usize,
        /// Divide centered columns by their sample standard deviation.
        #[arg(long)]
        standardize: bool,
        /// Arrow scale; by default the longest arrow reaches 80% of the point cloud.
        #[arg(long)]
        loading_scale: Option<f64>,
        /// Treat the input as raw counts and divide each row by its total.
        #[arg(long)]
        row_relative: bool,
        /// Biplot title; defaults to the title `run` uses for this name.
        #[arg(long)]
        title: Option<String>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Draw the thresholded co-occurrence graph over an animal biplot.
    Overlay {
        #[arg(long, default_value = "cooccurrence.json")]
        graph: PathBuf,
        #[arg(long, default_value_t = folkzoo::report::DEFAULT_COOCCUR_THRESHOLD)]
        threshold: u64,
        #[arg(long, default_value = "pca_animal_scores.csv")]
        scores: PathBuf,
        #[arg(long, default_value = "pca_animal_loadings.csv")]
        loadings: PathBuf,
        #[arg(long)]
        loading_scale: Option<f64>,
        #[arg(short, long, default_value = "overlay.svg")]
        out: PathBuf,
    },
    /// Run the whole pipeline from a key=value config file.
    Run {
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Override a config key; may be repeated. Flags win over the file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        lexicon: Option<String>,
        #[arg(long)]
        output_dir: Option<String>,
    },
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long, default_value = "corpus.json")]
    corpus: PathBuf,
    /// WordNet directory (index.noun, data.noun) or lemma/synset/hypernym TSV.
    #[arg(long)]
    lexicon: String,
    #[arg(long)]
    aliases: Option<String>,
    #[arg(long)]
    exclusions: Option<String>,
    #[arg(long)]
    rollup_targets: Option<String>,
    #[arg(long)]
    animal_root: Option<String>,
    #[arg(long)]
    min_count: Option<String>,
    #[arg(long)]
    count_mode: Option<String>,
    #[arg(long)]
    pair_mode: Option<String>,
    /// Do not subtract parenthesised substitutions.
    #[arg(long)]
    no_substitutions: bool,
    #[arg(short, long, default_value = "mentions.json")]
    out: PathBuf,
}

fn parse_enum<T: serde::de::DeserializeOwned>(key: &str, value: &str) -> Result<T, ReportError> {
    serde_json::from_value(serde_json::Value::String(value.to_owned())).map_err(|e| {
        ConfigError::InvalidValue {
            key: key.to_owned(),
            value: value.to_owned(),
            reason: e.to_string(),
        }
        .into()
    })
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_owned(),
        source,
    }
}

fn execute(command: Command) -> Result<(), ReportError> {
    let here = Path::new("");
    match command {
        Command::Parse { catalogue, out } => {
            let parsed = stage_parse(&catalogue, &out)?;
            for d in &parsed.diagnostics {
                eprintln!("{}: {d}", catalogue.display());
            }
            println!(
                "{} records, {} analyzable",
                parsed.corpus.tales.len(),
                parsed.corpus.analyzable_count()
            );
        }
        Command::Extract(a) => {
            let mut cfg = PipelineConfig::default();
            cfg.set("lexicon", &a.lexicon, here)?;
            let optional = [
                ("aliases", &a.aliases),
                ("exclusions", &a.exclusions),
                ("rollup_targets", &a.rollup_targets),
                ("animal_root", &a.animal_root),
                ("min_count", &a.min_count),
                ("count_mode", &a.count_mode),
                ("pair_mode", &a.pair_mode),
            ];
            for (key, value) in optional {
                if let Some(v) = value {
                    cfg.set(key, v, here)?;
                }
            }
            cfg.substitutions = !a.no_substitutions;
            let (lex, _) = load_lexicon(&cfg)?;
            let table = stage_extract(&a.corpus, &lex, &cfg.extraction_options(), &a.out)?;
            println!(
                "{} mentions of {} animals",
                table.mentions.len(),
                table.counts.len()
            );
        }
        Command::Cooccur {
            mentions,
            min_weight,
            format,
            out,
        } => {
            let format: GraphFormat = format.parse()?;
            let table = MentionTable::from_json(
                &std::fs::read_to_string(&mentions).map_err(io_err(&mentions))?,
            )?;
            let mut graph = build_graph(&table)?;
            if let Some(k) = min_weight {
                graph = filter_graph(&graph, k);
            }
            match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
                    export_graph(&graph, format, &mut w)?;
                    w.flush().map_err(io_err(&path))?;
                }
                None => export_graph(&graph, format, &mut io::stdout().lock())?,
            }
        }
        Command::Motifs {
            corpus,
            mentions,
            per_tale,
            count_mode,
            animal_min_freq,
            out_dir,
        } => {
            let unit = if per_tale {
                MotifUnit::PerTale
            } else {
                MotifUnit::Occurrences
            };
            let mode = parse_enum("count_mode", &count_mode)?;
            std::fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
            let counts = stage_motifs(&corpus, &mentions, unit, mode, animal_min_freq, &out_dir)?;
            if let Some(top) = folkzoo::motif_stats::argmax_letter(&counts) {
                println!("most frequent motif letter: {top} ({})", counts[&top]);
            }
        }
        Command::Pca {
            input,
            name,
            components,
            standardize,
            loading_scale,
            row_relative,
            title,
            out_dir,
        } => {
            std::fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
            let result = PcaStage {
                name: &name,
                input: &input,
                input_kind: if row_relative {
                    MatrixKind::RawCounts
                } else {
                    MatrixKind::Relative
                },
                row_relative,
                options: PcaOptions {
                    components,
                    standardize,
                },
                loading_scale,
                dir: &out_dir,
                title: title.as_deref().unwrap_or(biplot_title(&name)),
            }
            .run()?;
            for (i, (e, c)) in result
                .explained_ratio
                .iter()
                .zip(&result.cumulative_ratio)
                .enumerate()
            {
                println!("PC{}: explained {e:.4}, cumulative {c:.4}", i + 1);
            }
        }
        Command::Overlay {
            graph,
            threshold,
            scores,
            loadings,
            loading_scale,
            out,
        } => {
            for d in stage_overlay(&graph, threshold, &scores, &loadings, loading_scale, &out)? {
                eprintln!("{d}");
            }
        }
        Command::Run {
            config,
            overrides,
            corpus,
            lexicon,
            output_dir,
        } => {
            let mut cfg = match &config {
                Some(path) => PipelineConfig::load(path)?,
                None => PipelineConfig::default(),
            };
            for (key, value) in [
                ("corpus", corpus),
                ("lexicon", lexicon),
                ("output_dir", output_dir),
            ] {
                if let Some(v) = value {
                    cfg.set(key, &v, here)?;
                }
            }
            for item in &overrides {
                let (key, value) = item.split_once('=').ok_or_else(|| ConfigError::Syntax {
                    line: 0,
                    text: item.clone(),
                })?;
                cfg.set(key.trim(), value.trim(), here)?;
            }
            let summary = run_pipeline(&cfg)?;
            for d in &summary.diagnostics {
                eprintln!("{d}");
            }
            let pct = |v: Option<f64>| v.map_or_else(|| "n/a".to_owned(), |v| format!("{v:.4}"));
            println!("analyzable tale types: {}", summary.analyzable_tales);
            println!(
                "most frequent motif letter: {}",
                summary
                    .argmax_letter
                    .map_or_else(|| "none".to_owned(), |l| l.to_string())
            );
            println!(
                "category PCA cumulative ratio (PC1-PC2): {}",
                pct(summary.category_pc2())
            );
            println!(
                "animal PCA cumulative ratio (PC1-PC2): {}",
                pct(summary.animal_pc2())
            );
            println!("artifacts written to {}", cfg.output_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            } as u8);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            debug_assert!(code != EXIT_OK && code <= EXIT_IO + 1);
            ExitCode::from(code as u8)
        }
    }
}
