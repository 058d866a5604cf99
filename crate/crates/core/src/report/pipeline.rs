use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;

use crate::cooccurrence::{
    build_graph, export_graph, filter_graph, CooccurrenceGraph, GraphFormat,
};
use crate::corpus::{digest_bytes, parse_corpus, Corpus, MotifLetter, Parsed};
use crate::csv_io::{
    read_labeled, read_motif_matrix, write_letter_counts, write_loadings, write_motif_matrix,
    write_ratios, write_scores, CsvError,
};
use crate::extraction::{extract_mentions, CountMode, ExtractionOptions, MentionTable};
use crate::lexicon::{
    default_aliases, default_exclusions, default_rollup_targets, load_lexicon_tsv,
    load_wordnet_nouns, parse_alias_table, parse_word_list, Lexicon,
};
use crate::matrix::Matrix;
use crate::motif_stats::{
    animal_motif_matrix, argmax_letter, category_motif_matrix, center_columns, motif_letter_counts,
    to_relative, MatrixKind, MotifUnit,
};
use crate::pca::{
    biplot_coordinates, biplot_from_parts, pca_with, render_biplot_svg, PcaOptions, PcaResult,
};

use super::{
    read_bytes, read_text, render_overlay, sorted_json, write_bytes, AnimalPcaInput,
    PipelineConfig, ReportError,
};

/// Files a successful run leaves in the output directory.
pub const ARTIFACTS: [&str; 20] = [
    "corpus.json",
    "mentions.json",
    "cooccurrence.json",
    "cooccurrence.dot",
    "motif_counts.csv",
    "category_motif_relative.csv",
    "category_motif_centered.csv",
    "animal_motif.csv",
    "pca_category_scores.csv",
    "pca_category_loadings.csv",
    "pca_category_ratios.csv",
    "pca_animal_scores.csv",
    "pca_animal_loadings.csv",
    "pca_animal_ratios.csv",
    "biplot_category.svg",
    "biplot_animal.svg",
    "overlay.svg",
    "summary.json",
    "run_manifest.json",
    "diagnostics.txt",
];

fn csv_err(path: &Path) -> impl FnOnce(CsvError) -> ReportError + '_ {
    move |source| ReportError::Csv {
        path: path.to_owned(),
        source,
    }
}

fn write_csv(
    path: &Path,
    f: impl FnOnce(&mut Vec<u8>) -> Result<(), CsvError>,
) -> Result<(), ReportError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(csv_err(path))?;
    write_bytes(path, &buf)
}

fn json_err(e: serde_json::Error) -> ReportError {
    ReportError::Corpus(e.into())
}

/// Parses the catalogue at `catalogue` and writes the corpus JSON to `out`.
pub fn stage_parse(catalogue: &Path, out: &Path) -> Result<Parsed, ReportError> {
    let text = read_text(catalogue)?;
    let parsed = parse_corpus(&text)?;
    write_bytes(
        out,
        sorted_json(&parsed.corpus).map_err(json_err)?.as_bytes(),
    )?;
    Ok(parsed)
}

fn load_corpus(path: &Path) -> Result<Corpus, ReportError> {
    Ok(Corpus::from_json(&read_text(path)?)?)
}

fn load_mentions(path: &Path) -> Result<MentionTable, ReportError> {
    Ok(MentionTable::from_json(&read_text(path)?)?)
}

/// Builds the lexicon named by the configuration. Also returns digests of
/// every file it read, keyed by role.
pub fn load_lexicon(
    cfg: &PipelineConfig,
) -> Result<(Lexicon, BTreeMap<String, String>), ReportError> {
    let mut digests = BTreeMap::new();
    let mut read = |role: &str, path: &Path| -> Result<String, ReportError> {
        let bytes = read_bytes(path)?;
        digests.insert(role.to_owned(), digest_bytes(&bytes));
        String::from_utf8(bytes).map_err(|e| ReportError::Io {
            path: path.to_owned(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
        })
    };
    let graph = if cfg.lexicon.is_dir() {
        let index = read("lexicon/index.noun", &cfg.lexicon.join("index.noun"))?;
        let data = read("lexicon/data.noun", &cfg.lexicon.join("data.noun"))?;
        load_wordnet_nouns(&index, &data)?
    } else {
        load_lexicon_tsv(&read("lexicon", &cfg.lexicon)?)?
    };
    let aliases = match &cfg.aliases {
        Some(p) => parse_alias_table(&read("aliases", p)?)?,
        None => default_aliases(),
    };
    let exclusions = match &cfg.exclusions {
        Some(p) => parse_word_list(&read("exclusions", p)?),
        None => default_exclusions(),
    };
    let targets = match &cfg.rollup_targets {
        Some(p) => parse_word_list(&read("rollup_targets", p)?),
        None => default_rollup_targets(),
    };
    let lex = Lexicon::new(graph, &cfg.animal_root)?
        .with_aliases(aliases)?
        .with_exclusions(exclusions)?
        .with_rollup_targets(targets)
        .with_min_count(cfg.min_count);
    Ok((lex, digests))
}

pub fn stage_extract(
    corpus_json: &Path,
    lex: &Lexicon,
    options: &ExtractionOptions,
    out: &Path,
) -> Result<MentionTable, ReportError> {
    let corpus = load_corpus(corpus_json)?;
    let table = extract_mentions(&corpus, lex, options);
    table.validate()?;
    write_bytes(out, table.to_json()?.as_bytes())?;
    Ok(table)
}

/// Writes the full graph as JSON and the thresholded graph as DOT; returns the
/// thresholded graph.
pub fn stage_cooccur(
    mentions_json: &Path,
    threshold: u64,
    json_out: &Path,
    dot_out: &Path,
) -> Result<CooccurrenceGraph, ReportError> {
    let table = load_mentions(mentions_json)?;
    let graph = build_graph(&table)?;
    write_bytes(json_out, graph.to_json()?.as_bytes())?;
    let filtered = filter_graph(&graph, threshold);
    let mut dot = Vec::new();
    export_graph(&filtered, GraphFormat::Dot, &mut dot)?;
    write_bytes(dot_out, &dot)?;
    Ok(filtered)
}

/// Writes the letter counts, the category matrices and the animal matrix into
/// `dir`; returns the letter counts.
pub fn stage_motifs(
    corpus_json: &Path,
    mentions_json: &Path,
    unit: MotifUnit,
    count_mode: CountMode,
    animal_min_freq: u64,
    dir: &Path,
) -> Result<BTreeMap<MotifLetter, u64>, ReportError> {
    let corpus = load_corpus(corpus_json)?;
    let table = load_mentions(mentions_json)?;
    let counts = motif_letter_counts(&corpus, unit);
    write_csv(&dir.join("motif_counts.csv"), |b| {
        write_letter_counts(&counts, b)
    })?;

    let relative = to_relative(&category_motif_matrix::<f64>(&corpus, unit))?;
    write_csv(&dir.join("category_motif_relative.csv"), |b| {
        write_motif_matrix(&relative, b)
    })?;
    let centered = center_columns(&relative)?;
    write_csv(&dir.join("category_motif_centered.csv"), |b| {
        write_motif_matrix(&centered, b)
    })?;

    let freqs = table.frequencies(count_mode);
    let animals = animal_motif_matrix::<f64>(&corpus, &table, &freqs, animal_min_freq, unit);
    write_csv(&dir.join("animal_motif.csv"), |b| {
        write_motif_matrix(&animals, b)
    })?;
    Ok(counts)
}

/// Biplot title used by `run` for the two named PCAs; other names title themselves.
pub fn biplot_title(name: &str) -> &str {
    match name {
        "category" => "Motif frequency by category",
        "animal" => "Frequency of animals and motifs",
        other => other,
    }
}

/// One PCA run: a motif-matrix CSV in, `pca_<name>_*.csv` and `biplot_<name>.svg` out.
#[derive(Debug, Clone)]
pub struct PcaStage<'a> {
    pub name: &'a str,
    pub input: &'a Path,
    pub input_kind: MatrixKind,
    /// Divide each row by its sum before the PCA.
    pub row_relative: bool,
    pub options: PcaOptions,
    pub loading_scale: Option<f64>,
    pub dir: &'a Path,
    pub title: &'a str,
}

impl PcaStage<'_> {
    pub fn run(&self) -> Result<PcaResult<f64>, ReportError> {
        let text = read_bytes(self.input)?;
        let mut matrix =
            read_motif_matrix::<f64>(&text[..], self.input_kind).map_err(csv_err(self.input))?;
        if self.row_relative {
            matrix = to_relative(&matrix)?;
        }
        let result = pca_with(&matrix, &self.options)?;
        let path = |suffix: &str| self.dir.join(format!("pca_{}_{suffix}.csv", self.name));
        write_csv(&path("scores"), |b| write_scores(&result, b))?;
        write_csv(&path("loadings"), |b| write_loadings(&result, b))?;
        write_csv(&path("ratios"), |b| write_ratios(&result, b))?;
        let biplot = biplot_coordinates(&result, self.loading_scale)?;
        let mut svg = Vec::new();
        render_biplot_svg(&biplot, self.title, &mut svg)?;
        write_bytes(&self.dir.join(format!("biplot_{}.svg", self.name)), &svg)?;
        Ok(result)
    }
}

fn read_table(path: &Path) -> Result<(Vec<String>, Matrix<f64>), ReportError> {
    let bytes = read_bytes(path)?;
    let (_, labels, values) = read_labeled::<f64>(&bytes[..], None).map_err(csv_err(path))?;
    Ok((labels, values))
}

/// Draws the thresholded graph from `cooccurrence_json` over the biplot
/// rebuilt from the score and loading tables. Returns the diagnostics.
pub fn stage_overlay(
    cooccurrence_json: &Path,
    threshold: u64,
    scores_csv: &Path,
    loadings_csv: &Path,
    loading_scale: Option<f64>,
    out: &Path,
) -> Result<Vec<String>, ReportError> {
    let graph = filter_graph(
        &CooccurrenceGraph::from_json(&read_text(cooccurrence_json)?)?,
        threshold,
    );
    let (rows, scores) = read_table(scores_csv)?;
    let (vars, loadings) = read_table(loadings_csv)?;
    let biplot = biplot_from_parts(&rows, &scores, &vars, &loadings, loading_scale)?;
    let mut svg = Vec::new();
    let diagnostics = render_overlay(&graph, &biplot, &mut svg)?;
    write_bytes(out, &svg)?;
    Ok(diagnostics)
}

/// Headline statistics of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub analyzable_tales: usize,
    pub category_counts: BTreeMap<String, usize>,
    pub argmax_letter: Option<MotifLetter>,
    pub category_cumulative_ratio: Vec<f64>,
    pub animal_rows: usize,
    pub animal_cumulative_ratio: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl RunSummary {
    /// Cumulative explained variance through the second component.
    pub fn category_pc2(&self) -> Option<f64> {
        self.category_cumulative_ratio.get(1).copied()
    }

    pub fn animal_pc2(&self) -> Option<f64> {
        self.animal_cumulative_ratio.get(1).copied()
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: BTreeMap<String, String>,
    generated_at: String,
    inputs: &'a BTreeMap<String, String>,
    tool: BTreeMap<&'static str, &'static str>,
}

/// `SOURCE_DATE_EPOCH` pins the manifest timestamp for reproducible runs.
fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn rounded(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| {
            crate::csv_io::format_number(v)
                .parse()
                .expect("formatted number parses")
        })
        .collect()
}

fn run_stages(cfg: &PipelineConfig, dir: &Path) -> Result<RunSummary, ReportError> {
    let file = |name: &str| dir.join(name);
    let mut diagnostics = Vec::new();

    let parsed = stage_parse(&cfg.corpus, &file("corpus.json")).map_err(|e| e.stage("parse"))?;
    diagnostics.extend(parsed.diagnostics.iter().map(|d| format!("parse: {d}")));
    let corpus = parsed.corpus;

    let (lex, mut inputs) = load_lexicon(cfg).map_err(|e| e.stage("lexicon"))?;
    inputs.insert("corpus".to_owned(), corpus.source_digest.clone());

    stage_extract(
        &file("corpus.json"),
        &lex,
        &cfg.extraction_options(),
        &file("mentions.json"),
    )
    .map_err(|e| e.stage("extract"))?;
    stage_cooccur(
        &file("mentions.json"),
        cfg.cooccur_threshold,
        &file("cooccurrence.json"),
        &file("cooccurrence.dot"),
    )
    .map_err(|e| e.stage("cooccur"))?;
    let counts = stage_motifs(
        &file("corpus.json"),
        &file("mentions.json"),
        cfg.motif_unit,
        cfg.count_mode,
        cfg.animal_min_freq,
        dir,
    )
    .map_err(|e| e.stage("motifs"))?;

    let category = PcaStage {
        name: "category",
        input: &file("category_motif_relative.csv"),
        input_kind: MatrixKind::Relative,
        row_relative: false,
        options: cfg.pca_options(),
        loading_scale: cfg.loading_scale,
        dir,
        title: biplot_title("category"),
    }
    .run()
    .map_err(|e| e.stage("pca-category"))?;
    let animal = PcaStage {
        name: "animal",
        input: &file("animal_motif.csv"),
        input_kind: MatrixKind::RawCounts,
        row_relative: cfg.animal_pca_input == AnimalPcaInput::RowRelative,
        options: cfg.pca_options(),
        loading_scale: cfg.loading_scale,
        dir,
        title: biplot_title("animal"),
    }
    .run()
    .map_err(|e| e.stage("pca-animal"))?;

    let overlay = stage_overlay(
        &file("cooccurrence.json"),
        cfg.cooccur_threshold,
        &file("pca_animal_scores.csv"),
        &file("pca_animal_loadings.csv"),
        cfg.loading_scale,
        &file("overlay.svg"),
    )
    .map_err(|e| e.stage("overlay"))?;
    diagnostics.extend(overlay);

    let summary = RunSummary {
        analyzable_tales: corpus.analyzable_count(),
        category_counts: corpus
            .category_counts()
            .into_iter()
            .map(|(c, n)| (c.key().to_owned(), n))
            .collect(),
        argmax_letter: argmax_letter(&counts),
        category_cumulative_ratio: rounded(&category.cumulative_ratio),
        animal_rows: animal.row_labels.len(),
        animal_cumulative_ratio: rounded(&animal.cumulative_ratio),
        diagnostics: diagnostics.clone(),
    };
    let json = |e: serde_json::Error| json_err(e).stage("report");
    write_bytes(
        &file("summary.json"),
        sorted_json(&summary).map_err(json)?.as_bytes(),
    )?;
    let mut text = diagnostics.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    write_bytes(&file("diagnostics.txt"), text.as_bytes())?;

    let manifest = Manifest {
        config: cfg.echo(),
        generated_at: timestamp(),
        inputs: &inputs,
        tool: BTreeMap::from([
            ("name", env!("CARGO_PKG_NAME")),
            ("version", env!("CARGO_PKG_VERSION")),
        ]),
    };
    write_bytes(
        &file("run_manifest.json"),
        sorted_json(&manifest).map_err(json)?.as_bytes(),
    )?;
    Ok(summary)
}

/// Runs every stage into a staging directory next to the outputs and moves
/// the artifacts into `output_dir` only when all stages succeed.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary, ReportError> {
    cfg.validate()?;
    let out = &cfg.output_dir;
    let created = !out.exists();
    let io = |path: &Path| {
        let path = path.to_owned();
        move |source| ReportError::Io { path, source }
    };
    std::fs::create_dir_all(out).map_err(io(out))?;
    let staging: PathBuf = out.join(format!(".staging-{}", std::process::id()));
    if staging.exists() {
        std::fs::remove_dir_all(&staging).map_err(io(&staging))?;
    }
    std::fs::create_dir(&staging).map_err(io(&staging))?;

    let result = run_stages(cfg, &staging).and_then(|summary| {
        for name in ARTIFACTS {
            let (from, to) = (staging.join(name), out.join(name));
            std::fs::rename(&from, &to).map_err(io(&to))?;
        }
        Ok(summary)
    });
    let _ = std::fs::remove_dir_all(&staging);
    if result.is_err() && created {
        let _ = std::fs::remove_dir(out);
    }
    result
}
