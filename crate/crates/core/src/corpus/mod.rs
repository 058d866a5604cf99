//! Tale-type catalogue model and the plain-text catalogue parser.
//!
//! A catalogue file holds records separated by blank lines. The first line of
//! a record is the header `ATU <number>[<variant>] <dash> <title>`, where the
//! dash is U+2014, U+2013, `-` or `--`. The following lines are the
//! description with inline motif codes. Lines starting at column 0 with
//! `Combinations:`, `Remarks:` or `Literature:` open a trailing section that
//! runs until the next section or the end of the record.

mod id;
mod motif;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use id::{category_of, AtuId, Category, MAX_TALE_NUMBER, MIN_TALE_NUMBER};
pub use motif::{
    extract_motif_codes, scan_motif_codes, MotifCode, MotifLetter, MotifScan, RejectedToken,
    MOTIF_LETTERS,
};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record header ({reason}): {text:?}")]
    MalformedHeader {
        line: usize,
        reason: String,
        text: String,
    },
    #[error("line {line}: duplicate tale type ATU {id} (first defined on line {first_line})")]
    DuplicateId {
        id: AtuId,
        line: usize,
        first_line: usize,
    },
    #[error("tale index {0} is outside 1..=299")]
    NumberOutOfRange(u32),
    #[error("invalid tale index {0:?}")]
    InvalidId(String),
    #[error("corpus document is inconsistent: {0}")]
    Inconsistent(String),
    #[error("corpus JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SectionKind {
    Combinations,
    Remarks,
    Literature,
}

impl SectionKind {
    pub const ALL: [SectionKind; 3] = [Self::Combinations, Self::Remarks, Self::Literature];

    pub fn label(self) -> &'static str {
        match self {
            Self::Combinations => "Combinations",
            Self::Remarks => "Remarks",
            Self::Literature => "Literature",
        }
    }

    fn split_header(line: &str) -> Option<(Self, &str)> {
        Self::ALL.into_iter().find_map(|kind| {
            line.strip_prefix(kind.label())
                .and_then(|rest| rest.strip_prefix(':'))
                .map(|rest| (kind, rest.trim()))
        })
    }
}

/// A trailing section kept verbatim; never analysed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub kind: SectionKind,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaleType {
    pub id: AtuId,
    pub title: String,
    pub category: Category,
    /// Content lines between the header and the first trailing section.
    pub description: String,
    pub motifs: Vec<MotifCode>,
    /// The record carries no tale content of its own (a bare `See ATU ...`
    /// cross-reference, or no description at all).
    pub is_reference_only: bool,
    pub sections: Vec<Section>,
}

impl TaleType {
    /// Builds a record from its parts, deriving category, motifs and the
    /// reference-only flag.
    pub fn new(id: AtuId, title: impl Into<String>, description: impl Into<String>) -> Self {
        let description = description.into();
        let is_reference_only = is_cross_reference(&description);
        let motifs = if is_reference_only {
            Vec::new()
        } else {
            extract_motif_codes(&description)
        };
        Self {
            id,
            title: title.into(),
            category: id.category(),
            description,
            motifs,
            is_reference_only,
            sections: Vec::new(),
        }
    }

    pub fn is_analyzable(&self) -> bool {
        !self.is_reference_only
    }

    pub fn section(&self, kind: SectionKind) -> Option<&str> {
        self.sections
            .iter()
            .find(|s| s.kind == kind)
            .map(|s| s.text.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub tales: Vec<TaleType>,
    /// `sha256:<hex>` of the catalogue bytes this corpus was parsed from.
    pub source_digest: String,
}

impl Corpus {
    /// Builds a corpus from records, checking id uniqueness and categories.
    pub fn from_tales(tales: Vec<TaleType>, source_digest: String) -> Result<Self, CorpusError> {
        let corpus = Self {
            tales,
            source_digest,
        };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen: HashMap<AtuId, usize> = HashMap::new();
        for (i, tale) in self.tales.iter().enumerate() {
            if let Some(first) = seen.insert(tale.id, i) {
                return Err(CorpusError::Inconsistent(format!(
                    "ATU {} appears at positions {first} and {i}",
                    tale.id
                )));
            }
            if tale.category != tale.id.category() {
                return Err(CorpusError::Inconsistent(format!(
                    "ATU {} is labelled {} but belongs to {}",
                    tale.id,
                    tale.category,
                    tale.id.category()
                )));
            }
            if tale.is_reference_only && !tale.motifs.is_empty() {
                return Err(CorpusError::Inconsistent(format!(
                    "reference-only ATU {} carries motifs",
                    tale.id
                )));
            }
        }
        Ok(())
    }

    pub fn analyzable(&self) -> impl Iterator<Item = &TaleType> {
        self.tales.iter().filter(|t| t.is_analyzable())
    }

    pub fn analyzable_count(&self) -> usize {
        self.analyzable().count()
    }

    pub fn get(&self, id: AtuId) -> Option<&TaleType> {
        self.tales.iter().find(|t| t.id == id)
    }

    /// Analyzable tale counts for every category, zeros included.
    pub fn category_counts(&self) -> BTreeMap<Category, usize> {
        let mut counts: BTreeMap<Category, usize> = Category::ALL.iter().map(|&c| (c, 0)).collect();
        for tale in self.analyzable() {
            *counts.entry(tale.category).or_default() += 1;
        }
        counts
    }

    /// Renders the corpus in the canonical catalogue layout.
    pub fn to_catalogue_string(&self) -> String {
        let mut out = String::new();
        for (i, tale) in self.tales.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            write_record(&mut out, tale);
        }
        out
    }

    pub fn from_json(json: &str) -> Result<Self, CorpusError> {
        let corpus: Corpus = serde_json::from_str(json)?;
        corpus.validate()?;
        Ok(corpus)
    }
}

fn write_record(out: &mut String, tale: &TaleType) {
    let _ = writeln!(out, "ATU {} \u{2014} {}", tale.id, tale.title);
    if !tale.description.is_empty() {
        out.push_str(&tale.description);
        out.push('\n');
    }
    for section in &tale.sections {
        out.push_str(section.kind.label());
        out.push(':');
        if !section.text.is_empty() && !section.text.starts_with('\n') {
            out.push(' ');
        }
        out.push_str(&section.text);
        out.push('\n');
    }
}

/// Non-fatal findings collected while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub corpus: Corpus,
    pub diagnostics: Vec<Diagnostic>,
}

fn header_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"^ATU[ \t]+(\d+)([A-Za-z]?)(\**)[ \t]+(?:\x{2014}|\x{2013}|--?)[ \t]+(\S.*?)\s*$",
        )
        .expect("static regex")
    })
}

fn cross_reference_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)^see atu ?\d{1,3}[a-z]?\*{0,2} ?[.;!]?$").expect("static regex")
    })
}

/// True when `description` carries no tale content: empty, or only `See ATU <id>`.
pub fn is_cross_reference(description: &str) -> bool {
    let normalized = description.split_whitespace().collect::<Vec<_>>().join(" ");
    normalized.is_empty() || cross_reference_regex().is_match(&normalized)
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Parses a catalogue file.
pub fn parse_corpus(input: &str) -> Result<Parsed, CorpusError> {
    let mut tales = Vec::new();
    let mut diagnostics = Vec::new();
    let mut first_lines: HashMap<AtuId, usize> = HashMap::new();

    let mut record: Vec<(usize, &str)> = Vec::new();
    let lines = input
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));
    for (line_no, line) in lines.chain(std::iter::once((0, ""))) {
        if !line.trim().is_empty() {
            record.push((line_no, line));
            continue;
        }
        if record.is_empty() {
            continue;
        }
        let tale = parse_record(&record, &mut diagnostics)?;
        let header_line = record[0].0;
        if let Some(&first_line) = first_lines.get(&tale.id) {
            return Err(CorpusError::DuplicateId {
                id: tale.id,
                line: header_line,
                first_line,
            });
        }
        first_lines.insert(tale.id, header_line);
        tales.push(tale);
        record.clear();
    }

    let corpus = Corpus::from_tales(tales, digest_bytes(input.as_bytes()))?;
    Ok(Parsed {
        corpus,
        diagnostics,
    })
}

fn parse_header(line_no: usize, line: &str) -> Result<(AtuId, String), CorpusError> {
    let malformed = |reason: &str| CorpusError::MalformedHeader {
        line: line_no,
        reason: reason.to_string(),
        text: line.to_string(),
    };
    let caps = header_regex()
        .captures(line)
        .ok_or_else(|| malformed("expected `ATU <number> \u{2014} <title>`"))?;
    let number: u32 = caps[1]
        .parse()
        .map_err(|_| malformed("index number too large"))?;
    if !(u32::from(MIN_TALE_NUMBER)..=u32::from(MAX_TALE_NUMBER)).contains(&number) {
        return Err(malformed("index number outside 1..=299"));
    }
    let letter = caps[2].chars().next();
    let stars = u8::try_from(caps[3].len()).unwrap_or(u8::MAX);
    let id =
        AtuId::with_variant(number as u16, letter, stars).map_err(|e| malformed(&e.to_string()))?;
    Ok((id, caps[4].to_string()))
}

fn parse_record(
    record: &[(usize, &str)],
    diagnostics: &mut Vec<Diagnostic>,
) -> Result<TaleType, CorpusError> {
    let (header_line, header) = record[0];
    let (id, title) = parse_header(header_line, header)?;

    let mut description_lines: Vec<&str> = Vec::new();
    let mut sections: Vec<Section> = Vec::new();
    for &(_, line) in &record[1..] {
        let line = line.trim_end();
        if let Some((kind, rest)) = SectionKind::split_header(line) {
            sections.push(Section {
                kind,
                text: rest.to_string(),
            });
        } else if let Some(section) = sections.last_mut() {
            section.text.push('\n');
            section.text.push_str(line);
        } else {
            description_lines.push(line);
        }
    }

    let description = description_lines.join("\n");
    let mut tale = TaleType::new(id, title, description);
    tale.sections = sections;

    if !tale.is_reference_only {
        for rejected in scan_motif_codes(&tale.description).rejected {
            let line = header_line + 1 + tale.description[..rejected.offset].matches('\n').count();
            diagnostics.push(Diagnostic {
                line,
                message: format!(
                    "ATU {}: skipped motif token {:?}: {}",
                    tale.id, rejected.token, rejected.reason
                ),
            });
        }
    }
    Ok(tale)
}
