//! Pipeline orchestration: configuration, staged artifact writing and the
//! co-occurrence overlay.

mod config;
mod overlay;
mod pipeline;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cooccurrence::GraphError;
use crate::corpus::CorpusError;
use crate::csv_io::CsvError;
use crate::extraction::ExtractionError;
use crate::lexicon::LexiconError;
use crate::motif_stats::MotifError;
use crate::pca::PcaError;

pub use config::{
    AnimalPcaInput, ConfigError, PipelineConfig, DEFAULT_ANIMAL_MIN_FREQ, DEFAULT_ANIMAL_ROOT,
    DEFAULT_COOCCUR_THRESHOLD, KEYS,
};
pub use overlay::{render_overlay, OverlayError};
pub use pipeline::{
    biplot_title, load_lexicon, run_pipeline, stage_cooccur, stage_extract, stage_motifs,
    stage_overlay, stage_parse, PcaStage, RunSummary, ARTIFACTS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Extraction(#[from] ExtractionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Motif(#[from] MotifError),
    #[error(transparent)]
    Pca(#[from] PcaError),
    #[error(transparent)]
    Overlay(#[from] OverlayError),
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: CsvError,
    },
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<ReportError>,
    },
}

impl ReportError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } => EXIT_IO,
            Self::Stage { source, .. } => source.exit_code(),
            Self::Corpus(CorpusError::Inconsistent(_))
            | Self::Extraction(ExtractionError::Inconsistent(_))
            | Self::Graph(
                GraphError::SubstitutionExceedsCombinations { .. } | GraphError::Inconsistent(_),
            )
            | Self::Motif(MotifError::WrongKind { .. } | MotifError::Shape { .. })
            | Self::Pca(PcaError::NoConvergence { .. }) => EXIT_INVARIANT,
            Self::Graph(GraphError::Io(_))
            | Self::Pca(PcaError::Io(_))
            | Self::Overlay(OverlayError::Io(_))
            | Self::Csv {
                source: CsvError::Io(_),
                ..
            } => EXIT_IO,
            _ => EXIT_VALIDATION,
        }
    }

    pub fn stage(self, stage: &'static str) -> Self {
        match self {
            Self::Stage { .. } => self,
            other => Self::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, ReportError> {
    std::fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>, ReportError> {
    std::fs::read(path).map_err(|source| ReportError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    std::fs::write(path, bytes).map_err(|source| ReportError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub(crate) fn sorted_json<T: serde::Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let value = serde_json::to_value(value)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let io = ReportError::Io {
            path: "x".into(),
            source: std::io::Error::from(std::io::ErrorKind::NotFound),
        };
        assert_eq!(io.exit_code(), EXIT_IO);
        assert_eq!(io.stage("parse").exit_code(), EXIT_IO);
        let cfg = ReportError::from(ConfigError::UnknownKey("k".into()));
        assert_eq!(cfg.exit_code(), EXIT_VALIDATION);
        let inv = ReportError::from(CorpusError::Inconsistent("x".into())).stage("parse");
        assert_eq!(inv.exit_code(), EXIT_INVARIANT);
        assert!(inv.to_string().starts_with("parse: "));
    }
}
