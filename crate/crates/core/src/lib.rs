//! Computational folkloristics over ATU-style animal tale catalogues.
//!
//! The pipeline parses a tale-type catalogue, finds animal mentions through
//! hypernym closure in a lexical database, builds a substitution-adjusted
//! co-occurrence graph, tabulates motif-index letters per category and per
//! animal, and projects those tables with a principal component analysis.

pub mod cooccurrence;
pub mod corpus;
pub mod csv_io;
pub mod extraction;
pub mod lexicon;
pub mod matrix;
pub mod motif_stats;
pub mod pca;
pub mod report;
pub mod scalar;
mod svg;

pub use corpus::{parse_corpus, AtuId, Category, Corpus, MotifCode, MotifLetter, TaleType};
pub use matrix::Matrix;
pub use scalar::Scalar;

/// Double-precision instantiations; the pipeline and the CLI use these.
pub type Matrix64 = Matrix<f64>;
pub type MotifMatrix64 = motif_stats::MotifMatrix<f64>;
pub type PcaResult64 = pca::PcaResult<f64>;
pub type Svd64 = pca::Svd<f64>;
pub type Biplot64 = pca::Biplot<f64>;

/// Single-precision instantiations.
pub type Matrix32 = Matrix<f32>;
pub type MotifMatrix32 = motif_stats::MotifMatrix<f32>;
pub type PcaResult32 = pca::PcaResult<f32>;
pub type Svd32 = pca::Svd<f32>;
pub type Biplot32 = pca::Biplot<f32>;
