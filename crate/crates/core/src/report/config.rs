//! `key = value` pipeline configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Relative paths are
//! resolved against the directory of the file they were read from; values
//! given on the command line resolve against the working directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extraction::{CountMode, ExtractionOptions, PairMode};
use crate::lexicon::DEFAULT_MIN_COUNT;
use crate::motif_stats::MotifUnit;
use crate::pca::{PcaOptions, DEFAULT_COMPONENTS};

pub const DEFAULT_COOCCUR_THRESHOLD: u64 = 10;
pub const DEFAULT_ANIMAL_MIN_FREQ: u64 = 30;
pub const DEFAULT_ANIMAL_ROOT: &str = "animal";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key = value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown configuration key {0:?}")]
    UnknownKey(String),
    #[error("{key} is set twice (lines {first} and {second})")]
    Duplicate {
        key: String,
        first: usize,
        second: usize,
    },
    #[error("{key}: invalid value {value:?} ({reason})")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("{0} is required")]
    Missing(&'static str),
}

/// Input for the animal PCA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnimalPcaInput {
    /// Each animal's row divided by its total.
    #[default]
    RowRelative,
    RawCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus: PathBuf,
    /// A directory holding `index.noun` and `data.noun`, or a TSV file.
    pub lexicon: PathBuf,
    pub aliases: Option<PathBuf>,
    pub exclusions: Option<PathBuf>,
    pub rollup_targets: Option<PathBuf>,
    pub animal_root: String,
    pub min_count: u64,
    pub cooccur_threshold: u64,
    pub animal_min_freq: u64,
    pub count_mode: CountMode,
    pub pair_mode: PairMode,
    pub motif_unit: MotifUnit,
    pub substitutions: bool,
    pub components: usize,
    pub standardize: bool,
    pub loading_scale: Option<f64>,
    pub animal_pca_input: AnimalPcaInput,
    pub output_dir: PathBuf,
    /// Values exactly as written, for the manifest echo.
    echo: BTreeMap<String, String>,
}

pub const KEYS: [&str; 18] = [
    "corpus",
    "lexicon",
    "aliases",
    "exclusions",
    "rollup_targets",
    "animal_root",
    "min_count",
    "cooccur_threshold",
    "animal_min_freq",
    "count_mode",
    "pair_mode",
    "motif_unit",
    "substitutions",
    "components",
    "standardize",
    "loading_scale",
    "animal_pca_input",
    "output_dir",
];

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            corpus: PathBuf::new(),
            lexicon: PathBuf::new(),
            aliases: None,
            exclusions: None,
            rollup_targets: None,
            animal_root: DEFAULT_ANIMAL_ROOT.to_owned(),
            min_count: DEFAULT_MIN_COUNT,
            cooccur_threshold: DEFAULT_COOCCUR_THRESHOLD,
            animal_min_freq: DEFAULT_ANIMAL_MIN_FREQ,
            count_mode: CountMode::default(),
            pair_mode: PairMode::default(),
            motif_unit: MotifUnit::default(),
            substitutions: true,
            components: DEFAULT_COMPONENTS,
            standardize: false,
            loading_scale: None,
            animal_pca_input: AnimalPcaInput::default(),
            output_dir: PathBuf::new(),
            echo: BTreeMap::new(),
        }
    }
}

impl PipelineConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: raw.to_owned(),
                });
            };
            let key = key.trim();
            if let Some(first) = seen.insert(key.to_owned(), i + 1) {
                return Err(ConfigError::Duplicate {
                    key: key.to_owned(),
                    first,
                    second: i + 1,
                });
            }
            config.set(key, value.trim(), base)?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, super::ReportError> {
        let text = super::read_text(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        Ok(Self::parse(&text, base)?)
    }

    /// Sets one key; later calls win, which is how flags override the file.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), ConfigError> {
        let invalid = |reason: &str| ConfigError::InvalidValue {
            key: key.to_owned(),
            value: value.to_owned(),
            reason: reason.to_owned(),
        };
        let path = || -> Result<PathBuf, ConfigError> {
            if value.is_empty() {
                return Err(invalid("empty path"));
            }
            Ok(base.join(value))
        };
        let count = || value.parse::<u64>().map_err(|e| invalid(&e.to_string()));
        let flag = || match value {
            "true" | "yes" | "on" | "1" => Ok(true),
            "false" | "no" | "off" | "0" => Ok(false),
            _ => Err(invalid("expected true or false")),
        };
        match key {
            "corpus" => self.corpus = path()?,
            "lexicon" => self.lexicon = path()?,
            "aliases" => self.aliases = Some(path()?),
            "exclusions" => self.exclusions = Some(path()?),
            "rollup_targets" => self.rollup_targets = Some(path()?),
            "output_dir" => self.output_dir = path()?,
            "animal_root" if value.is_empty() => return Err(invalid("empty root")),
            "animal_root" => self.animal_root = value.to_owned(),
            "min_count" => self.min_count = count()?,
            "cooccur_threshold" => self.cooccur_threshold = count()?,
            "animal_min_freq" => self.animal_min_freq = count()?,
            "count_mode" => self.count_mode = parse_enum(value).map_err(|r| invalid(&r))?,
            "pair_mode" => self.pair_mode = parse_enum(value).map_err(|r| invalid(&r))?,
            "motif_unit" => self.motif_unit = parse_enum(value).map_err(|r| invalid(&r))?,
            "animal_pca_input" => {
                self.animal_pca_input = parse_enum(value).map_err(|r| invalid(&r))?
            }
            "substitutions" => self.substitutions = flag()?,
            "standardize" => self.standardize = flag()?,
            "components" => {
                self.components = value
                    .parse()
                    .map_err(|_| invalid("expected a positive integer"))?;
                if self.components < 2 {
                    return Err(invalid("biplots need at least 2 components"));
                }
            }
            "loading_scale" if value == "auto" => self.loading_scale = None,
            "loading_scale" => {
                let v: f64 = value
                    .parse()
                    .map_err(|_| invalid("expected a number or auto"))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(invalid("must be finite and non-negative"));
                }
                self.loading_scale = Some(v);
            }
            _ => return Err(ConfigError::UnknownKey(key.to_owned())),
        }
        self.echo.insert(key.to_owned(), value.to_owned());
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, p) in [
            ("corpus", &self.corpus),
            ("lexicon", &self.lexicon),
            ("output_dir", &self.output_dir),
        ] {
            if p.as_os_str().is_empty() {
                return Err(ConfigError::Missing(name));
            }
        }
        Ok(())
    }

    pub fn extraction_options(&self) -> ExtractionOptions {
        ExtractionOptions {
            count_mode: self.count_mode,
            pair_mode: self.pair_mode,
            detect_substitutions: self.substitutions,
        }
    }

    pub fn pca_options(&self) -> PcaOptions {
        PcaOptions {
            components: self.components,
            standardize: self.standardize,
        }
    }

    /// Every key except `output_dir`, with paths as written and defaults filled in.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for key in KEYS {
            if key == "output_dir" {
                continue;
            }
            let value = match self.echo.get(key) {
                Some(v) => v.clone(),
                None => match key {
                    "aliases" | "exclusions" | "rollup_targets" => "builtin".to_owned(),
                    "animal_root" => self.animal_root.clone(),
                    "min_count" => self.min_count.to_string(),
                    "cooccur_threshold" => self.cooccur_threshold.to_string(),
                    "animal_min_freq" => self.animal_min_freq.to_string(),
                    "count_mode" => enum_name(&self.count_mode),
                    "pair_mode" => enum_name(&self.pair_mode),
                    "motif_unit" => enum_name(&self.motif_unit),
                    "animal_pca_input" => enum_name(&self.animal_pca_input),
                    "substitutions" => self.substitutions.to_string(),
                    "components" => self.components.to_string(),
                    "standardize" => self.standardize.to_string(),
                    "loading_scale" => "auto".to_owned(),
                    _ => String::new(),
                },
            };
            out.insert(key.to_owned(), value);
        }
        out
    }
}

fn parse_enum<T: DeserializeOwned>(value: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(value.to_owned())).map_err(|e| e.to_string())
}

fn enum_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}
