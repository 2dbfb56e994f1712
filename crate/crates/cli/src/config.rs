//! Input documents and their loading.
//!
//! Every config carries `"version": 1` and rejects unknown keys. Parse
//! failures are reported with a pointer to the offending key.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use corona_lab::corona::GridSpec;
use corona_lab::ladder::LadderConfig;
use corona_lab::measures::{Piece, SimpleDensity, TargetFunctional};
use corona_lab::{DiscPoint, FunctionSpec};

pub const CONFIG_VERSION: u32 = 1;

/// A malformed input: unreadable file, bad JSON, or a rejected value.
#[derive(Debug)]
pub struct ConfigError {
    pub source: String,
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pointer.is_empty() {
            write!(f, "{}: {}", self.source, self.message)
        } else {
            write!(f, "{} at `{}`: {}", self.source, self.pointer, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn new(source: impl Into<String>, pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            source: source.into(),
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

/// Parses `text` as `T`, naming `source` in errors.
pub fn parse<T: DeserializeOwned>(source: &str, text: &str) -> Result<T, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = e.path().to_string();
        let pointer = if pointer == "." { String::new() } else { pointer };
        ConfigError::new(source, pointer, e.into_inner().to_string())
    })
}

pub fn load<T: DeserializeOwned + Versioned>(path: &Path) -> Result<T, ConfigError> {
    let source = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| ConfigError::new(&source, "", e.to_string()))?;
    let doc: T = parse(&source, &text)?;
    if doc.version() != CONFIG_VERSION {
        return Err(ConfigError::new(
            source,
            "version",
            format!("unsupported version {}, expected {CONFIG_VERSION}", doc.version()),
        ));
    }
    Ok(doc)
}

/// Loads an unversioned artifact such as a certificate.
pub fn load_artifact<T: DeserializeOwned>(path: &Path) -> Result<T, ConfigError> {
    let source = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| ConfigError::new(&source, "", e.to_string()))?;
    parse(&source, &text)
}

pub trait Versioned {
    fn version(&self) -> u32;
}

macro_rules! versioned {
    ($($t:ty),*) => {
        $(impl Versioned for $t {
            fn version(&self) -> u32 {
                self.version
            }
        })*
    };
}

versioned!(InstanceFile, SequenceFile, LadderFile, TraceFile, FitFile, DensityFile, ClusterFile);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub functions: Vec<FunctionSpec>,
    #[serde(default)]
    pub grid: GridSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub version: u32,
    pub points: Vec<DiscPoint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderFile {
    pub version: u32,
    pub zeros: Vec<DiscPoint>,
    pub candidates: Vec<DiscPoint>,
    pub config: LadderConfig,
}

fn default_threshold() -> f64 {
    corona_lab::hoffman::DEFAULT_CAUCHY_THRESHOLD
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub version: u32,
    pub function: FunctionSpec,
    pub sequence: Vec<DiscPoint>,
    pub grid_radius: f64,
    pub grid_size: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

/// Cells of the fitting partition, explicit or graded toward 0.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PartitionSpec {
    Cells(Vec<(f64, f64)>),
    Graded {
        window: f64,
        cells_per_side: usize,
        ratio: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitFile {
    pub version: u32,
    pub targets: TargetFunctional,
    pub partition: PartitionSpec,
    pub eps: f64,
    #[serde(default)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub version: u32,
    pub pieces: Vec<Piece>,
    /// Treat coefficients as relative weights and rescale to unit mass.
    #[serde(default)]
    pub normalize: bool,
}

impl DensityFile {
    pub fn density(self) -> corona_lab::Result<SimpleDensity> {
        if self.normalize {
            SimpleDensity::normalized(self.pieces)
        } else {
            SimpleDensity::new(self.pieces)
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterFile {
    pub version: u32,
    pub functions: Vec<FunctionSpec>,
    pub sequence: Vec<DiscPoint>,
    pub eps: f64,
}
