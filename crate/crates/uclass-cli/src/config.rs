//! JSON config schemas, one per subcommand.
//!
//! Every config is a standalone versioned document: `schema_version` must
//! equal [`SCHEMA_VERSION`] and unknown keys are rejected, so a typo fails
//! loudly before any computation starts. Complex scalars are `[re, im]`
//! pairs throughout.

use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use uclass::{
    catalog, ClassParams, ConstructionSpec, SamplingGrid, SchwarzSpec, SweepMetric,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Reads and schema-validates a config file. The raw bytes come back too;
/// they feed the provenance hash in the output header.
pub fn load<T: ConfigDoc>(path: &Path) -> Result<(T, Vec<u8>), String> {
    let bytes =
        std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let parsed: T =
        serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    if parsed.schema_version() != SCHEMA_VERSION {
        return Err(format!(
            "{}: unsupported schema_version {} (this tool reads version {SCHEMA_VERSION})",
            path.display(),
            parsed.schema_version()
        ));
    }
    Ok((parsed, bytes))
}

pub trait ConfigDoc: DeserializeOwned {
    fn schema_version(&self) -> u32;
}

macro_rules! config_doc {
    ($($t:ty),* $(,)?) => {$(
        impl ConfigDoc for $t {
            fn schema_version(&self) -> u32 {
                self.schema_version
            }
        }
    )*};
}

config_doc!(
    ConstructConfig,
    VerifyConfig,
    CoeffsConfig,
    BoundsConfig,
    ClassifyConfig,
    ExtremalConfig,
    MaximizeConfig,
    SubordinationConfig,
    SweepConfig,
    PlotdataConfig,
);

pub fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn err_str<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Which function a command operates on, tagged by `source`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum FunctionConfig {
    /// A representation-formula member with explicit data.
    Member(MemberFunction),
    /// The coefficient-sharpness member for index `k`.
    ExtremalK(ExtremalKFunction),
    /// The boundary-pole member for analyticity radius `p`.
    ExtremalPole(ExtremalPoleFunction),
    /// A named entry from the built-in catalog.
    Catalog(CatalogFunction),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberFunction {
    pub lambda: f64,
    pub mu: [f64; 2],
    #[serde(default)]
    pub c: [f64; 2],
    pub omega: SchwarzSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalKFunction {
    pub k: usize,
    pub lambda: f64,
    pub mu: [f64; 2],
    #[serde(default)]
    pub c: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalPoleFunction {
    pub lambda: f64,
    pub mu: [f64; 2],
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFunction {
    pub name: String,
}

impl FunctionConfig {
    /// Builds the concrete series spec at the given order. Library
    /// rejections here are config errors: the parameters themselves are bad.
    pub fn resolve(&self, order: usize) -> Result<(String, ConstructionSpec), String> {
        match self {
            FunctionConfig::Member(m) => {
                let params = ClassParams::new(m.lambda, cx(m.mu)).map_err(err_str)?;
                let spec = ConstructionSpec::new(params, cx(m.c), m.omega.clone(), order)
                    .map_err(err_str)?;
                Ok(("member".into(), spec))
            }
            FunctionConfig::ExtremalK(e) => {
                let params = ClassParams::new(e.lambda, cx(e.mu)).map_err(err_str)?;
                let spec =
                    uclass::extremal_fk_spec(e.k, &params, cx(e.c), order).map_err(err_str)?;
                Ok((format!("extremal_k({})", e.k), spec))
            }
            FunctionConfig::ExtremalPole(e) => {
                let params = ClassParams::new(e.lambda, cx(e.mu)).map_err(err_str)?;
                let spec = uclass::extremal_f0_spec(&params, e.p, order).map_err(err_str)?;
                Ok((format!("extremal_pole(p={})", e.p), spec))
            }
            FunctionConfig::Catalog(c) => {
                let spec = catalog::by_name(&c.name, order).ok_or_else(|| {
                    format!(
                        "unknown catalog function {:?}; available: {}",
                        c.name,
                        catalog::names().join(", ")
                    )
                })?;
                Ok((c.name.clone(), spec))
            }
        }
    }
}

/// Sampling-grid override. When absent, commands use the library default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub radii: Vec<f64>,
    pub angles_per_ring: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GridConfig {
    pub fn build(&self) -> Result<SamplingGrid, String> {
        SamplingGrid::new(self.radii.clone(), self.angles_per_ring, self.seed).map_err(err_str)
    }
}

pub fn grid_or_default(grid: &Option<GridConfig>, seed: u64) -> Result<SamplingGrid, String> {
    match grid {
        Some(g) => g.build(),
        None => Ok(SamplingGrid::default_grid(seed)),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructConfig {
    pub schema_version: u32,
    pub function: FunctionConfig,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Membership,
    LocalUnivalence,
    Univalence,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub schema_version: u32,
    pub function: FunctionConfig,
    /// Class parameters to verify against; both or neither. Default: the
    /// function's own parameters.
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub mu: Option<[f64; 2]>,
    /// Subset of checks to run. Default: all three.
    #[serde(default)]
    pub checks: Option<Vec<CheckKind>>,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsConfig {
    pub schema_version: u32,
    pub function: FunctionConfig,
    #[serde(default)]
    pub order: Option<usize>,
    /// Highest coefficient index tabulated. Default 16, capped by order.
    #[serde(default)]
    pub kmax: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub schema_version: u32,
    pub lambda: f64,
    pub mu: [f64; 2],
    /// Coefficient indices for the per-index rows. Default 2..=6.
    #[serde(default = "default_k_values")]
    pub k_values: Vec<usize>,
    /// Terms summed in the weighted tail row. Default 200.
    #[serde(default = "default_l2_terms")]
    pub l2_terms: usize,
    /// Analyticity radius for the second-coefficient row; omit to skip it.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub order: Option<usize>,
}

fn default_k_values() -> Vec<usize> {
    (2..=6).collect()
}

fn default_l2_terms() -> usize {
    200
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub schema_version: u32,
    pub lambda: f64,
    pub mu: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalConfig {
    pub schema_version: u32,
    /// Must be an `extremal_k` or `extremal_pole` function.
    pub function: FunctionConfig,
    #[serde(default)]
    pub order: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximizeConfig {
    pub schema_version: u32,
    pub lambda: f64,
    pub mu: [f64; 2],
    /// Circle radius the objective is maximized on.
    pub p: f64,
    /// Search template: its structure is fixed, its numbers are the free
    /// coordinates.
    pub family: SchwarzSpec,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_starts() -> usize {
    8
}

fn default_max_iters() -> usize {
    250
}

fn default_tolerance() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub lambda: f64,
    pub mu: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubordinationConfig {
    pub schema_version: u32,
    pub points: Vec<PointConfig>,
    #[serde(default = "default_samples_per_row")]
    pub samples_per_row: usize,
    #[serde(default = "default_scan_radii")]
    pub radii: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples_per_row() -> usize {
    8
}

fn default_scan_radii() -> Vec<f64> {
    vec![0.35, 0.6]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    /// Row-major cross product: for each lambda, every mu.
    pub lambdas: Vec<f64>,
    pub mus: Vec<[f64; 2]>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub metric: Option<SweepMetric>,
    #[serde(default)]
    pub mc_samples: Option<usize>,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub optimizer_starts: Option<usize>,
    #[serde(default)]
    pub optimizer_iters: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotdataConfig {
    pub schema_version: u32,
    pub function: FunctionConfig,
    pub radii: Vec<f64>,
    /// Samples per circle. Default 512.
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default)]
    pub order: Option<usize>,
}

fn default_angles() -> usize {
    512
}
