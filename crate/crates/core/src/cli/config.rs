//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::TheoremTag;
use crate::ensembles::random::{random_hermitian, random_tensor};
use crate::ensembles::{purpose, EnsembleKind, EnsembleSpec, Profile, StreamFamily};
use crate::error::{Error, Result};
use crate::montecarlo::{Tamper, ThetaGrid, DEFAULT_ALPHA};
use crate::spectral::spectral_norm;
use crate::tensor::{DenseTensor, Shape};

pub const SCHEMA_VERSION: u32 = 1;

/// Random Hermitian coefficients `scale·(G + Gᴴ)/2`, optionally rescaled so
/// each has spectral norm `norm`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratedHermitian {
    pub dims: Vec<usize>,
    #[serde(default = "one_count")]
    pub count: usize,
    #[serde(default = "unit")]
    pub scale: f64,
    #[serde(default)]
    pub norm: Option<f64>,
    pub seed: u64,
}

/// Random rectangular coefficients with complex Gaussian entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratedTensor {
    pub row_dims: Vec<usize>,
    pub col_dims: Vec<usize>,
    #[serde(default = "one_count")]
    pub count: usize,
    #[serde(default = "unit")]
    pub scale: f64,
    pub seed: u64,
}

fn one_count() -> usize {
    1
}

fn unit() -> f64 {
    1.0
}

/// One entry of an ensemble's `coefficients` list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientSource {
    /// Stem of a `.json`/`.bin` tensor pair, relative to the config file.
    File {
        file: PathBuf,
    },
    RandomHermitian {
        random_hermitian: GeneratedHermitian,
    },
    RandomTensor {
        random_tensor: GeneratedTensor,
    },
    Inline(DenseTensor),
}

/// One ensemble plus the theorems to check on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub name: String,
    pub kind: EnsembleKind,
    #[serde(default)]
    pub coefficients: Vec<CoefficientSource>,
    #[serde(rename = "T", default)]
    pub t_bound: Option<f64>,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub profile: Profile,
    #[serde(default)]
    pub adaptivity: bool,
    #[serde(default)]
    pub seed: Option<u64>,
    pub theorems: Vec<String>,
    #[serde(default)]
    pub theta_grid: Option<ThetaGrid>,
    /// Mis-specify the bound parameters on purpose.
    #[serde(default)]
    pub tamper: Option<Tamper>,
    /// The pairing is a falsification control: it is expected to fail.
    #[serde(default)]
    pub expect_violation: bool,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("ttb-out")
}

fn default_certify() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub trials: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub theta_grid: ThetaGrid,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_certify")]
    pub certify_draws: usize,
    pub ensembles: Vec<EnsembleConfig>,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

/// A fully resolved (ensemble, theorem) pairing.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub ensemble: String,
    pub spec: EnsembleSpec,
    pub theorem: TheoremTag,
    pub grid: ThetaGrid,
    pub tamper: Tamper,
    pub expect_violation: bool,
    pub seed: u64,
}

/// A parsed config together with the hash of its source bytes.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub sha256: String,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_bytes(&bytes, base_dir)
    }

    pub fn from_bytes(bytes: &[u8], base_dir: PathBuf) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_slice(bytes).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        if config.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if !(config.alpha > 0.0 && config.alpha < 1.0) {
            return Err(Error::Config(format!("alpha = {} must be in (0, 1)", config.alpha)));
        }
        Ok(Self {
            config,
            sha256: hex::encode(Sha256::digest(bytes)),
            base_dir,
        })
    }

    /// Builds every pairing, checking theorem names and the compatibility
    /// table before any sampling happens.
    pub fn pairings(&self) -> Result<Vec<Pairing>> {
        let mut out = Vec::new();
        let mut names = std::collections::HashSet::new();
        for ens in &self.config.ensembles {
            if !names.insert(ens.name.as_str()) {
                return Err(Error::Config(format!("duplicate ensemble name `{}`", ens.name)));
            }
            let spec = self.resolve_spec(ens)?;
            let prepared = spec
                .prepare()
                .map_err(|e| Error::Config(format!("{}: {e}", ens.name)))?;
            if ens.theorems.is_empty() {
                return Err(Error::Config(format!("{}: no theorems listed", ens.name)));
            }
            for name in &ens.theorems {
                let theorem: TheoremTag = name
                    .parse()
                    .map_err(|_| Error::Config(format!("{}: unknown theorem `{name}`", ens.name)))?;
                crate::montecarlo::statistic_for(theorem, &prepared)
                    .map_err(|e| Error::Config(format!("{}: {e}", ens.name)))?;
                out.push(Pairing {
                    ensemble: ens.name.clone(),
                    spec: spec.clone(),
                    theorem,
                    grid: ens.theta_grid.clone().unwrap_or_else(|| self.config.theta_grid.clone()),
                    tamper: ens.tamper.unwrap_or_default(),
                    expect_violation: ens.expect_violation,
                    seed: ens.seed.unwrap_or(self.config.seed),
                });
            }
        }
        Ok(out)
    }

    pub fn resolve_spec(&self, ens: &EnsembleConfig) -> Result<EnsembleSpec> {
        let mut coefficients = Vec::new();
        for source in &ens.coefficients {
            coefficients.extend(
                self.resolve_source(source)
                    .map_err(|e| Error::Config(format!("{}: {e}", ens.name)))?,
            );
        }
        Ok(EnsembleSpec {
            kind: ens.kind,
            coefficients,
            t_bound: ens.t_bound.unwrap_or(1.0),
            n: ens.n,
            dims: ens.dims.clone(),
            profile: ens.profile.clone(),
            adaptive: ens.adaptivity,
            seed: ens.seed,
        })
    }

    fn resolve_source(&self, source: &CoefficientSource) -> Result<Vec<DenseTensor>> {
        match source {
            CoefficientSource::Inline(t) => Ok(vec![t.clone()]),
            CoefficientSource::File { file } => Ok(vec![DenseTensor::read_pair(&self.base_dir.join(file))?]),
            CoefficientSource::RandomHermitian { random_hermitian: g } => {
                let family = StreamFamily::new(g.seed, purpose::COEFFICIENTS);
                (0..g.count)
                    .map(|k| {
                        let h = random_hermitian(&g.dims, g.scale, &mut family.rng(k as u64))?;
                        let t = h.into_tensor();
                        match g.norm {
                            Some(target) => {
                                let norm = spectral_norm(&t);
                                t.scale_real(target / norm)
                            }
                            None => Ok(t),
                        }
                    })
                    .collect()
            }
            CoefficientSource::RandomTensor { random_tensor: g } => {
                let family = StreamFamily::new(g.seed, purpose::COEFFICIENTS);
                (0..g.count)
                    .map(|k| {
                        let shape = Shape::new(g.row_dims.clone(), g.col_dims.clone())?;
                        random_tensor(shape, &mut family.rng(k as u64))?.scale_real(g.scale)
                    })
                    .collect()
            }
        }
    }
}
