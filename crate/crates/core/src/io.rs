//! JSON interchange for matrices, generators, problem configurations,
//! measurement records, and reports.
//!
//! Floats are written with serde_json's shortest round-trip formatting, so
//! matrices survive a save/load cycle bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{DensityMatrix, GklsGenerator};
use crate::error::Error;
use crate::hermdecomp::HermitianObservable;
use crate::matrix::ComplexMatrix;
use crate::observability::{ChannelExpansion, ObservabilityReport, ObservableSet, Verdict};
use crate::scalar::{cplx, to_f64, Scalar};
use crate::tol::RankTolerance;
use crate::tomography::{MeasurementRecord, NoiseModel, ReconstructionResult, TimeGrid};

/// Errors from loading/parsing configuration and data files.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid {context}: {source}")]
    Invalid {
        context: &'static str,
        source: Error,
    },
}

fn invalid(context: &'static str) -> impl FnOnce(Error) -> LoadError {
    move |source| LoadError::Invalid { context, source }
}

/// Shared matrix format: `{"rows": n, "cols": n, "data": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix<F: Scalar>(m: &ComplexMatrix<F>) -> Self {
        let data = (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| {
                        let z = m.get(r, c);
                        [to_f64(z.re), to_f64(z.im)]
                    })
                    .collect()
            })
            .collect();
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    pub fn to_matrix<F: Scalar>(&self) -> crate::error::Result<ComplexMatrix<F>> {
        if self.data.len() != self.rows || self.data.iter().any(|row| row.len() != self.cols) {
            return Err(Error::BadShape {
                len: self.data.iter().map(Vec::len).sum(),
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for row in &self.data {
            for &[re, im] in row {
                entries.push(cplx::<F>(re, im));
            }
        }
        ComplexMatrix::new(self.rows, self.cols, entries)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DissipatorJson {
    pub op: MatrixJson,
    pub rate: f64,
}

/// Generator schema: `{"dim": n, "hamiltonian": <matrix>, "dissipators": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub dim: usize,
    pub hamiltonian: MatrixJson,
    #[serde(default)]
    pub dissipators: Vec<DissipatorJson>,
}

impl GeneratorJson {
    pub fn from_generator(gen: &GklsGenerator<f64>) -> Self {
        GeneratorJson {
            dim: gen.dim(),
            hamiltonian: MatrixJson::from_matrix(gen.hamiltonian().matrix()),
            dissipators: gen
                .dissipators()
                .iter()
                .map(|d| DissipatorJson {
                    op: MatrixJson::from_matrix(&d.op),
                    rate: d.rate,
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<GklsGenerator<f64>, LoadError> {
        let h_matrix = self
            .hamiltonian
            .to_matrix::<f64>()
            .map_err(invalid("hamiltonian"))?;
        if h_matrix.rows() != self.dim {
            return Err(LoadError::Invalid {
                context: "generator",
                source: Error::dim_mismatch(
                    "declared dim vs hamiltonian",
                    (self.dim, self.dim),
                    (h_matrix.rows(), h_matrix.cols()),
                ),
            });
        }
        let h = HermitianObservable::new(h_matrix).map_err(invalid("hamiltonian"))?;
        let dissipators = self
            .dissipators
            .iter()
            .map(|d| Ok((d.op.to_matrix::<f64>().map_err(invalid("dissipator"))?, d.rate)))
            .collect::<Result<Vec<_>, LoadError>>()?;
        GklsGenerator::new(h, dissipators).map_err(invalid("generator"))
    }
}

/// Time-grid schema, tagged by `"mode"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum TimeGridJson {
    Uniform {
        horizon: f64,
        count: usize,
        #[serde(default)]
        include_zero: bool,
    },
    Explicit {
        times: Vec<f64>,
    },
}

impl TimeGridJson {
    pub fn build(&self) -> Result<TimeGrid<f64>, LoadError> {
        match self {
            TimeGridJson::Uniform {
                horizon,
                count,
                include_zero,
            } => TimeGrid::uniform(*horizon, *count, *include_zero),
            TimeGridJson::Explicit { times } => TimeGrid::explicit(times.clone()),
        }
        .map_err(invalid("time grid"))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NoiseJson {
    #[serde(default)]
    pub std: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for NoiseJson {
    fn default() -> Self {
        NoiseJson { std: 0.0, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OptionsJson {
    #[serde(default)]
    pub identity_augmented: bool,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
}

fn default_rank_tol() -> f64 {
    crate::tol::DEFAULT_RANK_REL
}

impl Default for OptionsJson {
    fn default() -> Self {
        OptionsJson {
            identity_augmented: false,
            rank_tol: default_rank_tol(),
        }
    }
}

/// Top-level problem configuration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemConfigJson {
    pub generator: GeneratorJson,
    pub observables: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_grid: Option<TimeGridJson>,
    #[serde(default)]
    pub noise: NoiseJson,
    #[serde(default)]
    pub options: OptionsJson,
}

/// Fully validated problem, ready for the pipeline. Complex observables
/// from the file have been expanded into their Hermitian channels.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub generator: GklsGenerator<f64>,
    pub set: ObservableSet<f64>,
    pub expansions: Vec<ChannelExpansion>,
    pub rho0: Option<DensityMatrix<f64>>,
    pub grid: Option<TimeGrid<f64>>,
    pub noise: NoiseModel<f64>,
    pub identity_augmented: bool,
    pub rank_tol: RankTolerance,
}

impl ProblemConfigJson {
    pub fn build(&self) -> Result<ProblemConfig, LoadError> {
        let generator = self.generator.build()?;
        let matrices = self
            .observables
            .iter()
            .map(|m| m.to_matrix::<f64>().map_err(invalid("observable")))
            .collect::<Result<Vec<_>, LoadError>>()?;
        let (set, expansions) =
            ObservableSet::from_matrices(&matrices).map_err(invalid("observable set"))?;
        if set.dim() != generator.dim() {
            return Err(LoadError::Invalid {
                context: "observable set",
                source: Error::dim_mismatch(
                    "generator vs observables",
                    (generator.dim(), generator.dim()),
                    (set.dim(), set.dim()),
                ),
            });
        }
        let rho0 = match &self.rho0 {
            Some(m) => Some(
                DensityMatrix::new(m.to_matrix::<f64>().map_err(invalid("rho0"))?)
                    .map_err(invalid("rho0"))?,
            ),
            None => None,
        };
        if let Some(r) = &rho0 {
            if r.dim() != generator.dim() {
                return Err(LoadError::Invalid {
                    context: "rho0",
                    source: Error::dim_mismatch(
                        "generator vs rho0",
                        (generator.dim(), generator.dim()),
                        (r.dim(), r.dim()),
                    ),
                });
            }
        }
        let grid = self.time_grid.as_ref().map(TimeGridJson::build).transpose()?;
        let noise =
            NoiseModel::new(self.noise.std, self.noise.seed).map_err(invalid("noise"))?;
        let rank_tol =
            RankTolerance::new(self.options.rank_tol).map_err(invalid("rank tolerance"))?;
        Ok(ProblemConfig {
            generator,
            set,
            expansions,
            rho0,
            grid,
            noise,
            identity_augmented: self.options.identity_augmented,
            rank_tol,
        })
    }
}

pub fn load_config(path: &Path) -> Result<ProblemConfig, LoadError> {
    parse_config(&read(path)?, path)
}

pub fn parse_config(text: &str, path: &Path) -> Result<ProblemConfig, LoadError> {
    let json: ProblemConfigJson = serde_json::from_str(text).map_err(|source| LoadError::Json {
        path: path.display().to_string(),
        source,
    })?;
    json.build()
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix<f64>, LoadError> {
    let json: MatrixJson =
        serde_json::from_str(&read(path)?).map_err(|source| LoadError::Json {
            path: path.display().to_string(),
            source,
        })?;
    json.to_matrix::<f64>().map_err(invalid("matrix"))
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Records file entry: `{"i": .., "j": .., "t": .., "value": [re, im], "noise_std": ..}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub i: usize,
    pub j: usize,
    pub t: f64,
    pub value: [f64; 2],
    pub noise_std: f64,
}

impl RecordJson {
    pub fn from_record(r: &MeasurementRecord<f64>) -> Self {
        RecordJson {
            i: r.observable_index,
            j: r.time_index,
            t: r.time,
            value: [r.value.re, r.value.im],
            noise_std: r.noise_std,
        }
    }

    pub fn to_record(&self, seed_tag: u64) -> crate::error::Result<MeasurementRecord<f64>> {
        if !(self.t.is_finite() && self.value[0].is_finite() && self.value[1].is_finite()) {
            return Err(Error::InvalidInput {
                reason: "record fields must be finite".into(),
            });
        }
        Ok(MeasurementRecord {
            observable_index: self.i,
            time_index: self.j,
            time: self.t,
            value: cplx(self.value[0], self.value[1]),
            noise_std: self.noise_std,
            seed_tag,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservabilityReportJson {
    pub verdict: String,
    pub mu: usize,
    pub mu_ambiguous: bool,
    pub per_observable_dims: Vec<usize>,
    pub total_span_dim: usize,
    pub target_dim: usize,
    pub identity_augmented: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missing_direction: Option<MatrixJson>,
    pub tolerance_used: f64,
}

impl ObservabilityReportJson {
    pub fn from_report(r: &ObservabilityReport<f64>) -> Self {
        ObservabilityReportJson {
            verdict: match r.verdict {
                Verdict::Reconstructible => "reconstructible".into(),
                Verdict::NotReconstructible => "not_reconstructible".into(),
            },
            mu: r.mu,
            mu_ambiguous: r.mu_ambiguous,
            per_observable_dims: r.per_observable_dims.clone(),
            total_span_dim: r.total_span_dim,
            target_dim: r.target_dim,
            identity_augmented: r.identity_augmented,
            missing_direction: r
                .missing_direction
                .as_ref()
                .map(|w| MatrixJson::from_matrix(w.matrix())),
            tolerance_used: r.tolerance_used,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructionResultJson {
    pub rho_hat: MatrixJson,
    pub raw_solution: MatrixJson,
    pub residual_norm: f64,
    /// Absent when the frame is rank deficient (condition number infinite).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_condition_number: Option<f64>,
    pub frame_rank: usize,
    pub projected: bool,
}

impl ReconstructionResultJson {
    pub fn from_result(r: &ReconstructionResult<f64>) -> Self {
        ReconstructionResultJson {
            rho_hat: MatrixJson::from_matrix(r.rho_hat.matrix()),
            raw_solution: MatrixJson::from_matrix(&r.raw_solution),
            residual_norm: r.residual_norm,
            frame_condition_number: r
                .frame_condition_number
                .is_finite()
                .then_some(r.frame_condition_number),
            frame_rank: r.frame_rank,
            projected: r.projected,
        }
    }
}
