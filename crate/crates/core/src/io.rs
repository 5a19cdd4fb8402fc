//! JSON file formats.
//!
//! ```text
//! generator  {"eigenvalues": [0.0, 2.0]}
//! state      {"amplitudes": [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]}
//! basis      {"rows": [[[re, im], ...], ...]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; basis rows are the measurement
//! vectors in the generator eigenbasis.

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{QibError, Result};
use crate::fisher::{EpsilonGrid, Tolerances};
use crate::measurements::{
    canonical_beta, embed_on_support, fourier_basis, wigner_basis, FourierBasisSpec,
    WignerBasisSpec,
};
use crate::model::{check_dim, Generator, MeasurementBasis, ProbeState};
use crate::states::{heisenberg_state, random_admissible_state};

pub type Pair = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub amplitudes: Vec<Pair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub rows: Vec<Vec<Pair>>,
}

pub fn to_complex(pairs: &[Pair]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

pub fn to_pairs(values: &[Complex64]) -> Vec<Pair> {
    values.iter().map(|c| [c.re, c.im]).collect()
}

impl GeneratorFile {
    pub fn build(&self) -> Result<Generator> {
        Generator::new(self.eigenvalues.clone())
    }

    pub fn from_generator(gen: &Generator) -> Self {
        Self {
            eigenvalues: gen.eigenvalues().to_vec(),
        }
    }
}

impl StateFile {
    pub fn build(&self) -> Result<ProbeState> {
        ProbeState::new(to_complex(&self.amplitudes))
    }

    pub fn from_state(state: &ProbeState) -> Self {
        Self {
            amplitudes: to_pairs(state.amplitudes()),
        }
    }
}

impl BasisFile {
    pub fn build(&self) -> Result<MeasurementBasis> {
        MeasurementBasis::from_rows(self.rows.iter().map(|r| to_complex(r)).collect())
    }

    pub fn from_basis(basis: &MeasurementBasis) -> Self {
        Self {
            rows: basis.rows().iter().map(|r| to_pairs(r)).collect(),
        }
    }
}

/// Parses JSON, reporting syntax and schema errors with line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        QibError::Parse(format!(
            "{what}: line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

/// Shortest round-trip JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value is serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSource {
    /// Explicit amplitudes.
    Amplitudes(Vec<Pair>),
    /// A seeded random admissible probe with the given mean.
    RandomAdmissible { mean: f64 },
    /// `(|A_0⟩ + e^{iθ}|2⟨Â⟩ − A_0⟩)/√2`.
    Heisenberg {
        mean: f64,
        #[serde(default)]
        theta: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Fourier,
    Wigner,
}

impl std::str::FromStr for Family {
    type Err = QibError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(Family::Fourier),
            "wigner" => Ok(Family::Wigner),
            other => Err(QibError::InvalidArgument(format!(
                "unknown measurement family {other:?} (expected fourier or wigner)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpec {
    Points(Vec<f64>),
    Uniform { start: f64, end: f64, n: usize },
    /// One period of the shifted spectrum with `n` points.
    Default { n: usize },
}

/// Input of a saturation sweep.
///
/// Either `basis` is given explicitly or a measurement family is built on the
/// support of the state (in generator order) and completed by the unused
/// eigenvectors. `eta_phases`, when present, must have one entry per support
/// element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub generator: GeneratorFile,
    pub state: StateSource,
    #[serde(default)]
    pub basis: Option<BasisFile>,
    #[serde(default)]
    pub family: Option<Family>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub eta_phases: Option<Vec<f64>>,
    #[serde(default)]
    pub vartheta: Option<f64>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

/// Everything a sweep needs, resolved from a [`SweepConfig`].
#[derive(Clone, Debug)]
pub struct ResolvedSweep {
    pub generator: Generator,
    pub state: ProbeState,
    pub basis: MeasurementBasis,
    pub grid: EpsilonGrid,
    pub tolerances: Tolerances,
}

pub const DEFAULT_GRID_POINTS: usize = 101;

impl SweepConfig {
    /// Builds the sweep inputs. `family` and `grid_points` override the file;
    /// `seed` drives random states.
    pub fn resolve(
        &self,
        family: Option<Family>,
        grid_points: Option<usize>,
        seed: u64,
    ) -> Result<ResolvedSweep> {
        let generator = self.generator.build()?;
        let state = match &self.state {
            StateSource::Amplitudes(a) => ProbeState::new(to_complex(a))?,
            StateSource::RandomAdmissible { mean } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                random_admissible_state(&generator, *mean, &mut rng)?
            }
            StateSource::Heisenberg { mean, theta } => heisenberg_state(&generator, *mean, *theta)?,
        };
        check_dim(generator.dim(), state.dim())?;

        let basis = match (&self.basis, family.or(self.family)) {
            (Some(_), Some(_)) if family.is_some() => {
                return Err(QibError::InvalidArgument(
                    "an explicit basis cannot be combined with a measurement family".into(),
                ))
            }
            (Some(b), _) => b.build()?,
            (None, fam) => self.family_basis(&state, fam.unwrap_or(Family::Fourier))?,
        };
        check_dim(generator.dim(), basis.dim())?;

        if grid_points == Some(0) {
            return Err(QibError::InvalidArgument("grid needs at least one point".into()));
        }
        let spec = self
            .grid
            .clone()
            .unwrap_or(GridSpec::Default { n: DEFAULT_GRID_POINTS });
        let grid = match spec {
            GridSpec::Points(p) => {
                if grid_points.is_some() {
                    return Err(QibError::InvalidArgument(
                        "grid size cannot override an explicit point list".into(),
                    ));
                }
                EpsilonGrid::new(p)?
            }
            GridSpec::Uniform { start, end, n } => {
                EpsilonGrid::uniform(start, end, grid_points.unwrap_or(n))?
            }
            GridSpec::Default { n } => {
                EpsilonGrid::default_for(&state, &generator, grid_points.unwrap_or(n))?
            }
        };
        Ok(ResolvedSweep {
            generator,
            state,
            basis,
            grid,
            tolerances: self.tolerances.unwrap_or_default(),
        })
    }

    fn family_basis(&self, state: &ProbeState, family: Family) -> Result<MeasurementBasis> {
        let support = state.support();
        let n = support.len();
        if n < 2 {
            return Err(QibError::DegenerateState);
        }
        let small = match family {
            Family::Fourier => {
                let eta = self.eta_phases.clone().unwrap_or_else(|| vec![0.0; n]);
                let beta = self.beta.unwrap_or_else(|| canonical_beta(n));
                fourier_basis(&FourierBasisSpec::new(n, beta, eta)?)?
            }
            Family::Wigner => {
                wigner_basis(&WignerBasisSpec::new(n, self.vartheta.unwrap_or(0.0))?)?
            }
        };
        embed_on_support(&small, &support, state.dim())
    }
}
