use thiserror::Error;

/// Failures of the enclosure arithmetic itself.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigorError {
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("could not verify an inverse enclosure")]
    SingularEnclosure,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("sequences carry different weights nu ({0} vs {1})")]
    NuMismatch(f64, f64),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// Everything that can make a proof attempt stop.
#[derive(Debug, Clone, Error)]
pub enum ProofError {
    #[error(transparent)]
    Rigor(#[from] RigorError),
    #[error("the equilibrium c is not a zero of N (enclosure {0})")]
    EquilibriumNotZero(String),
    #[error("an eigenvalue of -DN(c) could not be separated from (-inf, 0]")]
    EigenvalueOnImaginaryAxis,
    #[error("eigenvalue enclosures overlap; simple spectrum required")]
    MultipleEigenvalue,
    #[error("first eigenvector component is numerically zero")]
    FirstComponentVanishes,
    #[error("eigenpair contraction failed (Z = {z:e}, radius = {radius:e})")]
    ContractionFailed { z: f64, radius: f64 },
    #[error("no admissible Ly found")]
    NoAdmissibleLy,
    #[error("Newton iteration diverged (residual {residual:e} after {iterations} steps)")]
    NewtonDiverged { residual: f64, iterations: usize },
    #[error("truncated Jacobian is numerically singular")]
    SingularTruncatedJacobian,
    #[error("I - A DF is not a contraction (bound {0:e}); A cannot be certified injective")]
    InjectivityFailed(f64),
    #[error("radii polynomial has no real root (Y = {y:e}, Z1 = {z1:e}, Z2 = {z2:e})")]
    NegativeDiscriminant { y: f64, z1: f64, z2: f64 },
    #[error("second radii inequality fails ({0:e} >= 1)")]
    Constraint45bFailed(f64),
    #[error("radius {rho:e} exceeds the a-priori bound {varrho:e}")]
    RhoExceedsVarrho { rho: f64, varrho: f64 },
    #[error("manifold constraints fail: {0}")]
    ManifoldConstraints(String),
    #[error("approximate zero is not symmetric under the conjugation involution")]
    SymmetryBroken,
    #[error("no sign change of u(r0) - c for u(0) in [{0}, {1}]")]
    NoSignChange(f64, f64),
    #[error("seed interpolation ill-conditioned: {0}")]
    InterpolationIllConditioned(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for ProofError {
    fn from(e: std::io::Error) -> Self {
        ProofError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for ProofError {
    fn from(e: serde_json::Error) -> Self {
        ProofError::InvalidConfig(e.to_string())
    }
}

/// Pipeline stage a failure is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Config,
    Problem,
    Seed,
    Fit,
    Spectra,
    Newton,
    Symmetry,
    Manifold,
    Operator,
    Bounds,
    Radii,
    Output,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Config => "config",
            Stage::Problem => "problem",
            Stage::Seed => "seed",
            Stage::Fit => "fit",
            Stage::Spectra => "spectra",
            Stage::Newton => "newton",
            Stage::Symmetry => "symmetry",
            Stage::Manifold => "manifold",
            Stage::Operator => "operator",
            Stage::Bounds => "bounds",
            Stage::Radii => "radii",
            Stage::Output => "output",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error)]
#[error("[{stage}] {source}")]
pub struct PipelineError {
    pub stage: Stage,
    pub source: ProofError,
}

pub trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T, PipelineError>;
}

impl<T, E: Into<ProofError>> StageExt<T> for Result<T, E> {
    fn stage(self, stage: Stage) -> Result<T, PipelineError> {
        self.map_err(|e| PipelineError {
            stage,
            source: e.into(),
        })
    }
}
