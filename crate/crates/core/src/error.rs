use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("metric must be at least 2-dimensional, got {0}")]
    DimensionTooSmall(usize),

    #[error("metric is not symmetric (max asymmetry {0:e})")]
    AsymmetricMetric(f64),

    #[error("metric is singular or not invertible within tolerance")]
    SingularMetric,

    #[error("vector is null (square {0:e})")]
    NullVector(f64),

    #[error("SL2 reparametrization is not unimodular: ae - bc = {0}")]
    NotUnimodular(f64),

    #[error("bivector square {0} exceeds 1; gamma is not real")]
    OutOfDomain(f64),

    #[error("gamma + 1 vanishes")]
    DegenerateGamma,

    #[error("endomorphism is not a g-isometry (defect {0:e})")]
    NotIsometry(f64),

    #[error("isometry carries no generating bivector")]
    MissingGenerator,

    #[error("generator is not g-orthogonal to the fixed vector")]
    NotInStabilizer,

    #[error("initial and final vectors differ in square: {initial} vs {final_}")]
    NotIsomagnitude { initial: f64, final_: f64 },

    #[error("link problem has no preferred vector")]
    MissingPreferred,

    #[error("link denominator vanishes ({0:e})")]
    DegenerateLink(f64),

    #[error("preferred vector is orthogonal to R + S")]
    ZeroMu,

    #[error("preferred vector is parallel to R - S")]
    PreferredParallel,

    #[error("initial and final vectors are null-separated; use the null-case conditions")]
    NullSeparation,

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("(R + S) is null")]
    DegenerateSum,

    #[error("vector is not unit time-like (square {0})")]
    NotUnitTimelike(f64),

    #[error("vector is not future-directed")]
    NotFutureDirected,

    #[error("(R - S) is not null; not the null case")]
    NotNullCase,

    #[error("R and S are g-orthogonal")]
    OrthogonalPair,

    #[error("metric is not Lorentzian (signature {positive},{negative})")]
    NotLorentzian { positive: usize, negative: usize },

    #[error("velocity is not sub-luminal (v^2 / c^2 = {0})")]
    Superluminal(f64),

    #[error("velocity is not observed by the observer (P.v = {0:e})")]
    NotObserved(f64),

    #[error("speed of light must be positive, got {0}")]
    InvalidLightSpeed(f64),

    #[error("t + t' vanishes")]
    DegenerateEpoch,

    #[error("velocities are observed by different preferred observers")]
    PreferredObserverMismatch,

    #[error("c^2 - v.u vanishes")]
    DegenerateDenominator,

    #[error("morphisms are not composable: target of the first is not the source of the second")]
    NotComposable,
}

impl Error {
    /// Stable short name used in machine-readable error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DimensionTooSmall(_) => "DimensionTooSmall",
            Error::AsymmetricMetric(_) => "AsymmetricMetric",
            Error::SingularMetric => "SingularMetric",
            Error::NullVector(_) => "NullVector",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::DegenerateGamma => "DegenerateGamma",
            Error::NotIsometry(_) => "NotIsometry",
            Error::MissingGenerator => "MissingGenerator",
            Error::NotInStabilizer => "NotInStabilizer",
            Error::NotIsomagnitude { .. } => "NotIsomagnitude",
            Error::MissingPreferred => "MissingPreferred",
            Error::DegenerateLink(_) => "DegenerateLink",
            Error::ZeroMu => "ZeroMu",
            Error::PreferredParallel => "PreferredParallel",
            Error::NullSeparation => "NullSeparation",
            Error::InternalConsistency(_) => "InternalConsistency",
            Error::DegenerateSum => "DegenerateSum",
            Error::NotUnitTimelike(_) => "NotUnitTimelike",
            Error::NotFutureDirected => "NotFutureDirected",
            Error::NotNullCase => "NotNullCase",
            Error::OrthogonalPair => "OrthogonalPair",
            Error::NotLorentzian { .. } => "NotLorentzian",
            Error::Superluminal(_) => "Superluminal",
            Error::NotObserved(_) => "NotObserved",
            Error::InvalidLightSpeed(_) => "InvalidLightSpeed",
            Error::DegenerateEpoch => "DegenerateEpoch",
            Error::PreferredObserverMismatch => "PreferredObserverMismatch",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::NotComposable => "NotComposable",
        }
    }

    /// Errors that indicate a broken invariant inside the library rather
    /// than bad caller input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalConsistency(_))
    }
}
