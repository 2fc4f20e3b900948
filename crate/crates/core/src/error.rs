use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },

    #[error("non-finite input coordinate")]
    NonFinite,

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitian { defect: f64 },

    #[error("form evaluation left imaginary residue {residue:.3e}")]
    ImaginaryResidue { residue: f64 },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("underlying form has r(0,0) = {value:.3e} <= 0: f(0) lies outside the ball")]
    OriginOutsideBall { value: f64 },

    #[error("point has norm {norm} >= 1")]
    OutsideBall { norm: f64 },

    #[error("composition puts a pole at the origin")]
    PoleAtOrigin,

    #[error("tensor factor fails the norm identity (defect {defect:.3e})")]
    NormIdentity { defect: f64 },

    #[error("component index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("map is linear; the operation requires degree > 1")]
    LinearMap,

    #[error("map is not in normal form: {0}")]
    NotNormalForm(String),

    #[error("denominator has linear terms (residual {residual:.3e})")]
    LinearTerms { residual: f64 },

    #[error("critical-point search did not converge (best gradient norm {gradient_norm:.3e})")]
    NonConvergence { gradient_norm: f64 },

    #[error("critical point at norm {norm} is too close to the boundary")]
    CriticalPointNearBoundary { norm: f64 },

    #[error("numerator and denominator share a common factor")]
    NotLowestTerms,

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("membership test for this group needs a target unitary")]
    MissingTarget,

    #[error("candidate family too large: {family} requires n <= {limit}, got {n}")]
    BudgetExceeded { family: &'static str, limit: usize, n: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no admissible epsilon after {halvings} halvings (last minimum eigenvalue {min_eigenvalue:.3e})")]
    EpsilonExhausted { halvings: usize, min_eigenvalue: f64 },

    #[error(
        "coefficient matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e}); \
         sigma values below 1/sqrt(n) = {bound:.4} are the expected safe range"
    )]
    NotPositiveSemidefinite { min_eigenvalue: f64, bound: f64 },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::AxisOutOfRange { .. } => "axis_out_of_range",
            Error::NonFinite => "non_finite",
            Error::NonHermitian { .. } => "non_hermitian",
            Error::ImaginaryResidue { .. } => "imaginary_residue",
            Error::InvalidMap(_) => "invalid_map",
            Error::OriginOutsideBall { .. } => "origin_outside_ball",
            Error::OutsideBall { .. } => "outside_ball",
            Error::PoleAtOrigin => "pole_at_origin",
            Error::NormIdentity { .. } => "norm_identity",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::LinearMap => "linear_map",
            Error::NotNormalForm(_) => "not_normal_form",
            Error::LinearTerms { .. } => "linear_terms",
            Error::NonConvergence { .. } => "non_convergence",
            Error::CriticalPointNearBoundary { .. } => "critical_point_near_boundary",
            Error::NotLowestTerms => "not_lowest_terms",
            Error::NotUnitary { .. } => "not_unitary",
            Error::MissingTarget => "missing_target",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Precondition(_) => "precondition",
            Error::EpsilonExhausted { .. } => "epsilon_exhausted",
            Error::NotPositiveSemidefinite { .. } => "not_positive_semidefinite",
            Error::ConstructionFailed(_) => "construction_failed",
        }
    }

    /// Whether the failure is numerical (as opposed to bad input or a
    /// property that does not hold).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::CriticalPointNearBoundary { .. }
                | Error::EpsilonExhausted { .. }
                | Error::LinearTerms { .. }
        )
    }
}
