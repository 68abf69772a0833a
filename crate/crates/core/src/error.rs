use thiserror::Error;

pub type Result<T, E = SsbError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SsbError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("input rejected: {0}")]
    Rejected(String),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        /// Last iterate, flattened to reals.
        last: Vec<f64>,
    },

    #[error("mass form is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("vacuum is not a local minimum: Hessian eigenvalue {eigenvalue:.3e} on the orbit complement")]
    NotAMinimum { eigenvalue: f64 },

    #[error("inconsistent vacuum: Hessian restricted to the orbit tangent space has size {defect:.3e}")]
    InconsistentVacuum { defect: f64 },

    #[error("degenerate point: broken Hessian is singular (smallest |eigenvalue| {smallest:.3e})")]
    DegeneratePoint { smallest: f64 },

    #[error("transformed gauge field is not algebra valued: projection defect {defect:.3e} exceeds {tol:.3e}")]
    NotAlgebraValued { defect: f64, tol: f64 },

    #[error("generators do not close under the bracket (defect {defect:.3e})")]
    ClosureFailure { defect: f64 },

    #[error("Higgs field is not in unitary gauge (Goldstone defect {defect:.3e})")]
    NotUnitaryGauge { defect: f64 },

    #[error("T3 and Y do not commute (defect {defect:.3e}); not an SU(2)xU(1) representation")]
    NonCommuting { defect: f64 },

    #[error("unknown {kind} `{name}` (registered: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("at grid site {site:?}: {source}")]
    AtSite {
        site: Vec<usize>,
        #[source]
        source: Box<SsbError>,
    },
}

impl SsbError {
    pub fn dimension(context: impl Into<String>, expected: usize, found: usize) -> Self {
        SsbError::Dimension {
            context: context.into(),
            expected,
            found,
        }
    }

    pub fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        SsbError::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
