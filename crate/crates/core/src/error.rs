use thiserror::Error;

/// Errors raised by corona-lab operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The problem has no solution at the requested accuracy.
    #[error("infeasible: {reason}")]
    Infeasible {
        reason: String,
        /// Best residuals the solver could reach, when it got that far.
        best_residuals: Vec<f64>,
    },

    /// A ladder rung could not be built from the supplied candidates.
    #[error("ladder rung {rung}: {reason}")]
    Construction { rung: usize, reason: String },

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("spectrum aliased: {tail_energy:e} of the energy sits in the top quarter at n_fft = {n_fft}; increase n_fft")]
    Aliasing { n_fft: usize, tail_energy: f64 },

    /// A precondition on the inputs was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The corona condition fails, so no Bezout solution exists.
    #[error("unsolvable: {0}")]
    Unsolvable(String),

    /// No Cauchy subsequence could be extracted from the finite sequence.
    #[error("extraction failed: {0}")]
    Extraction(String),
}

impl Error {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Infeasible { .. } => "infeasible",
            Error::Construction { .. } => "construction",
            Error::Quadrature { .. } => "quadrature",
            Error::Aliasing { .. } => "aliasing",
            Error::Precondition(_) => "precondition",
            Error::Unsolvable(_) => "unsolvable",
            Error::Extraction(_) => "extraction",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
