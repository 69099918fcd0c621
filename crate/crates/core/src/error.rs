use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter violated its admissible range.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// No MU chooses sponsored access, so display and view probabilities are undefined.
    #[error("degenerate market: no MU chooses advertising sponsored access")]
    DegenerateMarket,

    /// The advertising market has zero popularity (eta = 0), so there is no ad revenue to share.
    #[error("empty advertising market: eta = 0 gives zero advertising revenue")]
    EmptyMarket,

    #[error("operation `{0}` requires a finite advertising market (M and sigma_max)")]
    RequiresFiniteMode(&'static str),

    #[error("operation `{0}` requires the asymptotic advertising market")]
    RequiresAsymptoticMode(&'static str),

    #[error("tau undefined at sigma = {sigma}: AD is inactive (threshold {threshold})")]
    UndefinedTau { sigma: f64, threshold: f64 },

    #[error("no grid point satisfies the capacity constraint")]
    InfeasibleEverywhere,

    #[error("quadrature did not converge: residual {residual:e} exceeds {tolerance:e}")]
    Quadrature { residual: f64, tolerance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
