use thiserror::Error;

/// Errors shared across the numeric modules.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("phase-space point ({x}, {p}) is off the grid; nearest grid point is ({x_snap}, {p_snap})")]
    OffGridPoint { x: f64, p: f64, x_snap: f64, p_snap: f64 },

    #[error("tau = {0} is not representable as r/s with s a power of two <= {1}")]
    IncompatibleTau(f64, u32),

    #[error("theta_tau is a Dirac delta at tau = 1/2; convolve with the identity instead")]
    DeltaKernel,

    #[error("tau parameter must be finite, got {0}")]
    InvalidTau(f64),

    #[error("symbol cannot be rendered: {0}")]
    SymbolRender(String),

    #[error("metalinear scale L must be nonzero")]
    ZeroScale,

    #[error("Maslov index {mu} incompatible with sign of L = {l}")]
    MaslovParity { l: f64, mu: u8 },

    #[error("square grid required (dx = dp); got dx = {dx}, dp = {dp}")]
    NotSquareGrid { dx: f64, dp: f64 },

    #[error("companion grid for L = {0} leaves the supported domain")]
    CompanionDomain(f64),

    #[error("expression error: {0}")]
    Expr(#[from] crate::expr::ExprError),

    #[error("symbolic polynomial still contains the formal parameter tau")]
    ResidualTau,

    #[error("symbolic polynomial uses degree-of-freedom index {0}; the numeric bridge is one-dimensional")]
    MultiDof(u32),
}

pub type Result<T> = std::result::Result<T, CoreError>;
