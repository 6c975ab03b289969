use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("energy sign must be +1 or -1, got {0}")]
    InvalidEnergySign(i64),

    #[error("mode index {index} outside the cutoff |r| <= {r_cut}")]
    ModeOutOfRange { index: i64, r_cut: u32 },

    #[error("momentum cutoff {cutoff} must exceed |k| = {k}")]
    CutoffTooSmall { k: f64, cutoff: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("table grid is not uniform (step deviation {deviation:e})")]
    NonUniformGrid { deviation: f64 },

    #[error("invalid gauge function: {0}")]
    InvalidGauge(String),

    #[error("gauge function incompatible with box of length {length}: {reason}")]
    GaugeOutsideBox { length: f64, reason: String },

    #[error("time envelope violates initial conditions: {0}")]
    InvalidEnvelope(String),

    #[error("imaginary residue {residue:e} exceeds {limit:e} of the maximum magnitude")]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("Fock space guard: r_cut = {r_cut} exceeds the maximum {max} (dimension 2^{bits})")]
    DimensionGuard { r_cut: u32, max: u32, bits: u32 },

    #[error("differencing step {delta} too coarse; must be <= {max}")]
    StencilTooCoarse { delta: f64, max: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
