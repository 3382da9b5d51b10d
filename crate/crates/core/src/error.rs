use thiserror::Error;

/// Errors raised by the geometric and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("fibre over chart pole: xi = 0 has no image in the other chart")]
    FibreOverChartPole,

    #[error("branch point: section derivative undefined (|P_eta| = {residual:.3e})")]
    BranchPoint { residual: f64 },

    #[error("non-reduced curve: discriminant vanishes identically")]
    NonReducedCurve,

    #[error("continuation breakdown near branch point at xi = {xi_re} + {xi_im}i")]
    ContinuationBreakdown { xi_re: f64, xi_im: f64 },

    #[error("singular spectral curve: {0}")]
    SingularCurve(String),

    #[error("elimination implemented for cyclic curves only")]
    NotCyclic,

    #[error("curve is Lagrangian everywhere (oriented normals to a plane or sphere)")]
    TotallyLagrangian,

    #[error("singular point of ruling (denominator {denominator:.3e})")]
    SingularRuling { denominator: f64 },

    #[error("curvature singularity: lambda^2 + (r + psi)^2 vanishes")]
    CurvatureSingularity,

    #[error("point not Lagrangian to tolerance: Im r0 = {imaginary:.3e}")]
    NotLagrangian { imaginary: f64 },

    #[error("edge blows up at branch direction s = {0}")]
    EdgeAtBranch(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid curve description: {0}")]
    InvalidCurve(String),
}

pub type Result<T> = std::result::Result<T, Error>;
