use thiserror::Error;

/// Errors raised by the numerical and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid perturbation spec: {0}")]
    InvalidSpec(String),
    #[error("orientation: {0}")]
    Orientation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not reach tolerance {tol:e} within depth {depth} on [{lo}, {hi}]")]
    QuadratureFailed { lo: f64, hi: f64, tol: f64, depth: u32 },
    #[error("angular integral of field {index} is {value:e}, inside the dead band ({tol:e}, {upper:e})")]
    AmbiguousIntegral { index: usize, value: f64, tol: f64, upper: f64 },

    #[error("sign change in ({lo}, {hi}) could not be resolved to |h| <= {abs_tol:e}")]
    RootNotResolved { lo: f64, hi: f64, abs_tol: f64 },
    #[error("function vanishes at interval endpoint {0}")]
    EndpointZero(f64),
    #[error("{found} roots exceed the sign-change bound {bound}")]
    RootBoundViolated { found: usize, bound: usize },
    #[error("exponents must be distinct, {0} is repeated")]
    RepeatedExponent(f64),

    #[error("generalized Vandermonde system is ill-conditioned (estimate {0:e})")]
    IllConditioned(f64),
    #[error("synthesis verification failed: {0}")]
    SynthesisVerification(String),

    #[error("angular speed denominator {denominator:e} <= 0 at theta={theta}, r={r}")]
    DenominatorNonPositive { theta: f64, r: f64, denominator: f64 },
    #[error("trajectory left the guard interval ({lo:e}, {hi:e}) with r={r}")]
    GuardExceeded { r: f64, lo: f64, hi: f64 },
    #[error("epsilon must be nonzero for fixed-point search")]
    ZeroEpsilon,
    #[error("no fixed point within {window} of predicted radius {predicted} at eps={eps}")]
    NoMatch { eps: f64, predicted: f64, window: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("classifier reached no case for {0}")]
    UnreachableBranch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
