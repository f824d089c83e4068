//! Limit cycles of planar centers perturbed by continuous homogeneous fields.
//!
//! The crate covers the whole chain for systems
//! `(ẋ, ẏ) = (-y, x) + ε Σ bⱼ Xⱼ(x, y)` with each `Xⱼ` homogeneous of degree
//! `αⱼ`: angular integrals and the averaged function ([`averaging`]),
//! coefficient synthesis for prescribed cycle radii, direct certification by
//! the Poincaré return map ([`flow`]), and non-existence certificates for
//! three-monomial systems ([`classifier`]).

pub mod averaging;
pub mod classifier;
pub mod error;
pub mod exponent;
pub mod field;
pub mod flow;
pub mod lienard;
pub mod linalg;
pub mod pipeline;
pub mod presets;
pub mod quadrature;

pub use averaging::{
    analyze, angular_integral, angular_integrals, averaged_function, descartes_bound,
    interval_degree, lower_bound_count, melnikov, melnikov_line_integral, positive_roots,
    synthesize_coefficients, wronskian_closed_form, wronskian_numeric, AngularIntegral,
    AveragedFunction, AveragingReport, Root, RootReport,
};
pub use classifier::{classify, reduce_common_factor, MonomialSystem, NoCycleCertificate, Property};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use field::{
    angular_components, eval_field, eval_term, homogeneity_residual, swap_orientation,
    HomogeneousField, Orientation, PerturbationSpec, SignedPowerTerm,
};
pub use flow::{
    continuation_check, find_fixed_points, radial_rhs, return_map, ContinuationTable,
    FixedPointScan, LimitCycleCertificate, ReturnMapSample,
};
pub use lienard::{hilbert_monomial_lower_bound, lienard_family};
