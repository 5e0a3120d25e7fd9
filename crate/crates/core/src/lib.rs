//! Exact-series and high-precision toolkit for cuspidal triangle groups.
//!
//! The crate computes, for any hyperbolic signature (p, q, ∞):
//! - the normalized Hauptmodul expansion `J = q̃⁻¹ + Σ cₖ q̃ᵏ` with exact
//!   rational coefficients ([`hauptmodul`]),
//! - the discriminant-analogue form `Δ_{2L}` and its expansion
//!   ([`discriminant`]),
//! - polynomial certificates `f^{2L}/Δ^k = P(J)` for holomorphic forms and
//!   the induced zero classification ([`certificate`]),
//! - high-precision evaluation of all of these on the upper half plane,
//!   including the normalizing constant α₃ ([`numeric`]),
//! - lattice-reduction recognition of algebraic numbers and the CM-candidate
//!   classifier ([`classify`]).
//!
//! Exact data lives in [`rug::Rational`]; numeric data is ball arithmetic
//! (midpoint + radius) over MPFR/MPC floats ([`field::Ball`]).

pub mod certificate;
pub mod classify;
pub mod discriminant;
pub mod field;
pub mod group;
pub mod hauptmodul;
pub mod json;
pub mod lll;
pub mod numeric;
pub mod poly;
pub mod roots;
pub mod series;

pub use certificate::{
    is_equivalent, pole_reduce, theorem1_pipeline, theorem2_check, AutomorphicFormInput,
    CertificateError, EquivalenceReport, PolynomialCertificate, Theorem1Report, Theorem2Report,
};
pub use classify::{
    classify_point, recognize_algebraic, ClassifyError, PointClassification, RecognitionBounds,
    RecognitionResult, Verdict,
};
pub use discriminant::{
    delta_expansion, delta_nonvanishing_check, DiscriminantError, DiscriminantExpansion,
    NonvanishingReport,
};
pub use field::{Ball, CoefficientField, ComplexBalls, Rationals};
pub use group::{
    derive_constants, is_arithmetic, make_signature, GroupConstants, GroupError, Signature,
    VertexOrder,
};
pub use hauptmodul::{
    hauptmodul_expansion, schwarzian_rhs, verify_schwarzian, HauptmodulError, HauptmodulExpansion,
    SchwarzianRhs,
};
pub use numeric::{
    compute_alpha3, eval_context, eval_delta, eval_form, eval_j, locate_zero, Alpha3, EvalContext,
    LocatedZero, NumericError,
};
pub use series::{SeriesError, TruncatedSeries};
