//! placeholder
use thiserror::Error;
#[derive(Debug, Error)]
pub enum CertificateError { #[error("x")] X }
pub struct AutomorphicFormInput;
pub struct PolynomialCertificate;
pub struct Theorem1Report;
pub struct Theorem2Report;
pub struct EquivalenceReport;
pub fn pole_reduce() {}
pub fn theorem1_pipeline() {}
pub fn theorem2_check() {}
pub fn is_equivalent() {}
