//! placeholder
use thiserror::Error;
#[derive(Debug, Error)]
pub enum ClassifyError { #[error("x")] X }
pub struct PointClassification;
pub struct RecognitionBounds;
pub struct RecognitionResult;
pub enum Verdict { CmCandidate }
pub fn classify_point() {}
pub fn recognize_algebraic() {}
