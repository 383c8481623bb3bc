use crate::classifiers::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed message: no header/body separator and no header lines")]
    MalformedMessage,
    #[error("category mask selects no features")]
    EmptyMask,
    #[error("feature subset is empty")]
    EmptySubset,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("no training samples for class {0}")]
    EmptyClass(Label),
    #[error("training data contains a single class")]
    SingleClass,
    #[error("dimension mismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("too few samples for {folds}-fold cross-validation: class {label} has {count}")]
    TooFewSamples {
        folds: usize,
        label: Label,
        count: usize,
    },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
