//! Behavioral spam classification toolkit.
//!
//! The pipeline is: raw bytes ([`email`]) → whitespace tokens and visible
//! text ([`tokenizer`]) → the 21 hand-crafted features ([`features`]) →
//! one of three learners ([`classifiers`]) → confusion-matrix metrics and
//! cross-validated benchmark grids ([`evaluation`]). [`selection`] runs a
//! best-first forward wrapper search over feature subsets and [`corpus`]
//! produces a seeded synthetic corpus with planted spammer tricks.

pub mod classifiers;
pub mod corpus;
pub mod email;
mod error;
pub mod evaluation;
pub mod features;
pub mod selection;
pub mod tokenizer;

pub use classifiers::{Algorithm, Dataset, Label, Prediction, TrainConfig, TrainedModel};
pub use email::{parse_eml, parse_mbox, BodyPart, EmailMessage};
pub use error::{Error, Result};
pub use features::{extract, CategoryMask, FeatureVector, FEATURE_COUNT};
