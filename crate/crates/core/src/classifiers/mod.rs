//! Naive Bayes, C4.5-style decision tree and linear soft-margin SVM over
//! dense numeric feature vectors.

pub mod naive_bayes;
pub mod svm;
pub mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::features::{FeatureVector, FEATURE_DICTIONARY};
use crate::{Error, Result};

pub use naive_bayes::NbModel;
pub use svm::{SvmModel, SvmParams};
pub use tree::DtModel;

/// Class labels. `Ham` orders first so that ties resolve toward it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Ham,
    Spam,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Ham, Label::Spam];

    pub fn index(self) -> usize {
        self as usize
    }

    /// SVM target: spam = +1, ham = -1.
    pub fn sign(self) -> f64 {
        match self {
            Label::Spam => 1.0,
            Label::Ham => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Spam => "spam",
            Label::Ham => "ham",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spam" | "1" => Ok(Label::Spam),
            "ham" | "0" | "nonspam" | "non-spam" => Ok(Label::Ham),
            other => Err(Error::InvalidParameter(format!("unknown label `{other}`"))),
        }
    }
}

/// Labeled rows of equal dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<Vec<f64>>,
    labels: Vec<Label>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<Label>, feature_names: Vec<String>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let dim = feature_names.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(Dataset {
            rows,
            labels,
            feature_names,
        })
    }

    /// Full 21-feature dataset; every vector must carry a label.
    pub fn from_vectors(vectors: &[FeatureVector]) -> Result<Self> {
        let labels = vectors
            .iter()
            .map(|v| {
                v.label
                    .ok_or_else(|| Error::InvalidDataset(format!("vector `{}` is unlabeled", v.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(
            vectors.iter().map(|v| v.values.to_vec()).collect(),
            labels,
            FEATURE_DICTIONARY.iter().map(|f| f.name.to_string()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for l in &self.labels {
            counts[l.index()] += 1;
        }
        counts
    }

    /// Keep the given zero-based columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Dataset> {
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.dim()) {
            return Err(Error::InvalidParameter(format!(
                "column {bad} out of range for {} features",
                self.dim()
            )));
        }
        Ok(Dataset {
            rows: self
                .rows
                .iter()
                .map(|r| columns.iter().map(|&c| r[c]).collect())
                .collect(),
            labels: self.labels.clone(),
            feature_names: columns.iter().map(|&c| self.feature_names[c].clone()).collect(),
        })
    }

    /// Keep the given rows, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    pub fn with_labels(&self, labels: Vec<Label>) -> Result<Dataset> {
        Dataset::new(self.rows.clone(), labels, self.feature_names.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nb,
    Dt,
    Svm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Nb, Algorithm::Dt, Algorithm::Svm];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nb => "nb",
            Algorithm::Dt => "dt",
            Algorithm::Svm => "svm",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::Nb => "Naive Bayes",
            Algorithm::Dt => "Decision Tree",
            Algorithm::Svm => "SVM (SMO)",
        }
    }

    pub fn train(self, data: &Dataset, config: &TrainConfig) -> Result<TrainedModel> {
        Ok(match self {
            Algorithm::Nb => TrainedModel::Nb(naive_bayes::train(data)?),
            Algorithm::Dt => TrainedModel::Dt(tree::train(data, config.min_leaf)?),
            Algorithm::Svm => TrainedModel::Svm(svm::train(data, &config.svm)?),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nb" | "naive-bayes" | "naivebayes" => Ok(Algorithm::Nb),
            "dt" | "tree" | "j48" | "c45" => Ok(Algorithm::Dt),
            "svm" | "smo" => Ok(Algorithm::Svm),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub min_leaf: usize,
    pub svm: SvmParams,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            min_leaf: 2,
            svm: SvmParams::default(),
        }
    }
}

impl TrainConfig {
    pub fn with_seed(&self, seed: u64) -> TrainConfig {
        let mut c = self.clone();
        c.svm.seed = seed;
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// NB spam posterior, DT leaf spam fraction or SVM signed margin.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", content = "params", rename_all = "lowercase")]
pub enum TrainedModel {
    Nb(NbModel),
    Dt(DtModel),
    Svm(SvmModel),
}

impl TrainedModel {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            TrainedModel::Nb(_) => Algorithm::Nb,
            TrainedModel::Dt(_) => Algorithm::Dt,
            TrainedModel::Svm(_) => Algorithm::Svm,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TrainedModel::Nb(m) => m.dim(),
            TrainedModel::Dt(m) => m.dim(),
            TrainedModel::Svm(m) => m.dim(),
        }
    }

    pub fn predict(&self, v: &[f64]) -> Result<Prediction> {
        match self {
            TrainedModel::Nb(m) => {
                let (label, post) = m.predict(v)?;
                Ok(Prediction {
                    label,
                    score: post[Label::Spam.index()],
                })
            }
            TrainedModel::Dt(m) => {
                let leaf = m.leaf_for(v)?;
                Ok(Prediction {
                    label: leaf.label,
                    score: leaf.spam_fraction(),
                })
            }
            TrainedModel::Svm(m) => {
                let (label, score) = m.predict(v)?;
                Ok(Prediction { label, score })
            }
        }
    }
}

pub(crate) fn check_dim(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        })
    }
}
