//! Gaussian Naive Bayes.
//!
//! The class posterior factors over features under class-conditional
//! independence; each numeric feature's likelihood is a normal density
//! with per-class mean and (floored) variance instead of a word
//! probability table.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_dim, Dataset, Label};
use crate::{Error, Result};

pub const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianStat {
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub prior: f64,
    pub features: Vec<GaussianStat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub feature_names: Vec<String>,
    /// Indexed by [`Label::index`].
    pub classes: [ClassStats; 2],
}

/// Fit priors and per-class Gaussian parameters. A class absent from the
/// data gets prior 0 and is never predicted.
pub fn train(data: &Dataset) -> Result<NbModel> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = data.len() as f64;
    let counts = data.class_counts();
    let classes = Label::ALL.map(|label| {
        let members: Vec<&[f64]> = data
            .rows()
            .iter()
            .zip(data.labels())
            .filter(|(_, l)| **l == label)
            .map(|(r, _)| r.as_slice())
            .collect();
        ClassStats {
            prior: counts[label.index()] as f64 / n,
            features: (0..data.dim())
                .map(|j| gaussian_fit(members.iter().map(|r| r[j])))
                .collect(),
        }
    });
    Ok(NbModel {
        feature_names: data.feature_names().to_vec(),
        classes,
    })
}

/// Sample mean and unbiased variance, floored. Fewer than two samples
/// give the floor.
fn gaussian_fit(values: impl Iterator<Item = f64> + Clone) -> GaussianStat {
    let n = values.clone().count();
    if n == 0 {
        return GaussianStat {
            mean: 0.0,
            variance: VARIANCE_FLOOR,
        };
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let variance = if n > 1 {
        values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    GaussianStat {
        mean,
        variance: variance.max(VARIANCE_FLOOR),
    }
}

pub fn log_normal_density(x: f64, stat: GaussianStat) -> f64 {
    -0.5 * (2.0 * PI * stat.variance).ln() - (x - stat.mean).powi(2) / (2.0 * stat.variance)
}

/// Normalize joint log-scores into probabilities.
pub fn softmax(log_scores: [f64; 2]) -> [f64; 2] {
    let max = log_scores[0].max(log_scores[1]);
    let exp = log_scores.map(|s| (s - max).exp());
    let total = exp[0] + exp[1];
    exp.map(|e| e / total)
}

impl NbModel {
    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn priors(&self) -> [f64; 2] {
        [self.classes[0].prior, self.classes[1].prior]
    }

    /// `ln P(C) + sum_j ln N(v_j; mu, sigma^2)` per class.
    pub fn joint_log_scores(&self, v: &[f64]) -> Result<[f64; 2]> {
        check_dim(self.dim(), v)?;
        Ok(self.classes.each_ref().map(|c| {
            c.prior.ln()
                + v.iter()
                    .zip(&c.features)
                    .map(|(&x, &s)| log_normal_density(x, s))
                    .sum::<f64>()
        }))
    }

    /// Predicted class and per-class posteriors (ham, spam). Ties go to ham.
    pub fn predict(&self, v: &[f64]) -> Result<(Label, [f64; 2])> {
        let scores = self.joint_log_scores(v)?;
        let label = if scores[Label::Spam.index()] > scores[Label::Ham.index()] {
            Label::Spam
        } else {
            Label::Ham
        };
        Ok((label, softmax(scores)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dataset(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Dataset {
        let names = (0..rows[0].len()).map(|i| format!("x{i}")).collect();
        Dataset::new(rows, labels, names).unwrap()
    }

    #[test]
    fn single_class_prior_is_one() {
        let m = train(&dataset(vec![vec![1.0], vec![2.0]], vec![Label::Spam; 2])).unwrap();
        assert_eq!(m.priors(), [0.0, 1.0]);
        assert_eq!(m.predict(&[-50.0]).unwrap().0, Label::Spam);
    }

    #[test]
    fn empty_dataset_rejected() {
        let d = Dataset::new(vec![], vec![], vec!["x".into()]).unwrap();
        assert!(matches!(train(&d), Err(Error::EmptyDataset)));
    }

    #[test]
    fn constant_classes_floor_variance() {
        let d = dataset(
            vec![vec![1.0], vec![1.0], vec![0.0], vec![0.0]],
            vec![Label::Spam, Label::Spam, Label::Ham, Label::Ham],
        );
        let m = train(&d).unwrap();
        let spam = m.classes[Label::Spam.index()].features[0];
        let ham = m.classes[Label::Ham.index()].features[0];
        assert_eq!((spam.mean, spam.variance), (1.0, VARIANCE_FLOOR));
        assert_eq!((ham.mean, ham.variance), (0.0, VARIANCE_FLOOR));
        // ln N(1; 1, eps) vs ln N(1; 0, eps): the second loses by 1 / (2 eps).
        let scores = m.joint_log_scores(&[1.0]).unwrap();
        let expected_gap = 1.0 / (2.0 * VARIANCE_FLOOR);
        assert!((scores[1] - scores[0] - expected_gap).abs() < 1e-3);
        assert_eq!(m.predict(&[1.0]).unwrap().0, Label::Spam);
    }

    #[test]
    fn balanced_priors() {
        let rows: Vec<Vec<f64>> = (0..1000).map(|i| vec![i as f64]).collect();
        let labels = (0..1000).map(|i| if i % 2 == 0 { Label::Spam } else { Label::Ham }).collect();
        assert_eq!(train(&dataset(rows, labels)).unwrap().priors(), [0.5, 0.5]);
    }

    #[test]
    fn equal_likelihoods_follow_prior() {
        let stat = GaussianStat { mean: 1.0, variance: 2.0 };
        let m = NbModel {
            feature_names: vec!["x".into()],
            classes: [
                ClassStats { prior: 0.3, features: vec![stat] },
                ClassStats { prior: 0.7, features: vec![stat] },
            ],
        };
        for x in [-10.0, 1.0, 42.0] {
            let (label, post) = m.predict(&[x]).unwrap();
            assert_eq!(label, Label::Spam);
            assert!((post[1] - 0.7).abs() < 1e-12);
        }
        // Exact tie goes to ham.
        let tie = dataset(
            vec![vec![0.0], vec![2.0], vec![0.0], vec![2.0]],
            vec![Label::Ham, Label::Ham, Label::Spam, Label::Spam],
        );
        let (label, post) = train(&tie).unwrap().predict(&[5.0]).unwrap();
        assert_eq!(label, Label::Ham);
        assert_eq!(post, [0.5, 0.5]);
    }

    #[test]
    fn dimension_mismatch() {
        let m = train(&dataset(vec![vec![1.0, 2.0]], vec![Label::Ham])).unwrap();
        assert!(matches!(m.predict(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
    }

    proptest! {
        #[test]
        fn posteriors_sum_to_one(
            rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 4..30),
            x in prop::collection::vec(-50.0f64..50.0, 3),
        ) {
            let labels: Vec<Label> = (0..rows.len()).map(|i| Label::ALL[i % 2]).collect();
            let m = train(&dataset(rows, labels)).unwrap();
            let (_, post) = m.predict(&x).unwrap();
            prop_assert!((post[0] + post[1] - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn softmax_shift_invariant(a in -1e3f64..1e3, b in -1e3f64..1e3, shift in -1e4f64..1e4) {
            let p = softmax([a, b]);
            let q = softmax([a + shift, b + shift]);
            prop_assert!((p[0] - q[0]).abs() < 1e-9);
            prop_assert_eq!(p[1] > p[0], q[1] > q[0]);
        }
    }
}
