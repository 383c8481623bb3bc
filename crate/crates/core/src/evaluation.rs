//! Confusion-matrix metrics, stratified k-fold cross-validation and the
//! category-mask × algorithm benchmark grid. Spam is the positive class.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{Algorithm, Dataset, Label, TrainConfig};
use crate::features::{CategoryMask, FEATURE_COUNT};
use crate::{Error, Result};

pub const PROTOCOL: &str = "stratified k-fold cross-validation, seeded shuffle";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub const fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual, predicted) {
            (Label::Spam, Label::Spam) => self.tp += 1,
            (Label::Ham, Label::Spam) => self.fp += 1,
            (Label::Spam, Label::Ham) => self.fn_ += 1,
            (Label::Ham, Label::Ham) => self.tn += 1,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> Self {
        let mut cm = ConfusionMatrix::default();
        for (a, p) in pairs {
            cm.record(a, p);
        }
        cm
    }
}

impl std::ops::Add for ConfusionMatrix {
    type Output = ConfusionMatrix;

    fn add(self, o: ConfusionMatrix) -> ConfusionMatrix {
        ConfusionMatrix::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_, self.tn + o.tn)
    }
}

impl std::iter::Sum for ConfusionMatrix {
    fn sum<I: Iterator<Item = ConfusionMatrix>>(iter: I) -> Self {
        iter.fold(ConfusionMatrix::default(), |a, b| a + b)
    }
}

/// Non-negative rational kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };

    /// `num / den`, or zero when `den == 0`.
    pub fn new(num: u128, den: u128) -> Ratio {
        if den == 0 || num == 0 {
            return Ratio::ZERO;
        }
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn parts(self) -> (u128, u128) {
        (self.num, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    /// Support-weighted over both classes.
    pub precision: f64,
    /// Support-weighted over both classes; equals accuracy.
    pub recall: f64,
    pub spam: ClassMetrics,
    pub ham: ClassMetrics,
}

/// Weighted precision as an exact ratio:
/// `(s⁺·P⁺ + s⁻·P⁻) / N` with `P = 0` for classes never predicted.
pub fn weighted_precision_ratio(cm: &ConfusionMatrix) -> Ratio {
    let (tp, fp, fn_, tn) = (cm.tp as u128, cm.fp as u128, cm.fn_ as u128, cm.tn as u128);
    let total = tp + fp + fn_ + tn;
    let (s_spam, s_ham) = (tp + fn_, tn + fp);
    let (pred_spam, pred_ham) = (tp + fp, tn + fn_);
    match (pred_spam, pred_ham) {
        (0, 0) => Ratio::ZERO,
        (0, _) => Ratio::new(s_ham * tn, pred_ham * total),
        (_, 0) => Ratio::new(s_spam * tp, pred_spam * total),
        _ => Ratio::new(
            s_spam * tp * pred_ham + s_ham * tn * pred_spam,
            pred_spam * pred_ham * total,
        ),
    }
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    let total = cm.total() as u128;
    if total == 0 {
        return Err(Error::EmptyMatrix);
    }
    let (tp, fp, fn_, tn) = (cm.tp as u128, cm.fp as u128, cm.fn_ as u128, cm.tn as u128);
    let accuracy = Ratio::new(tp + tn, total).to_f64();
    Ok(Metrics {
        accuracy,
        precision: weighted_precision_ratio(cm).to_f64(),
        recall: accuracy,
        spam: ClassMetrics {
            precision: Ratio::new(tp, tp + fp).to_f64(),
            recall: Ratio::new(tp, tp + fn_).to_f64(),
            support: cm.tp + cm.fn_,
        },
        ham: ClassMetrics {
            precision: Ratio::new(tn, tn + fn_).to_f64(),
            recall: Ratio::new(tn, tn + fp).to_f64(),
            support: cm.tn + cm.fp,
        },
    })
}

/// Fold index for every sample. Each class is shuffled with one seeded
/// stream (ham first) and dealt round-robin, the dealing position carrying
/// over between classes so fold sizes stay within one of each other.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 folds, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for label in Label::ALL {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
        if members.len() < k {
            return Err(Error::TooFewSamples {
                folds: k,
                label,
                count: members.len(),
            });
        }
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = next % k;
            next += 1;
        }
    }
    Ok(assignment)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub fold_matrices: Vec<ConfusionMatrix>,
    pub matrix: ConfusionMatrix,
    pub metrics: Metrics,
}

/// Cross-validate using the given zero-based columns of `data`. Fold `f`
/// trains its SVM with seed `seed + f`.
pub fn cross_validate_columns(
    data: &Dataset,
    algorithm: Algorithm,
    columns: &[usize],
    k: usize,
    seed: u64,
    config: &TrainConfig,
) -> Result<CvResult> {
    if columns.is_empty() {
        return Err(Error::EmptySubset);
    }
    let projected = data.select_columns(columns)?;
    let folds = stratified_folds(projected.labels(), k, seed)?;
    let fold_matrices = (0..k)
        .into_par_iter()
        .map(|f| {
            let (train_idx, test_idx): (Vec<usize>, Vec<usize>) = (0..projected.len()).partition(|&i| folds[i] != f);
            let model = algorithm.train(&projected.subset(&train_idx), &config.with_seed(seed.wrapping_add(f as u64)))?;
            let mut cm = ConfusionMatrix::default();
            for i in test_idx {
                cm.record(projected.labels()[i], model.predict(projected.row(i))?.label);
            }
            Ok(cm)
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix: ConfusionMatrix = fold_matrices.iter().copied().sum();
    Ok(CvResult {
        metrics: metrics(&matrix)?,
        fold_matrices,
        matrix,
    })
}

/// Cross-validate a 21-feature dataset restricted to `mask`.
pub fn cross_validate(
    data: &Dataset,
    algorithm: Algorithm,
    mask: CategoryMask,
    k: usize,
    seed: u64,
    config: &TrainConfig,
) -> Result<CvResult> {
    if data.dim() != FEATURE_COUNT {
        return Err(Error::DimensionMismatch {
            expected: FEATURE_COUNT,
            got: data.dim(),
        });
    }
    cross_validate_columns(data, algorithm, &mask.feature_indices()?, k, seed, config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub mask: CategoryMask,
    pub algorithm: Algorithm,
    pub result: CvResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub folds: usize,
    pub seed: u64,
}

/// All seven category combinations × three algorithms, mask-major.
pub fn benchmark_grid(data: &Dataset, k: usize, seed: u64, config: &TrainConfig) -> Result<EvalReport> {
    let jobs: Vec<(CategoryMask, Algorithm)> = CategoryMask::all_combinations()
        .into_iter()
        .flat_map(|m| Algorithm::ALL.map(|a| (m, a)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(mask, algorithm)| {
            Ok(EvalRow {
                mask,
                algorithm,
                result: cross_validate(data, algorithm, mask, k, seed, config)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport { rows, folds: k, seed })
}

impl EvalReport {
    pub fn row(&self, mask: CategoryMask, algorithm: Algorithm) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.mask == mask && r.algorithm == algorithm)
    }

    fn header_line(&self, version: &str) -> String {
        format!(
            "spamkit {version}; protocol: {PROTOCOL}; folds: {}; seed: {}; positive class: spam; precision/recall: support-weighted",
            self.folds, self.seed
        )
    }

    /// Comment line, then one row per (mask, algorithm).
    pub fn to_csv(&self, version: &str) -> String {
        let mut out = format!("# {}\n", self.header_line(version));
        out.push_str("mask,algorithm,accuracy,precision,recall,tp,fp,fn,tn,folds,seed\n");
        for r in &self.rows {
            let (m, cm) = (&r.result.metrics, &r.result.matrix);
            let _ = writeln!(
                out,
                "{},{},{:.6},{:.6},{:.6},{},{},{},{},{},{}",
                r.mask, r.algorithm, m.accuracy, m.precision, m.recall, cm.tp, cm.fp, cm.fn_, cm.tn, self.folds, self.seed
            );
        }
        out
    }

    /// One line per mask with Acc./Pre./Rec. column groups per algorithm.
    pub fn to_markdown(&self, version: &str) -> String {
        let mut out = format!("<!-- {} -->\n\n", self.header_line(version));
        out.push_str("| Features |");
        for a in Algorithm::ALL {
            let _ = write!(out, " {} Acc. | {0} Pre. | {0} Rec. |", a.display_name());
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(3 * Algorithm::ALL.len()));
        out.push('\n');
        for mask in CategoryMask::all_combinations() {
            let _ = write!(out, "| {} |", mask_label(mask));
            for a in Algorithm::ALL {
                match self.row(mask, a) {
                    Some(r) => {
                        let m = &r.result.metrics;
                        let _ = write!(
                            out,
                            " {:.1}% | {:.1}% | {:.1}% |",
                            m.accuracy * 100.0,
                            m.precision * 100.0,
                            m.recall * 100.0
                        );
                    }
                    None => out.push_str(" - | - | - |"),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn mask_label(mask: CategoryMask) -> String {
    let parts: Vec<&str> = [
        (mask.include_cat1, "Cat1"),
        (mask.include_cat2, "Cat2"),
        (mask.include_cat3, "Cat3"),
    ]
    .iter()
    .filter(|(on, _)| *on)
    .map(|(_, n)| *n)
    .collect();
    if parts.len() == 1 {
        format!("{} Only", parts[0])
    } else {
        parts.join(" + ")
    }
}
