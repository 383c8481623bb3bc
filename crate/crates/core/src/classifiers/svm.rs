//! Linear soft-margin SVM trained by sequential minimal optimization.
//!
//! Decision function: `score(x) = w · z(x) − b`, where `z` standardizes
//! each feature with the training mean and population standard deviation
//! (zero-variance features map to 0). Spam is +1, ham is −1.
//!
//! Training runs two stages over the dual
//! `max Σα − ½ ΣΣ αᵢαⱼcᵢcⱼ zᵢ·zⱼ` subject to `0 ≤ α ≤ C`, `Σ αᵢcᵢ = 0`:
//!
//! 1. Sweeps of the simplified SMO heuristic: every KKT violator is paired
//!    with a seeded random partner, until `max_passes` consecutive sweeps
//!    change nothing.
//! 2. Maximal-violating-pair updates until the KKT gap is within `tol`,
//!    which certifies every per-point condition within `tol / 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, Dataset, Label};
use crate::{Error, Result};

/// α values within this (relative to C) of a bound are snapped onto it.
const BOUND_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    pub seed: u64,
    /// Upper bound on stage-1 sweeps.
    pub max_sweeps: usize,
    /// Upper bound on stage-2 pair updates.
    pub max_iterations: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tol: 1e-3,
            max_passes: 10,
            seed: 42,
            max_sweeps: 200,
            max_iterations: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub mean: f64,
    pub std_dev: f64,
}

impl Scaling {
    pub fn apply(&self, x: f64) -> f64 {
        if self.std_dev > 0.0 {
            (x - self.mean) / self.std_dev
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub feature_names: Vec<String>,
    /// Weights over standardized features.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub scaling: Vec<Scaling>,
    pub c: f64,
    /// Dual coefficients, one per training point, in training order.
    pub alphas: Vec<f64>,
    /// Whether stage 2 reached the KKT gap tolerance.
    pub converged: bool,
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn standardize(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.scaling).map(|(&x, s)| s.apply(x)).collect()
    }

    /// `w · z − b` for an already standardized vector.
    pub fn score_standardized(&self, z: &[f64]) -> f64 {
        dot(&self.weights, z) - self.bias
    }

    pub fn decision_value(&self, v: &[f64]) -> Result<f64> {
        check_dim(self.dim(), v)?;
        Ok(self.score_standardized(&self.standardize(v)))
    }

    /// Class and signed margin score; a score of exactly 0 is ham.
    pub fn predict(&self, v: &[f64]) -> Result<(Label, f64)> {
        let score = self.decision_value(v)?;
        let label = if score > 0.0 { Label::Spam } else { Label::Ham };
        Ok((label, score))
    }

    /// Weights and offset in original feature units:
    /// `score(x) = w' · x − b'`.
    pub fn original_hyperplane(&self) -> (Vec<f64>, f64) {
        let mut offset = self.bias;
        let w = self
            .weights
            .iter()
            .zip(&self.scaling)
            .map(|(&w, s)| {
                if s.std_dev > 0.0 {
                    offset += w * s.mean / s.std_dev;
                    w / s.std_dev
                } else {
                    0.0
                }
            })
            .collect();
        (w, offset)
    }

    /// Distance between the hyperplanes `score = ±1` in original units.
    pub fn margin_width(&self) -> f64 {
        let (w, _) = self.original_hyperplane();
        2.0 / dot(&w, &w).sqrt()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn fit_scaling(data: &Dataset) -> Vec<Scaling> {
    let n = data.len() as f64;
    (0..data.dim())
        .map(|j| {
            let mean = data.rows().iter().map(|r| r[j]).sum::<f64>() / n;
            let var = data.rows().iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
            let std_dev = var.sqrt();
            Scaling {
                mean,
                std_dev: if std_dev > 1e-12 { std_dev } else { 0.0 },
            }
        })
        .collect()
}

struct Smo<'a> {
    z: &'a [Vec<f64>],
    y: Vec<f64>,
    alpha: Vec<f64>,
    w: Vec<f64>,
    c: f64,
}

impl Smo<'_> {
    fn kernel(&self, i: usize, j: usize) -> f64 {
        dot(&self.z[i], &self.z[j])
    }

    /// `w · zᵢ − yᵢ`, the prediction error without the bias term.
    fn error(&self, i: usize) -> f64 {
        dot(&self.w, &self.z[i]) - self.y[i]
    }

    fn snap(&self, a: f64) -> f64 {
        if a < BOUND_EPS * self.c {
            0.0
        } else if a > self.c * (1.0 - BOUND_EPS) {
            self.c
        } else {
            a
        }
    }

    /// Jointly optimize (αᵢ, αⱼ) given bias-free errors. Returns whether
    /// anything moved by more than `min_step`.
    fn take_step(&mut self, i: usize, j: usize, ei: f64, ej: f64, min_step: f64) -> bool {
        if i == j {
            return false;
        }
        let (yi, yj) = (self.y[i], self.y[j]);
        let (ai, aj) = (self.alpha[i], self.alpha[j]);
        let (lo, hi) = if yi != yj {
            ((aj - ai).max(0.0), (self.c + aj - ai).min(self.c))
        } else {
            ((ai + aj - self.c).max(0.0), (ai + aj).min(self.c))
        };
        if hi - lo <= 0.0 {
            return false;
        }
        let eta = self.kernel(i, i) + self.kernel(j, j) - 2.0 * self.kernel(i, j);
        let aj_new = if eta > 1e-12 {
            (aj + yj * (ei - ej) / eta).clamp(lo, hi)
        } else if yj * (ei - ej) > 0.0 {
            // Flat direction: the objective is linear, move to the better end.
            hi
        } else {
            lo
        };
        let aj_new = self.snap(aj_new);
        if (aj_new - aj).abs() <= min_step {
            return false;
        }
        let ai_new = self.snap(ai + yi * yj * (aj - aj_new));
        let (di, dj) = ((ai_new - ai) * yi, (aj_new - aj) * yj);
        for (k, w) in self.w.iter_mut().enumerate() {
            *w += di * self.z[i][k] + dj * self.z[j][k];
        }
        self.alpha[i] = ai_new;
        self.alpha[j] = aj_new;
        true
    }

    /// Index sets for the bias bounds: `i ∈ low` needs `b ≥ eᵢ`,
    /// `j ∈ up` needs `b ≤ eⱼ`.
    fn in_low(&self, i: usize) -> bool {
        (self.y[i] < 0.0 && self.alpha[i] < self.c) || (self.y[i] > 0.0 && self.alpha[i] > 0.0)
    }

    fn in_up(&self, i: usize) -> bool {
        (self.y[i] > 0.0 && self.alpha[i] < self.c) || (self.y[i] < 0.0 && self.alpha[i] > 0.0)
    }

    /// `(i_max_low, e_max, j_min_up, e_min)` over the current errors.
    fn violating_pair(&self, errors: &[f64]) -> Option<(usize, f64, usize, f64)> {
        let mut low: Option<(usize, f64)> = None;
        let mut up: Option<(usize, f64)> = None;
        for (k, &e) in errors.iter().enumerate() {
            if self.in_low(k) && low.is_none_or(|(_, v)| e > v) {
                low = Some((k, e));
            }
            if self.in_up(k) && up.is_none_or(|(_, v)| e < v) {
                up = Some((k, e));
            }
        }
        let ((i, ei), (j, ej)) = (low?, up?);
        Some((i, ei, j, ej))
    }

    fn all_errors(&self) -> Vec<f64> {
        (0..self.z.len()).map(|k| self.error(k)).collect()
    }

    fn recompute_weights(&mut self) {
        let d = self.w.len();
        let mut w = vec![0.0; d];
        for (i, zi) in self.z.iter().enumerate() {
            let coef = self.alpha[i] * self.y[i];
            if coef != 0.0 {
                for k in 0..d {
                    w[k] += coef * zi[k];
                }
            }
        }
        self.w = w;
    }
}

pub fn train(data: &Dataset, params: &SvmParams) -> Result<SvmModel> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let counts = data.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::SingleClass);
    }
    if !(params.c > 0.0 && params.c.is_finite()) || params.tol.is_nan() || params.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "SVM needs C > 0 and tol > 0 (C = {}, tol = {})",
            params.c, params.tol
        )));
    }

    let scaling = fit_scaling(data);
    let z: Vec<Vec<f64>> = data
        .rows()
        .iter()
        .map(|r| r.iter().zip(&scaling).map(|(&x, s)| s.apply(x)).collect())
        .collect();
    let n = z.len();
    let mut smo = Smo {
        z: &z,
        y: data.labels().iter().map(|l| l.sign()).collect(),
        alpha: vec![0.0; n],
        w: vec![0.0; data.dim()],
        c: params.c,
    };
    let tol = params.tol;

    // Stage 1: simplified SMO with an explicit intercept `w·z + b0`.
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut b0 = 0.0;
    let mut quiet = 0;
    let mut sweeps = 0;
    while quiet < params.max_passes && sweeps < params.max_sweeps && n > 1 {
        let mut changed = 0;
        for i in 0..n {
            let ei = smo.error(i) + b0;
            let yi = smo.y[i];
            let violates = (yi * ei < -tol && smo.alpha[i] < smo.c) || (yi * ei > tol && smo.alpha[i] > 0.0);
            if !violates {
                continue;
            }
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let ej = smo.error(j) + b0;
            let (ai_old, aj_old) = (smo.alpha[i], smo.alpha[j]);
            if !smo.take_step(i, j, ei, ej, 1e-5) {
                continue;
            }
            let yj = smo.y[j];
            let (di, dj) = (smo.alpha[i] - ai_old, smo.alpha[j] - aj_old);
            let b1 = b0 - ei - yi * di * smo.kernel(i, i) - yj * dj * smo.kernel(i, j);
            let b2 = b0 - ej - yi * di * smo.kernel(i, j) - yj * dj * smo.kernel(j, j);
            let free = |a: f64| a > 0.0 && a < smo.c;
            b0 = if free(smo.alpha[i]) {
                b1
            } else if free(smo.alpha[j]) {
                b2
            } else {
                (b1 + b2) / 2.0
            };
            changed += 1;
        }
        quiet = if changed == 0 { quiet + 1 } else { 0 };
        sweeps += 1;
    }

    // Stage 2: close the KKT gap with maximal violating pairs.
    smo.recompute_weights();
    let mut converged = false;
    for _ in 0..params.max_iterations {
        let errors = smo.all_errors();
        let Some((i, ei, j, ej)) = smo.violating_pair(&errors) else {
            converged = true;
            break;
        };
        if ei - ej <= tol {
            converged = true;
            break;
        }
        if !smo.take_step(i, j, ei, ej, 0.0) {
            break;
        }
    }

    smo.recompute_weights();
    let errors = smo.all_errors();
    let bias = match smo.violating_pair(&errors) {
        Some((_, ei, _, ej)) => (ei + ej) / 2.0,
        None => 0.0,
    };

    Ok(SvmModel {
        feature_names: data.feature_names().to_vec(),
        weights: smo.w,
        bias,
        scaling,
        c: params.c,
        alphas: smo.alpha,
        converged,
    })
}

/// Largest KKT violation over the training set (0 when every condition
/// holds exactly). Conditions with `s = c · score`:
/// `α = 0 ⇒ s ≥ 1`, `0 < α < C ⇒ s = 1`, `α = C ⇒ s ≤ 1`.
pub fn max_kkt_violation(model: &SvmModel, data: &Dataset) -> f64 {
    data.rows()
        .iter()
        .zip(data.labels())
        .zip(&model.alphas)
        .map(|((row, label), &a)| {
            let s = label.sign() * model.score_standardized(&model.standardize(row));
            if a <= 0.0 {
                (1.0 - s).max(0.0)
            } else if a >= model.c {
                (s - 1.0).max(0.0)
            } else {
                (s - 1.0).abs()
            }
        })
        .fold(0.0, f64::max)
}

pub fn dual_balance(model: &SvmModel, data: &Dataset) -> f64 {
    model
        .alphas
        .iter()
        .zip(data.labels())
        .map(|(a, l)| a * l.sign())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::{Ham, Spam};

    fn data(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Dataset {
        let names = (0..rows[0].len()).map(|i| format!("x{i}")).collect();
        Dataset::new(rows, labels, names).unwrap()
    }

    #[test]
    fn two_point_hyperplane() {
        let d = data(vec![vec![0.0], vec![2.0]], vec![Ham, Spam]);
        let m = train(&d, &SvmParams::default()).unwrap();
        let (w, offset) = m.original_hyperplane();
        let boundary = offset / w[0];
        assert!((boundary - 1.0).abs() < 1e-3, "boundary {boundary}");
        assert!((m.margin_width() - 2.0).abs() < 1e-6);
        assert!(m.alphas.iter().all(|&a| a > 0.0), "both are support vectors");
        let (label, s) = m.predict(&[1.0]).unwrap();
        assert!(s.abs() < 1e-6);
        if s == 0.0 {
            assert_eq!(label, Ham);
        }
        assert!((m.predict(&[2.0]).unwrap().1 - 1.0).abs() < 1e-3);
        assert_eq!(m.predict(&[2.0]).unwrap().0, Spam);
        assert!((m.predict(&[0.0]).unwrap().1 + 1.0).abs() < 1e-3);
        assert_eq!(m.predict(&[0.0]).unwrap().0, Ham);
    }

    #[test]
    fn zero_score_is_ham() {
        let m = SvmModel {
            feature_names: vec!["x".into()],
            weights: vec![1.0],
            bias: 0.0,
            scaling: vec![Scaling { mean: 1.0, std_dev: 1.0 }],
            c: 1.0,
            alphas: vec![],
            converged: true,
        };
        assert_eq!(m.predict(&[1.0]).unwrap(), (Ham, 0.0));
    }

    #[test]
    fn constant_feature_is_ignored() {
        let d = data(
            vec![vec![0.0, 7.0], vec![2.0, 7.0], vec![0.5, 7.0], vec![2.5, 7.0]],
            vec![Ham, Spam, Ham, Spam],
        );
        let m = train(&d, &SvmParams::default()).unwrap();
        assert_eq!(m.scaling[1].std_dev, 0.0);
        assert_eq!(m.weights[1], 0.0);
    }

    #[test]
    fn duplicated_points_keep_boundary() {
        let rows = vec![
            vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5],
            vec![3.0, 3.0], vec![4.0, 2.5], vec![3.5, 4.0],
        ];
        let labels = vec![Ham, Ham, Ham, Spam, Spam, Spam];
        let params = SvmParams { c: 100.0, ..SvmParams::default() };
        let single = train(&data(rows.clone(), labels.clone()), &params).unwrap();
        let doubled_rows: Vec<Vec<f64>> = rows.iter().flat_map(|r| [r.clone(), r.clone()]).collect();
        let doubled_labels: Vec<Label> = labels.iter().flat_map(|&l| [l, l]).collect();
        let doubled = train(&data(doubled_rows, doubled_labels), &params).unwrap();
        for gx in 0..=20 {
            for gy in 0..=20 {
                let p = [gx as f64 * 0.25 - 0.5, gy as f64 * 0.25 - 0.5];
                let (a, b) = (single.decision_value(&p).unwrap(), doubled.decision_value(&p).unwrap());
                // identical up to the KKT tolerance of each solution
                assert!((a - b).abs() < 1e-2, "{p:?}: {a} vs {b}");
                if a.abs() > 1e-2 {
                    assert_eq!(a > 0.0, b > 0.0);
                }
            }
        }
    }

    #[test]
    fn single_class_rejected() {
        let d = data(vec![vec![0.0], vec![1.0]], vec![Spam, Spam]);
        assert!(matches!(train(&d, &SvmParams::default()), Err(Error::SingleClass)));
    }

    #[test]
    fn overlapping_classes_satisfy_kkt() {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![(i % 10) as f64, (i * 7 % 13) as f64]).collect();
        let labels: Vec<Label> = (0..40).map(|i| if (i * 3) % 5 < 2 { Spam } else { Ham }).collect();
        let d = data(rows, labels);
        let m = train(&d, &SvmParams::default()).unwrap();
        assert!(m.converged);
        assert!(max_kkt_violation(&m, &d) <= 1e-3);
        assert!(dual_balance(&m, &d).abs() <= 1e-8);
        assert!(m.alphas.iter().all(|&a| (0.0..=1.0).contains(&a)));
    }

    #[test]
    fn seeded_training_is_deterministic() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i % 7) as f64, (i % 5) as f64]).collect();
        let labels: Vec<Label> = (0..30).map(|i| if i % 3 == 0 { Spam } else { Ham }).collect();
        let d = data(rows, labels);
        let p = SvmParams::default();
        assert_eq!(train(&d, &p).unwrap(), train(&d, &p).unwrap());
    }

    proptest! {
        #[test]
        fn dual_feasibility(
            pts in prop::collection::vec((prop::collection::vec(-3.0f64..3.0, 2), any::<bool>()), 4..30),
            c in 0.1f64..10.0,
        ) {
            let mut labels: Vec<Label> = pts.iter().map(|p| if p.1 { Spam } else { Ham }).collect();
            labels[0] = Spam;
            labels[1] = Ham;
            let d = data(pts.into_iter().map(|p| p.0).collect(), labels);
            let m = train(&d, &SvmParams { c, ..SvmParams::default() }).unwrap();
            prop_assert!(m.alphas.iter().all(|&a| (0.0..=c).contains(&a)));
            prop_assert!(dual_balance(&m, &d).abs() <= 1e-8);
            prop_assert!(m.converged);
            prop_assert!(max_kkt_violation(&m, &d) <= 1e-3);
        }
    }
}
