//! Binary decision tree over numeric features, split by C4.5 gain ratio.
//!
//! Thresholds are midpoints between consecutive distinct values; samples
//! with `value <= threshold` go left. Only pre-pruning is applied: a split
//! must gain more than [`MIN_GAIN`] bits and leave at least `min_leaf`
//! samples on each side.

use serde::{Deserialize, Serialize};

use super::{check_dim, Dataset, Label};
use crate::{Error, Result};

pub const MIN_GAIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Internal {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        label: Label,
        /// Training samples reaching this leaf, indexed by [`Label::index`].
        counts: [usize; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafInfo {
    pub label: Label,
    pub counts: [usize; 2],
}

impl LeafInfo {
    pub fn spam_fraction(&self) -> f64 {
        let total = self.counts[0] + self.counts[1];
        if total == 0 {
            0.0
        } else {
            self.counts[Label::Spam.index()] as f64 / total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtModel {
    pub feature_names: Vec<String>,
    pub nodes: Vec<Node>,
    pub root: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub gain_ratio: f64,
}

fn entropy(counts: [usize; 2]) -> f64 {
    let total = (counts[0] + counts[1]) as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Gain ratio of splitting `parent` into `left` and the remainder.
fn gain_ratio(parent: [usize; 2], left: [usize; 2]) -> Option<f64> {
    let right = [parent[0] - left[0], parent[1] - left[1]];
    let n = (parent[0] + parent[1]) as f64;
    let nl = (left[0] + left[1]) as f64;
    let nr = n - nl;
    let gain = entropy(parent) - (nl / n) * entropy(left) - (nr / n) * entropy(right);
    let split_info = entropy([left[0] + left[1], right[0] + right[1]]);
    (gain > MIN_GAIN && split_info > 0.0).then(|| gain / split_info)
}

fn label_counts(labels: &[Label], indices: &[usize]) -> [usize; 2] {
    let mut counts = [0; 2];
    for &i in indices {
        counts[labels[i].index()] += 1;
    }
    counts
}

/// Best threshold on one feature among `indices`, or `None` when no
/// admissible split gains anything. Ties keep the smallest threshold.
fn best_threshold(data: &Dataset, indices: &[usize], feature: usize, min_leaf: usize) -> Option<(f64, f64)> {
    if indices.len() < 2 {
        return None;
    }
    let mut sorted: Vec<(f64, Label)> = indices
        .iter()
        .map(|&i| (data.row(i)[feature], data.labels()[i]))
        .collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let parent = label_counts(data.labels(), indices);

    let mut left = [0usize; 2];
    let mut best: Option<(f64, f64)> = None;
    for k in 0..sorted.len() - 1 {
        left[sorted[k].1.index()] += 1;
        let (lo, hi) = (sorted[k].0, sorted[k + 1].0);
        if lo == hi {
            continue;
        }
        let n_left = k + 1;
        if n_left < min_leaf || sorted.len() - n_left < min_leaf {
            continue;
        }
        if let Some(ratio) = gain_ratio(parent, left) {
            if best.is_none_or(|(_, r)| ratio > r) {
                best = Some(((lo + hi) / 2.0, ratio));
            }
        }
    }
    best
}

/// `(threshold, gain_ratio)` for the best split of the whole dataset on
/// `feature`, with no minimum leaf size.
pub fn best_split(data: &Dataset, feature: usize) -> Option<(f64, f64)> {
    let all: Vec<usize> = (0..data.len()).collect();
    best_threshold(data, &all, feature, 1)
}

fn choose_split(data: &Dataset, indices: &[usize], min_leaf: usize) -> Option<Split> {
    let mut best: Option<Split> = None;
    for feature in 0..data.dim() {
        if let Some((threshold, gain_ratio)) = best_threshold(data, indices, feature, min_leaf) {
            if best.is_none_or(|b| gain_ratio > b.gain_ratio) {
                best = Some(Split {
                    feature,
                    threshold,
                    gain_ratio,
                });
            }
        }
    }
    best
}

fn majority(counts: [usize; 2]) -> Label {
    if counts[Label::Spam.index()] > counts[Label::Ham.index()] {
        Label::Spam
    } else {
        Label::Ham
    }
}

pub fn train(data: &Dataset, min_leaf: usize) -> Result<DtModel> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if min_leaf == 0 {
        return Err(Error::InvalidParameter("min_leaf must be at least 1".into()));
    }
    let mut nodes = Vec::new();
    let all: Vec<usize> = (0..data.len()).collect();
    grow(data, all, min_leaf, &mut nodes);
    Ok(DtModel {
        feature_names: data.feature_names().to_vec(),
        nodes,
        root: 0,
    })
}

fn grow(data: &Dataset, indices: Vec<usize>, min_leaf: usize, nodes: &mut Vec<Node>) -> usize {
    let id = nodes.len();
    let counts = label_counts(data.labels(), &indices);
    let leaf = Node::Leaf {
        label: majority(counts),
        counts,
    };
    nodes.push(leaf);

    let pure = counts[0] == 0 || counts[1] == 0;
    if pure {
        return id;
    }
    let Some(split) = choose_split(data, &indices, min_leaf) else {
        return id;
    };
    let (left, right): (Vec<usize>, Vec<usize>) = indices
        .into_iter()
        .partition(|&i| data.row(i)[split.feature] <= split.threshold);
    let left = grow(data, left, min_leaf, nodes);
    let right = grow(data, right, min_leaf, nodes);
    nodes[id] = Node::Internal {
        feature: split.feature,
        threshold: split.threshold,
        left,
        right,
    };
    id
}

impl DtModel {
    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn leaf_for(&self, v: &[f64]) -> Result<LeafInfo> {
        check_dim(self.dim(), v)?;
        let mut at = self.root;
        loop {
            match &self.nodes[at] {
                Node::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if v[*feature] <= *threshold { *left } else { *right },
                Node::Leaf { label, counts } => {
                    return Ok(LeafInfo {
                        label: *label,
                        counts: *counts,
                    })
                }
            }
        }
    }

    pub fn predict(&self, v: &[f64]) -> Result<Label> {
        Ok(self.leaf_for(v)?.label)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    /// Every node reachable exactly once from the root, children in range.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(at) = stack.pop() {
            if at >= self.nodes.len() || seen[at] {
                return false;
            }
            seen[at] = true;
            if let Node::Internal { left, right, .. } = self.nodes[at] {
                stack.extend([left, right]);
            }
        }
        seen.into_iter().all(|s| s)
    }
}
