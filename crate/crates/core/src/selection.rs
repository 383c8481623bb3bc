//! Wrapper feature-subset search: best-first forward selection scored by
//! the cross-validated accuracy of the target classifier.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{Algorithm, Dataset, TrainConfig};
use crate::evaluation::cross_validate_columns;
use crate::{Error, Result};

/// Minimum score gain that counts as progress.
pub const MIN_IMPROVEMENT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSubset {
    /// Sorted, 1-based column numbers.
    pub indices: Vec<usize>,
    pub score: f64,
    pub evaluations: usize,
}

impl FeatureSubset {
    pub fn summary_line(&self) -> String {
        format!(
            "selected: {{{}}} score: {:.6} evaluations: {}",
            join(&self.indices, ", "),
            self.score,
            self.evaluations
        )
    }
}

fn join(indices: &[usize], sep: &str) -> String {
    indices.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub indices: Vec<usize>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: FeatureSubset,
    /// Every scored subset, in the order it was visited.
    pub trace: Vec<TraceEntry>,
    pub expansions: usize,
}

impl SearchOutcome {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("step,subset,score\n");
        for (i, t) in self.trace.iter().enumerate() {
            let _ = writeln!(out, "{},\"{{{}}}\",{:.6}", i + 1, join(&t.indices, ","), t.score);
        }
        out
    }
}

type MemoKey = (Vec<usize>, Algorithm, u64);

/// Memoized CV-accuracy oracle over column subsets of one dataset.
pub struct SubsetScorer<'a> {
    data: &'a Dataset,
    folds: usize,
    config: TrainConfig,
    memo: Mutex<HashMap<MemoKey, f64>>,
}

impl<'a> SubsetScorer<'a> {
    pub fn new(data: &'a Dataset, folds: usize, config: TrainConfig) -> Self {
        SubsetScorer {
            data,
            folds,
            config,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// CV accuracy restricted to the given 1-based columns.
    pub fn score(&self, subset: &[usize], algorithm: Algorithm, seed: u64) -> Result<f64> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut key_cols: Vec<usize> = subset.to_vec();
        key_cols.sort_unstable();
        key_cols.dedup();
        if let Some(&bad) = key_cols.iter().find(|&&c| c == 0 || c > self.data.dim()) {
            return Err(Error::InvalidParameter(format!(
                "feature {bad} out of range 1..={}",
                self.data.dim()
            )));
        }
        let key = (key_cols, algorithm, seed);
        if let Some(&s) = self.memo.lock().expect("memo poisoned").get(&key) {
            return Ok(s);
        }
        let columns: Vec<usize> = key.0.iter().map(|c| c - 1).collect();
        let score = cross_validate_columns(self.data, algorithm, &columns, self.folds, seed, &self.config)?
            .metrics
            .accuracy;
        self.memo.lock().expect("memo poisoned").insert(key, score);
        Ok(score)
    }

    pub fn cached(&self) -> usize {
        self.memo.lock().expect("memo poisoned").len()
    }
}

pub fn subset_score(
    data: &Dataset,
    subset: &[usize],
    algorithm: Algorithm,
    folds: usize,
    seed: u64,
    config: &TrainConfig,
) -> Result<f64> {
    SubsetScorer::new(data, folds, config.clone()).score(subset, algorithm, seed)
}

#[derive(Debug, Clone, PartialEq)]
struct Node {
    score: f64,
    subset: Vec<usize>,
}

impl Eq for Node {}

impl Ord for Node {
    /// Higher score first; on ties the lexicographically smaller set.
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.subset.cmp(&self.subset))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub algorithm: Algorithm,
    pub folds: usize,
    pub seed: u64,
    pub stale_limit: usize,
    pub config: TrainConfig,
}

impl SearchParams {
    pub fn new(algorithm: Algorithm) -> Self {
        SearchParams {
            algorithm,
            folds: 10,
            seed: 42,
            stale_limit: 5,
            config: TrainConfig::default(),
        }
    }
}

/// Best-first forward search from the empty set. The search ends when
/// `stale_limit` consecutive expansions fail to beat the best score by
/// more than [`MIN_IMPROVEMENT`], or when the frontier is exhausted.
pub fn best_first_forward(data: &Dataset, params: &SearchParams) -> Result<SearchOutcome> {
    if params.stale_limit == 0 {
        return Err(Error::InvalidParameter("stale limit must be at least 1".into()));
    }
    let scorer = SubsetScorer::new(data, params.folds, params.config.clone());
    best_first_with(&scorer, data.dim(), params)
}

pub fn best_first_with(scorer: &SubsetScorer<'_>, dim: usize, params: &SearchParams) -> Result<SearchOutcome> {
    if dim == 0 {
        return Err(Error::EmptySubset);
    }
    let mut visited: HashSet<Vec<usize>> = HashSet::new();
    let mut frontier = BinaryHeap::new();
    let mut trace = Vec::new();
    let mut best: Option<Node> = None;
    let mut stale = 0;
    let mut expansions = 0;
    let mut current: Vec<usize> = Vec::new();

    loop {
        let children: Vec<Vec<usize>> = (1..=dim)
            .filter(|f| !current.contains(f))
            .map(|f| {
                let mut s = current.clone();
                s.push(f);
                s.sort_unstable();
                s
            })
            .filter(|s| visited.insert(s.clone()))
            .collect();
        let scores = children
            .par_iter()
            .map(|s| scorer.score(s, params.algorithm, params.seed))
            .collect::<Result<Vec<f64>>>()?;
        expansions += 1;

        let mut improved = false;
        for (subset, score) in children.into_iter().zip(scores) {
            trace.push(TraceEntry {
                indices: subset.clone(),
                score,
            });
            let node = Node { score, subset };
            let better = match &best {
                None => true,
                Some(b) => score > b.score + MIN_IMPROVEMENT,
            };
            // Within one expansion keep the top child, ties to the smaller set.
            let wins_round = improved && best.as_ref().is_some_and(|b| node > *b);
            if better || wins_round {
                improved = true;
                best = Some(node.clone());
            }
            frontier.push(node);
        }
        stale = if improved { 0 } else { stale + 1 };
        if stale >= params.stale_limit {
            break;
        }
        match frontier.pop() {
            Some(next) => current = next.subset,
            None => break,
        }
    }

    let best = best.ok_or(Error::EmptySubset)?;
    Ok(SearchOutcome {
        best: FeatureSubset {
            indices: best.subset,
            score: best.score,
            evaluations: trace.len(),
        },
        trace,
        expansions,
    })
}
