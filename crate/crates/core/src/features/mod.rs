//! The 21 hand-crafted features, grouped in three source categories:
//! subject (f1–f6), priority/content-type headers (f7–f8) and body
//! (f9–f21). Full definitions live in [`FEATURE_DICTIONARY`] and
//! `docs/features.md`.

mod body;
pub mod markup;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classifiers::Label;
use crate::email::EmailMessage;
use crate::tokenizer::{alphabetic_words, is_alphabetic_word, tokenize};
use crate::{Error, Result};

pub use body::extract_body_features;

pub const FEATURE_COUNT: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Subject,
    Headers,
    Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Binary,
    Count,
    Proportion,
}

#[derive(Debug, Clone, Copy)]
pub struct FeatureInfo {
    /// Column name, `f1` through `f21`.
    pub name: &'static str,
    pub category: Category,
    pub kind: FeatureKind,
    pub definition: &'static str,
}

macro_rules! feature {
    ($name:literal, $cat:ident, $kind:ident, $def:literal) => {
        FeatureInfo {
            name: $name,
            category: Category::$cat,
            kind: FeatureKind::$kind,
            definition: $def,
        }
    };
}

pub const FEATURE_DICTIONARY: [FeatureInfo; FEATURE_COUNT] = [
    feature!("f1", Subject, Binary, "subject has a non-whitespace character repeated 3 or more times consecutively"),
    feature!("f2", Subject, Count, "subject tokens of length >= 2 with at least one letter and every letter uppercase"),
    feature!("f3", Subject, Count, "subject tokens with at least 15 characters"),
    feature!("f4", Subject, Count, "subject tokens with at least two occurrences of J, K, Q, X, Z (case-insensitive)"),
    feature!("f5", Subject, Count, "subject alphabetic words of length >= 2 with no vowel (a, e, i, o, u; y is not a vowel)"),
    feature!("f6", Subject, Count, "subject tokens with a character other than A-Z, a-z or apostrophe before their last A-Z, a-z or apostrophe"),
    feature!("f7", Headers, Binary, "X-Priority, Priority or Importance set to a value outside {normal, medium, 3, 3 (normal), none}"),
    feature!("f8", Headers, Binary, "top-level Content-Type or any body part declares text/html"),
    feature!("f9", Body, Proportion, "share of body alphabetic words with no vowel and at least 7 characters"),
    feature!("f10", Body, Proportion, "share of body alphabetic words with at least two occurrences of J, K, Q, X, Z"),
    feature!("f11", Body, Proportion, "share of body alphabetic words with at least 15 characters"),
    feature!("f12", Body, Binary, "decoded body contains both \"From:\" and \"To:\" (case-sensitive)"),
    feature!("f13", Body, Count, "occurrences of \"<!--\" in the decoded body"),
    feature!("f14", Body, Count, "case-insensitive occurrences of \"href=\" in the decoded body"),
    feature!("f15", Body, Count, "img tags between an opening <a> tag and its </a>"),
    feature!("f16", Body, Binary, "some color declaration is white (white, #fff, #ffffff, rgb(255,255,255))"),
    feature!("f17", Body, Count, "href values containing a digit, '&', '%' or '@'"),
    feature!("f18", Body, Count, "color declarations: CSS color/background-color in style attributes and style elements, HTML color/bgcolor/text/link/vlink/alink attributes"),
    feature!("f19", Body, Binary, "JavaScript: a <script tag, an on<letters>= attribute inside a tag, or a javascript: URL"),
    feature!("f20", Body, Binary, "CSS: a <style tag, a style= attribute inside a tag, or a stylesheet link tag"),
    feature!("f21", Body, Binary, "decoded body contains \"<table\" (case-insensitive)"),
];

pub fn feature_names() -> impl Iterator<Item = &'static str> {
    FEATURE_DICTIONARY.iter().map(|f| f.name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
    pub label: Option<Label>,
    pub id: String,
}

impl FeatureVector {
    pub fn new(values: [f64; FEATURE_COUNT]) -> Self {
        FeatureVector {
            values,
            label: None,
            id: String::new(),
        }
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = Some(label);
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Value of feature `n` using 1-based numbering.
    pub fn get(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    /// Kind-specific range checks: binaries in {0,1}, counts non-negative
    /// integers, proportions in [0,1], everything finite.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (info, &v) in FEATURE_DICTIONARY.iter().zip(&self.values) {
            let ok = v.is_finite()
                && match info.kind {
                    FeatureKind::Binary => v == 0.0 || v == 1.0,
                    FeatureKind::Count => v >= 0.0 && v.fract() == 0.0,
                    FeatureKind::Proportion => (0.0..=1.0).contains(&v),
                };
            if !ok {
                return Err(format!("{} = {v} violates its {:?} range", info.name, info.kind));
            }
        }
        Ok(())
    }
}

/// Which of the three categories a feature set draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CategoryMask {
    pub include_cat1: bool,
    pub include_cat2: bool,
    pub include_cat3: bool,
}

impl CategoryMask {
    pub const ALL: CategoryMask = CategoryMask::new(true, true, true);

    pub const fn new(cat1: bool, cat2: bool, cat3: bool) -> Self {
        CategoryMask {
            include_cat1: cat1,
            include_cat2: cat2,
            include_cat3: cat3,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.include_cat1 || self.include_cat2 || self.include_cat3)
    }

    pub fn includes(&self, category: Category) -> bool {
        match category {
            Category::Subject => self.include_cat1,
            Category::Headers => self.include_cat2,
            Category::Body => self.include_cat3,
        }
    }

    /// Zero-based indices of the selected features in f1..f21 order.
    pub fn feature_indices(&self) -> Result<Vec<usize>> {
        if self.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(FEATURE_DICTIONARY
            .iter()
            .enumerate()
            .filter(|(_, f)| self.includes(f.category))
            .map(|(i, _)| i)
            .collect())
    }

    /// The seven non-empty masks in benchmark-table order.
    pub fn all_combinations() -> [CategoryMask; 7] {
        [
            CategoryMask::new(true, false, false),
            CategoryMask::new(false, true, false),
            CategoryMask::new(false, false, true),
            CategoryMask::new(true, true, false),
            CategoryMask::new(false, true, true),
            CategoryMask::new(true, false, true),
            CategoryMask::new(true, true, true),
        ]
    }
}

impl Default for CategoryMask {
    fn default() -> Self {
        CategoryMask::ALL
    }
}

impl fmt::Display for CategoryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [
            (self.include_cat1, "Cat1"),
            (self.include_cat2, "Cat2"),
            (self.include_cat3, "Cat3"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

impl FromStr for CategoryMask {
    type Err = Error;

    /// Accepts `all` or `+`/`,`-separated `cat1`/`cat2`/`cat3` (or bare
    /// digits), case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "all" {
            return Ok(CategoryMask::ALL);
        }
        let mut mask = CategoryMask::new(false, false, false);
        for part in s.split(['+', ',']).map(str::trim).filter(|p| !p.is_empty()) {
            match part.strip_prefix("cat").unwrap_or(part) {
                "1" => mask.include_cat1 = true,
                "2" => mask.include_cat2 = true,
                "3" => mask.include_cat3 = true,
                _ => return Err(Error::InvalidParameter(format!("unknown category `{part}`"))),
            }
        }
        if mask.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(mask)
    }
}

/// A category-restricted view of a feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedVector {
    pub names: Vec<&'static str>,
    pub values: Vec<f64>,
}

pub fn project(v: &FeatureVector, mask: CategoryMask) -> Result<ProjectedVector> {
    let idx = mask.feature_indices()?;
    Ok(ProjectedVector {
        names: idx.iter().map(|&i| FEATURE_DICTIONARY[i].name).collect(),
        values: idx.iter().map(|&i| v.values[i]).collect(),
    })
}

/// f1..f6 from the (decoded) subject line.
pub fn extract_subject_features(subject: &str) -> [f64; 6] {
    let ts = tokenize(subject);
    let count = |pred: &dyn Fn(&str) -> bool| ts.iter().filter(|t| pred(t)).count() as f64;

    [
        f64::from(u8::from(has_repeated_run(subject, 3))),
        count(&is_shouted),
        count(&|t| t.chars().count() >= 15),
        count(&|t| rare_letter_count(t) >= 2),
        count(&|t| is_alphabetic_word(t) && t.chars().count() >= 2 && !has_vowel(t)),
        count(&has_inner_non_letter),
    ]
}

fn has_repeated_run(s: &str, min: usize) -> bool {
    let mut prev: Option<char> = None;
    let mut run = 0;
    for c in s.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run >= min && !crate::tokenizer::is_token_whitespace(c) {
            return true;
        }
    }
    false
}

fn is_shouted(token: &str) -> bool {
    token.chars().count() >= 2
        && token.chars().any(char::is_alphabetic)
        && token.chars().filter(|c| c.is_alphabetic()).all(char::is_uppercase)
}

pub(crate) fn rare_letter_count(word: &str) -> usize {
    word.chars()
        .filter(|c| matches!(c.to_ascii_lowercase(), 'j' | 'k' | 'q' | 'x' | 'z'))
        .count()
}

pub(crate) fn has_vowel(word: &str) -> bool {
    word.chars()
        .any(|c| matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u'))
}

/// Some character other than an English letter or apostrophe appears before
/// the token's last English letter or apostrophe. Trailing punctuation or
/// digits alone do not count.
fn has_inner_non_letter(token: &str) -> bool {
    let english = |c: char| c.is_ascii_alphabetic() || c == '\'';
    let Some(last) = token.char_indices().filter(|&(_, c)| english(c)).map(|(i, _)| i).next_back()
    else {
        return false;
    };
    token[..last].chars().any(|c| !english(c))
}

const NORMAL_PRIORITIES: [&str; 5] = ["normal", "medium", "3", "3 (normal)", "none"];

/// f7..f8 from the priority and content-type headers.
pub fn extract_header_features(msg: &EmailMessage) -> [f64; 2] {
    let raised = ["x-priority", "priority", "importance"].iter().any(|name| {
        msg.header_values(name).any(|v| {
            let v = v.trim().to_ascii_lowercase();
            !v.is_empty() && !NORMAL_PRIORITIES.contains(&v.as_str())
        })
    });
    let html = msg.top_level_media_type().as_deref() == Some("text/html")
        || msg.body_parts.iter().any(|p| p.content_type == "text/html");
    [f64::from(u8::from(raised)), f64::from(u8::from(html))]
}

/// All 21 features in f1..f21 order. The label is left unset.
pub fn extract(msg: &EmailMessage) -> FeatureVector {
    let mut values = [0.0; FEATURE_COUNT];
    values[..6].copy_from_slice(&extract_subject_features(&msg.subject));
    values[6..8].copy_from_slice(&extract_header_features(msg));
    values[8..].copy_from_slice(&extract_body_features(msg));
    FeatureVector::new(values)
}

pub(crate) fn word_proportions(text: &str) -> [f64; 3] {
    let ts = tokenize(text);
    let words = alphabetic_words(&ts);
    if words.is_empty() {
        return [0.0; 3];
    }
    let total = words.len() as f64;
    let share = |pred: &dyn Fn(&str) -> bool| words.iter().filter(|w| pred(w)).count() as f64 / total;
    [
        share(&|w| !has_vowel(w) && w.chars().count() >= 7),
        share(&|w| rare_letter_count(w) >= 2),
        share(&|w| w.chars().count() >= 15),
    ]
}
