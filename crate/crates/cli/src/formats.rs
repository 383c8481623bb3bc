//! On-disk formats: feature CSV, manifests, model files, and input
//! discovery for `extract`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spamkit_core::features::{feature_names, CategoryMask};
use spamkit_core::{extract, parse_eml, parse_mbox, Dataset, FeatureVector, Label, TrainedModel, FEATURE_COUNT};

use crate::CliError;

pub const MODEL_FORMAT_VERSION: u32 = 1;

pub fn feature_header() -> Vec<String> {
    ["id", "label"].into_iter().chain(feature_names()).map(String::from).collect()
}

pub fn write_feature_csv(vectors: &[FeatureVector]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(feature_header())?;
    for v in vectors {
        let mut rec = vec![v.id.clone(), v.label.map(|l| l.to_string()).unwrap_or_default()];
        rec.extend(v.values.iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn read_feature_csv(path: &Path) -> Result<Vec<FeatureVector>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != feature_header() {
        return Err(CliError::Data(format!(
            "{}: expected header `{}`",
            path.display(),
            feature_header().join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| CliError::Data(format!("{} row {}: {what}", path.display(), line + 2));
        let mut values = [0.0; FEATURE_COUNT];
        for (i, v) in values.iter_mut().enumerate() {
            *v = rec[i + 2].trim().parse().map_err(|_| bad(&format!("bad value for f{}", i + 1)))?;
        }
        let mut fv = FeatureVector::new(values).with_id(&rec[0]);
        if !rec[1].trim().is_empty() {
            fv = fv.with_label(rec[1].parse().map_err(|_| bad("bad label"))?);
        }
        out.push(fv);
    }
    Ok(out)
}

pub fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    Ok(Dataset::from_vectors(&read_feature_csv(path)?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub toolkit_version: String,
    pub algorithm: spamkit_core::Algorithm,
    pub mask: CategoryMask,
    pub feature_names: Vec<String>,
    pub seed: u64,
    pub model: TrainedModel,
}

impl ModelFile {
    pub fn load(path: &Path) -> Result<ModelFile, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read model {}: {e}", path.display())))?;
        let m: ModelFile = serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(CliError::Data(format!(
                "{}: unsupported model format version {}",
                path.display(),
                m.format_version
            )));
        }
        let columns = m.mask.feature_indices()?;
        let expected: Vec<String> = columns.iter().map(|&c| feature_header()[c + 2].clone()).collect();
        if m.model.dim() != columns.len() || m.feature_names != expected {
            return Err(CliError::Data(format!(
                "{}: model expects {} features but mask `{}` selects {}",
                path.display(),
                m.model.dim(),
                m.mask,
                columns.len()
            )));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// One message to extract, with its label source resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct InputItem {
    pub id: String,
    pub label: Label,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Mbox { path: PathBuf, index: usize },
}

#[derive(Debug, Deserialize)]
struct ManifestRecord {
    id: String,
    #[serde(default)]
    path: String,
    label: String,
}

struct ManifestEntry {
    id: String,
    path: String,
    label: Label,
}

fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    r.deserialize::<ManifestRecord>()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            let label = rec
                .label
                .parse()
                .map_err(|_| CliError::Data(format!("{} row {}: bad label `{}`", path.display(), i + 2, rec.label)))?;
            Ok(ManifestEntry { id: rec.id, path: rec.path, label })
        })
        .collect()
}

fn files_under(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), CliError> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            files_under(&path, out)?;
        } else if path.is_file() {
            out.push(path);
        }
    }
    Ok(())
}

fn relative(path: &Path, root: &Path) -> String {
    path.strip_prefix(root)
        .unwrap_or(path)
        .components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Resolve `input` (labeled directory, manifest CSV, or mbox with a
/// manifest) into labeled items in output order.
pub fn discover(input: &Path, manifest: Option<&Path>) -> Result<Vec<InputItem>, CliError> {
    if !input.exists() {
        return Err(CliError::Data(format!("input {} does not exist", input.display())));
    }
    if input.is_dir() {
        return discover_dir(input, manifest);
    }
    let is_csv = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv && manifest.is_none() {
        let root = input.parent().unwrap_or(Path::new("."));
        return read_manifest(input)?
            .into_iter()
            .map(|e| {
                if e.path.is_empty() {
                    return Err(CliError::Data(format!("{}: row `{}` has no path", input.display(), e.id)));
                }
                Ok(InputItem { id: e.id, label: e.label, source: Source::File(root.join(&e.path)) })
            })
            .collect();
    }
    let Some(manifest) = manifest else {
        return Err(CliError::Data(format!(
            "unlabeled input {}: give a spam/ham directory, a manifest CSV, or --manifest",
            input.display()
        )));
    };
    let entries = read_manifest(manifest)?;
    let count = parse_mbox(&fs::read(input)?).len();
    if entries.len() != count {
        return Err(CliError::Data(format!(
            "{} holds {count} messages but {} lists {}",
            input.display(),
            manifest.display(),
            entries.len()
        )));
    }
    Ok(entries
        .into_iter()
        .enumerate()
        .map(|(index, e)| InputItem { id: e.id, label: e.label, source: Source::Mbox { path: input.to_path_buf(), index } })
        .collect())
}

fn discover_dir(root: &Path, manifest: Option<&Path>) -> Result<Vec<InputItem>, CliError> {
    let manifest_path = manifest.map(Path::to_path_buf).or_else(|| {
        let p = root.join("manifest.csv");
        p.is_file().then_some(p)
    });
    let manifest = manifest_path.as_deref().map(read_manifest).transpose()?;
    let labeled: Vec<(Label, PathBuf)> = Label::ALL
        .into_iter()
        .map(|l| (l, root.join(l.as_str())))
        .filter(|(_, d)| d.is_dir())
        .collect();

    if labeled.is_empty() {
        if let Some(entries) = manifest {
            return Ok(entries
                .into_iter()
                .map(|e| InputItem { source: Source::File(root.join(&e.path)), id: e.id, label: e.label })
                .collect());
        }
        let mut files = Vec::new();
        files_under(root, &mut files)?;
        if files.is_empty() {
            return Ok(Vec::new());
        }
        return Err(CliError::Data(format!(
            "unlabeled input {}: no spam/ or ham/ subdirectory and no manifest.csv",
            root.display()
        )));
    }

    let by_path: BTreeMap<String, &ManifestEntry> = manifest
        .iter()
        .flatten()
        .map(|e| (e.path.clone(), e))
        .collect();
    let mut items = Vec::new();
    for (label, dir) in labeled {
        let mut files = Vec::new();
        files_under(&dir, &mut files)?;
        for path in files {
            let rel = relative(&path, root);
            let mut id = stem(&path);
            if let Some(entry) = by_path.get(&rel) {
                if entry.label != label {
                    return Err(CliError::Data(format!(
                        "label conflict for {rel}: directory says {label}, manifest says {}",
                        entry.label
                    )));
                }
                id = entry.id.clone();
            }
            items.push((rel, InputItem { id, label, source: Source::File(path) }));
        }
    }
    items.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(items.into_iter().map(|(_, i)| i).collect())
}

/// Extract every item in parallel, preserving input order.
pub fn extract_items(items: &[InputItem]) -> Result<Vec<FeatureVector>, CliError> {
    let mut mboxes: BTreeMap<PathBuf, Vec<spamkit_core::EmailMessage>> = BTreeMap::new();
    for item in items {
        if let Source::Mbox { path, .. } = &item.source {
            if !mboxes.contains_key(path) {
                mboxes.insert(path.clone(), parse_mbox(&fs::read(path)?));
            }
        }
    }
    items
        .par_iter()
        .map(|item| {
            let v = match &item.source {
                Source::File(path) => {
                    let bytes = fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                    let msg = parse_eml(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                    extract(&msg)
                }
                Source::Mbox { path, index } => extract(&mboxes[path][*index]),
            };
            Ok(v.with_id(item.id.clone()).with_label(item.label))
        })
        .collect()
}
