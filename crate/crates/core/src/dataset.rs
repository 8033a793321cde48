//! Dataset container, modality views and CSV ingestion.
//!
//! A dataset is one CSV file with a `sample_id` column, a binary `label`
//! column and feature columns whose name prefixes assign them to modality
//! views (e.g. `clin_*` -> "clinical", `img_*` -> "image"). Views keep the
//! file's column order, so early fusion and sequential fusion consume the
//! exact same inputs.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use indexmap::IndexMap;
use ndarray::{concatenate, Array2, Axis};

use crate::error::{Error, Result};

/// One modality's feature block: an `n x d` matrix plus column names.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureView {
    pub modality_name: String,
    pub feature_names: Vec<String>,
    /// Row-major `n x d`; every entry is finite.
    pub matrix: Array2<f64>,
}

impl FeatureView {
    pub fn new(
        modality_name: impl Into<String>,
        feature_names: Vec<String>,
        matrix: Array2<f64>,
    ) -> Result<Self> {
        if feature_names.len() != matrix.ncols() {
            return Err(Error::LengthMismatch {
                left: feature_names.len(),
                right: matrix.ncols(),
            });
        }
        for (i, a) in feature_names.iter().enumerate() {
            if feature_names[..i].contains(a) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate feature name `{a}` within a view"
                )));
            }
        }
        Ok(Self {
            modality_name: modality_name.into(),
            feature_names,
            matrix,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn width(&self) -> usize {
        self.matrix.ncols()
    }

    /// Copy of the view restricted to the given row indices.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureView {
        FeatureView {
            modality_name: self.modality_name.clone(),
            feature_names: self.feature_names.clone(),
            matrix: self.matrix.select(Axis(0), indices),
        }
    }
}

/// Maps column-name prefixes to modality names, in declaration order.
#[derive(Debug, Clone)]
pub struct ModalitySchema {
    prefixes: Vec<(String, String)>,
}

impl ModalitySchema {
    /// `prefixes` is a list of `(column_prefix, modality_name)` pairs. A
    /// column belongs to the first prefix that matches; view order follows
    /// declaration order.
    pub fn new(prefixes: Vec<(String, String)>) -> Result<Self> {
        if prefixes.is_empty() {
            return Err(Error::InvalidConfig("schema declares no modalities".into()));
        }
        for (i, (p, m)) in prefixes.iter().enumerate() {
            for (q, n) in &prefixes[..i] {
                if p == q || m == n {
                    return Err(Error::InvalidConfig(format!(
                        "duplicate prefix or modality in schema: `{p}` -> `{m}`"
                    )));
                }
            }
        }
        Ok(Self { prefixes })
    }

    /// `clin_*` -> "clinical", `img_*` -> "image".
    pub fn clinical_image() -> Self {
        Self::new(vec![
            ("clin_".into(), "clinical".into()),
            ("img_".into(), "image".into()),
        ])
        .expect("static schema is valid")
    }

    pub fn prefixes(&self) -> &[(String, String)] {
        &self.prefixes
    }

    fn modality_of(&self, column: &str) -> Option<&str> {
        self.prefixes
            .iter()
            .find(|(p, _)| column.starts_with(p.as_str()))
            .map(|(_, m)| m.as_str())
    }
}

/// Labeled samples with one or more aligned modality views.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub sample_ids: Vec<String>,
    /// 1 = positive, 0 = negative.
    pub labels: Vec<u8>,
    modalities: IndexMap<String, FeatureView>,
}

impl Dataset {
    pub fn new(
        sample_ids: Vec<String>,
        labels: Vec<u8>,
        views: Vec<FeatureView>,
    ) -> Result<Self> {
        let n = labels.len();
        if sample_ids.len() != n {
            return Err(Error::LengthMismatch {
                left: sample_ids.len(),
                right: n,
            });
        }
        for (row, &y) in labels.iter().enumerate() {
            if y > 1 {
                return Err(Error::NonBinaryLabel {
                    row: row + 1,
                    value: y.to_string(),
                });
            }
        }
        let mut modalities = IndexMap::new();
        for view in views {
            if view.n_rows() != n {
                return Err(Error::LengthMismatch {
                    left: view.n_rows(),
                    right: n,
                });
            }
            if let Some((row, col)) = first_non_finite(&view) {
                return Err(Error::NonFiniteValue {
                    row: row + 1,
                    column: view.feature_names[col].clone(),
                });
            }
            if modalities
                .insert(view.modality_name.clone(), view)
                .is_some()
            {
                return Err(Error::InvalidConfig("duplicate modality name".into()));
            }
        }
        Ok(Self {
            sample_ids,
            labels,
            modalities,
        })
    }

    /// Total number of samples.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn modality_names(&self) -> impl Iterator<Item = &str> {
        self.modalities.keys().map(String::as_str)
    }

    pub fn view(&self, name: &str) -> Result<&FeatureView> {
        self.modalities
            .get(name)
            .ok_or_else(|| Error::UnknownModality(name.to_string()))
    }

    pub fn views(&self) -> impl Iterator<Item = &FeatureView> {
        self.modalities.values()
    }

    /// Labels at the given indices.
    pub fn labels_at(&self, indices: &[usize]) -> Vec<u8> {
        indices.iter().map(|&i| self.labels[i]).collect()
    }
}

fn first_non_finite(view: &FeatureView) -> Option<(usize, usize)> {
    for (row, r) in view.matrix.rows().into_iter().enumerate() {
        for (col, v) in r.iter().enumerate() {
            if !v.is_finite() {
                return Some((row, col));
            }
        }
    }
    None
}

/// Per-class sample counts (two classes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub positive: usize,
    pub negative: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }

    /// Counts in label order: index 0 = negative, index 1 = positive.
    pub fn by_label(&self) -> [usize; 2] {
        [self.negative, self.positive]
    }
}

/// Exact per-class counts of a label vector.
pub fn class_counts(dataset: &Dataset) -> ClassCounts {
    count_labels(&dataset.labels)
}

pub fn count_labels(labels: &[u8]) -> ClassCounts {
    let positive = labels.iter().filter(|&&y| y == 1).count();
    ClassCounts {
        positive,
        negative: labels.len() - positive,
    }
}

/// Horizontal concatenation of the named views, in the given order.
pub fn concat_views(dataset: &Dataset, names: &[&str]) -> Result<FeatureView> {
    if names.is_empty() {
        return Err(Error::InvalidConfig("concat_views needs at least one name".into()));
    }
    let views = names
        .iter()
        .map(|name| dataset.view(name))
        .collect::<Result<Vec<_>>>()?;
    let mut feature_names = Vec::new();
    for v in &views {
        feature_names.extend(v.feature_names.iter().cloned());
    }
    let parts: Vec<_> = views.iter().map(|v| v.matrix.view()).collect();
    let matrix = concatenate(Axis(1), &parts).expect("views share the row count");
    FeatureView::new(names.join("+"), feature_names, matrix)
}

/// Loads the CSV interchange format: header `sample_id,label,<prefix><name>,...`,
/// one row per sample, `.` as decimal separator, no quoting.
///
/// Data rows are numbered from 1 (the header is row 0) in error messages.
pub fn load_dataset(path: impl AsRef<Path>, schema: &ModalitySchema) -> Result<Dataset> {
    let file = File::open(path.as_ref())?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(BufReader::new(file));

    let headers = reader.headers()?.clone();
    let mut cols = headers.iter();
    if cols.next() != Some("sample_id") {
        return Err(Error::MissingColumn("sample_id".into()));
    }
    if cols.next() != Some("label") {
        return Err(Error::MissingColumn("label".into()));
    }

    // Feature column index (within the record) -> owning modality.
    let mut columns_per_modality: IndexMap<&str, Vec<(usize, String)>> = IndexMap::new();
    for (_, name) in schema.prefixes() {
        columns_per_modality.insert(name.as_str(), Vec::new());
    }
    for (idx, column) in headers.iter().enumerate().skip(2) {
        match schema.modality_of(column) {
            Some(m) => columns_per_modality
                .get_mut(m)
                .expect("modality registered above")
                .push((idx, column.to_string())),
            None => return Err(Error::UnmappedColumn(column.to_string())),
        }
    }
    for (name, cols) in &columns_per_modality {
        if cols.is_empty() {
            let prefix = schema
                .prefixes()
                .iter()
                .find(|(_, m)| m == name)
                .map(|(p, _)| p.clone())
                .unwrap_or_default();
            return Err(Error::EmptyModality(prefix));
        }
    }

    let mut sample_ids = Vec::new();
    let mut labels = Vec::new();
    let mut raw: IndexMap<&str, Vec<f64>> = columns_per_modality
        .keys()
        .map(|&m| (m, Vec::new()))
        .collect();

    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let id = record
            .get(0)
            .ok_or_else(|| Error::MissingColumn("sample_id".into()))?;
        sample_ids.push(id.to_string());

        let label_cell = record
            .get(1)
            .ok_or_else(|| Error::MissingColumn("label".into()))?;
        let label = match label_cell.parse::<f64>() {
            Ok(v) if v == 0.0 => 0u8,
            Ok(v) if v == 1.0 => 1u8,
            _ => {
                return Err(Error::NonBinaryLabel {
                    row,
                    value: label_cell.to_string(),
                })
            }
        };
        labels.push(label);

        for (modality, cols) in &columns_per_modality {
            let dst = raw.get_mut(modality).expect("same keys");
            for (idx, column) in cols {
                let cell = record.get(*idx).ok_or_else(|| Error::InvalidNumber {
                    row,
                    column: column.clone(),
                    value: String::new(),
                })?;
                let v: f64 = cell.parse().map_err(|_| Error::InvalidNumber {
                    row,
                    column: column.clone(),
                    value: cell.to_string(),
                })?;
                if !v.is_finite() {
                    return Err(Error::NonFiniteValue {
                        row,
                        column: column.clone(),
                    });
                }
                dst.push(v);
            }
        }
    }

    let n = labels.len();
    let mut views = Vec::new();
    for (modality, cols) in &columns_per_modality {
        let d = cols.len();
        let values = raw.swap_remove(modality).expect("same keys");
        let matrix = Array2::from_shape_vec((n, d), values).expect("n*d values collected");
        let names = cols.iter().map(|(_, c)| c.clone()).collect();
        views.push(FeatureView::new(modality.to_string(), names, matrix)?);
    }
    Dataset::new(sample_ids, labels, views)
}
