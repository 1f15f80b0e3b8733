//! Dataset plumbing: Statlog (Landsat) parsing, min-max normalization,
//! one-hot encoding, PCA reduction, seeded train/test splitting,
//! per-satellite sharding, and a synthetic Gaussian-blob dataset for runs
//! without the external files.
//!
//! The Statlog records carry 36 multispectral features plus a label in
//! {1,2,3,4,5,7} — class 6 does not occur in the published data, so labels
//! are remapped to the contiguous range 0..6 and the classifier sees six
//! classes. PCA is fit with a cyclic Jacobi eigensolver on the sample
//! covariance (dependency-free and deterministic, with a fixed sign
//! convention), and transformed components are min-max rescaled to [0,1] so
//! they satisfy the encoder's input range. Splits and shards shuffle row
//! indices with named substreams of the run seed, making every derived set
//! a pure function of (input bytes, seed).

use crate::rng::substream;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Statlog feature count per record.
const STATLOG_FEATURES: usize = 36;

/// Raw Statlog labels in file order; class 6 is absent from the data.
const STATLOG_LABELS: [i64; 6] = [1, 2, 3, 4, 5, 7];

/// Attempt cap when rejection-sampling blob centers.
const CENTER_ATTEMPTS: usize = 100_000;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from parsing and dataset transformations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    /// A malformed input line (wrong field count or a non-integer field).
    #[error("line {line}: {reason}")]
    ParseLine { line: usize, reason: String },
    /// A label outside the Statlog set {1,2,3,4,5,7}.
    #[error("line {line}: unknown label {label}")]
    UnknownLabel { line: usize, label: i64 },
    /// An operation that needs rows got none (or too few).
    #[error("need at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },
    /// Features/labels of inconsistent lengths.
    #[error("dataset has {rows} feature rows but {labels} labels")]
    RowLabelMismatch { rows: usize, labels: usize },
    /// A label at or beyond the class count.
    #[error("label {label} out of range for {n_classes} classes")]
    LabelOutOfRange { label: usize, n_classes: usize },
    /// Train fraction outside (0, 1).
    #[error("train fraction {0} is outside (0, 1)")]
    FractionOutOfRange(f64),
    /// More shards than rows (or zero shards).
    #[error("cannot cut {rows} rows into {shards} shards")]
    BadShardCount { shards: usize, rows: usize },
    /// PCA target dimension outside 1..=d, or too few rows.
    #[error("cannot reduce {d} feature columns to {q} components")]
    BadComponentCount { q: usize, d: usize },
    /// Invalid synthetic-blob parameters, or centers that cannot be placed
    /// at the requested separation inside the unit cube.
    #[error("invalid blob parameters: {0}")]
    BadBlobParams(String),
    /// Ragged feature matrix.
    #[error("row {row} has {got} features, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
}

// ---------------------------------------------------------------------------
// Core types
// ---------------------------------------------------------------------------

/// A labeled feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// n rows × d columns.
    pub features: Vec<Vec<f64>>,
    /// n class indices, each < `class_names.len()`.
    pub labels: Vec<usize>,
    /// Display name per class index.
    pub class_names: Vec<String>,
}

impl Dataset {
    /// Build a dataset, validating shape and label range.
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self, DataError> {
        if features.len() != labels.len() {
            return Err(DataError::RowLabelMismatch {
                rows: features.len(),
                labels: labels.len(),
            });
        }
        if let Some(d) = features.first().map(Vec::len) {
            for (row, f) in features.iter().enumerate() {
                if f.len() != d {
                    return Err(DataError::RaggedRow { row, got: f.len(), expected: d });
                }
            }
        }
        let n_classes = class_names.len();
        if let Some(&label) = labels.iter().find(|&&l| l >= n_classes) {
            return Err(DataError::LabelOutOfRange { label, n_classes });
        }
        Ok(Dataset { features, labels, class_names })
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.features.len()
    }

    /// True when there are no rows.
    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Feature dimension (0 for an empty dataset).
    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// Number of classes.
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }
}

/// A fitted PCA reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    /// Column means of the training features (length d).
    pub mean: Vec<f64>,
    /// Top-q covariance eigenvectors as orthonormal rows (q × d).
    pub components: Vec<Vec<f64>>,
    /// Matching eigenvalues, nonincreasing.
    pub explained_variance: Vec<f64>,
}

/// Per-satellite row-index assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct ShardPlan {
    /// Disjoint, covering row-index lists; sizes differ by at most one.
    pub shards: Vec<Vec<usize>>,
    /// Seed the shuffle was derived from.
    pub seed: u64,
}

/// A dataset in the layout the classifier consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    /// n rows × q features in [0,1].
    pub features: Vec<Vec<f64>>,
    /// n class indices.
    pub labels: Vec<usize>,
    /// n × C one-hot rows.
    pub onehot: Vec<Vec<f64>>,
}

impl LabeledSet {
    /// Convert a dataset, one-hot encoding its labels over its class count.
    pub fn from_dataset(ds: &Dataset) -> Result<Self, DataError> {
        Ok(LabeledSet {
            features: ds.features.clone(),
            labels: ds.labels.clone(),
            onehot: one_hot(&ds.labels, ds.n_classes())?,
        })
    }
}

// ---------------------------------------------------------------------------
// Statlog parsing
// ---------------------------------------------------------------------------

/// Parse whitespace-separated Statlog records: 36 integer features plus a
/// label in {1,2,3,4,5,7}, remapped to contiguous classes 0..6. Empty lines
/// are skipped; any other malformation reports its 1-based line number.
pub fn parse_statlog(text: &str) -> Result<Dataset, DataError> {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != STATLOG_FEATURES + 1 {
            return Err(DataError::ParseLine {
                line,
                reason: format!("expected 37 fields, got {}", fields.len()),
            });
        }
        let mut row = Vec::with_capacity(STATLOG_FEATURES);
        for field in &fields[..STATLOG_FEATURES] {
            let value: i64 = field.parse().map_err(|_| DataError::ParseLine {
                line,
                reason: format!("non-integer field {field:?}"),
            })?;
            row.push(value as f64);
        }
        let raw_label: i64 = fields[STATLOG_FEATURES].parse().map_err(|_| DataError::ParseLine {
            line,
            reason: format!("non-integer label {:?}", fields[STATLOG_FEATURES]),
        })?;
        let class = STATLOG_LABELS
            .iter()
            .position(|&l| l == raw_label)
            .ok_or(DataError::UnknownLabel { line, label: raw_label })?;
        features.push(row);
        labels.push(class);
    }
    Dataset::new(
        features,
        labels,
        STATLOG_LABELS.iter().map(|l| l.to_string()).collect(),
    )
}

// ---------------------------------------------------------------------------
// Normalization and encoding
// ---------------------------------------------------------------------------

/// Min-max rescale one column vector in place; constant columns map to 0.
fn rescale_column(values: &mut [f64]) {
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    for v in values.iter_mut() {
        *v = if range > 0.0 { (*v - min) / range } else { 0.0 };
    }
}

/// Min-max normalize every feature column to [0, 1]; constant columns map
/// to 0. Normalization is idempotent.
pub fn normalize(ds: &Dataset) -> Result<Dataset, DataError> {
    if ds.is_empty() {
        return Err(DataError::TooFewRows { need: 1, got: 0 });
    }
    let d = ds.n_features();
    let mut features = ds.features.clone();
    for col in 0..d {
        let mut column: Vec<f64> = features.iter().map(|row| row[col]).collect();
        rescale_column(&mut column);
        for (row, value) in features.iter_mut().zip(&column) {
            row[col] = *value;
        }
    }
    Dataset::new(features, ds.labels.clone(), ds.class_names.clone())
}

/// One-hot encode labels into an n × C matrix.
pub fn one_hot(labels: &[usize], n_classes: usize) -> Result<Vec<Vec<f64>>, DataError> {
    labels
        .iter()
        .map(|&label| {
            if label >= n_classes {
                return Err(DataError::LabelOutOfRange { label, n_classes });
            }
            let mut row = vec![0.0; n_classes];
            row[label] = 1.0;
            Ok(row)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

/// Eigendecompose a symmetric matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, eigenvectors as columns), unsorted.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = a.len();
    let mut v = vec![vec![0.0; d]; d];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|p| ((p + 1)..d).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                // Classic Jacobi rotation annihilating a[p][q].
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let eigenvalues = (0..d).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}

/// Fit a q-component PCA on the feature matrix: center, form the sample
/// covariance (n−1 denominator), eigendecompose, and keep the top q
/// eigenvectors with the sign convention "first nonzero entry positive".
pub fn pca_fit(features: &[Vec<f64>], q: usize) -> Result<PcaModel, DataError> {
    let n = features.len();
    if n < 2 {
        return Err(DataError::TooFewRows { need: 2, got: n });
    }
    let d = features[0].len();
    for (row, f) in features.iter().enumerate() {
        if f.len() != d {
            return Err(DataError::RaggedRow { row, got: f.len(), expected: d });
        }
    }
    if q == 0 || q > d {
        return Err(DataError::BadComponentCount { q, d });
    }

    let mean: Vec<f64> = (0..d)
        .map(|j| features.iter().map(|row| row[j]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for row in features {
        for j in 0..d {
            let dj = row[j] - mean[j];
            for k in j..d {
                cov[j][k] += dj * (row[k] - mean[k]);
            }
        }
    }
    for j in 0..d {
        for k in j..d {
            cov[j][k] /= (n - 1) as f64;
            cov[k][j] = cov[j][k];
        }
    }

    let (eigenvalues, vectors) = jacobi_eigen(cov);
    // Sort eigenpairs by eigenvalue, descending; ties keep original order.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        eigenvalues[j]
            .partial_cmp(&eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut components = Vec::with_capacity(q);
    let mut explained_variance = Vec::with_capacity(q);
    for &idx in order.iter().take(q) {
        let mut row: Vec<f64> = (0..d).map(|k| vectors[k][idx]).collect();
        if let Some(first) = row.iter().find(|v| v.abs() > 1e-12) {
            if *first < 0.0 {
                for v in &mut row {
                    *v = -*v;
                }
            }
        }
        components.push(row);
        explained_variance.push(eigenvalues[idx]);
    }
    Ok(PcaModel { mean, components, explained_variance })
}

/// Project rows onto the fitted components and min-max rescale each
/// component column to [0, 1] (constant columns map to 0), so the output
/// satisfies the encoder's input range.
pub fn pca_transform(model: &PcaModel, features: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, DataError> {
    if features.is_empty() {
        return Err(DataError::TooFewRows { need: 1, got: 0 });
    }
    let d = model.mean.len();
    for (row, f) in features.iter().enumerate() {
        if f.len() != d {
            return Err(DataError::RaggedRow { row, got: f.len(), expected: d });
        }
    }
    let q = model.components.len();
    let mut projected: Vec<Vec<f64>> = features
        .iter()
        .map(|row| {
            (0..q)
                .map(|c| {
                    model.components[c]
                        .iter()
                        .zip(row.iter().zip(&model.mean))
                        .map(|(w, (x, m))| w * (x - m))
                        .sum()
                })
                .collect()
        })
        .collect();
    for c in 0..q {
        let mut column: Vec<f64> = projected.iter().map(|row| row[c]).collect();
        rescale_column(&mut column);
        for (row, value) in projected.iter_mut().zip(&column) {
            row[c] = *value;
        }
    }
    Ok(projected)
}

// ---------------------------------------------------------------------------
// Splitting and sharding
// ---------------------------------------------------------------------------

/// Split into train and test by a seeded shuffle: the first
/// ⌊fraction·n⌋ shuffled rows become the training set. The shuffle uses the
/// "split" substream of `seed`.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset), DataError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DataError::FractionOutOfRange(train_fraction));
    }
    if ds.is_empty() {
        return Err(DataError::TooFewRows { need: 1, got: 0 });
    }
    let mut indices: Vec<usize> = (0..ds.len()).collect();
    indices.shuffle(&mut substream(seed, "split"));
    let train_count = (train_fraction * ds.len() as f64).floor() as usize;
    let train = subset(ds, &indices[..train_count])?;
    let test = subset(ds, &indices[train_count..])?;
    Ok((train, test))
}

/// Assign rows to `n_shards` satellites: seeded shuffle (the "partition"
/// substream), then round-robin, so shard sizes differ by at most one.
pub fn partition(ds: &Dataset, n_shards: usize, seed: u64) -> Result<ShardPlan, DataError> {
    if n_shards == 0 || n_shards > ds.len() {
        return Err(DataError::BadShardCount { shards: n_shards, rows: ds.len() });
    }
    let mut indices: Vec<usize> = (0..ds.len()).collect();
    indices.shuffle(&mut substream(seed, "partition"));
    let mut shards = vec![Vec::with_capacity(ds.len() / n_shards + 1); n_shards];
    for (pos, idx) in indices.into_iter().enumerate() {
        shards[pos % n_shards].push(idx);
    }
    Ok(ShardPlan { shards, seed })
}

/// Materialize the rows at `indices` as a dataset (class names retained;
/// rows appear in index order).
pub fn subset(ds: &Dataset, indices: &[usize]) -> Result<Dataset, DataError> {
    let mut features = Vec::with_capacity(indices.len());
    let mut labels = Vec::with_capacity(indices.len());
    for &i in indices {
        let row = ds.features.get(i).ok_or(DataError::TooFewRows {
            need: i + 1,
            got: ds.len(),
        })?;
        features.push(row.clone());
        labels.push(ds.labels[i]);
    }
    Dataset::new(features, labels, ds.class_names.clone())
}

// ---------------------------------------------------------------------------
// Synthetic blobs
// ---------------------------------------------------------------------------

/// Generate `n_classes` isotropic Gaussian clusters in [0,1]^q.
///
/// Cluster centers are rejection-sampled (the "blobs-centers" substream)
/// from [0.1, 0.9]^q until all pairwise distances reach `separation`; the
/// per-coordinate noise is Normal(0, separation/8) (the "blobs-noise"
/// substream) and samples are clipped to [0, 1]. Rows are ordered by class.
pub fn synthetic_blobs(
    n_per_class: usize,
    n_classes: usize,
    q: usize,
    separation: f64,
    seed: u64,
) -> Result<Dataset, DataError> {
    if n_per_class == 0 || n_classes == 0 || q == 0 {
        return Err(DataError::BadBlobParams(
            "n_per_class, n_classes, and q must be positive".into(),
        ));
    }
    if !(separation > 0.0) {
        return Err(DataError::BadBlobParams(format!(
            "separation {separation} must be positive"
        )));
    }

    let mut center_rng = substream(seed, "blobs-centers");
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(n_classes);
    let mut attempts = 0;
    while centers.len() < n_classes {
        attempts += 1;
        if attempts > CENTER_ATTEMPTS {
            return Err(DataError::BadBlobParams(format!(
                "cannot place {n_classes} centers {separation} apart in [0,1]^{q}"
            )));
        }
        let candidate: Vec<f64> = (0..q).map(|_| center_rng.random_range(0.1..0.9)).collect();
        let far_enough = centers.iter().all(|c: &Vec<f64>| {
            c.iter()
                .zip(&candidate)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                >= separation
        });
        if far_enough {
            centers.push(candidate);
        }
    }

    let mut noise_rng = substream(seed, "blobs-noise");
    let noise = Normal::new(0.0, separation / 8.0)
        .map_err(|e| DataError::BadBlobParams(e.to_string()))?;
    let mut features = Vec::with_capacity(n_per_class * n_classes);
    let mut labels = Vec::with_capacity(n_per_class * n_classes);
    for (class, center) in centers.iter().enumerate() {
        for _ in 0..n_per_class {
            features.push(
                center
                    .iter()
                    .map(|c| (c + noise.sample(&mut noise_rng)).clamp(0.0, 1.0))
                    .collect(),
            );
            labels.push(class);
        }
    }
    Dataset::new(
        features,
        labels,
        (0..n_classes).map(|c| c.to_string()).collect(),
    )
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    /// A toy dataset of `n` rows with distinct single features.
    fn counting_dataset(n: usize) -> Dataset {
        Dataset::new(
            (0..n).map(|i| vec![i as f64]).collect(),
            vec![0; n],
            vec!["0".into(), "1".into()],
        )
        .unwrap()
    }

    // --- parsing ------------------------------------------------------------

    #[test]
    fn parse_zero_row_and_label_remap() {
        let zeros = vec!["0"; 36].join(" ");
        let text = format!("{zeros} 1\n{zeros} 7\n");
        let ds = parse_statlog(&text).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.n_features(), 36);
        assert!(ds.features[0].iter().all(|&v| v == 0.0));
        assert_eq!(ds.labels, vec![0, 5]);
        assert_eq!(ds.class_names, vec!["1", "2", "3", "4", "5", "7"]);
    }

    #[test]
    fn parse_skips_blank_lines() {
        let zeros = vec!["0"; 36].join(" ");
        let text = format!("\n{zeros} 2\n   \n{zeros} 5\n\n");
        let ds = parse_statlog(&text).unwrap();
        assert_eq!(ds.labels, vec![1, 4]);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let zeros = ["0"; 36].join(" ");
        let short = ["0"; 10].join(" ");
        let text = format!("{zeros} 1\n{short} 1\n");
        assert_eq!(
            parse_statlog(&text).unwrap_err(),
            DataError::ParseLine { line: 2, reason: "expected 37 fields, got 11".into() }
        );

        let text = format!("{zeros} 1\n{zeros} 6\n");
        assert_eq!(
            parse_statlog(&text).unwrap_err(),
            DataError::UnknownLabel { line: 2, label: 6 }
        );

        let mut fields = vec!["0"; 36];
        fields[3] = "x";
        let text = format!("{} 1\n", fields.join(" "));
        assert!(matches!(
            parse_statlog(&text),
            Err(DataError::ParseLine { line: 1, .. })
        ));
    }

    // --- normalization and encoding ------------------------------------------

    #[test]
    fn normalize_rescales_and_zeros_constant_columns() {
        let ds = Dataset::new(
            vec![vec![0.0, 5.0], vec![255.0, 5.0]],
            vec![0, 1],
            vec!["0".into(), "1".into()],
        )
        .unwrap();
        let out = normalize(&ds).unwrap();
        assert_eq!(out.features, vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn normalize_is_idempotent() {
        let ds = Dataset::new(
            vec![vec![2.0, -1.0], vec![4.0, 3.0], vec![3.0, 1.0]],
            vec![0, 1, 0],
            vec!["0".into(), "1".into()],
        )
        .unwrap();
        let once = normalize(&ds).unwrap();
        let twice = normalize(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn one_hot_examples() {
        let rows = one_hot(&[2], 6).unwrap();
        assert_eq!(rows, vec![vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]]);
        let rows = one_hot(&[0, 1, 1], 2).unwrap();
        assert!(rows.iter().all(|r| r.iter().sum::<f64>() == 1.0));
        assert_eq!(one_hot(&[0, 0], 1).unwrap(), vec![vec![1.0], vec![1.0]]);
        assert_eq!(
            one_hot(&[3], 3).unwrap_err(),
            DataError::LabelOutOfRange { label: 3, n_classes: 3 }
        );
    }

    // --- PCA -----------------------------------------------------------------

    #[test]
    fn pca_matches_the_dense_eigen_fixture() {
        // Covariance eigenvalues of this 5×3 matrix, computed independently
        // with a dense eigensolver.
        let x = vec![
            vec![2.0, 0.0, 1.0],
            vec![0.0, 1.0, 3.0],
            vec![4.0, 2.0, 0.0],
            vec![1.0, 1.0, 1.0],
            vec![3.0, 0.0, 2.0],
        ];
        let model = pca_fit(&x, 3).unwrap();
        let expected = [3.35484067, 0.78394324, 0.36121609];
        for (got, want) in model.explained_variance.iter().zip(expected) {
            assert_close(*got, want, 1e-6);
        }
        // Variances nonincreasing, components orthonormal.
        assert!(model.explained_variance.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = model.components[i]
                    .iter()
                    .zip(&model.components[j])
                    .map(|(a, b)| a * b)
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_close(dot, expected, 1e-8);
            }
        }
        // Sign convention: each component's first nonzero entry is positive.
        for row in &model.components {
            let first = row.iter().find(|v| v.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn pca_on_collinear_points_finds_one_direction() {
        // Points on the line y = 2x: total variance 25/3 lands entirely on
        // the first component.
        let x = vec![
            vec![0.0, 0.0],
            vec![1.0, 2.0],
            vec![2.0, 4.0],
            vec![3.0, 6.0],
        ];
        let model = pca_fit(&x, 2).unwrap();
        assert_close(model.explained_variance[0], 25.0 / 3.0, 1e-9);
        assert_close(model.explained_variance[1], 0.0, 1e-9);
        // The first component points along (1, 2)/√5.
        assert_close(model.components[0][0], 1.0 / 5.0f64.sqrt(), 1e-9);
        assert_close(model.components[0][1], 2.0 / 5.0f64.sqrt(), 1e-9);
    }

    #[test]
    fn pca_rejects_bad_dimensions() {
        let x = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert_eq!(
            pca_fit(&x, 3).unwrap_err(),
            DataError::BadComponentCount { q: 3, d: 2 }
        );
        assert_eq!(
            pca_fit(&x, 0).unwrap_err(),
            DataError::BadComponentCount { q: 0, d: 2 }
        );
        assert_eq!(
            pca_fit(&x[..1], 1).unwrap_err(),
            DataError::TooFewRows { need: 2, got: 1 }
        );
    }

    #[test]
    fn pca_transform_rescales_components_to_the_unit_interval() {
        let x: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![i as f64, (i * i) as f64 * 0.1, 1.0])
            .collect();
        let model = pca_fit(&x, 2).unwrap();
        let out = pca_transform(&model, &x).unwrap();
        assert_eq!(out.len(), 10);
        assert!(out.iter().all(|row| row.len() == 2));
        for c in 0..2 {
            let col: Vec<f64> = out.iter().map(|row| row[c]).collect();
            let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert_close(min, 0.0, 1e-12);
            assert_close(max, 1.0, 1e-12);
        }
        // Deterministic: same input, same output.
        assert_eq!(out, pca_transform(&model, &x).unwrap());
    }

    #[test]
    fn pca_transform_projection_preserves_component_order() {
        // With 2-D inputs and 2 components the transform is a rotation plus
        // a monotone rescale, so ordering along each component is the
        // ordering of the raw projections.
        let x = vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![2.0, 1.8], vec![3.0, 2.2]];
        let model = pca_fit(&x, 2).unwrap();
        let out = pca_transform(&model, &x).unwrap();
        let raw: Vec<f64> = x
            .iter()
            .map(|row| {
                model.components[0]
                    .iter()
                    .zip(row.iter().zip(&model.mean))
                    .map(|(w, (v, m))| w * (v - m))
                    .sum()
            })
            .collect();
        for i in 0..x.len() {
            for j in 0..x.len() {
                assert_eq!(raw[i] < raw[j], out[i][0] < out[j][0]);
            }
        }
    }

    // --- split and partition ---------------------------------------------------

    #[test]
    fn split_matches_the_statlog_proportions() {
        let ds = counting_dataset(6435);
        let (train, test) = split(&ds, 0.9, 42).unwrap();
        assert_eq!(train.len(), 5791);
        assert_eq!(test.len(), 644);
    }

    #[test]
    fn split_is_deterministic_and_partitions_the_rows() {
        let ds = counting_dataset(100);
        let (train_a, test_a) = split(&ds, 0.7, 7).unwrap();
        let (train_b, test_b) = split(&ds, 0.7, 7).unwrap();
        assert_eq!(train_a, train_b);
        assert_eq!(test_a, test_b);

        let mut seen: Vec<f64> = train_a
            .features
            .iter()
            .chain(&test_a.features)
            .map(|row| row[0])
            .collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(seen, expected);

        let (train_c, _) = split(&ds, 0.7, 8).unwrap();
        assert_ne!(train_a, train_c);
    }

    #[test]
    fn split_rejects_bad_fractions() {
        let ds = counting_dataset(10);
        assert!(matches!(split(&ds, 0.0, 1), Err(DataError::FractionOutOfRange(_))));
        assert!(matches!(split(&ds, 1.0, 1), Err(DataError::FractionOutOfRange(_))));
        assert!(matches!(split(&ds, -0.5, 1), Err(DataError::FractionOutOfRange(_))));
    }

    #[test]
    fn partition_round_robin_sizes() {
        let ds = counting_dataset(10);
        let plan = partition(&ds, 5, 3).unwrap();
        assert!(plan.shards.iter().all(|s| s.len() == 2));

        let ds = counting_dataset(11);
        let plan = partition(&ds, 5, 3).unwrap();
        let sizes: Vec<usize> = plan.shards.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 2, 2, 2, 2]);
        assert_eq!(plan.seed, 3);
    }

    #[test]
    fn partition_is_disjoint_and_covering() {
        let ds = counting_dataset(23);
        let plan = partition(&ds, 4, 9).unwrap();
        let mut all: Vec<usize> = plan.shards.iter().flatten().cloned().collect();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        assert_eq!(plan, partition(&ds, 4, 9).unwrap());
    }

    #[test]
    fn partition_rejects_bad_shard_counts() {
        let ds = counting_dataset(3);
        assert!(matches!(
            partition(&ds, 4, 1),
            Err(DataError::BadShardCount { shards: 4, rows: 3 })
        ));
        assert!(matches!(
            partition(&ds, 0, 1),
            Err(DataError::BadShardCount { shards: 0, rows: 3 })
        ));
    }

    #[test]
    fn subset_materializes_selected_rows() {
        let ds = counting_dataset(5);
        let sub = subset(&ds, &[4, 0, 2]).unwrap();
        let values: Vec<f64> = sub.features.iter().map(|r| r[0]).collect();
        assert_eq!(values, vec![4.0, 0.0, 2.0]);
        assert!(subset(&ds, &[9]).is_err());
    }

    // --- synthetic blobs ----------------------------------------------------------

    #[test]
    fn blobs_are_seeded_and_sized() {
        let a = synthetic_blobs(50, 2, 2, 0.5, 11).unwrap();
        let b = synthetic_blobs(50, 2, 2, 0.5, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert_eq!(a.n_features(), 2);
        assert_eq!(a.labels.iter().filter(|&&l| l == 0).count(), 50);
        assert!(a.features.iter().flatten().all(|&v| (0.0..=1.0).contains(&v)));

        let c = synthetic_blobs(50, 2, 2, 0.5, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn blobs_are_nearest_centroid_separable() {
        let ds = synthetic_blobs(40, 3, 2, 0.45, 5).unwrap();
        // Class centroids from the generated data.
        let mut centroids = vec![vec![0.0; 2]; 3];
        let mut counts = vec![0usize; 3];
        for (row, &label) in ds.features.iter().zip(&ds.labels) {
            for (c, v) in centroids[label].iter_mut().zip(row) {
                *c += v;
            }
            counts[label] += 1;
        }
        for (centroid, count) in centroids.iter_mut().zip(&counts) {
            for c in centroid.iter_mut() {
                *c /= *count as f64;
            }
        }
        // Every sample is closest to its own class centroid.
        for (row, &label) in ds.features.iter().zip(&ds.labels) {
            let nearest = (0..3)
                .min_by(|&a, &b| {
                    let da: f64 = centroids[a].iter().zip(row).map(|(c, v)| (c - v) * (c - v)).sum();
                    let db: f64 = centroids[b].iter().zip(row).map(|(c, v)| (c - v) * (c - v)).sum();
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap();
            assert_eq!(nearest, label);
        }
    }

    #[test]
    fn blobs_reject_bad_parameters() {
        assert!(matches!(synthetic_blobs(0, 2, 2, 0.5, 1), Err(DataError::BadBlobParams(_))));
        assert!(matches!(synthetic_blobs(10, 0, 2, 0.5, 1), Err(DataError::BadBlobParams(_))));
        assert!(matches!(synthetic_blobs(10, 2, 0, 0.5, 1), Err(DataError::BadBlobParams(_))));
        assert!(matches!(synthetic_blobs(10, 2, 2, 0.0, 1), Err(DataError::BadBlobParams(_))));
        // Impossible geometry: three centers 5 apart inside the unit square.
        assert!(matches!(synthetic_blobs(10, 3, 2, 5.0, 1), Err(DataError::BadBlobParams(_))));
    }

    // --- dataset construction ------------------------------------------------------

    #[test]
    fn dataset_constructor_validates() {
        assert!(matches!(
            Dataset::new(vec![vec![0.0]], vec![], vec!["0".into()]),
            Err(DataError::RowLabelMismatch { .. })
        ));
        assert!(matches!(
            Dataset::new(vec![vec![0.0], vec![0.0, 1.0]], vec![0, 0], vec!["0".into()]),
            Err(DataError::RaggedRow { row: 1, .. })
        ));
        assert!(matches!(
            Dataset::new(vec![vec![0.0]], vec![1], vec!["0".into()]),
            Err(DataError::LabelOutOfRange { label: 1, n_classes: 1 })
        ));
    }

    #[test]
    fn labeled_set_carries_one_hot_rows() {
        let ds = synthetic_blobs(5, 2, 2, 0.5, 2).unwrap();
        let set = LabeledSet::from_dataset(&ds).unwrap();
        assert_eq!(set.features, ds.features);
        assert_eq!(set.labels, ds.labels);
        for (row, &label) in set.onehot.iter().zip(&set.labels) {
            assert_eq!(row.iter().sum::<f64>(), 1.0);
            assert_eq!(row[label], 1.0);
        }
    }

    // --- properties -------------------------------------------------------------

    proptest! {
        #[test]
        fn split_is_always_an_exact_partition(
            n in 2usize..200,
            fraction in 0.05f64..0.95,
            seed in 0u64..1000,
        ) {
            let ds = counting_dataset(n);
            let (train, test) = split(&ds, fraction, seed).unwrap();
            prop_assert_eq!(train.len(), (fraction * n as f64).floor() as usize);
            prop_assert_eq!(train.len() + test.len(), n);
            let mut seen: Vec<f64> = train
                .features
                .iter()
                .chain(&test.features)
                .map(|row| row[0])
                .collect();
            seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let expected: Vec<f64> = (0..n).map(|i| i as f64).collect();
            prop_assert_eq!(seen, expected);
        }

        #[test]
        fn partition_is_always_an_exact_partition(
            n in 1usize..150,
            shards in 1usize..20,
            seed in 0u64..1000,
        ) {
            prop_assume!(shards <= n);
            let ds = counting_dataset(n);
            let plan = partition(&ds, shards, seed).unwrap();
            let sizes: Vec<usize> = plan.shards.iter().map(Vec::len).collect();
            let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            prop_assert!(max - min <= 1);
            let mut all: Vec<usize> = plan.shards.iter().flatten().cloned().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }
}
