//! Points-vs-criterion correlations and per-season covariance PCA.

use serde::Serialize;

use crate::corpus::{descriptor_column, fmt_num, Corpus, SeasonTable};
use crate::descriptor::Descriptor;
use crate::eigen::{jacobi_eigh, SymmetricEigen};
use crate::error::{Error, Result};
use crate::series::SeasonMatrix;

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvariantViolation(format!(
            "pearson: lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::DegenerateRange);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateRange);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Correlation of points with each criterion, one row per season. Cells are
/// `None` where the column is missing or constant.
pub fn correlation_matrix(corpus: &Corpus) -> SeasonMatrix {
    let mut seasons = Vec::with_capacity(corpus.len());
    let mut rows = Vec::with_capacity(corpus.len());
    for t in corpus.seasons() {
        let pts = descriptor_column(t, Descriptor::Points).expect("points always present");
        let row = Descriptor::CRITERIA.map(|d| {
            descriptor_column(t, d).ok().and_then(|col| pearson(&pts, &col).ok())
        });
        seasons.push(t.season().to_string());
        rows.push(row);
    }
    SeasonMatrix { seasons, rows }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSeries {
    pub descriptor: Descriptor,
    pub entries: Vec<(String, f64)>,
}

/// The Figure-2 style series for one criterion; seasons without a value are
/// dropped.
pub fn correlation_series(corpus: &Corpus, d: Descriptor) -> CorrelationSeries {
    let entries = correlation_matrix(corpus)
        .column(d)
        .into_iter()
        .filter_map(|(s, r)| r.map(|r| (s, r)))
        .collect();
    CorrelationSeries { descriptor: d, entries }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaResult {
    pub season: String,
    pub variables: [Descriptor; 6],
    /// `loadings[i][k]`: weight of variable `i` in component `k`.
    pub loadings: [[f64; 6]; 6],
    pub eigenvalues: [f64; 6],
    pub explained: [f64; 6],
}

impl PcaResult {
    pub fn component(&self, k: usize) -> [f64; 6] {
        std::array::from_fn(|i| self.loadings[i][k])
    }

    pub fn pc1(&self) -> [f64; 6] {
        self.component(0)
    }

    pub fn loading(&self, d: Descriptor, k: usize) -> f64 {
        let i = self.variables.iter().position(|v| *v == d).expect("all six variables present");
        self.loadings[i][k]
    }

    /// `variable,pca1,...,pca6`, one row per variable.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("variable,pca1,pca2,pca3,pca4,pca5,pca6\n");
        for (i, d) in self.variables.iter().enumerate() {
            out.push_str(d.key());
            for v in self.loadings[i] {
                out.push(',');
                out.push_str(&fmt_num(v));
            }
            out.push('\n');
        }
        out
    }
}

pub fn covariance(columns: &[Vec<f64>; 6]) -> Result<[[f64; 6]; 6]> {
    let n = columns[0].len();
    if n < 2 || columns.iter().any(|c| c.len() != n) {
        return Err(Error::DegenerateRange);
    }
    let means = columns.each_ref().map(|c| c.iter().sum::<f64>() / n as f64);
    let mut cov = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..=i {
            let s: f64 = (0..n)
                .map(|r| (columns[i][r] - means[i]) * (columns[j][r] - means[j]))
                .sum();
            cov[i][j] = s / (n - 1) as f64;
            cov[j][i] = cov[i][j];
        }
    }
    Ok(cov)
}

/// Covariance PCA on arbitrary columns. Constant columns are allowed as long
/// as at least one column varies.
pub fn pca_columns(season: &str, columns: &[Vec<f64>; 6]) -> Result<PcaResult> {
    let cov = covariance(columns)?;
    let trace: f64 = (0..6).map(|i| cov[i][i]).sum();
    if trace <= 0.0 {
        return Err(Error::DegenerateColumn("all"));
    }
    let SymmetricEigen { values, mut vectors, .. } = jacobi_eigh(&cov)?;
    for k in 0..6 {
        let mut lead = 0;
        for i in 1..6 {
            if vectors[i][k].abs() > vectors[lead][k].abs() {
                lead = i;
            }
        }
        if vectors[lead][k] < 0.0 {
            for row in vectors.iter_mut() {
                row[k] = -row[k];
            }
        }
    }
    Ok(PcaResult {
        season: season.to_string(),
        variables: Descriptor::ALL,
        loadings: vectors,
        eigenvalues: values,
        explained: values.map(|v| v / trace),
    })
}

/// Covariance PCA over the six season columns. Every column must vary.
pub fn pca(table: &SeasonTable) -> Result<PcaResult> {
    let columns = Descriptor::ALL
        .iter()
        .map(|&d| descriptor_column(table, d))
        .collect::<Result<Vec<_>>>()?;
    for (d, col) in Descriptor::ALL.iter().zip(&columns) {
        if col.iter().all(|v| *v == col[0]) {
            return Err(Error::DegenerateColumn(d.key()));
        }
    }
    let columns: [Vec<f64>; 6] = columns.try_into().expect("six columns");
    pca_columns(table.season(), &columns)
}
