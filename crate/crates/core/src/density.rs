//! Gaussian kernel density estimates and the overlap coefficient between two
//! descriptor distributions.
//!
//! Descriptors have incommensurate units (points, a ratio, millions of
//! pounds), so each column is rescaled within its season before estimation.
//! Two rescalings are supported:
//!
//! * [`Normalization::MinMax`] maps onto `[0, 1]`; densities live on the
//!   512-point grid `[-0.2, 1.2]`.
//! * [`Normalization::ZScore`] centres and scales by the sample standard
//!   deviation; densities live on a 2048-point grid over `[-7, 7]`.
//!
//! [`KdeConfig::default`] is the z-score configuration. It is the one under
//! which the points-vs-profit disagreement is the largest of the five in every
//! season of the embedded corpus; `docs/calibration.md` lists both
//! configurations against the published non-overlap table.
//!
//! Bandwidth follows Silverman's rule, `0.9 * min(sd, IQR / 1.34) * n^(-1/5)`,
//! falling back to `sd` alone when the IQR is zero. All integrals are
//! trapezoidal on the grid and every density is renormalized to unit mass.

use std::f64::consts::PI;

use serde::Serialize;

use crate::corpus::{descriptor_column, fmt_num, Corpus, SeasonTable};
use crate::descriptor::Descriptor;
use crate::error::{Error, Result};
use crate::series::SeasonMatrix;

pub const UNIT_GRID_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Grid {
    pub const fn new(lo: f64, hi: f64, points: usize) -> Self {
        Grid { lo, hi, points }
    }

    /// `[-0.2, 1.2]`, 512 points: min-max normalized data plus kernel tails.
    pub const fn unit() -> Self {
        Grid::new(-0.2, 1.2, UNIT_GRID_POINTS)
    }

    /// `[-7, 7]`, 2048 points. Twenty z-scores lie within ±4.25.
    pub const fn standard() -> Self {
        Grid::new(-7.0, 7.0, 2048)
    }

    pub fn refined(self, factor: usize) -> Self {
        Grid::new(self.lo, self.hi, (self.points - 1) * factor + 1)
    }

    pub fn nodes(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.lo + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    MinMax,
    ZScore,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KdeConfig {
    pub normalization: Normalization,
    pub grid: Grid,
}

impl KdeConfig {
    pub const fn min_max() -> Self {
        KdeConfig { normalization: Normalization::MinMax, grid: Grid::unit() }
    }

    pub const fn z_score() -> Self {
        KdeConfig { normalization: Normalization::ZScore, grid: Grid::standard() }
    }

    pub fn rescale(&self, values: &[f64]) -> Result<Vec<f64>> {
        match self.normalization {
            Normalization::MinMax => normalize(values),
            Normalization::ZScore => standardize(values),
        }
    }
}

impl Default for KdeConfig {
    fn default() -> Self {
        KdeConfig::z_score()
    }
}

/// Affine min-max map onto `[0, 1]`.
pub fn normalize(values: &[f64]) -> Result<Vec<f64>> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Err(Error::DegenerateRange);
    }
    let span = max - min;
    Ok(values.iter().map(|v| (v - min) / span).collect())
}

/// Centre on the mean, divide by the sample standard deviation.
pub fn standardize(values: &[f64]) -> Result<Vec<f64>> {
    let (mean, sd) = mean_sd(values);
    if !(sd > 0.0) {
        return Err(Error::DegenerateRange);
    }
    Ok(values.iter().map(|v| (v - mean) / sd).collect())
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Linear-interpolation quantile of sorted data (the common "type 7" rule).
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::DegenerateRange);
    }
    let (_, sd) = mean_sd(values);
    if !(sd > 0.0) {
        return Err(Error::DegenerateRange);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (values.len() as f64).powf(-0.2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityEstimate {
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    /// Grid node with the highest density.
    pub fn mode(&self) -> f64 {
        let i = self
            .density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.grid[i]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,f\n");
        for (x, f) in self.grid.iter().zip(&self.density) {
            out.push_str(&format!("{},{}\n", fmt_num(*x), fmt_num(*f)));
        }
        out
    }

    pub fn xy(&self) -> Vec<(f64, f64)> {
        self.grid.iter().copied().zip(self.density.iter().copied()).collect()
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
        .sum()
}

/// KDE of min-max normalized values on the unit grid.
pub fn kde(values: &[f64]) -> Result<DensityEstimate> {
    kde_on(values, &Grid::unit(), None)
}

/// KDE on an arbitrary grid; `bandwidth` overrides Silverman's rule.
pub fn kde_on(values: &[f64], grid: &Grid, bandwidth: Option<f64>) -> Result<DensityEstimate> {
    let h = match bandwidth {
        Some(h) if h > 0.0 => h,
        Some(_) => return Err(Error::DegenerateRange),
        None => silverman_bandwidth(values)?,
    };
    let nodes = grid.nodes();
    let norm = 1.0 / (values.len() as f64 * h * (2.0 * PI).sqrt());
    let mut density: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            values
                .iter()
                .map(|&xi| {
                    let u = (x - xi) / h;
                    (-0.5 * u * u).exp()
                })
                .sum::<f64>()
                * norm
        })
        .collect();
    let mass = trapezoid(&nodes, &density);
    if !(mass > 0.0) {
        // all kernel mass fell outside the grid
        return Err(Error::DegenerateRange);
    }
    for f in &mut density {
        *f /= mass;
    }
    Ok(DensityEstimate { grid: nodes, density, bandwidth: h })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Overlap {
    pub overlap: f64,
    pub non_overlap: f64,
}

/// `∫ min(f_a, f_b)`, clamped to `[0, 1]` against rounding.
pub fn overlap(a: &DensityEstimate, b: &DensityEstimate) -> Result<Overlap> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let lower: Vec<f64> = a
        .density
        .iter()
        .zip(&b.density)
        .map(|(x, y)| x.min(*y))
        .collect();
    let ov = trapezoid(&a.grid, &lower).clamp(0.0, 1.0);
    Ok(Overlap { overlap: ov, non_overlap: 1.0 - ov })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapResult {
    pub season: String,
    pub pair: (Descriptor, Descriptor),
    pub overlap: f64,
    pub non_overlap: f64,
}

/// Density of one rescaled descriptor column.
pub fn descriptor_density(table: &SeasonTable, d: Descriptor, cfg: &KdeConfig) -> Result<DensityEstimate> {
    let values = cfg.rescale(&descriptor_column(table, d)?)?;
    kde_on(&values, &cfg.grid, None)
}

pub fn pair_overlap(table: &SeasonTable, a: Descriptor, b: Descriptor, cfg: &KdeConfig) -> Result<OverlapResult> {
    let fa = descriptor_density(table, a, cfg)?;
    let fb = descriptor_density(table, b, cfg)?;
    let o = overlap(&fa, &fb)?;
    Ok(OverlapResult {
        season: table.season().to_string(),
        pair: (a, b),
        overlap: o.overlap,
        non_overlap: o.non_overlap,
    })
}

/// Overlap of two descriptors' densities as a percentage, default config.
pub fn overlap_pct(table: &SeasonTable, a: Descriptor, b: Descriptor) -> Result<f64> {
    overlap_pct_with(table, a, b, &KdeConfig::default())
}

pub fn overlap_pct_with(table: &SeasonTable, a: Descriptor, b: Descriptor, cfg: &KdeConfig) -> Result<f64> {
    if a == b {
        return Err(Error::InvariantViolation(format!("overlap pair must name two descriptors, got {a} twice")));
    }
    Ok(100.0 * pair_overlap(table, a, b, cfg)?.overlap)
}

/// Points-vs-criterion non-overlap, one row per season.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonOverlapTable {
    pub config: KdeConfig,
    pub values: SeasonMatrix,
}

impl NonOverlapTable {
    pub fn to_csv(&self) -> String {
        self.values.to_csv()
    }
}

pub fn nonoverlap_table(corpus: &Corpus) -> NonOverlapTable {
    nonoverlap_table_with(corpus, &KdeConfig::default())
}

pub fn nonoverlap_table_with(corpus: &Corpus, cfg: &KdeConfig) -> NonOverlapTable {
    let mut seasons = Vec::with_capacity(corpus.len());
    let mut rows = Vec::with_capacity(corpus.len());
    for t in corpus.seasons() {
        let points = descriptor_density(t, Descriptor::Points, cfg).ok();
        let mut row = [None; 5];
        for (slot, d) in row.iter_mut().zip(Descriptor::CRITERIA) {
            *slot = points.as_ref().and_then(|p| {
                let f = descriptor_density(t, d, cfg).ok()?;
                overlap(p, &f).ok().map(|o| o.non_overlap)
            });
        }
        seasons.push(t.season().to_string());
        rows.push(row);
    }
    NonOverlapTable { config: *cfg, values: SeasonMatrix { seasons, rows } }
}
