//! Lorenz curves, Gini coefficients and Theil indices.
//!
//! Gini is computed from the raw values as one minus twice the trapezoidal
//! area under the Lorenz curve, so a column containing losses can produce a
//! value above 1; it is reported, not clamped. Theil needs strictly positive
//! values: when any value is `<= 0` the vector is shifted to
//! `x - min(x) + THEIL_SHIFT_FRACTION * range(x)` first and the offset is
//! returned alongside the index.

use serde::{Serialize, Serializer};

use crate::corpus::{descriptor_column, fmt_num, Corpus};
use crate::descriptor::Descriptor;
use crate::error::{Error, Result};

pub const THEIL_SHIFT_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorenzPoint {
    pub p: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

/// `n + 1` points from `(0, 0)` to `(1, 1)`, values sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzCurve {
    pub points: Vec<LorenzPoint>,
}

impl LorenzCurve {
    /// Trapezoidal area under the curve.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[0].l + w[1].l) * (w[1].p - w[0].p))
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,L\n");
        for pt in &self.points {
            out.push_str(&format!("{},{}\n", fmt_num(pt.p), fmt_num(pt.l)));
        }
        out
    }

    pub fn xy(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|pt| (pt.p, pt.l)).collect()
    }
}

pub fn lorenz(values: &[f64]) -> Result<LorenzCurve> {
    if values.len() < 2 {
        return Err(Error::DegenerateRange);
    }
    let total: f64 = values.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroTotal);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points = Vec::with_capacity(sorted.len() + 1);
    points.push(LorenzPoint { p: 0.0, l: 0.0 });
    let mut partial = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        partial += v;
        points.push(LorenzPoint { p: (k + 1) as f64 / n, l: partial / total });
    }
    // pin the endpoint against accumulated rounding
    if let Some(last) = points.last_mut() {
        last.p = 1.0;
        last.l = 1.0;
    }
    Ok(LorenzCurve { points })
}

pub fn gini(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::DegenerateRange);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if !(mean > 0.0) {
        return Err(Error::NonPositiveTotal(mean));
    }
    Ok(1.0 - 2.0 * lorenz(values)?.area())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theil {
    pub index: f64,
    /// Offset added to every value before evaluation; 0 when none was needed.
    pub shift_applied: f64,
}

pub fn theil(values: &[f64]) -> Result<Theil> {
    if values.len() < 2 {
        return Err(Error::DegenerateRange);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shift = if min > 0.0 {
        0.0
    } else {
        let range = max - min;
        if range == 0.0 {
            return Err(Error::DegenerateRange);
        }
        -min + THEIL_SHIFT_FRACTION * range
    };
    let n = values.len() as f64;
    let mean = values.iter().map(|v| v + shift).sum::<f64>() / n;
    let index = values
        .iter()
        .map(|v| {
            let s = (v + shift) / mean;
            s * s.ln()
        })
        .sum::<f64>()
        / n;
    Ok(Theil { index, shift_applied: shift })
}

/// A Gini value, or the reason it has none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Defined(f64),
    Undefined,
}

impl Measure {
    pub fn value(self) -> Option<f64> {
        match self {
            Measure::Defined(v) => Some(v),
            Measure::Undefined => None,
        }
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Measure::Defined(v) => s.serialize_f64(*v),
            Measure::Undefined => s.serialize_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityEntry {
    pub season: String,
    pub gini: Measure,
    pub theil: Measure,
    pub shift_applied: f64,
}

/// One entry per season, chronological. Failures become `Undefined`.
pub fn inequality_series(corpus: &Corpus, d: Descriptor) -> Vec<InequalityEntry> {
    corpus
        .seasons()
        .iter()
        .map(|t| {
            let column = descriptor_column(t, d);
            let gini = column
                .as_deref()
                .ok()
                .and_then(|c| gini(c).ok())
                .map_or(Measure::Undefined, Measure::Defined);
            let th = column.as_deref().ok().and_then(|c| theil(c).ok());
            InequalityEntry {
                season: t.season().to_string(),
                gini,
                theil: th.map_or(Measure::Undefined, |t| Measure::Defined(t.index)),
                shift_applied: th.map_or(0.0, |t| t.shift_applied),
            }
        })
        .collect()
}

/// Per-season indices for several descriptors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub season: String,
    pub descriptors: Vec<DescriptorInequality>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptorInequality {
    pub descriptor: Descriptor,
    pub gini: Measure,
    pub theil: Measure,
    pub shift_applied: f64,
}

pub fn inequality_reports(corpus: &Corpus, descriptors: &[Descriptor]) -> Vec<InequalityReport> {
    let series: Vec<(Descriptor, Vec<InequalityEntry>)> = descriptors
        .iter()
        .map(|&d| (d, inequality_series(corpus, d)))
        .collect();
    corpus
        .seasons()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut notes = Vec::new();
            let descriptors = series
                .iter()
                .map(|(d, s)| {
                    let e = &s[i];
                    if e.shift_applied != 0.0 {
                        notes.push(format!(
                            "{}: values shifted by {} before Theil (non-positive entries)",
                            d.key(),
                            fmt_num(e.shift_applied)
                        ));
                    }
                    if e.gini == Measure::Undefined {
                        notes.push(format!("{}: Gini undefined (column mean <= 0 or column missing)", d.key()));
                    }
                    DescriptorInequality {
                        descriptor: *d,
                        gini: e.gini,
                        theil: e.theil,
                        shift_applied: e.shift_applied,
                    }
                })
                .collect();
            InequalityReport { season: t.season().to_string(), descriptors, notes }
        })
        .collect()
}
