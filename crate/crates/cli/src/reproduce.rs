//! Regenerates every table and series, then checks them against the
//! published values.

use std::fmt;
use std::fs;
use std::path::Path;

use leaguestats_core::corpus::{descriptor_column, season_file_name};
use leaguestats_core::density::nonoverlap_table;
use leaguestats_core::inequality::{gini, inequality_series};
use leaguestats_core::multivariate::{correlation_matrix, pca};
use leaguestats_core::ranking::{rerank_all, PUBLISHED_RANK_ORDER};
use leaguestats_core::reference::{published_pca, published_rerank, PCA_EXCLUDED_SEASON, PCA_TABLES, RERANK_TABLES};
use leaguestats_core::{Corpus, Descriptor, KdeConfig, SeasonMatrix};

use crate::calibration::{self, calibrate_table, NONOVERLAP_MAD_TARGET};
use crate::svg::{emit_svg, Chart, Series};
use crate::CliError;

/// Largest allowed |Δ| between a computed and a printed PC1 loading.
pub const PCA_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub status: Status,
    pub max_deviation: Option<f64>,
    pub detail: String,
}

impl Comparison {
    fn new(name: impl Into<String>, pass: bool, dev: Option<f64>, detail: impl Into<String>) -> Self {
        Comparison {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            max_deviation: dev,
            detail: detail.into(),
        }
    }

    fn skip(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Comparison { name: name.into(), status: Status::Skip, max_deviation: None, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub comparisons: Vec<Comparison>,
    pub files: Vec<String>,
}

impl Summary {
    pub fn get(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }

    pub fn count(&self, status: Status) -> usize {
        self.comparisons.iter().filter(|c| c.status == status).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comparisons {
            let dev = c.max_deviation.map_or_else(|| "-".to_string(), |d| format!("{d:.4}"));
            out.push_str(&format!("{} {} max_dev={} {}\n", c.status, c.name, dev, c.detail));
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} skipped, {} files written\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip),
            self.files.len()
        ));
        out
    }
}

pub fn compare_reranks(corpus: &Corpus) -> Vec<Comparison> {
    RERANK_TABLES
        .iter()
        .map(|(label, _)| {
            let name = format!("rerank {label}");
            let Some(table) = corpus.get(label) else {
                return Comparison::skip(name, "season not in corpus");
            };
            let (_, want) = published_rerank(label).expect("embedded table is valid");
            let got = rerank_all(table);
            let mut worst = 0i32;
            let mut wrong = Vec::new();
            for d in PUBLISHED_RANK_ORDER {
                let (Some(g), Some(w)) = (got.get(d), want.get(d)) else {
                    wrong.push(format!("{} missing", d.key()));
                    worst = i32::MAX;
                    continue;
                };
                let dev = g.iter().zip(w).map(|(a, b)| (i32::from(*a) - i32::from(*b)).abs()).max().unwrap_or(0);
                if dev > 0 {
                    let n = g.iter().zip(w).filter(|(a, b)| a != b).count();
                    wrong.push(format!("{} ({n} ranks differ)", d.key()));
                }
                worst = worst.max(dev);
            }
            let detail = if wrong.is_empty() { "100/100 ranks match".to_string() } else { wrong.join("; ") };
            let dev = (worst != i32::MAX).then_some(f64::from(worst));
            Comparison::new(name, wrong.is_empty(), dev, detail)
        })
        .collect()
}

/// Largest |Δ| over a component, allowing one global sign flip.
pub fn signed_deviation(got: &[f64; 6], want: &[f64; 6]) -> f64 {
    let same = got.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    let flipped = got.iter().zip(want).map(|(g, w)| (g + w).abs()).fold(0.0, f64::max);
    same.min(flipped)
}

pub fn compare_pca(corpus: &Corpus) -> Vec<Comparison> {
    PCA_TABLES
        .iter()
        .map(|(label, _)| {
            let name = format!("pca {label}");
            if *label == PCA_EXCLUDED_SEASON {
                return Comparison::skip(name, "published loadings duplicate the 2016/17 table");
            }
            let Some(table) = corpus.get(label) else {
                return Comparison::skip(name, "season not in corpus");
            };
            let want = published_pca(label).expect("embedded table is valid");
            let want: [f64; 6] = std::array::from_fn(|i| want[i][0]);
            match pca(table) {
                Ok(p) => {
                    let dev = signed_deviation(&p.pc1(), &want);
                    Comparison::new(name, dev <= PCA_TOLERANCE, Some(dev), format!("PC1, tol {PCA_TOLERANCE}"))
                }
                Err(e) => Comparison::new(name, false, None, format!("{}: {e}", e.name())),
            }
        })
        .collect()
}

fn largest_pc1(corpus: &Corpus) -> Comparison {
    let mut ok = 0;
    let mut bad = Vec::new();
    for t in corpus.seasons() {
        match pca(t) {
            Ok(p) => {
                let pc1 = p.pc1();
                let top = (0..6).max_by(|&a, &b| pc1[a].abs().total_cmp(&pc1[b].abs())).expect("six loadings");
                if p.variables[top] == Descriptor::Expenditure {
                    ok += 1;
                } else {
                    bad.push(t.season().to_string());
                }
            }
            Err(_) => bad.push(t.season().to_string()),
        }
    }
    let mut detail = format!("expenditure has the largest |PC1| loading in {ok}/{} seasons", corpus.len());
    if !bad.is_empty() {
        detail.push_str(&format!(" (not in {})", bad.join(", ")));
    }
    Comparison::new("pca expenditure-dominates", bad.is_empty(), None, detail)
}

fn correlation_checks(m: &SeasonMatrix) -> Vec<Comparison> {
    const SEASON: &str = "2015/16";
    let Some(row) = m.row(SEASON) else {
        return vec![
            Comparison::skip("correlation profit-positive", "2015/16 not in corpus"),
            Comparison::skip("correlation 2015/16-lowest", "2015/16 not in corpus"),
        ];
    };
    let profit = row[3];
    let positive = Comparison::new(
        "correlation profit-positive",
        profit.is_some_and(|r| r > 0.0),
        None,
        format!("2015/16 points v profit r = {}", profit.map_or("undefined".into(), |r| format!("{r:.4}"))),
    );
    let mut not_lowest = Vec::new();
    for d in [Descriptor::Ratio, Descriptor::PlayerSpend, Descriptor::ForeignSpend, Descriptor::Expenditure] {
        let col = m.column(d);
        let here = m.get(SEASON, d);
        let lowest = here.is_some_and(|h| col.iter().all(|(_, v)| v.is_none_or(|v| v >= h)));
        if !lowest {
            not_lowest.push(d.key());
        }
    }
    let detail = if not_lowest.is_empty() {
        "ratio, player_spend, foreign_spend, expenditure all lowest in 2015/16".to_string()
    } else {
        format!("not lowest in 2015/16: {}", not_lowest.join(", "))
    };
    vec![positive, Comparison::new("correlation 2015/16-lowest", not_lowest.is_empty(), None, detail)]
}

fn gini_check(corpus: &Corpus) -> Comparison {
    let mut bad = Vec::new();
    for t in corpus.seasons() {
        let g = |d| descriptor_column(t, d).ok().and_then(|c| gini(&c).ok());
        match (g(Descriptor::Ratio), g(Descriptor::ForeignSpend)) {
            (Some(r), Some(f)) if r < f => {}
            _ => bad.push(t.season().to_string()),
        }
    }
    let detail = if bad.is_empty() {
        format!("Gini(ratio) < Gini(foreign_spend) in {}/{} seasons", corpus.len(), corpus.len())
    } else {
        format!("fails in {}", bad.join(", "))
    };
    Comparison::new("inequality ratio-steadiest", bad.is_empty(), None, detail)
}

fn nonoverlap_checks(corpus: &Corpus) -> Vec<Comparison> {
    let cal = calibrate_table(corpus, &KdeConfig::default());
    let rows = cal.computed.rows.len();
    let row_max = Comparison::new(
        "nonoverlap profit-row-max",
        cal.profit_row_max == rows,
        None,
        format!("points v profit is the largest non-overlap in {}/{rows} seasons", cal.profit_row_max),
    );
    let mad = Comparison::new(
        "nonoverlap calibration",
        cal.mad <= NONOVERLAP_MAD_TARGET,
        Some(cal.mad),
        format!("MAD over {} published cells, target <= {NONOVERLAP_MAD_TARGET}", cal.cells),
    );
    vec![row_max, mad]
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<String>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| leaguestats_core::Error::Io(format!("{}: {e}", path.display())))?;
    files.push(name.to_string());
    Ok(())
}

fn season_chart(title: &str, y: &str, m: &SeasonMatrix) -> Option<String> {
    let mut chart = Chart::new(title, "season", y).with_categories(m.seasons.clone());
    for d in Descriptor::CRITERIA {
        let values: Vec<Option<f64>> = m.column(d).into_iter().map(|(_, v)| v).collect();
        if values.iter().any(Option::is_some) {
            chart.push(Series::categorical(format!("Pts v {}", d.label()), &values));
        }
    }
    emit_svg(&chart).ok()
}

/// Writes all artifacts into `dir` (created if needed) and returns the
/// oracle summary. Files and summary lines come out in a fixed order.
pub fn reproduce(corpus: &Corpus, dir: &Path) -> Result<Summary, CliError> {
    fs::create_dir_all(dir).map_err(|e| leaguestats_core::Error::Io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();

    for t in corpus.seasons() {
        let stem = season_file_name(t.season()).trim_start_matches("epl_").trim_end_matches(".csv").to_string();
        write(dir, &format!("rerank_{stem}.csv"), &rerank_all(t).to_csv(t), &mut files)?;
    }

    let mut ineq = String::from("season,descriptor,gini,theil,shift_applied\n");
    let mut gini_chart = Chart::new("Gini index by season", "season", "Gini")
        .with_categories(corpus.labels().iter().map(|s| s.to_string()).collect());
    let mut theil_chart = Chart::new("Theil index by season", "season", "Theil")
        .with_categories(corpus.labels().iter().map(|s| s.to_string()).collect());
    for d in Descriptor::ALL {
        let series = inequality_series(corpus, d);
        for e in &series {
            let m = |v: leaguestats_core::Measure| v.value().map_or("undefined".into(), leaguestats_core::corpus::fmt_num);
            ineq.push_str(&format!(
                "{},{},{},{},{}\n",
                e.season,
                d.key(),
                m(e.gini),
                m(e.theil),
                leaguestats_core::corpus::fmt_num(e.shift_applied)
            ));
        }
        let g: Vec<Option<f64>> = series.iter().map(|e| e.gini.value()).collect();
        if g.iter().any(Option::is_some) {
            gini_chart.push(Series::categorical(d.label(), &g));
        }
        let th: Vec<Option<f64>> = series.iter().map(|e| e.theil.value()).collect();
        if th.iter().any(Option::is_some) {
            theil_chart.push(Series::categorical(d.label(), &th));
        }
    }
    write(dir, "inequality.csv", &ineq, &mut files)?;
    if let Ok(svg) = emit_svg(&gini_chart) {
        write(dir, "gini.svg", &svg, &mut files)?;
    }
    if let Ok(svg) = emit_svg(&theil_chart) {
        write(dir, "theil.svg", &svg, &mut files)?;
    }

    let nonoverlap = nonoverlap_table(corpus);
    write(dir, "nonoverlap.csv", &nonoverlap.to_csv(), &mut files)?;
    if let Some(svg) = season_chart("Non-overlap of points and each criterion", "non-overlap", &nonoverlap.values) {
        write(dir, "nonoverlap.svg", &svg, &mut files)?;
    }

    let corr = correlation_matrix(corpus);
    write(dir, "correlation.csv", &corr.to_csv(), &mut files)?;
    if let Some(svg) = season_chart("Correlation of each criterion with points", "Pearson r", &corr) {
        write(dir, "correlation.svg", &svg, &mut files)?;
    }

    for t in corpus.seasons() {
        if let Ok(p) = pca(t) {
            let stem = season_file_name(t.season()).trim_start_matches("epl_").trim_end_matches(".csv").to_string();
            write(dir, &format!("pca_{stem}.csv"), &p.to_csv(), &mut files)?;
        }
    }

    write(dir, "calibration.md", &calibration::render(corpus), &mut files)?;

    let mut comparisons = compare_reranks(corpus);
    comparisons.extend(compare_pca(corpus));
    comparisons.push(largest_pc1(corpus));
    comparisons.extend(correlation_checks(&corr));
    comparisons.push(gini_check(corpus));
    comparisons.extend(nonoverlap_checks(corpus));

    let summary = Summary { comparisons, files };
    write(dir, "summary.txt", &summary.render(), &mut Vec::new())?;
    Ok(summary)
}
