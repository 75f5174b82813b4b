//! Published tables used as oracles: the re-rank tables, the per-season PCA
//! loadings, the non-overlap table and the overlap percentages printed under
//! the density figures.

use crate::corpus::{read_rows, SeasonTable};
use crate::descriptor::Descriptor;
use crate::error::{Error, Result};
use crate::ranking::RankTable;
use crate::series::SeasonMatrix;

/// The printed 2013/14 loadings repeat the 2016/17 table digit for digit, so
/// that season is never compared.
pub const PCA_EXCLUDED_SEASON: &str = "2013/14";

pub const RERANK_TABLES: [(&str, &str); 8] = [
    ("2009/10", include_str!("../data/reference/rerank_2009_10.csv")),
    ("2010/11", include_str!("../data/reference/rerank_2010_11.csv")),
    ("2011/12", include_str!("../data/reference/rerank_2011_12.csv")),
    ("2012/13", include_str!("../data/reference/rerank_2012_13.csv")),
    ("2013/14", include_str!("../data/reference/rerank_2013_14.csv")),
    ("2014/15", include_str!("../data/reference/rerank_2014_15.csv")),
    ("2015/16", include_str!("../data/reference/rerank_2015_16.csv")),
    ("2016/17", include_str!("../data/reference/rerank_2016_17.csv")),
];

pub const PCA_TABLES: [(&str, &str); 8] = [
    ("2009/10", include_str!("../data/reference/pca_2009_10.csv")),
    ("2010/11", include_str!("../data/reference/pca_2010_11.csv")),
    ("2011/12", include_str!("../data/reference/pca_2011_12.csv")),
    ("2012/13", include_str!("../data/reference/pca_2012_13.csv")),
    ("2013/14", include_str!("../data/reference/pca_2013_14.csv")),
    ("2014/15", include_str!("../data/reference/pca_2014_15.csv")),
    ("2015/16", include_str!("../data/reference/pca_2015_16.csv")),
    ("2016/17", include_str!("../data/reference/pca_2016_17.csv")),
];

pub const NONOVERLAP_TABLE: &str = include_str!("../data/reference/nonoverlap.csv");
pub const FIGURE_OVERLAPS: &str = include_str!("../data/reference/figure_overlaps.csv");

pub fn published_rerank(season: &str) -> Result<(SeasonTable, RankTable)> {
    let (label, text) = RERANK_TABLES
        .iter()
        .find(|(l, _)| *l == season)
        .ok_or_else(|| Error::UnknownSeason(season.to_string()))?;
    RankTable::parse_csv(text, label)
}

/// Printed loadings, `[variable][component]`, variables in
/// [`Descriptor::ALL`] order.
pub fn published_pca(season: &str) -> Result<[[f64; 6]; 6]> {
    let (_, text) = PCA_TABLES
        .iter()
        .find(|(l, _)| *l == season)
        .ok_or_else(|| Error::UnknownSeason(season.to_string()))?;
    parse_loadings(text)
}

pub fn parse_loadings(text: &str) -> Result<[[f64; 6]; 6]> {
    let rows = read_rows(text, &["variable", "pca1", "pca2", "pca3", "pca4", "pca5", "pca6"])?;
    let mut out = [[f64::NAN; 6]; 6];
    let mut seen = [false; 6];
    for (line, f) in rows {
        let d: Descriptor = f[0].parse().map_err(|_| Error::MalformedRow {
            line,
            reason: format!("unknown variable '{}'", f[0]),
        })?;
        let i = Descriptor::ALL.iter().position(|x| *x == d).expect("ALL is exhaustive");
        for k in 0..6 {
            out[i][k] = parse_real(line, &f[k + 1])?;
        }
        seen[i] = true;
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvariantViolation(format!(
            "loadings table has no {} row",
            Descriptor::ALL[i].key()
        )));
    }
    Ok(out)
}

/// Published non-overlap percentages, chronological.
pub fn published_nonoverlap() -> SeasonMatrix {
    parse_season_matrix(NONOVERLAP_TABLE).expect("embedded table is valid")
}

pub fn parse_season_matrix(text: &str) -> Result<SeasonMatrix> {
    let mut wanted = vec!["season"];
    wanted.extend(Descriptor::CRITERIA.iter().map(|d| d.key()));
    let mut rows = Vec::new();
    for (line, f) in read_rows(text, &wanted)? {
        let mut row = [None; 5];
        for (k, cell) in row.iter_mut().enumerate() {
            let s = &f[k + 1];
            if s != "undefined" {
                *cell = Some(parse_real(line, s)?);
            }
        }
        rows.push((f[0].clone(), row));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let (seasons, rows) = rows.into_iter().unzip();
    Ok(SeasonMatrix { seasons, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOverlap {
    pub figure: String,
    pub pair: (Descriptor, Descriptor),
    pub percent: f64,
}

/// The overlap percentages printed in the density figure captions. Which
/// subfigure belongs to which season is not stated.
pub fn published_figure_overlaps() -> Vec<FigureOverlap> {
    read_rows(FIGURE_OVERLAPS, &["figure", "first", "second", "percent"])
        .expect("embedded table is valid")
        .into_iter()
        .map(|(_, f)| FigureOverlap {
            figure: f[0].clone(),
            pair: (f[1].parse().expect("known"), f[2].parse().expect("known")),
            percent: f[3].parse().expect("numeric"),
        })
        .collect()
}

fn parse_real(line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::MalformedRow { line, reason: format!("cannot parse '{s}'") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_embedded_corpus;

    #[test]
    fn rerank_tables_carry_the_season_data() {
        let c = load_embedded_corpus();
        for (label, _) in RERANK_TABLES {
            let (table, ranks) = published_rerank(label).unwrap();
            assert_eq!(&table, &c[label]);
            assert_eq!(ranks.ranks.len(), 5);
        }
    }

    #[test]
    fn pca_duplicate_is_real() {
        assert_eq!(published_pca("2013/14").unwrap(), published_pca("2016/17").unwrap());
        let p = published_pca("2009/10").unwrap();
        assert_eq!(p[5][0], 0.921);
        assert!(published_pca("2017/18").is_err());
    }

    #[test]
    fn nonoverlap_is_chronological() {
        let t = published_nonoverlap();
        assert_eq!(t.seasons.first().unwrap(), "2009/10");
        assert_eq!(t.get("2015/16", Descriptor::Profit), Some(0.8905));
    }

    #[test]
    fn figure_overlaps_are_complete() {
        let f = published_figure_overlaps();
        assert_eq!(f.len(), 40);
        for fig in ["7", "8", "F1", "F2", "F3"] {
            assert_eq!(f.iter().filter(|x| x.figure == fig).count(), 8);
        }
    }
}
