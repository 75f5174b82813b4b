//! Season tables: data model, CSV ingestion and the embedded 2009/10–2016/17
//! dataset.
//!
//! One CSV file per season, named `epl_YYYY_YY.csv`, with the header
//! [`CSV_HEADER`]. Columns are located by header name, so the rank-extended
//! layout written by `rerank` (which carries five extra rank columns) parses
//! with the same reader.

use std::collections::HashSet;
use std::fs;
use std::ops::Index;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::descriptor::Descriptor;
use crate::error::{Error, Result};

pub const TEAMS_PER_SEASON: usize = 20;

pub const CSV_HEADER: &str =
    "team,position,points,ratio,player_spend,foreign_spend,profit,expenditure";

/// Slack allowed when checking `foreign_spend <= player_spend`.
pub const SPEND_TOLERANCE: f64 = 1e-9;

const BASE_COLUMNS: [&str; 8] = [
    "team",
    "position",
    "points",
    "ratio",
    "player_spend",
    "foreign_spend",
    "profit",
    "expenditure",
];

const TEAM_ALIASES: &[(&str, &str)] = &[
    ("Man U", "Manchester United"),
    ("Man Utd", "Manchester United"),
    ("Man United", "Manchester United"),
    ("Man C", "Manchester City"),
    ("Man City", "Manchester City"),
    ("Aston V", "Aston Villa"),
    ("Wolvs", "Wolverhampton"),
    ("Wolves", "Wolverhampton"),
    ("Fullham", "Fulham"),
    ("Spurs", "Tottenham"),
    ("West Brom", "West Bromwich"),
    ("Leicester City", "Leicester"),
];

/// Maps the short and misspelt club names found in published tables onto a
/// single long form.
pub fn canonical_team(name: &str) -> String {
    let trimmed = name.trim();
    TEAM_ALIASES
        .iter()
        .find(|(alias, _)| alias.eq_ignore_ascii_case(trimmed))
        .map(|(_, canon)| (*canon).to_string())
        .unwrap_or_else(|| trimmed.to_string())
}

/// One club's row for one season. Money is in millions of pounds, exactly as
/// transcribed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamSeasonRecord {
    pub team: String,
    pub position: u8,
    pub points: u32,
    /// Foreign players per British player.
    pub ratio: f64,
    pub player_spend: f64,
    pub foreign_spend: f64,
    /// Negative means a loss. `None` only in partial seasons.
    pub profit: Option<f64>,
    /// `None` only in partial seasons.
    pub expenditure: Option<f64>,
}

impl TeamSeasonRecord {
    pub fn value(&self, d: Descriptor) -> Option<f64> {
        match d {
            Descriptor::Points => Some(f64::from(self.points)),
            Descriptor::Ratio => Some(self.ratio),
            Descriptor::PlayerSpend => Some(self.player_spend),
            Descriptor::ForeignSpend => Some(self.foreign_spend),
            Descriptor::Profit => self.profit,
            Descriptor::Expenditure => self.expenditure,
        }
    }
}

/// A validated 20-team end-of-season table, rows in ascending position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeasonTable {
    season: String,
    records: Vec<TeamSeasonRecord>,
}

impl SeasonTable {
    /// Validates and normalizes (sorts by position, canonicalizes names).
    pub fn new(season: impl Into<String>, mut records: Vec<TeamSeasonRecord>) -> Result<Self> {
        let season = season.into();
        validate_season_label(&season)?;
        if records.len() != TEAMS_PER_SEASON {
            return Err(Error::WrongRowCount(records.len()));
        }
        for r in &mut records {
            r.team = canonical_team(&r.team);
        }
        records.sort_by_key(|r| r.position);

        let mut seen = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            if !seen.insert(r.team.as_str()) {
                return Err(Error::InvariantViolation(format!("duplicate team {}", r.team)));
            }
            if usize::from(r.position) != i + 1 {
                return Err(Error::InvariantViolation(format!(
                    "positions are not a permutation of 1..20 (found {} where {} expected)",
                    r.position,
                    i + 1
                )));
            }
            let non_negative = [
                ("ratio", Some(r.ratio)),
                ("player_spend", Some(r.player_spend)),
                ("foreign_spend", Some(r.foreign_spend)),
                ("expenditure", r.expenditure),
            ];
            for (name, v) in non_negative {
                if let Some(v) = v {
                    if !(v >= 0.0) || !v.is_finite() {
                        return Err(Error::InvariantViolation(format!(
                            "{}: {name} must be a finite non-negative number, got {v}",
                            r.team
                        )));
                    }
                }
            }
            if r.profit.is_some_and(|p| !p.is_finite()) {
                return Err(Error::InvariantViolation(format!("{}: profit is not finite", r.team)));
            }
            if r.foreign_spend > r.player_spend + SPEND_TOLERANCE {
                return Err(Error::InvariantViolation(format!(
                    "{}: foreign_spend {} exceeds player_spend {}",
                    r.team, r.foreign_spend, r.player_spend
                )));
            }
        }
        for pair in records.windows(2) {
            if pair[1].points > pair[0].points {
                return Err(Error::InvariantViolation(format!(
                    "{} (position {}) has more points than {} (position {})",
                    pair[1].team, pair[1].position, pair[0].team, pair[0].position
                )));
            }
        }
        Ok(SeasonTable { season, records })
    }

    pub fn season(&self) -> &str {
        &self.season
    }

    pub fn records(&self) -> &[TeamSeasonRecord] {
        &self.records
    }

    pub fn record(&self, team: &str) -> Option<&TeamSeasonRecord> {
        let team = canonical_team(team);
        self.records.iter().find(|r| r.team == team)
    }

    /// True when profit and expenditure are present for every team.
    pub fn is_complete(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.profit.is_some() && r.expenditure.is_some())
    }

    pub fn has(&self, d: Descriptor) -> bool {
        self.records.iter().all(|r| r.value(d).is_some())
    }

    /// Serializes to the canonical CSV form (header, LF endings, shortest
    /// round-trip decimals, rows by position).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (TEAMS_PER_SEASON + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format_record(r));
            out.push('\n');
        }
        out
    }
}

impl Index<&str> for SeasonTable {
    type Output = TeamSeasonRecord;

    fn index(&self, team: &str) -> &TeamSeasonRecord {
        self.record(team)
            .unwrap_or_else(|| panic!("no team {team} in season {}", self.season))
    }
}

pub(crate) fn format_record(r: &TeamSeasonRecord) -> String {
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{}",
        csv_field(&r.team),
        r.position,
        r.points,
        fmt_num(r.ratio),
        fmt_num(r.player_spend),
        fmt_num(r.foreign_spend),
        opt(r.profit),
        opt(r.expenditure)
    )
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        // drop the sign of -0.0
        return "0".to_string();
    }
    format!("{v}")
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The full multi-season dataset, in chronological order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corpus {
    seasons: Vec<SeasonTable>,
}

impl Corpus {
    /// Sorts seasons chronologically; rejects duplicate labels.
    pub fn new(mut seasons: Vec<SeasonTable>) -> Result<Self> {
        seasons.sort_by(|a, b| a.season.cmp(&b.season));
        for w in seasons.windows(2) {
            if w[0].season == w[1].season {
                return Err(Error::InvariantViolation(format!("season {} appears twice", w[0].season)));
            }
        }
        Ok(Corpus { seasons })
    }

    pub fn empty() -> Self {
        Corpus { seasons: Vec::new() }
    }

    pub fn seasons(&self) -> &[SeasonTable] {
        &self.seasons
    }

    pub fn labels(&self) -> Vec<&str> {
        self.seasons.iter().map(|s| s.season()).collect()
    }

    pub fn get(&self, season: &str) -> Option<&SeasonTable> {
        self.seasons.iter().find(|s| s.season == season)
    }

    pub fn season(&self, season: &str) -> Result<&SeasonTable> {
        self.get(season)
            .ok_or_else(|| Error::UnknownSeason(season.to_string()))
    }

    pub fn len(&self) -> usize {
        self.seasons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seasons.is_empty()
    }

    /// Copy of the corpus with one season replaced (or added).
    pub fn with_season(&self, table: SeasonTable) -> Self {
        let mut seasons: Vec<SeasonTable> = self
            .seasons
            .iter()
            .filter(|s| s.season != table.season)
            .cloned()
            .collect();
        seasons.push(table);
        seasons.sort_by(|a, b| a.season.cmp(&b.season));
        Corpus { seasons }
    }

    /// Loads every `epl_YYYY_YY.csv` in `dir`. Other files are ignored.
    pub fn from_dir(dir: impl AsRef<Path>, allow_partial: bool) -> Result<Self> {
        let dir = dir.as_ref();
        let mut seasons = Vec::new();
        let entries = fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        for entry in entries {
            let path = entry?.path();
            let Some(label) = path
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(season_from_file_name)
            else {
                continue;
            };
            let text = fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let opts = ParseOptions { allow_partial };
            seasons.push(parse_season_csv_with(&text, &label, opts)?);
        }
        Corpus::new(seasons)
    }
}

impl Index<&str> for Corpus {
    type Output = SeasonTable;

    fn index(&self, season: &str) -> &SeasonTable {
        self.get(season)
            .unwrap_or_else(|| panic!("no season {season} in corpus"))
    }
}

/// Checks a `YYYY/YY` label whose second year follows the first.
pub fn validate_season_label(label: &str) -> Result<()> {
    let bad = || Error::InvariantViolation(format!("season label '{label}' is not of the form YYYY/YY"));
    let (start, end) = label.split_once('/').ok_or_else(bad)?;
    if start.len() != 4 || end.len() != 2 {
        return Err(bad());
    }
    let start: u32 = start.parse().map_err(|_| bad())?;
    let end: u32 = end.parse().map_err(|_| bad())?;
    if (start + 1) % 100 != end {
        return Err(bad());
    }
    Ok(())
}

/// `2009/10` → `epl_2009_10.csv`.
pub fn season_file_name(label: &str) -> String {
    format!("epl_{}.csv", label.replace('/', "_"))
}

/// `epl_2009_10.csv` → `2009/10`.
pub fn season_from_file_name(name: &str) -> Option<String> {
    let stem = name.strip_prefix("epl_")?.strip_suffix(".csv")?;
    let (a, b) = stem.split_once('_')?;
    let label = format!("{a}/{b}");
    validate_season_label(&label).ok().map(|_| label)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept empty or absent profit/expenditure columns (seasons whose accounts
    /// were not yet published).
    pub allow_partial: bool,
}

/// Parses and validates one season. Profit and expenditure must be present.
pub fn parse_season_csv(text: &str, season_label: &str) -> Result<SeasonTable> {
    parse_season_csv_with(text, season_label, ParseOptions::default())
}

pub fn parse_season_csv_with(text: &str, season_label: &str, opts: ParseOptions) -> Result<SeasonTable> {
    let optional: &[&str] = if opts.allow_partial { &["profit", "expenditure"] } else { &[] };
    let rows = read_rows_with(text, &BASE_COLUMNS, optional)?;
    let mut records = Vec::with_capacity(rows.len());
    for (line, fields) in rows {
        records.push(parse_record(line, &fields, opts)?);
    }
    SeasonTable::new(season_label, records)
}

/// Reads a headed CSV and returns, per data row, its 1-based line number and
/// the values of `wanted` columns in the requested order.
pub(crate) fn read_rows(text: &str, wanted: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    read_rows_with(text, wanted, &[])
}

/// Like [`read_rows`], but columns named in `optional` may be absent from the
/// header; they then read as empty strings.
pub(crate) fn read_rows_with(text: &str, wanted: &[&str], optional: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::MalformedRow { line: 1, reason: e.to_string() })?
        .clone();
    let width = header.len();
    let mut idx = Vec::with_capacity(wanted.len());
    for name in wanted {
        let i = header.iter().position(|h| h.trim() == *name);
        if i.is_none() && !optional.contains(name) {
            return Err(Error::MalformedRow { line: 1, reason: format!("header is missing column '{name}'") });
        }
        idx.push(i);
    }
    let mut rows = Vec::new();
    for (n, rec) in reader.records().enumerate() {
        let line = n + 2;
        let rec = rec.map_err(|e| Error::MalformedRow { line, reason: e.to_string() })?;
        if rec.len() != width {
            return Err(Error::MalformedRow {
                line,
                reason: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        let fields = idx
            .iter()
            .map(|i| i.map_or_else(String::new, |i| rec[i].trim().to_string()))
            .collect();
        rows.push((line, fields));
    }
    Ok(rows)
}

fn parse_record(line: usize, f: &[String], opts: ParseOptions) -> Result<TeamSeasonRecord> {
    let malformed = |col: &str, v: &str| Error::MalformedRow {
        line,
        reason: format!("{col}: cannot parse '{v}'"),
    };
    let real = |i: usize| -> Result<f64> {
        f[i].parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| malformed(BASE_COLUMNS[i], &f[i]))
    };
    let optional = |i: usize| -> Result<Option<f64>> {
        if f[i].is_empty() {
            if opts.allow_partial {
                Ok(None)
            } else {
                Err(Error::MalformedRow {
                    line,
                    reason: format!("{} is empty (partial seasons need allow_partial)", BASE_COLUMNS[i]),
                })
            }
        } else {
            real(i).map(Some)
        }
    };
    if f[0].is_empty() {
        return Err(Error::MalformedRow { line, reason: "team is empty".into() });
    }
    Ok(TeamSeasonRecord {
        team: canonical_team(&f[0]),
        position: f[1].parse().map_err(|_| malformed("position", &f[1]))?,
        points: f[2].parse().map_err(|_| malformed("points", &f[2]))?,
        ratio: real(3)?,
        player_spend: real(4)?,
        foreign_spend: real(5)?,
        profit: optional(6)?,
        expenditure: optional(7)?,
    })
}

/// The values of one descriptor, in ascending-position order.
pub fn descriptor_column(table: &SeasonTable, d: Descriptor) -> Result<Vec<f64>> {
    table
        .records
        .iter()
        .map(|r| {
            r.value(d).ok_or_else(|| Error::MissingColumn {
                season: table.season.clone(),
                column: d.key(),
            })
        })
        .collect()
}

/// Embedded season files, `(label, csv text)`.
pub const EMBEDDED_SEASONS: [(&str, &str); 8] = [
    ("2009/10", include_str!("../data/epl_2009_10.csv")),
    ("2010/11", include_str!("../data/epl_2010_11.csv")),
    ("2011/12", include_str!("../data/epl_2011_12.csv")),
    ("2012/13", include_str!("../data/epl_2012_13.csv")),
    ("2013/14", include_str!("../data/epl_2013_14.csv")),
    ("2014/15", include_str!("../data/epl_2014_15.csv")),
    ("2015/16", include_str!("../data/epl_2015_16.csv")),
    ("2016/17", include_str!("../data/epl_2016_17.csv")),
];

/// The eight complete seasons 2009/10–2016/17.
pub fn load_embedded_corpus() -> Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS
        .get_or_init(|| {
            let seasons = EMBEDDED_SEASONS
                .iter()
                .map(|(label, text)| {
                    parse_season_csv(text, label)
                        .unwrap_or_else(|e| panic!("embedded season {label} is invalid: {e}"))
                })
                .collect();
            Corpus::new(seasons).expect("embedded seasons are distinct")
        })
        .clone()
}
