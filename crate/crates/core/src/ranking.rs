//! Alternative league tables: each criterion re-ranks the 20 clubs from the
//! smallest value (rank 1) to the largest (rank 20).
//!
//! Equal values are ordered by [`TieBreak`]. The default,
//! [`TieBreak::RatioThenPosition`], compares the foreign:British ratio next
//! and the official position last. It agrees with 39 of the 40 published
//! rank columns. [`TieBreak::Position`] (official position only) agrees with
//! 36.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{self, csv_field, fmt_num, SeasonTable, TeamSeasonRecord};
use crate::descriptor::Descriptor;
use crate::error::{Error, Result};

/// Column order of the rank block in the published re-rank tables.
pub const PUBLISHED_RANK_ORDER: [Descriptor; 5] = [
    Descriptor::Expenditure,
    Descriptor::Profit,
    Descriptor::PlayerSpend,
    Descriptor::ForeignSpend,
    Descriptor::Ratio,
];

pub const RANKED_CSV_HEADER: &str = "expenditure_rank,profit_rank,player_spend_rank,foreign_spend_rank,ratio_rank,position,team,points,ratio,player_spend,foreign_spend,profit,expenditure";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Lower ratio first, then higher official placing.
    #[default]
    RatioThenPosition,
    /// Higher official placing first.
    Position,
}

/// Rank vectors for the five criteria. Each vector is indexed by official
/// position (element 0 is the champion) and is a permutation of 1..=20.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankTable {
    pub season: String,
    pub ranks: BTreeMap<Descriptor, Vec<u8>>,
}

impl RankTable {
    pub fn get(&self, d: Descriptor) -> Option<&[u8]> {
        self.ranks.get(&d).map(Vec::as_slice)
    }

    /// Published-layout CSV: five rank columns, then the season data.
    pub fn to_csv(&self, table: &SeasonTable) -> String {
        let mut out = String::new();
        out.push_str(RANKED_CSV_HEADER);
        out.push('\n');
        for (i, r) in table.records().iter().enumerate() {
            for d in PUBLISHED_RANK_ORDER {
                if let Some(v) = self.ranks.get(&d) {
                    out.push_str(&v[i].to_string());
                }
                out.push(',');
            }
            out.push_str(&ranked_tail(r));
            out.push('\n');
        }
        out
    }

    /// Parses the published-layout CSV back into the season data and its rank
    /// columns. Empty rank columns (criteria missing from a partial season)
    /// are skipped.
    pub fn parse_csv(text: &str, season_label: &str) -> Result<(SeasonTable, RankTable)> {
        let table = corpus::parse_season_csv_with(
            text,
            season_label,
            corpus::ParseOptions { allow_partial: true },
        )?;
        let names: Vec<String> = PUBLISHED_RANK_ORDER
            .iter()
            .map(|d| format!("{}_rank", d.key()))
            .collect();
        let mut wanted: Vec<&str> = names.iter().map(String::as_str).collect();
        wanted.push("position");
        let rows = corpus::read_rows(text, &wanted)?;
        let mut ranks: BTreeMap<Descriptor, Vec<u8>> = BTreeMap::new();
        let mut by_position: Vec<(u8, Vec<String>)> = Vec::with_capacity(rows.len());
        for (line, fields) in rows {
            let pos = fields[5].parse::<u8>().map_err(|_| Error::MalformedRow {
                line,
                reason: format!("position: cannot parse '{}'", fields[5]),
            })?;
            by_position.push((pos, fields));
        }
        by_position.sort_by_key(|(p, _)| *p);
        for (k, d) in PUBLISHED_RANK_ORDER.iter().enumerate() {
            if by_position.iter().all(|(_, f)| f[k].is_empty()) {
                continue;
            }
            let col = by_position
                .iter()
                .map(|(p, f)| {
                    f[k].parse::<u8>().map_err(|_| Error::MalformedRow {
                        line: usize::from(*p) + 1,
                        reason: format!("{}: cannot parse '{}'", names[k], f[k]),
                    })
                })
                .collect::<Result<Vec<u8>>>()?;
            if !is_permutation(&col) {
                return Err(Error::InvariantViolation(format!("{} is not a permutation of 1..20", names[k])));
            }
            ranks.insert(*d, col);
        }
        Ok((table, RankTable { season: season_label.to_string(), ranks }))
    }
}

fn ranked_tail(r: &TeamSeasonRecord) -> String {
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{}",
        r.position,
        csv_field(&r.team),
        r.points,
        fmt_num(r.ratio),
        fmt_num(r.player_spend),
        fmt_num(r.foreign_spend),
        opt(r.profit),
        opt(r.expenditure)
    )
}

pub(crate) fn is_permutation(ranks: &[u8]) -> bool {
    let mut seen = vec![false; ranks.len()];
    ranks.iter().all(|&r| {
        let i = usize::from(r);
        if i == 0 || i > seen.len() || seen[i - 1] {
            false
        } else {
            seen[i - 1] = true;
            true
        }
    })
}

/// Ranks the season by `d` with the default tie-break.
pub fn rerank(table: &SeasonTable, d: Descriptor) -> Result<Vec<u8>> {
    rerank_with(table, d, TieBreak::default())
}

pub fn rerank_with(table: &SeasonTable, d: Descriptor, tie: TieBreak) -> Result<Vec<u8>> {
    let values = corpus::descriptor_column(table, d)?;
    let records = table.records();
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .total_cmp(&values[b])
            .then_with(|| match tie {
                TieBreak::RatioThenPosition => records[a].ratio.total_cmp(&records[b].ratio),
                TieBreak::Position => Ordering::Equal,
            })
            .then_with(|| records[a].position.cmp(&records[b].position))
    });
    let mut ranks = vec![0u8; records.len()];
    for (rank, &i) in order.iter().enumerate() {
        ranks[i] = (rank + 1) as u8;
    }
    Ok(ranks)
}

/// All five criteria. Criteria missing from a partial season are left out.
pub fn rerank_all(table: &SeasonTable) -> RankTable {
    rerank_all_with(table, TieBreak::default())
}

pub fn rerank_all_with(table: &SeasonTable, tie: TieBreak) -> RankTable {
    let ranks = Descriptor::CRITERIA
        .iter()
        .filter(|d| table.has(**d))
        .map(|&d| (d, rerank_with(table, d, tie).expect("column presence checked")))
        .collect();
    RankTable { season: table.season().to_string(), ranks }
}

/// Teams by descending points. Equal points keep the recorded official
/// position, which already folds in goal difference and goals scored.
pub fn official_order(table: &SeasonTable) -> Vec<String> {
    let mut recs: Vec<&TeamSeasonRecord> = table.records().iter().collect();
    recs.sort_by(|a, b| b.points.cmp(&a.points).then(a.position.cmp(&b.position)));
    recs.into_iter().map(|r| r.team.clone()).collect()
}

/// Criterion rank minus official position, per team in position order.
pub fn rank_displacement(table: &SeasonTable, d: Descriptor) -> Result<Vec<i32>> {
    let ranks = rerank(table, d)?;
    Ok(ranks
        .iter()
        .zip(table.records())
        .map(|(&r, rec)| i32::from(r) - i32::from(rec.position))
        .collect())
}
