use serde::{Serialize, Serializer};

use crate::corpus::fmt_num;
use crate::descriptor::Descriptor;

/// A seasons × five-criteria table (non-overlap values, correlations).
/// Cells are `None` where a season lacks the column.
#[derive(Debug, Clone, PartialEq)]
pub struct SeasonMatrix {
    pub seasons: Vec<String>,
    pub rows: Vec<[Option<f64>; 5]>,
}

impl SeasonMatrix {
    pub fn columns() -> [Descriptor; 5] {
        Descriptor::CRITERIA
    }

    pub fn row(&self, season: &str) -> Option<&[Option<f64>; 5]> {
        self.seasons.iter().position(|s| s == season).map(|i| &self.rows[i])
    }

    pub fn get(&self, season: &str, d: Descriptor) -> Option<f64> {
        let col = Descriptor::CRITERIA.iter().position(|c| *c == d)?;
        self.row(season)?[col]
    }

    /// One criterion across seasons, chronological.
    pub fn column(&self, d: Descriptor) -> Vec<(String, Option<f64>)> {
        let Some(col) = Descriptor::CRITERIA.iter().position(|c| *c == d) else {
            return Vec::new();
        };
        self.seasons
            .iter()
            .zip(&self.rows)
            .map(|(s, r)| (s.clone(), r[col]))
            .collect()
    }

    /// `season,ratio,player_spend,foreign_spend,profit,expenditure`, missing
    /// cells written as `undefined`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("season");
        for d in Descriptor::CRITERIA {
            out.push(',');
            out.push_str(d.key());
        }
        out.push('\n');
        for (s, row) in self.seasons.iter().zip(&self.rows) {
            out.push_str(s);
            for v in row {
                out.push(',');
                match v {
                    Some(v) => out.push_str(&fmt_num(*v)),
                    None => out.push_str("undefined"),
                }
            }
            out.push('\n');
        }
        out
    }
}

impl Serialize for SeasonMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;

        #[derive(Serialize)]
        struct Row<'a> {
            season: &'a str,
            ratio: Cell,
            player_spend: Cell,
            foreign_spend: Cell,
            profit: Cell,
            expenditure: Cell,
        }
        struct Cell(Option<f64>);
        impl Serialize for Cell {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                match self.0 {
                    Some(v) => s.serialize_f64(v),
                    None => s.serialize_str("undefined"),
                }
            }
        }

        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for (season, r) in self.seasons.iter().zip(&self.rows) {
            seq.serialize_element(&Row {
                season,
                ratio: Cell(r[0]),
                player_spend: Cell(r[1]),
                foreign_spend: Cell(r[2]),
                profit: Cell(r[3]),
                expenditure: Cell(r[4]),
            })?;
        }
        seq.end()
    }
}
