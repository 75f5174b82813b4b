use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A per-team season quantity: league points or one of the five re-ranking
/// criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Descriptor {
    Points,
    Ratio,
    PlayerSpend,
    ForeignSpend,
    Profit,
    Expenditure,
}

impl Descriptor {
    /// All six variables in PCA / CSV column order.
    pub const ALL: [Descriptor; 6] = [
        Descriptor::Points,
        Descriptor::Ratio,
        Descriptor::PlayerSpend,
        Descriptor::ForeignSpend,
        Descriptor::Profit,
        Descriptor::Expenditure,
    ];

    /// The five re-ranking criteria, in non-overlap / correlation table order.
    pub const CRITERIA: [Descriptor; 5] = [
        Descriptor::Ratio,
        Descriptor::PlayerSpend,
        Descriptor::ForeignSpend,
        Descriptor::Profit,
        Descriptor::Expenditure,
    ];

    /// Snake-case key used in CSV headers and on the command line.
    pub fn key(self) -> &'static str {
        match self {
            Descriptor::Points => "points",
            Descriptor::Ratio => "ratio",
            Descriptor::PlayerSpend => "player_spend",
            Descriptor::ForeignSpend => "foreign_spend",
            Descriptor::Profit => "profit",
            Descriptor::Expenditure => "expenditure",
        }
    }

    /// Short human label, as used in the published PCA tables.
    pub fn label(self) -> &'static str {
        match self {
            Descriptor::Points => "Pts",
            Descriptor::Ratio => "Ratio",
            Descriptor::PlayerSpend => "Player Spend",
            Descriptor::ForeignSpend => "Foreign Spend",
            Descriptor::Profit => "Profits",
            Descriptor::Expenditure => "Exp",
        }
    }

    pub fn is_criterion(self) -> bool {
        self != Descriptor::Points
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownDescriptor(pub String);

impl fmt::Display for UnknownDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown descriptor '{}' (expected one of points, ratio, player_spend, foreign_spend, profit, expenditure)",
            self.0
        )
    }
}

impl std::error::Error for UnknownDescriptor {}

impl FromStr for Descriptor {
    type Err = UnknownDescriptor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .map(|c| if c == '-' || c == ' ' { '_' } else { c })
            .collect();
        match norm.as_str() {
            "points" | "pts" => Ok(Descriptor::Points),
            "ratio" | "foreign_british" => Ok(Descriptor::Ratio),
            "player_spend" | "spend" | "total_spend" => Ok(Descriptor::PlayerSpend),
            "foreign_spend" | "foreign" => Ok(Descriptor::ForeignSpend),
            "profit" | "profits" => Ok(Descriptor::Profit),
            "expenditure" | "exp" | "expense" => Ok(Descriptor::Expenditure),
            _ => Err(UnknownDescriptor(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_parse_back() {
        for d in Descriptor::ALL {
            assert_eq!(d.key().parse::<Descriptor>().unwrap(), d);
        }
        assert_eq!("Exp".parse::<Descriptor>().unwrap(), Descriptor::Expenditure);
        assert_eq!("player-spend".parse::<Descriptor>().unwrap(), Descriptor::PlayerSpend);
        assert!("goals".parse::<Descriptor>().is_err());
    }

    #[test]
    fn criteria_exclude_points() {
        assert!(Descriptor::CRITERIA.iter().all(|d| d.is_criterion()));
        assert!(!Descriptor::Points.is_criterion());
    }
}
