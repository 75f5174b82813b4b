//! Re-ranking, inequality, density-overlap and PCA analyses of Premier League
//! club finances, 2009/10 to 2016/17.

pub mod corpus;
pub mod density;
pub mod descriptor;
pub mod eigen;
pub mod error;
pub mod inequality;
pub mod multivariate;
pub mod ranking;
pub mod reference;
pub mod series;

pub use corpus::{load_embedded_corpus, Corpus, SeasonTable, TeamSeasonRecord};
pub use density::{KdeConfig, NonOverlapTable, Normalization};
pub use descriptor::Descriptor;
pub use eigen::{jacobi_eigh, SymmetricEigen};
pub use error::{Error, Result};
pub use inequality::{LorenzCurve, Measure};
pub use multivariate::{CorrelationSeries, PcaResult};
pub use ranking::{RankTable, TieBreak};
pub use series::SeasonMatrix;
