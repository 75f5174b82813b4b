//! Compares the computed density overlaps with the published ones under both
//! supported rescalings and renders the comparison as markdown.

use std::fmt::Write;

use leaguestats_core::density::{nonoverlap_table_with, overlap_pct_with};
use leaguestats_core::reference::{published_figure_overlaps, published_nonoverlap};
use leaguestats_core::{Corpus, Descriptor, KdeConfig, Normalization, SeasonMatrix};

pub const NONOVERLAP_MAD_TARGET: f64 = 0.15;

#[derive(Debug, Clone, PartialEq)]
pub struct TableCalibration {
    pub config: KdeConfig,
    pub computed: SeasonMatrix,
    pub published: SeasonMatrix,
    /// Mean absolute deviation over cells present on both sides.
    pub mad: f64,
    pub cells: usize,
    /// Seasons whose largest computed entry is the profit column.
    pub profit_row_max: usize,
}

pub fn config_name(cfg: &KdeConfig) -> &'static str {
    match cfg.normalization {
        Normalization::MinMax => "min-max",
        Normalization::ZScore => "z-score",
    }
}

pub fn profit_is_row_max(row: &[Option<f64>; 5]) -> bool {
    let profit = Descriptor::CRITERIA.iter().position(|d| *d == Descriptor::Profit).expect("criterion");
    let Some(p) = row[profit] else { return false };
    row.iter().enumerate().all(|(i, v)| i == profit || v.is_some_and(|v| v < p))
}

pub fn calibrate_table(corpus: &Corpus, cfg: &KdeConfig) -> TableCalibration {
    let computed = nonoverlap_table_with(corpus, cfg).values;
    let published = published_nonoverlap();
    let mut total = 0.0;
    let mut cells = 0;
    for (season, row) in computed.seasons.iter().zip(&computed.rows) {
        let Some(want) = published.row(season) else { continue };
        for (got, want) in row.iter().zip(want) {
            if let (Some(g), Some(w)) = (got, want) {
                total += (g - w).abs();
                cells += 1;
            }
        }
    }
    let profit_row_max = computed.rows.iter().filter(|r| profit_is_row_max(r)).count();
    TableCalibration {
        config: *cfg,
        computed,
        published,
        mad: if cells == 0 { f64::NAN } else { total / cells as f64 },
        cells,
        profit_row_max,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureCalibration {
    pub figure: String,
    pub pair: (Descriptor, Descriptor),
    /// Both sides sorted ascending, since subfigures are not labelled by
    /// season.
    pub computed: Vec<f64>,
    pub published: Vec<f64>,
    pub mad: f64,
}

pub fn calibrate_figures(corpus: &Corpus, cfg: &KdeConfig) -> Vec<FigureCalibration> {
    let published = published_figure_overlaps();
    let mut figures: Vec<String> = Vec::new();
    for f in &published {
        if !figures.contains(&f.figure) {
            figures.push(f.figure.clone());
        }
    }
    figures
        .into_iter()
        .map(|fig| {
            let rows: Vec<_> = published.iter().filter(|f| f.figure == fig).collect();
            let (a, b) = rows[0].pair;
            let mut want: Vec<f64> = rows.iter().map(|f| f.percent).collect();
            let mut got: Vec<f64> = corpus
                .seasons()
                .iter()
                .filter_map(|t| overlap_pct_with(t, a, b, cfg).ok())
                .collect();
            want.sort_by(f64::total_cmp);
            got.sort_by(f64::total_cmp);
            let n = want.len().min(got.len());
            let mad = if n == 0 {
                f64::NAN
            } else {
                want.iter().zip(&got).map(|(w, g)| (w - g).abs()).sum::<f64>() / n as f64
            };
            FigureCalibration { figure: fig, pair: (a, b), computed: got, published: want, mad }
        })
        .collect()
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.4}"))
}

pub fn render(corpus: &Corpus) -> String {
    let configs = [KdeConfig::z_score(), KdeConfig::min_max()];
    let tables: Vec<TableCalibration> = configs.iter().map(|c| calibrate_table(corpus, c)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "# Density overlap calibration\n");
    let _ = writeln!(
        out,
        "The published non-overlap table does not state how values were rescaled before\n\
         the kernel density estimate. Both supported rescalings are compared below.\n\
         Densities use a Gaussian kernel with Silverman's bandwidth\n\
         `0.9 * min(sd, IQR/1.34) * n^-0.2` and are renormalised on the evaluation grid.\n"
    );
    let _ = writeln!(out, "## Summary\n");
    let _ = writeln!(out, "| rescaling | grid | MAD vs published (cells) | profit is row maximum |");
    let _ = writeln!(out, "|---|---|---|---|");
    for t in &tables {
        let _ = writeln!(
            out,
            "| {} | [{}, {}] x {} | {:.4} ({}) | {}/{} |",
            config_name(&t.config),
            t.config.grid.lo,
            t.config.grid.hi,
            t.config.grid.points,
            t.mad,
            t.cells,
            t.profit_row_max,
            t.computed.seasons.len()
        );
    }
    let default = &tables[0];
    let verdict = if default.mad <= NONOVERLAP_MAD_TARGET { "met" } else { "not met" };
    let _ = writeln!(
        out,
        "\nDefault configuration: {}. Non-overlap MAD = {:.4}; target <= {}: {}.\n",
        config_name(&default.config),
        default.mad,
        NONOVERLAP_MAD_TARGET,
        verdict
    );
    let _ = writeln!(
        out,
        "z-score rescaling is the default because it is the only one that keeps points v\n\
         profit the largest disagreement in every season, as in the published table.\n\
         Min-max rescaling sits closer on average but puts points v player spend above\n\
         points v profit in 2015/16. Shrinking the bandwidth lowers the deviation further\n\
         but breaks the same ordering, so no tested setting meets both.\n"
    );

    for t in &tables {
        let _ = writeln!(out, "## Non-overlap, {} rescaling\n", config_name(&t.config));
        let _ = writeln!(out, "Each cell is computed / published.\n");
        let header: Vec<String> = Descriptor::CRITERIA.iter().map(|d| format!("Pts v {}", d.label())).collect();
        let _ = writeln!(out, "| season | {} |", header.join(" | "));
        let _ = writeln!(out, "|---|{}", "---|".repeat(5));
        for (season, row) in t.computed.seasons.iter().zip(&t.computed.rows) {
            let want = t.published.row(season);
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, v)| format!("{} / {}", cell(*v), cell(want.and_then(|w| w[i]))))
                .collect();
            let _ = writeln!(out, "| {season} | {} |", cells.join(" | "));
        }
        out.push('\n');
    }

    let _ = writeln!(out, "## Overlap percentages in the density figures\n");
    let _ = writeln!(
        out,
        "Subfigures are not labelled by season, so the eight computed and eight printed\n\
         values are each sorted and compared in order. Two figures show foreign spend v\n\
         profit and print different values.\n"
    );
    for cfg in &configs {
        let _ = writeln!(out, "### {} rescaling\n", config_name(cfg));
        let _ = writeln!(out, "| figure | pair | MAD (points) | computed (sorted) | printed (sorted) |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for f in calibrate_figures(corpus, cfg) {
            let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(", ");
            let _ = writeln!(
                out,
                "| {} | {} v {} | {:.2} | {} | {} |",
                f.figure,
                f.pair.0.label(),
                f.pair.1.label(),
                f.mad,
                fmt(&f.computed),
                fmt(&f.published)
            );
        }
        out.push('\n');
    }
    out
}
