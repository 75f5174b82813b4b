//! One function per command. Each returns the rendered artifact; writing it
//! out is left to the caller.

use serde::Serialize;

use leaguestats_core::corpus::{descriptor_column, fmt_num, validate_season_label};
use leaguestats_core::density::{nonoverlap_table_with, pair_overlap, OverlapResult};
use leaguestats_core::inequality::{inequality_reports, inequality_series, lorenz, Measure};
use leaguestats_core::multivariate::{correlation_matrix, pca};
use leaguestats_core::ranking::rerank_all;
use leaguestats_core::{load_embedded_corpus, Corpus, Descriptor, Error, PcaResult, SeasonMatrix, SeasonTable};

use crate::svg::{emit_svg, Chart, Series};
use crate::{reproduce, CliError, Command, Format, Input, ReportRequest};

pub fn load_corpus(req: &ReportRequest) -> Result<Corpus, CliError> {
    match &req.input {
        Input::Embedded => Ok(load_embedded_corpus()),
        Input::Dir(dir) => {
            let corpus = Corpus::from_dir(dir, req.allow_partial)?;
            if corpus.is_empty() {
                return Err(Error::Io(format!("{}: no epl_YYYY_YY.csv files", dir.display())).into());
            }
            Ok(corpus)
        }
    }
}

/// Runs a non-`reproduce` command and returns the artifact text. For
/// `reproduce` the artifacts go to `req.out` (default `reproduce/`) and the
/// summary is returned.
pub fn run(req: &ReportRequest) -> Result<String, CliError> {
    validate(req)?;
    let corpus = load_corpus(req)?;
    let seasons = select(&corpus, req)?;
    match req.command {
        Command::Rerank => rerank(req, &seasons),
        Command::Inequality => inequality(req, &corpus, &seasons),
        Command::Overlap => overlap(req, &corpus, &seasons),
        Command::Correlation => correlation(req, &corpus, &seasons),
        Command::Pca => pca_report(req, &seasons),
        Command::Reproduce => {
            let dir = req.out.clone().unwrap_or_else(|| "reproduce".into());
            let summary = reproduce::reproduce(&corpus, &dir)?;
            Ok(summary.render())
        }
    }
}

fn validate(req: &ReportRequest) -> Result<(), CliError> {
    if let Some(s) = &req.season {
        validate_season_label(s).map_err(|_| CliError::usage("--season", format!("'{s}' is not a season label (expected YYYY/YY)")))?;
    }
    if let Some(d) = req.descriptor {
        if req.command == Command::Rerank && !d.is_criterion() {
            return Err(CliError::usage("--descriptor", format!("{d} is not a ranking criterion")));
        }
    }
    if let Some((a, b)) = req.pair {
        if a == b {
            return Err(CliError::usage("--pair", format!("pair must name two different descriptors, got {a} twice")));
        }
    }
    let needs_season = matches!(req.command, Command::Rerank | Command::Pca);
    if req.format == Format::Svg && needs_season && req.season.is_none() {
        return Err(CliError::usage("--season", "svg output needs a single season"));
    }
    Ok(())
}

fn select<'a>(corpus: &'a Corpus, req: &ReportRequest) -> Result<Vec<&'a SeasonTable>, CliError> {
    match &req.season {
        None => Ok(corpus.seasons().iter().collect()),
        Some(s) => corpus.get(s).map(|t| vec![t]).ok_or_else(|| {
            CliError::usage(
                "--season",
                format!("no season {s} in the corpus (available: {})", corpus.labels().join(", ")),
            )
        }),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn labels(seasons: &[&SeasonTable]) -> Vec<String> {
    seasons.iter().map(|t| t.season().to_string()).collect()
}

fn measure(m: Measure) -> String {
    m.value().map(fmt_num).unwrap_or_else(|| "undefined".into())
}

fn prefix_season(season: &str, csv: &str, first: bool) -> String {
    let mut out = String::new();
    for (i, line) in csv.lines().enumerate() {
        if i == 0 {
            if first {
                out.push_str("season,");
                out.push_str(line);
                out.push('\n');
            }
            continue;
        }
        out.push_str(season);
        out.push(',');
        out.push_str(line);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct RerankJson<'a> {
    season: &'a str,
    teams: Vec<&'a str>,
    ranks: std::collections::BTreeMap<Descriptor, Vec<u8>>,
}

fn rerank(req: &ReportRequest, seasons: &[&SeasonTable]) -> Result<String, CliError> {
    let tables: Vec<_> = seasons.iter().map(|t| (*t, rerank_all(t))).collect();
    // the full table leaves rank columns blank for a partial season; naming
    // an absent criterion is an error
    let criteria: Vec<Descriptor> = match req.descriptor {
        Some(d) => {
            if let Some((t, _)) = tables.iter().find(|(_, r)| r.get(d).is_none()) {
                return Err(Error::MissingColumn { season: t.season().to_string(), column: d.key() }.into());
            }
            vec![d]
        }
        None => Descriptor::CRITERIA.to_vec(),
    };
    match req.format {
        Format::Csv => {
            if let Some(d) = req.descriptor {
                let mut out = format!("season,position,team,{},{}_rank\n", d.key(), d.key());
                for (t, r) in &tables {
                    let ranks = r.get(d).expect("checked above");
                    for (rec, rank) in t.records().iter().zip(ranks) {
                        let v = rec.value(d).expect("checked above");
                        out.push_str(&format!("{},{},{},{},{}\n", t.season(), rec.position, rec.team, fmt_num(v), rank));
                    }
                }
                Ok(out)
            } else if let [(t, r)] = tables.as_slice() {
                Ok(r.to_csv(t))
            } else {
                Ok(tables
                    .iter()
                    .enumerate()
                    .map(|(i, (t, r))| prefix_season(t.season(), &r.to_csv(t), i == 0))
                    .collect())
            }
        }
        Format::Json => {
            let rows: Vec<RerankJson> = tables
                .iter()
                .map(|(t, r)| RerankJson {
                    season: t.season(),
                    teams: t.records().iter().map(|x| x.team.as_str()).collect(),
                    ranks: r.ranks.iter().filter(|(d, _)| criteria.contains(d)).map(|(d, v)| (*d, v.clone())).collect(),
                })
                .collect();
            Ok(json(&rows))
        }
        Format::Svg => {
            let (t, r) = &tables[0];
            let mut chart = Chart::new(format!("Criterion rank against league position, {}", t.season()), "league position", "criterion rank");
            for d in &criteria {
                let pts = r
                    .get(*d)
                    .expect("checked above")
                    .iter()
                    .enumerate()
                    .map(|(i, &rank)| ((i + 1) as f64, f64::from(rank)))
                    .collect();
                chart.push(Series::new(d.label(), pts));
            }
            Ok(emit_svg(&chart)?)
        }
    }
}

fn inequality(req: &ReportRequest, corpus: &Corpus, seasons: &[&SeasonTable]) -> Result<String, CliError> {
    let descriptors: Vec<Descriptor> = match req.descriptor {
        Some(d) => vec![d],
        None => Descriptor::ALL.to_vec(),
    };
    let wanted = labels(seasons);
    match req.format {
        Format::Csv => {
            let mut out = String::from("season,descriptor,gini,theil,shift_applied\n");
            for d in &descriptors {
                for e in inequality_series(corpus, *d).iter().filter(|e| wanted.contains(&e.season)) {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        e.season,
                        d.key(),
                        measure(e.gini),
                        measure(e.theil),
                        fmt_num(e.shift_applied)
                    ));
                }
            }
            Ok(out)
        }
        Format::Json => {
            let reports: Vec<_> = inequality_reports(corpus, &descriptors)
                .into_iter()
                .filter(|r| wanted.contains(&r.season))
                .collect();
            Ok(json(&reports))
        }
        Format::Svg if req.season.is_some() => {
            let t = seasons[0];
            let mut chart = Chart::new(format!("Lorenz curves, {}", t.season()), "cumulative share of clubs", "cumulative share of total");
            for d in &descriptors {
                if let Ok(curve) = descriptor_column(t, *d).and_then(|c| lorenz(&c)) {
                    chart.push(Series::lorenz(d.label(), &curve));
                }
            }
            Ok(emit_svg(&chart)?)
        }
        Format::Svg => {
            let mut chart = Chart::new("Gini index by season", "season", "Gini").with_categories(wanted);
            for d in &descriptors {
                let values: Vec<Option<f64>> = inequality_series(corpus, *d).iter().map(|e| e.gini.value()).collect();
                if values.iter().any(Option::is_some) {
                    chart.push(Series::categorical(d.label(), &values));
                }
            }
            Ok(emit_svg(&chart)?)
        }
    }
}

fn matrix_subset(m: &SeasonMatrix, wanted: &[String]) -> SeasonMatrix {
    let (seasons, rows) = m
        .seasons
        .iter()
        .zip(&m.rows)
        .filter(|(s, _)| wanted.contains(s))
        .map(|(s, r)| (s.clone(), *r))
        .unzip();
    SeasonMatrix { seasons, rows }
}

fn matrix_chart(m: &SeasonMatrix, title: &str, y_label: &str, only: Option<Descriptor>) -> Result<String, CliError> {
    let mut chart = Chart::new(title, "season", y_label).with_categories(m.seasons.clone());
    for d in Descriptor::CRITERIA {
        if only.is_some_and(|o| o != d) {
            continue;
        }
        let values: Vec<Option<f64>> = m.column(d).into_iter().map(|(_, v)| v).collect();
        if values.iter().any(Option::is_some) {
            chart.push(Series::categorical(format!("Pts v {}", d.label()), &values));
        }
    }
    Ok(emit_svg(&chart)?)
}

fn overlap(req: &ReportRequest, corpus: &Corpus, seasons: &[&SeasonTable]) -> Result<String, CliError> {
    let wanted = labels(seasons);
    let Some((a, b)) = req.pair else {
        let table = nonoverlap_table_with(corpus, &req.kde);
        let m = matrix_subset(&table.values, &wanted);
        return match req.format {
            Format::Csv => Ok(m.to_csv()),
            Format::Json => Ok(json(&leaguestats_core::NonOverlapTable { config: table.config, values: m })),
            Format::Svg => matrix_chart(&m, "Non-overlap of points and each criterion", "non-overlap", None),
        };
    };
    let results: Vec<OverlapResult> = seasons
        .iter()
        .map(|t| pair_overlap(t, a, b, &req.kde))
        .collect::<leaguestats_core::Result<_>>()?;
    match req.format {
        Format::Csv => {
            let mut out = String::from("season,first,second,overlap_pct\n");
            for r in &results {
                out.push_str(&format!("{},{},{},{}\n", r.season, a.key(), b.key(), fmt_num(100.0 * r.overlap)));
            }
            Ok(out)
        }
        Format::Json => Ok(json(&results)),
        Format::Svg => {
            let mut chart = Chart::new(format!("Density overlap, {} v {}", a.label(), b.label()), "season", "overlap (%)")
                .with_categories(wanted);
            let values: Vec<Option<f64>> = results.iter().map(|r| Some(100.0 * r.overlap)).collect();
            chart.push(Series::categorical(format!("{} v {}", a.label(), b.label()), &values));
            Ok(emit_svg(&chart)?)
        }
    }
}

fn correlation(req: &ReportRequest, corpus: &Corpus, seasons: &[&SeasonTable]) -> Result<String, CliError> {
    let m = matrix_subset(&correlation_matrix(corpus), &labels(seasons));
    match req.format {
        Format::Csv => Ok(m.to_csv()),
        Format::Json => Ok(json(&m)),
        Format::Svg => matrix_chart(&m, "Correlation of each criterion with points", "Pearson r", req.descriptor),
    }
}

fn pca_report(req: &ReportRequest, seasons: &[&SeasonTable]) -> Result<String, CliError> {
    let results: Vec<PcaResult> = seasons.iter().map(|t| pca(t)).collect::<leaguestats_core::Result<_>>()?;
    match req.format {
        Format::Csv => match results.as_slice() {
            [one] => Ok(one.to_csv()),
            many => Ok(many
                .iter()
                .enumerate()
                .map(|(i, p)| prefix_season(&p.season, &p.to_csv(), i == 0))
                .collect()),
        },
        Format::Json => Ok(json(&results)),
        Format::Svg => {
            let p = &results[0];
            let names = p.variables.iter().map(|d| d.label().to_string()).collect();
            let mut chart = Chart::new(format!("Principal component loadings, {}", p.season), "variable", "loading")
                .with_categories(names);
            for k in 0..2 {
                let values: Vec<Option<f64>> = p.component(k).iter().map(|v| Some(*v)).collect();
                chart.push(Series::categorical(format!("PC{}", k + 1), &values));
            }
            Ok(emit_svg(&chart)?)
        }
    }
}
