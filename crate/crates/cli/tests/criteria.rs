//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use leaguestats_core::corpus::descriptor_column;
use leaguestats_core::density::{descriptor_density, nonoverlap_table, overlap, Grid};
use leaguestats_core::inequality::{gini, lorenz, theil};
use leaguestats_core::multivariate::{correlation_matrix, pca};
use leaguestats_core::ranking::rerank_all;
use leaguestats_core::reference::{published_nonoverlap, published_pca, published_rerank, PCA_EXCLUDED_SEASON};
use leaguestats_core::{jacobi_eigh, load_embedded_corpus, Corpus, Descriptor, KdeConfig};

const RERANK_TIME_LIMIT: Duration = Duration::from_secs(1);
const PCA_TIME_LIMIT: Duration = Duration::from_secs(1);
const REPRODUCE_TIME_LIMIT: Duration = Duration::from_secs(10);
const PCA_LOADING_TOL: f64 = 0.02;
const EIGEN_MATRICES: usize = 1000;
const EIGEN_SEED: u64 = 0x5eed_e16e;
const RECONSTRUCTION_TOL: f64 = 1e-9;
const ORTHONORMALITY_TOL: f64 = 1e-9;
const MAD_TARGET: f64 = 0.15;
const MAD_REPORT_TOL: f64 = 5e-5;
const GINI_VECTORS: usize = 1000;
const GINI_SEED: u64 = 0x0061_711e;
const CONSTANT_TOL: f64 = 1e-15;
const SCALE_TOL: f64 = 1e-12;
const PAIRWISE_TOL: f64 = 1e-9;
const DENSITY_MASS_TOL: f64 = 1e-6;
const SELF_OVERLAP_TOL: f64 = 1e-9;
const GRID_DOUBLING_TOL: f64 = 1e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion_1(c: &Corpus) -> Outcome {
    let start = Instant::now();
    let computed: Vec<_> = c.seasons().iter().map(rerank_all).collect();
    let elapsed = start.elapsed();
    let mut vectors = 0;
    let mut bad_vectors = Vec::new();
    let mut bad_ranks = 0;
    for got in &computed {
        let (_, want) = published_rerank(&got.season).expect("published table");
        for d in Descriptor::CRITERIA {
            vectors += 1;
            let (g, w) = (got.get(d).expect("complete season"), want.get(d).expect("published column"));
            let n = g.iter().zip(w).filter(|(a, b)| a != b).count();
            if n > 0 {
                bad_ranks += n;
                bad_vectors.push(format!("{} {}", got.season, d.key()));
            }
        }
    }
    outcome(
        bad_vectors.is_empty() && elapsed < RERANK_TIME_LIMIT,
        format!(
            "{}/{vectors} vectors exact, {bad_ranks} rank mismatches{}, {:.1} ms",
            vectors - bad_vectors.len(),
            if bad_vectors.is_empty() { String::new() } else { format!(" in [{}]", bad_vectors.join(", ")) },
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_2(c: &Corpus) -> Outcome {
    let start = Instant::now();
    let results: Vec<_> = c.seasons().iter().map(|t| pca(t).expect("pca")).collect();
    let elapsed = start.elapsed();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut bad = Vec::new();
    let mut exp_top = 0;
    for p in &results {
        let pc1 = p.pc1();
        let top = (0..6).max_by(|&a, &b| pc1[a].abs().total_cmp(&pc1[b].abs())).unwrap();
        if p.variables[top] == Descriptor::Expenditure {
            exp_top += 1;
        }
        if p.season == PCA_EXCLUDED_SEASON {
            continue;
        }
        let printed = published_pca(&p.season).expect("published table");
        let dev_same = (0..6).map(|i| (pc1[i] - printed[i][0]).abs()).fold(0.0, f64::max);
        let dev_flip = (0..6).map(|i| (pc1[i] + printed[i][0]).abs()).fold(0.0, f64::max);
        let dev = dev_same.min(dev_flip);
        compared += 1;
        worst = worst.max(dev);
        if dev > PCA_LOADING_TOL {
            bad.push(p.season.clone());
        }
    }
    outcome(
        bad.is_empty() && compared == 7 && exp_top == results.len() && elapsed < PCA_TIME_LIMIT,
        format!(
            "{compared} seasons compared, max |dPC1| = {worst:.4} (tol {PCA_LOADING_TOL}){}; Exp largest |PC1| in {exp_top}/{} seasons; {:.1} ms",
            if bad.is_empty() { String::new() } else { format!(", over tol in {}", bad.join(", ")) },
            results.len(),
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(EIGEN_SEED);
    let mut worst_recon: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..EIGEN_MATRICES {
        let mut s = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..=i {
                let x: f64 = rng.gen_range(-1.0..1.0);
                s[i][j] = x;
                s[j][i] = x;
            }
        }
        let Ok(e) = jacobi_eigh(&s) else {
            failures += 1;
            continue;
        };
        for i in 0..6 {
            for j in 0..6 {
                let r: f64 = (0..6).map(|k| e.vectors[i][k] * e.values[k] * e.vectors[j][k]).sum();
                worst_recon = worst_recon.max((r - s[i][j]).abs());
                let d: f64 = (0..6).map(|k| e.vectors[k][i] * e.vectors[k][j]).sum();
                worst_orth = worst_orth.max((d - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    outcome(
        failures == 0 && worst_recon < RECONSTRUCTION_TOL && worst_orth < ORTHONORMALITY_TOL,
        format!(
            "{EIGEN_MATRICES} matrices, {failures} solver errors, max reconstruction {worst_recon:.2e}, max orthonormality {worst_orth:.2e}"
        ),
    )
}

fn criterion_4(c: &Corpus) -> Outcome {
    let table = nonoverlap_table(c);
    let profit = Descriptor::CRITERIA.iter().position(|d| *d == Descriptor::Profit).unwrap();
    let row_max = table
        .values
        .rows
        .iter()
        .filter(|r| {
            let p = r[profit].expect("complete season");
            r.iter().enumerate().all(|(i, v)| i == profit || v.expect("complete season") < p)
        })
        .count();

    let printed = published_nonoverlap();
    let mut total = 0.0;
    let mut cells = 0;
    for (season, row) in table.values.seasons.iter().zip(&table.values.rows) {
        let want = printed.row(season).expect("published row");
        for k in 0..5 {
            total += (row[k].unwrap() - want[k].unwrap()).abs();
            cells += 1;
        }
    }
    let mad = total / cells as f64;

    let doc = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/calibration.md");
    let text = std::fs::read_to_string(&doc).unwrap_or_default();
    let reported = text
        .lines()
        .find_map(|l| l.split("Non-overlap MAD = ").nth(1))
        .and_then(|rest| rest.split(';').next())
        .and_then(|v| v.trim().parse::<f64>().ok());
    let reported_ok = reported.is_some_and(|r| (r - mad).abs() <= MAD_REPORT_TOL);
    outcome(
        row_max == table.values.rows.len() && cells == 40 && reported_ok,
        format!(
            "profit is row max in {row_max}/{} seasons; MAD {mad:.4} over {cells} cells, docs/calibration.md reports {}; target <= {MAD_TARGET} {}",
            table.values.rows.len(),
            reported.map_or("nothing".into(), |r| format!("{r:.4}")),
            if mad <= MAD_TARGET { "met" } else { "MISSED" }
        ),
    )
}

fn criterion_5(c: &Corpus) -> Outcome {
    let m = correlation_matrix(c);
    let r_profit = m.get("2015/16", Descriptor::Profit).expect("2015/16 profit r");
    let mut not_lowest = Vec::new();
    for d in [Descriptor::Ratio, Descriptor::ForeignSpend, Descriptor::PlayerSpend, Descriptor::Expenditure] {
        let here = m.get("2015/16", d).unwrap();
        if m.column(d).iter().any(|(_, v)| v.unwrap() < here) {
            not_lowest.push(d.key());
        }
    }
    outcome(
        r_profit > 0.0 && not_lowest.is_empty(),
        format!(
            "2015/16 points v profit r = {r_profit:.4}; column minimum in 2015/16 for {}",
            if not_lowest.is_empty() { "all four".to_string() } else { format!("all but {}", not_lowest.join(", ")) }
        ),
    )
}

fn pairwise_gini(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let s: f64 = x.iter().map(|a| x.iter().map(|b| (a - b).abs()).sum::<f64>()).sum();
    s / (2.0 * n * n * mean)
}

fn criterion_6(c: &Corpus) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    for x in [vec![1.0; 20], vec![57.3; 7], vec![0.25; 2]] {
        if gini(&x).unwrap().abs() > CONSTANT_TOL || theil(&x).unwrap().index.abs() > CONSTANT_TOL {
            ok = false;
            notes.push("constant vector not zero".to_string());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(GINI_SEED);
    let (mut worst_pair, mut worst_scale): (f64, f64) = (0.0, 0.0);
    let mut convex = true;
    for _ in 0..GINI_VECTORS {
        let n = rng.gen_range(2..=60);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1000.0)).collect();
        if rng.gen_bool(0.2) {
            x[0] = 0.0;
        }
        let g = gini(&x).unwrap();
        worst_pair = worst_pair.max((g - pairwise_gini(&x)).abs());
        let k = rng.gen_range(0.001..1000.0);
        let y: Vec<f64> = x.iter().map(|v| v * k).collect();
        worst_scale = worst_scale.max((g - gini(&y).unwrap()).abs());
        if x.iter().all(|v| *v > 0.0) {
            worst_scale = worst_scale.max((theil(&x).unwrap().index - theil(&y).unwrap().index).abs());
        }
        let curve = lorenz(&x).unwrap();
        let first = &curve.points[0];
        let last = curve.points.last().unwrap();
        if (first.p, first.l) != (0.0, 0.0) || (last.p, last.l) != (1.0, 1.0) {
            convex = false;
        }
        let slopes: Vec<f64> = curve.points.windows(2).map(|w| (w[1].l - w[0].l) / (w[1].p - w[0].p)).collect();
        if slopes.windows(2).any(|s| s[1] < s[0] - 1e-9) {
            convex = false;
        }
    }
    ok &= worst_pair < PAIRWISE_TOL && worst_scale < SCALE_TOL && convex;
    notes.push(format!(
        "{GINI_VECTORS} vectors: max |trapezoid - pairwise| {worst_pair:.1e}, max scale drift {worst_scale:.1e}, endpoints/convexity {}",
        if convex { "ok" } else { "violated" }
    ));

    let mut steady = 0;
    let mut unsteady = Vec::new();
    for t in c.seasons() {
        let r = gini(&descriptor_column(t, Descriptor::Ratio).unwrap()).unwrap();
        let f = gini(&descriptor_column(t, Descriptor::ForeignSpend).unwrap()).unwrap();
        if r < f {
            steady += 1;
        } else {
            unsteady.push(t.season().to_string());
        }
    }
    ok &= unsteady.is_empty();
    notes.push(format!(
        "Gini(ratio) < Gini(foreign_spend) in {steady}/{} seasons{}",
        c.len(),
        if unsteady.is_empty() { String::new() } else { format!(" (fails {})", unsteady.join(", ")) }
    ));
    outcome(ok, notes.join("; "))
}

fn criterion_7(c: &Corpus) -> Outcome {
    let mut worst_mass: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    let mut worst_self: f64 = 0.0;
    let mut worst_grid: f64 = 0.0;
    let mut bounded = true;
    let mut densities = 0;
    for cfg in [KdeConfig::z_score(), KdeConfig::min_max()] {
        let fine = KdeConfig { grid: Grid { points: (cfg.grid.points - 1) * 2 + 1, ..cfg.grid }, ..cfg };
        for t in c.seasons() {
            let f: Vec<_> = Descriptor::ALL.iter().map(|d| descriptor_density(t, *d, &cfg).unwrap()).collect();
            let g: Vec<_> = Descriptor::ALL.iter().map(|d| descriptor_density(t, *d, &fine).unwrap()).collect();
            for (a, fa) in f.iter().enumerate() {
                densities += 1;
                worst_mass = worst_mass.max((fa.integral() - 1.0).abs());
                worst_self = worst_self.max((overlap(fa, fa).unwrap().overlap - 1.0).abs());
                for (b, fb) in f.iter().enumerate().skip(a + 1) {
                    let ab = overlap(fa, fb).unwrap().overlap;
                    let ba = overlap(fb, fa).unwrap().overlap;
                    worst_sym = worst_sym.max((ab - ba).abs());
                    bounded &= (0.0..=1.0).contains(&ab);
                    let doubled = overlap(&g[a], &g[b]).unwrap().overlap;
                    worst_grid = worst_grid.max((ab - doubled).abs());
                }
            }
        }
    }
    outcome(
        worst_mass <= DENSITY_MASS_TOL && worst_sym == 0.0 && bounded && worst_self <= SELF_OVERLAP_TOL && worst_grid < GRID_DOUBLING_TOL,
        format!(
            "{densities} densities: max |mass - 1| {worst_mass:.1e}, asymmetry {worst_sym:.1e}, bounded {bounded}, max |self - 1| {worst_self:.1e}, grid doubling {worst_grid:.1e}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_leaguestats"))
        .args(["reproduce", "--out"])
        .arg(dir.path())
        .env_remove("LEAGUESTATS_DATA")
        .output()
        .expect("run leaguestats");
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);

    let mut expected: Vec<String> = Vec::new();
    for y in 2009..2017 {
        let stem = format!("{y}_{:02}", (y + 1) % 100);
        expected.push(format!("rerank_{stem}.csv"));
        expected.push(format!("pca_{stem}.csv"));
    }
    for f in ["inequality.csv", "nonoverlap.csv", "correlation.csv", "calibration.md", "summary.txt"] {
        expected.push(f.to_string());
    }
    let missing: Vec<&String> = expected.iter().filter(|f| !dir.path().join(f).is_file()).collect();

    let lines = |prefix: &str| -> Vec<&str> { stdout.lines().filter(|l| l.split_whitespace().nth(1) == Some(prefix)).collect() };
    let rerank = lines("rerank");
    let pcas = lines("pca");
    let pca_seasons: Vec<&&str> = pcas.iter().filter(|l| l.split_whitespace().nth(2).is_some_and(|s| s.contains('/'))).collect();
    let rerank_pass = rerank.iter().filter(|l| l.starts_with("PASS")).count();
    let pca_pass = pca_seasons.iter().filter(|l| l.starts_with("PASS")).count();
    let pca_skip = pca_seasons.iter().filter(|l| l.starts_with("SKIP")).count();
    let failing: Vec<String> = rerank
        .iter()
        .chain(pca_seasons.iter().copied())
        .filter(|l| l.starts_with("FAIL"))
        .map(|l| l.split_whitespace().take(3).collect::<Vec<_>>().join(" "))
        .collect();
    outcome(
        out.status.success()
            && elapsed < REPRODUCE_TIME_LIMIT
            && missing.is_empty()
            && rerank.len() == 8
            && rerank_pass == 8
            && pca_pass == 7
            && pca_skip == 1,
        format!(
            "exit {}, {:.2} s, {}/{} artifact files, rerank PASS {rerank_pass}/8, pca PASS {pca_pass}/7 (+{pca_skip} skipped){}",
            out.status.code().unwrap_or(-1),
            elapsed.as_secs_f64(),
            expected.len() - missing.len(),
            expected.len(),
            if failing.is_empty() { String::new() } else { format!(", failing: {}", failing.join(", ")) }
        ),
    )
}

fn main() {
    let corpus = load_embedded_corpus();
    let results = [
        ("re-rank oracle", criterion_1(&corpus)),
        ("PCA oracle", criterion_2(&corpus)),
        ("eigensolver properties", criterion_3()),
        ("non-overlap structure", criterion_4(&corpus)),
        ("correlation prose checks", criterion_5(&corpus)),
        ("inequality properties", criterion_6(&corpus)),
        ("KDE properties", criterion_7(&corpus)),
        ("end-to-end reproduce", criterion_8()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {} {:<26} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
