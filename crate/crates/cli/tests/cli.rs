use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use leaguestats::reproduce::{reproduce, Status};
use leaguestats::svg::polylines;
use leaguestats_core::corpus::{parse_season_csv, EMBEDDED_SEASONS};
use leaguestats_core::ranking::{rerank_all, RankTable};
use leaguestats_core::{load_embedded_corpus, Corpus};

const BIN: &str = env!("CARGO_BIN_EXE_leaguestats");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("LEAGUESTATS_DATA").output().expect("run leaguestats")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn copy_corpus(dir: &Path) {
    for (label, text) in EMBEDDED_SEASONS {
        fs::write(dir.join(format!("epl_{}.csv", label.replace('/', "_"))), text).unwrap();
    }
}

#[test]
fn rerank_2009_matches_published_table_bytes() {
    let o = run(&["rerank", "--season", "2009/10", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let want = include_str!("../../core/data/reference/rerank_2009_10.csv");
    assert_eq!(stdout(&o), want);
    assert!(stdout(&o).lines().all(|l| l.split(',').count() == 13));
}

#[test]
fn rerank_csv_reparses() {
    let c = load_embedded_corpus();
    for t in c.seasons() {
        let o = run(&["rerank", "--season", t.season()]);
        let (table, ranks) = RankTable::parse_csv(&stdout(&o), t.season()).unwrap();
        assert_eq!(&table, t);
        assert_eq!(ranks, rerank_all(t));
    }
}

#[test]
fn overlap_table_shape() {
    let o = run(&["overlap", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "season,ratio,player_spend,foreign_spend,profit,expenditure");
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().all(|l| l.split(',').count() == 6));
}

#[test]
fn pair_overlap_rows() {
    let o = run(&["overlap", "--pair", "foreign_spend,profit", "--kde", "min-max"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 9);
    for l in text.lines().skip(1) {
        let pct: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!((0.0..=100.0).contains(&pct));
    }
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let cases: [(&[&str], &str); 6] = [
        (&["pca", "--season", "unknown/yy"], "--season"),
        (&["pca", "--season", "2030/31"], "--season"),
        (&["inequality", "--descriptor", "goals"], "--descriptor"),
        (&["overlap", "--pair", "profit,profit"], "--pair"),
        (&["overlap", "--pair", "profit"], "--pair"),
        (&["rerank", "--format", "svg"], "--season"),
    ];
    for (args, flag) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
    let o = run(&["rerank", "--descriptor", "points"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--descriptor"));
}

#[test]
fn data_errors_exit_1_with_error_name() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let path = dir.path().join("epl_2009_10.csv");
    let original = fs::read_to_string(&path).unwrap();

    let broken = original.replacen("Chelsea,1,86,", "Chelsea,1,lots,", 1);
    fs::write(&path, broken).unwrap();
    let o = run(&["rerank", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("MalformedRow"), "{}", stderr(&o));

    let short: String = original.lines().take(20).map(|l| format!("{l}\n")).collect();
    fs::write(&path, short).unwrap();
    let o = run(&["rerank", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("WrongRowCount"));

    let o = run(&["rerank", "--input", "/nonexistent/leaguestats"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Io"));
}

#[test]
fn partial_season_needs_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let full = EMBEDDED_SEASONS[7].1;
    let partial: String = full
        .lines()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("{}\n", f[..6].join(","))
        })
        .collect();
    fs::write(dir.path().join("epl_2016_17.csv"), &partial).unwrap();
    let d = dir.path().to_str().unwrap();

    let o = run(&["rerank", "--input", d]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("MalformedRow"));

    let o = run(&["rerank", "--input", d, "--allow-partial"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let header = stdout(&o).lines().next().unwrap().to_string();
    assert_eq!(header.split(',').count(), 13);
    let first = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(first.starts_with(",,"), "{first}");

    let o = run(&["pca", "--input", d, "--allow-partial"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("MissingColumn"));

    let o = run(&["rerank", "--input", d, "--allow-partial", "--descriptor", "profit"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("MissingColumn"));
}

#[test]
fn environment_variable_selects_the_corpus() {
    let dir = tempfile::tempdir().unwrap();
    copy_corpus(dir.path());
    let path = dir.path().join("epl_2009_10.csv");
    let text = fs::read_to_string(&path).unwrap().replace("Wigan,16,36,2,2.9,2.9,0.075,3.677", "Wigan,16,36,2,2.9,2.9,0.075,6");
    fs::write(&path, text).unwrap();
    let embedded = run(&["rerank", "--season", "2009/10"]);
    let from_env = Command::new(BIN)
        .args(["rerank", "--season", "2009/10"])
        .env("LEAGUESTATS_DATA", dir.path())
        .output()
        .unwrap();
    assert!(from_env.status.success());
    assert_ne!(stdout(&embedded), stdout(&from_env));
    let out = stdout(&from_env);
    let portsmouth = out.lines().find(|l| l.contains(",Portsmouth,")).unwrap();
    let wigan = out.lines().find(|l| l.contains(",Wigan,")).unwrap();
    assert!(portsmouth.starts_with("1,"), "{portsmouth}");
    assert!(wigan.starts_with("2,"), "{wigan}");
}

#[test]
fn outputs_are_deterministic() {
    let invocations: [&[&str]; 10] = [
        &["rerank", "--format", "json"],
        &["rerank", "--season", "2012/13", "--format", "svg"],
        &["inequality"],
        &["inequality", "--format", "json"],
        &["inequality", "--format", "svg"],
        &["inequality", "--season", "2015/16", "--format", "svg"],
        &["overlap", "--format", "svg"],
        &["correlation", "--format", "json"],
        &["pca", "--format", "json"],
        &["pca", "--season", "2009/10", "--format", "svg"],
    ];
    for args in invocations {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}: {}", stderr(&a));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corr.csv");
    let o = run(&["correlation", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 9);
}

#[test]
fn gini_svg_has_a_vertex_per_season() {
    let o = run(&["inequality", "--descriptor", "ratio", "--format", "svg"]);
    let svg = stdout(&o);
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0].len(), 8);
    assert!(svg.contains(">2009/10<") && svg.contains(">2016/17<"));
}

#[test]
fn reproduce_twice_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = run(&["reproduce", "--out", a.path().to_str().unwrap()]);
    let ob = run(&["reproduce", "--out", b.path().to_str().unwrap()]);
    assert!(oa.status.success());
    assert_eq!(oa.stdout, ob.stdout);
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 21);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn perturbation_fails_only_the_affected_comparison() {
    let base = load_embedded_corpus();
    let text = EMBEDDED_SEASONS[0].1.replace("Wigan,16,36,2,2.9,2.9,0.075,3.677", "Wigan,16,36,2,2.9,2.9,0.075,6");
    let perturbed: Corpus = base.with_season(parse_season_csv(&text, "2009/10").unwrap());

    let da = tempfile::tempdir().unwrap();
    let db = tempfile::tempdir().unwrap();
    let before = reproduce(&base, da.path()).unwrap();
    let after = reproduce(&perturbed, db.path()).unwrap();
    assert_eq!(before.comparisons.len(), after.comparisons.len());
    let changed: Vec<&str> = before
        .comparisons
        .iter()
        .zip(&after.comparisons)
        .filter(|(x, y)| x.status != y.status)
        .map(|(x, _)| x.name.as_str())
        .collect();
    assert_eq!(changed, ["rerank 2009/10"]);
    assert_eq!(after.get("rerank 2009/10").unwrap().status, Status::Fail);
}

#[test]
fn calibration_doc_is_current() {
    let doc = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/calibration.md")).unwrap();
    assert_eq!(doc, leaguestats::calibration::render(&load_embedded_corpus()));
}
