use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn anosov(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anosov")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("golden.txt"), "# golden ratio\n2\n2 1\n1 1\n").unwrap();
    fs::write(dir.path().join("unipotent.txt"), "gen A\n2\n1 1\n0 1\n").unwrap();
    fs::write(dir.path().join("cyclic.txt"), "gen A\n2\n4 0\n0 0.25\n").unwrap();
    dir
}

#[test]
fn cartan_golden_ratio() {
    let dir = setup();
    let o = anosov(&["cartan", "golden.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0.962424 -0.962424");
    let o = anosov(&["--precision", "9", "cartan", "golden.txt", "--pivots", "1"], dir.path());
    assert_eq!(stdout(&o), "0.962423650 -0.962423650\ngaps 1.924847300\n");
}

#[test]
fn weyl_thickenings_of_full_face_in_dimension_three() {
    let dir = setup();
    let o = anosov(&["weyl", "thickenings", "--d", "3", "--pivots", "1,2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("count = 1\n"), "{out}");
    assert!(out.contains("123|213|132"));
}

#[test]
fn certify_exit_codes() {
    let dir = setup();
    let o = anosov(&["certify", "--rep", "unipotent.txt", "--pivots", "1", "--radius", "30"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("pass=false") && out.contains("slope="), "{out}");
    let o = anosov(&["certify", "--rep", "cyclic.txt", "--pivots", "1", "--radius", "30", "--out-dir", "cert"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("slope=2.772589"));
    let report = fs::read_to_string(dir.path().join("cert/certificate.txt")).unwrap();
    assert!(report.starts_with("# anosov "));
    assert!(report.contains("# config: ") && report.contains("radius: 30"));
    let gaps = fs::read_to_string(dir.path().join("cert/gaps.csv")).unwrap();
    assert!(gaps.contains("length,words,min_gap,min_norm,argmin\n1,2,2.772589"));
}

#[test]
fn usage_errors_exit_one_with_a_single_line() {
    let dir = setup();
    let o = anosov(&["certify", "--rep", "unipotent.txt", "--pivots", "1", "--radius", "x"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    assert!(err.contains("--radius"));
    let o = anosov(&["certify", "--rep", "missing.txt", "--pivots", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--rep"));
    let o = anosov(&["--tol", "rank_tol=-1", "cartan", "golden.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--tol"));
    let o = anosov(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn schottky_search_then_limit_set() {
    let dir = setup();
    let o = anosov(&["schottky", "search", "--eigenvalues", "4,0.25", "--radius", "8", "--out-dir", "s"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("power=1\n"));
    let o = anosov(&["limitset", "--rep", "s/rep.txt", "--pivots", "1", "--word-length", "3", "--svg", "--out-dir", "l"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("certified=true"));
    let csv = fs::read_to_string(dir.path().join("l/limitset.csv")).unwrap();
    assert!(csv.lines().nth(2).unwrap().starts_with("index,word,f11,f21,f12,f22"));
    let svg = fs::read_to_string(dir.path().join("l/limitset.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.contains("<circle"));
}

#[test]
fn weak_pair_hits_the_cap() {
    let dir = setup();
    let o = anosov(&["schottky", "search", "--eigenvalues", "1.01,0.9900990099009901", "--cap", "3", "--samples", "64"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("found=false"));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = setup();
    fs::write(dir.path().join("rep.txt"), "gen A\n2\n4 0\n0 0.25\n\ngen B\n2\n2.125 1.875\n1.875 2.125\n").unwrap();
    let args = |threads: &'static str, out: &'static str| {
        vec!["--threads", threads, "domain", "--rep", "rep.txt", "--thickening", "0", "--pivots", "1", "--samples", "300", "--out-dir", out]
    };
    for (t, out) in [("1", "a"), ("4", "b"), ("4", "c")] {
        let o = anosov(&args(t, out), dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let read = |d: &str| fs::read(dir.path().join(d).join("domain.csv")).unwrap();
    let (a, b, c) = (read("a"), read("b"), read("c"));
    // Headers differ only in the output directory.
    let strip = |v: &[u8]| {
        let s = String::from_utf8_lossy(v).into_owned();
        ["a", "b", "c"].iter().fold(s, |s, d| s.replace(&format!("out_dir: Some(\"{d}\")"), ""))
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&b), strip(&c));
    let text = String::from_utf8_lossy(&a).into_owned();
    assert!(text.contains("index,f11,f21,f12,f22,class,witness,margin"));
}

#[test]
fn domain_with_a_thickening_file_and_census() {
    let dir = setup();
    fs::write(dir.path().join("th.txt"), "# identity only\n12\n").unwrap();
    let o = anosov(
        &["domain", "--rep", "cyclic.txt", "--thickening", "th.txt", "--pivots", "1", "--samples", "50", "--radius", "0", "--word-length", "1", "--census", "4", "--census-tol", "1e-9"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("limit_points=2") && out.contains("out=50"), "{out}");
    assert!(out.contains("census_counts=1,0,0,0,0"));
    let o = anosov(&["domain", "--rep", "cyclic.txt", "--thickening", "7", "--pivots", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--thickening"));
}
