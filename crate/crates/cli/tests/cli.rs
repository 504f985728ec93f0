use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cone_quantile::polyhedra::poly_equal;
use cone_quantile_cli::document::RegionDocument;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cquant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cquant")).args(args).output().expect("spawn cquant")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn uniquantile_prints_quantile() {
    let out = cquant(&["uniquantile", path(&fixture("one_to_five.csv")), "--p", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("q=3\n"));

    let out = cquant(&["uniquantile", path(&fixture("one_to_five.csv")), "--p", "1/2", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("q=3 (LP verified)\n"));
}

#[test]
fn integral_np_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_temp(&dir, "four.csv", "1\n2\n3\n4\n");
    let out = cquant(&["uniquantile", path(&data), "--p", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("N*p = 2 is an integer"));

    let out = cquant(&["tukey", path(&fixture("square.csv")), "--p", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nudge_records_adjusted_p() {
    let out = cquant(&["tukey", path(&fixture("square.csv")), "--p", "1/2", "--nudge"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = RegionDocument::from_json(&stdout(&out)).unwrap();
    assert_eq!(doc.input.p, "1/2");
    assert_eq!(doc.input.p_adjusted.as_deref(), Some("7/16"));
    assert_eq!(doc.input.ceil_np, 2);
}

#[test]
fn parse_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_temp(&dir, "bad.csv", "1,2\n3,x\n");
    let out = cquant(&["tukey", path(&data), "--p", "1/3"]);
    assert_eq!(out.status.code(), Some(1));

    let out = cquant(&["tukey", path(&fixture("square.csv")), "--p", "abc"]);
    assert_eq!(out.status.code(), Some(1));

    let out = cquant(&["tukey", path(&dir.path().join("missing.csv")), "--p", "1/3"]);
    assert_eq!(out.status.code(), Some(1));

    let out = cquant(&["depth", path(&fixture("square.csv")), "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_cones_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let line = write_temp(&dir, "line.cone", "1,0\n-1,0\n0,1\n");
    let out = cquant(&["region", path(&fixture("square.csv")), "--p", "3/10", "--cone", path(&line)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("free of lines"));

    let flat = write_temp(&dir, "flat.cone", "1,1\n2,2\n");
    let out = cquant(&["region", path(&fixture("square.csv")), "--p", "3/10", "--cone", path(&flat)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nonempty interior"));

    let outside = write_temp(&dir, "outside.cone", "1,0\n0,1\ninterior: 1,0\n");
    let out = cquant(&["region", path(&fixture("square.csv")), "--p", "3/10", "--cone", path(&outside)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn depth_of_square_points() {
    let sq = fixture("square.csv");
    assert_eq!(stdout(&cquant(&["depth", path(&sq), "1/2,1/2"])), "2\n");
    assert_eq!(stdout(&cquant(&["depth", path(&sq), "0,0"])), "1\n");
    assert_eq!(stdout(&cquant(&["depth", path(&sq), "5,5"])), "0\n");
}

#[test]
fn verify_reports_oracles() {
    let out = cquant(&["verify", path(&fixture("square.csv")), "--p", "3/10", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("2-D exact oracle: regions equal"));
    assert!(text.contains("membership sampling"));

    let out = cquant(&[
        "verify",
        path(&fixture("two_point.csv")),
        "--p",
        "3/4",
        "--cone",
        path(&fixture("orthant.cone")),
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn out_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = cquant(&[
        "tukey",
        path(&fixture("square.csv")),
        "--p",
        "1/5",
        "--out",
        path(&json),
        "--plot",
        path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let doc = RegionDocument::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(doc.bounded && !doc.empty);
    let plot = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = plot.lines().skip(1).collect();
    assert_eq!(plot.lines().next(), Some("x,y"));
    assert!(lines.len() >= 4);
    assert_eq!(lines.first(), lines.last());
}

#[test]
fn documents_round_trip_and_are_deterministic() {
    let sq = fixture("square.csv");
    let args = ["tukey", path(&sq), "--p", "1/5"];
    let a = stdout(&cquant(&args));
    let b = stdout(&cquant(&args));
    assert_eq!(a, b);
    let doc = RegionDocument::from_json(&a).unwrap();
    assert_eq!(doc.to_json(), a);
    assert!(poly_equal(&doc.halfspace_polyhedron().unwrap(), &doc.generator_polyhedron().unwrap()));
}

#[test]
fn golden_documents() {
    let cases: [(&[&str], &str); 5] = [
        (&["tukey", "square.csv", "--p", "3/10"], "square_p3_10.json"),
        (&["tukey", "triangle.csv", "--p", "2/5"], "triangle_p2_5.json"),
        (&["region", "two_point.csv", "--p", "3/4", "--cone", "orthant.cone"], "two_point_p3_4.json"),
        (&["region", "two_point.csv", "--p", "1/4", "--cone", "orthant.cone"], "two_point_p1_4.json"),
        (&["region", "one_to_five.csv", "--p", "1/2", "--cone", "ray.cone"], "one_to_five_p1_2.json"),
    ];
    for (args, golden) in cases {
        let resolved: Vec<String> = args
            .iter()
            .map(|a| if a.contains('.') { fixture(a).to_str().unwrap().to_owned() } else { a.to_string() })
            .collect();
        let refs: Vec<&str> = resolved.iter().map(String::as_str).collect();
        let out = cquant(&refs);
        assert_eq!(out.status.code(), Some(0));
        let expected = std::fs::read_to_string(fixture(golden)).unwrap();
        assert_eq!(stdout(&out), expected, "{golden}");
    }
}
