use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["partviz"];
    argv.extend_from_slice(args);
    let status = partviz_cli::run(argv, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn print_fixture() {
    let (status, out, _) = run(&["print", "--tree", &fixture("rpart_liking_rrvfood.json")]);
    assert_eq!(status, 0);
    assert_eq!(
        out,
        std::fs::read_to_string(fixture("rpart_liking_rrvfood.txt")).unwrap()
    );
}

#[test]
fn render_fixture_writes_three_subplots() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    let (status, _, err) = run(&[
        "render",
        "--tree",
        &fixture("rpart_liking_rrvfood.json"),
        "--data",
        &fixture("rpart_liking_rrvfood.csv"),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(status, 0, "{err}");
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let subplots = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("subplot"))
        .count();
    assert_eq!(subplots, 3);
}

#[test]
fn fit_then_render_equals_fused_render() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.json");
    let data = fixture("synth_continuous.csv");
    let formula = "y ~ x1 + x2 + x3";
    let (status, _, err) = run(&[
        "fit",
        "--data",
        &data,
        "--formula",
        formula,
        "--out",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(status, 0, "{err}");
    let (s1, staged, _) = run(&[
        "render",
        "--tree",
        tree.to_str().unwrap(),
        "--data",
        &data,
        "--add-p-axis",
    ]);
    let (s2, fused, _) = run(&[
        "render",
        "--data",
        &data,
        "--formula",
        formula,
        "--add-p-axis",
    ]);
    assert_eq!((s1, s2), (0, 0));
    assert_eq!(staged, fused);
}

#[test]
fn categorical_fit_then_render_matches() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.json");
    let data = fixture("synth_categorical.csv");
    let formula = "class ~ x1 + x2";
    let (status, _, err) = run(&[
        "fit",
        "--data",
        &data,
        "--formula",
        formula,
        "--categorical",
        "--out",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(status, 0, "{err}");
    let (s1, staged, e1) = run(&[
        "render",
        "--tree",
        tree.to_str().unwrap(),
        "--data",
        &data,
        "--interval",
    ]);
    let (s2, fused, _) = run(&[
        "render",
        "--data",
        &data,
        "--formula",
        formula,
        "--categorical",
        "--interval",
    ]);
    assert_eq!((s1, s2), (0, 0), "{e1}");
    assert_eq!(staged, fused);
    let (s3, _, e3) = run(&["render", "--tree", tree.to_str().unwrap(), "--data", &data]);
    assert_eq!(s3, 2);
    assert!(e3.contains("interval mode"), "{e3}");
}

#[test]
fn cut_discretises_the_outcome() {
    let (status, out, err) = run(&[
        "print",
        "--data",
        &fixture("rpart_liking_rrvfood.csv"),
        "--formula",
        "kcal24h0 ~ liking + rrvfood",
        "--cut",
        "0.25,0.5,0.75",
    ]);
    assert_eq!(status, 0, "{err}");
    assert!(out.contains("(n = "), "{out}");
    assert!(out.contains('%'), "{out}");
}

#[test]
fn usage_errors_exit_one() {
    let (status, _, err) = run(&[
        "render",
        "--tree",
        &fixture("rpart_liking_rrvfood.json"),
        "--data",
        &fixture("rpart_liking_rrvfood.csv"),
        "--color-type",
        "9",
    ]);
    assert_eq!(status, 1);
    assert!(err.contains("--color-type"), "{err}");

    let (status, _, err) = run(&["fit", "--data", "x.csv", "--formula", "y ~ x + x"]);
    assert_eq!(status, 1);
    assert!(err.contains("--formula"), "{err}");

    let (status, _, err) = run(&[
        "fit",
        "--data",
        "x.csv",
        "--formula",
        "y ~ x",
        "--alpha",
        "0.1",
        "--mincriterion",
        "0.9",
    ]);
    assert_eq!(status, 1);
    assert!(
        err.contains("--mincriterion") || err.contains("--alpha"),
        "{err}"
    );

    let (status, _, _) = run(&["bogus"]);
    assert_eq!(status, 1);
}

#[test]
fn data_errors_exit_two() {
    let (status, _, err) = run(&[
        "fit",
        "--data",
        "/nonexistent/file.csv",
        "--formula",
        "y ~ x",
    ]);
    assert_eq!(status, 2);
    assert!(err.contains("--data"), "{err}");

    let (status, _, err) = run(&[
        "render",
        "--tree",
        &fixture("eleven_terminal.json"),
        "--data",
        &fixture("synth_continuous.csv"),
    ]);
    assert_eq!(status, 2);
    assert!(err.contains("at most 10"), "{err}");

    let (status, _, err) = run(&[
        "fit",
        "--data",
        &fixture("synth_continuous.csv"),
        "--formula",
        "y ~ nope",
    ]);
    assert_eq!(status, 2);
    assert!(err.contains("nope"), "{err}");
}

#[test]
fn help_lists_every_flag() {
    let (status, out, _) = run(&["render", "--help"]);
    assert_eq!(status, 0);
    for flag in [
        "--alpha",
        "--mincriterion",
        "--minbucket",
        "--minsplit",
        "--maxdepth",
        "--color-type",
        "--bar-alpha",
        "--text-title",
        "--text-axis",
        "--text-main",
        "--text-label",
        "--text-bar",
        "--text-percentile",
        "--text-round",
        "--interval",
        "--density-line",
        "--no-density-line",
        "--add-h-axis",
        "--add-p-axis",
        "--data",
        "--tree",
        "--formula",
        "--out",
    ] {
        assert!(out.contains(flag), "missing {flag}");
    }
}

#[test]
fn binary_runs() {
    let output = Command::new(env!("CARGO_BIN_EXE_partviz"))
        .args(["print", "--tree", &fixture("rpart_liking_rrvfood.json")])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("Number of terminal nodes: 3"));
    let output = Command::new(env!("CARGO_BIN_EXE_partviz"))
        .args(["render", "--color-type", "0"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}
