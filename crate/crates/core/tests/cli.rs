//! The command-line surface, driven in-process and through the built binary.

use std::path::PathBuf;
use std::process::Command;

use isoformal::catalog::Report;
use isoformal::cli::{run, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK};

fn cli(args: &[&str]) -> isoformal::cli::Outcome {
    run(std::iter::once("isoformal").chain(args.iter().copied()))
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isoformal"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("isoformal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn wu_type_space_is_formal() {
    let out = cli(&[
        "check",
        "--group",
        "SU(3)",
        "--subgroup",
        "SO(3)",
        "--embedding",
        "real-in-complex",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("formal: yes"));
    assert!(out.stdout.contains("equivariantly formal: yes"));
    assert!(out.stdout.contains("1 + q^5"));
}

#[test]
fn impossible_inclusion_is_an_input_error() {
    let out = cli(&["check", "--group", "SU(3)", "--subgroup", "SO(5)"]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("dimension"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&["check", "--group", "SU(3)"]).code, EXIT_ERROR);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_ERROR);
    assert_eq!(
        cli(&[
            "oracle",
            "--group",
            "SU(3)",
            "--subgroup",
            "T^2",
            "--embedding",
            "maximal-torus",
            "--max-degree",
            "0"
        ])
        .code,
        EXIT_ERROR
    );
    let help = cli(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("catalog"));
    let out = cli(&["check", "--group", "SU(3)", "--subgroup", "SO(3)"]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("embedding"));
}

#[test]
fn missing_fact_is_inconclusive() {
    let out = cli(&["check", "--group", "E7", "--subgroup", "F4"]);
    assert_eq!(out.code, EXIT_INCONCLUSIVE);
    assert!(out.stdout.contains("no-witness-found"));
    let out = cli(&[
        "check",
        "--group",
        "E7",
        "--subgroup",
        "F4",
        "--fact",
        "killing-form",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("degree-reasoning"));
}

#[test]
fn symplectic_diagonal_structured() {
    let out = cli(&[
        "check",
        "--group",
        "Sp(4)",
        "--subgroup",
        "Sp(2)",
        "--embedding",
        "diagonal-double-block",
        "--format",
        "structured",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["formal"], "yes");
    assert_eq!(v["equivariantly_formal"], "yes");
    // (1 + q^11)(1 + q^15)
    let p: Vec<u64> = serde_json::from_value(v["poincare"].clone()).unwrap();
    let mut expected = vec![0u64; 27];
    for d in [0, 11, 15, 26] {
        expected[d] = 1;
    }
    assert_eq!(p, expected);
}

#[test]
fn poincare_and_oracle_commands() {
    let out = cli(&[
        "poincare",
        "--group",
        "Sp(2)",
        "--subgroup",
        "Sp(1)",
        "--embedding",
        "diagonal-double-block",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.lines().any(|l| l == "1 + q^7"), "{}", out.stdout);

    for base in ["torus", "invariant"] {
        let out = cli(&[
            "oracle",
            "--group",
            "SU(3)",
            "--subgroup",
            "T^2",
            "--embedding",
            "maximal-torus",
            "--max-degree",
            "7",
            "--base",
            base,
        ]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert!(
            out.stdout.contains("[1, 0, 2, 0, 2, 0, 1, 0]"),
            "{}",
            out.stdout
        );
        assert!(out.stdout.contains("onto up to degree 7: yes"));
    }
}

#[test]
fn catalog_list_counts_instances() {
    let out = cli(&["catalog", "list", "--max-rank", "3"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("SU(a+b+c)/S(U(a)U(b)U(c))"));
}

#[test]
fn unknown_family_filter_is_an_error() {
    let out = cli(&["catalog", "run", "--family", "no such family"]);
    assert_eq!(out.code, EXIT_ERROR);
}

#[test]
fn catalog_run_passes_and_renders_identically() {
    let out = binary()
        .args(["catalog", "run", "--format", "structured"])
        .env_remove("ISOFORMAL_CATALOG")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(EXIT_OK),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let report = Report::from_json(&text).unwrap();
    assert!(report.all_passed(), "{:?}", report.failures);
    assert_eq!(report.counts.inconclusive, 0);
    assert!(report.counts.instances >= 60);

    let path = scratch("report.json");
    std::fs::write(&path, &text).unwrap();
    let again = binary()
        .args(["catalog", "render", "--input", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(again.status.code(), Some(EXIT_OK));
    assert_eq!(again.stdout, text.as_bytes());

    let table = binary()
        .args([
            "catalog",
            "render",
            "--input",
            path.to_str().unwrap(),
            "--format",
            "table",
        ])
        .output()
        .unwrap();
    let table = String::from_utf8(table.stdout).unwrap();
    assert!(table.contains("not a proof for all parameters"));
    assert!(table.lines().filter(|l| l.starts_with("ok ")).count() == report.counts.instances);
}

#[test]
fn catalog_file_from_environment() {
    let path = scratch("tiny.toml");
    std::fs::write(
        &path,
        r#"
[[family]]
label = "SU(n)/SO(n)"
list = "symmetric"
params = ["n"]
constraints = ["n >= 2", "n <= 3"]
group = "SU({n})"
subgroup = "SO({n})"
recipe = "real-in-complex"
reduction = "direct"
expected_routes = ["vanishing-redundant-images", "equal-rank"]
"#,
    )
    .unwrap();
    let out = binary()
        .args(["catalog", "run"])
        .env("ISOFORMAL_CATALOG", &path)
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK), "{stdout}");
    assert!(stdout.contains("2 instances: 2 passed"), "{stdout}");

    std::fs::write(&path, "[[family]]\nlabel = \"x\"\nbogus = 1\n").unwrap();
    let out = binary()
        .args(["catalog", "run"])
        .env("ISOFORMAL_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
}

#[test]
fn binary_exit_codes() {
    let ok = binary()
        .args([
            "check",
            "--group",
            "SU(3)",
            "--subgroup",
            "SO(3)",
            "--embedding",
            "real-in-complex",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = binary()
        .args(["check", "--group", "SU(3)", "--subgroup", "SO(5)"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("dimension"));
}
