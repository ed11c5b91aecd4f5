//! Black-box tests of the command-line surface: outputs, formats, exit
//! codes, determinism, and golden-directory overrides.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hauteur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hauteur"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scenario_path(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("scenarios");
    p.push(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn krasner_counts() {
    let out = hauteur(&["krasner", "-p", "5", "-F", "1", "-d", "10"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1818");

    let out = hauteur(&[
        "krasner",
        "-p",
        "5",
        "-F",
        "1",
        "-d",
        "5",
        "--totally-ramified",
    ]);
    assert_eq!(stdout(&out).trim(), "105");

    let out = hauteur(&["krasner", "-p", "7", "-F", "1", "-d", "1"]);
    assert_eq!(stdout(&out).trim(), "1");

    let out = hauteur(&["krasner", "-p", "5", "-F", "2", "-d", "5"]);
    assert_eq!(stdout(&out).trim(), "606");
}

#[test]
fn krasner_profile_table() {
    let out = hauteur(&["krasner", "-p", "11", "--profiles", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "e\tf\tcount");
    // Tame: every profile (e, f) carries exactly e extensions.
    for line in lines {
        let parts: Vec<u64> = line.split('\t').map(|v| v.parse().unwrap()).collect();
        assert_eq!(parts[2], parts[0], "{line}");
    }
}

#[test]
fn krasner_rejects_bad_input() {
    assert_eq!(
        hauteur(&["krasner", "-p", "6", "-d", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hauteur(&["krasner", "-p", "5", "-d", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(hauteur(&["krasner", "-p", "5"]).status.code(), Some(2));
    // clap-level usage errors also exit 2
    assert_eq!(hauteur(&["krasner"]).status.code(), Some(2));
}

#[test]
fn bound_reports() {
    let out = hauteur(&["bound", &scenario_path("ex3_3.scenario")]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("f_bound = \"2^12 * 5^5\""), "{text}");
    assert!(text.contains("lambda = 3"));
    assert!(text.contains("beta = \"27/20\""));

    let out = hauteur(&["bound", &scenario_path("ex3_2.scenario")]);
    let text = stdout(&out);
    // ln(ln 2 / 18) = -3.25688467847783
    assert!(
        text.contains("ln_height_bound = \"-3.25688467847783\""),
        "{text}"
    );
}

#[test]
fn bound_is_deterministic() {
    let a = hauteur(&["bound", &scenario_path("ex3_4.scenario")]);
    let b = hauteur(&["bound", &scenario_path("ex3_4.scenario")]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bound_rejects_invalid_scenarios() {
    // Missing file.
    assert_eq!(
        hauteur(&["bound", "/nonexistent.scenario"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    // No towers.
    let no_towers = dir.path().join("empty.scenario");
    std::fs::write(
        &no_towers,
        "p = 5\nM = 1\n\n[base]\ndeg_K = 1\nlocal_deg = 1\ne_p = 1\nf_p = 1\nclass_order = 1\n",
    )
    .unwrap();
    assert_eq!(
        hauteur(&["bound", no_towers.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    // Unknown keys are rejected.
    let unknown = dir.path().join("unknown.scenario");
    let mut text = std::fs::read_to_string(scenario_path("ex3_1.scenario")).unwrap();
    text.push_str("\nsurprise = true\n");
    std::fs::write(&unknown, text).unwrap();
    assert_eq!(
        hauteur(&["bound", unknown.to_str().unwrap()]).status.code(),
        Some(2)
    );

    // Ramification index must divide the degree.
    let bad_tower = dir.path().join("bad_tower.scenario");
    let text = std::fs::read_to_string(scenario_path("ex3_1.scenario"))
        .unwrap()
        .replace("d = 2\ne = 2\ncount = 2", "d = 2\ne = 3\ncount = 2");
    std::fs::write(&bad_tower, text).unwrap();
    assert_eq!(
        hauteur(&["bound", bad_tower.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn height_values() {
    let out = hauteur(&["height", "x^2 - x - 1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.240606");

    let out = hauteur(&["height", "x - 1"]);
    assert_eq!(stdout(&out).trim(), "0");

    let out = hauteur(&["height", "x - 2", "--bits", "64"]);
    assert_eq!(stdout(&out).trim(), "0.693147");

    // Reducible inputs are screened out.
    assert_eq!(hauteur(&["height", "x^2 - 1"]).status.code(), Some(2));
    assert_eq!(hauteur(&["height", ""]).status.code(), Some(2));
}

#[test]
fn height_respects_precision_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_hauteur"))
        .args(["height", "x^2 - x - 1"])
        .env("HAUTEUR_PRECISION_BITS", "192")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0.240606");

    let out = Command::new(env!("CARGO_BIN_EXE_hauteur"))
        .args(["height", "x^2 - x - 1"])
        .env("HAUTEUR_PRECISION_BITS", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_values() {
    let out = hauteur(&["density", "-p", "3", "-n", "2", "--inert"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3/8");

    let out = hauteur(&["density", "-p", "3", "-n", "3", "--totally-ramified"]);
    assert_eq!(stdout(&out).trim(), "1/10");

    assert_eq!(
        hauteur(&["density", "-p", "2", "-n", "2", "--inert"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hauteur(&["density", "-p", "3", "-n", "5", "--totally-ramified"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hauteur(&["density", "-p", "3", "-n", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn reproduce_single_row() {
    let out = hauteur(&["reproduce", "--only", "ex3_4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS ex3_4"), "{text}");
    assert!(text.contains("1/1 passed"), "{text}");

    assert_eq!(
        hauteur(&["reproduce", "--only", "nonsense"]).status.code(),
        Some(2)
    );
}

#[test]
fn reproduce_row_order_is_fixed() {
    let out = hauteur(&["reproduce"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("PASS ").or_else(|| l.strip_prefix("FAIL ")))
        .collect();
    assert_eq!(
        rows,
        vec![
            "ex3_1",
            "ex3_2",
            "ex3_3",
            "ex3_4",
            "appendix_q11",
            "appendix_q5",
            "krasner_values",
            "density_values"
        ]
    );
}

#[test]
fn reproduce_detects_corrupted_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("ex3_3.toml");
    std::fs::write(
        &golden,
        "e_bound = \"2^2 * 5\"\nf_bound = \"2^12 * 5^5\"\nf_value = \"12800001\"\n\
         k = 3\nlambda = 3\nbeta = \"27/20\"\nln_lo = -1.41e7\nln_hi = -1.40e7\n",
    )
    .unwrap();
    let out = hauteur(&[
        "reproduce",
        "--only",
        "ex3_3",
        "--golden-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL ex3_3"), "{text}");
    assert!(text.contains("expected 12800001, got 12800000"), "{text}");

    // A golden that does not even parse also fails with a message.
    std::fs::write(&golden, "complete nonsense [[").unwrap();
    let out = hauteur(&[
        "reproduce",
        "--only",
        "ex3_3",
        "--golden-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("does not parse"));
}

#[test]
fn reproduce_accepts_intact_golden_dir() {
    // Copying the shipped goldens into a directory reproduces the built-in
    // behaviour for a passing row.
    let dir = tempfile::tempdir().unwrap();
    let shipped = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("goldens");
    for name in ["ex3_1", "ex3_2"] {
        std::fs::copy(
            shipped.join(format!("{name}.toml")),
            dir.path().join(format!("{name}.toml")),
        )
        .unwrap();
    }
    let out = hauteur(&[
        "reproduce",
        "--only",
        "ex3_1",
        "--golden-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
}
