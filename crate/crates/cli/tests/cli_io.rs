//! CLI behavior: exit codes, config files, flag precedence, output
//! files, and the embedding-invariance of padded sweeps.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schatten-gauss"))
}

fn tmp_path(name: &str) -> std::path::PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("schatten-gauss-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn successful_run_exits_zero_with_csv_on_stdout() {
    let out = bin()
        .args(["counterexample", "--p", "2", "--ns", "1,4", "--samples", "2000", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,q,schatten_q_norm,rho_p_upper"));
    // n = 4 row carries the closed-form 0.5 / 0.25 columns.
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[0], "4");
    assert_eq!(row[2], "0.5");
    assert_eq!(row[3], "0.25");
}

#[test]
fn config_errors_exit_three() {
    // Decreasing sweep.
    let out = bin()
        .args(["counterexample", "--ns", "10,4", "--samples", "2000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("increasing"));

    // Exponent below 1.
    let out = bin()
        .args(["bounds", "--p", "0.5", "--ns", "1,2", "--samples", "2000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // Sample budget below the floor.
    let out = bin()
        .args(["counterexample", "--ns", "1,2", "--samples", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mc_samples"));

    // Unreadable config file.
    let out = bin()
        .args(["counterexample", "--config", "/nonexistent/path.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // Malformed config reports the line.
    let path = tmp_path("bad.json");
    fs::write(&path, "{\n  \"experiment\": \"counterexample\",\n  broken\n}").unwrap();
    let out = bin()
        .args(["counterexample", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    fs::remove_file(&path).ok();
}

#[test]
fn config_file_drives_run_and_flags_override() {
    let path = tmp_path("cfg.json");
    fs::write(
        &path,
        r#"{"experiment": "counterexample", "p": 2, "ns": [1, 4], "mc_samples": 2000, "seed": 5}"#,
    )
    .unwrap();

    let from_config = bin()
        .args(["counterexample", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(from_config.status.code(), Some(0));

    // Explicit flag overrides the file's ns.
    let overridden = bin()
        .args(["counterexample", "--config", path.to_str().unwrap(), "--ns", "1,4,9"])
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(0));
    let base_lines = from_config.stdout.iter().filter(|&&b| b == b'\n').count();
    let over_lines = overridden.stdout.iter().filter(|&&b| b == b'\n').count();
    assert_eq!(base_lines + 1, over_lines);

    // Subcommand mismatch is a config error.
    let mismatch = bin()
        .args(["bounds", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(mismatch.status.code(), Some(3));
    fs::remove_file(&path).ok();
}

#[test]
fn output_flag_writes_file_instead_of_stdout() {
    let path = tmp_path("table.csv");
    let out = bin()
        .args([
            "bounds",
            "--p",
            "2",
            "--ns",
            "1,4",
            "--samples",
            "2000",
            "--output",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,q,upper_bound"));
    fs::remove_file(&path).ok();
}

#[test]
fn dim_pad_leaves_exact_columns_unchanged() {
    let run = |pad: &str| {
        let out = bin()
            .args([
                "bounds", "--p", "2", "--ns", "2,8", "--samples", "2000", "--dim-pad", pad,
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    // All bounds columns are exact, so padding must not move any of them.
    assert_eq!(run("0"), run("13"));
}

#[test]
fn infinite_p_counterexample_notes_nonvanishing_trace_norm() {
    let out = bin()
        .args(["counterexample", "--p", "inf", "--ns", "2,8", "--samples", "2000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("does not vanish"));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for line in stdout.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], "1"); // q
        assert_eq!(cells[2], "1"); // trace norm
    }
}

#[test]
fn json_format_emits_single_table_object() {
    let out = bin()
        .args([
            "radial-growth",
            "--p",
            "4",
            "--dims",
            "16,32,64,128",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["experiment"], "radial-growth");
    assert_eq!(value["columns"][0], "d");
    assert_eq!(value["rows"].as_array().unwrap().len(), 4);
    assert_eq!(value["meta"]["p"], "4");
}
