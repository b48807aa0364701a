use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoembed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        &["game", "--format", "json"][..],
        &["report-eq1-4", "--format", "json"],
        &[
            "joint",
            "--point",
            "0.4,0.1,0.1,0.4",
            "--counts",
            "4,1,1,4",
            "--format",
            "json",
        ],
        &[
            "tree-opt", "--rho", "0.5", "--grid", "101", "--format", "json",
        ],
    ] {
        let text = stdout(args);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(text, again, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["table1", "--case", "ind", "--format", "csv"];
    assert_eq!(stdout(&args), stdout(&args));
    let args = ["gaussian-check", "--sets", "3", "--seed", "9"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn sweep_csv_has_nine_rows() {
    let text = stdout(&["tree-opt", "--sweep", "--format", "csv", "--grid", "101"]);
    let rows = text.lines().filter(|l| l.starts_with("tree-opt,")).count();
    assert_eq!(rows, 9);
    let best = text.lines().find(|l| l.starts_with("best,")).unwrap();
    assert_eq!(best, "best,-1.000000,3.000000");
}

#[test]
fn report_rows() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["report-eq1-4", "--format", "json"])).unwrap();
    let rows = v["report"].as_array().unwrap();
    let row = |q: &str| rows.iter().find(|r| r["quantity"] == q).unwrap().clone();
    assert_eq!(row("dim(F)")["P"], 1);
    assert_eq!(row("dim(F)")["G"], 3);
    assert_eq!(row("|grad E|")["G"], "diverging");
    assert_eq!(row("|grad E|")["P"], 0.0);
    assert_eq!(row("d")["P"], 1);
    assert_eq!(row("d")["G"], 3);
}

#[test]
fn precision_controls_decimals() {
    let text = stdout(&[
        "tree-opt",
        "--rho",
        "1",
        "--precision",
        "2",
        "--format",
        "csv",
    ]);
    assert!(
        text.lines().nth(1).unwrap().starts_with("tree-opt,1.00,"),
        "{text}"
    );
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["tree-opt", "--rho", "1.5"][..],
        &["tree-opt", "--rho", "0.5", "--grid", "5"],
        &["joint", "--point", "0.5,0.5,0.5,0.5"],
        &["joint", "--point", "0.5,0.5"],
        &["game", "--cx", "1,2,3"],
        &["table1", "--case", "sideways"],
        &["nonsense"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}
