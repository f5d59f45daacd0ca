use std::process::Command;

use clap::Parser;
use supsim_cli::{Cli, Format, Outcome, Row};

#[test]
fn csv_and_json_rows() {
    let o = Outcome::new(
        "demo",
        &serde_json::json!({"reps": 3}),
        0.5,
        1.0,
        vec![Row::info("a", "x", 0.25), Row::below("b", "y", 2.0, 1.0)],
    );
    assert!(!o.pass());
    let csv = o.rows_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "point,statistic,value,threshold,pass");
    assert_eq!(lines[1], "a,x,2.5000000000000000e-1,,");
    assert_eq!(lines[2], "b,y,2.0000000000000000e0,1.0000000000000000e0,false");
    let rows: serde_json::Value = serde_json::from_str(&o.rows_json()).unwrap();
    assert_eq!(rows[1]["pass"], false);
    let summary: serde_json::Value = serde_json::from_str(&o.summary_json()).unwrap();
    assert_eq!(summary["parameters"]["reps"], 3);
}

#[test]
fn global_flags_and_default_out() {
    let cli = Cli::try_parse_from(["supsim", "chain-stats", "--seed", "9", "--format", "json"]).unwrap();
    assert_eq!(cli.seed, 9);
    assert_eq!(cli.format, Format::Json);
    assert_eq!(cli.out_dir(), std::path::PathBuf::from("out/chain-stats"));
}

#[test]
fn partial_triple_is_config_error() {
    let cli = Cli::try_parse_from(["supsim", "shift-identity", "--b", "1"]).unwrap();
    assert!(cli.command.run(cli.seed).is_err());
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("supsim-cli-{}", std::process::id()));
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_supsim"))
            .args(args)
            .arg("--out")
            .arg(&dir)
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(run(&["shift-identity"]), Some(0));
    assert_eq!(run(&["frechet-check", "--alpha=-1"]), Some(2));
    assert_eq!(run(&["eta-sample", "--reps", "1"]), Some(2));
    // too few replicates to meet the KS tolerance
    assert_eq!(run(&["frechet-check", "--reps", "20"]), Some(1));
    assert!(dir.join("summary.json").exists());
    let _ = std::fs::remove_dir_all(&dir);
}
