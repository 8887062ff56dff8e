mod common;

use std::fs;
use std::process::Command;

use common::{case, cases, crates_dir, golden_path, run};
use convalg_cli::report::Report;

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for c in cases() {
        let (code, text) = run(&c.args);
        assert_eq!(code, c.exit, "{}: {text}", c.name);
        let path = golden_path(c.name);
        if update {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("{}: no golden file", c.name));
        assert_eq!(text, expected, "{} differs from its golden file", c.name);
    }
}

#[test]
fn reruns_are_byte_identical() {
    for c in cases() {
        assert_eq!(run(&c.args), run(&c.args), "{}", c.name);
    }
}

#[test]
fn reports_round_trip_through_the_parser() {
    for c in cases().into_iter().filter(|c| c.exit <= 1) {
        let (_, text) = run(&c.args);
        let report = Report::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", c.name));
        assert_eq!(report.to_json(), text, "{}", c.name);
        assert_eq!(report.pass, c.exit == 0);
        assert_eq!(report.pass, report.checks.iter().all(|k| k.pass));
        assert_eq!(report.command, c.args);
    }
}

#[test]
fn out_flag_writes_the_same_report() {
    let c = &cases()[0];
    let path = std::env::temp_dir().join(format!("convalg-golden-{}.json", std::process::id()));
    let mut args = c.args.clone();
    args.extend(["--out".to_string(), path.to_string_lossy().into_owned()]);
    let out = Command::new(env!("CARGO_BIN_EXE_convalg"))
        .args(&args)
        .current_dir(crates_dir())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(&path).unwrap();
    fs::remove_file(&path).unwrap();
    assert_eq!(written, run(&c.args).1);
}

#[test]
fn seed_changes_sampled_reports_only_through_the_seed() {
    let base = ["conv", "--graph", "@g/two_loops.graph", "compare", "--count", "50"];
    let a = run(&case("a", 0, &[&base[..], &["--seed", "1"]].concat()).args).1;
    let b = run(&case("b", 0, &[&base[..], &["--seed", "2"]].concat()).args).1;
    let (ra, rb) = (Report::parse(&a).unwrap(), Report::parse(&b).unwrap());
    assert_eq!(ra.seed, Some(1));
    assert_eq!(rb.seed, Some(2));
    assert_ne!(ra.inputs_digest, rb.inputs_digest);
    assert_eq!(ra.results, rb.results);
}
