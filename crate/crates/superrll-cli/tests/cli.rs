use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use superrll::relations::read_dump;
use superrll::{Summary, VerificationReport};

fn superrll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superrll"))
        .args(args)
        .env_remove("SUPERRLL_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Vec<VerificationReport>, Summary) {
    let out = superrll(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let summary: Summary = serde_json::from_str(lines.pop().expect("summary line")).unwrap();
    let reports = lines.iter().map(|l| serde_json::from_str(l).unwrap()).collect();
    (out.status.code().unwrap(), reports, summary)
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn ybe_passes_with_64_entries() {
    let (code, reports, summary) = json(&["ybe", "--report", "json"]);
    assert_eq!(code, 0);
    assert_eq!(summary.exit_code, 0);
    let m = reports.iter().find(|r| r.check_id == "ybe.matrix").unwrap();
    assert!(m.passed());
    assert_eq!(m.tally.checked(), 64);
}

#[test]
fn invalid_subcommand_is_usage_error() {
    let out = superrll(&["ybee"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage:"));
    assert_eq!(superrll(&["ybe", "--window", "-1"]).status.code(), Some(2));
}

#[test]
fn flipped_r_entry_fails_ybe() {
    let (code, reports, _) = json(&["ybe", "--report", "json", "--mutate-r", "3,3"]);
    assert_eq!(code, 1);
    assert!(reports.iter().any(|r| r.check_id == "ybe.matrix" && !r.passed()));
}

#[test]
fn resource_cap_aborts_with_3() {
    assert_eq!(superrll(&["rll", "--max-dim", "10"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_superrll"))
        .args(["rll"])
        .env("SUPERRLL_MAX_DIM", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(superrll(&["transfer", "--chain-length", "9"]).status.code(), Some(3));
}

#[test]
fn json_is_deterministic_modulo_timing() {
    let args = ["rll", "--truncation", "1", "--report", "json", "--jobs", "3"];
    let (_, a, _) = json(&args);
    let (_, b, _) = json(&args);
    let strip = |v: &[VerificationReport]| v.iter().map(|r| r.without_timing()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));
    let ids: Vec<_> = a.iter().map(|r| r.check_id.clone()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn degenerate_all_run_reports_only_the_delta_relations() {
    let (code, reports, summary) = json(&["all", "--truncation", "0", "--window", "0", "--report", "json"]);
    let failed: BTreeSet<_> = reports.iter().filter(|r| !r.acceptable()).map(|r| r.check_id.as_str()).collect();
    assert_eq!(
        failed,
        BTreeSet::from([
            "current.xplus-xminus",
            "efkh.e-f",
            "evalrep.current.xplus-xminus",
            "evalrep.efkh.e-f"
        ])
    );
    for r in reports.iter().filter(|r| !r.acceptable()) {
        assert!(r.provenance["negated_delta_side"].starts_with("pass"), "{}", r.check_id);
    }
    assert_eq!(code, 1);
    assert_eq!(summary.failed, 4);
}

#[test]
fn relation_dump_is_stable_and_monotone() {
    let (a, b, c) = (tmp("dump_a.txt"), tmp("dump_b.txt"), tmp("dump_c.txt"));
    for (p, n) in [(&a, "0"), (&b, "0"), (&c, "1")] {
        let out = superrll(&["ybe", "--truncation", n, "--dump-relations", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let da = std::fs::read(&a).unwrap();
    assert_eq!(da, std::fs::read(&b).unwrap());
    let body = |bytes: &[u8]| -> BTreeSet<String> {
        String::from_utf8_lossy(bytes).lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
    };
    let small = body(&da);
    let large = body(&std::fs::read(&c).unwrap());
    assert!(!small.is_empty());
    assert!(small.is_subset(&large) && small.len() < large.len());
    let parsed = read_dump(std::io::BufReader::new(std::fs::File::open(&c).unwrap())).unwrap();
    assert_eq!(parsed.len(), large.len());
}

#[test]
fn unwritable_dump_path_is_config_error() {
    let out = superrll(&["ybe", "--dump-relations", "/nonexistent-dir/x/y.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn human_format_has_summary_line() {
    let out = superrll(&["unitarity"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS  unitarity")));
    assert!(text.trim_end().ends_with("2 checks: 2 passed, 0 failed, 0 report-only mismatches"));
}
