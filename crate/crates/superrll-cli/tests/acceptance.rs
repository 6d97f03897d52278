//! One line per acceptance criterion. Criteria 6 and 7 are expected red: the two
//! delta-bearing anticommutators hold only with the delta side negated.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;

use superrll::consistency::{sample_words, verify_ideal_slice, verify_reduction_order};
use superrll::currents::{verify_reconstruction, CurrentRelation, Currents};
use superrll::evalrep::{verify_eval_rep_suite, verify_transfer, Candidate, EvalRep};
use superrll::hopf::{verify_coassociativity, verify_counit_axioms, verify_current_coproduct, verify_homomorphism, CurrentCoproduct};
use superrll::relations::relation_set;
use superrll::rewrite::Rewriter;
use superrll::rmatrix::{verify_gybe_components, verify_gybe_matrix, verify_r_at_one, verify_unitarity, RMatrix};
use superrll::suite::verify_mutation_agreement;
use superrll::{Status, VerificationReport};
use superrll_scalar::Symbol;

const DELTA_IDS: [&str; 2] = ["current.xplus-xminus", "efkh.e-f"];

struct Line {
    criterion: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn line(criterion: u32, name: &'static str, pass: bool, detail: impl Into<String>) -> Line {
    let l = Line {
        criterion,
        name,
        pass,
        detail: detail.into(),
    };
    println!(
        "criterion {:2} {:28} {}  tolerance=exact  {}",
        l.criterion,
        l.name,
        if l.pass { "PASS" } else { "FAIL" },
        l.detail
    );
    l
}

fn tallies(rs: &[&VerificationReport]) -> String {
    let (z, t, n, s) = rs.iter().fold((0, 0, 0, 0), |a, r| {
        (a.0 + r.tally.zero, a.1 + r.tally.trivial, a.2 + r.tally.nonzero, a.3 + r.tally.skipped)
    });
    format!("zero={z} trivial={t} nonzero={n} skipped={s}")
}

fn negated_passes(r: &VerificationReport) -> bool {
    r.provenance.get("negated_delta_side").is_some_and(|v| v.starts_with("pass"))
}

fn is_delta(id: &str) -> bool {
    DELTA_IDS.iter().any(|d| id.ends_with(d))
}

fn graded_ybe() -> Line {
    let r = RMatrix::standard();
    let m = verify_gybe_matrix(&r);
    let c = verify_gybe_components(&r);
    let agree = verify_mutation_agreement(20_240_601, 20);
    let pass = m.passed() && c.passed() && agree.passed() && m.tally.checked() == 64 && c.tally.checked() == 64;
    line(1, "graded-ybe", pass, format!("matrix {}, components {}, mutations agreeing {}/20", tallies(&[&m]), tallies(&[&c]), agree.tally.zero))
}

fn unitarity() -> Line {
    let u = verify_unitarity(&RMatrix::standard());
    let numeric = u.provenance.get("numeric_points").cloned().unwrap_or_default();
    let pass = u.passed() && numeric.starts_with("10 of 10");
    line(2, "unitarity", pass, format!("{} numeric: {numeric}", tallies(&[&u])))
}

fn r_at_one() -> Line {
    let r = verify_r_at_one(&RMatrix::standard());
    line(3, "r-at-one", r.passed(), tallies(&[&r]))
}

fn reduction_order() -> Line {
    let set = relation_set(3, Symbol::GAMMA);
    let rw = Rewriter::new(&set);
    let words = sample_words(&rw, 3, 120, 20_240_601);
    let order = verify_reduction_order(&rw, &words, 20_240_601);
    let slice = verify_ideal_slice(&set, &rw, &words, 2_000_000).expect("slice within cap");
    let pass = words.len() >= 100 && order.passed() && slice.passed();
    line(4, "reduction-order", pass, format!("N=3 words={} order {} slice {}", words.len(), tallies(&[&order]), tallies(&[&slice])))
}

fn gauss_reconstruction() -> Line {
    let reports: Vec<_> = (0..=3).map(|n| verify_reconstruction(&Rewriter::new(&relation_set(n, Symbol::GAMMA)))).collect();
    let pass = reports.iter().all(|r| r.passed());
    line(5, "gauss-reconstruction", pass, format!("N=0..3 {}", tallies(&reports.iter().collect::<Vec<_>>())))
}

fn current_relations() -> (Line, Vec<VerificationReport>) {
    let rw = Rewriter::new(&relation_set(2, Symbol::GAMMA));
    let c = Currents::build(2, 2);
    let reports: Vec<_> = CurrentRelation::CURRENTS
        .into_iter()
        .chain(CurrentRelation::EFKH)
        .map(|rel| c.verify(rel, &rw, 2).expect("verification runs"))
        .collect();
    let failing: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.check_id.as_str()).collect();
    let pass = failing.is_empty();
    let refs: Vec<_> = reports.iter().collect();
    let l = line(6, "current-relations", pass, format!("N=2 W=2 {} failing={failing:?}", tallies(&refs)));
    (l, reports)
}

fn evaluation_rep() -> (Line, Vec<VerificationReport>, Candidate) {
    let (rep, _) = EvalRep::build(&[]).expect("a candidate is found");
    let reports = verify_eval_rep_suite(8, 10, 20_240_601).expect("evaluation checks run");
    let failing: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.check_id.as_str()).collect();
    let refs: Vec<_> = reports.iter().collect();
    let l = line(
        7,
        "evaluation-rep",
        failing.is_empty(),
        format!("candidate={:?} window=8 {} failing={failing:?}", rep.candidate, tallies(&refs)),
    );
    (l, reports, rep.candidate)
}

fn transfer() -> Line {
    let r = verify_transfer(&[1, 2, 3]).expect("chain lengths within cap");
    line(8, "transfer-commutation", r.passed(), format!("L=1,2,3 {}", tallies(&[&r])))
}

fn hopf() -> (Line, VerificationReport) {
    let hom = verify_homomorphism(2);
    let counit = verify_counit_axioms(2);
    let coassoc = verify_coassociativity(2);
    let cops: BTreeMap<_, _> = CurrentCoproduct::ALL
        .into_iter()
        .map(|c| (c, verify_current_coproduct(c, 2, 1)))
        .collect();
    let hard = [&hom, &counit, &coassoc]
        .into_iter()
        .chain(cops.iter().filter(|(c, _)| !c.report_only()).map(|(_, r)| r))
        .all(|r| r.passed());
    let h = cops[&CurrentCoproduct::H].clone();
    let all: Vec<_> = [&hom, &counit, &coassoc].into_iter().chain(cops.values()).collect();
    let l = line(
        9,
        "hopf-compatibility",
        hard,
        format!("N=2 W=1 {} report-only coproduct.h={}", tallies(&all), h.status.as_str()),
    );
    (l, h)
}

fn run_json(extra: &[&str]) -> (i32, Vec<String>) {
    let out = Command::new(env!("CARGO_BIN_EXE_superrll"))
        .args(extra)
        .args(["--report", "json"])
        .env_remove("SUPERRLL_MAX_DIM")
        .output()
        .expect("binary runs");
    let lines = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            if let Some(o) = v.as_object_mut() {
                o.remove("timing_ms");
            }
            v.to_string()
        })
        .collect();
    (out.status.code().unwrap(), lines)
}

fn determinism() -> Line {
    let (c1, a) = run_json(&["rll"]);
    let (c2, b) = run_json(&["rll", "--jobs", "1"]);
    let (c3, y1) = run_json(&["ybe"]);
    let (c4, y2) = run_json(&["ybe"]);
    let (mutated, _) = run_json(&["ybe", "--mutate-r", "3,3"]);
    let pass = a == b && y1 == y2 && c1 == c2 && c3 == 0 && c4 == 0 && mutated == 1;
    line(10, "determinism-exit-codes", pass, format!("rll/ybe reruns identical={} mutated-R exit={mutated}", a == b && y1 == y2))
}

fn main() {
    let mut lines = vec![graded_ybe(), unitarity(), r_at_one(), reduction_order(), gauss_reconstruction()];
    let (six, abstract_reports) = current_relations();
    lines.push(six);
    let (seven, eval_reports, candidate) = evaluation_rep();
    lines.push(seven);
    lines.push(transfer());
    let (nine, h) = hopf();
    lines.push(nine);
    lines.push(determinism());

    let expected_red = BTreeSet::from([6, 7]);
    for l in &lines {
        if !expected_red.contains(&l.criterion) {
            assert!(l.pass, "criterion {} ({}) failed: {}", l.criterion, l.name, l.detail);
        }
    }

    // Documented pattern for criteria 6 and 7: exactly the delta relations fail, and each
    // passes with the delta side negated.
    for (l, reports) in [(&lines[5], &abstract_reports), (&lines[6], &eval_reports)] {
        assert!(!l.pass, "criterion {} is expected red", l.criterion);
        for r in reports.iter() {
            if is_delta(&r.check_id) {
                assert_eq!(r.status, Status::Fail, "{}", r.check_id);
                assert!(negated_passes(r), "{}", r.check_id);
            } else {
                assert!(r.passed(), "{} should pass", r.check_id);
            }
        }
    }
    assert_eq!(abstract_reports.iter().filter(|r| !r.passed()).count(), 2);
    assert_eq!(eval_reports.iter().filter(|r| !r.passed()).count(), 2);
    assert_eq!(candidate, Candidate::Plain);
    assert!(h.report_only && h.acceptable());
}
