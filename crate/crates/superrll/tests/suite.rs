use superrll::suite::{run, Command, RunConfig};
use superrll::{EngineError, Summary};

fn small(command: Command) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.truncation = 1;
    cfg.window = 1;
    cfg.eval_window = 3;
    cfg.specializations = 2;
    cfg.samples = 30;
    cfg
}

#[test]
fn delta_free_groups_pass_at_small_truncation() {
    for c in [
        Command::Ybe,
        Command::Unitarity,
        Command::Rll,
        Command::Hopf,
        Command::Coproducts,
        Command::Transfer,
    ] {
        let reports = run(&small(c)).unwrap();
        assert!(!reports.is_empty());
        for r in &reports {
            assert!(r.acceptable(), "{c}: {} {:?}", r.check_id, r.residues.first());
        }
    }
}

#[test]
fn only_the_delta_anticommutators_fail() {
    for (c, bad) in [
        (Command::Currents, "current.xplus-xminus"),
        (Command::Efkh, "efkh.e-f"),
        (Command::Evalrep, "evalrep.efkh.e-f"),
    ] {
        let reports = run(&small(c)).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.acceptable()).map(|r| r.check_id.as_str()).collect();
        assert!(failed.contains(&bad), "{c}: {failed:?}");
        assert!(failed.iter().all(|id| id.ends_with("xplus-xminus") || id.ends_with("e-f")), "{c}: {failed:?}");
        assert_eq!(Summary::of(&reports).exit_code, 1);
    }
}

#[test]
fn all_is_the_union_of_groups() {
    let all = run(&small(Command::All)).unwrap();
    let mut parts = Vec::new();
    for c in &Command::ALL[..9] {
        parts.extend(run(&small(*c)).unwrap());
    }
    parts.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let ids = |v: &[superrll::VerificationReport]| v.iter().map(|r| r.check_id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&all), ids(&parts));
}

#[test]
fn tiny_cap_aborts() {
    let mut cfg = small(Command::Rll);
    cfg.max_dim = 5;
    assert!(matches!(run(&cfg), Err(EngineError::Resource(_))));
}
