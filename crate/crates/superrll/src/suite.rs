//! Selection and execution of verification checks.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use superrll_scalar::Symbol;

use crate::consistency::{
    sample_words, verify_ideal_slice, verify_reduction_order, verify_relations, verify_sector_symmetry,
    verify_skew_factors,
};
use crate::currents::{verify_reconstruction, CurrentRelation, Currents};
use crate::error::EngineError;
use crate::evalrep::{verify_eval_rep_suite, verify_transfer};
use crate::hopf::{
    verify_antipode, verify_coassociativity, verify_counit_axioms, verify_current_coproduct, verify_homomorphism,
    CurrentCoproduct,
};
use crate::relations::{relation_set, RelationSet};
use crate::report::{ReportBuilder, VerificationReport};
use crate::rewrite::Rewriter;
use crate::rmatrix::{
    cross_validate, verify_gybe_components, verify_gybe_matrix, verify_r_at_one, verify_unitarity, Mutation, RMatrix,
};

/// Default cap on word-space and ideal-slice dimension.
pub const DEFAULT_MAX_DIM: usize = 2_000_000;
/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "SUPERRLL_MAX_DIM";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Ybe,
    Unitarity,
    Rll,
    Currents,
    Efkh,
    Hopf,
    Coproducts,
    Evalrep,
    Transfer,
    All,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Ybe,
        Command::Unitarity,
        Command::Rll,
        Command::Currents,
        Command::Efkh,
        Command::Hopf,
        Command::Coproducts,
        Command::Evalrep,
        Command::Transfer,
        Command::All,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Ybe => "ybe",
            Command::Unitarity => "unitarity",
            Command::Rll => "rll",
            Command::Currents => "currents",
            Command::Efkh => "efkh",
            Command::Hopf => "hopf",
            Command::Coproducts => "coproducts",
            Command::Evalrep => "evalrep",
            Command::Transfer => "transfer",
            Command::All => "all",
        }
    }

    fn groups(self) -> Vec<Command> {
        match self {
            Command::All => Command::ALL[..9].to_vec(),
            c => vec![c],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Command, EngineError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| EngineError::Config(format!("unknown subcommand {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub truncation: u32,
    pub window: i64,
    pub chain_length: usize,
    /// Window for the directed-series checks of the evaluation representation.
    pub eval_window: i64,
    pub max_dim: usize,
    /// Words sampled for the reduction-order and ideal-slice checks.
    pub samples: usize,
    /// Rational specializations for the numeric evaluation check.
    pub specializations: usize,
    pub seed: u64,
    /// Replace the R-matrix in the YBE and unitarity checks by a mutated one.
    pub mutation: Option<Mutation>,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            truncation: 2,
            window: 2,
            chain_length: 3,
            eval_window: 8,
            max_dim: DEFAULT_MAX_DIM,
            samples: 100,
            specializations: 10,
            seed: 20_240_601,
            mutation: None,
        }
    }

    /// Cap from the environment, falling back to [`DEFAULT_MAX_DIM`].
    pub fn max_dim_from_env() -> Result<usize, EngineError> {
        match std::env::var(MAX_DIM_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| EngineError::Config(format!("{MAX_DIM_ENV}={v:?} is not a nonnegative integer"))),
            Err(_) => Ok(DEFAULT_MAX_DIM),
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.window < 0 {
            return Err(EngineError::Config("window must be nonnegative".into()));
        }
        if self.eval_window < 0 {
            return Err(EngineError::Config("evaluation window must be nonnegative".into()));
        }
        if self.chain_length == 0 {
            return Err(EngineError::Config("chain length must be at least 1".into()));
        }
        Ok(())
    }

    fn r_matrix(&self) -> RMatrix {
        let r = RMatrix::standard();
        match self.mutation {
            Some(m) => r.mutate(m),
            None => r,
        }
    }
}

/// Map from a CLI error to its exit code.
pub fn exit_code(e: &EngineError) -> i32 {
    match e {
        EngineError::Resource(_) => 3,
        EngineError::Config(_) | EngineError::Parse { .. } => 2,
        EngineError::Scalar(_) | EngineError::Construction(_) => 1,
    }
}

/// The two printed YBE forms agree verdict-for-verdict on random mutations.
pub fn verify_mutation_agreement(seed: u64, count: usize) -> VerificationReport {
    let mut b = ReportBuilder::new("ybe.mutation-agreement", "matrix form and component form agree on mutated R");
    b.note("mutations", count.to_string());
    b.note("seed", seed.to_string());
    for (m, ok_a, ok_b, same) in cross_validate(seed, count) {
        if ok_a == ok_b && same {
            b.zero();
        } else {
            b.residue(format!("{m:?}"), format!("matrix={ok_a} components={ok_b} patterns_equal={same}"), 1);
        }
    }
    b.finish()
}

struct Context<'a> {
    cfg: &'a RunConfig,
    set: RelationSet,
    rw: Rewriter,
    currents: OnceLock<Currents>,
}

#[derive(Copy, Clone, Debug)]
enum Task {
    GybeMatrix,
    GybeComponents,
    MutationAgreement,
    Unitarity,
    ROne,
    Relations,
    Skew,
    Order,
    SectorSymmetry,
    Reconstruction,
    Current(CurrentRelation),
    Homomorphism,
    CounitAxioms,
    Coassociativity,
    Antipode,
    Coproduct(CurrentCoproduct),
    EvalRep,
    Transfer,
}

fn tasks(group: Command) -> Vec<Task> {
    match group {
        Command::Ybe => vec![Task::GybeMatrix, Task::GybeComponents, Task::MutationAgreement],
        Command::Unitarity => vec![Task::Unitarity, Task::ROne],
        Command::Rll => vec![Task::Relations, Task::Skew, Task::Order, Task::SectorSymmetry],
        Command::Currents => std::iter::once(Task::Reconstruction)
            .chain(CurrentRelation::CURRENTS.into_iter().map(Task::Current))
            .collect(),
        Command::Efkh => CurrentRelation::EFKH.into_iter().map(Task::Current).collect(),
        Command::Hopf => vec![Task::Homomorphism, Task::CounitAxioms, Task::Coassociativity, Task::Antipode],
        Command::Coproducts => CurrentCoproduct::ALL.into_iter().map(Task::Coproduct).collect(),
        Command::Evalrep => vec![Task::EvalRep],
        Command::Transfer => vec![Task::Transfer],
        Command::All => unreachable!("expanded by groups"),
    }
}

fn needs_rewriter(t: Task) -> bool {
    matches!(
        t,
        Task::Relations | Task::Skew | Task::Order | Task::Reconstruction | Task::Current(_)
    )
}

fn execute(t: Task, ctx: &Context) -> Result<Vec<VerificationReport>, EngineError> {
    let cfg = ctx.cfg;
    let n = cfg.truncation;
    Ok(match t {
        Task::GybeMatrix => vec![verify_gybe_matrix(&cfg.r_matrix())],
        Task::GybeComponents => vec![verify_gybe_components(&cfg.r_matrix())],
        Task::MutationAgreement => vec![verify_mutation_agreement(cfg.seed, 20)],
        Task::Unitarity => vec![verify_unitarity(&cfg.r_matrix())],
        Task::ROne => vec![verify_r_at_one(&cfg.r_matrix())],
        Task::Relations => vec![verify_relations(&ctx.set, &ctx.rw)],
        Task::Skew => vec![verify_skew_factors(&ctx.rw)],
        Task::Order => {
            let words = sample_words(&ctx.rw, 3, cfg.samples, cfg.seed);
            if words.len() > cfg.max_dim {
                return Err(EngineError::Resource(format!("{} sampled words exceed cap {}", words.len(), cfg.max_dim)));
            }
            vec![
                verify_reduction_order(&ctx.rw, &words, cfg.seed),
                verify_ideal_slice(&ctx.set, &ctx.rw, &words, cfg.max_dim)?,
            ]
        }
        Task::SectorSymmetry => vec![verify_sector_symmetry(n)],
        Task::Reconstruction => vec![verify_reconstruction(&ctx.rw)],
        Task::Current(rel) => {
            let c = ctx.currents.get_or_init(|| Currents::build(n, cfg.window));
            vec![c.verify(rel, &ctx.rw, cfg.window)?]
        }
        Task::Homomorphism => vec![verify_homomorphism(n)],
        Task::CounitAxioms => vec![verify_counit_axioms(n)],
        Task::Coassociativity => vec![verify_coassociativity(n)],
        Task::Antipode => vec![verify_antipode(n)?],
        Task::Coproduct(c) => vec![verify_current_coproduct(c, n, cfg.window)],
        Task::EvalRep => verify_eval_rep_suite(cfg.eval_window, cfg.specializations, cfg.seed)?,
        Task::Transfer => {
            let lengths: Vec<usize> = (1..=cfg.chain_length).collect();
            vec![verify_transfer(&lengths)?]
        }
    })
}

/// Runs the selected checks on the current rayon pool. Reports come back sorted by check id.
pub fn run(cfg: &RunConfig) -> Result<Vec<VerificationReport>, EngineError> {
    cfg.validate()?;
    let all: Vec<Task> = cfg.command.groups().into_iter().flat_map(tasks).collect();
    let (set, rw) = if all.iter().any(|t| needs_rewriter(*t)) {
        let set = relation_set(cfg.truncation, Symbol::GAMMA);
        if set.len() > cfg.max_dim {
            return Err(EngineError::Resource(format!("{} relations exceed cap {}", set.len(), cfg.max_dim)));
        }
        let rw = Rewriter::new(&set);
        (set, rw)
    } else {
        let set = relation_set(0, Symbol::GAMMA);
        let rw = Rewriter::new(&set);
        (set, rw)
    };
    let ctx = Context {
        cfg,
        set,
        rw,
        currents: OnceLock::new(),
    };
    let results: Vec<Result<Vec<VerificationReport>, EngineError>> =
        all.par_iter().map(|t| execute(*t, &ctx)).collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(reports)
}

/// The relation set whose dump `--dump-relations` writes.
pub fn relations_for(cfg: &RunConfig) -> RelationSet {
    relation_set(cfg.truncation, Symbol::GAMMA)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_roundtrip() {
        for c in Command::ALL {
            assert_eq!(c.as_str().parse::<Command>().unwrap(), c);
        }
        assert!("yb".parse::<Command>().is_err());
    }

    #[test]
    fn ybe_group_passes() {
        let reports = run(&RunConfig::new(Command::Ybe)).unwrap();
        let ids: Vec<_> = reports.iter().map(|r| r.check_id.as_str()).collect();
        assert_eq!(ids, ["ybe.components", "ybe.matrix", "ybe.mutation-agreement"]);
        assert!(reports.iter().all(|r| r.passed()));
    }

    #[test]
    fn mutated_r_fails_ybe() {
        let mut cfg = RunConfig::new(Command::Ybe);
        cfg.mutation = Some(Mutation::Flip(3, 3));
        let reports = run(&cfg).unwrap();
        assert!(reports.iter().any(|r| !r.acceptable()));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&EngineError::Resource("x".into())), 3);
        assert_eq!(exit_code(&EngineError::Config("x".into())), 2);
    }

    #[test]
    fn invalid_chain_is_config_error() {
        let mut cfg = RunConfig::new(Command::Transfer);
        cfg.chain_length = 0;
        assert!(matches!(run(&cfg), Err(EngineError::Config(_))));
    }
}
