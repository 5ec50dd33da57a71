//! The acceptance suite. Each criterion returns a pass/fail verdict with a
//! one-line detail; expensive artifacts are computed once per [`Suite`].

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use pmsim_core::arith::{is_psd, rat, real, GaussMatrix, Rational};
use pmsim_core::automata::{
    base_automaton, behavior_matrix, deterministic_check, ell_independence_check, Behavior, BEHAVIOR_COUNT,
    CONSTRUCTION_CHECK_LENGTH,
};
use pmsim_core::ensemble::{
    check_farkas, check_feasible, find_ensemble, reconstruct_singlet_reference, verify_ensemble, Verification,
};
use pmsim_core::quantum::{
    build_square, context_of, contexts, index_of, moment_space_dim, q_vector, z_catalog, MomentKind, ObservableId,
};
use pmsim_core::section::{membership, EXPECTED_WITNESSES};
use pmsim_core::{BehaviorMatrix, Certification, LpOutcome, QuantumState, Square};
use rayon::prelude::*;

use crate::commands::{behaviors_text, certify_text};
use crate::states::{off_subspace, rng, state_suite, subspace_samples, SAMPLE_SEED};
use crate::RunConfig;

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "family validity"),
    (2, "singlet reproduction"),
    (3, "dimension facts"),
    (4, "certification"),
    (5, "universality"),
    (6, "oracle cross-validation"),
    (7, "operator identities"),
    (8, "counterexample regression"),
    (9, "determinism"),
];

/// Random Gram states added to the fixed states in criterion 5.
pub const RANDOM_STATES: usize = 15;
/// Subspace samples and off-subspace perturbations in criterion 6.
pub const SUBSPACE_SAMPLES: usize = 100;
pub const OFF_SUBSPACE_SAMPLES: usize = 20;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}] {}: {} ({:.2}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Shared state for one run of the suite.
pub struct Suite {
    cfg: RunConfig,
    square: Square,
    family: OnceLock<Result<(Vec<Behavior>, BehaviorMatrix), String>>,
    certification: OnceLock<Result<Certification, String>>,
}

impl Suite {
    pub fn new(cfg: RunConfig) -> Self {
        Suite {
            cfg,
            square: build_square(),
            family: OnceLock::new(),
            certification: OnceLock::new(),
        }
    }

    fn family(&self) -> Result<(&[Behavior], &BehaviorMatrix), String> {
        let r = self.family.get_or_init(|| {
            let f = self.cfg.family().map_err(|e| e.to_string())?;
            let m = behavior_matrix(&f);
            Ok((f, m))
        });
        match r {
            Ok((f, m)) => Ok((f, m)),
            Err(e) => Err(e.clone()),
        }
    }

    fn certification(&self) -> Result<&Certification, String> {
        self.certification
            .get_or_init(|| certify_text(&self.cfg).map(|(_, c)| c).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn run(&self, id: u8) -> Outcome {
        let (_, title) = CRITERIA[usize::from(id) - 1];
        let start = Instant::now();
        let result = match id {
            1 => self.family_validity(),
            2 => self.singlet_reproduction(),
            3 => self.dimension_facts(),
            4 => self.certification_verdict(),
            5 => self.universality(),
            6 => self.oracle_cross_validation(),
            7 => self.operator_identities(),
            8 => self.counterexample(),
            9 => self.determinism(),
            _ => Err(format!("no criterion {id}")),
        };
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Outcome {
            id,
            title,
            passed,
            detail,
            elapsed: start.elapsed(),
        }
    }

    /// Runs all criteria in order, handing each outcome to `sink` as it
    /// finishes.
    pub fn run_all(&self, mut sink: impl FnMut(&Outcome)) -> Vec<Outcome> {
        CRITERIA
            .iter()
            .map(|&(id, _)| {
                let o = self.run(id);
                sink(&o);
                o
            })
            .collect()
    }

    fn family_validity(&self) -> Check {
        let (family, _) = self.family()?;
        ensure(family.len() == BEHAVIOR_COUNT, || format!("{} behaviors", family.len()))?;
        let failure = family.par_iter().find_map_first(|b| {
            if let Err(v) = deterministic_check(b, CONSTRUCTION_CHECK_LENGTH) {
                return Some(format!("λ={}: {v}", b.lambda));
            }
            ell_independence_check(b)
                .err()
                .map(|(s, x)| format!("λ={}: repeated {x} from state {s} moves the automaton", b.lambda))
        });
        if let Some(f) = failure {
            return Err(f);
        }
        let distinct: HashSet<_> = family.iter().map(|b| b.automaton).collect();
        Ok(format!(
            "{} behaviors pass the length-{} check and l-independence; {} distinct automata",
            family.len(),
            CONSTRUCTION_CHECK_LENGTH,
            distinct.len()
        ))
    }

    fn singlet_reproduction(&self) -> Check {
        let (family, matrix) = self.family()?;
        let p = reconstruct_singlet_reference(family).map_err(|e| e.to_string())?;
        let support = p.support();
        ensure(support.len() == 4, || format!("support {support:?}"))?;
        ensure(support.iter().all(|&l| family[l - 1].s0 == 2), || "initial state is not 2".into())?;
        ensure(p.weights().values().all(|w| *w == rat(1, 4)), || "weights are not 1/4".into())?;
        let rho = QuantumState::singlet();
        let q = q_vector(&rho, &z_catalog(&self.square));
        let moments = p.moments(matrix);
        ensure(moments[0].is_one() && moments[1..] == q[..], || "moments differ from q(singlet)".into())?;
        ensure(check_feasible(&p, &q, matrix), || "A p != (1, q)".into())?;
        for x in [ObservableId::C, ObservableId::SmallC, ObservableId::Gamma] {
            let v = &q[index_of(MomentKind::Single(x)).expect("single") - 1];
            ensure(*v == -Rational::one(), || format!("<{x}> = {v}"))?;
        }
        let v = verify_ensemble(&p, &rho, self.cfg.depth, family, &self.square).map_err(|e| e.to_string())?;
        match v {
            Verification::Pass { outcome_strings, .. } => Ok(format!(
                "λ = {support:?} with weight 1/4 reproduce all 63 moments and {outcome_strings} outcome strings to depth {}",
                self.cfg.depth
            )),
            Verification::Mismatch(m) => Err(m.to_string()),
        }
    }

    fn dimension_facts(&self) -> Check {
        let dim_u = moment_space_dim(&z_catalog(&self.square));
        ensure(dim_u == 9, || format!("dim U = {dim_u}"))?;
        let rank = self.certification()?.rays.span_rank();
        ensure(rank == 10, || format!("section rays span rank {rank}"))?;
        Ok(format!("dim U = {dim_u}; section rays span rank {rank}"))
    }

    fn certification_verdict(&self) -> Check {
        let c = self.certification()?;
        let r = &c.report;
        ensure(r.nonzero_witness_count == EXPECTED_WITNESSES, || {
            format!("{} nonzero witnesses", r.nonzero_witness_count)
        })?;
        for (op, v) in c.witnesses.nonzero.iter().zip(&r.witnesses) {
            // recheck positivity independently of the stored verdict
            let psd = is_psd(&op.w).map_err(|e| e.to_string())?;
            ensure(psd && v.psd, || format!("witness of row {} is not PSD", op.row))?;
            let tr = op.w.real_trace();
            ensure(tr > Rational::zero() && &op.w * &op.w == op.w.scale(&real(tr.clone())), || {
                format!("witness of row {} is not a rank-one projector multiple", op.row)
            })?;
            let ctx = contexts()
                .into_iter()
                .find(|ctx| Some(ctx.name()) == v.context)
                .ok_or_else(|| format!("witness of row {} has no context", op.row))?;
            let commuting = contexts()
                .iter()
                .filter(|k| k.members.iter().all(|&x| op.w.commutator(self.square.op(x)).is_zero()))
                .count();
            ensure(commuting == 1, || format!("witness of row {} commutes with {commuting} contexts", op.row))?;
            let [x, y] = v.outcome.ok_or_else(|| format!("witness of row {} has no outcome", op.row))?;
            let [xo, yo, _] = ctx.members;
            let proj: GaussMatrix = self.square.projector(xo, x) * self.square.projector(yo, y);
            ensure(op.w.scale(&real(tr.recip())) == proj, || {
                format!("witness of row {} is not a multiple of its eigenprojector", op.row)
            })?;
        }
        let mut per_context = Vec::new();
        for ctx in contexts() {
            let n = r.witnesses.iter().filter(|v| v.context == Some(ctx.name())).count();
            ensure(n == 4, || format!("context {} has {n} witnesses", ctx.name()))?;
            per_context.push(n);
        }
        ensure(r.q_subset_p && r.accepted(), || "verdict Q in P is false".into())?;
        Ok(format!(
            "{} rays, {} facet rows, {} rank-one PSD witnesses (4 per context); Q in P",
            r.ray_count, r.facet_count, r.nonzero_witness_count
        ))
    }

    fn universality(&self) -> Check {
        let (family, matrix) = self.family()?;
        let catalog = z_catalog(&self.square);
        let suite = state_suite(RANDOM_STATES);
        let results: Vec<Result<usize, String>> = suite
            .par_iter()
            .map(|(name, rho)| {
                let q = q_vector(rho, &catalog);
                let p = match find_ensemble(&q, matrix).map_err(|e| e.to_string())? {
                    LpOutcome::Feasible(p) => p,
                    LpOutcome::Infeasible { .. } => return Err(format!("{name}: LP infeasible")),
                };
                ensure(check_feasible(&p, &q, matrix), || format!("{name}: A p != (1, q)"))?;
                ensure(p.support().len() <= 64, || format!("{name}: support {}", p.support().len()))?;
                match verify_ensemble(&p, rho, self.cfg.depth, family, &self.square).map_err(|e| e.to_string())? {
                    Verification::Pass { .. } => Ok(p.support().len()),
                    Verification::Mismatch(m) => Err(format!("{name}: {m}")),
                }
            })
            .collect();
        let supports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
        Ok(format!(
            "{} states feasible and verified to depth {}; largest support {}",
            supports.len(),
            self.cfg.depth,
            supports.iter().max().copied().unwrap_or(0)
        ))
    }

    fn oracle_cross_validation(&self) -> Check {
        let c = self.certification()?;
        let (_, matrix) = self.family()?;
        let mut r = rng(SAMPLE_SEED);
        let mut samples = subspace_samples(&mut r, SUBSPACE_SAMPLES, &c.basis);
        let off = off_subspace(&mut r, &samples[..OFF_SUBSPACE_SAMPLES]);
        samples.extend(off);
        let verdicts: Vec<Result<bool, String>> = samples
            .par_iter()
            .enumerate()
            .map(|(i, q)| {
                let inside = membership(q, &c.facets);
                match find_ensemble(q, matrix).map_err(|e| e.to_string())? {
                    LpOutcome::Feasible(p) => {
                        ensure(inside, || format!("sample {i}: LP feasible but outside the facets"))?;
                        ensure(check_feasible(&p, q, matrix), || format!("sample {i}: A p != (1, q)"))?;
                    }
                    LpOutcome::Infeasible { farkas } => {
                        ensure(!inside, || format!("sample {i}: inside the facets but LP infeasible"))?;
                        ensure(check_farkas(&farkas, q, matrix), || format!("sample {i}: Farkas certificate fails"))?;
                    }
                }
                Ok(inside)
            })
            .collect();
        let inside = verdicts.into_iter().collect::<Result<Vec<_>, _>>()?;
        let n_in = inside.iter().filter(|&&b| b).count();
        let n_out = inside.len() - n_in;
        ensure(n_in > 0 && n_out > 0, || format!("{n_in} inside, {n_out} outside: sampler is one-sided"))?;
        Ok(format!(
            "{} vectors agree ({n_in} inside, {n_out} outside with validated Farkas certificates)",
            inside.len()
        ))
    }

    fn operator_identities(&self) -> Check {
        let catalog = z_catalog(&self.square);
        let (mut sandwiches, mut pairs) = (0, 0);
        for m in catalog.indices() {
            match m.kind {
                MomentKind::Sandwich(_, y) => {
                    ensure(catalog.op(m.j) == self.square.op(y), || format!("{} != {y}", m.kind))?;
                    sandwiches += 1;
                }
                MomentKind::Pair(x, y) => {
                    let ctx = context_of(&[x, y]).map_err(|_| format!("{} spans no context", m.kind))?;
                    let third = self.square.op(ctx.third(x, y));
                    let expected = third.scale(&real(Rational::from_integer(ctx.sign.into())));
                    ensure(*catalog.op(m.j) == expected, || format!("{} != {:+}{}", m.kind, ctx.sign, ctx.third(x, y)))?;
                    pairs += 1;
                }
                MomentKind::Single(_) => {}
            }
        }
        ensure(sandwiches == 36 && pairs == 18, || format!("{sandwiches} sandwiches, {pairs} pairs"))?;
        let q = q_vector(&QuantumState::maximally_mixed(), &catalog);
        ensure(q.iter().all(Zero::is_zero), || "q(1/4) != 0".into())?;
        Ok("36 sandwich operators equal Y; 18 pair operators equal the signed third observable; q(1/4) = 0".into())
    }

    fn counterexample(&self) -> Check {
        let base = base_automaton();
        let (single, _) = base.trace(1, &[ObservableId::SmallC]);
        let (sandwich, _) = base.trace(1, &[ObservableId::C, ObservableId::SmallC]);
        ensure(single == [1], || format!("<c> = {single:?}"))?;
        ensure(sandwich[1] == -1, || format!("<CcC> = {}", sandwich[1]))?;
        // after mixing, every sandwich moment equals the corresponding single
        let (family, matrix) = self.family()?;
        let p = reconstruct_singlet_reference(family).map_err(|e| e.to_string())?;
        let moments = p.moments(matrix);
        for m in z_catalog(&self.square).indices() {
            if let MomentKind::Sandwich(_, y) = m.kind {
                let single = index_of(MomentKind::Single(y)).expect("single");
                ensure(moments[m.j] == moments[single], || format!("mixture breaks {}", m.kind))?;
            }
        }
        Ok("base automaton from state 1: <c> = +1, <CcC> = -1; the singlet mixture restores <XYX> = <Y>".into())
    }

    fn determinism(&self) -> Check {
        let with_jobs = |jobs| RunConfig {
            jobs: Some(jobs),
            ..self.cfg.clone()
        };
        let b1 = behaviors_text(&with_jobs(1)).map_err(|e| e.to_string())?;
        let b4 = behaviors_text(&with_jobs(4)).map_err(|e| e.to_string())?;
        let b_again = behaviors_text(&self.cfg).map_err(|e| e.to_string())?;
        ensure(b1 == b4 && b1 == b_again, || "behavior dump depends on the run".into())?;
        let (c1, _) = certify_text(&with_jobs(1)).map_err(|e| e.to_string())?;
        let (c4, _) = certify_text(&with_jobs(4)).map_err(|e| e.to_string())?;
        ensure(c1 == c4, || "certification report depends on thread count".into())?;
        if let Some(Ok(c)) = self.certification.get() {
            ensure(pmsim_core::section::render_report(c) == c1, || "certification report differs on rerun".into())?;
        }
        Ok(format!(
            "behavior dump ({} bytes) and report ({} bytes) identical across reruns and 1 vs 4 threads",
            b1.len(),
            c1.len()
        ))
    }
}
