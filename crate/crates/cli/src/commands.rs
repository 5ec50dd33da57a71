use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use pmsim_core::arith::wire::format_rational;
use pmsim_core::arith::Rational;
use pmsim_core::automata::{behavior_matrix, render_behaviors, Behavior};
use pmsim_core::ensemble::{
    check_feasible, find_ensemble, parse_ensemble, render_ensemble, verify_ensemble, MismatchReport, Verification,
};
use pmsim_core::quantum::{build_square, outcome_distribution, parse_state, q_vector, z_catalog, ObservableId};
use pmsim_core::section::{certify_behaviors, render_report};
use pmsim_core::{Certification, Ensemble, LpOutcome, QuantumState};
use serde::Serialize;

use crate::acceptance::Suite;
use crate::{read_file, write_file, CliError, RunConfig};

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

/// Writes `text` to `path`, or to `out` when no path is given.
fn deliver(path: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

/// The behavior dump exactly as `behaviors` writes it.
pub fn behaviors_text(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.install(|| {
        let family = cfg.family()?;
        Ok(render_behaviors(&family, &behavior_matrix(&family)))
    })?
}

/// Runs the certification pipeline and renders its report.
pub fn certify_text(cfg: &RunConfig) -> Result<(String, Certification), CliError> {
    cfg.install(|| {
        let family = cfg.family()?;
        let c = certify_behaviors(family, &cfg.dd)?;
        Ok((render_report(&c), c))
    })?
}

pub fn cmd_behaviors(cfg: &RunConfig, out_path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let text = behaviors_text(cfg)?;
    deliver(out_path, out, &text)?;
    if out_path.is_some() {
        emit(out, "wrote 240 behaviors and the 64x240 behavior matrix\n")?;
    }
    Ok(())
}

pub fn cmd_certify(cfg: &RunConfig, out_path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let (text, c) = certify_text(cfg)?;
    deliver(out_path, out, &text)?;
    let r = &c.report;
    let summary = format!(
        "section rays {}, facet rows {} ({} with zero witness), nonzero witnesses {}, Q in P: {}\n",
        r.ray_count,
        r.facet_count,
        r.zero_witness_rows.len(),
        r.nonzero_witness_count,
        r.q_subset_p
    );
    if out_path.is_some() || cfg.verbose {
        emit(out, &summary)?;
    }
    if r.accepted() {
        Ok(())
    } else {
        Err(CliError::Verdict(summary.trim_end().to_string()))
    }
}

pub fn load_state(path: &Path) -> Result<QuantumState, CliError> {
    let text = read_file(path)?;
    parse_state(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct VerificationReport {
    depth: usize,
    support: usize,
    verdict: &'static str,
    sequences: Option<usize>,
    outcome_strings: Option<usize>,
    mismatch: Option<MismatchReport>,
}

/// Where the verification report goes for an ensemble written to `out`.
pub fn report_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".verify.json");
    out.with_file_name(name)
}

pub fn cmd_ensemble(
    cfg: &RunConfig,
    state_path: &Path,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let rho = load_state(state_path)?;
    let (ensemble_text, report, verification) = cfg.install(|| -> Result<_, CliError> {
        let family = cfg.family()?;
        let matrix = behavior_matrix(&family);
        let square = build_square();
        let q = q_vector(&rho, &z_catalog(&square));
        let p = match find_ensemble(&q, &matrix)? {
            LpOutcome::Feasible(p) => p,
            LpOutcome::Infeasible { .. } => {
                return Err(CliError::Internal(
                    "InternalInconsistency: a valid quantum state has no classical ensemble".into(),
                ))
            }
        };
        if !check_feasible(&p, &q, &matrix) {
            return Err(CliError::Internal("InternalInconsistency: LP solution does not reproduce q".into()));
        }
        let v = verify_ensemble(&p, &rho, cfg.depth, &family, &square)?;
        let report = VerificationReport {
            depth: cfg.depth,
            support: p.support().len(),
            verdict: if v.passed() { "pass" } else { "mismatch" },
            sequences: match v {
                Verification::Pass { sequences, .. } => Some(sequences),
                Verification::Mismatch(_) => None,
            },
            outcome_strings: match v {
                Verification::Pass { outcome_strings, .. } => Some(outcome_strings),
                Verification::Mismatch(_) => None,
            },
            mismatch: match &v {
                Verification::Mismatch(m) => Some(m.clone()),
                Verification::Pass { .. } => None,
            },
        };
        Ok((render_ensemble(&p, &family), report, v))
    })??;
    let mut report_text = serde_json::to_string_pretty(&report).expect("report serializes");
    report_text.push('\n');
    match out_path {
        Some(p) => {
            write_file(p, &ensemble_text)?;
            let rp = report_path(p);
            write_file(&rp, &report_text)?;
            emit(
                out,
                &format!(
                    "ensemble with {} behaviors written to {}; verification to depth {}: {} ({})\n",
                    report.support,
                    p.display(),
                    cfg.depth,
                    report.verdict,
                    rp.display()
                ),
            )?;
        }
        None => {
            emit(out, &ensemble_text)?;
            emit(out, &report_text)?;
        }
    }
    match verification {
        Verification::Pass { .. } => Ok(()),
        Verification::Mismatch(m) => Err(CliError::Verdict(m.to_string())),
    }
}

pub fn parse_sequence(s: &str) -> Result<Vec<ObservableId>, CliError> {
    let seq = s
        .split(',')
        .map(|t| t.parse::<ObservableId>().map_err(|e| CliError::Input(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if seq.is_empty() {
        return Err(CliError::Input("empty sequence".into()));
    }
    Ok(seq)
}

fn mixture_distribution(p: &Ensemble, family: &[Behavior], inputs: &[ObservableId]) -> BTreeMap<Vec<i8>, Rational> {
    let mut dist = BTreeMap::new();
    for (&lambda, w) in p.weights() {
        let b = &family[lambda - 1];
        let (outs, _) = b.automaton.trace(b.s0, inputs);
        *dist.entry(outs).or_insert_with(Rational::zero) += w;
    }
    dist
}

pub fn cmd_simulate(
    cfg: &RunConfig,
    state_path: &Path,
    sequence: &str,
    ensemble_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let rho = load_state(state_path)?;
    let inputs = parse_sequence(sequence)?;
    let square = build_square();
    let quantum = outcome_distribution(&square, &rho, &inputs)?;
    let classical = match ensemble_path {
        Some(path) => {
            let family = cfg.family()?;
            let p = parse_ensemble(&read_file(path)?, &family)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Some(mixture_distribution(&p, &family, &inputs))
        }
        None => None,
    };
    let names: Vec<String> = inputs.iter().map(ToString::to_string).collect();
    let mut table = format!("sequence {}\n", names.join(","));
    let mut all_equal = true;
    for (outs, prob) in &quantum {
        let label: Vec<String> = outs.iter().map(|x| format!("{x:+}")).collect();
        let mut line = format!("{:<16} {:>10}", format!("({})", label.join(",")), format_rational(prob));
        if let Some(dist) = &classical {
            let c = dist.get(outs).cloned().unwrap_or_else(Rational::zero);
            let eq = c == *prob;
            all_equal &= eq;
            line.push_str(&format!(" {:>10} {}", format_rational(&c), if eq { "equal" } else { "DIFFER" }));
        }
        table.push_str(line.trim_end());
        table.push('\n');
    }
    if classical.is_some() {
        table.push_str(if all_equal { "verdict: equal\n" } else { "verdict: differ\n" });
    }
    emit(out, &table)?;
    if all_equal {
        Ok(())
    } else {
        Err(CliError::Verdict(format!("ensemble disagrees with quantum prediction on {}", names.join(","))))
    }
}

pub fn cmd_selftest(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let suite = Suite::new(cfg.clone());
    let mut lines = Ok(());
    let outcomes = suite.run_all(|o| {
        if lines.is_ok() {
            lines = emit(out, &format!("{o}\n"));
        }
    });
    lines?;
    let total: f64 = outcomes.iter().map(|o| o.elapsed.as_secs_f64()).sum();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    emit(out, &format!("{passed}/{} criteria passed in {total:.1}s\n", outcomes.len()))?;
    match outcomes.iter().find(|o| !o.passed) {
        None => Ok(()),
        Some(o) => Err(CliError::Verdict(format!("criterion {} ({}) failed: {}", o.id, o.title, o.detail))),
    }
}
