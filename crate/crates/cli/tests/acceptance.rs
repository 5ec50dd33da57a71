//! Runs every acceptance criterion and prints one line per criterion.
//! Criterion 9 is additionally checked through the `pmsim` binary.

use std::path::Path;
use std::process::{Command, ExitCode};

use pmsim_cli::acceptance::{Outcome, Suite, CRITERIA};
use pmsim_cli::RunConfig;

fn run_binary(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_pmsim"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!(
            "pmsim {} exited with {:?}: {}",
            args.join(" "),
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

/// Byte comparison of binary outputs across reruns and `--jobs` settings.
fn binary_determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for cmd in ["behaviors", "certify"] {
        let runs = [vec!["--jobs", "1"], vec!["--jobs", "4"], vec!["--jobs", "4"], vec![]];
        let mut outputs = Vec::new();
        for (i, extra) in runs.iter().enumerate() {
            let mut args = vec![cmd];
            args.extend(extra);
            outputs.push(run_binary(&args, &dir.path().join(format!("{cmd}-{i}.json")))?);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("pmsim {cmd} output differs between runs"));
        }
        sizes.push(outputs[0].len());
    }
    Ok(format!("binary outputs identical ({} and {} bytes)", sizes[0], sizes[1]))
}

fn main() -> ExitCode {
    let suite = Suite::new(RunConfig::default());
    let mut failed = Vec::new();
    for &(id, _) in &CRITERIA {
        let mut o: Outcome = suite.run(id);
        if id == 9 && o.passed {
            match binary_determinism() {
                Ok(d) => o.detail = format!("{}; {d}", o.detail),
                Err(d) => {
                    o.passed = false;
                    o.detail = d;
                }
            }
        }
        println!("{o}");
        if !o.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
