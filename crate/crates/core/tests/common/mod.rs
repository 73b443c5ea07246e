//! Golden transcripts for the `kraus` binary.
//!
//! Each case runs from the fixture directory so paths in messages are
//! relative. `{out}` in an argument list is replaced by a scratch file whose
//! contents are appended to the transcript. Set `UPDATE_GOLDEN=1` to rewrite
//! the committed transcripts.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit }
}

pub const CASES: &[Case] = &[
    case("verify_identity", &["verify", "identity2.json"], 0),
    case(
        "verify_identity_json",
        &["verify", "identity2.json", "--format", "json"],
        0,
    ),
    case("verify_amplitude_damping", &["verify", "amplitude_damping.json"], 0),
    case("verify_dephasing", &["verify", "dephasing.json", "--format", "json"], 0),
    case("verify_qubit_ptp", &["verify", "qubit_ptp_1001.json"], 0),
    case("verify_half_identity", &["verify", "half_identity.json"], 1),
    case(
        "verify_half_identity_json",
        &["verify", "half_identity.json", "--format", "json"],
        1,
    ),
    case("verify_bad_shape", &["verify", "bad_shape.json"], 2),
    case("verify_malformed", &["verify", "malformed.json"], 2),
    case("verify_missing", &["verify", "no_such_file.json"], 2),
    case(
        "synth_mixed_to_pure_auto",
        &[
            "synthesize",
            "--input",
            "mixed.json",
            "--target",
            "zero.json",
            "-o",
            "{out}",
        ],
        0,
    ),
    case(
        "synth_pure_to_pure_auto",
        &[
            "synthesize",
            "--input",
            "zero.json",
            "--target",
            "plus.json",
            "-o",
            "{out}",
        ],
        0,
    ),
    case(
        "synth_equal_spectra_auto",
        &[
            "synthesize",
            "--input",
            "mixed.json",
            "--target",
            "mixed_swapped.json",
            "-o",
            "{out}",
            "--format",
            "json",
        ],
        0,
    ),
    case(
        "synth_pure_to_mixed_unitary",
        &[
            "synthesize",
            "--input",
            "zero.json",
            "--target",
            "mixed.json",
            "--strategy",
            "unitary",
            "-o",
            "{out}",
        ],
        1,
    ),
    case(
        "synth_pure_to_mixed_pta",
        &[
            "synthesize",
            "--input",
            "zero.json",
            "--target",
            "mixed.json",
            "--strategy",
            "pta",
            "-o",
            "{out}",
        ],
        0,
    ),
    case(
        "synth_atp_seeded_basis",
        &[
            "synthesize",
            "--input",
            "mixed.json",
            "--target",
            "one.json",
            "--strategy",
            "atp",
            "--basis-seed",
            "7",
            "-o",
            "{out}",
        ],
        0,
    ),
    case(
        "synth_all_to_any",
        &[
            "synthesize",
            "--input",
            "mixed.json",
            "--target",
            "maximally_mixed.json",
            "--strategy",
            "all-to-any",
            "-o",
            "{out}",
        ],
        0,
    ),
    case(
        "synth_composed",
        &[
            "synthesize",
            "--input",
            "plus.json",
            "--target",
            "mixed.json",
            "--strategy",
            "composed",
            "--intermediate",
            "one.json",
            "-o",
            "{out}",
        ],
        0,
    ),
    case(
        "synth_qubit_ptp",
        &[
            "synthesize",
            "--input",
            "plus.json",
            "--target",
            "one.json",
            "--strategy",
            "qubit-ptp",
            "--ptp-coeffs",
            "0.6,0;0,0.8;0.8,0;0.6,0",
            "-o",
            "{out}",
        ],
        0,
    ),
    case(
        "synth_qubit_ptp_bad_coeffs",
        &[
            "synthesize",
            "--input",
            "zero.json",
            "--target",
            "one.json",
            "--strategy",
            "qubit-ptp",
            "--ptp-coeffs",
            "1,0;1,0;1,0;0,0",
            "-o",
            "{out}",
        ],
        1,
    ),
    case(
        "synth_qubit_ptp_unparsable",
        &[
            "synthesize",
            "--input",
            "zero.json",
            "--target",
            "one.json",
            "--strategy",
            "qubit-ptp",
            "--ptp-coeffs",
            "1,0;1",
            "-o",
            "{out}",
        ],
        2,
    ),
    case(
        "synth_dim_mismatch",
        &[
            "synthesize",
            "--input",
            "zero_on_qutrit.json",
            "--target",
            "one.json",
            "-o",
            "{out}",
        ],
        1,
    ),
    case(
        "synth_not_hermitian",
        &[
            "synthesize",
            "--input",
            "not_hermitian.json",
            "--target",
            "one.json",
            "-o",
            "{out}",
        ],
        1,
    ),
    case("apply_identity", &["apply", "identity2.json", "mixed.json"], 0),
    case(
        "apply_amplitude_damping",
        &["apply", "amplitude_damping.json", "mixed.json"],
        0,
    ),
    case(
        "apply_dilation",
        &["apply", "amplitude_damping_dilation.json", "mixed.json"],
        0,
    ),
    case(
        "apply_dim_mismatch",
        &["apply", "identity2.json", "zero_on_qutrit.json"],
        1,
    ),
    case(
        "compose",
        &["compose", "--first", "amplitude_damping.json", "--then", "pauli_x.json"],
        0,
    ),
    case("dilate_amplitude_damping", &["dilate", "amplitude_damping.json"], 0),
    case("dilate_dephasing", &["dilate", "dephasing.json"], 0),
    case("dilate_invalid", &["dilate", "half_identity.json"], 1),
    case("choi", &["choi", "amplitude_damping.json"], 0),
    case(
        "choi_to_kraus",
        &["choi", "amplitude_damping_choi.json", "--direction", "to-kraus"],
        0,
    ),
    case("kraus", &["kraus", "amplitude_damping_choi.json"], 0),
    case(
        "reach_reset_flip",
        &[
            "reach",
            "--controls",
            "controls_reset_flip.json",
            "--source",
            "maximally_mixed.json",
            "--target",
            "one.json",
            "--depth",
            "2",
        ],
        0,
    ),
    case(
        "reach_unitary_only",
        &[
            "reach",
            "--controls",
            "controls_unitary.json",
            "--source",
            "zero.json",
            "--target",
            "maximally_mixed.json",
            "--depth",
            "4",
            "--format",
            "json",
        ],
        1,
    ),
    case(
        "reach_channel",
        &[
            "reach",
            "--controls",
            "controls_reset_flip.json",
            "--target-channel",
            "reset_then_flip.json",
            "--depth",
            "2",
            "--format",
            "json",
        ],
        0,
    ),
    case(
        "reach_zero_tol",
        &[
            "reach",
            "--controls",
            "controls_unitary.json",
            "--source",
            "zero.json",
            "--target",
            "one.json",
            "--depth",
            "1",
            "--tol",
            "0",
        ],
        2,
    ),
    case("random_state", &["random-state", "--dim", "3", "--seed", "5"], 0),
    case(
        "random_state_rank_one",
        &["random-state", "--dim", "2", "--rank", "1"],
        0,
    ),
    case(
        "thermal_state",
        &["thermal-state", "--hamiltonian", "hamiltonian.json", "--beta", "1.5"],
        0,
    ),
    case(
        "thermal_state_infinite_temperature",
        &["thermal-state", "--hamiltonian", "hamiltonian.json", "--beta", "0"],
        0,
    ),
    case("metrics", &["metrics", "mixed.json", "mixed_swapped.json"], 0),
    case(
        "metrics_json",
        &["metrics", "zero.json", "mixed.json", "--format", "json"],
        0,
    ),
    case(
        "metrics_invalid_state",
        &["metrics", "not_hermitian.json", "mixed.json"],
        1,
    ),
    case(
        "partial_trace",
        &["partial-trace", "bell.json", "--dims", "2,2", "--trace-out", "2"],
        0,
    ),
    case("unknown_subcommand", &["frobnicate"], 2),
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub output: Option<String>,
}

pub fn run(args: &[&str]) -> Run {
    let scratch = tempfile::tempdir().expect("tempdir");
    let out_path = scratch.path().join("out.json");
    let mut uses_out = false;
    let args: Vec<String> = args
        .iter()
        .map(|a| {
            if *a == "{out}" {
                uses_out = true;
                out_path.display().to_string()
            } else {
                a.to_string()
            }
        })
        .collect();
    let result = Command::new(env!("CARGO_BIN_EXE_kraus"))
        .args(&args)
        .current_dir(fixtures())
        .output()
        .expect("spawn kraus");
    Run {
        code: result.status.code().unwrap_or(-1),
        stdout: String::from_utf8(result.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(result.stderr).expect("utf-8 stderr"),
        output: uses_out.then(|| std::fs::read_to_string(&out_path).ok()).flatten(),
    }
}

pub fn transcript(case: &Case) -> (i32, String) {
    let r = run(case.args);
    let mut t = format!(
        "$ kraus {}\nexit: {}\n--- stdout\n{}--- stderr\n{}",
        case.args.join(" "),
        r.code,
        r.stdout,
        r.stderr
    );
    if let Some(out) = r.output {
        t.push_str("--- output\n");
        t.push_str(&out);
    }
    (r.code, t)
}

/// Compares (or, with `UPDATE_GOLDEN`, rewrites) one case; returns a failure description.
pub fn check(case: &Case) -> Result<(), String> {
    let (code, first) = transcript(case);
    let (_, second) = transcript(case);
    if first != second {
        return Err("output differs between two runs".into());
    }
    if code != case.exit {
        return Err(format!("exit code {code}, expected {}", case.exit));
    }
    let path = golden_dir().join(format!("{}.txt", case.name));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != first {
        return Err(format!("transcript differs from {}:\n{first}", path.display()));
    }
    Ok(())
}
