mod common;

use common::{run, CASES};
use serde_json::Value;

#[test]
fn golden_transcripts_match() {
    let failures: Vec<String> = CASES
        .iter()
        .filter_map(|case| common::check(case).err().map(|e| format!("{}: {e}", case.name)))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_golden_file_has_a_case() {
    for entry in std::fs::read_dir(common::golden_dir()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        let stem = name.trim_end_matches(".txt");
        assert!(CASES.iter().any(|c| c.name == stem), "stale golden file {name}");
    }
}

fn human_pairs(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(|l| {
            let (k, v) = l.split_once(": ").expect("key: value line");
            (k.to_string(), v.to_string())
        })
        .collect()
}

#[test]
fn human_and_json_reports_carry_identical_numbers() {
    let commands: &[&[&str]] = &[
        &["verify", "amplitude_damping.json"],
        &["verify", "half_identity.json"],
        &["metrics", "mixed.json", "zero.json"],
        &[
            "synthesize",
            "--input",
            "zero.json",
            "--target",
            "mixed.json",
            "-o",
            "{out}",
        ],
        &[
            "reach",
            "--controls",
            "controls_unitary.json",
            "--source",
            "zero.json",
            "--target",
            "maximally_mixed.json",
            "--depth",
            "3",
        ],
    ];
    for args in commands {
        let human = run(args);
        let mut json_args = args.to_vec();
        json_args.extend(["--format", "json"]);
        let json = run(&json_args);
        assert_eq!(human.code, json.code);
        let Value::Object(map) = serde_json::from_str::<Value>(&json.stdout).unwrap() else {
            panic!("json report is not an object")
        };
        let pairs = human_pairs(&human.stdout);
        assert_eq!(pairs.len(), map.len());
        for ((hk, hv), (jk, jv)) in pairs.iter().zip(map.iter()) {
            assert_eq!(hk, jk);
            let rendered = match jv {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(hv, &rendered, "{args:?} field {hk}");
        }
    }
}

#[test]
fn residuals_carry_at_least_twelve_significant_digits() {
    let r = run(&["metrics", "mixed.json", "zero.json", "--format", "json"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let text = v["trace_distance"].to_string();
    let digits = text
        .chars()
        .take_while(|&ch| ch != 'e')
        .filter(|ch| ch.is_ascii_digit())
        .count();
    assert!(digits >= 12, "{text}");
}
