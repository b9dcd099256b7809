use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_localfactors"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

const SMALL: &str = "primes = 3\next_kinds = unramified, ramified_p\nweil_forms = 5\nweil_lambdas = 3\n";

#[test]
fn weil_suite_passes_and_writes_jsonl() {
    let cfg = scratch("small.cfg");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = run(&["verify", "weil", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // per field: the hyperbolic plane, 5 forms and 3 scalings
    assert_eq!(lines.len(), 2 * 9 + 1);
    let summary = lines.last().unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["total"], 18);
    assert_eq!(summary["passed"], 18);
    for item in &lines[..lines.len() - 1] {
        assert_eq!(item["status"], "pass");
        assert!(!item["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn flags_override_the_config_file() {
    let cfg = scratch("override.cfg");
    std::fs::write(&cfg, SMALL).unwrap();
    let report = scratch("override.jsonl");
    let out = run(&["verify", "weil", "--config", cfg.to_str().unwrap(), "--p", "5", "--ext", "ramified_up", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    let summary: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["config"]["primes"], serde_json::json!([5]));
    assert_eq!(summary["config"]["ext_kinds"], serde_json::json!(["ramified_up"]));
    assert_eq!(summary["config"]["weil_forms"], 5);
}

#[test]
fn bad_configuration_exits_with_two() {
    let out = run(&["verify", "weil", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd prime"));
    assert_eq!(run(&["verify", "weil", "--tolerance", "1e-3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "weil", "--precision", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    let cfg = scratch("unknown.cfg");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["verify", "weil", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn ggp_reports_the_dichotomy() {
    let phi = r#"[{"character":"E:2:0,0:1/2","multiplicity":1},{"character":"E:2:0,12:1/2","multiplicity":1}]"#;
    let phi_prime = r#"[{"character":"E:2:0,20:0","multiplicity":1}]"#;
    let out = run(&["ggp", "--phi", phi, "--phiprime", phi_prime, "--mug", "-1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["epsilon"], -1);
    assert_eq!(v["result"]["kind"], "distinguished");
    assert_eq!(v["z_phi"], serde_json::json!([-1, -1]));

    let out = run(&["ggp", "--phi", phi, "--phiprime", phi_prime, "--mug", "+1"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["kind"], "all_zero");

    let swapped = run(&["ggp", "--phi", phi_prime, "--phiprime", phi, "--mug", "+1"]);
    assert_eq!(swapped.status.code(), Some(2));
    assert_eq!(run(&["ggp", "--phi", phi, "--phiprime", phi_prime, "--mug", "0"]).status.code(), Some(2));
}

#[test]
fn eval_transfer_unitary_and_twisted() {
    let xp = r#"[{"kind":"dihedral","z":{"a":1,"b":2}}]"#;
    let xm = r#"[{"kind":"split","a":{"a":3,"b":1}}]"#;
    let unitary = run(&["param", "eval-transfer", "--xi-plus", xp, "--xi-minus", xm, "--mu-plus", "E:0::0", "--mu-minus", "E:2:0,0:1/2", "--c=-1"]);
    assert_eq!(unitary.status.code(), Some(0), "{}", String::from_utf8_lossy(&unitary.stderr));
    let v: Value = serde_json::from_slice(&unitary.stdout).unwrap();
    assert_eq!(v["d_plus"], 1);
    assert_eq!(v["d_minus"], 2);
    let z = v["value"].as_array().unwrap();
    let modulus = z[0].as_f64().unwrap().hypot(z[1].as_f64().unwrap());
    assert!((modulus - 1.0).abs() < 1e-12);

    let twisted = run(&["param", "eval-transfer", "--kind", "twisted", "--xi-plus", xp, "--xi-minus", xm, "--mu-plus", "E:0::0", "--mu-minus", "E:0::0"]);
    assert_eq!(twisted.status.code(), Some(0), "{}", String::from_utf8_lossy(&twisted.stderr));

    let wrong = run(&["param", "eval-transfer", "--kind", "twisted", "--xi-plus", xp, "--xi-minus", xm, "--mu-plus", "E:0::0", "--mu-minus", "E:2:0,0:1/2"]);
    assert_eq!(wrong.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&wrong.stderr).contains("restriction"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cfg = scratch("determinism.cfg");
    std::fs::write(&cfg, "primes = 3\nweil_forms = 4\nweil_lambdas = 2\nepsilon_samples = 4\ncross_check_samples = 4\nlemma_231_instances = 1\nparams_samples = 3\nggp_pairs = 2\n").unwrap();
    let a = run(&["verify", "all", "--config", cfg.to_str().unwrap()]);
    let b = run(&["verify", "all", "--config", cfg.to_str().unwrap(), "--threads", "0"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}
