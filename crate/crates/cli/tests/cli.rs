use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

fn base() -> Value {
    json!({
        "field": {"p": 2, "a": 1},
        "n": 2,
        "alpha": {"lacunary": {"prec": -256}},
        "psi": {"linear": {"c": 3, "b": 0}},
        "U": {"radiusExp": 0},
        "delta": "1/2",
        "D": {"dioph": 4, "submodule": 1, "wedge": 1},
        "m": 3,
        "Tmax": 3,
        "xi": "1/2",
        "seed": 7,
        "nondiv": {"t": 1, "eps": [-2], "rho": -1}
    })
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(dir: &Path, cmd: &str, cfg: &Value, extra: &[&str]) -> Run {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fflab")).arg(cmd).arg("--config").arg(&path).args(extra).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(cmd: &str, cfg: &Value, extra: &[&str]) -> Run {
    let dir = TempDir::new().unwrap();
    run_in(dir.path(), cmd, cfg, extra)
}

fn report(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stderr))
}

#[test]
fn selftest_over_small_fields() {
    let r = run("field-selftest", &base(), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = report(&r);
    assert_eq!(rep["command"], "field-selftest");
    assert!(rep["records"].as_array().unwrap().iter().all(|x| x["pass"] == true));

    let mut c = base();
    c["field"] = json!({"p": 2, "a": 2, "modulus": [1, 1, 1]});
    assert_eq!(run("field-selftest", &c, &[]).code, 0);

    c["field"] = json!({"p": 2, "a": 2, "modulus": [1, 0, 1]});
    let r = run("field-selftest", &c, &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("reducible"));
}

#[test]
fn config_errors_exit_2() {
    let mut c = base();
    c["delta"] = json!(0.5);
    assert_eq!(run("constants", &c, &[]).code, 2);

    let mut c = base();
    c["delta"] = json!("5/2");
    assert_eq!(run("constants", &c, &[]).code, 2);

    let mut c = base();
    c["xi"] = json!(1);
    assert_eq!(run("constants", &c, &[]).code, 2);

    let mut c = base();
    c["bogus"] = json!(1);
    assert_eq!(run("constants", &c, &[]).code, 2);

    let mut c = base();
    c["field"]["p"] = json!(4);
    assert_eq!(run("constants", &c, &[]).code, 2);

    let mut c = base();
    c["nondiv"]["eps"] = json!([0]);
    assert_eq!(run("nondiv", &c, &[]).code, 2);
}

#[test]
fn dioph_check_verdicts() {
    let r = run("dioph-check", &base(), &[]);
    assert_eq!(r.code, 0);
    assert_eq!(report(&r)["records"][0]["class"], "slice-bounded");

    let mut c = base();
    c["alpha"] = json!({"rational": {"fracs": [["1", "T + 1"], ["T", "T^2 + T + 1"]], "prec": -64}});
    let r = run("dioph-check", &c, &[]);
    assert_eq!(r.code, 1);
    assert_eq!(report(&r)["records"][0]["value"]["verdict"]["kind"], "fails_infinitely");

    // polynomial coefficients: every q′ violates
    c["alpha"] = json!({"series": ["T + 1", "T^2"]});
    let r = run("dioph-check", &c, &[]);
    assert_eq!(r.code, 1);
    let v = report(&r);
    assert_eq!(v["records"][0]["value"]["violations"].as_array().unwrap().len(), v["records"][0]["value"]["checked"].as_u64().unwrap() as usize);

    let mut c = base();
    c["alpha"] = json!({"lacunary": {"prec": -6}});
    c["D"]["dioph"] = json!(8);
    assert_eq!(run("dioph-check", &c, &[]).code, 3);
}

#[test]
fn alpha_from_file() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("alpha.txt"), "# coefficients\nT^-1 + T^-2 + T^-4 + T^-8 + T^-16 + T^-32 + O(T^-49)\nT^-1 + T^-3 + T^-9 + T^-27 + O(T^-49)\n").unwrap();
    let mut c = base();
    c["alpha"] = json!({"file": "alpha.txt"});
    let r = run_in(dir.path(), "dioph-check", &c, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let out = |name: &str, fmt: &str| {
        let p = dir.path().join(name);
        let r = run_in(dir.path(), "khintchine", &base(), &["--out", p.to_str().unwrap(), "--format", fmt, "--jobs", "1"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        std::fs::read(p).unwrap()
    };
    assert_eq!(out("a.json", "json"), out("b.json", "json"));
    let tsv = out("a.tsv", "tsv");
    assert_eq!(tsv, out("b.tsv", "tsv"));
    let text = String::from_utf8(tsv).unwrap();
    assert!(text.lines().any(|l| l == "check\tclass\tpass\tvalue"));
    assert!(text.ends_with("# verdict\tPASS\n"));
}

#[test]
fn khintchine_divergent_psi_warns() {
    let mut c = base();
    c["psi"] = json!({"linear": {"c": 2, "b": 0}});
    c["Tmax"] = json!(2);
    let r = run("khintchine", &c, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = report(&r);
    assert!(v["warnings"][0].as_str().unwrap().contains("diverges"));
    assert_eq!(v["records"][0]["class"], "exact");
}

#[test]
fn quantitative_and_constants() {
    let r = run("quantitative", &base(), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = report(&r);
    for k in ["beta", "rho", "C", "C'", "C''", "K0", "K1", "kappa"] {
        assert!(v["constants"][k]["source"].is_string(), "{k} missing");
    }
    assert_eq!(v["constants"]["kappa"]["value"], "q^-61");

    let r = run("constants", &base(), &["--format", "tsv"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("# constant\tK1"));
}

#[test]
fn nondiv_single_eps() {
    let r = run("nondiv", &base(), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = report(&r);
    assert_eq!(v["records"][0]["value"]["core_failures"], 0);
    assert_eq!(v["records"][0]["value"]["cells"], 8);
}

#[test]
fn good_check_runs() {
    let mut c = base();
    c["Tmax"] = json!(1);
    let r = run("good-check", &c, &["--format", "tsv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(!r.stdout.contains("\tFAIL\t"));
}
