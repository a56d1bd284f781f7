use std::path::Path;
use std::process::{Command, Output};

use koszul_core::experiments::CheckReport;

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn export(name: &str, dir: &Path) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.json"));
    let out = koszul(&["model", "export", name, "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn edit_json(path: &Path, f: impl FnOnce(&mut serde_json::Value)) {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    f(&mut v);
    std::fs::write(path, v.to_string()).unwrap();
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = export("g3-quartic", dir.path());
    assert_eq!(code(&koszul(&["validate", good.to_str().unwrap()])), 0);

    let off = dir.path().join("off.json");
    std::fs::copy(&good, &off).unwrap();
    edit_json(&off, |v| {
        let z = v["points"]["z1"][0].as_str().unwrap().parse::<u64>().unwrap();
        v["points"]["z1"][0] = serde_json::Value::String(((z + 1) % 1_000_003).to_string());
    });
    let out = koszul(&["validate", off.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("point off curve"));

    let composite = dir.path().join("composite.json");
    std::fs::copy(&good, &composite).unwrap();
    edit_json(&composite, |v| v["field"]["prime"] = "1000002".into());
    assert_eq!(code(&koszul(&["validate", composite.to_str().unwrap()])), 2);

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{").unwrap();
    assert_eq!(code(&koszul(&["validate", broken.to_str().unwrap()])), 2);
    assert_eq!(code(&koszul(&["validate", "no-such-model"])), 2);
}

#[test]
fn betti_tables() {
    let out = koszul(&["betti", "twisted-cubic", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let rows: Vec<String> = stdout(&out).lines().skip(1).map(|l| l.split(',').take(3).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(rows, ["1,1,3", "2,1,2", "3,1,0"]);

    let out = koszul(&["betti", "g3-quartic", "--q-min", "1", "--q-max", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let dims: Vec<i64> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims, [3, 0, 0, 0]);

    let out = koszul(&["betti", "g3-quartic", "--p-min", "3", "--p-max", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn computation_errors_exit_4() {
    let out = koszul(&["--precision-cap", "1", "betti", "g4-quintic"]);
    assert_eq!(code(&out), 4);

    let dir = tempfile::tempdir().unwrap();
    let path = export("g4-quintic", dir.path());
    edit_json(&path, |v| {
        v["divisors"]["H"] = serde_json::json!({"base": "none", "hyperplane": 1, "places": {}});
    });
    let out = koszul(&["betti", path.to_str().unwrap(), "--divisor", "H"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn verify_and_report_json() {
    for check in ["two-points", "euler", "duality"] {
        let out = koszul(&["verify", check, "g3-quartic"]);
        assert_eq!(code(&out), 0, "{check}: {}", stdout(&out));
        assert!(stdout(&out).starts_with("PASS"), "{check}");
    }
    let out = koszul(&["--format", "json", "verify", "euler", "g3-quartic"]);
    let report: CheckReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.primes.len(), 3);
    assert_eq!(serde_json::from_str::<CheckReport>(&report.to_json()).unwrap(), report);

    assert_eq!(code(&koszul(&["verify", "canonical-green", "g5-trigonal"])), 1);
    assert_eq!(code(&koszul(&["verify", "no-such-check", "g3-quartic"])), 2);
    assert_eq!(code(&koszul(&["--prime", "1000002", "verify", "euler", "g3-quartic"])), 2);
}

#[test]
fn fixed_model_uses_its_own_prime() {
    let dir = tempfile::tempdir().unwrap();
    let path = export("g3-quartic", dir.path());
    let out = koszul(&["--format", "json", "verify", "two-points", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report: CheckReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.primes, [1_000_003]);
}

#[test]
fn bench_is_reproducible() {
    let args = ["bench", "--n", "5", "--dims", "1,5,10", "--p", "2"];
    let a = stdout(&koszul(&args));
    let b = stdout(&koszul(&args));
    let hash = |s: &str| s.split("hash ").nth(1).unwrap().split(')').next().unwrap().to_string();
    assert_eq!(hash(&a), hash(&b));
    assert!(a.contains("rank 40"));
}

#[test]
fn list_and_models() {
    let out = stdout(&koszul(&["list"]));
    for name in ["two-points", "default", "g5-sextic"] {
        assert!(out.contains(name), "{name}");
    }
    let out = stdout(&koszul(&["model", "list"]));
    assert!(out.contains("g7-septic"));
}

#[test]
fn default_suite_passes() {
    let out = koszul(&["suite"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains(" 0 FAIL"));
    assert_eq!(code(&koszul(&["suite", "controls"])), 1);
    assert_eq!(code(&koszul(&["suite", "nope"])), 2);
}
