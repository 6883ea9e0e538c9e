use std::path::Path;
use std::process::{Command, Output};

fn freeloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeloop")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn complete_generators_give_phi_basis() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(
        dir.path(),
        "h.txt",
        "x1 + x2 + x3\n# h2\nx1^2 + x2^2 + x3^2 + x1*x2 + x1*x3 + x2*x3\n\
         x1^3 + x2^3 + x3^3 + x1^2*x2 + x1^2*x3 + x2^2*x1 + x2^2*x3 + x3^2*x1 + x3^2*x2 + x1*x2*x3\n",
    );
    let o = freeloop(&["gb", &h, "--order", "lex:x3>x2>x1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x3 + x2 + x1\nx2^2 + x1*x2 + x1^2\nx1^3");
}

#[test]
fn single_generator_is_sign_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.txt", "-x*y + 2*y\n");
    let o = freeloop(&["gb", &f, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["basis"][0], "x*y - 2*y");
    assert_eq!(v["order"], "lex:x>y");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "e.txt", "# nothing\n\n");
    assert_eq!(freeloop(&["gb", &empty]).status.code(), Some(2));
    let bad = write(dir.path(), "b.txt", "x + * y\n");
    let o = freeloop(&["gb", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(freeloop(&["gb", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(freeloop(&["verify-su4", "/nonexistent/result.json"]).status.code(), Some(2));
    assert_eq!(freeloop(&["nosuchcommand"]).status.code(), Some(2));
}

#[test]
fn pair_guard_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.txt", "x^2*y - 1\nx*y^2 - x\n3*x*y + 2*y^3\n");
    assert_eq!(freeloop(&["gb", &f, "--max-pairs", "1"]).status.code(), Some(3));
}

#[test]
fn intersections_and_normal_forms() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "x\n");
    let b = write(dir.path(), "b.txt", "z\n");
    let o = freeloop(&["intersect", &a, &b, "--vars", "x,z"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "x*z".to_string()));
    let o = freeloop(&["intersect", &a, &a]);
    assert_eq!(stdout(&o), "x");
    let g = write(dir.path(), "g.txt", "2*x\n");
    let o = freeloop(&["nf", &g, "3*x + 1"]);
    assert_eq!(stdout(&o), "x + 1");
}

#[test]
fn flagloop_guards() {
    assert_eq!(freeloop(&["flagloop", "--n", "4"]).status.code(), Some(5));
    let o = freeloop(&["flagloop", "--n", "2", "--cap", "5"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("total degree 6"));
}

#[test]
fn flagloop_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = freeloop(&["flagloop", "--n", "2", "--cap", "10", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ra = std::fs::read(a.join("result.json")).unwrap();
    assert_eq!(ra, std::fs::read(b.join("result.json")).unwrap());
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["torsion_orders"], serde_json::json!([3]));
    // a rank-two result is not a rank-three one
    assert_eq!(freeloop(&["verify-su4", a.join("result.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_su4_reports_itemized_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("su4");
    assert_eq!(freeloop(&["flagloop", "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let result = out.join("result.json");
    let o = freeloop(&["verify-su4", result.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("ok   torsion orders ⊆ {2,4}"), "{text}");
    assert!(text.contains("FAIL generation"), "{text}");
    assert_eq!(o.status.code(), Some(1));

    // inject an order-8 torsion entry
    let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(&result).unwrap()).unwrap();
    v["torsion"]["orders"]["8"] = serde_json::json!({ "9": 1 });
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&v).unwrap()).unwrap();
    let text = stdout(&freeloop(&["verify-su4", tampered.to_str().unwrap()]));
    assert!(text.contains("FAIL torsion orders ⊆ {2,4}"), "{text}");
}

#[test]
fn identities_with_seed() {
    let a = freeloop(&["identities", "--seed", "11", "--json"]);
    let b = freeloop(&["identities", "--seed", "11", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
