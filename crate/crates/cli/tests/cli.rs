use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn inputs(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "inputs", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribbon-tqft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

/// 𝒟 = sqrt(1 + φ²) for Fibonacci.
fn fib_dim() -> f64 {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    (1.0 + phi * phi).sqrt()
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn check_category_reports_constants() {
    let o = run(&["check-category", "--category", &inputs("categories/fibonacci.json"), "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    let (d, im) = pair(&v["global_dimension"]);
    assert!((d - fib_dim()).abs() < 1e-12 && im.abs() < 1e-12);
    assert!((d - 1.902).abs() < 1e-3);
}

#[test]
fn corrupted_category_is_an_input_error() {
    let o = run(&["check-category", "--category", &inputs("categories/corrupted.json")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn perturbed_category_fails_pentagon() {
    let o = run(&["check-category", "--category", &inputs("categories/fibonacci_perturbed.json")]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL pentagon")), "{text}");
}

#[test]
fn unknown_category_is_an_input_error() {
    assert_eq!(code(&run(&["check-category", "--category", "no-such-thing"])), 2);
}

#[test]
fn eval_tau_closed_values() {
    let d = fib_dim();
    for (file, want) in [
        ("diagrams/empty.rd", 1.0 / d),
        ("diagrams/unknot0.rd", 1.0),
        ("diagrams/unknot_plus1.rd", 1.0 / d),
        ("diagrams/unknot_minus1.rd", 1.0 / d),
    ] {
        let o = run(&["eval-tau", &inputs(file), "--out", "json"]);
        assert_eq!(code(&o), 0, "{file}");
        let (re, im) = pair(&json(&o)["tau"]);
        assert!((re - want).abs() < 1e-8 && im.abs() < 1e-8, "{file}: {re} {im}");
    }
}

#[test]
fn eval_tau_open_boundary_is_domain_failure() {
    assert_eq!(code(&run(&["eval-tau", &inputs("diagrams/open.rd")])), 1);
}

#[test]
fn eval_functor_header_errors() {
    assert_eq!(code(&run(&["eval-functor", &inputs("cobordisms/no_header.cob")])), 2);
    assert_eq!(code(&run(&["eval-functor", &inputs("cobordisms/mismatch.cob")])), 1);
    assert_eq!(code(&run(&["eval-functor", "/nonexistent/file.cob"])), 2);
}

#[test]
fn cylinder_blocks_are_identities_on_the_diagonal() {
    let o = run(&["eval-functor", &inputs("cobordisms/cylinder_11.cob"), "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for cell in v["blocks"].as_array().unwrap() {
        let b = &cell["block"];
        let n = b["source_dim"].as_u64().unwrap();
        if cell["i"] == cell["j"] {
            assert_eq!(n, 1);
            let m = &b["sub_blocks"][0]["matrix"];
            assert_eq!(pair(&m[0][0]), (1.0, 0.0));
        } else {
            assert_eq!(n, 0);
        }
    }
}

#[test]
fn torus_cylinder_is_block_identity() {
    let o = run(&["eval-functor", &inputs("cobordisms/torus_cylinder.cob"), "--out", "json", "--category", "semion"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for sb in v["blocks"][0]["block"]["sub_blocks"].as_array().unwrap() {
        let want = if sb["zeta"] == sb["eta"] { 1.0 } else { 0.0 };
        let (re, im) = pair(&sb["matrix"][0][0]);
        assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12);
    }
}

#[test]
fn restriction_matches_eval_tau_bit_for_bit() {
    for file in ["cobordisms/unknot_closed.cob", "cobordisms/band_birth.cob"] {
        for cat in ["semion", "fibonacci"] {
            let f = run(&["eval-functor", &inputs(file), "--out", "json", "--category", cat]);
            let t = run(&["eval-tau", &inputs(file), "--out", "json", "--category", cat]);
            assert_eq!((code(&f), code(&t)), (0, 0));
            let (fb, tb) = (json(&f)["blocks"].to_string(), json(&t)["blocks"].to_string());
            assert_eq!(fb, tb, "{file} over {cat}");
        }
    }
}

#[test]
fn output_does_not_depend_on_jobs() {
    let file = inputs("cobordisms/torus_cylinder.cob");
    let a = run(&["eval-functor", &file, "--out", "json", "--jobs", "1"]);
    let b = run(&["eval-functor", &file, "--out", "json", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["verify", "--category", "semion", "--out", "json", "--jobs", "1"]);
    let b = run(&["verify", "--category", "semion", "--out", "json", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&run(&["verify", "--jobs", "0"])), 2);
}

#[test]
fn verify_bundled_categories_pass() {
    for cat in ["trivial", "semion", "fibonacci"] {
        let o = run(&["verify", "--category", cat, "--out", "json"]);
        assert_eq!(code(&o), 0, "{cat}");
        let v = json(&o);
        for c in v["checks"].as_array().unwrap() {
            assert_eq!(c["passed"], true, "{cat}: {c}");
            assert!(c["residual"].as_f64().unwrap() < 1e-8);
        }
    }
}

#[test]
fn verify_accepts_sample_files() {
    let o = run(&["verify", "--category", "semion", &inputs("cobordisms/torus_cylinder.cob"), &inputs("cobordisms/band_birth.cob")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_perturbed_reports_hexagon_and_omega() {
    let o = run(&["verify", "--category", &inputs("categories/fibonacci_perturbed.json"), "--out", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let failed: Vec<String> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert!(failed.iter().any(|n| n == "category.hexagon"), "{failed:?}");
    assert!(failed.iter().any(|n| n.starts_with("omega_lemma")), "{failed:?}");
}

#[test]
fn compose_types_dims() {
    let o = run(&["compose-types", "(1,2; 1)", "(2,1; tau+)", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["composite"], "(1,1; 1, 1, (tau,+))");
    assert_eq!(v["product_dims"], v["composite_dims"]);
    assert_eq!(code(&run(&["compose-types", "(1,2;)", "(1,1;)"])), 1);
    assert_eq!(code(&run(&["compose-types", "(1,2", "(1,1;)"])), 2);
}
