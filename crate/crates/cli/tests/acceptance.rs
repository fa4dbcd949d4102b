//! One report line per acceptance criterion; run with `--nocapture` to see them.

use ribbon_tqft::diagram::vertical_concat;
use ribbon_tqft::mtc::BUNDLED;
use ribbon_tqft::scalar::Scalar;
use ribbon_tqft::surgery::tau_closed;
use ribbon_tqft::tqft2::functor::{
    anomaly_k, anomaly_k_product_form, horizontal_compose_x, vertical_compose_x, AnomalyLedger, Cell,
};
use ribbon_tqft::tqft2::samples::{closed_samples, horizontal_pairs, vertical_pairs};
use ribbon_tqft::tqft2::verify::{
    check_cocycle, check_omega_lemma, check_ring_identity, dimension_functoriality, small_types, solve_exponent,
};
use ribbon_tqft::{bundled_category, ModularCategoryData};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

struct Line {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

impl Line {
    fn print(&self) {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        println!("criterion {:<3} {mark}  {}: {}", self.id, self.title, self.detail);
    }
}

fn cats() -> Vec<ModularCategoryData> {
    BUNDLED.iter().map(|n| bundled_category(n).unwrap()).collect()
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn criterion_1() -> Line {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut ok = true;
    for name in BUNDLED {
        let t = Instant::now();
        let cat = bundled_category(name).unwrap();
        let report = cat.validate();
        let el = t.elapsed();
        slowest = slowest.max(el);
        for c in &report.checks {
            worst = worst.max(c.residual);
            ok &= c.passed && c.residual < 1e-9;
        }
        ok &= el < Duration::from_secs(1);
    }
    Line {
        id: "1",
        title: "category consistency",
        passed: ok,
        detail: format!("worst residual {worst:.2e}, slowest load+validate {}", secs(slowest)),
    }
}

fn criterion_2() -> Line {
    let mut worst: f64 = 0.0;
    for cat in cats() {
        let d = cat.delta().unwrap();
        worst = worst.max((d * d.conj() - cat.rank_d() * cat.rank_d()).norm());
    }
    Line {
        id: "2",
        title: "Gauss sum modulus",
        passed: worst < 1e-8,
        detail: format!("max |ΔΔ̄ - 𝒟²| = {worst:.2e}"),
    }
}

fn criterion_3() -> Line {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for cat in cats() {
        let inv = Scalar::new(1.0, 0.0) / cat.rank_d();
        for (name, d) in closed_samples() {
            let want = match name {
                "empty" | "unknot+1" | "unknot-1" => inv,
                "unknot0" => Scalar::new(1.0, 0.0),
                _ => continue,
            };
            let t = Instant::now();
            let got = tau_closed(&cat, &d).unwrap();
            slowest = slowest.max(t.elapsed());
            worst = worst.max((got - want).norm());
        }
    }
    Line {
        id: "3",
        title: "closed invariants",
        passed: worst < 1e-8 && slowest < Duration::from_secs(1),
        detail: format!("worst deviation {worst:.2e}, slowest {}", secs(slowest)),
    }
}

fn criterion_4() -> Line {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for cat in cats() {
        let pool: Vec<_> = closed_samples().into_iter().filter(|(n, _)| *n != "empty").collect();
        for (_, a) in &pool {
            for (_, b) in &pool {
                let lhs = tau_closed(&cat, &vertical_concat(a, b).unwrap()).unwrap();
                let rhs = cat.rank_d() * tau_closed(&cat, a).unwrap() * tau_closed(&cat, b).unwrap();
                worst = worst.max((lhs - rhs).norm());
                pairs += 1;
            }
        }
    }
    Line {
        id: "4",
        title: "multiplicativity",
        passed: worst < 1e-8,
        detail: format!("{pairs} connected sums, worst deviation {worst:.2e}"),
    }
}

fn criterion_5() -> Line {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for name in ["fibonacci", "semion"] {
        let cat = bundled_category(name).unwrap();
        for n in [1, 2] {
            worst = worst.max(check_omega_lemma(&cat, n).unwrap().0);
        }
    }
    let el = t.elapsed();
    Line {
        id: "5",
        title: "ω-lemma",
        passed: worst < 1e-8 && el < Duration::from_secs(30),
        detail: format!("n = 1, 2 over Fibonacci and semion, worst deviation {worst:.2e}, {}", secs(el)),
    }
}

fn criterion_6() -> Line {
    let mut worst: f64 = 0.0;
    for cat in cats() {
        worst = worst.max(check_ring_identity(&cat).unwrap().0);
    }
    Line {
        id: "6",
        title: "ring projector identity",
        passed: worst < 1e-8,
        detail: format!("all color pairs in bundled categories, worst deviation {worst:.2e}"),
    }
}

fn criterion_7() -> Line {
    let cat = bundled_category("fibonacci").unwrap();
    let types = small_types(&cat, 2);
    let (checked, bad) = dimension_functoriality(&cat, &types).unwrap();
    Line {
        id: "7",
        title: "2-matrix functoriality on 1-morphisms",
        passed: bad.is_empty() && checked > 0,
        detail: format!("{} types, {checked} composable pairs, {} mismatches", types.len(), bad.len()),
    }
}

/// Measured `k` on every stacked pair: `X(M₁·M₂) = k X(M₂) X(M₁)`; `None`
/// when the product vanishes and `k` cannot be read off.
fn measured_anomalies(cat: &ModularCategoryData) -> Vec<(String, i64, Option<Scalar>)> {
    let mut ledger = AnomalyLedger::default();
    let mut out = Vec::new();
    for (name, a, b) in vertical_pairs() {
        let r = vertical_compose_x(cat, &Cell::Graph(a), &Cell::Graph(b), &mut ledger).unwrap();
        let mut best = (0.0, None);
        for (p, c) in r.product.maps.iter().flatten().zip(r.composite.maps.iter().flatten()) {
            for (x, y) in p.iter().zip(c.iter()) {
                if x.norm() > best.0 {
                    best = (x.norm(), Some(y / x));
                }
            }
        }
        let k = if best.0 > 1e-9 { best.1 } else { None };
        out.push((name.to_string(), r.anomaly.exponent(), k));
    }
    out
}

fn criterion_8() -> (Line, Line, Line) {
    let mut stated_ok = true;
    let mut derived_ok = true;
    let mut stated = Vec::new();
    let mut nonzero = 0;
    let mut vanishing = 0;
    for name in ["semion", "fibonacci"] {
        let cat = bundled_category(name).unwrap();
        let d = cat.rank_d();
        let delta = cat.delta().unwrap();
        for (pair, e, k) in measured_anomalies(&cat) {
            let Some(k) = k else {
                vanishing += 1;
                continue;
            };
            if e != 0 {
                nonzero += 1;
            }
            let lit = anomaly_k_product_form(&cat, e).unwrap();
            if (lit - k).norm() > 1e-8 {
                stated_ok = false;
                let found = solve_exponent(d * delta, k, 8, 1e-8);
                stated.push(format!("{name}/{pair}: e={e}, k={:.4}{:+.4}i, (𝒟Δ)^e={:.4}{:+.4}i, exponent fit {found:?}", k.re, k.im, lit.re, lit.im));
            }
            let derived = anomaly_k(&cat, e).unwrap();
            derived_ok &= (derived - k).norm() < 1e-8 && solve_exponent(d / delta, k, 8, 1e-8) == Some(e);
        }
    }
    let (fails, detail) = check_cocycle(100, 2024);
    let stated_line = Line {
        id: "8a",
        title: "vertical anomaly, stated form (𝒟Δ)^(σ₁+σ₂-σ)",
        passed: stated_ok,
        detail: if stated_ok {
            "matches on all stacked pairs".into()
        } else {
            format!("mismatch on {} of {nonzero} pairs with nonzero exponent: {}", stated.len(), stated.join("; "))
        },
    };
    let derived_line = Line {
        id: "8b",
        title: "vertical anomaly, block-formula form (𝒟/Δ)^(σ₁+σ₂-σ)",
        passed: derived_ok,
        detail: format!(
            "{nonzero} pairs with nonzero exponent, exponent recovered exactly; {vanishing} pairs with vanishing product skipped"
        ),
    };
    let cocycle_line = Line {
        id: "8c",
        title: "anomaly cocycle identity",
        passed: fails == 0.0,
        detail,
    };
    (stated_line, derived_line, cocycle_line)
}

fn criterion_9() -> Line {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for name in ["semion", "fibonacci"] {
        let cat = bundled_category(name).unwrap();
        for (_, a, b) in horizontal_pairs(&cat) {
            worst = worst.max(horizontal_compose_x(&cat, &a, &b).unwrap().residual);
            n += 1;
        }
    }
    let el = t.elapsed();
    Line {
        id: "9",
        title: "horizontal intertwining",
        passed: worst < 1e-8 && el < Duration::from_secs(60),
        detail: format!("{n} gluings at m = 1, 2, worst residual {worst:.2e}, {}", secs(el)),
    }
}

fn criterion_10() -> Line {
    let root: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "inputs", "cobordisms"].iter().collect();
    let bin = env!("CARGO_BIN_EXE_ribbon-tqft");
    let mut ok = true;
    let mut n = 0;
    for file in ["unknot_closed.cob", "band_birth.cob"] {
        for cat in BUNDLED {
            let path = root.join(file);
            let go = |cmd: &str| {
                let o = Command::new(bin)
                    .args([cmd, path.to_str().unwrap(), "--out", "json", "--category", cat])
                    .output()
                    .unwrap();
                let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
                (o.status.code(), v["blocks"].to_string())
            };
            let (cf, bf) = go("eval-functor");
            let (ct, bt) = go("eval-tau");
            ok &= cf == Some(0) && ct == Some(0) && bf == bt;
            n += 1;
        }
    }
    Line {
        id: "10",
        title: "restriction to closed types",
        passed: ok,
        detail: format!("{n} eval-functor / eval-tau report pairs compared byte for byte"),
    }
}

#[test]
fn acceptance() {
    let (c8a, c8b, c8c) = criterion_8();
    let lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        c8a,
        c8b,
        c8c,
        criterion_9(),
        criterion_10(),
    ];
    for l in &lines {
        l.print();
    }
    // 8a records the stated form and is expected to fail whenever the exponent is nonzero
    let required: Vec<&Line> = lines.iter().filter(|l| l.id != "8a").collect();
    for l in required {
        assert!(l.passed, "criterion {} failed: {}", l.id, l.detail);
    }
}
