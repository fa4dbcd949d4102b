//! JSON reports, schema 1. Scalars are `[re, im]`; object keys are sorted,
//! so equal inputs give byte-identical output.

use crate::mtc::{ModularCategoryData, ValidationReport};
use crate::scalar::Scalar;
use crate::surgery::{ClosedInvariant, TauBlocks};
use crate::tqft2::functor::AnomalyLedger;
use crate::tqft2::twovect::TwoHom;
use crate::tqft2::verify::AxiomOutcome;
use nalgebra::DMatrix;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

pub fn scalar(z: Scalar) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &DMatrix<Scalar>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| scalar(m[(r, c)])).collect()))
            .collect(),
    )
}

fn names(cat: &ModularCategoryData, labels: &[usize]) -> Value {
    json!(labels.iter().map(|&l| cat.labels[l].clone()).collect::<Vec<_>>())
}

/// `(ζ, η)` sub-blocks of one τ block matrix, `η` slow.
pub fn tau_blocks(cat: &ModularCategoryData, b: &TauBlocks) -> Value {
    let mut subs = Vec::new();
    for (e, eta) in b.target.zetas.iter().enumerate() {
        for (z, zeta) in b.source.zetas.iter().enumerate() {
            subs.push(json!({
                "zeta": names(cat, zeta),
                "eta": names(cat, eta),
                "matrix": matrix(&b.blocks[e][z]),
            }));
        }
    }
    json!({
        "sigma": b.sigma,
        "mu": b.mu,
        "source_dim": b.source.dim(),
        "target_dim": b.target.dim(),
        "sub_blocks": subs,
    })
}

/// One entry per `(i, j)` of the grid, `i` slow.
pub fn block_grid(cat: &ModularCategoryData, grid: &[Vec<TauBlocks>], rows: &[Vec<usize>], cols: &[Vec<usize>]) -> Value {
    let mut out = Vec::new();
    for (r, row) in grid.iter().enumerate() {
        for (c, b) in row.iter().enumerate() {
            out.push(json!({
                "i": names(cat, &rows[r]),
                "j": names(cat, &cols[c]),
                "block": tau_blocks(cat, b),
            }));
        }
    }
    Value::Array(out)
}

pub fn two_hom(h: &TwoHom) -> Value {
    Value::Array(
        h.maps
            .iter()
            .map(|row| Value::Array(row.iter().map(matrix).collect()))
            .collect(),
    )
}

pub fn category(cat: &ModularCategoryData, v: &ValidationReport) -> Value {
    let checks: Vec<Value> = v
        .checks
        .iter()
        .map(|c| json!({"axiom": c.axiom.to_string(), "residual": c.residual, "passed": c.passed}))
        .collect();
    let delta = cat.delta().ok().map(scalar).unwrap_or(Value::Null);
    json!({
        "schema": SCHEMA,
        "command": "check-category",
        "category": cat.name,
        "rank": cat.rank(),
        "global_dimension": scalar(cat.rank_d()),
        "gauss_sum": delta,
        "checks": checks,
        "passed": v.all_passed(),
    })
}

pub fn closed(cat: &ModularCategoryData, c: &ClosedInvariant) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "eval-tau",
        "category": cat.name,
        "tau": scalar(c.tau),
        "bracket": scalar(c.bracket),
        "sigma": c.sigma,
        "mu": c.mu,
    })
}

pub fn axioms(cat: &ModularCategoryData, outcomes: &[AxiomOutcome], ledger: &AnomalyLedger) -> Value {
    let checks: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"name": o.name, "passed": o.passed, "residual": o.residual, "detail": o.detail}))
        .collect();
    let anomalies: Vec<Value> = ledger
        .entries
        .iter()
        .map(|e| {
            json!({
                "sigma1": e.sigma1,
                "sigma2": e.sigma2,
                "sigma": e.sigma,
                "exponent": e.exponent(),
                "k": scalar(e.k),
                "formal": e.formal,
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "verify",
        "category": cat.name,
        "checks": checks,
        "anomalies": anomalies,
        "passed": outcomes.iter().all(|o| o.passed),
    })
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_are_pairs() {
        assert_eq!(scalar(Scalar::new(0.5, -2.0)).to_string(), "[0.5,-2.0]");
        let m = DMatrix::from_element(1, 2, Scalar::new(1.0, 0.0));
        assert_eq!(matrix(&m).to_string(), "[[[1.0,0.0],[1.0,0.0]]]");
    }
}
