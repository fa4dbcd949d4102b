//! Skeletal modular category data: loading, axiom checks, derived constants.
//!
//! Labels are stored 0-based internally with index 0 the monoidal unit.
//! F-symbols use the convention
//! `|((ab)_e c)_d> = sum_f F^{abc}_{d;ef} |(a(bc)_f)_d>`
//! and the braiding acts on a fusion channel as `|(ab)_e> -> R^{ab}_e |(ba)_e>`.

use crate::error::{Error, Result};
use crate::scalar::{approx_eq, eval_expr, real, Scalar, DEFAULT_TOLERANCE};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

const TRIVIAL_JSON: &str = include_str!("data/trivial.json");
const SEMION_JSON: &str = include_str!("data/semion.json");
const FIBONACCI_JSON: &str = include_str!("data/fibonacci.json");

/// Names of the categories shipped with the crate.
pub const BUNDLED: [&str; 3] = ["trivial", "semion", "fibonacci"];

pub fn bundled_source(name: &str) -> Option<&'static str> {
    match name {
        "trivial" => Some(TRIVIAL_JSON),
        "semion" => Some(SEMION_JSON),
        "fibonacci" => Some(FIBONACCI_JSON),
        _ => None,
    }
}

pub fn bundled_category(name: &str) -> Result<ModularCategoryData> {
    let src = bundled_source(name)
        .ok_or_else(|| Error::parse(format!("no bundled category named '{name}'")))?;
    load_category(src)
}

/// One associator block `F^{abc}_d`.
#[derive(Clone, Debug)]
pub struct FBlock {
    /// Intermediate labels `e` with `e in a(x)b` and `d in e(x)c`.
    pub rows: Vec<usize>,
    /// Intermediate labels `f` with `f in b(x)c` and `d in a(x)f`.
    pub cols: Vec<usize>,
    pub matrix: DMatrix<Scalar>,
    pub inverse: DMatrix<Scalar>,
}

#[derive(Clone, Debug)]
pub struct ModularCategoryData {
    pub name: String,
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    fusion: Vec<u32>,
    fsymbols: HashMap<[usize; 4], FBlock>,
    rsymbols: HashMap<[usize; 3], Scalar>,
    pub twist: Vec<Scalar>,
    pub qdim: Vec<Scalar>,
    pub pivot: Vec<Scalar>,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Unit,
    Duality,
    Dimension,
    Pentagon,
    Hexagon,
    Ribbon,
    Modularity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Unit => "unit",
            Axiom::Duality => "duality",
            Axiom::Dimension => "dimension",
            Axiom::Pentagon => "pentagon",
            Axiom::Hexagon => "hexagon",
            Axiom::Ribbon => "ribbon",
            Axiom::Modularity => "modularity",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn residual(&self, axiom: Axiom) -> f64 {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .map_or(f64::NAN, |c| c.residual)
    }

    /// First failing check, as an error.
    pub fn into_result(self) -> Result<()> {
        match self.checks.into_iter().find(|c| !c.passed) {
            Some(c) => Err(Error::Consistency {
                axiom: c.axiom.to_string(),
                residual: c.residual,
            }),
            None => Ok(()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LabelRef {
    Name(String),
    Index(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarLit {
    Text(String),
    Number(f64),
}

#[derive(Deserialize)]
struct FEntry {
    key: [LabelRef; 4],
    matrix: Vec<Vec<ScalarLit>>,
}

#[derive(Deserialize)]
struct REntry {
    key: [LabelRef; 3],
    value: ScalarLit,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryFile {
    #[serde(default)]
    name: Option<String>,
    labels: Vec<String>,
    dual: Vec<LabelRef>,
    fusion: Vec<(LabelRef, LabelRef, LabelRef, u32)>,
    #[serde(rename = "F", default)]
    f: Vec<FEntry>,
    #[serde(rename = "R", default)]
    r: Vec<REntry>,
    twist: Vec<ScalarLit>,
    qdim: Vec<ScalarLit>,
    pivot: Vec<ScalarLit>,
    #[serde(default)]
    tolerance: Option<f64>,
}

fn scalar_of(lit: &ScalarLit) -> Result<Scalar> {
    match lit {
        ScalarLit::Text(s) => eval_expr(s),
        ScalarLit::Number(x) => Ok(real(*x)),
    }
}

/// Parses a category file without checking the axioms.
pub fn parse_category(text: &str) -> Result<ModularCategoryData> {
    let file: CategoryFile = serde_json::from_str(text)
        .map_err(|e| Error::parse_at(e.line(), e.column(), e.to_string()))?;
    let rank = file.labels.len();
    if rank == 0 {
        return Err(Error::parse("category needs at least one label"));
    }
    let lookup = |r: &LabelRef| -> Result<usize> {
        match r {
            LabelRef::Name(s) => file
                .labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::parse(format!("unknown label '{s}'"))),
            LabelRef::Index(i) if (1..=rank).contains(i) => Ok(i - 1),
            LabelRef::Index(i) => Err(Error::parse(format!("label index {i} out of range"))),
        }
    };
    let per_label = |v: &[ScalarLit], what: &str| -> Result<Vec<Scalar>> {
        if v.len() != rank {
            return Err(Error::parse(format!(
                "'{what}' has {} entries, expected {rank}",
                v.len()
            )));
        }
        v.iter().map(scalar_of).collect()
    };

    if file.dual.len() != rank {
        return Err(Error::parse("'dual' must list one label per label"));
    }
    let dual = file.dual.iter().map(lookup).collect::<Result<Vec<_>>>()?;

    let mut fusion = vec![0u32; rank * rank * rank];
    let idx = |i: usize, j: usize, k: usize| (i * rank + j) * rank + k;
    for j in 0..rank {
        fusion[idx(0, j, j)] = 1;
        fusion[idx(j, 0, j)] = 1;
    }
    let mut explicit = vec![false; rank * rank * rank];
    for (a, b, c, n) in &file.fusion {
        let (a, b, c) = (lookup(a)?, lookup(b)?, lookup(c)?);
        if *n > 1 {
            return Err(Error::NotSupported(format!(
                "fusion multiplicity {n} for ({}, {}, {})",
                file.labels[a], file.labels[b], file.labels[c]
            )));
        }
        if explicit[idx(a, b, c)] {
            return Err(Error::parse("duplicate fusion entry"));
        }
        explicit[idx(a, b, c)] = true;
        fusion[idx(a, b, c)] = *n;
    }

    let mut cat = ModularCategoryData {
        name: file.name.clone().unwrap_or_else(|| "unnamed".into()),
        labels: file.labels.clone(),
        dual,
        fusion,
        fsymbols: HashMap::new(),
        rsymbols: HashMap::new(),
        twist: per_label(&file.twist, "twist")?,
        qdim: per_label(&file.qdim, "qdim")?,
        pivot: per_label(&file.pivot, "pivot")?,
        tolerance: file.tolerance.unwrap_or(DEFAULT_TOLERANCE),
    };
    if !(cat.tolerance > 0.0) {
        return Err(Error::parse("tolerance must be positive"));
    }

    let mut given: HashMap<[usize; 4], DMatrix<Scalar>> = HashMap::new();
    for entry in &file.f {
        let key = [
            lookup(&entry.key[0])?,
            lookup(&entry.key[1])?,
            lookup(&entry.key[2])?,
            lookup(&entry.key[3])?,
        ];
        let (rows, cols) = cat.f_indices(key[0], key[1], key[2], key[3]);
        let nr = entry.matrix.len();
        if nr != rows.len() || entry.matrix.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::parse(format!(
                "F{} must be {}x{}",
                cat.key_name(&key),
                rows.len(),
                cols.len()
            )));
        }
        let vals = entry
            .matrix
            .iter()
            .flat_map(|r| r.iter().map(scalar_of))
            .collect::<Result<Vec<_>>>()?;
        if given
            .insert(key, DMatrix::from_row_slice(rows.len(), cols.len(), &vals))
            .is_some()
        {
            return Err(Error::parse(format!("duplicate F{}", cat.key_name(&key))));
        }
    }
    for a in 0..rank {
        for b in 0..rank {
            for c in 0..rank {
                for d in 0..rank {
                    let (rows, cols) = cat.f_indices(a, b, c, d);
                    if rows.is_empty() && cols.is_empty() {
                        continue;
                    }
                    let key = [a, b, c, d];
                    let matrix = match given.remove(&key) {
                        Some(m) => m,
                        None if (a == 0 || b == 0 || c == 0) && rows.len() == cols.len() => {
                            DMatrix::identity(rows.len(), cols.len())
                        }
                        None => {
                            return Err(Error::parse(format!(
                                "missing F{}",
                                cat.key_name(&key)
                            )))
                        }
                    };
                    if rows.len() != cols.len() {
                        return Err(Error::parse(format!(
                            "F{} is not square: fusion table is inconsistent",
                            cat.key_name(&key)
                        )));
                    }
                    let inverse = matrix.clone().try_inverse().ok_or_else(|| Error::Consistency {
                        axiom: Axiom::Pentagon.to_string(),
                        residual: f64::INFINITY,
                    })?;
                    cat.fsymbols.insert(
                        key,
                        FBlock {
                            rows,
                            cols,
                            matrix,
                            inverse,
                        },
                    );
                }
            }
        }
    }
    if let Some(key) = given.keys().next() {
        return Err(Error::parse(format!(
            "F{} given for an inadmissible key",
            cat.key_name(key)
        )));
    }

    for entry in &file.r {
        let key = [
            lookup(&entry.key[0])?,
            lookup(&entry.key[1])?,
            lookup(&entry.key[2])?,
        ];
        if cat.n(key[0], key[1], key[2]) == 0 {
            return Err(Error::parse(format!(
                "R given for inadmissible channel ({}, {}; {})",
                cat.labels[key[0]], cat.labels[key[1]], cat.labels[key[2]]
            )));
        }
        if cat.rsymbols.insert(key, scalar_of(&entry.value)?).is_some() {
            return Err(Error::parse("duplicate R entry"));
        }
    }
    for a in 0..rank {
        for b in 0..rank {
            for k in 0..rank {
                if cat.n(a, b, k) == 0 || cat.rsymbols.contains_key(&[a, b, k]) {
                    continue;
                }
                if a == 0 || b == 0 {
                    cat.rsymbols.insert([a, b, k], real(1.0));
                } else {
                    return Err(Error::parse(format!(
                        "missing R for ({}, {}; {})",
                        cat.labels[a], cat.labels[b], cat.labels[k]
                    )));
                }
            }
        }
    }
    Ok(cat)
}

/// Parses and validates; fails on the first axiom whose residual exceeds the tolerance.
pub fn load_category(text: &str) -> Result<ModularCategoryData> {
    let cat = parse_category(text)?;
    cat.validate().into_result()?;
    Ok(cat)
}

impl ModularCategoryData {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name).or_else(|| {
            name.parse::<usize>()
                .ok()
                .filter(|i| (1..=self.rank()).contains(i))
                .map(|i| i - 1)
        })
    }

    fn key_name(&self, key: &[usize]) -> String {
        let names: Vec<&str> = key.iter().map(|&k| self.labels[k].as_str()).collect();
        format!("[{}]", names.join(","))
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        let r = self.rank();
        self.fusion[(i * r + j) * r + k]
    }

    /// Labels `k` with `N_{ab}^k > 0`, ascending.
    pub fn channels(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&k| self.n(a, b, k) > 0).collect()
    }

    fn f_indices(&self, a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
        let rows = (0..self.rank())
            .filter(|&e| self.n(a, b, e) > 0 && self.n(e, c, d) > 0)
            .collect();
        let cols = (0..self.rank())
            .filter(|&f| self.n(b, c, f) > 0 && self.n(a, f, d) > 0)
            .collect();
        (rows, cols)
    }

    pub fn f_block(&self, a: usize, b: usize, c: usize, d: usize) -> Option<&FBlock> {
        self.fsymbols.get(&[a, b, c, d])
    }

    /// `F^{abc}_{d;ef}`, zero when the trees are not admissible.
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Scalar {
        self.f_block(a, b, c, d)
            .and_then(|blk| {
                let r = blk.rows.iter().position(|&x| x == e)?;
                let cc = blk.cols.iter().position(|&x| x == f)?;
                Some(blk.matrix[(r, cc)])
            })
            .unwrap_or_default()
    }

    /// Inverse move: `|(a(bc)_f)_d> = sum_e finv(a,b,c,d,f,e) |((ab)_e c)_d>`.
    pub fn finv(&self, a: usize, b: usize, c: usize, d: usize, f: usize, e: usize) -> Scalar {
        self.f_block(a, b, c, d)
            .and_then(|blk| {
                let cc = blk.cols.iter().position(|&x| x == f)?;
                let r = blk.rows.iter().position(|&x| x == e)?;
                Some(blk.inverse[(cc, r)])
            })
            .unwrap_or_default()
    }

    pub fn r(&self, a: usize, b: usize, k: usize) -> Scalar {
        self.rsymbols.get(&[a, b, k]).copied().unwrap_or_default()
    }

    /// Overwrites one F entry and refreshes the stored inverse.
    pub fn set_f_entry(&mut self, key: [usize; 4], e: usize, f: usize, value: Scalar) -> Result<()> {
        let blk = self
            .fsymbols
            .get_mut(&key)
            .ok_or_else(|| Error::parse("no such F block"))?;
        let r = blk.rows.iter().position(|&x| x == e);
        let cc = blk.cols.iter().position(|&x| x == f);
        let (Some(r), Some(cc)) = (r, cc) else {
            return Err(Error::parse("no such F entry"));
        };
        blk.matrix[(r, cc)] = value;
        blk.inverse = blk
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateCategory("singular F block".into()))?;
        Ok(())
    }

    pub fn set_r(&mut self, key: [usize; 3], value: Scalar) {
        self.rsymbols.insert(key, value);
    }

    /// Global dimension: positive square root of the sum of squared quantum dimensions.
    pub fn rank_d(&self) -> Scalar {
        let s: Scalar = self.qdim.iter().map(|d| d * d).sum();
        s.sqrt()
    }

    pub fn delta(&self) -> Result<Scalar> {
        let d: Scalar = self
            .twist
            .iter()
            .zip(&self.qdim)
            .map(|(v, d)| d * d / v)
            .sum();
        if d.norm() <= self.tolerance {
            return Err(Error::DegenerateCategory(format!("|Delta| = {:.3e}", d.norm())));
        }
        Ok(d)
    }

    /// Unnormalized S-matrix, traces of the double braiding on `V_i (x) V_j`.
    pub fn s_tilde(&self) -> DMatrix<Scalar> {
        let r = self.rank();
        DMatrix::from_fn(r, r, |i, j| {
            (0..r)
                .filter(|&k| self.n(i, j, k) > 0)
                .map(|k| self.r(i, j, k) * self.r(j, i, k) * self.qdim[k])
                .sum()
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let tol = self.tolerance;
        let mut checks = Vec::new();
        let mut push = |axiom, residual: f64, extra: bool| {
            checks.push(AxiomCheck {
                axiom,
                residual,
                passed: extra && residual < tol,
            })
        };
        push(Axiom::Unit, self.unit_residual(), true);
        push(Axiom::Duality, self.duality_residual(), true);
        push(Axiom::Dimension, self.dimension_residual(), true);
        push(Axiom::Pentagon, self.pentagon_residual(), true);
        push(Axiom::Hexagon, self.hexagon_residual(), true);
        push(Axiom::Ribbon, self.ribbon_residual(), true);
        let (res, det) = self.modularity_residual();
        push(Axiom::Modularity, res, det > tol);
        ValidationReport { checks }
    }

    pub fn unit_residual(&self) -> f64 {
        let r = self.rank();
        let mut bad = 0u32;
        for j in 0..r {
            for k in 0..r {
                let want = u32::from(j == k);
                bad += self.n(0, j, k).abs_diff(want) + self.n(j, 0, k).abs_diff(want);
            }
        }
        let mut res = f64::from(bad);
        res = res.max((self.qdim[0] - 1.0).norm());
        res = res.max((self.twist[0] - 1.0).norm());
        res.max((self.pivot[0] - 1.0).norm())
    }

    pub fn duality_residual(&self) -> f64 {
        let r = self.rank();
        let mut res = 0.0f64;
        for i in 0..r {
            let di = self.dual[i];
            if self.dual[di] != i {
                res = res.max(1.0);
            }
            for j in 0..r {
                let want = u32::from(j == di);
                res = res.max(f64::from(self.n(i, j, 0).abs_diff(want)));
            }
            if self.n(i, di, 0) == 0 {
                continue;
            }
            // zig-zag on both sides and the value of the oriented unknot
            let p = self.pivot[i];
            res = res.max((p * self.f(i, di, i, i, 0, 0) - 1.0).norm());
            res = res.max((p * self.finv(di, i, di, di, 0, 0) - 1.0).norm());
            let loop_value = self.twist[i] * self.r(i, di, 0) * p;
            res = res.max((loop_value - self.qdim[i]).norm());
            res = res.max((self.qdim[di] - self.qdim[i]).norm());
            res = res.max((self.twist[di] - self.twist[i]).norm());
        }
        res
    }

    pub fn dimension_residual(&self) -> f64 {
        let r = self.rank();
        let mut res = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                let s: Scalar = (0..r)
                    .map(|k| f64::from(self.n(i, j, k)) * self.qdim[k])
                    .sum();
                res = res.max((self.qdim[i] * self.qdim[j] - s).norm());
            }
        }
        res
    }

    pub fn pentagon_residual(&self) -> f64 {
        let r = self.rank();
        let mut res = 0.0f64;
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        for e in 0..r {
                            res = res.max(self.pentagon_block(a, b, c, d, e));
                        }
                    }
                }
            }
        }
        res
    }

    fn pentagon_block(&self, a: usize, b: usize, c: usize, d: usize, e: usize) -> f64 {
        let r = self.rank();
        let mut res = 0.0f64;
        for f in self.channels(a, b) {
            for g in self.channels(f, c) {
                if self.n(g, d, e) == 0 {
                    continue;
                }
                for l in self.channels(c, d) {
                    for k in self.channels(b, l) {
                        if self.n(a, k, e) == 0 {
                            continue;
                        }
                        let lhs = self.f(f, c, d, e, g, l) * self.f(a, b, l, e, f, k);
                        let rhs: Scalar = (0..r)
                            .map(|h| {
                                self.f(a, b, c, g, f, h)
                                    * self.f(a, h, d, e, g, k)
                                    * self.f(b, c, d, k, h, l)
                            })
                            .sum();
                        res = res.max((lhs - rhs).norm());
                    }
                }
            }
        }
        res
    }

    pub fn hexagon_residual(&self) -> f64 {
        let r = self.rank();
        let mut res = 0.0f64;
        let rinv = |x: usize, y: usize, z: usize| {
            let v = self.r(y, x, z);
            if v.norm() == 0.0 {
                v
            } else {
                1.0 / v
            }
        };
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        for e in self.channels(a, b) {
                            if self.n(e, c, d) == 0 {
                                continue;
                            }
                            for f in self.channels(c, a) {
                                if self.n(b, f, d) == 0 {
                                    continue;
                                }
                                let mut l1 = Scalar::default();
                                let mut l2 = Scalar::default();
                                for g in self.channels(b, c) {
                                    let outer = self.f(a, b, c, d, e, g) * self.f(b, c, a, d, g, f);
                                    l1 += outer * self.r(a, g, d);
                                    l2 += outer * rinv(a, g, d);
                                }
                                let r1 = self.r(a, b, e) * self.f(b, a, c, d, e, f) * self.r(a, c, f);
                                let r2 = rinv(a, b, e) * self.f(b, a, c, d, e, f) * rinv(a, c, f);
                                res = res.max((l1 - r1).norm()).max((l2 - r2).norm());
                            }
                        }
                    }
                }
            }
        }
        res
    }

    /// Balancing `R^{ab}_c R^{ba}_c = v_c / (v_a v_b)` and twist invertibility.
    pub fn ribbon_residual(&self) -> f64 {
        let r = self.rank();
        let mut res = 0.0f64;
        for v in &self.twist {
            if v.norm() <= self.tolerance {
                return f64::INFINITY;
            }
        }
        for a in 0..r {
            for b in 0..r {
                for k in self.channels(a, b) {
                    let lhs = self.r(a, b, k) * self.r(b, a, k);
                    let rhs = self.twist[k] / (self.twist[a] * self.twist[b]);
                    res = res.max((lhs - rhs).norm());
                }
            }
        }
        res
    }

    /// Returns `(max |S^2 - D^2 C|, |det S|)`.
    pub fn modularity_residual(&self) -> (f64, f64) {
        let s = self.s_tilde();
        let d2: Scalar = self.qdim.iter().map(|d| d * d).sum();
        let sq = &s * &s;
        let r = self.rank();
        let mut res = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                let want = if j == self.dual[i] { d2 } else { Scalar::default() };
                res = res.max((sq[(i, j)] - want).norm());
            }
        }
        (res, s.determinant().norm())
    }

    pub fn approx_eq(&self, a: Scalar, b: Scalar) -> bool {
        approx_eq(a, b, self.tolerance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_load() {
        for name in BUNDLED {
            let cat = bundled_category(name).unwrap();
            assert!(cat.validate().all_passed(), "{name}: {:?}", cat.validate());
        }
    }

    #[test]
    fn defaults_for_unit() {
        let cat = bundled_category("fibonacci").unwrap();
        assert_eq!(cat.f(0, 1, 1, 0, 1, 0), real(1.0));
        assert_eq!(cat.r(0, 1, 1), real(1.0));
        assert_eq!(cat.channels(1, 1), vec![0, 1]);
    }

    #[test]
    fn multiplicity_is_rejected() {
        let src = r#"{"labels":["1","a"],"dual":["1","a"],"fusion":[["a","a","1",1],["a","a","a",2]],
            "twist":["1","1"],"qdim":["1","1"],"pivot":["1","1"]}"#;
        assert!(matches!(parse_category(src), Err(Error::NotSupported(_))));
    }

    #[test]
    fn bad_json_has_position() {
        match parse_category("{\"labels\": [\n1,") {
            Err(Error::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("{other:?}"),
        }
    }
}
