//! Surgery links inside ribbon diagrams: linking matrices, signatures, the
//! colored bracket, the closed invariant and the block matrices of a special
//! ribbon graph between two decorated types.

use crate::diagram::{evaluate_f0, Coloring, RibbonDiagram, Token};
use crate::error::{Error, Result};
use crate::fusion::{Sign, SignedColor, StateSpace, Tree};
use crate::mtc::ModularCategoryData;
use crate::scalar::{powi, Scalar};
use crate::tqft2::types::{DecoratedType, Entry};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurgeryData {
    /// Surgery names carried by each component, sorted; components are
    /// ordered by their smallest name.
    pub components: Vec<Vec<String>>,
    pub framing: Vec<i64>,
    /// Linking matrix with the framings on the diagonal.
    pub linking: Vec<Vec<i64>>,
    pub mu: usize,
}

impl SurgeryData {
    pub fn signature(&self) -> i64 {
        signature(&self.linking)
    }

    /// Component index of every surgery name.
    pub fn name_map(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for (c, names) in self.components.iter().enumerate() {
            for n in names {
                m.insert(n.clone(), c);
            }
        }
        m
    }
}

/// Finds the surgery components of `d` with their framings and linking numbers.
pub fn trace_surgery(d: &RibbonDiagram) -> Result<SurgeryData> {
    let tr = d.trace()?;
    for &a in &tr.open_arcs {
        if let Token::Surgery { name, .. } = &tr.arc_token[a] {
            return Err(Error::UnclosedSurgeryComponent(name.clone()));
        }
    }
    let mut names: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    let mut plain: BTreeSet<usize> = BTreeSet::new();
    for (a, t) in tr.arc_token.iter().enumerate() {
        let root = tr.component_of[a];
        match t {
            Token::Surgery { name, .. } => {
                names.entry(root).or_default().insert(name.clone());
            }
            _ => {
                plain.insert(root);
            }
        }
    }
    if let Some(root) = names.keys().find(|r| plain.contains(r)) {
        let n = names[root].iter().next().cloned().unwrap_or_default();
        return Err(Error::NotSupported(format!(
            "surgery component ?{n} is joined to a colored strand or coupon"
        )));
    }
    let mut comps: Vec<(usize, Vec<String>)> = names
        .into_iter()
        .map(|(r, s)| (r, s.into_iter().collect()))
        .collect();
    comps.sort_by(|a, b| a.1.cmp(&b.1));
    let mut seen = BTreeSet::new();
    for (_, ns) in &comps {
        for n in ns {
            if !seen.insert(n.clone()) {
                return Err(Error::NotSupported(format!(
                    "surgery name ?{n} labels several components"
                )));
            }
        }
    }
    let index: BTreeMap<usize, usize> = comps.iter().enumerate().map(|(i, (r, _))| (*r, i)).collect();
    let mu = comps.len();
    let mut framing = vec![0i64; mu];
    let mut twice = vec![vec![0i64; mu]; mu];
    for &(a, b, s) in &tr.crossings {
        let (Some(&i), Some(&j)) = (
            index.get(&tr.component_of[a]),
            index.get(&tr.component_of[b]),
        ) else {
            continue;
        };
        if i == j {
            framing[i] += s;
        } else {
            twice[i][j] += s;
            twice[j][i] += s;
        }
    }
    for &(a, s) in &tr.twists {
        if let Some(&i) = index.get(&tr.component_of[a]) {
            framing[i] += s;
        }
    }
    let mut linking = vec![vec![0i64; mu]; mu];
    for i in 0..mu {
        for j in 0..mu {
            linking[i][j] = if i == j {
                framing[i]
            } else {
                debug_assert!(twice[i][j] % 2 == 0, "odd crossing count between closed components");
                twice[i][j] / 2
            };
        }
    }
    Ok(SurgeryData {
        components: comps.into_iter().map(|(_, n)| n).collect(),
        framing,
        linking,
        mu,
    })
}

/// Signature `n+ - n-` of a symmetric integer matrix, by exact congruence
/// diagonalization over the rationals.
pub fn signature(b: &[Vec<i64>]) -> i64 {
    let n = b.len();
    let mut a: Vec<Vec<BigRational>> = b
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut sig = 0i64;
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&p| !a[p][p].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some(p) = (k + 1..n).find(|&p| !a[k][p].is_zero()) {
                // hyperbolic pair: e_k + e_p has square 2 a_kp != 0
                for c in 0..n {
                    let v = a[p][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][p].clone();
                    a[r][k] += v;
                }
            } else {
                k += 1;
                continue;
            }
        }
        let piv = a[k][k].clone();
        sig += if piv.is_positive() { 1 } else { -1 };
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &piv;
            for c in k..n {
                let v = &f * &a[k][c];
                a[r][c] -= v;
            }
        }
        for r in k + 1..n {
            a[r][k] = BigRational::zero();
            a[k][r] = BigRational::zero();
        }
        k += 1;
    }
    sig
}

/// All surgery colorings `λ` in lexicographic order with their weight `dim(λ)`.
pub fn surgery_colorings(
    cat: &ModularCategoryData,
    sd: &SurgeryData,
) -> Vec<(Scalar, BTreeMap<String, usize>)> {
    let rank = cat.rank();
    let total = rank.pow(sd.mu as u32);
    (0..total)
        .map(|mut code| {
            let mut lam = vec![0usize; sd.mu];
            for slot in lam.iter_mut().rev() {
                *slot = code % rank;
                code /= rank;
            }
            let mut weight = Scalar::new(1.0, 0.0);
            let mut map = BTreeMap::new();
            for (c, &l) in lam.iter().enumerate() {
                weight *= cat.qdim[l];
                for n in &sd.components[c] {
                    map.insert(n.clone(), l);
                }
            }
            (weight, map)
        })
        .collect()
}

/// `Σ_λ dim(λ) F_0(d, base ∪ λ)`, evaluated in parallel and summed in
/// lexicographic order of `λ`.
pub fn lambda_sum_f0(
    cat: &ModularCategoryData,
    d: &RibbonDiagram,
    sd: &SurgeryData,
    base: &Coloring,
) -> Result<DMatrix<Scalar>> {
    let terms: Vec<Result<DMatrix<Scalar>>> = surgery_colorings(cat, sd)
        .into_par_iter()
        .map(|(w, lam)| {
            let mut col = base.clone();
            col.surgery.extend(lam);
            evaluate_f0(cat, d, &col).map(|m| m * w)
        })
        .collect();
    let mut acc: Option<DMatrix<Scalar>> = None;
    for t in terms {
        let t = t?;
        acc = Some(match acc {
            None => t,
            Some(a) => a + t,
        });
    }
    match acc {
        Some(a) => Ok(a),
        None => evaluate_f0(cat, d, base),
    }
}

/// `{L, Ω}` for a closed diagram.
pub fn bracket(cat: &ModularCategoryData, d: &RibbonDiagram) -> Result<Scalar> {
    if !d.bottom.is_empty() || !d.top.is_empty() {
        return Err(Error::OpenBoundary);
    }
    let sd = trace_surgery(d)?;
    Ok(lambda_sum_f0(cat, d, &sd, &Coloring::new())?[(0, 0)])
}

#[derive(Clone, Copy, Debug)]
pub struct ClosedInvariant {
    pub tau: Scalar,
    pub bracket: Scalar,
    pub sigma: i64,
    pub mu: usize,
}

/// `τ = Δ^σ 𝒟^{-σ-μ-1} {L, Ω}`.
pub fn tau_closed_detail(cat: &ModularCategoryData, d: &RibbonDiagram) -> Result<ClosedInvariant> {
    if !d.bottom.is_empty() || !d.top.is_empty() {
        return Err(Error::OpenBoundary);
    }
    let sd = trace_surgery(d)?;
    let br = lambda_sum_f0(cat, d, &sd, &Coloring::new())?[(0, 0)];
    let sigma = sd.signature();
    let mu = sd.mu as i64;
    let tau = powi(cat.delta()?, sigma) * powi(cat.rank_d(), -sigma - mu - 1) * br;
    Ok(ClosedInvariant {
        tau,
        bracket: br,
        sigma,
        mu: sd.mu,
    })
}

pub fn tau_closed(cat: &ModularCategoryData, d: &RibbonDiagram) -> Result<Scalar> {
    tau_closed_detail(cat, d).map(|r| r.tau)
}

/// Rainbow variable names of a boundary read against a type, one list per
/// integer entry in depth order.
pub fn match_type(
    cat: &ModularCategoryData,
    tokens: &[Token],
    t: &DecoratedType,
    i: &[usize],
    j: &[usize],
) -> Result<Vec<String>> {
    if i.len() != t.m || j.len() != t.n {
        return Err(Error::IndexArityMismatch {
            expected: t.m + t.n,
            got: i.len() + j.len(),
        });
    }
    let want_len: usize = t.m
        + t.n
        + t.entries
            .iter()
            .map(|e| match e {
                Entry::Int(a) => 2 * a,
                Entry::Mark { .. } => 1,
            })
            .sum::<usize>();
    let mismatch = |msg: String| Error::TypeMismatch(format!("boundary vs {t}: {msg}"));
    if tokens.len() != want_len {
        return Err(mismatch(format!("{} strands, type needs {want_len}", tokens.len())));
    }
    let side = |tok: &Token, name: &str, sign: Sign, label: usize| -> Result<()> {
        let ok = match tok {
            Token::Var { name: n, sign: s } => n == name && *s == sign,
            Token::Color { label: l, sign: s } => {
                *s == sign && cat.label_index(l) == Some(label)
            }
            Token::Surgery { .. } => false,
        };
        if ok {
            Ok(())
        } else {
            Err(mismatch(format!("expected side band {name}, found {tok}")))
        }
    };
    let mut pos = 0;
    for k in 1..=t.m {
        side(&tokens[pos], &format!("L{k}"), Sign::Minus, i[k - 1])?;
        pos += 1;
    }
    let mut names = Vec::new();
    for e in &t.entries {
        match e {
            Entry::Int(a) => {
                let ups = &tokens[pos..pos + a];
                let downs = &tokens[pos + a..pos + 2 * a];
                for (k, up) in ups.iter().enumerate() {
                    let down = &downs[a - 1 - k];
                    match (up, down) {
                        (
                            Token::Var { name, sign: Sign::Plus },
                            Token::Var { name: n2, sign: Sign::Minus },
                        ) if name == n2 && !crate::diagram::is_side_name(name) => {
                            names.push(name.clone())
                        }
                        _ => {
                            return Err(mismatch(format!(
                                "rainbow band expected at {}, found {up} .. {down}",
                                pos + k + 1
                            )))
                        }
                    }
                }
                pos += 2 * a;
            }
            Entry::Mark { label, sign } => {
                let ok = matches!(&tokens[pos], Token::Color { label: l, sign: s }
                    if s == sign && cat.label_index(l).is_some() && cat.label_index(l) == cat.label_index(label));
                if !ok {
                    return Err(mismatch(format!("expected mark ({label},{}), found {}", sign.symbol(), tokens[pos])));
                }
                pos += 1;
            }
        }
    }
    for k in (1..=t.n).rev() {
        side(&tokens[pos], &format!("R{k}"), Sign::Plus, j[k - 1])?;
        pos += 1;
    }
    let distinct: BTreeSet<&String> = names.iter().collect();
    if distinct.len() != names.len() {
        return Err(mismatch("a rainbow variable is used twice".into()));
    }
    Ok(names)
}

/// All colorings of `g` rainbow bands, lexicographic.
pub fn rainbow_colorings(rank: usize, g: usize) -> Vec<Vec<usize>> {
    let total = rank.pow(g as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0usize; g];
            for slot in v.iter_mut().rev() {
                *slot = code % rank;
                code /= rank;
            }
            v
        })
        .collect()
}

/// Resolved boundary `Φ(t; ζ; i, j)` as signed colors.
pub fn phi_boundary(
    cat: &ModularCategoryData,
    t: &DecoratedType,
    zeta: &[usize],
    i: &[usize],
    j: &[usize],
) -> Result<Vec<SignedColor>> {
    let mut out: Vec<SignedColor> = i.iter().map(|&l| SignedColor::minus(l)).collect();
    let mut z = zeta.iter();
    for e in &t.entries {
        match e {
            Entry::Int(a) => {
                let cols: Vec<usize> = z.by_ref().take(*a).copied().collect();
                if cols.len() != *a {
                    return Err(Error::IndexArityMismatch {
                        expected: t.genus(),
                        got: zeta.len(),
                    });
                }
                out.extend(cols.iter().map(|&c| SignedColor::plus(c)));
                out.extend(cols.iter().rev().map(|&c| SignedColor::minus(c)));
            }
            Entry::Mark { label, sign } => {
                let l = cat
                    .label_index(label)
                    .ok_or_else(|| Error::NotSupported(format!("mark {label} is not a simple label")))?;
                out.push(SignedColor::new(l, *sign));
            }
        }
    }
    out.extend(j.iter().rev().map(|&l| SignedColor::plus(l)));
    Ok(out)
}

/// The module `⊕_ζ Hom(1, Φ(t; ζ; i, j))` with its basis.
#[derive(Clone, Debug)]
pub struct BlockModule {
    pub zetas: Vec<Vec<usize>>,
    pub spaces: Vec<StateSpace>,
}

impl BlockModule {
    pub fn new(cat: &ModularCategoryData, t: &DecoratedType, i: &[usize], j: &[usize]) -> Result<Self> {
        let zetas = rainbow_colorings(cat.rank(), t.genus());
        let spaces = zetas
            .iter()
            .map(|z| phi_boundary(cat, t, z, i, j).map(|b| StateSpace::new(cat, &b)))
            .collect::<Result<_>>()?;
        Ok(BlockModule { zetas, spaces })
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim(0)).collect()
    }

    pub fn dim(&self) -> usize {
        self.block_dims().iter().sum()
    }

    /// Basis labels `(ζ, tree)` in order.
    pub fn basis(&self) -> Vec<(Vec<usize>, Tree)> {
        self.zetas
            .iter()
            .zip(&self.spaces)
            .flat_map(|(z, s)| s.basis(0).iter().map(move |t| (z.clone(), t.clone())))
            .collect()
    }
}

/// `τ_ζ^η` for every `(ζ, η)`, as one matrix from the `t` module to the `s` module.
#[derive(Clone, Debug)]
pub struct TauBlocks {
    pub source: BlockModule,
    pub target: BlockModule,
    /// `blocks[η][ζ]`.
    pub blocks: Vec<Vec<DMatrix<Scalar>>>,
    pub sigma: i64,
    pub mu: usize,
}

impl TauBlocks {
    pub fn assembled(&self) -> DMatrix<Scalar> {
        let rd = self.target.block_dims();
        let cd = self.source.block_dims();
        let mut m = DMatrix::zeros(rd.iter().sum(), cd.iter().sum());
        let mut r0 = 0;
        for (e, row) in self.blocks.iter().enumerate() {
            let mut c0 = 0;
            for (z, b) in row.iter().enumerate() {
                m.view_mut((r0, c0), (rd[e], cd[z])).copy_from(b);
                c0 += cd[z];
            }
            r0 += rd[e];
        }
        m
    }
}

/// Block matrices `τ_ζ^η = Δ^σ 𝒟^{-g⁺-σ-μ} dim(η) Σ_λ dim(λ) F_0(Ω, ζ, η, λ)` of a
/// special ribbon graph from `t` to `s`, with side bands colored by `i`, `j`.
pub fn tau_blocks(
    cat: &ModularCategoryData,
    d: &RibbonDiagram,
    t: &DecoratedType,
    s: &DecoratedType,
    i: &[usize],
    j: &[usize],
) -> Result<TauBlocks> {
    if t.m != s.m || t.n != s.n {
        return Err(Error::TypeMismatch(format!("{t} and {s} have different sides")));
    }
    let bottom = match_type(cat, &d.bottom, t, i, j)?;
    let top = match_type(cat, &d.top, s, i, j)?;
    if let Some(n) = bottom.iter().find(|n| top.contains(n)) {
        return Err(Error::TypeMismatch(format!("${n} is on both boundaries")));
    }
    let sd = trace_surgery(d)?;
    let sigma = sd.signature();
    let mut base = Coloring::new();
    for (k, &l) in i.iter().enumerate() {
        base.vars.insert(format!("L{}", k + 1), l);
    }
    for (k, &l) in j.iter().enumerate() {
        base.vars.insert(format!("R{}", k + 1), l);
    }
    let source = BlockModule::new(cat, t, i, j)?;
    let target = BlockModule::new(cat, s, i, j)?;
    let pre = powi(cat.delta()?, sigma) * powi(cat.rank_d(), -(s.genus() as i64) - sigma - sd.mu as i64);
    let grid: Vec<(usize, usize)> = (0..target.zetas.len())
        .flat_map(|e| (0..source.zetas.len()).map(move |z| (e, z)))
        .collect();
    let cells: Vec<Result<DMatrix<Scalar>>> = grid
        .par_iter()
        .map(|&(e, z)| {
            let (eta, zeta) = (&target.zetas[e], &source.zetas[z]);
            let (rows, cols) = (target.spaces[e].dim(0), source.spaces[z].dim(0));
            if rows == 0 || cols == 0 {
                return Ok(DMatrix::zeros(rows, cols));
            }
            let mut col = base.clone();
            for (n, &l) in bottom.iter().zip(zeta) {
                col.vars.insert(n.clone(), l);
            }
            for (n, &l) in top.iter().zip(eta) {
                col.vars.insert(n.clone(), l);
            }
            let dim_eta: Scalar = eta.iter().map(|&l| cat.qdim[l]).product();
            Ok(lambda_sum_f0_serial(cat, d, &sd, &col)? * (pre * dim_eta))
        })
        .collect();
    let mut blocks = vec![Vec::with_capacity(source.zetas.len()); target.zetas.len()];
    for ((e, _), c) in grid.iter().zip(cells) {
        blocks[*e].push(c?);
    }
    Ok(TauBlocks {
        source,
        target,
        blocks,
        sigma,
        mu: sd.mu,
    })
}

/// Sequential version of [`lambda_sum_f0`] for use inside an outer parallel map.
fn lambda_sum_f0_serial(
    cat: &ModularCategoryData,
    d: &RibbonDiagram,
    sd: &SurgeryData,
    base: &Coloring,
) -> Result<DMatrix<Scalar>> {
    let mut acc: Option<DMatrix<Scalar>> = None;
    for (w, lam) in surgery_colorings(cat, sd) {
        let mut col = base.clone();
        col.surgery.extend(lam);
        let t = evaluate_f0(cat, d, &col)? * w;
        acc = Some(match acc {
            None => t,
            Some(a) => a + t,
        });
    }
    match acc {
        Some(a) => Ok(a),
        None => evaluate_f0(cat, d, base),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::mtc::bundled_category;

    #[test]
    fn small_signatures() {
        assert_eq!(signature(&[vec![0]]), 0);
        assert_eq!(signature(&[vec![-1]]), -1);
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), 0);
        assert_eq!(signature(&[]), 0);
    }

    #[test]
    fn trace_examples() {
        let d = parse_diagram("slice cup[?A] @1; cap[?A] @1").unwrap();
        let sd = trace_surgery(&d).unwrap();
        assert_eq!((sd.mu, sd.linking.clone()), (1, vec![vec![0]]));
        let d = parse_diagram("slice cup[?A] @1; twist+ @1; cap[?A] @1").unwrap();
        assert_eq!(trace_surgery(&d).unwrap().linking, vec![vec![1]]);
    }

    #[test]
    fn closed_values() {
        for name in crate::mtc::BUNDLED {
            let cat = bundled_category(name).unwrap();
            let dd = cat.rank_d();
            let empty = RibbonDiagram::identity(vec![]);
            assert!((tau_closed(&cat, &empty).unwrap() - 1.0 / dd).norm() < 1e-10);
            let d = parse_diagram("slice cup[?A] @1; cap[?A] @1").unwrap();
            assert!((tau_closed(&cat, &d).unwrap() - 1.0).norm() < 1e-10);
        }
    }
}
