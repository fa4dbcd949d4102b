//! The extended functor on decorated types and special ribbon graphs, its
//! anomaly under vertical stacking and the structural isomorphism for
//! horizontal gluing.

use super::twovect::{horizontal_compose, vertical_compose, FreeModule, TwoHom, TwoMatrix};
use super::types::{compose_types, DecoratedType};
use crate::diagram::{
    build_cylinder, evaluate_f0, horizontal_assemble, parse_diagram, vertical_concat, Coloring,
    Generator, CupColor, RibbonDiagram, Token,
};
use crate::error::{Error, Result};
use crate::fusion::{SignedColor, StateSpace, Tree};
use crate::mtc::ModularCategoryData;
use crate::scalar::{powi, Scalar};
use crate::surgery::{phi_boundary, rainbow_colorings, tau_blocks, trace_surgery, BlockModule, TauBlocks};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::collections::HashMap;

/// A special ribbon graph between two decorated types.
#[derive(Clone, Debug, PartialEq)]
pub struct Cobordism {
    pub bottom: DecoratedType,
    pub top: DecoratedType,
    pub diagram: RibbonDiagram,
}

impl Cobordism {
    pub fn new(bottom: DecoratedType, top: DecoratedType, diagram: RibbonDiagram) -> Self {
        Cobordism {
            bottom,
            top,
            diagram,
        }
    }

    pub fn cylinder(t: &DecoratedType) -> Self {
        Cobordism::new(t.clone(), t.clone(), build_cylinder(t))
    }
}

/// Either a formal identity on a type or a special ribbon graph.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Identity(DecoratedType),
    Graph(Cobordism),
}

impl Cell {
    pub fn source(&self) -> &DecoratedType {
        match self {
            Cell::Identity(t) => t,
            Cell::Graph(c) => &c.bottom,
        }
    }

    pub fn target(&self) -> &DecoratedType {
        match self {
            Cell::Identity(t) => t,
            Cell::Graph(c) => &c.top,
        }
    }
}

/// Reads `type bottom: ...` and `type top: ...` header lines followed by a
/// diagram body. Line numbers in errors refer to the whole file.
pub fn parse_cobordism(text: &str) -> Result<Cobordism> {
    let mut bottom = None;
    let mut top = None;
    let mut body = String::with_capacity(text.len());
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(rest) = line.strip_prefix("type") {
            let rest = rest.trim_start();
            let (slot, ty) = if let Some(t) = rest.strip_prefix("bottom:") {
                (&mut bottom, t)
            } else if let Some(t) = rest.strip_prefix("top:") {
                (&mut top, t)
            } else {
                return Err(Error::parse_at(ln + 1, 1, "expected 'type bottom:' or 'type top:'"));
            };
            if slot.is_some() {
                return Err(Error::parse_at(ln + 1, 1, "repeated type header"));
            }
            let parsed: DecoratedType = ty.trim().parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse_at(ln + 1, 1, message),
                other => other,
            })?;
            *slot = Some(parsed);
            body.push('\n');
        } else {
            body.push_str(raw);
            body.push('\n');
        }
    }
    let bottom = bottom.ok_or_else(|| Error::parse("missing 'type bottom:' header"))?;
    let top = top.ok_or_else(|| Error::parse("missing 'type top:' header"))?;
    if bottom.m != top.m || bottom.n != top.n {
        return Err(Error::TypeMismatch(format!("{bottom} and {top} have different sides")));
    }
    Ok(Cobordism::new(bottom, top, parse_diagram(&body)?))
}

/// `𝐤^n`; the empty boundary symbol (`None`) maps to 1.
pub fn x_object(rank: usize, n: Option<usize>) -> usize {
    n.map_or(1, |n| rank.pow(n as u32))
}

/// Multi-indices in `I^len`, lexicographic.
pub fn multi_indices(rank: usize, len: usize) -> Vec<Vec<usize>> {
    rainbow_colorings(rank, len)
}

fn basis_label(cat: &ModularCategoryData, zeta: &[usize], tree: &Tree) -> String {
    let names = |v: &[usize]| {
        v.iter()
            .map(|&l| cat.labels[l].as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("({}) [{}]", names(zeta), names(tree))
}

fn free_module(cat: &ModularCategoryData, m: &BlockModule) -> FreeModule {
    FreeModule::new(m.basis().iter().map(|(z, t)| basis_label(cat, z, t)).collect())
}

/// `X(t)_{ij} = ⊕_ζ Hom(1, Φ(t; ζ; i, j))` with rows `I^m` and columns `I^n`.
pub fn x_one_morphism(cat: &ModularCategoryData, t: &DecoratedType) -> Result<TwoMatrix> {
    let rows = multi_indices(cat.rank(), t.m);
    let cols = multi_indices(cat.rank(), t.n);
    let entries = rows
        .iter()
        .map(|i| {
            cols.iter()
                .map(|j| BlockModule::new(cat, t, i, j).map(|m| free_module(cat, &m)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoMatrix {
        rows: rows.len(),
        cols: cols.len(),
        entries,
    })
}

/// The `τ` blocks of a cobordism for every side coloring `(i, j)`.
pub fn x_blocks(cat: &ModularCategoryData, c: &Cobordism) -> Result<Vec<Vec<TauBlocks>>> {
    let rows = multi_indices(cat.rank(), c.bottom.m);
    let cols = multi_indices(cat.rank(), c.bottom.n);
    let grid: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|h| (0..cols.len()).map(move |j| (h, j)))
        .collect();
    let cells: Vec<Result<TauBlocks>> = grid
        .par_iter()
        .map(|&(h, j)| tau_blocks(cat, &c.diagram, &c.bottom, &c.top, &rows[h], &cols[j]))
        .collect();
    let mut out: Vec<Vec<TauBlocks>> = (0..rows.len()).map(|_| Vec::new()).collect();
    for ((h, _), b) in grid.iter().zip(cells) {
        out[*h].push(b?);
    }
    Ok(out)
}

pub fn x_two_morphism(cat: &ModularCategoryData, c: &Cobordism) -> Result<TwoHom> {
    let blocks = x_blocks(cat, c)?;
    let source = x_one_morphism(cat, &c.bottom)?;
    let target = x_one_morphism(cat, &c.top)?;
    let maps = blocks
        .iter()
        .map(|r| r.iter().map(TauBlocks::assembled).collect())
        .collect();
    TwoHom::new(source, target, maps)
}

pub fn x_cell(cat: &ModularCategoryData, c: &Cell) -> Result<TwoHom> {
    match c {
        Cell::Identity(t) => Ok(TwoHom::identity(&x_one_morphism(cat, t)?)),
        Cell::Graph(g) => x_two_morphism(cat, g),
    }
}

/// Anomaly scalar `(𝒟/Δ)^e` for a signature defect `e = σ₁ + σ₂ - σ`.
pub fn anomaly_k(cat: &ModularCategoryData, exponent: i64) -> Result<Scalar> {
    Ok(powi(cat.rank_d() / cat.delta()?, exponent))
}

/// The scalar `(𝒟Δ)^e`, kept for comparison with the measured anomaly.
pub fn anomaly_k_product_form(cat: &ModularCategoryData, exponent: i64) -> Result<Scalar> {
    Ok(powi(cat.rank_d() * cat.delta()?, exponent))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnomalyEntry {
    pub sigma1: i64,
    pub sigma2: i64,
    pub sigma: i64,
    pub k: Scalar,
    /// Set for compositions with a formal identity, where `k = 1` by definition.
    pub formal: bool,
}

impl AnomalyEntry {
    pub fn exponent(&self) -> i64 {
        self.sigma1 + self.sigma2 - self.sigma
    }
}

#[derive(Clone, Debug, Default)]
pub struct AnomalyLedger {
    pub entries: Vec<AnomalyEntry>,
}

impl AnomalyLedger {
    pub fn record(&mut self, e: AnomalyEntry) {
        self.entries.push(e);
    }
}

/// Result of stacking `first` below `second`.
#[derive(Clone, Debug)]
pub struct VerticalResult {
    pub stacked: Option<Cobordism>,
    /// `X` of the stacked graph.
    pub composite: TwoHom,
    /// `X(second) ∘ X(first)`.
    pub product: TwoHom,
    pub anomaly: AnomalyEntry,
    /// `|X(stacked) - k X(second) X(first)|`, entrywise relative.
    pub residual: f64,
}

fn cell_signature(c: &Cell) -> Result<i64> {
    match c {
        Cell::Identity(_) => Ok(0),
        Cell::Graph(g) => Ok(trace_surgery(&g.diagram)?.signature()),
    }
}

pub fn vertical_compose_x(
    cat: &ModularCategoryData,
    first: &Cell,
    second: &Cell,
    ledger: &mut AnomalyLedger,
) -> Result<VerticalResult> {
    if first.target() != second.source() {
        return Err(Error::BoundaryTypeMismatch(format!(
            "{} is stacked under {}",
            first.target(),
            second.source()
        )));
    }
    let x1 = x_cell(cat, first)?;
    let x2 = x_cell(cat, second)?;
    let product = vertical_compose(&x1, &x2)?;
    let (s1, s2) = (cell_signature(first)?, cell_signature(second)?);
    let (stacked, composite, anomaly) = match (first, second) {
        (Cell::Graph(a), Cell::Graph(b)) => {
            let d = vertical_concat(&a.diagram, &b.diagram)?;
            let g = Cobordism::new(a.bottom.clone(), b.top.clone(), d);
            let sigma = trace_surgery(&g.diagram)?.signature();
            let composite = x_two_morphism(cat, &g)?;
            let exponent = s1 + s2 - sigma;
            let entry = AnomalyEntry {
                sigma1: s1,
                sigma2: s2,
                sigma,
                k: anomaly_k(cat, exponent)?,
                formal: false,
            };
            (Some(g), composite, entry)
        }
        (Cell::Identity(_), other) | (other, Cell::Identity(_)) => {
            let composite = x_cell(cat, other)?;
            let s = cell_signature(other)?;
            let entry = AnomalyEntry {
                sigma1: s1,
                sigma2: s2,
                sigma: s,
                k: Scalar::new(1.0, 0.0),
                formal: true,
            };
            let stacked = match other {
                Cell::Graph(g) => Some(g.clone()),
                Cell::Identity(_) => None,
            };
            (stacked, composite, entry)
        }
    };
    let residual = composite.max_diff(&product.scale(anomaly.k));
    ledger.record(anomaly.clone());
    Ok(VerticalResult {
        stacked,
        composite,
        product,
        anomaly,
        residual,
    })
}

/// Graph presenting the horizontal composite along the shared sides.
pub fn horizontal_cobordism(left: &Cobordism, right: &Cobordism) -> Result<Cobordism> {
    let bottom = compose_types(&left.bottom, &right.bottom)?;
    let top = compose_types(&left.top, &right.top)?;
    let d = horizontal_assemble(&left.diagram, &right.diagram, left.bottom.n)?;
    Ok(Cobordism::new(bottom, top, d))
}

/// The isomorphism `u: X(t₁) X(t₂) -> X(t₁ ∘ t₂)` that closes the two copies
/// of the first shared band with a cap and reads the remaining shared bands as
/// the new rainbow entry.
pub fn structural_iso_u(
    cat: &ModularCategoryData,
    t1: &DecoratedType,
    t2: &DecoratedType,
) -> Result<TwoHom> {
    let tc = compose_types(t1, t2)?;
    let x1 = x_one_morphism(cat, t1)?;
    let x2 = x_one_morphism(cat, t2)?;
    let source = super::twovect::twomatrix_multiply(&x1, &x2)?;
    let target = x_one_morphism(cat, &tc)?;
    let rank = cat.rank();
    let hs = multi_indices(rank, t1.m);
    let js = multi_indices(rank, t2.n);
    let is = multi_indices(rank, t1.n);
    let mut maps = Vec::with_capacity(hs.len());
    for h in &hs {
        let mut row = Vec::with_capacity(js.len());
        for j in &js {
            let tgt = BlockModule::new(cat, &tc, h, j)?;
            let mut offsets = HashMap::new();
            let mut off = 0;
            for (z, s) in tgt.zetas.iter().zip(&tgt.spaces) {
                offsets.insert(z.clone(), off);
                off += s.dim(0);
            }
            let mut cols = Vec::new();
            for i in &is {
                let a = BlockModule::new(cat, t1, h, i)?;
                let b = BlockModule::new(cat, t2, i, j)?;
                let mid: Vec<usize> = i[1..].iter().rev().copied().collect();
                let mut caps = HashMap::new();
                for (a1, (z1, sa)) in a.zetas.iter().zip(&a.spaces).enumerate() {
                    for xt in sa.basis(0) {
                        for (b1, (z2, sb)) in b.zetas.iter().zip(&b.spaces).enumerate() {
                            if sb.dim(0) == 0 {
                                continue;
                            }
                            if !caps.contains_key(&(a1, b1)) {
                                caps.insert((a1, b1), cap_map(cat, t1, t2, z1, z2, h, i, j)?);
                            }
                            let cap = &caps[&(a1, b1)];
                            let mut zeta = z1.clone();
                            zeta.extend_from_slice(&mid);
                            zeta.extend_from_slice(z2);
                            let base = offsets[&zeta];
                            for yt in sb.basis(0) {
                                let mut tree = xt.clone();
                                tree.extend_from_slice(yt);
                                let col = cap.0.index_of(&tree).expect("concatenated tree is admissible");
                                let mut v = DMatrix::zeros(tgt.dim(), 1);
                                for r in 0..cap.1.nrows() {
                                    v[(base + r, 0)] = cap.1[(r, col)];
                                }
                                cols.push(v);
                            }
                        }
                    }
                }
            }
            let mut m = DMatrix::zeros(tgt.dim(), cols.len());
            for (c, v) in cols.iter().enumerate() {
                m.set_column(c, &v.column(0));
            }
            row.push(m);
        }
        maps.push(row);
    }
    TwoHom::new(source, target, maps)
}

/// The cap on the adjacent copies of the first shared band, as a map out of
/// `Hom(1, Φ(t₁; ζ₁; h, i) ⊗ Φ(t₂; ζ₂; i, j))`.
#[allow(clippy::too_many_arguments)]
fn cap_map(
    cat: &ModularCategoryData,
    t1: &DecoratedType,
    t2: &DecoratedType,
    z1: &[usize],
    z2: &[usize],
    h: &[usize],
    i: &[usize],
    j: &[usize],
) -> Result<(StateSpace, DMatrix<Scalar>)> {
    let mut boundary: Vec<SignedColor> = phi_boundary(cat, t1, z1, h, i)?;
    let p = boundary.len() - 1;
    boundary.extend(phi_boundary(cat, t2, z2, i, j)?);
    let tokens: Vec<Token> = boundary
        .iter()
        .map(|c| Token::color(&cat.labels[c.label], c.sign))
        .collect();
    let cap_color = CupColor::Color(cat.labels[i[0]].clone());
    let d = RibbonDiagram::new(tokens, vec![Generator::cap(p, cap_color)])?;
    let m = evaluate_f0(cat, &d, &Coloring::new())?;
    Ok((StateSpace::new(cat, &boundary), m))
}

#[derive(Clone, Debug)]
pub struct HorizontalResult {
    pub glued: Cobordism,
    pub composite: TwoHom,
    /// `X(M₁ ∘ M₂) u₁`.
    pub lhs: TwoHom,
    /// `u₂ (X(M₁) ∘ X(M₂))`.
    pub rhs: TwoHom,
    pub residual: f64,
}

pub fn horizontal_compose_x(
    cat: &ModularCategoryData,
    left: &Cobordism,
    right: &Cobordism,
) -> Result<HorizontalResult> {
    let glued = horizontal_cobordism(left, right)?;
    let composite = x_two_morphism(cat, &glued)?;
    let x1 = x_two_morphism(cat, left)?;
    let x2 = x_two_morphism(cat, right)?;
    let u1 = structural_iso_u(cat, &left.bottom, &right.bottom)?;
    let u2 = structural_iso_u(cat, &left.top, &right.top)?;
    let lhs = vertical_compose(&u1, &composite)?;
    let rhs = vertical_compose(&horizontal_compose(&x1, &x2)?, &u2)?;
    let residual = lhs.max_diff(&rhs);
    Ok(HorizontalResult {
        glued,
        composite,
        lhs,
        rhs,
        residual,
    })
}
