//! Fusion-tree state spaces and block morphisms.
//!
//! A basis vector of `Hom(V_k, X_1 (x) ... (x) X_n)` is a left-nested tree
//! `((...(X_1 X_2)_{c_2} X_3)_{c_3} ...)_{c_n}`, stored as the charge sequence
//! `c_1..c_n` with `c_1 = X_1` and `c_n = k`. The empty boundary has the
//! single empty tree in charge `1`.

use crate::error::{Error, Result};
use crate::mtc::ModularCategoryData;
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub type Tree = Vec<usize>;
pub type SparseVec = BTreeMap<Tree, Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedColor {
    pub label: usize,
    pub sign: Sign,
}

impl SignedColor {
    pub fn new(label: usize, sign: Sign) -> Self {
        SignedColor { label, sign }
    }

    pub fn plus(label: usize) -> Self {
        SignedColor::new(label, Sign::Plus)
    }

    pub fn minus(label: usize) -> Self {
        SignedColor::new(label, Sign::Minus)
    }

    /// The simple object this strand carries, with duals resolved.
    pub fn resolved(self, cat: &ModularCategoryData) -> usize {
        match self.sign {
            Sign::Plus => self.label,
            Sign::Minus => cat.dual[self.label],
        }
    }
}

impl fmt::Display for SignedColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.label + 1, self.sign.symbol())
    }
}

pub(crate) fn charge(tree: &[usize], k: usize) -> usize {
    if k == 0 {
        0
    } else {
        tree[k - 1]
    }
}

#[derive(Clone, Debug)]
pub struct StateSpace {
    pub boundary: Vec<SignedColor>,
    /// Resolved labels of the boundary strands.
    pub labels: Vec<usize>,
    basis: Vec<Vec<Tree>>,
    index: Vec<HashMap<Tree, usize>>,
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.boundary == other.boundary && self.labels == other.labels
    }
}

impl StateSpace {
    pub fn new(cat: &ModularCategoryData, boundary: &[SignedColor]) -> Self {
        let labels: Vec<usize> = boundary.iter().map(|c| c.resolved(cat)).collect();
        Self::build(cat, boundary.to_vec(), labels)
    }

    /// Space over plain simple labels, all taken with sign `+`.
    pub fn from_labels(cat: &ModularCategoryData, labels: &[usize]) -> Self {
        let boundary = labels.iter().map(|&l| SignedColor::plus(l)).collect();
        Self::build(cat, boundary, labels.to_vec())
    }

    fn build(cat: &ModularCategoryData, boundary: Vec<SignedColor>, labels: Vec<usize>) -> Self {
        let rank = cat.rank();
        let mut basis = vec![Vec::new(); rank];
        enumerate_trees(cat, &labels, &mut Vec::new(), &mut basis);
        let index = basis
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        StateSpace {
            boundary,
            labels,
            basis,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis[k].len()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.iter().map(Vec::len).sum()
    }

    pub fn basis(&self, k: usize) -> &[Tree] {
        &self.basis[k]
    }

    pub fn index_of(&self, tree: &[usize]) -> Option<usize> {
        let k = tree.last().copied().unwrap_or(0);
        self.index[k].get(tree).copied()
    }

    pub fn ranks(&self) -> usize {
        self.basis.len()
    }
}

fn enumerate_trees(
    cat: &ModularCategoryData,
    labels: &[usize],
    prefix: &mut Tree,
    out: &mut [Vec<Tree>],
) {
    let pos = prefix.len();
    if pos == labels.len() {
        let k = prefix.last().copied().unwrap_or(0);
        out[k].push(prefix.clone());
        return;
    }
    let x = charge(prefix, pos);
    for c in cat.channels(x, labels[pos]) {
        prefix.push(c);
        enumerate_trees(cat, labels, prefix, out);
        prefix.pop();
    }
}

/// Dimension of `Hom(V_k, X_1 (x) ... (x) X_n)`.
pub fn hom_dim(cat: &ModularCategoryData, boundary: &[SignedColor], k: usize) -> usize {
    let labels: Vec<usize> = boundary.iter().map(|c| c.resolved(cat)).collect();
    let mut counts = vec![0usize; cat.rank()];
    counts[0] = 1;
    for &l in &labels {
        let mut next = vec![0usize; cat.rank()];
        for (x, &n) in counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            for y in cat.channels(x, l) {
                next[y] += n;
            }
        }
        counts = next;
    }
    counts[k]
}

/// Rewrites the strands `p..p+n` of a left-nested tree as a single subtree
/// hanging off the prefix charge. Returns `(coefficient, inner tree)` pairs;
/// the inner tree is left-nested over `labels[p..p+n]` and the prefix and
/// outer charges are those of the input tree.
pub fn split_range(
    cat: &ModularCategoryData,
    labels: &[usize],
    tree: &[usize],
    p: usize,
    n: usize,
) -> Vec<(Scalar, Tree)> {
    let x = charge(tree, p);
    if n == 0 {
        return vec![(Scalar::new(1.0, 0.0), Vec::new())];
    }
    let mut terms = vec![(Scalar::new(1.0, 0.0), vec![labels[p]])];
    for k in 1..n {
        let a = labels[p + k];
        let before = tree[p + k - 1];
        let after = tree[p + k];
        let mut next = Vec::new();
        for (coef, inner) in &terms {
            let g = *inner.last().unwrap();
            for g2 in cat.channels(g, a) {
                if cat.n(x, g2, after) == 0 {
                    continue;
                }
                let fv = cat.f(x, g, a, after, before, g2);
                if fv == Scalar::default() {
                    continue;
                }
                let mut t = inner.clone();
                t.push(g2);
                next.push((coef * fv, t));
            }
        }
        terms = next;
    }
    terms
}

/// Inverse of [`split_range`]: expands `(x (inner)_h)_y` into left-nested
/// charges for the strands carried by `inner`.
pub fn merge_range(
    cat: &ModularCategoryData,
    x: usize,
    inner_labels: &[usize],
    inner: &[usize],
    y: usize,
) -> Vec<(Scalar, Tree)> {
    let m = inner_labels.len();
    if m == 0 {
        return if x == y {
            vec![(Scalar::new(1.0, 0.0), Vec::new())]
        } else {
            Vec::new()
        };
    }
    let h = inner[m - 1];
    if cat.n(x, h, y) == 0 {
        return Vec::new();
    }
    // charges are fixed from the outside in
    let mut terms: Vec<(Scalar, Tree)> = vec![(Scalar::new(1.0, 0.0), vec![y])];
    for k in (1..m).rev() {
        let b = inner_labels[k];
        let hk = inner[k];
        let hprev = inner[k - 1];
        let mut next = Vec::new();
        for (coef, outer) in &terms {
            let y_k = outer[0];
            for e in cat.channels(x, hprev) {
                if cat.n(e, b, y_k) == 0 {
                    continue;
                }
                let fv = cat.finv(x, hprev, b, y_k, hk, e);
                if fv == Scalar::default() {
                    continue;
                }
                let mut t = Vec::with_capacity(outer.len() + 1);
                t.push(e);
                t.extend_from_slice(outer);
                next.push((coef * fv, t));
            }
        }
        terms = next;
    }
    terms.retain(|(_, t)| cat.n(x, inner_labels[0], t[0]) > 0);
    terms
}

/// Applies a local operator to strands `p..p+n` of every tree in `v`.
/// `op` maps an inner tree over the old strands to a combination of inner
/// trees over `out_labels`, which replace them.
pub fn apply_local<F>(
    cat: &ModularCategoryData,
    labels: &[usize],
    v: &SparseVec,
    p: usize,
    n: usize,
    out_labels: &[usize],
    op: F,
) -> SparseVec
where
    F: Fn(&[usize]) -> Vec<(Scalar, Tree)>,
{
    let mut out = SparseVec::new();
    for (tree, amp) in v {
        let x = charge(tree, p);
        let y = charge(tree, p + n);
        for (c1, inner) in split_range(cat, labels, tree, p, n) {
            for (c2, new_inner) in op(&inner) {
                for (c3, mid) in merge_range(cat, x, out_labels, &new_inner, y) {
                    let mut t = Vec::with_capacity(tree.len() + out_labels.len() - n);
                    t.extend_from_slice(&tree[..p]);
                    t.extend_from_slice(&mid);
                    t.extend_from_slice(&tree[p + n..]);
                    *out.entry(t).or_default() += amp * c1 * c2 * c3;
                }
            }
        }
    }
    out.retain(|_, a| *a != Scalar::default());
    out
}

/// A linear map between state spaces, one matrix per total charge.
#[derive(Clone, Debug)]
pub struct BlockMorphism {
    pub source: StateSpace,
    pub target: StateSpace,
    /// `blocks[k]` has shape `target.dim(k) x source.dim(k)`.
    pub blocks: Vec<DMatrix<Scalar>>,
}

impl BlockMorphism {
    pub fn zero(source: StateSpace, target: StateSpace) -> Self {
        let blocks = (0..source.ranks())
            .map(|k| DMatrix::zeros(target.dim(k), source.dim(k)))
            .collect();
        BlockMorphism {
            source,
            target,
            blocks,
        }
    }

    pub fn identity(space: StateSpace) -> Self {
        let blocks = (0..space.ranks())
            .map(|k| DMatrix::identity(space.dim(k), space.dim(k)))
            .collect();
        BlockMorphism {
            source: space.clone(),
            target: space,
            blocks,
        }
    }

    /// Builds the morphism column by column from the image of each basis tree.
    pub fn from_fn<F>(source: StateSpace, target: StateSpace, image: F) -> Result<Self>
    where
        F: Fn(&Tree) -> Result<SparseVec>,
    {
        let mut m = BlockMorphism::zero(source, target);
        for k in 0..m.source.ranks() {
            for (col, tree) in m.source.basis(k).iter().enumerate() {
                for (t, a) in image(tree)? {
                    let row = m.target.index_of(&t).ok_or_else(|| {
                        Error::BoundaryMismatch(format!("tree {t:?} outside target space"))
                    })?;
                    let tk = t.last().copied().unwrap_or(0);
                    if tk != k {
                        return Err(Error::BoundaryMismatch("charge not conserved".into()));
                    }
                    m.blocks[k][(row, col)] += a;
                }
            }
        }
        Ok(m)
    }

    /// Block of total charge `1`, the map on `Hom(1, -)`.
    pub fn f0(&self) -> &DMatrix<Scalar> {
        &self.blocks[0]
    }

    /// Image of one source basis tree.
    pub fn apply_tree(&self, tree: &[usize]) -> SparseVec {
        let mut out = SparseVec::new();
        let k = tree.last().copied().unwrap_or(0);
        if let Some(col) = self.source.index_of(tree) {
            for (row, t) in self.target.basis(k).iter().enumerate() {
                let a = self.blocks[k][(row, col)];
                if a != Scalar::default() {
                    out.insert(t.clone(), a);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Scalar) -> Self {
        let mut m = self.clone();
        for b in &mut m.blocks {
            *b *= s;
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::BoundaryMismatch("cannot add maps between different spaces".into()));
        }
        let mut m = self.clone();
        for (a, b) in m.blocks.iter_mut().zip(&other.blocks) {
            *a += b;
        }
        Ok(m)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.source != other.source || self.target != other.target {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    /// Tensor product over the concatenated boundaries.
    pub fn tensor(&self, other: &Self, cat: &ModularCategoryData) -> Result<Self> {
        let cat_boundary = |a: &StateSpace, b: &StateSpace| {
            let mut v = a.boundary.clone();
            v.extend_from_slice(&b.boundary);
            StateSpace::new(cat, &v)
        };
        let source = cat_boundary(&self.source, &other.source);
        let target = cat_boundary(&self.target, &other.target);
        let na = self.source.len();
        let nb = other.source.len();
        let mid_labels: Vec<usize> = self
            .target
            .labels
            .iter()
            .chain(&other.source.labels)
            .copied()
            .collect();
        BlockMorphism::from_fn(source.clone(), target.clone(), |tree| {
            let v: SparseVec = [(tree.clone(), Scalar::new(1.0, 0.0))].into();
            let v = apply_local(cat, &source.labels, &v, 0, na, &self.target.labels, |inner| {
                self.apply_tree(inner).into_iter().map(|(t, a)| (a, t)).collect()
            });
            let ma = self.target.len();
            Ok(apply_local(cat, &mid_labels, &v, ma, nb, &other.target.labels, |inner| {
                other.apply_tree(inner).into_iter().map(|(t, a)| (a, t)).collect()
            }))
        })
    }
}

/// `f` then `g`: requires `f.target == g.source`; the blocks multiply as `g * f`.
pub fn compose(f: &BlockMorphism, g: &BlockMorphism) -> Result<BlockMorphism> {
    if f.target != g.source {
        return Err(Error::BoundaryMismatch(
            "target of the first map differs from the source of the second".into(),
        ));
    }
    let blocks = f
        .blocks
        .iter()
        .zip(&g.blocks)
        .map(|(a, b)| b * a)
        .collect();
    Ok(BlockMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        blocks,
    })
}

/// One summand `Hom(1, V (x) V_i^*) (x) Hom(1, V_i (x) W)` of the splitting.
#[derive(Clone, Debug)]
pub struct SplitSummand {
    pub label: usize,
    pub left: StateSpace,
    pub right: StateSpace,
    /// Map into `Hom(1, V (x) W)`; columns follow the Kronecker order with
    /// the left factor slow.
    pub map: DMatrix<Scalar>,
}

#[derive(Clone, Debug)]
pub struct Splitting {
    pub target: StateSpace,
    pub summands: Vec<SplitSummand>,
    /// All summands side by side.
    pub assembled: DMatrix<Scalar>,
    pub inverse: Option<DMatrix<Scalar>>,
}

impl Splitting {
    /// Restriction of the inverse to the rows of summand `i`.
    pub fn inverse_part(&self, i: usize) -> Option<DMatrix<Scalar>> {
        let inv = self.inverse.as_ref()?;
        let start: usize = self.summands[..i].iter().map(|s| s.map.ncols()).sum();
        let len = self.summands[i].map.ncols();
        Some(inv.rows(start, len).into_owned())
    }
}

/// The maps `u_i: x (x) y -> (id_V (x) d_{V_i} (x) id_W)(x (x) y)` and their sum.
pub fn splitting_u(cat: &ModularCategoryData, v: &[SignedColor], w: &[SignedColor]) -> Splitting {
    let mut vw = v.to_vec();
    vw.extend_from_slice(w);
    let target = StateSpace::new(cat, &vw);
    let mut summands = Vec::new();
    for i in 0..cat.rank() {
        let mut lb = v.to_vec();
        lb.push(SignedColor::minus(i));
        let mut rb = vec![SignedColor::plus(i)];
        rb.extend_from_slice(w);
        let left = StateSpace::new(cat, &lb);
        let right = StateSpace::new(cat, &rb);
        let mut full = lb.clone();
        full.extend_from_slice(&rb);
        let full_labels: Vec<usize> = full.iter().map(|c| c.resolved(cat)).collect();
        let (dl, dr) = (left.dim(0), right.dim(0));
        let mut map = DMatrix::zeros(target.dim(0), dl * dr);
        let p = v.len();
        for (a, xt) in left.basis(0).iter().enumerate() {
            for (b, yt) in right.basis(0).iter().enumerate() {
                let mut tree = xt.clone();
                tree.extend_from_slice(yt);
                let vec: SparseVec = [(tree, Scalar::new(1.0, 0.0))].into();
                let out = apply_local(cat, &full_labels, &vec, p, 2, &[], |inner| {
                    death(cat, i, inner)
                });
                for (t, amp) in out {
                    if let Some(row) = target.index_of(&t) {
                        map[(row, a * dr + b)] += amp;
                    }
                }
            }
        }
        summands.push(SplitSummand {
            label: i,
            left,
            right,
            map,
        });
    }
    let cols: usize = summands.iter().map(|s| s.map.ncols()).sum();
    let mut assembled = DMatrix::zeros(target.dim(0), cols);
    let mut off = 0;
    for s in &summands {
        assembled.columns_mut(off, s.map.ncols()).copy_from(&s.map);
        off += s.map.ncols();
    }
    let inverse = if assembled.is_square() {
        assembled.clone().try_inverse()
    } else {
        None
    };
    Splitting {
        target,
        summands,
        assembled,
        inverse,
    }
}

/// `d_{V_c}: V_c^* (x) V_c -> 1` on an inner tree `(c^*, c)_f`.
pub(crate) fn death(cat: &ModularCategoryData, c: usize, inner: &[usize]) -> Vec<(Scalar, Tree)> {
    if inner[1] == 0 {
        vec![(cat.pivot[c], Vec::new())]
    } else {
        Vec::new()
    }
}

/// `b_{V_c}: 1 -> V_c (x) V_c^*` as an inner tree.
pub(crate) fn birth(c: usize) -> Vec<(Scalar, Tree)> {
    vec![(Scalar::new(1.0, 0.0), vec![c, 0])]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtc::bundled_category;

    #[test]
    fn fibonacci_dims() {
        let cat = bundled_category("fibonacci").unwrap();
        let t = SignedColor::plus(1);
        assert_eq!(hom_dim(&cat, &[t], 0), 0);
        assert_eq!(hom_dim(&cat, &[t, t], 0), 1);
        assert_eq!(hom_dim(&cat, &[t, t, t], 1), 2);
        let sp = StateSpace::new(&cat, &[t, t, t]);
        assert_eq!(sp.dim(1), 2);
        assert_eq!(StateSpace::new(&cat, &[]).dim(0), 1);
    }

    #[test]
    fn split_then_merge_is_identity() {
        let cat = bundled_category("fibonacci").unwrap();
        let labels = vec![1; 5];
        let sp = StateSpace::from_labels(&cat, &labels);
        for k in 0..2 {
            for tree in sp.basis(k) {
                let v: SparseVec = [(tree.clone(), Scalar::new(1.0, 0.0))].into();
                let out = apply_local(&cat, &labels, &v, 1, 3, &[1, 1, 1], |inner| {
                    vec![(Scalar::new(1.0, 0.0), inner.to_vec())]
                });
                for (t, a) in &out {
                    let want = if t == tree { 1.0 } else { 0.0 };
                    assert!((a - want).norm() < 1e-12, "{tree:?} -> {out:?}");
                }
            }
        }
    }
}
