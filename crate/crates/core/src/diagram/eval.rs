//! The operator invariant of a colored diagram as a block morphism.

use super::{Generator, RibbonDiagram, Token};
use crate::error::{Error, Result};
use crate::fusion::{apply_local, birth, death, BlockMorphism, SignedColor, SparseVec, StateSpace, Tree};
use crate::mtc::ModularCategoryData;
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use std::collections::{BTreeMap, HashMap};

/// Colors for open variables and surgery components, and maps for coupons.
#[derive(Clone, Debug, Default)]
pub struct Coloring {
    pub vars: BTreeMap<String, usize>,
    pub surgery: BTreeMap<String, usize>,
    pub coupons: HashMap<String, BlockMorphism>,
}

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(mut self, name: &str, label: usize) -> Self {
        self.vars.insert(name.to_string(), label);
        self
    }

    pub fn surgery(mut self, name: &str, label: usize) -> Self {
        self.surgery.insert(name.to_string(), label);
        self
    }

    pub fn coupon(mut self, name: &str, map: BlockMorphism) -> Self {
        self.coupons.insert(name.to_string(), map);
        self
    }

    pub fn resolve(&self, cat: &ModularCategoryData, t: &Token) -> Result<SignedColor> {
        let (label, sign) = match t {
            Token::Color { label, sign } => (
                cat.label_index(label)
                    .ok_or_else(|| Error::parse(format!("unknown label '{label}'")))?,
                *sign,
            ),
            Token::Var { name, sign } => (
                *self
                    .vars
                    .get(name)
                    .ok_or_else(|| Error::UncoloredVariable(format!("${name}")))?,
                *sign,
            ),
            Token::Surgery { name, sign } => (
                *self
                    .surgery
                    .get(name)
                    .ok_or_else(|| Error::UncoloredVariable(format!("?{name}")))?,
                *sign,
            ),
        };
        if label >= cat.rank() {
            return Err(Error::parse(format!("label index {} out of range", label + 1)));
        }
        Ok(SignedColor::new(label, sign))
    }
}

enum Local<'a> {
    Skip,
    Braid { a: usize, b: usize, positive: bool },
    Twist { a: usize, positive: bool },
    Cup { c: usize },
    Cap { c: usize, tilde: bool },
    Coupon(&'a BlockMorphism),
}

struct Step<'a> {
    pos: usize,
    n_in: usize,
    out_labels: Vec<usize>,
    op: Local<'a>,
}

fn inverse(z: Scalar) -> Scalar {
    Scalar::new(1.0, 0.0) / z
}

impl Local<'_> {
    fn apply(&self, cat: &ModularCategoryData, inner: &[usize]) -> Vec<(Scalar, Tree)> {
        match self {
            Local::Skip => vec![(Scalar::new(1.0, 0.0), inner.to_vec())],
            Local::Braid { a, b, positive } => {
                let f = inner[1];
                let coef = if *positive {
                    cat.r(*a, *b, f)
                } else {
                    inverse(cat.r(*b, *a, f))
                };
                vec![(coef, vec![*b, f])]
            }
            Local::Twist { a, positive } => {
                let v = cat.twist[*a];
                vec![(if *positive { v } else { inverse(v) }, inner.to_vec())]
            }
            Local::Cup { c } => birth(*c),
            Local::Cap { c, tilde: false } => death(cat, *c, inner),
            Local::Cap { c, tilde: true } => {
                // twist on the left strand, positive braid, then the plain cap
                if inner[1] != 0 {
                    return Vec::new();
                }
                let cd = cat.dual[*c];
                vec![(cat.twist[*c] * cat.r(*c, cd, 0) * cat.pivot[*c], Vec::new())]
            }
            Local::Coupon(m) => m.apply_tree(inner).into_iter().map(|(t, a)| (a, t)).collect(),
        }
    }
}

/// Colored token lists and the local operators of every slice.
fn compile<'a>(
    cat: &ModularCategoryData,
    d: &RibbonDiagram,
    coloring: &'a Coloring,
) -> Result<(Vec<SignedColor>, Vec<Step<'a>>, Vec<SignedColor>)> {
    let mut cols: Vec<SignedColor> = d
        .bottom
        .iter()
        .map(|t| coloring.resolve(cat, t))
        .collect::<Result<_>>()?;
    let bottom = cols.clone();
    let mut steps = Vec::with_capacity(d.slices.len());
    for g in &d.slices {
        let labels: Vec<usize> = cols.iter().map(|c| c.resolved(cat)).collect();
        let step = match g {
            Generator::Identity => Step {
                pos: 0,
                n_in: 0,
                out_labels: Vec::new(),
                op: Local::Skip,
            },
            Generator::Braid { pos, positive } => {
                let (a, b) = (labels[*pos], labels[pos + 1]);
                cols.swap(*pos, pos + 1);
                Step {
                    pos: *pos,
                    n_in: 2,
                    out_labels: vec![b, a],
                    op: Local::Braid {
                        a,
                        b,
                        positive: *positive,
                    },
                }
            }
            Generator::Twist { pos, positive } => Step {
                pos: *pos,
                n_in: 1,
                out_labels: vec![labels[*pos]],
                op: Local::Twist {
                    a: labels[*pos],
                    positive: *positive,
                },
            },
            Generator::Cup { pos, color } => {
                let plus = coloring.resolve(cat, &color.token(crate::fusion::Sign::Plus))?;
                let minus = SignedColor::new(plus.label, crate::fusion::Sign::Minus);
                let c = plus.resolved(cat);
                cols.insert(*pos, minus);
                cols.insert(*pos, plus);
                Step {
                    pos: *pos,
                    n_in: 0,
                    out_labels: vec![c, cat.dual[c]],
                    op: Local::Cup { c },
                }
            }
            Generator::Cap { pos, .. } => {
                let (x, y) = (cols[*pos], cols[pos + 1]);
                let tilde = x.sign == crate::fusion::Sign::Plus;
                let plus = if tilde { x } else { y };
                cols.drain(*pos..pos + 2);
                Step {
                    pos: *pos,
                    n_in: 2,
                    out_labels: Vec::new(),
                    op: Local::Cap {
                        c: plus.resolved(cat),
                        tilde,
                    },
                }
            }
            Generator::Coupon {
                pos,
                label,
                inputs,
                outputs,
            } => {
                let m = coloring
                    .coupons
                    .get(label)
                    .ok_or_else(|| Error::UncoloredVariable(format!("coupon[{label}]")))?;
                let outs: Vec<SignedColor> = outputs
                    .iter()
                    .map(|t| coloring.resolve(cat, t))
                    .collect::<Result<_>>()?;
                let out_labels: Vec<usize> = outs.iter().map(|c| c.resolved(cat)).collect();
                if m.source.labels != labels[*pos..pos + inputs] || m.target.labels != out_labels
                {
                    return Err(Error::BoundaryMismatch(format!(
                        "coupon[{label}] does not fit its strands"
                    )));
                }
                cols.splice(*pos..pos + inputs, outs);
                Step {
                    pos: *pos,
                    n_in: *inputs,
                    out_labels,
                    op: Local::Coupon(m),
                }
            }
        };
        steps.push(step);
    }
    Ok((bottom, steps, cols))
}

/// Operator invariant of `d` under `coloring`, on all total charges.
pub fn evaluate_f(
    cat: &ModularCategoryData,
    d: &RibbonDiagram,
    coloring: &Coloring,
) -> Result<BlockMorphism> {
    let (bottom, steps, top) = compile(cat, d, coloring)?;
    let source = StateSpace::new(cat, &bottom);
    let target = StateSpace::new(cat, &top);
    let all: Vec<usize> = (0..cat.rank()).collect();
    run(cat, &bottom, &steps, source, target, &all)
}

/// Charge-1 block of the operator invariant: the map `Hom(1, bottom) -> Hom(1, top)`.
pub fn evaluate_f0(
    cat: &ModularCategoryData,
    d: &RibbonDiagram,
    coloring: &Coloring,
) -> Result<DMatrix<Scalar>> {
    let (bottom, steps, top) = compile(cat, d, coloring)?;
    let source = StateSpace::new(cat, &bottom);
    let target = StateSpace::new(cat, &top);
    let m = run(cat, &bottom, &steps, source, target, &[0])?;
    Ok(m.blocks[0].clone())
}

fn run(
    cat: &ModularCategoryData,
    bottom: &[SignedColor],
    steps: &[Step<'_>],
    source: StateSpace,
    target: StateSpace,
    charges: &[usize],
) -> Result<BlockMorphism> {
    let mut out = BlockMorphism::zero(source, target);
    let start_labels: Vec<usize> = bottom.iter().map(|c| c.resolved(cat)).collect();
    for &k in charges {
        for col in 0..out.source.dim(k) {
            let tree = out.source.basis(k)[col].clone();
            let mut v: SparseVec = [(tree, Scalar::new(1.0, 0.0))].into();
            let mut labels = start_labels.clone();
            for s in steps {
                if matches!(s.op, Local::Skip) {
                    continue;
                }
                v = apply_local(cat, &labels, &v, s.pos, s.n_in, &s.out_labels, |inner| {
                    s.op.apply(cat, inner)
                });
                labels.splice(s.pos..s.pos + s.n_in, s.out_labels.iter().copied());
                if v.is_empty() {
                    break;
                }
            }
            for (t, a) in v {
                let row = out.target.index_of(&t).ok_or_else(|| {
                    Error::BoundaryMismatch(format!("tree {t:?} outside the top space"))
                })?;
                out.blocks[k][(row, col)] += a;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::mtc::bundled_category;

    #[test]
    fn unknot_is_quantum_dimension() {
        for name in crate::mtc::BUNDLED {
            let cat = bundled_category(name).unwrap();
            for (i, l) in cat.labels.iter().enumerate() {
                let d = parse_diagram(&format!("slice cup[{l}] @1; cap[{l}] @1")).unwrap();
                let z = evaluate_f(&cat, &d, &Coloring::new()).unwrap().blocks[0][(0, 0)];
                assert!((z - cat.qdim[i]).norm() < 1e-12, "{name} {l}: {z}");
                // the other orientation closes through the plain cap
                let d = parse_diagram(&format!("slice cup[{l}] @1; twist+ @1; braid+ @1; cap[{l}] @1"))
                    .unwrap();
                let z = evaluate_f(&cat, &d, &Coloring::new()).unwrap().blocks[0][(0, 0)];
                assert!((z - cat.qdim[i]).norm() < 1e-12, "{name} {l}: {z}");
            }
        }
    }

    #[test]
    fn twist_eigenvalue() {
        let cat = bundled_category("fibonacci").unwrap();
        let d = parse_diagram("bottom: tau+\nslice twist+ @1").unwrap();
        let m = evaluate_f(&cat, &d, &Coloring::new()).unwrap();
        assert!((m.blocks[1][(0, 0)] - cat.twist[1]).norm() < 1e-12);
    }

    #[test]
    fn kink_is_twist() {
        // a positive curl made from a cup, a positive crossing and a cap
        for name in crate::mtc::BUNDLED {
            let cat = bundled_category(name).unwrap();
            for (i, l) in cat.labels.iter().enumerate() {
                let src = format!("bottom: {l}+\nslice cup[{l}] @2\nslice braid+ @1\nslice cap[{l}] @2");
                let d = parse_diagram(&src).unwrap();
                let m = evaluate_f(&cat, &d, &Coloring::new()).unwrap();
                let z = m.blocks[i][(0, 0)];
                assert!((z - cat.twist[i]).norm() < 1e-12, "{name} {l}: {z}");
            }
        }
    }

    #[test]
    fn uncolored_variable() {
        let cat = bundled_category("fibonacci").unwrap();
        let d = parse_diagram("bottom: $v+").unwrap();
        assert!(matches!(
            evaluate_f(&cat, &d, &Coloring::new()),
            Err(Error::UncoloredVariable(_))
        ));
    }
}
