//! Small standard diagrams and cobordisms used by the verifier and the tests.

use super::functor::Cobordism;
use super::types::DecoratedType;
use crate::diagram::{build_cylinder, parse_diagram, Generator, RibbonDiagram};
use crate::mtc::ModularCategoryData;

fn ty(s: &str) -> DecoratedType {
    s.parse().expect("sample type parses")
}

/// A closed surgery unknot with the given framing (made of twists).
pub fn framed_unknot(framing: i64) -> RibbonDiagram {
    let mut src = String::from("slice cup[?A] @1\n");
    let g = if framing >= 0 { "twist+" } else { "twist-" };
    for _ in 0..framing.unsigned_abs() {
        src.push_str(&format!("slice {g} @1\n"));
    }
    src.push_str("slice cap[?A] @1\n");
    parse_diagram(&src).expect("unknot parses")
}

/// Hopf link of `?A`, `?B` with two positive crossings and zero framings.
pub fn hopf_link() -> RibbonDiagram {
    parse_diagram("slice cup[?A] @1; cup[?B] @3; braid- @2; braid- @2; cap[?A] @1; cap[?B] @1")
        .expect("hopf link parses")
}

/// Named closed presentations: S³, S¹×S², ±1-framed unknots and the Hopf link.
pub fn closed_samples() -> Vec<(&'static str, RibbonDiagram)> {
    vec![
        ("empty", RibbonDiagram::identity(vec![])),
        ("unknot0", framed_unknot(0)),
        ("unknot+1", framed_unknot(1)),
        ("unknot-1", framed_unknot(-1)),
        ("hopf", hopf_link()),
    ]
}

/// Cylinder with one extra twist at `pos` (0-based) on top.
pub fn twisted_cylinder(t: &DecoratedType, pos: usize, positive: bool) -> Cobordism {
    let base = build_cylinder(t);
    let mut slices = base.slices.clone();
    slices.push(Generator::twist(pos, positive));
    let d = RibbonDiagram::new(base.bottom.clone(), slices).expect("twisted cylinder is well formed");
    Cobordism::new(t.clone(), t.clone(), d)
}

/// A cylinder over `(1,1;)` with a disjoint `framing`-framed surgery unknot.
pub fn cylinder_with_unknot(framing: i64) -> Cobordism {
    let g = if framing >= 0 { "twist+" } else { "twist-" };
    let mut src = String::from("bottom: $L1- $R1+\nslice cup[?A] @3\n");
    for _ in 0..framing.unsigned_abs() {
        src.push_str(&format!("slice {g} @3\n"));
    }
    src.push_str("slice cap[?A] @3\n");
    let t = ty("(1,1;)");
    Cobordism::new(t.clone(), t, parse_diagram(&src).expect("sample parses"))
}

/// Births one rainbow band with `framing` twists: `(0,0;) -> (0,0;1)`.
pub fn band_birth(framing: i64) -> Cobordism {
    let g = if framing >= 0 { "twist+" } else { "twist-" };
    let mut src = String::from("slice cup[$w] @1\n");
    for _ in 0..framing.unsigned_abs() {
        src.push_str(&format!("slice {g} @1\n"));
    }
    Cobordism::new(ty("(0,0;)"), ty("(0,0;1)"), parse_diagram(&src).expect("sample parses"))
}

/// Closes one rainbow band with `framing` twists: `(0,0;1) -> (0,0;)`.
pub fn band_death(framing: i64) -> Cobordism {
    let g = if framing >= 0 { "twist+" } else { "twist-" };
    let mut src = String::from("bottom: $u+ $u-\n");
    for _ in 0..framing.unsigned_abs() {
        src.push_str(&format!("slice {g} @1\n"));
    }
    src.push_str("slice cap[$u] @1\n");
    Cobordism::new(ty("(0,0;1)"), ty("(0,0;)"), parse_diagram(&src).expect("sample parses"))
}

/// Pairs `(lower, upper)` for vertical stacking; the band pairs merge two
/// open bands into one surgery component and so shift the signature.
pub fn vertical_pairs() -> Vec<(&'static str, Cobordism, Cobordism)> {
    let cyl = Cobordism::cylinder(&ty("(1,1;)"));
    vec![
        ("cylinders", cyl.clone(), cyl.clone()),
        ("unknot+1 over unknot-1", cylinder_with_unknot(1), cylinder_with_unknot(-1)),
        ("unknot+1 twice", cylinder_with_unknot(1), cylinder_with_unknot(1)),
        ("band +1 then cap", band_birth(1), band_death(0)),
        ("band then cap -1", band_birth(0), band_death(-1)),
        ("band +1 then cap +1", band_birth(1), band_death(1)),
        (
            "torus cylinders",
            Cobordism::cylinder(&ty("(0,0;1)")),
            Cobordism::cylinder(&ty("(0,0;1)")),
        ),
    ]
}

/// A non-unit label to decorate marks with.
pub fn mark_label(cat: &ModularCategoryData) -> String {
    cat.labels.last().cloned().unwrap_or_else(|| "1".into())
}

/// Pairs `(left, right)` glued along `left.bottom.n` shared bands.
pub fn horizontal_pairs(cat: &ModularCategoryData) -> Vec<(String, Cobordism, Cobordism)> {
    let x = mark_label(cat);
    let t11 = ty("(1,1;)");
    let t12 = ty("(1,2;)");
    let t21 = ty("(2,1;)");
    let t11x = ty(&format!("(1,1; {x}+)"));
    let t21g = ty("(2,1; 1)");
    vec![
        ("cylinder (1,1;) with (1,1;)".into(), Cobordism::cylinder(&t11), Cobordism::cylinder(&t11)),
        ("cylinder (1,1;x) with twisted (1,1;)".into(), twisted_cylinder(&t11x, 1, true), Cobordism::cylinder(&t11)),
        ("cylinder (1,2;) with (2,1;)".into(), Cobordism::cylinder(&t12), Cobordism::cylinder(&t21)),
        ("twisted L1 of (1,2;) with (2,1;)".into(), twisted_cylinder(&t12, 0, true), Cobordism::cylinder(&t21)),
        ("(1,2;) with twisted R1 of (2,1;)".into(), Cobordism::cylinder(&t12), twisted_cylinder(&t21, 2, false)),
        ("(1,2;) with (2,1;1)".into(), Cobordism::cylinder(&t12), Cobordism::cylinder(&t21g)),
    ]
}
