use nalgebra::DMatrix;
use proptest::prelude::*;
use ribbon_tqft::diagram::vertical_concat;
use ribbon_tqft::mtc::BUNDLED;
use ribbon_tqft::scalar::{max_abs, powi};
use ribbon_tqft::surgery::tau_blocks;
use ribbon_tqft::tqft2::functor::{
    anomaly_k, horizontal_compose_x, parse_cobordism, structural_iso_u, vertical_compose_x, x_object,
    x_one_morphism, x_two_morphism, AnomalyLedger, Cell, Cobordism,
};
use ribbon_tqft::tqft2::samples::{band_birth, band_death, cylinder_with_unknot, twisted_cylinder};
use ribbon_tqft::tqft2::twovect::{twomatrix_multiply, FreeModule, TwoMatrix};
use ribbon_tqft::tqft2::types::{compose_types, DecoratedType};
use ribbon_tqft::tqft2::verify::{dimension_functoriality, fusion_count_dims, small_types};
use ribbon_tqft::{bundled_category, Error, Scalar};

fn ty(s: &str) -> DecoratedType {
    s.parse().unwrap()
}

#[test]
fn type_composition() {
    assert_eq!(compose_types(&ty("(2,3; (W,+))"), &ty("(3,1; 2)")).unwrap(), ty("(2,1; (W,+), 2, 2)"));
    assert_eq!(compose_types(&ty("(1,1;)"), &ty("(1,1;)")).unwrap(), ty("(1,1; 0)"));
    assert!(matches!(compose_types(&ty("(1,2;)"), &ty("(3,1;)")), Err(Error::NotComposable(_))));
}

#[test]
fn objects() {
    assert_eq!(x_object(2, None), 1);
    assert_eq!(x_object(2, Some(1)), 2);
    assert_eq!(x_object(2, Some(3)), 8);
}

#[test]
fn one_morphism_examples() {
    let cat = bundled_category("fibonacci").unwrap();
    assert_eq!(x_one_morphism(&cat, &ty("(1,1;)")).unwrap().dims(), vec![vec![1, 0], vec![0, 1]]);
    assert_eq!(x_one_morphism(&cat, &ty("(0,0; 1)")).unwrap().dims(), vec![vec![2]]);
    assert_eq!(x_one_morphism(&cat, &ty("(0,0; (1,+))")).unwrap().dims(), vec![vec![1]]);
    assert_eq!(x_one_morphism(&cat, &ty("(0,0; (tau,+))")).unwrap().dims(), vec![vec![0]]);
    let x = x_one_morphism(&cat, &ty("(1,1;)")).unwrap();
    assert_eq!(twomatrix_multiply(&x, &x).unwrap().dims(), vec![vec![1, 0], vec![0, 1]]);
}

/// Exhaustive over `m, n <= 2` and two entries: products of 2-matrices have
/// the dimensions of the composite type.
#[test]
fn dimensions_are_functorial() {
    for name in BUNDLED {
        let cat = bundled_category(name).unwrap();
        let types = small_types(&cat, 2);
        let (checked, bad) = dimension_functoriality(&cat, &types).unwrap();
        assert!(checked > if name == "trivial" { 10_000 } else { 50_000 });
        assert!(bad.is_empty(), "{name}: {:?}", &bad[..bad.len().min(3)]);
    }
}

#[test]
fn fusion_counts_match_the_state_spaces() {
    let cat = bundled_category("fibonacci").unwrap();
    for t in small_types(&cat, 2) {
        assert_eq!(fusion_count_dims(&cat, &t).unwrap(), x_one_morphism(&cat, &t).unwrap().dims(), "{t}");
    }
}

fn module(n: usize) -> FreeModule {
    FreeModule::new((0..n).map(|k| k.to_string()).collect())
}

fn two_matrix(rows: usize, cols: usize, d: &[usize]) -> TwoMatrix {
    TwoMatrix {
        rows,
        cols,
        entries: (0..rows)
            .map(|h| (0..cols).map(|j| module(d[(h * cols + j) % d.len()])).collect())
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// 2-matrix products are associative on dimensions and match the integer matrix product.
    #[test]
    fn two_matrix_products(
        (a, b, c, d) in (1usize..4, 1usize..4, 1usize..4, 1usize..4),
        dims in prop::collection::vec(0usize..4, 1..12),
    ) {
        let x = two_matrix(a, b, &dims);
        let y = two_matrix(b, c, &dims[1..].iter().chain(&dims[..1]).copied().collect::<Vec<_>>());
        let z = two_matrix(c, d, &dims);
        let xy = twomatrix_multiply(&x, &y).unwrap();
        let int = |m: &TwoMatrix| DMatrix::from_fn(m.rows, m.cols, |h, j| m.entries[h][j].dim());
        prop_assert_eq!(int(&xy), int(&x) * int(&y));
        let l = twomatrix_multiply(&xy, &z).unwrap();
        let r = twomatrix_multiply(&x, &twomatrix_multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l.dims(), r.dims());
    }

    /// Stacking surgery-free twisted cylinders is functorial with `k = 1`.
    #[test]
    fn stacking_twists_is_functorial(twists in prop::collection::vec((0usize..3, any::<bool>()), 1..4)) {
        let cat = bundled_category("fibonacci").unwrap();
        let t = ty("(1,1; (tau,+))");
        let mut ledger = AnomalyLedger::default();
        let mut acc = Cobordism::cylinder(&t);
        for (pos, sign) in twists {
            let next = twisted_cylinder(&t, pos, sign);
            let r = vertical_compose_x(&cat, &Cell::Graph(acc.clone()), &Cell::Graph(next), &mut ledger).unwrap();
            prop_assert!(r.residual < 1e-9);
            prop_assert_eq!(r.anomaly.exponent(), 0);
            acc = r.stacked.unwrap();
        }
    }

    /// Gluing twisted cylinders along shared bands intertwines with `u`.
    #[test]
    fn gluing_twisted_cylinders(lpos in 0usize..3, lsign: bool, rsign: bool) {
        let cat = bundled_category("semion").unwrap();
        let left = twisted_cylinder(&ty("(1,1; (s,+))"), [0, 1, 1][lpos], lsign);
        let right = twisted_cylinder(&ty("(1,1;)"), 1, rsign);
        prop_assert!(horizontal_compose_x(&cat, &left, &right).unwrap().residual < 1e-9);
    }
}

#[test]
fn structural_iso_examples() {
    let triv = bundled_category("trivial").unwrap();
    let u = structural_iso_u(&triv, &ty("(1,1;)"), &ty("(1,1;)")).unwrap();
    for m in u.maps.iter().flatten() {
        assert_eq!(m.shape(), (1, 1));
        assert!((m[(0, 0)] - 1.0).norm() < 1e-12);
    }
    let fib = bundled_category("fibonacci").unwrap();
    for (a, b) in [("(1,1;)", "(1,1;)"), ("(1,2;)", "(2,1;)"), ("(2,2; 1)", "(2,1; (tau,-))")] {
        let u = structural_iso_u(&fib, &ty(a), &ty(b)).unwrap();
        for m in u.maps.iter().flatten() {
            assert_eq!(m.nrows(), m.ncols());
            if m.nrows() > 0 {
                let sv = m.clone().singular_values();
                assert!(sv.min() > 1e-6, "{a} {b}");
            }
        }
    }
}

#[test]
fn identity_cobordisms() {
    let cat = bundled_category("fibonacci").unwrap();
    let x = x_two_morphism(&cat, &Cobordism::cylinder(&ty("(0,0; (1,+))"))).unwrap();
    assert_eq!(x.maps[0][0], DMatrix::<Scalar>::identity(1, 1));
    let x = x_two_morphism(&cat, &Cobordism::cylinder(&ty("(1,1;)"))).unwrap();
    for (h, row) in x.maps.iter().enumerate() {
        for (j, m) in row.iter().enumerate() {
            assert_eq!(m.nrows(), usize::from(h == j));
            if h == j {
                assert!((m[(0, 0)] - 1.0).norm() < 1e-12);
            }
        }
    }
    for t in ["(0,0; 1)", "(1,1; 1)", "(2,1; (tau,+))", "(1,2; 2)"] {
        let t = ty(t);
        let x = x_two_morphism(&cat, &Cobordism::cylinder(&t)).unwrap();
        for m in x.maps.iter().flatten() {
            assert!(max_abs(&(m - DMatrix::identity(m.nrows(), m.ncols()))) < 1e-9, "{t}");
        }
    }
}

#[test]
fn restriction_to_closed_types() {
    let cat = bundled_category("semion").unwrap();
    for c in [band_birth(1), band_death(-1), Cobordism::cylinder(&ty("(0,0; 1)"))] {
        let x = x_two_morphism(&cat, &c).unwrap();
        let b = tau_blocks(&cat, &c.diagram, &c.bottom, &c.top, &[], &[]).unwrap();
        assert_eq!(x.maps[0][0], b.assembled());
    }
}

#[test]
fn twist_on_a_mark_is_the_twist_eigenvalue() {
    let cat = bundled_category("fibonacci").unwrap();
    let t = ty("(0,0; (tau,+), (tau,+))");
    let x = x_two_morphism(&cat, &twisted_cylinder(&t, 0, true)).unwrap();
    let v = cat.twist[1];
    let m = &x.maps[0][0];
    assert_eq!(m.shape(), (1, 1));
    assert!((m[(0, 0)] - v).norm() < 1e-12);
}

#[test]
fn anomaly_examples() {
    let mut ledger = AnomalyLedger::default();
    for name in ["semion", "fibonacci"] {
        let cat = bundled_category(name).unwrap();
        let c = cylinder_with_unknot(1);
        let id = Cell::Identity(c.bottom.clone());
        let r = vertical_compose_x(&cat, &id, &Cell::Graph(c.clone()), &mut ledger).unwrap();
        assert_eq!(r.anomaly.k, Scalar::new(1.0, 0.0));
        assert!(r.residual < 1e-12);
        let r = vertical_compose_x(&cat, &Cell::Graph(c.clone()), &Cell::Graph(cylinder_with_unknot(-1)), &mut ledger).unwrap();
        assert_eq!(r.anomaly.exponent(), 0);
        assert!(r.residual < 1e-9);
        // the band is closed into one +1-framed component: σ₁ = σ₂ = 0, σ = 1
        let r = vertical_compose_x(&cat, &Cell::Graph(band_birth(1)), &Cell::Graph(band_death(0)), &mut ledger).unwrap();
        assert_eq!((r.anomaly.sigma1, r.anomaly.sigma2, r.anomaly.sigma), (0, 0, 1));
        let measured = r.composite.maps[0][0][(0, 0)] / r.product.maps[0][0][(0, 0)];
        let base = cat.rank_d() / cat.delta().unwrap();
        assert!((measured - powi(base, -1)).norm() < 1e-9, "{name}: {measured}");
        assert!((anomaly_k(&cat, -1).unwrap() - measured).norm() < 1e-9);
        assert!(r.residual < 1e-9);
    }
    assert_eq!(ledger.entries.len(), 6);
}

#[test]
fn cobordism_files() {
    let c = parse_cobordism("type bottom: (1,1;)\ntype top: (1,1;)\nbottom: $L1- $R1+\n").unwrap();
    assert_eq!(c.bottom, ty("(1,1;)"));
    assert!(matches!(parse_cobordism("bottom: $L1- $R1+\n"), Err(Error::Parse { .. })));
    assert!(matches!(
        parse_cobordism("type bottom: (1,1;)\ntype top: (2,1;)\n"),
        Err(Error::TypeMismatch(_))
    ));
    let cat = bundled_category("fibonacci").unwrap();
    let bad = parse_cobordism("type bottom: (1,1;)\ntype top: (1,1; 1)\nbottom: $L1- $R1+\n").unwrap();
    assert!(x_two_morphism(&cat, &bad).is_err());
}

#[test]
fn stacked_cobordism_matches_vertical_concat() {
    let cat = bundled_category("semion").unwrap();
    let a = band_birth(1);
    let b = band_death(1);
    let d = vertical_concat(&a.diagram, &b.diagram).unwrap();
    let direct = x_two_morphism(&cat, &Cobordism::new(a.bottom.clone(), b.top.clone(), d)).unwrap();
    let mut ledger = AnomalyLedger::default();
    let r = vertical_compose_x(&cat, &Cell::Graph(a), &Cell::Graph(b), &mut ledger).unwrap();
    assert_eq!(direct.maps[0][0], r.composite.maps[0][0]);
}
