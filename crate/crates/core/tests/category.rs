use nalgebra::DMatrix;
use proptest::prelude::*;
use ribbon_tqft::fusion::{compose, hom_dim, splitting_u, BlockMorphism, SignedColor, StateSpace};
use ribbon_tqft::mtc::{bundled_source, BUNDLED};
use ribbon_tqft::{bundled_category, load_category, parse_category, Error, Scalar};
use std::f64::consts::PI;

fn phi() -> f64 {
    (1.0 + 5.0f64.sqrt()) / 2.0
}

fn close(a: Scalar, b: Scalar, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn global_dimensions() {
    let want = [
        ("trivial", 1.0),
        ("semion", 2.0f64.sqrt()),
        ("fibonacci", (2.0 + phi()).sqrt()),
    ];
    for (name, d) in want {
        let cat = bundled_category(name).unwrap();
        assert!(close(cat.rank_d(), Scalar::new(d, 0.0), 1e-12), "{name}");
    }
}

#[test]
fn gauss_sums() {
    let fib = Scalar::new(1.0, 0.0) + Scalar::from_polar(1.0, -4.0 * PI / 5.0) * phi() * phi();
    let want = [
        ("trivial", Scalar::new(1.0, 0.0)),
        ("semion", Scalar::new(1.0, -1.0)),
        ("fibonacci", fib),
    ];
    for (name, d) in want {
        let cat = bundled_category(name).unwrap();
        assert!(close(cat.delta().unwrap(), d, 1e-12), "{name}");
    }
}

#[test]
fn gauss_sum_modulus_is_global_dimension() {
    for name in BUNDLED {
        let cat = bundled_category(name).unwrap();
        let d = cat.delta().unwrap();
        let dd = cat.rank_d() * cat.rank_d();
        assert!((d * d.conj() - dd).norm() < 1e-8, "{name}");
    }
}

/// Fusion rules recovered from the S-matrix through the Verlinde formula.
#[test]
fn verlinde_reproduces_fusion() {
    for name in BUNDLED {
        let cat = bundled_category(name).unwrap();
        let s: DMatrix<Scalar> = cat.s_tilde() / cat.rank_d();
        let r = cat.rank();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let n: Scalar = (0..r)
                        .map(|l| s[(i, l)] * s[(j, l)] * s[(k, l)].conj() / s[(0, l)])
                        .sum();
                    assert!(
                        close(n, Scalar::new(cat.n(i, j, k) as f64, 0.0), 1e-9),
                        "{name} N[{i}][{j}][{k}] = {n}"
                    );
                }
            }
        }
    }
}

#[test]
fn symmetric_unitary_s() {
    for name in BUNDLED {
        let cat = bundled_category(name).unwrap();
        let s: DMatrix<Scalar> = cat.s_tilde() / cat.rank_d();
        assert!((&s - s.transpose()).norm() < 1e-12);
        let r = cat.rank();
        assert!((&s * s.adjoint() - DMatrix::<Scalar>::identity(r, r)).norm() < 1e-9, "{name}");
    }
}

fn perturbed_fibonacci(delta: &str) -> String {
    bundled_source("fibonacci")
        .unwrap()
        .replacen("\"2/(1+sqrt(5))\"", &format!("\"2/(1+sqrt(5))+{delta}\""), 1)
}

#[test]
fn perturbed_f_symbol_is_rejected() {
    let src = perturbed_fibonacci("0.001");
    match load_category(&src) {
        Err(Error::Consistency { axiom, residual }) => {
            assert!(residual > 1e-9);
            let report = parse_category(&src).unwrap().validate();
            let failed: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.axiom.to_string())
                .collect();
            assert!(failed.iter().any(|a| a == "pentagon"), "{failed:?}");
            assert!(failed.contains(&axiom));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn tiny_perturbation_below_tolerance_is_accepted() {
    assert!(load_category(&perturbed_fibonacci("1e-14")).is_ok());
}

#[test]
fn wrong_twist_breaks_ribbon_or_hexagon() {
    let src = bundled_source("semion").unwrap().replace("\"twist\": [\"1\", \"i\"]", "\"twist\": [\"1\", \"-i\"]");
    let cat = parse_category(&src).unwrap();
    assert!(!cat.validate().all_passed());
}

#[test]
fn hom_dims_fibonacci() {
    let cat = bundled_category("fibonacci").unwrap();
    let t = SignedColor::plus(1);
    assert_eq!(hom_dim(&cat, &[t], 0), 0);
    assert_eq!(hom_dim(&cat, &[t, t], 0), 1);
    assert_eq!(hom_dim(&cat, &[t, t, t], 1), 2);
    assert_eq!(hom_dim(&cat, &[], 0), 1);
    assert_eq!(hom_dim(&cat, &[], 1), 0);
}

/// Fusion-tree counts against powers of the fusion matrix of τ.
#[test]
fn fibonacci_dims_follow_the_fusion_matrix() {
    let cat = bundled_category("fibonacci").unwrap();
    let nt = nalgebra::Matrix2::new(0u64, 1, 1, 1);
    let mut p = nalgebra::Matrix2::<u64>::identity();
    for n in 0..9 {
        let b = vec![SignedColor::plus(1); n];
        for k in 0..2 {
            assert_eq!(hom_dim(&cat, &b, k) as u64, p[(0, k)], "n={n} k={k}");
        }
        p *= nt;
    }
}

fn sign_run(cat: &ribbon_tqft::ModularCategoryData, code: &[(usize, bool)]) -> Vec<SignedColor> {
    code.iter()
        .map(|&(l, plus)| {
            let l = l % cat.rank();
            if plus {
                SignedColor::plus(l)
            } else {
                SignedColor::minus(l)
            }
        })
        .collect()
}

fn random_block(space_s: &StateSpace, space_t: &StateSpace, seed: &[f64]) -> BlockMorphism {
    let mut f = BlockMorphism::zero(space_s.clone(), space_t.clone());
    let mut q = 0;
    for b in f.blocks.iter_mut() {
        for x in b.iter_mut() {
            *x = Scalar::new(seed[q % seed.len()], seed[(q + 1) % seed.len()]);
            q += 1;
        }
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The splitting map is square and invertible.
    #[test]
    fn splitting_is_invertible(
        v in prop::collection::vec((0usize..2, any::<bool>()), 0..3),
        w in prop::collection::vec((0usize..2, any::<bool>()), 0..3),
    ) {
        let cat = bundled_category("fibonacci").unwrap();
        let (v, w) = (sign_run(&cat, &v), sign_run(&cat, &w));
        let s = splitting_u(&cat, &v, &w);
        let total: usize = s.summands.iter().map(|x| x.left.dim(0) * x.right.dim(0)).sum();
        let mut vw = v.clone();
        vw.extend(w.iter().cloned());
        prop_assert_eq!(total, hom_dim(&cat, &vw, 0));
        prop_assert_eq!(s.assembled.nrows(), s.assembled.ncols());
        if total > 0 {
            let inv = s.inverse.expect("invertible");
            let id = DMatrix::<Scalar>::identity(total, total);
            prop_assert!((&inv * &s.assembled - id).norm() < 1e-9);
        }
    }

    #[test]
    fn composition_is_associative(
        b in prop::collection::vec((0usize..2, any::<bool>()), 0..4),
        seed in prop::collection::vec(-1.0f64..1.0, 8..16),
    ) {
        let cat = bundled_category("fibonacci").unwrap();
        let space = StateSpace::new(&cat, &sign_run(&cat, &b));
        let f = random_block(&space, &space, &seed);
        let mut rev = seed.clone();
        rev.reverse();
        let g = random_block(&space, &space, &rev);
        let h = random_block(&space, &space, &seed[1..]);
        let lhs = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let rhs = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert!(lhs.max_diff(&rhs) < 1e-10);
        let id = BlockMorphism::identity(space.clone());
        prop_assert!(compose(&f, &id).unwrap().max_diff(&f) == 0.0);
        prop_assert!(compose(&id, &f).unwrap().max_diff(&f) == 0.0);
    }
}

#[test]
fn composition_needs_chaining_boundaries() {
    let cat = bundled_category("fibonacci").unwrap();
    let a = StateSpace::new(&cat, &[SignedColor::plus(1)]);
    let b = StateSpace::new(&cat, &[SignedColor::plus(1), SignedColor::plus(1)]);
    let f = BlockMorphism::identity(a);
    let g = BlockMorphism::identity(b);
    assert!(matches!(compose(&f, &g), Err(Error::BoundaryMismatch(_))));
}
