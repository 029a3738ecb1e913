use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsos_core::graded::{
    associator, dual_space, tensor_morphism, tensor_space, CMatrix, Context, GradedMorphism, GradedSpace,
};
use rsos_core::groupoid::{enumerate_alcove, AlcoveSpec, Arrow, LatticeVector, WeightPoint};
use rsos_core::rsos::Model;
use rsos_core::Error;

fn rsos_v(n: usize, r: i64) -> Arc<GradedSpace> {
    Arc::new(Model::rsos(n, r, Complex64::new(0.0, 0.8)).unwrap().vector_space())
}

fn arrow(a: &[i64], mu: &[i64]) -> Arrow {
    Arrow::new(WeightPoint::integral(a), LatticeVector::new(mu.to_vec()))
}

/// A graded space on the `(n, r)` alcove with random arrows and dimensions.
fn random_space(rng: &mut ChaCha8Rng, n: usize, r: i64) -> GradedSpace {
    let pts = enumerate_alcove(&AlcoveSpec::regular_affine(n, r)).unwrap();
    let mut dims = Vec::new();
    for _ in 0..rng.random_range(1..8) {
        let a = &pts[rng.random_range(0..pts.len())];
        let b = &pts[rng.random_range(0..pts.len())];
        let mu = b.offset() - a.offset();
        dims.push((Arrow::new(a.clone(), mu), rng.random_range(1..=2)));
    }
    GradedSpace::new(Context::rsos(n, r), dims)
}

fn random_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn random_endo(rng: &mut ChaCha8Rng, v: &Arc<GradedSpace>) -> GradedMorphism {
    let blocks: BTreeMap<Arrow, CMatrix> = v
        .arrows()
        .map(|(a, d)| (a.clone(), random_block(rng, d, d)))
        .collect();
    GradedMorphism::new(v.clone(), v.clone(), blocks).unwrap()
}

/// `dim (V⊗W)_γ` by searching all factorizations `γ = β∘α`.
fn brute_force_tensor_dim(v: &GradedSpace, w: &GradedSpace, gamma: &Arrow) -> usize {
    let mut total = 0;
    for (alpha, da) in v.arrows() {
        for (beta, db) in w.arrows() {
            if let Ok(c) = Arrow::compose(beta, alpha) {
                if &c == gamma {
                    total += da * db;
                }
            }
        }
    }
    total
}

#[test]
fn tensor_dimension_examples() {
    let v = rsos_v(2, 5);
    let vv = tensor_space(&v, &v).unwrap();
    assert_eq!(vv.dim(&arrow(&[1, 0], &[2, 0])), 1);
    assert_eq!(vv.dim(&arrow(&[1, 0], &[1, 1])), 1);
    assert_eq!(vv.dim(&arrow(&[2, 0], &[1, 1])), 2);
}

#[test]
fn tensor_dims_match_factorization_search() {
    for (n, r) in [(2, 4), (2, 5), (2, 6), (3, 5), (3, 6)] {
        let v = rsos_v(n, r);
        let vv = tensor_space(&v, &v).unwrap();
        let vvv = tensor_space(&vv, &v).unwrap();
        for (gamma, d) in vv.arrows() {
            assert_eq!(d, brute_force_tensor_dim(&v, &v, gamma));
        }
        for (gamma, d) in vvv.arrows() {
            assert_eq!(d, brute_force_tensor_dim(&vv, &v, gamma));
        }
        let total: usize = vv.arrows().map(|(_, d)| d).sum();
        let brute: usize = v
            .arrows()
            .map(|(a, _)| v.arrows_from(&a.target()).len())
            .sum();
        assert_eq!(total, brute);
    }
}

#[test]
fn unit_law_keeps_dimensions() {
    let v = rsos_v(3, 5);
    let unit = GradedSpace::unit(v.context().clone(), v.objects());
    let vu = tensor_space(&v, &unit).unwrap();
    let uv = tensor_space(&unit, &v).unwrap();
    let dims: Vec<_> = v.arrows().map(|(a, d)| (a.clone(), d)).collect();
    assert_eq!(vu.arrows().map(|(a, d)| (a.clone(), d)).collect::<Vec<_>>(), dims);
    assert_eq!(uv.arrows().map(|(a, d)| (a.clone(), d)).collect::<Vec<_>>(), dims);
}

#[test]
fn tensor_of_identities_is_identity() {
    let v = rsos_v(2, 5);
    let id = GradedMorphism::identity(v.clone());
    let t = tensor_morphism(&id, &id).unwrap();
    let vv = Arc::new(tensor_space(&v, &v).unwrap());
    assert!(t.max_abs_diff(&GradedMorphism::identity(vv)).unwrap() < 1e-15);
}

#[test]
fn single_arrow_tensor_is_kronecker() {
    let ctx = Context::rsos(2, 5);
    let a = arrow(&[2, 0], &[1, 0]);
    let b = Arrow::new(a.target(), LatticeVector::new(vec![0, 1]));
    let v = Arc::new(GradedSpace::new(ctx.clone(), [(a.clone(), 2)]));
    let w = Arc::new(GradedSpace::new(ctx, [(b.clone(), 3)]));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (fa, fb) = (random_block(&mut rng, 2, 2), random_block(&mut rng, 3, 3));
    let f = GradedMorphism::new(v.clone(), v.clone(), BTreeMap::from([(a.clone(), fa.clone())])).unwrap();
    let g = GradedMorphism::new(w.clone(), w.clone(), BTreeMap::from([(b.clone(), fb.clone())])).unwrap();
    let t = tensor_morphism(&f, &g).unwrap();
    let gamma = Arrow::compose(&b, &a).unwrap();
    assert_eq!(t.blocks().count(), 1);
    assert!(rsos_core::graded::max_abs(&(t.block(&gamma).unwrap() - fa.kronecker(&fb))) < 1e-15);
}

#[test]
fn block_shapes_are_validated() {
    let v = rsos_v(2, 5);
    let (a, _) = v.arrows().next().unwrap();
    let bad = BTreeMap::from([(a.clone(), CMatrix::zeros(2, 1))]);
    assert!(matches!(GradedMorphism::new(v.clone(), v, bad), Err(Error::ShapeMismatch(_))));
}

#[test]
fn dual_arrows_are_inverted_steps() {
    let v = rsos_v(2, 5);
    let d = dual_space(&v).unwrap();
    let mut got: Vec<Arrow> = d.dual.arrows().map(|(a, _)| a.clone()).collect();
    let mut expected = Vec::new();
    for l in 1..=4i64 {
        for (i, step) in [[-1, 0], [0, -1]].iter().enumerate() {
            let target = if i == 0 { l - 1 } else { l + 1 };
            if (1..=4).contains(&target) {
                expected.push(arrow(&[l, 0], step));
            }
        }
    }
    got.sort();
    expected.sort();
    assert_eq!(got, expected);
}

#[test]
fn unit_is_self_dual() {
    let pts = enumerate_alcove(&AlcoveSpec::regular_affine(3, 5)).unwrap();
    let unit = Arc::new(GradedSpace::unit(Context::rsos(3, 5), pts));
    let d = dual_space(&unit).unwrap();
    assert_eq!(
        d.dual.arrows().collect::<Vec<_>>(),
        unit.arrows().collect::<Vec<_>>()
    );
    assert!(d.zigzag_residuals(&unit).unwrap().iter().all(|&x| x < 1e-12));
}

#[test]
fn zigzag_identities_hold() {
    for (n, r) in [(2, 5), (3, 5)] {
        let v = rsos_v(n, r);
        let vv = Arc::new(tensor_space(&v, &v).unwrap());
        for space in [v, vv] {
            let res = dual_space(&space).unwrap().zigzag_residuals(&space).unwrap();
            assert!(res.iter().all(|&x| x < 1e-12), "{res:?}");
        }
    }
}

#[test]
fn inverse_pair_composes_to_identity() {
    let v = rsos_v(3, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_endo(&mut rng, &v);
    let id = GradedMorphism::identity(v.clone());
    assert!(f.compose(&f.inverse().unwrap()).unwrap().max_abs_diff(&id).unwrap() < 1e-12);
    assert!(f.compose(&id).unwrap().max_abs_diff(&f).unwrap() < 1e-15);
}

#[test]
fn associator_is_invertible_and_preserves_dimensions() {
    let v = rsos_v(2, 5);
    let a = associator(&v, &v, &v).unwrap();
    let left = tensor_space(&tensor_space(&v, &v).unwrap(), &v).unwrap();
    let right = tensor_space(&v, &tensor_space(&v, &v).unwrap()).unwrap();
    assert_eq!(
        left.arrows().collect::<Vec<_>>(),
        right.arrows().collect::<Vec<_>>()
    );
    let round = a.inverse().unwrap().compose(&a).unwrap();
    assert!(round.max_abs_diff(&GradedMorphism::identity(a.domain().clone())).unwrap() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Arc::new(random_space(&mut rng, 2, 5));
        let w = Arc::new(random_space(&mut rng, 2, 5));
        let (f, f2) = (random_endo(&mut rng, &v), random_endo(&mut rng, &v));
        let (g, g2) = (random_endo(&mut rng, &w), random_endo(&mut rng, &w));
        let left = tensor_morphism(&f.compose(&f2).unwrap(), &g.compose(&g2).unwrap()).unwrap();
        let right = tensor_morphism(&f, &g).unwrap().compose(&tensor_morphism(&f2, &g2).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
    }

    #[test]
    fn composition_is_bilinear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Arc::new(random_space(&mut rng, 3, 5));
        let (f, g, h) = (random_endo(&mut rng, &v), random_endo(&mut rng, &v), random_endo(&mut rng, &v));
        let left = f.add(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&h).unwrap().add(&g.compose(&h).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
    }

    #[test]
    fn tensor_dims_agree_with_search(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_space(&mut rng, 3, 6);
        let w = random_space(&mut rng, 3, 6);
        let t = tensor_space(&v, &w).unwrap();
        for (gamma, d) in t.arrows() {
            prop_assert_eq!(d, brute_force_tensor_dim(&v, &w, gamma));
        }
        let total: usize = v.arrows().map(|(a, da)| {
            w.arrows().filter(|(b, _)| b.source == a.target()).map(|(_, db)| da * db).sum::<usize>()
        }).sum();
        prop_assert_eq!(t.total_dim(), total);
    }

    #[test]
    fn associator_is_natural(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Arc::new(random_space(&mut rng, 2, 5));
        let v = Arc::new(random_space(&mut rng, 2, 5));
        let w = Arc::new(random_space(&mut rng, 2, 5));
        let (f, g, h) = (random_endo(&mut rng, &u), random_endo(&mut rng, &v), random_endo(&mut rng, &w));
        let a = associator(&u, &v, &w).unwrap();
        let left = a.compose(&tensor_morphism(&tensor_morphism(&f, &g).unwrap(), &h).unwrap()).unwrap();
        let right = tensor_morphism(&f, &tensor_morphism(&g, &h).unwrap()).unwrap().compose(&a).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
    }
}
