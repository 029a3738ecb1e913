use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rsos_core::convolution::ConvolutionElement;
use rsos_core::fusion::{
    exterior_character, fusion_coeff, fusion_rhs, numeric_sym_square_character, predicted_eigenvalue, psi,
    psi_value, sym_power_character_n2, sym_square_character, verify_exactness, verify_fusion_rules,
    verify_spectrum, FusionCase,
};
use rsos_core::graded::Context;
use rsos_core::groupoid::{enumerate_alcove, AlcoveSpec, LatticeVector, WeightPoint};
use rsos_core::rsos::Model;
use rsos_core::Error;

type IMat = Vec<Vec<i64>>;

fn points(n: usize, r: i64) -> Vec<WeightPoint> {
    enumerate_alcove(&AlcoveSpec::regular_affine(n, r)).unwrap()
}

fn matrix(x: &ConvolutionElement, n: usize, r: i64) -> IMat {
    x.to_difference_operator(&points(n, r)).unwrap().matrix()
}

fn mul(x: &IMat, y: &IMat) -> IMat {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
}

fn lin(x: &IMat, a: i64, y: &IMat, b: i64) -> IMat {
    x.iter().zip(y).map(|(u, v)| u.iter().zip(v).map(|(p, q)| a * p + b * q).collect()).collect()
}

/// Heights `1..r-1` of the `n = 2` alcove: `U_0 = I`, `U_1 = A` (path graph),
/// `U_{p+1} = A U_p − U_{p−1}`.
fn chebyshev(p: i64, r: i64) -> IMat {
    let m = (r - 1) as usize;
    let id: IMat = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
    let adj: IMat = (0..m).map(|i| (0..m).map(|j| i64::from(i.abs_diff(j) == 1)).collect()).collect();
    let (mut prev, mut cur) = (id.clone(), adj.clone());
    if p == 0 {
        return id;
    }
    for _ in 1..p {
        let next = lin(&mul(&adj, &cur), 1, &prev, -1);
        prev = cur;
        cur = next;
    }
    cur
}

fn shift(r: i64, k: i64) -> ConvolutionElement {
    ConvolutionElement::restricted_shift(Context::rsos(2, r), &points(2, r), &LatticeVector::new(vec![k, k]))
}

fn ch_v(n: usize, r: i64) -> ConvolutionElement {
    ConvolutionElement::character(&Model::rsos(n, r, Complex64::new(0.0, 0.8)).unwrap().vector_space())
}

#[test]
fn low_symmetric_powers() {
    for r in 4..=7 {
        let unit = ConvolutionElement::indicator(Context::rsos(2, r), points(2, r));
        assert_eq!(sym_power_character_n2(0, r).unwrap(), unit);
        assert_eq!(sym_power_character_n2(1, r).unwrap(), ch_v(2, r));
    }
    // L_3 at r = 5: shifts (3,0),(2,1),(1,2),(0,3), one height each.
    let l3 = sym_power_character_n2(3, 5).unwrap();
    assert_eq!(l3.support_len(), 4);
    assert!(matches!(sym_power_character_n2(4, 5), Err(Error::OutOfRange(_))));
}

#[test]
fn symmetric_powers_are_chebyshev_matrices() {
    for r in 3..=8 {
        for p in 0..=(r - 2) {
            assert_eq!(matrix(&sym_power_character_n2(p, r).unwrap(), 2, r), chebyshev(p, r), "p={p} r={r}");
        }
    }
}

#[test]
fn fusion_coefficient_examples() {
    assert_eq!(fusion_coeff(1, 1, 0, 5).unwrap(), 1);
    assert_eq!(fusion_coeff(1, 1, 2, 5).unwrap(), 1);
    assert_eq!(fusion_coeff(1, 1, 1, 5).unwrap(), 0);
    assert_eq!(fusion_coeff(2, 2, 2, 5).unwrap(), 1);
    assert_eq!(fusion_coeff(2, 2, 3, 5).unwrap(), 0);
    assert_eq!(fusion_coeff(3, 3, 0, 5).unwrap(), 1);
    assert_eq!(fusion_coeff(3, 3, 2, 5).unwrap(), 0);
    assert!(matches!(fusion_coeff(2, 2, 4, 5), Err(Error::OutOfRange(_))));
}

#[test]
fn fusion_tables() {
    for r in 4..=6 {
        let report = verify_fusion_rules(r).unwrap();
        assert!(report.passed(), "r={r}: {:?}", report.mismatches);
        assert_eq!(report.checked as i64, (r - 1) * (r - 1));
        // Independent check on matrices: U_p U_q = Σ_s N U_s (central shifts act trivially).
        for p in 0..=(r - 2) {
            for q in 0..=(r - 2) {
                let mut rhs = lin(&chebyshev(0, r), 0, &chebyshev(0, r), 0);
                for s in 0..=(r - 2) {
                    rhs = lin(&rhs, 1, &chebyshev(s, r), fusion_coeff(p, q, s, r).unwrap());
                }
                assert_eq!(mul(&chebyshev(p, r), &chebyshev(q, r)), rhs, "r={r} p={p} q={q}");
            }
        }
    }
}

#[test]
fn square_of_second_power() {
    let r = 5;
    let l2 = sym_power_character_n2(2, r).unwrap();
    let expected = shift(r, 2)
        .conv_mul(&sym_power_character_n2(0, r).unwrap())
        .unwrap()
        .add(&shift(r, 1).conv_mul(&l2).unwrap())
        .unwrap();
    assert_eq!(l2.conv_mul(&l2).unwrap(), expected);
    assert_eq!(fusion_rhs(2, 2, r).unwrap(), expected);
    // At r = 4 only the trivial term survives.
    let l2 = sym_power_character_n2(2, 4).unwrap();
    assert_eq!(l2.conv_mul(&l2).unwrap(), shift(4, 2).conv_mul(&sym_power_character_n2(0, 4).unwrap()).unwrap());
}

#[test]
fn eigenfunctions_vanish_on_walls() {
    let r = 5;
    for lambda in [[1i64, 0, -1], [2, 1, 0], [3, 1, 0]] {
        assert!(psi_value(&lambda, &[1, 1, 0], r).norm() < 1e-12);
        assert!(psi_value(&lambda, &[2, 0, 0], r).norm() < 1e-12);
        assert!(psi_value(&lambda, &[5, 2, 0], r).norm() < 1e-12);
        assert!(psi_value(&lambda, &[2, 1, 0], r).norm() > 1e-6);
    }
    assert!(matches!(psi(&WeightPoint::integral(&[0, 0]), 2, 5), Err(Error::LambdaOutsideAlcove(_))));
}

#[test]
fn eigenfunctions_are_orthogonal() {
    let (n, r) = (2, 5);
    let fs: Vec<_> = points(n, r).iter().map(|l| psi(l, n, r).unwrap()).collect();
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in fs.iter().enumerate() {
            let ip: Complex64 = f.values.iter().zip(&g.values).map(|(x, y)| x * y.conj()).sum();
            if i == j {
                assert!(ip.norm() > 1e-6);
            } else {
                assert!(ip.norm() < 1e-12, "λ={} μ={}", f.lambda, g.lambda);
            }
        }
    }
    let rho = psi(&WeightPoint::integral(&[2, 1, 0]), 3, 6).unwrap();
    assert!(rho.values.iter().all(|v| v.norm() > 1e-9));
}

#[test]
fn adjacency_spectrum_matches_prediction() {
    for r in [4i64, 5, 7] {
        let m = matrix(&exterior_character(1, 2, r).unwrap(), 2, r);
        let dim = m.len();
        let dense = DMatrix::from_fn(dim, dim, |i, j| m[i][j] as f64);
        let mut got: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
        let mut want: Vec<f64> = (1..r).map(|l| 2.0 * (PI * l as f64 / r as f64).cos()).collect();
        let mut predicted: Vec<f64> = points(2, r)
            .iter()
            .map(|l| predicted_eigenvalue(1, l.integer_coords().unwrap(), r).re)
            .collect();
        for v in [&mut got, &mut want, &mut predicted] {
            v.sort_by(f64::total_cmp);
        }
        for ((g, w), p) in got.iter().zip(&want).zip(&predicted) {
            assert!((g - w).abs() < 1e-12 && (p - w).abs() < 1e-12, "r={r}");
        }
    }
}

#[test]
fn exterior_spectra() {
    for (k, n, r) in [(1, 2, 5), (1, 3, 5), (2, 3, 5), (3, 3, 5), (1, 3, 6), (2, 4, 6)] {
        let report = verify_spectrum(k, n, r).unwrap();
        assert_eq!(report.rows.len(), points(n, r).len());
        assert!(report.max_residual < 1e-10, "k={k} n={n} r={r}");
    }
    // Top exterior power is a central shift: eigenvalue e_n of unimodular numbers with product 1.
    let ev = predicted_eigenvalue(3, &[3, 1, 0], 5);
    assert!((ev - 1.0).norm() < 1e-12);
    assert!(matches!(exterior_character(4, 3, 5), Err(Error::OutOfRange(_))));
}

#[test]
fn exterior_characters_commute() {
    for (n, r) in [(3, 5), (3, 6), (4, 6)] {
        let ext: Vec<_> = (0..=n).map(|k| exterior_character(k, n, r).unwrap()).collect();
        for x in &ext {
            for y in &ext {
                assert_eq!(x.conv_mul(y).unwrap(), y.conv_mul(x).unwrap());
            }
        }
        assert_eq!(ext[1], ch_v(n, r));
    }
}

#[test]
fn square_splits_into_exterior_and_symmetric() {
    for (n, r) in [(2, 4), (2, 5), (3, 5), (3, 6)] {
        let sq = ch_v(n, r).conv_mul(&ch_v(n, r)).unwrap();
        let split = exterior_character(2, n, r).unwrap().add(&sym_square_character(n, r).unwrap()).unwrap();
        assert_eq!(sq, split, "n={n} r={r}");
        let model = Model::rsos(n, r, Complex64::new(0.0, 0.8)).unwrap();
        assert_eq!(numeric_sym_square_character(&model).unwrap(), sym_square_character(n, r).unwrap());
    }
    assert_eq!(sym_square_character(2, 5).unwrap(), sym_power_character_n2(2, 5).unwrap());
}

#[test]
fn exactness_across_configurations() {
    for (n, r) in [(2, 4), (2, 5), (3, 5), (3, 6)] {
        let model = Model::rsos(n, r, Complex64::new(0.0, 0.8)).unwrap();
        let cases = verify_exactness(&model).unwrap();
        assert!(!cases.is_empty());
        for c in &cases {
            assert!(c.passed(1e-8), "n={n} r={r} a={:?} ({}, {})", c.a, c.i, c.j);
            let expected_dim = match c.case {
                FusionCase::Diagonal | FusionCase::Boundary => 1,
                FusionCase::Generic => 2,
            };
            assert_eq!(c.dim, expected_dim);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fusion_coefficients_are_symmetric(r in 3i64..=9, p in 0i64..8, q in 0i64..8, s in 0i64..8) {
        prop_assume!(p <= r - 2 && q <= r - 2 && s <= r - 2);
        let n = fusion_coeff(p, q, s, r).unwrap();
        prop_assert_eq!(n, fusion_coeff(q, p, s, r).unwrap());
        prop_assert_eq!(n, fusion_coeff(p, s, q, r).unwrap());
        prop_assert!(n == 0 || n == 1);
    }

    #[test]
    fn symmetric_powers_commute(r in 3i64..=7, p in 0i64..6, q in 0i64..6) {
        prop_assume!(p <= r - 2 && q <= r - 2);
        let (x, y) = (sym_power_character_n2(p, r).unwrap(), sym_power_character_n2(q, r).unwrap());
        prop_assert_eq!(x.conv_mul(&y).unwrap(), y.conv_mul(&x).unwrap());
    }

    #[test]
    fn spectrum_holds_for_random_level(r in 4i64..=8, k in 1usize..=3) {
        prop_assert!(verify_spectrum(k, 3, r).unwrap().max_residual < 1e-9);
    }
}
