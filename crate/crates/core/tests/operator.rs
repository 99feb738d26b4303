mod common;

use common::*;
use cqexp_core::operator::tensor_all;
use cqexp_core::{cq_state, von_neumann_entropy, CQChannel, DensityMatrix, Error, HermitianMatrix, Prior};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn eig_of_identity_and_diagonal() {
    let e = HermitianMatrix::identity(2).eig();
    assert_eq!(e.values, vec![1.0, 1.0]);
    let e = HermitianMatrix::from_diagonal(&[3.0, 1.0]).eig();
    assert_eq!(e.values, vec![3.0, 1.0]);
    assert_eq!(e.vectors, DMatrix::identity(2, 2));
}

#[test]
fn eig_rejects_non_hermitian() {
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(1.0)]);
    assert!(matches!(HermitianMatrix::new(m), Err(Error::InvalidOperator { .. })));
}

#[test]
fn power_examples() {
    let p = HermitianMatrix::identity(3).power(0.7).unwrap();
    assert!(max_abs_diff(&p, &HermitianMatrix::identity(3)) < 1e-15);
    let p = HermitianMatrix::from_diagonal(&[4.0, 0.0]).power(0.5).unwrap();
    assert_eq!(p.diagonal(), vec![2.0, 0.0]);
    let inv = HermitianMatrix::from_diagonal(&[4.0, 0.0]).power(-0.5).unwrap();
    assert_eq!(inv.diagonal(), vec![0.5, 0.0]);
    assert!(matches!(HermitianMatrix::from_diagonal(&[1.0, -0.1]).power(0.5), Err(Error::NotPsd { .. })));
}

#[test]
fn tensor_examples() {
    let i4 = HermitianMatrix::identity(2).tensor(&HermitianMatrix::identity(2));
    assert_eq!(i4, HermitianMatrix::identity(4));
    let t = HermitianMatrix::from_diagonal(&[1.0, 0.0]).tensor(&HermitianMatrix::from_diagonal(&[0.0, 1.0]));
    assert_eq!(t.diagonal(), vec![0.0, 1.0, 0.0, 0.0]);
    assert!(t.is_diagonal());
}

#[test]
fn partial_trace_examples() {
    let mut r = rng(1);
    let rho = random_density(&mut r, 2);
    let sigma = random_density(&mut r, 3);
    let joint = rho.tensor(&sigma);
    let back = joint.as_hermitian().partial_trace(&[2, 3], &[0]).unwrap();
    assert!(max_abs_diff(&back, rho.as_hermitian()) < 1e-12);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = DensityMatrix::pure(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
    let marginal = bell.as_hermitian().partial_trace(&[2, 2], &[0]).unwrap();
    assert!(max_abs_diff(&marginal, DensityMatrix::maximally_mixed(2).as_hermitian()) < 1e-15);

    assert!(matches!(bell.as_hermitian().partial_trace(&[2, 3], &[0]), Err(Error::DimensionError { .. })));
}

#[test]
fn cq_state_examples() {
    let mut r = rng(2);
    let rho = random_density(&mut r, 2);
    let ch = CQChannel::from_outputs(vec![rho.clone(), rho.clone()]).unwrap();
    let st = cq_state(&ch, &Prior::uniform(2)).unwrap();
    assert!(max_abs_diff(st.b_marginal().as_hermitian(), rho.as_hermitian()) < 1e-15);

    let other = random_density(&mut r, 2);
    let ch = CQChannel::from_outputs(vec![rho.clone(), other]).unwrap();
    let st = cq_state(&ch, &Prior::new(vec![1.0, 0.0]).unwrap()).unwrap();
    assert!(max_abs_diff(st.b_marginal().as_hermitian(), rho.as_hermitian()) < 1e-15);
    let blocks: Vec<f64> = st.blocks().map(|(p, _)| p).collect();
    assert_eq!(blocks, vec![1.0, 0.0]);

    assert!(matches!(cq_state(&ch, &Prior::uniform(3)), Err(Error::DimensionError { .. })));
}

#[test]
fn entropy_examples() {
    let pure = DensityMatrix::pure(&[c(0.6), Complex64::new(0.0, 0.8)]).unwrap();
    assert!(von_neumann_entropy(&pure).abs() < 1e-12);
    assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)) - 1.0).abs() < 1e-15);
    let d = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
    assert!((von_neumann_entropy(&d) - 0.8112781244591328).abs() < 1e-15);
    assert!((von_neumann_entropy(&d) - h2(0.25)).abs() < 1e-15);
}

#[test]
fn density_validation() {
    assert!(matches!(DensityMatrix::diagonal(&[0.7, 0.4]), Err(Error::InvalidTrace { .. })));
    assert!(matches!(DensityMatrix::diagonal(&[1.2, -0.2]), Err(Error::NotPsd { .. })));
}

fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eig_reconstructs(s in seed(), d in 1usize..6) {
        let h = random_hermitian(&mut rng(s), d);
        let e = h.eig();
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(e.reconstruct().sub(&h).operator_norm() <= 1e-9);
        let gram = e.vectors.adjoint() * &e.vectors;
        prop_assert!((gram - DMatrix::<Complex64>::identity(d, d)).camax() < 1e-10);
    }

    #[test]
    fn square_root_squares_back(s in seed(), d in 1usize..6, rank in 1usize..6) {
        let a = random_density_rank(&mut rng(s), d, rank.min(d)).into_hermitian();
        let root = a.power(0.5).unwrap();
        let sq = HermitianMatrix::hermitized(root.matrix() * root.matrix());
        prop_assert!(max_abs_diff(&sq, &a) < 1e-9);
    }

    #[test]
    fn powers_compose(s in seed(), d in 1usize..5, a in 0.0f64..2.5, b in 0.0f64..2.5) {
        let m = random_psd(&mut rng(s), d);
        let lhs = m.power(a).unwrap().power(b).unwrap();
        let rhs = m.power(a * b).unwrap();
        let scale = rhs.operator_norm().max(1.0);
        prop_assert!(max_abs_diff(&lhs, &rhs) <= 1e-8 * scale);
    }

    #[test]
    fn tensor_trace_factorizes(s in seed(), da in 1usize..4, db in 1usize..4) {
        let mut r = rng(s);
        let a = random_hermitian(&mut r, da);
        let b = random_hermitian(&mut r, db);
        let t = a.tensor(&b);
        prop_assert_eq!(t.dim(), da * db);
        prop_assert!((t.trace() - a.trace() * b.trace()).abs() < 1e-10 * (1.0 + t.max_abs()));
    }

    #[test]
    fn partial_trace_preserves_trace(s in seed(), dims in prop::collection::vec(1usize..4, 1..4), mask in any::<u8>()) {
        let total: usize = dims.iter().product();
        let m = random_hermitian(&mut rng(s), total);
        let keep: Vec<usize> = (0..dims.len()).filter(|i| mask >> i & 1 == 1).collect();
        let reduced = m.partial_trace(&dims, &keep).unwrap();
        let kept_dim: usize = keep.iter().map(|&i| dims[i]).product();
        prop_assert_eq!(reduced.dim(), kept_dim);
        prop_assert!((reduced.trace() - m.trace()).abs() < 1e-10 * (1.0 + m.max_abs() * total as f64));
    }

    #[test]
    fn partial_trace_of_product(s in seed(), da in 1usize..4, db in 1usize..4) {
        let mut r = rng(s);
        let a = random_hermitian(&mut r, da);
        let b = random_hermitian(&mut r, db);
        let t = a.tensor(&b);
        let keep_a = t.partial_trace(&[da, db], &[0]).unwrap();
        let keep_b = t.partial_trace(&[da, db], &[1]).unwrap();
        let tol = 1e-9 * (1.0 + t.max_abs());
        prop_assert!(max_abs_diff(&keep_a, &a.scale(b.trace())) < tol);
        prop_assert!(max_abs_diff(&keep_b, &b.scale(a.trace())) < tol);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(s in seed(), d in 1usize..6) {
        let mut r = rng(s);
        let h = random_hermitian(&mut r, d);
        let u = random_unitary(&mut r, d);
        let rotated = conjugate(&u, &h);
        for (x, y) in h.eigenvalues().iter().zip(rotated.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn cq_blocks_reproduce_prior(s in seed(), k in 1usize..5, d in 1usize..4) {
        let mut r = rng(s);
        let ch = random_channel(&mut r, k, d);
        let prior = random_prior(&mut r, k);
        let st = cq_state(&ch, &prior).unwrap();
        let weights: Vec<f64> = st.blocks().map(|(p, _)| p).collect();
        prop_assert_eq!(&weights[..], prior.weights());
        let mut direct = HermitianMatrix::zeros(d);
        for (p, o) in prior.weights().iter().zip(ch.outputs()) {
            direct.add_scaled(*p, o.as_hermitian());
        }
        prop_assert!(max_abs_diff(st.b_marginal().as_hermitian(), &direct) < 1e-14);
        prop_assert!((st.to_matrix().as_hermitian().trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_in_range(s in seed(), d in 1usize..6, rank in 1usize..6) {
        let rho = random_density_rank(&mut rng(s), d, rank.min(d));
        let h = von_neumann_entropy(&rho);
        prop_assert!(h >= 0.0 && h <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn tensor_all_matches_pairwise(s in seed()) {
        let mut r = rng(s);
        let a = random_hermitian(&mut r, 2);
        let b = random_hermitian(&mut r, 3);
        let c3 = random_hermitian(&mut r, 2);
        let all = tensor_all([&a, &b, &c3]);
        prop_assert!(max_abs_diff(&all, &a.tensor(&b).tensor(&c3)) < 1e-14);
    }
}
