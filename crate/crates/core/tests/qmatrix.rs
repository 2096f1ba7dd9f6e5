use proptest::prelude::*;
use qmet::qmatrix::{
    block, embed_real, herm_eig, kron, partial_trace, partial_transpose_r, pauli, BlockSpace, ComplexMatrix, C64,
};
use qmet::Error;

fn phi2() -> Vec<C64> {
    let s = 0.5f64.sqrt();
    vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)]
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.rows() == b.rows() && a.cols() == b.cols() && (a - b).max_abs() <= tol
}

fn cmat(n: usize, m: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * m)
        .prop_map(move |v| ComplexMatrix::from_fn(n, m, |i, j| C64::new(v[i * m + j].0, v[i * m + j].1)))
}

fn herm(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    cmat(n, n).prop_map(|a| a.hermitize())
}

#[test]
fn kron_examples() {
    assert!(close(&kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), &ComplexMatrix::identity(4), 0.0));
    let k = kron(&ComplexMatrix::diag(&[1.0, 2.0]), &ComplexMatrix::diag(&[3.0, 4.0]));
    assert!(close(&k, &ComplexMatrix::diag(&[3.0, 4.0, 6.0, 8.0]), 0.0));
    let s1 = &pauli()[0];
    let xx = kron(s1, s1);
    let p = ComplexMatrix::projector(&phi2());
    assert!(close(&(&(&xx * &p) * &xx.adjoint()), &p, 1e-15));
}

#[test]
fn partial_trace_examples() {
    let p = ComplexMatrix::projector(&phi2());
    let r = partial_trace(&p, &[2, 2], &[1]).unwrap();
    assert!(close(&r, &ComplexMatrix::identity(2).scale_re(0.5), 1e-15));

    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
    let b = ComplexMatrix::from_real_rows(&[&[0.5, 1.0, 0.0], &[0.0, 2.0, 0.0], &[1.0, 0.0, 3.5]]);
    let r = partial_trace(&kron(&a, &b), &[2, 3], &[1]).unwrap();
    assert!(close(&r, &a.scale_re(6.0), 1e-14));

    // Choi of the identity channel, T = |I><I| on B (x) A
    let mut ii = vec![C64::new(0.0, 0.0); 4];
    ii[0] = C64::new(1.0, 0.0);
    ii[3] = C64::new(1.0, 0.0);
    let t = ComplexMatrix::projector(&ii);
    let r = partial_trace(&t, &[2, 2], &[0]).unwrap();
    assert!(close(&r, &ComplexMatrix::identity(2), 1e-15));

    assert!(matches!(partial_trace(&t, &[2, 3], &[0]), Err(Error::Dimension(_))));
    assert!(matches!(partial_trace(&t, &[2, 2], &[2]), Err(Error::IndexOutOfRange(_))));
}

#[test]
fn block_examples() {
    let s = BlockSpace::new(2, 2, 3);
    assert_eq!(s.dim(), 18);
    let i = ComplexMatrix::identity(18);
    assert!(close(&block(&i, &s, 0, 0).unwrap(), &ComplexMatrix::identity(6), 0.0));
    assert!(close(&block(&i, &s, 0, 1).unwrap(), &ComplexMatrix::zeros(6, 6), 0.0));

    let s1 = BlockSpace::new(1, 1, 2);
    let m = ComplexMatrix::from_rows(&[
        &[C64::new(1.0, 0.0), C64::new(0.0, 2.0)],
        &[C64::new(3.0, -1.0), C64::new(4.0, 0.0)],
    ]);
    let y = kron(&ComplexMatrix::unit(2, 0, 1), &m);
    assert!(close(&block(&y, &s1, 0, 1).unwrap(), &m, 0.0));
    assert!(matches!(block(&y, &s1, 2, 0), Err(Error::IndexOutOfRange(_))));
    assert!(matches!(block(&i, &s1, 0, 0), Err(Error::Dimension(_))));
}

#[test]
fn embed_real_examples() {
    let e = embed_real(&ComplexMatrix::identity(2)).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(e.get(i, j), if i == j { 1.0 } else { 0.0 });
        }
    }
    let ev = embed_real(&pauli()[1]).unwrap().eigenvalues();
    for (v, w) in ev.iter().zip([1.0, 1.0, -1.0, -1.0]) {
        assert!((v - w).abs() < 1e-12, "{ev:?}");
    }
    let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    assert!(matches!(embed_real(&bad), Err(Error::NotHermitian(_))));
}

#[test]
fn herm_eig_examples() {
    let e = herm_eig(&ComplexMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
    assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    let perm = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]);
    assert!(close(&e.vectors, &perm, 1e-14));

    let e = herm_eig(&pauli()[0]).unwrap();
    assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
    let s = 0.5f64.sqrt();
    let had = ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]]);
    assert!(close(&e.vectors, &had, 1e-14));

    let e = herm_eig(&ComplexMatrix::projector(&phi2())).unwrap();
    assert!((e.values[0] - 1.0).abs() < 1e-14);
    assert!(e.values[1..].iter().all(|v| v.abs() < 1e-14));
    let ov: C64 = e.vector(0).iter().zip(phi2()).map(|(a, b)| a.conj() * b).sum();
    assert!((ov.norm() - 1.0).abs() < 1e-14);

    let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    assert!(herm_eig(&bad).is_err());
}

#[test]
fn partial_transpose_r_examples() {
    let s = BlockSpace::new(1, 1, 2);
    let i = ComplexMatrix::identity(4);
    assert!(close(&partial_transpose_r(&i, &s).unwrap(), &i, 0.0));
    let m = ComplexMatrix::from_rows(&[
        &[C64::new(1.0, 1.0), C64::new(0.0, 2.0)],
        &[C64::new(3.0, -1.0), C64::new(4.0, 0.5)],
    ]);
    let y = kron(&ComplexMatrix::unit(2, 0, 1), &m);
    let want = kron(&ComplexMatrix::unit(2, 1, 0), &m);
    assert!(close(&partial_transpose_r(&y, &s).unwrap(), &want, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in cmat(2, 3), b in cmat(2, 2), c in cmat(3, 1)) {
        let l = kron(&kron(&a, &b), &c);
        let r = kron(&a, &kron(&b, &c));
        prop_assert!(close(&l, &r, 1e-12));
    }

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(a in cmat(12, 12), b in cmat(12, 12), s in -2.0f64..2.0) {
        let dims = [2, 3, 2];
        for traced in [vec![0], vec![1], vec![2], vec![0, 2], vec![0, 1, 2]] {
            let lin = &a + &b.scale_re(s);
            let l = partial_trace(&lin, &dims, &traced).unwrap();
            let r = &partial_trace(&a, &dims, &traced).unwrap() + &partial_trace(&b, &dims, &traced).unwrap().scale_re(s);
            prop_assert!(close(&l, &r, 1e-12));
            prop_assert!((l.trace() - lin.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn embedding_respects_trace_pairing(a in herm(4), b in herm(4)) {
        let lhs = embed_real(&a).unwrap().trace_mul(&embed_real(&b).unwrap());
        let rhs = 2.0 * (&a * &b).trace().re;
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn embedding_doubles_the_spectrum(a in herm(3)) {
        let ev = herm_eig(&a).unwrap().values;
        let er = embed_real(&a).unwrap().eigenvalues();
        for (k, v) in ev.iter().enumerate() {
            prop_assert!((er[2 * k] - v).abs() < 1e-10 && (er[2 * k + 1] - v).abs() < 1e-10);
        }
    }

    #[test]
    fn herm_eig_reconstructs(a in herm(5)) {
        let e = herm_eig(&a).unwrap();
        let v = &e.vectors;
        let lam = ComplexMatrix::diag(&e.values);
        let rec = &(v * &lam) * &v.adjoint();
        prop_assert!((&rec - &a).max_abs() <= 1e-10 * (1.0 + a.max_abs()));
        prop_assert!(close(&(&v.adjoint() * v), &ComplexMatrix::identity(5), 1e-10));
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn partial_transpose_r_keeps_block_hermitian_members_hermitian(a in herm(6), b in cmat(6, 6)) {
        // blocks with X_kj = X_jk^dag, each block Hermitian
        let s = BlockSpace::new(1, 2, 3);
        let bh = b.hermitize();
        let mut y = ComplexMatrix::zeros(12, 12);
        y.set_submatrix(0, 0, &a);
        y.set_submatrix(6, 6, &a.scale_re(2.0));
        y.set_submatrix(0, 6, &bh);
        y.set_submatrix(6, 0, &bh);
        let p = partial_transpose_r(&y, &s).unwrap();
        prop_assert!(p.is_hermitian());
        prop_assert!(close(&partial_transpose_r(&p, &s).unwrap(), &y, 0.0));
    }
}
