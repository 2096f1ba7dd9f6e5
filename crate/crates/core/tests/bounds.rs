use proptest::prelude::*;
use qmet::bounds::{
    channel_bound, maxent_certificate_hn, maxent_certificate_sld, reparametrize, sld_bound_analytic, sld_operators,
    sld_pairwise_traces, state_bound, tight_relaxation, BoundKind, BoundOptions,
};
use qmet::channels::{
    depolarizing_qubit, dicke_operators, field_sensing, generalized_pauli, max_entangled, su2_depolarizing,
    sym_max_entangled, weyl, ChannelFamily, FdScheme,
};
use qmet::conic_ir::WeightMatrix;
use qmet::model::{ChannelModel, StateModel};
use qmet::qmatrix::{expi, herm_fn, kron, partial_trace, pauli, ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn depol_ref(p: f64) -> f64 {
    (2.0 - p) / (8.0 * (1.0 - p) * (1.0 - p))
}

#[test]
fn depolarizing_all_kinds_match_closed_form() {
    let opts = BoundOptions::default();
    for p in [0.0, 0.2, 0.5] {
        let m = depolarizing_qubit(p).unwrap().model(FdScheme::default()).unwrap();
        for k in BoundKind::ALL {
            let r = channel_bound(k, &m, &WeightMatrix::identity(1), &opts).unwrap();
            assert!(rel(r.value, depol_ref(p)) < 1e-4, "p={p} {k:?}: {} vs {}", r.value, depol_ref(p));
        }
    }
}

#[test]
fn probe_is_a_purification() {
    let m = depolarizing_qubit(0.2).unwrap().model(FdScheme::default()).unwrap();
    let r = channel_bound(BoundKind::Sld, &m, &WeightMatrix::identity(1), &BoundOptions::default()).unwrap();
    let rho = r.rho_a.unwrap();
    assert!((rho.trace().re - 1.0).abs() < 1e-7);
    let psi = r.purification.unwrap();
    let red = partial_trace(&ComplexMatrix::projector(&psi), &[2, 2], &[1]).unwrap();
    assert!((&red - &rho).max_abs() < 1e-6);
}

#[test]
fn probe_round_trip() {
    let opts = BoundOptions::default();
    let m = depolarizing_qubit(0.2).unwrap().model(FdScheme::default()).unwrap();
    let g = WeightMatrix::identity(1);
    for k in BoundKind::ALL {
        let r = channel_bound(k, &m, &g, &opts).unwrap();
        let st = m.evolve(r.purification.as_ref().unwrap(), 2).unwrap();
        let s = state_bound(k, &st, &g, &opts).unwrap();
        assert!(rel(s.value, r.value) < 1e-4, "{k:?}: {} vs {}", s.value, r.value);
    }
}

#[test]
fn su2_closed_forms() {
    let opts = BoundOptions::default();
    let g = WeightMatrix::identity(3);
    for (j, p, want) in [(0.5, 0.0, 1.5), (1.0, 0.0, 0.5625), (0.5, 0.5, 4.5)] {
        let m = su2_depolarizing(j, p).unwrap().model(FdScheme::default()).unwrap();
        let r = channel_bound(BoundKind::Sld, &m, &g, &opts).unwrap();
        assert!(rel(r.value, want) < 1e-4, "j={j} p={p}: {}", r.value);
    }
}

#[test]
fn su2_bounds_coincide_without_noise() {
    let opts = BoundOptions::default();
    let g = WeightMatrix::identity(3);
    let m = su2_depolarizing(0.5, 0.0).unwrap().model(FdScheme::default()).unwrap();
    for k in [BoundKind::Nh, BoundKind::Hn] {
        let r = channel_bound(k, &m, &g, &opts).unwrap();
        assert!(rel(r.value, 1.5) < 1e-3, "{k:?}: {}", r.value);
    }
    let r = tight_relaxation(&m, &g, 2, &opts).unwrap();
    assert!(rel(r.value, 1.5) < 1e-3, "ext: {}", r.value);
}

#[test]
fn bernoulli_pauli() {
    let fam = generalized_pauli(2, vec![0.25], |th| vec![1.0 - th[0], 0.0, th[0], 0.0]).unwrap();
    let m = fam.model(FdScheme::default()).unwrap();
    let g = WeightMatrix::identity(1);
    let st = m.evolve(&max_entangled(2), 2).unwrap();
    assert!(rel(sld_bound_analytic(&st, &g).unwrap(), 0.1875) < 1e-6);
    let r = channel_bound(BoundKind::Sld, &m, &g, &BoundOptions::default()).unwrap();
    assert!(rel(r.value, 0.1875) < 1e-4, "{}", r.value);
}

#[test]
fn sld_of_pure_state() {
    // |0>, D = i[rho, sigma_1]
    let rho = ComplexMatrix::diag(&[1.0, 0.0]);
    let s1 = qmet::qmatrix::pauli()[0].clone();
    let d = rho.commutator(&s1).scale(C64::new(0.0, 1.0));
    let st = StateModel::new(rho, vec![d]).unwrap();
    let sld = sld_operators(&st).unwrap();
    assert!((sld.j_sld.get(0, 0) - 4.0).abs() < 1e-10);
}

#[test]
fn certificates_hold_for_depolarizing() {
    let g = WeightMatrix::identity(1);
    for p in [0.0, 0.3, 0.9] {
        let m = depolarizing_qubit(p).unwrap().model(FdScheme::default()).unwrap();
        let c = maxent_certificate_sld(&m, &g, 1e-6).unwrap();
        assert!(c.in_k, "p={p}: {}", c.deviation);
    }
    let m = depolarizing_qubit(0.5).unwrap().model(FdScheme::default()).unwrap();
    let c = maxent_certificate_hn(&m, &g, 1e-6, &BoundOptions::default()).unwrap();
    assert!(c.in_k, "{} > {}", c.deviation, c.threshold);
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).hermitize()
}

fn random_weight(rng: &mut ChaCha8Rng, d: usize) -> WeightMatrix {
    let a = ComplexMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), 0.0));
    let g = &(&a * &a.transpose()) + &ComplexMatrix::identity(d).scale_re(0.2);
    WeightMatrix::new(d, g.data().iter().map(|z| z.re).collect()).unwrap()
}

/// exp(i(theta1 H1 + theta2 H2)) followed by a Pauli channel with full support.
fn random_qubit_channel(rng: &mut ChaCha8Rng) -> ChannelModel {
    let h = [random_hermitian(rng, 2), random_hermitian(rng, 2)];
    let mut q: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..1.0)).collect();
    q[0] += 2.0;
    let s: f64 = q.iter().sum();
    let q: Vec<f64> = q.iter().map(|x| x / s).collect();
    let p = pauli();
    let ws = [ComplexMatrix::identity(2), p[0].clone(), p[1].clone(), p[2].clone()];
    ChannelFamily::new("random", 2, 2, vec![0.0, 0.0], move |th, rho| {
        let u = expi(&(&h[0].scale_re(th[0]) + &h[1].scale_re(th[1])), 1.0)?;
        let r = &(&u * rho) * &u.adjoint();
        let mut out = ComplexMatrix::zeros(2, 2);
        for (w, &qk) in ws.iter().zip(&q) {
            out = &out + &(&(w * &r) * w).scale_re(qk);
        }
        Ok(out)
    })
    .model(FdScheme::default())
    .unwrap()
}

fn random_qubit_state(rng: &mut ChaCha8Rng) -> StateModel {
    let a = ComplexMatrix::from_fn(2, 2, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let r = &(&a * &a.adjoint()) + &ComplexMatrix::identity(2).scale_re(0.05);
    let rho = r.scale_re(1.0 / r.trace().re);
    let ds = (0..2)
        .map(|_| {
            let d = random_hermitian(rng, 2);
            let tr = d.trace().re / 2.0;
            &d - &ComplexMatrix::identity(2).scale_re(tr)
        })
        .collect();
    StateModel::new(rho, ds).unwrap()
}

#[test]
fn random_qubit_models_oracle_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = BoundOptions::default();
    for case in 0..20 {
        let g = random_weight(&mut rng, 2);
        let st = random_qubit_state(&mut rng);
        let a = sld_bound_analytic(&st, &g).unwrap();
        let s4 = state_bound(BoundKind::Sld, &st, &g, &opts).unwrap();
        assert!(rel(s4.value, a) < 1e-5, "case {case}: S4 {} vs {a}", s4.value);

        let m = random_qubit_channel(&mut rng);
        for k in [BoundKind::Sld, BoundKind::Nh, BoundKind::Hn] {
            let r = channel_bound(k, &m, &g, &opts).unwrap();
            let st = m.evolve(r.purification.as_ref().unwrap(), 2).unwrap();
            let s = state_bound(k, &st, &g, &opts).unwrap();
            assert!(rel(s.value, r.value) < 1e-4, "case {case} {k:?}: {} vs {}", s.value, r.value);
            if k == BoundKind::Sld {
                assert!(rel(sld_bound_analytic(&st, &g).unwrap(), r.value) < 1e-4);
            }
        }
    }
}

#[test]
fn random_pauli_family_matches_classical_fisher() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = 3;
    for case in 0..3 {
        // p_k(theta) = w_k (1 + theta . c_k) with sum_k w_k c_k = 0
        let w: Vec<f64> = {
            let v: Vec<f64> = (0..9).map(|_| rng.gen_range(0.2..1.0)).collect();
            let s: f64 = v.iter().sum();
            v.iter().map(|x| x / s).collect()
        };
        let c: Vec<[f64; 2]> = {
            let raw: Vec<[f64; 2]> = (0..9).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
            let mean = [0, 1].map(|j| raw.iter().zip(&w).map(|(r, wk)| r[j] * wk).sum::<f64>());
            raw.iter().map(|r| [r[0] - mean[0], r[1] - mean[1]]).collect()
        };
        let (w2, c2) = (w.clone(), c.clone());
        let fam = generalized_pauli(d, vec![0.0, 0.0], move |th| {
            (0..9).map(|k| w2[k] * (1.0 + th[0] * c2[k][0] + th[1] * c2[k][1])).collect()
        })
        .unwrap();
        let mut j = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                j[a][b] = (0..9).map(|k| w[k] * c[k][a] * c[k][b]).sum();
            }
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
        let g = random_weight(&mut rng, 2);
        let want: f64 = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| g.get(a, b) * inv[b][a]).sum();

        let m = fam.model(FdScheme::default()).unwrap();
        let st = m.evolve(&max_entangled(d), d).unwrap();
        assert!(rel(sld_bound_analytic(&st, &g).unwrap(), want) < 1e-6, "case {case}");
        let r = channel_bound(BoundKind::Sld, &m, &g, &BoundOptions::default()).unwrap();
        assert!(rel(r.value, want) < 1e-4, "case {case}: {} vs {want}", r.value);
        // covariant family: the certificate holds
        assert!(maxent_certificate_sld(&m, &g, 1e-6).unwrap().in_k);
    }
    // the Weyl operators are unitary
    for k in 0..9 {
        let u = weyl(d, k / d, k % d);
        assert!((&(&u * &u.adjoint()) - &ComplexMatrix::identity(d)).max_abs() < 1e-14);
    }
}

#[test]
fn lemma4_commutator_coefficient() {
    for n in [2usize, 3] {
        let gamma = 1e-3;
        let fam = field_sensing(n, gamma).unwrap();
        let phi = ComplexMatrix::projector(&sym_max_entangled(n));
        let rho = fam.apply_bipartite(&fam.theta0, &phi, n + 1).unwrap();
        let ops = dicke_operators(n).unwrap();
        let ic = ComplexMatrix::identity(n + 1);
        let gens: Vec<ComplexMatrix> = ops.e().iter().map(|e| kron(e, &ic)).collect();
        let st = StateModel::from_generators(rho, &gens).unwrap();
        let m = sld_pairwise_traces(&st).unwrap();
        let got = m[(0, 1)] - m[(1, 0)];
        let c = (n * (n + 2)) as f64 / 3.0;
        let want = -2.0 * c * (1.0 + c) * gamma * gamma;
        assert!(got.re.abs() < 1e-3 * want.abs(), "n={n}: {got}");
        let ratio = got.im / want;
        assert!((ratio - 1.0).abs() < 0.05, "n={n}: ratio {ratio}");
    }
}

#[test]
fn hn_is_weight_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = BoundOptions::default();
    let m = su2_depolarizing(0.5, 0.3).unwrap().model(FdScheme::default()).unwrap();
    let g = random_weight(&mut rng, 3);
    let a = channel_bound(BoundKind::Hn, &m, &g, &opts).unwrap().value;
    let b = channel_bound(BoundKind::Hn, &reparametrize(&m, &g).unwrap(), &WeightMatrix::identity(3), &opts)
        .unwrap()
        .value;
    assert!(rel(a, b) < 1e-5, "{a} vs {b}");
    // G^1/2 G^-1/2 = I
    let half = herm_fn(&g.to_complex(), |x| C64::new(x.sqrt(), 0.0)).unwrap();
    let back = reparametrize(&m, &g).unwrap();
    for j in 0..3 {
        let mut acc = ComplexMatrix::zeros(4, 4);
        for k in 0..3 {
            acc = &acc + &back.f[k].scale_re(half[(j, k)].re);
        }
        assert!((&acc - &m.f[j]).max_abs() < 1e-10);
    }
}

fn chain_holds(m: &ChannelModel, g: &WeightMatrix) -> Result<(), String> {
    let opts = BoundOptions::default();
    let v = |k| channel_bound(k, m, g, &opts).map(|r| r.value).map_err(|e| e.to_string());
    let (j2, j3, j4, j5) = (v(BoundKind::Nh)?, v(BoundKind::Ppt)?, v(BoundKind::Sld)?, v(BoundKind::Hn)?);
    let ext = tight_relaxation(m, g, 2, &opts).map_err(|e| e.to_string())?.value;
    let ge = |a: f64, b: f64| a >= b - 1e-6 * (1.0 + b.abs());
    if !(ge(j2, j3) && ge(j3, j4) && ge(j2, j5) && ge(j5, j4) && ge(ext, j2)) {
        return Err(format!("ext {ext} J2 {j2} J3 {j3} J4 {j4} J5 {j5}"));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn bound_chain_on_random_channels(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_qubit_channel(&mut rng);
        let g = random_weight(&mut rng, 2);
        prop_assert!(chain_holds(&m, &g).is_ok(), "{:?}", chain_holds(&m, &g));
    }
}
