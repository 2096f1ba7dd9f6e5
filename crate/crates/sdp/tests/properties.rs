use proptest::prelude::*;
use qmet_sdp::{residuals, solve, BlockMat, SolveOptions, SparseSym, StandardForm, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random program with a strictly feasible primal and dual, so an optimum exists.
fn random_sdp(seed: u64, dims: &[usize], m: usize) -> StandardForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sf = StandardForm::new(dims.to_vec());
    let pd = |rng: &mut ChaCha8Rng, n: usize| {
        let g: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut x = BlockMat::zeros(&[n]);
        for i in 0..n {
            for j in 0..n {
                let mut v = if i == j { 0.5 } else { 0.0 };
                for k in 0..n {
                    v += g[i * n + k] * g[j * n + k];
                }
                x.blocks[0][(i, j)] = v;
            }
        }
        x.blocks.pop().unwrap()
    };
    let x0 = BlockMat {
        blocks: dims.iter().map(|&n| pd(&mut rng, n)).collect(),
    };
    let s0 = BlockMat {
        blocks: dims.iter().map(|&n| pd(&mut rng, n)).collect(),
    };
    let mut y0 = Vec::new();
    for _ in 0..m {
        let mut r = SparseSym::new();
        for _ in 0..3 {
            let blk = rng.gen_range(0..dims.len());
            let i = rng.gen_range(0..dims[blk]);
            let j = rng.gen_range(0..dims[blk]);
            r.add(blk, i, j, rng.gen_range(-1.0..1.0));
        }
        let mut probe = StandardForm::new(dims.to_vec());
        probe.push_row(r.clone(), 0.0);
        let b = probe.apply(&x0)[0];
        sf.push_row(r, b);
        y0.push(rng.gen_range(-1.0..1.0));
    }
    let mut c = sf.adjoint(&y0);
    c.axpy(1.0, &s0);
    sf.c = c;
    sf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_programs_solve(seed in 0u64..10_000, n1 in 1usize..6, n2 in 1usize..5, m in 1usize..12) {
        let sf = random_sdp(seed, &[n1, n2], m);
        let sol = solve(&sf, &SolveOptions::default()).unwrap();
        prop_assert_eq!(sol.status, Status::Optimal);
        let r = residuals(&sf, &sol.x, &sol.y, &sol.s);
        let nb = sf.b.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(r.primal_residual * (1.0 + nb) <= 1e-7 * (1.0 + nb));
        prop_assert!(r.rel_gap <= 1e-7);
        prop_assert!(r.min_eig_x >= -1e-7);
        prop_assert!(r.min_eig_s >= -1e-7);
    }

    #[test]
    fn objective_scale_covariance(seed in 0u64..10_000, s in 0.1f64..20.0) {
        let sf = random_sdp(seed, &[4, 3], 6);
        let mut sf2 = sf.clone();
        sf2.c = sf.c.scaled(s);
        let a = solve(&sf, &SolveOptions::default()).unwrap();
        let b = solve(&sf2, &SolveOptions::default()).unwrap();
        prop_assert_eq!(a.status, Status::Optimal);
        prop_assert_eq!(b.status, Status::Optimal);
        let scale = 1.0 + a.primal_objective.abs() * s;
        prop_assert!((b.primal_objective - s * a.primal_objective).abs() <= 1e-7 * scale);
    }
}

#[test]
fn optimizer_invariant_under_objective_scaling() {
    // unique optimizer: min-eigenvalue program with a simple gap
    let mut sf = StandardForm::new(vec![3]);
    for (i, v) in [3.0, 1.0, 2.0].into_iter().enumerate() {
        sf.add_objective(0, i, i, v);
    }
    let mut r = SparseSym::new();
    for i in 0..3 {
        r.add(0, i, i, 1.0);
    }
    sf.push_row(r, 1.0);
    let a = solve(&sf, &SolveOptions::default()).unwrap();
    for s in [0.01, 7.0, 300.0] {
        let mut sf2 = sf.clone();
        sf2.c = sf.c.scaled(s);
        let b = solve(&sf2, &SolveOptions::default()).unwrap();
        assert_eq!(b.status, Status::Optimal);
        assert!((b.primal_objective - s * a.primal_objective).abs() <= 1e-7 * s.max(1.0));
        let d = b.x.sub(&a.x).norm_fro();
        assert!(d < 1e-6, "optimizer moved by {d} at scale {s}");
    }
}

#[test]
fn deterministic() {
    let sf = random_sdp(7, &[5, 3, 2], 10);
    let a = solve(&sf, &SolveOptions::default()).unwrap();
    let b = solve(&sf, &SolveOptions::default()).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.primal_objective.to_bits(), b.primal_objective.to_bits());
    assert_eq!(a.y, b.y);
    assert_eq!(a.x, b.x);
}

#[test]
fn weak_duality_on_feasible_iterates() {
    for seed in 0..20 {
        let sf = random_sdp(seed, &[4, 3], 8);
        let sol = solve(&sf, &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        for h in &sol.history {
            if h.primal_infeasibility <= 1e-9 && h.dual_infeasibility <= 1e-9 {
                let scale = 1.0 + h.primal_objective.abs() + h.dual_objective.abs();
                assert!(
                    h.dual_objective <= h.primal_objective + 1e-9 * scale,
                    "seed {seed} iter {}: {} > {}",
                    h.iter,
                    h.dual_objective,
                    h.primal_objective
                );
            }
        }
    }
}

