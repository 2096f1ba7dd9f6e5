//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines always show; exits nonzero if any criterion fails.

use qmet::bounds::{
    channel_bound, maxent_certificate_sld, sld_bound_analytic, sld_pairwise_traces, state_bound, tight_relaxation,
    BoundKind, BoundOptions,
};
use qmet::channels::{
    depolarizing_qubit, dicke_operators, field_sensing, generalized_pauli, ghz3d, max_entangled, su2_depolarizing,
    sym_max_entangled, FdScheme,
};
use qmet::cli::verify::{random_qubit_channel, random_qubit_state, random_sdp, random_weight};
use qmet::conic_ir::WeightMatrix;
use qmet::model::{ChannelModel, StateModel};
use qmet::qmatrix::{kron, trace_distance, ComplexMatrix};
use qmet_sdp::{solve, SolveOptions, SparseSym, StandardForm, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

use BoundKind::{Hn, Nh, Ppt, Sld};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn opts() -> BoundOptions {
    BoundOptions::default()
}

fn model(f: qmet::Result<qmet::channels::ChannelFamily>) -> ChannelModel {
    f.and_then(|f| f.model(FdScheme::default())).expect("model builds")
}

fn j(k: BoundKind, m: &ChannelModel, g: &WeightMatrix) -> Result<f64, String> {
    channel_bound(k, m, g, &opts()).map(|r| r.value).map_err(|e| format!("{k:?}: {e}"))
}

fn s_probe(k: BoundKind, m: &ChannelModel, g: &WeightMatrix, psi: &[qmet::qmatrix::C64], d_c: usize) -> Result<f64, String> {
    let st = m.evolve(psi, d_c).map_err(|e| e.to_string())?;
    state_bound(k, &st, g, &opts()).map(|r| r.value).map_err(|e| format!("S{}: {e}", k.index()))
}

/// J2..J5 values of every instance solved during the run, for the global chain check.
#[derive(Default)]
struct Registry(BTreeMap<String, [Option<f64>; 4]>);

impl Registry {
    fn put(&mut self, name: &str, k: BoundKind, v: f64) {
        self.0.entry(name.to_string()).or_default()[k.index() - 2] = Some(v);
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn depolarizing_closed_form(reg: &mut Registry) -> Outcome {
    let g = WeightMatrix::identity(1);
    let (mut worst, mut slowest) = (0.0f64, 0.0f64);
    for (p, want) in [(0.0, 0.25), (0.2, 0.3515625), (0.5, 0.75)] {
        let m = model(depolarizing_qubit(p));
        for k in BoundKind::ALL {
            let t = Instant::now();
            let v = j(k, &m, &g)?;
            let secs = t.elapsed().as_secs_f64();
            reg.put(&format!("depolarizing p={p}"), k, v);
            worst = worst.max(rel(v, want));
            slowest = slowest.max(secs);
            ensure(rel(v, want) <= 1e-4, || format!("p={p} J{}: {v} vs {want}", k.index()))?;
            ensure(secs < 5.0, || format!("p={p} J{} took {secs:.2}s", k.index()))?;
        }
    }
    Ok(format!("max rel dev {worst:.1e} (tol 1e-4), slowest solve {slowest:.3}s (limit 5s)"))
}

fn su2_closed_form(reg: &mut Registry) -> Outcome {
    let g = WeightMatrix::identity(3);
    let mut worst = 0.0f64;
    for (jj, p, want) in [(0.5, 0.0, 1.5), (1.0, 0.0, 0.5625), (0.5, 0.5, 4.5)] {
        let m = model(su2_depolarizing(jj, p));
        let name = format!("su2 j={jj} p={p}");
        let j4 = j(Sld, &m, &g)?;
        reg.put(&name, Sld, j4);
        worst = worst.max(rel(j4, want));
        ensure(rel(j4, want) <= 1e-4, || format!("{name} J4: {j4} vs {want}"))?;
        if p == 0.0 {
            for k in [Nh, Hn] {
                let v = j(k, &m, &g)?;
                reg.put(&name, k, v);
                ensure(rel(v, j4) <= 1e-3, || format!("{name} J{}: {v} vs J4 {j4}", k.index()))?;
            }
            let ext = tight_relaxation(&m, &g, 2, &opts()).map_err(|e| e.to_string())?.value;
            ensure(rel(ext, j4) <= 1e-3, || format!("{name} J1ext:2: {ext} vs J4 {j4}"))?;
        }
    }
    Ok(format!("max rel dev of J4 {worst:.1e} (tol 1e-4); J2 = J5 = J1ext:2 = J4 at p = 0 (tol 1e-3)"))
}

/// Classical Fisher matrix of p_k(theta), by central differences of the log-likelihood.
fn classical_fisher(p: &dyn Fn(&[f64]) -> Vec<f64>, theta: &[f64]) -> Vec<Vec<f64>> {
    let d = theta.len();
    let h = 1e-6;
    let p0 = p(theta);
    let grads: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut tp = theta.to_vec();
            let mut tm = theta.to_vec();
            tp[i] += h;
            tm[i] -= h;
            let (a, b) = (p(&tp), p(&tm));
            a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect()
        })
        .collect();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|jj| (0..p0.len()).filter(|&k| p0[k] > 0.0).map(|k| grads[i][k] * grads[jj][k] / p0[k]).sum())
                .collect()
        })
        .collect()
}

fn pauli_classical() -> Outcome {
    let mut worst = 0.0f64;
    // Bernoulli: 1 / F with F = 1 / (theta (1 - theta))
    let theta = 0.25;
    let bern = |t: &[f64]| vec![1.0 - t[0], 0.0, t[0], 0.0];
    let f = classical_fisher(&bern, &[theta]);
    let want = 1.0 / f[0][0];
    ensure((want - 0.1875).abs() < 1e-8, || format!("oracle gives {want}"))?;
    let m = model(generalized_pauli(2, vec![theta], bern));
    let g1 = WeightMatrix::identity(1);
    for v in [j(Sld, &m, &g1)?, s_probe(Sld, &m, &g1, &max_entangled(2), 2)?] {
        worst = worst.max(rel(v, want));
        ensure(rel(v, want) <= 1e-4, || format!("Bernoulli: {v} vs {want}"))?;
    }

    // random two-parameter d = 3 family around theta0 = (0.1, -0.05)
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let w: Vec<f64> = (0..9).map(|_| rng.gen_range(0.3..1.0)).collect();
    let a: Vec<[f64; 2]> = (0..9).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
    let dist = move |t: &[f64]| {
        // softmax of w_k + a_k . theta
        let e: Vec<f64> = (0..9).map(|k| (w[k] + a[k][0] * t[0] + a[k][1] * t[1]).exp()).collect();
        let s: f64 = e.iter().sum();
        e.iter().map(|x| x / s).collect::<Vec<f64>>()
    };
    let th0 = [0.1, -0.05];
    let f = classical_fisher(&dist, &th0);
    let g = random_weight(&mut rng, 2);
    let det = f[0][0] * f[1][1] - f[0][1] * f[1][0];
    let inv = [[f[1][1] / det, -f[0][1] / det], [-f[1][0] / det, f[0][0] / det]];
    let want: f64 = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).map(|(x, y)| g.get(x, y) * inv[y][x]).sum();
    let m = model(generalized_pauli(3, th0.to_vec(), dist));
    let v = s_probe(Sld, &m, &g, &max_entangled(3), 3)?;
    worst = worst.max(rel(v, want));
    ensure(rel(v, want) <= 1e-4, || format!("random d=3 family: Ssym4 {v} vs Tr G F^-1 {want}"))?;
    let v = j(Sld, &m, &g)?;
    ensure(rel(v, want) <= 1e-4, || format!("random d=3 family: J4 {v} vs {want}"))?;
    Ok(format!("max rel dev from classical Fisher oracle {worst:.1e} (tol 1e-4)"))
}

fn field_sensing_noiseless(reg: &mut Registry) -> Outcome {
    let g = WeightMatrix::identity(3);
    let (mut worst, mut worst_td) = (0.0f64, 0.0f64);
    for n in [2usize, 3] {
        let want = 9.0 / (n * (n + 2)) as f64;
        let m = model(field_sensing(n, 0.0));
        let mixed = ComplexMatrix::identity(n + 1).scale_re(1.0 / (n + 1) as f64);
        for k in [Nh, Sld, Hn] {
            let r = channel_bound(k, &m, &g, &opts()).map_err(|e| e.to_string())?;
            reg.put(&format!("field-sensing n={n} gamma=0"), k, r.value);
            worst = worst.max(rel(r.value, want));
            ensure(rel(r.value, want) <= 1e-3, || format!("n={n} J{}: {} vs {want}", k.index(), r.value))?;
            let td = trace_distance(r.rho_a.as_ref().ok_or("no probe")?, &mixed);
            worst_td = worst_td.max(td);
            ensure(td <= 1e-3, || format!("n={n} J{} probe trace distance {td}", k.index()))?;
        }
    }
    Ok(format!(
        "max rel dev {worst:.1e} (tol 1e-3), probe trace distance to I/(n+1) {worst_td:.1e} (tol 1e-3); n = 4, 5 in tests/slow.rs"
    ))
}

fn orderings(reg: &mut Registry) -> Outcome {
    let n = 2;
    let m = model(field_sensing(n, 0.5));
    let g = WeightMatrix::identity(3);
    let mut min_margin = f64::INFINITY;
    for k in [Nh, Sld, Hn] {
        let jk = j(k, &m, &g)?;
        reg.put("field-sensing n=2 gamma=0.5", k, jk);
        let sym = s_probe(k, &m, &g, &sym_max_entangled(n), n + 1)?;
        let ghz = s_probe(k, &m, &g, &ghz3d(n), 1)?;
        ensure(ghz - sym > 1e-6 && sym - jk > 1e-6, || {
            format!("k={}: S3d {ghz}, Ssym {sym}, J {jk}", k.index())
        })?;
        min_margin = min_margin.min(ghz - sym).min(sym - jk);
    }
    reg.put("field-sensing n=2 gamma=0.5", Ppt, j(Ppt, &m, &g)?);
    // a slice of instances whose J3 is cheap
    for p in [0.3, 0.7] {
        let m = model(depolarizing_qubit(p));
        for k in BoundKind::ALL {
            reg.put(&format!("depolarizing p={p}"), k, j(k, &m, &WeightMatrix::identity(1))?);
        }
    }
    for (jj, p) in [(0.5, 0.5), (1.0, 0.3)] {
        let m = model(su2_depolarizing(jj, p));
        for k in BoundKind::ALL {
            reg.put(&format!("su2 j={jj} p={p}"), k, j(k, &m, &g)?);
        }
    }
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (name, v) in &reg.0 {
        let pairs = [(0, 3), (3, 2), (0, 1), (1, 2)]; // J2>=J5, J5>=J4, J2>=J3, J3>=J4
        for (hi, lo) in pairs {
            if let (Some(a), Some(b)) = (v[hi], v[lo]) {
                let viol = (b - a) / (1.0 + b.abs());
                worst = worst.max(viol);
                checked += 1;
                ensure(viol <= 1e-6, || format!("{name}: J{} = {a} < J{} = {b}", hi + 2, lo + 2))?;
            }
        }
    }
    Ok(format!(
        "min margin S3d > Ssym > J at gamma=0.5 {min_margin:.3e} (> 1e-6); {checked} chain relations on {} instances, worst violation {:.1e} (tol 1e-6)",
        reg.0.len(),
        worst.max(0.0)
    ))
}

fn commutator() -> Outcome {
    let n = 2;
    let gamma = 1e-3;
    let fam = field_sensing(n, gamma).map_err(|e| e.to_string())?;
    let phi = ComplexMatrix::projector(&sym_max_entangled(n));
    let rho = fam.apply_bipartite(&fam.theta0, &phi, n + 1).map_err(|e| e.to_string())?;
    let ops = dicke_operators(n).map_err(|e| e.to_string())?;
    let ic = ComplexMatrix::identity(n + 1);
    let gens: Vec<ComplexMatrix> = ops.e().iter().map(|e| kron(e, &ic)).collect();
    let st = StateModel::from_generators(rho, &gens).map_err(|e| e.to_string())?;
    let t = sld_pairwise_traces(&st).map_err(|e| e.to_string())?;
    let got = t[(0, 1)] - t[(1, 0)];
    let want = -176.0 / 9.0 * gamma * gamma;
    let ratio = got.im / want;
    ensure((ratio - 1.0).abs() <= 0.05 && got.re.abs() <= 1e-3 * want.abs(), || {
        format!("Tr L1 rho L2 - Tr L2 rho L1 = {got}, want {want}i")
    })?;
    let g = WeightMatrix::identity(3);
    let cert = |gm: f64| {
        maxent_certificate_sld(&model(field_sensing(n, gm)), &g, 1e-6).map_err(|e| e.to_string())
    };
    let (c0, c5) = (cert(0.0)?, cert(0.5)?);
    ensure(c0.in_k && !c5.in_k, || format!("in_K at gamma=0: {}, at gamma=0.5: {}", c0.in_k, c5.in_k))?;
    Ok(format!(
        "measured/expected {ratio:.4} (tol 5%); certificate in_K true at gamma=0, false at gamma=0.5 (deviation {:.2e})",
        c5.deviation
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut w_s4, mut w_rt) = (0.0f64, 0.0f64);
    for case in 0..20 {
        let g = random_weight(&mut rng, 2);
        let st = random_qubit_state(&mut rng).map_err(|e| e.to_string())?;
        let a = sld_bound_analytic(&st, &g).map_err(|e| e.to_string())?;
        let s4 = state_bound(Sld, &st, &g, &opts()).map_err(|e| e.to_string())?.value;
        w_s4 = w_s4.max(rel(s4, a));
        ensure(rel(s4, a) <= 1e-5, || format!("case {case}: S4 {s4} vs analytic {a}"))?;
        let m = random_qubit_channel(&mut rng).map_err(|e| e.to_string())?;
        for k in BoundKind::ALL {
            let r = channel_bound(k, &m, &g, &opts()).map_err(|e| e.to_string())?;
            let v = s_probe(k, &m, &g, r.purification.as_ref().ok_or("no probe")?, 2)?;
            w_rt = w_rt.max(rel(v, r.value));
            ensure(rel(v, r.value) <= 1e-4, || format!("case {case} J{}: {} vs round trip {v}", k.index(), r.value))?;
        }
    }
    Ok(format!("analytic vs S4 {w_s4:.1e} (tol 1e-5), probe round trip J2..J5 {w_rt:.1e} (tol 1e-4), 20 models"))
}

fn solver_properties() -> Outcome {
    let o = SolveOptions::default();
    let optimal = |sf: &StandardForm| {
        let s = solve(sf, &o).map_err(|e| e.to_string())?;
        ensure(s.status == Status::Optimal, || format!("{:?}: {}", s.status, s.message))?;
        Ok::<_, String>(s)
    };
    let mut feasible_iterates = 0;
    for seed in 0..20 {
        let sol = optimal(&random_sdp(1000 + seed, &[5, 3], 9))?;
        for h in sol.history.iter().filter(|h| h.primal_infeasibility <= 1e-9 && h.dual_infeasibility <= 1e-9) {
            feasible_iterates += 1;
            let scale = 1.0 + h.primal_objective.abs() + h.dual_objective.abs();
            ensure(h.dual_objective <= h.primal_objective + 1e-9 * scale, || {
                format!("seed {seed} iter {}: dual {} > primal {}", h.iter, h.dual_objective, h.primal_objective)
            })?;
        }
    }

    // min Tr(C X), Tr X = 1 gives the smallest eigenvalue
    let c = [[2.0, 0.5, 0.0], [0.5, 1.0, 0.3], [0.0, 0.3, 3.0]];
    let lmin = qmet::qmatrix::herm_eig(&ComplexMatrix::from_real_rows(&[&c[0], &c[1], &c[2]]))
        .map_err(|e| e.to_string())?
        .values
        .iter()
        .fold(f64::INFINITY, |a, &v| a.min(v));
    let mut sf = StandardForm::new(vec![3]);
    let mut tr = SparseSym::new();
    for i in 0..3 {
        tr.add(0, i, i, 1.0);
        for jj in 0..=i {
            sf.add_objective(0, i, jj, c[i][jj]);
        }
    }
    sf.push_row(tr, 1.0);
    let base = optimal(&sf)?;
    let eig_err = (base.primal_objective - lmin).abs();
    ensure(eig_err <= 1e-8, || format!("min-eigenvalue program {} vs {lmin}", base.primal_objective))?;

    let mut worst_scale = 0.0f64;
    for s in [0.05, 3.0, 250.0] {
        let mut sf2 = sf.clone();
        sf2.c = sf.c.scaled(s);
        let b = optimal(&sf2)?;
        let dv = rel(b.primal_objective, s * base.primal_objective);
        let dx = b.x.sub(&base.x).norm_fro();
        worst_scale = worst_scale.max(dv).max(dx);
        ensure(dv <= 1e-6 && dx <= 1e-6, || format!("scale {s}: value dev {dv}, optimizer moved {dx}"))?;
    }

    let sf = random_sdp(4242, &[6, 2], 12);
    let (a, b) = (optimal(&sf)?, optimal(&sf)?);
    ensure(
        a.status == b.status
            && a.iterations == b.iterations
            && a.primal_objective.to_bits() == b.primal_objective.to_bits()
            && a.x == b.x,
        || "repeated solves differ".into(),
    )?;
    Ok(format!(
        "weak duality on {feasible_iterates} feasible iterates, |value - lambda_min| {eig_err:.1e} (tol 1e-8), scale covariance {worst_scale:.1e} (tol 1e-6), bitwise determinism"
    ))
}

fn certificates() -> Outcome {
    let mut cases: Vec<(String, ChannelModel, Option<bool>)> = Vec::new();
    for p in [0.0, 0.2, 0.5, 0.8] {
        cases.push((format!("depolarizing p={p}"), model(depolarizing_qubit(p)), Some(true)));
    }
    cases.push((
        "bit flip theta=0.25".into(),
        model(generalized_pauli(2, vec![0.25], |t| vec![1.0 - t[0], 0.0, t[0], 0.0])),
        Some(true),
    ));
    cases.push((
        "d=3 Pauli".into(),
        model(generalized_pauli(3, vec![0.1, 0.2], |t| {
            let mut p = vec![0.05; 9];
            p[0] = 0.6 - t[0] - t[1];
            p[1] += t[0];
            p[3] += t[1];
            p
        })),
        Some(true),
    ));
    for (jj, p) in [(0.5, 0.0), (1.0, 0.3), (0.5, 0.5)] {
        cases.push((format!("su2 j={jj} p={p}"), model(su2_depolarizing(jj, p)), Some(true)));
    }
    for gm in [0.0, 0.5] {
        cases.push((format!("field-sensing n=2 gamma={gm}"), model(field_sensing(2, gm)), None));
    }
    let mut agree = 0;
    for (name, m, expect) in &cases {
        let g = WeightMatrix::identity(m.d());
        let c = maxent_certificate_sld(m, &g, 1e-6).map_err(|e| format!("{name}: {e}"))?;
        if let Some(want) = expect {
            ensure(c.in_k == *want, || format!("{name}: in_K {} (deviation {:.2e})", c.in_k, c.deviation))?;
        }
        let gap = (j(Sld, m, &g)? - s_probe(Sld, m, &g, &max_entangled(m.d_a), m.d_a)?).abs();
        ensure(c.in_k == (gap <= 1e-5), || format!("{name}: in_K {} but |J4 - Ssym4| = {gap:.2e}", c.in_k))?;
        agree += 1;
    }
    Ok(format!("in_K agrees with |J4 - Ssym4| <= 1e-5 on {agree} instances, both outcomes exercised"))
}

fn main() {
    let mut reg = Registry::default();
    let mut failed = 0;
    let mut report = |n: usize, what: &str, r: Outcome| {
        match r {
            Ok(m) => println!("criterion {n} PASS  {what}: {m}"),
            Err(m) => {
                failed += 1;
                println!("criterion {n} FAIL  {what}: {m}");
            }
        }
    };
    report(1, "depolarizing qubit closed form", depolarizing_closed_form(&mut reg));
    report(2, "SU(2) closed forms", su2_closed_form(&mut reg));
    report(3, "generalized Pauli vs classical Fisher", pauli_classical());
    report(4, "field sensing without damping", field_sensing_noiseless(&mut reg));
    report(5, "orderings", orderings(&mut reg));
    report(6, "commutator coefficient and certificate", commutator());
    report(7, "oracle equivalence", oracle_equivalence());
    report(8, "solver properties", solver_properties());
    report(9, "certificate equivalence", certificates());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
