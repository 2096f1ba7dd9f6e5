//! Built-in verification suites. Each check reports its tolerance and the
//! measured deviation.

use super::config::{BoundSpec, Grid, Scenario, ScenarioConfig, Weight};
use super::run::{run_with, WeightHook};
use crate::bounds::{
    channel_bound, maxent_certificate_sld, sld_bound_analytic, sld_pairwise_traces, state_bound, tight_relaxation,
    BoundKind, BoundOptions,
};
use crate::channels::{
    depolarizing_qubit, dicke_operators, field_sensing, generalized_pauli, max_entangled, su2_depolarizing,
    sym_max_entangled, ChannelFamily, FdScheme,
};
use crate::conic_ir::WeightMatrix;
use crate::error::{Error, Result};
use crate::model::{ChannelModel, StateModel};
use crate::qmatrix::{expi, kron, pauli, trace_distance, ComplexMatrix, C64};
use qmet_sdp::{solve, BlockMat, SolveOptions, SparseSym, StandardForm, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Orderings,
    Commutator,
    Oracles,
    Solver,
    Certificates,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::ClosedForms,
        Suite::Orderings,
        Suite::Commutator,
        Suite::Oracles,
        Suite::Solver,
        Suite::Certificates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForms => "closed-forms",
            Suite::Orderings => "orderings",
            Suite::Commutator => "commutator",
            Suite::Oracles => "oracles",
            Suite::Solver => "solver",
            Suite::Certificates => "certificates",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown suite '{s}' (closed-forms, orderings, commutator, oracles, solver, certificates, all)"
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub tolerance: f64,
    /// deviation, margin or violation; NaN when the computation failed
    pub measured: f64,
    pub passed: bool,
    pub note: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: measured {:.3e}, tolerance {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            self.tolerance
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// halve the weight of the 3D-GHZ bounds in the orderings suite
    pub inject_fault: bool,
}

struct Suite_ {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Suite_ {
    fn new(suite: Suite) -> Self {
        Suite_ {
            suite: suite.name(),
            checks: Vec::new(),
        }
    }

    /// |got - want| / |want| <= tol
    fn rel(&mut self, name: impl Into<String>, got: Result<f64>, want: f64, tol: f64) {
        self.dev(name, got.map(|v| (v - want).abs() / want.abs().max(1e-300)), tol, format!("reference {want}"));
    }

    /// measured <= tol
    fn dev(&mut self, name: impl Into<String>, measured: Result<f64>, tol: f64, note: impl Into<String>) {
        let (measured, passed, note) = match measured {
            Ok(m) => (m, m <= tol, note.into()),
            Err(e) => (f64::NAN, false, e.to_string()),
        };
        self.push(name, tol, measured, passed, note);
    }

    /// measured > tol
    fn margin(&mut self, name: impl Into<String>, measured: Result<f64>, tol: f64) {
        let (measured, passed, note) = match measured {
            Ok(m) => (m, m > tol, "margin".to_string()),
            Err(e) => (f64::NAN, false, e.to_string()),
        };
        self.push(name, tol, measured, passed, note);
    }

    fn flag(&mut self, name: impl Into<String>, ok: Result<bool>, note: impl Into<String>) {
        let (measured, passed, note) = match ok {
            Ok(b) => (if b { 0.0 } else { 1.0 }, b, note.into()),
            Err(e) => (f64::NAN, false, e.to_string()),
        };
        self.push(name, 0.0, measured, passed, note);
    }

    fn push(&mut self, name: impl Into<String>, tolerance: f64, measured: f64, passed: bool, note: String) {
        let c = Check {
            suite: self.suite,
            name: name.into(),
            tolerance,
            measured,
            passed,
            note,
        };
        log::info!("{c}");
        self.checks.push(c);
    }
}

pub fn verify(suite: Suite, opts: VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::All => Suite::EACH.into_iter().flat_map(|s| verify(s, opts)).collect(),
        Suite::ClosedForms => closed_forms(),
        Suite::Orderings => orderings(opts.inject_fault),
        Suite::Commutator => commutator(),
        Suite::Oracles => oracles(),
        Suite::Solver => solver(),
        Suite::Certificates => certificates(),
    }
}

fn value(k: BoundKind, m: &ChannelModel, g: &WeightMatrix) -> Result<f64> {
    channel_bound(k, m, g, &BoundOptions::default()).map(|r| r.value)
}

fn maxent_s(k: BoundKind, m: &ChannelModel, g: &WeightMatrix) -> Result<f64> {
    let st = m.evolve(&max_entangled(m.d_a), m.d_a)?;
    state_bound(k, &st, g, &BoundOptions::default()).map(|r| r.value)
}

fn closed_forms() -> Vec<Check> {
    let mut s = Suite_::new(Suite::ClosedForms);
    let g1 = WeightMatrix::identity(1);
    let g3 = WeightMatrix::identity(3);
    for p in [0.0, 0.2, 0.5] {
        let want = (2.0 - p) / (8.0 * (1.0 - p) * (1.0 - p));
        let m = depolarizing_qubit(p).and_then(|f| f.model(FdScheme::default()));
        for k in BoundKind::ALL {
            let t = Instant::now();
            let v = m.clone().and_then(|m| value(k, &m, &g1));
            let secs = t.elapsed().as_secs_f64();
            s.rel(format!("depolarizing p={p} {}", k.channel_label()), v, want, 1e-4);
            s.dev(format!("depolarizing p={p} {} seconds", k.channel_label()), Ok(secs), 5.0, "");
        }
    }
    for (j, p, want) in [(0.5, 0.0, 1.5), (1.0, 0.0, 0.5625), (0.5, 0.5, 4.5)] {
        let m = su2_depolarizing(j, p).and_then(|f| f.model(FdScheme::default()));
        let j4 = m.clone().and_then(|m| value(BoundKind::Sld, &m, &g3));
        s.rel(format!("su2 j={j} p={p} J4"), j4.clone(), want, 1e-4);
        if p == 0.0 {
            for k in [BoundKind::Nh, BoundKind::Hn] {
                let v = m.clone().and_then(|m| value(k, &m, &g3));
                s.rel(format!("su2 j={j} p=0 {} vs J4", k.channel_label()), v, want, 1e-3);
            }
            let ext = m.clone().and_then(|m| tight_relaxation(&m, &g3, 2, &BoundOptions::default())).map(|r| r.value);
            s.rel(format!("su2 j={j} p=0 J1ext:2 vs J4"), ext, want, 1e-3);
        }
    }
    let bern = bit_flip(0.25).and_then(|m| maxent_s(BoundKind::Sld, &m, &g1));
    s.rel("bernoulli theta=0.25 Ssym4", bern, 0.1875, 1e-4);
    for n in [2usize, 3] {
        let want = 9.0 / (n * (n + 2)) as f64;
        let m = field_sensing(n, 0.0).and_then(|f| f.model(FdScheme::default()));
        for k in [BoundKind::Nh, BoundKind::Sld, BoundKind::Hn] {
            let r = m.clone().and_then(|m| channel_bound(k, &m, &g3, &BoundOptions::default()));
            s.rel(
                format!("field-sensing n={n} gamma=0 {}", k.channel_label()),
                r.clone().map(|r| r.value),
                want,
                1e-3,
            );
            let mixed = ComplexMatrix::identity(n + 1).scale_re(1.0 / (n + 1) as f64);
            let td = r.and_then(|r| {
                r.rho_a
                    .map(|rho| trace_distance(&rho, &mixed))
                    .ok_or_else(|| Error::Infeasible("no probe".into()))
            });
            s.dev(
                format!("field-sensing n={n} gamma=0 {} probe vs I/{}", k.channel_label(), n + 1),
                td,
                1e-3,
                "trace distance",
            );
        }
    }
    s.checks
}

fn bit_flip(theta: f64) -> Result<ChannelModel> {
    generalized_pauli(2, vec![theta], |th| vec![1.0 - th[0], 0.0, th[0], 0.0])?.model(FdScheme::default())
}

fn orderings(inject_fault: bool) -> Vec<Check> {
    let mut s = Suite_::new(Suite::Orderings);
    let cfg = ScenarioConfig {
        scenario: Scenario::FieldSensing,
        n: 2,
        noise: Grid::point(0.5),
        bounds: "J2,J3,J4,J5,Ssym2,Ssym4,Ssym5,S3d2,S3d4,S3d5"
            .split(',')
            .map(|b| b.parse().expect("static bound list"))
            .collect(),
        weight: Weight::Identity,
        ..ScenarioConfig::default()
    };
    let halve = |b: BoundSpec, g: &WeightMatrix| {
        if matches!(b, BoundSpec::Ghz(_)) {
            let d = g.d();
            let v = (0..d * d).map(|i| 0.5 * g.get(i / d, i % d)).collect();
            WeightMatrix::new(d, v).expect("scaled weight")
        } else {
            g.clone()
        }
    };
    let hook: Option<&WeightHook> = if inject_fault { Some(&halve) } else { None };
    let rows = match run_with(&cfg, hook) {
        Ok(r) => r.rows,
        Err(e) => {
            s.flag("field-sensing n=2 gamma=0.5 run", Err(e), "");
            return s.checks;
        }
    };
    let get = |label: String| -> Result<f64> {
        rows.iter()
            .find(|r| r.bound == label)
            .and_then(|r| r.value)
            .ok_or_else(|| Error::Infeasible(format!("{label} did not solve")))
    };
    for k in [BoundKind::Nh, BoundKind::Sld, BoundKind::Hn] {
        let i = k.index();
        let (g, sy, j) = (get(format!("S3d{i}")), get(format!("Ssym{i}")), get(format!("J{i}")));
        let d1 = g.clone().and_then(|g| sy.clone().map(|sy| g - sy));
        let d2 = sy.and_then(|sy| j.map(|j| sy - j));
        s.margin(format!("gamma=0.5 S3d{i} > Ssym{i}"), d1, 1e-6);
        s.margin(format!("gamma=0.5 Ssym{i} > J{i}"), d2, 1e-6);
    }
    let chain = |s: &mut Suite_, tag: &str, v: [Result<f64>; 4]| {
        let [j2, j3, j4, j5] = v;
        for (hi, lo, name) in [(&j2, &j5, "J2 >= J5"), (&j5, &j4, "J5 >= J4"), (&j2, &j3, "J2 >= J3"), (&j3, &j4, "J3 >= J4")] {
            let viol = match (hi, lo) {
                (Ok(a), Ok(b)) => Ok((b - a).max(0.0) / (1.0 + b.abs())),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            s.dev(format!("{tag} {name}"), viol, 1e-6, "relative violation");
        }
    };
    chain(&mut s, "field-sensing gamma=0.5", [get("J2".into()), get("J3".into()), get("J4".into()), get("J5".into())]);
    let g3 = WeightMatrix::identity(3);
    for (j, p) in [(0.5, 0.5), (1.0, 0.3)] {
        let m = su2_depolarizing(j, p).and_then(|f| f.model(FdScheme::default()));
        let v = BoundKind::ALL.map(|k| m.clone().and_then(|m| value(k, &m, &g3)));
        chain(&mut s, &format!("su2 j={j} p={p}"), v);
    }
    s.checks
}

/// Imaginary antisymmetric part of Tr L_u rho L_v at the symmetric probe, against its
/// second-order coefficient.
pub fn commutator_ratio(n: usize, gamma: f64) -> Result<f64> {
    let fam = field_sensing(n, gamma)?;
    let phi = ComplexMatrix::projector(&sym_max_entangled(n));
    let rho = fam.apply_bipartite(&fam.theta0, &phi, n + 1)?;
    let ops = dicke_operators(n)?;
    let ic = ComplexMatrix::identity(n + 1);
    let gens: Vec<ComplexMatrix> = ops.e().iter().map(|e| kron(e, &ic)).collect();
    let st = StateModel::from_generators(rho, &gens)?;
    let m = sld_pairwise_traces(&st)?;
    let got = m[(0, 1)] - m[(1, 0)];
    let c = (n * (n + 2)) as f64 / 3.0;
    let want = -2.0 * c * (1.0 + c) * gamma * gamma;
    Ok(got.im / want)
}

fn commutator() -> Vec<Check> {
    let mut s = Suite_::new(Suite::Commutator);
    for n in [2usize, 3] {
        let r = commutator_ratio(n, 1e-3);
        let note = match &r {
            Ok(r) => format!("ratio {r:.4}"),
            Err(_) => String::new(),
        };
        s.dev(format!("n={n} gamma=1e-3 commutator ratio"), r.map(|r| (r - 1.0).abs()), 0.05, note);
    }
    let g3 = WeightMatrix::identity(3);
    for (gamma, expect) in [(0.0, true), (0.5, false)] {
        let c = field_sensing(2, gamma)
            .and_then(|f| f.model(FdScheme::default()))
            .and_then(|m| maxent_certificate_sld(&m, &g3, 1e-6));
        let note = match &c {
            Ok(c) => format!("deviation {:.3e}, threshold {:.3e}", c.deviation, c.threshold),
            Err(_) => String::new(),
        };
        s.flag(format!("n=2 gamma={gamma} SLD certificate in_K == {expect}"), c.map(|c| c.in_k == expect), note);
    }
    s.checks
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).hermitize()
}

/// A A^T + 0.2 I
pub fn random_weight(rng: &mut impl Rng, d: usize) -> WeightMatrix {
    let a = ComplexMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), 0.0));
    let g = &(&a * &a.transpose()) + &ComplexMatrix::identity(d).scale_re(0.2);
    WeightMatrix::new(d, g.data().iter().map(|z| z.re).collect()).expect("PSD by construction")
}

/// Full-rank qubit state with two random traceless derivatives.
pub fn random_qubit_state(rng: &mut impl Rng) -> Result<StateModel> {
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
    StateModel::new(rho, ds)
}

/// Two-parameter unitary rotation followed by a random Pauli channel.
pub fn random_qubit_channel(rng: &mut impl Rng) -> Result<ChannelModel> {
    let h = [random_hermitian(rng, 2), random_hermitian(rng, 2)];
    let mut q: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..1.0)).collect();
    q[0] += 2.0;
    let total: f64 = q.iter().sum();
    let q: Vec<f64> = q.iter().map(|x| x / total).collect();
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
}

/// Random d = 3 Pauli family p_k = w_k (1 + theta . c_k) and the inverse of its classical Fisher matrix.
pub fn random_pauli_family(rng: &mut impl Rng) -> Result<(ChannelModel, [[f64; 2]; 2])> {
    let v: Vec<f64> = (0..9).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = v.iter().sum();
    let w: Vec<f64> = v.iter().map(|x| x / total).collect();
    let raw: Vec<[f64; 2]> = (0..9).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
    let mean = [0, 1].map(|j| raw.iter().zip(&w).map(|(r, wk)| r[j] * wk).sum::<f64>());
    let c: Vec<[f64; 2]> = raw.iter().map(|r| [r[0] - mean[0], r[1] - mean[1]]).collect();
    let mut j = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            j[a][b] = (0..9).map(|k| w[k] * c[k][a] * c[k][b]).sum();
        }
    }
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
    let m = generalized_pauli(3, vec![0.0, 0.0], move |th| {
        (0..9).map(|k| w[k] * (1.0 + th[0] * c[k][0] + th[1] * c[k][1])).collect()
    })?
    .model(FdScheme::default())?;
    Ok((m, inv))
}

fn oracles() -> Vec<Check> {
    let mut s = Suite_::new(Suite::Oracles);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = BoundOptions::default();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
    let mut worst_s4 = Ok(0.0f64);
    let mut worst_rt = Ok(0.0f64);
    for _ in 0..20 {
        let g = random_weight(&mut rng, 2);
        let st = random_qubit_state(&mut rng);
        let d = st.and_then(|st| {
            let a = sld_bound_analytic(&st, &g)?;
            Ok(rel(state_bound(BoundKind::Sld, &st, &g, &opts)?.value, a))
        });
        worst_s4 = worst_s4.and_then(|w| d.map(|d| w.max(d)));
        let m = random_qubit_channel(&mut rng);
        for k in BoundKind::ALL {
            let d = m.clone().and_then(|m| {
                let r = channel_bound(k, &m, &g, &opts)?;
                let psi = r.purification.as_ref().ok_or_else(|| Error::Infeasible("no probe".into()))?;
                let st = m.evolve(psi, 2)?;
                Ok(rel(state_bound(k, &st, &g, &opts)?.value, r.value))
            });
            worst_rt = worst_rt.and_then(|w| d.map(|d| w.max(d)));
        }
    }
    s.dev("20 random qubit models: S4 vs analytic SLD bound", worst_s4, 1e-5, "max relative deviation");
    s.dev("20 random qubit channels: probe round trip J2..J5", worst_rt, 1e-4, "max relative deviation");
    for case in 0..3 {
        let d = random_pauli_family(&mut rng).and_then(|(m, inv)| {
            let g = random_weight(&mut rng, 2);
            let want: f64 = (0..4).map(|i| g.get(i / 2, i % 2) * inv[i % 2][i / 2]).sum();
            Ok(rel(maxent_s(BoundKind::Sld, &m, &g)?, want))
        });
        s.dev(format!("random d=3 Pauli family {case}: Ssym4 vs classical Fisher"), d, 1e-4, "");
    }
    s.checks
}

/// Random SDP with strictly feasible primal and dual points.
pub fn random_sdp(seed: u64, dims: &[usize], m: usize) -> StandardForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sf = StandardForm::new(dims.to_vec());
    let mut pd = |n: usize| {
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
        x.blocks.pop().expect("one block")
    };
    let x0 = BlockMat {
        blocks: dims.iter().map(|&n| pd(n)).collect(),
    };
    let s0 = BlockMat {
        blocks: dims.iter().map(|&n| pd(n)).collect(),
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
        let b = r.dot(&x0);
        sf.push_row(r, b);
        y0.push(rng.gen_range(-1.0..1.0));
    }
    let mut c = sf.adjoint(&y0);
    c.axpy(1.0, &s0);
    sf.c = c;
    sf
}

fn solver() -> Vec<Check> {
    let mut s = Suite_::new(Suite::Solver);
    let o = SolveOptions::default();
    let sdp = |sf: &StandardForm| -> Result<qmet_sdp::Solution> {
        let sol = solve(sf, &o).map_err(|e| Error::Solver {
            kind: "sdp".into(),
            status: "Error".into(),
            message: e.to_string(),
        })?;
        if sol.status != Status::Optimal {
            return Err(Error::Solver {
                kind: "sdp".into(),
                status: format!("{:?}", sol.status),
                message: sol.message.clone(),
            });
        }
        Ok(sol)
    };

    let mut worst = Ok(0.0f64);
    for seed in 0..20 {
        let v = sdp(&random_sdp(seed, &[4, 3], 8)).map(|sol| {
            sol.history
                .iter()
                .filter(|h| h.primal_infeasibility <= 1e-9 && h.dual_infeasibility <= 1e-9)
                .map(|h| {
                    (h.dual_objective - h.primal_objective).max(0.0)
                        / (1.0 + h.primal_objective.abs() + h.dual_objective.abs())
                })
                .fold(0.0, f64::max)
        });
        worst = worst.and_then(|w| v.map(|v| w.max(v)));
    }
    s.dev("weak duality on feasible iterates, 20 programs", worst, 1e-9, "max relative violation");

    let mut min_eig = StandardForm::new(vec![3]);
    let mut tr = SparseSym::new();
    for (i, v) in [3.0, 1.0, 2.0].into_iter().enumerate() {
        min_eig.add_objective(0, i, i, v);
        tr.add(0, i, i, 1.0);
    }
    min_eig.push_row(tr, 1.0);
    let base = sdp(&min_eig);
    s.dev(
        "min-eigenvalue program diag(3,1,2)",
        base.clone().map(|b| (b.primal_objective - 1.0).abs()),
        1e-8,
        "|value - lambda_min|",
    );

    for sc in [0.01, 7.0, 300.0] {
        let mut sf = min_eig.clone();
        sf.c = min_eig.c.scaled(sc);
        let d = base.clone().and_then(|a| {
            let b = sdp(&sf)?;
            let dv = (b.primal_objective - sc * a.primal_objective).abs() / sc.max(1.0);
            Ok(dv.max(b.x.sub(&a.x).norm_fro()))
        });
        s.dev(format!("scale covariance s={sc}"), d, 1e-6, "value and optimizer");
    }
    let sf = random_sdp(7, &[5, 3, 2], 10);
    let same = sdp(&sf).and_then(|a| {
        let b = sdp(&sf)?;
        Ok(a.status == b.status
            && a.iterations == b.iterations
            && a.primal_objective.to_bits() == b.primal_objective.to_bits()
            && a.x == b.x
            && a.y == b.y)
    });
    s.flag("determinism of repeated solves", same, "bitwise");
    s.checks
}

fn certificates() -> Vec<Check> {
    let mut s = Suite_::new(Suite::Certificates);
    let mut cases: Vec<(String, Result<ChannelModel>, Option<bool>)> = Vec::new();
    for p in [0.0, 0.3, 0.6, 0.9] {
        cases.push((
            format!("depolarizing p={p}"),
            depolarizing_qubit(p).and_then(|f| f.model(FdScheme::default())),
            Some(true),
        ));
    }
    cases.push(("bit-flip theta=0.25".into(), bit_flip(0.25), Some(true)));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    cases.push(("random d=3 Pauli".into(), random_pauli_family(&mut rng).map(|x| x.0), Some(true)));
    for (j, p) in [(0.5, 0.0), (1.0, 0.3), (0.5, 0.5)] {
        cases.push((
            format!("su2 j={j} p={p}"),
            su2_depolarizing(j, p).and_then(|f| f.model(FdScheme::default())),
            Some(true),
        ));
    }
    for gamma in [0.0, 0.5] {
        cases.push((
            format!("field-sensing n=2 gamma={gamma}"),
            field_sensing(2, gamma).and_then(|f| f.model(FdScheme::default())),
            None,
        ));
    }
    for (name, m, expect) in cases {
        let r = m.and_then(|m| {
            let g = WeightMatrix::identity(m.d());
            let c = maxent_certificate_sld(&m, &g, 1e-6)?;
            let gap = (value(BoundKind::Sld, &m, &g)? - maxent_s(BoundKind::Sld, &m, &g)?).abs();
            Ok((c.in_k, gap))
        });
        if let Some(want) = expect {
            s.flag(format!("{name}: in_K == {want}"), r.clone().map(|(k, _)| k == want), "");
        }
        let note = match &r {
            Ok((k, gap)) => format!("in_K {k}, |J4 - Ssym4| {gap:.3e}"),
            Err(_) => String::new(),
        };
        s.flag(format!("{name}: in_K agrees with |J4 - Ssym4| <= 1e-5"), r.map(|(k, gap)| k == (gap <= 1e-5)), note);
    }
    s.checks
}
