//! Channel bounds J2..J5, fixed-probe bounds S2..S5, the SLD oracle and the
//! maximally-entangled-probe certificates.

use crate::conic_ir::{assemble_channel, assemble_state, ConeKind, ConicProgram, WeightMatrix};
use crate::error::{Error, Result};
use crate::model::{ChannelModel, StateModel};
use crate::qmatrix::{
    block, herm_eig, herm_fn, kron, partial_trace, ComplexMatrix, RealSymmetricMatrix, C64, I,
};
use qmet_sdp::{residuals, solve, SolveOptions, Status};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// The four SDP relaxations; `index` gives the subscript 2..5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Nh,
    Ppt,
    Sld,
    Hn,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] = [BoundKind::Nh, BoundKind::Ppt, BoundKind::Sld, BoundKind::Hn];

    pub fn index(self) -> usize {
        match self {
            BoundKind::Nh => 2,
            BoundKind::Ppt => 3,
            BoundKind::Sld => 4,
            BoundKind::Hn => 5,
        }
    }

    pub fn from_index(k: usize) -> Option<BoundKind> {
        BoundKind::ALL.into_iter().find(|b| b.index() == k)
    }

    pub fn channel_label(self) -> String {
        format!("J{}", self.index())
    }

    pub fn state_label(self) -> String {
        format!("S{}", self.index())
    }

    fn cone(self, t: &ComplexMatrix) -> ConeKind {
        match self {
            BoundKind::Nh => ConeKind::Nh,
            BoundKind::Ppt => ConeKind::Ppt,
            BoundKind::Sld => ConeKind::Sld,
            BoundKind::Hn => ConeKind::Hn(t.clone()),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Accepts "2", "J2", "S2".
impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['J', 'S', 'j', 's']);
        t.parse::<usize>()
            .ok()
            .and_then(BoundKind::from_index)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bound kind '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct BoundOptions {
    pub solver: SolveOptions,
    /// largest complex dimension allowed for an extension variable
    pub cap: Option<usize>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            solver: SolveOptions::default(),
            cap: Some(600),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverStats {
    pub status: Status,
    pub iterations: usize,
    pub gap: Option<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub rows: usize,
    pub dropped_rows: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct BoundResult {
    /// "J4", "S2", "J1ext:3", ...
    pub kind: String,
    pub value: f64,
    /// optimal Y on R (x) H_B (x) H_A (X on R (x) H for state bounds)
    pub y: ComplexMatrix,
    pub rho_a: Option<ComplexMatrix>,
    /// unit vector on A (x) C, index a*d_A + c
    pub purification: Option<Vec<C64>>,
    /// estimator matrix on R (x) H_B (x) H_C
    pub x: Option<ComplexMatrix>,
    pub stats: SolverStats,
}

impl BoundResult {
    pub fn probe_purity(&self) -> Option<f64> {
        self.rho_a.as_ref().map(|r| r.trace_mul(r).re)
    }
}

fn run(prog: &ConicProgram, opts: &BoundOptions, label: &str) -> Result<(Vec<ComplexMatrix>, f64, SolverStats)> {
    let start = Instant::now();
    let sf = prog.lower();
    let sol = solve(&sf, &opts.solver).map_err(|e| Error::Solver {
        kind: label.into(),
        status: "Error".into(),
        message: e.to_string(),
    })?;
    let res = residuals(&sf, &sol.x, &sol.y, &sol.s);
    let stats = SolverStats {
        status: sol.status,
        iterations: sol.iterations,
        gap: sol.gap,
        primal_residual: res.primal_residual,
        dual_residual: res.dual_residual,
        rows: sf.num_rows(),
        dropped_rows: sol.dropped_rows.len(),
        seconds: start.elapsed().as_secs_f64(),
    };
    log::info!(
        "{label}: {:?} after {} iterations, value {:.10}, {} rows, {:.2}s",
        sol.status,
        sol.iterations,
        sol.primal_objective,
        stats.rows,
        stats.seconds
    );
    if sol.status != Status::Optimal {
        return Err(Error::Solver {
            kind: label.into(),
            status: format!("{:?}", sol.status),
            message: sol.message.clone(),
        });
    }
    let vars = prog.variables_from(&sol);
    Ok((vars, sol.primal_objective, stats))
}

fn check_unbiasable(fs: &[ComplexMatrix]) -> Result<()> {
    for (j, f) in fs.iter().enumerate() {
        if f.max_abs() < 1e-12 {
            return Err(Error::Infeasible(format!("derivative {} vanishes", j + 1)));
        }
    }
    Ok(())
}

fn channel_program(kind: ConeKind, model: &ChannelModel, g: &WeightMatrix, opts: &BoundOptions, label: &str) -> Result<BoundResult> {
    let model = model.raw();
    check_unbiasable(&model.f)?;
    let prog = assemble_channel(kind, g, &model.t, &model.f, model.space(), opts.cap)?;
    let (vars, value, stats) = run(&prog, opts, label)?;
    let y = prog.y_from(&vars)?;
    let probe = extract_probe(&y, &model)?;
    Ok(BoundResult {
        kind: label.into(),
        value,
        y,
        rho_a: Some(probe.rho_a),
        purification: Some(probe.psi),
        x: Some(probe.x),
        stats,
    })
}

/// J_k for the channel model, with the optimal probe and estimator.
pub fn channel_bound(kind: BoundKind, model: &ChannelModel, g: &WeightMatrix, opts: &BoundOptions) -> Result<BoundResult> {
    let raw = model.raw();
    channel_program(kind.cone(&raw.t), &raw, g, opts, &kind.channel_label())
}

/// Symmetric-extension relaxation of J1 at the given level.
pub fn tight_relaxation(model: &ChannelModel, g: &WeightMatrix, level: usize, opts: &BoundOptions) -> Result<BoundResult> {
    channel_program(ConeKind::SymExt(level), model, g, opts, &format!("J1ext:{level}"))
}

/// S_k for a fixed state model.
pub fn state_bound(kind: BoundKind, state: &StateModel, g: &WeightMatrix, opts: &BoundOptions) -> Result<BoundResult> {
    check_unbiasable(&state.d)?;
    let prog = assemble_state(kind.cone(&state.rho), g, &state.rho, &state.d, opts.cap)?;
    let label = kind.state_label();
    let (vars, value, stats) = run(&prog, opts, &label)?;
    let y = prog.y_from(&vars)?;
    Ok(BoundResult {
        kind: label,
        value,
        y,
        rho_a: None,
        purification: None,
        x: None,
        stats,
    })
}

struct Probe {
    rho_a: ComplexMatrix,
    psi: Vec<C64>,
    x: ComplexMatrix,
}

/// The input marginal sits in Y_00 = I_B (x) conj(rho_A); purify it and
/// conjugate Y into the estimator on R (x) B (x) C.
fn extract_probe(y: &ComplexMatrix, model: &ChannelModel) -> Result<Probe> {
    let space = model.space();
    let (da, db) = (model.d_a, model.d_b);
    let y00 = block(y, &space, 0, 0)?;
    let sigma = partial_trace(&y00, &[db, da], &[0])?.scale_re(1.0 / db as f64).hermitize();
    let e = herm_eig(&sigma)?;
    let clipped: Vec<f64> = e.values.iter().map(|&v| if v > 1e-10 { v } else { 0.0 }).collect();
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Infeasible("extracted probe has zero trace".into()));
    }
    let s: Vec<f64> = clipped.iter().map(|v| v / total).collect();

    let mut rho_a = ComplexMatrix::zeros(da, da);
    let mut psi = vec![C64::new(0.0, 0.0); da * da];
    for (k, &sk) in s.iter().enumerate() {
        let phi: Vec<C64> = e.vector(k).iter().map(|z| z.conj()).collect();
        for a in 0..da {
            psi[a * da + k] = phi[a] * sk.sqrt();
            for b in 0..da {
                rho_a[(a, b)] += phi[a] * phi[b].conj() * sk;
            }
        }
    }
    let big = psi
        .iter()
        .copied()
        .fold(C64::new(0.0, 0.0), |m, z| if z.norm() > m.norm() + 1e-14 { z } else { m });
    if big.norm() > 0.0 {
        let ph = big.conj() / big.norm();
        for z in &mut psi {
            *z *= ph;
        }
    }

    // X = (I (x) S^-1/2 Phi^dag) Y (I (x) Phi S^-1/2), with eps-mixing when rank deficient
    let eps = 1e-8;
    let (vals, vecs) = if s.iter().any(|&v| v < 1e-10) {
        let mut sig = sigma.scale_re(1.0 / total);
        sig = &sig.scale_re(1.0 - eps) + &ComplexMatrix::identity(da).scale_re(eps / da as f64);
        let e = herm_eig(&sig)?;
        (e.values, e.vectors)
    } else {
        (s.clone(), e.vectors.clone())
    };
    let kmat = ComplexMatrix::from_fn(da, da, |a, j| vecs[(a, j)] / vals[j].max(1e-300).sqrt());
    let k = kron(&ComplexMatrix::identity((space.d + 1) * db), &kmat);
    let x = &(&k.adjoint() * y) * &k;
    Ok(Probe {
        rho_a: rho_a.hermitize(),
        psi,
        x,
    })
}

/// Symmetric logarithmic derivatives and the SLD Fisher matrix.
#[derive(Clone, Debug)]
pub struct SldData {
    pub l: Vec<ComplexMatrix>,
    pub j_sld: RealSymmetricMatrix,
    /// L^i = sum_j (J^-1)_{ij} L_j, when J is invertible
    pub l_up: Option<Vec<ComplexMatrix>>,
}

const SUPPORT_TOL: f64 = 1e-9;

pub fn sld_operators(state: &StateModel) -> Result<SldData> {
    let n = state.dim();
    let e = herm_eig(&state.rho)?;
    let u = &e.vectors;
    let lam = &e.values;
    let support: Vec<bool> = lam.iter().map(|&v| v > SUPPORT_TOL).collect();
    let mut ls = Vec::with_capacity(state.d.len());
    for dj in &state.d {
        let dt = &(&u.adjoint() * dj) * u;
        let mut kernel = ComplexMatrix::zeros(n, n);
        let mut lt = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                if !support[k] && !support[l] {
                    kernel[(k, l)] = dt[(k, l)];
                    continue;
                }
                lt[(k, l)] = dt[(k, l)] * (2.0 / (lam[k] + lam[l]));
            }
        }
        let bad = kernel.norm_op();
        if bad > 1e-8 {
            return Err(Error::UnsupportedDerivative(bad));
        }
        ls.push((&(u * &lt) * &u.adjoint()).hermitize());
    }
    let d = ls.len();
    let mut j = vec![0.0; d * d];
    for a in 0..d {
        for b in 0..d {
            j[a * d + b] = state.d[a].trace_mul(&ls[b]).re;
        }
    }
    for a in 0..d {
        for b in 0..a {
            let v = 0.5 * (j[a * d + b] + j[b * d + a]);
            j[a * d + b] = v;
            j[b * d + a] = v;
        }
    }
    let j_sld = RealSymmetricMatrix { size: d, data: j };
    let l_up = fisher_inverse(&j_sld).ok().map(|inv| {
        (0..d)
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(n, n);
                for (k, lk) in ls.iter().enumerate() {
                    acc = &acc + &lk.scale_re(inv[(i, k)].re);
                }
                acc
            })
            .collect()
    });
    Ok(SldData { l: ls, j_sld, l_up })
}

fn real_to_complex(m: &RealSymmetricMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.size, m.size, |i, j| C64::new(m.get(i, j), 0.0))
}

fn fisher_inverse(j: &RealSymmetricMatrix) -> Result<ComplexMatrix> {
    let ev = j.eigenvalues();
    let max = ev.first().copied().unwrap_or(0.0);
    let min = ev.last().copied().unwrap_or(0.0);
    if !(min > 0.0) || max / min > 1e10 {
        let cond = if min > 0.0 { max / min } else { f64::INFINITY };
        return Err(Error::SingularFisher(cond));
    }
    herm_fn(&real_to_complex(j), |x| C64::new(1.0 / x, 0.0))
}

/// Tr(G J_SLD^-1).
pub fn sld_bound_analytic(state: &StateModel, g: &WeightMatrix) -> Result<f64> {
    let sld = sld_operators(state)?;
    if g.dim() != state.num_params() {
        return Err(Error::Dimension(format!("weight is {0}x{0}, model has d = {1}", g.dim(), state.num_params())));
    }
    let inv = fisher_inverse(&sld.j_sld)?;
    Ok(g.to_complex().trace_mul(&inv).re)
}

/// Matrix of Tr(L_u rho L_v).
pub fn sld_pairwise_traces(state: &StateModel) -> Result<ComplexMatrix> {
    let sld = sld_operators(state)?;
    let d = sld.l.len();
    Ok(ComplexMatrix::from_fn(d, d, |u, v| (&sld.l[u] * &state.rho).trace_mul(&sld.l[v])))
}

/// Membership test of Tr_B W in span{I_A}.
#[derive(Clone, Debug)]
pub struct CertificateResult {
    pub w: ComplexMatrix,
    pub trb_w: ComplexMatrix,
    pub deviation: f64,
    pub threshold: f64,
    pub in_k: bool,
    /// the Holevo optimizer was not unique (HN only)
    pub degenerate: bool,
}

fn k_membership(w: ComplexMatrix, d_a: usize, d_b: usize, tol: f64, degenerate: bool) -> Result<CertificateResult> {
    let trb_w = partial_trace(&w, &[d_b, d_a], &[0])?;
    let c = trb_w.trace() / d_a as f64;
    let dev = (&trb_w - &ComplexMatrix::identity(d_a).scale(c)).norm_op();
    let threshold = tol * trb_w.norm_op();
    Ok(CertificateResult {
        w,
        trb_w,
        deviation: dev,
        threshold,
        in_k: dev <= threshold,
        degenerate,
    })
}

/// Is the maximally entangled probe optimal for J4?
/// W = sum_{ij} G_ji L^i T_N L^j must have Tr_B W proportional to I_A.
pub fn maxent_certificate_sld(model: &ChannelModel, g: &WeightMatrix, tol: f64) -> Result<CertificateResult> {
    let nm = model.normalized();
    let state = StateModel::new(nm.t.clone(), nm.f.clone())?;
    let sld = sld_operators(&state)?;
    let l_up = sld
        .l_up
        .ok_or(Error::SingularFisher(f64::INFINITY))?;
    let d = l_up.len();
    let h = nm.t.rows();
    let mut w = ComplexMatrix::zeros(h, h);
    for i in 0..d {
        let lt = &l_up[i] * &nm.t;
        for j in 0..d {
            let gji = g.get(j, i);
            if gji != 0.0 {
                w = &w + &(&lt * &l_up[j]).scale_re(gji);
            }
        }
    }
    k_membership(w.hermitize(), nm.d_a, nm.d_b, tol, false)
}

/// G^-1/2 F_k mixing, so that the weight becomes the identity.
pub fn reparametrize(model: &ChannelModel, g: &WeightMatrix) -> Result<ChannelModel> {
    let gi = herm_fn(&g.to_complex(), |x| {
        if x > 1e-12 {
            C64::new(1.0 / x.sqrt(), 0.0)
        } else {
            C64::new(f64::NAN, 0.0)
        }
    })?;
    if gi.data().iter().any(|z| z.re.is_nan()) {
        return Err(Error::InvalidParameter("weight matrix must be positive definite".into()));
    }
    let d = model.d();
    let f = (0..d)
        .map(|j| {
            let mut acc = ComplexMatrix::zeros(model.t.rows(), model.t.rows());
            for k in 0..d {
                acc = &acc + &model.f[k].scale_re(gi[(j, k)].re);
            }
            acc
        })
        .collect();
    Ok(ChannelModel {
        t: model.t.clone(),
        f,
        d_a: model.d_a,
        d_b: model.d_b,
        normalized: model.normalized,
    })
}

/// Is the maximally entangled probe optimal for J5?
pub fn maxent_certificate_hn(model: &ChannelModel, g: &WeightMatrix, tol: f64, opts: &BoundOptions) -> Result<CertificateResult> {
    let nm = reparametrize(&model.normalized(), g)?;
    let state = StateModel::new(nm.t.clone(), nm.f.clone())?;
    let d = state.num_params();
    let id = WeightMatrix::identity(d);
    let zs = holevo_blocks(&state, &id, opts)?;

    // a second solve from another starting point exposes non-unique optimizers
    let mut alt = opts.clone();
    let base = alt.solver.initial_scale.unwrap_or(1.0);
    alt.solver.initial_scale = Some(10.0 * base.max(1.0));
    let degenerate = match holevo_blocks(&state, &id, &alt) {
        Ok(z2) => {
            let diff = zs
                .iter()
                .zip(&z2)
                .map(|(a, b)| (a - b).max_abs())
                .fold(0.0, f64::max);
            diff > 1e-5
        }
        Err(_) => true,
    };
    if degenerate {
        log::warn!("Holevo optimizer is not unique; the HN certificate depends on the solver path");
    }

    let t = &nm.t;
    let v = ComplexMatrix::from_fn(d, d, |i, j| (&zs[i] * &zs[j].adjoint()).trace_mul(t));
    let im = ComplexMatrix::from_fn(d, d, |i, j| C64::new(v[(i, j)].im, 0.0));
    let abs = herm_fn(&(&im.adjoint() * &im).hermitize(), |x| C64::new(x.max(0.0).sqrt(), 0.0))?;
    let top = herm_eig(&abs)?.values.first().copied().unwrap_or(0.0);
    let pinv = herm_fn(&abs, |x| {
        if x > 1e-9 * top.max(1e-300) && x > 1e-300 {
            C64::new(1.0 / x, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })?;
    let c = &im * &pinv;

    let h = t.rows();
    let mut w = ComplexMatrix::zeros(h, h);
    for i in 0..d {
        w = &w + &(&(&zs[i] * t) * &zs[i]);
        for j in 0..d {
            let cij = c[(i, j)].re;
            if cij != 0.0 {
                w = &w - &(&(&zs[j] * t) * &zs[i]).scale(I * cij);
            }
        }
    }
    k_membership(w, nm.d_a, nm.d_b, tol, degenerate)
}

/// Blocks X_{0,i} of the S5 optimizer.
fn holevo_blocks(state: &StateModel, g: &WeightMatrix, opts: &BoundOptions) -> Result<Vec<ComplexMatrix>> {
    let r = state_bound(BoundKind::Hn, state, g, opts)?;
    let space = crate::qmatrix::BlockSpace::new(state.num_params(), state.dim(), 1);
    (1..=state.num_params()).map(|i| block(&r.y, &space, 0, i)).collect()
}
