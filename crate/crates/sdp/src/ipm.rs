use crate::dense::{chol, lower_inverse, BlockMat};
use crate::form::{SdpError, SparseSym, StandardForm};
use crate::presolve::{presolve, Presolved};
use faer::{Mat, Side};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_iter: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
    /// Overrides the starting point `X0 = S0 = mu0 I`.
    pub initial_scale: Option<f64>,
    pub presolve_tol: f64,
    /// If the method breaks down after reaching a feasible iterate with gap at most
    /// this, that iterate is returned as Optimal.
    pub accept_gap: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iter: 200,
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            step_fraction: 0.98,
            initial_scale: None,
            presolve_tol: 1e-9,
            accept_gap: 1e-7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    MaxIter,
    NumError,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `<X,S>`
    pub complementarity: f64,
    pub rel_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub status: Status,
    pub x: BlockMat,
    pub y: Vec<f64>,
    pub s: BlockMat,
    pub iterations: usize,
    pub gap: Option<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub history: Vec<IterationRecord>,
    pub dropped_rows: Vec<usize>,
    pub message: String,
}

/// Quality measures recomputed from scratch.
#[derive(Clone, Debug, PartialEq)]
pub struct Residuals {
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `||A(X) - b|| / (1 + ||b||)`
    pub primal_residual: f64,
    /// `||C - A^T y - S|| / (1 + ||C||)`
    pub dual_residual: f64,
    pub rel_gap: f64,
    pub min_eig_x: f64,
    pub min_eig_s: f64,
}

pub fn residuals(sf: &StandardForm, x: &BlockMat, y: &[f64], s: &BlockMat) -> Residuals {
    let ax = sf.apply(x);
    let nb = norm2(&sf.b);
    let rp: Vec<f64> = ax.iter().zip(&sf.b).map(|(a, b)| a - b).collect();
    let mut rd = sf.c.sub(&sf.adjoint(y));
    rd.axpy(-1.0, s);
    let pobj = sf.c.inner(x);
    let dobj = dot(&sf.b, y);
    Residuals {
        primal_objective: pobj,
        dual_objective: dobj,
        primal_residual: norm2(&rp) / (1.0 + nb),
        dual_residual: rd.norm_fro() / (1.0 + sf.c.norm_fro()),
        rel_gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
        min_eig_x: x.min_eigenvalue(),
        min_eig_s: s.min_eigenvalue(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Seg {
    row: usize,
    // full (both triangles) entries
    ent: Vec<(usize, usize, f64)>,
}

struct Scaling {
    g: Mat<f64>,
    ginv: Mat<f64>,
    w: Mat<f64>,
    d: Vec<f64>,
}

fn nt_scaling(x: &Mat<f64>, s: &Mat<f64>) -> Option<Scaling> {
    let lx = chol(x)?;
    let ls = chol(s)?;
    let k = ls.transpose() * &lx;
    let svd = k.svd().ok()?;
    let d: Vec<f64> = svd.S().column_vector().iter().copied().collect();
    if d.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return None;
    }
    let v = svd.V();
    let n = x.nrows();
    let g = Mat::from_fn(n, n, |i, j| {
        let mut acc = 0.0;
        for k in 0..n {
            acc += lx[(i, k)] * v[(k, j)];
        }
        acc / d[j].sqrt()
    });
    let lxi = lower_inverse(&lx);
    let vt_lxi = v.transpose() * &lxi;
    let ginv = Mat::from_fn(n, n, |i, j| d[i].sqrt() * vt_lxi[(i, j)]);
    let w = &g * g.transpose();
    Some(Scaling { g, ginv, w, d })
}

fn sym(a: &mut Mat<f64>) {
    let n = a.nrows();
    for j in 0..n {
        for i in 0..j {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// Largest alpha <= 1/frac with D + alpha * dT still PSD, times `frac`, capped at 1.
fn step_to_boundary(d: &[f64], dt: &Mat<f64>, frac: f64) -> f64 {
    let n = d.len();
    if n == 0 {
        return 1.0;
    }
    let mut m = Mat::from_fn(n, n, |i, j| dt[(i, j)] / (d[i] * d[j]).sqrt());
    sym(&mut m);
    let lam = match m.self_adjoint_eigenvalues(Side::Lower) {
        Ok(ev) => ev[0],
        Err(_) => return 0.0,
    };
    if lam >= 0.0 {
        1.0
    } else {
        (frac * (-1.0 / lam)).min(1.0)
    }
}

enum SchurFactor {
    Faer(faer::linalg::solvers::Llt<f64>),
    Own(Mat<f64>),
}

impl SchurFactor {
    fn new(m: &Mat<f64>) -> Option<SchurFactor> {
        let n = m.nrows();
        let dmax = (0..n).fold(0.0f64, |a, i| a.max(m[(i, i)].abs())).max(1e-300);
        if let Ok(llt) = m.llt(Side::Lower) {
            let l = llt.L();
            // tiny pivots mean a numerically singular matrix; regularize instead
            if (0..n).all(|i| l[(i, i)].is_finite() && l[(i, i)] * l[(i, i)] >= 1e-12 * dmax) {
                return Some(SchurFactor::Faer(llt));
            }
        }
        // regularized fallback
        let mut l = Mat::<f64>::zeros(n, n);
        for j in 0..n {
            let mut djj = m[(j, j)];
            for k in 0..j {
                djj -= l[(j, k)] * l[(j, k)];
            }
            if djj < 1e-12 * dmax {
                djj += 1e-10 * dmax;
                if djj <= 0.0 {
                    djj = 1e-10 * dmax;
                }
            }
            let ljj = djj.sqrt();
            if !ljj.is_finite() {
                return None;
            }
            l[(j, j)] = ljj;
            for i in j + 1..n {
                let mut v = m[(i, j)];
                for k in 0..j {
                    v -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = v / ljj;
            }
        }
        Some(SchurFactor::Own(l))
    }

    /// Solve, then refine against the unregularized matrix.
    fn solve_refined(&self, m: &Mat<f64>, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut x = self.solve(rhs);
        let rn = rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for _ in 0..3 {
            let r: Vec<f64> = (0..n)
                .map(|i| rhs[i] - (0..n).map(|j| m[(i, j)] * x[j]).sum::<f64>())
                .collect();
            if r.iter().fold(0.0f64, |a, v| a.max(v.abs())) <= 1e-15 * rn {
                break;
            }
            let dx = self.solve(&r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        x
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let r = Mat::from_fn(n, 1, |i, _| rhs[i]);
        match self {
            SchurFactor::Faer(llt) => {
                use faer::prelude::Solve;
                let x = llt.solve(r.as_ref());
                (0..n).map(|i| x[(i, 0)]).collect()
            }
            SchurFactor::Own(l) => {
                let mut z = vec![0.0; n];
                for i in 0..n {
                    let mut v = rhs[i];
                    for k in 0..i {
                        v -= l[(i, k)] * z[k];
                    }
                    z[i] = v / l[(i, i)];
                }
                for i in (0..n).rev() {
                    let mut v = z[i];
                    for k in i + 1..n {
                        v -= l[(k, i)] * z[k];
                    }
                    z[i] = v / l[(i, i)];
                }
                z
            }
        }
    }
}

struct Work<'a> {
    dims: Vec<usize>,
    rows: Vec<&'a SparseSym>,
    b: Vec<f64>,
    c: &'a BlockMat,
    // per block: segments touching it
    by_block: Vec<Vec<Seg>>,
    nnz_block: Vec<usize>,
    // factor of [<A_i, A_j>]
    aat: Option<SchurFactor>,
}

impl<'a> Work<'a> {
    fn new(sf: &'a StandardForm, kept: &[usize]) -> Self {
        let dims = sf.blocks.clone();
        let mut by_block: Vec<Vec<Seg>> = (0..dims.len()).map(|_| Vec::new()).collect();
        for (r, &i) in kept.iter().enumerate() {
            for e in sf.rows[i].entries() {
                let list = &mut by_block[e.block];
                if list.last().is_none_or(|s: &Seg| s.row != r) {
                    list.push(Seg { row: r, ent: Vec::new() });
                }
                let seg = list.last_mut().unwrap();
                seg.ent.push((e.row, e.col, e.value));
                if e.row != e.col {
                    seg.ent.push((e.col, e.row, e.value));
                }
            }
        }
        let nnz_block = by_block
            .iter()
            .map(|l| l.iter().map(|s| s.ent.len()).sum())
            .collect();
        let rows: Vec<&SparseSym> = kept.iter().map(|&i| &sf.rows[i]).collect();
        let mut work = Work {
            dims,
            rows,
            b: kept.iter().map(|&i| sf.b[i]).collect(),
            c: &sf.c,
            by_block,
            nnz_block,
            aat: None,
        };
        let ident: Vec<Mat<f64>> = work.dims.iter().map(|&n| Mat::identity(n, n)).collect();
        let g = work.schur(&ident);
        work.aat = SchurFactor::new(&g);
        work
    }

    fn apply(&self, x: &BlockMat) -> Vec<f64> {
        self.rows.iter().map(|a| a.dot(x)).collect()
    }

    fn adjoint(&self, y: &[f64]) -> BlockMat {
        let mut out = BlockMat::zeros(&self.dims);
        for (a, &yi) in self.rows.iter().zip(y) {
            if yi != 0.0 {
                a.add_to(yi, &mut out);
            }
        }
        out
    }

    /// M_ij = Tr(A_i W A_j W)
    fn schur(&self, w: &[Mat<f64>]) -> Mat<f64> {
        let m = self.rows.len();
        let mut mm = Mat::<f64>::zeros(m, m);
        for (blk, segs) in self.by_block.iter().enumerate() {
            let n = self.dims[blk];
            if segs.is_empty() || n == 0 {
                continue;
            }
            let wb = &w[blk];
            let wf: Vec<f64> = (0..n * n).map(|k| wb[(k / n, k % n)]).collect();
            let total = self.nnz_block[blk] as f64;
            let n3 = (n * n * n) as f64;
            for q in 0..segs.len() {
                let sq = &segs[q];
                let dense = (sq.ent.len() as f64) * total > n3 + total;
                if dense {
                    // B = W A_q W, via A_q W sparse then W (A_q W)
                    let mut aw = Mat::<f64>::zeros(n, n);
                    for &(a, b, v) in &sq.ent {
                        for k in 0..n {
                            aw[(a, k)] += v * wf[b * n + k];
                        }
                    }
                    let bq = wb * &aw;
                    for p in 0..=q {
                        let sp = &segs[p];
                        let mut acc = 0.0;
                        for &(a, b, v) in &sp.ent {
                            acc += v * bq[(b, a)];
                        }
                        mm[(sp.row, sq.row)] += acc;
                        if sp.row != sq.row {
                            mm[(sq.row, sp.row)] += acc;
                        }
                    }
                } else {
                    for p in 0..=q {
                        let sp = &segs[p];
                        let mut acc = 0.0;
                        for &(a1, b1, v1) in &sp.ent {
                            for &(a2, b2, v2) in &sq.ent {
                                acc += v1 * v2 * wf[b1 * n + a2] * wf[b2 * n + a1];
                            }
                        }
                        mm[(sp.row, sq.row)] += acc;
                        if sp.row != sq.row {
                            mm[(sq.row, sp.row)] += acc;
                        }
                    }
                }
            }
        }
        mm
    }
}

fn wxw(sc: &[Option<Scaling>], x: &BlockMat) -> BlockMat {
    BlockMat {
        blocks: sc
            .iter()
            .zip(&x.blocks)
            .map(|(s, m)| match s {
                Some(s) => &s.w * m * &s.w,
                None => m.clone(),
            })
            .collect(),
    }
}

struct Direction {
    dx: BlockMat,
    dy: Vec<f64>,
    ds: BlockMat,
}

fn direction(
    work: &Work,
    sc: &[Option<Scaling>],
    fac: &SchurFactor,
    mm: &Mat<f64>,
    rp: &[f64],
    rd: &BlockMat,
    rc: &BlockMat,
) -> Direction {
    let mut t1 = rc.clone();
    t1.axpy(-1.0, &wxw(sc, rd));
    let at1 = work.apply(&t1);
    let h: Vec<f64> = rp.iter().zip(&at1).map(|(a, b)| a - b).collect();
    let dy = fac.solve_refined(mm, &h);
    let aty = work.adjoint(&dy);
    let mut ds = rd.clone();
    ds.axpy(-1.0, &aty);
    let mut dx = t1;
    dx.axpy(1.0, &wxw(sc, &aty));
    dx.symmetrize();
    // absorb Schur rounding: project so that A(dX) = rp holds to working precision
    if let Some(aat) = &work.aat {
        for _ in 0..2 {
            let adx = work.apply(&dx);
            let r: Vec<f64> = rp.iter().zip(&adx).map(|(a, b)| a - b).collect();
            let z = aat.solve(&r);
            dx.axpy(1.0, &work.adjoint(&z));
        }
    }
    ds.symmetrize();
    Direction { dx, dy, ds }
}

/// Scaled directions G^-1 dX G^-T and G^T dS G per block.
fn scaled(sc: &[Option<Scaling>], d: &Direction) -> (Vec<Mat<f64>>, Vec<Mat<f64>>) {
    let mut xs = Vec::new();
    let mut ss = Vec::new();
    for (k, s) in sc.iter().enumerate() {
        match s {
            Some(s) => {
                let mut a = &s.ginv * &d.dx.blocks[k] * s.ginv.transpose();
                let mut b = s.g.transpose() * &d.ds.blocks[k] * &s.g;
                sym(&mut a);
                sym(&mut b);
                xs.push(a);
                ss.push(b);
            }
            None => {
                xs.push(Mat::zeros(0, 0));
                ss.push(Mat::zeros(0, 0));
            }
        }
    }
    (xs, ss)
}

fn max_steps(sc: &[Option<Scaling>], xs: &[Mat<f64>], ss: &[Mat<f64>], frac: f64) -> (f64, f64) {
    let mut ap = 1.0f64;
    let mut ad = 1.0f64;
    for (k, s) in sc.iter().enumerate() {
        if let Some(s) = s {
            ap = ap.min(step_to_boundary(&s.d, &xs[k], frac));
            ad = ad.min(step_to_boundary(&s.d, &ss[k], frac));
        }
    }
    (ap, ad)
}

pub fn solve(sf: &StandardForm, opts: &SolveOptions) -> Result<Solution, SdpError> {
    sf.validate()?;
    let pre = presolve(sf, opts.presolve_tol);
    let b_inf = sf.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let c_max = sf
        .c
        .blocks
        .iter()
        .flat_map(|m| (0..m.nrows()).flat_map(move |i| (0..m.ncols()).map(move |j| m[(i, j)].abs())))
        .fold(0.0f64, f64::max);
    let mu0 = opts.initial_scale.unwrap_or(1.0 + b_inf.max(c_max));
    let work = if pre.inconsistent.is_none() {
        Some(Work::new(sf, &pre.kept))
    } else {
        None
    };
    // degenerate programs can lose centrality from one start and not another
    let mut sol = run_ipm(sf, opts, &pre, work.as_ref(), mu0);
    for f in [0.5, 0.2, 0.05, 10.0, 100.0] {
        if sol.status != Status::NumError {
            break;
        }
        log::debug!("restarting from mu0 = {:.3e} ({})", f * mu0, sol.message);
        let mut next = run_ipm(sf, opts, &pre, work.as_ref(), f * mu0);
        next.message = format!("{} (restarted from mu0 = {:.3e})", next.message, f * mu0);
        sol = next;
    }
    Ok(sol)
}

fn run_ipm(sf: &StandardForm, opts: &SolveOptions, pre: &Presolved, work: Option<&Work>, mu0: f64) -> Solution {
    let dims = sf.blocks.clone();
    let m_full = sf.rows.len();
    let nb = norm2(&sf.b);
    let c_fro = sf.c.norm_fro();

    let mut x = BlockMat::identity(&dims, mu0);
    let mut s = BlockMat::identity(&dims, mu0);
    let mut y_red = vec![0.0; pre.kept.len()];

    let make = |status: Status,
                x: BlockMat,
                y_red: &[f64],
                s: BlockMat,
                iterations: usize,
                gap: Option<f64>,
                history: Vec<IterationRecord>,
                message: String| {
        let mut y = vec![0.0; m_full];
        for (r, &i) in pre.kept.iter().enumerate() {
            y[i] = y_red[r];
        }
        let pobj = sf.c.inner(&x);
        let dobj = dot(&sf.b, &y);
        Solution {
            status,
            x,
            y,
            s,
            iterations,
            gap,
            primal_objective: pobj,
            dual_objective: dobj,
            history,
            dropped_rows: pre.dropped.clone(),
            message,
        }
    };

    if let Some(i) = pre.inconsistent {
        return make(
            Status::Infeasible,
            x,
            &y_red,
            s,
            0,
            None,
            Vec::new(),
            format!("equality row {i} contradicts the other rows"),
        );
    }

    let work = work.expect("consistent rows have a workspace");
    let n_total: usize = dims.iter().sum::<usize>().max(1);
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut last_steps = (0.0, 0.0);
    let mut stall = 0usize;
    // best feasible iterate within accept_gap, as (x, y, s, iter, gap)
    let mut best: Option<(BlockMat, Vec<f64>, BlockMat, usize, f64)> = None;

    macro_rules! bail {
        ($status:expr, $iter:expr, $gap:expr, $msg:expr) => {{
            let msg: String = $msg;
            if let Some((bx, by, bs, bi, bg)) = best.take() {
                return make(Status::Optimal, bx, &by, bs, bi, Some(bg), history, format!("converged to reduced accuracy ({msg})"));
            }
            return make($status, x, &y_red, s, $iter, $gap, history, msg);
        }};
    }

    for iter in 0..=opts.max_iter {
        let ax = work.apply(&x);
        let rp: Vec<f64> = work.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mut rd = work.c.sub(&work.adjoint(&y_red));
        rd.axpy(-1.0, &s);
        let pobj = work.c.inner(&x);
        let dobj = dot(&work.b, &y_red);
        let xs = x.inner(&s);
        let mu = xs / n_total as f64;
        let pinf = norm2(&rp) / (1.0 + nb);
        let dinf = rd.norm_fro() / (1.0 + c_fro);
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        history.push(IterationRecord {
            iter,
            primal_objective: pobj,
            dual_objective: dobj,
            complementarity: xs,
            rel_gap,
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
            step_primal: last_steps.0,
            step_dual: last_steps.1,
        });
        // only meaningful once both residuals are negligible
        debug_assert!(
            pinf > 1e-9 || dinf > 1e-9 || dobj <= pobj + 1e-8 * (1.0 + pobj.abs() + dobj.abs()),
            "weak duality violated at iter {iter}: {dobj} > {pobj}"
        );
        log::debug!(
            "iter {iter:3} pobj {pobj:+.10e} dobj {dobj:+.10e} gap {rel_gap:.2e} pinf {pinf:.2e} dinf {dinf:.2e} mu {mu:.2e}"
        );

        if rel_gap <= opts.gap_tol && pinf <= opts.feas_tol && dinf <= opts.feas_tol {
            return make(Status::Optimal, x, &y_red, s, iter, Some(rel_gap), history, "converged".into());
        }
        if rel_gap <= opts.accept_gap
            && pinf <= opts.feas_tol
            && dinf <= opts.feas_tol
            && best.as_ref().is_none_or(|b| rel_gap < b.4)
        {
            best = Some((x.clone(), y_red.clone(), s.clone(), iter, rel_gap));
        }
        // infeasibility certificates
        if iter > 2 {
            let mut aty_s = work.adjoint(&y_red);
            aty_s.axpy(1.0, &s);
            if dobj > 0.0 && aty_s.norm_fro() <= opts.feas_tol * dobj && pinf > opts.feas_tol {
                return make(Status::Infeasible, x, &y_red, s, iter, None, history, "primal infeasible".into());
            }
            let axn = norm2(&ax);
            if pobj < 0.0 && axn <= opts.feas_tol * (-pobj) && dinf > opts.feas_tol {
                return make(Status::Infeasible, x, &y_red, s, iter, None, history, "dual infeasible".into());
            }
        }
        if iter == opts.max_iter {
            break;
        }

        let mut sc: Vec<Option<Scaling>> = Vec::with_capacity(dims.len());
        for (k, &n) in dims.iter().enumerate() {
            if n == 0 {
                sc.push(None);
                continue;
            }
            match nt_scaling(&x.blocks[k], &s.blocks[k]) {
                Some(v) => sc.push(Some(v)),
                None => bail!(Status::NumError, iter, Some(rel_gap), format!("lost definiteness in block {k}")),
            }
        }
        let w: Vec<Mat<f64>> = sc
            .iter()
            .map(|s| s.as_ref().map_or(Mat::zeros(0, 0), |s| s.w.clone()))
            .collect();
        let mm = work.schur(&w);
        let fac = match SchurFactor::new(&mm) {
            Some(f) => f,
            None => bail!(Status::NumError, iter, Some(rel_gap), "Schur complement factorization failed".into()),
        };

        // predictor
        let rc_aff = x.scaled(-1.0);
        let aff = direction(work, &sc, &fac, &mm, &rp, &rd, &rc_aff);
        let (xa, sa) = scaled(&sc, &aff);
        let (ap, ad) = max_steps(&sc, &xa, &sa, 1.0);
        let mut xn = x.clone();
        xn.axpy(ap, &aff.dx);
        let mut sn = s.clone();
        sn.axpy(ad, &aff.ds);
        let mu_aff = xn.inner(&sn) / n_total as f64;
        let mut sigma = if mu > 0.0 { (mu_aff / mu).clamp(0.0, 1.0).powi(3) } else { 0.0 };
        // after a short step, recentre instead of trusting the second-order term
        let short = iter > 0 && last_steps.0.min(last_steps.1) < 0.2;
        if short {
            sigma = sigma.max(0.5);
        }

        // corrector
        let mut rc = BlockMat::zeros(&dims);
        for (k, s_k) in sc.iter().enumerate() {
            let Some(s_k) = s_k else { continue };
            let n = dims[k];
            let prod = if short { Mat::<f64>::zeros(n, n) } else { &xa[k] * &sa[k] };
            let mut rt = Mat::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut v = -0.5 * (prod[(i, j)] + prod[(j, i)]);
                    if i == j {
                        v += sigma * mu - s_k.d[i] * s_k.d[i];
                    }
                    rt[(i, j)] = 2.0 * v / (s_k.d[i] + s_k.d[j]);
                }
            }
            rc.blocks[k] = &s_k.g * &rt * s_k.g.transpose();
        }
        rc.symmetrize();
        let dir = direction(work, &sc, &fac, &mm, &rp, &rd, &rc);
        if !(dir.dy.iter().all(|v| v.is_finite()) && dir.dx.norm_fro().is_finite() && dir.ds.norm_fro().is_finite()) {
            bail!(Status::NumError, iter, Some(rel_gap), "non-finite search direction".into());
        }
        let (xd, sd) = scaled(&sc, &dir);
        let (ap, ad) = max_steps(&sc, &xd, &sd, opts.step_fraction);

        x.axpy(ap, &dir.dx);
        s.axpy(ad, &dir.ds);
        for (yi, di) in y_red.iter_mut().zip(&dir.dy) {
            *yi += ad * di;
        }
        x.symmetrize();
        s.symmetrize();
        last_steps = (ap, ad);

        if ap < 1e-10 && ad < 1e-10 {
            stall += 1;
            if stall >= 3 {
                bail!(Status::NumError, iter + 1, Some(rel_gap), "step length collapsed".into());
            }
        } else {
            stall = 0;
        }
    }
    let rel = history.last().map(|h| h.rel_gap);
    bail!(Status::MaxIter, opts.max_iter, rel, "iteration limit".into())
}
