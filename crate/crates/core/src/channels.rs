//! Channel families, Choi matrices and finite-difference models.

use crate::error::{Error, Result};
use crate::model::{apply_choi, ChannelModel};
use crate::qmatrix::{expi, kron, min_eigenvalue, partial_trace, pauli, ComplexMatrix, C64, I};
use std::fmt;
use std::sync::Arc;

type ApplyFn = dyn Fn(&[f64], &ComplexMatrix) -> Result<ComplexMatrix> + Send + Sync;
type ChoiFn = dyn Fn(&[f64]) -> Result<ComplexMatrix> + Send + Sync;

/// A d-parameter family of channels A -> B.
#[derive(Clone)]
pub struct ChannelFamily {
    pub name: String,
    pub d_a: usize,
    pub d_b: usize,
    pub d: usize,
    pub theta0: Vec<f64>,
    apply: Arc<ApplyFn>,
    choi: Option<Arc<ChoiFn>>,
}

impl fmt::Debug for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChannelFamily")
            .field("name", &self.name)
            .field("d_a", &self.d_a)
            .field("d_b", &self.d_b)
            .field("d", &self.d)
            .field("theta0", &self.theta0)
            .finish()
    }
}

/// Finite-difference scheme for dT/dtheta.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FdScheme {
    Central(f64),
    Forward(f64),
}

impl Default for FdScheme {
    fn default() -> Self {
        FdScheme::Central(1e-6)
    }
}

impl ChannelFamily {
    pub fn new(
        name: impl Into<String>,
        d_a: usize,
        d_b: usize,
        theta0: Vec<f64>,
        apply: impl Fn(&[f64], &ComplexMatrix) -> Result<ComplexMatrix> + Send + Sync + 'static,
    ) -> Self {
        ChannelFamily {
            name: name.into(),
            d_a,
            d_b,
            d: theta0.len(),
            theta0,
            apply: Arc::new(apply),
            choi: None,
        }
    }

    /// Replaces the column-by-column Choi construction.
    pub fn with_choi(mut self, choi: impl Fn(&[f64]) -> Result<ComplexMatrix> + Send + Sync + 'static) -> Self {
        self.choi = Some(Arc::new(choi));
        self
    }

    pub fn apply(&self, theta: &[f64], rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if theta.len() != self.d {
            return Err(Error::Dimension(format!("{} parameters for d = {}", theta.len(), self.d)));
        }
        if rho.rows() != self.d_a || !rho.is_square() {
            return Err(Error::Dimension(format!("input is {}x{} (d_A = {})", rho.rows(), rho.cols(), self.d_a)));
        }
        (self.apply)(theta, rho)
    }

    /// (Lambda_theta (x) id_C)(rho) for rho on A (x) C.
    pub fn apply_bipartite(&self, theta: &[f64], rho: &ComplexMatrix, d_c: usize) -> Result<ComplexMatrix> {
        let t = self.choi_unchecked(theta)?;
        apply_choi(&t, rho, self.d_a, self.d_b, d_c)
    }

    /// sum_{j,k} Lambda(|j><k|) (x) |j><k|, without the CP check.
    pub fn choi_unchecked(&self, theta: &[f64]) -> Result<ComplexMatrix> {
        let (da, db) = (self.d_a, self.d_b);
        if let Some(f) = &self.choi {
            if theta.len() != self.d {
                return Err(Error::Dimension(format!("{} parameters for d = {}", theta.len(), self.d)));
            }
            let t = f(theta)?;
            if t.rows() != da * db || !t.is_square() {
                return Err(Error::Dimension(format!("Choi builder returned size {}", t.rows())));
            }
            return Ok(t.hermitize());
        }
        let mut t = ComplexMatrix::zeros(db * da, db * da);
        for j in 0..da {
            for k in 0..da {
                let out = self.apply(theta, &ComplexMatrix::unit(da, j, k))?;
                for b in 0..db {
                    for bp in 0..db {
                        t[(b * da + j, bp * da + k)] = out[(b, bp)];
                    }
                }
            }
        }
        Ok(t.hermitize())
    }

    pub fn choi(&self, theta: &[f64]) -> Result<ComplexMatrix> {
        let t = self.choi_unchecked(theta)?;
        let m = min_eigenvalue(&t);
        if m < -1e-6 {
            return Err(Error::NotCp(m));
        }
        Ok(t)
    }

    /// dT/dtheta^j at theta0, Hermitized and projected onto Tr_B F = 0.
    pub fn choi_derivatives(&self, theta0: &[f64], scheme: FdScheme) -> Result<Vec<ComplexMatrix>> {
        let (da, db) = (self.d_a, self.d_b);
        let base = match scheme {
            FdScheme::Forward(_) => Some(self.choi_unchecked(theta0)?),
            FdScheme::Central(_) => None,
        };
        let mut out = Vec::with_capacity(self.d);
        for j in 0..self.d {
            let shifted = |h: f64| -> Result<ComplexMatrix> {
                let mut th = theta0.to_vec();
                th[j] += h;
                self.choi_unchecked(&th)
            };
            let f = match scheme {
                FdScheme::Central(h) => {
                    if !(h > 0.0) {
                        return Err(Error::InvalidParameter(format!("step {h}")));
                    }
                    (&shifted(h)? - &shifted(-h)?).scale_re(0.5 / h)
                }
                FdScheme::Forward(h) => {
                    if !(h > 0.0) {
                        return Err(Error::InvalidParameter(format!("step {h}")));
                    }
                    (&shifted(h)? - base.as_ref().unwrap()).scale_re(1.0 / h)
                }
            };
            let f = f.hermitize();
            let drift = partial_trace(&f, &[db, da], &[0])?;
            let fix = kron(&ComplexMatrix::identity(db), &drift).scale_re(1.0 / db as f64);
            out.push(&f - &fix);
        }
        Ok(out)
    }

    pub fn model(&self, scheme: FdScheme) -> Result<ChannelModel> {
        let t = self.choi(&self.theta0)?;
        let f = self.choi_derivatives(&self.theta0, scheme)?;
        ChannelModel::new(t, f, self.d_a, self.d_b)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("noise p = {p} outside [0,1]")));
    }
    Ok(())
}

/// U (1-p) rho U^dag + p Tr(rho) I/d with U = exp(i sum theta^k s_k).
fn rotate_depolarize(gens: &[ComplexMatrix], p: f64, theta: &[f64], rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = rho.rows();
    let mut h = ComplexMatrix::zeros(n, n);
    for (g, &t) in gens.iter().zip(theta) {
        h = &h + &g.scale_re(t);
    }
    let u = expi(&h, 1.0)?;
    let mixed = ComplexMatrix::identity(n).scale(rho.trace() / n as f64);
    let inner = &rho.scale_re(1.0 - p) + &mixed.scale_re(p);
    Ok(&(&u * &inner) * &u.adjoint())
}

/// Qubit depolarizing channel after the rotation exp(i theta sigma_1).
pub fn depolarizing_qubit(p: f64) -> Result<ChannelFamily> {
    check_p(p)?;
    let s1 = pauli()[0].clone();
    Ok(ChannelFamily::new(format!("depolarizing(p={p})"), 2, 2, vec![0.0], move |th, rho| {
        rotate_depolarize(std::slice::from_ref(&s1), p, th, rho)
    }))
}

/// Weyl operators W(a,b) = X(a) Z(b) on C^d.
pub fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let w = 2.0 * std::f64::consts::PI / d as f64;
    let mut m = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        m[((k + a) % d, k)] = C64::from_polar(1.0, w * ((b * k) % d) as f64);
    }
    m
}

/// Pauli channel sum_{a,b} p_theta(a,b) W rho W^dag. `dist` returns d^2 weights
/// indexed a*d + b.
pub fn generalized_pauli(
    d: usize,
    theta0: Vec<f64>,
    dist: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
) -> Result<ChannelFamily> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("Pauli dimension {d}")));
    }
    let p0 = dist(&theta0);
    if p0.len() != d * d {
        return Err(Error::Dimension(format!("distribution has {} entries, need {}", p0.len(), d * d)));
    }
    let s: f64 = p0.iter().sum();
    if (s - 1.0).abs() > 1e-10 || p0.iter().any(|&x| x < -1e-12) {
        return Err(Error::InvalidParameter(format!("distribution at theta0 sums to {s}")));
    }
    let ws: Vec<ComplexMatrix> = (0..d * d).map(|k| weyl(d, k / d, k % d)).collect();
    Ok(ChannelFamily::new(format!("pauli(d={d})"), d, d, theta0, move |th, rho| {
        let p = dist(th);
        let mut out = ComplexMatrix::zeros(d, d);
        for (w, &pk) in ws.iter().zip(&p) {
            if pk != 0.0 {
                out = &out + &(&(w * rho) * &w.adjoint()).scale_re(pk);
            }
        }
        Ok(out)
    }))
}

/// Spin-j angular momentum (J_x, J_y, J_z), basis m = j, j-1, ..., -j.
pub fn spin_matrices(two_j: usize) -> [ComplexMatrix; 3] {
    let n = two_j + 1;
    let j = two_j as f64 / 2.0;
    let mut jp = ComplexMatrix::zeros(n, n);
    for k in 1..n {
        // |m> with m = j - k  ->  |m+1>
        let m = j - k as f64;
        jp[(k - 1, k)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm).scale_re(0.5);
    let jy = (&jp - &jm).scale(-0.5 * I);
    let jz = ComplexMatrix::diag(&(0..n).map(|k| j - k as f64).collect::<Vec<_>>());
    [jx, jy, jz]
}

/// SU(2) rotation by exp(i sum theta^k sigma_k) on spin j after depolarizing noise,
/// sigma_k = sqrt(2) J_k.
pub fn su2_depolarizing(j: f64, p: f64) -> Result<ChannelFamily> {
    check_p(p)?;
    let two_j = (2.0 * j).round();
    if two_j < 1.0 || (2.0 * j - two_j).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("spin j = {j}")));
    }
    let two_j = two_j as usize;
    let n = two_j + 1;
    let gens: Vec<ComplexMatrix> = spin_matrices(two_j)
        .iter()
        .map(|m| m.scale_re(std::f64::consts::SQRT_2))
        .collect();
    Ok(ChannelFamily::new(format!("su2(j={j},p={p})"), n, n, vec![0.0; 3], move |th, rho| {
        rotate_depolarize(&gens, p, th, rho)
    }))
}

/// Collective spin operators on the Dicke basis |D_w>, w = number of excitations.
#[derive(Clone, Debug)]
pub struct DickeOperatorSet {
    pub n: usize,
    pub e1: ComplexMatrix,
    pub e2: ComplexMatrix,
    pub e3: ComplexMatrix,
    /// r_w = ½ sqrt((n-w)(w+1)), w = 0..n-1
    pub r: Vec<f64>,
}

impl DickeOperatorSet {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Collective damping gamma sum_j |0><1|_j restricted to the Dicke basis.
    pub fn adamp(&self, gamma: f64) -> ComplexMatrix {
        let n = self.n;
        let mut a = ComplexMatrix::zeros(n + 1, n + 1);
        for w in 0..n {
            a[(w, w + 1)] = C64::new(gamma * (((n - w) * (w + 1)) as f64).sqrt(), 0.0);
        }
        a
    }

    pub fn e(&self) -> [&ComplexMatrix; 3] {
        [&self.e1, &self.e2, &self.e3]
    }
}

pub fn dicke_operators(n: usize) -> Result<DickeOperatorSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let r: Vec<f64> = (0..n).map(|w| 0.5 * (((n - w) * (w + 1)) as f64).sqrt()).collect();
    let mut e1 = ComplexMatrix::zeros(n + 1, n + 1);
    let mut e2 = ComplexMatrix::zeros(n + 1, n + 1);
    for (w, &rw) in r.iter().enumerate() {
        e1[(w, w + 1)] = C64::new(rw, 0.0);
        e1[(w + 1, w)] = C64::new(rw, 0.0);
        e2[(w, w + 1)] = -I * rw;
        e2[(w + 1, w)] = I * rw;
    }
    let e3 = ComplexMatrix::diag(&(0..=n).map(|w| n as f64 / 2.0 - w as f64).collect::<Vec<_>>());
    Ok(DickeOperatorSet { n, e1, e2, e3, r })
}

/// Field sensing master equation data, evolution time 1.
#[derive(Clone, Debug)]
pub struct LindbladSpec {
    pub n: usize,
    pub theta: [f64; 3],
    pub gamma: f64,
    pub cutoff: f64,
    pub cap: usize,
}

impl LindbladSpec {
    pub fn new(n: usize, theta: [f64; 3], gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!("gamma = {gamma}")));
        }
        Ok(LindbladSpec {
            n,
            theta,
            gamma,
            cutoff: 1e-12,
            cap: 100,
        })
    }
}

#[derive(Clone, Debug)]
pub struct LindbladOutput {
    pub rho: ComplexMatrix,
    /// index of the first term below the cutoff
    pub terms: usize,
    pub capped: bool,
}

/// Truncated Taylor series of exp(L) applied to rho on Dicke (x) C.
pub fn lindblad_apply(spec: &LindbladSpec, ops: &DickeOperatorSet, rho: &ComplexMatrix) -> Result<LindbladOutput> {
    let h = ops.dim();
    if ops.n != spec.n || !rho.rows().is_multiple_of(h) || !rho.is_square() {
        return Err(Error::Dimension(format!("rho of size {} on Dicke dimension {h}", rho.rows())));
    }
    let dc = rho.rows() / h;
    let ic = ComplexMatrix::identity(dc);
    let mut ham = ComplexMatrix::zeros(h, h);
    for (e, &t) in ops.e().iter().zip(&spec.theta) {
        ham = &ham + &e.scale_re(t);
    }
    let a = ops.adamp(spec.gamma);
    let ada = &a.adjoint() * &a;
    // L(x) = K x + x K^dag + A x A^dag,  K = -iH - ½ A^dag A
    let k = kron(&(&ham.scale(-I) - &ada.scale_re(0.5)), &ic);
    let kd = k.adjoint();
    let a = kron(&a, &ic);
    let ad = a.adjoint();
    let gen = |x: &ComplexMatrix| -> ComplexMatrix { &(&(&k * x) + &(x * &kd)) + &(&(&a * x) * &ad) };

    let mut out = rho.clone();
    let mut term = rho.clone();
    let mut terms = spec.cap;
    let mut capped = true;
    for j in 1..=spec.cap {
        term = gen(&term).scale_re(1.0 / j as f64);
        out = &out + &term;
        if term.norm_fro() < spec.cutoff {
            terms = j;
            capped = false;
            break;
        }
    }
    if capped {
        log::warn!("Lindblad series reached the cap of {} terms", spec.cap);
    }
    Ok(LindbladOutput {
        rho: out,
        terms,
        capped,
    })
}

/// Field sensing with collective damping on the (n+1)-dim symmetric subspace, theta0 = 0.
/// The Choi matrix is one truncated series on |I><I|, not one per matrix unit.
pub fn field_sensing(n: usize, gamma: f64) -> Result<ChannelFamily> {
    let ops = dicke_operators(n)?;
    LindbladSpec::new(n, [0.0; 3], gamma)?;
    let ops2 = ops.clone();
    let ii = ComplexMatrix::projector(&max_entangled(n + 1)).scale_re((n + 1) as f64);
    Ok(ChannelFamily::new(
        format!("field-sensing(n={n},gamma={gamma})"),
        n + 1,
        n + 1,
        vec![0.0; 3],
        move |th, rho| {
            let spec = LindbladSpec::new(n, [th[0], th[1], th[2]], gamma)?;
            Ok(lindblad_apply(&spec, &ops, rho)?.rho)
        },
    )
    .with_choi(move |th| {
        let spec = LindbladSpec::new(n, [th[0], th[1], th[2]], gamma)?;
        Ok(lindblad_apply(&spec, &ops2, &ii)?.rho)
    }))
}

/// sum_k |kk> / sqrt(dim), index a*dim + c.
pub fn max_entangled(dim: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim * dim];
    let s = 1.0 / (dim as f64).sqrt();
    for k in 0..dim {
        v[k * dim + k] = C64::new(s, 0.0);
    }
    v
}

/// Maximally entangled state of two symmetric subspaces, in the Dicke basis.
pub fn sym_max_entangled(n: usize) -> Vec<C64> {
    max_entangled(n + 1)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// (|0..0> + |1..1> + |+..+> + |-..-> + |+i..+i> + |-i..-i>) normalized, in the Dicke basis.
pub fn ghz3d(n: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n + 1];
    v[0] += 1.0;
    v[n] += 1.0;
    let s = 0.5f64.powf(n as f64 / 2.0);
    for ph in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), I, -I] {
        // (|0> + ph |1>)^n / 2^{n/2} has amplitude sqrt(C(n,w)) ph^w on D_w
        for (w, vw) in v.iter_mut().enumerate() {
            *vw += ph.powu(w as u32) * binom(n, w).sqrt() * s;
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / norm).collect()
}
