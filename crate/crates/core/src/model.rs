//! Channel and state models: a point value plus first derivatives.

use crate::error::{Error, Result};
use crate::qmatrix::{min_eigenvalue, partial_trace, BlockSpace, ComplexMatrix, C64};

/// Choi matrix `T` on H_B (x) H_A (B index major) and its derivatives `F_j`.
#[derive(Clone, Debug)]
pub struct ChannelModel {
    pub t: ComplexMatrix,
    pub f: Vec<ComplexMatrix>,
    pub d_a: usize,
    pub d_b: usize,
    /// T = T_N / d_A scaling already applied
    pub normalized: bool,
}

impl ChannelModel {
    pub fn new(t: ComplexMatrix, f: Vec<ComplexMatrix>, d_a: usize, d_b: usize) -> Result<Self> {
        let h = d_a * d_b;
        if t.rows() != h || !t.is_square() {
            return Err(Error::Dimension(format!("Choi matrix is {}x{} but d_B d_A = {h}", t.rows(), t.cols())));
        }
        if f.is_empty() {
            return Err(Error::InvalidParameter("model needs at least one derivative".into()));
        }
        let t = t.checked_hermitian()?;
        let scale = 1.0 + t.max_abs();
        let tra = partial_trace(&t, &[d_b, d_a], &[0])?;
        let dev = (&tra - &ComplexMatrix::identity(d_a)).max_abs();
        if dev > 1e-8 * scale {
            return Err(Error::InvalidParameter(format!("Tr_B T deviates from I_A by {dev:.3e}")));
        }
        let m = min_eigenvalue(&t);
        if m < -1e-8 * scale {
            return Err(Error::NotCp(m));
        }
        let mut fs = Vec::with_capacity(f.len());
        for (j, fj) in f.into_iter().enumerate() {
            if fj.rows() != h || !fj.is_square() {
                return Err(Error::Dimension(format!("derivative {j} has size {}", fj.rows())));
            }
            let fj = fj.checked_hermitian()?;
            let m = partial_trace(&fj, &[d_b, d_a], &[0])?.max_abs();
            if m > 1e-8 * (1.0 + fj.max_abs()) {
                return Err(Error::InvalidParameter(format!(
                    "derivative {j} has Tr_B F = {m:.3e} (family not trace preserving)"
                )));
            }
            fs.push(fj);
        }
        Ok(ChannelModel {
            t,
            f: fs,
            d_a,
            d_b,
            normalized: false,
        })
    }

    pub fn d(&self) -> usize {
        self.f.len()
    }

    pub fn space(&self) -> BlockSpace {
        BlockSpace::new(self.d(), self.d_b, self.d_a)
    }

    /// T_N = T/d_A, F_N = F/d_A. Idempotent.
    pub fn normalized(&self) -> ChannelModel {
        if self.normalized {
            return self.clone();
        }
        let s = 1.0 / self.d_a as f64;
        ChannelModel {
            t: self.t.scale_re(s),
            f: self.f.iter().map(|f| f.scale_re(s)).collect(),
            d_a: self.d_a,
            d_b: self.d_b,
            normalized: true,
        }
    }

    /// Undo `normalized`.
    pub fn raw(&self) -> ChannelModel {
        if !self.normalized {
            return self.clone();
        }
        let s = self.d_a as f64;
        ChannelModel {
            t: self.t.scale_re(s),
            f: self.f.iter().map(|f| f.scale_re(s)).collect(),
            d_a: self.d_a,
            d_b: self.d_b,
            normalized: false,
        }
    }

    /// Send the A half of a pure probe |psi> on A (x) C through the model.
    /// The result lives on B (x) C.
    pub fn evolve(&self, psi: &[C64], d_c: usize) -> Result<StateModel> {
        let raw = self.raw();
        let rho_in = ComplexMatrix::projector(psi);
        let rho = apply_choi(&raw.t, &rho_in, self.d_a, self.d_b, d_c)?;
        let ds = raw
            .f
            .iter()
            .map(|f| apply_choi(f, &rho_in, self.d_a, self.d_b, d_c))
            .collect::<Result<Vec<_>>>()?;
        StateModel::new(rho, ds)
    }
}

/// (Lambda (x) id)(rho) for rho on A (x) C, given the Choi-type matrix of Lambda.
/// out[(b,c),(b',c')] = sum_{a,a'} T[(b,a),(b',a')] rho[(a,c),(a',c')]
pub fn apply_choi(t: &ComplexMatrix, rho: &ComplexMatrix, d_a: usize, d_b: usize, d_c: usize) -> Result<ComplexMatrix> {
    if t.rows() != d_a * d_b || rho.rows() != d_a * d_c || !rho.is_square() {
        return Err(Error::Dimension(format!(
            "apply_choi: T {} / rho {} vs d_A={d_a} d_B={d_b} d_C={d_c}",
            t.rows(),
            rho.rows()
        )));
    }
    let n = d_b * d_c;
    let mut out = ComplexMatrix::zeros(n, n);
    for b in 0..d_b {
        for bp in 0..d_b {
            for a in 0..d_a {
                for ap in 0..d_a {
                    let w = t[(b * d_a + a, bp * d_a + ap)];
                    if w == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for c in 0..d_c {
                        for cp in 0..d_c {
                            out[(b * d_c + c, bp * d_c + cp)] += w * rho[(a * d_c + c, ap * d_c + cp)];
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A density matrix and its derivatives.
#[derive(Clone, Debug)]
pub struct StateModel {
    pub rho: ComplexMatrix,
    pub d: Vec<ComplexMatrix>,
}

impl StateModel {
    pub fn new(rho: ComplexMatrix, d: Vec<ComplexMatrix>) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::Dimension("rho is not square".into()));
        }
        if d.is_empty() {
            return Err(Error::InvalidParameter("model needs at least one derivative".into()));
        }
        let rho = rho.checked_hermitian()?;
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!("Tr rho = {tr}")));
        }
        let m = min_eigenvalue(&rho);
        if m < -1e-10 {
            return Err(Error::InvalidParameter(format!("rho has eigenvalue {m:.3e}")));
        }
        let mut ds = Vec::with_capacity(d.len());
        for (j, dj) in d.into_iter().enumerate() {
            if dj.rows() != rho.rows() || !dj.is_square() {
                return Err(Error::Dimension(format!("derivative {j} has size {}", dj.rows())));
            }
            let dj = dj.checked_hermitian()?;
            let tr = dj.trace().re;
            if tr.abs() > 1e-8 {
                return Err(Error::InvalidParameter(format!("Tr D_{j} = {tr:.3e}")));
            }
            ds.push(dj);
        }
        Ok(StateModel { rho, d: ds })
    }

    /// Model of exp(-i sum theta^u H_u) rho exp(i ...) at theta = 0: D_u = i[rho, H_u].
    pub fn from_generators(rho: ComplexMatrix, gens: &[ComplexMatrix]) -> Result<Self> {
        let d = gens
            .iter()
            .map(|h| {
                if h.rows() != rho.rows() {
                    return Err(Error::Dimension(format!("generator of size {} for rho of size {}", h.rows(), rho.rows())));
                }
                Ok(rho.commutator(h).scale(C64::new(0.0, 1.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        StateModel::new(rho, d)
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn num_params(&self) -> usize {
        self.d.len()
    }
}
