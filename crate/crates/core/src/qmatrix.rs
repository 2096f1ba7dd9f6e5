//! Dense complex matrices and the block layout on R (x) H_B (x) H_A.

use crate::error::{Error, Result};
use faer::{Mat, Side};
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Rows given as slices of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let cl = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, cl, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let cl = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, cl, |i, j| rows[i][j])
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Column vector.
    pub fn column(v: &[C64]) -> Self {
        ComplexMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// |v><v|
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    /// |a><b| on an n-dimensional space
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(a, b)] = C64::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn norm_op(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let g = &self.adjoint() * self;
        let m = to_faer(&g.hermitize());
        match m.self_adjoint_eigenvalues(Side::Lower) {
            Ok(ev) => ev.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
            Err(_) => f64::NAN,
        }
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_mul(&self, other: &ComplexMatrix) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                s += self[(i, k)] * other[(k, i)];
            }
        }
        s
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// max |M - M^dag| <= tol * (1 + max |M|)
    pub fn is_hermitian_tol(&self, tol: f64) -> bool {
        self.is_square() && self.max_hermitian_defect() <= tol * (1.0 + self.max_abs())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_hermitian_tol(1e-12)
    }

    /// (M + M^dag)/2
    pub fn hermitize(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)].conj()))
    }

    /// Hermiticity check followed by symmetrization.
    pub fn checked_hermitian(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", self.rows, self.cols)));
        }
        if !self.is_hermitian() {
            return Err(Error::NotHermitian(self.max_hermitian_defect()));
        }
        Ok(self.hermitize())
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        kron(self, other)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &ComplexMatrix) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self[(r0 + i, c0 + j)] = m[(i, j)];
            }
        }
    }

    pub fn column_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, o: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "add: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, o: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "sub: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, o: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, o.rows, "mul: shape mismatch");
        let (n, m, p) = (self.rows, self.cols, o.cols);
        if n * m * p > 64 * 64 * 64 {
            return from_faer(&(to_faer(self) * to_faer(o)));
        }
        let mut out = ComplexMatrix::zeros(n, p);
        for i in 0..n {
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &o.data[k * p..(k + 1) * p];
                let dst = &mut out.data[i * p..(i + 1) * p];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

pub(crate) fn to_faer(m: &ComplexMatrix) -> Mat<C64> {
    Mat::from_fn(m.rows, m.cols, |i, j| m[(i, j)])
}

pub(crate) fn from_faer(m: &Mat<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_all(ms: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for m in ms {
        out = kron(&out, m);
    }
    out
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Partial trace over the factors listed in `traced` (0-based, first factor most significant).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], traced: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows != total {
        return Err(Error::Dimension(format!(
            "partial_trace: matrix {}x{} vs factor dims {:?}",
            m.rows, m.cols, dims
        )));
    }
    if let Some(&t) = traced.iter().find(|&&t| t >= dims.len()) {
        return Err(Error::IndexOutOfRange(format!("traced factor {t} of {}", dims.len())));
    }
    let keep: Vec<usize> = (0..dims.len()).filter(|k| !traced.contains(k)).collect();
    let tr: Vec<usize> = (0..dims.len()).filter(|k| traced.contains(k)).collect();
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let td: Vec<usize> = tr.iter().map(|&k| dims[k]).collect();
    let nk: usize = kd.iter().product();
    let nt: usize = td.iter().product();
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let offset = |idx: usize, which: &[usize], ds: &[usize]| -> usize {
        let mut r = idx;
        let mut off = 0;
        for (p, &k) in which.iter().enumerate().rev() {
            let v = r % ds[p];
            r /= ds[p];
            off += v * strides[k];
        }
        off
    };
    let keep_off: Vec<usize> = (0..nk).map(|i| offset(i, &keep, &kd)).collect();
    let tr_off: Vec<usize> = (0..nt).map(|i| offset(i, &tr, &td)).collect();
    let mut out = ComplexMatrix::zeros(nk, nk);
    for i in 0..nk {
        for j in 0..nk {
            let mut s = C64::new(0.0, 0.0);
            for &t in &tr_off {
                s += m[(keep_off[i] + t, keep_off[j] + t)];
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// Transpose on the listed factors only.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], factors: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows != total {
        return Err(Error::Dimension("partial_transpose: size vs dims".into()));
    }
    let split = |mut x: usize| {
        let mut v = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            v[k] = x % dims[k];
            x /= dims[k];
        }
        v
    };
    let join = |v: &[usize]| v.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x);
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        let vi = split(i);
        for j in 0..total {
            let vj = split(j);
            let (mut a, mut b) = (vi.clone(), vj.clone());
            for &f in factors {
                a[f] = vj[f];
                b[f] = vi[f];
            }
            out[(join(&a), join(&b))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Layout of R (x) H_B (x) H_A with dim R = d + 1; index (j, b, a) -> j*dB*dA + b*dA + a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockSpace {
    pub d: usize,
    pub d_b: usize,
    pub d_a: usize,
}

impl BlockSpace {
    pub fn new(d: usize, d_b: usize, d_a: usize) -> Self {
        BlockSpace { d, d_b, d_a }
    }

    /// Size of one (j,k) block.
    pub fn block_dim(&self) -> usize {
        self.d_b * self.d_a
    }

    pub fn dim(&self) -> usize {
        (self.d + 1) * self.block_dim()
    }

    pub fn index(&self, j: usize, b: usize, a: usize) -> usize {
        j * self.block_dim() + b * self.d_a + a
    }

    fn check(&self, y: &ComplexMatrix) -> Result<()> {
        if !y.is_square() || y.rows != self.dim() {
            return Err(Error::Dimension(format!(
                "matrix {}x{} does not live on a space of dimension {}",
                y.rows,
                y.cols,
                self.dim()
            )));
        }
        Ok(())
    }
}

/// The (j,k) block of y.
pub fn block(y: &ComplexMatrix, space: &BlockSpace, j: usize, k: usize) -> Result<ComplexMatrix> {
    space.check(y)?;
    if j > space.d || k > space.d {
        return Err(Error::IndexOutOfRange(format!("block ({j},{k}) with d = {}", space.d)));
    }
    let n = space.block_dim();
    Ok(y.submatrix(j * n, k * n, n, n))
}

/// Block (j,k) of the output is block (k,j) of the input.
pub fn partial_transpose_r(y: &ComplexMatrix, space: &BlockSpace) -> Result<ComplexMatrix> {
    space.check(y)?;
    let n = space.block_dim();
    let mut out = ComplexMatrix::zeros(y.rows, y.cols);
    for j in 0..=space.d {
        for k in 0..=space.d {
            out.set_submatrix(j * n, k * n, &y.submatrix(k * n, j * n, n, n));
        }
    }
    Ok(out)
}

/// Real symmetric matrix (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct RealSymmetricMatrix {
    pub size: usize,
    pub data: Vec<f64>,
}

impl RealSymmetricMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = Mat::from_fn(self.size, self.size, |i, j| self.get(i, j));
        let mut v: Vec<f64> = m
            .self_adjoint_eigenvalues(Side::Lower)
            .map(|e| e.to_vec())
            .unwrap_or_default();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn trace_mul(&self, o: &RealSymmetricMatrix) -> f64 {
        let n = self.size;
        let mut s = 0.0;
        for i in 0..n {
            for k in 0..n {
                s += self.data[i * n + k] * o.data[k * n + i];
            }
        }
        s
    }
}

/// [[Re h, -Im h], [Im h, Re h]]
pub fn embed_real(h: &ComplexMatrix) -> Result<RealSymmetricMatrix> {
    let h = h.checked_hermitian()?;
    let n = h.rows;
    let mut data = vec![0.0; 4 * n * n];
    let m = 2 * n;
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            data[i * m + j] = z.re;
            data[(i + n) * m + j + n] = z.re;
            data[i * m + j + n] = -z.im;
            data[(i + n) * m + j] = z.im;
        }
    }
    Ok(RealSymmetricMatrix { size: m, data })
}

/// Inverse of `embed_real` on matrices of the embedded form (averages the redundant copies).
pub fn unembed_real(z: &Mat<f64>) -> ComplexMatrix {
    let n = z.nrows() / 2;
    ComplexMatrix::from_fn(n, n, |i, j| {
        let re = 0.5 * (z[(i, j)] + z[(i + n, j + n)]);
        let im = 0.5 * (z[(i + n, j)] - z[(i, j + n)]);
        C64::new(re, im)
    })
}

/// Eigenvalues (descending) and orthonormal eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column_vec(k)
    }
}

/// Hermitian eigendecomposition. Each eigenvector's phase is fixed so that
/// its first component with modulus above 1e-10 is real positive.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEig> {
    let h = h.checked_hermitian()?;
    herm_eig_unchecked(&h)
}

pub(crate) fn herm_eig_unchecked(h: &ComplexMatrix) -> Result<HermEig> {
    let n = h.rows;
    if n == 0 {
        return Ok(HermEig {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let e = to_faer(h)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Dimension("eigendecomposition did not converge".into()))?;
    let s: Vec<f64> = e.S().column_vector().iter().map(|z| z.re).collect();
    let u = e.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        values.push(s[k]);
        let mut phase = C64::new(1.0, 0.0);
        for i in 0..n {
            let z = u[(i, k)];
            if z.norm() > 1e-10 {
                phase = z.conj() / z.norm();
                break;
            }
        }
        for i in 0..n {
            vectors[(i, col)] = u[(i, k)] * phase;
        }
    }
    Ok(HermEig { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix (after symmetrization).
pub fn min_eigenvalue(h: &ComplexMatrix) -> f64 {
    let e = to_faer(&h.hermitize()).self_adjoint_eigenvalues(Side::Lower);
    match e {
        Ok(v) => v.first().copied().unwrap_or(f64::INFINITY),
        Err(_) => f64::NAN,
    }
}

/// f(h) for Hermitian h via the spectral decomposition.
pub fn herm_fn(h: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    let e = herm_eig(h)?;
    let n = h.rows;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let fk = f(e.values[k]);
        for i in 0..n {
            let vi = e.vectors[(i, k)] * fk;
            for j in 0..n {
                out[(i, j)] += vi * e.vectors[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

/// exp(i t h) for Hermitian h.
pub fn expi(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    herm_fn(h, |x| C64::new(0.0, t * x).exp())
}

/// Trace distance ½‖a − b‖₁ between Hermitian matrices.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = (a - b).hermitize();
    match herm_eig_unchecked(&d) {
        Ok(e) => 0.5 * e.values.iter().map(|v| v.abs()).sum::<f64>(),
        Err(_) => f64::NAN,
    }
}

/// Standard Pauli matrices.
pub fn pauli() -> [ComplexMatrix; 3] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    [
        ComplexMatrix::from_rows(&[&[z, o], &[o, z]]),
        ComplexMatrix::from_rows(&[&[z, -I], &[I, z]]),
        ComplexMatrix::from_rows(&[&[o, z], &[z, -o]]),
    ]
}
