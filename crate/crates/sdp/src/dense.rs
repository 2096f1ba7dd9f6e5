use faer::Mat;

/// Block-diagonal symmetric matrix, one dense block per cone.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMat {
    pub blocks: Vec<Mat<f64>>,
}

impl BlockMat {
    pub fn zeros(dims: &[usize]) -> Self {
        BlockMat {
            blocks: dims.iter().map(|&n| Mat::zeros(n, n)).collect(),
        }
    }

    pub fn identity(dims: &[usize], scale: f64) -> Self {
        BlockMat {
            blocks: dims
                .iter()
                .map(|&n| Mat::from_fn(n, n, |i, j| if i == j { scale } else { 0.0 }))
                .collect(),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn inner(&self, other: &BlockMat) -> f64 {
        let mut s = 0.0;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            for j in 0..a.ncols() {
                for i in 0..a.nrows() {
                    s += a[(i, j)] * b[(i, j)];
                }
            }
        }
        s
    }

    pub fn norm_fro(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// self += alpha * other
    pub fn axpy(&mut self, alpha: f64, other: &BlockMat) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            for j in 0..a.ncols() {
                for i in 0..a.nrows() {
                    a[(i, j)] += alpha * b[(i, j)];
                }
            }
        }
    }

    pub fn scaled(&self, alpha: f64) -> BlockMat {
        BlockMat {
            blocks: self.blocks.iter().map(|b| b * faer::Scale(alpha)).collect(),
        }
    }

    pub fn sub(&self, other: &BlockMat) -> BlockMat {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn symmetrize(&mut self) {
        for a in &mut self.blocks {
            let n = a.nrows();
            for j in 0..n {
                for i in 0..j {
                    let v = 0.5 * (a[(i, j)] + a[(j, i)]);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
        }
    }

    pub fn trace(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (0..b.nrows()).map(|i| b[(i, i)]).sum::<f64>())
            .sum()
    }

    /// Smallest eigenvalue over all blocks (+inf if there are no blocks).
    pub fn min_eigenvalue(&self) -> f64 {
        let mut m = f64::INFINITY;
        for b in &self.blocks {
            if b.nrows() == 0 {
                continue;
            }
            if let Ok(ev) = b.self_adjoint_eigenvalues(faer::Side::Lower) {
                if let Some(&v) = ev.first() {
                    m = m.min(v);
                }
            } else {
                return f64::NAN;
            }
        }
        m
    }
}

/// Lower Cholesky factor, None if not positive definite.
pub(crate) fn chol(a: &Mat<f64>) -> Option<Mat<f64>> {
    let n = a.nrows();
    if n == 0 {
        return Some(Mat::zeros(0, 0));
    }
    let llt = a.llt(faer::Side::Lower).ok()?;
    let l = llt.L().to_owned();
    for i in 0..n {
        if !(l[(i, i)] > 0.0) || !l[(i, i)].is_finite() {
            return None;
        }
    }
    Some(l)
}

pub(crate) fn lower_inverse(l: &Mat<f64>) -> Mat<f64> {
    let n = l.nrows();
    let mut inv = Mat::<f64>::identity(n, n);
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(
        l.as_ref(),
        inv.as_mut(),
        faer::Par::Seq,
    );
    inv
}
