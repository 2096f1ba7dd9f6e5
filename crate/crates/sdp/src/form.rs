use crate::dense::BlockMat;
use faer::Mat;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite data: {0}")]
    NonFinite(String),
}

/// One upper-triangle entry `A[row][col] = A[col][row] = value` (row <= col).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Sparse symmetric block-diagonal matrix, upper triangle only.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseSym {
    entries: Vec<SymEntry>,
}

impl SparseSym {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `v` to both `(i,j)` and `(j,i)` (once if `i == j`).
    pub fn add(&mut self, block: usize, i: usize, j: usize, v: f64) {
        let (row, col) = if i <= j { (i, j) } else { (j, i) };
        self.entries.push(SymEntry {
            block,
            row,
            col,
            value: v,
        });
    }

    /// Sorts, merges duplicates, drops exact zeros.
    pub fn compress(&mut self) {
        self.entries
            .sort_by_key(|a| (a.block, a.row, a.col));
        let mut out: Vec<SymEntry> = Vec::with_capacity(self.entries.len());
        for e in self.entries.drain(..) {
            match out.last_mut() {
                Some(l) if (l.block, l.row, l.col) == (e.block, e.row, e.col) => l.value += e.value,
                _ => out.push(e),
            }
        }
        out.retain(|e| e.value != 0.0);
        self.entries = out;
    }

    pub fn entries(&self) -> &[SymEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `<A, X>` with X symmetric.
    pub fn dot(&self, x: &BlockMat) -> f64 {
        let mut s = 0.0;
        for e in &self.entries {
            let m = &x.blocks[e.block];
            if e.row == e.col {
                s += e.value * m[(e.row, e.col)];
            } else {
                s += e.value * (m[(e.row, e.col)] + m[(e.col, e.row)]);
            }
        }
        s
    }

    /// target += alpha * A
    pub fn add_to(&self, alpha: f64, target: &mut BlockMat) {
        for e in &self.entries {
            let m = &mut target.blocks[e.block];
            m[(e.row, e.col)] += alpha * e.value;
            if e.row != e.col {
                m[(e.col, e.row)] += alpha * e.value;
            }
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for e in &mut self.entries {
            e.value *= alpha;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.value.abs()))
    }
}

/// `min <C,X> s.t. <A_i,X> = b_i, X PSD` over a block-diagonal X.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub blocks: Vec<usize>,
    pub c: BlockMat,
    pub rows: Vec<SparseSym>,
    pub b: Vec<f64>,
}

impl StandardForm {
    pub fn new(blocks: Vec<usize>) -> Self {
        let c = BlockMat::zeros(&blocks);
        StandardForm {
            blocks,
            c,
            rows: Vec::new(),
            b: Vec::new(),
        }
    }

    /// Adds `v` at `(i,j)` and `(j,i)` of the objective.
    pub fn add_objective(&mut self, block: usize, i: usize, j: usize, v: f64) {
        let m = &mut self.c.blocks[block];
        m[(i, j)] += v;
        if i != j {
            m[(j, i)] += v;
        }
    }

    pub fn push_row(&mut self, mut a: SparseSym, b: f64) -> usize {
        a.compress();
        self.rows.push(a);
        self.b.push(b);
        self.rows.len() - 1
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Applies `A^T y` (i.e. sum_i y_i A_i).
    pub fn adjoint(&self, y: &[f64]) -> BlockMat {
        let mut out = BlockMat::zeros(&self.blocks);
        for (a, &yi) in self.rows.iter().zip(y) {
            if yi != 0.0 {
                a.add_to(yi, &mut out);
            }
        }
        out
    }

    pub fn apply(&self, x: &BlockMat) -> Vec<f64> {
        self.rows.iter().map(|a| a.dot(x)).collect()
    }

    pub fn validate(&self) -> Result<(), SdpError> {
        if self.rows.len() != self.b.len() {
            return Err(SdpError::Dimension(format!(
                "{} rows but {} right-hand sides",
                self.rows.len(),
                self.b.len()
            )));
        }
        if self.c.blocks.len() != self.blocks.len() {
            return Err(SdpError::Dimension("objective block count".into()));
        }
        for (k, (m, &n)) in self.c.blocks.iter().zip(&self.blocks).enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(SdpError::Dimension(format!("objective block {k} is not {n}x{n}")));
            }
            if !mat_finite(m) {
                return Err(SdpError::NonFinite(format!("objective block {k}")));
            }
        }
        for (i, r) in self.rows.iter().enumerate() {
            for e in r.entries() {
                if e.block >= self.blocks.len() || e.col >= self.blocks[e.block] {
                    return Err(SdpError::Dimension(format!(
                        "row {i} touches ({}, {}, {}) outside the cone",
                        e.block, e.row, e.col
                    )));
                }
                if !e.value.is_finite() {
                    return Err(SdpError::NonFinite(format!("row {i}")));
                }
            }
            if !self.b[i].is_finite() {
                return Err(SdpError::NonFinite(format!("b[{i}]")));
            }
        }
        Ok(())
    }
}

fn mat_finite(m: &Mat<f64>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].is_finite()))
}
