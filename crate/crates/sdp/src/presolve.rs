//! Removal of linearly dependent equality rows.
//!
//! Rows live in svec coordinates (one coordinate per upper-triangle entry).
//! Sparse Gaussian elimination, partial pivoting by magnitude; the row
//! order is fixed (by nnz, then index) so the result is deterministic.

use crate::form::StandardForm;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

#[derive(Clone, Debug, PartialEq)]
pub struct Presolved {
    /// Independent rows, ascending original index.
    pub kept: Vec<usize>,
    /// Rows implied by kept rows (consistent right-hand side).
    pub dropped: Vec<usize>,
    /// First row found to contradict the others, if any.
    pub inconsistent: Option<usize>,
}

fn coord(block: usize, row: usize, col: usize) -> u64 {
    ((block as u64) << 42) | ((row as u64) << 21) | col as u64
}

struct Pivot {
    coord: u64,
    value: f64,
    row: Vec<(u64, f64)>,
    rhs: f64,
}

pub fn presolve(sf: &StandardForm, tol: f64) -> Presolved {
    let m = sf.rows.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (sf.rows[i].nnz(), i));

    let mut pivots: Vec<Pivot> = Vec::new();
    let mut pivot_of: HashMap<u64, usize> = HashMap::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut inconsistent = None;

    for &i in &order {
        let mut v: HashMap<u64, f64> = HashMap::new();
        for e in sf.rows[i].entries() {
            let w = if e.row == e.col { e.value } else { 2.0 * e.value };
            *v.entry(coord(e.block, e.row, e.col)).or_insert(0.0) += w;
        }
        let scale = v.values().fold(0.0f64, |a, x| a.max(x.abs()));
        let mut rhs = sf.b[i];
        let rhs_scale = 1.0 + sf.b[i].abs();

        let mut heap = BinaryHeap::new();
        let mut queued = HashSet::new();
        for c in v.keys() {
            if let Some(&k) = pivot_of.get(c) {
                if queued.insert(k) {
                    heap.push(Reverse(k));
                }
            }
        }
        while let Some(Reverse(k)) = heap.pop() {
            let p = &pivots[k];
            let val = match v.remove(&p.coord) {
                Some(x) if x != 0.0 => x,
                _ => continue,
            };
            let f = val / p.value;
            for &(c, w) in &p.row {
                if c == p.coord {
                    continue;
                }
                let e = v.entry(c).or_insert(0.0);
                *e -= f * w;
                if let Some(&kk) = pivot_of.get(&c) {
                    if kk > k && queued.insert(kk) {
                        heap.push(Reverse(kk));
                    }
                }
            }
            rhs -= f * p.rhs;
        }

        let cutoff = tol * scale.max(1e-300);
        let mut best: Option<(u64, f64)> = None;
        let mut row: Vec<(u64, f64)> = Vec::new();
        for (&c, &w) in &v {
            if w.abs() > cutoff {
                row.push((c, w));
                if best.is_none_or(|(bc, bw)| w.abs() > bw.abs() || (w.abs() == bw.abs() && c < bc)) {
                    best = Some((c, w));
                }
            }
        }
        match best {
            None => {
                if rhs.abs() > tol.sqrt() * rhs_scale.max(scale) {
                    if inconsistent.is_none() {
                        inconsistent = Some(i);
                    }
                } else {
                    dropped.push(i);
                }
            }
            Some((c, w)) => {
                row.sort_by_key(|&(c, _)| c);
                pivot_of.insert(c, pivots.len());
                pivots.push(Pivot {
                    coord: c,
                    value: w,
                    row,
                    rhs,
                });
                kept.push(i);
            }
        }
    }
    kept.sort_unstable();
    dropped.sort_unstable();
    Presolved {
        kept,
        dropped,
        inconsistent,
    }
}
