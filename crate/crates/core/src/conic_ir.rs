//! Conic programs over R (x) H_B (x) H_A and their lowering to real standard form.
//!
//! Every equality is a real functional `Re Tr(A V) = rhs` with `A` Hermitian,
//! stored sparsely as upper-triangle entries per variable.

use crate::error::{Error, Result};
use crate::qmatrix::{kron, partial_trace, unembed_real, BlockSpace, ComplexMatrix, C64};
use qmet_sdp::{Solution, SparseSym, StandardForm};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Which relaxation of the estimator cone is used.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeKind {
    /// block-symmetric, Hermitian blocks
    Nh,
    /// SLD constraints plus PSD partial transpose on R
    Ppt,
    /// row-0 blocks Hermitian
    Sld,
    /// SLD constraints plus Im Tr[Y(|j><i| (x) T)] = 0
    Hn(ComplexMatrix),
    /// extension of R to m copies with equal marginals
    SymExt(usize),
}

impl ConeKind {
    pub fn name(&self) -> String {
        match self {
            ConeKind::Nh => "NH".into(),
            ConeKind::Ppt => "PPT".into(),
            ConeKind::Sld => "SLD".into(),
            ConeKind::Hn(_) => "HN".into(),
            ConeKind::SymExt(m) => format!("SymExt({m})"),
        }
    }
}

/// Symmetric PSD weight matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    d: usize,
    g: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(d: usize, g: Vec<f64>) -> Result<Self> {
        if g.len() != d * d {
            return Err(Error::Dimension(format!("weight matrix needs {} entries, got {}", d * d, g.len())));
        }
        let scale = g.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for i in 0..d {
            for j in 0..d {
                if !g[i * d + j].is_finite() || (g[i * d + j] - g[j * d + i]).abs() > 1e-12 * scale {
                    return Err(Error::WeightNotPsd);
                }
            }
        }
        let w = WeightMatrix { d, g };
        let ev = crate::qmatrix::min_eigenvalue(&w.to_complex());
        if ev < -1e-10 * scale {
            return Err(Error::WeightNotPsd);
        }
        Ok(w)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn identity(d: usize) -> Self {
        let mut g = vec![0.0; d * d];
        for i in 0..d {
            g[i * d + i] = 1.0;
        }
        WeightMatrix { d, g }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.d + j]
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d, self.d, |i, j| C64::new(self.get(i, j), 0.0))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.d).all(|i| (0..self.d).all(|j| self.get(i, j) == if i == j { 1.0 } else { 0.0 }))
    }

    /// G' = 0 (+) G on R
    pub fn padded(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d + 1, self.d + 1, |i, j| {
            if i == 0 || j == 0 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(self.get(i - 1, j - 1), 0.0)
            }
        })
    }
}

/// Real linear functional `Re Tr(sum_v A_v V_v)`, A_v Hermitian, upper triangle kept.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub label: String,
    /// (variable, row, col, A[row][col]) with row <= col, sorted
    pub entries: Vec<(usize, usize, usize, C64)>,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn is_trivial(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dense pairing matrix of variable `var`.
    pub fn coefficient(&self, var: usize, dim: usize) -> ComplexMatrix {
        let mut a = ComplexMatrix::zeros(dim, dim);
        for &(v, p, q, c) in &self.entries {
            if v != var {
                continue;
            }
            a[(p, q)] += c;
            if p != q {
                a[(q, p)] += c.conj();
            }
        }
        a
    }

    pub fn evaluate(&self, vars: &[ComplexMatrix]) -> f64 {
        let mut s = 0.0;
        for &(v, p, q, c) in &self.entries {
            let m = &vars[v];
            if p == q {
                s += c.re * m[(p, p)].re;
            } else {
                s += 2.0 * (c * m[(q, p)]).re;
            }
        }
        s
    }
}

/// Accumulates `Re(w V_pq)` terms into canonical form.
#[derive(Default)]
struct Functional {
    acc: BTreeMap<(usize, usize, usize), C64>,
}

impl Functional {
    fn new() -> Self {
        Self::default()
    }

    /// + Re(w V[var]_{pq})
    fn re(&mut self, var: usize, p: usize, q: usize, w: C64) -> &mut Self {
        if p == q {
            *self.acc.entry((var, p, p)).or_default() += C64::new(w.re, 0.0);
        } else if p < q {
            *self.acc.entry((var, p, q)).or_default() += w.conj() * 0.5;
        } else {
            *self.acc.entry((var, q, p)).or_default() += w * 0.5;
        }
        self
    }

    /// + Im(w V[var]_{pq})
    fn im(&mut self, var: usize, p: usize, q: usize, w: C64) -> &mut Self {
        self.re(var, p, q, w * C64::new(0.0, -1.0))
    }

    fn finish(self, label: String, rhs: f64) -> LinearConstraint {
        let scale = self.acc.values().fold(0.0f64, |m, z| m.max(z.norm()));
        let entries = self
            .acc
            .into_iter()
            .filter(|(_, z)| z.norm() > 1e-15 * scale.max(1e-300))
            .map(|((v, p, q), z)| (v, p, q, z))
            .collect();
        LinearConstraint { label, entries, rhs }
    }
}

/// Emits the Re and Im rows of a complex linear equation `sum w V_pq = rhs`,
/// skipping rows that vanish identically.
fn complex_eq(out: &mut Vec<LinearConstraint>, label: &str, terms: &[(usize, usize, usize, C64)], rhs: C64) {
    let mut re = Functional::new();
    let mut im = Functional::new();
    for &(v, p, q, w) in terms {
        re.re(v, p, q, w);
        im.im(v, p, q, w);
    }
    let r = re.finish(format!("{label}.re"), rhs.re);
    let i = im.finish(format!("{label}.im"), rhs.im);
    for c in [r, i] {
        if !c.is_trivial() || c.rhs != 0.0 {
            out.push(c);
        }
    }
}

/// How Y is obtained from the program variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Recovery {
    /// Y is variable 0
    Direct,
    /// Y = Tr_{R_2..R_m} X, X variable 0 on R^{(x)m} (x) H
    Extension { level: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarSpec {
    pub name: String,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct ConicProgram {
    pub space: BlockSpace,
    pub kind: ConeKind,
    /// objective on the Y space: min Re Tr(objective * Y)
    pub objective: ComplexMatrix,
    pub variables: Vec<VarSpec>,
    /// objective lifted onto the variables
    pub objective_terms: LinearConstraint,
    pub equalities: Vec<LinearConstraint>,
    pub recovery: Recovery,
}

/// kron(G', T)
pub fn build_objective(g: &WeightMatrix, t: &ComplexMatrix, space: &BlockSpace) -> Result<ComplexMatrix> {
    if g.dim() != space.d {
        return Err(Error::Dimension(format!("weight matrix is {0}x{0} but d = {1}", g.dim(), space.d)));
    }
    if t.rows() != space.block_dim() {
        return Err(Error::Dimension(format!("T has size {} but d_B d_A = {}", t.rows(), space.block_dim())));
    }
    let t = t.checked_hermitian()?;
    WeightMatrix::new(g.dim(), g.g.clone())?;
    Ok(kron(&g.padded(), &t))
}

/// Output-marginal conditions on the (0,0) block: off-diagonal B blocks vanish,
/// diagonal B blocks agree, each has unit trace.
pub fn constraints_i_prime(space: &BlockSpace) -> Vec<LinearConstraint> {
    let (db, da) = (space.d_b, space.d_a);
    let ix = |b: usize, a: usize| space.index(0, b, a);
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::new();
    for b in 0..db {
        for bp in b + 1..db {
            for a in 0..da {
                for ap in 0..da {
                    complex_eq(
                        &mut out,
                        &format!("i'.offdiag[b={b},b'={bp},a={a},a'={ap}]"),
                        &[(0, ix(b, a), ix(bp, ap), one)],
                        C64::new(0.0, 0.0),
                    );
                }
            }
        }
    }
    for b in 0..db.saturating_sub(1) {
        for a in 0..da {
            for ap in a..da {
                complex_eq(
                    &mut out,
                    &format!("i'.diag[b={b},a={a},a'={ap}]"),
                    &[(0, ix(b, a), ix(b, ap), one), (0, ix(b + 1, a), ix(b + 1, ap), -one)],
                    C64::new(0.0, 0.0),
                );
            }
        }
    }
    for b in 0..db {
        let mut f = Functional::new();
        for a in 0..da {
            f.re(0, ix(b, a), ix(b, a), one);
        }
        out.push(f.finish(format!("i'.norm[b={b}]"), 1.0));
    }
    out
}

/// Fixed-probe completeness: the (0,0) block equals the identity.
pub fn constraints_identity_block(space: &BlockSpace) -> Vec<LinearConstraint> {
    let h = space.block_dim();
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::new();
    for x in 0..h {
        for y in x..h {
            let rhs = if x == y { one } else { C64::new(0.0, 0.0) };
            complex_eq(&mut out, &format!("c1[{x},{y}]"), &[(0, x, y, one)], rhs);
        }
    }
    out
}

/// Locally unbiased rows: ½ Tr[Y((|0><j'| + |j'><0|) (x) F_j)] = delta.
pub fn constraints_ii(fs: &[ComplexMatrix], space: &BlockSpace) -> Result<Vec<LinearConstraint>> {
    if fs.len() != space.d {
        return Err(Error::Dimension(format!("{} derivatives for d = {}", fs.len(), space.d)));
    }
    let h = space.block_dim();
    let mut out = Vec::new();
    for (j, f) in fs.iter().enumerate() {
        if f.rows() != h || !f.is_square() {
            return Err(Error::Dimension(format!("derivative {j} has size {} (expected {h})", f.rows())));
        }
        let f = f.checked_hermitian()?;
        for jp in 1..=space.d {
            // Tr[Y (|0><j'| (x) F)] = sum_{x,y} Y_{(j',y),(0,x)} F_{x,y}; the other half is its conjugate
            let mut fun = Functional::new();
            for x in 0..h {
                for y in 0..h {
                    let w = f[(x, y)];
                    if w != C64::new(0.0, 0.0) {
                        fun.re(0, jp * h + y, x, w);
                    }
                }
            }
            let rhs = if j + 1 == jp { 1.0 } else { 0.0 };
            out.push(fun.finish(format!("ii[j={},j'={jp}]", j + 1), rhs));
        }
    }
    Ok(out)
}

fn nh_rows(space: &BlockSpace, out: &mut Vec<LinearConstraint>) {
    let h = space.block_dim();
    let one = C64::new(1.0, 0.0);
    for j in 0..=space.d {
        for k in j + 1..=space.d {
            for x in 0..h {
                for y in 0..h {
                    complex_eq(
                        out,
                        &format!("B.sym[j={j},k={k},{x},{y}]"),
                        &[(0, j * h + x, k * h + y, one), (0, k * h + x, j * h + y, -one)],
                        C64::new(0.0, 0.0),
                    );
                }
            }
            herm_block_rows(space, j, k, "B.herm", out);
        }
    }
}

/// (Y_jk)_{xy} = conj((Y_jk)_{yx})
fn herm_block_rows(space: &BlockSpace, j: usize, k: usize, tag: &str, out: &mut Vec<LinearConstraint>) {
    let h = space.block_dim();
    let one = C64::new(1.0, 0.0);
    for x in 0..h {
        for y in x..h {
            let (p1, q1) = (j * h + x, k * h + y);
            let (p2, q2) = (j * h + y, k * h + x);
            let mut re = Functional::new();
            re.re(0, p1, q1, one).re(0, p2, q2, -one);
            let mut im = Functional::new();
            im.im(0, p1, q1, one).im(0, p2, q2, one);
            for c in [
                re.finish(format!("{tag}[j={j},k={k},{x},{y}].re"), 0.0),
                im.finish(format!("{tag}[j={j},k={k},{x},{y}].im"), 0.0),
            ] {
                if !c.is_trivial() {
                    out.push(c);
                }
            }
        }
    }
}

fn sld_rows(space: &BlockSpace, out: &mut Vec<LinearConstraint>) {
    for j in 1..=space.d {
        herm_block_rows(space, j, 0, "B''.herm", out);
    }
}

fn hn_rows(space: &BlockSpace, t: &ComplexMatrix, out: &mut Vec<LinearConstraint>) -> Result<()> {
    let h = space.block_dim();
    if t.rows() != h {
        return Err(Error::Dimension(format!("HN operator has size {} (expected {h})", t.rows())));
    }
    for i in 1..=space.d {
        for j in i + 1..=space.d {
            let mut f = Functional::new();
            for x in 0..h {
                for y in 0..h {
                    let w = t[(y, x)];
                    if w != C64::new(0.0, 0.0) {
                        f.im(0, i * h + x, j * h + y, w);
                    }
                }
            }
            let c = f.finish(format!("HN[i={i},j={j}]"), 0.0);
            if !c.is_trivial() {
                out.push(c);
            }
        }
    }
    Ok(())
}

/// W (variable 1) equals PT_R(Y).
fn ppt_link_rows(space: &BlockSpace, out: &mut Vec<LinearConstraint>) {
    let h = space.block_dim();
    let n = space.dim();
    let one = C64::new(1.0, 0.0);
    for p in 0..n {
        for q in p..n {
            let (j, x) = (p / h, p % h);
            let (k, y) = (q / h, q % h);
            complex_eq(
                out,
                &format!("PT[{p},{q}]"),
                &[(1, p, q, one), (0, k * h + x, j * h + y, -one)],
                C64::new(0.0, 0.0),
            );
        }
    }
}

/// Extra equalities of the cone on the Y level, plus the additional PSD
/// variables (beyond Y itself) they introduce.
pub fn cone_constraints(kind: &ConeKind, space: &BlockSpace) -> Result<(Vec<VarSpec>, Vec<LinearConstraint>)> {
    let mut out = Vec::new();
    let mut extra = Vec::new();
    match kind {
        ConeKind::Nh => nh_rows(space, &mut out),
        ConeKind::Sld => sld_rows(space, &mut out),
        ConeKind::Ppt => {
            sld_rows(space, &mut out);
            extra.push(VarSpec {
                name: "Y_PT".into(),
                dim: space.dim(),
            });
            ppt_link_rows(space, &mut out);
        }
        ConeKind::Hn(t) => {
            sld_rows(space, &mut out);
            hn_rows(space, t, &mut out)?;
        }
        ConeKind::SymExt(m) => {
            if *m < 2 {
                return Err(Error::Unsupported(format!("symmetric extension level {m} (need >= 2)")));
            }
            // Y keeps the block-symmetric structure; the extension rows are added when lifting
            nh_rows(space, &mut out);
        }
    }
    Ok((extra, out))
}

fn ipow(b: usize, e: usize) -> usize {
    (0..e).fold(1, |a, _| a * b)
}

/// Rewrites Y-level rows onto X on R^{(x)m} (x) H via Y = Tr_{R_2..R_m} X.
fn lift(c: &LinearConstraint, r: usize, h: usize, m: usize) -> LinearConstraint {
    let rest = ipow(r, m - 1);
    let map = |p: usize, s: usize| ((p / h) * rest + s) * h + p % h;
    let mut entries = Vec::with_capacity(c.entries.len() * rest);
    for &(v, p, q, z) in &c.entries {
        debug_assert_eq!(v, 0);
        for s in 0..rest {
            entries.push((0, map(p, s), map(q, s), z));
        }
    }
    entries.sort_by_key(|e| (e.0, e.1, e.2));
    LinearConstraint {
        label: c.label.clone(),
        entries,
        rhs: c.rhs,
    }
}

/// Tr_{j^c} X = Tr_{1^c} X for j = 2..m.
fn marginal_rows(r: usize, h: usize, m: usize, out: &mut Vec<LinearConstraint>) {
    let rest = ipow(r, m - 1);
    // X index with R digit `x` inserted at position `pos` among the other digits `t`
    let index = |pos: usize, x: usize, t: usize, hx: usize| {
        let mut digits = Vec::with_capacity(m);
        let mut tt = t;
        let mut others = vec![0; m - 1];
        for k in (0..m - 1).rev() {
            others[k] = tt % r;
            tt /= r;
        }
        let mut it = others.into_iter();
        for k in 0..m {
            digits.push(if k == pos { x } else { it.next().unwrap() });
        }
        digits.iter().fold(0, |a, &dg| a * r + dg) * h + hx
    };
    let n = r * h;
    let one = C64::new(1.0, 0.0);
    for pos in 1..m {
        for p in 0..n {
            for q in p..n {
                let (rp, xp) = (p / h, p % h);
                let (rq, xq) = (q / h, q % h);
                let mut terms = Vec::with_capacity(2 * rest);
                for t in 0..rest {
                    terms.push((0, index(pos, rp, t, xp), index(pos, rq, t, xq), one));
                    terms.push((0, index(0, rp, t, xp), index(0, rq, t, xq), -one));
                }
                complex_eq(out, &format!("marg[{}][{p},{q}]", pos + 1), &terms, C64::new(0.0, 0.0));
            }
        }
    }
}

fn objective_functional(obj: &ComplexMatrix) -> LinearConstraint {
    let mut f = Functional::new();
    let n = obj.rows();
    // Re Tr(C Y) = Re sum_{pq} C_qp Y_pq
    for p in 0..n {
        for q in 0..n {
            let w = obj[(q, p)];
            if w != C64::new(0.0, 0.0) {
                f.re(0, p, q, w);
            }
        }
    }
    f.finish("objective".into(), 0.0)
}

fn finalize(
    space: BlockSpace,
    kind: ConeKind,
    objective: ComplexMatrix,
    mut rows: Vec<LinearConstraint>,
    cap: Option<usize>,
) -> Result<ConicProgram> {
    let (extra, cone_rows) = cone_constraints(&kind, &space)?;
    rows.extend(cone_rows);
    let obj = objective_functional(&objective);
    if let ConeKind::SymExt(m) = kind {
        let r = space.d + 1;
        let h = space.block_dim();
        let dim = ipow(r, m) * h;
        if let Some(cap) = cap {
            if dim > cap {
                return Err(Error::SizeCap { size: dim, cap });
            }
        }
        let mut lifted: Vec<LinearConstraint> = rows.iter().map(|c| lift(c, r, h, m)).collect();
        marginal_rows(r, h, m, &mut lifted);
        return Ok(ConicProgram {
            space,
            kind,
            objective,
            variables: vec![VarSpec {
                name: "X".into(),
                dim,
            }],
            objective_terms: lift(&obj, r, h, m),
            equalities: lifted,
            recovery: Recovery::Extension { level: m },
        });
    }
    let mut variables = vec![VarSpec {
        name: "Y".into(),
        dim: space.dim(),
    }];
    variables.extend(extra);
    Ok(ConicProgram {
        space,
        kind,
        objective,
        variables,
        objective_terms: obj,
        equalities: rows,
        recovery: Recovery::Direct,
    })
}

/// Channel program: objective G' (x) T, rows (i'), (ii), then the cone rows.
pub fn assemble_channel(
    kind: ConeKind,
    g: &WeightMatrix,
    t: &ComplexMatrix,
    fs: &[ComplexMatrix],
    space: BlockSpace,
    cap: Option<usize>,
) -> Result<ConicProgram> {
    let objective = build_objective(g, t, &space)?;
    let mut rows = constraints_i_prime(&space);
    rows.extend(constraints_ii(fs, &space)?);
    finalize(space, kind, objective, rows, cap)
}

/// Fixed-probe program on R (x) H: objective G' (x) rho, X_00 = I, unbiased rows on D_j.
pub fn assemble_state(
    kind: ConeKind,
    g: &WeightMatrix,
    rho: &ComplexMatrix,
    ds: &[ComplexMatrix],
    cap: Option<usize>,
) -> Result<ConicProgram> {
    let space = BlockSpace::new(ds.len(), rho.rows(), 1);
    let objective = build_objective(g, rho, &space)?;
    let mut rows = constraints_identity_block(&space);
    rows.extend(constraints_ii(ds, &space)?);
    finalize(space, kind, objective, rows, cap)
}

impl ConicProgram {
    /// Real standard form: each Hermitian variable V becomes Z = E(V) of twice the size,
    /// and Re Tr(A V) = ½ Tr(E(A) Z).
    pub fn lower(&self) -> StandardForm {
        let dims: Vec<usize> = self.variables.iter().map(|v| 2 * v.dim).collect();
        let mut sf = StandardForm::new(dims);
        let mut obj = SparseSym::new();
        self.emit(&self.objective_terms, &mut obj);
        for e in obj.entries() {
            sf.add_objective(e.block, e.row, e.col, e.value);
        }
        for c in &self.equalities {
            let mut row = SparseSym::new();
            self.emit(c, &mut row);
            sf.push_row(row, c.rhs);
        }
        sf
    }

    fn emit(&self, c: &LinearConstraint, out: &mut SparseSym) {
        for &(v, p, q, z) in &c.entries {
            let n = self.variables[v].dim;
            if p == q {
                out.add(v, p, p, 0.5 * z.re);
                out.add(v, p + n, p + n, 0.5 * z.re);
            } else {
                out.add(v, p, q, 0.5 * z.re);
                out.add(v, p + n, q + n, 0.5 * z.re);
                if z.im != 0.0 {
                    out.add(v, p, q + n, -0.5 * z.im);
                    out.add(v, p + n, q, 0.5 * z.im);
                }
            }
        }
    }

    /// Complex variables from a solver solution.
    pub fn variables_from(&self, sol: &Solution) -> Vec<ComplexMatrix> {
        sol.x.blocks.iter().map(unembed_real).collect()
    }

    /// The Y matrix on R (x) H_B (x) H_A.
    pub fn y_from(&self, vars: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        match self.recovery {
            Recovery::Direct => Ok(vars[0].clone()),
            Recovery::Extension { level } => {
                let r = self.space.d + 1;
                let mut dims = vec![r; level];
                dims.push(self.space.block_dim());
                let traced: Vec<usize> = (1..level).collect();
                partial_trace(&vars[0], &dims, &traced)
            }
        }
    }

    pub fn objective_value(&self, vars: &[ComplexMatrix]) -> f64 {
        self.objective_terms.evaluate(vars)
    }

    pub fn num_rows(&self) -> usize {
        self.equalities.len()
    }

    /// Text dump: every constraint's pairing matrix in dense form.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# cone {} d={} dB={} dA={} rows={}",
            self.kind.name(),
            self.space.d,
            self.space.d_b,
            self.space.d_a,
            self.equalities.len()
        );
        for v in &self.variables {
            let _ = writeln!(s, "# variable {} dim {}", v.name, v.dim);
        }
        let _ = writeln!(s, "objective");
        write_matrix(&mut s, &self.objective);
        for c in &self.equalities {
            let _ = writeln!(s, "constraint {} rhs {}", c.label, c.rhs);
            for (k, v) in self.variables.iter().enumerate() {
                if c.entries.iter().any(|e| e.0 == k) {
                    let _ = writeln!(s, "  on {}", v.name);
                    write_matrix(&mut s, &c.coefficient(k, v.dim));
                }
            }
        }
        s
    }
}

fn write_matrix(s: &mut String, m: &ComplexMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                if z.im == 0.0 {
                    format!("{}", z.re)
                } else {
                    format!("{}{:+}i", z.re, z.im)
                }
            })
            .collect();
        let _ = writeln!(s, "  {}", row.join(" "));
    }
}
