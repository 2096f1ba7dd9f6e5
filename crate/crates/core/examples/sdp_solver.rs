//! The interior-point solver on its own: smallest eigenvalue as an SDP.

use qmet_sdp::{solve, SolveOptions, SparseSym, StandardForm};

fn main() {
    let c = [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]];
    let mut sf = StandardForm::new(vec![3]);
    let mut trace = SparseSym::new();
    for i in 0..3 {
        for j in 0..=i {
            sf.add_objective(0, i, j, c[i][j]);
        }
        trace.add(0, i, i, 1.0);
    }
    sf.push_row(trace, 1.0);
    let sol = solve(&sf, &SolveOptions::default()).expect("valid program");
    for h in &sol.history {
        println!("{:>3} {:+.10} {:+.10} gap {:.1e}", h.iter, h.primal_objective, h.dual_objective, h.rel_gap);
    }
    println!("min Tr CX = {:.10}, 2 - sqrt(2) = {:.10}", sol.primal_objective, 2.0 - 2f64.sqrt());
}
