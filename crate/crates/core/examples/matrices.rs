//! Partial traces, partial transposes and the real embedding used by the solver.

use qmet::channels::max_entangled;
use qmet::qmatrix::{embed_real, herm_eig, partial_trace, partial_transpose, ComplexMatrix};

fn main() -> qmet::Result<()> {
    let bell = ComplexMatrix::projector(&max_entangled(2));
    let red = partial_trace(&bell, &[2, 2], &[1])?;
    println!("Tr_2 |Phi><Phi| = diag({:.3}, {:.3}), off-diagonal {:.1e}", red[(0, 0)].re, red[(1, 1)].re, red[(0, 1)].norm());
    let pt = partial_transpose(&bell, &[2, 2], &[1])?;
    println!("spectrum of the partial transpose {:.3?}", herm_eig(&pt)?.values);
    let e = embed_real(&bell)?;
    println!("real embedding spectrum {:.3?}", e.eigenvalues());
    Ok(())
}
