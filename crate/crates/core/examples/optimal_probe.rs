//! Extract the optimal input state from a channel bound and check it reproduces the value.

use qmet::bounds::{channel_bound, state_bound, BoundKind, BoundOptions};
use qmet::channels::{field_sensing, FdScheme};
use qmet::conic_ir::WeightMatrix;
use qmet::qmatrix::{herm_eig, partial_trace, ComplexMatrix};

fn main() -> qmet::Result<()> {
    let n = 2;
    let model = field_sensing(n, 0.5)?.model(FdScheme::default())?;
    let g = WeightMatrix::identity(3);
    let opts = BoundOptions::default();
    let r = channel_bound(BoundKind::Sld, &model, &g, &opts)?;
    let rho_a = r.rho_a.as_ref().expect("channel bounds carry a probe");
    println!("J4 = {:.8}", r.value);
    println!("probe spectrum {:?}", herm_eig(rho_a)?.values);
    println!("probe purity {:.6}", r.probe_purity().unwrap());

    let psi = r.purification.as_ref().unwrap();
    let back = partial_trace(&ComplexMatrix::projector(psi), &[n + 1, n + 1], &[1])?;
    println!("purification reproduces rho_A to {:.1e}", (&back - rho_a).max_abs());

    let s = state_bound(BoundKind::Sld, &model.evolve(psi, n + 1)?, &g, &opts)?;
    println!("S4 at the extracted probe = {:.8}", s.value);
    if let Some(x) = &r.x {
        println!("estimator matrix X is {}x{}", x.rows(), x.cols());
    }
    Ok(())
}
