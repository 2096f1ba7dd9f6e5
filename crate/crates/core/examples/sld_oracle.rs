//! SLD operators of a state model, the analytic SLD bound and the fixed-probe SDPs.

use qmet::bounds::{sld_bound_analytic, sld_operators, sld_pairwise_traces, state_bound, BoundKind, BoundOptions};
use qmet::channels::{dicke_operators, field_sensing, sym_max_entangled};
use qmet::conic_ir::WeightMatrix;
use qmet::model::StateModel;
use qmet::qmatrix::{kron, ComplexMatrix};

fn main() -> qmet::Result<()> {
    let n = 2;
    let gamma = 0.05;
    let fam = field_sensing(n, gamma)?;
    let probe = ComplexMatrix::projector(&sym_max_entangled(n));
    let rho = fam.apply_bipartite(&fam.theta0, &probe, n + 1)?;
    // generators of the rotation acting on the first half
    let ops = dicke_operators(n)?;
    let ic = ComplexMatrix::identity(n + 1);
    let gens: Vec<ComplexMatrix> = ops.e().iter().map(|e| kron(e, &ic)).collect();
    let st = StateModel::from_generators(rho, &gens)?;

    let sld = sld_operators(&st)?;
    println!("SLD Fisher eigenvalues {:?}", sld.j_sld.eigenvalues());
    let g = WeightMatrix::identity(3);
    println!("Tr G J^-1 = {:.8}", sld_bound_analytic(&st, &g)?);
    for k in BoundKind::ALL {
        let r = state_bound(k, &st, &g, &BoundOptions::default())?;
        println!("{} = {:.8}", k.state_label(), r.value);
    }
    let t = sld_pairwise_traces(&st)?;
    let c = (n * (n + 2)) as f64 / 3.0;
    println!(
        "Im(Tr L1 rho L2 - Tr L2 rho L1) = {:.6e}, small-gamma estimate {:.6e}",
        (t[(0, 1)] - t[(1, 0)]).im,
        -2.0 * c * (1.0 + c) * gamma * gamma
    );
    Ok(())
}
