//! A generalized Pauli channel: the bound at the maximally entangled probe is
//! the classical Cramer-Rao bound of the error distribution.

use qmet::bounds::{channel_bound, maxent_certificate_sld, state_bound, BoundKind, BoundOptions};
use qmet::channels::{generalized_pauli, max_entangled, FdScheme};
use qmet::conic_ir::WeightMatrix;

fn main() -> qmet::Result<()> {
    let d = 3;
    // errors W(0,0), W(1,0), W(0,1), W(1,1) with theta-dependent weights
    let fam = generalized_pauli(d, vec![0.1, 0.15], move |t| {
        let mut p = vec![0.0; d * d];
        p[0] = 1.0 - t[0] - t[1] - 0.05;
        p[d] = t[0];
        p[1] = t[1];
        p[d + 1] = 0.05;
        p
    })?;
    let model = fam.model(FdScheme::default())?;
    let g = WeightMatrix::identity(2);
    let opts = BoundOptions::default();

    // classical Fisher of the multinomial: diag(1/p1 + 1/p0, ...) with a shared p0 term
    let (p0, p1, p2) = (0.7, 0.1, 0.15);
    let f = [[1.0 / p1 + 1.0 / p0, 1.0 / p0], [1.0 / p0, 1.0 / p2 + 1.0 / p0]];
    let det = f[0][0] * f[1][1] - f[0][1] * f[1][0];
    let classical = (f[0][0] + f[1][1]) / det;

    let j4 = channel_bound(BoundKind::Sld, &model, &g, &opts)?;
    let st = model.evolve(&max_entangled(d), d)?;
    let s4 = state_bound(BoundKind::Sld, &st, &g, &opts)?;
    let cert = maxent_certificate_sld(&model, &g, 1e-6)?;
    println!("J4 = {:.8}, Ssym4 = {:.8}, Tr F^-1 = {classical:.8}", j4.value, s4.value);
    println!("maximally entangled probe certified optimal: {}", cert.in_k);
    Ok(())
}
