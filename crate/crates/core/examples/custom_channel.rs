//! Bounds for a user-defined channel family: amplitude damping with a phase rotation.

use qmet::bounds::{channel_bound, BoundKind, BoundOptions};
use qmet::channels::{ChannelFamily, FdScheme};
use qmet::conic_ir::WeightMatrix;
use qmet::qmatrix::{c, ComplexMatrix};

fn main() -> qmet::Result<()> {
    // theta = (phase, damping)
    let fam = ChannelFamily::new("phase+damping", 2, 2, vec![0.3, 0.2], |th, rho| {
        let (phi, g) = (th[0], th[1]);
        let k0 = ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c((1.0 - g).sqrt() * phi.cos(), (1.0 - g).sqrt() * phi.sin())]]);
        let k1 = ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(g.sqrt(), 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        Ok(&(&(&k0 * rho) * &k0.adjoint()) + &(&(&k1 * rho) * &k1.adjoint()))
    });
    let model = fam.model(FdScheme::Central(1e-6))?;
    let g = WeightMatrix::new(2, vec![1.0, 0.0, 0.0, 2.0])?;
    for k in BoundKind::ALL {
        let r = channel_bound(k, &model, &g, &BoundOptions::default())?;
        println!("{} = {:.8} ({} iterations, probe purity {:.4})", k.channel_label(), r.value, r.stats.iterations, r.probe_purity().unwrap());
    }
    Ok(())
}
