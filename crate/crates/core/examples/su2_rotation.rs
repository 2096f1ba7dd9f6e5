//! Three-parameter SU(2) rotation of a spin j with depolarizing noise.

use qmet::bounds::{channel_bound, tight_relaxation, BoundKind, BoundOptions};
use qmet::channels::{su2_depolarizing, FdScheme};
use qmet::conic_ir::WeightMatrix;

fn main() -> qmet::Result<()> {
    let g = WeightMatrix::identity(3);
    let opts = BoundOptions::default();
    for (j, p) in [(0.5, 0.0), (0.5, 0.5), (1.0, 0.0), (1.0, 0.3)] {
        let model = su2_depolarizing(j, p)?.model(FdScheme::default())?;
        let c = (4.0 * j * j + 4.0 * j - 1.0) / ((2.0 * j + 1.0) * (2.0 * j + 1.0));
        let want = 9.0 * (1.0 - c * p) / (8.0 * j * (j + 1.0) * (1.0 - p) * (1.0 - p));
        let j4 = channel_bound(BoundKind::Sld, &model, &g, &opts)?;
        let j2 = channel_bound(BoundKind::Nh, &model, &g, &opts)?;
        println!("j={j} p={p}: J4 = {:.8} (closed form {want:.8}), J2 = {:.8}", j4.value, j2.value);
        if p == 0.0 {
            let ext = tight_relaxation(&model, &g, 2, &opts)?;
            println!("         J1ext:2 = {:.8}", ext.value);
        }
    }
    Ok(())
}
