//! Field sensing with collective damping: channel bounds against two fixed probes
//! over a damping sweep.

use qmet::bounds::{channel_bound, state_bound, BoundKind, BoundOptions};
use qmet::channels::{field_sensing, ghz3d, sym_max_entangled, FdScheme};
use qmet::conic_ir::WeightMatrix;

fn main() -> qmet::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2usize);
    let g = WeightMatrix::identity(3);
    let opts = BoundOptions::default();
    println!("n = {n}, noiseless value 9/(n(n+2)) = {:.6}", 9.0 / (n * (n + 2)) as f64);
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "gamma", "J2", "J4", "Ssym4", "S3d4");
    for gamma in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let model = field_sensing(n, gamma)?.model(FdScheme::default())?;
        let j2 = channel_bound(BoundKind::Nh, &model, &g, &opts)?.value;
        let j4 = channel_bound(BoundKind::Sld, &model, &g, &opts)?.value;
        let sym = state_bound(BoundKind::Sld, &model.evolve(&sym_max_entangled(n), n + 1)?, &g, &opts)?.value;
        let ghz = state_bound(BoundKind::Sld, &model.evolve(&ghz3d(n), 1)?, &g, &opts)?.value;
        println!("{gamma:>6} {j2:>10.6} {j4:>10.6} {sym:>10.6} {ghz:>10.6}");
    }
    Ok(())
}
