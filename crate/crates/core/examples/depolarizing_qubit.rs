//! All four channel bounds for a depolarized qubit rotation, against (2-p)/(8(1-p)^2).

use qmet::bounds::{channel_bound, BoundKind, BoundOptions};
use qmet::channels::{depolarizing_qubit, FdScheme};
use qmet::conic_ir::WeightMatrix;

fn main() -> qmet::Result<()> {
    let g = WeightMatrix::identity(1);
    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}", "p", "J2", "J3", "J4", "J5", "closed form");
    for p in [0.0, 0.2, 0.5, 0.8] {
        let model = depolarizing_qubit(p)?.model(FdScheme::default())?;
        let mut row = format!("{p:>5}");
        for k in BoundKind::ALL {
            let r = channel_bound(k, &model, &g, &BoundOptions::default())?;
            row += &format!(" {:>12.8}", r.value);
        }
        println!("{row} {:>12.8}", (2.0 - p) / (8.0 * (1.0 - p) * (1.0 - p)));
    }
    Ok(())
}
