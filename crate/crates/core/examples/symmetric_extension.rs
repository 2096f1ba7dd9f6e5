//! Symmetric-extension relaxations of the tight bound, level 2 and 3.

use qmet::bounds::{channel_bound, tight_relaxation, BoundKind, BoundOptions};
use qmet::channels::{su2_depolarizing, FdScheme};
use qmet::conic_ir::WeightMatrix;
use qmet::Error;

fn main() -> qmet::Result<()> {
    let model = su2_depolarizing(0.5, 0.3)?.model(FdScheme::default())?;
    let g = WeightMatrix::identity(3);
    let opts = BoundOptions::default();
    println!("J2      = {:.8}", channel_bound(BoundKind::Nh, &model, &g, &opts)?.value);
    for level in [2, 3] {
        match tight_relaxation(&model, &g, level, &opts) {
            Ok(r) => println!("J1ext:{level} = {:.8} ({} rows)", r.value, r.stats.rows),
            Err(Error::SizeCap { size, cap }) => println!("J1ext:{level} skipped: size {size} over cap {cap}"),
            Err(e) => return Err(e),
        }
    }
    println!("J4      = {:.8}", channel_bound(BoundKind::Sld, &model, &g, &opts)?.value);
    Ok(())
}
