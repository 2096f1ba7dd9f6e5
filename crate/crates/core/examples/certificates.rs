//! Is the maximally entangled input optimal? The SLD and Holevo-Nagaoka certificates.

use qmet::bounds::{maxent_certificate_hn, maxent_certificate_sld, BoundOptions};
use qmet::channels::{depolarizing_qubit, field_sensing, su2_depolarizing, FdScheme};
use qmet::conic_ir::WeightMatrix;

fn main() -> qmet::Result<()> {
    let cases = [
        ("depolarizing p=0.5", depolarizing_qubit(0.5)?),
        ("su2 j=1 p=0.3", su2_depolarizing(1.0, 0.3)?),
        ("field sensing n=2 gamma=0", field_sensing(2, 0.0)?),
        ("field sensing n=2 gamma=0.5", field_sensing(2, 0.5)?),
    ];
    let opts = BoundOptions::default();
    for (name, fam) in cases {
        let model = fam.model(FdScheme::default())?;
        let g = WeightMatrix::identity(model.d());
        let sld = maxent_certificate_sld(&model, &g, 1e-6)?;
        let hn = maxent_certificate_hn(&model, &g, 1e-6, &opts)?;
        println!(
            "{name:<28} SLD: in K {:<5} (deviation {:.2e})  HN: in K {:<5} (deviation {:.2e}{})",
            sld.in_k,
            sld.deviation,
            hn.in_k,
            hn.deviation,
            if hn.degenerate { ", optimizer not unique" } else { "" }
        );
    }
    Ok(())
}
