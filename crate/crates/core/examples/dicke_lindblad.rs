//! Collective operators on the symmetric subspace and the truncated Lindblad exponential.

use qmet::channels::{dicke_operators, lindblad_apply, LindbladSpec};
use qmet::qmatrix::ComplexMatrix;

fn main() -> qmet::Result<()> {
    let n = 3;
    let ops = dicke_operators(n)?;
    let [e1, e2, e3] = ops.e();
    let comm = &e1.commutator(e2) - &e3.scale(qmet::qmatrix::I);
    println!("[E1,E2] - i E3 = {:.1e}", comm.max_abs());
    let a = ops.adamp(1.0);
    let sub: Vec<String> = (0..n).map(|w| format!("{:.4}", a[(w, w + 1)].re)).collect();
    println!("damping matrix at gamma=1 has superdiagonal [{}]", sub.join(", "));

    // all excitations at the top of the ladder, then decay
    let mut rho = ComplexMatrix::zeros(n + 1, n + 1);
    rho[(n, n)] = 1.0.into();
    for gamma in [0.0, 0.3, 1.0] {
        let out = lindblad_apply(&LindbladSpec::new(n, [0.2, 0.0, 0.0], gamma)?, &ops, &rho)?;
        let pops: Vec<String> = (0..=n).map(|w| format!("{:.4}", out.rho[(w, w)].re)).collect();
        println!("gamma={gamma}: populations [{}], {} terms, trace {:.12}", pops.join(", "), out.terms, out.rho.trace().re);
    }
    Ok(())
}
