//! Build a conic program by hand, lower it to real standard form and solve it.

use qmet::channels::{depolarizing_qubit, FdScheme};
use qmet::conic_ir::{assemble_channel, ConeKind, WeightMatrix};
use qmet_sdp::{residuals, solve, SolveOptions};

fn main() -> qmet::Result<()> {
    let model = depolarizing_qubit(0.2)?.model(FdScheme::default())?.raw();
    let g = WeightMatrix::identity(1);
    let prog = assemble_channel(ConeKind::Sld, &g, &model.t, &model.f, model.space(), None)?;
    println!("{} complex equality rows", prog.equalities.len());
    let sf = prog.lower();
    println!("standard form: blocks {:?}, {} real rows", sf.blocks, sf.num_rows());
    let sol = solve(&sf, &SolveOptions::default()).expect("well-formed program");
    let res = residuals(&sf, &sol.x, &sol.y, &sol.s);
    println!("{:?} after {} iterations, value {:.10}", sol.status, sol.iterations, prog.objective_value(&prog.variables_from(&sol)));
    println!("residuals: primal {:.1e}, dual {:.1e}, gap {:.1e}", res.primal_residual, res.dual_residual, res.rel_gap);
    // the first rows in dense form
    for line in prog.dump().lines().take(12) {
        println!("{line}");
    }
    Ok(())
}
