//! Strain fields of divergence-free velocities: the constraint residual,
//! recovery of the velocity, and the isometry between the strain,
//! rotation, vorticity and full gradient norms.

use strainflow::initial::random_div_free;
use strainflow::spectral::{
    consistency_residual, isometry_audit, sym_gradient, tracefree_hessian, velocity_from_strain,
};
use strainflow::Grid;

fn main() -> strainflow::Result<()> {
    let grid = Grid::new(24)?;
    let u = random_div_free(&grid, 42, 4, 1.0)?;
    println!("n = {}, div residual {:.2e}", grid.n(), u.divergence_residual());

    let s = sym_gradient(&u);
    println!("constraint residual of ∇_sym u: {:.2e}", consistency_residual(&s));

    let back = velocity_from_strain(&s)?;
    let err = (back.combine(1.0, &u, -1.0).energy() / u.energy()).sqrt();
    println!("velocity recovered from strain, relative error {err:.2e}");

    // a trace-free Hessian is symmetric and trace-free but not a strain
    let h = tracefree_hessian(&grid, u.component(0));
    println!("constraint residual of a trace-free Hessian: {:.3}", consistency_residual(&h));

    for alpha in [0.0, 1.0] {
        let r = isometry_audit(&u, alpha)?;
        println!(
            "alpha = {alpha}: |S|² {:.10e}  |A|² {:.10e}  ½|ω|² {:.10e}  ½|∇u|² {:.10e}  (dev {:.1e})",
            r.strain,
            r.antisym,
            r.half_vorticity,
            r.half_gradient,
            r.max_rel_deviation()
        );
    }
    Ok(())
}
