//! Piecewise-constant direction fields: |λ₂| <= |S v| pointwise, and the
//! shear flow that is degenerate in the e₃ direction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strainflow::diagnostics::{directional_criterion, pointwise_of_velocity};
use strainflow::initial::{shear, taylor_green};
use strainflow::spectral::{directional_strain, DirectionPartition};
use strainflow::sym3::norm3;
use strainflow::verify::random_partition;
use strainflow::{Grid, SolverState};

fn main() -> strainflow::Result<()> {
    let grid = Grid::new(16)?;
    let u = taylor_green(&grid);
    let pw = pointwise_of_velocity(&u);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..5 {
        let part = random_partition(&grid, &mut rng)?;
        let sv = directional_strain(&u, &part)?;
        let worst = (0..grid.len())
            .map(|i| pw.eigen[i].lambda2.abs() - norm3(&sv.at(i)))
            .fold(f64::NEG_INFINITY, f64::max);
        let state = SolverState::new(u.clone(), 0.0);
        println!(
            "partition {k}: {} regions, max(|λ₂| - |Sv|) = {worst:.3e}, ‖Sv‖_2 = {:.6}",
            part.directions().len(),
            directional_criterion(&state, &part, 2.0)?
        );
    }

    let s = shear(&grid);
    let e3 = DirectionPartition::uniform(&grid, [0.0, 0.0, 1.0])?;
    let lam = pointwise_of_velocity(&s).lambda2_plus.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    println!(
        "shear: max λ₂⁺ = {lam:.1e}, ‖S e₃‖_2 = {:.1e}",
        directional_criterion(&SolverState::new(s, 0.0), &e3, 2.0)?
    );
    Ok(())
}
