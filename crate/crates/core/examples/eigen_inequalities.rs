//! Eigenvalues of random trace-free symmetric matrices and the two
//! pointwise inequalities behind the strain estimates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strainflow::verify::{random_rotation, random_tracefree};
use strainflow::TraceFreeSym3;

fn main() -> strainflow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let m = TraceFreeSym3::new(0.3, -1.2, 0.5, -0.1, 0.8);
    let e = m.eigenvalues()?;
    println!("M = {:?}", m.to_matrix());
    println!("eigenvalues {:.6} {:.6} {:.6}, r = {:?}", e.lambda1, e.lambda2, e.lambda3, e.r);
    println!("tr(M³) = {:.12}, 3 det M = {:.12}", m.tr_cubed(), 3.0 * m.det());

    let mut min_det_gap = f64::INFINITY;
    let mut min_l2_gap = f64::INFINITY;
    for _ in 0..100_000 {
        let m = random_tracefree(&mut rng);
        let s3 = m.norm().powi(3);
        min_det_gap = min_det_gap.min(m.det_bound_gap() / s3);
        min_l2_gap = min_l2_gap.min(m.lambda2_bound_gap() / s3);
    }
    println!("over 1e5 random matrices:");
    println!("  min ((2/9)√6 |M|³ + 4 det M)/|M|³ = {min_det_gap:.3e}");
    println!("  min (½|M|²λ₂⁺ + det M)/|M|³       = {min_l2_gap:.3e}");

    // equality in the determinant bound for rotations of diag(-2, 1, 1)
    let axis = TraceFreeSym3::diag(-2.0, 1.0, 1.0)?;
    let worst = (0..1000)
        .map(|_| {
            let m = axis.rotated(&random_rotation(&mut rng));
            m.det_bound_gap().abs() / m.norm().powi(3)
        })
        .fold(0.0, f64::max);
    println!("equality case, max gap over 1000 rotations: {worst:.2e}");
    Ok(())
}
