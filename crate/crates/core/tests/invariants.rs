//! Property tests for invariants that hold for every input.

use proptest::prelude::*;
use strainflow::diagnostics::{analyze, criterion_exponent, lq_norm, AnalysisConfig};
use strainflow::initial::random_div_free;
use strainflow::sym3::mat_mul;
use strainflow::toy_ode::{integrate, rhs_matrix, rhs_reduced, ToyConfig, ToyState};
use strainflow::{Grid, SolverState, TraceFreeSym3};

fn tracefree() -> impl Strategy<Value = TraceFreeSym3> {
    prop::array::uniform5(-10.0f64..10.0).prop_map(TraceFreeSym3::from_entries)
}

proptest! {
    #[test]
    fn toy_rhs_is_minus_deviatoric_square(m in tracefree()) {
        let a = m.to_matrix();
        let sq = mat_mul(&a, &a);
        let tr = sq[0][0] + sq[1][1] + sq[2][2];
        let rhs = rhs_matrix(&m).to_matrix();
        let scale = m.norm_sq().max(1e-300);
        for i in 0..3 {
            for j in 0..3 {
                let expect = -(sq[i][j] - if i == j { tr / 3.0 } else { 0.0 });
                prop_assert!((rhs[i][j] - expect).abs() <= 1e-13 * scale);
            }
        }
        prop_assert!((rhs[0][0] + rhs[1][1] + rhs[2][2]).abs() <= 1e-13 * scale);
    }

    #[test]
    fn reduced_ratio_never_decreases(l3 in 0.05f64..10.0, r in 0.5f64..2.0) {
        let (_, dr) = rhs_reduced(l3, r).unwrap();
        prop_assert!(dr >= -1e-15);
        let cfg = ToyConfig { t_end: 0.05, ..ToyConfig::default() };
        let traj = integrate(ToyState::reduced(l3, r).unwrap(), &cfg).unwrap();
        for w in traj.points.windows(2) {
            prop_assert!(w[1].state.ratio().unwrap() >= w[0].state.ratio().unwrap() - 1e-12);
        }
    }

    #[test]
    fn matrix_flow_keeps_ratio_in_range(m in tracefree()) {
        prop_assume!(m.norm() > 1e-3);
        let cfg = ToyConfig { t_end: 0.2 / m.norm(), ..ToyConfig::default() };
        let traj = integrate(ToyState::Matrix(m), &cfg).unwrap();
        for p in &traj.points {
            let r = p.state.ratio().unwrap();
            prop_assert!((0.5 - 1e-9..=2.0 + 1e-9).contains(&r));
        }
    }

    #[test]
    fn criterion_exponents_lie_on_the_scaling_line(q in 1.51f64..1e6) {
        let p = criterion_exponent(q).unwrap();
        prop_assert!((2.0 / p + 3.0 / q - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lq_norm_is_homogeneous(c in 0.01f64..100.0, q in 1.6f64..12.0, seed in 0u64..1000) {
        let grid = Grid::new(8).unwrap();
        let v: Vec<f64> = (0..grid.len()).map(|i| (((i as u64).wrapping_mul(2654435761) ^ seed) % 97) as f64 / 97.0).collect();
        let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
        let a = lq_norm(&v, &grid, q).unwrap();
        let b = lq_norm(&scaled, &grid, q).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-12 * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn field_norm_and_cubic_identities(seed in any::<u64>(), kmax in 1usize..=2, amp in 0.1f64..10.0) {
        let grid = Grid::new(8).unwrap();
        let u = random_div_free(&grid, seed, kmax, amp).unwrap();
        let rec = analyze(&SolverState::new(u, 0.0), None, &AnalysisConfig::default());
        let e = rec.enstrophy;
        prop_assert!((0.5 * rec.vorticity_norm_sq - e).abs() <= 1e-12 * e);
        prop_assert!((0.5 * rec.grad_norm_sq - e).abs() <= 1e-12 * e);
        prop_assert!((rec.tr3_integral - 3.0 * rec.det_integral).abs() <= 1e-12 * rec.strain_cubed_integral);
        prop_assert!(rec.vs_ident_resid < 1e-10);
        prop_assert!(rec.lam2p_l2 <= rec.lam2p_linf * grid.volume().sqrt() * (1.0 + 1e-12));
    }
}
