mod common;

use common::{axpy, max_diff, random_antiperiodic, random_field};
use polar_dqw::em::{uniform_b_potential, EmWalk, PotentialFn, PotentialSpec, UniformMagneticSpec};
use polar_dqw::observables::{angular_momentum, even_mode_energy_fraction, Auditor};
use polar_dqw::walk::{step_free, Boundary, FreeWalk, WalkParams};
use polar_dqw::{PolarGrid, SpinBasis, Spinor, SpinorField, C64};
use proptest::prelude::*;
use std::sync::Arc;

fn uniform_b(beta: f64) -> PotentialSpec {
    uniform_b_potential(UniformMagneticSpec { beta }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_step_is_unitary(half in 4usize..24, n_r in 2usize..24, mass in 0.0f64..3.0, seed in any::<u64>()) {
        let grid = PolarGrid::new(2 * half, 1.0, n_r).unwrap();
        let mut f = random_field(grid, seed);
        let walk = FreeWalk::new(grid, &WalkParams::new(mass, Boundary::Periodic).unwrap()).unwrap();
        for _ in 0..5 {
            let before = f.norm();
            walk.step(&mut f).unwrap();
            prop_assert!((f.norm() / before - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn absorbing_boundary_never_gains_norm(half in 4usize..16, n_r in 2usize..12, seed in any::<u64>()) {
        let grid = PolarGrid::new(2 * half, 1.0, n_r).unwrap();
        let mut f = random_field(grid, seed);
        let walk = FreeWalk::new(grid, &WalkParams::new(0.3, Boundary::AbsorbingZero).unwrap()).unwrap();
        for _ in 0..5 {
            let before = f.norm();
            walk.step(&mut f).unwrap();
            prop_assert!(f.norm() <= before * (1.0 + 1e-14));
        }
    }

    #[test]
    fn step_is_linear(half in 4usize..16, n_r in 2usize..12, re in -2.0f64..2.0, im in -2.0f64..2.0, seed in any::<u64>()) {
        let grid = PolarGrid::new(2 * half, 1.0, n_r).unwrap();
        let params = WalkParams::new(0.7, Boundary::Periodic).unwrap();
        let (x, y) = (random_field(grid, seed), random_field(grid, seed ^ 0x5555));
        let a = C64::new(re, im);
        let lhs = step_free(&axpy(a, &x, &y), &params).unwrap();
        let rhs = axpy(a, &step_free(&x, &params).unwrap(), &step_free(&y, &params).unwrap());
        prop_assert!(max_diff(&lhs, &rhs) < 1e-13);
    }

    #[test]
    fn free_step_commutes_with_rotation(half in 4usize..16, n_r in 2usize..10, by in -20isize..20, seed in any::<u64>()) {
        let grid = PolarGrid::new(2 * half, 1.0, n_r).unwrap();
        let params = WalkParams::new(0.4, Boundary::Periodic).unwrap();
        let f = random_field(grid, seed);
        let a = step_free(&f.rotate_theta(by), &params).unwrap();
        let b = step_free(&f, &params).unwrap().rotate_theta(by);
        prop_assert!(max_diff(&a, &b) < 1e-14);
    }

    #[test]
    fn uniform_b_step_commutes_with_rotation(half in 4usize..16, n_r in 2usize..10, by in -20isize..20, seed in any::<u64>()) {
        let grid = PolarGrid::new(2 * half, 1.0, n_r).unwrap();
        let walk = EmWalk::new(grid, &WalkParams::new(1.0, Boundary::Periodic).unwrap(), uniform_b(0.1)).unwrap();
        let f = random_field(grid, seed);
        let mut a = f.rotate_theta(by);
        walk.step(&mut a, 0.3).unwrap();
        let mut b = f;
        walk.step(&mut b, 0.3).unwrap();
        prop_assert!(max_diff(&a, &b.rotate_theta(by)) < 1e-14);
    }

    #[test]
    fn em_step_is_unitary(half in 4usize..16, n_r in 2usize..12, seed in any::<u64>(), amp in -1.0f64..1.0) {
        let grid = PolarGrid::new(2 * half, 1.0, n_r).unwrap();
        let a_t: PotentialFn = Arc::new(move |t, r, th| amp * (th + 0.2 * t).cos() / r);
        let a_r: PotentialFn = Arc::new(move |_, r, th| amp * r.sin() * th.sin());
        let a_th: PotentialFn = Arc::new(move |_, r, _| amp * r);
        let pot = PotentialSpec::from_fns(a_t, a_r, a_th, false).unwrap();
        let walk = EmWalk::new(grid, &WalkParams::new(0.5, Boundary::Periodic).unwrap(), pot).unwrap();
        let mut f = random_field(grid, seed);
        for s in 0..4 {
            let before = f.norm();
            walk.step(&mut f, s as f64 * grid.eps()).unwrap();
            prop_assert!((f.norm() / before - 1.0).abs() < 1e-13);
        }
    }
}

#[test]
fn half_integer_modes_stay_half_integer() {
    let grid = PolarGrid::new(64, 1.0, 40).unwrap();
    let params = WalkParams::new(1.0, Boundary::Periodic).unwrap();
    let mut free = random_antiperiodic(grid, 7, 15.5);
    let walk = FreeWalk::new(grid, &params).unwrap();
    let em = EmWalk::new(grid, &params, uniform_b(0.1)).unwrap();
    let mut coupled = free.clone();
    for s in 0..50 {
        walk.step(&mut free).unwrap();
        em.step(&mut coupled, s as f64 * grid.eps()).unwrap();
    }
    assert!(even_mode_energy_fraction(&free).unwrap() < 1e-12);
    assert!(even_mode_energy_fraction(&coupled).unwrap() < 1e-12);
}

#[test]
fn light_cone_is_two_sites_per_step() {
    let grid = PolarGrid::new(64, 1.0, 40).unwrap();
    let walk = FreeWalk::new(grid, &WalkParams::new(0.8, Boundary::Periodic).unwrap()).unwrap();
    let (j0, h0) = (20usize, 32usize);
    let mut f = SpinorField::zeros(grid, SpinBasis::Polar);
    f.set(j0, h0, Spinor::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)));
    for n in 1..=4 {
        walk.step(&mut f).unwrap();
        for j in 0..grid.n_r() {
            for h in 0..grid.n_theta() {
                let outside = j.abs_diff(j0) > 2 * n || h.abs_diff(h0) > 2 * n;
                if outside {
                    assert!(
                        f.get(j, h).norm_sqr() < 1e-28,
                        "step {n}: leak at ({j}, {h})"
                    );
                }
            }
        }
    }
}

#[test]
fn free_and_uniform_b_conserve_angular_momentum() {
    let grid = PolarGrid::new(64, 1.0, 48).unwrap();
    let params = WalkParams::new(1.0, Boundary::Periodic).unwrap();
    let start = random_antiperiodic(grid, 11, 6.5);
    let free = FreeWalk::new(grid, &params).unwrap();
    let em = EmWalk::new(grid, &params, uniform_b(0.1)).unwrap();
    let mut a = start.clone();
    let mut b = start.clone();
    let (mut audit_a, mut audit_b) = (Auditor::new(64), Auditor::new(64));
    audit_a.record(0, &a).unwrap();
    audit_b.record(0, &b).unwrap();
    for s in 1..=100 {
        free.step(&mut a).unwrap();
        em.step(&mut b, (s - 1) as f64 * grid.eps()).unwrap();
        audit_a.record(s, &a).unwrap();
        audit_b.record(s, &b).unwrap();
    }
    for report in [audit_a.finish(), audit_b.finish()] {
        assert!(report.max_j_drift < 1e-10, "{}", report.max_j_drift);
        assert!(
            report.max_mode_energy_step < 1e-10,
            "{}",
            report.max_mode_energy_step
        );
        assert!(report.max_norm_drift < 1e-12);
    }
}

#[test]
fn theta_dependent_potential_breaks_angular_momentum() {
    let grid = PolarGrid::new(64, 1.0, 48).unwrap();
    let a_t: PotentialFn = Arc::new(|_, _, th| 0.5 * th.cos());
    let zero: PotentialFn = Arc::new(|_, _, _| 0.0);
    let pot = PotentialSpec::from_fns(a_t, zero.clone(), zero, false).unwrap();
    let em = EmWalk::new(
        grid,
        &WalkParams::new(1.0, Boundary::Periodic).unwrap(),
        pot,
    )
    .unwrap();
    let mut f = random_antiperiodic(grid, 3, 6.5);
    let j0 = angular_momentum(&f).unwrap();
    for s in 0..50 {
        em.step(&mut f, s as f64 * grid.eps()).unwrap();
    }
    assert!((angular_momentum(&f).unwrap() - j0).abs() > 1e-3);
}
