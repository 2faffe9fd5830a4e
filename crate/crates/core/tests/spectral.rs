mod common;

use common::{max_diff, random_antiperiodic, random_field};
use polar_dqw::field::{
    basis_change_matrix, change_spin_basis, inner_product, l1_distance, sample_field,
    BasisDirection,
};
use polar_dqw::observables::{
    angular_momentum, even_mode_energy_fraction, orbital_spin_decomposition, theta_spectrum,
    ThetaTransform,
};
use polar_dqw::{Execution, PolarGrid, SpinBasis, Spinor, SpinorField, C64};
use proptest::prelude::*;

fn grid(half: usize, n_r: usize) -> PolarGrid {
    PolarGrid::new(2 * half, 1.0, n_r).unwrap()
}

/// Direct site sum, independent of the library's row-partial reduction.
fn l1_brute(a: &SpinorField, b: &SpinorField) -> f64 {
    let g = a.grid();
    let mut total = 0.0;
    for j in 0..g.n_r() {
        for h in 0..g.n_theta() {
            let (x, y) = (a.get(j, h), b.get(j, h));
            total += (x.minus - y.minus).norm() + (x.plus - y.plus).norm();
        }
    }
    total * g.eps() * g.eps()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval(half in 4usize..40, n_r in 1usize..10, seed in any::<u64>()) {
        let f = random_field(grid(half, n_r.max(2)), seed);
        let spec = theta_spectrum(&f).unwrap();
        prop_assert!((spec.total_energy() / f.norm_sqr() - 1.0).abs() < 1e-13);
        let back = ThetaTransform::new(2 * half).inverse(&spec).unwrap();
        prop_assert!(max_diff(&back, &f) < 1e-14);
    }

    #[test]
    fn orbital_plus_spin_matches_polar_j(half in 8usize..32, n_r in 2usize..8, seed in any::<u64>()) {
        let g = grid(half, n_r);
        let f = random_antiperiodic(g, seed, (2 * half) as f64 / 8.0);
        let split = orbital_spin_decomposition(&f).unwrap();
        prop_assert!((split.total() - angular_momentum(&f).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn basis_change_preserves_inner_products(half in 4usize..24, n_r in 2usize..8, s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = grid(half, n_r);
        let (a, b) = (random_field(g, s1), random_field(g, s2));
        let ab = inner_product(&a, &b).unwrap();
        let ca = change_spin_basis(&a, SpinBasis::Cartesian).unwrap();
        let cb = change_spin_basis(&b, SpinBasis::Cartesian).unwrap();
        let cab = inner_product(&ca, &cb).unwrap();
        prop_assert!((ab - cab).norm() <= 1e-12 * ab.norm().max(1e-3));
        let round = change_spin_basis(&ca, SpinBasis::Polar).unwrap();
        prop_assert!(max_diff(&round, &a) < 1e-14);
    }

    #[test]
    fn self_inner_product_is_real_and_positive(half in 4usize..24, n_r in 2usize..8, seed in any::<u64>()) {
        let f = random_field(grid(half, n_r), seed);
        let v = inner_product(&f, &f).unwrap();
        prop_assert!(v.re > 0.0 && v.im.abs() < 1e-15);
    }

    #[test]
    fn l1_matches_brute_force_and_is_a_metric(half in 4usize..24, n_r in 2usize..8, s in any::<u64>()) {
        let g = grid(half, n_r);
        let (a, b, c) = (random_field(g, s), random_field(g, s.wrapping_add(1)), random_field(g, s.wrapping_add(2)));
        let ab = l1_distance(&a, &b).unwrap();
        prop_assert!((ab - l1_brute(&a, &b)).abs() <= 1e-12 * ab);
        prop_assert!(ab <= l1_distance(&a, &c).unwrap() + l1_distance(&c, &b).unwrap() + 1e-15);
        prop_assert_eq!(l1_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn basis_matrix_is_anti_periodic(theta in -20.0f64..20.0) {
        let a = basis_change_matrix(theta + 2.0 * std::f64::consts::PI, BasisDirection::PolarToCartesian);
        let b = basis_change_matrix(theta, BasisDirection::PolarToCartesian).scale(C64::new(-1.0, 0.0));
        prop_assert!(a.max_abs_diff(&b) < 1e-14);
    }
}

#[test]
fn half_integer_polar_mode_becomes_integer_in_cartesian() {
    let g = grid(16, 4);
    let f = sample_field(g, SpinBasis::Polar, |_, th| {
        Spinor::new(
            C64::from_polar(1.0, 0.5 * th),
            C64::from_polar(0.5, -1.5 * th),
        )
    })
    .unwrap();
    assert!(even_mode_energy_fraction(&f).unwrap() < 1e-28);
    let cart = change_spin_basis(&f, SpinBasis::Cartesian).unwrap();
    assert!((even_mode_energy_fraction(&cart).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn single_mode_angular_momentum() {
    let g = grid(32, 3);
    for k in [-7.5, -0.5, 0.5, 5.5] {
        let f = sample_field(g, SpinBasis::Polar, move |r, th| {
            Spinor::new(C64::from_polar(r, k * th), C64::from_polar(1.0, k * th))
        })
        .unwrap();
        assert!((angular_momentum(&f).unwrap() - k).abs() < 1e-12);
    }
}

#[test]
fn reductions_do_not_depend_on_execution() {
    let f = random_antiperiodic(grid(64, 16), 99, 10.5);
    let seq = ThetaTransform::new(128)
        .with_execution(Execution::Sequential)
        .forward(&f)
        .unwrap();
    let par = ThetaTransform::new(128)
        .with_execution(Execution::Parallel)
        .forward(&f)
        .unwrap();
    assert_eq!(seq, par);
    assert_eq!(
        f.norm_sqr_with(Execution::Sequential).to_bits(),
        f.norm_sqr_with(Execution::Parallel).to_bits()
    );
}
