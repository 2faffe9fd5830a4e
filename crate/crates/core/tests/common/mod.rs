#![allow(dead_code)]

use polar_dqw::{PolarGrid, SpinBasis, Spinor, SpinorField, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random polar-basis field built from half-integer angular modes with
/// `|k| <= max_k` and random complex radial profiles.
pub fn random_antiperiodic(grid: PolarGrid, seed: u64, max_k: f64) -> SpinorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n_theta();
    let ks: Vec<f64> = (0..n)
        .map(|s| s as f64 - (n / 2) as f64)
        .filter(|s| (*s as i64).rem_euclid(2) == 1)
        .map(|s| s / 2.0)
        .filter(|k| k.abs() <= max_k)
        .collect();
    let mut field = SpinorField::zeros(grid, SpinBasis::Polar);
    for j in 0..grid.n_r() {
        let coeffs: Vec<(C64, C64)> = ks
            .iter()
            .map(|_| (gauss(&mut rng), gauss(&mut rng)))
            .collect();
        for h in 0..n {
            let th = grid.theta(h);
            let mut s = Spinor::zero();
            for (k, (a, b)) in ks.iter().zip(&coeffs) {
                let e = C64::from_polar(1.0, k * th);
                s.minus += a * e;
                s.plus += b * e;
            }
            field.set(j, h, s);
        }
    }
    field.normalize().unwrap();
    field
}

/// Random field with no angular structure imposed (all modes populated).
pub fn random_field(grid: PolarGrid, seed: u64) -> SpinorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..2 * grid.sites()).map(|_| gauss(&mut rng)).collect();
    let mut f = SpinorField::from_raw(grid, SpinBasis::Polar, data).unwrap();
    f.normalize().unwrap();
    f
}

fn gauss(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
}

/// `a·x + y` computed site by site.
pub fn axpy(a: C64, x: &SpinorField, y: &SpinorField) -> SpinorField {
    let data = x
        .data()
        .iter()
        .zip(y.data())
        .map(|(u, v)| a * u + v)
        .collect();
    SpinorField::from_raw(*x.grid(), x.basis(), data).unwrap()
}

pub fn max_diff(a: &SpinorField, b: &SpinorField) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max)
}
