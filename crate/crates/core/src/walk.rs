//! The free polar Dirac quantum walk.
//!
//! One step applies, right to left,
//!
//! ```text
//! V = Π⁻¹ [W₁(α¹²) W₂(α²²)] Π [W₂(α²¹) W₁(α¹¹)] Q(mε)
//! W_i(α) = R⁻¹(α) U(α) S_i U(α) S_i R(α)
//! ```
//!
//! where `S₁` shifts along `r` and `S₂` along `θ`. For the polar grid the
//! angles are `α¹¹ = 0`, `α¹² = α²¹ = π/2` and `α²² = arccos(1/r)`, which
//! reproduce the polar n-bein `diag(1, 1, 1/r)`. One step advances physical
//! time by `2ε`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::exec::{self, Execution};
use crate::field::{PolarGrid, SpinBasis, SpinorField};
use crate::unitary::Unitary2;
use crate::{Error, Result, C64};

/// `U(α) = [[−cos α, i sin α], [−i sin α, cos α]]`.
pub fn coin_u(alpha: f64) -> Unitary2 {
    let (s, c) = alpha.sin_cos();
    Unitary2::new(
        C64::new(-c, 0.0),
        C64::new(0.0, s),
        C64::new(0.0, -s),
        C64::new(c, 0.0),
    )
}

/// `R(α) = [[i cos(α/2), i sin(α/2)], [−sin(α/2), cos(α/2)]]`.
pub fn rot_r(alpha: f64) -> Unitary2 {
    let (s, c) = (0.5 * alpha).sin_cos();
    Unitary2::new(
        C64::new(0.0, c),
        C64::new(0.0, s),
        C64::new(-s, 0.0),
        C64::new(c, 0.0),
    )
}

/// `Q(M) = exp(−2iMσ₁)`.
pub fn mass_q(m: f64) -> Unitary2 {
    let (s, c) = (2.0 * m).sin_cos();
    Unitary2::new(
        C64::new(c, 0.0),
        C64::new(0.0, -s),
        C64::new(0.0, -s),
        C64::new(c, 0.0),
    )
}

/// `Π = (1/√2) [[−i, 1], [−1, i]]`.
pub fn mixer_pi() -> Unitary2 {
    let h = FRAC_1_SQRT_2;
    Unitary2::new(
        C64::new(0.0, -h),
        C64::new(h, 0.0),
        C64::new(-h, 0.0),
        C64::new(0.0, h),
    )
}

/// Shift direction: `Radial` is `S₁`, `Angular` is `S₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Radial,
    Angular,
}

/// Treatment of the two radial edges. The angular direction always wraps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Boundary {
    /// `r_max` neighbours `r_min`; the step is exactly unitary.
    #[default]
    Periodic,
    /// Amplitude leaving the window is dropped and zero is shifted in.
    AbsorbingZero,
}

/// The four walk angles. `a22` is radius dependent.
#[derive(Clone, Copy, Debug)]
pub struct WalkAngles {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: fn(f64) -> Result<f64>,
}

impl WalkAngles {
    /// Angles matching the flat polar n-bein.
    pub fn polar() -> Self {
        WalkAngles {
            a11: 0.0,
            a12: FRAC_PI_2,
            a21: FRAC_PI_2,
            a22: polar_a22,
        }
    }
}

impl Default for WalkAngles {
    fn default() -> Self {
        Self::polar()
    }
}

fn polar_a22(r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::Domain(format!("arccos(1/r) needs r >= 1, got {r}")));
    }
    Ok((1.0 / r).acos())
}

/// `(α¹¹, α¹², α²¹, α²²)` at radius `r`.
pub fn angles_for_radius(r: f64) -> Result<(f64, f64, f64, f64)> {
    let a = WalkAngles::polar();
    Ok((a.a11, a.a12, a.a21, (a.a22)(r)?))
}

/// Mass, radial boundary and angles of the walk. The grid comes from the field.
#[derive(Clone, Copy, Debug)]
pub struct WalkParams {
    pub mass: f64,
    pub boundary: Boundary,
    pub angles: WalkAngles,
}

impl WalkParams {
    pub fn new(mass: f64, boundary: Boundary) -> Result<Self> {
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(Error::Domain(format!(
                "mass must be finite and >= 0, got {mass}"
            )));
        }
        Ok(WalkParams {
            mass,
            boundary,
            angles: WalkAngles::polar(),
        })
    }
}

/// Shift `field` one site along `axis`: `φ⁻` is pulled from index `+1` and
/// `φ⁺` from index `−1`.
pub fn shift(field: &SpinorField, axis: Axis, boundary: Boundary) -> SpinorField {
    let mut out = field.clone();
    shift_in_place(&mut out, axis, boundary, Execution::default());
    out
}

pub(crate) fn shift_in_place(
    field: &mut SpinorField,
    axis: Axis,
    boundary: Boundary,
    exec: Execution,
) {
    let grid = *field.grid();
    let n_t = grid.n_theta();
    let (minus, plus) = field.components_mut();
    match axis {
        Axis::Angular => exec::for_each_row_pair(exec, minus, plus, n_t, |_, m, p| {
            m.rotate_left(1);
            p.rotate_right(1);
        }),
        Axis::Radial => {
            minus.rotate_left(n_t);
            plus.rotate_right(n_t);
            if boundary == Boundary::AbsorbingZero {
                let len = minus.len();
                minus[len - n_t..].fill(C64::new(0.0, 0.0));
                plus[..n_t].fill(C64::new(0.0, 0.0));
            }
        }
    }
}

/// Site-local matrices for one pointwise stage.
enum Coins {
    Uniform(Unitary2),
    PerRow(Vec<Unitary2>),
    PerSite(Vec<Unitary2>),
}

impl Coins {
    fn apply(&self, field: &mut SpinorField, exec: Execution) {
        let n_t = field.grid().n_theta();
        let (minus, plus) = field.components_mut();
        match self {
            Coins::Uniform(u) => {
                exec::for_each_row_pair(exec, minus, plus, n_t, |_, m, p| apply_row(u, m, p))
            }
            Coins::PerRow(rows) => {
                exec::for_each_row_pair(exec, minus, plus, n_t, |j, m, p| apply_row(&rows[j], m, p))
            }
            Coins::PerSite(sites) => exec::for_each_row_pair(exec, minus, plus, n_t, |j, m, p| {
                let row = &sites[j * n_t..(j + 1) * n_t];
                for ((a, b), u) in m.iter_mut().zip(p.iter_mut()).zip(row) {
                    let (x, y) = u.apply(*a, *b);
                    *a = x;
                    *b = y;
                }
            }),
        }
    }
}

#[inline]
fn apply_row(u: &Unitary2, m: &mut [C64], p: &mut [C64]) {
    for (a, b) in m.iter_mut().zip(p.iter_mut()) {
        let (x, y) = u.apply(*a, *b);
        *a = x;
        *b = y;
    }
}

pub(crate) fn apply_uniform(field: &mut SpinorField, u: &Unitary2, exec: Execution) {
    Coins::Uniform(*u).apply(field, exec)
}

/// The three pointwise stages of one `W` operator.
struct WStages {
    axis: Axis,
    rot: Coins,
    coin: Coins,
    /// `R⁻¹(α) U(α)`, the last two stages fused.
    coin_unrot: Coins,
}

impl WStages {
    fn build<I>(axis: Axis, alphas: I, layout: fn(Vec<Unitary2>) -> Coins) -> Self
    where
        I: IntoIterator<Item = f64>,
    {
        let (mut rot, mut coin, mut fused) = (Vec::new(), Vec::new(), Vec::new());
        for a in alphas {
            let r = rot_r(a);
            let u = coin_u(a);
            rot.push(r);
            coin.push(u);
            fused.push(r.dagger() * u);
        }
        WStages {
            axis,
            rot: layout(rot),
            coin: layout(coin),
            coin_unrot: layout(fused),
        }
    }

    fn uniform(axis: Axis, alpha: f64) -> Self {
        Self::build(axis, [alpha], |mut v| Coins::Uniform(v.pop().unwrap()))
    }

    fn apply(&self, field: &mut SpinorField, boundary: Boundary, exec: Execution) {
        self.rot.apply(field, exec);
        shift_in_place(field, self.axis, boundary, exec);
        self.coin.apply(field, exec);
        shift_in_place(field, self.axis, boundary, exec);
        self.coin_unrot.apply(field, exec);
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::Domain(format!("walk angle {alpha} outside [0, π]")));
    }
    Ok(())
}

/// Apply `W(α)` along `axis`, with `α` evaluated at each site's own `(r, θ)`.
pub fn w_operator<F>(
    field: &SpinorField,
    axis: Axis,
    alpha: F,
    boundary: Boundary,
) -> Result<SpinorField>
where
    F: Fn(f64, f64) -> f64,
{
    let grid = *field.grid();
    let mut alphas = Vec::with_capacity(grid.sites());
    for j in 0..grid.n_r() {
        for h in 0..grid.n_theta() {
            let a = alpha(grid.r(j), grid.theta(h));
            check_alpha(a)?;
            alphas.push(a);
        }
    }
    let stages = WStages::build(axis, alphas, Coins::PerSite);
    let mut out = field.clone();
    stages.apply(&mut out, boundary, Execution::default());
    Ok(out)
}

/// Precomputed advancement operator `V` for a fixed grid and parameters.
pub struct FreeWalk {
    grid: PolarGrid,
    boundary: Boundary,
    exec: Execution,
    mass_coin: Unitary2,
    pi: Unitary2,
    pi_inv: Unitary2,
    w11: WStages,
    w21: WStages,
    w22: WStages,
    w12: WStages,
}

impl FreeWalk {
    pub fn new(grid: PolarGrid, params: &WalkParams) -> Result<Self> {
        let angles = params.angles;
        for a in [angles.a11, angles.a12, angles.a21] {
            check_alpha(a)?;
        }
        let a22 = (0..grid.n_r())
            .map(|j| {
                let a = (angles.a22)(grid.r(j))?;
                check_alpha(a)?;
                Ok(a)
            })
            .collect::<Result<Vec<f64>>>()?;
        let pi = mixer_pi();
        Ok(FreeWalk {
            grid,
            boundary: params.boundary,
            exec: Execution::default(),
            mass_coin: mass_q(params.mass * grid.eps()),
            pi,
            pi_inv: pi.dagger(),
            w11: WStages::uniform(Axis::Radial, angles.a11),
            w21: WStages::uniform(Axis::Angular, angles.a21),
            w22: WStages::build(Axis::Angular, a22, Coins::PerRow),
            w12: WStages::uniform(Axis::Radial, angles.a12),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Advance `field` by one walk step in place.
    pub fn step(&self, field: &mut SpinorField) -> Result<()> {
        self.check(field)?;
        let (b, x) = (self.boundary, self.exec);
        apply_uniform(field, &self.mass_coin, x);
        self.w11.apply(field, b, x);
        self.w21.apply(field, b, x);
        apply_uniform(field, &self.pi, x);
        self.w22.apply(field, b, x);
        self.w12.apply(field, b, x);
        apply_uniform(field, &self.pi_inv, x);
        Ok(())
    }

    fn check(&self, field: &SpinorField) -> Result<()> {
        if *field.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if field.basis() != SpinBasis::Polar {
            return Err(Error::BasisMismatch {
                expected: SpinBasis::Polar,
                found: field.basis(),
            });
        }
        Ok(())
    }
}

/// One application of `V` to a polar-basis field.
pub fn step_free(field: &SpinorField, params: &WalkParams) -> Result<SpinorField> {
    let walk = FreeWalk::new(*field.grid(), params)?;
    let mut out = field.clone();
    walk.step(&mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{inner_product, Spinor};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn spike(grid: PolarGrid, j: usize, h: usize, s: Spinor) -> SpinorField {
        let mut f = SpinorField::zeros(grid, SpinBasis::Polar);
        f.set(j, h, s);
        f
    }

    #[test]
    fn coin_values() {
        let u0 = Unitary2::new(c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(coin_u(0.0).max_abs_diff(&u0) < 1e-15);
        let u90 = Unitary2::new(c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0));
        assert!(coin_u(FRAC_PI_2).max_abs_diff(&u90) < 1e-15);

        let r0 = Unitary2::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(rot_r(0.0).max_abs_diff(&r0) < 1e-15);
        let rpi = Unitary2::new(c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 0.0));
        assert!(rot_r(PI).max_abs_diff(&rpi) < 1e-15);
        assert!((rot_r(0.77) * rot_r(0.77).dagger()).max_abs_diff(&Unitary2::identity()) < 1e-15);

        assert!(mass_q(0.0).max_abs_diff(&Unitary2::identity()) < 1e-15);
        let q45 = Unitary2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0));
        assert!(mass_q(PI / 4.0).max_abs_diff(&q45) < 1e-15);
        let q = mass_q(0.01);
        assert_eq!(q.get(0, 0), c(0.02f64.cos(), 0.0));
        assert_eq!(q.get(0, 1), c(0.0, -0.02f64.sin()));
        assert!((mass_q(0.3) * mass_q(-0.3)).max_abs_diff(&Unitary2::identity()) < 1e-15);
    }

    #[test]
    fn mixer_values() {
        let p = mixer_pi();
        assert!((p * p.dagger()).max_abs_diff(&Unitary2::identity()) < 1e-15);
        let (a, b) = p.apply(c(1.0, 0.0), c(0.0, 0.0));
        assert!((a - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-16);
        assert!((b - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn coins_are_unitary_for_any_angle() {
        for k in 0..50 {
            let a = -3.0 + 0.137 * k as f64;
            assert!(coin_u(a).is_unitary(1e-15));
            assert!(rot_r(a).is_unitary(1e-15));
            assert!(mass_q(a).is_unitary(1e-15));
        }
    }

    #[test]
    fn shift_moves_components_opposite_ways() {
        let g = PolarGrid::new(8, 1.0, 10).unwrap();
        let one = c(1.0, 0.0);
        let f = spike(g, 5, 0, Spinor::new(one, c(0.0, 0.0)));
        assert_eq!(
            shift(&f, Axis::Radial, Boundary::Periodic).get(4, 0).minus,
            one
        );
        let f = spike(g, 5, 0, Spinor::new(c(0.0, 0.0), one));
        assert_eq!(
            shift(&f, Axis::Radial, Boundary::Periodic).get(6, 0).plus,
            one
        );

        let f = spike(g, 2, 7, Spinor::new(one, c(0.0, 0.0)));
        assert_eq!(
            shift(&f, Axis::Angular, Boundary::Periodic).get(2, 6).minus,
            one
        );
        let f = spike(g, 2, 1, Spinor::new(one, c(0.0, 0.0)));
        assert_eq!(
            shift(&f, Axis::Angular, Boundary::Periodic).get(2, 0).minus,
            one
        );
        let f = spike(g, 2, 0, Spinor::new(one, c(0.0, 0.0)));
        assert_eq!(
            shift(&f, Axis::Angular, Boundary::Periodic).get(2, 7).minus,
            one
        );
    }

    #[test]
    fn radial_boundaries() {
        let g = PolarGrid::new(8, 1.0, 4).unwrap();
        let one = c(1.0, 0.0);
        let f = spike(g, 0, 3, Spinor::new(one, c(0.0, 0.0)));
        assert_eq!(
            shift(&f, Axis::Radial, Boundary::Periodic).get(3, 3).minus,
            one
        );
        assert!(shift(&f, Axis::Radial, Boundary::AbsorbingZero).is_zero());
        let f = spike(g, 3, 3, Spinor::new(c(0.0, 0.0), one));
        assert_eq!(
            shift(&f, Axis::Radial, Boundary::Periodic).get(0, 3).plus,
            one
        );
        assert!(shift(&f, Axis::Radial, Boundary::AbsorbingZero).is_zero());
    }

    #[test]
    fn w_at_zero_translates_by_two() {
        // R(0) = diag(i, 1), U(0) = diag(−1, 1): φ⁻ gains i, then (−1)² from the coins,
        // then −i from R⁻¹, and moves two sites inward.
        let g = PolarGrid::new(8, 1.0, 10).unwrap();
        let f = spike(g, 5, 2, Spinor::new(c(1.0, 0.0), c(0.0, 0.0)));
        let w = w_operator(&f, Axis::Radial, |_, _| 0.0, Boundary::Periodic).unwrap();
        let mut expected = SpinorField::zeros(g, SpinBasis::Polar);
        expected.set(3, 2, Spinor::new(c(1.0, 0.0), c(0.0, 0.0)));
        assert!(crate::field::l1_distance(&w, &expected).unwrap() < 1e-15);

        let f = spike(g, 5, 2, Spinor::new(c(0.0, 0.0), c(0.0, 1.0)));
        let w = w_operator(&f, Axis::Radial, |_, _| 0.0, Boundary::Periodic).unwrap();
        assert!((w.get(7, 2).plus - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn w_at_right_angle_is_identity() {
        // U(π/2) S U(π/2) S = I: one step out, one step back, components swapped twice.
        let g = PolarGrid::new(8, 1.0, 10).unwrap();
        let f = spike(g, 5, 2, Spinor::new(c(1.0, 0.0), c(0.0, 0.0)));
        for axis in [Axis::Radial, Axis::Angular] {
            let w = w_operator(&f, axis, |_, _| FRAC_PI_2, Boundary::Periodic).unwrap();
            assert!(crate::field::l1_distance(&w, &f).unwrap() < 1e-15);
        }
    }

    #[test]
    fn w_rejects_out_of_range_angles() {
        let g = PolarGrid::new(8, 1.0, 4).unwrap();
        let f = SpinorField::zeros(g, SpinBasis::Polar);
        assert!(matches!(
            w_operator(&f, Axis::Radial, |r, _| r, Boundary::Periodic),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn angles() {
        let (a11, a12, a21, a22) = angles_for_radius(1.0).unwrap();
        assert_eq!((a11, a12, a21, a22), (0.0, FRAC_PI_2, FRAC_PI_2, 0.0));
        assert_relative_eq!(
            angles_for_radius(2.0).unwrap().3,
            PI / 3.0,
            max_relative = 1e-15
        );
        let mut last = 0.0;
        for r in [1.5, 3.0, 10.0, 1e3, 1e6] {
            let a = angles_for_radius(r).unwrap().3;
            assert!(a > last && a < FRAC_PI_2);
            last = a;
        }
        assert!(angles_for_radius(0.99).is_err());
    }

    #[test]
    fn step_of_zero_is_zero() {
        let g = PolarGrid::new(16, 1.0, 8).unwrap();
        let p = WalkParams::new(0.0, Boundary::Periodic).unwrap();
        let z = SpinorField::zeros(g, SpinBasis::Polar);
        assert!(step_free(&z, &p).unwrap().is_zero());
    }

    #[test]
    fn step_requires_polar_basis() {
        let g = PolarGrid::new(16, 1.0, 8).unwrap();
        let p = WalkParams::new(0.0, Boundary::Periodic).unwrap();
        let z = SpinorField::zeros(g, SpinBasis::Cartesian);
        assert!(matches!(
            step_free(&z, &p),
            Err(Error::BasisMismatch { .. })
        ));
        assert!(WalkParams::new(-1.0, Boundary::Periodic).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let g = PolarGrid::new(32, 1.0, 24).unwrap();
        let p = WalkParams::new(0.7, Boundary::Periodic).unwrap();
        let f = crate::field::sample_field(g, SpinBasis::Polar, |r, th| {
            Spinor::new(c((r * th).sin(), r.cos()), c(0.3 * th, (r - th).cos()))
        })
        .unwrap();
        let seq = FreeWalk::new(g, &p)
            .unwrap()
            .with_execution(Execution::Sequential);
        let par = FreeWalk::new(g, &p)
            .unwrap()
            .with_execution(Execution::Parallel);
        let (mut a, mut b) = (f.clone(), f.clone());
        for _ in 0..5 {
            seq.step(&mut a).unwrap();
            par.step(&mut b).unwrap();
        }
        assert_eq!(a, b);
        assert_relative_eq!(
            inner_product(&a, &a).unwrap().re,
            inner_product(&f, &f).unwrap().re,
            max_relative = 1e-13
        );
    }
}
