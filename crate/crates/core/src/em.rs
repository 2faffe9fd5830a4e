//! Electromagnetic coupling.
//!
//! After each free step every site is multiplied by
//!
//! ```text
//! U_em = e^{2iεA_t} diag(e^{−2iεA_r}, e^{2iεA_r}) Rot(2εA_θ / r)
//! Rot(φ) = [[cos φ, sin φ], [−sin φ, cos φ]]
//! ```
//!
//! with potentials evaluated at the site's `(r, θ)` and, by default, at the
//! time label reached after the step.

use std::sync::Arc;

use crate::exec::{self, Execution};
use crate::field::{PolarGrid, SpinorField};
use crate::unitary::Unitary2;
use crate::walk::{FreeWalk, WalkParams};
use crate::{Error, Result, C64};

/// A potential component as a function of `(t, r, θ)`.
pub type PotentialFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// The covariant 3-potential `(A_t, A_r, A_θ)`.
#[derive(Clone)]
pub struct PotentialSpec {
    a_t: PotentialFn,
    a_r: PotentialFn,
    a_theta: PotentialFn,
    axisymmetric: bool,
    /// Set for tabulated potentials, which only make sense on their own grid.
    grid: Option<PolarGrid>,
}

impl std::fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("axisymmetric", &self.axisymmetric)
            .field("tabulated", &self.grid.is_some())
            .finish()
    }
}

const PROBE_RADII: [f64; 3] = [1.0, 2.5, 7.0];
const PROBE_TIMES: [f64; 2] = [0.0, 1.3];

impl PotentialSpec {
    pub fn zero() -> Self {
        let z: PotentialFn = Arc::new(|_, _, _| 0.0);
        PotentialSpec {
            a_t: z.clone(),
            a_r: z.clone(),
            a_theta: z,
            axisymmetric: true,
            grid: None,
        }
    }

    /// Build from three component functions. When `axisymmetric` is claimed
    /// it is spot-checked at a few probe points.
    pub fn from_fns(
        a_t: PotentialFn,
        a_r: PotentialFn,
        a_theta: PotentialFn,
        axisymmetric: bool,
    ) -> Result<Self> {
        let spec = PotentialSpec {
            a_t,
            a_r,
            a_theta,
            axisymmetric,
            grid: None,
        };
        if axisymmetric {
            for &t in &PROBE_TIMES {
                for &r in &PROBE_RADII {
                    if spec.eval(t, r, 0.3) != spec.eval(t, r, 2.1) {
                        return Err(Error::InvalidPotential(format!(
                            "declared axisymmetric but depends on θ at t={t}, r={r}"
                        )));
                    }
                }
            }
        }
        Ok(spec)
    }

    /// Time-independent per-site values `[A_t, A_r, A_θ]`, indexed `j * n_theta + h`.
    pub fn from_site_values(grid: PolarGrid, values: Vec<[f64; 3]>) -> Result<Self> {
        if values.len() != grid.sites() {
            return Err(Error::InvalidPotential(format!(
                "table has {} sites, grid has {}",
                values.len(),
                grid.sites()
            )));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite table entry".into()));
        }
        let n_t = grid.n_theta();
        let axisymmetric = values
            .chunks(n_t)
            .all(|row| row.iter().all(|v| *v == row[0]));
        let table = Arc::new(values);
        let lookup = move |k: usize| -> PotentialFn {
            let table = table.clone();
            Arc::new(move |_t, r, th| {
                let j = ((r - grid.r_min()) / grid.eps())
                    .round()
                    .clamp(0.0, (grid.n_r() - 1) as f64) as usize;
                let h = (th / grid.eps()).round().rem_euclid(n_t as f64) as usize % n_t;
                table[j * n_t + h][k]
            })
        };
        Ok(PotentialSpec {
            a_t: lookup(0),
            a_r: lookup(1),
            a_theta: lookup(2),
            axisymmetric,
            grid: Some(grid),
        })
    }

    pub fn is_axisymmetric(&self) -> bool {
        self.axisymmetric
    }

    pub fn tabulated_grid(&self) -> Option<&PolarGrid> {
        self.grid.as_ref()
    }

    /// `[A_t, A_r, A_θ]` at `(t, r, θ)`.
    pub fn eval(&self, t: f64, r: f64, theta: f64) -> [f64; 3] {
        [
            (self.a_t)(t, r, theta),
            (self.a_r)(t, r, theta),
            (self.a_theta)(t, r, theta),
        ]
    }
}

/// A uniform magnetic field orthogonal to the plane, parameterized by `β = Bq > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformMagneticSpec {
    pub beta: f64,
}

/// Gauge potential for a uniform field: `A_t = A_r = 0`, `A_θ(r) = −β r² / 2`.
///
/// The charge is `q = −1`, so the field is `B = −β` and `(1/r) ∂_r A_θ = B`.
/// With this sign the Landau states of [`crate::landau`] are eigenstates of
/// the coupled walk's continuum limit.
pub fn uniform_b_potential(spec: UniformMagneticSpec) -> Result<PotentialSpec> {
    let beta = spec.beta;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidPotential(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let zero: PotentialFn = Arc::new(|_, _, _| 0.0);
    PotentialSpec::from_fns(
        zero.clone(),
        zero,
        Arc::new(move |_, r, _| -0.5 * beta * r * r),
        true,
    )
}

/// The pointwise coupling matrix.
pub fn em_unitary(a_t: f64, a_r: f64, a_theta: f64, r: f64, eps: f64) -> Unitary2 {
    let phase = C64::from_polar(1.0, 2.0 * eps * a_t);
    let d_minus = C64::from_polar(1.0, -2.0 * eps * a_r) * phase;
    let d_plus = C64::from_polar(1.0, 2.0 * eps * a_r) * phase;
    let (s, c) = (2.0 * eps * a_theta / r).sin_cos();
    Unitary2::new(d_minus * c, d_minus * s, -d_plus * s, d_plus * c)
}

/// Time label at which potentials are evaluated during a step from `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldTime {
    /// `t + 2ε`.
    #[default]
    PostStep,
    /// `t`.
    PreStep,
}

/// `U_em ∘ V`, stepping a field in an external potential.
pub struct EmWalk {
    free: FreeWalk,
    potential: PotentialSpec,
    field_time: FieldTime,
}

impl EmWalk {
    pub fn new(grid: PolarGrid, params: &WalkParams, potential: PotentialSpec) -> Result<Self> {
        if let Some(g) = potential.tabulated_grid() {
            if *g != grid {
                return Err(Error::GridMismatch);
            }
        }
        Ok(EmWalk {
            free: FreeWalk::new(grid, params)?,
            potential,
            field_time: FieldTime::default(),
        })
    }

    pub fn with_field_time(mut self, field_time: FieldTime) -> Self {
        self.field_time = field_time;
        self
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.free = self.free.with_execution(exec);
        self
    }

    pub fn free(&self) -> &FreeWalk {
        &self.free
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    /// Advance in place from time label `t`.
    pub fn step(&self, field: &mut SpinorField, t: f64) -> Result<()> {
        self.free.step(field)?;
        let grid = *field.grid();
        let eps = grid.eps();
        let t_eval = match self.field_time {
            FieldTime::PostStep => t + 2.0 * eps,
            FieldTime::PreStep => t,
        };
        let pot = &self.potential;
        let (minus, plus) = field.components_mut();
        exec::for_each_row_pair(
            self.free.execution(),
            minus,
            plus,
            grid.n_theta(),
            |j, m, p| {
                let r = grid.r(j);
                for h in 0..m.len() {
                    let [at, ar, ath] = pot.eval(t_eval, r, grid.theta(h));
                    let (a, b) = em_unitary(at, ar, ath, r, eps).apply(m[h], p[h]);
                    m[h] = a;
                    p[h] = b;
                }
            },
        );
        Ok(())
    }
}

/// One coupled step from time label `t`.
pub fn step_em(
    field: &SpinorField,
    params: &WalkParams,
    pot: &PotentialSpec,
    t: f64,
) -> Result<SpinorField> {
    let walk = EmWalk::new(*field.grid(), params, pot.clone())?;
    let mut out = field.clone();
    walk.step(&mut out, t)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{l1_distance, sample_field, SpinBasis, Spinor};
    use crate::walk::{step_free, Boundary};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn em_unitary_cases() {
        assert!(em_unitary(0.0, 0.0, 0.0, 3.0, 0.1).max_abs_diff(&Unitary2::identity()) < 1e-15);
        let eps = 0.05;
        let minus_one = Unitary2::identity().scale(C64::new(-1.0, 0.0));
        assert!(em_unitary(PI / (2.0 * eps), 0.0, 0.0, 2.0, eps).max_abs_diff(&minus_one) < 1e-14);
        let r = 2.0;
        let rot = em_unitary(0.0, 0.0, r * PI / (8.0 * eps), r, eps);
        let h = FRAC_1_SQRT_2;
        let expected = Unitary2::new(
            C64::new(h, 0.0),
            C64::new(h, 0.0),
            C64::new(-h, 0.0),
            C64::new(h, 0.0),
        );
        assert!(rot.max_abs_diff(&expected) < 1e-15);
        for k in 0..40 {
            let x = k as f64 * 0.37 - 5.0;
            let u = em_unitary(x, 1.5 * x, -x * x, 1.0 + 0.1 * k as f64, 0.07);
            assert!(u.is_unitary(1e-14));
            assert!((u.det().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn uniform_b_gauge() {
        let pot = uniform_b_potential(UniformMagneticSpec { beta: 0.1 }).unwrap();
        assert!(pot.is_axisymmetric());
        assert_relative_eq!(pot.eval(0.0, 2.0, 0.0)[2], -0.2, max_relative = 1e-15);
        // (1/r) ∂_r A_θ = B = −β at every radius
        for r in [1.0, 3.0, 17.0] {
            let h = 1e-4;
            let d = (pot.eval(0.0, r + h, 0.0)[2] - pot.eval(0.0, r - h, 0.0)[2]) / (2.0 * h);
            assert_relative_eq!(d / r, -0.1, max_relative = 1e-9);
        }
        assert!(uniform_b_potential(UniformMagneticSpec { beta: 0.0 }).is_err());
        assert!(uniform_b_potential(UniformMagneticSpec { beta: -1.0 }).is_err());
    }

    #[test]
    fn false_axisymmetry_claim_rejected() {
        let z: PotentialFn = Arc::new(|_, _, _| 0.0);
        let bad: PotentialFn = Arc::new(|_, _, th| th.sin());
        assert!(PotentialSpec::from_fns(z.clone(), z.clone(), bad.clone(), true).is_err());
        assert!(!PotentialSpec::from_fns(z.clone(), z, bad, false)
            .unwrap()
            .is_axisymmetric());
    }

    #[test]
    fn zero_potential_matches_free_step() {
        let g = PolarGrid::new(16, 1.0, 12).unwrap();
        let params = WalkParams::new(0.4, Boundary::Periodic).unwrap();
        let f = sample_field(g, SpinBasis::Polar, |r, th| {
            Spinor::new(C64::new(r.sin(), th.cos()), C64::new(0.1 * r, -th))
        })
        .unwrap();
        let a = step_free(&f, &params).unwrap();
        let b = step_em(&f, &params, &PotentialSpec::zero(), 0.0).unwrap();
        assert_eq!(l1_distance(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn tabulated_lookup_and_axisymmetry() {
        let g = PolarGrid::new(8, 1.0, 3).unwrap();
        let vals: Vec<[f64; 3]> = (0..g.sites()).map(|i| [0.0, 0.0, (i / 8) as f64]).collect();
        let pot = PotentialSpec::from_site_values(g, vals).unwrap();
        assert!(pot.is_axisymmetric());
        assert_eq!(pot.eval(0.0, g.r(2), g.theta(5))[2], 2.0);

        let vals: Vec<[f64; 3]> = (0..g.sites()).map(|i| [i as f64, 0.0, 0.0]).collect();
        let pot = PotentialSpec::from_site_values(g, vals).unwrap();
        assert!(!pot.is_axisymmetric());
        assert_eq!(pot.eval(0.0, g.r(1), g.theta(3))[0], 11.0);

        let other = PolarGrid::new(8, 1.0, 4).unwrap();
        let params = WalkParams::new(0.0, Boundary::Periodic).unwrap();
        assert!(matches!(
            EmWalk::new(other, &params, pot),
            Err(Error::GridMismatch)
        ));
    }
}
