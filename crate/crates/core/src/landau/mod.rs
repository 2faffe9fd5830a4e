//! Relativistic Landau levels in a uniform magnetic field.
//!
//! Eigenstates are `Φ(t, r, θ) = e^{−iEt} Ξ(r) e^{iκθ}` with
//! `E = √(m² + 2βn)` and half-integer `κ = −α − 1/2`. The radial profile is
//! obtained from
//!
//! ```text
//! u⁻(r) = β/(m − E) · C r^{1−κ} e^{−βr²/4} L_{n−1}^{α+1}(βr²/2)
//! u⁺(r) =             C r^{−κ}  e^{−βr²/4} L_n^α(βr²/2)
//! ```
//!
//! through `u⁻ = (i/√2) e^{iπ/4} (ξ⁻ + ξ⁺)`, `u⁺ = (1/√2) e^{iπ/4} (ξ⁺ − ξ⁻)`.
//! `u` solves `±u^±′ + (κ/r + βr/2) u^± − (E ∓ m) u^∓ = 0`.
//!
//! The angular factor is `e^{+iκθ}`: together with the gauge of
//! [`crate::em::uniform_b_potential`] this makes `Φ` an eigenstate of the
//! continuum limit of the coupled walk, and its angular momentum is
//! `⟨Ĵ⟩ = κ`.
//!
//! `C` is real and positive, fixed by `2π ∫₀^∞ (|ξ⁻|² + |ξ⁺|²) dr = 1`.

mod dd;
pub mod oracle;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use crate::exec::{self, Execution};
use crate::field::{PolarGrid, SpinBasis, SpinorField};
use crate::{Error, Result, C64};

use dd::Dd;

pub use oracle::laguerre_series_oracle;

/// Generalized Laguerre polynomial `L_n^α(x)`.
///
/// Three-term recurrence `(k+1) L_{k+1} = (2k+1+α−x) L_k − (k+α) L_{k−1}`,
/// carried in double-double so the result keeps full relative precision near
/// roots. Negative integer `α >= −n` goes through the reflection identity.
pub fn laguerre(n: i64, alpha: f64, x: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "Laguerre degree must be >= 0, got {n}"
        )));
    }
    Ok(laguerre_unchecked(n as u64, alpha, x))
}

fn laguerre_unchecked(n: u64, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    // For α = −k, 1 <= k <= n, the polynomial carries a factor x^k that the
    // recurrence would have to produce by cancellation:
    // L_n^{−k}(x) = (−x)^k (n−k)!/n! L_{n−k}^{k}(x).
    if alpha < 0.0 && alpha.fract() == 0.0 && -alpha <= n as f64 {
        let k = -alpha as u64;
        let ratio: f64 = ((n - k + 1)..=n).map(|i| 1.0 / i as f64).product();
        return (-x).powi(k as i32) * ratio * laguerre_recurrence(n - k, k as f64, x);
    }
    laguerre_recurrence(n, alpha, x)
}

fn laguerre_recurrence(n: u64, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let neg_x = Dd::from_f64(-x);
    let mut prev = Dd::ONE;
    let mut cur = Dd::sum(alpha, 1.0).add(neg_x);
    for k in 1..n {
        let kf = k as f64;
        let a = Dd::sum(2.0 * kf + 1.0, alpha).add(neg_x);
        let b = Dd::sum(kf, alpha);
        let next = a.mul(cur).add(b.mul(prev).neg()).div_f64(kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur.to_f64()
}

/// `d/dx L_n^α(x) = −L_{n−1}^{α+1}(x)`.
pub fn laguerre_derivative(n: i64, alpha: f64, x: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "Laguerre degree must be >= 0, got {n}"
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    Ok(-laguerre_unchecked(n as u64 - 1, alpha + 1.0, x))
}

/// Quantum numbers and derived constants of one Landau eigenstate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LandauSpec {
    pub n: i64,
    pub alpha: i64,
    /// `Bq`, positive.
    pub beta: f64,
    pub mass: f64,
    pub energy: f64,
    pub kappa: f64,
    /// `|C|²` from the closed form.
    pub c2: f64,
    /// `C` used when sampling; `√c2` unless overridden.
    pub amplitude: f64,
}

/// `n! / (n+α)!` as a product, avoiding factorial overflow.
fn factorial_ratio(n: i64, alpha: i64) -> f64 {
    if alpha >= 0 {
        1.0 / ((n + 1)..=(n + alpha)).map(|i| i as f64).product::<f64>()
    } else {
        ((n + alpha + 1)..=n).map(|i| i as f64).product::<f64>()
    }
}

pub fn make_landau_spec(n: i64, alpha: i64, beta: f64, mass: f64) -> Result<LandauSpec> {
    if n < 1 {
        return Err(Error::InvalidLandau(format!("n must be >= 1, got {n}")));
    }
    if alpha < -n {
        return Err(Error::InvalidLandau(format!(
            "alpha must be >= -n = {}, got {alpha}",
            -n
        )));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidLandau(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if !(mass >= 0.0) || !mass.is_finite() {
        return Err(Error::InvalidLandau(format!(
            "mass must be >= 0, got {mass}"
        )));
    }
    let energy = (mass * mass + 2.0 * beta * n as f64).sqrt();
    let gap = mass - energy;
    if gap == 0.0 || energy + mass == 0.0 {
        return Err(Error::InvalidLandau("degenerate level E = ±m".into()));
    }
    let c2 = gap * gap * beta.powi(alpha as i32 + 1) * factorial_ratio(n, alpha)
        / (PI * 2f64.powi(alpha as i32 + 1) * (2.0 * beta * n as f64 + gap * gap));
    Ok(LandauSpec {
        n,
        alpha,
        beta,
        mass,
        energy,
        kappa: -(alpha as f64) - 0.5,
        c2,
        amplitude: c2.sqrt(),
    })
}

impl LandauSpec {
    /// Same state with a different overall constant `C`.
    pub fn with_amplitude(mut self, c: f64) -> Self {
        self.amplitude = c;
        self
    }

    /// Same profile, but with `E` replaced (for residual sensitivity studies).
    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = energy;
        self
    }

    /// Angular momentum `⟨Ĵ⟩` of the eigenstate, equal to `κ`.
    pub fn angular_momentum(&self) -> f64 {
        self.kappa
    }

    fn x(&self, r: f64) -> f64 {
        0.5 * self.beta * r * r
    }

    /// Value, and derivative in `r`, of `(u⁻, u⁺)`. Uses the closed-form `E`
    /// in the `u⁻` prefactor so that `with_energy` perturbs only the ODE.
    fn u_and_derivative(&self, r: f64) -> ([f64; 2], [f64; 2]) {
        let (n, a, b, k) = (self.n, self.alpha as f64, self.beta, self.kappa);
        let e0 = (self.mass * self.mass + 2.0 * b * n as f64).sqrt();
        let x = self.x(r);
        let gauss = (-0.25 * b * r * r).exp();
        let lp = laguerre_unchecked(n as u64, a, x);
        let lm = laguerre_unchecked(n as u64 - 1, a + 1.0, x);
        let dlp = -lm;
        let dlm = if n >= 2 {
            -laguerre_unchecked(n as u64 - 2, a + 2.0, x)
        } else {
            0.0
        };

        let base_p = self.amplitude * r.powf(-k) * gauss;
        let base_m = b / (self.mass - e0) * self.amplitude * r.powf(1.0 - k) * gauss;
        let up = base_p * lp;
        let um = base_m * lm;
        let dup = up * (-k / r - 0.5 * b * r) + base_p * dlp * b * r;
        let dum = um * ((1.0 - k) / r - 0.5 * b * r) + base_m * dlm * b * r;
        ([um, up], [dum, dup])
    }

    /// `(u⁻(r), u⁺(r))`.
    pub fn u_components(&self, r: f64) -> Result<(f64, f64)> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        let ([um, up], _) = self.u_and_derivative(r);
        Ok((um, up))
    }

    /// `(ξ⁻(r), ξ⁺(r))`, the radial profile in the walk's spin components.
    pub fn xi_components(&self, r: f64) -> Result<(C64, C64)> {
        let (um, up) = self.u_components(r)?;
        Ok(xi_from_u(C64::new(um, 0.0), C64::new(up, 0.0)))
    }

    /// Residuals of the two first-order radial equations at `r`.
    pub fn ode_residual(&self, r: f64) -> Result<(f64, f64)> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        let ([um, up], [dum, dup]) = self.u_and_derivative(r);
        let w = self.kappa / r + 0.5 * self.beta * r;
        let (e, m) = (self.energy, self.mass);
        let res_minus = -dum + w * um - (e + m) * up;
        let res_plus = dup + w * up - (e - m) * um;
        Ok((res_minus.abs(), res_plus.abs()))
    }

    /// Radius beyond which the Gaussian factor makes the profile negligible.
    fn quadrature_cutoff(&self) -> f64 {
        let spread = (self.alpha.unsigned_abs() as f64 + 2.0 * self.n as f64 + 2.0) / self.beta;
        10.0 * spread.sqrt()
    }
}

pub fn ode_residual(spec: &LandauSpec, r: f64) -> Result<(f64, f64)> {
    spec.ode_residual(r)
}

const SQRT_HALF_PHASE: C64 = C64::new(0.5, 0.5); // e^{iπ/4} / √2

/// Invert `u⁻ = (i/√2) e^{iπ/4} (ξ⁻ + ξ⁺)`, `u⁺ = (1/√2) e^{iπ/4} (ξ⁺ − ξ⁻)`.
pub fn xi_from_u(u_minus: C64, u_plus: C64) -> (C64, C64) {
    let f = C64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
    let iu = C64::new(0.0, -1.0) * u_minus;
    (f * (iu - u_plus), f * (iu + u_plus))
}

/// The forward map `ξ → u`.
pub fn u_from_xi(xi_minus: C64, xi_plus: C64) -> (C64, C64) {
    let f = SQRT_HALF_PHASE;
    (
        C64::new(0.0, 1.0) * f * (xi_minus + xi_plus),
        f * (xi_plus - xi_minus),
    )
}

/// Composite Simpson rule on `[a, b]` with `intervals` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2) + intervals % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

const QUADRATURE_INTERVALS: usize = 40_000;
const QUADRATURE_TAIL: f64 = 1e-16;

fn profile_density(spec: &LandauSpec, r: f64, use_xi: bool) -> f64 {
    if r <= 0.0 {
        // |u|² vanishes like r^{2|α|+1} at the origin for every admissible α.
        return 0.0;
    }
    if use_xi {
        let (a, b) = spec.xi_components(r).unwrap();
        a.norm_sqr() + b.norm_sqr()
    } else {
        let (a, b) = spec.u_components(r).unwrap();
        a * a + b * b
    }
}

fn quadrature(spec: &LandauSpec, use_xi: bool) -> Result<f64> {
    let cutoff = spec.quadrature_cutoff();
    let peak = (1..=200)
        .map(|i| profile_density(spec, cutoff * i as f64 / 200.0, use_xi))
        .fold(0.0, f64::max);
    let tail = profile_density(spec, cutoff, use_xi);
    if !(peak > 0.0) || !(tail <= QUADRATURE_TAIL * peak) {
        return Err(Error::TailBound {
            ratio: tail / peak,
            limit: QUADRATURE_TAIL,
        });
    }
    Ok(2.0
        * PI
        * simpson(
            |r| profile_density(spec, r, use_xi),
            0.0,
            cutoff,
            QUADRATURE_INTERVALS,
        ))
}

/// `2π ∫₀^∞ (|ξ⁻|² + |ξ⁺|²) dr`, which the closed-form `|C|²` sets to 1.
pub fn normalization_quadrature_check(spec: &LandauSpec) -> Result<f64> {
    quadrature(spec, true)
}

/// Same integral taken over `|u⁻|² + |u⁺|²`.
pub fn normalization_quadrature_u(spec: &LandauSpec) -> Result<f64> {
    quadrature(spec, false)
}

/// Largest allowed `|Ξ(r_max)| / max_r |Ξ(r)|` on a sampling grid.
pub const TAIL_RATIO_LIMIT: f64 = 1e-10;

/// A sampled, grid-normalized eigenstate plus normalization diagnostics.
#[derive(Clone, Debug)]
pub struct EigenstateField {
    pub field: SpinorField,
    /// `Σ|Φ|²ε²` of the sample with the closed-form `C`, before renormalizing.
    /// Tends to 2 (the walk's angle spans 4π, the closed form assumes 2π).
    pub analytic_norm_sqr: f64,
    /// `analytic_norm_sqr / 2`.
    pub normalization_ratio: f64,
    /// `|Ξ(r_max)| / max_j |Ξ(r_j)|`.
    pub tail_ratio: f64,
    /// Closed-form-normalized mass in `r < r_min`, discarded by the grid.
    pub inner_tail_mass: f64,
}

/// Sample `Φ(t)` on `grid` in the polar basis and rescale to unit grid norm.
pub fn eigenstate_field(grid: PolarGrid, spec: &LandauSpec, t: f64) -> Result<EigenstateField> {
    let profile: Vec<(C64, C64)> = (0..grid.n_r())
        .map(|j| spec.xi_components(grid.r(j)))
        .collect::<Result<_>>()?;
    let mag = |p: &(C64, C64)| (p.0.norm_sqr() + p.1.norm_sqr()).sqrt();
    let peak = profile.iter().map(mag).fold(0.0, f64::max);
    let tail_ratio = mag(profile.last().unwrap()) / peak;
    if !(tail_ratio < TAIL_RATIO_LIMIT) {
        return Err(Error::TailBound {
            ratio: tail_ratio,
            limit: TAIL_RATIO_LIMIT,
        });
    }

    let time_phase = C64::from_polar(1.0, -spec.energy * t);
    let angular: Vec<C64> = (0..grid.n_theta())
        .map(|h| C64::from_polar(1.0, spec.kappa * grid.theta(h)) * time_phase)
        .collect();
    let mut field = SpinorField::zeros(grid, SpinBasis::Polar);
    let (minus, plus) = field.components_mut();
    exec::for_each_row_pair(
        Execution::default(),
        minus,
        plus,
        grid.n_theta(),
        |j, m, p| {
            let (xm, xp) = profile[j];
            for (h, phase) in angular.iter().enumerate() {
                m[h] = xm * phase;
                p[h] = xp * phase;
            }
        },
    );
    let analytic_norm_sqr = field.norm_sqr();
    field.normalize()?;

    let inner_tail_mass =
        2.0 * PI * simpson(|r| profile_density(spec, r, true), 0.0, grid.r_min(), 4_000);
    Ok(EigenstateField {
        field,
        analytic_norm_sqr,
        normalization_ratio: analytic_norm_sqr / 2.0,
        tail_ratio,
        inner_tail_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1() -> LandauSpec {
        make_landau_spec(1, 5, 0.1, 1.0).unwrap()
    }

    #[test]
    fn laguerre_small_cases() {
        assert_eq!(laguerre(0, 3.7, 12.0).unwrap(), 1.0);
        assert_eq!(laguerre(1, 2.0, 3.0).unwrap(), 0.0);
        assert_relative_eq!(laguerre(2, 1.0, 1.0).unwrap(), 0.5, max_relative = 1e-15);
        assert!(laguerre(-1, 0.0, 1.0).is_err());
        assert_relative_eq!(
            laguerre_derivative(3, 0.5, 2.0).unwrap(),
            -laguerre(2, 1.5, 2.0).unwrap()
        );
        assert_eq!(laguerre_derivative(0, 0.5, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn spec_for_figure_parameters() {
        let s = fig1();
        assert_relative_eq!(s.energy, 1.2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.energy, 1.095_445_115_010_332_2, max_relative = 1e-15);
        assert_eq!(s.kappa, -5.5);
        assert!(s.c2 > 0.0);
        assert!(make_landau_spec(1, -1, 0.1, 1.0).is_ok());
        assert!(make_landau_spec(1, -2, 0.1, 1.0).is_err());
        assert!(make_landau_spec(0, 0, 0.1, 1.0).is_err());
        assert!(make_landau_spec(1, 0, 0.0, 1.0).is_err());
        assert!(make_landau_spec(1, 0, -0.1, 1.0).is_err());
    }

    #[test]
    fn u_ratio_for_first_level() {
        let s = fig1();
        for r in [0.5, 2.0, 7.0] {
            let (um, up) = s.u_components(r).unwrap();
            let x = 0.5 * s.beta * r * r;
            let expected = s.beta * r / (s.mass - s.energy) / laguerre(1, 5.0, x).unwrap();
            assert_relative_eq!(um / up, expected, max_relative = 1e-13);
        }
        assert!(s.u_components(0.0).is_err());
        let (um, up) = s.u_components(200.0).unwrap();
        assert!(um.abs() < 1e-300 && up.abs() < 1e-300);
    }

    #[test]
    fn u_vanishes_at_laguerre_root() {
        // L_1^5(x) = 6 − x: root at x = 6, i.e. r = √(12/β)
        let s = fig1();
        let r = (12.0f64 / s.beta).sqrt();
        let (_, up) = s.u_components(r).unwrap();
        let (um, _) = s.u_components(r).unwrap();
        assert!(up.abs() < 1e-14 * um.abs());
    }

    #[test]
    fn xi_round_trip() {
        assert_eq!(
            xi_from_u(C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
        );
        let (um, up) = (C64::new(0.3, -1.2), C64::new(-0.7, 0.25));
        let (xm, xp) = xi_from_u(um, up);
        let (bm, bp) = u_from_xi(xm, xp);
        assert!((bm - um).norm() < 1e-15 && (bp - up).norm() < 1e-15);
        // the map is unitary
        assert_relative_eq!(
            xm.norm_sqr() + xp.norm_sqr(),
            um.norm_sqr() + up.norm_sqr(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn residual_vanishes_and_responds_to_energy() {
        let s = fig1();
        for r in [1.0, 2.0, 5.0, 10.0] {
            let (a, b) = s.ode_residual(r).unwrap();
            assert!(a < 1e-10 && b < 1e-10, "r={r}: {a:e} {b:e}");
        }
        let zero = s.with_amplitude(0.0);
        assert_eq!(zero.ode_residual(3.0).unwrap(), (0.0, 0.0));

        let r = 8.0;
        let (um, up) = s.u_components(r).unwrap();
        let mut last = 0.0;
        for d in [1e-6, 1e-5, 1e-4] {
            let (a, b) = s.with_energy(s.energy + d).ode_residual(r).unwrap();
            // residual changes by d·u^∓ in each equation
            assert_relative_eq!(a, d * up.abs(), max_relative = 1e-6);
            assert_relative_eq!(b, d * um.abs(), max_relative = 1e-6);
            assert!(a > last);
            last = a;
        }
    }

    #[test]
    fn quadrature_normalization() {
        let s = fig1();
        let q = normalization_quadrature_check(&s).unwrap();
        assert!((q - 1.0).abs() < 1e-6, "{q}");
        let qu = normalization_quadrature_u(&s).unwrap();
        assert_relative_eq!(q, qu, max_relative = 1e-12);
        let doubled = normalization_quadrature_check(&s.with_amplitude(2.0 * s.amplitude)).unwrap();
        assert_relative_eq!(doubled, 4.0 * q, max_relative = 1e-12);
    }

    #[test]
    fn eigenstate_time_dependence() {
        let s = fig1();
        let g = PolarGrid::covering(32, 1.0, 45.0).unwrap();
        let f0 = eigenstate_field(g, &s, 0.0).unwrap();
        let t = 0.83;
        let ft = eigenstate_field(g, &s, t).unwrap();
        let phase = C64::from_polar(1.0, -s.energy * t);
        let worst = f0
            .field
            .data()
            .iter()
            .zip(ft.field.data())
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-15);
        assert_relative_eq!(f0.field.norm_sqr(), 1.0, max_relative = 1e-14);
        assert!(f0.inner_tail_mass < 1e-8);
        assert!((f0.normalization_ratio - 1.0).abs() < 1e-3);
    }

    #[test]
    fn eigenstate_rejects_short_window() {
        let g = PolarGrid::covering(32, 1.0, 20.0).unwrap();
        assert!(matches!(
            eigenstate_field(g, &fig1(), 0.0),
            Err(Error::TailBound { .. })
        ));
    }
}
