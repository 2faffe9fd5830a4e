//! Connection coefficients for diagonal (1+2)D metrics, computed numerically.
//!
//! Coordinates are `x = (t, r, θ)`, frame indices `a ∈ {0, 1, 2}` with
//! `η = diag(1, −1, −1)`. Metric derivatives are central differences with
//! step `1e-5 · max(1, |x_μ|)`, whose `O(h²)` error sits well inside the
//! `1e-7` comparison tolerance.
//!
//! Index conventions of returned arrays:
//! - Christoffel `Γ^ν_{σμ}` is `gamma[ν][σ][μ]`.
//! - Ricci rotation `ω^c_{μd}` is `omega[c][μ][d]`.

use std::sync::Arc;

use crate::field::{basis_change_matrix, BasisDirection};
use crate::unitary::Unitary2;
use crate::walk::angles_for_radius;
use crate::{Error, Result, C64};

pub type Point = [f64; 3];

/// Tolerance for comparisons against closed forms.
pub const GEOMETRY_TOL: f64 = 1e-7;
/// Tolerance for the walk-angle / n-bein agreement.
pub const WALK_ANGLE_TOL: f64 = 1e-9;

const ETA: [f64; 3] = [1.0, -1.0, -1.0];
const REL_STEP: f64 = 1e-5;

/// Diagonal metric `(g_tt, g_rr, g_θθ)` as a function of `(t, r, θ)`, signature `(+, −, −)`.
#[derive(Clone)]
pub struct MetricSpec {
    name: String,
    diag: Arc<dyn Fn(Point) -> [f64; 3] + Send + Sync>,
}

impl std::fmt::Debug for MetricSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricSpec")
            .field("name", &self.name)
            .finish()
    }
}

impl MetricSpec {
    pub fn new<F>(name: impl Into<String>, diag: F) -> Self
    where
        F: Fn(Point) -> [f64; 3] + Send + Sync + 'static,
    {
        MetricSpec {
            name: name.into(),
            diag: Arc::new(diag),
        }
    }

    /// Flat spacetime in polar coordinates: `diag(1, −1, −r²)`.
    pub fn polar() -> Self {
        Self::new("polar", |x| [1.0, -1.0, -x[1] * x[1]])
    }

    /// Flat spacetime in Cartesian coordinates.
    pub fn flat() -> Self {
        Self::new("flat", |_| [1.0, -1.0, -1.0])
    }

    /// A smooth, non-trivial diagonal metric parameterized by six coefficients
    /// (each ideally in `[-0.5, 0.5]`), used for property checks.
    pub fn smooth_diagonal(c: [f64; 6]) -> Self {
        Self::new(format!("smooth{c:?}"), move |x| {
            let [t, r, th] = x;
            [
                (c[0] * r.sin() + c[1] * th.cos() + 0.1 * c[2] * t).exp(),
                -(c[3] * (0.7 * r).cos() + c[4] * (2.0 * th).sin()).exp(),
                -r * r * (c[5] * (r + th).sin()).exp(),
            ]
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: Point) -> [f64; 3] {
        (self.diag)(x)
    }

    fn checked(&self, x: Point) -> Result<[f64; 3]> {
        let g = self.eval(x);
        if !(g[0] > 0.0 && g[1] < 0.0 && g[2] < 0.0) {
            return Err(Error::InvalidMetric(format!(
                "{}: signature (+,-,-) violated at {x:?}: {g:?}",
                self.name
            )));
        }
        Ok(g)
    }
}

fn step(x: f64) -> f64 {
    REL_STEP * x.abs().max(1.0)
}

/// Central difference of a vector-valued function along coordinate `mu`.
fn partial<F: Fn(Point) -> [f64; 3]>(f: F, x: Point, mu: usize) -> [f64; 3] {
    let h = step(x[mu]);
    let (mut xp, mut xm) = (x, x);
    xp[mu] += h;
    xm[mu] -= h;
    let (a, b) = (f(xp), f(xm));
    [
        (a[0] - b[0]) / (2.0 * h),
        (a[1] - b[1]) / (2.0 * h),
        (a[2] - b[2]) / (2.0 * h),
    ]
}

/// `dg[μ][ρ] = ∂_μ g_ρρ`.
fn metric_derivatives(metric: &MetricSpec, x: Point) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|mu| partial(|p| metric.eval(p), x, mu))
}

pub type Christoffel = [[[f64; 3]; 3]; 3];

/// `Γ^ν_{σμ} = g^{νν} · ½(∂_μ g_{νσ} + ∂_σ g_{νμ} − ∂_ν g_{σμ})`.
pub fn christoffel(metric: &MetricSpec, x: Point) -> Result<Christoffel> {
    let g = metric.checked(x)?;
    let dg = metric_derivatives(metric, x);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut out = [[[0.0; 3]; 3]; 3];
    for (nu, plane) in out.iter_mut().enumerate() {
        for (sigma, row) in plane.iter_mut().enumerate() {
            for (mu, v) in row.iter_mut().enumerate() {
                let lowered = 0.5
                    * (delta(nu, sigma) * dg[mu][nu] + delta(nu, mu) * dg[sigma][nu]
                        - delta(sigma, mu) * dg[nu][sigma]);
                *v = lowered / g[nu];
            }
        }
    }
    Ok(out)
}

/// Diagonal n-bein `e^a_μ` and its inverse `e^μ_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nbein {
    /// `e^a_a` (frame one-forms).
    pub coframe: [f64; 3],
    /// `e^a_a` inverse, i.e. `e^μ_μ` (frame vectors).
    pub frame: [f64; 3],
}

pub fn nbein(metric: &MetricSpec, x: Point) -> Result<Nbein> {
    let g = metric.checked(x)?;
    let coframe = [g[0].sqrt(), (-g[1]).sqrt(), (-g[2]).sqrt()];
    Ok(Nbein {
        coframe,
        frame: coframe.map(|e| 1.0 / e),
    })
}

pub type RicciRotation = [[[f64; 3]; 3]; 3];

/// `ω^c_{μd} = e^c_ν e^σ_d Γ^ν_{σμ} + e^c_ν ∂_μ e^ν_d`.
pub fn ricci_rotation(metric: &MetricSpec, x: Point) -> Result<RicciRotation> {
    let gamma = christoffel(metric, x)?;
    let e = nbein(metric, x)?;
    let mut d_frame = [[0.0; 3]; 3];
    for (mu, slot) in d_frame.iter_mut().enumerate() {
        // frame is only defined where the signature holds; nbein() checked x
        *slot = partial(
            |p| {
                let g = metric.eval(p);
                [
                    1.0 / g[0].sqrt(),
                    1.0 / (-g[1]).sqrt(),
                    1.0 / (-g[2]).sqrt(),
                ]
            },
            x,
            mu,
        );
    }
    let mut out = [[[0.0; 3]; 3]; 3];
    for c in 0..3 {
        for mu in 0..3 {
            for d in 0..3 {
                let mut v = e.coframe[c] * e.frame[d] * gamma[c][d][mu];
                if c == d {
                    v += e.coframe[c] * d_frame[mu][c];
                }
                out[c][mu][d] = v;
            }
        }
    }
    Ok(out)
}

/// `ω_{μcd} = η_{cc} ω^c_{μd}`.
pub fn lower_rotation(omega: &RicciRotation, mu: usize, c: usize, d: usize) -> f64 {
    ETA[c] * omega[c][mu][d]
}

/// `γ⁰ = σ₁`, `γ¹ = iσ₂`, `γ² = iσ₃`.
pub fn gamma_matrices() -> [Unitary2; 3] {
    let i = C64::new(0.0, 1.0);
    [
        Unitary2::sigma1(),
        Unitary2::sigma2().scale(i),
        Unitary2::sigma3().scale(i),
    ]
}

/// `Γ_μ = ⅛ ω_{μcd} [γ^c, γ^d]` for `μ = t, r, θ`.
pub fn spin_connection(metric: &MetricSpec, x: Point) -> Result<[Unitary2; 3]> {
    let omega = ricci_rotation(metric, x)?;
    let gammas = gamma_matrices();
    let mut out = [Unitary2::zero(); 3];
    for (mu, slot) in out.iter_mut().enumerate() {
        for c in 0..3 {
            for d in 0..3 {
                let w = lower_rotation(&omega, mu, c, d);
                if w != 0.0 {
                    let term = gammas[c]
                        .commutator(&gammas[d])
                        .scale(C64::new(w / 8.0, 0.0));
                    *slot = slot.add(&term);
                }
            }
        }
    }
    Ok(out)
}

/// Everything derived from the metric at one point.
#[derive(Clone, Debug)]
pub struct ConnectionReport {
    pub christoffel: Christoffel,
    pub ricci_rotation: RicciRotation,
    pub spin_connection: [Unitary2; 3],
}

pub fn connection_report(metric: &MetricSpec, x: Point) -> Result<ConnectionReport> {
    Ok(ConnectionReport {
        christoffel: christoffel(metric, x)?,
        ricci_rotation: ricci_rotation(metric, x)?,
        spin_connection: spin_connection(metric, x)?,
    })
}

/// Agreement of the walk angles with the polar n-bein at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkAngleReport {
    pub r: f64,
    /// `[e^r_1, e^r_2, e^θ_1, e^θ_2]` from the metric.
    pub frame: [f64; 4],
    /// `[cos α¹¹, cos α¹², cos α²¹, cos α²²]` from the walk.
    pub cosines: [f64; 4],
    pub max_deviation: f64,
}

/// Check `cos α^{kl}` against the polar frame `diag(1, 1, 1/r)`.
pub fn verify_walk_angles(r: f64) -> Result<WalkAngleReport> {
    let (a11, a12, a21, a22) = angles_for_radius(r)?;
    let e = nbein(&MetricSpec::polar(), [0.0, r, 0.0])?;
    let frame = [e.frame[1], 0.0, 0.0, e.frame[2]];
    let cosines = [a11.cos(), a12.cos(), a21.cos(), a22.cos()];
    let max_deviation = frame
        .iter()
        .zip(&cosines)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if max_deviation > WALK_ANGLE_TOL {
        return Err(Error::Domain(format!(
            "walk angles disagree with n-bein at r={r}: deviation {max_deviation:e}"
        )));
    }
    Ok(WalkAngleReport {
        r,
        frame,
        cosines,
        max_deviation,
    })
}

/// One named numerical comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometryCheck {
    pub quantity: String,
    pub metric: String,
    pub point: Point,
    pub expected: f64,
    pub actual: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl GeometryCheck {
    fn new(
        quantity: impl Into<String>,
        metric: &MetricSpec,
        point: Point,
        expected: f64,
        actual: f64,
        tol: f64,
    ) -> Self {
        let deviation = (expected - actual).abs();
        GeometryCheck {
            quantity: quantity.into(),
            metric: metric.name().to_string(),
            point,
            expected,
            actual,
            deviation,
            tolerance: tol,
            passed: deviation <= tol,
        }
    }
}

const COORD: [&str; 3] = ["t", "r", "θ"];

/// Compare every connection quantity of `metric` at radius `r` against the
/// closed forms of flat polar coordinates.
pub fn check_polar_closed_forms(metric: &MetricSpec, r: f64) -> Result<Vec<GeometryCheck>> {
    let x = [0.0, r, 0.3];
    let rep = connection_report(metric, x)?;
    let mut expected_gamma = [[[0.0; 3]; 3]; 3];
    expected_gamma[1][2][2] = -r;
    expected_gamma[2][1][2] = 1.0 / r;
    expected_gamma[2][2][1] = 1.0 / r;
    let mut checks = Vec::new();
    for nu in 0..3 {
        for s in 0..3 {
            for mu in 0..3 {
                checks.push(GeometryCheck::new(
                    format!("Gamma^{}_{}{}", COORD[nu], COORD[s], COORD[mu]),
                    metric,
                    x,
                    expected_gamma[nu][s][mu],
                    rep.christoffel[nu][s][mu],
                    GEOMETRY_TOL,
                ));
            }
        }
    }
    let mut expected_omega = [[[0.0; 3]; 3]; 3];
    expected_omega[1][2][2] = -1.0;
    expected_omega[2][2][1] = 1.0;
    for c in 0..3 {
        for mu in 0..3 {
            for d in 0..3 {
                checks.push(GeometryCheck::new(
                    format!("omega^{c}_{}{d}", COORD[mu]),
                    metric,
                    x,
                    expected_omega[c][mu][d],
                    rep.ricci_rotation[c][mu][d],
                    GEOMETRY_TOL,
                ));
            }
        }
    }
    let half_i_sigma1 = Unitary2::sigma1().scale(C64::new(0.0, -0.5));
    for mu in 0..3 {
        let expected = if mu == 2 {
            half_i_sigma1
        } else {
            Unitary2::zero()
        };
        checks.push(GeometryCheck::new(
            format!("SpinConnection_{}", COORD[mu]),
            metric,
            x,
            0.0,
            rep.spin_connection[mu].max_abs_diff(&expected),
            GEOMETRY_TOL,
        ));
    }
    Ok(checks)
}

/// All connection quantities of `metric` must vanish at `x`.
pub fn check_vanishing(metric: &MetricSpec, x: Point) -> Result<Vec<GeometryCheck>> {
    let rep = connection_report(metric, x)?;
    let worst_gamma = rep
        .christoffel
        .iter()
        .flatten()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let worst_omega = rep
        .ricci_rotation
        .iter()
        .flatten()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let worst_spin = rep
        .spin_connection
        .iter()
        .map(|m| m.max_abs_diff(&Unitary2::zero()))
        .fold(0.0, f64::max);
    Ok(vec![
        GeometryCheck::new("max|Gamma|", metric, x, 0.0, worst_gamma, GEOMETRY_TOL),
        GeometryCheck::new("max|omega|", metric, x, 0.0, worst_omega, GEOMETRY_TOL),
        GeometryCheck::new(
            "max|SpinConnection|",
            metric,
            x,
            0.0,
            worst_spin,
            GEOMETRY_TOL,
        ),
    ])
}

/// Structural identities that hold for any diagonal metric: torsion-free
/// Christoffels, metric compatibility `∇_μ g_{νρ} = 0`, and antisymmetry of
/// the lowered rotation coefficients.
pub fn check_structure(metric: &MetricSpec, x: Point) -> Result<Vec<GeometryCheck>> {
    let g = metric.checked(x)?;
    let gamma = christoffel(metric, x)?;
    let omega = ricci_rotation(metric, x)?;
    let dg = metric_derivatives(metric, x);

    let mut torsion: f64 = 0.0;
    for plane in &gamma {
        for s in 0..3 {
            for mu in 0..3 {
                torsion = torsion.max((plane[s][mu] - plane[mu][s]).abs());
            }
        }
    }
    // ∇_μ g_{νρ} = ∂_μ g_{νρ} − Γ^λ_{μν} g_{λρ} − Γ^λ_{μρ} g_{νλ}
    let mut compat: f64 = 0.0;
    for mu in 0..3 {
        for nu in 0..3 {
            for rho in 0..3 {
                let d = if nu == rho { dg[mu][nu] } else { 0.0 };
                let v = d - gamma[rho][mu][nu] * g[rho] - gamma[nu][mu][rho] * g[nu];
                compat = compat.max(v.abs());
            }
        }
    }
    let mut antisym: f64 = 0.0;
    for mu in 0..3 {
        for c in 0..3 {
            for d in 0..3 {
                let v = lower_rotation(&omega, mu, c, d) + lower_rotation(&omega, mu, d, c);
                antisym = antisym.max(v.abs());
            }
        }
    }
    // finite-difference noise scales with the metric magnitude
    let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok(vec![
        GeometryCheck::new(
            "torsion Gamma^n_[sm]",
            metric,
            x,
            0.0,
            torsion,
            GEOMETRY_TOL,
        ),
        GeometryCheck::new(
            "compatibility nabla g",
            metric,
            x,
            0.0,
            compat,
            GEOMETRY_TOL * scale,
        ),
        GeometryCheck::new(
            "antisymmetry omega_m(cd)",
            metric,
            x,
            0.0,
            antisym,
            GEOMETRY_TOL,
        ),
    ])
}

/// `(dM/dθ) M⁻¹` for the polar→Cartesian basis change, by central difference.
pub fn basis_change_generator(theta: f64) -> Unitary2 {
    let h = step(theta);
    let plus = basis_change_matrix(theta + h, BasisDirection::PolarToCartesian);
    let minus = basis_change_matrix(theta - h, BasisDirection::PolarToCartesian);
    let deriv = plus.sub(&minus).scale(C64::new(0.5 / h, 0.0));
    deriv * basis_change_matrix(theta, BasisDirection::CartesianToPolar)
}
