//! Spinor fields on the 4π-extended polar grid.
//!
//! Storage is component-major, then radial, then angular:
//! `data[(c * n_r + j) * n_theta + h]` with `c = 0` for `φ⁻` and `c = 1` for
//! `φ⁺`. Angular rows are contiguous so per-radius FFTs and angular shifts
//! touch one slice each.
//!
//! Inner products use the flat measure `ε²` on the walk amplitude `Φ`. The
//! continuum wave function is `Ψ = Φ / √r`; converting is left to callers.

use std::f64::consts::PI;

use crate::exec::{self, Execution};
use crate::unitary::Unitary2;
use crate::{Error, Result, C64};

/// Angular closure tolerance for `ε · n_theta = 4π`.
const CLOSURE_TOL: f64 = 1e-12;

/// Discretization of the `(r, θ)` plane with `θ ∈ [0, 4π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarGrid {
    n_theta: usize,
    n_r: usize,
    r_min: f64,
    eps: f64,
}

impl PolarGrid {
    /// Build a grid with `ε = 4π / n_theta` and radii `r_min + j ε`.
    ///
    /// `n_theta` must be even (and at least 8) so the 4π circle carries the
    /// same number of half-integer and integer modes; `r_min ≥ 1` keeps
    /// `arccos(1/r)` defined at every radius.
    pub fn new(n_theta: usize, r_min: f64, n_r: usize) -> Result<Self> {
        if n_theta < 8 || !n_theta.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_theta must be even and >= 8, got {n_theta}"
            )));
        }
        if !r_min.is_finite() || r_min < 1.0 {
            return Err(Error::InvalidGrid(format!(
                "r_min must be >= 1, got {r_min}"
            )));
        }
        if n_r < 2 {
            return Err(Error::InvalidGrid(format!("n_r must be >= 2, got {n_r}")));
        }
        let eps = 4.0 * PI / n_theta as f64;
        debug_assert!(((eps * n_theta as f64) - 4.0 * PI).abs() <= CLOSURE_TOL * 4.0 * PI);
        Ok(PolarGrid {
            n_theta,
            n_r,
            r_min,
            eps,
        })
    }

    /// Smallest grid starting at `r_min` whose outermost radius reaches `r_max`.
    pub fn covering(n_theta: usize, r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_max > r_min) {
            return Err(Error::InvalidGrid(format!(
                "r_max ({r_max}) must exceed r_min ({r_min})"
            )));
        }
        let eps = 4.0 * PI / n_theta as f64;
        let n_r = ((r_max - r_min) / eps).ceil() as usize + 1;
        Self::new(n_theta, r_min, n_r.max(2))
    }

    #[inline]
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    #[inline]
    pub fn n_r(&self) -> usize {
        self.n_r
    }

    #[inline]
    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    #[inline]
    pub fn r(&self, j: usize) -> f64 {
        self.r_min + j as f64 * self.eps
    }

    #[inline]
    pub fn theta(&self, h: usize) -> f64 {
        h as f64 * self.eps
    }

    pub fn r_max(&self) -> f64 {
        self.r(self.n_r - 1)
    }

    /// Number of sites per spinor component.
    pub fn sites(&self) -> usize {
        self.n_r * self.n_theta
    }

    /// Site area element `ε²`.
    pub fn cell(&self) -> f64 {
        self.eps * self.eps
    }
}

/// Two-component amplitude `(φ⁻, φ⁺)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Spinor {
    pub minus: C64,
    pub plus: C64,
}

impl Spinor {
    pub const fn new(minus: C64, plus: C64) -> Self {
        Spinor { minus, plus }
    }

    pub fn zero() -> Self {
        Spinor::default()
    }

    pub fn is_finite(&self) -> bool {
        self.minus.is_finite() && self.plus.is_finite()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.minus.norm_sqr() + self.plus.norm_sqr()
    }

    pub fn transform(&self, m: &Unitary2) -> Spinor {
        let (a, b) = m.apply(self.minus, self.plus);
        Spinor::new(a, b)
    }

    pub fn scale(&self, s: C64) -> Spinor {
        Spinor::new(self.minus * s, self.plus * s)
    }
}

/// Which spin frame a field's components refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinBasis {
    /// Point-independent frame `(b_L, b_R)`.
    Cartesian,
    /// Frame `(b_−, b_+)` rotating with `θ`; components are 2π-anti-periodic.
    Polar,
}

impl SpinBasis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpinBasis::Cartesian => "cartesian",
            SpinBasis::Polar => "polar",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cartesian" => Some(SpinBasis::Cartesian),
            "polar" => Some(SpinBasis::Polar),
            _ => None,
        }
    }

    pub fn other(&self) -> Self {
        match self {
            SpinBasis::Cartesian => SpinBasis::Polar,
            SpinBasis::Polar => SpinBasis::Cartesian,
        }
    }
}

/// Spinor amplitudes at every site of a [`PolarGrid`], tagged with their basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    grid: PolarGrid,
    basis: SpinBasis,
    data: Vec<C64>,
}

impl SpinorField {
    pub fn zeros(grid: PolarGrid, basis: SpinBasis) -> Self {
        SpinorField {
            grid,
            basis,
            data: vec![C64::new(0.0, 0.0); 2 * grid.sites()],
        }
    }

    /// Wrap raw storage laid out as described in the module docs.
    pub fn from_raw(grid: PolarGrid, basis: SpinBasis, data: Vec<C64>) -> Result<Self> {
        if data.len() != 2 * grid.sites() {
            return Err(Error::InvalidGrid(format!(
                "expected {} amplitudes, got {}",
                2 * grid.sites(),
                data.len()
            )));
        }
        let field = SpinorField { grid, basis, data };
        field.check_finite()?;
        Ok(field)
    }

    #[inline]
    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    #[inline]
    pub fn basis(&self) -> SpinBasis {
        self.basis
    }

    /// Relabel the basis without touching amplitudes.
    pub fn with_basis(mut self, basis: SpinBasis) -> Self {
        self.basis = basis;
        self
    }

    #[inline]
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    #[inline]
    fn index(&self, c: usize, j: usize, h: usize) -> usize {
        (c * self.grid.n_r + j) * self.grid.n_theta + h
    }

    pub fn get(&self, j: usize, h: usize) -> Spinor {
        Spinor::new(
            self.data[self.index(0, j, h)],
            self.data[self.index(1, j, h)],
        )
    }

    pub fn set(&mut self, j: usize, h: usize, s: Spinor) {
        let (a, b) = (self.index(0, j, h), self.index(1, j, h));
        self.data[a] = s.minus;
        self.data[b] = s.plus;
    }

    /// The angular row of component `c` (0 = `φ⁻`, 1 = `φ⁺`) at radius index `j`.
    pub fn row(&self, c: usize, j: usize) -> &[C64] {
        let start = self.index(c, j, 0);
        &self.data[start..start + self.grid.n_theta]
    }

    /// Borrow the `φ⁻` and `φ⁺` planes separately.
    pub fn components_mut(&mut self) -> (&mut [C64], &mut [C64]) {
        let half = self.grid.sites();
        self.data.split_at_mut(half)
    }

    pub fn components(&self) -> (&[C64], &[C64]) {
        self.data.split_at(self.grid.sites())
    }

    fn check_finite(&self) -> Result<()> {
        let (n_r, n_t) = (self.grid.n_r, self.grid.n_theta);
        match self.data.iter().position(|z| !z.is_finite()) {
            None => Ok(()),
            Some(i) => Err(Error::NonFinite {
                component: i / (n_r * n_t),
                radial: (i / n_t) % n_r,
                angular: i % n_t,
            }),
        }
    }

    /// Multiply every amplitude by `s`.
    pub fn scale(&mut self, s: C64) {
        self.data.iter_mut().for_each(|z| *z *= s);
    }

    pub fn scaled(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    /// `Σ |φ|² ε²` with the fixed row-order reduction.
    pub fn norm_sqr(&self) -> f64 {
        self.norm_sqr_with(Execution::default())
    }

    pub fn norm_sqr_with(&self, exec: Execution) -> f64 {
        let n_t = self.grid.n_theta;
        let rows = 2 * self.grid.n_r;
        let partials = exec::map_rows(exec, rows, |row| {
            self.data[row * n_t..(row + 1) * n_t]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
        });
        partials.into_iter().sum::<f64>() * self.grid.cell()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescale so that `norm_sqr() == 1`. Returns the norm before scaling.
    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroField);
        }
        self.scale(C64::new(1.0 / n, 0.0));
        Ok(n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    /// Cyclic translation of the angular index by `by` sites: `out[h] = self[h - by]`.
    pub fn rotate_theta(&self, by: isize) -> Self {
        let mut out = self.clone();
        let n_t = self.grid.n_theta;
        let k = by.rem_euclid(n_t as isize) as usize;
        for row in out.data.chunks_mut(n_t) {
            row.rotate_right(k);
        }
        out
    }
}

fn ensure_compatible(a: &SpinorField, b: &SpinorField) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    if a.basis != b.basis {
        return Err(Error::BasisMismatch {
            expected: a.basis,
            found: b.basis,
        });
    }
    Ok(())
}

/// `⟨a|b⟩ = Σ (conj(a⁻) b⁻ + conj(a⁺) b⁺) ε²`.
pub fn inner_product(a: &SpinorField, b: &SpinorField) -> Result<C64> {
    ensure_compatible(a, b)?;
    let n_t = a.grid.n_theta;
    let partials = exec::map_rows(Execution::default(), 2 * a.grid.n_r, |row| {
        let r = row * n_t..(row + 1) * n_t;
        a.data[r.clone()]
            .iter()
            .zip(&b.data[r])
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
    });
    Ok(partials.into_iter().sum::<C64>() * a.grid.cell())
}

/// `Σ |a − b| ε²` over sites and both components.
pub fn l1_distance(a: &SpinorField, b: &SpinorField) -> Result<f64> {
    ensure_compatible(a, b)?;
    let n_t = a.grid.n_theta;
    let partials = exec::map_rows(Execution::default(), 2 * a.grid.n_r, |row| {
        let r = row * n_t..(row + 1) * n_t;
        a.data[r.clone()]
            .iter()
            .zip(&b.data[r])
            .map(|(x, y)| (x - y).norm())
            .sum::<f64>()
    });
    Ok(partials.into_iter().sum::<f64>() * a.grid.cell())
}

/// Direction of a spin-frame change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisDirection {
    /// Polar components in, Cartesian components out: `M(θ) = exp(−iθσ₁/2)`.
    PolarToCartesian,
    /// Cartesian in, polar out: `M⁻¹(θ) = exp(+iθσ₁/2)`.
    CartesianToPolar,
}

/// `exp(∓ i θ σ₁ / 2)`.
pub fn basis_change_matrix(theta: f64, direction: BasisDirection) -> Unitary2 {
    let (s, c) = (0.5 * theta).sin_cos();
    let off = match direction {
        BasisDirection::PolarToCartesian => C64::new(0.0, -s),
        BasisDirection::CartesianToPolar => C64::new(0.0, s),
    };
    let diag = C64::new(c, 0.0);
    Unitary2::new(diag, off, off, diag)
}

/// Re-express `field` in the `target` spin basis, site by site.
pub fn change_spin_basis(field: &SpinorField, target: SpinBasis) -> Result<SpinorField> {
    if field.basis == target {
        return Err(Error::BasisMismatch {
            expected: target.other(),
            found: field.basis,
        });
    }
    let direction = match target {
        SpinBasis::Cartesian => BasisDirection::PolarToCartesian,
        SpinBasis::Polar => BasisDirection::CartesianToPolar,
    };
    let grid = field.grid;
    let mats: Vec<Unitary2> = (0..grid.n_theta)
        .map(|h| basis_change_matrix(grid.theta(h), direction))
        .collect();
    let mut out = field.clone();
    out.basis = target;
    let (minus, plus) = out.components_mut();
    exec::for_each_row_pair(
        Execution::default(),
        minus,
        plus,
        grid.n_theta,
        |_, m, p| {
            for (h, mat) in mats.iter().enumerate() {
                let (a, b) = mat.apply(m[h], p[h]);
                m[h] = a;
                p[h] = b;
            }
        },
    );
    Ok(out)
}

/// Evaluate `f(r, θ)` at every site. No normalization is applied.
pub fn sample_field<F>(grid: PolarGrid, basis: SpinBasis, f: F) -> Result<SpinorField>
where
    F: Fn(f64, f64) -> Spinor + Sync + Send,
{
    let mut out = SpinorField::zeros(grid, basis);
    let (minus, plus) = out.components_mut();
    exec::for_each_row_pair(
        Execution::default(),
        minus,
        plus,
        grid.n_theta,
        |j, m, p| {
            let r = grid.r(j);
            for h in 0..grid.n_theta {
                let s = f(r, grid.theta(h));
                m[h] = s.minus;
                p[h] = s.plus;
            }
        },
    );
    out.check_finite()?;
    Ok(out)
}
