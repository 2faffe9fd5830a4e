//! Angular-momentum observables.
//!
//! `Ĵ = −i∂_θ` is diagonal in the angular Fourier basis, so expectations are
//! computed spectrally. FFT index `p ∈ [0, n_theta)` of a row on the 4π
//! circle is the mode `e^{ikθ}` with
//!
//! ```text
//! k = (((p + n_theta/2) mod n_theta) − n_theta/2) / 2
//! ```
//!
//! Half-integer `k` (odd signed index) are the physical, anti-periodic modes;
//! integer `k` must stay empty for polar-basis walk states. The transform is
//! scaled by `1/√n_theta` so Parseval holds with the same `ε²` measure as
//! [`crate::field::inner_product`].

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::exec::{self, Execution};
use crate::field::{change_spin_basis, PolarGrid, SpinBasis, SpinorField};
use crate::{Error, Result, C64};

/// Signed mode index `2k` for FFT bin `p`.
pub fn signed_index(p: usize, n_theta: usize) -> i64 {
    let n = n_theta as i64;
    (p as i64 + n / 2).rem_euclid(n) - n / 2
}

/// Angular wave number `k` of FFT bin `p`.
pub fn mode_k(p: usize, n_theta: usize) -> f64 {
    signed_index(p, n_theta) as f64 / 2.0
}

/// Reusable forward/inverse angular transforms for one `n_theta`.
#[derive(Clone)]
pub struct ThetaTransform {
    n_theta: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    exec: Execution,
}

impl ThetaTransform {
    pub fn new(n_theta: usize) -> Self {
        let mut planner = FftPlanner::new();
        ThetaTransform {
            n_theta,
            forward: planner.plan_fft_forward(n_theta),
            inverse: planner.plan_fft_inverse(n_theta),
            exec: Execution::default(),
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    fn run(&self, fft: &Arc<dyn Fft<f64>>, data: &mut [C64]) {
        let scale = 1.0 / (self.n_theta as f64).sqrt();
        exec::for_each_row(self.exec, data, self.n_theta, |_, row| {
            let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(row, &mut scratch);
            row.iter_mut().for_each(|z| *z *= scale);
        });
    }

    pub fn forward(&self, field: &SpinorField) -> Result<ThetaSpectrum> {
        if field.grid().n_theta() != self.n_theta {
            return Err(Error::GridMismatch);
        }
        let mut modes = field.data().to_vec();
        self.run(&self.forward, &mut modes);
        Ok(ThetaSpectrum {
            grid: *field.grid(),
            basis: field.basis(),
            modes,
        })
    }

    pub fn inverse(&self, spectrum: &ThetaSpectrum) -> Result<SpinorField> {
        if spectrum.grid.n_theta() != self.n_theta {
            return Err(Error::GridMismatch);
        }
        let mut data = spectrum.modes.clone();
        self.run(&self.inverse, &mut data);
        SpinorField::from_raw(spectrum.grid, spectrum.basis, data)
    }
}

/// Per-radius angular Fourier amplitudes `c_k(j)` of both components.
///
/// Layout mirrors [`SpinorField`]: `modes[(c * n_r + j) * n_theta + p]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSpectrum {
    grid: PolarGrid,
    basis: SpinBasis,
    modes: Vec<C64>,
}

impl ThetaSpectrum {
    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn basis(&self) -> SpinBasis {
        self.basis
    }

    /// Amplitude of bin `p` for component `c` at radius index `j`.
    pub fn amplitude(&self, c: usize, j: usize, p: usize) -> C64 {
        self.modes[(c * self.grid.n_r() + j) * self.grid.n_theta() + p]
    }

    pub fn modes(&self) -> &[C64] {
        &self.modes
    }

    /// `Σ_c Σ_j |c_k(j)|² ε²` for every bin, in bin order.
    ///
    /// Accumulation runs over components then radii in index order.
    pub fn mode_energies(&self) -> Vec<f64> {
        let n_t = self.grid.n_theta();
        let mut out = vec![0.0; n_t];
        for row in self.modes.chunks(n_t) {
            for (e, z) in out.iter_mut().zip(row) {
                *e += z.norm_sqr();
            }
        }
        let cell = self.grid.cell();
        out.iter_mut().for_each(|e| *e *= cell);
        out
    }

    pub fn total_energy(&self) -> f64 {
        self.mode_energies().iter().sum()
    }

    /// Energy in integer-`k` bins over total energy.
    pub fn even_mode_fraction(&self) -> Result<f64> {
        let energies = self.mode_energies();
        let total: f64 = energies.iter().sum();
        if total == 0.0 {
            return Err(Error::ZeroField);
        }
        let n_t = self.grid.n_theta();
        let even: f64 = energies
            .iter()
            .enumerate()
            .filter(|(p, _)| signed_index(*p, n_t) % 2 == 0)
            .map(|(_, e)| e)
            .sum();
        Ok(even / total)
    }

    /// `Σ_k k E_k / Σ_k E_k`.
    pub fn mean_k(&self) -> Result<f64> {
        let energies = self.mode_energies();
        let total: f64 = energies.iter().sum();
        if total == 0.0 {
            return Err(Error::ZeroField);
        }
        let n_t = self.grid.n_theta();
        let weighted: f64 = energies
            .iter()
            .enumerate()
            .map(|(p, e)| mode_k(p, n_t) * e)
            .sum();
        Ok(weighted / total)
    }
}

pub fn theta_spectrum(field: &SpinorField) -> Result<ThetaSpectrum> {
    ThetaTransform::new(field.grid().n_theta()).forward(field)
}

pub fn even_mode_energy_fraction(field: &SpinorField) -> Result<f64> {
    theta_spectrum(field)?.even_mode_fraction()
}

/// `⟨Ĵ⟩ = ⟨−i∂_θ⟩`, normalized by the field's squared norm.
pub fn angular_momentum(field: &SpinorField) -> Result<f64> {
    theta_spectrum(field)?.mean_k()
}

/// Kinetic and spin parts of the total angular momentum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitalSpin {
    pub orbital: f64,
    pub spin: f64,
}

impl OrbitalSpin {
    pub fn total(&self) -> f64 {
        self.orbital + self.spin
    }
}

/// Split `⟨Ĵ⟩` into `⟨−i∂_θ⟩` and `½⟨σ₁⟩`, both taken on the Cartesian-basis
/// components. A polar field is converted first.
///
/// The sum reproduces the polar-basis `⟨Ĵ⟩` exactly when the outermost
/// half-integer modes are empty; otherwise the `e^{±iθ/2}` factors of the
/// basis change alias onto the Nyquist bin.
pub fn orbital_spin_decomposition(field: &SpinorField) -> Result<OrbitalSpin> {
    let cart = match field.basis() {
        SpinBasis::Cartesian => field.clone(),
        SpinBasis::Polar => change_spin_basis(field, SpinBasis::Cartesian)?,
    };
    let orbital = angular_momentum(&cart)?;
    let (minus, plus) = cart.components();
    let n_t = cart.grid().n_theta();
    let partials = exec::map_rows(Execution::default(), cart.grid().n_r(), |j| {
        let r = j * n_t..(j + 1) * n_t;
        minus[r.clone()]
            .iter()
            .zip(&plus[r])
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>()
    });
    let overlap: f64 = partials.into_iter().sum::<f64>() * cart.grid().cell();
    let norm = cart.norm_sqr();
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(OrbitalSpin {
        orbital,
        spin: overlap / norm,
    })
}

/// Observables of one snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditRow {
    pub step: usize,
    pub norm: f64,
    pub j_expectation: f64,
    pub even_mode_fraction: f64,
}

/// Conservation summary over a sequence of snapshots.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    /// `max_i |‖Φ_i‖ − ‖Φ_0‖| / ‖Φ_0‖`.
    pub max_norm_drift: f64,
    /// `max_i |⟨Ĵ⟩_i − ⟨Ĵ⟩_0|`.
    pub max_j_drift: f64,
    pub max_even_mode_fraction: f64,
    /// Largest change of a single mode's energy between consecutive
    /// snapshots, relative to the earlier snapshot's total.
    pub max_mode_energy_step: f64,
}

/// Incremental auditor for long runs that should not keep every snapshot.
pub struct Auditor {
    transform: ThetaTransform,
    rows: Vec<AuditRow>,
    last_modes: Option<Vec<f64>>,
    max_mode_energy_step: f64,
}

impl Auditor {
    pub fn new(n_theta: usize) -> Self {
        Auditor {
            transform: ThetaTransform::new(n_theta),
            rows: Vec::new(),
            last_modes: None,
            max_mode_energy_step: 0.0,
        }
    }

    pub fn record(&mut self, step: usize, field: &SpinorField) -> Result<&AuditRow> {
        let spec = self.transform.forward(field)?;
        let energies = spec.mode_energies();
        let total: f64 = energies.iter().sum();
        if let Some(prev) = &self.last_modes {
            let prev_total: f64 = prev.iter().sum();
            let worst = prev
                .iter()
                .zip(&energies)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if prev_total > 0.0 {
                self.max_mode_energy_step = self.max_mode_energy_step.max(worst / prev_total);
            }
        }
        self.rows.push(AuditRow {
            step,
            norm: total.sqrt(),
            j_expectation: spec.mean_k()?,
            even_mode_fraction: spec.even_mode_fraction()?,
        });
        self.last_modes = Some(energies);
        Ok(self.rows.last().unwrap())
    }

    pub fn finish(self) -> AuditReport {
        let (n0, j0) = self
            .rows
            .first()
            .map(|r| (r.norm, r.j_expectation))
            .unwrap_or((1.0, 0.0));
        let mut report = AuditReport {
            max_norm_drift: 0.0,
            max_j_drift: 0.0,
            max_even_mode_fraction: 0.0,
            max_mode_energy_step: self.max_mode_energy_step,
            rows: Vec::new(),
        };
        for r in &self.rows {
            report.max_norm_drift = report.max_norm_drift.max((r.norm - n0).abs() / n0);
            report.max_j_drift = report.max_j_drift.max((r.j_expectation - j0).abs());
            report.max_even_mode_fraction = report.max_even_mode_fraction.max(r.even_mode_fraction);
        }
        report.rows = self.rows;
        report
    }
}

/// Audit a recorded history (at least two snapshots on one grid).
pub fn conservation_audit(history: &[SpinorField]) -> Result<AuditReport> {
    let first = history
        .first()
        .ok_or_else(|| Error::Domain("audit needs at least two snapshots".into()))?;
    if history.len() < 2 {
        return Err(Error::Domain("audit needs at least two snapshots".into()));
    }
    let mut auditor = Auditor::new(first.grid().n_theta());
    for (i, f) in history.iter().enumerate() {
        if f.grid() != first.grid() {
            return Err(Error::GridMismatch);
        }
        auditor.record(i, f)?;
    }
    Ok(auditor.finish())
}
