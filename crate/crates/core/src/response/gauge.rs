//! Gauge generators χ(z, t) = f(t) g(z) and the pure-gauge potential they induce.
//!
//! The potential is A_z = ∂χ/∂z, A_0 = −∂χ/∂t; its electric field
//! E = −(∂A_z/∂t + ∂A_0/∂z) vanishes identically.
//!
//! Fourier convention: χ(z) = ∫ χ̂(k) e^{−ikz} dk, i.e. χ̂(k) = (1/2π) ∫ χ(z) e^{ikz} dz.
//! Periodic profiles (constants, sinusoids) transform to discrete spectral lines.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative magnitude below which a continuous transform is treated as zero.
pub const SPECTRAL_FLOOR: f64 = 1e-12;

/// Gaussians count as compactly supported within this many widths of the centre.
pub const GAUSSIAN_SUPPORT_WIDTHS: f64 = 8.0;

const UNIFORM_GRID_TOLERANCE: f64 = 1e-9;

/// Spatial profile g(z) = χ(z, 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum GaugeProfile {
    Constant {
        value: f64,
    },
    /// a · exp(−(z − z₀)² / 2σ²)
    Gaussian {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    /// a · sin(k₀ z)
    Sinusoid {
        amplitude: f64,
        wavenumber: f64,
    },
    /// Samples on an increasing grid; linear interpolation inside, zero outside.
    Table {
        grid: Vec<f64>,
        values: Vec<f64>,
    },
    /// Σ cᵢ gᵢ(z)
    Sum {
        terms: Vec<(f64, GaugeProfile)>,
    },
}

impl GaugeProfile {
    pub fn gaussian(amplitude: f64, width: f64, center: f64) -> Result<Self> {
        let g = GaugeProfile::Gaussian {
            amplitude,
            width,
            center,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn sinusoid(amplitude: f64, wavenumber: f64) -> Result<Self> {
        let g = GaugeProfile::Sinusoid {
            amplitude,
            wavenumber,
        };
        g.validate()?;
        Ok(g)
    }

    /// a · sin(2πn z / L): the n-th periodic harmonic of a box of length L.
    pub fn box_harmonic(amplitude: f64, n: i64, length: f64) -> Result<Self> {
        Self::sinusoid(amplitude, 2.0 * PI * n as f64 / length)
    }

    pub fn table(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let g = GaugeProfile::Table { grid, values };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidGauge(format!("{name} must be finite, got {x}")))
            }
        };
        match self {
            GaugeProfile::Constant { value } => finite("value", *value),
            GaugeProfile::Gaussian {
                amplitude,
                width,
                center,
            } => {
                finite("amplitude", *amplitude)?;
                finite("center", *center)?;
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::InvalidGauge(format!("gaussian width must be > 0, got {width}")));
                }
                Ok(())
            }
            GaugeProfile::Sinusoid {
                amplitude,
                wavenumber,
            } => {
                finite("amplitude", *amplitude)?;
                finite("wavenumber", *wavenumber)
            }
            GaugeProfile::Table { grid, values } => {
                if grid.len() < 2 || grid.len() != values.len() {
                    return Err(Error::InvalidGauge(format!(
                        "table needs >= 2 points and matching lengths (grid {}, values {})",
                        grid.len(),
                        values.len()
                    )));
                }
                if grid.iter().chain(values).any(|x| !x.is_finite()) {
                    return Err(Error::InvalidGauge("table contains non-finite entries".into()));
                }
                if grid.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidGauge("table grid must be strictly increasing".into()));
                }
                Ok(())
            }
            GaugeProfile::Sum { terms } => {
                for (c, g) in terms {
                    finite("coefficient", *c)?;
                    g.validate()?;
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, z: f64) -> f64 {
        match self {
            GaugeProfile::Constant { value } => *value,
            GaugeProfile::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let x = (z - center) / width;
                amplitude * (-0.5 * x * x).exp()
            }
            GaugeProfile::Sinusoid {
                amplitude,
                wavenumber,
            } => amplitude * (wavenumber * z).sin(),
            GaugeProfile::Table { grid, values } => interpolate(grid, values, z),
            GaugeProfile::Sum { terms } => terms.iter().map(|(c, g)| c * g.value(z)).sum(),
        }
    }

    /// ∂g/∂z; exact for analytic forms, central difference at the table step otherwise.
    pub fn gradient(&self, z: f64) -> f64 {
        match self {
            GaugeProfile::Constant { .. } => 0.0,
            GaugeProfile::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let x = (z - center) / width;
                -amplitude * x / width * (-0.5 * x * x).exp()
            }
            GaugeProfile::Sinusoid {
                amplitude,
                wavenumber,
            } => amplitude * wavenumber * (wavenumber * z).cos(),
            GaugeProfile::Table { .. } => {
                let h = self.table_step().expect("table has a step");
                (self.value(z + h) - self.value(z - h)) / (2.0 * h)
            }
            GaugeProfile::Sum { terms } => terms.iter().map(|(c, g)| c * g.gradient(z)).sum(),
        }
    }

    pub fn is_analytic(&self) -> bool {
        match self {
            GaugeProfile::Table { .. } => false,
            GaugeProfile::Sum { terms } => terms.iter().all(|(_, g)| g.is_analytic()),
            _ => true,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            GaugeProfile::Constant { .. } => true,
            GaugeProfile::Sinusoid {
                amplitude,
                wavenumber,
            } => *amplitude == 0.0 || *wavenumber == 0.0,
            GaugeProfile::Gaussian { amplitude, .. } => *amplitude == 0.0,
            GaugeProfile::Table { values, .. } => values.iter().all(|&v| v == 0.0),
            GaugeProfile::Sum { terms } => terms.iter().all(|(c, g)| *c == 0.0 || g.is_constant()),
        }
    }

    /// Mean grid spacing of a table (smallest over nested tables); `None` for analytic forms.
    pub fn table_step(&self) -> Option<f64> {
        match self {
            GaugeProfile::Table { grid, .. } => {
                Some((grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64)
            }
            GaugeProfile::Sum { terms } => terms
                .iter()
                .filter_map(|(_, g)| g.table_step())
                .reduce(f64::min),
            _ => None,
        }
    }

    /// Radius of the region outside which the profile vanishes (zero for periodic forms,
    /// whose content is carried by spectral lines).
    pub fn extent(&self) -> f64 {
        match self {
            GaugeProfile::Constant { .. } | GaugeProfile::Sinusoid { .. } => 0.0,
            GaugeProfile::Gaussian { width, center, .. } => center.abs() + GAUSSIAN_SUPPORT_WIDTHS * width,
            GaugeProfile::Table { grid, .. } => grid[0].abs().max(grid[grid.len() - 1].abs()),
            GaugeProfile::Sum { terms } => terms.iter().map(|(_, g)| g.extent()).fold(0.0, f64::max),
        }
    }

    /// Wavenumber beyond which the transform is negligible (or identically zero).
    pub fn bandwidth(&self) -> f64 {
        match self {
            GaugeProfile::Constant { .. } => 0.0,
            GaugeProfile::Sinusoid { wavenumber, .. } => wavenumber.abs(),
            // exp(−σ²k²/2) reaches 1e-13 at σk = √(2·13·ln 10).
            GaugeProfile::Gaussian { width, .. } => (26.0 * std::f64::consts::LN_10).sqrt() / width,
            GaugeProfile::Table { .. } => PI / self.table_step().expect("table has a step"),
            GaugeProfile::Sum { terms } => terms.iter().map(|(_, g)| g.bandwidth()).fold(0.0, f64::max),
        }
    }

    /// Checks that the profile can be placed in the periodic box [−L/2, L/2] without
    /// aliasing: periodic forms must be harmonics of the box; localized forms must sit
    /// inside [−L/4, L/4].
    pub fn check_box(&self, length: f64) -> Result<()> {
        let outside = |reason: String| Error::GaugeOutsideBox { length, reason };
        match self {
            GaugeProfile::Constant { .. } => Ok(()),
            GaugeProfile::Sinusoid { wavenumber, .. } => {
                let n = wavenumber * length / (2.0 * PI);
                if (n - n.round()).abs() <= 1e-9 * n.abs().max(1.0) {
                    Ok(())
                } else {
                    Err(outside(format!(
                        "wavenumber {wavenumber} is not a multiple of 2π/L (n = {n})"
                    )))
                }
            }
            GaugeProfile::Gaussian { .. } | GaugeProfile::Table { .. } => {
                let extent = self.extent();
                if extent <= 0.25 * length {
                    Ok(())
                } else {
                    Err(outside(format!(
                        "support radius {extent} exceeds L/4 = {}",
                        0.25 * length
                    )))
                }
            }
            GaugeProfile::Sum { terms } => terms.iter().try_for_each(|(_, g)| g.check_box(length)),
        }
    }

    pub fn fourier_coefficients(&self, k_grid: &[f64]) -> Result<FourierSpectrum> {
        let mut out = FourierSpectrum {
            k: k_grid.to_vec(),
            density: vec![Complex64::new(0.0, 0.0); k_grid.len()],
            lines: Vec::new(),
        };
        self.accumulate_fourier(1.0, &mut out)?;
        out.merge_lines();
        Ok(out)
    }

    fn accumulate_fourier(&self, weight: f64, out: &mut FourierSpectrum) -> Result<()> {
        match self {
            GaugeProfile::Constant { value } => out.lines.push(SpectralLine {
                k: 0.0,
                weight: Complex64::new(weight * value, 0.0),
            }),
            GaugeProfile::Sinusoid {
                amplitude,
                wavenumber,
            } => {
                if *wavenumber != 0.0 {
                    // a sin(k₀z) = (a/2i)(e^{ik₀z} − e^{−ik₀z}); e^{−ikz} at k = ±k₀.
                    let half = Complex64::new(0.0, 0.5 * weight * amplitude);
                    out.lines.push(SpectralLine {
                        k: *wavenumber,
                        weight: half,
                    });
                    out.lines.push(SpectralLine {
                        k: -wavenumber,
                        weight: -half,
                    });
                }
            }
            GaugeProfile::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let scale = weight * amplitude * width / (2.0 * PI).sqrt();
                for (slot, &k) in out.density.iter_mut().zip(&out.k) {
                    let envelope = scale * (-0.5 * width * width * k * k).exp();
                    *slot += Complex64::from_polar(envelope, k * center);
                }
            }
            GaugeProfile::Table { grid, values } => {
                let step = self.table_step().expect("table has a step");
                let deviation = grid
                    .windows(2)
                    .map(|w| (w[1] - w[0] - step).abs())
                    .fold(0.0, f64::max);
                if deviation > UNIFORM_GRID_TOLERANCE * step {
                    return Err(Error::NonUniformGrid { deviation });
                }
                let last = grid.len() - 1;
                for (slot, &k) in out.density.iter_mut().zip(&out.k) {
                    let sum: Complex64 = grid
                        .iter()
                        .zip(values)
                        .enumerate()
                        .map(|(j, (&z, &v))| {
                            let w = if j == 0 || j == last { 0.5 } else { 1.0 };
                            Complex64::from_polar(w * v, k * z)
                        })
                        .sum();
                    *slot += sum * (weight * step / (2.0 * PI));
                }
            }
            GaugeProfile::Sum { terms } => {
                for (c, g) in terms {
                    g.accumulate_fourier(weight * c, out)?;
                }
            }
        }
        Ok(())
    }
}

fn interpolate(grid: &[f64], values: &[f64], z: f64) -> f64 {
    let last = grid.len() - 1;
    if z < grid[0] || z > grid[last] {
        return 0.0;
    }
    let i = grid.partition_point(|&g| g <= z).clamp(1, last);
    let (z0, z1) = (grid[i - 1], grid[i]);
    let t = (z - z0) / (z1 - z0);
    values[i - 1] * (1.0 - t) + values[i] * t
}

/// A discrete component χ̂(k) = weight · δ(k − k_line).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub k: f64,
    pub weight: Complex64,
}

/// Transform of a profile: a density sampled on a k-grid plus discrete lines.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    pub k: Vec<f64>,
    pub density: Vec<Complex64>,
    pub lines: Vec<SpectralLine>,
}

impl FourierSpectrum {
    fn merge_lines(&mut self) {
        self.lines.sort_by(|a, b| a.k.total_cmp(&b.k));
        let mut merged: Vec<SpectralLine> = Vec::with_capacity(self.lines.len());
        for line in self.lines.drain(..) {
            match merged.last_mut() {
                Some(prev) if prev.k == line.k => prev.weight += line.weight,
                _ => merged.push(line),
            }
        }
        self.lines = merged;
    }

    pub fn max_density(&self) -> f64 {
        self.density.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Symmetric k-grid k_n = n·step, |n| <= count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KGrid {
    pub step: f64,
    pub count: usize,
}

impl KGrid {
    pub fn new(step: f64, count: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("k step must be > 0, got {step}")));
        }
        Ok(Self { step, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count as i64;
        (-n..=n).map(|i| i as f64 * self.step).collect()
    }

    pub fn k_max(&self) -> f64 {
        self.count as f64 * self.step
    }

    /// Grid with step 2π/period, truncated where |χ̂| drops below
    /// [`SPECTRAL_FLOOR`] of its maximum.
    pub fn resolve(profile: &GaugeProfile, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("spectral period must be > 0, got {period}")));
        }
        let step = 2.0 * PI / period;
        let scan = (profile.bandwidth() / step).ceil() as usize + 1;
        let probe: Vec<f64> = (0..=scan).map(|n| n as f64 * step).collect();
        let spectrum = profile.fourier_coefficients(&probe)?;
        let peak = spectrum.max_density();
        if peak == 0.0 {
            return Self::new(step, 0);
        }
        // |χ̂(−k)| = |χ̂(k)| for real profiles, so the non-negative half decides.
        let last = spectrum
            .density
            .iter()
            .rposition(|c| c.norm() > SPECTRAL_FLOOR * peak)
            .unwrap_or(0);
        Self::new(step, (last + 1).min(scan))
    }
}

/// Polynomial switch-on f(t) = Σ cₙ τⁿ with τ = (t − t₀)/(−t₀) on [t₀, 0].
///
/// Must satisfy f(t₀) = 0, f′(t₀) = 0 and f(0) = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeEnvelope {
    pub t0: f64,
    pub coefficients: Vec<f64>,
}

impl TimeEnvelope {
    pub fn new(t0: f64, coefficients: Vec<f64>) -> Result<Self> {
        let env = Self { t0, coefficients };
        env.validate()?;
        Ok(env)
    }

    /// 3τ² − 2τ³
    pub fn smoothstep(t0: f64) -> Result<Self> {
        Self::new(t0, vec![0.0, 0.0, 3.0, -2.0])
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t0 < 0.0) {
            return Err(Error::InvalidEnvelope(format!("t0 must be < 0, got {}", self.t0)));
        }
        let c = |n: usize| self.coefficients.get(n).copied().unwrap_or(0.0);
        if c(0).abs() > 1e-12 {
            return Err(Error::InvalidEnvelope(format!("χ(z, t0) ≠ 0 (f(t0) = {})", c(0))));
        }
        if c(1).abs() > 1e-12 {
            return Err(Error::InvalidEnvelope(format!("∂χ/∂t(z, t0) ≠ 0 (f'(t0) ∝ {})", c(1))));
        }
        let end: f64 = self.coefficients.iter().sum();
        if (end - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnvelope(format!("f(0) must be 1, got {end}")));
        }
        Ok(())
    }

    fn tau(&self, t: f64) -> f64 {
        ((t - self.t0) / -self.t0).clamp(0.0, 1.0)
    }

    pub fn value(&self, t: f64) -> f64 {
        let tau = self.tau(t);
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * tau + c)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        if t < self.t0 || t > 0.0 {
            return 0.0;
        }
        let tau = self.tau(t);
        let dtau = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (n, c)| acc * tau + n as f64 * c);
        dtau / -self.t0
    }
}

/// χ(z, t) = f(t) g(z); without an envelope χ is static (f ≡ 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeFunction {
    pub profile: GaugeProfile,
    pub envelope: Option<TimeEnvelope>,
}

impl GaugeFunction {
    pub fn new(profile: GaugeProfile, envelope: Option<TimeEnvelope>) -> Result<Self> {
        profile.validate()?;
        if let Some(env) = &envelope {
            env.validate()?;
        }
        Ok(Self { profile, envelope })
    }

    pub fn stationary(profile: GaugeProfile) -> Result<Self> {
        Self::new(profile, None)
    }

    fn switch(&self, t: f64) -> (f64, f64) {
        match &self.envelope {
            Some(env) => (env.value(t), env.derivative(t)),
            None => (1.0, 0.0),
        }
    }

    pub fn value(&self, z: f64, t: f64) -> f64 {
        self.switch(t).0 * self.profile.value(z)
    }

    pub fn dz(&self, z: f64, t: f64) -> f64 {
        self.switch(t).0 * self.profile.gradient(z)
    }

    pub fn dt(&self, z: f64, t: f64) -> f64 {
        self.switch(t).1 * self.profile.value(z)
    }

    /// (A_z, A_0) = (∂χ/∂z, −∂χ/∂t)
    pub fn potential(&self, z: f64, t: f64) -> (f64, f64) {
        (self.dz(z, t), -self.dt(z, t))
    }
}

/// E = −(∂A_z/∂t + ∂A_0/∂z) for the pure-gauge potential of χ.
///
/// Analytic profiles use exact mixed partials; tables use nested central differences
/// (step = table spacing in z, 1e-3·|t₀| in t).
pub fn electric_field_of(chi: &GaugeFunction, z: f64, t: f64) -> f64 {
    if chi.profile.is_analytic() {
        let (_, df) = chi.switch(t);
        let dg = chi.profile.gradient(z);
        let dt_az = df * dg;
        let dz_a0 = -(df * dg);
        return -(dt_az + dz_a0);
    }
    let hz = chi.profile.table_step().unwrap_or(1e-4);
    let ht = chi.envelope.as_ref().map_or(1e-4, |e| 1e-3 * e.t0.abs());
    let chi_at = |z: f64, t: f64| chi.value(z, t);
    let a_z = |z: f64, t: f64| (chi_at(z + hz, t) - chi_at(z - hz, t)) / (2.0 * hz);
    let a_0 = |z: f64, t: f64| -(chi_at(z, t + ht) - chi_at(z, t - ht)) / (2.0 * ht);
    let dt_az = (a_z(z, t + ht) - a_z(z, t - ht)) / (2.0 * ht);
    let dz_a0 = (a_0(z + hz, t) - a_0(z - hz, t)) / (2.0 * hz);
    -(dt_az + dz_a0)
}
