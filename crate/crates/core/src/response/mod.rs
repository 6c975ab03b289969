//! Linear current response δJ(z) to a pure-gauge perturbation.
//!
//! Three routes are provided:
//! - closed form in the infinite-cutoff limit, δJ = (q²/π) ∂χ/∂z;
//! - spectral, δJ(z) = ∫ C(k) χ̂(k) e^{−ikz} dk with the cutoff-P coefficient C(k);
//! - finite box, δJ(z) = i ∫ χ(z′) K(z′ − z) dz′ with the finite-L commutator kernel.

pub mod gauge;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{response_coefficient, IntegralMode};
use crate::modes::LatticeSpec;

pub use gauge::{
    electric_field_of, FourierSpectrum, GaugeFunction, GaugeProfile, KGrid, SpectralLine, TimeEnvelope,
};

/// Imaginary parts above this fraction of the peak magnitude are reported as errors.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

pub fn delta_j_closed(chi: &GaugeFunction, charge: f64, z: &[f64]) -> Vec<f64> {
    let scale = charge * charge / PI;
    z.iter().map(|&z| scale * chi.dz(z, 0.0)).collect()
}

fn check_real(values: &[Complex64]) -> Result<Vec<f64>> {
    let peak = values.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let residue = values.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if residue > IMAGINARY_TOLERANCE * peak {
        return Err(Error::ImaginaryResidue {
            residue,
            limit: IMAGINARY_TOLERANCE,
        });
    }
    Ok(values.iter().map(|c| c.re).collect())
}

/// Spectral period wide enough that periodic images of a localized profile stay
/// away from every requested output point.
pub fn default_spectral_period(profile: &GaugeProfile, z: &[f64]) -> f64 {
    let z_abs = z.iter().map(|x| x.abs()).fold(0.0, f64::max);
    (4.0 * (z_abs + profile.extent())).max(1.0)
}

/// δJ from the cutoff-P response coefficient. C(−k) = −C(k) is used to evaluate
/// the coefficient only for k >= 0.
pub fn delta_j_spectral(
    chi: &GaugeFunction,
    spec: &LatticeSpec,
    cutoff: f64,
    k_grid: &KGrid,
    z: &[f64],
    mode: IntegralMode,
) -> Result<Vec<f64>> {
    let ks = k_grid.points();
    let spectrum = chi.profile.fourier_coefficients(&ks)?;
    let coefficient = |k: f64| -> Result<Complex64> {
        let c = response_coefficient(k.abs(), spec.mass, spec.charge, cutoff, mode)?;
        Ok(if k < 0.0 { -c } else { c })
    };

    let density: Vec<(f64, Complex64)> = spectrum
        .k
        .par_iter()
        .zip(&spectrum.density)
        .filter(|(_, d)| d.norm() > 0.0)
        .map(|(&k, &d)| Ok((k, coefficient(k)? * d * k_grid.step)))
        .collect::<Result<_>>()?;
    let lines: Vec<(f64, Complex64)> = spectrum
        .lines
        .iter()
        .map(|l| Ok((l.k, coefficient(l.k)? * l.weight)))
        .collect::<Result<_>>()?;

    let values: Vec<Complex64> = z
        .par_iter()
        .map(|&z| {
            density
                .iter()
                .chain(&lines)
                .map(|&(k, w)| w * Complex64::from_polar(1.0, -k * z))
                .sum()
        })
        .collect();
    check_real(&values)
}

/// Node count for the finite-box quadrature. The product χ(z′)K(z′ − z) carries
/// harmonics up to 2R + n_χ, where n_χ covers the profile bandwidth; a periodic
/// trapezoid with more nodes than that integrates it exactly.
pub fn default_quadrature_nodes(spec: &LatticeSpec, profile: &GaugeProfile) -> usize {
    let n_chi = (profile.bandwidth() * spec.length / (2.0 * PI)).ceil() as usize;
    let harmonics = 2 * spec.r_cut as usize + n_chi;
    2 * (harmonics + 1)
}

/// δJ(z) = i ∫ χ(z′) K(z′ − z) dz′ over the box, by the periodic trapezoid rule on
/// `nodes` points.
///
/// The kernel is expanded in its harmonics, K(w) = (q²/L²) Σ_n c_n e^{ip_n w} with
/// c_n = Σ_{s − r = n} (v_r − v_s), so the node sum factors into χ̃_n = h Σ_j χ(z_j) e^{ip_n z_j}
/// and δJ(z) = i (q²/L²) Σ_n c_n χ̃_n e^{−ip_n z}.
pub fn delta_j_finite_l(chi: &GaugeFunction, spec: &LatticeSpec, z: &[f64], nodes: usize) -> Result<Vec<f64>> {
    chi.profile.check_box(spec.length)?;
    if nodes < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 quadrature nodes, got {nodes}")));
    }
    let length = spec.length;
    let h = length / nodes as f64;
    let samples: Vec<(f64, f64)> = (0..nodes)
        .map(|j| {
            let zj = -0.5 * length + j as f64 * h;
            (zj, chi.value(zj, 0.0))
        })
        .collect();

    let r_cut = spec.r_cut as i64;
    let velocity: Vec<f64> = spec
        .mode_indices()
        .map(|r| spec.momentum(r) / spec.energy_of_index(r))
        .collect();
    let v = |r: i64| velocity[(r + r_cut) as usize];

    let harmonics: Vec<(f64, Complex64)> = (-2 * r_cut..=2 * r_cut)
        .into_par_iter()
        .map(|n| {
            let lo = (-r_cut).max(-r_cut - n);
            let hi = r_cut.min(r_cut - n);
            let c: f64 = (lo..=hi).map(|r| v(r) - v(r + n)).sum();
            let p = spec.momentum(n);
            let transform: Complex64 = samples
                .iter()
                .map(|&(zj, x)| Complex64::from_polar(x, p * zj))
                .sum::<Complex64>()
                * h;
            (p, transform * c)
        })
        .filter(|(_, w)| w.norm() > 0.0)
        .collect();

    let scale = Complex64::new(0.0, spec.charge * spec.charge / (length * length));
    let values: Vec<Complex64> = z
        .par_iter()
        .map(|&z| {
            scale
                * harmonics
                    .iter()
                    .map(|&(p, w)| w * Complex64::from_polar(1.0, -p * z))
                    .sum::<Complex64>()
        })
        .collect();
    check_real(&values)
}

#[derive(Debug, Clone)]
pub struct ResponseOptions {
    /// Momentum cutoff P for the spectral route; defaults to 2π r_cut / L.
    pub cutoff: Option<f64>,
    pub k_grid: Option<KGrid>,
    pub integral_mode: IntegralMode,
    /// Evaluate the finite-box route as well.
    pub finite_l: bool,
    pub quadrature_nodes: Option<usize>,
}

impl Default for ResponseOptions {
    fn default() -> Self {
        Self {
            cutoff: None,
            k_grid: None,
            integral_mode: IntegralMode::ClosedForm,
            finite_l: true,
            quadrature_nodes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseResult {
    pub z: Vec<f64>,
    pub chi: Vec<f64>,
    pub dchi_dz: Vec<f64>,
    pub closed: Vec<f64>,
    pub spectral: Vec<f64>,
    pub finite_l: Option<Vec<f64>>,
    pub cutoff: f64,
    pub k_grid: KGrid,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

impl ResponseResult {
    pub fn max_closed(&self) -> f64 {
        self.closed.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn spectral_deviation(&self) -> f64 {
        max_abs_diff(&self.spectral, &self.closed)
    }

    pub fn finite_l_deviation(&self) -> Option<f64> {
        self.finite_l.as_deref().map(|f| max_abs_diff(f, &self.closed))
    }
}

pub fn compute_response(
    chi: &GaugeFunction,
    spec: &LatticeSpec,
    z: &[f64],
    options: &ResponseOptions,
) -> Result<ResponseResult> {
    let cutoff = options.cutoff.unwrap_or_else(|| spec.momentum_cutoff());
    let k_grid = match options.k_grid {
        Some(grid) => grid,
        None => KGrid::resolve(&chi.profile, default_spectral_period(&chi.profile, z))?,
    };
    let spectral = delta_j_spectral(chi, spec, cutoff, &k_grid, z, options.integral_mode)?;
    let finite_l = if options.finite_l {
        let nodes = options
            .quadrature_nodes
            .unwrap_or_else(|| default_quadrature_nodes(spec, &chi.profile));
        Some(delta_j_finite_l(chi, spec, z, nodes)?)
    } else {
        None
    };
    Ok(ResponseResult {
        z: z.to_vec(),
        chi: z.iter().map(|&z| chi.value(z, 0.0)).collect(),
        dchi_dz: z.iter().map(|&z| chi.dz(z, 0.0)).collect(),
        closed: delta_j_closed(chi, spec.charge, z),
        spectral,
        finite_l,
        cutoff,
        k_grid,
    })
}
