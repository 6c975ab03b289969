//! Vacuum commutator kernel ⟨0|[Ĵ(z), ρ̂(z′)]|0⟩ and its continuum-limit ingredients.
//!
//! On the truncated mode set the kernel depends only on w = z′ − z:
//!
//!   K(w) = (q²/L²) Σ_{r,s} (p_r/E_r − p_s/E_s) e^{i(p_s − p_r) w}
//!        = (q²/L²) D(w) (A(w) − A(−w)),
//!
//!   A(w) = Σ_r (p_r/E_r) e^{−i p_r w},   D(w) = Σ_s e^{i p_s w}.
//!
//! The overall sign is the one produced by direct matrix evaluation in the Fock
//! space (see `fock::FockSpace::vacuum_commutator`), which is the authority for it.
//! The factorized form costs O(r_cut) per separation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modes::{energy, LatticeSpec};
use crate::quad::integrate_with_breaks;

/// Absolute tolerance used by [`IntegralMode::quadrature`].
pub const DEFAULT_QUADRATURE_TOLERANCE: f64 = 1e-9;

// Phasors are advanced by complex multiplication and re-seeded exactly at this stride.
const RESEED_STRIDE: i64 = 64;

pub fn commutator_kernel_finite(w: f64, spec: &LatticeSpec) -> Complex64 {
    let step = 2.0 * PI / spec.length;
    let rotation = Complex64::from_polar(1.0, -step * w);
    let mut phasor = Complex64::new(1.0, 0.0);

    let mut a_plus = Complex64::new(0.0, 0.0); // A(w)
    let mut a_minus = Complex64::new(0.0, 0.0); // A(−w)
    let mut dirichlet = 1.0;
    for r in 1..=spec.r_cut as i64 {
        phasor = if r % RESEED_STRIDE == 0 {
            Complex64::from_polar(1.0, -step * r as f64 * w)
        } else {
            phasor * rotation
        };
        let p = step * r as f64;
        let velocity = p / energy(p, spec.mass);
        // Terms r and −r together; p_{−r}/E_{−r} = −p_r/E_r.
        a_plus += velocity * (phasor - phasor.conj());
        a_minus += velocity * (phasor.conj() - phasor);
        dirichlet += 2.0 * phasor.re;
    }
    let prefactor = spec.charge * spec.charge / (spec.length * spec.length);
    (a_plus - a_minus) * (prefactor * dirichlet)
}

/// Kernel values on a separation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSamples {
    pub spec: LatticeSpec,
    pub separations: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl KernelSamples {
    pub fn evaluate(spec: &LatticeSpec, separations: &[f64]) -> Self {
        let values = separations
            .par_iter()
            .map(|&w| commutator_kernel_finite(w, spec))
            .collect();
        Self {
            spec: *spec,
            separations: separations.to_vec(),
            values,
        }
    }

    pub fn on_uniform_grid(spec: &LatticeSpec, w_min: f64, w_max: f64, n: usize) -> Result<Self> {
        Ok(Self::evaluate(spec, &uniform_grid(w_min, w_max, n)?))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// max |Re K| / max |K|; zero for an all-zero sample set.
    pub fn real_part_ratio(&self) -> f64 {
        let scale = self.max_magnitude();
        if scale == 0.0 {
            return 0.0;
        }
        self.values.iter().map(|v| v.re.abs()).fold(0.0, f64::max) / scale
    }

    /// max |K(w) + K(−w)| over mirrored grid points. `None` if the grid is not
    /// symmetric about zero.
    pub fn odd_symmetry_residual(&self) -> Option<f64> {
        let n = self.separations.len();
        let symmetric = (0..n).all(|i| {
            let (a, b) = (self.separations[i], self.separations[n - 1 - i]);
            (a + b).abs() <= 1e-12 * a.abs().max(1.0)
        });
        if !symmetric {
            return None;
        }
        Some(
            (0..n)
                .map(|i| (self.values[i] + self.values[n - 1 - i]).norm())
                .fold(0.0, f64::max),
        )
    }
}

pub(crate) fn uniform_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::InvalidGrid(format!("need n >= 1 and min <= max, got [{lo}, {hi}] with n = {n}")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * h })
        .collect())
}

/// I(p, k) = p/E_p − (p + k)/E_{p+k}.
pub fn integrand_i(p: f64, k: f64, mass: f64) -> f64 {
    p / energy(p, mass) - (p + k) / energy(p + k, mass)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralMode {
    ClosedForm,
    Quadrature { tolerance: f64 },
}

impl IntegralMode {
    pub fn quadrature() -> Self {
        IntegralMode::Quadrature {
            tolerance: DEFAULT_QUADRATURE_TOLERANCE,
        }
    }
}

/// ∫_{−P}^{P} I(p, k) dp.
///
/// The antiderivative of I is E_p − E_{p+k}; with E_p = E_{−p} the value is
/// E_{P−k} − E_{P+k}, which tends to −2k. It is evaluated as
/// −4Pk / (E_{P−k} + E_{P+k}) to avoid cancellation at large P.
pub fn integral_i_cutoff(k: f64, mass: f64, cutoff: f64, mode: IntegralMode) -> Result<f64> {
    if !(cutoff > k.abs()) {
        return Err(Error::CutoffTooSmall { k, cutoff });
    }
    match mode {
        IntegralMode::ClosedForm => {
            let below = energy(cutoff - k, mass);
            let above = energy(cutoff + k, mass);
            Ok(-4.0 * cutoff * k / (below + above))
        }
        IntegralMode::Quadrature { tolerance } => {
            if k == 0.0 {
                return Ok(0.0);
            }
            let out = integrate_with_breaks(
                |p| integrand_i(p, k, mass),
                -cutoff,
                cutoff,
                &[0.0, -k],
                tolerance,
            )?;
            Ok(out.value)
        }
    }
}

/// Fourier multiplier of the first-order vacuum current: (i q²/2π) ∫ I(p, k) dp.
///
/// Tends to −i q² k/π as the cutoff grows.
pub fn response_coefficient(k: f64, mass: f64, charge: f64, cutoff: f64, mode: IntegralMode) -> Result<Complex64> {
    let integral = integral_i_cutoff(k, mass, cutoff, mode)?;
    Ok(Complex64::new(0.0, charge * charge / (2.0 * PI)) * integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{rngs::StdRng, RngExt, SeedableRng};

    /// Literal double sum over both mode indices.
    fn double_sum(w: f64, spec: &LatticeSpec) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for r in spec.mode_indices() {
            for s in spec.mode_indices() {
                let (pr, ps) = (spec.momentum(r), spec.momentum(s));
                let weight = pr / energy(pr, spec.mass) - ps / energy(ps, spec.mass);
                total += weight * Complex64::from_polar(1.0, (ps - pr) * w);
            }
        }
        total * (spec.charge * spec.charge / (spec.length * spec.length))
    }

    #[test]
    fn vanishes_at_coincident_points() {
        let spec = LatticeSpec::new(7.0, 9, 0.8, 1.3).unwrap();
        assert_eq!(commutator_kernel_finite(0.0, &spec), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn three_mode_hand_value() {
        // A(w) − A(−w) = −2√2 i sin w, D(w) = 1 + 2cos w; at w = π/2: −2√2 i / (4π²).
        let spec = LatticeSpec::new(2.0 * PI, 1, 1.0, 1.0).unwrap();
        let k = commutator_kernel_finite(PI / 2.0, &spec);
        let expected = -2.0 * 2f64.sqrt() / (4.0 * PI * PI);
        assert_abs_diff_eq!(k.im, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(k.im, -0.071_644_5, epsilon = 1e-6);
        assert_abs_diff_eq!(k.re, 0.0, epsilon = 1e-16);
    }

    #[test]
    fn factorized_matches_double_sum() {
        let spec = LatticeSpec::new(10.0, 4, 0.5, 1.0).unwrap();
        let diff = commutator_kernel_finite(1.3, &spec) - double_sum(1.3, &spec);
        assert!(diff.norm() < 1e-13, "diff = {diff}");
    }

    #[test]
    fn factorized_matches_double_sum_past_reseed_stride() {
        let spec = LatticeSpec::new(31.0, 150, 1.7, 0.6).unwrap();
        for w in [-7.1, 0.013, 2.9, 15.2] {
            let diff = commutator_kernel_finite(w, &spec) - double_sum(w, &spec);
            assert!(diff.norm() < 1e-12, "w = {w}: diff = {diff}");
        }
    }

    #[test]
    fn periodic_in_box_length() {
        let spec = LatticeSpec::new(5.0, 12, 1.0, 1.0).unwrap();
        let a = commutator_kernel_finite(0.7, &spec);
        let b = commutator_kernel_finite(0.7 + spec.length, &spec);
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn zero_mean_over_a_period() {
        let spec = LatticeSpec::new(8.0, 6, 1.0, 1.0).unwrap();
        let n = 256;
        let h = spec.length / n as f64;
        let mean: Complex64 = (0..n)
            .map(|j| commutator_kernel_finite(-0.5 * spec.length + j as f64 * h, &spec))
            .sum::<Complex64>()
            * h;
        assert!(mean.norm() < 1e-10);
    }

    #[test]
    fn samples_invariants() {
        let spec = LatticeSpec::new(10.0, 20, 1.0, 1.0).unwrap();
        let samples = KernelSamples::on_uniform_grid(&spec, -5.0, 5.0, 101).unwrap();
        assert!(samples.real_part_ratio() <= 1e-12);
        assert!(samples.odd_symmetry_residual().unwrap() <= 1e-12 * samples.max_magnitude());
        assert_eq!(samples.values[50], Complex64::new(0.0, 0.0));
        let lopsided = KernelSamples::evaluate(&spec, &[0.0, 1.0]);
        assert!(lopsided.odd_symmetry_residual().is_none());
    }

    #[test]
    fn grid_rejects_bad_ranges() {
        assert!(uniform_grid(1.0, 0.0, 5).is_err());
        assert!(uniform_grid(0.0, 1.0, 0).is_err());
        assert_eq!(uniform_grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn integrand_examples() {
        assert_eq!(integrand_i(7.0, 0.0, 3.0), 0.0);
        assert_abs_diff_eq!(integrand_i(0.0, 3.0, 4.0), -0.6, epsilon = 1e-15);
        // Both tails decay as −m²k/|p|³, which is what makes the integral converge.
        let asymptote = -1.0 / 100f64.powi(3);
        for p in [100.0, -100.0] {
            let tail = integrand_i(p, 1.0, 1.0);
            assert!((tail - asymptote).abs() <= 0.05 * asymptote.abs(), "p = {p}: {tail}");
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(integral_i_cutoff(0.0, 2.0, 5.0, IntegralMode::ClosedForm).unwrap(), 0.0);
        let v = integral_i_cutoff(1.0, 1.0, 10.0, IntegralMode::ClosedForm).unwrap();
        assert_abs_diff_eq!(v, 82f64.sqrt() - 122f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(v, -1.989_975_6, epsilon = 1e-6);
        let far = integral_i_cutoff(1.0, 1.0, 1e7, IntegralMode::ClosedForm).unwrap();
        assert_abs_diff_eq!(far, -2.0, epsilon = 1e-13);
    }

    #[test]
    fn cutoff_must_dominate_k() {
        for mode in [IntegralMode::ClosedForm, IntegralMode::quadrature()] {
            assert_eq!(
                integral_i_cutoff(2.0, 1.0, 2.0, mode),
                Err(Error::CutoffTooSmall { k: 2.0, cutoff: 2.0 })
            );
            assert!(integral_i_cutoff(-3.0, 1.0, 1.0, mode).is_err());
        }
    }

    #[test]
    fn cutoff_error_law() {
        for (k, m) in [(1.0, 1.0), (0.3, 2.0), (-2.0, 0.5), (5.0, 1.5)] {
            for factor in [10.0, 20.0, 50.0, 100.0] {
                let cutoff = factor * f64::abs(k);
                let v = integral_i_cutoff(k, m, cutoff, IntegralMode::ClosedForm).unwrap();
                let bound = 1.1 * m * m * f64::abs(k) / (cutoff * cutoff - k * k);
                assert!((v + 2.0 * k).abs() <= bound, "k={k} m={m} P={cutoff}");
            }
        }
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..20 {
            let k: f64 = rng.random_range(-5.0..5.0);
            let m: f64 = rng.random_range(0.05..3.0);
            let cutoff = k.abs() * rng.random_range(1.5..40.0) + rng.random_range(0.1..5.0);
            let exact = integral_i_cutoff(k, m, cutoff, IntegralMode::ClosedForm).unwrap();
            let numeric = integral_i_cutoff(k, m, cutoff, IntegralMode::quadrature()).unwrap();
            assert!(
                (exact - numeric).abs() <= DEFAULT_QUADRATURE_TOLERANCE,
                "k={k} m={m} P={cutoff}: {exact} vs {numeric}"
            );
        }
    }

    #[test]
    fn response_coefficient_limits() {
        assert_eq!(response_coefficient(0.0, 1.0, 1.0, 50.0, IntegralMode::ClosedForm).unwrap().norm(), 0.0);
        let c = response_coefficient(1.0, 1.0, 1.0, 1e8, IntegralMode::ClosedForm).unwrap();
        assert_abs_diff_eq!(c.im, -1.0 / PI, epsilon = 1e-12);
        assert_abs_diff_eq!(c.re, 0.0, epsilon = 1e-15);
        let plus = response_coefficient(0.7, 1.2, 0.9, 30.0, IntegralMode::ClosedForm).unwrap();
        let minus = response_coefficient(-0.7, 1.2, 0.9, 30.0, IntegralMode::ClosedForm).unwrap();
        assert_eq!(plus, -minus);
    }
}
