//! First-order Dyson term for a switched-on pure-gauge potential.
//!
//! V_I(t) = ∫ (−J_I(z,t) A_z + ρ_I(z,t) A_0) dz with (A_z, A_0) = (f g′, −f′ g), where
//! O_I(t) = e^{iH₀t} O e^{−iH₀t} is an entrywise phase in the occupation basis.

use num_complex::Complex64;

use super::operator::{add, from_triplets, max_abs_diff, scale, vacuum_commutator_of, zeros};
use super::{FockOperator, FockSpace, SparseMatrix};
use crate::error::{Error, Result};
use crate::response::{GaugeFunction, IMAGINARY_TOLERANCE};

/// Composite Simpson rule on [t₀, 0] with an even number of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpsonWeights {
    pub times: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SimpsonWeights {
    pub fn new(t0: f64, intervals: usize) -> Result<Self> {
        if intervals < 2 || intervals % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "Simpson rule needs an even number of intervals >= 2, got {intervals}"
            )));
        }
        let dt = -t0 / intervals as f64;
        let times = (0..=intervals).map(|n| t0 + n as f64 * dt).collect();
        let weights = (0..=intervals)
            .map(|n| {
                let w = if n == 0 || n == intervals {
                    1.0
                } else if n % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * dt / 3.0
            })
            .collect();
        Ok(Self { times, weights })
    }

    fn transform(&self, f: impl Fn(f64) -> f64, omega: f64) -> Complex64 {
        self.times
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| Complex64::from_polar(w * f(t), omega * t))
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    /// ∫_{t₀}^0 V_I(t) dt by Simpson's rule.
    pub integrated: FockOperator,
    /// −∫ χ(z′, 0) ρ(z′) dz′, the exact value of the time integral.
    pub expected: FockOperator,
    /// max |integrated − expected| over matrix entries.
    pub residual: f64,
    pub z: Vec<f64>,
    /// −i⟨0|[J(z), ∫V_I dt]|0⟩
    pub delta_j: Vec<f64>,
    pub time_steps: usize,
    pub z_nodes: usize,
}

impl FockSpace {
    /// Periodic trapezoid nodes on [−L/2, L/2): 8(2R+1) points, enough to integrate the
    /// bilinears against box harmonics exactly.
    pub fn z_nodes(&self) -> Vec<f64> {
        let spec = self.spec();
        let n = 8 * spec.mode_count();
        let h = spec.length / n as f64;
        (0..n).map(|j| -0.5 * spec.length + j as f64 * h).collect()
    }

    pub fn first_order_evolution(&self, chi: &GaugeFunction, time_steps: usize, z: &[f64]) -> Result<EvolutionResult> {
        let envelope = chi
            .envelope
            .as_ref()
            .ok_or_else(|| Error::InvalidEnvelope("first-order evolution needs a time envelope".into()))?;
        envelope.validate()?;
        chi.profile.check_box(self.spec().length)?;
        let simpson = SimpsonWeights::new(envelope.t0, time_steps)?;

        let nodes = self.z_nodes();
        let h = self.spec().length / nodes.len() as f64;
        let mut current_smeared = zeros(self.dim());
        let mut density_smeared = zeros(self.dim());
        let mut density_chi = zeros(self.dim());
        for &zj in &nodes {
            let psi = self.field(zj, false);
            let rho = self.bilinear(&psi, false);
            let current = self.bilinear(&psi, true);
            let dg = chi.profile.gradient(zj);
            let g = chi.profile.value(zj);
            current_smeared = add(&current_smeared, &scale(&current, Complex64::new(h * dg, 0.0)));
            density_smeared = add(&density_smeared, &scale(&rho, Complex64::new(h * g, 0.0)));
            density_chi = add(&density_chi, &scale(&rho, Complex64::new(h * chi.value(zj, 0.0), 0.0)));
        }

        let energies = self.state_energies();
        let switch = |t: f64| envelope.value(t);
        let switch_rate = |t: f64| envelope.derivative(t);
        let mut triplets: Vec<(usize, usize, Complex64)> = Vec::new();
        let terms: [(&SparseMatrix, &dyn Fn(f64) -> f64); 2] =
            [(&current_smeared, &switch), (&density_smeared, &switch_rate)];
        for (op, f) in terms {
            for (v, (i, j)) in op.iter() {
                let omega = energies[i] - energies[j];
                triplets.push((i, j, -(v * simpson.transform(f, omega))));
            }
        }
        let integrated = from_triplets(self.dim(), triplets);
        let expected = scale(&density_chi, Complex64::new(-1.0, 0.0));
        let residual = max_abs_diff(&integrated, &expected);

        let values: Vec<Complex64> = z
            .iter()
            .map(|&x| -Complex64::i() * vacuum_commutator_of(&self.current(x).matrix, &integrated))
            .collect();
        let peak = values.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let residue = values.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if residue > IMAGINARY_TOLERANCE * peak {
            return Err(Error::ImaginaryResidue {
                residue,
                limit: IMAGINARY_TOLERANCE,
            });
        }

        Ok(EvolutionResult {
            integrated: FockOperator::new(integrated, "int V_I dt", true),
            expected: FockOperator::new(expected, "-int chi rho dz", true),
            residual,
            z: z.to_vec(),
            delta_j: values.iter().map(|c| c.re).collect(),
            time_steps,
            z_nodes: nodes.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::LatticeSpec;
    use crate::response::{delta_j_finite_l, default_quadrature_nodes, GaugeProfile, TimeEnvelope};
    use approx::assert_abs_diff_eq;

    fn setup(r_cut: u32, amplitude: f64) -> (FockSpace, GaugeFunction) {
        let spec = LatticeSpec::new(10.0, r_cut, 1.0, 1.0).unwrap();
        let fs = FockSpace::new(&spec).unwrap();
        let profile = GaugeProfile::box_harmonic(amplitude, 1, spec.length).unwrap();
        let chi = GaugeFunction::new(profile, Some(TimeEnvelope::smoothstep(-4.0).unwrap())).unwrap();
        (fs, chi)
    }

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let s = SimpsonWeights::new(-2.0, 4).unwrap();
        let integral: f64 = s.times.iter().zip(&s.weights).map(|(t, w)| w * t * t * t).sum();
        assert_abs_diff_eq!(integral, -4.0, epsilon = 1e-14);
        assert!(SimpsonWeights::new(-1.0, 3).is_err());
    }

    #[test]
    fn zero_gauge_gives_zero() {
        let (fs, chi) = setup(1, 0.0);
        let out = fs.first_order_evolution(&chi, 16, &[0.0, 1.0]).unwrap();
        assert_eq!(out.integrated.max_abs(), 0.0);
        assert_eq!(out.delta_j, vec![0.0, 0.0]);
    }

    #[test]
    fn missing_envelope_rejected() {
        let (fs, chi) = setup(1, 1.0);
        let stationary = GaugeFunction::stationary(chi.profile).unwrap();
        assert!(matches!(
            fs.first_order_evolution(&stationary, 16, &[0.0]),
            Err(Error::InvalidEnvelope(_))
        ));
    }

    #[test]
    fn time_integral_reproduces_smeared_density() {
        let (fs, chi) = setup(1, 1.0);
        let coarse = fs.first_order_evolution(&chi, 64, &[]).unwrap();
        let fine = fs.first_order_evolution(&chi, 128, &[]).unwrap();
        assert!(coarse.residual <= 1e-6, "{}", coarse.residual);
        let ratio = coarse.residual / fine.residual;
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn evolution_current_matches_box_response() {
        let (fs, chi) = setup(1, 1.0);
        let z: Vec<f64> = (0..9).map(|i| -4.0 + i as f64).collect();
        let out = fs.first_order_evolution(&chi, 128, &z).unwrap();
        let nodes = default_quadrature_nodes(fs.spec(), &chi.profile);
        let box_response = delta_j_finite_l(&chi, fs.spec(), &z, nodes).unwrap();
        for (a, b) in out.delta_j.iter().zip(&box_response) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-7);
        }
    }
}
