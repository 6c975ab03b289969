//! Operator identities evaluated by direct matrix algebra.

use num_complex::Complex64;

use super::operator::{add, max_abs, on_vacuum, scale, vacuum_commutator_of};
use super::{FockSpace, Spectrum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityResidual {
    /// max |i[H₀, ρ(z)] + ∂J/∂z|
    pub residual: f64,
    /// max |∂J/∂z|
    pub scale: f64,
}

impl ContinuityResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual
        } else {
            self.residual / self.scale
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwingerTerms {
    /// i ∂/∂x ⟨0|[ρ(z), J(x)]|0⟩ at x = z, by central difference.
    pub lhs: f64,
    /// 2⟨0|ρ(z) H₀ ρ(z)|0⟩
    pub rhs1: f64,
    /// 2 Σ_n ε_n |⟨n|ρ(z)|0⟩|² over the H₀ eigenbasis.
    pub rhs2: f64,
    /// Upper bound on the central-difference error, rhs1·(ω_max δ)²/6.
    pub stencil_bound: f64,
}

impl FockSpace {
    /// ⟨0|[J(z), ρ(z′)]|0⟩
    pub fn vacuum_commutator(&self, z: f64, z_prime: f64) -> Complex64 {
        let current = self.current(z);
        let density = self.density(z_prime);
        vacuum_commutator_of(&current.matrix, &density.matrix)
    }

    pub fn continuity_residual(&self, z: f64) -> ContinuityResidual {
        let ops = self.build_density_operators(z);
        let i_commutator = scale(&self.commutator_with_h0(&ops.density.matrix), Complex64::i());
        let sum = add(&i_commutator, &ops.current_gradient.matrix);
        ContinuityResidual {
            residual: max_abs(&sum),
            scale: ops.current_gradient.max_abs(),
        }
    }

    /// ⟨0|[ρ(y), ρ(x)]|0⟩
    pub fn charge_commutator_vacuum(&self, y: f64, x: f64) -> Complex64 {
        vacuum_commutator_of(&self.density(y).matrix, &self.density(x).matrix)
    }

    /// Largest usable differencing step: a tenth of the shortest kernel wavelength scale.
    pub fn max_schwinger_step(&self) -> f64 {
        let spec = self.spec();
        0.1 * spec.length / (2.0 * spec.r_cut as f64 * 2.0 * std::f64::consts::PI)
    }

    pub fn schwinger_positivity(&self, z: f64, delta: f64) -> Result<SchwingerTerms> {
        let max = self.max_schwinger_step();
        if !(delta > 0.0 && delta <= max) {
            return Err(Error::StencilTooCoarse { delta, max });
        }
        let density = self.density(z);
        let c = |x: f64| vacuum_commutator_of(&density.matrix, &self.current(x).matrix);
        let derivative = (c(z + delta) - c(z - delta)) / (2.0 * delta);
        let lhs = (Complex64::i() * derivative).re;

        let v = on_vacuum(&density.matrix);
        let rhs1 = 2.0
            * v.iter()
                .zip(self.state_energies())
                .map(|(a, e)| a.norm_sqr() * e)
                .sum::<f64>();
        let rhs2 = 2.0
            * match self.spectrum() {
                Spectrum::Dense(eig) => eig
                    .eigenvalues
                    .iter()
                    .zip(eig.eigenvectors.column_iter())
                    .map(|(eps, n)| {
                        let overlap: Complex64 = n.iter().zip(v.iter()).map(|(a, b)| b * *a).sum();
                        eps * overlap.norm_sqr()
                    })
                    .sum::<f64>(),
                Spectrum::Diagonal(eps) => eps.iter().zip(v.iter()).map(|(e, a)| e * a.norm_sqr()).sum(),
            };
        let omega = 2.0 * self.spec().momentum_cutoff();
        Ok(SchwingerTerms {
            lhs,
            rhs1,
            rhs2,
            stencil_bound: rhs1 * (omega * delta).powi(2) / 6.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::commutator_kernel_finite;
    use crate::modes::LatticeSpec;
    use approx::assert_abs_diff_eq;
    use rand::{rngs::StdRng, RngExt, SeedableRng};
    use std::f64::consts::PI;

    fn space(length: f64, r_cut: u32, charge: f64) -> FockSpace {
        FockSpace::new(&LatticeSpec::new(length, r_cut, 1.0, charge).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_commutator_hand_value() {
        let fs = space(2.0 * PI, 1, 1.0);
        let k = fs.vacuum_commutator(0.3, 0.3 + PI / 2.0);
        let expected = -2.0 * 2f64.sqrt() / (4.0 * PI * PI);
        assert_abs_diff_eq!(k.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.im, expected, epsilon = 1e-14);
        assert!(fs.vacuum_commutator(1.1, 1.1).norm() <= 1e-15);
    }

    #[test]
    fn vacuum_commutator_matches_kernel() {
        let fs = FockSpace::new(&LatticeSpec::new(7.0, 1, 0.6, 1.4).unwrap()).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let z = rng.random_range(-3.5..3.5);
            let zp = rng.random_range(-3.5..3.5);
            let oracle = fs.vacuum_commutator(z, zp);
            let analytic = commutator_kernel_finite(zp - z, fs.spec());
            assert!((oracle - analytic).norm() <= 1e-12, "{oracle} vs {analytic}");
            assert!(oracle.re.abs() <= 1e-14);
        }
    }

    #[test]
    fn continuity_holds_and_scales_with_charge() {
        let unit = space(2.0 * PI, 1, 1.0);
        let double = space(2.0 * PI, 1, 2.0);
        for z in [0.0, 0.9, -2.3] {
            let a = unit.continuity_residual(z);
            let b = double.continuity_residual(z);
            assert!(a.residual <= 1e-12 * a.scale, "{a:?}");
            assert_abs_diff_eq!(b.scale, 2.0 * a.scale, epsilon = 1e-13);
        }
    }

    #[test]
    fn charge_commutator_vanishes_but_schwinger_term_does_not() {
        let fs = space(10.0, 1, 1.0);
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let y = rng.random_range(-5.0..5.0);
            let x = rng.random_range(-5.0..5.0);
            assert!(fs.charge_commutator_vacuum(y, x).norm() <= 1e-12);
            if (y - x).abs() > 0.1 {
                assert!(fs.vacuum_commutator(y, x).norm() > 1e-6);
            }
        }
    }

    #[test]
    fn schwinger_terms_agree() {
        let fs = space(10.0, 1, 1.0);
        let delta = fs.max_schwinger_step();
        let terms = fs.schwinger_positivity(0.4, delta).unwrap();
        assert!(terms.rhs1 > 0.0);
        assert_abs_diff_eq!(terms.rhs1, terms.rhs2, epsilon = 1e-12);
        assert!((terms.lhs - terms.rhs1).abs() <= terms.stencil_bound);
        assert!(terms.lhs <= terms.rhs1);
    }

    #[test]
    fn schwinger_step_guard() {
        let fs = space(10.0, 1, 1.0);
        let max = fs.max_schwinger_step();
        assert!(matches!(
            fs.schwinger_positivity(0.0, 2.0 * max),
            Err(Error::StencilTooCoarse { .. })
        ));
        assert!(fs.schwinger_positivity(0.0, 0.0).is_err());
    }
}
