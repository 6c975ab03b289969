//! Exact truncated Fock space of the mode set |r| <= r_cut.
//!
//! Modes are ordered b_{−R..R} then d_{−R..R}; basis states are occupation bitmasks with
//! bit k set when mode k is filled, so the vacuum is state 0. Annihilating mode k picks up
//! (−1)^(number of occupied modes below k).
//!
//! ψ_c(z) = Σ_r φ_{+,r,c}(z) b_r + φ_{−,r,c}(z) d_r†, and the bilinears are the symmetrized
//! (q/2) Σ_ab M_ab (ψ_a†ψ_b − ψ_bψ_a†) with M = 1 for ρ and M = σ_x for J.

mod checks;
mod evolution;
pub mod operator;

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{EnergySign, LatticeSpec, ModeFunction};

pub use checks::{ContinuityResidual, SchwingerTerms};
pub use evolution::{EvolutionResult, SimpsonWeights};
pub use operator::{FockOperator, SparseMatrix};

use operator::{add, adjoint, from_triplets, product, scale, sub, zeros};

/// Largest mode cutoff accepted (dimension 2^18).
pub const MAX_R_CUT: u32 = 4;

/// Largest dimension for which spectra come from a dense eigendecomposition.
pub const DENSE_EIGEN_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Electron,
    Positron,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    pub spec: LatticeSpec,
    modes_per_species: usize,
}

impl FockBasis {
    pub fn new(spec: &LatticeSpec) -> Result<Self> {
        spec.validate()?;
        let modes_per_species = spec.mode_count();
        let bits = 2 * modes_per_species as u32;
        if spec.r_cut > MAX_R_CUT {
            return Err(Error::DimensionGuard {
                r_cut: spec.r_cut,
                max: MAX_R_CUT,
                bits,
            });
        }
        Ok(Self {
            spec: *spec,
            modes_per_species,
        })
    }

    pub fn mode_count(&self) -> usize {
        2 * self.modes_per_species
    }

    pub fn dim(&self) -> usize {
        1 << self.mode_count()
    }

    pub fn mode_index(&self, species: Species, r: i64) -> Result<usize> {
        if !self.spec.contains(r) {
            return Err(Error::ModeOutOfRange {
                index: r,
                r_cut: self.spec.r_cut,
            });
        }
        let offset = (r + self.spec.r_cut as i64) as usize;
        Ok(match species {
            Species::Electron => offset,
            Species::Positron => self.modes_per_species + offset,
        })
    }

    pub fn mode_of(&self, k: usize) -> (Species, i64) {
        let species = if k < self.modes_per_species {
            Species::Electron
        } else {
            Species::Positron
        };
        let r = (k % self.modes_per_species) as i64 - self.spec.r_cut as i64;
        (species, r)
    }

    pub fn mode_energy(&self, k: usize) -> f64 {
        self.spec.energy_of_index(self.mode_of(k).1)
    }

    /// H₀ eigenvalue of each occupation state: the sum of occupied mode energies.
    pub fn state_energies(&self) -> Vec<f64> {
        let energies: Vec<f64> = (0..self.mode_count()).map(|k| self.mode_energy(k)).collect();
        (0..self.dim())
            .map(|s| {
                energies
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| s & (1 << k) != 0)
                    .map(|(_, e)| e)
                    .sum()
            })
            .collect()
    }
}

/// Annihilation operator of mode k with the parity-prefix sign.
pub fn build_annihilator(basis: &FockBasis, k: usize) -> SparseMatrix {
    let bit = 1usize << k;
    let below = bit - 1;
    let triplets = (0..basis.dim()).filter(|s| s & bit != 0).map(|s| {
        let sign = if (s & below).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        (s ^ bit, s, Complex64::new(sign, 0.0))
    });
    from_triplets(basis.dim(), triplets)
}

/// The three local operators at one point.
#[derive(Debug, Clone)]
pub struct DensityOperators {
    pub z: f64,
    pub density: FockOperator,
    pub current: FockOperator,
    pub current_gradient: FockOperator,
}

/// Truncated Fock space with cached ladder operators and H₀.
#[derive(Debug)]
pub struct FockSpace {
    pub basis: FockBasis,
    annihilators: Vec<SparseMatrix>,
    creators: Vec<SparseMatrix>,
    energies: Vec<f64>,
    spectrum: OnceLock<Spectrum>,
}

/// H₀ eigenpairs: dense eigendecomposition for small spaces, occupation basis otherwise.
#[derive(Debug)]
pub enum Spectrum {
    Dense(SymmetricEigen<f64, nalgebra::Dyn>),
    Diagonal(Vec<f64>),
}

impl Spectrum {
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self {
            Spectrum::Dense(eig) => eig.eigenvalues.iter().copied().collect(),
            Spectrum::Diagonal(values) => values.clone(),
        }
    }
}

impl FockSpace {
    pub fn new(spec: &LatticeSpec) -> Result<Self> {
        let basis = FockBasis::new(spec)?;
        let annihilators: Vec<SparseMatrix> = (0..basis.mode_count())
            .map(|k| build_annihilator(&basis, k))
            .collect();
        let creators = annihilators.iter().map(adjoint).collect();
        let energies = basis.state_energies();
        Ok(Self {
            basis,
            annihilators,
            creators,
            energies,
            spectrum: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.basis.spec
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn annihilator(&self, k: usize) -> &SparseMatrix {
        &self.annihilators[k]
    }

    pub fn creator(&self, k: usize) -> &SparseMatrix {
        &self.creators[k]
    }

    pub fn ladder(&self, species: Species, r: i64) -> Result<(&SparseMatrix, &SparseMatrix)> {
        let k = self.basis.mode_index(species, r)?;
        Ok((&self.annihilators[k], &self.creators[k]))
    }

    /// Diagonal of H₀ in the occupation basis.
    pub fn state_energies(&self) -> &[f64] {
        &self.energies
    }

    /// Ĥ₀ = Σ_r E_r (b_r†b_r + d_r†d_r), assembled from the number operators.
    pub fn build_h0(&self) -> FockOperator {
        let mut h = zeros(self.dim());
        for k in 0..self.basis.mode_count() {
            let number = product(&self.creators[k], &self.annihilators[k]);
            h = add(&h, &scale(&number, Complex64::new(self.basis.mode_energy(k), 0.0)));
        }
        FockOperator::new(h, "H0", true)
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| {
            if self.dim() <= DENSE_EIGEN_LIMIT {
                let h = self.build_h0();
                let dense = DMatrix::from_fn(self.dim(), self.dim(), |i, j| h.get(i, j).re);
                Spectrum::Dense(SymmetricEigen::new(dense))
            } else {
                Spectrum::Diagonal(self.energies.clone())
            }
        })
    }

    /// Mode-function coefficient pairs (component c of φ or ∂φ) for every mode at z.
    fn mode_weights(&self, z: f64, gradient: bool) -> Vec<[Complex64; 2]> {
        let spec = self.spec();
        (0..self.basis.mode_count())
            .map(|k| {
                let (species, r) = self.basis.mode_of(k);
                let sign = match species {
                    Species::Electron => EnergySign::Positive,
                    Species::Positron => EnergySign::Negative,
                };
                let mode = ModeFunction::new(sign, r, spec).expect("mode within cutoff");
                let v = if gradient { mode.gradient(z) } else { mode.value(z) };
                [v.upper, v.lower]
            })
            .collect()
    }

    /// Components (ψ_0(z), ψ_1(z)), or their z-derivatives.
    pub fn field(&self, z: f64, gradient: bool) -> [SparseMatrix; 2] {
        let weights = self.mode_weights(z, gradient);
        let electrons = self.basis.mode_count() / 2;
        let component = |c: usize| {
            weights.iter().enumerate().fold(zeros(self.dim()), |acc, (k, w)| {
                let ladder = if k < electrons {
                    &self.annihilators[k]
                } else {
                    &self.creators[k]
                };
                add(&acc, &scale(ladder, w[c]))
            })
        };
        [component(0), component(1)]
    }

    /// (q/2) Σ_ab M_ab (ψ_a†ψ_b − ψ_bψ_a†) with M = 1 (`sigma_x` false) or σ_x.
    fn bilinear(&self, psi: &[SparseMatrix; 2], sigma_x: bool) -> SparseMatrix {
        let psi_dag = [adjoint(&psi[0]), adjoint(&psi[1])];
        let pairs: &[(usize, usize)] = if sigma_x { &[(0, 1), (1, 0)] } else { &[(0, 0), (1, 1)] };
        let half_q = Complex64::new(0.5 * self.spec().charge, 0.0);
        let sum = pairs.iter().fold(zeros(self.dim()), |acc, &(a, b)| {
            let term = sub(&product(&psi_dag[a], &psi[b]), &product(&psi[b], &psi_dag[a]));
            add(&acc, &term)
        });
        scale(&sum, half_q)
    }

    /// ∂/∂z of the σ_x bilinear, differentiating each field factor.
    fn bilinear_gradient(&self, psi: &[SparseMatrix; 2], dpsi: &[SparseMatrix; 2]) -> SparseMatrix {
        let psi_dag = [adjoint(&psi[0]), adjoint(&psi[1])];
        let dpsi_dag = [adjoint(&dpsi[0]), adjoint(&dpsi[1])];
        let half_q = Complex64::new(0.5 * self.spec().charge, 0.0);
        let sum = [(0usize, 1usize), (1, 0)].iter().fold(zeros(self.dim()), |acc, &(a, b)| {
            let forward = add(&product(&dpsi_dag[a], &psi[b]), &product(&psi_dag[a], &dpsi[b]));
            let backward = add(&product(&dpsi[b], &psi_dag[a]), &product(&psi[b], &dpsi_dag[a]));
            add(&acc, &sub(&forward, &backward))
        });
        scale(&sum, half_q)
    }

    pub fn density(&self, z: f64) -> FockOperator {
        let psi = self.field(z, false);
        FockOperator::new(self.bilinear(&psi, false), format!("rho({z})"), true)
    }

    pub fn current(&self, z: f64) -> FockOperator {
        let psi = self.field(z, false);
        FockOperator::new(self.bilinear(&psi, true), format!("J({z})"), true)
    }

    pub fn build_density_operators(&self, z: f64) -> DensityOperators {
        let psi = self.field(z, false);
        let dpsi = self.field(z, true);
        DensityOperators {
            z,
            density: FockOperator::new(self.bilinear(&psi, false), format!("rho({z})"), true),
            current: FockOperator::new(self.bilinear(&psi, true), format!("J({z})"), true),
            current_gradient: FockOperator::new(self.bilinear_gradient(&psi, &dpsi), format!("dJ/dz({z})"), true),
        }
    }

    /// [H₀, O] using the diagonal of H₀: entries (E_i − E_j) O_ij.
    pub fn commutator_with_h0(&self, op: &SparseMatrix) -> SparseMatrix {
        let triplets = op
            .iter()
            .map(|(v, (i, j))| (i, j, v * (self.energies[i] - self.energies[j])));
        from_triplets(self.dim(), triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::operator::{anticommutator, identity, max_abs, max_abs_diff};
    use super::*;
    use crate::modes::energy;
    use approx::assert_abs_diff_eq;
    use rand::{rngs::StdRng, RngExt, SeedableRng};
    use std::f64::consts::PI;

    fn space(length: f64, r_cut: u32) -> FockSpace {
        FockSpace::new(&LatticeSpec::new(length, r_cut, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        for (r_cut, dim) in [(1, 64), (2, 1024), (3, 16384)] {
            let basis = FockBasis::new(&LatticeSpec::new(10.0, r_cut, 1.0, 1.0).unwrap()).unwrap();
            assert_eq!(basis.dim(), dim);
        }
    }

    #[test]
    fn dimension_guard() {
        let err = FockBasis::new(&LatticeSpec::new(10.0, 5, 1.0, 1.0).unwrap()).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionGuard {
                r_cut: 5,
                max: 4,
                bits: 22
            }
        );
    }

    #[test]
    fn mode_indexing_roundtrip() {
        let fs = space(10.0, 2);
        for k in 0..fs.basis.mode_count() {
            let (species, r) = fs.basis.mode_of(k);
            assert_eq!(fs.basis.mode_index(species, r).unwrap(), k);
        }
        assert!(fs.basis.mode_index(Species::Positron, 3).is_err());
    }

    #[test]
    fn vacuum_is_annihilated() {
        let fs = space(10.0, 1);
        for k in 0..fs.basis.mode_count() {
            assert!(operator::on_vacuum(fs.annihilator(k)).iter().all(|v| v.norm() == 0.0));
        }
    }

    #[test]
    fn number_operators_are_projectors() {
        let fs = space(10.0, 1);
        for k in 0..fs.basis.mode_count() {
            let n = product(fs.creator(k), fs.annihilator(k));
            assert_eq!(max_abs_diff(&product(&n, &n), &n), 0.0);
            assert!(n.data().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        }
    }

    #[test]
    fn canonical_anticommutators_r_cut_2() {
        let fs = space(10.0, 2);
        let one = identity(fs.dim());
        let n = fs.basis.mode_count();
        for i in 0..n {
            for j in 0..n {
                let mixed = anticommutator(fs.annihilator(i), fs.creator(j));
                if i == j {
                    assert_eq!(max_abs_diff(&mixed, &one), 0.0);
                } else {
                    assert_eq!(max_abs(&mixed), 0.0);
                }
                assert_eq!(max_abs(&anticommutator(fs.annihilator(i), fs.annihilator(j))), 0.0);
            }
        }
    }

    #[test]
    fn electron_and_positron_anticommute() {
        let fs = space(10.0, 1);
        let (b1, _) = fs.ladder(Species::Electron, 1).unwrap();
        let (_, d_dag) = fs.ladder(Species::Positron, -1).unwrap();
        assert_eq!(max_abs(&anticommutator(b1, d_dag)), 0.0);
    }

    #[test]
    fn h0_pair_state_energy() {
        let fs = space(2.0 * PI, 1);
        let h = fs.build_h0();
        let (_, b1_dag) = fs.ladder(Species::Electron, 1).unwrap();
        let (_, d0_dag) = fs.ladder(Species::Positron, 0).unwrap();
        let state = operator::on_vacuum(&product(b1_dag, d0_dag));
        let s = state.iter().position(|v| v.norm() > 0.0).unwrap();
        assert_abs_diff_eq!(h.get(s, s).re, 2f64.sqrt() + 1.0, epsilon = 1e-14);
        assert_eq!(h.vacuum_expectation(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn h0_matches_state_energies() {
        let fs = space(7.0, 1);
        let h = fs.build_h0();
        for (s, e) in fs.state_energies().iter().enumerate() {
            assert_abs_diff_eq!(h.get(s, s).re, *e, epsilon = 1e-14);
        }
        assert_eq!(h.matrix.nnz(), fs.dim() - 1);
    }

    #[test]
    fn dense_spectrum_agrees_with_diagonal() {
        let fs = space(10.0, 1);
        let mut dense = fs.spectrum().eigenvalues();
        dense.sort_by(f64::total_cmp);
        let mut diag = fs.state_energies().to_vec();
        diag.sort_by(f64::total_cmp);
        for (a, b) in dense.iter().zip(&diag) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_excited_states_have_positive_energy() {
        let fs = space(10.0, 1);
        let energies = fs.state_energies();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let mut amps: Vec<Complex64> = (0..fs.dim())
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            amps[0] = Complex64::new(0.0, 0.0);
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let expectation: f64 = amps.iter().zip(energies).map(|(a, e)| a.norm_sqr() * e).sum::<f64>() / norm;
            assert!(expectation >= fs.spec().mass);
        }
    }

    #[test]
    fn local_operators_are_hermitian_with_zero_vacuum_value() {
        let fs = space(10.0, 1);
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let z = rng.random_range(-5.0..5.0);
            let ops = fs.build_density_operators(z);
            for op in [&ops.density, &ops.current, &ops.current_gradient] {
                assert!(op.hermiticity_residual() <= 1e-14, "{}", op.label);
                assert!(op.vacuum_expectation().norm() <= 1e-14, "{}", op.label);
            }
        }
    }

    #[test]
    fn single_electron_density() {
        // ⟨e|ρ(z)|e⟩ for one electron in mode r: q/L, and J gives q p/(L E).
        let fs = space(10.0, 1);
        let ops = fs.build_density_operators(0.7);
        let (_, b_dag) = fs.ladder(Species::Electron, 1).unwrap();
        let state = operator::on_vacuum(b_dag);
        let s = state.iter().position(|v| v.norm() > 0.0).unwrap();
        let p = fs.spec().momentum(1);
        assert_abs_diff_eq!(ops.density.get(s, s).re, 0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(ops.current.get(s, s).re, p / energy(p, 1.0) / 10.0, epsilon = 1e-14);
    }
}
