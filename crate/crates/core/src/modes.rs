//! Single-particle structure of the free 1+1D Dirac Hamiltonian in a periodic box.
//!
//! The first-quantized Hamiltonian is
//!
//!   H_0 = -i σ_x ∂/∂z + m σ_z
//!
//! with σ_x = ((0,1),(1,0)) and σ_z = ((1,0),(0,-1)). Plane-wave eigenfunctions on
//! [-L/2, L/2] with periodic boundary conditions are
//!
//!   φ_{λ,r}(z) = u_{λ,r} e^{+i p_r z},   p_r = 2πr/L,
//!   u_{λ,r}    = N_{λ,r} (1, p_r / (λE_p + m)),   N² = (λE_p + m) / (2LλE_p),
//!
//! so that H_0 φ_{λ,r} = λ E_{p_r} φ_{λ,r}. The phase carries +i p_r z: with the
//! opposite phase the spinor above is an eigenvector of +iσ_x∂_z + mσ_z instead, and
//! the conserved current would be -ψ†σ_xψ.
//!
//! The only singular point of the normalization is (λ = -1, p = 0), where the formula
//! is 0/0; there the spinor is the σ_z eigenvector (0, 1)/√L.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretization of the box: length, symmetric mode cutoff, mass and charge.
///
/// The mode set is always {-r_cut, ..., r_cut}; asymmetric cutoffs cannot be
/// expressed, which keeps Σ_r p_r/E_r = 0 exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub length: f64,
    pub r_cut: u32,
    pub mass: f64,
    pub charge: f64,
}

impl LatticeSpec {
    pub fn new(length: f64, r_cut: u32, mass: f64, charge: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidLattice(format!("L must be > 0, got {length}")));
        }
        if r_cut < 1 {
            return Err(Error::InvalidLattice("r_cut must be >= 1".into()));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidLattice(format!("m must be > 0, got {mass}")));
        }
        if !charge.is_finite() {
            return Err(Error::InvalidLattice(format!("q must be finite, got {charge}")));
        }
        Ok(Self {
            length,
            r_cut,
            mass,
            charge,
        })
    }

    /// Re-checks the invariants; useful after deserialization.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.length, self.r_cut, self.mass, self.charge).map(|_| ())
    }

    pub fn mode_indices(&self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        let r = self.r_cut as i64;
        -r..=r
    }

    pub fn mode_count(&self) -> usize {
        2 * self.r_cut as usize + 1
    }

    pub fn momentum(&self, r: i64) -> f64 {
        momentum_of_index(r, self.length)
    }

    pub fn energy_of_index(&self, r: i64) -> f64 {
        energy(self.momentum(r), self.mass)
    }

    /// Largest momentum kept by the cutoff, 2π r_cut / L.
    pub fn momentum_cutoff(&self) -> f64 {
        self.momentum(self.r_cut as i64)
    }

    pub fn contains(&self, r: i64) -> bool {
        r.unsigned_abs() <= self.r_cut as u64
    }

    fn check_index(&self, r: i64) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index: r,
                r_cut: self.r_cut,
            })
        }
    }
}

pub fn momentum_of_index(r: i64, length: f64) -> f64 {
    2.0 * PI * r as f64 / length
}

pub fn energy(p: f64, mass: f64) -> f64 {
    p.hypot(mass)
}

/// Sign λ of the single-particle energy ε = λE_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub fn value(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }
}

impl TryFrom<i64> for EnergySign {
    type Error = Error;

    fn try_from(lambda: i64) -> Result<Self> {
        match lambda {
            1 => Ok(EnergySign::Positive),
            -1 => Ok(EnergySign::Negative),
            other => Err(Error::InvalidEnergySign(other)),
        }
    }
}

/// Two-component Dirac spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub upper: Complex64,
    pub lower: Complex64,
}

impl Spinor {
    pub fn new(upper: Complex64, lower: Complex64) -> Self {
        Self { upper, lower }
    }

    pub fn real(upper: f64, lower: f64) -> Self {
        Self::new(Complex64::new(upper, 0.0), Complex64::new(lower, 0.0))
    }

    pub fn component(&self, c: usize) -> Complex64 {
        match c {
            0 => self.upper,
            1 => self.lower,
            _ => panic!("spinor component {c} out of range"),
        }
    }

    pub fn scale(&self, s: Complex64) -> Spinor {
        Spinor::new(self.upper * s, self.lower * s)
    }

    /// u† v
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.upper.conj() * other.upper + self.lower.conj() * other.lower
    }

    /// u† σ_x v
    pub fn inner_sigma_x(&self, other: &Spinor) -> Complex64 {
        self.upper.conj() * other.lower + self.lower.conj() * other.upper
    }

    pub fn norm_sqr(&self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }

    pub fn sigma_x(&self) -> Spinor {
        Spinor::new(self.lower, self.upper)
    }

    pub fn sigma_z(&self) -> Spinor {
        Spinor::new(self.upper, -self.lower)
    }

    pub fn sub(&self, other: &Spinor) -> Spinor {
        Spinor::new(self.upper - other.upper, self.lower - other.lower)
    }

    pub fn add(&self, other: &Spinor) -> Spinor {
        Spinor::new(self.upper + other.upper, self.lower + other.lower)
    }
}

pub fn spinor(sign: EnergySign, r: i64, spec: &LatticeSpec) -> Result<Spinor> {
    spec.check_index(r)?;
    let p = spec.momentum(r);
    let e = energy(p, spec.mass);
    let m = spec.mass;
    let l = spec.length;
    Ok(match sign {
        EnergySign::Negative if r == 0 => Spinor::real(0.0, 1.0 / l.sqrt()),
        _ => {
            let lam = sign.value();
            // λE + m, written as -p²/(E + m) for λ = -1 to avoid cancellation at small p.
            let denom = match sign {
                EnergySign::Positive => e + m,
                EnergySign::Negative => -p * p / (e + m),
            };
            let norm = (denom / (2.0 * l * lam * e)).sqrt();
            Spinor::real(norm, norm * p / denom)
        }
    })
}

/// φ_{λ,r} as a value-level object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub sign: EnergySign,
    pub index: i64,
    pub momentum: f64,
    pub spinor: Spinor,
}

impl ModeFunction {
    pub fn new(sign: EnergySign, r: i64, spec: &LatticeSpec) -> Result<Self> {
        Ok(Self {
            sign,
            index: r,
            momentum: spec.momentum(r),
            spinor: spinor(sign, r, spec)?,
        })
    }

    pub fn energy(&self, mass: f64) -> f64 {
        self.sign.value() * energy(self.momentum, mass)
    }

    pub fn phase(&self, z: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.momentum * z)
    }

    pub fn value(&self, z: f64) -> Spinor {
        self.spinor.scale(self.phase(z))
    }

    /// ∂φ/∂z = i p_r φ.
    pub fn gradient(&self, z: f64) -> Spinor {
        self.spinor
            .scale(Complex64::new(0.0, self.momentum) * self.phase(z))
    }
}

pub fn basis_function_value(sign: EnergySign, r: i64, z: f64, spec: &LatticeSpec) -> Result<Spinor> {
    Ok(ModeFunction::new(sign, r, spec)?.value(z))
}

/// ‖H_0 φ − λE_p φ‖ with the derivative applied analytically to the plane-wave phase.
pub fn eigen_check(sign: EnergySign, r: i64, spec: &LatticeSpec) -> Result<f64> {
    let mode = ModeFunction::new(sign, r, spec)?;
    let z = 0.25 * spec.length;
    let phi = mode.value(z);
    let kinetic = mode.gradient(z).sigma_x().scale(Complex64::new(0.0, -1.0));
    let h_phi = kinetic.add(&phi.sigma_z().scale(Complex64::new(spec.mass, 0.0)));
    let eps = mode.energy(spec.mass);
    Ok(h_phi.sub(&phi.scale(Complex64::new(eps, 0.0))).norm_sqr().sqrt())
}
