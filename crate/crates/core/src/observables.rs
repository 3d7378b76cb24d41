//! Energies, mean distances and the measurement-impact estimates.
//!
//! Energies are in `mu c^2`, lengths in `hbar / (mu c)`. The measurement
//! estimates work in MeV and cm.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::radial::QuantumNumbers;
use crate::scalar::Real;

/// `hbar c` in MeV·cm.
pub const HBAR_C_MEV_CM: f64 = 1.9733e-11;
/// Speed of light in cm/s.
pub const SPEED_OF_LIGHT_CM_S: f64 = 2.997_924_58e10;
pub const ELECTRON_REST_ENERGY_MEV: f64 = 0.5110;
pub const PROTON_REST_ENERGY_MEV: f64 = 938.27;

fn check_eta<T: Real>(eta: T) -> Result<()> {
    if eta > T::zero() && eta <= T::one() {
        Ok(())
    } else {
        Err(domain(format!("eta must lie in (0, 1], got {eta}")))
    }
}

fn check_alpha_z<T: Real>(alpha_z: T) -> Result<()> {
    if alpha_z > T::zero() && alpha_z.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("alpha_z must be positive, got {alpha_z}")))
    }
}

fn n_squared<T: Real>(qn: QuantumNumbers) -> T {
    T::from_usize_lossy((qn.n() * qn.n()) as usize)
}

/// `E_nl = -(alpha Z)^2 / (2 n^2 eta^2)`.
pub fn energy_level<T: Real>(qn: QuantumNumbers, alpha_z: T, eta: T) -> Result<T> {
    check_eta(eta)?;
    Ok(-(alpha_z * alpha_z) / (T::lit(2.0) * n_squared::<T>(qn) * eta * eta))
}

/// Mean distance `<|r2 - r1|> = eta^2 [3 n^2 - l(l+1)] / (2 alpha Z)`.
///
/// One factor of `eta` comes from the rescaled Bohr radius of the radial
/// function, the other from `r2 - r1 = (1 - epsilon) r` in the operator
/// representation.
pub fn mean_distance<T: Real>(qn: QuantumNumbers, alpha_z: T, eta: T) -> Result<T> {
    check_eta(eta)?;
    check_alpha_z(alpha_z)?;
    let l = qn.l() as usize;
    let angular = T::lit(3.0) * n_squared::<T>(qn) - T::from_usize_lossy(l * (l + 1));
    Ok(eta * eta * angular / (T::lit(2.0) * alpha_z))
}

/// Schrödinger level `-(alpha Z)^2 / (2 n^2)`.
pub fn schrodinger_energy<T: Real>(qn: QuantumNumbers, alpha_z: T) -> T {
    -(alpha_z * alpha_z) / (T::lit(2.0) * n_squared::<T>(qn))
}

/// Dirac ground state `-1 + sqrt(1 - (alpha Z)^2)`.
pub fn dirac_ground_energy<T: Real>(alpha_z: T) -> Result<T> {
    check_alpha_z(alpha_z)?;
    if alpha_z > T::one() {
        return Err(domain(format!(
            "Dirac ground level undefined for alpha_z = {alpha_z} > 1"
        )));
    }
    Ok((T::one() - alpha_z * alpha_z).sqrt() - T::one())
}

/// Point-Coulomb Dirac level (binding part) for principal number `n` and
/// total angular momentum `j = two_j / 2`:
/// `[1 + (aZ / (n - j - 1/2 + sqrt((j+1/2)^2 - (aZ)^2)))^2]^{-1/2} - 1`.
pub fn dirac_energy<T: Real>(n: u32, two_j: u32, alpha_z: T) -> Result<T> {
    check_alpha_z(alpha_z)?;
    if two_j.is_multiple_of(2) || n == 0 || two_j + 1 > 2 * n {
        return Err(domain(format!("invalid Dirac labels n={n}, j={two_j}/2")));
    }
    let kappa = T::from_usize_lossy((two_j as usize).div_ceil(2));
    let radicand = kappa * kappa - alpha_z * alpha_z;
    if radicand < T::zero() {
        return Err(domain(format!(
            "Dirac level n={n}, j={two_j}/2 undefined for alpha_z = {alpha_z}"
        )));
    }
    let denom = T::from_usize_lossy(n as usize) - kappa + radicand.sqrt();
    let ratio = alpha_z / denom;
    Ok((T::one() + ratio * ratio).sqrt().recip() - T::one())
}

/// Schrödinger, Dirac and self-consistent energies of a level at one coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyComparison<T> {
    pub qn: QuantumNumbers,
    pub alpha_z: T,
    pub schrodinger: T,
    /// Dirac ground level; meaningful for the 1S comparison.
    pub dirac: Option<T>,
    pub noncommutative: Option<T>,
}

impl<T: Real> EnergyComparison<T> {
    pub fn new(qn: QuantumNumbers, alpha_z: T, noncommutative: Option<T>) -> Self {
        Self {
            qn,
            alpha_z,
            schrodinger: schrodinger_energy(qn, alpha_z),
            dirac: dirac_ground_energy(alpha_z).ok(),
            noncommutative,
        }
    }

    /// `E_Dirac <= E_nc <= E_Schrodinger`, when all three are defined.
    pub fn is_intermediate(&self) -> Option<bool> {
        let (d, nc) = (self.dirac?, self.noncommutative?);
        Some(d <= nc && nc <= self.schrodinger)
    }
}

/// A particle for the measurement-impact estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParticleSpec {
    pub name: String,
    /// Rest energy in MeV.
    pub rest_energy: f64,
}

impl ParticleSpec {
    pub fn new(name: impl Into<String>, rest_energy: f64) -> Result<Self> {
        if !(rest_energy > 0.0) || !rest_energy.is_finite() {
            return Err(domain(format!("rest energy must be positive, got {rest_energy}")));
        }
        Ok(Self {
            name: name.into(),
            rest_energy,
        })
    }

    pub fn electron() -> Self {
        Self {
            name: "electron".into(),
            rest_energy: ELECTRON_REST_ENERGY_MEV,
        }
    }

    pub fn proton() -> Self {
        Self {
            name: "proton".into(),
            rest_energy: PROTON_REST_ENERGY_MEV,
        }
    }
}

fn check_positive(what: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{what} must be positive, got {x}")))
    }
}

fn lorentz_contraction(v_over_c: f64) -> Result<f64> {
    if (0.0..1.0).contains(&v_over_c) {
        Ok((1.0 - v_over_c * v_over_c).sqrt())
    } else {
        Err(domain(format!("v/c must lie in [0, 1), got {v_over_c}")))
    }
}

/// Compton wavelength `h / (m c)` in cm.
pub fn compton_wavelength(p: &ParticleSpec) -> Result<f64> {
    check_positive("rest energy", p.rest_energy)?;
    Ok(2.0 * std::f64::consts::PI * HBAR_C_MEV_CM / p.rest_energy)
}

/// Best attainable position accuracy `(h / m c) sqrt(1 - v^2/c^2)` in cm.
pub fn position_accuracy(p: &ParticleSpec, v_over_c: f64) -> Result<f64> {
    Ok(compton_wavelength(p)? * lorentz_contraction(v_over_c)?)
}

/// Shortest duration of a position measurement,
/// `(h / m c^2) sqrt(1 - v^2/c^2)`, in seconds.
pub fn measurement_duration(p: &ParticleSpec, v_over_c: f64) -> Result<f64> {
    Ok(position_accuracy(p, v_over_c)? / SPEED_OF_LIGHT_CM_S)
}

/// Impact force `hbar c / (2 dx^2)` of a position measurement with accuracy
/// `delta_x` (cm), in MeV/cm.
pub fn position_impact_force(delta_x: f64) -> Result<f64> {
    check_positive("delta_x", delta_x)?;
    Ok(HBAR_C_MEV_CM / (2.0 * delta_x * delta_x))
}

/// Impact force `2 c dp^2 / hbar` of a momentum measurement with accuracy
/// `delta_p` (MeV/c), in MeV/cm.
pub fn momentum_impact_force(delta_p: f64) -> Result<f64> {
    check_positive("delta_p", delta_p)?;
    Ok(2.0 * delta_p * delta_p / HBAR_C_MEV_CM)
}
