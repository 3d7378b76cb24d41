//! Operator algebra of the noncommutative two- and N-body problem.

pub mod commutator;
pub mod kinetic;
pub mod poly;

pub use commutator::{
    bracket, commutator_table, total_momentum_brackets, CommutatorTable, NBodyRep, Operator, TwoBodyRep,
};
pub use kinetic::{
    center_of_mass_block, com_separation_check, jacobi_rows, kinetic_coefficients, kinetic_energy_bound_check,
    kinetic_matrix, normed_jacobi_rows, ComSeparation, EpsilonMatrix, KineticCoefficients,
};

use crate::scalar::Real;

/// Gaussian noncommutativity kernel in natural units (`hbar = c = 1`,
/// `mu` a rest energy): `1 - exp(-omega F^2 / (16 mu^4))`.
pub fn epsilon_kernel<T: Real>(force_squared: T, mu: T, omega: T) -> T {
    let mu2 = mu * mu;
    -(-omega * force_squared / (T::lit(16.0) * mu2 * mu2)).exp_m1()
}

/// The same kernel with `F^2` in (MeV/cm)^2 and `mu` in MeV:
/// `1 - exp(-omega (hbar c)^2 F^2 / (16 mu^4))`.
pub fn epsilon_kernel_mev(force_squared: f64, mu_mev: f64, omega: f64) -> f64 {
    let hbar_c = crate::observables::HBAR_C_MEV_CM;
    epsilon_kernel(force_squared * hbar_c * hbar_c, mu_mev, omega)
}
