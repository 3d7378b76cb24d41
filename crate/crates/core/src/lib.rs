//! Two-body bound states with noncommuting inter-particle coordinates and
//! momenta.
//!
//! The noncommutativity parameter `eps` of a hydrogen-like level is fixed
//! self-consistently through `eta = 1 - eps`; [`selfconsist`] finds the
//! fixed points and the couplings at which they disappear, [`observables`]
//! turns them into energies and mean distances, and [`algebra`] checks the
//! operator algebra behind the model exactly.
//!
//! Natural units `hbar = c = 1` are used throughout: energies in units of
//! the reduced rest energy and lengths in units of its Compton wavelength.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`); the algebra
//! also accepts any [`Field`], including the exact rationals [`Exact`].

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod error;
pub mod observables;
pub mod quad;
pub mod radial;
pub mod scalar;
pub mod selfconsist;

pub use algebra::{
    com_separation_check, commutator_table, epsilon_kernel, kinetic_coefficients, kinetic_energy_bound_check,
    ComSeparation, CommutatorTable, EpsilonMatrix, KineticCoefficients, TwoBodyRep,
};
pub use error::{Error, Result};
pub use observables::{dirac_energy, dirac_ground_energy, energy_level, mean_distance, schrodinger_energy};
pub use quad::{integrate_moment, integrate_selfconsistency, GaussLegendre, QuadratureSpec};
pub use radial::{radial_wavefunction, QuantumNumbers, RadialState};
pub use scalar::{Exact, Field, Real};
pub use selfconsist::{
    critical_g, solve_level, Branch, Coupling, CriticalPoint, SelfConsistentSolution, SolverSettings, OMEGA_C,
};

pub type Coupling64 = Coupling<f64>;
pub type Solution64 = SelfConsistentSolution<f64>;
pub type CriticalPoint64 = CriticalPoint<f64>;
pub type Settings64 = SolverSettings<f64>;
pub type RadialState64 = RadialState<f64>;
pub type QuadratureSpec64 = QuadratureSpec<f64>;

pub type Coupling32 = Coupling<f32>;
pub type Solution32 = SelfConsistentSolution<f32>;
pub type Settings32 = SolverSettings<f32>;

pub type TwoBodyRep64 = TwoBodyRep<f64>;
pub type TwoBodyRepExact = TwoBodyRep<Exact>;
pub type EpsilonMatrix64 = EpsilonMatrix<f64>;
pub type EpsilonMatrixExact = EpsilonMatrix<Exact>;
pub type KineticCoefficients64 = KineticCoefficients<f64>;
pub type KineticCoefficientsExact = KineticCoefficients<Exact>;
