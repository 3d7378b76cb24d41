//! Hydrogenic radial functions with a rescaled Bohr radius.
//!
//! All lengths are in units of the reduced-mass Compton wavelength ħ/μc. In
//! these units the Bohr radius is 1/α, so a level of the noncommutative
//! problem with `eta = 1 - epsilon` has the effective length scale
//! `eta / (alpha Z)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Largest principal quantum number accepted by the library.
pub const MAX_PRINCIPAL: u32 = 20;

const FACTORIAL_TABLE_LEN: usize = 2 * MAX_PRINCIPAL as usize + 1;

const FACTORIALS: [f64; FACTORIAL_TABLE_LEN] = {
    let mut table = [1.0f64; FACTORIAL_TABLE_LEN];
    let mut k = 1;
    while k < FACTORIAL_TABLE_LEN {
        table[k] = table[k - 1] * k as f64;
        k += 1;
    }
    table
};

/// `k!` from the precomputed table (`k <= 40`).
pub fn factorial<T: Real>(k: u32) -> T {
    T::lit(FACTORIALS[k as usize])
}

/// Principal and orbital labels `(n, l)` of a hydrogenic level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        let reason = if n == 0 {
            Some("n must be at least 1")
        } else if n > MAX_PRINCIPAL {
            Some("n exceeds the supported maximum of 20")
        } else if l >= n {
            Some("l must satisfy 0 <= l <= n - 1")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidQuantumNumbers { n, l, reason }),
            None => Ok(Self { n, l }),
        }
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn l(self) -> u32 {
        self.l
    }

    /// Degree `n - l - 1` of the hypergeometric polynomial, which is also
    /// the number of interior radial nodes.
    pub fn radial_degree(self) -> u32 {
        self.n - self.l - 1
    }

    /// All levels with `n <= n_max`, ordered by `(n, l)`.
    pub fn up_to(n_max: u32) -> Result<Vec<Self>> {
        let mut levels = Vec::new();
        for n in 1..=n_max {
            for l in 0..n {
                levels.push(Self::new(n, l)?);
            }
        }
        Ok(levels)
    }

    /// Spectroscopic label such as `2P`.
    pub fn label(self) -> String {
        format!("{}{}", self.n, ORBITAL_LETTERS[self.l as usize] as char)
    }
}

const ORBITAL_LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUVWXY";

/// Accepts a spectroscopic label (`2P`, case-insensitive) or `n,l`.
impl std::str::FromStr for QuantumNumbers {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || domain(format!("cannot read {s:?} as a level; use e.g. 2P or 2,1"));
        if let Some((n, l)) = s.split_once(',') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let l = l.trim().parse().map_err(|_| bad())?;
            return Self::new(n, l);
        }
        let digits = s.find(|ch: char| !ch.is_ascii_digit()).ok_or_else(bad)?;
        let n = s[..digits].parse().map_err(|_| bad())?;
        let letter = s[digits..].to_ascii_uppercase();
        if letter.len() != 1 {
            return Err(bad());
        }
        let l = ORBITAL_LETTERS
            .iter()
            .position(|&c| c == letter.as_bytes()[0])
            .ok_or_else(bad)?;
        Self::new(n, l as u32)
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, l={})", self.n, self.l)
    }
}

/// `F(-n+l+1, 2l+2, x)`: the confluent hypergeometric function whose first
/// argument is a non-positive integer, i.e. a polynomial of degree `n-l-1`.
///
/// The series is accumulated with the term ratio
/// `t_{k+1}/t_k = (a+k) x / ((b+k)(k+1))` and terminates exactly.
pub fn hypergeometric_polynomial<T: Real>(qn: QuantumNumbers, x: T) -> T {
    let a = -T::from_usize_lossy(qn.radial_degree() as usize);
    let b = T::from_usize_lossy(2 * qn.l as usize + 2);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..qn.radial_degree() {
        let kf = T::from_usize_lossy(k as usize);
        term = term * (a + kf) / (b + kf) * x / (kf + T::one());
        sum = sum + term;
    }
    sum
}

/// `[(n+l)! / (2n (n-l-1)!)]^{1/2} / (2l+1)!`, the scale-free part of the
/// normalization constant.
fn normalization_core<T: Real>(qn: QuantumNumbers) -> T {
    let ratio = factorial::<T>(qn.n + qn.l)
        / (T::lit(2.0) * T::from_usize_lossy(qn.n as usize) * factorial::<T>(qn.radial_degree()));
    ratio.sqrt() / factorial::<T>(2 * qn.l + 1)
}

/// Prefactor `S_nl = [(n+l)! / (2n (n-l-1)!)] / [(2l+1)!]^2` of the
/// self-consistency integral in the scaled variable `x = 2 alpha Z r / (eta n)`.
pub fn selfconsistency_prefactor<T: Real>(qn: QuantumNumbers) -> T {
    let core = normalization_core::<T>(qn);
    core * core
}

/// Normalization constant `N_nl` of the radial function for the given
/// `eta` and `alpha_z`, in units `(mu c / hbar)^{1/2}`.
pub fn normalization_constant<T: Real>(qn: QuantumNumbers, eta: T, alpha_z: T) -> Result<T> {
    check_eta(eta)?;
    if !(alpha_z > T::zero()) || !alpha_z.is_finite() {
        return Err(domain(format!("alpha_z must be positive, got {alpha_z}")));
    }
    let inverse_scale = T::lit(2.0) * alpha_z / (eta * T::from_usize_lossy(qn.n as usize));
    let power = T::from_usize_lossy(qn.l as usize) + T::lit(1.5);
    Ok(normalization_core::<T>(qn) * inverse_scale.powf(power))
}

fn check_eta<T: Real>(eta: T) -> Result<()> {
    if eta > T::zero() && eta <= T::one() {
        Ok(())
    } else {
        Err(domain(format!("eta must lie in (0, 1], got {eta}")))
    }
}

/// A normalized radial function `chi_nl` with rescaled Bohr radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialState<T> {
    qn: QuantumNumbers,
    eta: T,
    alpha_z: T,
    norm: T,
}

impl<T: Real> RadialState<T> {
    pub fn new(qn: QuantumNumbers, eta: T, alpha_z: T) -> Result<Self> {
        let norm = normalization_constant(qn, eta, alpha_z)?;
        Ok(Self { qn, eta, alpha_z, norm })
    }

    pub fn qn(&self) -> QuantumNumbers {
        self.qn
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn alpha_z(&self) -> T {
        self.alpha_z
    }

    /// Effective Bohr radius `eta / (alpha Z)` in units of ħ/μc.
    pub fn length_scale(&self) -> T {
        self.eta / self.alpha_z
    }

    pub fn normalization(&self) -> T {
        self.norm
    }

    /// Maps a radius to the scaled variable `x = 2 r / (n a_eff)`.
    pub fn scaled_argument(&self, r: T) -> T {
        T::lit(2.0) * r / (T::from_usize_lossy(self.qn.n as usize) * self.length_scale())
    }

    /// `chi_nl(r)`; the square integrates to one over `[0, inf)`.
    pub fn value(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) {
            return Err(domain(format!("radius must be non-negative, got {r}")));
        }
        let x = self.scaled_argument(r);
        let l = self.qn.l as i32;
        Ok(self.norm * r.powi(l + 1) * hypergeometric_polynomial(self.qn, x) * (-x / T::lit(2.0)).exp())
    }
}

/// Free-function form of [`RadialState::value`].
pub fn radial_wavefunction<T: Real>(state: &RadialState<T>, r: T) -> Result<T> {
    state.value(r)
}
