//! N-body kinetic-energy quadratic form induced by a noncommutativity
//! matrix, and its separation in Jacobi coordinates.
//!
//! With the representation of [`super::NBodyRep`], the kinetic operator is
//! `-(1/2) Σ_ij K_ij ∇_i·∇_j` with `K_ii = A_i / m_i` and
//! `K_ik = K_ki = B_ik / M`. A change of coordinates `q = J r` maps `K` to
//! `J K J^T`.

use nalgebra::{DMatrix, RealField};
use num_traits::Float;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::scalar::{Field, Real};

/// Symmetric, zero-diagonal matrix of pairwise noncommutativity parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonMatrix<T> {
    size: usize,
    entries: Vec<T>,
}

impl<T: Field> EpsilonMatrix<T> {
    /// Builds from row-major entries; rejects asymmetric input, a non-zero
    /// diagonal, or entries outside `[0, 1)`.
    pub fn new(size: usize, entries: Vec<T>) -> Result<Self> {
        if size < 2 {
            return Err(domain("an epsilon matrix needs at least two particles"));
        }
        if entries.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                actual: entries.len(),
            });
        }
        for j in 0..size {
            if !entries[j * size + j].is_zero() {
                return Err(domain(format!("diagonal entry {j} must be zero")));
            }
            for k in 0..size {
                let e = &entries[j * size + k];
                if !(*e >= T::zero() && *e < T::one()) {
                    return Err(domain(format!("entry ({j}, {k}) = {e:?} outside [0, 1)")));
                }
                if *e != entries[k * size + j] {
                    return Err(domain(format!("entries ({j}, {k}) and ({k}, {j}) differ")));
                }
            }
        }
        Ok(Self { size, entries })
    }

    /// Every off-diagonal entry equal to `eps`.
    pub fn uniform(size: usize, eps: T) -> Result<Self> {
        let entries = (0..size * size)
            .map(|i| if i / size == i % size { T::zero() } else { eps.clone() })
            .collect();
        Self::new(size, entries)
    }

    pub fn zeros(size: usize) -> Result<Self> {
        Self::uniform(size, T::zero())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, j: usize, k: usize) -> &T {
        &self.entries[j * self.size + k]
    }
}

/// Coefficients `A_i` and `B_ik` (`i < k`) of the kinetic form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KineticCoefficients<T> {
    pub a: Vec<T>,
    /// Upper triangular; entries with `k <= i` are zero.
    pub b: Vec<Vec<T>>,
}

pub(crate) fn check_masses<T: Field>(masses: &[T], size: usize) -> Result<()> {
    if masses.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            actual: masses.len(),
        });
    }
    if masses.iter().any(|m| !(*m > T::zero())) {
        return Err(domain("masses must be positive"));
    }
    Ok(())
}

fn total<T: Field>(masses: &[T]) -> T {
    masses.iter().cloned().fold(T::zero(), |a, b| a + b)
}

/// `A_i = (1 - Σ_q (m_q/M) eps_iq)^2 + Σ_q (m_i m_q / M^2) eps_iq^2`,
/// `B_ik = (2 - Σ_q (m_q/M)(eps_iq + eps_kq)) eps_ik + Σ_q (m_q/M) eps_iq eps_kq`.
pub fn kinetic_coefficients<T: Field>(masses: &[T], eps: &EpsilonMatrix<T>) -> Result<KineticCoefficients<T>> {
    check_masses(masses, eps.size())?;
    let n = masses.len();
    let m = total(masses);
    let share = |q: usize| masses[q].clone() / m.clone();
    let spread: Vec<T> = (0..n)
        .map(|i| (0..n).fold(T::zero(), |acc, q| acc + share(q) * eps.get(i, q).clone()))
        .collect();

    let a = (0..n)
        .map(|i| {
            let lead = T::one() - spread[i].clone();
            let mixed = (0..n).fold(T::zero(), |acc, q| {
                let e = eps.get(i, q).clone();
                acc + masses[i].clone() * masses[q].clone() / (m.clone() * m.clone()) * e.clone() * e
            });
            lead.clone() * lead + mixed
        })
        .collect();

    let mut b = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for k in i + 1..n {
            let lead = (T::one() + T::one() - spread[i].clone() - spread[k].clone()) * eps.get(i, k).clone();
            let mixed = (0..n).fold(T::zero(), |acc, q| {
                acc + share(q) * eps.get(i, q).clone() * eps.get(k, q).clone()
            });
            b[i][k] = lead + mixed;
        }
    }
    Ok(KineticCoefficients { a, b })
}

/// Symmetric matrix `K` of the kinetic form: `K_ii = A_i/m_i`,
/// `K_ik = B_ik/M`.
pub fn kinetic_matrix<T: Field>(masses: &[T], eps: &EpsilonMatrix<T>) -> Result<Vec<Vec<T>>> {
    let coeffs = kinetic_coefficients(masses, eps)?;
    let n = masses.len();
    let m = total(masses);
    let mut k = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        k[i][i] = coeffs.a[i].clone() / masses[i].clone();
        for j in i + 1..n {
            let v = coeffs.b[i][j].clone() / m.clone();
            k[i][j] = v.clone();
            k[j][i] = v;
        }
    }
    Ok(k)
}

fn congruence<T: Field>(j: &[Vec<T>], k: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = k.len();
    let rows = j.len();
    let jk: Vec<Vec<T>> = j
        .iter()
        .map(|row| {
            (0..n)
                .map(|c| (0..n).fold(T::zero(), |acc, s| acc + row[s].clone() * k[s][c].clone()))
                .collect()
        })
        .collect();
    (0..rows)
        .map(|a| {
            (0..rows)
                .map(|b| (0..n).fold(T::zero(), |acc, s| acc + jk[a][s].clone() * j[b][s].clone()))
                .collect()
        })
        .collect()
}

/// Unnormalized Jacobi coordinates: rows `k < N-1` give
/// `R_k - r_{k+1}` (`R_k` the center of mass of the first `k+1` particles),
/// the last row gives the center of mass of the system.
pub fn jacobi_rows<T: Field>(masses: &[T]) -> Vec<Vec<T>> {
    let n = masses.len();
    let mut rows = Vec::with_capacity(n);
    let mut partial = T::zero();
    for k in 0..n - 1 {
        partial = partial + masses[k].clone();
        let mut row = vec![T::zero(); n];
        for (i, slot) in row.iter_mut().enumerate().take(k + 1) {
            *slot = masses[i].clone() / partial.clone();
        }
        row[k + 1] = -T::one();
        rows.push(row);
    }
    let m = total(masses);
    rows.push(masses.iter().map(|mi| mi.clone() / m.clone()).collect());
    rows
}

/// Center-of-mass coefficient and the couplings between the center of mass
/// and the relative coordinates, in unnormalized Jacobi coordinates. Works
/// in any field, so exact rationals verify the decoupling identically.
pub fn center_of_mass_block<T: Field>(masses: &[T], eps: &EpsilonMatrix<T>) -> Result<(T, Vec<T>)> {
    let k = kinetic_matrix(masses, eps)?;
    let transformed = congruence(&jacobi_rows(masses), &k);
    let n = masses.len();
    let coupling = (0..n - 1).map(|a| transformed[a][n - 1].clone()).collect();
    Ok((transformed[n - 1][n - 1].clone(), coupling))
}

/// Result of transforming the kinetic form to normed Jacobi coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComSeparation<T> {
    /// Coefficient of the center-of-mass Laplacian; equals `1/M`.
    pub com_coefficient: T,
    /// `(N-1) x (N-1)` block acting on the relative coordinates.
    pub relative_block: Vec<Vec<T>>,
    /// Largest coupling between the center of mass and a relative coordinate.
    pub max_coupling: T,
    pub decoupled: bool,
}

/// Normed Jacobi coordinates `q_k = sqrt(mu_k / m_ref) (R_k - r_{k+1})`
/// with `mu_k` the reduced mass of the first `k+1` particles against the
/// next one and `m_ref = M / N`; the last row is the center of mass
/// `Σ m_i r_i / M`. For identical masses the relative rows are
/// `sqrt(k/(k+1)) (mean of first k - r_{k+1})`.
pub fn normed_jacobi_rows<T: Real + Field>(masses: &[T]) -> Vec<Vec<T>> {
    let n = masses.len();
    let mut rows = jacobi_rows(masses);
    let m = total(masses);
    let reference = m / T::from_usize_lossy(n);
    let mut partial = T::zero();
    for k in 0..n - 1 {
        partial = partial + masses[k];
        let reduced = partial * masses[k + 1] / (partial + masses[k + 1]);
        let scale = (reduced / reference).sqrt();
        for v in rows[k].iter_mut() {
            *v = *v * scale;
        }
    }
    rows
}

/// Absolute decoupling threshold at unit scale.
pub const DECOUPLING_TOLERANCE: f64 = 1e-12;

/// Transforms the kinetic form to normed Jacobi coordinates and checks that
/// the center of mass decouples.
pub fn com_separation_check<T: Real + Field>(masses: &[T], eps: &EpsilonMatrix<T>) -> Result<ComSeparation<T>> {
    let k = kinetic_matrix(masses, eps)?;
    let transformed = congruence(&normed_jacobi_rows(masses), &k);
    let n = masses.len();
    let max_coupling = (0..n - 1)
        .map(|a| Float::abs(transformed[a][n - 1]).max(Float::abs(transformed[n - 1][a])))
        .fold(T::zero(), |acc, v| acc.max(v));
    let scale = transformed
        .iter()
        .flatten()
        .fold(T::one(), |acc, v| acc.max(Float::abs(*v)));
    let relative_block = transformed[..n - 1].iter().map(|row| row[..n - 1].to_vec()).collect();
    Ok(ComSeparation {
        com_coefficient: transformed[n - 1][n - 1],
        relative_block,
        max_coupling,
        decoupled: max_coupling <= T::lit(DECOUPLING_TOLERANCE) * scale,
    })
}

/// Whether the relative kinetic form at `eps` is bounded by the one at
/// `eps = 0` (all eigenvalues of the difference non-negative), i.e. whether
/// noncommutativity can only lower the kinetic energy.
pub fn kinetic_energy_bound_check<T>(masses: &[T], eps: &EpsilonMatrix<T>) -> Result<bool>
where
    T: Real + Field + RealField,
{
    let with = com_separation_check(masses, eps)?;
    let without = com_separation_check(masses, &EpsilonMatrix::zeros(masses.len())?)?;
    let dim = masses.len() - 1;
    let diff = DMatrix::from_fn(dim, dim, |r, c| {
        without.relative_block[r][c] - with.relative_block[r][c]
    });
    let scale = without
        .relative_block
        .iter()
        .flatten()
        .fold(T::one(), |acc, v| Float::max(acc, Float::abs(*v)));
    let tolerance = <T as Real>::lit(DECOUPLING_TOLERANCE) * scale;
    let eigen = diff.symmetric_eigenvalues();
    Ok(eigen.iter().all(|&ev| ev >= -tolerance))
}
