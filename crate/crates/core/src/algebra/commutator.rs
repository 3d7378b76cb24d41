//! Coordinate and momentum operators as first-order differential operators,
//! and their commutators evaluated exactly on a polynomial test space.
//!
//! Units: `hbar = 1`. A momentum operator is stored through its real
//! derivation `D` with `p = -i D`. Every commutator of a position with a
//! momentum is then `i * kappa` for a real scalar `kappa`, which is what the
//! tables below report (the quantum Poisson bracket `[a, b] / (i hbar)`).

use serde::Serialize;

use super::poly::{monomial_basis, Polynomial};
use crate::error::{domain, Error, Result};
use crate::scalar::Field;

/// Degree of the polynomial test space for the two-body checks.
pub const TWO_BODY_TEST_DEGREE: u32 = 6;
/// Degree of the test space for the N-body checks.
pub const N_BODY_TEST_DEGREE: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Operator<T> {
    /// Multiplication by a linear form in the test-space variables.
    Position(Vec<T>),
    /// `-i` times the derivation with these directional coefficients.
    Momentum(Vec<T>),
}

impl<T: Field> Operator<T> {
    fn apply_real(&self, f: &Polynomial<T>) -> Polynomial<T> {
        match self {
            Operator::Position(form) => f.mul_linear(form),
            Operator::Momentum(dir) => f.derive(dir),
        }
    }

    fn is_momentum(&self) -> bool {
        matches!(self, Operator::Momentum(_))
    }
}

/// `[a, b] / (i hbar)` evaluated on every monomial of degree `<= degree`.
///
/// The commutator of the real parts is required to act as `lambda * Id` on
/// the whole test space (within [`Field::comparison_tolerance`] scaled by the
/// coefficient size); otherwise [`Error::RepresentationMismatch`] is
/// returned. For a position/momentum pair, in either order, the bracket is
/// `-lambda`. For two positions or two momenta the commutator is real, so a
/// non-zero `lambda` would make the bracket imaginary and is also reported
/// as a mismatch.
pub fn bracket<T: Field>(a: &Operator<T>, b: &Operator<T>, degree: u32) -> Result<T> {
    let vars = match (a, b) {
        (Operator::Position(x) | Operator::Momentum(x), Operator::Position(y) | Operator::Momentum(y)) => {
            if x.len() != y.len() {
                return Err(Error::DimensionMismatch {
                    expected: x.len(),
                    actual: y.len(),
                });
            }
            x.len()
        }
    };
    let mut lambda: Option<T> = None;
    for exponents in monomial_basis(vars, degree) {
        let f = Polynomial::monomial(exponents.clone());
        let mut image = a.apply_real(&b.apply_real(&f));
        image.axpy(&-T::one(), &b.apply_real(&a.apply_real(&f)));
        let own = image
            .terms()
            .find(|(m, _)| **m == exponents)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(T::zero);
        let reference = lambda.get_or_insert_with(|| own.clone()).clone();
        let mut residual = image;
        residual.axpy(&-reference.clone(), &f);
        let slack = T::comparison_tolerance() * (T::one() + reference.abs());
        if residual.max_abs() > slack {
            return Err(Error::RepresentationMismatch(format!(
                "commutator is not proportional to the identity on monomial {exponents:?}"
            )));
        }
    }
    let lambda = lambda.unwrap_or_else(T::zero);
    if a.is_momentum() == b.is_momentum() {
        if lambda.abs() > T::comparison_tolerance() {
            return Err(Error::RepresentationMismatch(format!(
                "commutator of like operators is {lambda:?}, expected 0"
            )));
        }
        // like operators commute; report an exact zero
        return Ok(T::zero());
    }
    // exactly one factor carries the -i of a momentum
    Ok(-lambda)
}

/// Two-body representation with a fixed noncommutativity parameter, in one
/// Cartesian direction. Test-space variables are `(x, X)`: relative and
/// center-of-mass coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoBodyRep<T> {
    m1: T,
    m2: T,
    epsilon: T,
}

impl<T: Field> TwoBodyRep<T> {
    pub fn new(m1: T, m2: T, epsilon: T) -> Result<Self> {
        if !(m1 > T::zero() && m2 > T::zero()) {
            return Err(domain("masses must be positive"));
        }
        if !(epsilon >= T::zero() && epsilon < T::one()) {
            return Err(domain(format!("epsilon must lie in [0, 1), got {epsilon:?}")));
        }
        Ok(Self { m1, m2, epsilon })
    }

    pub fn m1(&self) -> &T {
        &self.m1
    }

    pub fn m2(&self) -> &T {
        &self.m2
    }

    pub fn epsilon(&self) -> &T {
        &self.epsilon
    }

    pub fn total_mass(&self) -> T {
        self.m1.clone() + self.m2.clone()
    }

    /// Same representation with the particle labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            m1: self.m2.clone(),
            m2: self.m1.clone(),
            epsilon: self.epsilon.clone(),
        }
    }

    fn shares(&self) -> (T, T) {
        let m = self.total_mass();
        (self.m1.clone() / m.clone(), self.m2.clone() / m)
    }

    /// `x1 = -(1-eps)(m2/M) x + X`
    pub fn x1(&self) -> Operator<T> {
        let (_, w2) = self.shares();
        let shrink = T::one() - self.epsilon.clone();
        Operator::Position(vec![-(shrink * w2), T::one()])
    }

    /// `x2 = (1-eps)(m1/M) x + X`
    pub fn x2(&self) -> Operator<T> {
        let (w1, _) = self.shares();
        let shrink = T::one() - self.epsilon.clone();
        Operator::Position(vec![shrink * w1, T::one()])
    }

    /// `p1 = i ∂x - i (m1/M) ∂X`
    pub fn p1(&self) -> Operator<T> {
        let (w1, _) = self.shares();
        Operator::Momentum(vec![-T::one(), w1])
    }

    /// `p2 = -i ∂x - i (m2/M) ∂X`
    pub fn p2(&self) -> Operator<T> {
        let (_, w2) = self.shares();
        Operator::Momentum(vec![T::one(), w2])
    }

    /// Total momentum `p1 + p2 = -i ∂X`.
    pub fn total_momentum(&self) -> Operator<T> {
        match (self.p1(), self.p2()) {
            (Operator::Momentum(a), Operator::Momentum(b)) => {
                Operator::Momentum(a.into_iter().zip(b).map(|(u, v)| u + v).collect())
            }
            _ => unreachable!("momenta are derivations"),
        }
    }

    /// Closed-form brackets the representation must reproduce.
    pub fn expected_table(&self) -> CommutatorTable<T> {
        let (w1, w2) = self.shares();
        let eps = self.epsilon.clone();
        CommutatorTable {
            x1_p1: T::one() - w2.clone() * eps.clone(),
            x2_p2: T::one() - w1.clone() * eps.clone(),
            x1_p2: w2 * eps.clone(),
            x2_p1: w1 * eps,
            x1_x2: T::zero(),
            p1_p2: T::zero(),
        }
    }
}

/// The six two-body brackets `[a, b] / (i hbar)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorTable<T> {
    pub x1_p1: T,
    pub x2_p2: T,
    pub x1_p2: T,
    pub x2_p1: T,
    pub x1_x2: T,
    pub p1_p2: T,
}

impl<T: Field> CommutatorTable<T> {
    pub fn as_array(&self) -> [T; 6] {
        [
            self.x1_p1.clone(),
            self.x2_p2.clone(),
            self.x1_p2.clone(),
            self.x2_p1.clone(),
            self.x1_x2.clone(),
            self.p1_p2.clone(),
        ]
    }

    /// Largest entrywise deviation from another table.
    pub fn max_deviation(&self, other: &Self) -> T {
        self.as_array()
            .into_iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(T::zero(), |acc, d| if d > acc { d } else { acc })
    }
}

/// Evaluates the six brackets of the representation on the degree-6 test
/// space.
pub fn commutator_table<T: Field>(rep: &TwoBodyRep<T>) -> Result<CommutatorTable<T>> {
    let (x1, x2, p1, p2) = (rep.x1(), rep.x2(), rep.p1(), rep.p2());
    let d = TWO_BODY_TEST_DEGREE;
    Ok(CommutatorTable {
        x1_p1: bracket(&x1, &p1, d)?,
        x2_p2: bracket(&x2, &p2, d)?,
        x1_p2: bracket(&x1, &p2, d)?,
        x2_p1: bracket(&x2, &p1, d)?,
        x1_x2: bracket(&x1, &x2, d)?,
        p1_p2: bracket(&p1, &p2, d)?,
    })
}

/// `[x_j, p1 + p2] / (i hbar)` for `j = 1, 2`, each of which must be 1.
pub fn total_momentum_brackets<T: Field>(rep: &TwoBodyRep<T>) -> Result<[T; 2]> {
    let total = rep.total_momentum();
    let d = TWO_BODY_TEST_DEGREE;
    Ok([bracket(&rep.x1(), &total, d)?, bracket(&rep.x2(), &total, d)?])
}

/// N-body representation in which the particle coordinates are the
/// independent variables and each momentum mixes derivatives through the
/// noncommutativity matrix:
/// `p_j = -i [(1 - Σ_q (m_q/M) eps_jq) ∂_j + Σ_k (m_j/M) eps_jk ∂_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NBodyRep<T> {
    masses: Vec<T>,
    eps: super::kinetic::EpsilonMatrix<T>,
}

impl<T: Field> NBodyRep<T> {
    pub fn new(masses: Vec<T>, eps: super::kinetic::EpsilonMatrix<T>) -> Result<Self> {
        super::kinetic::check_masses(&masses, eps.size())?;
        Ok(Self { masses, eps })
    }

    pub fn size(&self) -> usize {
        self.masses.len()
    }

    pub fn position(&self, j: usize) -> Operator<T> {
        let mut form = vec![T::zero(); self.size()];
        form[j] = T::one();
        Operator::Position(form)
    }

    pub fn momentum(&self, j: usize) -> Operator<T> {
        let total: T = self.masses.iter().cloned().fold(T::zero(), |a, b| a + b);
        let n = self.size();
        let mut dir = vec![T::zero(); n];
        let mut shared = T::zero();
        for k in 0..n {
            let share = self.masses[k].clone() / total.clone() * self.eps.get(j, k).clone();
            shared = shared + share;
            dir[k] = self.masses[j].clone() / total.clone() * self.eps.get(j, k).clone();
        }
        dir[j] = dir[j].clone() + T::one() - shared;
        Operator::Momentum(dir)
    }

    /// Matrix of brackets `[x_j, p_k] / (i hbar)`.
    pub fn position_momentum_brackets(&self) -> Result<Vec<Vec<T>>> {
        let n = self.size();
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| bracket(&self.position(j), &self.momentum(k), N_BODY_TEST_DEGREE))
                    .collect()
            })
            .collect()
    }

    /// Checks `[x_j, x_k] = 0` and `[p_j, p_k] = 0` for all pairs.
    pub fn like_operators_commute(&self) -> Result<()> {
        let n = self.size();
        for j in 0..n {
            for k in 0..n {
                bracket(&self.position(j), &self.position(k), N_BODY_TEST_DEGREE)?;
                bracket(&self.momentum(j), &self.momentum(k), N_BODY_TEST_DEGREE)?;
            }
        }
        Ok(())
    }
}
