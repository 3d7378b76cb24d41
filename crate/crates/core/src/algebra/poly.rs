//! Sparse multivariate polynomials used as a test space on which first-order
//! operators act exactly.

use std::collections::BTreeMap;

use crate::scalar::Field;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    vars: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Field> Polynomial<T> {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponents: Monomial) -> Self {
        let vars = exponents.len();
        let mut terms = BTreeMap::new();
        terms.insert(exponents, T::one());
        Self { vars, terms }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exponents: Monomial, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        let updated = self.terms.get(&exponents).cloned().unwrap_or_else(T::zero) + coeff;
        if updated.is_zero() {
            self.terms.remove(&exponents);
        } else {
            self.terms.insert(exponents, updated);
        }
    }

    /// `self + factor * other`
    pub fn axpy(&mut self, factor: &T, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), factor.clone() * c.clone());
        }
    }

    /// Multiplication by the linear form `Σ_k form[k] q_k`.
    pub fn mul_linear(&self, form: &[T]) -> Self {
        let mut out = Self::zero(self.vars);
        for (k, a) in form.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m, c) in &self.terms {
                let mut m = m.clone();
                m[k] += 1;
                out.add_term(m, a.clone() * c.clone());
            }
        }
        out
    }

    /// Directional derivative `Σ_k dir[k] ∂/∂q_k`.
    pub fn derive(&self, dir: &[T]) -> Self {
        let mut out = Self::zero(self.vars);
        for (k, b) in dir.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (m, c) in &self.terms {
                let power = m[k];
                if power == 0 {
                    continue;
                }
                let mut lowered = m.clone();
                lowered[k] -= 1;
                let factor = T::from_u32(power).expect("exponent fits the field");
                out.add_term(lowered, b.clone() * c.clone() * factor);
            }
        }
        out
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> T {
        self.terms
            .values()
            .map(|c| c.abs())
            .fold(T::zero(), |acc, c| if c > acc { c } else { acc })
    }
}

/// All monomials in `vars` variables of total degree at most `degree`.
pub fn monomial_basis(vars: usize, degree: u32) -> Vec<Monomial> {
    fn fill(prefix: &mut Monomial, vars: usize, budget: u32, out: &mut Vec<Monomial>) {
        if prefix.len() == vars {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            fill(prefix, vars, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(vars), vars, degree, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_size_is_binomial() {
        // C(d + v, v)
        assert_eq!(monomial_basis(2, 6).len(), 28);
        assert_eq!(monomial_basis(3, 2).len(), 10);
        assert_eq!(monomial_basis(1, 0).len(), 1);
    }

    #[test]
    fn product_rule_on_monomial() {
        // ∂x (x · x^2 y) = 3 x^2 y
        let p = Polynomial::<f64>::monomial(vec![2, 1]);
        let q = p.mul_linear(&[1.0, 0.0]).derive(&[1.0, 0.0]);
        let expected = {
            let mut e = Polynomial::zero(2);
            e.axpy(&3.0, &Polynomial::monomial(vec![2, 1]));
            e
        };
        assert_eq!(q, expected);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = Polynomial::<f64>::monomial(vec![1, 0]);
        let mut q = p.clone();
        q.axpy(&-1.0, &p);
        assert_eq!(q.terms().count(), 0);
    }
}
