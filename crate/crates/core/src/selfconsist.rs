//! The nonlinear fixed-point equation for `eta = 1 - epsilon`.
//!
//! For a level `(n, l)` at combined coupling `g = Omega (alpha Z)^6` the
//! equation reads `eta = RHS(eta)` with
//! `RHS(eta) = S_nl ∫ x^{2l+2} e^{-x - c/x^4} F^2 dx`, `c = g / (eta^8 n^4)`.
//! Below a level-specific critical coupling the map has two fixed points;
//! the one nearer 1 is physical. At the critical coupling the two merge
//! into a double root, and beyond it the level does not exist.
//!
//! Roots are located on `h(eta) = (1 - eta) - D(eta)`, where
//! `D = 1 - RHS` is the suppressed fraction computed directly by
//! [`integrate_suppressed_fraction`]. This keeps `h` accurate when `epsilon`
//! is far below the quadrature tolerance.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::observables::{energy_level, mean_distance};
use crate::quad::{integrate_selfconsistency, integrate_suppressed_fraction, QuadratureSpec};
use crate::radial::QuantumNumbers;
use crate::scalar::Real;

/// Critical coupling of the ground state; fixes the free constant of the
/// noncommutativity kernel so that the 1S critical charge is `Z = 1/alpha`.
pub const OMEGA_C: f64 = 0.40765;

const INVERSE_GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_BISECTIONS: usize = 200;

/// Dimensionless coupling of the hydrogenic problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coupling<T> {
    alpha_z: T,
    omega: T,
}

impl<T: Real> Coupling<T> {
    pub fn new(alpha_z: T, omega: T) -> Result<Self> {
        if !(alpha_z > T::zero()) || !alpha_z.is_finite() {
            return Err(domain(format!("alpha_z must be positive and finite, got {alpha_z}")));
        }
        if !(omega >= T::zero()) || !omega.is_finite() {
            return Err(domain(format!("omega must be non-negative and finite, got {omega}")));
        }
        Ok(Self { alpha_z, omega })
    }

    /// Coupling with `Omega = OMEGA_C`.
    pub fn with_critical_omega(alpha_z: T) -> Result<Self> {
        Self::new(alpha_z, T::lit(OMEGA_C))
    }

    pub fn alpha_z(&self) -> T {
        self.alpha_z
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    /// `g = Omega (alpha Z)^6`.
    pub fn g(&self) -> T {
        self.omega * self.alpha_z.powi(6)
    }
}

/// Which fixed point a solution represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Simple root nearest to `eta = 1` (the physical one).
    Upper,
    /// The other simple root.
    Lower,
    /// Double root at (numerical) tangency, i.e. at the critical coupling.
    Tangent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Simple,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint<T> {
    pub eta: T,
    pub kind: RootKind,
}

/// Converged state of one level at one coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelfConsistentSolution<T> {
    pub qn: QuantumNumbers,
    pub coupling: Coupling<T>,
    pub eta: T,
    pub epsilon: T,
    /// Energy in units of `mu c^2`.
    pub energy: T,
    /// Mean inter-particle distance in units of `hbar / (mu c)`.
    pub mean_distance: T,
    /// `|RHS(eta) - eta|` at the returned `eta`.
    pub residual: T,
    pub iterations: usize,
    pub branch: Branch,
}

/// Coupling beyond which a level has no self-consistent solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint<T> {
    pub qn: QuantumNumbers,
    pub g_critical: T,
    /// `(g_critical / OMEGA_C)^{1/6}`.
    pub alpha_z_critical: T,
    pub eta_critical: T,
    /// `max_eta (RHS - eta)` evaluated at `g_critical`.
    pub margin: T,
}

impl<T: Real> CriticalPoint<T> {
    /// Critical `alpha Z` for a kernel constant other than `OMEGA_C`.
    pub fn alpha_z_for(&self, omega: T) -> T {
        (self.g_critical / omega).powf(T::one() / T::lit(6.0))
    }
}

/// Tolerances and grids used by the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings<T> {
    /// Bisection tolerance on `eta` (and on the residual).
    pub eta_tolerance: T,
    /// Bisection tolerance on the critical coupling.
    pub g_tolerance: T,
    /// Points of the uniform root-bracketing grid on `[eta_floor, 1]`.
    pub scan_points: usize,
    /// Points of the coarser grid used for the existence test in
    /// [`critical_g`].
    pub existence_points: usize,
    pub eta_floor: T,
    /// A maximum of `RHS - eta` within this distance of zero is reported
    /// as a double root.
    pub tangency_tolerance: T,
    pub quadrature: QuadratureSpec<T>,
}

impl<T: Real> Default for SolverSettings<T> {
    fn default() -> Self {
        Self {
            eta_tolerance: T::lit(1e-8).max(T::epsilon() * T::lit(16.0)),
            g_tolerance: T::lit(1e-5),
            scan_points: 2000,
            existence_points: 400,
            eta_floor: T::lit(1e-3),
            tangency_tolerance: T::lit(1e-5),
            quadrature: QuadratureSpec::default(),
        }
    }
}

impl<T: Real> SolverSettings<T> {
    pub fn with_tolerance(tol: T) -> Result<Self> {
        if !(tol > T::zero()) {
            return Err(domain(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self {
            eta_tolerance: tol,
            ..Self::default()
        })
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta_tolerance > T::zero()) || !(self.g_tolerance > T::zero()) {
            return Err(domain("solver tolerances must be positive"));
        }
        if self.scan_points < 3 || self.existence_points < 3 {
            return Err(domain("scan grids need at least 3 points"));
        }
        if !(self.eta_floor > T::zero() && self.eta_floor < T::one()) {
            return Err(domain("eta_floor must lie in (0, 1)"));
        }
        Ok(())
    }

    fn grid(&self, points: usize) -> Vec<T> {
        uniform_grid(self.eta_floor, T::one(), points)
    }
}

/// `points` uniformly spaced values from `lo` to `hi`, endpoints exact.
pub fn uniform_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    let last = T::from_usize_lossy(points - 1);
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * T::from_usize_lossy(i) / last
            }
        })
        .collect()
}

fn suppression_strength<T: Real>(qn: QuantumNumbers, g: T, eta: T) -> T {
    let n4 = T::from_usize_lossy(qn.n() as usize).powi(4);
    g / (eta.powi(8) * n4)
}

fn check_inputs<T: Real>(g: T, eta: T) -> Result<()> {
    if !(g >= T::zero()) {
        return Err(domain(format!("g must be non-negative, got {g}")));
    }
    if !(eta > T::zero()) {
        return Err(domain(format!("eta must be positive, got {eta}")));
    }
    Ok(())
}

/// Right-hand side of the fixed-point equation at `eta`.
pub fn rhs<T: Real>(qn: QuantumNumbers, g: T, eta: T, quad: &QuadratureSpec<T>) -> Result<T> {
    check_inputs(g, eta)?;
    if g == T::zero() {
        return Ok(T::one());
    }
    integrate_selfconsistency(qn, suppression_strength(qn, g, eta), quad)
}

/// `h(eta) = RHS(eta) - eta`, evaluated as `(1 - eta) - D(eta)`.
pub fn fixed_point_residual<T: Real>(qn: QuantumNumbers, g: T, eta: T, quad: &QuadratureSpec<T>) -> Result<T> {
    check_inputs(g, eta)?;
    let lost = if g == T::zero() {
        T::zero()
    } else {
        integrate_suppressed_fraction(qn, suppression_strength(qn, g, eta), quad)?
    };
    Ok((T::one() - eta) - lost)
}

/// Tabulates `(eta, RHS(eta))` over the given grid, in grid order.
pub fn rhs_curve<T: Real>(qn: QuantumNumbers, g: T, eta_grid: &[T], quad: &QuadratureSpec<T>) -> Result<Vec<(T, T)>> {
    if let Some(bad) = eta_grid.iter().find(|&&e| !(e > T::zero() && e <= T::one())) {
        return Err(domain(format!("grid value {bad} outside (0, 1]")));
    }
    eta_grid
        .par_iter()
        .map(|&eta| rhs(qn, g, eta, quad).map(|v| (eta, v)))
        .collect()
}

fn residuals_on<T: Real>(qn: QuantumNumbers, g: T, grid: &[T], quad: &QuadratureSpec<T>) -> Result<Vec<T>> {
    grid.par_iter()
        .map(|&eta| fixed_point_residual(qn, g, eta, quad))
        .collect()
}

/// Bisection for a sign change of `h` on `[lo, hi]`. Returns the root, its
/// residual and the number of halvings.
fn bisect<T: Real>(h: impl Fn(T) -> Result<T>, mut lo: T, mut hi: T, mut h_lo: T, tol: T) -> Result<(T, T, usize)> {
    let mut h_hi = h(hi)?;
    if h_lo == T::zero() {
        return Ok((lo, T::zero(), 0));
    }
    if h_hi == T::zero() {
        return Ok((hi, T::zero(), 0));
    }
    for iteration in 1..=MAX_BISECTIONS {
        let mid = (lo + hi) / T::lit(2.0);
        let h_mid = h(mid)?;
        if h_mid == T::zero() || mid <= lo || mid >= hi {
            return Ok((mid, h_mid.abs(), iteration));
        }
        if (h_mid > T::zero()) == (h_lo > T::zero()) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
            h_hi = h_mid;
        }
        if (hi - lo) <= tol && h_mid.abs() <= tol {
            // one secant step on the final bracket; h is smooth there
            let secant = lo - h_lo * (hi - lo) / (h_hi - h_lo);
            if secant >= lo && secant <= hi {
                let h_secant = h(secant)?;
                if h_secant.abs() < h_mid.abs() {
                    return Ok((secant, h_secant.abs(), iteration + 1));
                }
            }
            return Ok((mid, h_mid.abs(), iteration));
        }
    }
    Err(Error::NonConvergence(format!(
        "bisection did not converge in {MAX_BISECTIONS} steps"
    )))
}

/// Golden-section maximization of `h` on `[lo, hi]`.
fn golden_max<T: Real>(h: impl Fn(T) -> Result<T>, mut lo: T, mut hi: T, tol: T) -> Result<(T, T)> {
    let ratio = T::lit(INVERSE_GOLDEN);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = h(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = h(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Refines a grid maximum at index `i` with golden-section search over the
/// neighbouring cells.
fn refine_max<T: Real>(h: impl Fn(T) -> Result<T>, grid: &[T], values: &[T], i: usize, tol: T) -> Result<(T, T)> {
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (x, v) = golden_max(&h, lo, hi, tol)?;
    // endpoint maxima are not bracketed by golden section
    Ok(if values[i] > v { (grid[i], values[i]) } else { (x, v) })
}

fn argmax<T: Real>(values: &[T]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best })
}

fn is_crossing<T: Real>(a: T, b: T) -> bool {
    a == T::zero() || ((a > T::zero()) != (b > T::zero()) && b != T::zero())
}

/// Largest value of `RHS - eta` on `[eta_floor, 1]` and where it occurs. The
/// level has a fixed point iff this margin is non-negative.
pub fn existence_margin<T: Real>(qn: QuantumNumbers, g: T, settings: &SolverSettings<T>) -> Result<(T, T)> {
    settings.validate()?;
    let grid = settings.grid(settings.existence_points);
    let values = residuals_on(qn, g, &grid, &settings.quadrature)?;
    let i = argmax(&values);
    let h = |eta: T| fixed_point_residual(qn, g, eta, &settings.quadrature);
    let (eta, margin) = refine_max(h, &grid, &values, i, T::lit(1e-10).max(T::epsilon() * T::lit(16.0)))?;
    Ok((margin, eta))
}

/// All fixed points on `[eta_floor, 1]`, ascending. Simple roots come from
/// sign changes on the scan grid; a local maximum of `RHS - eta` within
/// `tangency_tolerance` of zero is reported as one double root and absorbs
/// the simple roots on its hump.
pub fn scan_fixed_points<T: Real>(
    qn: QuantumNumbers,
    g: T,
    settings: &SolverSettings<T>,
) -> Result<Vec<FixedPoint<T>>> {
    settings.validate()?;
    let quad = &settings.quadrature;
    let grid = settings.grid(settings.scan_points);
    let values = residuals_on(qn, g, &grid, quad)?;
    let h = |eta: T| fixed_point_residual(qn, g, eta, quad);

    let mut simple = Vec::new();
    for i in 0..grid.len() - 1 {
        if is_crossing(values[i], values[i + 1]) {
            let (eta, _, _) = bisect(h, grid[i], grid[i + 1], values[i], settings.eta_tolerance)?;
            simple.push(eta);
        }
    }
    if values[grid.len() - 1] == T::zero() {
        simple.push(T::one());
    }

    // Humps: stretches between consecutive local minima.
    let last = grid.len() - 1;
    let mut minima = vec![0];
    for i in 1..last {
        if values[i] <= values[i - 1] && values[i] < values[i + 1] {
            minima.push(i);
        }
    }
    minima.push(last);

    let mut roots = Vec::new();
    for pair in minima.windows(2) {
        let (start, end) = (pair[0], pair[1]);
        let top = start + argmax(&values[start..=end]);
        let (eta_top, h_top) = refine_max(h, &grid, &values, top, settings.eta_tolerance)?;
        let on_hump = |eta: &T| *eta >= grid[start] && *eta <= grid[end];
        if h_top.abs() <= settings.tangency_tolerance && top != last {
            roots.push(FixedPoint {
                eta: eta_top,
                kind: RootKind::Double,
            });
            simple.retain(|eta| !on_hump(eta));
        }
    }
    roots.extend(simple.into_iter().map(|eta| FixedPoint {
        eta,
        kind: RootKind::Simple,
    }));
    roots.sort_by(|a, b| a.eta.partial_cmp(&b.eta).unwrap_or(std::cmp::Ordering::Equal));
    roots.dedup_by(|a, b| a.eta == b.eta);
    Ok(roots)
}

/// Solves the level and returns the fixed point nearest `eta = 1`.
///
/// Fails with [`Error::NoSolution`] when `RHS - eta` stays below
/// `-tangency_tolerance` on the whole of `[eta_floor, 1]`.
pub fn solve_level<T: Real>(
    qn: QuantumNumbers,
    coupling: &Coupling<T>,
    settings: &SolverSettings<T>,
) -> Result<SelfConsistentSolution<T>> {
    settings.validate()?;
    let g = coupling.g();
    let quad = &settings.quadrature;
    let finish = |eta: T, residual: T, iterations: usize, branch: Branch| -> Result<SelfConsistentSolution<T>> {
        Ok(SelfConsistentSolution {
            qn,
            coupling: *coupling,
            eta,
            epsilon: T::one() - eta,
            energy: energy_level(qn, coupling.alpha_z(), eta)?,
            mean_distance: mean_distance(qn, coupling.alpha_z(), eta)?,
            residual,
            iterations,
            branch,
        })
    };
    if g == T::zero() {
        return finish(T::one(), T::zero(), 0, Branch::Upper);
    }

    let grid = settings.grid(settings.scan_points);
    let values = residuals_on(qn, g, &grid, quad)?;
    let h = |eta: T| fixed_point_residual(qn, g, eta, quad);
    let last = grid.len() - 1;

    if values[last] == T::zero() {
        return finish(T::one(), T::zero(), 0, Branch::Upper);
    }
    if let Some(i) = (0..last).rev().find(|&i| is_crossing(values[i], values[i + 1])) {
        let (eta, residual, iterations) = bisect(h, grid[i], grid[i + 1], values[i], settings.eta_tolerance)?;
        return finish(eta, residual, iterations, Branch::Upper);
    }

    // No sign change: either both roots hide inside one grid cell or the
    // level sits at or beyond tangency.
    let top = argmax(&values);
    let (eta_top, h_top) = refine_max(h, &grid, &values, top, settings.eta_tolerance)?;
    if h_top > T::zero() {
        let hi = grid[(top + 1).min(last)];
        let (eta, residual, iterations) = bisect(h, eta_top, hi, h_top, settings.eta_tolerance)?;
        return finish(eta, residual, iterations, Branch::Upper);
    }
    if h_top >= -settings.tangency_tolerance {
        return finish(eta_top, h_top.abs(), 0, Branch::Tangent);
    }
    Err(Error::NoSolution {
        qn,
        g: g.to_f64_lossy(),
        h_max: h_top.to_f64_lossy(),
    })
}

/// Locates the critical coupling of a level by bisection on `g` over the
/// sign of [`existence_margin`].
pub fn critical_g<T: Real>(qn: QuantumNumbers, settings: &SolverSettings<T>) -> Result<CriticalPoint<T>> {
    settings.validate()?;
    let exists = |g: T| existence_margin(qn, g, settings).map(|(m, _)| m >= T::zero());

    let mut lo = T::zero();
    let mut hi = T::one();
    let mut expansions = 0;
    while exists(hi)? {
        lo = hi;
        hi = hi * T::lit(2.0);
        expansions += 1;
        if expansions > 80 {
            return Err(Error::NonConvergence(format!(
                "no upper bracket for the critical coupling of {qn}"
            )));
        }
    }
    let mut steps = 0;
    while hi - lo > settings.g_tolerance {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if exists(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
        if steps > MAX_BISECTIONS {
            return Err(Error::NonConvergence(format!("critical coupling bisection for {qn}")));
        }
    }
    let g_critical = (lo + hi) / T::lit(2.0);
    let (margin, eta_critical) = existence_margin(qn, g_critical, settings)?;
    Ok(CriticalPoint {
        qn,
        g_critical,
        alpha_z_critical: (g_critical / T::lit(OMEGA_C)).powf(T::one() / T::lit(6.0)),
        eta_critical,
        margin,
    })
}
