//! Semi-infinite integrals of hydrogenic polynomials against the weight
//! `exp(-x - c / x^4)`.
//!
//! The factor `exp(-c/x^4)` switches from 0 to 1 across a boundary layer of
//! width ~`c^{1/4}` next to the origin. The domain is split at
//! `x* = max(c^{1/4}, 1)`: `[0, x*]` is handled by adaptive Gauss–Kronrod
//! subdivision, `[x*, inf)` by composite Gauss–Legendre panels that are
//! appended until the remaining tail is negligible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};
use crate::radial::{hypergeometric_polynomial, selfconsistency_prefactor, QuantumNumbers};
use crate::scalar::Real;

/// Tail panels stop once a panel contributes less than this fraction of the
/// running total.
const TAIL_CUTOFF: f64 = 1e-18;
const MAX_TAIL_PANELS: usize = 100_000;
/// Width of tail panels far from the boundary layer, in units of the
/// `e^{-x}` decay length.
const TAIL_PANEL_WIDTH: f64 = 6.0;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds an `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::from_usize_lossy(n);
        let two = T::lit(2.0);
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess
            let theta = T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5));
            let mut x = theta.cos();
            let mut deriv = T::one();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                deriv = dp;
                let dx = p / dp;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    let (_, dp) = legendre_with_derivative(n, x);
                    deriv = dp;
                    break;
                }
            }
            let w = two / ((T::one() - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T, a: T, b: T) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let sum: T = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        sum * half
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Accuracy controls for the self-consistency integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec<T> {
    rel_tolerance: T,
    max_subdivisions: usize,
    rule: GaussLegendre<T>,
}

impl<T: Real> QuadratureSpec<T> {
    pub const DEFAULT_NODE_COUNT: usize = 24;
    pub const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;

    pub fn new(rel_tolerance: T, max_subdivisions: usize, node_count: usize) -> Result<Self> {
        if !(rel_tolerance > T::zero()) {
            return Err(domain(format!("rel_tolerance must be positive, got {rel_tolerance}")));
        }
        if node_count < 16 {
            return Err(domain(format!("node_count must be at least 16, got {node_count}")));
        }
        if max_subdivisions == 0 {
            return Err(domain("max_subdivisions must be positive"));
        }
        Ok(Self {
            rel_tolerance,
            max_subdivisions,
            rule: GaussLegendre::new(node_count),
        })
    }

    pub fn rel_tolerance(&self) -> T {
        self.rel_tolerance
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }

    pub fn node_count(&self) -> usize {
        self.rule.len()
    }

    pub fn with_node_count(&self, node_count: usize) -> Result<Self> {
        Self::new(self.rel_tolerance, self.max_subdivisions, node_count)
    }
}

impl<T: Real> Default for QuadratureSpec<T> {
    /// Relative tolerance `1e-10`, raised to `64 * epsilon` for scalar types
    /// that cannot resolve it.
    fn default() -> Self {
        let tol = T::lit(1e-10).max(T::epsilon() * T::lit(64.0));
        Self::new(tol, Self::DEFAULT_MAX_SUBDIVISIONS, Self::DEFAULT_NODE_COUNT)
            .expect("default quadrature spec is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Weight {
    /// `exp(-c/x^4)`
    Suppressed,
    /// `1 - exp(-c/x^4)`
    Complement,
}

#[derive(Debug, Clone, Copy)]
struct Integrand<T> {
    qn: QuantumNumbers,
    c: T,
    power: T,
    weight: Weight,
}

impl<T: Real> Integrand<T> {
    fn eval(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        let f = hypergeometric_polynomial(self.qn, x);
        let x4 = (x * x) * (x * x);
        let log_base = self.power * x.ln() - x;
        let value = match self.weight {
            Weight::Suppressed => (log_base - self.c / x4).exp(),
            Weight::Complement => log_base.exp() * -(-self.c / x4).exp_m1(),
        };
        value * f * f
    }
}

/// `S_nl * ∫ x^{2l+2} e^{-x} e^{-c/x^4} F(-n+l+1, 2l+2, x)^2 dx` over
/// `[0, inf)`. Equals 1 at `c = 0` and decreases strictly with `c`.
pub fn integrate_selfconsistency<T: Real>(qn: QuantumNumbers, c: T, spec: &QuadratureSpec<T>) -> Result<T> {
    integrate(qn, c, 0, Weight::Suppressed, spec)
}

/// Moment `S_nl * ∫ x^{2l+2+power} e^{-x} e^{-c/x^4} F^2 dx`. At `c = 0`,
/// `power = 1` gives the mean of the scaled radius `x`.
pub fn integrate_moment<T: Real>(qn: QuantumNumbers, c: T, power: i32, spec: &QuadratureSpec<T>) -> Result<T> {
    if power < -1 {
        return Err(domain(format!("moment power must be >= -1, got {power}")));
    }
    integrate(qn, c, power, Weight::Suppressed, spec)
}

/// Suppressed fraction `S_nl * ∫ x^{2l+2} e^{-x} (1 - e^{-c/x^4}) F^2 dx`,
/// i.e. `1 - integrate_selfconsistency`, evaluated without cancellation so
/// that tiny values keep full relative accuracy.
pub fn integrate_suppressed_fraction<T: Real>(qn: QuantumNumbers, c: T, spec: &QuadratureSpec<T>) -> Result<T> {
    integrate(qn, c, 0, Weight::Complement, spec)
}

fn integrate<T: Real>(qn: QuantumNumbers, c: T, power: i32, weight: Weight, spec: &QuadratureSpec<T>) -> Result<T> {
    if c.is_nan() || c < T::zero() {
        return Err(domain(format!("suppression strength must be >= 0, got {c}")));
    }
    if c.is_infinite() {
        // e^{-c/x^4} vanishes identically
        return match weight {
            Weight::Suppressed => Ok(T::zero()),
            Weight::Complement => Ok(T::one()),
        };
    }
    if c == T::zero() && weight == Weight::Complement {
        return Ok(T::zero());
    }
    let integrand = Integrand {
        qn,
        c,
        power: T::from_usize_lossy(2 * qn.l() as usize + 2) + T::from_i32(power).unwrap_or_else(T::zero),
        weight,
    };
    let split = c.sqrt().sqrt().max(T::one());
    // Peak of x^p e^{-x} F^2 lies below p + deg(F^2).
    let peak = T::from_usize_lossy(2 * qn.n() as usize) + T::from_i32(power.max(0)).unwrap_or_else(T::zero);
    let f = |x: T| integrand.eval(x);

    let tail = tail_panels(&f, split, peak, &spec.rule)?;
    let head = adaptive_head(&f, c, split, tail, spec)?;
    Ok(selfconsistency_prefactor::<T>(qn) * (head + tail))
}

fn tail_panels<T: Real>(f: &impl Fn(T) -> T, start: T, peak: T, rule: &GaussLegendre<T>) -> Result<T> {
    let far_width = T::lit(TAIL_PANEL_WIDTH);
    let near_width = start.min(T::lit(4.0));
    let cutoff = T::lit(TAIL_CUTOFF);
    let mut total = T::zero();
    let mut a = start;
    for _ in 0..MAX_TAIL_PANELS {
        let width = if a < start * T::lit(2.0) { near_width } else { far_width };
        let b = a + width;
        let panel = rule.integrate(f, a, b);
        total = total + panel;
        a = b;
        if a > start + peak && panel.abs() <= cutoff * total.abs() {
            return Ok(total);
        }
    }
    Err(Error::NonConvergence(format!(
        "tail quadrature did not decay within {MAX_TAIL_PANELS} panels"
    )))
}

// Gauss–Kronrod 7/15 nodes and weights (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Segment<T> {}

impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn kronrod15<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> Segment<T> {
    let half = (b - a) / T::lit(2.0);
    let center = (a + b) / T::lit(2.0);
    let f_center = f(center);
    let mut result_k = f_center * T::lit(WGK[7]);
    let mut result_g = f_center * T::lit(WG[3]);
    let mut result_abs = result_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = T::lit(WGK[j]);
        result_k = result_k + wk * (f1 + f2);
        result_abs = result_abs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g = result_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = result_k / T::lit(2.0);
    let mut result_asc = T::lit(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        result_asc = result_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = result_k * half;
    let result_abs = result_abs * scale;
    let result_asc = result_asc * scale;
    let mut error = ((result_k - result_g) * half).abs();
    if result_asc != T::zero() && error != T::zero() {
        let ratio = (T::lit(200.0) * error / result_asc).powf(T::lit(1.5));
        error = result_asc * ratio.min(T::one());
    }
    let underflow_floor = T::min_positive_value() / (T::lit(50.0) * T::epsilon());
    if result_abs > underflow_floor {
        error = error.max(T::lit(50.0) * T::epsilon() * result_abs);
    }
    Segment { a, b, value, error }
}

/// Adaptive subdivision on `[0, split]`; converges when the summed error
/// estimate is below `rel_tolerance * |head + tail|`.
fn adaptive_head<T: Real>(f: &impl Fn(T) -> T, c: T, split: T, tail: T, spec: &QuadratureSpec<T>) -> Result<T> {
    let mut breakpoints = vec![T::zero()];
    // Maximum of e^{-x - c/x^4} sits at (4c)^{1/5}.
    let ridge = (T::lit(4.0) * c).powf(T::lit(0.2));
    let pieces = 4;
    for i in 1..pieces {
        breakpoints.push(split * T::from_usize_lossy(i) / T::from_usize_lossy(pieces));
    }
    if ridge > T::zero() && ridge < split {
        breakpoints.push(ridge);
    }
    // When the split is far out, the bulk of the unsuppressed density near
    // x ~ n is invisible to a 15-point rule spanning the whole quarter.
    let mut x = T::lit(0.5);
    while x < split {
        breakpoints.push(x);
        x = x * T::lit(2.0);
    }
    breakpoints.push(split);
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    breakpoints.dedup();

    let mut heap: BinaryHeap<Segment<T>> = breakpoints.windows(2).map(|w| kronrod15(f, w[0], w[1])).collect();
    let mut value: T = heap.iter().map(|s| s.value).sum();
    let mut error: T = heap.iter().map(|s| s.error).sum();
    let mut subdivisions = heap.len();

    loop {
        let target = spec.rel_tolerance * (value + tail).abs();
        if error <= target {
            return Ok(value);
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature exhausted {} subdivisions (error {} > target {})",
                spec.max_subdivisions, error, target
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = (worst.a + worst.b) / T::lit(2.0);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::NonConvergence(
                "adaptive quadrature reached machine resolution".into(),
            ));
        }
        let left = kronrod15(f, worst.a, mid);
        let right = kronrod15(f, mid, worst.b);
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Resum periodically to keep cancellation from drifting the running
        // totals.
        if subdivisions.is_multiple_of(64) {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
}
