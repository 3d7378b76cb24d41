use nctwobody::quad::{integrate_moment, integrate_selfconsistency, QuadratureSpec};
use nctwobody::QuantumNumbers;

#[path = "support/simpson.rs"]
mod simpson;

use simpson::oracle;

const C_GRID: [f64; 6] = [0.0, 1e-4, 1e-2, 0.1, 0.4, 2.0];

#[test]
fn agrees_with_adaptive_simpson_oracle() {
    let spec = QuadratureSpec::<f64>::default();
    let mut worst: f64 = 0.0;
    for qn in QuantumNumbers::up_to(4).unwrap() {
        for &c in &C_GRID {
            let got = integrate_selfconsistency(qn, c, &spec).unwrap();
            let want = oracle(qn.n(), qn.l(), c);
            let rel = ((got - want) / want).abs();
            worst = worst.max(rel);
            assert!(rel < 1e-8, "{qn} c={c}: {got} vs oracle {want} (rel {rel:e})");
        }
    }
    assert!(worst < 1e-8);
}

#[test]
fn strictly_decreasing_in_c() {
    let spec = QuadratureSpec::<f64>::default();
    let cs = [0.0, 1e-8, 1e-5, 1e-3, 0.05, 0.3, 1.0, 4.0, 30.0, 500.0, 1e4];
    for qn in QuantumNumbers::up_to(4).unwrap() {
        let values: Vec<f64> = cs
            .iter()
            .map(|&c| integrate_selfconsistency(qn, c, &spec).unwrap())
            .collect();
        for w in values.windows(2) {
            assert!(w[1] < w[0], "{qn}: {values:?}");
        }
    }
}

#[test]
fn limits_in_c() {
    let spec = QuadratureSpec::<f64>::default();
    for qn in QuantumNumbers::up_to(3).unwrap() {
        let at_zero = integrate_selfconsistency(qn, 0.0, &spec).unwrap();
        assert!((at_zero - 1.0).abs() < 1e-12);
        let near = integrate_selfconsistency(qn, 1e-14, &spec).unwrap();
        assert!((near - at_zero).abs() < 1e-6, "{qn}: {near}");
        let far = integrate_selfconsistency(qn, 1e12, &spec).unwrap();
        assert!(far < 1e-100, "{qn}: {far}");
    }
}

#[test]
fn doubling_node_count_is_invisible() {
    let base = QuadratureSpec::<f64>::default();
    let doubled = base.with_node_count(48).unwrap();
    for qn in QuantumNumbers::up_to(4).unwrap() {
        for &c in &[1e-4, 0.4, 2.0, 75.0, 3e3] {
            let a = integrate_selfconsistency(qn, c, &base).unwrap();
            let b = integrate_selfconsistency(qn, c, &doubled).unwrap();
            assert!(((a - b) / a).abs() < base.rel_tolerance(), "{qn} c={c}: {a} vs {b}");
        }
    }
}

#[test]
fn first_moment_is_textbook_mean_radius() {
    // <x> = 2 <r> / (n a) with <r> = a [3n^2 - l(l+1)] / 2
    let spec = QuadratureSpec::<f64>::default();
    for qn in QuantumNumbers::up_to(4).unwrap() {
        let (n, l) = (qn.n() as f64, qn.l() as f64);
        let want = (3.0 * n * n - l * (l + 1.0)) / n;
        let got = integrate_moment(qn, 0.0, 1, &spec).unwrap();
        assert!(((got - want) / want).abs() < 1e-10, "{qn}: {got} vs {want}");
    }
}
