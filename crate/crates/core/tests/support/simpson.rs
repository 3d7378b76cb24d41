//! Brute-force reference for the self-consistency integral: explicit
//! Pochhammer series and recursive adaptive Simpson on `[1e-6, 200]`.

/// `1F1(-m, b, x)` summed term by term from Pochhammer symbols.
fn kummer(m: u32, b: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..=m {
        let mut term = 1.0;
        for j in 0..k {
            term *= (-(m as f64) + j as f64) / (b + j as f64) * x / (j as f64 + 1.0);
        }
        sum += term;
    }
    sum
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn oracle_integrand(n: u32, l: u32, c: f64) -> impl Fn(f64) -> f64 {
    let b = 2.0 * l as f64 + 2.0;
    let pref = factorial(n + l) / (2.0 * n as f64 * factorial(n - l - 1)) / factorial(2 * l + 1).powi(2);
    move |x: f64| {
        let f = kummer(n - l - 1, b, x);
        pref * x.powf(b) * f * f * (-x - c / x.powi(4)).exp()
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

pub fn oracle(n: u32, l: u32, c: f64) -> f64 {
    let f = oracle_integrand(n, l, c);
    let (a, b) = (1e-6, 200.0);
    // coarse pass fixes the absolute tolerance
    let panels = 4000;
    let h = (b - a) / panels as f64;
    let rough: f64 = (0..panels).map(|i| f(a + (i as f64 + 0.5) * h) * h).sum();
    let tol = 1e-13 * rough.abs().max(1e-300);
    // split into pieces so the recursion sees the boundary layer
    let cuts = [a, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0, b];
    cuts.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = simpson(lo, hi, fa, fm, fb);
            adaptive(&f, lo, hi, fa, fm, fb, whole, tol / cuts.len() as f64, 48)
        })
        .sum()
}
