//! Panel-based Gauss-Legendre quadrature.
//!
//! Everything downstream (form evaluation, semiclassical integrals, resolvent
//! t-integrals) integrates smooth-on-panels functions, so the workhorse is a
//! composite rule: split the domain into panels adapted to the integrand's
//! scales (usually logarithmically), apply an n-point Gauss-Legendre rule on
//! each, and estimate error by node doubling at the call site.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on P_n with the Chebyshev initial guess; converges to
/// machine precision in a handful of steps for any practical n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut xs = alloc::vec![0.0; n];
    let mut ws = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // i-th largest root, descending from ~1; Chebyshev initial guess.
        let mut z = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
            let mut p0 = 1.0;
            let mut p1 = z;
            for k in 1..n {
                let p2 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p0) / (k + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // symmetric fill, ascending order
        xs[i] = -z;
        xs[n - 1 - i] = z;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// Integrate f over [a, b] with one n-point rule.
pub fn integrate_once<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(&ws) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Integrate f over consecutive panels given by `breaks` (ascending), n-point
/// rule per panel.
pub fn integrate_panels<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let mut acc = 0.0;
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut panel = 0.0;
        for (x, w) in xs.iter().zip(&ws) {
            panel += w * f(c + h * x);
        }
        acc += panel * h;
    }
    acc
}

/// Geometrically spaced panel breaks over [a, b], at least `per_decade`
/// panels per factor of ten and at least `min_panels` overall. Requires
/// 0 < a < b.
pub fn log_breaks(a: f64, b: f64, per_decade: usize, min_panels: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a);
    let decades = (b / a).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(min_panels);
    let la = a.ln();
    let lb = b.ln();
    (0..=n)
        .map(|i| (la + (lb - la) * i as f64 / n as f64).exp())
        .collect()
}

/// Uniform panel breaks over [a, b].
pub fn lin_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    assert!(panels >= 1);
    (0..=panels)
        .map(|i| a + (b - a) * i as f64 / panels as f64)
        .collect()
}

/// Refine a break list by halving every panel (for doubling-based error
/// estimates: same family of panels, twice as many).
pub fn halve_panels(breaks: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * breaks.len());
    for pair in breaks.windows(2) {
        out.push(pair[0]);
        out.push(0.5 * (pair[0] + pair[1]));
    }
    out.push(*breaks.last().unwrap());
    out
}
