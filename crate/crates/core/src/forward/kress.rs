//! Spectral machinery on the periodic parameter grid: product quadrature
//! for logarithmic kernels, trigonometric differentiation and interpolation.
//!
//! Grids have an even number N of nodes theta_j = 2 pi j / N. The product
//! rule integrates ln(4 sin^2((t - tau)/2)) f(tau) exactly for trigonometric
//! polynomials f up to degree N/2.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Quadrature weight R_j(t) for the logarithmic factor, arbitrary target t.
pub fn log_weight(n_nodes: usize, t: f64, theta_j: f64) -> f64 {
    debug_assert!(n_nodes % 2 == 0);
    let half = n_nodes / 2;
    let u = t - theta_j;
    let mut acc = 0.0;
    for m in 1..half {
        acc += (m as f64 * u).cos() / m as f64;
    }
    -(4.0 * PI / n_nodes as f64) * acc
        - (4.0 * PI / (n_nodes * n_nodes) as f64) * (half as f64 * u).cos()
}

/// d/dt of [`log_weight`].
pub fn log_weight_derivative(n_nodes: usize, t: f64, theta_j: f64) -> f64 {
    debug_assert!(n_nodes % 2 == 0);
    let half = n_nodes / 2;
    let u = t - theta_j;
    let mut acc = 0.0;
    for m in 1..half {
        acc += (m as f64 * u).sin();
    }
    (4.0 * PI / n_nodes as f64) * acc + (2.0 * PI / n_nodes as f64) * (half as f64 * u).sin()
}

/// Node-to-node weights R_{|i-j|}; returns a vector indexed by
/// (i - j) mod N.
pub fn log_weights_table(n_nodes: usize) -> Vec<f64> {
    (0..n_nodes)
        .map(|d| log_weight(n_nodes, 2.0 * PI * d as f64 / n_nodes as f64, 0.0))
        .collect()
}

/// Trigonometric differentiation matrix entry D[i][j] (even N).
pub fn diff_entry(n_nodes: usize, i: usize, j: usize) -> f64 {
    if i == j {
        return 0.0;
    }
    let d = i as i64 - j as i64;
    let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let angle = PI * d as f64 / n_nodes as f64;
    0.5 * sign / angle.tan()
}

/// Cardinal function of trigonometric interpolation at the even-N grid.
pub fn cardinal(n_nodes: usize, t: f64, theta_j: f64) -> f64 {
    let half = (n_nodes / 2) as f64;
    let mut u = (t - theta_j) % (2.0 * PI);
    if u > PI {
        u -= 2.0 * PI;
    } else if u < -PI {
        u += 2.0 * PI;
    }
    if u.abs() < 1e-10 {
        // sin(half u) cot(u/2)/N -> 1; the O((N u)^2) correction is far
        // below f64 resolution at this threshold
        return 1.0;
    }
    (half * u).sin() / (0.5 * u).tan() / n_nodes as f64
}

/// Interpolate periodic node samples to an arbitrary parameter.
pub fn interpolate(values: &[Complex64], t: f64) -> Complex64 {
    let n = values.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        acc += v * cardinal(n, t, 2.0 * PI * j as f64 / n as f64);
    }
    acc
}
