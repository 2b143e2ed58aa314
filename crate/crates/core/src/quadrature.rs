// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Gauss-Legendre rules and a product rule on the unit sphere.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule for `int f dp` with `dp = sin(theta) dtheta dphi / (4 pi)`:
/// Gauss-Legendre in `cos(theta)` times the trapezoid rule in `phi`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    points: Vec<(f64, f64, f64)>,
}

impl SphereRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (u, w) = gauss_legendre(n_theta);
        let mut points = Vec::with_capacity(n_theta * n_phi);
        for (ui, wi) in u.iter().zip(&w) {
            let theta = ui.clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                points.push((theta, phi, 0.5 * wi / n_phi as f64));
            }
        }
        Self { points }
    }

    /// `(theta, phi, weight)` triples; weights sum to one.
    pub fn points(&self) -> &[(f64, f64, f64)] {
        &self.points
    }

    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        self.points.iter().map(|&(t, p, w)| w * f(t, p)).sum()
    }
}

impl Default for SphereRule {
    fn default() -> Self {
        Self::new(64, 64)
    }
}
