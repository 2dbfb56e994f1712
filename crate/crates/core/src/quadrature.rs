//! Quadrature on the circle with respect to normalized arc length `dm = dθ/2π`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Default node count for circle quadrature.
pub const DEFAULT_NODES: usize = 4096;

const PANEL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if order == 0 { 1.0 } else { p1 };
            let pn1 = if order == 0 { 0.0 } else { p0 };
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Mean of `f` over `n` uniform nodes `θ_k = −π + 2πk/n`.
///
/// For smooth periodic integrands this is spectrally accurate.
pub fn trapezoid_periodic<F: Fn(f64) -> Complex64>(f: F, n: usize) -> Complex64 {
    let h = 2.0 * PI / n as f64;
    let sum: Complex64 = (0..n).map(|k| f(-PI + h * k as f64)).sum();
    sum / n as f64
}

/// Composite Gauss–Legendre rule for `(1/2π)∫ f dθ` over consecutive
/// sub-intervals of `breaks`, with about `nodes` evaluations spread in
/// proportion to sub-interval length.
#[derive(Debug, Clone)]
pub struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(breaks: &[f64], nodes: usize) -> Self {
        let (x, w) = gauss_legendre(PANEL_ORDER);
        let total: f64 = breaks.windows(2).map(|p| (p[1] - p[0]).max(0.0)).sum();
        let mut out_n = Vec::new();
        let mut out_w = Vec::new();
        for p in breaks.windows(2) {
            let (a, b) = (p[0], p[1]);
            if b <= a {
                continue;
            }
            let share = if total > 0.0 { (b - a) / total } else { 0.0 };
            let panels = ((share * nodes as f64 / PANEL_ORDER as f64).ceil() as usize).max(1);
            let h = (b - a) / panels as f64;
            for k in 0..panels {
                let lo = a + h * k as f64;
                for (xi, wi) in x.iter().zip(&w) {
                    out_n.push(lo + 0.5 * h * (xi + 1.0));
                    out_w.push(0.5 * h * wi / (2.0 * PI));
                }
            }
        }
        PanelRule {
            nodes: out_n,
            weights: out_w,
        }
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| f(t) * w)
            .sum()
    }

    pub fn integrate_real<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| f(t) * w).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
