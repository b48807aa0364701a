//! Gauss-Legendre quadrature, used as an independent check on closed-form
//! expectations.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Tensor-product rule for `f(x, y)` over `[x0, x1] x [y0, y1]`.
pub fn integrate_2d<F>(f: F, x: (f64, f64), y: (f64, f64), n: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let (nodes, weights) = gauss_legendre(n);
    let (hx, cx) = ((x.1 - x.0) / 2.0, (x.1 + x.0) / 2.0);
    let (hy, cy) = ((y.1 - y.0) / 2.0, (y.1 + y.0) / 2.0);
    let mut total = 0.0;
    for (ui, wi) in nodes.iter().zip(&weights) {
        let xv = cx + hx * ui;
        let mut row = 0.0;
        for (vj, wj) in nodes.iter().zip(&weights) {
            row += wj * f(xv, cy + hy * vj);
        }
        total += wi * row;
    }
    total * hx * hy
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64] {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        // degree 9 is integrated exactly by 5 nodes
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn box_area() {
        let a = integrate_2d(|x, y| x * y, (0.0, 2.0), (0.0, 3.0), 4);
        assert!((a - 9.0).abs() < 1e-12);
    }
}
