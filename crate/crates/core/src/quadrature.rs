//! Gauss–Legendre rules and the product rules built from them.

use alloc::vec::Vec;
use core::f64::consts::PI;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::P3;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, refined by Newton on P_n.
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

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| (mid + half * xi, half * wi))
        .collect()
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos(polar)` times a
/// uniform azimuthal grid. Weights sum to the surface measure `4 pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub points: Vec<P3>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(polar: usize, azimuth: usize) -> Self {
        let (x, w) = gauss_legendre(polar);
        let mut points = Vec::with_capacity(polar * azimuth);
        let mut weights = Vec::with_capacity(polar * azimuth);
        let dphi = 2.0 * PI / azimuth as f64;
        for (&ct, &wt) in x.iter().zip(&w) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..azimuth {
                let (sp, cp) = (dphi * j as f64).sin_cos();
                points.push([st * cp, st * sp, ct]);
                weights.push(wt * dphi);
            }
        }
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Directions and weights for averaging over the unit sphere of `R^N`
/// (`N = 2`: circle, `N = 3`: sphere). Weights sum to one.
pub fn sphere_mean_rule<const N: usize>(resolution: usize) -> Vec<([f64; N], f64)> {
    let mut out = Vec::new();
    match N {
        2 => {
            let n = resolution.max(8);
            for j in 0..n {
                let (s, c) = (2.0 * PI * j as f64 / n as f64).sin_cos();
                let mut d = [0.0; N];
                d[0] = c;
                d[1] = s;
                out.push((d, 1.0 / n as f64));
            }
        }
        3 => {
            let rule = SphereRule::new(resolution.max(4), 2 * resolution.max(4));
            let total = rule.total_weight();
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                let mut d = [0.0; N];
                d.copy_from_slice(p);
                out.push((d, w / total));
            }
        }
        _ => panic!("sphere rules are provided for dimensions 2 and 3"),
    }
    out
}

/// Quadrature for averages over a ball of radius `radius` centred at the origin in `R^N`:
/// radial Gauss–Legendre against `r^{N-1}` times the angular rule. Weights sum to one.
pub fn ball_mean_rule<const N: usize>(radius: f64, radial: usize, angular: usize) -> Vec<([f64; N], f64)> {
    let radial_rule = gauss_legendre_on(radial, 0.0, radius);
    let angular_rule: Vec<([f64; N], f64)> = match N {
        2 => sphere_mean_rule::<N>(angular),
        3 => {
            // `angular` is the polar count; azimuth uses twice as many points
            let rule = SphereRule::new(angular, 2 * angular);
            let total = rule.total_weight();
            rule.points
                .iter()
                .zip(&rule.weights)
                .map(|(p, w)| {
                    let mut d = [0.0; N];
                    d.copy_from_slice(p);
                    (d, w / total)
                })
                .collect()
        }
        _ => panic!("ball rules are provided for dimensions 2 and 3"),
    };
    let radial_norm: f64 = radial_rule.iter().map(|(r, w)| w * r.powi(N as i32 - 1)).sum();
    let mut out = Vec::with_capacity(radial_rule.len() * angular_rule.len());
    for &(r, wr) in &radial_rule {
        let wr = wr * r.powi(N as i32 - 1) / radial_norm;
        for (d, wa) in &angular_rule {
            let mut p = [0.0; N];
            for k in 0..N {
                p[k] = r * d[k];
            }
            out.push((p, wr * wa));
        }
    }
    out
}
