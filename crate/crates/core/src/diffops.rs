//! Finite differences, singular values, distortion and ball averages in `R^N`.
//!
//! Maps are passed as closures returning `None` outside their domain.

use alloc::vec::Vec;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::curves::ConvexDomain2;
use crate::linalg::{self, Mat};
use crate::quadrature::{ball_mean_rule, sphere_mean_rule};
use crate::{Error, Result, C64};

/// Distance to the boundary of a domain in `R^N`.
pub trait Domain<const N: usize> {
    fn dist_to_boundary(&self, x: &[f64; N]) -> f64;
}

impl Domain<2> for ConvexDomain2 {
    fn dist_to_boundary(&self, x: &[f64; 2]) -> f64 {
        ConvexDomain2::dist_to_boundary(self, C64::new(x[0], x[1]))
    }
}

/// Open ball of the given radius about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenteredBall {
    pub radius: f64,
}

impl<const N: usize> Domain<N> for CenteredBall {
    fn dist_to_boundary(&self, x: &[f64; N]) -> f64 {
        (self.radius - norm(x)).abs()
    }
}

pub fn norm<const N: usize>(x: &[f64; N]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn offset<const N: usize>(x: &[f64; N], axis: usize, h: f64) -> [f64; N] {
    let mut p = *x;
    p[axis] += h;
    p
}

/// Central-difference derivative matrix `m[i][j] = d f_i / d x_j`.
/// With `richardson` the `O(h^2)` term is eliminated using steps `h` and `h/2`.
pub fn fd_jacobian<const N: usize>(
    f: impl Fn(&[f64; N]) -> Option<[f64; N]>,
    x: &[f64; N],
    step: f64,
    richardson: bool,
) -> Result<Mat<N>> {
    let central = |h: f64| -> Result<Mat<N>> {
        let mut m = [[0.0; N]; N];
        for j in 0..N {
            let fp = f(&offset(x, j, h)).ok_or(Error::OutOfDomain)?;
            let fm = f(&offset(x, j, -h)).ok_or(Error::OutOfDomain)?;
            for i in 0..N {
                m[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        Ok(m)
    };
    let coarse = central(step)?;
    if !richardson {
        return Ok(coarse);
    }
    let fine = central(step / 2.0)?;
    let mut m = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
        }
    }
    Ok(m)
}

/// Derivative of a scalar function by Ridders' extrapolation of central
/// differences over the steps `h, h / 1.4, h / 1.4^2, ...`.
///
/// Returns the estimate with the smallest error estimate, and that estimate.
pub fn ridders_derivative(f: impl Fn(f64) -> Option<f64>, x: f64, h: f64) -> Result<(f64, f64)> {
    const SHRINK: f64 = 1.4;
    const LEVELS: usize = 10;
    let central = |h: f64| -> Result<f64> {
        let fp = f(x + h).ok_or(Error::OutOfDomain)?;
        let fm = f(x - h).ok_or(Error::OutOfDomain)?;
        Ok((fp - fm) / (2.0 * h))
    };
    let mut step = h;
    let mut prev: Vec<f64> = alloc::vec![central(step)?];
    let mut best = (prev[0], f64::INFINITY);
    for _ in 1..LEVELS {
        step /= SHRINK;
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(central(step)?);
        let mut factor = SHRINK * SHRINK;
        for j in 1..=prev.len() {
            let next = (row[j - 1] * factor - prev[j - 1]) / (factor - 1.0);
            let err = (next - row[j - 1]).abs().max((next - prev[j - 1]).abs());
            if err <= best.1 {
                best = (next, err);
            }
            row.push(next);
            factor *= SHRINK * SHRINK;
        }
        let last = prev.len();
        // higher order has drifted well past the best estimate: roundoff dominates
        if (row[last] - prev[last - 1]).abs() >= 2.0 * best.1 {
            break;
        }
        prev = row;
    }
    Ok(best)
}

/// `(2N + 1)`-point Laplacian with `levels - 1` rounds of Richardson extrapolation
/// over the steps `h, h/2, h/4, ...` (`levels >= 1`).
pub fn fd_laplacian<const N: usize>(
    f: impl Fn(&[f64; N]) -> Option<f64>,
    x: &[f64; N],
    h: f64,
    levels: usize,
) -> Result<f64> {
    let center = f(x).ok_or(Error::OutOfDomain)?;
    let stencil = |h: f64| -> Result<f64> {
        let mut acc = 0.0;
        for j in 0..N {
            acc += f(&offset(x, j, h)).ok_or(Error::OutOfDomain)?;
            acc += f(&offset(x, j, -h)).ok_or(Error::OutOfDomain)?;
        }
        Ok((acc - 2.0 * N as f64 * center) / (h * h))
    };
    let levels = levels.max(1);
    let mut table: Vec<f64> = Vec::with_capacity(levels);
    let mut step = h;
    for _ in 0..levels {
        table.push(stencil(step)?);
        step /= 2.0;
    }
    // table[k] holds the level-k estimate at step h / 2^k; collapse column by column
    let mut factor = 4.0;
    for col in 1..levels {
        for k in (col..levels).rev() {
            table[k] = (factor * table[k] - table[k - 1]) / (factor - 1.0);
        }
        factor *= 4.0;
    }
    Ok(table[levels - 1])
}

/// Largest and smallest stretch of a derivative matrix, with its determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivativeNorms {
    pub max_stretch: f64,
    pub min_stretch: f64,
    pub jacobian: f64,
}

/// `(Lambda, lambda)`: extreme singular values from the eigenvalues of `m^T m`.
pub fn singular_extremes<const N: usize>(m: &Mat<N>) -> (f64, f64) {
    let gram = linalg::matmul(&linalg::transpose(m), m);
    let ev = linalg::symmetric_eigenvalues(&gram);
    (ev[N - 1].max(0.0).sqrt(), ev[0].max(0.0).sqrt())
}

pub fn derivative_norms<const N: usize>(m: &Mat<N>) -> DerivativeNorms {
    let (max_stretch, min_stretch) = singular_extremes(m);
    DerivativeNorms {
        max_stretch,
        min_stretch,
        jacobian: linalg::det(m),
    }
}

/// `(K_O, K_I) = (Lambda^N / |J|, |J| / lambda^N)`.
pub fn distortion<const N: usize>(m: &Mat<N>) -> Result<(f64, f64)> {
    let norms = derivative_norms(m);
    let j = norms.jacobian.abs();
    if !(j > 0.0) || norms.min_stretch == 0.0 {
        return Err(Error::SingularMatrix);
    }
    let n = N as i32;
    Ok((norms.max_stretch.powi(n) / j, j / norms.min_stretch.powi(n)))
}

/// The radial stretch `f_a(X) = |X|^{a-1} X`.
pub fn radial_map<const N: usize>(a: f64, x: &[f64; N]) -> Result<[f64; N]> {
    let r = norm(x);
    if r == 0.0 {
        if a < 1.0 {
            return Err(Error::OriginSingularity(a));
        }
        return Ok([0.0; N]);
    }
    let s = r.powf(a - 1.0);
    let mut out = *x;
    for v in &mut out {
        *v *= s;
    }
    Ok(out)
}

/// Both sides of the pair inequality `|x' - y'| >= lambda^{(a-1)/2} |x|^{a-1} |x - y|`
/// for `f_a`, after ordering so that `|y| = lambda |x|` with `lambda <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPair {
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `R(x, y) = (1 - lambda^{a-1}) (1 - lambda^{a+1}) |x|^{2a}`.
    pub remainder: f64,
    /// `|x' - y'|^2 - (|x|^{a-1} |y|^{a-1} |x - y|^2 + R(x, y))`.
    pub identity_residual: f64,
}

impl RadialPair {
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn radial_pair<const N: usize>(a: f64, x: &[f64; N], y: &[f64; N]) -> Result<RadialPair> {
    let (x, y) = if norm(y) > norm(x) { (y, x) } else { (x, y) };
    let rx = norm(x);
    let ry = norm(y);
    let xp = radial_map(a, x)?;
    let yp = radial_map(a, y)?;
    let mut diff = [0.0; N];
    let mut image_diff = [0.0; N];
    for k in 0..N {
        diff[k] = x[k] - y[k];
        image_diff[k] = xp[k] - yp[k];
    }
    let dist = norm(&diff);
    let lhs = norm(&image_diff);
    let lambda = if rx > 0.0 { ry / rx } else { 1.0 };
    let rhs = lambda.powf(0.5 * (a - 1.0)) * rx.powf(a - 1.0) * dist;
    let remainder = (1.0 - lambda.powf(a - 1.0)) * (1.0 - lambda.powf(a + 1.0)) * rx.powf(2.0 * a);
    let main = rx.powf(a - 1.0) * ry.powf(a - 1.0) * dist * dist;
    Ok(RadialPair {
        lambda,
        lhs,
        rhs,
        remainder,
        identity_residual: lhs * lhs - (main + remainder),
    })
}

/// Which mean-value inequality to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// `phi(x) <= mean of phi over spheres`.
    Sub,
    /// `phi(x) >= q * mean of phi over spheres`.
    Super,
}

/// Worst signed margin of the sphere mean-value inequality over the given radii.
///
/// Returns `(margin, radius)` where the margin is `mean - phi(x)` for
/// [`Sense::Sub`] and `phi(x) - q mean` for [`Sense::Super`].
pub fn meanvalue_test<const N: usize>(
    phi: impl Fn(&[f64; N]) -> Option<f64>,
    x: &[f64; N],
    radii: &[f64],
    sense: Sense,
    q: f64,
    resolution: usize,
) -> Result<(f64, f64)> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidArgument(alloc::format!("q = {q} is outside (0, 1]")));
    }
    let center = phi(x).ok_or(Error::OutOfDomain)?;
    let rule = sphere_mean_rule::<N>(resolution);
    let mut worst = (f64::INFINITY, 0.0);
    for &r in radii {
        let mut mean = 0.0;
        for (d, w) in &rule {
            let mut p = *x;
            for k in 0..N {
                p[k] += r * d[k];
            }
            mean += w * phi(&p).ok_or(Error::OutOfDomain)?;
        }
        let margin = match sense {
            Sense::Sub => mean - center,
            Sense::Super => center - q * mean,
        };
        if margin < worst.0 {
            worst = (margin, r);
        }
    }
    Ok(worst)
}

fn default_rule<const N: usize>(radius: f64) -> Vec<([f64; N], f64)> {
    match N {
        2 => ball_mean_rule::<N>(radius, 32, 128),
        _ => ball_mean_rule::<N>(radius, 16, 32),
    }
}

/// `a_f(x) = exp((1 / N) mean of log J over B(x, d(x)))`.
pub fn astala_gehring_a<const N: usize>(
    jacobian: impl Fn(&[f64; N]) -> Option<f64>,
    x: &[f64; N],
    domain: &impl Domain<N>,
) -> Result<f64> {
    let d = domain.dist_to_boundary(x);
    let mut mean_log = 0.0;
    for (p, w) in default_rule::<N>(d) {
        let mut q = *x;
        for k in 0..N {
            q[k] += p[k];
        }
        let j = jacobian(&q).ok_or(Error::OutOfDomain)?;
        if !(j > 0.0) {
            return Err(Error::NonPositiveJacobian(j));
        }
        mean_log += w * j.ln();
    }
    Ok((mean_log / N as f64).exp())
}

/// Mean of the (signed) Jacobian over `B(x, d(x) / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanJacobian {
    /// `sign(E) |E|^{1/N}` with `E` the mean of `J`.
    pub value: f64,
    pub mean: f64,
    /// Quadrature nodes where `J < 0`.
    pub negative_cells: usize,
}

pub fn mean_jacobian<const N: usize>(
    jacobian: impl Fn(&[f64; N]) -> Option<f64>,
    x: &[f64; N],
    domain: &impl Domain<N>,
) -> Result<MeanJacobian> {
    let d = domain.dist_to_boundary(x);
    let mut mean = 0.0;
    let mut negative_cells = 0;
    for (p, w) in default_rule::<N>(0.5 * d) {
        let mut q = *x;
        for k in 0..N {
            q[k] += p[k];
        }
        let j = jacobian(&q).ok_or(Error::OutOfDomain)?;
        if j < 0.0 {
            negative_cells += 1;
        }
        mean += w * j;
    }
    Ok(MeanJacobian {
        value: mean.signum() * mean.abs().powf(1.0 / N as f64),
        mean,
        negative_cells,
    })
}
