//! Harmonic maps of the unit disk given by their boundary Fourier series.
//!
//! `h(r e^{it}) = sum_k c_k r^{|k|} e^{ikt}` splits as `h = f + conj(g)` with
//! `f(z) = sum_{k>=0} c_k z^k` and `g(z) = sum_{k>=1} conj(c_{-k}) z^k`.
//! Every derivative below is taken from the differentiated power series.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::boundary::FourierCoeffs;
use crate::diffops;
use crate::{Error, Result, C64};

/// Tolerance on `|z| <= 1` for evaluation on the closed disk.
const CLOSED_DISK_SLACK: f64 = 1e-12;

/// Value and first two derivatives of a power series, from Horner's scheme.
fn horner_jet(coeffs: &[C64], z: C64) -> [C64; 3] {
    let zero = C64::new(0.0, 0.0);
    let Some((&top, rest)) = coeffs.split_last() else {
        return [zero; 3];
    };
    let mut p0 = top;
    let mut p1 = zero;
    let mut p2 = zero;
    for &a in rest.iter().rev() {
        p2 = p2 * z + p1;
        p1 = p1 * z + p0;
        p0 = p0 * z + a;
    }
    [p0, p1, p2 * 2.0]
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Values and derivatives of both analytic parts at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// `[f, f', f'']`.
    pub f: [C64; 3],
    /// `[g, g', g'']`.
    pub g: [C64; 3],
}

impl Jet {
    pub fn value(&self) -> C64 {
        self.f[0] + self.g[0].conj()
    }

    /// `J = |f'|^2 - |g'|^2`.
    pub fn jacobian(&self) -> f64 {
        self.f[1].norm_sqr() - self.g[1].norm_sqr()
    }

    /// `J_z = f'' conj(f') - g'' conj(g')`.
    pub fn jacobian_z(&self) -> C64 {
        self.f[2] * self.f[1].conj() - self.g[2] * self.g[1].conj()
    }

    /// `J_{z zbar} = |f''|^2 - |g''|^2`.
    pub fn jacobian_zzbar(&self) -> f64 {
        self.f[2].norm_sqr() - self.g[2].norm_sqr()
    }

    /// `|f' g'' - g' f''|^2`.
    pub fn cross_term(&self) -> f64 {
        (self.f[1] * self.g[2] - self.g[1] * self.f[2]).norm_sqr()
    }

    /// `(Lambda, lambda) = (|f'| + |g'|, ||f'| - |g'||)`.
    pub fn stretches(&self) -> (f64, f64) {
        let a = self.f[1].norm();
        let b = self.g[1].norm();
        (a + b, (a - b).abs())
    }

    /// `D(h) = |h_z|^2 + |h_zbar|^2`.
    pub fn energy(&self) -> f64 {
        self.f[1].norm_sqr() + self.g[1].norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiskHarmonicMap {
    /// Coefficients of `f`, `a_k = c_k`.
    f: Vec<C64>,
    /// Coefficients of `g`, `b_k = conj(c_{-k})`, with `b_0 = 0`.
    g: Vec<C64>,
    tail: f64,
}

impl DiskHarmonicMap {
    /// Poisson extension of the boundary series.
    pub fn extend(coeffs: &FourierCoeffs) -> Self {
        let n = coeffs.modes();
        let f = (0..=n as i64).map(|k| coeffs.get(k)).collect();
        let g = (0..=n as i64)
            .map(|k| {
                if k == 0 {
                    C64::new(0.0, 0.0)
                } else {
                    coeffs.get(-k).conj()
                }
            })
            .collect();
        Self::trimmed(f, g, coeffs.tail_bound())
    }

    /// `h = f + conj(g)` from power-series coefficients; `g(0)` is folded into `f(0)`.
    pub fn from_analytic(f: &[C64], g: &[C64]) -> Self {
        let mut f = f.to_vec();
        let mut g = g.to_vec();
        if f.is_empty() {
            f.push(C64::new(0.0, 0.0));
        }
        if let Some(g0) = g.first_mut() {
            f[0] += g0.conj();
            *g0 = C64::new(0.0, 0.0);
        }
        Self::trimmed(f, g, 0.0)
    }

    fn trimmed(mut f: Vec<C64>, mut g: Vec<C64>, tail: f64) -> Self {
        while f.len() > 1 && f.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            f.pop();
        }
        while g.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            g.pop();
        }
        Self { f, g, tail }
    }

    /// `a h + b`, the image under the similarity `w -> a w + b`.
    pub fn similar(&self, a: C64, b: C64) -> Self {
        let mut f: Vec<C64> = self.f.iter().map(|c| a * c).collect();
        f[0] += b;
        let g = self.g.iter().map(|c| a.conj() * c).collect();
        Self::trimmed(f, g, self.tail * a.norm())
    }

    /// `c_k` of the boundary series.
    pub fn coefficient(&self, k: i64) -> C64 {
        let zero = C64::new(0.0, 0.0);
        if k >= 0 {
            self.f.get(k as usize).copied().unwrap_or(zero)
        } else {
            self.g.get((-k) as usize).map(|b| b.conj()).unwrap_or(zero)
        }
    }

    /// Largest frequency present.
    pub fn degree(&self) -> usize {
        self.f.len().max(self.g.len()).saturating_sub(1)
    }

    /// Power-series coefficients of `f`.
    pub fn analytic_coefficients(&self) -> &[C64] {
        &self.f
    }

    /// Power-series coefficients of `g`.
    pub fn coanalytic_coefficients(&self) -> &[C64] {
        &self.g
    }

    /// Bound on the sup-norm truncation error on the circle.
    pub fn tail_bound(&self) -> f64 {
        self.tail
    }

    fn check_closed(z: C64) -> Result<()> {
        let r = z.norm();
        if r > 1.0 + CLOSED_DISK_SLACK || !r.is_finite() {
            return Err(Error::OutsideDisk(r));
        }
        Ok(())
    }

    fn check_open(z: C64) -> Result<()> {
        let r = z.norm();
        if !(r < 1.0) {
            return Err(Error::OutsideOpenDisk(r));
        }
        Ok(())
    }

    /// `h(z)` on the closed disk; on the circle this is the boundary trigonometric sum.
    pub fn eval(&self, z: C64) -> Result<C64> {
        Self::check_closed(z)?;
        Ok(horner(&self.f, z) + horner(&self.g, z).conj())
    }

    /// Series jet without a domain check; also used for boundary limits of the truncated series.
    pub fn jet_unchecked(&self, z: C64) -> Jet {
        Jet {
            f: horner_jet(&self.f, z),
            g: horner_jet(&self.g, z),
        }
    }

    pub fn jet(&self, z: C64) -> Result<Jet> {
        Self::check_open(z)?;
        Ok(self.jet_unchecked(z))
    }

    /// `(h_z, h_zbar) = (f'(z), conj(g'(z)))`.
    pub fn wirtinger(&self, z: C64) -> Result<(C64, C64)> {
        let j = self.jet(z)?;
        Ok((j.f[1], j.g[1].conj()))
    }

    /// `(f''(z), g''(z))`.
    pub fn wirtinger2(&self, z: C64) -> Result<(C64, C64)> {
        let j = self.jet(z)?;
        Ok((j.f[2], j.g[2]))
    }

    pub fn jacobian(&self, z: C64) -> Result<f64> {
        Ok(self.jet(z)?.jacobian())
    }

    /// `J_z = f'' conj(f') - g'' conj(g')`.
    pub fn jacobian_z(&self, z: C64) -> Result<C64> {
        Ok(self.jet(z)?.jacobian_z())
    }

    /// `h'_r = f'(z) e^{it} + conj(g'(z) e^{it})` at `z = r e^{it}`.
    pub fn radial_derivative(&self, r: f64, theta: f64) -> Result<C64> {
        let z = C64::from_polar(r, theta);
        Self::check_open(z)?;
        Ok(self.radial_from_jet(&self.jet_unchecked(z), theta))
    }

    fn radial_from_jet(&self, jet: &Jet, theta: f64) -> C64 {
        let e = C64::from_polar(1.0, theta);
        jet.f[1] * e + (jet.g[1] * e).conj()
    }

    /// `h'_t = i z f'(z) - i conj(z g'(z))`, the derivative in the angle.
    pub fn angular_derivative(&self, r: f64, theta: f64) -> Result<C64> {
        let z = C64::from_polar(r, theta);
        Self::check_closed(z)?;
        let jet = self.jet_unchecked(z);
        Ok(C64::i() * z * jet.f[1] - C64::i() * (z * jet.g[1]).conj())
    }

    /// Radial boundary limit `lim_{r -> 1} h'_r(r e^{it})` of the truncated series.
    pub fn abel_radial_limit(&self, theta: f64) -> C64 {
        let jet = self.jet_unchecked(C64::from_polar(1.0, theta));
        self.radial_from_jet(&jet, theta)
    }

    /// `J` just inside the circle, at radius `1 - 1e-6`.
    pub fn jacobian_near_boundary(&self, theta: f64) -> f64 {
        self.jet_unchecked(C64::from_polar(1.0 - 1e-6, theta)).jacobian()
    }

    /// `(|a_1|^2 + |b_1|^2, |a_1|)` with `a_1 = c_1`, `b_1 = c_{-1}`.
    pub fn hall_quantities(&self) -> (f64, f64) {
        let a1 = self.coefficient(1);
        let b1 = self.coefficient(-1);
        (a1.norm_sqr() + b1.norm_sqr(), a1.norm())
    }

    /// `sup |h_zbar / h_z|` over the grid.
    pub fn second_dilatation_sup(&self, grid: &DiskGrid) -> Result<f64> {
        let mut sup: f64 = 0.0;
        for p in grid.points() {
            let jet = self.jet(p.z)?;
            let fz = jet.f[1].norm();
            if !(fz > 1e-14) {
                return Err(Error::VanishingFz);
            }
            sup = sup.max(jet.g[1].norm() / fz);
        }
        Ok(sup)
    }

    /// `D(h)(z) = |h_z|^2 + |h_zbar|^2`.
    pub fn heinz_energy(&self, z: C64) -> Result<f64> {
        Ok(self.jet(z)?.energy())
    }

    fn fd_step(z: C64) -> f64 {
        (0.25 * (1.0 - z.norm())).min(0.1)
    }

    fn fd_zzbar(&self, z: C64, field: impl Fn(&Jet) -> Option<f64>) -> Result<f64> {
        let h = Self::fd_step(z);
        let lap = diffops::fd_laplacian(
            |p: &[f64; 2]| field(&self.jet_unchecked(C64::new(p[0], p[1]))),
            &[z.re, z.im],
            h,
            3,
        )?;
        Ok(0.25 * lap)
    }

    /// Both sides of `-(ln J)_{z zbar} J^2 = |f' g'' - g' f''|^2`.
    ///
    /// The left side uses a finite-difference Laplacian (`(.)_{z zbar} = Delta / 4`),
    /// the right side the exact series derivatives.
    pub fn log_jacobian_curvature(&self, z: C64) -> Result<(f64, f64)> {
        let jet = self.jet(z)?;
        let j = jet.jacobian();
        if !(j > 0.0) {
            return Err(Error::NonPositiveJacobian(j));
        }
        let lnj_zzbar = self.fd_zzbar(z, |jet| {
            let j = jet.jacobian();
            (j > 0.0).then(|| j.ln())
        })?;
        Ok((-lnj_zzbar * j * j, jet.cross_term()))
    }

    /// Both sides of `(1/J)_{z zbar} J^3 = 2 |J_z|^2 - J J_{z zbar}`, left side by finite differences.
    ///
    /// The right side equals `|J_z|^2 + |f' g'' - g' f''|^2 >= 0`, so `1/J` is subharmonic.
    pub fn inverse_jacobian_curvature(&self, z: C64) -> Result<(f64, f64)> {
        let jet = self.jet(z)?;
        let j = jet.jacobian();
        if !(j > 0.0) {
            return Err(Error::NonPositiveJacobian(j));
        }
        let inv_zzbar = self.fd_zzbar(z, |jet| {
            let j = jet.jacobian();
            (j > 0.0).then(|| 1.0 / j)
        })?;
        let rhs = 2.0 * jet.jacobian_z().norm_sqr() - j * jet.jacobian_zzbar();
        Ok((inv_zzbar * j * j * j, rhs))
    }

    /// Circle mean `(1/n) sum_j h(rho e^{2 pi i j/n})`.
    pub fn circle_mean(&self, rho: f64, n: usize) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            acc += self.eval(C64::from_polar(rho, 2.0 * PI * j as f64 / n as f64))?;
        }
        Ok(acc / n as f64)
    }

    /// Pairs of grid points whose images lie within `delta` of each other although
    /// the points are more than `source_gap` apart. Zero for a univalent map on a fine enough grid.
    pub fn injectivity_violations(&self, grid: &DiskGrid, delta: f64, source_gap: f64) -> usize {
        let points: Vec<(C64, C64)> = grid.points().map(|p| (p.z, self.jet_unchecked(p.z).value())).collect();
        let cell = |w: C64| ((w.re / delta).floor() as i64, (w.im / delta).floor() as i64);
        let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, &(_, w)) in points.iter().enumerate() {
            buckets.entry(cell(w)).or_default().push(i);
        }
        let mut count = 0;
        for (i, &(z, w)) in points.iter().enumerate() {
            let (cx, cy) = cell(w);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(bucket) = buckets.get(&(cx + dx, cy + dy)) else {
                        continue;
                    };
                    count += bucket
                        .iter()
                        .filter(|&&j| {
                            j > i && (points[j].1 - w).norm() < delta && (points[j].0 - z).norm() > source_gap
                        })
                        .count();
                }
            }
        }
        count
    }
}

/// A polar grid of the disk: the centre plus `radial` rings of `angular` points
/// at radii `max_radius (i + 1) / radial`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiskGrid {
    pub radial: usize,
    pub angular: usize,
    pub max_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub r: f64,
    pub theta: f64,
    pub z: C64,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self {
            radial: 64,
            angular: 256,
            max_radius: 0.99,
        }
    }
}

impl DiskGrid {
    pub fn new(radial: usize, angular: usize, max_radius: f64) -> Result<Self> {
        if radial == 0 || angular == 0 || !(max_radius > 0.0 && max_radius < 1.0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "grid {radial} x {angular} with max radius {max_radius}"
            )));
        }
        Ok(Self {
            radial,
            angular,
            max_radius,
        })
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.max_radius * (i + 1) as f64 / self.radial as f64
    }

    pub fn ring(&self, r: f64) -> impl Iterator<Item = GridPoint> + '_ {
        let n = self.angular;
        (0..n).map(move |j| {
            let theta = 2.0 * PI * j as f64 / n as f64;
            GridPoint {
                r,
                theta,
                z: C64::from_polar(r, theta),
            }
        })
    }

    /// Centre first, then the rings from the inside out.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let centre = GridPoint {
            r: 0.0,
            theta: 0.0,
            z: C64::new(0.0, 0.0),
        };
        core::iter::once(centre).chain((0..self.radial).flat_map(move |i| self.ring(self.radius(i))))
    }

    /// Points strictly inside the outermost ring.
    pub fn interior_points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let inner = self.radial.saturating_sub(1);
        let centre = GridPoint {
            r: 0.0,
            theta: 0.0,
            z: C64::new(0.0, 0.0),
        };
        core::iter::once(centre).chain((0..inner).flat_map(move |i| self.ring(self.radius(i))))
    }

    pub fn outer_ring(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.ring(self.max_radius)
    }

    pub fn len(&self) -> usize {
        1 + self.radial * self.angular
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A polynomial map of the whole plane, `(u(x, y), v(x, y))`, for maps that are not disk series.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPolyMap {
    /// `(i, j, coefficient)` of `x^i y^j`.
    pub u: Vec<(u32, u32, f64)>,
    pub v: Vec<(u32, u32, f64)>,
}

fn eval_terms(terms: &[(u32, u32, f64)], x: f64, y: f64) -> f64 {
    terms
        .iter()
        .map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32))
        .sum()
}

fn partial_x(terms: &[(u32, u32, f64)]) -> Vec<(u32, u32, f64)> {
    terms
        .iter()
        .filter(|t| t.0 > 0)
        .map(|&(i, j, c)| (i - 1, j, c * i as f64))
        .collect()
}

fn partial_y(terms: &[(u32, u32, f64)]) -> Vec<(u32, u32, f64)> {
    terms
        .iter()
        .filter(|t| t.1 > 0)
        .map(|&(i, j, c)| (i, j - 1, c * j as f64))
        .collect()
}

impl PlanarPolyMap {
    /// `f_c(z) = x + i (x^2 - y^2 + c)`.
    pub fn parabola(c: f64) -> Self {
        Self {
            u: alloc::vec![(1, 0, 1.0)],
            v: alloc::vec![(2, 0, 1.0), (0, 2, -1.0), (0, 0, c)],
        }
    }

    /// `4z + conj(z)^2 / 2`.
    pub fn four_z_plus_half_zbar_squared() -> Self {
        Self {
            u: alloc::vec![(1, 0, 4.0), (2, 0, 0.5), (0, 2, -0.5)],
            v: alloc::vec![(0, 1, 4.0), (1, 1, -1.0)],
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        C64::new(eval_terms(&self.u, z.re, z.im), eval_terms(&self.v, z.re, z.im))
    }

    /// Exact derivative matrix `[[u_x, u_y], [v_x, v_y]]`.
    pub fn derivative(&self, z: C64) -> [[f64; 2]; 2] {
        let (x, y) = (z.re, z.im);
        [
            [
                eval_terms(&partial_x(&self.u), x, y),
                eval_terms(&partial_y(&self.u), x, y),
            ],
            [
                eval_terms(&partial_x(&self.v), x, y),
                eval_terms(&partial_y(&self.v), x, y),
            ],
        ]
    }

    pub fn jacobian(&self, z: C64) -> f64 {
        crate::linalg::det(&self.derivative(z))
    }

    /// `Delta u` and `Delta v` at `z`.
    pub fn laplacian(&self, z: C64) -> (f64, f64) {
        let (x, y) = (z.re, z.im);
        let lap = |t: &[(u32, u32, f64)]| {
            eval_terms(&partial_x(&partial_x(t)), x, y) + eval_terms(&partial_y(&partial_y(t)), x, y)
        };
        (lap(&self.u), lap(&self.v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn identity() -> DiskHarmonicMap {
        DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(1, c(1.0, 0.0))]))
    }

    /// `f = 4z`, `g = z^2 / 2`.
    fn example_16() -> DiskHarmonicMap {
        DiskHarmonicMap::from_analytic(&[c(0.0, 0.0), c(4.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)])
    }

    #[test]
    fn injectivity_spot_check_flags_folding() {
        let grid = DiskGrid::new(16, 64, 0.95).unwrap();
        assert_eq!(identity().injectivity_violations(&grid, 1e-3, 0.05), 0);
        assert_eq!(example_16().injectivity_violations(&grid, 1e-3, 0.05), 0);
        // z^2 identifies z with -z; the angular grid is even so every ring folds onto itself
        let square = DiskHarmonicMap::from_analytic(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], &[]);
        assert!(square.injectivity_violations(&grid, 1e-3, 0.05) >= 16 * 32);
    }

    fn random_map(rng: &mut ChaCha8Rng, n: i64) -> DiskHarmonicMap {
        let mut pairs: Vec<(i64, C64)> = (-n..=n)
            .map(|k| {
                let decay = 0.5f64.powi(k.abs() as i32);
                (k, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay)
            })
            .collect();
        pairs.push((1, c(2.0, 0.0)));
        DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&pairs))
    }

    fn random_disk_point(rng: &mut ChaCha8Rng, rmax: f64) -> C64 {
        C64::from_polar(rmax * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
    }

    #[test]
    fn extension_examples() {
        let h = identity();
        for z in [c(0.5, 0.0), c(-0.3, 0.7), c(0.0, 1.0)] {
            assert!((h.eval(z).unwrap() - z).norm() < 1e-15);
        }
        let (a, b) = (c(1.2, -0.3), c(0.2, 0.4));
        let lin = DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(1, a), (-1, b)]));
        let z = c(0.3, -0.6);
        assert!((lin.eval(z).unwrap() - (a * z + b * z.conj())).norm() < 1e-15);
        let alpha = 1.1;
        let rot = DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(1, C64::from_polar(1.0, alpha))]));
        assert!((rot.eval(z).unwrap() - C64::from_polar(1.0, alpha) * z).norm() < 1e-15);
        assert_eq!(h.eval(c(1.1, 0.0)), Err(Error::OutsideDisk(1.1)));
        assert!(matches!(h.jacobian(c(1.0, 0.0)), Err(Error::OutsideOpenDisk(_))));
    }

    #[test]
    fn series_matches_poisson_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_map(&mut rng, 8);
        let m = 256;
        let boundary: Vec<C64> = (0..m)
            .map(|j| h.eval(C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).unwrap())
            .collect();
        for _ in 0..10 {
            let theta = rng.gen_range(0.0..2.0 * PI);
            let r = 0.9;
            let mut acc = C64::new(0.0, 0.0);
            for (j, b) in boundary.iter().enumerate() {
                let t = 2.0 * PI * j as f64 / m as f64;
                let kernel = (1.0 - r * r) / (1.0 - 2.0 * r * (theta - t).cos() + r * r);
                acc += b * kernel;
            }
            acc /= m as f64;
            assert!((acc - h.eval(C64::from_polar(r, theta)).unwrap()).norm() < 1e-10);
        }
        assert_eq!(h.eval(c(0.0, 0.0)).unwrap(), h.coefficient(0));
    }

    #[test]
    fn circle_means_equal_the_centre_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_map(&mut rng, 12);
        for rho in [0.1, 0.5, 0.95] {
            assert!((h.circle_mean(rho, 64).unwrap() - h.coefficient(0)).norm() < 1e-10);
        }
    }

    #[test]
    fn wirtinger_examples() {
        let (hz, hzbar) = identity().wirtinger(c(0.2, 0.3)).unwrap();
        assert_eq!((hz, hzbar), (c(1.0, 0.0), c(0.0, 0.0)));
        let z = c(0.3, -0.4);
        let (hz, hzbar) = example_16().wirtinger(z).unwrap();
        assert!((hz - 4.0).norm() < 1e-15 && (hzbar - z.conj()).norm() < 1e-15);
        let (f2, g2) = example_16().wirtinger2(z).unwrap();
        assert!(f2.norm() < 1e-15 && (g2 - 1.0).norm() < 1e-15);
    }

    #[test]
    fn wirtinger_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_map(&mut rng, 10);
        for _ in 0..100 {
            let z = random_disk_point(&mut rng, 0.9);
            let m = diffops::fd_jacobian(
                |p: &[f64; 2]| h.eval(c(p[0], p[1])).ok().map(|w| [w.re, w.im]),
                &[z.re, z.im],
                1e-5,
                true,
            )
            .unwrap();
            // h_z = (h_x - i h_y) / 2, h_zbar = (h_x + i h_y) / 2
            let hx = c(m[0][0], m[1][0]);
            let hy = c(m[0][1], m[1][1]);
            let (hz, hzbar) = h.wirtinger(z).unwrap();
            assert!((hz - (hx - C64::i() * hy) * 0.5).norm() < 1e-7);
            assert!((hzbar - (hx + C64::i() * hy) * 0.5).norm() < 1e-7);
            let jz = h.jacobian_z(z).unwrap();
            let step = 1e-5;
            let jx = (h.jacobian(z + step).unwrap() - h.jacobian(z - step).unwrap()) / (2.0 * step);
            let jy =
                (h.jacobian(z + C64::i() * step).unwrap() - h.jacobian(z - C64::i() * step).unwrap()) / (2.0 * step);
            assert!((jz - c(jx, -jy) * 0.5).norm() < 1e-6 * (1.0 + jz.norm()));
            let (big, small) = h.jet(z).unwrap().stretches();
            assert!((big * small * h.jacobian(z).unwrap().signum() - h.jacobian(z).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(identity().jacobian(c(0.4, 0.1)).unwrap(), 1.0);
        let h = example_16();
        for z in [c(0.0, 0.0), c(0.5, 0.5), c(-0.9, 0.1)] {
            assert!((h.jacobian(z).unwrap() - (16.0 - z.norm_sqr())).abs() < 1e-13);
            assert!((h.jacobian_z(z).unwrap() + z.conj()).norm() < 1e-14);
        }
        assert_eq!(h.jacobian(c(0.0, 0.0)).unwrap(), 16.0);
        let p = PlanarPolyMap::parabola(-1.0);
        for z in [c(0.3, 2.0), c(-5.0, -0.25), c(1.0, 0.0)] {
            assert!((p.jacobian(z) + 2.0 * z.im).abs() < 1e-13);
        }
        assert_eq!(p.laplacian(c(0.3, 0.2)), (0.0, 0.0));
        let q = PlanarPolyMap::four_z_plus_half_zbar_squared();
        let z = c(0.6, -0.3);
        assert!((q.eval(z) - (4.0 * z + z.conj() * z.conj() * 0.5)).norm() < 1e-14);
        assert!((q.jacobian(z) - (16.0 - z.norm_sqr())).abs() < 1e-13);
    }

    #[test]
    fn radial_derivative_examples() {
        let t = 0.8;
        assert!((identity().radial_derivative(0.5, t).unwrap() - C64::from_polar(1.0, t)).norm() < 1e-15);
        let sq = DiskHarmonicMap::from_analytic(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], &[]);
        let r = 0.7;
        assert!((sq.radial_derivative(r, t).unwrap() - C64::from_polar(2.0 * r, 2.0 * t)).norm() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_map(&mut rng, 6);
        let step = 1e-5;
        let fd = (h.eval(C64::from_polar(r + step, t)).unwrap() - h.eval(C64::from_polar(r - step, t)).unwrap())
            / (2.0 * step);
        assert!((fd - h.radial_derivative(r, t).unwrap()).norm() < 1e-7);
        assert!((identity().abel_radial_limit(t) - C64::from_polar(1.0, t)).norm() < 1e-15);
        assert!((identity().angular_derivative(1.0, t).unwrap() - C64::i() * C64::from_polar(1.0, t)).norm() < 1e-15);
    }

    #[test]
    fn hall_and_dilatation_examples() {
        assert_eq!(identity().hall_quantities(), (1.0, 1.0));
        let conj = DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(-1, c(1.0, 0.0))]));
        assert_eq!(conj.hall_quantities(), (1.0, 0.0));
        let grid = DiskGrid::new(16, 32, 0.9).unwrap();
        assert_eq!(identity().second_dilatation_sup(&grid).unwrap(), 0.0);
        let affine = DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(1, c(1.0, 0.0)), (-1, c(0.3, 0.0))]));
        assert!((affine.second_dilatation_sup(&grid).unwrap() - 0.3).abs() < 1e-15);
        assert!((example_16().second_dilatation_sup(&grid).unwrap() - 0.225).abs() < 1e-15);
        assert_eq!(conj.second_dilatation_sup(&grid), Err(Error::VanishingFz));
    }

    #[test]
    fn log_jacobian_identity() {
        let (l, r) = identity().log_jacobian_curvature(c(0.3, 0.2)).unwrap();
        assert!(l.abs() < 1e-9 && r == 0.0);
        let affine = DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(1, c(1.0, 0.0)), (-1, c(0.3, 0.0))]));
        let (l, r) = affine.log_jacobian_curvature(c(-0.5, 0.1)).unwrap();
        assert!(l.abs() < 1e-9 && r == 0.0);
        for z in [c(0.0, 0.0), c(0.5, -0.2), c(-0.1, 0.85)] {
            let (l, r) = example_16().log_jacobian_curvature(z).unwrap();
            assert!((l - 16.0).abs() < 1e-9 && (r - 16.0).abs() < 1e-12, "{l} {r}");
            // (1/J)_{z zbar} J^3 = 2|z|^2 + J = 16 + |z|^2
            let (l, r) = example_16().inverse_jacobian_curvature(z).unwrap();
            assert!((r - (16.0 + z.norm_sqr())).abs() < 1e-12);
            assert!((l - r).abs() < 1e-8 * r, "{l} {r}");
        }
        let conj = DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(-1, c(1.0, 0.0))]));
        assert!(matches!(
            conj.log_jacobian_curvature(c(0.1, 0.0)),
            Err(Error::NonPositiveJacobian(_))
        ));
    }

    #[test]
    fn identities_hold_for_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let h = random_map(&mut rng, 6);
        for _ in 0..20 {
            let z = random_disk_point(&mut rng, 0.8);
            let jet = h.jet(z).unwrap();
            if jet.jacobian() <= 0.0 {
                continue;
            }
            let (l, r) = h.log_jacobian_curvature(z).unwrap();
            assert!((l - r).abs() <= 1e-5 * (1.0 + r.abs()), "{l} {r}");
            let (l, r) = h.inverse_jacobian_curvature(z).unwrap();
            assert!((l - r).abs() <= 1e-5 * (1.0 + r.abs()), "{l} {r}");
            assert!(r >= 0.0);
        }
    }

    #[test]
    fn heinz_energy_examples() {
        assert_eq!(identity().heinz_energy(c(0.1, 0.1)).unwrap(), 1.0);
        let conj = DiskHarmonicMap::extend(&FourierCoeffs::from_pairs(&[(-1, c(1.0, 0.0))]));
        assert_eq!(conj.heinz_energy(c(0.1, 0.1)).unwrap(), 1.0);
    }

    #[test]
    fn grid_layout() {
        let g = DiskGrid::new(4, 8, 0.8).unwrap();
        assert_eq!(g.points().count(), g.len());
        assert_eq!(g.interior_points().count() + g.outer_ring().count(), g.len());
        assert!(g.points().all(|p| p.z.norm() <= 0.8 + 1e-15));
        assert!(DiskGrid::new(4, 8, 1.0).is_err());
    }
}
