//! Polynomials in `(x, y, z)`, harmonic potentials and their gradient maps,
//! Hessian determinants, the Poisson integral of the unit ball, and distance
//! to ellipsoids.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::diffops::{self, Domain};
use crate::linalg::{self, Mat};
use crate::quadrature::SphereRule;
use crate::{Error, Result, P3};

/// Dense polynomial `sum a_{ijk} x^i y^j z^k` of total degree at most `degree`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Poly3 {
    degree: usize,
    coeffs: Vec<f64>,
}

impl Poly3 {
    pub fn zero(degree: usize) -> Self {
        let side = degree + 1;
        Self {
            degree,
            coeffs: vec![0.0; side * side * side],
        }
    }

    /// From `(i, j, k, coefficient)` terms; repeated monomials add up.
    pub fn from_terms(terms: &[(usize, usize, usize, f64)]) -> Self {
        let degree = terms.iter().map(|t| t.0 + t.1 + t.2).max().unwrap_or(0);
        let mut p = Self::zero(degree);
        for &(i, j, k, c) in terms {
            let idx = p.index(i, j, k);
            p.coeffs[idx] += c;
        }
        p
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let side = self.degree + 1;
        (i * side + j) * side + k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> f64 {
        if i + j + k > self.degree {
            return 0.0;
        }
        self.coeffs[self.index(i, j, k)]
    }

    /// Nonzero terms `(i, j, k, a_ijk)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        let d = self.degree;
        (0..=d).flat_map(move |i| {
            (0..=d - i).flat_map(move |j| {
                (0..=d - i - j).filter_map(move |k| {
                    let c = self.coeff(i, j, k);
                    (c != 0.0).then_some((i, j, k, c))
                })
            })
        })
    }

    pub fn eval(&self, p: &P3) -> f64 {
        let d = self.degree;
        let mut pw = [[1.0; 16]; 3];
        for axis in 0..3 {
            for e in 1..=d.min(15) {
                pw[axis][e] = pw[axis][e - 1] * p[axis];
            }
        }
        let mut acc = 0.0;
        for (i, j, k, c) in self.terms() {
            acc += c * pw[0][i] * pw[1][j] * pw[2][k];
        }
        acc
    }

    /// Partial derivative along `axis` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (i, j, k, c) in self.terms() {
            let e = [i, j, k];
            if e[axis] == 0 {
                continue;
            }
            let mut t = e;
            t[axis] -= 1;
            let idx = out.index(t[0], t[1], t[2]);
            out.coeffs[idx] += c * e[axis] as f64;
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(2));
        for axis in 0..3 {
            let second = self.partial(axis).partial(axis);
            for (i, j, k, c) in second.terms() {
                let idx = out.index(i, j, k);
                out.coeffs[idx] += c;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree.max(other.degree));
        for (i, j, k, c) in self.terms().chain(other.terms()) {
            let idx = out.index(i, j, k);
            out.coeffs[idx] += c;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, j, k, a) in self.terms() {
            for (p, q, r, b) in other.terms() {
                let idx = out.index(i + p, j + q, k + r);
                out.coeffs[idx] += a * b;
            }
        }
        out
    }

    /// Largest absolute coefficient.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// A polynomial with `Delta u = 0` identically.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HarmonicPoly3 {
    poly: Poly3,
}

impl HarmonicPoly3 {
    /// Checks the Laplace recurrence coefficientwise.
    pub fn new(poly: Poly3) -> Result<Self> {
        let residual = poly.laplacian().max_coeff();
        if residual > 1e-12 * poly.max_coeff().max(1.0) {
            return Err(Error::NotHarmonic(residual));
        }
        Ok(Self { poly })
    }

    pub fn poly(&self) -> &Poly3 {
        &self.poly
    }

    pub fn eval(&self, p: &P3) -> f64 {
        self.poly.eval(p)
    }

    /// Symmetric matrix of second derivatives at `p`.
    pub fn hessian(&self, p: &P3) -> Mat<3> {
        let first: Vec<Poly3> = (0..3).map(|a| self.poly.partial(a)).collect();
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = first[i].partial(j).eval(p);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        m
    }

    /// `H = det Hess u` as a polynomial.
    pub fn hessian_poly(&self) -> Poly3 {
        let first: Vec<Poly3> = (0..3).map(|a| self.poly.partial(a)).collect();
        let s: Vec<Vec<Poly3>> = (0..3).map(|i| (0..3).map(|j| first[i].partial(j)).collect()).collect();
        let minor =
            |a: usize, b: usize, c: usize, d: usize| s[1][a].mul(&s[2][b]).add(&s[1][c].mul(&s[2][d]).scale(-1.0));
        s[0][0]
            .mul(&minor(1, 2, 2, 1))
            .add(&s[0][1].mul(&minor(0, 2, 2, 0)).scale(-1.0))
            .add(&s[0][2].mul(&minor(0, 1, 1, 0)))
    }
}

/// Solid harmonics of degrees `1..=max_degree` (`2d + 1` of them in degree `d`),
/// with integer coefficients.
///
/// In each degree the free data are the monomials of `z`-degree at most one;
/// higher powers of `z` follow from `(k+2)(k+1) a_{i,j,k+2} = -(i+2)(i+1) a_{i+2,j,k} - (j+2)(j+1) a_{i,j+2,k}`,
/// solved in exact rational arithmetic.
pub fn harmonic_basis(max_degree: usize) -> Result<Vec<HarmonicPoly3>> {
    if max_degree > 6 {
        return Err(Error::DegreeTooLarge(max_degree));
    }
    type Q = Ratio<i64>;
    let mut basis = Vec::new();
    for d in 1..=max_degree {
        for kz in 0..=1usize.min(d) {
            for i in 0..=(d - kz) {
                let j = d - kz - i;
                // a[i][j][k] with i + j + k = d, only k is implied
                let mut a = vec![vec![vec![Q::zero(); d + 1]; d + 1]; d + 1];
                a[i][j][kz] = Q::from_integer(1);
                for k in 0..d.saturating_sub(1) {
                    for p in 0..=(d - k - 2) {
                        let q = d - k - 2 - p;
                        let mut rhs = Q::zero();
                        if p + 2 <= d {
                            rhs += a[p + 2][q][k] * Q::from_integer(((p + 2) * (p + 1)) as i64);
                        }
                        if q + 2 <= d {
                            rhs += a[p][q + 2][k] * Q::from_integer(((q + 2) * (q + 1)) as i64);
                        }
                        a[p][q][k + 2] = -rhs / Q::from_integer(((k + 2) * (k + 1)) as i64);
                    }
                }
                let lcm = a
                    .iter()
                    .flatten()
                    .flatten()
                    .fold(1i64, |l, c| num_integer_lcm(l, *c.denom()));
                let mut terms = Vec::new();
                for (p, plane) in a.iter().enumerate() {
                    for (q, row) in plane.iter().enumerate() {
                        for (k, c) in row.iter().enumerate() {
                            if !c.is_zero() {
                                let v = *c * Q::from_integer(lcm);
                                terms.push((p, q, k, *v.numer() as f64));
                            }
                        }
                    }
                }
                basis.push(HarmonicPoly3::new(Poly3::from_terms(&terms))?);
            }
        }
    }
    Ok(basis)
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// A polynomial map `(u, v, w)` of three-space.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap3 {
    pub components: [Poly3; 3],
}

impl PolyMap3 {
    pub fn identity() -> Self {
        Self {
            components: [
                Poly3::from_terms(&[(1, 0, 0, 1.0)]),
                Poly3::from_terms(&[(0, 1, 0, 1.0)]),
                Poly3::from_terms(&[(0, 0, 1, 1.0)]),
            ],
        }
    }

    /// Wood's map `(x^3 - 3xz^2 + yz, y - 3xz, z)`.
    pub fn wood() -> Self {
        Self {
            components: [
                Poly3::from_terms(&[(3, 0, 0, 1.0), (1, 0, 2, -3.0), (0, 1, 1, 1.0)]),
                Poly3::from_terms(&[(0, 1, 0, 1.0), (1, 0, 1, -3.0)]),
                Poly3::from_terms(&[(0, 0, 1, 1.0)]),
            ],
        }
    }

    /// `(x, y, x^2 + y^2 - 1 - 2z^2)`.
    pub fn paraboloid_example() -> Self {
        Self {
            components: [
                Poly3::from_terms(&[(1, 0, 0, 1.0)]),
                Poly3::from_terms(&[(0, 1, 0, 1.0)]),
                Poly3::from_terms(&[(2, 0, 0, 1.0), (0, 2, 0, 1.0), (0, 0, 0, -1.0), (0, 0, 2, -2.0)]),
            ],
        }
    }

    pub fn eval(&self, p: &P3) -> P3 {
        [
            self.components[0].eval(p),
            self.components[1].eval(p),
            self.components[2].eval(p),
        ]
    }

    /// Exact derivative matrix `m[i][j] = d F_i / d x_j`.
    pub fn derivative(&self, p: &P3) -> Mat<3> {
        let mut m = [[0.0; 3]; 3];
        for (i, c) in self.components.iter().enumerate() {
            for (j, entry) in m[i].iter_mut().enumerate() {
                *entry = c.partial(j).eval(p);
            }
        }
        m
    }

    /// `(det, matrix)` of the derivative.
    pub fn jacobian3(&self, p: &P3) -> (f64, Mat<3>) {
        let m = self.derivative(p);
        (linalg::det(&m), m)
    }

    /// `(max |J_ij - J_ji|, |tr J|)`; both vanish for gradients of harmonic functions.
    pub fn cr_residual(&self, p: &P3) -> (f64, f64) {
        let m = self.derivative(p);
        (linalg::asymmetry(&m), linalg::trace(&m).abs())
    }

    /// Largest Laplacian coefficient over the components.
    pub fn harmonicity_residual(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.laplacian().max_coeff())
            .fold(0.0, f64::max)
    }
}

/// `grad u` as a polynomial map.
pub fn gradient_map(u: &HarmonicPoly3) -> PolyMap3 {
    PolyMap3 {
        components: [u.poly.partial(0), u.poly.partial(1), u.poly.partial(2)],
    }
}

/// Hessian determinant of `u` at `p`.
pub fn hessian_det(u: &HarmonicPoly3, p: &P3) -> f64 {
    linalg::det(&u.hessian(p))
}

/// Finite-difference `Delta ln |H|` at `p` (7-point stencil, steps `step`, `step/2`, `step/4`,
/// Richardson-extrapolated).
///
/// Fails with `HessianTooSmall` when `|H(p)| <= floor`.
pub fn lgw_residual(u: &HarmonicPoly3, p: &P3, step: f64, floor: f64) -> Result<f64> {
    let h = hessian_det(u, p);
    if !(h.abs() > floor) {
        return Err(Error::HessianTooSmall { value: h.abs(), floor });
    }
    let hp = u.hessian_poly();
    diffops::fd_laplacian(
        |q: &P3| {
            let v = hp.eval(q);
            (v != 0.0).then(|| v.abs().ln())
        },
        p,
        step,
        3,
    )
}

/// Typical size of `|H|` for a potential: the RMS of `H` over a coarse rule on the unit ball.
pub fn hessian_scale(u: &HarmonicPoly3) -> f64 {
    let hp = u.hessian_poly();
    let rule = crate::quadrature::ball_mean_rule::<3>(1.0, 6, 6);
    rule.iter().map(|(p, w)| w * hp.eval(p).powi(2)).sum::<f64>().sqrt()
}

/// Vector samples on the product grid of the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct BallBoundaryData {
    rule: SphereRule,
    values: Vec<P3>,
}

impl BallBoundaryData {
    pub fn from_fn(polar: usize, azimuth: usize, f: impl Fn(&P3) -> P3) -> Self {
        let rule = SphereRule::new(polar, azimuth);
        let values = rule.points.iter().map(f).collect();
        Self { rule, values }
    }

    pub fn rule(&self) -> &SphereRule {
        &self.rule
    }

    /// Boundary mean `(1 / 4 pi) int v`.
    pub fn mean(&self) -> P3 {
        let mut acc = [0.0; 3];
        for (v, w) in self.values.iter().zip(&self.rule.weights) {
            for k in 0..3 {
                acc[k] += w * v[k];
            }
        }
        let total = self.rule.total_weight();
        acc.map(|a| a / total)
    }
}

/// `u(x) = (1 / 4 pi) int (1 - |x|^2) / |x - xi|^3 v(xi) dS(xi)` by the product rule.
pub fn poisson_ball_extend(data: &BallBoundaryData, x: &P3) -> Result<P3> {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    if !(r2 < 1.0) {
        return Err(Error::OutsideBall(r2.sqrt()));
    }
    let mut acc = [0.0; 3];
    for ((xi, w), v) in data.rule.points.iter().zip(&data.rule.weights).zip(&data.values) {
        let d2: f64 = (0..3).map(|k| (x[k] - xi[k]).powi(2)).sum();
        let kernel = w * (1.0 - r2) / (d2 * d2.sqrt());
        for k in 0..3 {
            acc[k] += kernel * v[k];
        }
    }
    let total = data.rule.total_weight();
    Ok(acc.map(|a| a / total))
}

/// Axis-aligned ellipsoid `x^2/a^2 + y^2/b^2 + z^2/c^2 <= 1` centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    pub axes: [f64; 3],
}

impl Ellipsoid {
    pub fn new(axes: [f64; 3]) -> Result<Self> {
        if axes.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidArgument("ellipsoid axes must be positive".into()));
        }
        Ok(Self { axes })
    }

    pub fn contains(&self, p: &P3) -> bool {
        (0..3).map(|k| (p[k] / self.axes[k]).powi(2)).sum::<f64>() < 1.0
    }

    /// Euclidean distance from `p` to the surface (inside or outside).
    pub fn distance(&self, p: &P3) -> f64 {
        // sort axes descending and reflect into the first octant
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| self.axes[j].total_cmp(&self.axes[i]));
        let e = order.map(|i| self.axes[i]);
        let y = order.map(|i| p[i].abs());
        distance_ellipsoid_octant(e, y)
    }
}

impl Domain<3> for Ellipsoid {
    fn dist_to_boundary(&self, x: &[f64; 3]) -> f64 {
        self.distance(x)
    }
}

fn robust_length(v: &[f64]) -> f64 {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * v.iter().map(|x| (x / m).powi(2)).sum::<f64>().sqrt()
}

/// Bisection for the root `s` of `sum (n_i / (s + r_i))^2 - 1`, with `r` the squared axis ratios.
fn bisect_root(n: &[f64], r: &[f64], g: f64) -> f64 {
    let last = n[n.len() - 1];
    let mut s0 = last - 1.0;
    let mut s1 = if g < 0.0 { 0.0 } else { robust_length(n) - 1.0 };
    let mut s = 0.0;
    for _ in 0..1100 {
        s = 0.5 * (s0 + s1);
        if s == s0 || s == s1 {
            break;
        }
        let val: f64 = n.iter().zip(r).map(|(ni, ri)| (ni / (s + ri)).powi(2)).sum::<f64>() - 1.0;
        if val > 0.0 {
            s0 = s;
        } else if val < 0.0 {
            s1 = s;
        } else {
            break;
        }
    }
    s
}

/// Distance from `y` (first quadrant) to the ellipse with semi-axes `e0 >= e1`.
fn distance_ellipse_quadrant(e: [f64; 2], y: [f64; 2]) -> f64 {
    if y[1] > 0.0 {
        if y[0] > 0.0 {
            let z = [y[0] / e[0], y[1] / e[1]];
            let g = z[0] * z[0] + z[1] * z[1] - 1.0;
            if g != 0.0 {
                let r0 = (e[0] / e[1]).powi(2);
                let sbar = bisect_root(&[r0 * z[0], z[1]], &[r0, 1.0], g);
                let x0 = r0 * y[0] / (sbar + r0);
                let x1 = y[1] / (sbar + 1.0);
                return ((x0 - y[0]).powi(2) + (x1 - y[1]).powi(2)).sqrt();
            }
            return 0.0;
        }
        return (y[1] - e[1]).abs();
    }
    let numer0 = e[0] * y[0];
    let denom0 = e[0] * e[0] - e[1] * e[1];
    if numer0 < denom0 {
        let xde0 = numer0 / denom0;
        let x0 = e[0] * xde0;
        let x1 = e[1] * (1.0 - xde0 * xde0).sqrt();
        ((x0 - y[0]).powi(2) + x1 * x1).sqrt()
    } else {
        (y[0] - e[0]).abs()
    }
}

/// Distance from `y` (first octant) to the ellipsoid with semi-axes `e0 >= e1 >= e2`.
fn distance_ellipsoid_octant(e: [f64; 3], y: [f64; 3]) -> f64 {
    if y[2] > 0.0 {
        if y[1] > 0.0 {
            if y[0] > 0.0 {
                let z = [y[0] / e[0], y[1] / e[1], y[2] / e[2]];
                let g = z.iter().map(|v| v * v).sum::<f64>() - 1.0;
                if g != 0.0 {
                    let r0 = (e[0] / e[2]).powi(2);
                    let r1 = (e[1] / e[2]).powi(2);
                    let sbar = bisect_root(&[r0 * z[0], r1 * z[1], z[2]], &[r0, r1, 1.0], g);
                    let x = [r0 * y[0] / (sbar + r0), r1 * y[1] / (sbar + r1), y[2] / (sbar + 1.0)];
                    return (0..3).map(|k| (x[k] - y[k]).powi(2)).sum::<f64>().sqrt();
                }
                return 0.0;
            }
            return distance_ellipse_quadrant([e[1], e[2]], [y[1], y[2]]);
        }
        if y[0] > 0.0 {
            return distance_ellipse_quadrant([e[0], e[2]], [y[0], y[2]]);
        }
        return (y[2] - e[2]).abs();
    }
    let denom = [e[0] * e[0] - e[2] * e[2], e[1] * e[1] - e[2] * e[2]];
    let numer = [e[0] * y[0], e[1] * y[1]];
    if numer[0] < denom[0] && numer[1] < denom[1] {
        let xde = [numer[0] / denom[0], numer[1] / denom[1]];
        let discr = 1.0 - xde[0] * xde[0] - xde[1] * xde[1];
        if discr > 0.0 {
            let x = [e[0] * xde[0], e[1] * xde[1], e[2] * discr.sqrt()];
            return ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + x[2] * x[2]).sqrt();
        }
    }
    distance_ellipse_quadrant([e[0], e[1]], [y[0], y[1]])
}

/// Worst margin of `d(h(x), dD) - (1 - |x|) R_0 / 2^{N-1}` over the given points of the unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnackMargin<const N: usize> {
    pub margin: f64,
    pub argmin: [f64; N],
    /// `R_0 = d(h(0), dD)`.
    pub inradius: f64,
    /// `1 / 2^{N-1}`.
    pub constant: f64,
}

pub fn harnack_distance_margin<const N: usize>(
    h: impl Fn(&[f64; N]) -> [f64; N],
    points: &[[f64; N]],
    domain: &impl Domain<N>,
) -> HarnackMargin<N> {
    let r0 = domain.dist_to_boundary(&h(&[0.0; N]));
    let constant = 1.0 / (1u64 << (N - 1)) as f64;
    let mut worst = HarnackMargin {
        margin: f64::INFINITY,
        argmin: [0.0; N],
        inradius: r0,
        constant,
    };
    for p in points {
        let r = diffops::norm(p);
        let margin = domain.dist_to_boundary(&h(p)) - (1.0 - r) * r0 * constant;
        if margin < worst.margin {
            worst.margin = margin;
            worst.argmin = *p;
        }
    }
    worst
}

/// Centre plus `radial` spherical shells at radii `max_radius (i + 1) / radial`,
/// each a `polar x azimuth` product grid.
pub fn ball_grid(radial: usize, polar: usize, azimuth: usize, max_radius: f64) -> Vec<P3> {
    let rule = SphereRule::new(polar, azimuth);
    let mut out = vec![[0.0; 3]];
    for i in 0..radial {
        let r = max_radius * (i + 1) as f64 / radial as f64;
        out.extend(rule.points.iter().map(|d| d.map(|c| c * r)));
    }
    out
}
