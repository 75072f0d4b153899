//! A small catalog of conformal maps of the unit disk with known image geometry.
//!
//! For each map we can evaluate `phi`, `phi'` and the distance from an image
//! point to the boundary of `phi(D)`. Images bounded by a circle, a line or a
//! slit use closed forms; the others are measured against the boundary curve
//! `phi(e^{it})`, sampled densely and refined by golden-section search.

use core::f64::consts::PI;

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Samples of the boundary curve for the parametric distance.
const BOUNDARY_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ConformalMap {
    /// `(z - b) / (1 - conj(b) z)`, a disk automorphism.
    Mobius { b: C64 },
    /// `z / (1 - z)^2`, onto the plane minus `(-inf, -1/4]`.
    Koebe,
    /// `(1 + z) / (1 - z)`, onto the right half-plane.
    HalfPlane,
    /// `(z - 1)^2`, onto the interior of a cardioid; `phi'(1) = 0`.
    SquareShift,
    /// `sqrt(z + 1)` with the principal branch.
    SqrtShift,
}

impl ConformalMap {
    /// The five catalog members, with `b = 0.5` for the automorphism.
    pub fn catalog() -> [ConformalMap; 5] {
        [
            ConformalMap::Mobius { b: C64::new(0.5, 0.0) },
            ConformalMap::Koebe,
            ConformalMap::HalfPlane,
            ConformalMap::SquareShift,
            ConformalMap::SqrtShift,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConformalMap::Mobius { .. } => "mobius",
            ConformalMap::Koebe => "koebe",
            ConformalMap::HalfPlane => "half-plane",
            ConformalMap::SquareShift => "square-shift",
            ConformalMap::SqrtShift => "sqrt-shift",
        }
    }

    fn check(&self, z: C64) -> Result<()> {
        let r = z.norm();
        if let ConformalMap::Mobius { b } = self {
            if !(b.norm() < 1.0) {
                return Err(Error::InvalidArgument("automorphism needs |b| < 1".into()));
            }
        }
        if !(r < 1.0) {
            return Err(Error::OutsideOpenDisk(r));
        }
        Ok(())
    }

    fn eval_unchecked(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        match *self {
            ConformalMap::Mobius { b } => (z - b) / (one - b.conj() * z),
            ConformalMap::Koebe => z / ((one - z) * (one - z)),
            ConformalMap::HalfPlane => (one + z) / (one - z),
            ConformalMap::SquareShift => (z - one) * (z - one),
            ConformalMap::SqrtShift => (z + one).sqrt(),
        }
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.check(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub fn derivative(&self, z: C64) -> Result<C64> {
        self.check(z)?;
        let one = C64::new(1.0, 0.0);
        Ok(match *self {
            ConformalMap::Mobius { b } => {
                let d = one - b.conj() * z;
                (one - b.norm_sqr()) / (d * d)
            }
            ConformalMap::Koebe => (one + z) / ((one - z) * (one - z) * (one - z)),
            ConformalMap::HalfPlane => 2.0 / ((one - z) * (one - z)),
            ConformalMap::SquareShift => 2.0 * (z - one),
            ConformalMap::SqrtShift => 0.5 / (z + one).sqrt(),
        })
    }

    /// `d'(w) = dist(w, boundary of phi(D))` for `w` in the image.
    pub fn image_distance(&self, w: C64) -> f64 {
        match *self {
            ConformalMap::Mobius { .. } => 1.0 - w.norm(),
            ConformalMap::Koebe => {
                if w.re <= -0.25 {
                    w.im.abs()
                } else {
                    (w + 0.25).norm()
                }
            }
            ConformalMap::HalfPlane => w.re,
            ConformalMap::SquareShift | ConformalMap::SqrtShift => {
                parametric_distance(|t| self.eval_unchecked(C64::from_polar(1.0, t)), w)
            }
        }
    }

    /// `D* = d(z) |phi'(z)| / d'(phi(z))` with `d(z) = 1 - |z|`; Koebe's theorem puts it in `[1/4, 4]`.
    pub fn koebe_quantity(&self, z: C64) -> Result<f64> {
        let w = self.eval(z)?;
        let dphi = self.derivative(z)?;
        Ok((1.0 - z.norm()) * dphi.norm() / self.image_distance(w))
    }

    /// `rho^{-1}(phi(z)) = (1 - |z|^2) |phi'(z)|` for the density normalized by `rho_D = 1 / (1 - |z|^2)`.
    pub fn inverse_density(&self, z: C64) -> Result<f64> {
        Ok((1.0 - z.norm_sqr()) * self.derivative(z)?.norm())
    }

    /// `rho^{-1}(w) / d'(w)` at `w = phi(z)`; lies in `[1, 8]`.
    pub fn density_ratio(&self, z: C64) -> Result<f64> {
        let w = self.eval(z)?;
        Ok(self.inverse_density(z)? / self.image_distance(w))
    }
}

/// Distance from `w` to the closed curve `t -> gamma(t)`, `t` in `[0, 2 pi)`.
pub fn parametric_distance(gamma: impl Fn(f64) -> C64, w: C64) -> f64 {
    let h = 2.0 * PI / BOUNDARY_SAMPLES as f64;
    let dist = |t: f64| (gamma(t) - w).norm();
    let mut best = (f64::INFINITY, 0.0);
    for j in 0..BOUNDARY_SAMPLES {
        let t = h * j as f64;
        let d = dist(t);
        if d < best.0 {
            best = (d, t);
        }
    }
    let refined = golden_min(&dist, best.1 - h, best.1 + h, 1e-14);
    refined.min(best.0)
}

pub(crate) fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    fc.min(fd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar_points() -> impl Iterator<Item = C64> {
        (0..12).flat_map(|i| {
            let r = 0.95 * i as f64 / 11.0;
            (0..24).map(move |j| C64::from_polar(r, 2.0 * PI * j as f64 / 24.0 + 0.1))
        })
    }

    #[test]
    fn mobius_derivative_at_origin() {
        let phi = ConformalMap::Mobius { b: C64::new(0.5, 0.0) };
        assert_eq!(phi.derivative(C64::new(0.0, 0.0)).unwrap(), C64::new(0.75, 0.0));
        let d = phi.koebe_quantity(C64::new(0.0, 0.0)).unwrap();
        // d' = 1 - 1/2, so D* = 0.75 / 0.5
        assert!((d - 1.5).abs() < 1e-15);
    }

    #[test]
    fn parametric_distance_matches_circle() {
        for w in [C64::new(0.2, 0.1), C64::new(-0.7, 0.5), C64::new(0.0, 0.0)] {
            let d = parametric_distance(|t| C64::from_polar(1.0, t), w);
            assert!((d - (1.0 - w.norm())).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_difference_quotients() {
        for phi in ConformalMap::catalog() {
            for z in polar_points() {
                let h = 1e-6;
                let fd = (phi.eval(z + h).unwrap() - phi.eval(z - h).unwrap()) / (2.0 * h);
                let exact = phi.derivative(z).unwrap();
                assert!((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()), "{}", phi.name());
            }
        }
    }

    #[test]
    fn koebe_and_density_bounds() {
        for phi in ConformalMap::catalog() {
            for z in polar_points() {
                let k = phi.koebe_quantity(z).unwrap();
                assert!((0.25..=4.0).contains(&k), "{} {z} {k}", phi.name());
                let rho = phi.density_ratio(z).unwrap();
                assert!((1.0 - 1e-9..=8.0).contains(&rho), "{} {z} {rho}", phi.name());
            }
        }
    }

    #[test]
    fn unit_disk_density_closed_form() {
        let id = ConformalMap::Mobius { b: C64::new(0.0, 0.0) };
        for z in polar_points() {
            assert!((id.density_ratio(z).unwrap() - (1.0 + z.norm())).abs() < 1e-12);
        }
    }

    #[test]
    fn square_shift_is_not_co_lipschitz_near_one() {
        let phi = ConformalMap::SquareShift;
        let a = phi.derivative(C64::new(0.999, 0.0)).unwrap().norm();
        assert!((a - 0.002).abs() < 1e-12);
    }

    #[test]
    fn outside_disk_rejected() {
        assert!(matches!(
            ConformalMap::Koebe.eval(C64::new(1.0, 0.0)),
            Err(Error::OutsideOpenDisk(_))
        ));
    }
}
