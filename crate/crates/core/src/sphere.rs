//! Geometry and normalized surface measure on `S^d ⊂ R^{d+1}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{param, Error, Result};
use crate::jacobi::{gauss_jacobi_rule, ln_gamma, JacobiParams};

/// Default lower bound on the last coordinate accepted by [`unlift`].
pub const POLE_TOLERANCE: f64 = 1e-8;

/// A unit vector in `R^{d+1}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Normalizes `coords` onto the sphere of dimension `coords.len() - 1`.
    pub fn new(mut coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Input(alloc::format!(
                "a sphere point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        let norm = norm(&coords);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Input(alloc::format!("cannot normalize vector of norm {norm}")));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { coords })
    }

    /// The pole `(0, …, 0, 1)` of `S^d`.
    pub fn pole(d: usize) -> Self {
        let mut coords = alloc::vec![0.0; d + 1];
        coords[d] = 1.0;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.coords, other)
    }

    /// Chordal distance `|x - y|`.
    pub fn chordal_distance(&self, other: &[f64]) -> f64 {
        chordal_from_dot(self.dot(other))
    }
}

impl AsRef<[f64]> for SpherePoint {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// A chordal ball `B(x, δ) = { y : |x - y| ≤ δ }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    center: SpherePoint,
    radius: f64,
}

impl Cap {
    pub fn new(center: SpherePoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= 2.0) {
            return Err(param("radius", radius, "chordal radius must lie in (0, 2]"));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &SpherePoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.center.chordal_distance(y) <= self.radius
    }

    pub fn measure(&self) -> f64 {
        cap_measure(self.center.dim(), self.radius)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `|x - y|` for unit vectors with inner product `t`.
pub fn chordal_from_dot(t: f64) -> f64 {
    (2.0 - 2.0 * t).max(0.0).sqrt()
}

/// Maps `R^d` onto the open upper hemisphere of `S^d`: `x ↦ (x, 1) / √(1 + |x|²)`.
pub fn lift(x: &[f64]) -> SpherePoint {
    let scale = 1.0 / (1.0 + dot(x, x)).sqrt();
    let mut coords = Vec::with_capacity(x.len() + 1);
    coords.extend(x.iter().map(|v| v * scale));
    coords.push(scale);
    SpherePoint { coords }
}

/// Inverse of [`lift`] with the default pole tolerance.
pub fn unlift(u: &SpherePoint) -> Result<Vec<f64>> {
    unlift_with_tolerance(u.coords(), POLE_TOLERANCE)
}

/// `(u_1, …, u_{d+1}) ↦ (u_1 / u_{d+1}, …, u_d / u_{d+1})`; fails unless `u_{d+1} > tolerance`.
pub fn unlift_with_tolerance(u: &[f64], tolerance: f64) -> Result<Vec<f64>> {
    let (&last, head) = u
        .split_last()
        .ok_or_else(|| Error::Input(alloc::string::String::from("empty point")))?;
    if !(last > tolerance) {
        return Err(Error::HemisphereDomain { last, tolerance });
    }
    Ok(head.iter().map(|v| v / last).collect())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `dim Π_n^d`: restrictions to `S^d` of polynomials of degree `< n`, with `n` floored.
///
/// Equals the number of harmonics of degrees `≤ n-1` and `≤ n-2`:
/// `C(n-1+d, d) + C(n-2+d, d)`.
pub fn dim_pi(d: usize, n: f64) -> u128 {
    let n = n.floor();
    if !(n >= 1.0) {
        return 0;
    }
    let n = n as u128;
    let d = d as u128;
    let top = binomial(n - 1 + d, d);
    if n >= 2 {
        top + binomial(n - 2 + d, d)
    } else {
        top
    }
}

/// `ln dim Π_n^d` through the Gamma-ratio formula, for sizes beyond `u128`.
pub fn ln_dim_pi(d: usize, n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let (d, n) = (d as f64, n as f64);
    (2.0 * n + d - 2.0).ln() + ln_gamma(n + d - 1.0) - ln_gamma(n) - ln_gamma(d + 1.0)
}

/// `dim Π_n^d` as a float (log-Gamma route).
pub fn dim_pi_f64(d: usize, n: usize) -> f64 {
    ln_dim_pi(d, n).exp()
}

/// `ln ω_d`, the log of the surface area of `S^d`.
pub fn ln_surface_omega(d: usize) -> f64 {
    let h = (d as f64 + 1.0) / 2.0;
    core::f64::consts::LN_2 + h * PI.ln() - ln_gamma(h)
}

/// Surface area `ω_d = 2 π^{(d+1)/2} / Γ((d+1)/2)`.
pub fn surface_omega(d: usize) -> f64 {
    ln_surface_omega(d).exp()
}

/// `ω_{d-1} / ω_d`, the normalizing constant of the zonal reduction.
pub fn omega_ratio(d: usize) -> f64 {
    (ln_surface_omega(d - 1) - ln_surface_omega(d)).exp()
}

/// Result of [`zonal_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalIntegral {
    pub value: f64,
    pub node_count: usize,
    /// Difference between the `node_count` rule and a rule with half the nodes.
    pub estimated_error: f64,
    /// Set when the estimated error exceeds the requested tolerance.
    pub accuracy_warning: bool,
}

/// `∫_{S^d} f(x·y) dμ*_d(y)` for any pole `x`, via Gauss–Gegenbauer quadrature on
/// the reduction `(ω_{d-1}/ω_d) ∫ f(t) (1-t²)^{d/2-1} dt`.
pub fn zonal_integral<F: FnMut(f64) -> f64>(
    mut profile: F,
    d: usize,
    node_count: usize,
    tolerance: f64,
) -> Result<ZonalIntegral> {
    if d == 0 {
        return Err(param("d", 0.0, "sphere dimension must be >= 1"));
    }
    let a = d as f64 / 2.0 - 1.0;
    let params = JacobiParams::new(a, a)?;
    let scale = omega_ratio(d);
    let fine = gauss_jacobi_rule(params, node_count.max(2))?;
    let coarse = gauss_jacobi_rule(params, (node_count / 2).max(1))?;
    let value = scale * fine.integrate(&mut profile);
    let check = scale * coarse.integrate(&mut profile);
    let estimated_error = (value - check).abs();
    Ok(ZonalIntegral {
        value,
        node_count: fine.node_count(),
        estimated_error,
        accuracy_warning: estimated_error > tolerance,
    })
}

/// Normalized volume `μ*_d(B(x, ρ))` of a chordal cap.
///
/// With `θ_0 = 2 asin(ρ/2)` this is `(ω_{d-1}/ω_d) ∫_0^{θ_0} sin^{d-1}θ dθ`, integrated by
/// Gauss–Legendre with node doubling until two successive values agree.
pub fn cap_measure(d: usize, rho: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    if rho >= 2.0 {
        return 1.0;
    }
    let theta0 = 2.0 * (rho / 2.0).asin();
    if d == 1 {
        return theta0 / PI;
    }
    let legendre = JacobiParams::new(0.0, 0.0).expect("valid exponents");
    let half = 0.5 * theta0;
    let integrate = |m: usize| -> f64 {
        let rule = gauss_jacobi_rule(legendre, m).expect("Gauss-Legendre rule");
        half * rule.integrate(|t| (half * (t + 1.0)).sin().powi(d as i32 - 1))
    };
    let mut m = 16;
    let mut prev = integrate(m);
    loop {
        m *= 2;
        let next = integrate(m);
        if (next - prev).abs() <= 1e-15 * next.abs() || m >= 1024 {
            return (omega_ratio(d) * next).min(1.0);
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lift_examples() {
        assert_eq!(lift(&[0.0, 0.0]).coords(), &[0.0, 0.0, 1.0]);
        let u = lift(&[1.0, 0.0, 0.0]);
        let s = 0.5f64.sqrt();
        assert_relative_eq!(u.coords()[0], s, epsilon = 1e-15);
        assert_relative_eq!(u.coords()[3], s, epsilon = 1e-15);
        assert_eq!(unlift(&u).unwrap().len(), 3);
        assert_relative_eq!(unlift(&u).unwrap()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn unlift_rejects_equator_and_south() {
        let equator = SpherePoint::new(alloc::vec![1.0, 0.0]).unwrap();
        assert!(matches!(unlift(&equator), Err(Error::HemisphereDomain { .. })));
        let south = SpherePoint::new(alloc::vec![0.0, 0.0, -1.0]).unwrap();
        assert!(unlift(&south).is_err());
        assert_eq!(unlift(&SpherePoint::pole(3)).unwrap(), alloc::vec![0.0; 3]);
    }

    #[test]
    fn sphere_point_normalizes() {
        let p = SpherePoint::new(alloc::vec![3.0, 4.0]).unwrap();
        assert_relative_eq!(p.coords()[0], 0.6);
        assert!(SpherePoint::new(alloc::vec![0.0, 0.0]).is_err());
        assert!(SpherePoint::new(alloc::vec![1.0]).is_err());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_pi(2, 2.0), 4);
        assert_eq!(dim_pi(3, 5.0), 55);
        assert_eq!(dim_pi(7, 1.0), 1);
        assert_eq!(dim_pi(3, 5.9), 55);
        assert_eq!(dim_pi(2, 0.5), 0);
        assert_relative_eq!(dim_pi_f64(3, 5), 55.0, max_relative = 1e-12);
    }

    #[test]
    fn surface_areas() {
        assert_relative_eq!(surface_omega(1), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(surface_omega(2), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(omega_ratio(4), 0.75, max_relative = 1e-14);
        for d in 4..=20 {
            // ω_{d-1}/ω_d ~ sqrt(d / 2π)
            let ratio = omega_ratio(d) / (d as f64 / (2.0 * PI)).sqrt();
            assert!((0.85..=1.0).contains(&ratio), "d={d}: {ratio}");
        }
    }

    #[test]
    fn cap_measure_endpoints() {
        for d in 1..8 {
            assert_eq!(cap_measure(d, 2.0), 1.0);
            assert_relative_eq!(cap_measure(d, 2.0f64.sqrt()), 0.5, epsilon = 1e-13);
        }
        let cap = Cap::new(SpherePoint::pole(2), 1.0).unwrap();
        // S²: μ(B) = (1 - cos θ0) / 2 with cos θ0 = 1 - ρ²/2
        assert_relative_eq!(cap.measure(), 0.25, epsilon = 1e-14);
        assert!(Cap::new(SpherePoint::pole(2), 0.0).is_err());
        assert!(Cap::new(SpherePoint::pole(2), 2.5).is_err());
    }

    #[test]
    fn zonal_integral_examples() {
        for d in 1..7 {
            let one = zonal_integral(|_| 1.0, d, 32, 1e-12).unwrap();
            assert_relative_eq!(one.value, 1.0, epsilon = 1e-13);
            assert!(!one.accuracy_warning);
            let odd = zonal_integral(|t| t, d, 32, 1e-12).unwrap();
            assert!(odd.value.abs() < 1e-14);
            let sq = zonal_integral(|t| t * t, d, 32, 1e-12).unwrap();
            assert_relative_eq!(sq.value, 1.0 / (d as f64 + 1.0), epsilon = 1e-13);
        }
        let rough = zonal_integral(|t| t.abs().sqrt(), 2, 4, 1e-12).unwrap();
        assert!(rough.accuracy_warning);
    }
}
