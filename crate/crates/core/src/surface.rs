//! Axisymmetric surfaces of revolution.
//!
//! A surface is sampled as (rho(phi), z(phi)) on a uniform grid over [0, pi],
//! with rho vanishing at the two poles. The arc-speed gamma = sqrt(rho'^2 +
//! z'^2) must stay above a positive floor, and the area density per unit
//! theta-angle is rho*gamma, so integrals over the surface reduce to
//! 2*pi * int f rho gamma dphi.

use crate::error::{Error, Result};
use crate::grid::{self, CubicTable};
use std::f64::consts::PI;

/// Hard floor below which the arc-speed is considered degenerate.
pub const GAMMA_FLOOR: f64 = 1e-8;
/// |rho| above this (relative to max rho) at a pole rejects the profile.
const POLE_TOL: f64 = 1e-9;
/// Relative tolerance on z'(0), z'(pi) = 0.
const ZP_END_TOL: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct RevolutionSurface {
    phi: Vec<f64>,
    rho: Vec<f64>,
    zed: Vec<f64>,
    rho_prime: Vec<f64>,
    zed_prime: Vec<f64>,
    gamma: Vec<f64>,
    weight: Vec<f64>,
    gamma_min: f64,
    h: f64,
}

impl RevolutionSurface {
    /// Sample a callable profile phi -> (rho, z) on a uniform n-node grid.
    pub fn from_profile<F>(profile: F, n_nodes: usize) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64),
    {
        if n_nodes < 16 {
            return Err(Error::InvalidProfile(format!(
                "need at least 16 nodes, got {n_nodes}"
            )));
        }
        let phi = grid::linspace(0.0, PI, n_nodes);
        let mut rho = Vec::with_capacity(n_nodes);
        let mut zed = Vec::with_capacity(n_nodes);
        for &p in &phi {
            let (r, z) = profile(p);
            rho.push(r);
            zed.push(z);
        }
        Self::from_samples(rho, zed)
    }

    /// Build from rho and z samples assumed uniform on [0, pi].
    pub fn from_samples(mut rho: Vec<f64>, zed: Vec<f64>) -> Result<Self> {
        let n = rho.len();
        if n < 16 {
            return Err(Error::InvalidProfile(format!(
                "need at least 16 nodes, got {n}"
            )));
        }
        if zed.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: zed.len(),
            });
        }
        let h = PI / (n - 1) as f64;
        let phi = grid::linspace(0.0, PI, n);

        let rho_max = rho.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if rho_max == 0.0 {
            return Err(Error::InvalidProfile("rho vanishes identically".into()));
        }
        for &end in &[0usize, n - 1] {
            if rho[end].abs() > POLE_TOL * rho_max {
                return Err(Error::InvalidProfile(format!(
                    "rho({}) = {} must vanish at the pole",
                    phi[end], rho[end]
                )));
            }
            rho[end] = 0.0;
        }
        for (i, &r) in rho.iter().enumerate().take(n - 1).skip(1) {
            if r <= 0.0 {
                return Err(Error::NonPositiveRho { index: i, value: r });
            }
        }

        let rho_prime = grid::deriv5(&rho, h);
        let zed_prime = grid::deriv5(&zed, h);
        let zp_max = zed_prime.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        for &end in &[0usize, n - 1] {
            if zed_prime[end].abs() > ZP_END_TOL * (zp_max + f64::EPSILON) {
                return Err(Error::InvalidProfile(format!(
                    "z'({}) = {} must vanish at the pole",
                    phi[end], zed_prime[end]
                )));
            }
        }

        let mut gamma = Vec::with_capacity(n);
        let mut gamma_min = f64::INFINITY;
        for i in 0..n {
            let g = (rho_prime[i] * rho_prime[i] + zed_prime[i] * zed_prime[i]).sqrt();
            if g < GAMMA_FLOOR {
                return Err(Error::DegenerateGamma {
                    index: i,
                    value: g,
                    floor: GAMMA_FLOOR,
                });
            }
            gamma_min = gamma_min.min(g);
            gamma.push(g);
        }

        // weight rho*gamma is exactly zero at the poles, so fields divided by
        // rho are never weighed there.
        let mut weight: Vec<f64> = rho.iter().zip(&gamma).map(|(r, g)| r * g).collect();
        weight[0] = 0.0;
        weight[n - 1] = 0.0;

        Ok(RevolutionSurface {
            phi,
            rho,
            zed,
            rho_prime,
            zed_prime,
            gamma,
            weight,
            gamma_min,
            h,
        })
    }

    /// Built-in profiles: "sphere" or "ellipsoid:a" (rho = sin, z = -a cos).
    pub fn named(name: &str, n_nodes: usize) -> Result<Self> {
        if name == "sphere" {
            return Self::from_profile(|p| (p.sin(), -p.cos()), n_nodes);
        }
        if let Some(arg) = name.strip_prefix("ellipsoid:") {
            let a: f64 = arg
                .parse()
                .map_err(|_| Error::Parse(format!("bad ellipsoid aspect {arg:?}")))?;
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidProfile(format!("ellipsoid aspect {a}")));
            }
            return Self::from_profile(move |p| (p.sin(), -a * p.cos()), n_nodes);
        }
        Err(Error::Parse(format!("unknown profile {name:?}")))
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }
    pub fn zed(&self) -> &[f64] {
        &self.zed
    }
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }
    pub fn weight(&self) -> &[f64] {
        &self.weight
    }
    pub fn rho_prime(&self) -> &[f64] {
        &self.rho_prime
    }
    pub fn zed_prime(&self) -> &[f64] {
        &self.zed_prime
    }
    /// Recorded lower bound c with gamma >= c > 0 over all nodes.
    pub fn gamma_min(&self) -> f64 {
        self.gamma_min
    }

    pub fn rho_at(&self, x: f64) -> f64 {
        CubicTable::new(0.0, self.h, &self.rho).eval(x)
    }
    pub fn gamma_at(&self, x: f64) -> f64 {
        CubicTable::new(0.0, self.h, &self.gamma).eval(x)
    }

    /// Surface integral 2*pi * Simpson(field * rho * gamma).
    pub fn integrate(&self, field: &[f64]) -> Result<f64> {
        if field.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: field.len(),
            });
        }
        let vals: Vec<f64> = field.iter().zip(&self.weight).map(|(f, w)| f * w).collect();
        Ok(2.0 * PI * grid::simpson(&vals, self.h))
    }

    /// Meridian arc length between two colatitudes.
    pub fn arc_length(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let cells = ((hi - lo) / self.h).ceil() as usize + 2;
        grid::quad(|x| self.gamma_at(x), lo, hi, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_identities() {
        let s = RevolutionSurface::named("sphere", 256).unwrap();
        for i in 0..s.n() {
            assert!((s.gamma()[i] - 1.0).abs() < 1e-8, "gamma at {i}");
            assert!((s.weight()[i] - s.phi()[i].sin()).abs() < 1e-8);
        }
        assert!((s.gamma_min() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn ellipsoid_gamma_matches_symbolic_oracle() {
        // oracle: gamma(phi) = sqrt(cos^2 phi + 4 sin^2 phi) for z = -2 cos
        let s = RevolutionSurface::named("ellipsoid:2", 256).unwrap();
        for (i, &p) in s.phi().iter().enumerate() {
            let oracle = (p.cos().powi(2) + 4.0 * p.sin().powi(2)).sqrt();
            assert!((s.gamma()[i] - oracle).abs() < 1e-7, "phi = {p}");
        }
        assert!((s.gamma()[0] - 1.0).abs() < 1e-7);
        let mid = s.n() / 2;
        assert!((s.gamma()[mid] - 2.0).abs() < 1e-4);
    }

    #[test]
    fn negative_rho_rejected() {
        let r = RevolutionSurface::from_profile(|_| (-1.0, 0.0), 64);
        assert!(matches!(r, Err(Error::InvalidProfile(_))));
        // negative in the interior only
        let r = RevolutionSurface::from_profile(|p| ((2.0 * p).sin(), -p.cos()), 64);
        assert!(matches!(r, Err(Error::NonPositiveRho { .. })));
    }

    #[test]
    fn too_few_nodes_rejected() {
        assert!(RevolutionSurface::named("sphere", 8).is_err());
    }

    #[test]
    fn integrate_area_and_moments() {
        let s = RevolutionSurface::named("sphere", 256).unwrap();
        let one = vec![1.0; s.n()];
        assert!((s.integrate(&one).unwrap() - 4.0 * PI).abs() < 1e-6);
        let cosf: Vec<f64> = s.phi().iter().map(|p| p.cos()).collect();
        assert!(s.integrate(&cosf).unwrap().abs() < 1e-10);
        let cos2: Vec<f64> = s.phi().iter().map(|p| p.cos() * p.cos()).collect();
        // oracle: 2 pi int cos^2 sin dphi = 4 pi / 3
        assert!((s.integrate(&cos2).unwrap() - 4.0 * PI / 3.0).abs() < 1e-8);
    }

    #[test]
    fn integrate_refines_at_fourth_order() {
        let field_int = |n: usize| {
            let s = RevolutionSurface::named("sphere", n).unwrap();
            let f: Vec<f64> = s.phi().iter().map(|p| (3.0 * p).cos().exp()).collect();
            s.integrate(&f).unwrap()
        };
        let reference = field_int(4097);
        let e1 = (field_int(65) - reference).abs();
        let e2 = (field_int(129) - reference).abs();
        assert!(e1 / e2 > 10.0, "refinement ratio {}", e1 / e2);
    }

    #[test]
    fn arc_length_of_sphere_meridian() {
        let s = RevolutionSurface::named("sphere", 512).unwrap();
        assert!((s.arc_length(0.3, 1.7) - 1.4).abs() < 1e-9);
    }
}
