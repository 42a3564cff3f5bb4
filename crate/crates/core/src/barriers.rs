//! Piecewise-cubic comparison profiles in the normal coordinate z across a
//! zero curve of the field.
//!
//! With 0 < c <= C bounding |dH/dz| near {H = 0}, the profile
//!     v(z) = beta/2                        for z <= -eta_-,
//!     v_-(z) = (z + eta_-)^2 (A_- z + B_-) + beta/2   on (-eta_-, 0),
//!     v_+(z) = (z - eta_+)^2 (A_+ z + B_+) - beta/2   on (0, eta_+),
//!     v(z) = -beta/2                       for z >= eta_+,
//! with A_- = C/3, A_+ = c/12, B_- = -2 eta_- A_-, B_+ = 2 eta_+ A_+ is
//! W^{2,inf}, satisfies v'' = 2Cz for z < 0 and (c/2)z for z > 0, and its
//! transition offsets obey eta_+- = alpha_+- beta^(1/3) with
//!     4C alpha_-^2 = c alpha_+^2,   (c/6) alpha_+^3 + (2C/3) alpha_-^3 = 1.
//! The free part { |v| < beta/2 } = (-eta_-, eta_+) therefore has width
//! proportional to beta^(1/3).

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BarrierProfile {
    pub c: f64,
    pub big_c: f64,
    pub beta: f64,
    pub eta_minus: f64,
    pub eta_plus: f64,
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub a_minus: f64,
    pub a_plus: f64,
    pub b_minus: f64,
    pub b_plus: f64,
}

pub fn build_barrier(c: f64, big_c: f64, beta: f64) -> Result<BarrierProfile> {
    if !(c > 0.0 && big_c >= c) {
        return Err(Error::InvalidBounds { c, big_c });
    }
    if !(beta > 0.0) {
        return Err(Error::BetaOutOfRange {
            beta,
            limit: f64::INFINITY,
        });
    }
    // alpha_- = r alpha_+ with r = sqrt(c / 4C); then the cubic-sum equation
    // fixes alpha_+ in closed form
    let r = (c / (4.0 * big_c)).sqrt();
    let denom = c / 6.0 + 2.0 * big_c / 3.0 * r * r * r;
    let alpha_plus = (1.0 / denom).cbrt();
    let alpha_minus = r * alpha_plus;
    let cbrt = beta.cbrt();
    let eta_minus = alpha_minus * cbrt;
    let eta_plus = alpha_plus * cbrt;
    let a_minus = big_c / 3.0;
    let a_plus = c / 12.0;
    Ok(BarrierProfile {
        c,
        big_c,
        beta,
        eta_minus,
        eta_plus,
        alpha_minus,
        alpha_plus,
        a_minus,
        a_plus,
        b_minus: -2.0 * eta_minus * a_minus,
        b_plus: 2.0 * eta_plus * a_plus,
    })
}

impl BarrierProfile {
    pub fn eval(&self, z: f64) -> f64 {
        let half = self.beta / 2.0;
        if z <= -self.eta_minus {
            half
        } else if z < 0.0 {
            let s = z + self.eta_minus;
            s * s * (self.a_minus * z + self.b_minus) + half
        } else if z < self.eta_plus {
            let s = z - self.eta_plus;
            s * s * (self.a_plus * z + self.b_plus) - half
        } else {
            -half
        }
    }

    pub fn eval_d1(&self, z: f64) -> f64 {
        if z <= -self.eta_minus || z >= self.eta_plus {
            0.0
        } else if z < 0.0 {
            let s = z + self.eta_minus;
            2.0 * s * (self.a_minus * z + self.b_minus) + s * s * self.a_minus
        } else {
            let s = z - self.eta_plus;
            2.0 * s * (self.a_plus * z + self.b_plus) + s * s * self.a_plus
        }
    }

    pub fn eval_d2(&self, z: f64) -> f64 {
        if z <= -self.eta_minus || z >= self.eta_plus {
            0.0
        } else if z < 0.0 {
            6.0 * self.a_minus * z + 2.0 * (self.b_minus + 2.0 * self.eta_minus * self.a_minus)
        } else {
            6.0 * self.a_plus * z + 2.0 * (self.b_plus - 2.0 * self.eta_plus * self.a_plus)
        }
    }

    /// Width of the free band (-eta_-, eta_+).
    pub fn width(&self) -> f64 {
        self.eta_minus + self.eta_plus
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BarrierReport {
    pub max_abs_v: f64,
    pub bound_violation: f64,
    pub v_jump_at_breaks: f64,
    pub d1_jump_at_breaks: f64,
    /// max |v'' - (2Cz 1_{z<0} + (c/2) z 1_{z>0})| over the free band.
    pub d2_equality_error: f64,
    pub max_abs_d1: f64,
    pub max_abs_d2: f64,
    /// |v'| + |v''| <= smallness_constant * beta^(1/3) must hold for beta <= 1.
    pub smallness_constant: f64,
    pub smallness_ok: bool,
    pub passed: bool,
}

/// Sample the barrier on [-2 eta_-, 2 eta_+] and check the defining
/// identities: |v| <= beta/2, continuity of v and v' at the breakpoints,
/// the exact v'' profile, and the beta^(1/3) smallness of |v'| + |v''|.
pub fn verify_barrier(bp: &BarrierProfile, n_samples: usize) -> BarrierReport {
    let n = n_samples.max(64);
    let lo = -2.0 * bp.eta_minus;
    let hi = 2.0 * bp.eta_plus;
    let half = bp.beta / 2.0;

    let mut max_abs_v = 0.0f64;
    let mut max_d1 = 0.0f64;
    let mut max_d2 = 0.0f64;
    let mut d2_err = 0.0f64;
    for k in 0..=n {
        let z = lo + (hi - lo) * k as f64 / n as f64;
        let v = bp.eval(z);
        max_abs_v = max_abs_v.max(v.abs());
        max_d1 = max_d1.max(bp.eval_d1(z).abs());
        max_d2 = max_d2.max(bp.eval_d2(z).abs());
        if z > -bp.eta_minus && z < bp.eta_plus && z != 0.0 {
            let target = if z < 0.0 {
                2.0 * bp.big_c * z
            } else {
                bp.c / 2.0 * z
            };
            d2_err = d2_err.max((bp.eval_d2(z) - target).abs());
        }
    }

    // one-sided limits at the three breakpoints, evaluated on the closed
    // forms of the adjoining pieces
    let vm = |z: f64| (z + bp.eta_minus).powi(2) * (bp.a_minus * z + bp.b_minus) + half;
    let vp = |z: f64| (z - bp.eta_plus).powi(2) * (bp.a_plus * z + bp.b_plus) - half;
    let dm = |z: f64| {
        let s = z + bp.eta_minus;
        2.0 * s * (bp.a_minus * z + bp.b_minus) + s * s * bp.a_minus
    };
    let dp = |z: f64| {
        let s = z - bp.eta_plus;
        2.0 * s * (bp.a_plus * z + bp.b_plus) + s * s * bp.a_plus
    };
    let v_jump = (vm(-bp.eta_minus) - half)
        .abs()
        .max((vm(0.0) - vp(0.0)).abs())
        .max((vp(bp.eta_plus) + half).abs());
    let d1_jump = dm(-bp.eta_minus)
        .abs()
        .max((dm(0.0) - dp(0.0)).abs())
        .max(dp(bp.eta_plus).abs());

    let cbrt = bp.beta.cbrt();
    // exact suprema of the cubic family: |v''| <= max(2C eta_-, c eta_+ / 2),
    // |v'| <= max(C eta_-^2, c eta_+^2 / 4) = O(beta^(2/3))
    let smallness_constant = 2.0 * bp.big_c * bp.alpha_minus
        + bp.c / 2.0 * bp.alpha_plus
        + bp.big_c * bp.alpha_minus * bp.alpha_minus
        + bp.c / 4.0 * bp.alpha_plus * bp.alpha_plus;
    let smallness_ok = max_d1 + max_d2 <= smallness_constant * cbrt * (1.0 + 1e-12);

    let jump_tol = 1e-10 * cbrt;
    let bound_violation = (max_abs_v - half).max(0.0);
    let passed = bound_violation <= 1e-12 * half.max(1.0)
        && v_jump < jump_tol
        && d1_jump < jump_tol
        && d2_err < 1e-12 * (2.0 * bp.big_c * bp.eta_minus).max(1e-300)
        && (bp.beta > 1.0 || smallness_ok);
    BarrierReport {
        max_abs_v,
        bound_violation,
        v_jump_at_breaks: v_jump,
        d1_jump_at_breaks: d1_jump,
        d2_equality_error: d2_err,
        max_abs_d1: max_d1,
        max_abs_d2: max_d2,
        smallness_constant,
        smallness_ok,
        passed,
    }
}

/// Scale-free width alpha_- + alpha_+ of the construction whose left side
/// has curvature slope `left` and right side `right`:
/// 4 left a_-^2 = right a_+^2, (right/6) a_+^3 + (2 left/3) a_-^3 = 1.
fn scale_free_width(left: f64, right: f64) -> f64 {
    let r = (right / (4.0 * left)).sqrt();
    let denom = right / 6.0 + 2.0 * left / 3.0 * r * r * r;
    let ap = (1.0 / denom).cbrt();
    r * ap + ap
}

/// Lower/upper width predictions for the superconducting band around a zero
/// curve, from the (c, C) construction and its role-swapped counterpart.
pub fn width_bracket(c: f64, big_c: f64, beta: f64) -> Result<(f64, f64)> {
    if !(c > 0.0 && big_c >= c) {
        return Err(Error::InvalidBounds { c, big_c });
    }
    if !(beta > 0.0) {
        return Err(Error::BetaOutOfRange {
            beta,
            limit: f64::INFINITY,
        });
    }
    let cbrt = beta.cbrt();
    let w1 = scale_free_width(big_c, c) * cbrt; // matches build_barrier(c, C)
    let w2 = scale_free_width(c, big_c) * cbrt; // mirror construction
    Ok((w1.min(w2), w1.max(w2)))
}

/// Estimate (c, C) = (min, max) of |dH/ds| over a collar of each zero of an
/// axisymmetric field, s being meridian arc length. Returns one triple
/// (phi_zero, c, C) per sign change of H.
pub fn collar_bounds_1d(
    phi: &[f64],
    gamma: &[f64],
    h_field: &[f64],
    collar: f64,
) -> Vec<(f64, f64, f64)> {
    let n = phi.len();
    let dh = crate::grid::deriv5(h_field, phi[1] - phi[0]);
    let mut out = Vec::new();
    for i in 0..n - 1 {
        if h_field[i] == 0.0 || h_field[i].signum() == h_field[i + 1].signum() {
            continue;
        }
        let t = h_field[i] / (h_field[i] - h_field[i + 1]);
        let zero = phi[i] + t * (phi[i + 1] - phi[i]);
        let mut cmin = f64::INFINITY;
        let mut cmax = 0.0f64;
        for j in 0..n {
            // |dH/ds| = |dH/dphi| / gamma within the collar
            if (phi[j] - zero).abs() * gamma[j] <= collar {
                let slope = (dh[j] / gamma[j]).abs();
                cmin = cmin.min(slope);
                cmax = cmax.max(slope);
            }
        }
        if cmin.is_finite() && cmax > 0.0 {
            out.push((zero, cmin.max(1e-12), cmax));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_alphas_at_equal_bounds() {
        let bp = build_barrier(0.5, 0.5, 1e-3).unwrap();
        assert!((bp.alpha_minus - 1.0).abs() < 1e-12);
        assert!((bp.alpha_plus - 2.0).abs() < 1e-12);
        assert!((bp.eta_minus - 0.1).abs() < 1e-12);
        assert!((bp.eta_plus - 0.2).abs() < 1e-12);
    }

    #[test]
    fn defining_equations_hold() {
        for &(c, big_c, beta) in &[(0.5, 0.5, 1e-3), (0.3, 1.7, 1e-2), (1.0, 4.0, 1e-6)] {
            let bp = build_barrier(c, big_c, beta).unwrap();
            // (c/6) eta_+^3 + (2C/3) eta_-^3 = beta
            let lhs = c / 6.0 * bp.eta_plus.powi(3) + 2.0 * big_c / 3.0 * bp.eta_minus.powi(3);
            assert!((lhs - beta).abs() < 1e-12 * beta, "{lhs} vs {beta}");
            // 4C alpha_-^2 = c alpha_+^2
            let balance = 4.0 * big_c * bp.alpha_minus.powi(2) - c * bp.alpha_plus.powi(2);
            assert!(balance.abs() < 1e-12);
        }
    }

    #[test]
    fn cube_root_homogeneity() {
        let b1 = build_barrier(0.7, 1.3, 1e-4).unwrap();
        let b8 = build_barrier(0.7, 1.3, 8e-4).unwrap();
        assert!((b8.eta_minus / b1.eta_minus - 2.0).abs() < 1e-12);
        assert!((b8.eta_plus / b1.eta_plus - 2.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_bounds_rejected() {
        assert!(matches!(
            build_barrier(0.0, 1.0, 1e-3),
            Err(Error::InvalidBounds { .. })
        ));
        assert!(matches!(
            build_barrier(2.0, 1.0, 1e-3),
            Err(Error::InvalidBounds { .. })
        ));
    }

    #[test]
    fn verify_passes_and_scales() {
        let bp = build_barrier(0.5, 0.5, 1e-3).unwrap();
        let rep = verify_barrier(&bp, 4096);
        assert!(rep.passed, "{rep:?}");
        // |v'| = O(beta^(2/3))
        let ratio = rep.max_abs_d1 / 1e-3f64.powf(2.0 / 3.0);
        assert!(ratio > 0.05 && ratio < 10.0, "ratio {ratio}");
        // homogeneity: max|v''| / beta^(1/3) identical across beta
        let r1 = verify_barrier(&build_barrier(0.5, 0.5, 1.0).unwrap(), 4096);
        let r2 = verify_barrier(&build_barrier(0.5, 0.5, 1e-6).unwrap(), 4096);
        let q1 = r1.max_abs_d2 / 1.0f64.cbrt();
        let q2 = r2.max_abs_d2 / 1e-6f64.cbrt();
        assert!((q1 - q2).abs() < 1e-9 * q1, "{q1} vs {q2}");
    }

    #[test]
    fn perturbed_coefficient_detected() {
        let mut bp = build_barrier(0.5, 0.5, 1e-3).unwrap();
        bp.b_plus += 1e-3;
        let rep = verify_barrier(&bp, 4096);
        assert!(!rep.passed);
        assert!(rep.d1_jump_at_breaks > 1e-10 || rep.v_jump_at_breaks > 1e-10);
    }

    #[test]
    fn barrier_second_derivative_dominated_by_field_band() {
        // v'' = 2Cz (z<0) and (c/2)z (z>0) sits below the admissible band
        // Cz 1_{z<0} + cz 1_{z>0} <= H
        let bp = build_barrier(0.4, 1.9, 1e-3).unwrap();
        for k in 1..200 {
            let z = -bp.eta_minus + bp.width() * k as f64 / 200.0;
            if z == 0.0 {
                continue;
            }
            let lower_envelope = if z < 0.0 { bp.big_c * z } else { bp.c * z };
            assert!(bp.eval_d2(z) <= lower_envelope + 1e-12);
        }
    }

    #[test]
    fn w2inf_membership_by_difference_quotients() {
        let bp = build_barrier(0.5, 1.5, 1e-3).unwrap();
        let n = 20000;
        let lo = -2.0 * bp.eta_minus;
        let hi = 2.0 * bp.eta_plus;
        let dz = (hi - lo) / n as f64;
        let vals: Vec<f64> = (0..=n).map(|k| bp.eval(lo + k as f64 * dz)).collect();
        let bound = 2.0 * bp.big_c * bp.eta_minus + bp.c * bp.eta_plus;
        for w in vals.windows(3) {
            let dq = (w[2] - 2.0 * w[1] + w[0]) / (dz * dz);
            assert!(dq.abs() <= bound * 1.2 + 1e-9, "second difference {dq}");
        }
    }

    #[test]
    fn width_bracket_contains_equal_bound_width() {
        let (lo, hi) = width_bracket(1.0, 1.0, 1e-3).unwrap();
        // c = C = 1: alpha_- = 2^(-1/3), alpha_+ = 2 alpha_-, width = 3 * 2^(-1/3) beta^(1/3)
        let w = 3.0 * 2.0f64.powf(-1.0 / 3.0) * 1e-1;
        assert!((lo - w).abs() < 1e-12 && (hi - w).abs() < 1e-12);
        // swapping which side is steeper mirrors the pair, so the bracket is
        // symmetric in the roles and nontrivial when c < C
        let (lo2, hi2) = width_bracket(0.5, 2.0, 1e-3).unwrap();
        assert!(lo2 < hi2);
        let b = build_barrier(0.5, 2.0, 1e-3).unwrap();
        assert!(b.width() >= lo2 - 1e-15 && b.width() <= hi2 + 1e-15);
    }

    #[test]
    fn collar_bounds_for_cos_field() {
        let n = 1024;
        let phi: Vec<f64> = (0..n).map(|i| std::f64::consts::PI * i as f64 / (n - 1) as f64).collect();
        let gamma = vec![1.0; n];
        let h: Vec<f64> = phi.iter().map(|p| p.cos()).collect();
        let zeros = collar_bounds_1d(&phi, &gamma, &h, 0.2);
        assert_eq!(zeros.len(), 1);
        let (z, c, big_c) = zeros[0];
        assert!((z - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
        // |dH/ds| = sin(phi) in [cos(0.2), 1] on the collar
        assert!(c > 0.97 && big_c <= 1.0 + 1e-6, "c={c} C={big_c}");
    }
}
