//! The axisymmetric two-sided obstacle problem.
//!
//! Two independent routes to the same solution:
//! * [`solve_regime`] builds the solution semi-analytically from the
//!   level-set integrals, dispatching on beta against the critical gaps
//!   (one interval / two intervals with a frozen piece / three intervals).
//! * [`solve_pgs_1d`] minimizes the discretized functional
//!   2 pi sum (rho/gamma)_{i+1/2} ((v_{i+1}-v_i)/h)^2 h + 2 a'_i v_i h
//!   subject to |v_i| <= beta/2 by projected relaxation sweeps with
//!   pointwise clamping and mirror ghost nodes at the poles.
//!
//! Solutions are normalized so the lower obstacle -beta/2 is attained.

use crate::error::{Error, Result};
use crate::fields::{
    self, critical_data, derive_fields, level_integrand, level_points, AxiPotential, FieldPair,
    LevelSet, PotentialShape,
};
use crate::grid::{self, CubicTable};
use crate::surface::RevolutionSurface;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Vortexless,
    OneComponent,
    TwoComponentFrozen { mirrored: bool },
    ThreeComponent,
}

impl Regime {
    pub fn tag(&self) -> String {
        match self {
            Regime::Vortexless => "vortexless".into(),
            Regime::OneComponent => "one-component".into(),
            Regime::TwoComponentFrozen { mirrored: false } => "two-component-frozen".into(),
            Regime::TwoComponentFrozen { mirrored: true } => "two-component-frozen-mirrored".into(),
            Regime::ThreeComponent => "three-component".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Profile1D {
    pub v: Vec<f64>,
    pub beta: f64,
    /// Sorted node indices where v = +beta/2 within eps_active.
    pub active_plus: Vec<usize>,
    pub active_minus: Vec<usize>,
    pub regime: Regime,
    /// Root parameters used by the construction: (alpha), (alpha*, alpha)
    /// or (alpha1, alpha2, alpha3); empty for relaxation solves.
    pub alphas: Vec<f64>,
    pub eps_active: f64,
}

impl Profile1D {
    pub fn n(&self) -> usize {
        self.v.len()
    }
    pub fn h(&self) -> f64 {
        PI / (self.n() - 1) as f64
    }
    pub fn phi(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }
}

fn classify_active(v: &[f64], beta: f64, eps: f64) -> (Vec<usize>, Vec<usize>) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (i, &val) in v.iter().enumerate() {
        if beta / 2.0 - val <= eps {
            plus.push(i);
        } else if val + beta / 2.0 <= eps {
            minus.push(i);
        }
    }
    (plus, minus)
}

fn default_eps_active(h: f64, beta_c: f64) -> f64 {
    10.0 * h * h * beta_c
}

/// One monotone-construction segment: integrate (a - alpha) gamma / rho from
/// `start_x` (value `start_val`) across the grid nodes up to `end_x`, then
/// remove the O(h^4) cumulative drift so the segment ends exactly at
/// `end_val`.
#[allow(clippy::too_many_arguments)]
fn fill_ramp(
    v: &mut [f64],
    a: &AxiPotential,
    s: &RevolutionSurface,
    alpha: f64,
    start_x: f64,
    start_val: f64,
    end_x: f64,
    end_val: f64,
) {
    let h = s.h();
    let i0 = (start_x / h).floor() as usize + 1; // first node strictly inside
    let i1 = (end_x / h).ceil() as usize; // first node at/after end
    let f = |x: f64| level_integrand(a, s, alpha, x);
    let mut acc = start_val;
    let mut prev_x = start_x;
    let mut idx = Vec::new();
    for i in i0..i1.min(v.len()) {
        let x = i as f64 * h;
        if x >= end_x {
            break;
        }
        acc += grid::quad(f, prev_x, x, 4);
        v[i] = acc;
        idx.push(i);
        prev_x = x;
    }
    let total = acc + grid::quad(f, prev_x, end_x, 4);
    // linear-in-arc drift correction, O(h^4) in size
    let drift = total - end_val;
    let span = end_x - start_x;
    for &i in &idx {
        let t = (i as f64 * h - start_x) / span;
        v[i] -= drift * t;
    }
}

/// Semi-analytic solution of the free-boundary problem on (0, pi).
pub fn solve_regime(
    a: &AxiPotential,
    s: &RevolutionSurface,
    f: &FieldPair,
    beta: f64,
) -> Result<Profile1D> {
    let beta_c = f.beta_c();
    if !(beta > 0.0 && beta < beta_c) {
        return Err(Error::BetaOutOfRange {
            beta,
            limit: beta_c,
        });
    }
    let n = s.n();
    let h = s.h();
    let eps = default_eps_active(h, beta_c);

    let cd = if a.is_triple() {
        Some(critical_data(a, s)?)
    } else {
        None
    };

    let mut v = vec![0.0; n];
    let set = |v: &mut [f64], lo_x: f64, hi_x: f64, val: f64| {
        // a plateau shorter than one cell may contain no grid node
        let i0 = (lo_x / h).ceil() as usize;
        let i1 = ((hi_x / h).floor() as usize).min(v.len() - 1);
        if i0 <= i1 {
            for x in v[i0..=i1].iter_mut() {
                *x = val;
            }
        }
    };

    let (regime, alphas) = match cd {
        // Case 1 (also the whole range for single-bump potentials):
        // one interval, v rises from -beta/2 to +beta/2 across it.
        Some(ref cd) if beta < cd.beta1 => {
            if beta >= cd.beta2 {
                build_case2(a, s, cd, beta, &mut v, &set)?
            } else {
                build_case3(a, s, cd, beta, &mut v, &set)?
            }
        }
        _ => {
            let hi_alpha = match (cd, a.shape()) {
                (Some(cd), _) => cd.alpha_star,
                (None, PotentialShape::SingleBump { a1, .. }) => *a1,
                (None, PotentialShape::TripleZero { .. }) => unreachable!(),
            };
            let lo_alpha = 1e-14 * a.a_max();
            let root = grid::bisect(
                |al| fields::integral_i(a, s, al).unwrap_or(f64::NAN) - beta,
                lo_alpha,
                hi_alpha * (1.0 - 1e-12),
                1e-15,
            )
            .map_err(|_| Error::RootNotBracketed(format!("I(alpha) = {beta}")))?;
            let ls = level_points(a, root)?;
            let (phi_minus, phi_plus) = ls.outer();
            set(&mut v, 0.0, phi_minus, -beta / 2.0);
            fill_ramp(&mut v, a, s, root, phi_minus, -beta / 2.0, phi_plus, beta / 2.0);
            set(&mut v, phi_plus, PI, beta / 2.0);
            (Regime::OneComponent, vec![root])
        }
    };

    let (active_plus, active_minus) = classify_active(&v, beta, eps);
    Ok(Profile1D {
        v,
        beta,
        active_plus,
        active_minus,
        regime,
        alphas,
        eps_active: eps,
    })
}

type SetFn<'a> = &'a dyn Fn(&mut [f64], f64, f64, f64);

/// Case 2, beta in [beta2*, beta1*): two intervals, one frozen.
fn build_case2(
    a: &AxiPotential,
    s: &RevolutionSurface,
    cd: &fields::CriticalData,
    beta: f64,
    v: &mut [f64],
    set: SetFn,
) -> Result<(Regime, Vec<f64>)> {
    let a_top = match a.shape() {
        PotentialShape::TripleZero { vals, .. } => vals[2],
        _ => unreachable!(),
    };
    let star = level_points(a, cd.alpha_star)?;
    let (pm_s, pp_s, mm_s, mp_s) = match star {
        LevelSet::Four {
            phi_minus,
            psi_plus,
            psi_minus,
            phi_plus,
        } => (phi_minus, psi_plus, psi_minus, phi_plus),
        _ => unreachable!(),
    };
    let _ = pp_s;
    if cd.minus_is_min {
        // frozen piece on the left, v = -beta/2 on its whole boundary;
        // the beta-dependent interval solves I+(alpha) = beta, alpha > alpha*
        let root = grid::bisect(
            |al| {
                let ls = level_points(a, al).unwrap();
                let (lo, hi) = match ls {
                    LevelSet::Four {
                        psi_minus, phi_plus, ..
                    } => (psi_minus, phi_plus),
                    LevelSet::UpperTwo { psi_minus, phi_plus } => (psi_minus, phi_plus),
                    LevelSet::Two { .. } => return f64::NAN,
                };
                let cells = (((hi - lo) / s.h()).ceil() as usize * 2).max(32);
                grid::quad(|x| level_integrand(a, s, al, x), lo, hi, cells) - beta
            },
            cd.alpha_star * (1.0 + 1e-12),
            a_top * (1.0 - 1e-9),
            1e-15,
        )
        .map_err(|_| Error::RootNotBracketed(format!("I+(alpha) = {beta}")))?;
        let (psi_minus, phi_plus) = match level_points(a, root)? {
            LevelSet::Four {
                psi_minus, phi_plus, ..
            } => (psi_minus, phi_plus),
            LevelSet::UpperTwo { psi_minus, phi_plus } => (psi_minus, phi_plus),
            _ => unreachable!(),
        };
        set(v, 0.0, pm_s, -beta / 2.0);
        fill_ramp(v, a, s, cd.alpha_star, pm_s, -beta / 2.0, mm_s, -beta / 2.0);
        set(v, mm_s, psi_minus, -beta / 2.0);
        fill_ramp(v, a, s, root, psi_minus, -beta / 2.0, phi_plus, beta / 2.0);
        set(v, phi_plus, PI, beta / 2.0);
        Ok((
            Regime::TwoComponentFrozen { mirrored: false },
            vec![cd.alpha_star, root],
        ))
    } else {
        // mirrored layout: frozen piece on the right, boundary value +beta/2;
        // the beta-dependent interval solves I-(alpha) = beta, alpha > alpha*
        let a1 = match a.shape() {
            PotentialShape::TripleZero { vals, .. } => vals[0],
            _ => unreachable!(),
        };
        let root = grid::bisect(
            |al| {
                let ls = level_points(a, al).unwrap();
                let (lo, hi) = match ls {
                    LevelSet::Four {
                        phi_minus, psi_plus, ..
                    } => (phi_minus, psi_plus),
                    _ => return f64::NAN,
                };
                let cells = (((hi - lo) / s.h()).ceil() as usize * 2).max(32);
                grid::quad(|x| level_integrand(a, s, al, x), lo, hi, cells) - beta
            },
            cd.alpha_star * (1.0 + 1e-12),
            a1 * (1.0 - 1e-9),
            1e-15,
        )
        .map_err(|_| Error::RootNotBracketed(format!("I-(alpha) = {beta}")))?;
        let (phi_minus, psi_plus) = match level_points(a, root)? {
            LevelSet::Four {
                phi_minus, psi_plus, ..
            } => (phi_minus, psi_plus),
            _ => unreachable!(),
        };
        set(v, 0.0, phi_minus, -beta / 2.0);
        fill_ramp(v, a, s, root, phi_minus, -beta / 2.0, psi_plus, beta / 2.0);
        set(v, psi_plus, pp_s, beta / 2.0);
        fill_ramp(v, a, s, cd.alpha_star, pp_s, beta / 2.0, mp_s, beta / 2.0);
        set(v, mp_s, PI, beta / 2.0);
        Ok((
            Regime::TwoComponentFrozen { mirrored: true },
            vec![cd.alpha_star, root],
        ))
    }
}

/// Case 3, beta in (0, beta2*): three intervals from the roots of
/// I-(alpha1) = J(alpha2) = I+(alpha3) = beta.
fn build_case3(
    a: &AxiPotential,
    s: &RevolutionSurface,
    cd: &fields::CriticalData,
    beta: f64,
    v: &mut [f64],
    set: SetFn,
) -> Result<(Regime, Vec<f64>)> {
    let (a1, a2, a3) = match a.shape() {
        PotentialShape::TripleZero { vals, .. } => (vals[0], vals[1], vals[2]),
        _ => unreachable!(),
    };
    let ij = |al: f64| fields::integrals_ij(a, s, al);
    let alpha1 = grid::bisect(
        |al| ij(al).map(|t| t.0).unwrap_or(f64::NAN) - beta,
        cd.alpha_star,
        a1 * (1.0 - 1e-9) + a2 * 1e-9,
        1e-15,
    )
    .map_err(|_| Error::RootNotBracketed(format!("I-(alpha) = {beta}")))?;
    let alpha2 = grid::bisect(
        |al| ij(al).map(|t| t.2).unwrap_or(f64::NAN) - beta,
        a2 * (1.0 - 1e-9) + a1 * 1e-9,
        cd.alpha_star,
        1e-15,
    )
    .map_err(|_| Error::RootNotBracketed(format!("J(alpha) = {beta}")))?;
    let alpha3 = grid::bisect(
        |al| {
            let ls = level_points(a, al).unwrap();
            let (lo, hi) = match ls {
                LevelSet::Four {
                    psi_minus, phi_plus, ..
                } => (psi_minus, phi_plus),
                LevelSet::UpperTwo { psi_minus, phi_plus } => (psi_minus, phi_plus),
                LevelSet::Two { .. } => return f64::NAN,
            };
            let cells = (((hi - lo) / s.h()).ceil() as usize * 2).max(32);
            grid::quad(|x| level_integrand(a, s, al, x), lo, hi, cells) - beta
        },
        cd.alpha_star,
        a3 * (1.0 - 1e-9),
        1e-15,
    )
    .map_err(|_| Error::RootNotBracketed(format!("I+(alpha) = {beta}")))?;

    let (pm1, pp1) = match level_points(a, alpha1)? {
        LevelSet::Four {
            phi_minus, psi_plus, ..
        } => (phi_minus, psi_plus),
        _ => unreachable!(),
    };
    let (pp2, mm2) = match level_points(a, alpha2)? {
        LevelSet::Four {
            psi_plus, psi_minus, ..
        } => (psi_plus, psi_minus),
        _ => unreachable!(),
    };
    let (mm3, mp3) = match level_points(a, alpha3)? {
        LevelSet::Four {
            psi_minus, phi_plus, ..
        } => (psi_minus, phi_plus),
        LevelSet::UpperTwo { psi_minus, phi_plus } => (psi_minus, phi_plus),
        _ => unreachable!(),
    };

    set(v, 0.0, pm1, -beta / 2.0);
    fill_ramp(v, a, s, alpha1, pm1, -beta / 2.0, pp1, beta / 2.0);
    set(v, pp1, pp2, beta / 2.0);
    fill_ramp(v, a, s, alpha2, pp2, beta / 2.0, mm2, -beta / 2.0);
    set(v, mm2, mm3, -beta / 2.0);
    fill_ramp(v, a, s, alpha3, mm3, -beta / 2.0, mp3, beta / 2.0);
    set(v, mp3, PI, beta / 2.0);
    Ok((Regime::ThreeComponent, vec![alpha1, alpha2, alpha3]))
}

/// Options for the projected relaxation solver.
#[derive(Debug, Clone)]
pub struct Pgs1dOpts {
    pub tol: f64,
    pub max_sweeps: usize,
    /// Relaxation factor in (0, 2); 1.0 is plain projected Gauss-Seidel.
    pub omega: f64,
    /// Initial iterate; defaults to clamp(*F - mean) when absent.
    pub initial: Option<Vec<f64>>,
    pub eps_active: Option<f64>,
}

impl Default for Pgs1dOpts {
    fn default() -> Self {
        Pgs1dOpts {
            tol: 1e-10,
            max_sweeps: 5_000_000,
            omega: 1.0,
            initial: None,
            eps_active: None,
        }
    }
}

/// Projected Gauss-Seidel on the discretized 1D functional.
pub fn solve_pgs_1d(
    a: &AxiPotential,
    s: &RevolutionSurface,
    beta: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<Profile1D> {
    solve_pgs_1d_with(
        a,
        s,
        beta,
        &Pgs1dOpts {
            tol,
            max_sweeps,
            ..Pgs1dOpts::default()
        },
    )
}

pub fn solve_pgs_1d_with(
    a: &AxiPotential,
    s: &RevolutionSurface,
    beta: f64,
    opts: &Pgs1dOpts,
) -> Result<Profile1D> {
    if !(beta > 0.0) || opts.tol <= 0.0 {
        return Err(Error::BetaOutOfRange {
            beta,
            limit: f64::INFINITY,
        });
    }
    let f = derive_fields(a, s)?;
    let n = s.n();
    let h = s.h();
    let bound = beta / 2.0;

    // half-node weights (rho/gamma)_{i+1/2}
    let rho_t = CubicTable::new(0.0, h, s.rho());
    let gam_t = CubicTable::new(0.0, h, s.gamma());
    let mut w_half = vec![0.0; n - 1];
    for (i, w) in w_half.iter_mut().enumerate() {
        let x = (i as f64 + 0.5) * h;
        *w = rho_t.eval(x).max(0.0) / gam_t.eval(x);
    }

    // v_i = (wl v_{i-1} + wr v_{i+1} - a'_i h^2) / (wl + wr), clamped;
    // mirror ghosts at the ends double the single interior weight.
    let mut coef_l = vec![0.0; n];
    let mut coef_r = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let (wl, wr) = if i == 0 {
            (w_half[0], w_half[0])
        } else if i == n - 1 {
            (w_half[n - 2], w_half[n - 2])
        } else {
            (w_half[i - 1], w_half[i])
        };
        let inv = 1.0 / (wl + wr);
        coef_l[i] = wl * inv;
        coef_r[i] = wr * inv;
        rhs[i] = a.a_prime()[i] * h * h * inv;
    }

    let mut v: Vec<f64> = match &opts.initial {
        Some(init) => {
            if init.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: init.len(),
                });
            }
            init.iter().map(|&x| x.clamp(-bound, bound)).collect()
        }
        None => f.star_f().iter().map(|&x| x.clamp(-bound, bound)).collect(),
    };

    let omega = opts.omega;
    let mut sweeps = 0;
    let mut max_update = f64::INFINITY;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        max_update = 0.0;
        // left end (mirror ghost v[-1] = v[1])
        {
            let target = (coef_l[0] + coef_r[0]) * v[1] - rhs[0];
            let new = (v[0] + omega * (target - v[0])).clamp(-bound, bound);
            let d = (new - v[0]).abs();
            if d > max_update {
                max_update = d;
            }
            v[0] = new;
        }
        for i in 1..n - 1 {
            let target = coef_l[i] * v[i - 1] + coef_r[i] * v[i + 1] - rhs[i];
            let new = (v[i] + omega * (target - v[i])).clamp(-bound, bound);
            let d = (new - v[i]).abs();
            if d > max_update {
                max_update = d;
            }
            v[i] = new;
        }
        {
            let target = (coef_l[n - 1] + coef_r[n - 1]) * v[n - 2] - rhs[n - 1];
            let new = (v[n - 1] + omega * (target - v[n - 1])).clamp(-bound, bound);
            let d = (new - v[n - 1]).abs();
            if d > max_update {
                max_update = d;
            }
            v[n - 1] = new;
        }
        if max_update < opts.tol {
            break;
        }
    }
    if max_update >= opts.tol {
        return Err(Error::NotConverged {
            sweeps,
            residual: max_update,
        });
    }

    let eps = opts
        .eps_active
        .unwrap_or_else(|| default_eps_active(h, f.beta_c()));
    let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if vmax - vmin < beta - 2.0 * eps {
        // constraint inactive (beta >= beta_c): minimizer is *F + const;
        // center the band so the whole surface reads as superconducting
        let shift = -0.5 * (vmax + vmin);
        for x in v.iter_mut() {
            *x += shift;
        }
        return Ok(Profile1D {
            v,
            beta,
            active_plus: Vec::new(),
            active_minus: Vec::new(),
            regime: Regime::Vortexless,
            alphas: Vec::new(),
            eps_active: eps,
        });
    }

    let (active_plus, active_minus) = classify_active(&v, beta, eps);
    let regime = classify_regime(&v, beta, eps, &active_plus, &active_minus);
    Ok(Profile1D {
        v,
        beta,
        active_plus,
        active_minus,
        regime,
        alphas: Vec::new(),
        eps_active: eps,
    })
}

/// Cascaded coarse-to-fine initial guess: relaxation solves on grids of
/// roughly n/4 and n/2 nodes, cubically prolonged. All levels use the same
/// relaxation kernel; this only buys a warm start.
pub fn cascade_initial_guess(
    profile: &dyn Fn(f64) -> (f64, f64),
    potential: &dyn Fn(f64) -> f64,
    beta: f64,
    n: usize,
    omega: f64,
) -> Result<Vec<f64>> {
    let mut guess: Option<Vec<f64>> = None;
    for level in [n / 4 + 1, n / 2 + 1, n] {
        let s = RevolutionSurface::from_profile(profile, level)?;
        let a = AxiPotential::from_fn(&s, potential)?;
        let init = guess.map(|g| prolong(&g, level));
        if level == n {
            return Ok(init.unwrap_or_default());
        }
        let sol = solve_pgs_1d_with(
            &a,
            &s,
            beta,
            &Pgs1dOpts {
                tol: 1e-11,
                max_sweeps: 2_000_000,
                omega,
                initial: init,
                eps_active: None,
            },
        )?;
        guess = Some(sol.v);
    }
    unreachable!()
}

/// Cubic prolongation of a uniform [0, pi] table onto a finer grid.
pub fn prolong(coarse: &[f64], n_fine: usize) -> Vec<f64> {
    let hc = PI / (coarse.len() - 1) as f64;
    let t = CubicTable::new(0.0, hc, coarse);
    grid::linspace(0.0, PI, n_fine)
        .into_iter()
        .map(|x| t.eval(x))
        .collect()
}

fn classify_regime(
    v: &[f64],
    beta: f64,
    eps: f64,
    active_plus: &[usize],
    active_minus: &[usize],
) -> Regime {
    if active_plus.is_empty() && active_minus.is_empty() {
        return Regime::Vortexless;
    }
    let comps = components_from_values(v, beta, eps);
    match comps.len() {
        0 | 1 => Regime::OneComponent,
        2 => {
            // frozen piece iff one component carries the same obstacle value
            // on both sides; that side tells the orientation
            let h = PI / (v.len() - 1) as f64;
            for &(lo, hi) in &comps {
                let il = ((lo / h).floor() as usize).min(v.len() - 1);
                let ih = ((hi / h).ceil() as usize).min(v.len() - 1);
                let val_l = v[il.saturating_sub(1)];
                let val_r = v[(ih + 1).min(v.len() - 1)];
                if (val_l - val_r).abs() < beta / 2.0 {
                    return Regime::TwoComponentFrozen {
                        mirrored: val_l > 0.0,
                    };
                }
            }
            Regime::TwoComponentFrozen { mirrored: false }
        }
        _ => Regime::ThreeComponent,
    }
}

/// Maximal intervals where beta/2 - |v| > eps, endpoints refined by linear
/// interpolation.
pub fn components_1d(p: &Profile1D, eps_active: f64) -> Vec<(f64, f64)> {
    components_from_values(&p.v, p.beta, eps_active)
}

fn components_from_values(v: &[f64], beta: f64, eps: f64) -> Vec<(f64, f64)> {
    let n = v.len();
    let h = PI / (n - 1) as f64;
    let s: Vec<f64> = v.iter().map(|&x| beta / 2.0 - x.abs() - eps).collect();
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..n {
        let inside = s[i] > 0.0;
        if inside && start.is_none() {
            let x = if i == 0 {
                0.0
            } else {
                // linear interpolation of beta/2 - |v| to the eps level
                let t = s[i - 1] / (s[i - 1] - s[i]);
                (i as f64 - 1.0 + t) * h
            };
            start = Some(x);
        }
        if !inside {
            if let Some(x0) = start.take() {
                let t = s[i - 1] / (s[i - 1] - s[i]);
                let x1 = (i as f64 - 1.0 + t) * h;
                out.push((x0, x1));
            }
        }
    }
    if let Some(x0) = start {
        out.push((x0, PI));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// max |(rho gamma^-1 v' - a)'| over interior SC nodes.
    pub max_ode_residual: f64,
    /// min a' over the lower active set (must be >= 0 up to tolerance).
    pub min_aprime_on_minus: f64,
    /// max a' over the upper active set (must be <= 0 up to tolerance).
    pub max_aprime_on_plus: f64,
    pub sign_violations: usize,
}

/// Check the free-boundary conditions of the solved profile.
pub fn residual_check(p: &Profile1D, a: &AxiPotential, s: &RevolutionSurface) -> ResidualReport {
    let n = p.n();
    let h = s.h();
    let rho_t = CubicTable::new(0.0, h, s.rho());
    let gam_t = CubicTable::new(0.0, h, s.gamma());
    let a_t = CubicTable::new(0.0, h, a.samples());

    let mut active = vec![0i8; n];
    for &i in &p.active_plus {
        active[i] = 1;
    }
    for &i in &p.active_minus {
        active[i] = -1;
    }

    // flux w = (rho/gamma) v' - a at half nodes; its divided difference
    // vanishes in the superconducting region
    let mut max_res = 0.0f64;
    for i in 1..n - 1 {
        if active[i - 1] != 0 || active[i] != 0 || active[i + 1] != 0 {
            continue;
        }
        let xl = (i as f64 - 0.5) * h;
        let xr = (i as f64 + 0.5) * h;
        let wl = rho_t.eval(xl) / gam_t.eval(xl) * (p.v[i] - p.v[i - 1]) / h - a_t.eval(xl);
        let wr = rho_t.eval(xr) / gam_t.eval(xr) * (p.v[i + 1] - p.v[i]) / h - a_t.eval(xr);
        max_res = max_res.max(((wr - wl) / h).abs());
    }

    // sign conditions away from a one-node margin around the free boundary
    let scale = a.a_prime().iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let tol = 1e-8 * scale;
    let mut min_minus = f64::INFINITY;
    let mut max_plus = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for i in 0..n {
        if active[i] == 0 {
            continue;
        }
        let margin = (i > 0 && active[i - 1] != active[i]) || (i + 1 < n && active[i + 1] != active[i]);
        if margin {
            continue;
        }
        let ap = a.a_prime()[i];
        if active[i] == -1 {
            min_minus = min_minus.min(ap);
            if ap < -tol {
                violations += 1;
            }
        } else {
            max_plus = max_plus.max(ap);
            if ap > tol {
                violations += 1;
            }
        }
    }
    if min_minus == f64::INFINITY {
        min_minus = 0.0;
    }
    if max_plus == f64::NEG_INFINITY {
        max_plus = 0.0;
    }
    ResidualReport {
        max_ode_residual: max_res,
        min_aprime_on_minus: min_minus,
        max_aprime_on_plus: max_plus,
        sign_violations: violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_problem(n: usize) -> (RevolutionSurface, AxiPotential, FieldPair) {
        let s = RevolutionSurface::named("sphere", n).unwrap();
        let a = AxiPotential::from_fn(&s, |p| 0.5 * p.sin().powi(2)).unwrap();
        let f = derive_fields(&a, &s).unwrap();
        (s, a, f)
    }

    fn canonical_problem(n: usize) -> (RevolutionSurface, AxiPotential, FieldPair) {
        let s = RevolutionSurface::named("sphere", n).unwrap();
        let a = AxiPotential::from_fn(&s, fields::canonical_triple_zero).unwrap();
        let f = derive_fields(&a, &s).unwrap();
        (s, a, f)
    }

    #[test]
    fn sphere_case1_against_closed_form() {
        let (s, a, f) = sphere_problem(1024);
        let p = solve_regime(&a, &s, &f, 0.5).unwrap();
        assert_eq!(p.regime, Regime::OneComponent);
        // oracle: bisection on I(alpha) = cos(phi-) + 2 alpha ln tan(phi-/2)
        assert!((p.alphas[0] - 0.139314798159).abs() < 1e-7, "{}", p.alphas[0]);
        let comps = components_1d(&p, p.eps_active);
        assert_eq!(comps.len(), 1);
        // endpoints sit at the eps_active level of v, a sqrt(2 eps / |v''|)
        // offset inward of the true free boundary
        assert!((comps[0].0 - 0.556071615721).abs() < 2e-2);
        assert!((comps[0].1 - (PI - 0.556071615721)).abs() < 2e-2);
        // |v| <= beta/2 and both obstacles touched
        let vmin = p.v.iter().cloned().fold(f64::INFINITY, f64::min);
        let vmax = p.v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(vmax <= 0.25 + 1e-12 && vmin >= -0.25 - 1e-12);
        assert!((vmax - vmin - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sphere_regime_boundary_conditions() {
        let (s, a, f) = sphere_problem(1024);
        let p = solve_regime(&a, &s, &f, 0.3).unwrap();
        let h = s.h();
        // Neumann ends and C^1 contact at the free boundary, both O(h)
        assert!((p.v[1] - p.v[0]).abs() / h < 2.0 * h);
        assert!((p.v[p.n() - 1] - p.v[p.n() - 2]).abs() / h < 2.0 * h);
        let d1: Vec<f64> = p.v.windows(2).map(|w| (w[1] - w[0]) / h).collect();
        for i in 1..d1.len() {
            assert!((d1[i] - d1[i - 1]).abs() < 0.02, "kink at {i}");
        }
    }

    #[test]
    fn canonical_case2_frozen_interval() {
        let (s, a, f) = canonical_problem(2048);
        let beta = 0.25; // inside (beta2*, beta1*)
        let p = solve_regime(&a, &s, &f, beta).unwrap();
        assert_eq!(p.regime, Regime::TwoComponentFrozen { mirrored: false });
        let comps = components_1d(&p, p.eps_active);
        assert_eq!(comps.len(), 2);
        // frozen piece matches the alpha* level points (oracle values)
        assert!((comps[0].0 - 0.495493270823).abs() < 2e-2, "{}", comps[0].0);
        assert!((comps[0].1 - 1.941288784986).abs() < 2e-2, "{}", comps[0].1);
        // beta-dependent piece at alpha = 0.786063869250 (oracle)
        assert!((p.alphas[1] - 0.786063869250).abs() < 1e-6);
        assert!((comps[1].0 - 1.962046469).abs() < 2e-2);
        assert!((comps[1].1 - 2.646792312).abs() < 2e-2);
        // boundary value -beta/2 on both sides of the frozen piece
        let h = s.h();
        let il = (comps[0].0 / h) as usize;
        let ir = (comps[0].1 / h).ceil() as usize;
        assert!((p.v[il] + beta / 2.0).abs() <= 2.0 * p.eps_active);
        assert!((p.v[ir] + beta / 2.0).abs() <= 2.0 * p.eps_active);
    }

    #[test]
    fn canonical_case3_three_intervals() {
        let (s, a, f) = canonical_problem(2048);
        let p = solve_regime(&a, &s, &f, 0.15).unwrap();
        assert_eq!(p.regime, Regime::ThreeComponent);
        let comps = components_1d(&p, p.eps_active);
        assert_eq!(comps.len(), 3);
        // oracle intervals from Brent + adaptive quadrature
        let oracle = [
            (0.538704861, 1.114509050),
            (1.222538770, 1.885902967),
            (2.024743652, 2.591848180),
        ];
        for ((lo, hi), (olo, ohi)) in comps.iter().zip(oracle) {
            assert!((lo - olo).abs() < 2e-2 && (hi - ohi).abs() < 2e-2);
        }
        // v monotone on each component
        for &(lo, hi) in &comps {
            let il = (lo / s.h()).ceil() as usize + 1;
            let ir = (hi / s.h()).floor() as usize;
            let d: Vec<f64> = p.v[il..=ir].windows(2).map(|w| w[1] - w[0]).collect();
            let pos = d.iter().filter(|&&x| x > 0.0).count();
            assert!(pos == 0 || pos == d.len(), "not monotone on ({lo},{hi})");
        }
    }

    #[test]
    fn beta_out_of_range() {
        let (s, a, f) = sphere_problem(256);
        assert!(matches!(
            solve_regime(&a, &s, &f, 0.0),
            Err(Error::BetaOutOfRange { .. })
        ));
        assert!(matches!(
            solve_regime(&a, &s, &f, 1.5),
            Err(Error::BetaOutOfRange { .. })
        ));
    }

    #[test]
    fn pgs_matches_regime_on_sphere() {
        let (s, a, f) = sphere_problem(512);
        let exact = solve_regime(&a, &s, &f, 0.5).unwrap();
        let pgs = solve_pgs_1d_with(
            &a,
            &s,
            0.5,
            &Pgs1dOpts {
                tol: 1e-11,
                omega: 1.9,
                ..Pgs1dOpts::default()
            },
        )
        .unwrap();
        let h = s.h();
        let sup = exact
            .v
            .iter()
            .zip(&pgs.v)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(sup < 10.0 * h * h, "sup {sup} vs {}", 10.0 * h * h);
    }

    #[test]
    fn pgs_at_beta_c_recovers_star_f() {
        let (s, a, f) = sphere_problem(512);
        let p = solve_pgs_1d_with(
            &a,
            &s,
            f.beta_c(),
            &Pgs1dOpts {
                tol: 1e-12,
                omega: 1.9,
                ..Pgs1dOpts::default()
            },
        )
        .unwrap();
        // v = *F + const with max v = beta/2; compare after aligning max
        let vmax = p.v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let fmax = f.star_f().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sup = p
            .v
            .iter()
            .zip(f.star_f())
            .map(|(v, sf)| ((v - vmax) - (sf - fmax)).abs())
            .fold(0.0f64, f64::max);
        assert!(sup < 10.0 * s.h() * s.h(), "sup {sup}");
        // at beta = beta_c the solution touches the obstacles at the poles
        // only; the eps-level band covers all but two small caps
        let comps = components_1d(&p, p.eps_active);
        assert_eq!(comps.len(), 1);
        assert!(comps[0].0 < 0.08 && comps[0].1 > PI - 0.08);
    }

    #[test]
    fn pgs_not_converged_in_one_sweep() {
        let (s, a, _) = sphere_problem(256);
        let r = solve_pgs_1d(&a, &s, 0.5, 1e-14, 1);
        match r {
            Err(Error::NotConverged { sweeps, residual }) => {
                assert_eq!(sweeps, 1);
                assert!(residual > 0.0);
            }
            _ => panic!("expected NotConverged"),
        }
    }

    #[test]
    fn residual_check_regime_solution() {
        let (s, a, f) = sphere_problem(1024);
        let p = solve_regime(&a, &s, &f, 0.5).unwrap();
        let r = residual_check(&p, &a, &s);
        let h = s.h();
        assert!(r.max_ode_residual < 40.0 * h * h, "{}", r.max_ode_residual);
        assert_eq!(r.sign_violations, 0);
        assert!(r.min_aprime_on_minus >= -1e-8);
        assert!(r.max_aprime_on_plus <= 1e-8);
    }

    #[test]
    fn residual_check_flags_constructed_violator() {
        let (s, a, _) = sphere_problem(512);
        // v = -beta/2 everywhere: the lower active set covers regions with a' < 0
        let beta = 0.4;
        let p = Profile1D {
            v: vec![-beta / 2.0; s.n()],
            beta,
            active_plus: Vec::new(),
            active_minus: (0..s.n()).collect(),
            regime: Regime::OneComponent,
            alphas: Vec::new(),
            eps_active: 1e-6,
        };
        let r = residual_check(&p, &a, &s);
        assert!(r.sign_violations > 0);
        assert!(r.min_aprime_on_minus < 0.0);
    }

    #[test]
    fn components_cover_everything_above_beta_c() {
        let (s, a, f) = sphere_problem(512);
        let p = solve_pgs_1d_with(
            &a,
            &s,
            1.2 * f.beta_c(),
            &Pgs1dOpts {
                tol: 1e-12,
                omega: 1.9,
                ..Pgs1dOpts::default()
            },
        )
        .unwrap();
        assert_eq!(p.regime, Regime::Vortexless);
        let comps = components_1d(&p, p.eps_active);
        assert_eq!(comps.len(), 1);
        assert!(comps[0].0 == 0.0 && comps[0].1 == PI);
    }
}
