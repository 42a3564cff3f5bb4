//! Magnetic field data derived from an axisymmetric potential a(phi).
//!
//! On a surface of revolution the induced field and its potential primitive
//! reduce to H = a' / (rho gamma) and (*F)' = a gamma / rho. The level-set
//! integrals I, I+-, J of (a - alpha) gamma / rho drive the free-boundary
//! constructions of the intermediate regimes, and their balance point
//! alpha* yields the two critical gaps beta1* >= beta2*.

use crate::error::{Error, Result};
use crate::grid::{self, CubicTable};
use crate::mesh::TriMesh;
use crate::surface::RevolutionSurface;
use std::f64::consts::PI;

/// |a| above this (relative to max a) at a pole rejects the potential.
const POLE_TOL: f64 = 1e-9;
/// Band around a critical value inside which level queries are refused.
const CRIT_BAND: f64 = 1e-12;
/// Cap on |a gamma / rho| near the poles.
const RATIO_CAP: f64 = 1e8;
/// Colatitude tolerance for all bisection root finds.
const PHI_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialShape {
    /// One interior maximum of a.
    SingleBump { phi1: f64, a1: f64 },
    /// Two maxima with a minimum between, a' sign pattern +,-,+,-
    /// and normalization a1 < a3.
    TripleZero { phi: [f64; 3], vals: [f64; 3] },
}

#[derive(Debug, Clone)]
pub struct AxiPotential {
    a: Vec<f64>,
    a_prime: Vec<f64>,
    shape: PotentialShape,
    a_max: f64,
    h: f64,
}

/// The canonical asymmetric triple-zero test potential.
pub fn canonical_triple_zero(phi: f64) -> f64 {
    let s2 = (2.0 * phi).sin();
    s2 * s2 + phi.sin().powi(2) * (0.3 - 0.1 * phi.cos())
}

impl AxiPotential {
    pub fn from_fn<F: Fn(f64) -> f64>(s: &RevolutionSurface, f: F) -> Result<Self> {
        let a: Vec<f64> = s.phi().iter().map(|&p| f(p)).collect();
        Self::from_samples(s, a)
    }

    /// Validate assumptions (a1), (a2) and classify the shape.
    pub fn from_samples(s: &RevolutionSurface, mut a: Vec<f64>) -> Result<Self> {
        let n = s.n();
        if a.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.len(),
            });
        }
        let h = s.h();
        let a_max = a.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if a_max == 0.0 {
            return Err(Error::InvalidProfile("potential vanishes identically".into()));
        }
        for &end in &[0usize, n - 1] {
            if a[end].abs() > POLE_TOL * a_max {
                return Err(Error::InvalidProfile(format!(
                    "a must vanish at the poles, a[{end}] = {}",
                    a[end]
                )));
            }
            a[end] = 0.0;
        }
        if a.iter().take(n - 1).skip(1).any(|&v| v <= 0.0) {
            return Err(Error::InvalidProfile(
                "a must be positive on interior nodes (assumption a1)".into(),
            ));
        }

        let a_prime = grid::deriv5(&a, h);
        let ap_table = CubicTable::new(0.0, h, &a_prime);

        // interior sign changes of the sampled derivative
        let mut crossings: Vec<f64> = Vec::new();
        for i in 1..n - 2 {
            let (l, r) = (a_prime[i], a_prime[i + 1]);
            if l == 0.0 {
                crossings.push(i as f64 * h);
            } else if l.signum() != r.signum() && r != 0.0 {
                let root = grid::bisect(|x| ap_table.eval(x), i as f64 * h, (i + 1) as f64 * h, PHI_TOL)?;
                crossings.push(root);
            }
        }
        let a_table = CubicTable::new(0.0, h, &a);
        let shape = match crossings.len() {
            1 => {
                if a_prime[1] <= 0.0 {
                    return Err(Error::InvalidProfile(
                        "a must increase away from phi = 0".into(),
                    ));
                }
                PotentialShape::SingleBump {
                    phi1: crossings[0],
                    a1: a_table.eval(crossings[0]),
                }
            }
            3 => {
                // sign pattern +,-,+,- required by assumption (a2)
                if a_prime[1] <= 0.0 || a_prime[n - 2] >= 0.0 {
                    return Err(Error::InvalidProfile(
                        "derivative sign pattern violates assumption (a2)".into(),
                    ));
                }
                let vals = [
                    a_table.eval(crossings[0]),
                    a_table.eval(crossings[1]),
                    a_table.eval(crossings[2]),
                ];
                if !(vals[1] < vals[0] && vals[1] < vals[2]) {
                    return Err(Error::InvalidProfile(
                        "middle critical point must be a local minimum".into(),
                    ));
                }
                if vals[0] >= vals[2] {
                    return Err(Error::InvalidProfile(format!(
                        "normalization a1 < a3 violated: a1 = {}, a3 = {}",
                        vals[0], vals[2]
                    )));
                }
                PotentialShape::TripleZero {
                    phi: [crossings[0], crossings[1], crossings[2]],
                    vals,
                }
            }
            k => {
                return Err(Error::InvalidProfile(format!(
                    "{k} interior critical points; only single-bump (1) or triple-zero (3) shapes are supported"
                )))
            }
        };

        Ok(AxiPotential {
            a,
            a_prime,
            shape,
            a_max,
            h,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.a
    }
    pub fn a_prime(&self) -> &[f64] {
        &self.a_prime
    }
    pub fn shape(&self) -> &PotentialShape {
        &self.shape
    }
    pub fn a_max(&self) -> f64 {
        self.a_max
    }
    pub fn is_triple(&self) -> bool {
        matches!(self.shape, PotentialShape::TripleZero { .. })
    }
    /// Interior critical points (phi_i, a_i).
    pub fn critical_points(&self) -> Vec<(f64, f64)> {
        match &self.shape {
            PotentialShape::SingleBump { phi1, a1 } => vec![(*phi1, *a1)],
            PotentialShape::TripleZero { phi, vals } => {
                phi.iter().copied().zip(vals.iter().copied()).collect()
            }
        }
    }

    pub fn a_at(&self, x: f64) -> f64 {
        CubicTable::new(0.0, self.h, &self.a).eval(x)
    }
    pub fn a_prime_at(&self, x: f64) -> f64 {
        CubicTable::new(0.0, self.h, &self.a_prime).eval(x)
    }
}

/// H, *F and the critical gap beta_c derived from an axisymmetric potential.
#[derive(Debug, Clone)]
pub struct FieldPair {
    h_field: Vec<f64>,
    star_f: Vec<f64>,
    beta_c: f64,
}

impl FieldPair {
    pub fn h(&self) -> &[f64] {
        &self.h_field
    }
    pub fn star_f(&self) -> &[f64] {
        &self.star_f
    }
    pub fn beta_c(&self) -> f64 {
        self.beta_c
    }
}

/// Weighted integrand (a(phi) - alpha) * gamma(phi) / rho(phi).
///
/// Level integrals never reach the poles (their endpoints satisfy a = alpha
/// with alpha > 0, hence rho > 0 there); the floor below only guards against
/// a stray evaluation underflowing to 0/0.
pub(crate) fn level_integrand(a: &AxiPotential, s: &RevolutionSurface, alpha: f64, x: f64) -> f64 {
    let rho = s.rho_at(x).max(1e-300);
    (a.a_at(x) - alpha) * s.gamma_at(x) / rho
}

/// Derive H = a'/(rho gamma), the zero-mean primitive *F of a gamma / rho,
/// and beta_c = max *F - min *F.
pub fn derive_fields(a: &AxiPotential, s: &RevolutionSurface) -> Result<FieldPair> {
    let n = s.n();
    let h = s.h();
    // H nodewise; pole values by cubic extrapolation from the interior
    let mut h_field = vec![0.0; n];
    for (i, hv) in h_field.iter_mut().enumerate().take(n - 1).skip(1) {
        *hv = a.a_prime()[i] / (s.rho()[i] * s.gamma()[i]);
    }
    h_field[0] = 3.0 * h_field[1] - 3.0 * h_field[2] + h_field[3];
    h_field[n - 1] = 3.0 * h_field[n - 2] - 3.0 * h_field[n - 3] + h_field[n - 4];

    // integrand of (*F)' with its removable singularity at the poles
    let mut g = vec![0.0; n];
    for (i, gv) in g.iter_mut().enumerate() {
        *gv = if s.rho()[i] < 1e-8 {
            a.a_prime()[i] / s.rho_prime()[i] * s.gamma()[i]
        } else {
            a.samples()[i] * s.gamma()[i] / s.rho()[i]
        };
        if !gv.is_finite() || gv.abs() > RATIO_CAP {
            return Err(Error::UnboundedRatio(*gv));
        }
    }
    let g_table = CubicTable::new(0.0, h, &g);

    // cumulative from the grid midpoint, per-cell Simpson
    let mid = n / 2;
    let mut star_f = vec![0.0; n];
    for i in mid + 1..n {
        let lo = (i - 1) as f64 * h;
        let x_m = lo + 0.5 * h;
        star_f[i] = star_f[i - 1] + h / 6.0 * (g[i - 1] + 4.0 * g_table.eval(x_m) + g[i]);
    }
    for i in (0..mid).rev() {
        let lo = i as f64 * h;
        let x_m = lo + 0.5 * h;
        star_f[i] = star_f[i + 1] - h / 6.0 * (g[i] + 4.0 * g_table.eval(x_m) + g[i + 1]);
    }
    let mean = s.integrate(&star_f)? / s.integrate(&vec![1.0; n])?;
    for v in star_f.iter_mut() {
        *v -= mean;
    }
    let max = star_f.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let min = star_f.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let beta_c = max - min;
    if beta_c <= 0.0 {
        return Err(Error::InvalidProfile("beta_c must be positive".into()));
    }
    Ok(FieldPair {
        h_field,
        star_f,
        beta_c,
    })
}

/// Labeled crossings of the level {a = alpha}.
#[derive(Debug, Clone, PartialEq)]
pub enum LevelSet {
    /// alpha in (0, a2) or below the single bump: {phi_- < phi_+}.
    Two { phi_minus: f64, phi_plus: f64 },
    /// alpha in (a2, a1): {phi_- < psi_+ < psi_- < phi_+}.
    Four {
        phi_minus: f64,
        psi_plus: f64,
        psi_minus: f64,
        phi_plus: f64,
    },
    /// alpha in (a1, a3): {psi_- < phi_+}.
    UpperTwo { psi_minus: f64, phi_plus: f64 },
}

impl LevelSet {
    pub fn crossings(&self) -> Vec<f64> {
        match self {
            LevelSet::Two { phi_minus, phi_plus } => vec![*phi_minus, *phi_plus],
            LevelSet::Four {
                phi_minus,
                psi_plus,
                psi_minus,
                phi_plus,
            } => vec![*phi_minus, *psi_plus, *psi_minus, *phi_plus],
            LevelSet::UpperTwo { psi_minus, phi_plus } => vec![*psi_minus, *phi_plus],
        }
    }
    /// Outermost pair of crossings.
    pub fn outer(&self) -> (f64, f64) {
        let c = self.crossings();
        (c[0], *c.last().unwrap())
    }
}

/// Locate the crossings of {a = alpha}, one bisection per monotone branch.
pub fn level_points(a: &AxiPotential, alpha: f64) -> Result<LevelSet> {
    let crit = a.critical_points();
    for &(_, av) in &crit {
        if (alpha - av).abs() <= CRIT_BAND * a.a_max().max(1.0) {
            return Err(Error::AlphaAtCriticalValue { alpha });
        }
    }
    let root = |lo: f64, hi: f64| grid::bisect(|x| a.a_at(x) - alpha, lo, hi, PHI_TOL);
    match a.shape() {
        PotentialShape::SingleBump { phi1, a1 } => {
            if !(alpha > 0.0 && alpha < *a1) {
                return Err(Error::BracketFailure(format!(
                    "alpha = {alpha} outside (0, {a1})"
                )));
            }
            Ok(LevelSet::Two {
                phi_minus: root(0.0, *phi1)?,
                phi_plus: root(*phi1, PI)?,
            })
        }
        PotentialShape::TripleZero { phi, vals } => {
            let [p1, p2, p3] = *phi;
            let [a1, a2, a3] = *vals;
            if !(alpha > 0.0 && alpha < a3) {
                return Err(Error::BracketFailure(format!(
                    "alpha = {alpha} outside (0, {a3})"
                )));
            }
            if alpha < a2 {
                Ok(LevelSet::Two {
                    phi_minus: root(0.0, p1)?,
                    phi_plus: root(p3, PI)?,
                })
            } else if alpha < a1 {
                Ok(LevelSet::Four {
                    phi_minus: root(0.0, p1)?,
                    psi_plus: root(p1, p2)?,
                    psi_minus: root(p2, p3)?,
                    phi_plus: root(p3, PI)?,
                })
            } else {
                Ok(LevelSet::UpperTwo {
                    psi_minus: root(p2, p3)?,
                    phi_plus: root(p3, PI)?,
                })
            }
        }
    }
}

fn quad_level(a: &AxiPotential, s: &RevolutionSurface, alpha: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let cells = (((hi - lo) / s.h()).ceil() as usize * 2).max(32);
    grid::quad(|x| level_integrand(a, s, alpha, x), lo, hi, cells)
}

/// I(alpha) over the outermost crossing pair; continuous and strictly
/// decreasing, I(0+) -> beta_c.
pub fn integral_i(a: &AxiPotential, s: &RevolutionSurface, alpha: f64) -> Result<f64> {
    let ls = level_points(a, alpha)?;
    match ls {
        LevelSet::Two { phi_minus, phi_plus } | LevelSet::Four { phi_minus, phi_plus, .. } => {
            Ok(quad_level(a, s, alpha, phi_minus, phi_plus))
        }
        LevelSet::UpperTwo { .. } => Err(Error::BracketFailure(format!(
            "I(alpha) needs alpha < a1, got {alpha}"
        ))),
    }
}

/// The weighted areas (I-, I+, J) for alpha in (a2, a1).
pub fn integrals_ij(a: &AxiPotential, s: &RevolutionSurface, alpha: f64) -> Result<(f64, f64, f64)> {
    let ls = level_points(a, alpha)?;
    match ls {
        LevelSet::Four {
            phi_minus,
            psi_plus,
            psi_minus,
            phi_plus,
        } => {
            let i_minus = quad_level(a, s, alpha, phi_minus, psi_plus);
            let i_plus = quad_level(a, s, alpha, psi_minus, phi_plus);
            let j = -quad_level(a, s, alpha, psi_plus, psi_minus);
            Ok((i_minus, i_plus, j))
        }
        _ => Err(Error::BracketFailure(format!(
            "integrals I+-/J need alpha in (a2, a1), got {alpha}"
        ))),
    }
}

/// Critical level data: alpha* where J = min(I+-), with the two critical
/// gaps beta1* = max I+-(alpha*), beta2* = min I+-(alpha*).
#[derive(Debug, Clone, Copy)]
pub struct CriticalData {
    pub alpha_star: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// True when the smaller of the two is I- (the paper's Case 2 layout).
    pub minus_is_min: bool,
    pub residual: f64,
}

pub fn critical_data(a: &AxiPotential, s: &RevolutionSurface) -> Result<CriticalData> {
    let (a1, a2) = match a.shape() {
        PotentialShape::TripleZero { vals, .. } => (vals[0], vals[1]),
        PotentialShape::SingleBump { .. } => {
            return Err(Error::BracketFailure(
                "critical alpha requires a triple-zero potential".into(),
            ))
        }
    };
    let gap = a1 - a2;
    let eps = 1e-9 * gap;
    let f = |al: f64| {
        let (im, ip, j) = integrals_ij(a, s, al).expect("alpha inside (a2, a1)");
        j - im.min(ip)
    };
    let (lo, hi) = (a2 + eps, a1 - eps);
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(Error::BracketFailure(format!(
            "J - min(I+-) does not change sign on ({lo}, {hi})"
        )));
    }
    let alpha_star = grid::bisect(f, lo, hi, 1e-15 * gap.max(1.0))?;
    let (im, ip, j) = integrals_ij(a, s, alpha_star)?;
    let beta1 = im.max(ip);
    let beta2 = im.min(ip);
    Ok(CriticalData {
        alpha_star,
        beta1,
        beta2,
        minus_is_min: im <= ip,
        residual: (j - beta2).abs(),
    })
}

/// alpha* alone (see `critical_data`).
pub fn critical_alpha(a: &AxiPotential, s: &RevolutionSurface) -> Result<f64> {
    Ok(critical_data(a, s)?.alpha_star)
}

/// (beta1*, beta2*) with beta_c > beta1* >= beta2* > 0.
pub fn critical_betas(a: &AxiPotential, s: &RevolutionSurface) -> Result<(f64, f64)> {
    let cd = critical_data(a, s)?;
    Ok((cd.beta1, cd.beta2))
}

/// A general per-vertex field with zero mesh average and its nondegeneracy
/// margin min(|H| + |grad H|).
#[derive(Debug, Clone)]
pub struct MeshField {
    values: Vec<f64>,
    nondegen_margin: f64,
}

impl MeshField {
    /// Mean-corrected field (the physical H has zero surface integral).
    pub fn new(mesh: &TriMesh, mut values: Vec<f64>) -> Result<Self> {
        let mean = mesh.mean(&values);
        for v in values.iter_mut() {
            *v -= mean;
        }
        Self::new_unnormalized(mesh, values)
    }

    /// Field taken as given, without the zero-mean shift (comparison data
    /// H + delta H is not mean-free).
    pub fn new_unnormalized(mesh: &TriMesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_vertices() {
            return Err(Error::DimensionMismatch {
                expected: mesh.n_vertices(),
                got: values.len(),
            });
        }
        let mut margin = f64::INFINITY;
        let scale = values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        for i in 0..values.len() {
            if values[i].abs() > 0.1 * scale {
                continue;
            }
            // edge-difference estimate of |grad H| near the zero set
            let mut grad = 0.0f64;
            for (j, len) in mesh.neighbors_len(i) {
                grad = grad.max((values[i] - values[j]).abs() / len);
            }
            margin = margin.min(values[i].abs() + grad);
        }
        if margin == f64::INFINITY {
            margin = scale;
        }
        Ok(MeshField {
            values,
            nondegen_margin: margin,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn nondegen_margin(&self) -> f64 {
        self.nondegen_margin
    }
    pub fn nondegenerate(&self) -> bool {
        self.nondegen_margin > 0.0
    }
}
