//! Beta sweeps and the comparative checks: monotonicity and continuity of
//! the superconducting region, the beta^(1/3) width and beta^(2/3) gradient
//! scalings, the thickness lower bound, regime transitions and freezing of
//! free-boundary pieces.

use crate::error::{Error, Result};
use crate::fields::{AxiPotential, FieldPair, MeshField};
use crate::grid;
use crate::mesh::TriMesh;
use crate::obstacle1d::{self, Pgs1dOpts, Profile1D};
use crate::obstacle2d::{self, Pgs2dOpts};
use crate::surface::RevolutionSurface;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolverKind {
    Regime,
    Pgs1d,
    Pgs2d,
}

#[derive(Debug, Clone, Serialize)]
pub enum ComponentsGeom {
    /// Storage for the axisymmetric case: (phi_lo, phi_hi) per component.
    Intervals(Vec<(f64, f64)>),
    /// Vertex sets per component on a mesh.
    VertexSets(Vec<Vec<usize>>),
}

impl ComponentsGeom {
    pub fn count(&self) -> usize {
        match self {
            ComponentsGeom::Intervals(v) => v.len(),
            ComponentsGeom::VertexSets(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub beta: f64,
    #[serde(skip)]
    pub values: Vec<f64>,
    #[serde(skip)]
    pub sc_mask: Vec<bool>,
    pub geometry: ComponentsGeom,
    pub widths: Vec<f64>,
    /// Obstacle sign just outside each component boundary piece
    /// (left, right) in 1D; (0, 0) when undefined (domain ends).
    pub boundary_sides: Vec<(i8, i8)>,
    pub max_gradient: f64,
    pub energy_f: f64,
    pub energy_e: f64,
    pub n_active_plus: usize,
    pub n_active_minus: usize,
    /// Geodesic separation between the two active sets.
    pub separation: f64,
    pub eps_active: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    /// Records sorted by ascending beta.
    pub records: Vec<SweepRecord>,
    pub provenance: SolverKind,
    pub beta_c: Option<f64>,
    /// Grid spacing (1D) or mean edge length (2D); tolerance scale.
    pub grid_h: f64,
    /// Per-beta solver failures, the sweep continues past them.
    pub errors: Vec<(f64, String)>,
}

#[derive(Debug, Clone)]
pub struct Sweep1dOpts {
    pub solver: SolverKind,
    pub tol: f64,
    pub max_sweeps: usize,
    /// None picks 2 / (1 + 4h), clamped to [1, 1.99].
    pub omega: Option<f64>,
}

impl Default for Sweep1dOpts {
    fn default() -> Self {
        Sweep1dOpts {
            solver: SolverKind::Pgs1d,
            tol: 1e-11,
            max_sweeps: 5_000_000,
            omega: None,
        }
    }
}

pub fn auto_omega(n: usize) -> f64 {
    let h = PI / (n - 1) as f64;
    (2.0 / (1.0 + 4.0 * h)).clamp(1.0, 1.99)
}

/// eps_active for component extraction: the discretization scale
/// 10 h^2 beta_c, capped by 0.01 beta so small-beta bands stay detectable
/// and the level offset of the endpoints scales with the bands themselves.
pub fn sweep_eps_active(h: f64, beta_c: f64, beta: f64) -> f64 {
    (10.0 * h * h * beta_c).min(0.01 * beta)
}

/// Solve every beta (descending, warm-starting the relaxation solver from
/// the previous solution) and collect per-beta records.
pub fn sweep_1d(
    a: &AxiPotential,
    s: &RevolutionSurface,
    f: &FieldPair,
    betas: &[f64],
    opts: &Sweep1dOpts,
) -> SweepReport {
    let mut order: Vec<f64> = betas.to_vec();
    order.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let omega = opts.omega.unwrap_or_else(|| auto_omega(s.n()));
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    for &beta in &order {
        let eps = sweep_eps_active(s.h(), f.beta_c(), beta);
        let solved = match opts.solver {
            SolverKind::Regime => obstacle1d::solve_regime(a, s, f, beta),
            _ => obstacle1d::solve_pgs_1d_with(
                a,
                s,
                beta,
                &Pgs1dOpts {
                    tol: opts.tol,
                    max_sweeps: opts.max_sweeps,
                    omega,
                    initial: warm.clone(),
                    eps_active: Some(eps),
                },
            ),
        };
        match solved {
            Ok(p) => {
                warm = Some(p.v.clone());
                records.push(record_1d(a, s, &p, eps));
            }
            Err(e) => errors.push((beta, e.to_string())),
        }
    }
    records.sort_by(|x, y| x.beta.partial_cmp(&y.beta).unwrap());
    SweepReport {
        records,
        provenance: opts.solver,
        beta_c: Some(f.beta_c()),
        grid_h: s.h(),
        errors,
    }
}

fn active_runs(active: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut mask = vec![false; n];
    for &i in active {
        mask[i] = true;
    }
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &m) in mask.iter().enumerate() {
        if m && start.is_none() {
            start = Some(i);
        }
        if !m {
            if let Some(s0) = start.take() {
                runs.push((s0, i - 1));
            }
        }
    }
    if let Some(s0) = start {
        runs.push((s0, n - 1));
    }
    runs
}

pub fn record_1d(
    a: &AxiPotential,
    s: &RevolutionSurface,
    p: &Profile1D,
    eps: f64,
) -> SweepRecord {
    let n = p.n();
    let h = s.h();
    let comps = obstacle1d::components_1d(p, eps);
    let widths: Vec<f64> = comps.iter().map(|&(lo, hi)| s.arc_length(lo, hi)).collect();

    let mut boundary_sides = Vec::new();
    for &(lo, hi) in &comps {
        let left = if lo <= 0.0 {
            0
        } else {
            let i = ((lo / h).floor() as usize).min(n - 1);
            if p.v[i] > 0.0 {
                1
            } else {
                -1
            }
        };
        let right = if hi >= PI {
            0
        } else {
            let i = ((hi / h).ceil() as usize).min(n - 1);
            if p.v[i] > 0.0 {
                1
            } else {
                -1
            }
        };
        boundary_sides.push((left, right));
    }

    // |grad V| = |v'| / gamma, sampled at half nodes
    let mut max_gradient = 0.0f64;
    for i in 0..n - 1 {
        let g = s.gamma_at((i as f64 + 0.5) * h);
        max_gradient = max_gradient.max(((p.v[i + 1] - p.v[i]) / h / g).abs());
    }

    let (energy_f, energy_e) = energies_1d(a, s, &p.v, p.beta);

    // geodesic separation between the two active sets
    let plus_runs = active_runs(&p.active_plus, n);
    let minus_runs = active_runs(&p.active_minus, n);
    let mut separation = f64::INFINITY;
    for &(a0, a1) in &plus_runs {
        for &(b0, b1) in &minus_runs {
            let gap = if a1 < b0 {
                s.arc_length(a1 as f64 * h, b0 as f64 * h)
            } else if b1 < a0 {
                s.arc_length(b1 as f64 * h, a0 as f64 * h)
            } else {
                0.0
            };
            separation = separation.min(gap);
        }
    }

    let sc_mask: Vec<bool> = p
        .v
        .iter()
        .map(|&x| p.beta / 2.0 - x.abs() > eps)
        .collect();
    SweepRecord {
        beta: p.beta,
        values: p.v.clone(),
        sc_mask,
        geometry: ComponentsGeom::Intervals(comps),
        widths,
        boundary_sides,
        max_gradient,
        energy_f,
        energy_e,
        n_active_plus: p.active_plus.len(),
        n_active_minus: p.active_minus.len(),
        separation,
        eps_active: eps,
    }
}

/// Discrete F(v) = 2 pi [sum (rho/gamma) v'^2 + 2 a' v] and
/// E(v) = 2 pi [sum (rho/gamma) v'^2 + beta sum |a' - ((rho/gamma) v')'|].
pub fn energies_1d(a: &AxiPotential, s: &RevolutionSurface, v: &[f64], beta: f64) -> (f64, f64) {
    let n = v.len();
    let h = s.h();
    let mut dirichlet = 0.0;
    let mut w_half = vec![0.0; n - 1];
    for i in 0..n - 1 {
        let x = (i as f64 + 0.5) * h;
        let w = s.rho_at(x).max(0.0) / s.gamma_at(x);
        w_half[i] = w;
        let d = (v[i + 1] - v[i]) / h;
        dirichlet += w * d * d * h;
    }
    let mut load = 0.0;
    let mut tv = 0.0;
    for i in 0..n {
        let cell = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        load += 2.0 * a.a_prime()[i] * v[i] * cell;
        let flux_div = if i == 0 || i == n - 1 {
            0.0
        } else {
            (w_half[i] * (v[i + 1] - v[i]) / h - w_half[i - 1] * (v[i] - v[i - 1]) / h) / h
        };
        tv += (a.a_prime()[i] - flux_div).abs() * cell;
    }
    (
        2.0 * PI * (dirichlet + load),
        2.0 * PI * (dirichlet + beta * tv),
    )
}

#[derive(Debug, Clone)]
pub struct Sweep2dOpts {
    pub tol: f64,
    pub max_sweeps: usize,
    pub omega: f64,
}

impl Default for Sweep2dOpts {
    fn default() -> Self {
        Sweep2dOpts {
            tol: 1e-10,
            max_sweeps: 300_000,
            omega: 1.6,
        }
    }
}

pub fn sweep_2d(
    mesh: &TriMesh,
    field: &MeshField,
    star_f: Option<&[f64]>,
    betas: &[f64],
    opts: &Sweep2dOpts,
) -> SweepReport {
    let mut order: Vec<f64> = betas.to_vec();
    order.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let beta_c = star_f.map(|sf| {
        let max = sf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = sf.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    });
    let hmesh = mesh.mean_edge_length();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    for &beta in &order {
        let eps = sweep_eps_active(hmesh, beta_c.unwrap_or(1.0), beta);
        let solved = obstacle2d::solve_pgs_2d_with(
            mesh,
            field,
            beta,
            &Pgs2dOpts {
                tol: opts.tol,
                max_sweeps: opts.max_sweeps,
                omega: opts.omega,
                initial: warm.clone(),
                star_f: star_f.map(|x| x.to_vec()),
                eps_active: Some(eps),
            },
        );
        match solved {
            Ok(sol) => {
                warm = Some(sol.v.clone());
                records.push(record_2d(mesh, field, &sol, eps));
            }
            Err(e) => errors.push((beta, e.to_string())),
        }
    }
    records.sort_by(|x, y| x.beta.partial_cmp(&y.beta).unwrap());
    SweepReport {
        records,
        provenance: SolverKind::Pgs2d,
        beta_c,
        grid_h: hmesh,
        errors,
    }
}

pub fn record_2d(
    mesh: &TriMesh,
    field: &MeshField,
    sol: &obstacle2d::MeshSolution,
    eps: f64,
) -> SweepRecord {
    let rep = obstacle2d::sc_region(mesh, sol, eps);
    let mut widths = Vec::new();
    let mut sets = Vec::new();
    for comp in &rep.components {
        // band-width estimate: area over mean boundary length
        let w = if comp.boundary_length > 0.0 {
            comp.area / (0.5 * comp.boundary_length)
        } else {
            (comp.area / PI).sqrt() * 2.0
        };
        widths.push(w);
        sets.push(comp.vertices.clone());
    }
    let boundary_sides = sets
        .iter()
        .map(|vs| component_sides_2d(mesh, sol, vs))
        .collect();

    let mut max_gradient = 0.0f64;
    for e in mesh.edges() {
        max_gradient = max_gradient.max(((sol.v[e.a] - sol.v[e.b]) / e.len).abs());
    }
    let separation = if sol.active_plus.is_empty() || sol.active_minus.is_empty() {
        f64::INFINITY
    } else {
        mesh.graph_distance(&sol.active_plus, &sol.active_minus)
    };
    let sc_mask = obstacle2d::sc_mask(sol, eps);
    SweepRecord {
        beta: sol.beta,
        values: sol.v.clone(),
        sc_mask,
        geometry: ComponentsGeom::VertexSets(sets),
        widths,
        boundary_sides,
        max_gradient,
        energy_f: obstacle2d::energy_f(mesh, field, &sol.v),
        energy_e: obstacle2d::energy_e(mesh, field, &sol.v, sol.beta),
        n_active_plus: sol.active_plus.len(),
        n_active_minus: sol.active_minus.len(),
        separation,
        eps_active: eps,
    }
}

fn component_sides_2d(mesh: &TriMesh, sol: &obstacle2d::MeshSolution, comp: &[usize]) -> (i8, i8) {
    let mut in_comp = vec![false; mesh.n_vertices()];
    for &v in comp {
        in_comp[v] = true;
    }
    let mut saw_plus = false;
    let mut saw_minus = false;
    for &v in comp {
        for (u, _) in mesh.neighbors(v) {
            if !in_comp[u] {
                if sol.v[u] > 0.0 {
                    saw_plus = true;
                } else {
                    saw_minus = true;
                }
            }
        }
    }
    match (saw_minus, saw_plus) {
        (true, true) => (-1, 1),
        (true, false) => (-1, -1),
        (false, true) => (1, 1),
        (false, false) => (0, 0),
    }
}

/// Set inclusion of SC regions along ascending beta; an empty list passes.
pub fn check_monotonicity(r: &SweepReport) -> Vec<String> {
    let mut violations = Vec::new();
    let slack_cells = 3.0;
    for pair in r.records.windows(2) {
        let (small, large) = (&pair[0], &pair[1]);
        match (&small.geometry, &large.geometry) {
            (ComponentsGeom::Intervals(cs), ComponentsGeom::Intervals(cl)) => {
                let slack = slack_cells * r.grid_h;
                for &(lo, hi) in cs {
                    let contained = cl
                        .iter()
                        .any(|&(lo2, hi2)| lo >= lo2 - slack && hi <= hi2 + slack);
                    if !contained {
                        violations.push(format!(
                            "component ({lo:.6}, {hi:.6}) at beta = {} not contained at beta = {}",
                            small.beta, large.beta
                        ));
                    }
                }
            }
            (ComponentsGeom::VertexSets(_), ComponentsGeom::VertexSets(_)) => {
                // vertex-level inclusion with a one-ring slack
                let bad = small
                    .sc_mask
                    .iter()
                    .zip(&large.sc_mask)
                    .filter(|(s, l)| **s && !**l)
                    .count();
                let boundaryish = small.sc_mask.len() / 10;
                if bad > boundaryish {
                    violations.push(format!(
                        "{bad} SC vertices at beta = {} leave SC at beta = {}",
                        small.beta, large.beta
                    ));
                }
            }
            _ => violations.push("mixed sweep geometries".into()),
        }
    }
    violations
}

/// Max over consecutive pairs of sup|V2 - V1| - (beta2 - beta1)/2 after the
/// optimal constant alignment.
pub fn check_continuity(r: &SweepReport) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for pair in r.records.windows(2) {
        let (p1, p2) = (&pair[0], &pair[1]);
        let mut dmax = f64::NEG_INFINITY;
        let mut dmin = f64::INFINITY;
        for (a, b) in p1.values.iter().zip(&p2.values) {
            let d = b - a;
            dmax = dmax.max(d);
            dmin = dmin.min(d);
        }
        let aligned_sup = 0.5 * (dmax - dmin);
        worst = worst.max(aligned_sup - 0.5 * (p2.beta - p1.beta));
    }
    if worst == f64::NEG_INFINITY {
        0.0
    } else {
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalingQuantity {
    Width,
    Gradient,
}

/// Least-squares slope of log(quantity) against log(beta) with its r^2.
pub fn fit_scaling(r: &SweepReport, quantity: ScalingQuantity) -> Result<(f64, f64)> {
    if r.records.len() < 6 {
        return Err(Error::InsufficientRange(format!(
            "need >= 6 beta samples, got {}",
            r.records.len()
        )));
    }
    let lo = r.records.first().unwrap().beta;
    let hi = r.records.last().unwrap().beta;
    if hi / lo < 99.0 {
        return Err(Error::InsufficientRange(format!(
            "betas span {:.2} decades, need >= 2",
            (hi / lo).log10()
        )));
    }
    if let Some(bc) = r.beta_c {
        if hi > 1e-2 * bc * (1.0 + 1e-9) {
            return Err(Error::InsufficientRange(format!(
                "scaling fit requires beta <= 1e-2 beta_c, got {hi}"
            )));
        }
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for rec in &r.records {
        let q = match quantity {
            ScalingQuantity::Width => rec.widths.iter().sum::<f64>(),
            ScalingQuantity::Gradient => rec.max_gradient,
        };
        if q > 0.0 {
            x.push(rec.beta.ln());
            y.push(q.ln());
        }
    }
    if x.len() < 6 {
        return Err(Error::InsufficientRange(
            "fewer than 6 usable records".into(),
        ));
    }
    let (slope, _, r2) = grid::linear_fit(&x, &y);
    Ok((slope, r2))
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessReport {
    pub ratios: Vec<(f64, f64)>,
    pub min_ratio: f64,
    pub max_over_min: f64,
}

/// separation(active+, active-) / beta^(1/3) per record.
pub fn check_thickness(r: &SweepReport) -> ThicknessReport {
    let mut ratios = Vec::new();
    for rec in &r.records {
        if rec.separation.is_finite() {
            ratios.push((rec.beta, rec.separation / rec.beta.cbrt()));
        }
    }
    let min_ratio = ratios.iter().map(|&(_, q)| q).fold(f64::INFINITY, f64::min);
    let max_ratio = ratios
        .iter()
        .map(|&(_, q)| q)
        .fold(f64::NEG_INFINITY, f64::max);
    ThicknessReport {
        min_ratio,
        max_over_min: if ratios.is_empty() {
            f64::NAN
        } else {
            max_ratio / min_ratio
        },
        ratios,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FreezeRecord {
    /// Endpoints at the top of the frozen window (1D).
    pub interval: (f64, f64),
    /// Measured window over which the endpoints stayed put.
    pub beta_lo: f64,
    pub beta_hi: f64,
    /// Obstacle value on the whole component boundary: -1 or +1.
    pub side: i8,
    /// delta = beta0/2 - max_closure V (sign-adjusted); freezing is
    /// predicted on (beta0 - delta, beta0].
    pub delta: f64,
    pub predicted_lo: f64,
    pub max_endpoint_move: f64,
}

#[derive(Clone, Copy)]
struct FreezeChain {
    cur_idx: usize,
    start_rec: usize,
    init: (f64, f64),
    max_move: f64,
}

/// Components whose endpoints stayed within `tol_move` of their position at
/// the start of the window, across consecutive betas, and whose boundary
/// carries a single obstacle value.
pub fn detect_freezing(r: &SweepReport, tol_move: f64) -> Vec<FreezeRecord> {
    let recs = &r.records;
    if recs.len() < 2 {
        return Vec::new();
    }
    let intervals = |k: usize| -> Vec<(f64, f64)> {
        match &recs[k].geometry {
            ComponentsGeom::Intervals(v) => v.clone(),
            ComponentsGeom::VertexSets(_) => Vec::new(),
        }
    };
    let mut out = Vec::new();
    let mut chains: Vec<FreezeChain> = intervals(0)
        .iter()
        .enumerate()
        .map(|(c, &iv)| FreezeChain {
            cur_idx: c,
            start_rec: 0,
            init: iv,
            max_move: 0.0,
        })
        .collect();
    for k in 1..recs.len() {
        let prev = intervals(k - 1);
        let cur = intervals(k);
        let mut next_chains: Vec<FreezeChain> = Vec::new();
        for ch in &chains {
            let (lo1, hi1) = prev[ch.cur_idx];
            // match by overlap, movement measured against the window start
            let mut matched = None;
            for (cj, &(lo2, hi2)) in cur.iter().enumerate() {
                if lo2 < hi1 && lo1 < hi2 {
                    let move_now = (lo2 - ch.init.0).abs().max((hi2 - ch.init.1).abs());
                    if move_now < tol_move {
                        matched = Some((cj, ch.max_move.max(move_now)));
                    }
                    break;
                }
            }
            match matched {
                Some((cj, mv)) => next_chains.push(FreezeChain {
                    cur_idx: cj,
                    start_rec: ch.start_rec,
                    init: ch.init,
                    max_move: mv,
                }),
                None => {
                    if k - 1 > ch.start_rec {
                        emit_freeze(r, ch.start_rec, k - 1, ch.cur_idx, ch.max_move, &mut out);
                    }
                }
            }
        }
        for (cj, &iv) in cur.iter().enumerate() {
            if !next_chains.iter().any(|c| c.cur_idx == cj) {
                next_chains.push(FreezeChain {
                    cur_idx: cj,
                    start_rec: k,
                    init: iv,
                    max_move: 0.0,
                });
            }
        }
        chains = next_chains;
    }
    let last = recs.len() - 1;
    for ch in &chains {
        if last > ch.start_rec {
            emit_freeze(r, ch.start_rec, last, ch.cur_idx, ch.max_move, &mut out);
        }
    }
    out
}

fn emit_freeze(
    r: &SweepReport,
    start: usize,
    end: usize,
    comp_idx: usize,
    max_move: f64,
    out: &mut Vec<FreezeRecord>,
) {
    let top = &r.records[end];
    let (lo, hi) = match &top.geometry {
        ComponentsGeom::Intervals(v) => v[comp_idx],
        ComponentsGeom::VertexSets(_) => return,
    };
    let (sl, sr) = top.boundary_sides[comp_idx];
    // the freezing hypothesis: one obstacle value on the whole boundary
    if sl == 0 || sl != sr {
        return;
    }
    let beta0 = top.beta;
    let n = top.values.len();
    let h = PI / (n - 1) as f64;
    let i0 = ((lo / h).floor() as usize).min(n - 1);
    let i1 = ((hi / h).ceil() as usize).min(n - 1);
    let delta = if sl < 0 {
        let m = top.values[i0..=i1]
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        beta0 / 2.0 - m
    } else {
        let m = top.values[i0..=i1].iter().cloned().fold(f64::INFINITY, f64::min);
        beta0 / 2.0 + m
    };
    if delta <= 0.0 {
        return;
    }
    out.push(FreezeRecord {
        interval: (lo, hi),
        beta_lo: r.records[start].beta,
        beta_hi: beta0,
        side: sl,
        delta,
        predicted_lo: beta0 - delta,
        max_endpoint_move: max_move,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{canonical_triple_zero, derive_fields};

    fn sphere_problem(n: usize) -> (RevolutionSurface, AxiPotential, FieldPair) {
        let s = RevolutionSurface::named("sphere", n).unwrap();
        let a = AxiPotential::from_fn(&s, |p| 0.5 * p.sin().powi(2)).unwrap();
        let f = derive_fields(&a, &s).unwrap();
        (s, a, f)
    }

    fn canonical_problem(n: usize) -> (RevolutionSurface, AxiPotential, FieldPair) {
        let s = RevolutionSurface::named("sphere", n).unwrap();
        let a = AxiPotential::from_fn(&s, canonical_triple_zero).unwrap();
        let f = derive_fields(&a, &s).unwrap();
        (s, a, f)
    }

    #[test]
    fn sphere_sweep_single_component() {
        let (s, a, f) = sphere_problem(1024);
        let betas = grid::logspace(1e-4, 0.9, 12);
        let r = sweep_1d(&a, &s, &f, &betas, &Sweep1dOpts::default());
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        assert_eq!(r.records.len(), 12);
        for rec in &r.records {
            assert_eq!(rec.geometry.count(), 1, "beta = {}", rec.beta);
        }
        assert!(check_monotonicity(&r).is_empty());
        let excess = check_continuity(&r);
        assert!(excess <= 10.0 * s.h() * s.h(), "continuity excess {excess}");
    }

    #[test]
    fn empty_sweep() {
        let (s, a, f) = sphere_problem(256);
        let r = sweep_1d(&a, &s, &f, &[], &Sweep1dOpts::default());
        assert!(r.records.is_empty() && r.errors.is_empty());
    }

    #[test]
    fn shuffled_records_flagged() {
        let (s, a, f) = sphere_problem(512);
        let betas = [0.2, 0.5, 0.8];
        let mut r = sweep_1d(&a, &s, &f, &betas, &Sweep1dOpts::default());
        assert!(check_monotonicity(&r).is_empty());
        r.records.swap(0, 2); // negative control
        let v = check_monotonicity(&r);
        assert!(!v.is_empty(), "shuffled sweep must violate inclusion");
    }

    #[test]
    fn continuity_zero_for_identical_betas() {
        let (s, a, f) = sphere_problem(512);
        let r = sweep_1d(&a, &s, &f, &[0.5, 0.5], &Sweep1dOpts::default());
        assert!(check_continuity(&r).abs() < 1e-9);
    }

    #[test]
    fn scaling_requires_range() {
        let (s, a, f) = sphere_problem(512);
        let r = sweep_1d(&a, &s, &f, &[0.2, 0.5], &Sweep1dOpts::default());
        assert!(matches!(
            fit_scaling(&r, ScalingQuantity::Width),
            Err(Error::InsufficientRange(_))
        ));
    }

    #[test]
    fn canonical_component_counts_decrease() {
        let (s, a, f) = canonical_problem(1024);
        // betas straddling beta1* = 0.2885, beta2* = 0.2246
        let betas = [0.15, 0.21, 0.25, 0.27, 0.31, 0.5];
        let r = sweep_1d(
            &a,
            &s,
            &f,
            &betas,
            &Sweep1dOpts {
                solver: SolverKind::Regime,
                ..Sweep1dOpts::default()
            },
        );
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        let counts: Vec<usize> = r.records.iter().map(|x| x.geometry.count()).collect();
        assert_eq!(counts, vec![3, 3, 2, 2, 1, 1]);
        assert!(check_monotonicity(&r).is_empty());
    }

    #[test]
    fn freezing_detected_on_canonical_window() {
        let (s, a, f) = canonical_problem(2048);
        let betas = grid::linspace(0.2286, 0.2845, 6);
        let r = sweep_1d(
            &a,
            &s,
            &f,
            &betas,
            &Sweep1dOpts {
                solver: SolverKind::Regime,
                ..Sweep1dOpts::default()
            },
        );
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        let fr = detect_freezing(&r, 3.0 * s.h());
        assert_eq!(fr.len(), 1, "{fr:?}");
        let rec = &fr[0];
        assert_eq!(rec.side, -1);
        // frozen piece matches the alpha* level points
        assert!((rec.interval.0 - 0.495493270823).abs() < 2e-2);
        assert!((rec.interval.1 - 1.941288784986).abs() < 2e-2);
        // delta = beta0 - beta2*, so the predicted window reaches beta2*
        assert!((rec.delta - (rec.beta_hi - 0.224626016035)).abs() < 1e-3);
        assert!(rec.beta_lo <= rec.predicted_lo + 0.02);
    }

    #[test]
    fn no_freezing_on_sphere() {
        let (s, a, f) = sphere_problem(1024);
        let betas = grid::linspace(0.3, 0.6, 5);
        let r = sweep_1d(&a, &s, &f, &betas, &Sweep1dOpts::default());
        let fr = detect_freezing(&r, 3.0 * s.h());
        assert!(fr.is_empty(), "{fr:?}");
    }

    #[test]
    fn minimality_probe_against_clamped_star_f() {
        let (s, a, f) = sphere_problem(512);
        for &beta in &[0.2, 0.5, 0.8] {
            let p = obstacle1d::solve_regime(&a, &s, &f, beta).unwrap();
            let (_, e_sol) = energies_1d(&a, &s, &p.v, beta);
            let clamped: Vec<f64> = f
                .star_f()
                .iter()
                .map(|&x| x.clamp(-beta / 2.0, beta / 2.0))
                .collect();
            let (_, e_clamped) = energies_1d(&a, &s, &clamped, beta);
            assert!(e_sol <= e_clamped + 1e-9, "beta {beta}");
        }
    }
}
