//! Discrete point/circle approximations of a limiting vorticity measure on
//! the unit sphere and their Green-function energy.
//!
//! The zero-mean Green's function of the sphere Laplacian is
//!     G(x, y) = -(1/4 pi) ln((1 - x.y)/2) - 1/(4 pi),
//! and the mean-field energy of a zero-average measure mu is
//!     J(mu) = beta ||mu||_TV + int int G(x, y) dmu(x) dmu(y).
//! A solved vorticity density is approximated by n_+ = n_- geodesic circles
//! of radius 1/kappa carrying mass 2 pi / h each; their Green energy tends
//! to J(mu) from the circle self-energies reproducing the beta ||mu|| term.

use crate::error::{Error, Result};
use crate::mesh::TriMesh;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Zero-mean Green's function of the unit sphere.
pub fn green_sphere(x: [f64; 3], y: [f64; 3]) -> Result<f64> {
    let t = dot(x, y);
    let u = (1.0 - t) / 2.0;
    if u < 1e-14 {
        return Err(Error::CoincidentPoints);
    }
    Ok(-u.ln() / (4.0 * PI) - 1.0 / (4.0 * PI))
}

/// G for points known to be distinct.
fn green_raw(x: [f64; 3], y: [f64; 3]) -> f64 {
    -((1.0 - dot(x, y)) / 2.0).ln() / (4.0 * PI) - 1.0 / (4.0 * PI)
}

fn geodesic(x: [f64; 3], y: [f64; 3]) -> f64 {
    dot(x, y).clamp(-1.0, 1.0).acos()
}

/// Walk a geodesic distance `rad` from `center` in the tangent direction of
/// angle `ang`.
fn offset_on_sphere(center: [f64; 3], rad: f64, ang: f64) -> [f64; 3] {
    let axis = if center[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut e1 = [
        axis[1] * center[2] - axis[2] * center[1],
        axis[2] * center[0] - axis[0] * center[2],
        axis[0] * center[1] - axis[1] * center[0],
    ];
    let n1 = dot(e1, e1).sqrt();
    for v in e1.iter_mut() {
        *v /= n1;
    }
    let e2 = [
        center[1] * e1[2] - center[2] * e1[1],
        center[2] * e1[0] - center[0] * e1[2],
        center[0] * e1[1] - center[1] * e1[0],
    ];
    let (cr, sr) = (rad.cos(), rad.sin());
    let (ca, sa) = (ang.cos(), ang.sin());
    [
        cr * center[0] + sr * (ca * e1[0] + sa * e2[0]),
        cr * center[1] + sr * (ca * e1[1] + sa * e2[1]),
        cr * center[2] + sr * (ca * e1[2] + sa * e2[2]),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct PointVortexSet {
    pub kappa: f64,
    pub h: f64,
    pub points_plus: Vec<[f64; 3]>,
    pub points_minus: Vec<[f64; 3]>,
    /// Mass carried by each circle.
    pub weight: f64,
    /// Geodesic circle radius 1/kappa.
    pub circle_radius: f64,
    pub circle_samples: usize,
}

/// Separation required between same-sign circle centers.
const SEP_FACTOR: f64 = 4.0;
/// Default number of samples per geodesic circle.
pub const DEFAULT_CIRCLE_SAMPLES: usize = 32;

/// Greedy seeded sampler: candidate vertices drawn proportionally to the
/// density, rejected when closer than 4/kappa to an accepted same-sign
/// point; the larger class is then trimmed far from the opposite support
/// so the signed masses balance exactly.
pub fn sample_measure(
    mesh: &TriMesh,
    mu_plus: &[f64],
    mu_minus: &[f64],
    kappa: f64,
    h: f64,
    seed: u64,
) -> Result<PointVortexSet> {
    let n = mesh.n_vertices();
    if mu_plus.len() != n || mu_minus.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: mu_plus.len().min(mu_minus.len()),
        });
    }
    if mu_plus.iter().chain(mu_minus.iter()).any(|&x| x < -1e-12) {
        return Err(Error::InvalidProfile("mu_+ and mu_- must be nonnegative".into()));
    }
    let mass_plus = mesh.integrate(mu_plus)?;
    let mass_minus = mesh.integrate(mu_minus)?;
    if (mass_plus - mass_minus).abs() > 1e-6 * mass_plus.max(mass_minus).max(1e-300) {
        return Err(Error::InvalidProfile(format!(
            "masses must balance: mu_+(M) = {mass_plus}, mu_-(M) = {mass_minus}"
        )));
    }
    let target = |mass: f64| (h * mass / (2.0 * PI)).round() as usize;
    let n_plus = target(mass_plus);
    let n_minus = target(mass_minus);
    if n_plus == 0 || n_minus == 0 {
        return Err(Error::InvalidProfile(format!(
            "h mu(M) / 2 pi = {:.3} rounds to zero points",
            h * mass_plus / (2.0 * PI)
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sep = SEP_FACTOR / kappa;
    let mut place = |mu: &[f64], count: usize| -> Result<Vec<[f64; 3]>> {
        // cumulative distribution over vertices weighted by density * area;
        // candidates are jittered uniformly within the vertex cell so counts
        // are not capped by the vertex budget
        let mut cdf = Vec::with_capacity(n);
        let mut acc = 0.0;
        for (m, area) in mu.iter().zip(mesh.vertex_areas()) {
            acc += m.max(0.0) * area;
            cdf.push(acc);
        }
        let total = acc;
        let mut pts: Vec<[f64; 3]> = Vec::with_capacity(count);
        let mut attempts = 0usize;
        let max_attempts = 400 * count + 1000;
        while pts.len() < count {
            attempts += 1;
            if attempts > max_attempts {
                return Err(Error::PackingFailure {
                    requested: count,
                    separation: sep,
                });
            }
            let u = rng.gen_range(0.0..total);
            let idx = cdf.partition_point(|&c| c < u).min(n - 1);
            let center = mesh.vertices()[idx];
            let r_cell = (mesh.vertex_areas()[idx] / PI).sqrt();
            let rad = r_cell * rng.gen_range(0.0f64..1.0).sqrt();
            let ang = rng.gen_range(0.0..2.0 * PI);
            let cand = offset_on_sphere(center, rad, ang);
            if pts.iter().all(|&p| geodesic(p, cand) > sep) {
                pts.push(cand);
            }
        }
        Ok(pts)
    };
    let mut points_plus = place(mu_plus, n_plus)?;
    let mut points_minus = place(mu_minus, n_minus)?;

    // balance the counts by removing points of the larger class farthest
    // from the opposite support
    while points_plus.len() != points_minus.len() {
        let (larger, other): (&mut Vec<[f64; 3]>, &Vec<[f64; 3]>) =
            if points_plus.len() > points_minus.len() {
                (&mut points_plus, &points_minus)
            } else {
                (&mut points_minus, &points_plus)
            };
        let far = larger
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| {
                let dp = other.iter().map(|&o| geodesic(**p, o)).fold(f64::INFINITY, f64::min);
                let dq = other.iter().map(|&o| geodesic(**q, o)).fold(f64::INFINITY, f64::min);
                dp.partial_cmp(&dq).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        larger.remove(far);
    }

    Ok(PointVortexSet {
        kappa,
        h,
        points_plus,
        points_minus,
        weight: 2.0 * PI / h,
        circle_radius: 1.0 / kappa,
        circle_samples: DEFAULT_CIRCLE_SAMPLES,
    })
}

impl PointVortexSet {
    /// Equally spaced samples on the geodesic circle around a center.
    pub fn circle_points(&self, center: [f64; 3]) -> Vec<[f64; 3]> {
        let r = self.circle_radius;
        let (cr, sr) = (r.cos(), r.sin());
        // orthonormal tangent frame at the center
        let axis = if center[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let mut e1 = [
            axis[1] * center[2] - axis[2] * center[1],
            axis[2] * center[0] - axis[0] * center[2],
            axis[0] * center[1] - axis[1] * center[0],
        ];
        let n1 = dot(e1, e1).sqrt();
        for v in e1.iter_mut() {
            *v /= n1;
        }
        let e2 = [
            center[1] * e1[2] - center[2] * e1[1],
            center[2] * e1[0] - center[0] * e1[2],
            center[0] * e1[1] - center[1] * e1[0],
        ];
        (0..self.circle_samples)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / self.circle_samples as f64;
                let (ct, st) = (th.cos(), th.sin());
                [
                    cr * center[0] + sr * (ct * e1[0] + st * e2[0]),
                    cr * center[1] + sr * (ct * e1[1] + st * e2[1]),
                    cr * center[2] + sr * (ct * e1[2] + st * e2[2]),
                ]
            })
            .collect()
    }

    /// Signed weak pairing sum_j sigma_j w <f>_{circle_j}.
    pub fn pair_with<F: Fn([f64; 3]) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for (sign, pts) in [(1.0, &self.points_plus), (-1.0, &self.points_minus)] {
            for &c in pts {
                let samples = self.circle_points(c);
                let mean: f64 =
                    samples.iter().map(|&p| f(p)).sum::<f64>() / samples.len() as f64;
                acc += sign * self.weight * mean;
            }
        }
        acc
    }
}

/// Double Green integral of the circle configuration, all circle pairs plus
/// the per-circle self-energy (pairwise samples excluding coincident pairs,
/// with the analytic correction for the missing diagonal).
pub fn green_energy_pvs(pvs: &PointVortexSet) -> Result<f64> {
    let mut circles: Vec<(f64, Vec<[f64; 3]>)> = Vec::new();
    for &c in &pvs.points_plus {
        circles.push((1.0, pvs.circle_points(c)));
    }
    for &c in &pvs.points_minus {
        circles.push((-1.0, pvs.circle_points(c)));
    }
    let m = pvs.circle_samples as f64;
    let w = pvs.weight;
    let mut total = 0.0;
    for (i, (si, pi)) in circles.iter().enumerate() {
        for (sj, pj) in circles.iter().skip(i + 1) {
            let mut acc = 0.0;
            for &p in pi {
                for &q in pj {
                    acc += green_sphere(p, q)?;
                }
            }
            total += 2.0 * si * sj * w * w * acc / (m * m);
        }
        // self-energy: off-diagonal sample pairs ...
        let mut acc = 0.0;
        for (k, &p) in pi.iter().enumerate() {
            for &q in pi.iter().skip(k + 1) {
                acc += green_sphere(p, q)?;
            }
        }
        total += si * si * w * w * 2.0 * acc / (m * m);
        // ... plus the missing-diagonal correction. A uniform circle of
        // geodesic radius eps has self-energy
        //   w^2 [ (1/2 pi) ln(1/eps) + (ln 4 - 1)/(4 pi) ] + O(eps^2),
        // while the m-sample off-diagonal sum falls short by
        //   (w^2/m) [ (1/2 pi) ln(m/eps) + (ln 4 - 1)/(4 pi) ]
        // (prod_k 2 sin(pi k/m) = m takes care of the log part).
        total += w * w / m
            * ((m / pvs.circle_radius).ln() / (2.0 * PI)
                + (4.0f64.ln() - 1.0) / (4.0 * PI));
    }
    Ok(total)
}

/// Worker count for the pair sums, capped by SC_OBSTACLE_THREADS (default 1).
pub fn worker_count() -> usize {
    std::env::var("SC_OBSTACLE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(1)
        .clamp(1, 64)
}

/// J(mu) = beta ||mu||_TV + sum_ij G(x_i, x_j) mu_i mu_j m_i m_j for a
/// per-vertex density, the diagonal replaced by the flat-disk cell value.
///
/// The pair sum is split into fixed-size row chunks reduced in chunk order,
/// so the result is bit-identical for any worker count.
pub fn energy_j_density(mesh: &TriMesh, mu: &[f64], beta: f64) -> Result<f64> {
    let n = mesh.n_vertices();
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: mu.len(),
        });
    }
    let tv: f64 = mu
        .iter()
        .zip(mesh.vertex_areas())
        .map(|(x, m)| x.abs() * m)
        .sum();
    let active: Vec<usize> = (0..n).filter(|&i| mu[i] != 0.0).collect();
    let charge: Vec<f64> = active
        .iter()
        .map(|&i| mu[i] * mesh.vertex_areas()[i])
        .collect();

    let row_chunk = 256usize;
    let n_chunks = active.len().div_ceil(row_chunk);
    let mut partials = vec![0.0f64; n_chunks];
    let chunk_sum = |c: usize| -> f64 {
        let lo = c * row_chunk;
        let hi = (lo + row_chunk).min(active.len());
        let mut acc = 0.0;
        for ai in lo..hi {
            let i = active[ai];
            let qi = charge[ai];
            for (aj, &j) in active.iter().enumerate().skip(ai + 1) {
                acc += 2.0 * qi * charge[aj] * green_raw(mesh.vertices()[i], mesh.vertices()[j]);
            }
            // diagonal: mean of G over a flat disk of the cell area
            // (E[ln |x - y|] over a disk of radius r is ln r - 1/4)
            let r_cell = (mesh.vertex_areas()[i] / PI).sqrt();
            let g_self = -(r_cell.ln() - 0.25) / (2.0 * PI) + (4.0f64.ln() - 1.0) / (4.0 * PI);
            acc += qi * qi * g_self;
        }
        acc
    };
    let workers = worker_count().min(n_chunks.max(1));
    if workers <= 1 {
        for (c, p) in partials.iter_mut().enumerate() {
            *p = chunk_sum(c);
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results: Vec<std::sync::Mutex<Vec<(usize, f64)>>> =
            (0..workers).map(|_| std::sync::Mutex::new(Vec::new())).collect();
        std::thread::scope(|scope| {
            for w in 0..workers {
                let next = &next;
                let results = &results;
                let chunk_sum = &chunk_sum;
                scope.spawn(move || loop {
                    let c = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if c >= n_chunks {
                        break;
                    }
                    results[w].lock().unwrap().push((c, chunk_sum(c)));
                });
            }
        });
        for r in &results {
            for &(c, v) in r.lock().unwrap().iter() {
                partials[c] = v;
            }
        }
    }
    let green: f64 = partials.iter().sum();
    Ok(beta * tv + green)
}

/// Green part of J for a density (no TV term), for excess comparisons.
pub fn green_energy_density(mesh: &TriMesh, mu: &[f64]) -> Result<f64> {
    energy_j_density(mesh, mu, 0.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRecord {
    pub kappa: f64,
    pub h: f64,
    pub n_plus: usize,
    pub n_minus: usize,
    pub green_energy: f64,
    /// (green_energy - j_reference) / j_reference.
    pub excess: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceSeries {
    pub j_reference: f64,
    pub records: Vec<ConvergenceRecord>,
}

/// Sample mu at each kappa with h = h_of_kappa(kappa) and report the Green
/// energy of the circle configurations against J(mu).
pub fn convergence_check(
    mesh: &TriMesh,
    mu: &[f64],
    beta: f64,
    kappas: &[f64],
    h_of_kappa: &dyn Fn(f64) -> f64,
    seed: u64,
) -> Result<ConvergenceSeries> {
    let j_ref = energy_j_density(mesh, mu, beta)?;
    let mu_plus: Vec<f64> = mu.iter().map(|&x| x.max(0.0)).collect();
    let mu_minus: Vec<f64> = mu.iter().map(|&x| (-x).max(0.0)).collect();
    let mut records = Vec::new();
    for &kappa in kappas {
        let h = h_of_kappa(kappa);
        let pvs = sample_measure(mesh, &mu_plus, &mu_minus, kappa, h, seed)?;
        let e = green_energy_pvs(&pvs)?;
        records.push(ConvergenceRecord {
            kappa,
            h,
            n_plus: pvs.points_plus.len(),
            n_minus: pvs.points_minus.len(),
            green_energy: e,
            excess: (e - j_ref) / j_ref,
        });
    }
    Ok(ConvergenceSeries {
        j_reference: j_ref,
        records,
    })
}
