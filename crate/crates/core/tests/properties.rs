//! Cross-module properties: solver equivalence on randomized problems,
//! 2D monotonicity and gradient scaling, axisymmetric 1D/2D agreement and
//! the two-route Green-energy identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sc_obstacle::analysis::{self, auto_omega, check_monotonicity, Sweep2dOpts};
use sc_obstacle::fields::{canonical_triple_zero, derive_fields, AxiPotential, MeshField};
use sc_obstacle::grid::{self, linear_fit, CubicTable};
use sc_obstacle::mesh::TriMesh;
use sc_obstacle::obstacle1d::{components_1d, solve_pgs_1d_with, solve_regime, Pgs1dOpts, Profile1D};
use sc_obstacle::obstacle2d::{azimuthal_average, solve_pgs_2d_with, vorticity, Pgs2dOpts};
use sc_obstacle::surface::RevolutionSurface;
use sc_obstacle::vortex;
use std::f64::consts::PI;

fn aligned_sup(a: &[f64], b: &[f64]) -> f64 {
    let mut dmax = f64::NEG_INFINITY;
    let mut dmin = f64::INFINITY;
    for (x, y) in a.iter().zip(b) {
        dmax = dmax.max(x - y);
        dmin = dmin.min(x - y);
    }
    0.5 * (dmax - dmin)
}

#[test]
fn oracle_equivalence_on_random_problems() {
    // 20 seeded (profile, beta) pairs: single-bump family plus the canonical
    // triple-zero shape; construction and relaxation agree within 10 h^2
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 512;
    let s = RevolutionSurface::named("sphere", n).unwrap();
    let tol_sup = 10.0 * s.h() * s.h();
    for case in 0..20 {
        let (a, label) = if case % 4 == 3 {
            (
                AxiPotential::from_fn(&s, canonical_triple_zero).unwrap(),
                "canonical".to_string(),
            )
        } else {
            // a = sin^2(phi) (1/2 + 0.2 q cos(phi)) stays single-bump for |q| <= 0.8
            let q: f64 = rng.gen_range(-0.8..0.8);
            (
                AxiPotential::from_fn(&s, move |p: f64| {
                    p.sin().powi(2) * (0.5 + 0.2 * q * p.cos())
                })
                .unwrap(),
                format!("bump q={q:.3}"),
            )
        };
        let f = derive_fields(&a, &s).unwrap();
        let beta = rng.gen_range(0.05..0.95) * f.beta_c();
        let exact = solve_regime(&a, &s, &f, beta).unwrap();
        let pgs = solve_pgs_1d_with(
            &a,
            &s,
            beta,
            &Pgs1dOpts {
                tol: 1e-11,
                max_sweeps: 2_000_000,
                omega: auto_omega(n),
                initial: None,
                eps_active: None,
            },
        )
        .unwrap();
        let sup = aligned_sup(&exact.v, &pgs.v);
        assert!(
            sup < tol_sup,
            "case {case} ({label}), beta {beta:.4}: sup {sup:.3e} > {tol_sup:.3e}"
        );
    }
}

#[test]
fn monotone_sc_sets_on_mesh() {
    let mesh = TriMesh::icosphere(4).unwrap();
    let field = MeshField::new(&mesh, mesh.vertices().iter().map(|p| p[2]).collect()).unwrap();
    let sf: Vec<f64> = mesh.vertices().iter().map(|p| -p[2] / 2.0).collect();
    let betas = grid::logspace(0.15, 0.85, 5);
    let r = analysis::sweep_2d(&mesh, &field, Some(&sf), &betas, &Sweep2dOpts::default());
    assert!(r.errors.is_empty(), "{:?}", r.errors);
    let v = check_monotonicity(&r);
    assert!(v.is_empty(), "{v:?}");
    // counts: single equatorial band everywhere on this field
    for rec in &r.records {
        assert_eq!(rec.geometry.count(), 1, "beta = {}", rec.beta);
    }
}

#[test]
fn gradient_scaling_exponent_on_mesh() {
    // max edge gradient of V follows beta^(2/3) with exponent 2/3 +- 0.1
    let mesh = TriMesh::icosphere(5).unwrap();
    let field = MeshField::new(&mesh, mesh.vertices().iter().map(|p| p[2]).collect()).unwrap();
    let sf: Vec<f64> = mesh.vertices().iter().map(|p| -p[2] / 2.0).collect();
    let betas = grid::logspace(3e-4, 3e-2, 6);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    for &beta in betas.iter().rev() {
        let sol = solve_pgs_2d_with(
            &mesh,
            &field,
            beta,
            &Pgs2dOpts {
                tol: 1e-11,
                max_sweeps: 400_000,
                omega: 1.6,
                initial: warm.clone(),
                star_f: Some(sf.clone()),
                eps_active: None,
            },
        )
        .unwrap();
        let mut gmax = 0.0f64;
        for e in mesh.edges() {
            gmax = gmax.max(((sol.v[e.a] - sol.v[e.b]) / e.len).abs());
        }
        xs.push(beta.ln());
        ys.push(gmax.ln());
        warm = Some(sol.v);
    }
    let (slope, _, r2) = linear_fit(&xs, &ys);
    assert!(
        (slope - 2.0 / 3.0).abs() < 0.1,
        "gradient exponent {slope:.4} (r2 {r2:.4})"
    );
}

/// Azimuthally average a mesh solution onto the uniform 1D grid.
fn mesh_to_profile(mesh: &TriMesh, v: &[f64], beta: f64, n: usize) -> Profile1D {
    let (centers, means) = azimuthal_average(mesh, v, 256);
    let h = PI / (n - 1) as f64;
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let x = i as f64 * h;
        // linear interpolation in the (irregular) bin-center table
        let k = centers.partition_point(|&c| c < x);
        let val = if k == 0 {
            means[0]
        } else if k == centers.len() {
            *means.last().unwrap()
        } else {
            let t = (x - centers[k - 1]) / (centers[k] - centers[k - 1]);
            means[k - 1] * (1.0 - t) + means[k] * t
        };
        vals.push(val.clamp(-beta / 2.0, beta / 2.0));
    }
    Profile1D {
        v: vals,
        beta,
        active_plus: Vec::new(),
        active_minus: Vec::new(),
        regime: sc_obstacle::obstacle1d::Regime::OneComponent,
        alphas: Vec::new(),
        eps_active: 0.0,
    }
}

#[test]
fn sweep_consistency_1d_2d() {
    // component counts match and widths agree within 2% between the mesh
    // solve (azimuthally averaged) and the 1D solver, on both model fields
    let mesh = TriMesh::icosphere(5).unwrap();
    let n1d = 2048;
    let s = RevolutionSurface::named("sphere", n1d).unwrap();
    type Case = (&'static str, Box<dyn Fn(f64) -> f64>, Vec<f64>);
    let cases: Vec<Case> = vec![
        ("sphere", Box::new(|p: f64| 0.5 * p.sin().powi(2)), vec![0.3, 0.5]),
        ("canonical", Box::new(canonical_triple_zero), vec![0.15, 0.25]),
    ];
    for (label, pot, betas) in cases {
        let a = AxiPotential::from_fn(&s, &pot).unwrap();
        let f = derive_fields(&a, &s).unwrap();
        // per-vertex H(phi) = a'/(rho gamma) via the 1D tables
        let h_table = CubicTable::new(0.0, s.h(), f.h());
        let hv: Vec<f64> = mesh
            .vertices()
            .iter()
            .map(|p| h_table.eval(p[2].clamp(-1.0, 1.0).acos()))
            .collect();
        let field = MeshField::new(&mesh, hv).unwrap();
        let sf_table = CubicTable::new(0.0, s.h(), f.star_f());
        let sf: Vec<f64> = mesh
            .vertices()
            .iter()
            .map(|p| sf_table.eval(p[2].clamp(-1.0, 1.0).acos()))
            .collect();
        for &beta in &betas {
            let p1 = solve_regime(&a, &s, &f, beta).unwrap();
            let sol = solve_pgs_2d_with(
                &mesh,
                &field,
                beta,
                &Pgs2dOpts {
                    tol: 1e-11,
                    max_sweeps: 400_000,
                    omega: 1.6,
                    star_f: Some(sf.clone()),
                    ..Pgs2dOpts::default()
                },
            )
            .unwrap();
            let eps = analysis::sweep_eps_active(s.h(), f.beta_c(), beta);
            let c1 = components_1d(&p1, eps);
            let p2 = mesh_to_profile(&mesh, &sol.v, beta, n1d);
            let c2 = components_1d(&p2, eps);
            assert_eq!(c1.len(), c2.len(), "{label} beta {beta}: counts differ");
            for (i1, i2) in c1.iter().zip(&c2) {
                let w1 = s.arc_length(i1.0, i1.1);
                let w2 = s.arc_length(i2.0, i2.1);
                assert!(
                    (w1 - w2).abs() < 0.02 * w1,
                    "{label} beta {beta}: widths {w1:.4} vs {w2:.4}"
                );
            }
        }
    }
}

#[test]
fn green_energy_two_routes() {
    // int int G dmu dmu computed by pairwise summation with the cell-disk
    // diagonal equals the Dirichlet energy of the Poisson potential
    let mesh = TriMesh::icosphere(5).unwrap();
    let field = MeshField::new(&mesh, mesh.vertices().iter().map(|p| p[2]).collect()).unwrap();
    let sf: Vec<f64> = mesh.vertices().iter().map(|p| -p[2] / 2.0).collect();
    let sol = solve_pgs_2d_with(
        &mesh,
        &field,
        0.5,
        &Pgs2dOpts {
            tol: 1e-11,
            max_sweeps: 400_000,
            omega: 1.6,
            star_f: Some(sf),
            ..Pgs2dOpts::default()
        },
    )
    .unwrap();
    let mu_raw = vorticity(&mesh, &field, &sol).unwrap();
    let scale = mu_raw.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let mu: Vec<f64> = mu_raw
        .iter()
        .map(|&x| if x.abs() < 1e-6 * scale { 0.0 } else { x })
        .collect();
    let green_sum = vortex::green_energy_density(&mesh, &mu).unwrap();
    let w = mesh.solve_poisson(&mu, 1e-10, 20_000).unwrap();
    let dirichlet = mesh.dirichlet_energy(&w);
    assert!(
        (green_sum - dirichlet).abs() < 0.02 * dirichlet,
        "green sum {green_sum:.5} vs dirichlet {dirichlet:.5}"
    );
}

#[test]
fn pgs_freezing_matches_construction() {
    // the relaxation solver reproduces the frozen component of the
    // construction inside (beta2*, beta1*)
    let n = 1024;
    let s = RevolutionSurface::named("sphere", n).unwrap();
    let a = AxiPotential::from_fn(&s, canonical_triple_zero).unwrap();
    let f = derive_fields(&a, &s).unwrap();
    let beta = 0.25;
    let exact = solve_regime(&a, &s, &f, beta).unwrap();
    let pgs = solve_pgs_1d_with(
        &a,
        &s,
        beta,
        &Pgs1dOpts {
            tol: 1e-11,
            max_sweeps: 2_000_000,
            omega: auto_omega(n),
            initial: None,
            eps_active: None,
        },
    )
    .unwrap();
    assert_eq!(pgs.regime, exact.regime);
    let sup = aligned_sup(&exact.v, &pgs.v);
    assert!(sup < 10.0 * s.h() * s.h(), "sup {sup:.3e}");
}
