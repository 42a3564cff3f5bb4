//! Command-line front end for the thin-shell superconductor obstacle
//! solvers: field derivation, 1D/2D solves, beta sweeps, scaling fits,
//! freezing detection, barrier profiles and vortex-measure energies.

mod config;
mod sources;
mod svg;

use clap::{Args, Parser, Subcommand};
use config::{BetaRange, RunConfig};
use sc_obstacle::analysis::{
    self, check_continuity, check_monotonicity, check_thickness, detect_freezing, fit_scaling,
    ScalingQuantity, SolverKind, Sweep1dOpts, SweepReport,
};
use sc_obstacle::barriers;
use sc_obstacle::fields::{critical_data, derive_fields, PotentialShape};
use sc_obstacle::io;
use sc_obstacle::obstacle1d::{self, components_1d, residual_check, Pgs1dOpts};
use sc_obstacle::obstacle2d::{self, sc_region, vorticity, vorticity_report, Pgs2dOpts};
use sc_obstacle::vortex;
use sc_obstacle::Error;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sc-obstacle", version, about = "Two-sided obstacle problem solvers for thin-shell superconductors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Surface of revolution: sphere | ellipsoid:A | csv:RHO.csv,Z.csv
    #[arg(long, default_value = "sphere")]
    profile: String,
    /// Potential a(phi): uniform | canonical | csv:PATH
    #[arg(long = "a", default_value = "uniform")]
    potential: String,
    /// Number of colatitude nodes
    #[arg(long, default_value_t = 1024)]
    n: usize,
}

#[derive(Args, Clone)]
struct MeshArgs {
    /// Mesh: icosphere:K | off:PATH
    #[arg(long, default_value = "icosphere:4")]
    mesh: String,
    /// Field H: z | csv:PATH
    #[arg(long, default_value = "z")]
    field: String,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also emit SVG plots
    #[arg(long)]
    svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Derive H, *F, beta_c and the critical levels of a potential
    Derive {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve the axisymmetric problem at one beta
    Solve1d {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        beta: f64,
        /// regime | pgs
        #[arg(long, default_value = "pgs")]
        solver: String,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        #[arg(long, default_value_t = 5_000_000)]
        max_sweeps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve the mesh problem at one beta
    Solve2d {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 400_000)]
        max_sweeps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sweep a range of betas and report components, widths and energies
    Sweep {
        #[command(flatten)]
        problem: ProblemArgs,
        /// lo:hi:count[:log|lin]
        #[arg(long)]
        betas: String,
        /// regime | pgs
        #[arg(long, default_value = "pgs")]
        solver: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fit the width and gradient scaling exponents over a sweep
    Scaling {
        #[command(flatten)]
        problem: ProblemArgs,
        /// lo:hi:count[:log|lin]
        #[arg(long, default_value = "1e-5:1e-2:8:log")]
        betas: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Detect frozen free-boundary components across a sweep
    Freeze {
        #[command(flatten)]
        problem: ProblemArgs,
        /// lo:hi:count[:log|lin]; defaults to a window around the critical gaps
        #[arg(long)]
        betas: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build and verify a piecewise-cubic barrier profile
    Barrier {
        #[arg(long)]
        c: f64,
        #[arg(long = "C")]
        big_c: f64,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Approximate a solved vorticity by point/circle measures and check
    /// the Green-energy trend
    Vortex {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Comma-separated kappa values
        #[arg(long, default_value = "100,300,1000,3000")]
        kappas: String,
        #[arg(long, default_value_t = 12)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Execute a JSON run configuration
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NotConverged { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn parse_betas(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 3 || parts.len() > 4 {
        return Err(Error::Parse(format!(
            "betas spec {spec:?} must be lo:hi:count[:log|lin]"
        )));
    }
    let lo: f64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad lo {:?}", parts[0])))?;
    let hi: f64 = parts[1].parse().map_err(|_| Error::Parse(format!("bad hi {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("bad count {:?}", parts[2])))?;
    let spacing = parts.get(3).copied().unwrap_or("log");
    if !(lo > 0.0 && hi > lo && count >= 2) {
        return Err(Error::Parse("betas need 0 < lo < hi and count >= 2".into()));
    }
    if spacing != "log" && spacing != "lin" {
        return Err(Error::Parse(format!("unknown spacing {spacing:?}")));
    }
    let range = BetaRange {
        lo,
        hi,
        count,
        spacing: spacing.into(),
    };
    Ok(range.values())
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct DeriveReport {
    beta_c: f64,
    shape: String,
    critical_points: Vec<CriticalPoint>,
    alpha_star: Option<f64>,
    beta1_star: Option<f64>,
    beta2_star: Option<f64>,
}

#[derive(Serialize)]
struct CriticalPoint {
    phi: f64,
    value: f64,
}

fn cmd_derive(problem: &ProblemArgs, out: &OutArgs) -> Result<(), Error> {
    let s = sources::load_surface(&problem.profile, problem.n)?;
    let a = sources::load_potential(&problem.potential, &s)?;
    let f = derive_fields(&a, &s)?;
    let (shape, cd) = match a.shape() {
        PotentialShape::SingleBump { .. } => ("single-bump".to_string(), None),
        PotentialShape::TripleZero { .. } => {
            ("triple-zero".to_string(), Some(critical_data(&a, &s)?))
        }
    };
    let report = DeriveReport {
        beta_c: f.beta_c(),
        shape,
        critical_points: a
            .critical_points()
            .into_iter()
            .map(|(phi, value)| CriticalPoint { phi, value })
            .collect(),
        alpha_star: cd.map(|c| c.alpha_star),
        beta1_star: cd.map(|c| c.beta1),
        beta2_star: cd.map(|c| c.beta2),
    };
    write_out(&out.out, "derive.json", &to_json(&report))
}

#[derive(Serialize)]
struct Solve1dReport {
    beta: f64,
    regime: String,
    alphas: Vec<f64>,
    components: Vec<(f64, f64)>,
    eps_active: f64,
    residual: obstacle1d::ResidualReport,
}

fn cmd_solve1d(
    problem: &ProblemArgs,
    beta: f64,
    solver: &str,
    tol: f64,
    max_sweeps: usize,
    out: &OutArgs,
) -> Result<(), Error> {
    let s = sources::load_surface(&problem.profile, problem.n)?;
    let a = sources::load_potential(&problem.potential, &s)?;
    let f = derive_fields(&a, &s)?;
    let p = match solver {
        "regime" => obstacle1d::solve_regime(&a, &s, &f, beta)?,
        "pgs" => obstacle1d::solve_pgs_1d_with(
            &a,
            &s,
            beta,
            &Pgs1dOpts {
                tol,
                max_sweeps,
                omega: analysis::auto_omega(s.n()),
                initial: None,
                eps_active: None,
            },
        )?,
        other => return Err(Error::Parse(format!("unknown solver {other:?}"))),
    };
    let report = Solve1dReport {
        beta,
        regime: p.regime.tag(),
        alphas: p.alphas.clone(),
        components: components_1d(&p, p.eps_active),
        eps_active: p.eps_active,
        residual: residual_check(&p, &a, &s),
    };
    write_out(&out.out, "solution.csv", &io::profile_csv(&p))?;
    write_out(&out.out, "residual.json", &to_json(&report))?;
    if out.svg {
        let mut plot = svg::Plot::new(&format!("v(phi), beta = {beta}"), "phi", "v");
        let phis: Vec<f64> = (0..p.n()).map(|i| p.phi(i)).collect();
        plot.set_ranges(&phis, &p.v);
        plot.polyline(&phis, &p.v, 0);
        write_out(&out.out, "solution.svg", &plot.finish())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Solve2dReport {
    beta: f64,
    iterations: usize,
    residual: f64,
    eps_active: f64,
    warnings: Vec<String>,
    vorticity: obstacle2d::VorticityReport,
    components: obstacle2d::ComponentReport,
}

fn cmd_solve2d(
    mesh_args: &MeshArgs,
    beta: f64,
    tol: f64,
    max_sweeps: usize,
    out: &OutArgs,
) -> Result<(), Error> {
    let mesh = sources::load_mesh(&mesh_args.mesh)?;
    let (field, star_f) = sources::load_field(&mesh_args.field, &mesh)?;
    let sol = obstacle2d::solve_pgs_2d_with(
        &mesh,
        &field,
        beta,
        &Pgs2dOpts {
            tol,
            max_sweeps,
            omega: 1.6,
            initial: None,
            star_f,
            eps_active: None,
        },
    )?;
    let mu = vorticity(&mesh, &field, &sol)?;
    let report = Solve2dReport {
        beta,
        iterations: sol.iterations,
        residual: sol.residual,
        eps_active: sol.eps_active,
        warnings: sol.warnings.clone(),
        vorticity: vorticity_report(&mesh, &field, &sol, &mu),
        components: sc_region(&mesh, &sol, sol.eps_active),
    };
    write_out(&out.out, "solution.csv", &io::mesh_solution_csv(&sol, &mu))?;
    write_out(&out.out, "components.json", &to_json(&report))
}

fn run_sweep(problem: &ProblemArgs, betas: &[f64], solver: &str) -> Result<SweepReport, Error> {
    let s = sources::load_surface(&problem.profile, problem.n)?;
    let a = sources::load_potential(&problem.potential, &s)?;
    let f = derive_fields(&a, &s)?;
    let kind = match solver {
        "regime" => SolverKind::Regime,
        "pgs" => SolverKind::Pgs1d,
        other => return Err(Error::Parse(format!("unknown solver {other:?}"))),
    };
    Ok(analysis::sweep_1d(
        &a,
        &s,
        &f,
        betas,
        &Sweep1dOpts {
            solver: kind,
            ..Sweep1dOpts::default()
        },
    ))
}

#[derive(Serialize)]
struct SweepSummary {
    monotonicity_violations: Vec<String>,
    continuity_excess: f64,
    report: SweepReport,
}

fn cmd_sweep(problem: &ProblemArgs, betas: &[f64], solver: &str, out: &OutArgs) -> Result<(), Error> {
    let r = run_sweep(problem, betas, solver)?;
    let mut csv = String::from(
        "beta,components,total_width,max_gradient,energy_f,energy_e,separation,active_plus,active_minus\n",
    );
    for rec in &r.records {
        use std::fmt::Write as _;
        let _ = writeln!(
            csv,
            "{:.17e},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{}",
            rec.beta,
            rec.geometry.count(),
            rec.widths.iter().sum::<f64>(),
            rec.max_gradient,
            rec.energy_f,
            rec.energy_e,
            rec.separation,
            rec.n_active_plus,
            rec.n_active_minus
        );
    }
    let summary = SweepSummary {
        monotonicity_violations: check_monotonicity(&r),
        continuity_excess: check_continuity(&r),
        report: r,
    };
    write_out(&out.out, "sweep.csv", &csv)?;
    write_out(&out.out, "sweep.json", &to_json(&summary))?;
    if out.svg {
        let r = &summary.report;
        let betas: Vec<f64> = r.records.iter().map(|x| x.beta).collect();
        let counts: Vec<f64> = r.records.iter().map(|x| x.geometry.count() as f64).collect();
        let mut plot = svg::Plot::new("components of SC_beta", "beta", "count");
        plot.set_ranges(&betas, &[0.0, 4.0]);
        plot.steps(&betas, &counts, 0);
        write_out(&out.out, "components.svg", &plot.finish())?;

        let mut prof = svg::Plot::new("profile snapshots", "phi", "v / beta");
        let n = r.records.len();
        let picks = [0, n / 2, n - 1];
        let n_nodes = r.records[0].values.len();
        let phis: Vec<f64> = (0..n_nodes)
            .map(|i| std::f64::consts::PI * i as f64 / (n_nodes - 1) as f64)
            .collect();
        prof.set_ranges(&phis, &[-0.55, 0.55]);
        for (series, &k) in picks.iter().enumerate() {
            let rec = &r.records[k];
            let scaled: Vec<f64> = rec.values.iter().map(|v| v / rec.beta).collect();
            prof.polyline(&phis, &scaled, series);
            prof.annotate(0.1, 0.5 - 0.07 * series as f64, &format!("beta = {:.4}", rec.beta));
        }
        write_out(&out.out, "profiles.svg", &prof.finish())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ScalingReport {
    width_slope: f64,
    width_r2: f64,
    gradient_slope: f64,
    gradient_r2: f64,
    thickness_min_ratio: f64,
    thickness_max_over_min: f64,
    betas: Vec<f64>,
    widths: Vec<f64>,
    max_gradients: Vec<f64>,
}

fn cmd_scaling(problem: &ProblemArgs, betas: &[f64], out: &OutArgs) -> Result<(), Error> {
    let mut problem = problem.clone();
    if problem.n < 4096 {
        problem.n = 4096; // resolve beta^(1/3)-thin bands
    }
    let r = run_sweep(&problem, betas, "pgs")?;
    let (ws, wr2) = fit_scaling(&r, ScalingQuantity::Width)?;
    let (gs, gr2) = fit_scaling(&r, ScalingQuantity::Gradient)?;
    let t = check_thickness(&r);
    let report = ScalingReport {
        width_slope: ws,
        width_r2: wr2,
        gradient_slope: gs,
        gradient_r2: gr2,
        thickness_min_ratio: t.min_ratio,
        thickness_max_over_min: t.max_over_min,
        betas: r.records.iter().map(|x| x.beta).collect(),
        widths: r.records.iter().map(|x| x.widths.iter().sum()).collect(),
        max_gradients: r.records.iter().map(|x| x.max_gradient).collect(),
    };
    write_out(&out.out, "scaling.json", &to_json(&report))?;
    if out.svg {
        let xs: Vec<f64> = report.betas.iter().map(|b| b.log10()).collect();
        let yw: Vec<f64> = report.widths.iter().map(|w| w.log10()).collect();
        let yg: Vec<f64> = report.max_gradients.iter().map(|g| g.log10()).collect();
        let mut plot = svg::Plot::new("scaling of SC_beta", "log10 beta", "log10 quantity");
        let all_y: Vec<f64> = yw.iter().chain(&yg).copied().collect();
        plot.set_ranges(&xs, &all_y);
        plot.scatter(&xs, &yw, 0);
        plot.polyline(&xs, &yw, 0);
        plot.scatter(&xs, &yg, 1);
        plot.polyline(&xs, &yg, 1);
        plot.annotate(xs[0], yw[yw.len() - 1], &format!("width slope {ws:.4} (r2 {wr2:.4})"));
        plot.annotate(xs[0], yg[yg.len() - 1], &format!("gradient slope {gs:.4} (r2 {gr2:.4})"));
        write_out(&out.out, "scaling.svg", &plot.finish())?;
    }
    Ok(())
}

fn cmd_freeze(problem: &ProblemArgs, betas: Option<&[f64]>, out: &OutArgs) -> Result<(), Error> {
    let s = sources::load_surface(&problem.profile, problem.n)?;
    let a = sources::load_potential(&problem.potential, &s)?;
    let f = derive_fields(&a, &s)?;
    let betas = match betas {
        Some(b) => b.to_vec(),
        None => {
            let cd = critical_data(&a, &s)?;
            sc_obstacle::grid::linspace(cd.beta2 - 0.01, cd.beta1 + 0.01, 14)
        }
    };
    let r = analysis::sweep_1d(&a, &s, &f, &betas, &Sweep1dOpts::default());
    let frozen = detect_freezing(&r, 3.0 * s.h());
    write_out(&out.out, "freeze.json", &to_json(&frozen))
}

#[derive(Serialize)]
struct BarrierFile {
    profile: barriers::BarrierProfile,
    verification: barriers::BarrierReport,
    width_bracket: (f64, f64),
}

fn cmd_barrier(c: f64, big_c: f64, beta: f64, out: &OutArgs) -> Result<(), Error> {
    let bp = barriers::build_barrier(c, big_c, beta)?;
    let rep = barriers::verify_barrier(&bp, 4096);
    let file = BarrierFile {
        profile: bp,
        verification: rep,
        width_bracket: barriers::width_bracket(c, big_c, beta)?,
    };
    let mut csv = String::from("z,v,v1,v2\n");
    let n = 512;
    for k in 0..=n {
        use std::fmt::Write as _;
        let z = -2.0 * bp.eta_minus + (2.0 * bp.eta_minus + 2.0 * bp.eta_plus) * k as f64 / n as f64;
        let _ = writeln!(
            csv,
            "{:.17e},{:.17e},{:.17e},{:.17e}",
            z,
            bp.eval(z),
            bp.eval_d1(z),
            bp.eval_d2(z)
        );
    }
    write_out(&out.out, "barrier.json", &to_json(&file))?;
    write_out(&out.out, "barrier.csv", &csv)
}

#[derive(Serialize)]
struct VortexFile {
    beta: f64,
    seed: u64,
    series: vortex::ConvergenceSeries,
}

fn cmd_vortex(
    mesh_args: &MeshArgs,
    beta: f64,
    kappas_spec: &str,
    seed: u64,
    out: &OutArgs,
) -> Result<(), Error> {
    let kappas: Result<Vec<f64>, _> = kappas_spec.split(',').map(str::parse::<f64>).collect();
    let kappas = kappas.map_err(|e| Error::Parse(format!("kappas: {e}")))?;
    if kappas.is_empty() {
        return Err(Error::Parse("empty kappas".into()));
    }
    let mesh = sources::load_mesh(&mesh_args.mesh)?;
    let (field, star_f) = sources::load_field(&mesh_args.field, &mesh)?;
    let sol = obstacle2d::solve_pgs_2d_with(
        &mesh,
        &field,
        beta,
        &Pgs2dOpts {
            tol: 1e-11,
            max_sweeps: 400_000,
            omega: 1.6,
            initial: None,
            star_f,
            eps_active: None,
        },
    )?;
    let mu_raw = vorticity(&mesh, &field, &sol)?;
    let scale = mu_raw.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let mu: Vec<f64> = mu_raw
        .iter()
        .map(|&x| if x.abs() < 1e-6 * scale { 0.0 } else { x })
        .collect();
    let series = vortex::convergence_check(&mesh, &mu, beta, &kappas, &|k| k.ln() / beta, seed)?;
    let kappa = *kappas.last().unwrap();
    let mu_plus: Vec<f64> = mu.iter().map(|&x| x.max(0.0)).collect();
    let mu_minus: Vec<f64> = mu.iter().map(|&x| (-x).max(0.0)).collect();
    let pvs = vortex::sample_measure(&mesh, &mu_plus, &mu_minus, kappa, kappa.ln() / beta, seed)?;
    let file = VortexFile { beta, seed, series };
    write_out(&out.out, "vortex.json", &to_json(&file))?;
    write_out(&out.out, "points.csv", &io::pvs_csv(&pvs))
}

fn dispatch(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Derive { problem, out } => cmd_derive(&problem, &out),
        Command::Solve1d {
            problem,
            beta,
            solver,
            tol,
            max_sweeps,
            out,
        } => cmd_solve1d(&problem, beta, &solver, tol, max_sweeps, &out),
        Command::Solve2d {
            mesh,
            beta,
            tol,
            max_sweeps,
            out,
        } => cmd_solve2d(&mesh, beta, tol, max_sweeps, &out),
        Command::Sweep {
            problem,
            betas,
            solver,
            out,
        } => cmd_sweep(&problem, &parse_betas(&betas)?, &solver, &out),
        Command::Scaling { problem, betas, out } => {
            cmd_scaling(&problem, &parse_betas(&betas)?, &out)
        }
        Command::Freeze { problem, betas, out } => {
            let betas = betas.as_deref().map(parse_betas).transpose()?;
            cmd_freeze(&problem, betas.as_deref(), &out)
        }
        Command::Barrier { c, big_c, beta, out } => cmd_barrier(c, big_c, beta, &out),
        Command::Vortex {
            mesh,
            beta,
            kappas,
            seed,
            out,
        } => cmd_vortex(&mesh, beta, &kappas, seed, &out),
        Command::Run { config } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Error::Parse(format!("{}: {e}", config.display())))?;
            let cfg = RunConfig::parse(&text)?;
            run_config(cfg)
        }
    }
}

fn run_config(cfg: RunConfig) -> Result<(), Error> {
    let problem = ProblemArgs {
        profile: cfg.profile.clone(),
        potential: cfg.potential.clone(),
        n: cfg.n,
    };
    let mesh = MeshArgs {
        mesh: cfg.mesh.clone(),
        field: cfg.field.clone(),
    };
    let out = OutArgs {
        out: PathBuf::from(&cfg.out),
        svg: cfg.svg,
    };
    let need_beta = || cfg.beta.ok_or_else(|| Error::Parse("config needs \"beta\"".into()));
    let need_betas = || {
        cfg.betas
            .as_ref()
            .map(|r| r.values())
            .ok_or_else(|| Error::Parse("config needs \"betas\"".into()))
    };
    match cfg.command.as_str() {
        "derive" => cmd_derive(&problem, &out),
        "solve1d" => cmd_solve1d(&problem, need_beta()?, &cfg.solver, cfg.tol, cfg.max_sweeps, &out),
        "solve2d" => cmd_solve2d(&mesh, need_beta()?, cfg.tol, cfg.max_sweeps, &out),
        "sweep" => cmd_sweep(&problem, &need_betas()?, &cfg.solver, &out),
        "scaling" => cmd_scaling(&problem, &need_betas()?, &out),
        "freeze" => {
            let betas = cfg.betas.as_ref().map(|r| r.values());
            cmd_freeze(&problem, betas.as_deref(), &out)
        }
        "barrier" => {
            let c = cfg.c.ok_or_else(|| Error::Parse("config needs \"c\"".into()))?;
            let big_c = cfg
                .big_c
                .ok_or_else(|| Error::Parse("config needs \"big_c\"".into()))?;
            cmd_barrier(c, big_c, need_beta()?, &out)
        }
        "vortex" => {
            let kappas = cfg
                .kappas
                .clone()
                .unwrap_or_else(|| vec![100.0, 300.0, 1000.0, 3000.0]);
            let spec = kappas
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",");
            cmd_vortex(&mesh, need_beta()?, &spec, cfg.seed, &out)
        }
        other => Err(Error::Parse(format!("unknown command {other:?} in config"))),
    }
}
