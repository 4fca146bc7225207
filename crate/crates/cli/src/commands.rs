use std::path::PathBuf;

use freebound::calculus::{
    fd_gradient_check, fd_hessian_check, CoercivityConfig, ShapeSetup, FD_HESSIAN_STEP,
};
use freebound::experiment::{run_rates_campaign, RatesConfig, MIN_FIT_POINTS};
use freebound::geometry::{
    cos_index, format_coefficients, parse_coefficients, sin_index, translation_series,
    Parameterization, RadialCurve, TrigSeries,
};
use freebound::oracle::{
    crossing_check, energy_circles, expected_energy_two_point, free_radius, two_point_minimizer,
    TwoPointRadiusLaw,
};
use freebound::solver::{energy_from_state, DirichletSolver};
use freebound::stochastic::{run_sgd_with, MeanShape, SgdConfig};
use serde::Serialize;

use crate::cli::{
    CoercivityArgs, GradcheckArgs, OptimizeArgs, OracleArgs, RatesArgs, SgdFlags, SolveArgs,
};
use crate::files::{config_toml, load_config, OutDir};
use crate::Failure;

const SLOPE_TOLERANCE: f64 = 0.15;

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!(
            "--{name} must be a positive number, got {v}"
        )))
    }
}

#[derive(Debug, Serialize)]
struct OracleConfig {
    lambda: f64,
    r_sigma: Option<f64>,
    two_point: Option<(f64, f64)>,
    p: f64,
    delta: f64,
    scan_points: usize,
}

pub fn oracle(args: &OracleArgs, out: &OutDir) -> Result<(), Failure> {
    let lambda = positive("lambda", args.lambda)?;
    let cfg = OracleConfig {
        lambda,
        r_sigma: args.r_sigma,
        two_point: args.two_point.as_ref().map(|v| (v[0], v[1])),
        p: args.p,
        delta: args.delta,
        scan_points: args.scan_points,
    };
    if let Some(r) = args.r_sigma {
        let r = positive("r-sigma", r)?;
        let f = free_radius(r, lambda);
        println!("F = {f:.9}");
        println!("J = {:.9}", energy_circles(f, r, lambda)?);
        println!("flux residual = {:.3e}", f * (f / r).ln() * lambda - 1.0);
    }
    if let Some((r1, r2)) = cfg.two_point {
        let law = TwoPointRadiusLaw::new(r1, r2, args.p)?;
        if args.scan_points < 2 {
            return Err(Failure::Usage("--scan-points must be at least 2".into()));
        }
        let (f1, f2) = (free_radius(r1, lambda), free_radius(r2, lambda));
        let lo = r2 * (1.0 + 1e-3);
        let hi = 1.5 * f1.max(f2).max(lo);
        let rows: Vec<Vec<f64>> = (0..args.scan_points)
            .map(|i| {
                let r = lo + (hi - lo) * i as f64 / (args.scan_points - 1) as f64;
                Ok(vec![r, expected_energy_two_point(r, &law, lambda)?])
            })
            .collect::<freebound::Result<_>>()?;
        let toml = config_toml(&cfg)?;
        let path = out.csv(
            "two_point_scan.csv",
            &toml,
            &["r_gamma", "expected_energy"],
            &rows,
        )?;
        let report = crossing_check(&law, lambda, args.delta)?;
        let minimizer = two_point_minimizer(&law, lambda, r2 + args.delta)?;
        println!("F(r1) = {:.9}", report.f_r1);
        println!("F(r2) = {:.9}", report.f_r2);
        println!("constrained minimizer = {minimizer:.9}");
        println!(
            "crossing regime: {}",
            if report.crossing {
                "yes (F(r1) < r2)"
            } else {
                "no"
            }
        );
        match report.violating_p {
            Some((a, b)) => {
                println!("unconstrained minimizer below r2 + delta for p in [{a:.6}, {b:.6}]")
            }
            None => println!("unconstrained minimizer above r2 + delta for every p"),
        }
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SolveConfig {
    lambda: f64,
    r_sigma: Option<f64>,
    sigma_file: Option<PathBuf>,
    r_gamma: Option<f64>,
    gamma_file: Option<PathBuf>,
    order: usize,
    nodes: Option<usize>,
}

fn read_coefficients(path: &PathBuf) -> Result<(Parameterization, TrigSeries), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_coefficients(&text)?)
}

pub fn solve(args: &SolveArgs, out: &OutDir) -> Result<(), Failure> {
    let lambda = positive("lambda", args.lambda)?;
    let sigma = match &args.sigma_file {
        Some(p) => {
            let (kind, s) = read_coefficients(p)?;
            if kind != Parameterization::Radial {
                return Err(Failure::Usage(
                    "interior boundary must be in radial form".into(),
                ));
            }
            RadialCurve::new(s)?
        }
        None => RadialCurve::circle(
            positive("r-sigma", args.r_sigma.unwrap_or(0.5))?,
            args.order,
        )?,
    };
    let (kind, gamma) = match &args.gamma_file {
        Some(p) => read_coefficients(p)?,
        None => (
            Parameterization::Radial,
            TrigSeries::constant(
                positive("r-gamma", args.r_gamma.unwrap_or(1.0))?,
                args.order,
            ),
        ),
    };
    let setup = ShapeSetup {
        lambda,
        nodes: args.nodes,
        ..ShapeSetup::default()
    };
    let domain = setup.domain(&gamma, kind, &sigma)?;
    let state = DirichletSolver::new(domain.clone())?.solve_state()?;
    let energy = energy_from_state(&state, lambda);
    let outer = domain.outer();
    let flux_outer = outer.integrate(&state.neumann_outer);
    let flux_inner = domain.inner().integrate(&state.neumann_inner);
    println!("J = {energy:.12}");
    println!("flux through outer boundary = {flux_outer:.12}");
    println!("flux through inner boundary = {flux_inner:.12}");
    println!("minimum gap = {:.6}", domain.gap());
    let l2 = lambda * lambda;
    let rows: Vec<Vec<f64>> = (0..outer.len())
        .map(|i| {
            let t = state.neumann_outer[i];
            vec![
                i as f64,
                outer.thetas[i],
                outer.nodes[i][0],
                outer.nodes[i][1],
                t,
                l2 - t * t,
            ]
        })
        .collect();
    let cfg = SolveConfig {
        lambda,
        r_sigma: args.r_sigma,
        sigma_file: args.sigma_file.clone(),
        r_gamma: args.r_gamma,
        gamma_file: args.gamma_file.clone(),
        order: args.order,
        nodes: args.nodes,
    };
    let path = out.csv(
        "solve_traces.csv",
        &config_toml(&cfg)?,
        &[
            "node",
            "theta",
            "x",
            "y",
            "neumann_outer",
            "gradient_density",
        ],
        &rows,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct GradcheckConfig {
    lambda: f64,
    order: usize,
    nodes: Option<usize>,
    modes: Vec<usize>,
    kind: Parameterization,
    step: f64,
    tolerance: f64,
}

/// Fixed test geometry: a shifted, slightly flattened exterior boundary
/// around the ellipse with semi-axes 0.4 and 0.2.
fn gradcheck_geometry(order: usize) -> Result<(TrigSeries, RadialCurve), Failure> {
    let mut h =
        TrigSeries::constant(0.8, order).axpy(1.0, &translation_series(0.03, -0.02, order))?;
    if order >= 2 {
        h.coeffs_mut()[cos_index(2)] += 0.04;
    }
    if order >= 3 {
        h.coeffs_mut()[sin_index(3)] += 0.004;
    }
    Ok((h, RadialCurve::ellipse(0.4, 0.2, order)?))
}

pub fn gradcheck(args: &GradcheckArgs, out: &OutDir) -> Result<(), Failure> {
    let lambda = positive("lambda", args.lambda)?;
    positive("step", args.step)?;
    if args.order == 0 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    let kind: Parameterization = args.kind.parse()?;
    let modes = args
        .modes
        .clone()
        .unwrap_or_else(|| (0..=args.order).collect());
    if let Some(&l) = modes.iter().find(|&&l| l > args.order) {
        return Err(Failure::Usage(format!(
            "mode {l} exceeds the order {}",
            args.order
        )));
    }
    let indices: Vec<usize> = modes
        .iter()
        .flat_map(|&l| {
            if l == 0 {
                vec![0]
            } else {
                vec![sin_index(l), cos_index(l)]
            }
        })
        .collect();
    let setup = ShapeSetup {
        lambda,
        nodes: args.nodes,
        ..ShapeSetup::default()
    };
    let (h, sigma) = gradcheck_geometry(args.order)?;
    let grad = fd_gradient_check(&h, kind, &sigma, &setup, &indices, args.step)?;
    let mut rows = Vec::new();
    let mut worst_grad: f64 = 0.0;
    let mut worst_hess: f64 = 0.0;
    let mut worst_form: f64 = 0.0;
    println!("index  analytic            finite-difference   rel.error");
    for e in &grad {
        println!(
            "{:>5}  {:>18.10e}  {:>18.10e}  {:.2e}",
            e.index, e.analytic, e.finite_difference, e.rel_error
        );
        worst_grad = worst_grad.max(e.rel_error);
    }
    println!("index  second variation    second difference   rel.error  (I1+I2 rel.error)");
    for (e, &index) in grad.iter().zip(&indices) {
        let q = TrigSeries::basis(args.order, index);
        let hess = fd_hessian_check(&h, kind, &sigma, &q, &setup, FD_HESSIAN_STEP)?;
        println!(
            "{:>5}  {:>18.10e}  {:>18.10e}  {:.2e}   ({:.2e})",
            index,
            hess.second_variation,
            hess.second_difference,
            hess.second_variation_rel_error,
            hess.form_rel_error
        );
        worst_hess = worst_hess.max(hess.second_variation_rel_error);
        worst_form = worst_form.max(hess.form_rel_error);
        rows.push(vec![
            index as f64,
            e.analytic,
            e.finite_difference,
            e.rel_error,
            hess.second_variation,
            hess.form,
            hess.second_difference,
            hess.second_variation_rel_error,
            hess.form_rel_error,
        ]);
    }
    let cfg = GradcheckConfig {
        lambda,
        order: args.order,
        nodes: args.nodes,
        modes,
        kind,
        step: args.step,
        tolerance: args.tolerance,
    };
    let path = out.csv(
        "gradcheck.csv",
        &config_toml(&cfg)?,
        &[
            "index",
            "gradient",
            "gradient_fd",
            "gradient_rel_error",
            "second_variation",
            "hessian_form",
            "second_difference",
            "second_variation_rel_error",
            "hessian_form_rel_error",
        ],
        &rows,
    )?;
    println!("max gradient rel. error         = {worst_grad:.3e}");
    println!("max second variation rel. error = {worst_hess:.3e}");
    println!("max I1+I2 rel. error (reported) = {worst_form:.3e}");
    println!("wrote {}", path.display());
    if worst_grad <= args.tolerance && worst_hess <= args.tolerance {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!(
            "finite-difference mismatch above {:.1e}",
            args.tolerance
        )))
    }
}

fn apply_sgd_flags(cfg: &mut SgdConfig, f: &SgdFlags) -> Result<(), Failure> {
    if let Some(v) = f.lambda {
        cfg.lambda = positive("lambda", v)?;
    }
    if let Some(v) = f.order {
        cfg.order = v;
    }
    if let Some(v) = f.seed {
        cfg.seed = v;
    }
    if let Some(v) = f.theta {
        cfg.schedule.theta = v;
    }
    if let Some(v) = f.offset {
        cfg.schedule.offset = v;
    }
    if let Some(v) = f.amplitude {
        cfg.model.amplitude = v;
    }
    if f.flat_amplitudes {
        cfg.model.flat_amplitudes = true;
    }
    if let Some(r) = f.r_sigma {
        cfg.model.mean = MeanShape::Circle {
            radius: positive("r-sigma", r)?,
        };
    }
    if f.deterministic {
        cfg.model.amplitude = 0.0;
        cfg.model.flat_amplitudes = false;
    }
    if let Some(k) = &f.kind {
        cfg.parameterization = k.parse()?;
    }
    if let Some(s) = &f.sampler {
        cfg.sampler = s.parse()?;
    }
    if let Some(v) = f.initial_radius {
        cfg.initial_radius = v;
    }
    if f.nodes.is_some() {
        cfg.nodes = f.nodes;
    }
    cfg.validate()?;
    Ok(())
}

pub fn optimize(args: &OptimizeArgs, out: &OutDir) -> Result<(), Failure> {
    let mut cfg: SgdConfig = match &args.sgd.config {
        Some(p) => load_config(p)?,
        None => SgdConfig::default(),
    };
    apply_sgd_flags(&mut cfg, &args.sgd)?;
    if let Some(k) = args.iterations {
        cfg.iterations = k;
    }
    if let Some(s) = &args.snapshots {
        cfg.snapshots = s.clone();
    }
    let toml = config_toml(&cfg)?;
    let kind = cfg.parameterization;
    let initial = cfg.initial_iterate()?;
    out.text("initial.coef", &toml, &format_coefficients(kind, &initial))?;

    let mut rows = Vec::new();
    let result = run_sgd_with(&cfg, |e, _| {
        rows.push(vec![
            e.n as f64,
            e.step,
            e.j_sample,
            e.grad_norm,
            e.retries as f64,
            if e.projected { 1.0 } else { 0.0 },
        ]);
    });
    let columns = [
        "n",
        "t_n",
        "J_sample",
        "grad_norm_proxy",
        "retries",
        "projected",
    ];
    out.csv("trajectory.csv", &toml, &columns, &rows)?;
    let traj = result?;
    for (n, h) in &traj.snapshots {
        out.text(
            &format!("snapshot_{n}.coef"),
            &toml,
            &format_coefficients(kind, h),
        )?;
    }
    let path = out.text(
        "final.coef",
        &toml,
        &format_coefficients(kind, &traj.final_iterate),
    )?;
    println!("iterations = {}", traj.iterations());
    println!("final mean radius = {:.9}", traj.final_iterate.mean());
    println!(
        "projection active in {:.2}% of steps",
        100.0 * traj.projection_activity()
    );
    println!("wrote {}", path.display());
    Ok(())
}

pub fn rates(args: &RatesArgs, out: &OutDir) -> Result<(), Failure> {
    let mut cfg: RatesConfig = match &args.sgd.config {
        Some(p) => load_config(p)?,
        None => RatesConfig::default(),
    };
    apply_sgd_flags(&mut cfg.sgd, &args.sgd)?;
    if let Some(k) = &args.k_grid {
        cfg.k_grid = k.clone();
    }
    if let Some(s) = &args.seeds {
        cfg.seeds = s.clone();
    }
    if let Some(n) = args.samples {
        cfg.estimator_samples = n;
    }
    if let Some(k) = args.reference_k {
        cfg.reference_iterations = k;
    }
    let mut grid = cfg.k_grid.clone();
    grid.retain(|&k| k > 0);
    grid.sort_unstable();
    grid.dedup();
    if grid.len() < MIN_FIT_POINTS {
        return Err(Failure::Tolerance(format!(
            "need at least {MIN_FIT_POINTS} distinct positive K values, got {}",
            grid.len()
        )));
    }
    if cfg.seeds.is_empty() {
        return Err(Failure::Usage("--seeds must not be empty".into()));
    }
    let toml = config_toml(&cfg)?;
    let data = run_rates_campaign(&cfg)?;
    let rows = |v: &[f64]| -> Vec<Vec<f64>> {
        data.k
            .iter()
            .zip(v)
            .map(|(&k, &x)| vec![k as f64, x])
            .collect()
    };
    out.csv(
        "rates_cost.csv",
        &toml,
        &["K", "value"],
        &rows(&data.cost_gap),
    )?;
    out.csv(
        "rates_gradient.csv",
        &toml,
        &["K", "value"],
        &rows(&data.grad_norm),
    )?;
    let table: Vec<Vec<f64>> = (0..data.k.len())
        .map(|i| {
            vec![
                data.k[i] as f64,
                data.expected_objective[i],
                data.grad_norm[i],
                data.cost_gap[i],
            ]
        })
        .collect();
    out.csv(
        "rates.csv",
        &toml,
        &["K", "E_J_estimate", "E_grad_norm", "cost_gap"],
        &table,
    )?;
    println!("J* = {:.12} ({:?})", data.j_star, data.j_star_source);
    let fits = data.fit()?;
    let verdict = |slope: f64, target: f64| {
        if (slope - target).abs() <= SLOPE_TOLERANCE {
            "within"
        } else {
            "outside"
        }
    };
    let report = format!(
        "cost_slope = {:.4}  # target -1.0 +/- {SLOPE_TOLERANCE}: {}\n\
         gradient_slope = {:.4}  # target -0.5 +/- {SLOPE_TOLERANCE}: {}\n\
         j_star = {}\n",
        fits.cost.slope,
        verdict(fits.cost.slope, -1.0),
        fits.gradient.slope,
        verdict(fits.gradient.slope, -0.5),
        data.j_star,
    );
    print!("{report}");
    out.text("slopes.txt", &toml, &report)?;
    Ok(())
}

pub fn coercivity(args: &CoercivityArgs, out: &OutDir) -> Result<(), Failure> {
    let mut cfg: CoercivityConfig = match &args.config {
        Some(p) => load_config(p)?,
        None => CoercivityConfig::default(),
    };
    if let Some(n) = args.samples {
        cfg.num_samples = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(l) = args.lambda {
        cfg.setup.lambda = positive("lambda", l)?;
    }
    if let Some(o) = args.order {
        cfg.order = o;
    }
    if cfg.num_samples == 0 || cfg.order == 0 {
        return Err(Failure::Usage(
            "--samples and --order must be positive".into(),
        ));
    }
    let report = freebound::calculus::coercivity_probe(&cfg)?;
    let rows: Vec<Vec<f64>> = report
        .samples
        .iter()
        .zip(&report.running_min)
        .enumerate()
        .map(|(i, (s, m))| {
            vec![
                i as f64,
                s.ratio,
                *m,
                s.form.value,
                s.form.i1,
                s.form.i2,
                s.second_variation,
                s.norm_sq,
            ]
        })
        .collect();
    let toml = config_toml(&cfg)?;
    let path = out.csv(
        "coercivity.csv",
        &toml,
        &[
            "sample",
            "ratio",
            "running_min",
            "form",
            "i1",
            "i2",
            "second_variation",
            "norm_sq",
        ],
        &rows,
    )?;
    println!("c_E = {:.6e}", report.c_e);
    println!("wrote {}", path.display());
    if report.c_e > 0.0 {
        Ok(())
    } else {
        Err(Failure::Tolerance(
            "empirical coercivity constant is not positive".into(),
        ))
    }
}
