//! One function per subcommand. Each reads its parameters from an [`ExperimentConfig`],
//! validates them before computing anything and returns the files it produced.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use circnet_core::approximation::{
    best_fixed_direction_fit, heat_smooth, thm2_pipeline, universal_approx, LocalizeBranch,
    LocalizeOptions,
};
use circnet_core::dynamics::{
    aggregate, divergence_experiment, fokker_planck_1node, gradient_flow, poincare_certificate,
    run_trajectory, stationary_norm_histogram, FlowConfig, FpConfig, FpInit, InitSampler,
    Integrator, LangevinConfig, Marginal, MarginalKind, Regime, TrajectoryOutput,
};
use circnet_core::{CostModel, DataMeasure, ReluNetwork, SignPattern, Vec2};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::formats;
use crate::output::{Csv, Outcome};
use crate::verify;

pub const COMMANDS: &[&str] = &[
    "smooth",
    "approx",
    "fit",
    "localize",
    "flow",
    "diverge",
    "langevin",
    "fokker-planck",
    "certify",
    "verify",
];

/// Config keys accepted by each subcommand, in addition to `out`, `seed` and `threads`.
pub fn keys(command: &str) -> &'static [&'static str] {
    match command {
        "smooth" => &["target", "normalize", "r"],
        "approx" => &["target", "normalize", "m_under"],
        "fit" => &["target", "normalize", "m", "signs", "directions", "n_dirs", "include_linear"],
        "localize" => &[
            "target",
            "normalize",
            "m",
            "signs",
            "R",
            "polish_steps",
            "refine_levels",
            "refine_sweeps",
        ],
        "flow" => &[
            "target",
            "normalize",
            "measure",
            "network",
            "m",
            "signs",
            "init_scale",
            "dt",
            "T",
            "integrator",
            "record_every",
            "dt_growth",
        ],
        "diverge" => &["b0", "dt", "T", "integrator", "record_every", "dt_growth"],
        "langevin" => &[
            "target",
            "normalize",
            "measure",
            "network",
            "m",
            "signs",
            "eps",
            "R",
            "dt",
            "T",
            "n_traj",
            "record_every",
            "init_std",
            "hist_lo",
            "hist_hi",
            "hist_bins",
            "hist_from",
            "tv_max",
        ],
        "fokker-planck" => &[
            "target",
            "normalize",
            "sign",
            "eps",
            "R",
            "n",
            "T",
            "dt",
            "record_every",
            "init",
        ],
        "certify" => &["m", "R", "eps"],
        "verify" => &["only"],
        _ => &[],
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.command.as_str() {
        "smooth" => smooth(cfg),
        "approx" => approx(cfg),
        "fit" => fit(cfg),
        "localize" => localize(cfg),
        "flow" => flow(cfg),
        "diverge" => diverge(cfg),
        "langevin" => langevin(cfg),
        "fokker-planck" => fokker_planck(cfg),
        "certify" => certify(cfg),
        "verify" => verify_cmd(cfg),
        other => Err(LabError::config(format!("unknown subcommand `{other}`"))),
    }
}

const DEFAULT_TARGET: &str = "corpus:half_cos";

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.max(1e-300).ln()).collect();
    log_slope(&lx, &ly)
}

fn smooth(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.target(DEFAULT_TARGET, false)?;
    let rs = cfg.usize_list_or("r", &[1, 2, 4, 8, 16, 32, 64])?;
    if rs.contains(&0) {
        return Err(LabError::config("`r` entries must be at least 1"));
    }
    let mut out = Outcome::default();
    let mut csv = Csv::new(&[
        "r", "cutoff", "bv", "sup_y", "sup_yr", "c1_yr", "c1_bound", "error_sq", "l2_bound",
        "tail_bound", "pass",
    ]);
    for &r in &rs {
        let h = heat_smooth(&y, r)?;
        let [sup, c1, l2] = h.checks;
        csv.row(vec![
            r.into(),
            h.cutoff.into(),
            h.bv.into(),
            h.sup_y.into(),
            h.sup_yr.into(),
            h.c1_yr.into(),
            c1.rhs.into(),
            h.error_sq.into(),
            l2.rhs.into(),
            h.tail_bound.into(),
            h.pass().into(),
        ]);
        for c in [sup, c1, l2] {
            out.check(format!("r={r} {}", c.name), c.lhs, c.rhs + c.slack);
        }
    }
    out.csv("smooth.csv", csv);
    Ok(out)
}

fn approx(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.target(DEFAULT_TARGET, false)?;
    let mus = cfg.usize_list_or("m_under", &[1, 2, 4, 8, 16, 32, 64])?;
    if mus.contains(&0) {
        return Err(LabError::config("`m_under` entries must be at least 1"));
    }
    let mut out = Outcome::default();
    let mut csv = Csv::new(&[
        "m_under", "n", "bv", "error_sq", "bound", "step_error_sq", "step_bound", "pass",
    ]);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for &mu in &mus {
        let u = universal_approx(&y, &SignPattern::alternating(2 * mu)?)?;
        csv.row(vec![
            mu.into(),
            u.n.into(),
            u.bv.into(),
            u.error_sq.into(),
            u.bound.into(),
            u.step_error_sq.into(),
            u.step_bound.into(),
            u.pass().into(),
        ]);
        out.check(format!("m_under={mu} error"), u.error_sq, u.bound);
        out.check(format!("m_under={mu} step error"), u.step_error_sq, u.step_bound);
        out.file(&format!("approx_m{mu}.closure"), formats::format_closure(&u.element));
        if mu >= 4 {
            xs.push(mu as f64);
            ys.push(u.error_sq);
        }
    }
    if xs.len() >= 2 {
        out.note_f64("decay_slope_m_under_ge_4", loglog_slope(&xs, &ys));
    }
    out.csv("approx.csv", csv);
    Ok(out)
}

fn fit(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.target(DEFAULT_TARGET, false)?;
    let angles = match cfg.get("directions") {
        Some(_) => cfg.f64_list_or("directions", &[])?,
        None => {
            let n = cfg.usize_at_least("n_dirs", 4, 1)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed()?);
            (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect()
        }
    };
    let include_linear = cfg.bool_or("include_linear", true)?;
    let signs = cfg.signs(2 * (angles.len() + 1))?;
    let dirs: Vec<Vec2> = angles.iter().map(|&a| Vec2::from_angle(a)).collect();
    let f = best_fixed_direction_fit(&dirs, &signs, &y, include_linear)?;

    let mut out = Outcome::default();
    let mut csv = Csv::new(&["start", "width", "el_x", "el_y", "slope", "slope_bound"]);
    for ((a, r), s) in f.sectors.iter().zip(&f.el_residuals).zip(&f.sector_slopes) {
        csv.row(vec![a.start().into(), a.width().into(), r.x.into(), r.y.into(), s.slope.into(), s.bound.into()]);
    }
    out.csv("fit.csv", csv);
    out.file("fit.closure", formats::format_closure(&f.element));
    out.note_f64("residual_sq", f.residual_sq);
    out.note("rank", f.rank);
    out.note("rank_deficient", f.rank_deficient);
    out.note_f64("max_el_residual", f.max_el_residual());
    out.note("smooth_target", f.smooth_target);
    if include_linear {
        out.check("euler_lagrange residual", f.max_el_residual(), 1e-10);
    }
    if f.smooth_target {
        for (k, s) in f.sector_slopes.iter().enumerate() {
            out.check(format!("sector {k} slope"), s.slope, s.bound);
        }
        for (k, s) in f.slope_report.iter().enumerate() {
            out.require(format!("term {k} size flags"), s.u_ok && s.alpha_ok);
        }
    }
    Ok(out)
}

fn localize(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.target(DEFAULT_TARGET, true)?;
    let signs = cfg.signs(4)?;
    let rs = cfg.f64_list_or("R", &[1e2, 1e3, 1e4])?;
    if rs.iter().any(|&r| r < 1.0) {
        return Err(LabError::config("`R` entries must be at least 1"));
    }
    if y.norm() > 1.0 + 1e-12 {
        return Err(LabError::config(format!("target L² norm {} exceeds 1", y.norm())));
    }
    if signs.underbar_m() == 0 {
        return Err(LabError::config("the sign pattern needs both signs"));
    }
    let d = LocalizeOptions::default();
    let opts = LocalizeOptions {
        polish_steps: cfg.usize_or("polish_steps", d.polish_steps)?,
        refine_levels: cfg.usize_or("refine_levels", d.refine_levels)?,
        refine_sweeps: cfg.usize_or("refine_sweeps", d.refine_sweeps)?,
    };
    let reports = rs
        .par_iter()
        .map(|&r| thm2_pipeline(&y, &signs, r, &opts))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let mut out = Outcome::default();
    let mut csv = Csv::new(&[
        "R", "h0", "Wnorm", "C(m)R", "feasible", "constrained", "unconstrained_est", "gap",
        "paper_bound",
    ]);
    let mut detail = Csv::new(&[
        "R", "branch", "r_smooth", "smoothing_error_sq", "w_norm_branch", "realization_valid",
        "start_value", "surrogate_value", "r0", "meets_r0",
    ]);
    for rep in &reports {
        csv.row(vec![
            rep.r_ball.into(),
            rep.h0.into(),
            rep.w_norm.into(),
            rep.cert_rhs.into(),
            rep.feasible.into(),
            rep.constrained_value.into(),
            rep.unconstrained_estimate.into(),
            rep.gap.into(),
            rep.paper_bound.into(),
        ]);
        let branch = match rep.branch {
            LocalizeBranch::Small => "small".to_string(),
            LocalizeBranch::Big { m_prime } => format!("big:{m_prime}"),
        };
        detail.row(vec![
            rep.r_ball.into(),
            branch.into(),
            rep.r_smooth.into(),
            rep.smoothing_error_sq.into(),
            rep.w_norm_branch.into(),
            rep.realization_valid.into(),
            rep.start_value.into(),
            rep.surrogate_value.into(),
            rep.r0.into(),
            rep.meets_r0.into(),
        ]);
        out.check(format!("R={} |W|", rep.r_ball), rep.w_norm, rep.cert_rhs);
        out.check(format!("R={} gap", rep.r_ball), rep.gap, rep.paper_bound);
    }
    if rs.windows(2).all(|w| w[0] < w[1]) {
        for w in reports.windows(2) {
            out.check(format!("R={} gap trend", w[1].r_ball), w[1].gap, 1.1 * w[0].gap + 1e-12);
        }
    }
    out.csv("localize.csv", csv);
    out.csv("localize_detail.csv", detail);
    Ok(out)
}

fn integrator(cfg: &ExperimentConfig, default: Integrator) -> Result<Integrator> {
    match cfg.get("integrator") {
        None => Ok(default),
        Some("euler") => Ok(Integrator::Euler),
        Some("rk4") => Ok(Integrator::Rk4KinkGuard),
        Some("implicit") => Ok(Integrator::ImplicitEuler),
        Some(o) => Err(LabError::config(format!("`integrator` must be euler, rk4 or implicit, got `{o}`"))),
    }
}

fn flow_config(cfg: &ExperimentConfig, dt: f64, t_end: f64, integ: Integrator, growth: f64) -> Result<FlowConfig> {
    let mut fc = FlowConfig::new(cfg.positive("dt", dt)?, cfg.positive("T", t_end)?, integrator(cfg, integ)?);
    fc.record_every = cfg.usize_at_least("record_every", 1, 1)?;
    fc.dt_growth = cfg.f64_or("dt_growth", growth)?;
    if fc.dt_growth < 1.0 {
        return Err(LabError::config("`dt_growth` must be at least 1"));
    }
    fc.validate()?;
    Ok(fc)
}

/// The network from `network`, or one with `signs` and weights uniform in
/// `[−init_scale, init_scale]²` drawn from `seed`.
fn initial_network(cfg: &ExperimentConfig, m_default: usize) -> Result<ReluNetwork> {
    if let Some(f) = cfg.get("network") {
        let p = cfg.path(f);
        if !p.is_file() {
            return Err(LabError::config(format!("network file {} not found", p.display())));
        }
        return formats::parse_network(&formats::read_text(&p)?, f);
    }
    let signs = cfg.signs(m_default)?;
    let s = cfg.positive("init_scale", 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed()?);
    let w = (0..signs.m())
        .map(|_| Vec2::new(rng.random_range(-s..s), rng.random_range(-s..s)))
        .collect();
    Ok(ReluNetwork::new(signs, w)?)
}

fn flow(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.target(DEFAULT_TARGET, false)?;
    let mu = cfg.measure()?;
    let fc = flow_config(cfg, 0.01, 10.0, Integrator::Rk4KinkGuard, 1.0)?;
    if fc.integrator == Integrator::ImplicitEuler && mu != DataMeasure::Uniform {
        return Err(LabError::config("the implicit integrator needs the uniform measure"));
    }
    let net = initial_network(cfg, 4)?;
    let model = CostModel::new(y, mu);
    let tr = gradient_flow(&net, &model, &fc)?;

    let mut out = Outcome::default();
    let mut csv = Csv::new(&["t", "phi", "wnorm"]);
    for s in &tr.samples {
        let wn = s.weights.iter().map(|w| w.norm_sq()).sum::<f64>().sqrt();
        csv.row(vec![s.t.into(), s.phi.into(), wn.into()]);
    }
    out.csv("flow.csv", csv);
    if let Some(last) = tr.samples.last() {
        out.file("flow_final.net", formats::format_network(&net.with_weights(last.weights.clone())));
    }
    out.note("steps", tr.steps);
    out.note("halvings", tr.halvings);
    out.require("finite trajectory", tr.aborted.is_none());
    if fc.dt_growth == 1.0 {
        // descent up to O(dt²) per step
        let slack = 10.0 * fc.dt * fc.dt * fc.record_every as f64;
        if let Some(w) = tr.samples.windows(2).find(|w| w[1].phi > w[0].phi + slack) {
            out.check(format!("descent at t={}", w[1].t), w[1].phi, w[0].phi + slack);
        }
    }
    Ok(out)
}

fn diverge(cfg: &ExperimentConfig) -> Result<Outcome> {
    let b0 = cfg.f64_or("b0", 1.0)?;
    if b0 < 1.0 {
        return Err(LabError::config("`b0` must be at least 1"));
    }
    let fc = flow_config(cfg, 0.5, 1e10, Integrator::ImplicitEuler, 1.05)?;
    let rep = divergence_experiment(b0, &fc)?;
    let mut out = Outcome::default();
    let mut csv = Csv::new(&["t", "b", "c", "phi", "wnorm"]);
    for ((s, b), c) in rep.trajectory.samples.iter().zip(&rep.b).zip(&rep.c) {
        let wn = s.weights.iter().map(|w| w.norm_sq()).sum::<f64>().sqrt();
        csv.row(vec![s.t.into(), (*b).into(), (*c).into(), s.phi.into(), wn.into()]);
    }
    out.csv("diverge.csv", csv);
    out.note_f64("final_norm", rep.final_norm);
    out.note(
        "time_above_1e3",
        rep.time_above_1e3.map(crate::output::fmt_f64).unwrap_or_else(|| "none".into()),
    );
    out.check("gradient e1 components", rep.max_e1_grad, circnet_core::dynamics::STRUCTURE_TOL);
    out.check("gradient e2 mismatch", rep.max_e2_mismatch, circnet_core::dynamics::STRUCTURE_TOL);
    out.require("b increasing", rep.b_increasing);
    out.require("phi decreasing", rep.phi_decreasing);
    out.require("finite trajectory", rep.trajectory.aborted.is_none());
    Ok(out)
}

/// Runs trajectories on the current rayon pool; results are collected in index order, so the
/// aggregate does not depend on the number of threads.
pub fn langevin_parallel(
    model: &CostModel,
    init: &InitSampler,
    lc: &LangevinConfig,
) -> Result<circnet_core::dynamics::EnsembleStats> {
    lc.validate()?;
    let outputs: Vec<TrajectoryOutput> = (0..lc.n_traj)
        .into_par_iter()
        .map(|k| run_trajectory(model, init, lc, k))
        .collect();
    Ok(aggregate(lc, &outputs)?)
}

fn langevin(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.target(DEFAULT_TARGET, false)?;
    let mu = cfg.measure()?;
    let uniform = mu == DataMeasure::Uniform;
    let t_end = cfg.positive("T", 40.0)?;
    let lc = LangevinConfig {
        eps: cfg.f64_in("eps", 0.5, 0.0, 1.0)?,
        r: cfg.positive("R", 2.0)?,
        dt: cfg.positive("dt", 0.004)?,
        t_end,
        n_traj: cfg.usize_at_least("n_traj", 400, 1)?,
        seed: cfg.seed()?,
        record_every: cfg.usize_at_least("record_every", 1000, 1)?,
        marginals: vec![Marginal {
            kind: MarginalKind::WeightNorm,
            lo: cfg.f64_or("hist_lo", 0.0)?,
            hi: cfg.f64_or("hist_hi", 3.0)?,
            bins: cfg.usize_at_least("hist_bins", 30, 1)?,
            t_from: cfg.f64_or("hist_from", 0.25 * t_end)?,
        }],
    };
    lc.validate()?;
    let init = match cfg.get("network") {
        Some(_) => InitSampler::Fixed(initial_network(cfg, 1)?),
        None => InitSampler::Gaussian { signs: cfg.signs(1)?, std: cfg.positive("init_std", 1.0)? },
    };
    let signs = match &init {
        InitSampler::Fixed(n) => n.signs.clone(),
        InitSampler::Gaussian { signs, .. } => signs.clone(),
    };
    let tv_max = cfg.opt_f64("tv_max")?;
    if tv_max.is_some() && (signs.m() != 1 || !uniform) {
        return Err(LabError::config("`tv_max` needs m = 1 and the uniform measure"));
    }
    let model = CostModel::new(y, mu);
    let st = langevin_parallel(&model, &init, &lc)?;

    let mut out = Outcome::default();
    let mut csv = Csv::new(&[
        "t", "phi_mean", "phi_p10", "phi_p90", "wnorm_mean", "wnorm_p10", "wnorm_p50", "wnorm_p90",
        "coord0_mean", "coord0_var",
    ]);
    for s in &st.snapshots {
        csv.row(vec![
            s.t.into(),
            s.phi_mean.into(),
            s.phi_p10.into(),
            s.phi_p90.into(),
            s.wnorm_mean.into(),
            s.wnorm_p10.into(),
            s.wnorm_p50.into(),
            s.wnorm_p90.into(),
            s.coord0_mean.into(),
            s.coord0_var.into(),
        ]);
    }
    out.csv("langevin.csv", csv);
    let h = &st.histograms[0];
    let mut hist = Csv::new(&["bin_left", "bin_right", "count"]);
    for (k, &c) in h.counts.iter().enumerate() {
        let (a, b) = h.bin_edges(k);
        hist.row(vec![a.into(), b.into(), c.into()]);
    }
    out.csv("langevin_hist.csv", hist);
    out.note("dropped", st.dropped);
    out.note("hist_below", h.below);
    out.note("hist_above", h.above);
    if signs.m() == 1 && uniform {
        let m0 = &lc.marginals[0];
        let q = stationary_norm_histogram(&model, &signs, lc.eps, lc.r, m0.lo, m0.hi, m0.bins)?;
        let p = h.probabilities();
        let tv = 0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>();
        out.note_f64("stationary_tv", tv);
        if let Some(t) = tv_max {
            out.check("stationary tv", tv, t);
        }
    }
    Ok(out)
}

fn fp_init(cfg: &ExperimentConfig) -> Result<FpInit> {
    let spec = cfg.get("init").unwrap_or("linear:1,0.5");
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<f64> = args
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| LabError::config(format!("`init`: bad numbers in `{spec}`")))?;
    match (kind, nums.as_slice()) {
        ("constant", []) => Ok(FpInit::Constant),
        ("linear", [x, y]) => Ok(FpInit::Linear(Vec2::new(*x, *y))),
        ("bump", [x, y, s]) if *s > 0.0 => Ok(FpInit::Bump { center: Vec2::new(*x, *y), width: *s }),
        _ => Err(LabError::config(format!(
            "`init` must be constant, linear:vx,vy or bump:cx,cy,width, got `{spec}`"
        ))),
    }
}

fn fokker_planck(cfg: &ExperimentConfig) -> Result<Outcome> {
    let y = cfg.target(DEFAULT_TARGET, false)?;
    let sign = match cfg.get("sign").unwrap_or("1") {
        "1" | "+1" => 1,
        "-1" => -1,
        o => return Err(LabError::config(format!("`sign` must be 1 or -1, got `{o}`"))),
    };
    let fc = FpConfig {
        eps: cfg.f64_in("eps", 0.5, 0.0, 1.0)?,
        r: cfg.positive("R", 2.0)?,
        n: cfg.usize_at_least("n", 40, 4)?,
        t_end: cfg.positive("T", 12.0)?,
        dt: match cfg.get("dt") {
            Some(_) => Some(cfg.positive("dt", 1.0)?),
            None => None,
        },
        record_every: cfg.usize_at_least("record_every", 50, 1)?,
        init: fp_init(cfg)?,
    };
    let rep = fokker_planck_1node(&CostModel::uniform(y), sign, &fc)?;
    let mut out = Outcome::default();
    let mut csv = Csv::new(&["t", "D"]);
    for (t, d) in rep.times.iter().zip(&rep.d) {
        csv.row(vec![(*t).into(), (*d).into()]);
    }
    out.csv("fokker_planck.csv", csv);
    out.note_f64("half_width", rep.half_width);
    out.note_f64("dt", rep.dt);
    out.note("strictly_decreasing", rep.strictly_decreasing);
    out.note_f64("rate", rep.rate);
    out.note_f64("fit_r2", rep.fit_r2);
    out.check("D increase per step", rep.max_increase, 1e-12);
    out.check("mass drift", rep.mass_drift, 1e-8);
    Ok(out)
}

fn certify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ms = cfg.usize_list_or("m", &[2400])?;
    if ms.contains(&0) {
        return Err(LabError::config("`m` entries must be at least 1"));
    }
    let r = cfg.positive("R", 10.0)?;
    let eps = cfg.positive("eps", 1.0)?;
    let mut out = Outcome::default();
    let mut table = Csv::new(&["m", "R", "eps", "regime", "ln_C_P", "C_P", "ln_rate", "rate", "valid"]);
    let mut checks = Csv::new(&["m", "name", "lhs", "rhs", "log", "pass"]);
    for &m in &ms {
        let c = poincare_certificate(m, r, eps);
        let regime = match c.regime {
            Regime::HighNode => "high_node",
            Regime::Generic => "generic",
            Regime::HypothesesUnmet => "hypotheses_unmet",
        };
        table.row(vec![
            m.into(),
            r.into(),
            eps.into(),
            regime.into(),
            c.ln_c_p.into(),
            c.c_p_bound.into(),
            c.ln_rate.into(),
            c.rate_bound.into(),
            c.valid().into(),
        ]);
        for k in &c.checks {
            checks.row(vec![m.into(), k.name.into(), k.lhs.into(), k.rhs.into(), k.log.into(), k.pass.into()]);
            out.check(format!("m={m} {}", k.name), k.lhs, k.rhs);
        }
    }
    out.csv("certify.csv", table);
    out.csv("certify_checks.csv", checks);
    Ok(out)
}

fn verify_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let only = cfg.usize_list_or("only", &[])?;
    if let Some(bad) = only.iter().find(|&&i| !(1..=verify::CRITERIA).contains(&i)) {
        return Err(LabError::config(format!("no criterion {bad}")));
    }
    let ids: Vec<usize> = if only.is_empty() { (1..=verify::CRITERIA).collect() } else { only };
    let mut out = Outcome::default();
    let mut csv = Csv::new(&["id", "name", "pass", "detail"]);
    for id in ids {
        let r = verify::run_criterion(id);
        println!("{}", r.line());
        csv.row(vec![r.id.into(), r.name.into(), r.pass.into(), r.detail.clone().into()]);
        out.note(&format!("criterion_{id}_seconds"), format!("{:.3}", r.seconds));
        out.require(format!("criterion {id} {}", r.name), r.pass);
    }
    out.csv("verify.csv", csv);
    Ok(out)
}
