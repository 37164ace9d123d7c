mod common;

use circnet_core::dynamics::*;
use circnet_core::{CostModel, DataMeasure, PiecewiseTrig, ReluNetwork, SignPattern, Vec2};
use common::*;
use rand::Rng;

fn divergence_cfg() -> FlowConfig {
    let mut cfg = FlowConfig::new(0.5, 1e10, Integrator::ImplicitEuler);
    cfg.dt_growth = 1.05;
    cfg
}

#[test]
fn divergence_structure_and_growth() {
    let rep = divergence_experiment(1.0, &divergence_cfg()).unwrap();
    assert!(rep.max_e1_grad <= 1e-10, "{}", rep.max_e1_grad);
    assert!(rep.max_e2_mismatch <= 1e-10, "{}", rep.max_e2_mismatch);
    assert!(rep.b_increasing);
    assert!(rep.phi_decreasing);
    assert!(rep.time_above_1e3.is_some());
    assert!(rep.final_norm > 1e3);
    assert!(rep.structure_ok());
    assert!(rep.c.iter().all(|&c| c < 0.0));
    // Φ → 0 along the divergent flow
    assert!(rep.trajectory.samples.last().unwrap().phi < 1e-3);
}

#[test]
fn divergence_initial_gradient_e1_vanishes() {
    let (net, model) = divergence_setup(1.0).unwrap();
    let g = model.grad(&net);
    assert!(g[0].x.abs() <= 1e-15 && g[1].x.abs() <= 1e-15);
    assert!(divergence_setup(0.5).is_err());
}

#[test]
fn divergence_short_explicit_run() {
    let cfg = FlowConfig::new(0.05, 50.0, Integrator::Rk4KinkGuard);
    let rep = divergence_experiment(1.0, &cfg).unwrap();
    assert!(rep.structure_ok());
    assert!(rep.b.last().unwrap() > &1.0);
}

#[test]
fn divergence_is_deterministic() {
    let a = divergence_experiment(1.0, &divergence_cfg()).unwrap();
    let b = divergence_experiment(1.0, &divergence_cfg()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn flow_converges_to_in_class_target() {
    // Smallest Hessian eigenvalue at W* is about 0.019.
    let w: Vec<Vec2> = [(0.0, 1.0), (2.0, 1.0), (4.0, 1.3)]
        .iter()
        .map(|&(a, n)| n * Vec2::from_angle(a))
        .collect();
    let star = ReluNetwork::new(SignPattern::all_positive(3).unwrap(), w).unwrap();
    for integrator in [Integrator::Euler, Integrator::Rk4KinkGuard, Integrator::ImplicitEuler] {
        let model = CostModel::uniform(star.to_piecewise());
        let w0: Vec<Vec2> = star.weights.iter().map(|w| *w + Vec2::new(0.03, -0.02)).collect();
        let mut cfg = FlowConfig::new(0.1, 500.0, integrator);
        cfg.record_every = 100;
        let tr = gradient_flow(&star.with_weights(w0), &model, &cfg).unwrap();
        let phis: Vec<f64> = tr.samples.iter().map(|s| s.phi).collect();
        assert!(phis.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{integrator:?}");
        assert!(phis.last().unwrap() < &(1e-3 * phis[0]), "{integrator:?}: {:?}", phis.last());
    }
}

#[test]
fn euler_descent_inequality() {
    let mut r = rng(32);
    for _ in 0..20 {
        let y = random_piecewise_in(&mut r, 1, 5);
        let net = random_network(&mut r, 4, 2.0);
        let model = CostModel::uniform(y);
        let dt = 0.01;
        let cfg = FlowConfig::new(dt, 2.0, Integrator::Euler);
        let tr = gradient_flow(&net, &model, &cfg).unwrap();
        for w in tr.samples.windows(2) {
            assert!(w[1].phi <= w[0].phi + 10.0 * dt * dt);
        }
    }
}

#[test]
fn flow_aborts_on_non_finite_state() {
    let model = CostModel::uniform(half_cos());
    let net = ReluNetwork::new(SignPattern::alternating(2).unwrap(), vec![Vec2::E1, Vec2::E2]).unwrap();
    let cfg = FlowConfig::new(1e300, 1e301, Integrator::Euler);
    let tr = gradient_flow(&net, &model, &cfg).unwrap();
    assert!(tr.aborted.is_some());
    assert!(tr.samples.iter().all(|s| s.weights.iter().all(|w| w.is_finite())));
    assert!(gradient_flow(&net, &model, &FlowConfig::new(-1.0, 1.0, Integrator::Euler)).is_err());
}

#[test]
fn kink_guard_halves_at_atoms() {
    let mu = DataMeasure::equal_weights(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let mut r = rng(33);
    let y: circnet_core::Signal = random_piecewise(&mut r, 3).into();
    let model = CostModel::new(y, mu);
    let net = random_network(&mut r, 3, 1.0);
    let cfg = FlowConfig::new(0.5, 20.0, Integrator::Rk4KinkGuard);
    let tr = gradient_flow(&net, &model, &cfg).unwrap();
    assert!(tr.aborted.is_none());
    let implicit = FlowConfig::new(0.5, 20.0, Integrator::ImplicitEuler);
    assert!(gradient_flow(&net, &model, &implicit).is_err());
}

fn stationary_cfg(n_traj: usize) -> LangevinConfig {
    LangevinConfig {
        eps: 0.5,
        r: 2.0,
        dt: 0.004,
        t_end: 40.0,
        n_traj,
        seed: 7,
        record_every: 1000,
        marginals: vec![Marginal { kind: MarginalKind::WeightNorm, lo: 0.0, hi: 3.0, bins: 30, t_from: 10.0 }],
    }
}

/// Oracle for the `|w|` marginal of `e^{−Φ_R/ε²}` on ℝ² by tensor Gauss–Legendre in polar
/// coordinates, computed from exact piecewise norms rather than the cost module.
fn polar_oracle(y: &PiecewiseTrig, eps: f64, r: f64, bins: usize, hi: f64) -> Vec<f64> {
    let signs = SignPattern::new(vec![1]).unwrap();
    let dens = |rho: f64, phi: f64| {
        let net = ReluNetwork::new(signs.clone(), vec![rho * Vec2::from_angle(phi)]).unwrap();
        let p = net.to_piecewise().sub(y).norm_sq();
        let v = 4.0 * (rho * rho - r * r);
        (-(p.max(v)) / (eps * eps)).exp()
    };
    let bw = hi / bins as f64;
    let mut mass: Vec<f64> = (0..bins)
        .map(|b| {
            quad(
                |rho| rho * quad(|phi| dens(rho, phi), 0.0, std::f64::consts::TAU, 24),
                b as f64 * bw,
                (b + 1) as f64 * bw,
                1,
            )
        })
        .collect();
    let s: f64 = mass.iter().sum();
    for m in &mut mass {
        *m /= s;
    }
    mass
}

#[test]
fn langevin_stationary_histogram() {
    let model = CostModel::uniform(half_cos());
    let signs = SignPattern::new(vec![1]).unwrap();
    let cfg = stationary_cfg(400);
    let st = langevin_ensemble(&model, &InitSampler::Gaussian { signs: signs.clone(), std: 1.0 }, &cfg).unwrap();
    assert_eq!(st.dropped, 0);
    let p = st.histograms[0].probabilities();
    let q = polar_oracle(&half_cos(), 0.5, 2.0, 30, 3.0);
    let q2 = stationary_norm_histogram(&model, &signs, 0.5, 2.0, 0.0, 3.0, 30).unwrap();
    let tv_q: f64 = 0.5 * q.iter().zip(&q2).map(|(a, b)| (a - b).abs()).sum::<f64>();
    assert!(tv_q < 1e-3, "quadratures disagree: {tv_q}");
    let tv: f64 = 0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    assert!(tv <= 0.05, "tv {tv}");
}

#[test]
fn langevin_free_coordinate_variance() {
    // One atom at e₂: w_x does not enter Φ, so it diffuses freely with variance 2ε²t.
    let mu = DataMeasure::discrete(vec![(std::f64::consts::FRAC_PI_2, 1.0)]).unwrap();
    let model = CostModel::new(PiecewiseTrig::zero(), mu);
    let init = ReluNetwork::new(SignPattern::new(vec![1]).unwrap(), vec![Vec2::new(0.0, 0.5)]).unwrap();
    let cfg = LangevinConfig {
        eps: 1.0, r: 1e6, dt: 0.01, t_end: 1.0, n_traj: 10_000, seed: 99, record_every: 25, marginals: vec![],
    };
    let st = langevin_ensemble(&model, &InitSampler::Fixed(init), &cfg).unwrap();
    for s in &st.snapshots[1..] {
        let expect = 2.0 * s.t;
        assert!((s.coord0_var - expect).abs() <= 0.05 * expect, "t={} var={}", s.t, s.coord0_var);
    }
}

#[test]
fn langevin_is_order_independent() {
    let model = CostModel::uniform(half_cos());
    let signs = SignPattern::alternating(2).unwrap();
    let init = InitSampler::Gaussian { signs, std: 1.0 };
    let mut cfg = stationary_cfg(16);
    cfg.t_end = 2.0;
    cfg.record_every = 50;
    let forward: Vec<_> = (0..16).map(|k| run_trajectory(&model, &init, &cfg, k)).collect();
    let mut backward: Vec<_> = (0..16).rev().map(|k| run_trajectory(&model, &init, &cfg, k)).collect();
    backward.reverse();
    assert_eq!(forward, backward);
    let a = aggregate(&cfg, &forward).unwrap();
    let b = langevin_ensemble(&model, &init, &cfg).unwrap();
    assert_eq!(a, b);
    let mut other = cfg.clone();
    other.seed = 8;
    assert_ne!(langevin_ensemble(&model, &init, &other).unwrap(), a);
}

#[test]
fn langevin_drops_non_finite() {
    let model = CostModel::uniform(half_cos());
    let init = InitSampler::Gaussian { signs: SignPattern::new(vec![1]).unwrap(), std: 1.0 };
    let mut cfg = stationary_cfg(4);
    cfg.dt = 10.0;
    cfg.t_end = 1e4;
    assert!(langevin_ensemble(&model, &init, &cfg).is_err());
}

fn fp_cfg(init: FpInit) -> FpConfig {
    FpConfig { eps: 0.5, r: 2.0, n: 40, t_end: 12.0, dt: None, record_every: 50, init }
}

#[test]
fn fokker_planck_stationary_start() {
    let model = CostModel::uniform(half_cos());
    let rep = fokker_planck_1node(&model, 1, &fp_cfg(FpInit::Constant)).unwrap();
    assert!(rep.d.iter().all(|&d| d == 0.0));
}

#[test]
fn fokker_planck_decay() {
    let model = CostModel::uniform(half_cos());
    for init in [
        FpInit::Linear(Vec2::new(1.0, 0.5)),
        FpInit::Bump { center: Vec2::new(0.5, -0.5), width: 0.4 },
    ] {
        let rep = fokker_planck_1node(&model, 1, &fp_cfg(init)).unwrap();
        assert!(rep.strictly_decreasing, "{init:?}");
        assert!(rep.max_increase <= 1e-12);
        assert!(rep.mass_drift <= 1e-8);
        assert!(rep.fit_r2 >= 0.999, "{init:?}: r2 {}", rep.fit_r2);
        assert!(rep.rate > 0.0);
    }
}

#[test]
fn fokker_planck_user_dt_is_capped() {
    let model = CostModel::uniform(half_cos());
    let mut cfg = fp_cfg(FpInit::Linear(Vec2::E1));
    cfg.t_end = 0.5;
    cfg.dt = Some(1.0);
    let rep = fokker_planck_1node(&model, 1, &cfg).unwrap();
    assert!(rep.dt < 0.01);
    assert!(rep.strictly_decreasing);
}

#[test]
fn certificate_examples() {
    let c = poincare_certificate(2400, 10.0, 1.0);
    assert_eq!(c.regime, Regime::HighNode);
    assert!(c.valid());
    assert_eq!(c.c_p_bound, 140.0);
    assert_eq!(c.rate_bound, 1.0 / 70.0);
    for name in ["mass_deficit_tenth", "gradient_integral_eighth"] {
        assert!(c.checks.iter().any(|k| k.name == name && k.pass));
    }

    let c = poincare_certificate(100, 10.0, 1.0);
    assert_eq!(c.regime, Regime::Generic);
    assert!(c.valid());
    assert_close(c.ln_c_p, 402.0 - 8f64.ln(), 1e-12);
    assert_close(c.ln_rate, 16f64.ln() - 402.0, 1e-12);
    assert_close(c.ln_rate, c.ln_rate_stated, 1e-12);

    let c = poincare_certificate(2400, 5.0, 1.0);
    assert_eq!(c.regime, Regime::HypothesesUnmet);
    assert!(!c.valid());
    assert!(c.checks.is_empty());
    assert_eq!(poincare_certificate(2400, 10.0, 1.5).regime, Regime::HypothesesUnmet);
}

#[test]
fn certificate_regime_monotone_in_m() {
    let mut r = rng(34);
    for _ in 0..20 {
        let rad = r.random_range(10.0..20.0);
        let eps = r.random_range(0.3..1.0);
        let threshold = 24.0 * rad * rad / (eps * eps);
        let mut seen_high = false;
        let lo = (threshold * 0.9) as usize;
        for m in lo..lo + (threshold * 0.2) as usize + 2 {
            let c = poincare_certificate(m, rad, eps);
            let high = c.regime == Regime::HighNode;
            assert_eq!(high, m as f64 >= threshold);
            if seen_high {
                assert!(high);
            }
            seen_high |= high;
            assert!(c.valid(), "m={m} R={rad} eps={eps}: {:?}", c.checks.iter().find(|k| !k.pass));
        }
    }
}
