use alloc::vec::Vec;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::math;
use crate::network::{ReluNetwork, SignPattern};

/// Initial condition `u₀`; the non-constant choices are shifted so that `∫u₀ρ = ∫ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FpInit {
    Constant,
    /// `u₀(w) = 1 + v·w − E_ρ[v·w]`.
    Linear(Vec2),
    /// `u₀(w) = 1 + e^{−|w − c|²/s²} − E_ρ[…]`.
    Bump { center: Vec2, width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FpConfig {
    pub eps: f64,
    pub r: f64,
    /// Cells per axis.
    pub n: usize,
    pub t_end: f64,
    /// Requested step; reduced to the stability limit if larger.
    pub dt: Option<f64>,
    pub record_every: usize,
    pub init: FpInit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FpReport {
    /// Half-width of the square `[−L, L]²`.
    pub half_width: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    /// `D(t) = ∫(u − 1)² ρ / ∫ρ` with `ρ = e^{−Φ_R/ε²}`.
    pub d: Vec<f64>,
    /// Largest `D(t+dt) − D(t)` over all steps (non-positive for a decreasing run).
    pub max_increase: f64,
    pub strictly_decreasing: bool,
    /// Largest relative change of `∫uρ` over the run.
    pub mass_drift: f64,
    /// `−d log D/dt` from a least-squares fit on the last half of the records.
    pub rate: f64,
    pub fit_r2: f64,
}

/// Finite volumes on a uniform grid for `ρ ∂_t u = ∇·(ε² ρ ∇u)`, `ρ = e^{−Φ_R/ε²}`, with
/// no-flux boundaries. Face weights `ε²√(ρ_iρ_j)` keep the scheme symmetric in `ℓ²(ρ)`.
/// The square is chosen so that `ρ/max ρ < 1e-16` along its boundary.
pub fn fokker_planck_1node(model: &CostModel, sign: i8, cfg: &FpConfig) -> Result<FpReport> {
    if !(cfg.eps > 0.0 && cfg.eps <= 1.0) {
        return Err(Error::param("eps", "must lie in (0, 1]"));
    }
    if !(cfg.r > 0.0) || !cfg.r.is_finite() {
        return Err(Error::param("R", "must be positive and finite"));
    }
    if cfg.n < 4 {
        return Err(Error::param("n", "needs at least 4 cells per axis"));
    }
    if !(cfg.t_end > 0.0) || !cfg.t_end.is_finite() || cfg.record_every == 0 {
        return Err(Error::param("T", "needs T > 0 and record_every ≥ 1"));
    }
    let signs = SignPattern::new(alloc::vec![sign])?;
    let eps2 = cfg.eps * cfg.eps;
    // Φ ≥ 0, so Φ_R ≥ 4(|w|² − R²) and ρ/max ρ ≤ e^{−(4(|w|²−R²) − min Φ_R)/ε²}.
    let mut net = ReluNetwork { signs, weights: alloc::vec![Vec2::ZERO] };
    let n = cfg.n;
    let mut lw = math::sqrt(cfg.r * cfg.r + 36.9 * eps2 / 4.0);
    let mut h = 2.0 * lw / n as f64;
    let mut pot = alloc::vec![0.0; n * n];
    for _ in 0..8 {
        h = 2.0 * lw / n as f64;
        for i in 0..n {
            for j in 0..n {
                net.weights[0] = Vec2::new(-lw + (i as f64 + 0.5) * h, -lw + (j as f64 + 0.5) * h);
                pot[i * n + j] = model.phi_r(&net, cfg.r).phi_r / eps2;
            }
        }
        let pmin = pot.iter().copied().fold(f64::INFINITY, f64::min);
        let edge = (0..n)
            .flat_map(|k| [k, (n - 1) * n + k, k * n, k * n + n - 1])
            .map(|c| pot[c])
            .fold(f64::INFINITY, f64::min);
        if edge - pmin >= 36.9 {
            break;
        }
        lw *= 1.1;
    }
    let pmin = pot.iter().copied().fold(f64::INFINITY, f64::min);
    let rho: Vec<f64> = pot.iter().map(|p| math::exp(pmin - p)).collect();
    let pi: Vec<f64> = rho.iter().map(|r| r * h * h).collect();
    // Face weights to the right (i+1) and up (j+1) neighbours.
    let kx: Vec<f64> = (0..n * n)
        .map(|c| if c / n + 1 < n { eps2 * math::sqrt(rho[c] * rho[c + n]) } else { 0.0 })
        .collect();
    let ky: Vec<f64> = (0..n * n)
        .map(|c| if c % n + 1 < n { eps2 * math::sqrt(rho[c] * rho[c + 1]) } else { 0.0 })
        .collect();
    let mut deg = alloc::vec![0.0; n * n];
    for c in 0..n * n {
        deg[c] += kx[c] + ky[c];
        if c / n + 1 < n {
            deg[c + n] += kx[c];
        }
        if c % n + 1 < n {
            deg[c + 1] += ky[c];
        }
    }
    // dt·deg/π ≤ 1/2 keeps the update matrix positive semidefinite in ℓ²(π).
    let limit = (0..n * n)
        .map(|c| 0.5 * pi[c] / deg[c])
        .fold(f64::INFINITY, f64::min);
    let mut dt = cfg.dt.map_or(limit, |d| d.min(limit));
    let steps = math::ceil(cfg.t_end / dt - 1e-9) as usize;
    dt = cfg.t_end / steps as f64;

    let zsum = math::pairwise_sum(&pi);
    let centre = |c: usize| Vec2::new(-lw + ((c / n) as f64 + 0.5) * h, -lw + ((c % n) as f64 + 0.5) * h);
    let g: Vec<f64> = (0..n * n)
        .map(|c| match cfg.init {
            FpInit::Constant => 0.0,
            FpInit::Linear(v) => v.dot(centre(c)),
            FpInit::Bump { center, width } => {
                math::exp(-(centre(c) - center).norm_sq() / (width * width))
            }
        })
        .collect();
    let gw: Vec<f64> = g.iter().zip(&pi).map(|(a, b)| a * b).collect();
    let gmean = math::pairwise_sum(&gw) / zsum;
    let mut u: Vec<f64> = match cfg.init {
        FpInit::Constant => alloc::vec![1.0; n * n],
        _ => g.iter().map(|x| 1.0 + x - gmean).collect(),
    };
    let mass = |u: &[f64]| {
        let t: Vec<f64> = u.iter().zip(&pi).map(|(a, b)| a * b).collect();
        math::pairwise_sum(&t)
    };
    let dfun = |u: &[f64]| {
        let t: Vec<f64> = u.iter().zip(&pi).map(|(a, b)| (a - 1.0) * (a - 1.0) * b).collect();
        math::pairwise_sum(&t) / zsum
    };
    let m0 = mass(&u);
    let mut d_prev = dfun(&u);
    let mut times = alloc::vec![0.0];
    let mut d = alloc::vec![d_prev];
    let mut max_increase = f64::NEG_INFINITY;
    let mut strictly = true;
    let mut drift = 0.0f64;
    let mut flux = alloc::vec![0.0; n * n];
    for step in 1..=steps {
        for v in flux.iter_mut() {
            *v = 0.0;
        }
        for c in 0..n * n {
            if c / n + 1 < n {
                let f = kx[c] * (u[c + n] - u[c]);
                flux[c] += f;
                flux[c + n] -= f;
            }
            if c % n + 1 < n {
                let f = ky[c] * (u[c + 1] - u[c]);
                flux[c] += f;
                flux[c + 1] -= f;
            }
        }
        for c in 0..n * n {
            u[c] += dt * flux[c] / pi[c];
        }
        let dn = dfun(&u);
        max_increase = max_increase.max(dn - d_prev);
        if !(dn < d_prev) && d_prev > 0.0 {
            strictly = false;
        }
        d_prev = dn;
        drift = drift.max(((mass(&u) - m0) / m0).abs());
        if step % cfg.record_every == 0 || step == steps {
            times.push(step as f64 * dt);
            d.push(dn);
        }
    }
    if drift > 1e-8 {
        return Err(Error::CheckFailed(alloc::format!("mass drift {drift:e} exceeds 1e-8")));
    }
    let (rate, fit_r2) = tail_fit(&times, &d);
    Ok(FpReport {
        half_width: lw,
        dt,
        times,
        d,
        max_increase,
        strictly_decreasing: strictly,
        mass_drift: drift,
        rate,
        fit_r2,
    })
}

/// Least-squares line through `(t, log D)` on the last half of the samples with `D > 0`.
fn tail_fit(t: &[f64], d: &[f64]) -> (f64, f64) {
    let start = t.len() / 2;
    let pts: Vec<(f64, f64)> = (start..t.len())
        .filter(|&k| d[k] > 0.0)
        .map(|k| (t[k], math::ln(d[k])))
        .collect();
    if pts.len() < 3 {
        return (f64::NAN, f64::NAN);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (-slope, r2)
}
