use alloc::format;
use alloc::vec::Vec;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{Signal, Vec2};
use crate::math::{self, FRAC_PI_2, TAU};
use crate::network::{realization_bound, realize_closure, replicate, SignPattern};

use super::constrained::constrained_minimize;
use super::fit::{best_fixed_direction_fit, solve_fixed};
use super::heat::heat_smooth;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizeOptions {
    pub polish_steps: usize,
    pub refine_levels: usize,
    pub refine_sweeps: usize,
}

impl Default for LocalizeOptions {
    fn default() -> Self {
        LocalizeOptions {
            polish_steps: 200,
            refine_levels: 6,
            refine_sweeps: 2,
        }
    }
}

/// Which case of the construction ran: directly on `m` nodes (`m̲⁹ ≤ R`) or on `m'` nodes
/// followed by replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalizeBranch {
    Small,
    Big { m_prime: usize },
}

/// Directions chosen for a fixed-direction closure fit and the fit value `‖g − y‖²₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSearch {
    pub directions: Vec<Vec2>,
    pub include_linear: bool,
    pub value: f64,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    pub r_ball: f64,
    pub m: usize,
    pub m_under: usize,
    pub c_m: f64,
    /// Heat-smoothing radius with `r ≤ R^{1/3} ≤ 2r`.
    pub r_smooth: usize,
    pub smoothing_error_sq: f64,
    pub branch: LocalizeBranch,
    pub h0: f64,
    /// `|W_{h₀}|` of the realized network on all `m` nodes.
    pub w_norm: f64,
    /// `|W_{h₀}|` on the nodes the construction ran on (`m` or `m'`).
    pub w_norm_branch: f64,
    /// `C(m)R`.
    pub cert_rhs: f64,
    pub feasible: bool,
    /// `h αᵢ < 1` for every indicator term.
    pub realization_valid: bool,
    pub start_value: f64,
    pub constrained_value: f64,
    /// Best fixed-direction closure fit to `y` (an upper bound for the infimum).
    pub surrogate_value: f64,
    /// `min(surrogate, constrained)`, also an upper bound for the infimum.
    pub unconstrained_estimate: f64,
    pub gap: f64,
    pub paper_bound: f64,
    pub r0: f64,
    pub meets_r0: bool,
}

/// `h₀ = R^{−1/2}(m̲ m)^{−1/2}`.
pub fn h0(r_ball: f64, m: usize, m_under: usize) -> f64 {
    1.0 / math::sqrt(r_ball * (m_under * m) as f64)
}

/// The integer `r ≥ 1` with `r ≤ R^{1/3} < r + 1`, hence `R^{1/3} ≤ 2r`.
pub fn smoothing_radius(r_ball: f64) -> usize {
    integer_root(r_ball, 3)
}

fn ipow(b: usize, k: i32) -> f64 {
    (0..k).fold(1.0, |acc, _| acc * b as f64)
}

fn integer_root(x: f64, k: i32) -> usize {
    let mut r = (math::powf(x, 1.0 / k as f64) as usize).max(1);
    while ipow(r + 1, k) <= x {
        r += 1;
    }
    while r > 1 && ipow(r, k) > x {
        r -= 1;
    }
    r
}

fn fit_value(dirs: &[Vec2], y: &Signal, linear: bool) -> Option<f64> {
    for (i, a) in dirs.iter().enumerate() {
        if dirs[..i].iter().any(|b| (*a - *b).norm() <= 1e-9) {
            return None;
        }
    }
    Some(solve_fixed(dirs, y, linear).3)
}

fn uniform_dirs(n: usize, offset: f64) -> Vec<Vec2> {
    (0..n)
        .map(|k| Vec2::from_angle(offset + TAU * k as f64 / n as f64))
        .collect()
}

/// Direction sets for a fixed-direction fit with at most `m_under` indicator terms: shifted
/// uniform grids at offsets `j·2π/(n·G)`, `G ∈ {1, 2, 4}`, and a set whose half-circle
/// boundaries sit on the largest jumps of `y`. The best candidate is refined by coordinate
/// descent on the angles. Ties keep the earliest candidate.
pub fn search_directions(
    y: &Signal,
    m_under: usize,
    levels: usize,
    sweeps: usize,
) -> Result<DirectionSearch> {
    if m_under == 0 {
        return Err(Error::InsufficientPairs {
            needed: 1,
            available: 0,
        });
    }
    let mut budgets = Vec::new();
    if m_under >= 2 {
        budgets.push((m_under - 1, true));
    } else {
        budgets.push((0, true));
    }
    budgets.push((m_under, false));

    let mut jumps = y.pw.jumps();
    jumps.retain(|&(_, j)| j > 1e-12);
    jumps.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));

    let mut cands: Vec<(Vec<Vec2>, bool)> = Vec::new();
    for &(n, lin) in &budgets {
        if n == 0 {
            cands.push((Vec::new(), lin));
            continue;
        }
        for g in [1usize, 2, 4] {
            for j in 0..g {
                let off = TAU * j as f64 / (n * g) as f64;
                cands.push((uniform_dirs(n, off), lin));
            }
        }
        if !jumps.is_empty() {
            let mut d: Vec<Vec2> = jumps
                .iter()
                .take(n)
                .map(|&(t, _)| Vec2::from_angle(t + FRAC_PI_2))
                .collect();
            let mut k = 0;
            while d.len() < n {
                let c = Vec2::from_angle(0.5 + TAU * k as f64 / n as f64);
                if d.iter().all(|e| (*e - c).norm() > 1e-6) {
                    d.push(c);
                }
                k += 1;
            }
            cands.push((d, lin));
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, (d, lin)) in cands.iter().enumerate() {
        if let Some(v) = fit_value(d, y, *lin) {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    let (bi, mut value) = best.ok_or_else(|| Error::Singular("no valid direction set".into()))?;
    let (dirs, lin) = cands[bi].clone();
    let mut angles: Vec<f64> = dirs.iter().map(|d| d.angle()).collect();
    let n = angles.len();
    if n > 0 {
        for level in 0..levels {
            let h = TAU / (4 * n) as f64 / (1u64 << level) as f64;
            for _ in 0..sweeps {
                for i in 0..n {
                    for s in [h, -h] {
                        let mut trial = angles.clone();
                        trial[i] += s;
                        let d: Vec<Vec2> = trial.iter().map(|&t| Vec2::from_angle(t)).collect();
                        if let Some(v) = fit_value(&d, y, lin) {
                            if v < value {
                                value = v;
                                angles = trial;
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(DirectionSearch {
        directions: angles.iter().map(|&t| Vec2::from_angle(t)).collect(),
        include_linear: lin,
        value: value.max(0.0),
        candidates: cands.len(),
    })
}

/// Runs the localization construction: smooth `y` at `r ≈ R^{1/3}`, fit a closure element to
/// `y_r`, realize it at `h₀`, certify `|W_{h₀}| ≤ C(m)R`, then polish with projected gradient
/// descent inside that ball and compare against a closure-fit surrogate for the infimum.
pub fn thm2_pipeline(
    y: &Signal,
    signs: &SignPattern,
    r_ball: f64,
    opts: &LocalizeOptions,
) -> Result<LocalizationReport> {
    if !(r_ball >= 1.0) || !r_ball.is_finite() {
        return Err(Error::param("R", format!("{r_ball} must be finite and at least 1")));
    }
    let norm = y.norm();
    if norm > 1.0 + 1e-12 {
        return Err(Error::param("y", format!("L² norm {norm} exceeds 1")));
    }
    let m = signs.m();
    let mu = signs.underbar_m();
    if mu == 0 {
        return Err(Error::InsufficientPairs {
            needed: 1,
            available: 0,
        });
    }
    let c_m = signs.c_m();
    let r_smooth = smoothing_radius(r_ball);
    let heat = heat_smooth(y, r_smooth)?;
    let y_r = Signal::from(heat.y_r.clone());

    let (branch, signs_b) = if ipow(mu, 9) <= r_ball {
        (LocalizeBranch::Small, signs.clone())
    } else {
        let k = integer_root(r_ball, 9);
        (
            LocalizeBranch::Big { m_prime: 2 * k },
            SignPattern::alternating(2 * k)?,
        )
    };
    let mu_b = signs_b.underbar_m();
    let search = search_directions(&y_r, mu_b, opts.refine_levels, opts.refine_sweeps)?;
    let fit = best_fixed_direction_fit(&search.directions, &signs_b, &y_r, search.include_linear)?;
    let h = h0(r_ball, signs_b.m(), mu_b);
    let net_b = realize_closure(&fit.element, h)?;
    let (_, realization_valid) = realization_bound(&fit.element, h);
    let net = match branch {
        LocalizeBranch::Small => net_b.clone(),
        LocalizeBranch::Big { .. } => replicate(&net_b, signs)?,
    };
    let w_norm = net.weight_norm();
    let cert_rhs = c_m * r_ball;
    let model = CostModel::uniform(y.clone());
    let start_value = model.phi(&net);
    let polished = constrained_minimize(&net, &model, cert_rhs, opts.polish_steps)?;
    let surrogate = search_directions(y, mu, opts.refine_levels, opts.refine_sweeps)?;
    let unconstrained_estimate = surrogate.value.min(polished.value);
    let bv = y.bv_norm().bv;
    let r0 = math::powf(10.0 * bv, 6.0).max(4e7);
    Ok(LocalizationReport {
        r_ball,
        m,
        m_under: mu,
        c_m,
        r_smooth,
        smoothing_error_sq: heat.error_sq,
        branch,
        h0: h,
        w_norm,
        w_norm_branch: net_b.weight_norm(),
        cert_rhs,
        feasible: w_norm <= cert_rhs,
        realization_valid,
        start_value,
        constrained_value: polished.value,
        surrogate_value: surrogate.value,
        unconstrained_estimate,
        gap: polished.value - unconstrained_estimate,
        paper_bound: 5e4 * (bv * bv + 1.0) * math::powf(r_ball, -1.0 / 9.0),
        r0,
        meets_r0: r_ball >= r0,
    })
}
