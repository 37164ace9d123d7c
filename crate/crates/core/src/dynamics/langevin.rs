use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{stacked_norm_sq, Vec2};
use crate::math::{self, TAU};
use crate::network::{ReluNetwork, SignPattern};

#[derive(Debug, Clone, PartialEq)]
pub enum InitSampler {
    Fixed(ReluNetwork),
    /// Independent `N(0, std²)` coordinates.
    Gaussian { signs: SignPattern, std: f64 },
}

impl InitSampler {
    fn signs(&self) -> &SignPattern {
        match self {
            InitSampler::Fixed(n) => &n.signs,
            InitSampler::Gaussian { signs, .. } => signs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginalKind {
    WeightNorm,
    /// Coordinate `k` of the stacked vector `(w_1x, w_1y, w_2x, …)`.
    Coordinate(usize),
    PhiR,
}

/// A 1-D marginal accumulated over all steps with `t ≥ t_from`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub kind: MarginalKind,
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
    pub t_from: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LangevinConfig {
    pub eps: f64,
    pub r: f64,
    pub dt: f64,
    pub t_end: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub record_every: usize,
    pub marginals: Vec<Marginal>,
}

impl LangevinConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::param("eps", "must lie in (0, 1]"));
        }
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(Error::param("R", "must be positive and finite"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param("dt", "must be positive and finite"));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::param("T", "must be positive and finite"));
        }
        if self.n_traj == 0 {
            return Err(Error::param("n_traj", "must be at least 1"));
        }
        if self.record_every == 0 {
            return Err(Error::param("record_every", "must be at least 1"));
        }
        for m in &self.marginals {
            if !(m.hi > m.lo) || m.bins == 0 {
                return Err(Error::param("marginal", "needs lo < hi and at least one bin"));
            }
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        math::ceil(self.t_end / self.dt - 1e-9) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    fn new(m: &Marginal) -> Self {
        Histogram {
            lo: m.lo,
            hi: m.hi,
            counts: alloc::vec![0; m.bins],
            below: 0,
            above: 0,
        }
    }

    fn push(&mut self, x: f64) {
        if x < self.lo {
            self.below += 1;
        } else if x >= self.hi {
            self.above += 1;
        } else {
            let n = self.counts.len();
            let k = ((x - self.lo) / (self.hi - self.lo) * n as f64) as usize;
            self.counts[k.min(n - 1)] += 1;
        }
    }

    fn merge(&mut self, o: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
        self.below += o.below;
        self.above += o.above;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.below + self.above
    }

    pub fn bin_edges(&self, k: usize) -> (f64, f64) {
        let w = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + w * k as f64, self.lo + w * (k + 1) as f64)
    }

    /// Bin probabilities relative to all samples (including those out of range).
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.total().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Per-record values of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub phi_r: f64,
    pub wnorm: f64,
    pub coord0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryOutput {
    pub records: Vec<Record>,
    pub histograms: Vec<Histogram>,
    pub finite: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub phi_mean: f64,
    pub phi_p10: f64,
    pub phi_p90: f64,
    pub wnorm_mean: f64,
    pub wnorm_p10: f64,
    pub wnorm_p50: f64,
    pub wnorm_p90: f64,
    pub coord0_mean: f64,
    pub coord0_var: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub snapshots: Vec<Snapshot>,
    pub histograms: Vec<Histogram>,
    pub n_traj: usize,
    pub dropped: usize,
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Fills `out` with standard normals by Box–Muller; consumes `2·⌈len/2⌉` 64-bit words.
fn normals(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let mut k = 0;
    while k < out.len() {
        let u1 = 1.0 - uniform01(rng);
        let u2 = uniform01(rng);
        let r = math::sqrt(-2.0 * math::ln(u1));
        let (s, c) = math::sin_cos(TAU * u2);
        out[k] = r * c;
        if k + 1 < out.len() {
            out[k + 1] = r * s;
        }
        k += 2;
    }
}

fn words_per_step(m: usize) -> u128 {
    // two u64 per normal pair, two u32 words per u64
    4 * m as u128
}

fn stream(seed: u64, traj: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(traj as u64);
    rng
}

fn marginal_value(kind: MarginalKind, w: &[Vec2], phi_r: f64) -> f64 {
    match kind {
        MarginalKind::WeightNorm => math::sqrt(stacked_norm_sq(w)),
        MarginalKind::Coordinate(k) => {
            let v = w.get(k / 2).copied().unwrap_or(Vec2::ZERO);
            if k % 2 == 0 {
                v.x
            } else {
                v.y
            }
        }
        MarginalKind::PhiR => phi_r,
    }
}

/// Euler–Maruyama for `dW = −∇Φ_R dt + √2 ε dB` along trajectory `traj`. The noise at step
/// `k` is read from the ChaCha stream `traj` at word offset `k·4m`, so the result depends
/// only on `(seed, traj, config)`.
pub fn run_trajectory(
    model: &CostModel,
    init: &InitSampler,
    cfg: &LangevinConfig,
    traj: usize,
) -> TrajectoryOutput {
    let signs = init.signs().clone();
    let m = signs.m();
    let mut rng = stream(cfg.seed, traj);
    let mut xi = alloc::vec![0.0; 2 * m];
    let mut w: Vec<Vec2> = match init {
        InitSampler::Fixed(n) => n.weights.clone(),
        InitSampler::Gaussian { std, .. } => {
            rng.set_word_pos(0);
            normals(&mut rng, &mut xi);
            (0..m).map(|i| *std * Vec2::new(xi[2 * i], xi[2 * i + 1])).collect()
        }
    };
    let mut net = ReluNetwork { signs, weights: w.clone() };
    let n_steps = cfg.n_steps();
    let amp = math::sqrt(2.0 * cfg.dt) * cfg.eps;
    let mut hist: Vec<Histogram> = cfg.marginals.iter().map(Histogram::new).collect();
    let mut records = Vec::with_capacity(n_steps / cfg.record_every + 2);
    let mut rep = model.phi_r(&net, cfg.r);
    let record = |w: &[Vec2], phi_r: f64| Record {
        phi_r,
        wnorm: math::sqrt(stacked_norm_sq(w)),
        coord0: w[0].x,
    };
    records.push(record(&w, rep.phi_r));
    for (h, mg) in hist.iter_mut().zip(&cfg.marginals) {
        if mg.t_from <= 0.0 {
            h.push(marginal_value(mg.kind, &w, rep.phi_r));
        }
    }
    for step in 1..=n_steps {
        rng.set_word_pos(step as u128 * words_per_step(m));
        normals(&mut rng, &mut xi);
        for i in 0..m {
            w[i] = w[i] - cfg.dt * rep.grad_r[i] + amp * Vec2::new(xi[2 * i], xi[2 * i + 1]);
        }
        if !w.iter().all(|v| v.is_finite()) {
            return TrajectoryOutput { records, histograms: hist, finite: false };
        }
        net.weights.copy_from_slice(&w);
        rep = model.phi_r(&net, cfg.r);
        if !rep.phi_r.is_finite() {
            return TrajectoryOutput { records, histograms: hist, finite: false };
        }
        let t = step as f64 * cfg.dt;
        for (h, mg) in hist.iter_mut().zip(&cfg.marginals) {
            if t >= mg.t_from {
                h.push(marginal_value(mg.kind, &w, rep.phi_r));
            }
        }
        if step % cfg.record_every == 0 || step == n_steps {
            records.push(record(&w, rep.phi_r));
        }
    }
    TrajectoryOutput { records, histograms: hist, finite: true }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = math::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let f = pos - lo as f64;
    sorted[lo] + f * (sorted[hi] - sorted[lo])
}

fn record_times(cfg: &LangevinConfig) -> Vec<f64> {
    let n = cfg.n_steps();
    let mut t = alloc::vec![0.0];
    for step in 1..=n {
        if step % cfg.record_every == 0 || step == n {
            t.push(step as f64 * cfg.dt);
        }
    }
    t
}

/// Combines trajectory outputs in index order. Fails if more than 1% were dropped.
pub fn aggregate(cfg: &LangevinConfig, outputs: &[TrajectoryOutput]) -> Result<EnsembleStats> {
    let kept: Vec<&TrajectoryOutput> = outputs.iter().filter(|o| o.finite).collect();
    let dropped = outputs.len() - kept.len();
    if dropped * 100 > outputs.len() {
        return Err(Error::CheckFailed(alloc::format!(
            "{dropped} of {} trajectories became non-finite",
            outputs.len()
        )));
    }
    let times = record_times(cfg);
    let mut snapshots = Vec::with_capacity(times.len());
    let n = kept.len() as f64;
    for (k, &t) in times.iter().enumerate() {
        let mut phi: Vec<f64> = kept.iter().map(|o| o.records[k].phi_r).collect();
        let mut wn: Vec<f64> = kept.iter().map(|o| o.records[k].wnorm).collect();
        let c0: Vec<f64> = kept.iter().map(|o| o.records[k].coord0).collect();
        let phi_mean = math::pairwise_sum(&phi) / n;
        let wnorm_mean = math::pairwise_sum(&wn) / n;
        let coord0_mean = math::pairwise_sum(&c0) / n;
        let dev: Vec<f64> = c0.iter().map(|x| (x - coord0_mean) * (x - coord0_mean)).collect();
        let coord0_var = math::pairwise_sum(&dev) / (n - 1.0).max(1.0);
        phi.sort_by(|a, b| a.total_cmp(b));
        wn.sort_by(|a, b| a.total_cmp(b));
        snapshots.push(Snapshot {
            t,
            phi_mean,
            phi_p10: quantile(&phi, 0.1),
            phi_p90: quantile(&phi, 0.9),
            wnorm_mean,
            wnorm_p10: quantile(&wn, 0.1),
            wnorm_p50: quantile(&wn, 0.5),
            wnorm_p90: quantile(&wn, 0.9),
            coord0_mean,
            coord0_var,
        });
    }
    let mut histograms: Vec<Histogram> = cfg.marginals.iter().map(Histogram::new).collect();
    for o in &kept {
        for (h, oh) in histograms.iter_mut().zip(&o.histograms) {
            h.merge(oh);
        }
    }
    Ok(EnsembleStats {
        snapshots,
        histograms,
        n_traj: outputs.len(),
        dropped,
    })
}

/// Sequential ensemble run; see [`run_trajectory`] and [`aggregate`].
pub fn langevin_ensemble(
    model: &CostModel,
    init: &InitSampler,
    cfg: &LangevinConfig,
) -> Result<EnsembleStats> {
    cfg.validate()?;
    let outputs: Vec<TrajectoryOutput> =
        (0..cfg.n_traj).map(|k| run_trajectory(model, init, cfg, k)).collect();
    aggregate(cfg, &outputs)
}

/// Bin probabilities of `|w|` under the density `∝ e^{−Φ_R(w)/ε²}` on `ℝ²` (one node),
/// restricted to `[lo, hi)` and normalized there. Composite Gauss–Legendre in `|w|`,
/// midpoint rule in angle.
pub fn stationary_norm_histogram(
    model: &CostModel,
    signs: &SignPattern,
    eps: f64,
    r: f64,
    lo: f64,
    hi: f64,
    bins: usize,
) -> Result<Vec<f64>> {
    if signs.m() != 1 {
        return Err(Error::param("m", "the stationary quadrature is for one node"));
    }
    let nphi = 512;
    let panels = 8;
    let bw = (hi - lo) / bins as f64;
    let mut net = ReluNetwork { signs: signs.clone(), weights: alloc::vec![Vec2::ZERO] };
    // Shift exponents by the minimum over a coarse pass to avoid underflow.
    let mut min_e = f64::INFINITY;
    let mut vals = Vec::with_capacity(bins);
    for b in 0..bins {
        let mut terms = Vec::new();
        for p in 0..panels {
            let a = lo + bw * b as f64 + bw * p as f64 / panels as f64;
            let h = bw / panels as f64;
            for k in 0..5 {
                let rho = a + 0.5 * h * (1.0 + math::GL5_NODES[k]);
                for j in 0..nphi {
                    let phi = TAU * (j as f64 + 0.5) / nphi as f64;
                    net.weights[0] = rho * Vec2::from_angle(phi);
                    let e = model.phi_r(&net, r).phi_r / (eps * eps);
                    min_e = min_e.min(e);
                    terms.push((0.5 * h * math::GL5_WEIGHTS[k] * rho * TAU / nphi as f64, e));
                }
            }
        }
        vals.push(terms);
    }
    let mass: Vec<f64> = vals
        .iter()
        .map(|terms| {
            let t: Vec<f64> = terms.iter().map(|&(w, e)| w * math::exp(min_e - e)).collect();
            math::pairwise_sum(&t)
        })
        .collect();
    let total = math::pairwise_sum(&mass);
    Ok(mass.iter().map(|x| x / total).collect())
}
