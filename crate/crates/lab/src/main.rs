use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circnet::{commands, run, ExperimentConfig};

/// Experiments on shallow ReLU networks on the unit circle. Every key of a config file can
/// also be given as `--key value`; command-line values win.
///
/// Exit status: 0 when every asserted bound holds, 1 on a bound violation, 2 on a config error.
#[derive(Parser, Debug)]
#[command(name = "circnet", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// INI-style config file (`key = value`, optional `[subcommand]` sections).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: circnet-out/<subcommand>].
    #[arg(long)]
    out: Option<String>,
    /// Seed for every random choice [default: 0].
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads for parallel parts [default: all cores].
    #[arg(long)]
    threads: Option<String>,
}

trait Params {
    fn common(&self) -> &Common;
    fn overrides(&self) -> Vec<(&'static str, Option<String>)>;
}

macro_rules! params {
    ($name:ident { $($(#[$m:meta])* $field:ident = $key:literal,)* }) => {
        #[derive(Args, Debug)]
        struct $name {
            #[command(flatten)]
            common: Common,
            $($(#[$m])* #[arg(long = $key, value_name = "VALUE")] $field: Option<String>,)*
        }

        impl Params for $name {
            fn common(&self) -> &Common {
                &self.common
            }

            fn overrides(&self) -> Vec<(&'static str, Option<String>)> {
                vec![$(($key, self.$field.clone()),)*]
            }
        }
    };
}

params!(SmoothArgs {
    /// `corpus:NAME`, a .pwt file, or inline pieces `start width c0 c1 c2; …` [default: corpus:half_cos]
    target = "target",
    /// Scale the target to unit L² norm [default: false]
    normalize = "normalize",
    /// Comma-separated smoothing radii [default: 1,2,4,8,16,32,64]
    r = "r",
});

params!(ApproxArgs {
    /// Target, as for `smooth`; must have a linear antisymmetric part
    target = "target",
    /// Scale the target to unit L² norm [default: false]
    normalize = "normalize",
    /// Comma-separated values of m̲; the network uses m = 2m̲ alternating signs [default: 1,2,4,…,64]
    m_under = "m_under",
});

params!(FitArgs {
    /// Target, as for `smooth`
    target = "target",
    /// Scale the target to unit L² norm [default: false]
    normalize = "normalize",
    /// Number of nodes [default: 2(|directions| + 1)]
    m = "m",
    /// `alternating`, `positive` or a list such as `1,-1,1,-1` [default: alternating]
    signs = "signs",
    /// Comma-separated direction angles in radians
    directions = "directions",
    /// Number of random directions when `directions` is absent [default: 4]
    n_dirs = "n_dirs",
    /// Add the linear part realized by one alternating pair [default: true]
    include_linear = "include_linear",
});

params!(LocalizeArgs {
    /// Target, as for `smooth` [default: corpus:half_cos]
    target = "target",
    /// Scale the target to unit L² norm [default: true]
    normalize = "normalize",
    /// Number of nodes [default: 4]
    m = "m",
    /// Sign pattern [default: alternating]
    signs = "signs",
    /// Comma-separated ball radii [default: 100,1000,10000]
    r_ball = "R",
    /// Projected-gradient steps inside the ball [default: 200]
    polish_steps = "polish_steps",
    /// Coordinate-descent levels in the direction search [default: 6]
    refine_levels = "refine_levels",
    /// Coordinate-descent sweeps per level [default: 2]
    refine_sweeps = "refine_sweeps",
});

params!(FlowArgs {
    /// Target, as for `smooth`
    target = "target",
    /// Scale the target to unit L² norm [default: false]
    normalize = "normalize",
    /// `uniform` or a file of `angle weight` lines [default: uniform]
    measure = "measure",
    /// Initial network file (`m`, then `a w_x w_y` lines); random if absent
    network = "network",
    /// Number of nodes for a random start [default: 4]
    m = "m",
    /// Sign pattern for a random start [default: alternating]
    signs = "signs",
    /// Random start weights are uniform in [-s, s]² [default: 1]
    init_scale = "init_scale",
    /// Time step [default: 0.01]
    dt = "dt",
    /// Horizon [default: 10]
    t_end = "T",
    /// `euler`, `rk4` or `implicit` [default: rk4]
    integrator = "integrator",
    /// Record every n-th step [default: 1]
    record_every = "record_every",
    /// Factor applied to dt after each accepted step [default: 1]
    dt_growth = "dt_growth",
});

params!(DivergeArgs {
    /// Initial b₀ ≥ 1 [default: 1]
    b0 = "b0",
    /// Initial time step [default: 0.5]
    dt = "dt",
    /// Horizon [default: 1e10]
    t_end = "T",
    /// `euler`, `rk4` or `implicit` [default: implicit]
    integrator = "integrator",
    /// Record every n-th step [default: 1]
    record_every = "record_every",
    /// Factor applied to dt after each accepted step [default: 1.05]
    dt_growth = "dt_growth",
});

params!(LangevinArgs {
    /// Target, as for `smooth`
    target = "target",
    /// Scale the target to unit L² norm [default: false]
    normalize = "normalize",
    /// `uniform` or a file of `angle weight` lines [default: uniform]
    measure = "measure",
    /// Fixed initial network file; Gaussian start if absent
    network = "network",
    /// Number of nodes [default: 1]
    m = "m",
    /// Sign pattern [default: alternating]
    signs = "signs",
    /// Noise scale ε in (0, 1] [default: 0.5]
    eps = "eps",
    /// Penalization radius [default: 2]
    r_ball = "R",
    /// Time step [default: 0.004]
    dt = "dt",
    /// Horizon [default: 40]
    t_end = "T",
    /// Number of trajectories [default: 400]
    n_traj = "n_traj",
    /// Snapshot every n-th step [default: 1000]
    record_every = "record_every",
    /// Standard deviation of the Gaussian start [default: 1]
    init_std = "init_std",
    /// Lower edge of the |W| histogram [default: 0]
    hist_lo = "hist_lo",
    /// Upper edge of the |W| histogram [default: 3]
    hist_hi = "hist_hi",
    /// Histogram bins [default: 30]
    hist_bins = "hist_bins",
    /// Histogram start time [default: T/4]
    hist_from = "hist_from",
    /// Fail if the stationary total variation exceeds this (m = 1 only)
    tv_max = "tv_max",
});

params!(FpArgs {
    /// Target, as for `smooth`
    target = "target",
    /// Scale the target to unit L² norm [default: false]
    normalize = "normalize",
    /// Outer sign of the single node [default: 1]
    sign = "sign",
    /// Noise scale ε in (0, 1] [default: 0.5]
    eps = "eps",
    /// Penalization radius [default: 2]
    r_ball = "R",
    /// Cells per axis [default: 40]
    n = "n",
    /// Horizon [default: 12]
    t_end = "T",
    /// Requested time step, capped at the stability limit
    dt = "dt",
    /// Record every n-th step [default: 50]
    record_every = "record_every",
    /// `constant`, `linear:vx,vy` or `bump:cx,cy,width` [default: linear:1,0.5]
    init = "init",
});

params!(CertifyArgs {
    /// Comma-separated node counts [default: 2400]
    m = "m",
    /// Penalization radius [default: 10]
    r_ball = "R",
    /// Noise scale ε [default: 1]
    eps = "eps",
});

params!(VerifyArgs {
    /// Comma-separated criterion numbers [default: all]
    only = "only",
});

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Heat smoothing of a target over a list of radii
    Smooth(SmoothArgs),
    /// Constructive approximation over a list of m̲
    Approx(ApproxArgs),
    /// Best closure element for fixed directions, with per-sector residuals
    Fit(FitArgs),
    /// Localization pipeline over a list of ball radii
    Localize(LocalizeArgs),
    /// Gradient flow of the cost
    Flow(FlowArgs),
    /// The divergent two-node flow
    Diverge(DivergeArgs),
    /// Langevin ensemble of the penalized cost
    Langevin(LangevinArgs),
    /// One-node Fokker–Planck solver
    FokkerPlanck(FpArgs),
    /// Poincaré constant certificate
    Certify(CertifyArgs),
    /// Acceptance suite
    Verify(VerifyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, p): (&str, &dyn Params) = match &cli.cmd {
        Cmd::Smooth(a) => ("smooth", a),
        Cmd::Approx(a) => ("approx", a),
        Cmd::Fit(a) => ("fit", a),
        Cmd::Localize(a) => ("localize", a),
        Cmd::Flow(a) => ("flow", a),
        Cmd::Diverge(a) => ("diverge", a),
        Cmd::Langevin(a) => ("langevin", a),
        Cmd::FokkerPlanck(a) => ("fokker-planck", a),
        Cmd::Certify(a) => ("certify", a),
        Cmd::Verify(a) => ("verify", a),
    };
    let c = p.common();
    let mut overrides = p.overrides();
    overrides.push(("out", c.out.clone()));
    overrides.push(("seed", c.seed.clone()));
    overrides.push(("threads", c.threads.clone()));
    let result = ExperimentConfig::build(name, commands::keys(name), c.config.as_deref(), overrides)
        .and_then(|cfg| run(&cfg));
    match result {
        Ok(rep) => {
            for (k, v) in &rep.outcome.summary {
                println!("{k} = {v}");
            }
            println!("wrote {} files to {}", rep.outcome.files.len() + 1, rep.out_dir.display());
            for v in &rep.outcome.violations {
                eprintln!("violated {v}");
            }
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
