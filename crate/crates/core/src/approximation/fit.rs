use alloc::format;
use alloc::vec::Vec;

use crate::cost::{pair_moment, Sym2};
use crate::error::{Error, Result};
use crate::geometry::{half_circle, sectors, Arc, Signal, Vec2};
use crate::linalg::{solve_gram, Matrix};
use crate::math::{self, PI, TAU};
use crate::network::{ClosureElement, SignPattern};

const RANK_TOL: f64 = 1e-12;
const DUPLICATE_TOL: f64 = 1e-12;

/// `(αᵢ, |uᵢ|)` of one indicator term (stored scale, i.e. including `√m`) with the size flags
/// `|uᵢ|/√m ≤ 6π²‖y‖∞` and `|αᵢ|/√m ≤ 6π²‖y‖_{C¹}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEntry {
    pub alpha: f64,
    pub u_norm: f64,
    pub u_ok: bool,
    pub alpha_ok: bool,
}

/// The slope `ṽ_S/√m` of `g^s` on one sector against `3π² min{‖y‖_{C¹}, ‖y‖∞/|S|}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSlope {
    pub slope: f64,
    pub bound: f64,
}

impl SectorSlope {
    pub fn pass(&self) -> bool {
        self.slope <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub element: ClosureElement,
    /// Function-level vectors `vᵢ` (without the `√m` factor), in input order.
    pub coefficients: Vec<Vec2>,
    /// Function-level linear part `l` (zero unless requested).
    pub linear: Vec2,
    pub residual_sq: f64,
    pub residual_l2: f64,
    pub rank: usize,
    pub rank_deficient: bool,
    pub sectors: Vec<Arc>,
    /// `∫_S (g^s − y^s) x dx` per sector (averaged).
    pub el_residuals: Vec<Vec2>,
    pub sector_slopes: Vec<SectorSlope>,
    pub slope_report: Vec<SlopeEntry>,
    /// The size flags assume `y ∈ C¹`; false when the target jumps.
    pub smooth_target: bool,
}

impl FitResult {
    pub fn max_el_residual(&self) -> f64 {
        self.el_residuals.iter().fold(0.0f64, |m, r| m.max(r.norm()))
    }
}

fn set_block(g: &mut Matrix, i: usize, j: usize, m: Sym2) {
    g.set(2 * i, 2 * j, m.xx);
    g.set(2 * i, 2 * j + 1, m.xy);
    g.set(2 * i + 1, 2 * j, m.xy);
    g.set(2 * i + 1, 2 * j + 1, m.yy);
}

fn normalize(directions: &[Vec2]) -> Result<Vec<Vec2>> {
    let mut out: Vec<Vec2> = Vec::with_capacity(directions.len());
    for (i, d) in directions.iter().enumerate() {
        let n = d.norm();
        if !(n > 0.0) || !d.is_finite() {
            return Err(Error::param("directions", format!("direction {i} is zero or non-finite")));
        }
        let u = (1.0 / n) * *d;
        if let Some(j) = out.iter().position(|o| (*o - u).norm() <= DUPLICATE_TOL) {
            return Err(Error::Singular(format!("directions {j} and {i} coincide")));
        }
        out.push(u);
    }
    Ok(out)
}

/// Least-squares coefficients for fixed directions: `(v, l, rank, ‖y‖² − xᵀb)`.
pub(crate) fn solve_fixed(
    dirs: &[Vec2],
    y: &Signal,
    include_linear: bool,
) -> (Vec<Vec2>, Vec2, usize, f64) {
    let nj = dirs.len();
    let nb = nj + include_linear as usize;
    let starts: Vec<Option<f64>> = dirs
        .iter()
        .map(|&d| half_circle(d))
        .chain(include_linear.then_some(None))
        .collect();
    let mut g = Matrix::zeros(2 * nb);
    let mut b = alloc::vec![0.0; 2 * nb];
    for i in 0..nb {
        for j in i..nb {
            let m = pair_moment(starts[i], starts[j]);
            set_block(&mut g, i, j, m);
            set_block(&mut g, j, i, m);
        }
        let p = match starts[i] {
            Some(s) => y.arc_projection(s, PI),
            None => y.arc_projection(0.0, TAU),
        };
        b[2 * i] = p[1];
        b[2 * i + 1] = p[2];
    }
    let sol = solve_gram(&g, &b, RANK_TOL);
    let xb: f64 = sol.x.iter().zip(&b).map(|(x, y)| x * y).sum();
    let v: Vec<Vec2> = (0..nj).map(|i| Vec2::new(sol.x[2 * i], sol.x[2 * i + 1])).collect();
    let l = if include_linear {
        Vec2::new(sol.x[2 * nj], sol.x[2 * nj + 1])
    } else {
        Vec2::ZERO
    };
    (v, l, sol.rank, y.norm_sq() - xb)
}

/// Best `g = Σᵢ I{ŵᵢ·x ≥ 0}(vᵢ·x) [+ l·x]` over `vᵢ, l ∈ ℝ²` for fixed directions, from the
/// exact arc-moment Gram matrix. The linear part is realized by one alternating ReLU pair, so it
/// needs `|directions| < m̲`.
pub fn best_fixed_direction_fit(
    directions: &[Vec2],
    signs: &SignPattern,
    y: &Signal,
    include_linear: bool,
) -> Result<FitResult> {
    let dirs = normalize(directions)?;
    let (v, l, rank, _) = solve_fixed(&dirs, y, include_linear);
    let nb = 2 * (dirs.len() + include_linear as usize);
    let j_terms: Vec<(Vec2, Vec2)> = dirs.iter().copied().zip(v.iter().copied()).collect();
    let k_terms: Vec<(i8, Vec2)> = if l == Vec2::ZERO {
        Vec::new()
    } else {
        alloc::vec![(1, l), (-1, -l)]
    };
    let element = ClosureElement::from_function_terms(signs.clone(), &j_terms, &k_terms)?;
    let g: Signal = element.to_piecewise().into();
    let d = g.sub(y);
    let residual_sq = d.norm_sq().max(0.0);
    let (ds, _) = d.sym_decompose();
    let (gs, _) = g.sym_decompose();
    let arcs = if dirs.is_empty() {
        alloc::vec![Arc::full()]
    } else {
        sectors(&dirs)?.arcs
    };
    let bvn = y.bv_norm();
    let c1 = y.c1_norm();
    let smooth_target = y.jump_angles(1e-12).is_empty();
    let mut el_residuals = Vec::with_capacity(arcs.len());
    let mut sector_slopes = Vec::with_capacity(arcs.len());
    for a in &arcs {
        let p = ds.arc_projection(a.start(), a.width());
        el_residuals.push(Vec2::new(p[1], p[2]));
        let c = gs.pw.coeffs_at(a.mid());
        sector_slopes.push(SectorSlope {
            slope: math::hypot(c[1], c[2]),
            bound: 3.0 * PI * PI * c1.min(bvn.sup / a.width()),
        });
    }
    let sm = math::sqrt(signs.m() as f64);
    let k6 = 6.0 * PI * PI;
    let slope_report = element
        .j_terms
        .iter()
        .map(|t| {
            let (alpha, u) = t.split();
            let u_norm = u.norm();
            SlopeEntry {
                alpha,
                u_norm,
                u_ok: u_norm / sm <= k6 * bvn.sup,
                alpha_ok: alpha.abs() / sm <= k6 * c1,
            }
        })
        .collect();
    Ok(FitResult {
        element,
        coefficients: v,
        linear: l,
        residual_sq,
        residual_l2: math::sqrt(residual_sq),
        rank,
        rank_deficient: rank < nb,
        sectors: arcs,
        el_residuals,
        sector_slopes,
        slope_report,
        smooth_target,
    })
}
