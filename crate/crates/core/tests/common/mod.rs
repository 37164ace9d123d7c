#![allow(dead_code)]

use std::f64::consts::TAU;

use circnet_core::{PiecewiseTrig, TrigPiece, Arc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const GL_X: [f64; 10] = [
    -0.973_906_528_517_171_7,
    -0.865_063_366_688_984_5,
    -0.679_409_568_299_024_4,
    -0.433_395_394_129_247_2,
    -0.148_874_338_981_631_2,
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 10] = [
    0.066_671_344_308_688_1,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_0,
    0.269_266_719_309_996_4,
    0.295_524_224_714_752_9,
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Composite 10-point Gauss–Legendre on `[a, b]` with `n` panels.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.0;
    for p in 0..n {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        for k in 0..10 {
            s += GL_W[k] * f(mid + 0.5 * h * GL_X[k]);
        }
    }
    s * 0.5 * h
}

/// Averaged integral over the circle of a function that is smooth between the given breaks.
pub fn circle_avg(f: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    let mut b: Vec<f64> = breaks.iter().map(|&t| t.rem_euclid(TAU)).collect();
    b.push(0.0);
    b.sort_by(|x, y| x.total_cmp(y));
    b.dedup();
    b.push(TAU);
    let mut s = 0.0;
    for w in b.windows(2) {
        if w[1] > w[0] {
            s += quad(&f, w[0], w[1], 40);
        }
    }
    s / TAU
}

/// Random piecewise function with `n` pieces and coefficients in `[-1, 1]`.
pub fn random_piecewise(r: &mut impl Rng, n: usize) -> PiecewiseTrig {
    let mut cuts: Vec<f64> = (0..n).map(|_| r.random::<f64>() * TAU).collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    let pieces = (0..n)
        .map(|i| {
            let end = if i + 1 < n { cuts[i + 1] } else { cuts[0] + TAU };
            TrigPiece {
                arc: Arc::new(cuts[i], end - cuts[i]).unwrap(),
                c0: r.random_range(-1.0..1.0),
                c1: r.random_range(-1.0..1.0),
                c2: r.random_range(-1.0..1.0),
            }
        })
        .collect();
    PiecewiseTrig::from_pieces(pieces).unwrap()
}

/// `I{x₂ ≥ 0} x₁`.
pub fn half_cos() -> PiecewiseTrig {
    PiecewiseTrig::from_pieces(vec![
        TrigPiece { arc: Arc::new(0.0, std::f64::consts::PI).unwrap(), c0: 0.0, c1: 1.0, c2: 0.0 },
        TrigPiece {
            arc: Arc::new(std::f64::consts::PI, std::f64::consts::PI).unwrap(),
            c0: 0.0,
            c1: 0.0,
            c2: 0.0,
        },
    ])
    .unwrap()
}

pub fn indicator(start: f64, width: f64) -> PiecewiseTrig {
    let one = TrigPiece { arc: Arc::new(start, width).unwrap(), c0: 1.0, c1: 0.0, c2: 0.0 };
    if width >= TAU {
        return PiecewiseTrig::constant(1.0);
    }
    let zero = TrigPiece {
        arc: Arc::new(start + width, TAU - width).unwrap(),
        c0: 0.0,
        c1: 0.0,
        c2: 0.0,
    };
    PiecewiseTrig::from_pieces(vec![one, zero]).unwrap()
}

pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (diff {}, tol {tol})", (a - b).abs());
}

pub fn random_piecewise_in(r: &mut impl Rng, lo: usize, hi: usize) -> PiecewiseTrig {
    let n = r.random_range(lo..hi);
    random_piecewise(r, n)
}

pub fn random_signs(r: &mut impl Rng, m: usize) -> circnet_core::SignPattern {
    circnet_core::SignPattern::new((0..m).map(|_| if r.random::<bool>() { 1 } else { -1 }).collect())
        .unwrap()
}

pub fn random_weights(r: &mut impl Rng, m: usize, scale: f64) -> Vec<circnet_core::Vec2> {
    (0..m)
        .map(|_| circnet_core::Vec2::new(r.random_range(-scale..scale), r.random_range(-scale..scale)))
        .collect()
}

pub fn random_network(r: &mut impl Rng, m: usize, scale: f64) -> circnet_core::ReluNetwork {
    let s = random_signs(r, m);
    let w = random_weights(r, m, scale);
    circnet_core::ReluNetwork::new(s, w).unwrap()
}

/// `‖f - g‖₂` for exact piecewise functions.
pub fn l2_dist(f: &PiecewiseTrig, g: &PiecewiseTrig) -> f64 {
    f.sub(g).norm()
}
