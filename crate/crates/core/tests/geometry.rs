mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use circnet_core::geometry::{sector_coercivity_constant, sectors};
use circnet_core::{arc_moments, Arc, DataMeasure, PiecewiseTrig, Signal, TrigSeries, Vec2};
use common::*;
use rand::Rng;

#[test]
fn moments_of_full_circle() {
    let m = arc_moments(&Arc::full());
    assert_close(m.m1, 1.0, 1e-15);
    assert_close(m.mc, 0.0, 1e-15);
    assert_close(m.ms, 0.0, 1e-15);
    assert_close(m.mcc, 0.5, 1e-15);
    assert_close(m.mcs, 0.0, 1e-15);
    assert_close(m.mss, 0.5, 1e-15);
}

#[test]
fn moments_of_right_half_circle() {
    let m = arc_moments(&Arc::new(-FRAC_PI_2, PI).unwrap());
    assert_close(m.m1, 0.5, 1e-15);
    assert_close(m.mc, 1.0 / PI, 1e-15);
    assert_close(m.ms, 0.0, 1e-15);
    assert_close(m.mcc, 0.25, 1e-15);
    assert_close(m.mcs, 0.0, 1e-15);
    assert_close(m.mss, 0.25, 1e-15);
}

#[test]
fn moments_match_quadrature() {
    let mut r = rng(1);
    for _ in 0..200 {
        let start = r.random::<f64>() * TAU;
        // widths on both sides of the series switch
        let width = if r.random::<bool>() { r.random::<f64>() * TAU } else { r.random::<f64>() * 2.2 };
        let width = width.max(1e-9);
        let m = arc_moments(&Arc::new(start, width).unwrap());
        let q = |f: &dyn Fn(f64) -> f64| quad(f, start, start + width, 20) / TAU;
        assert_close(m.m1, q(&|_| 1.0), 1e-14);
        assert_close(m.mc, q(&|t: f64| t.cos()), 1e-14);
        assert_close(m.ms, q(&|t: f64| t.sin()), 1e-14);
        assert_close(m.mcc, q(&|t: f64| t.cos() * t.cos()), 1e-14);
        assert_close(m.mcs, q(&|t: f64| t.cos() * t.sin()), 1e-14);
        assert_close(m.mss, q(&|t: f64| t.sin() * t.sin()), 1e-14);
    }
}

#[test]
fn moments_vanish_with_width() {
    for e in 1..12 {
        let w = 10f64.powi(-e);
        let m = arc_moments(&Arc::new(1.0, w).unwrap());
        for v in [m.m1, m.mc, m.ms, m.mcc, m.mcs, m.mss] {
            assert!(v.abs() <= w / TAU * 1.000001);
        }
    }
}

#[test]
fn relu_piece_has_norm_one_quarter() {
    let f = PiecewiseTrig::from_pieces(vec![
        circnet_core::TrigPiece { arc: Arc::new(-FRAC_PI_2, PI).unwrap(), c0: 0.0, c1: 1.0, c2: 0.0 },
        circnet_core::TrigPiece { arc: Arc::new(FRAC_PI_2, PI).unwrap(), c0: 0.0, c1: 0.0, c2: 0.0 },
    ])
    .unwrap();
    assert_close(f.inner(&f), 0.25, 1e-15);
    assert_close(f.inner(&PiecewiseTrig::zero()), 0.0, 0.0);
    let s = PiecewiseTrig::from_coeffs([0.0, 0.0, 1.0]);
    let c = PiecewiseTrig::from_coeffs([0.0, 1.0, 0.0]);
    assert_close(s.inner(&c), 0.0, 1e-16);
}

#[test]
fn inner_products_match_quadrature() {
    let mut r = rng(2);
    for _ in 0..100 {
        let f = random_piecewise_in(&mut r, 1, 7);
        let g = random_piecewise_in(&mut r, 1, 7);
        let mut br = f.breakpoints();
        br.extend(g.breakpoints());
        let q = circle_avg(|t| f.eval(t) * g.eval(t), &br);
        assert_close(f.inner(&g), q, 1e-13);
        let sum = f.add(&g);
        let q2 = circle_avg(|t| sum.eval(t).powi(2), &br);
        assert_close(sum.norm_sq(), q2, 1e-13);
    }
}

#[test]
fn refinement_preserves_values() {
    let mut r = rng(3);
    for _ in 0..20 {
        let f = random_piecewise(&mut r, 5);
        let g = random_piecewise(&mut r, 4);
        let sum = f.add(&g);
        let diff = f.sub(&g);
        for _ in 0..5000 {
            let t = r.random::<f64>() * TAU;
            assert_close(sum.eval(t), f.eval(t) + g.eval(t), 1e-12);
            assert_close(diff.eval(t), f.eval(t) - g.eval(t), 1e-12);
        }
    }
}

#[test]
fn discrete_measure_on_boundary_uses_right_piece() {
    let y = half_cos();
    let mu = DataMeasure::discrete(vec![(0.0, 0.5), (PI, 0.5)]).unwrap();
    // at 0 the right piece is x1 = 1; at π the right piece is 0
    let v = Signal::from(y.clone()).norm_sq_measure(&mu);
    assert_close(v, 0.5, 1e-15);
    assert!(DataMeasure::discrete(vec![(0.0, 0.5)]).is_err());
}

#[test]
fn symmetric_decomposition_of_half_cos() {
    let y = half_cos();
    let (ys, ya) = y.sym_decompose();
    let mut r = rng(4);
    for _ in 0..1000 {
        let t = r.random::<f64>() * TAU;
        let x1 = t.cos();
        let expect_s = if t.sin() >= 0.0 { 0.5 * x1 } else { -0.5 * x1 };
        assert_close(ys.eval(t), expect_s, 1e-15);
        assert_close(ya.eval(t), 0.5 * x1, 1e-15);
    }
    let lin = PiecewiseTrig::from_coeffs([0.0, 0.0, 1.0]);
    let (ls, la) = lin.sym_decompose();
    assert!(ls.is_zero(0.0));
    assert_eq!(la, lin);
}

#[test]
fn symmetric_decomposition_properties() {
    let mut r = rng(5);
    for _ in 0..50 {
        let f = random_piecewise_in(&mut r, 1, 6);
        let (fs, fa) = f.sym_decompose();
        let (fss, fsa) = fs.sym_decompose();
        assert!(fsa.is_zero(1e-15));
        for _ in 0..200 {
            let t = r.random::<f64>() * TAU;
            assert_close(fs.eval(t) + fa.eval(t), f.eval(t), 1e-15);
            assert_close(fs.eval(t), fs.eval(t + PI), 1e-14);
            assert_close(fa.eval(t), -fa.eval(t + PI), 1e-14);
            assert_close(fss.eval(t), fs.eval(t), 1e-15);
        }
    }
}

#[test]
fn fourier_of_indicator() {
    let f = indicator(0.0, PI);
    let (a, b) = f.fourier(64);
    assert_close(b[0], 0.5, 1e-15);
    for k in 1..=64 {
        let expect = if k % 2 == 1 { 2.0 / (PI * k as f64) } else { 0.0 };
        assert_close(a[k], expect, 1e-14);
        assert_close(b[k], 0.0, 1e-14);
    }
}

#[test]
fn fourier_matches_quadrature() {
    let mut r = rng(6);
    for _ in 0..20 {
        let f = random_piecewise_in(&mut r, 1, 6);
        let (a, b) = f.fourier(40);
        let br = f.breakpoints();
        assert_close(b[0], circle_avg(|t| f.eval(t), &br), 1e-13);
        for k in 1..=40 {
            let kf = k as f64;
            let qa = 2.0 * circle_avg(|t| f.eval(t) * (kf * t).sin(), &br);
            let qb = 2.0 * circle_avg(|t| f.eval(t) * (kf * t).cos(), &br);
            assert_close(a[k], qa, 1e-12);
            assert_close(b[k], qb, 1e-12);
        }
    }
}

#[test]
fn constant_has_only_mean() {
    let (a, b) = PiecewiseTrig::constant(2.5).fourier(10);
    assert_eq!(b[0], 2.5);
    assert!(a.iter().chain(b[1..].iter()).all(|x| x.abs() < 1e-15));
}

#[test]
fn parseval_with_tail_envelope() {
    let mut r = rng(7);
    let kmax = 256;
    for _ in 0..10 {
        let f = random_piecewise_in(&mut r, 2, 6);
        let (a, b) = f.fourier(kmax);
        let partial: f64 = b[0] * b[0] + 0.5 * (1..=kmax).map(|k| a[k] * a[k] + b[k] * b[k]).sum::<f64>();
        let bv = f.bv_norm().bv;
        let tail = f.norm_sq() - partial;
        assert!(tail >= -1e-13, "tail {tail}");
        assert!(tail <= 8.0 * bv * bv / kmax as f64, "tail {tail} exceeds envelope");
    }
}

#[test]
fn bv_of_half_cos() {
    let bv = half_cos().bv_norm();
    assert_close(bv.sup, 1.0, 1e-15);
    assert_close(bv.variation, 2.0 / PI, 1e-15);
    assert_close(bv.bv, 1.0 + 2.0 / PI, 1e-15);
    let c = PiecewiseTrig::constant(-3.0).bv_norm();
    assert_eq!((c.sup, c.variation, c.bv), (3.0, 0.0, 3.0));
}

#[test]
fn bv_of_cos_2theta() {
    let y = Signal::from(TrigSeries::cos_k(2, 1.0));
    let bv = y.bv_norm();
    assert_close(bv.sup, 1.0, 1e-12);
    assert_close(bv.variation, 4.0 / PI, 1e-12);
    // |cos θ| on two pieces: ∫|sin θ| = 4 over 2π
    let abs_cos = PiecewiseTrig::from_pieces(vec![
        circnet_core::TrigPiece { arc: Arc::new(-FRAC_PI_2, PI).unwrap(), c0: 0.0, c1: 1.0, c2: 0.0 },
        circnet_core::TrigPiece { arc: Arc::new(FRAC_PI_2, PI).unwrap(), c0: 0.0, c1: -1.0, c2: 0.0 },
    ])
    .unwrap();
    assert_close(abs_cos.bv_norm().variation, 2.0 / PI, 1e-15);
}

fn partition_variation(f: &dyn Fn(f64) -> f64, breaks: &[f64], n: usize) -> f64 {
    // right and left limits at each break are both sampled
    let mut pts: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
    for &b in breaks {
        pts.push(b);
    }
    pts.sort_by(|a, b| a.total_cmp(b));
    let mut var = 0.0;
    let eps = 1e-13;
    let mut prev = f(pts[0]);
    for w in pts.windows(2).map(|w| w[1]).chain(std::iter::once(pts[0] + TAU)) {
        let left = f(w - eps);
        let right = f(w);
        var += (left - prev).abs() + (right - left).abs();
        prev = right;
    }
    var / TAU
}

#[test]
fn bv_matches_partition_supremum() {
    let mut r = rng(8);
    for _ in 0..30 {
        let f = random_piecewise_in(&mut r, 1, 6);
        let exact = f.bv_norm();
        let est = partition_variation(&|t| f.eval(t), &f.breakpoints(), 10_000);
        assert!(est <= exact.variation + 1e-9, "{est} > {}", exact.variation);
        assert_close(est, exact.variation, 1e-6);
        let sampled_sup = (0..10_000)
            .map(|i| f.eval(TAU * i as f64 / 1e4).abs())
            .fold(0.0f64, f64::max);
        assert!(sampled_sup <= exact.sup + 1e-15);
    }
}

#[test]
fn series_signal_bv_matches_partition() {
    let mut r = rng(9);
    for _ in 0..10 {
        let pw = random_piecewise(&mut r, 3);
        let series = TrigSeries::new(
            (0..6).map(|_| r.random_range(-0.3..0.3)).collect(),
            (0..6).map(|_| r.random_range(-0.3..0.3)).collect(),
        );
        let s = Signal::new(pw.clone(), series);
        let exact = s.bv_norm();
        let est = partition_variation(&|t| s.eval(t), &pw.breakpoints(), 20_000);
        assert!(est <= exact.variation + 1e-9);
        assert_close(est, exact.variation, 1e-6);
    }
}

#[test]
fn signal_inner_products_match_quadrature() {
    let mut r = rng(10);
    for _ in 0..20 {
        let f = Signal::new(
            random_piecewise(&mut r, 3),
            TrigSeries::new(vec![0.0, 0.2, -0.1, 0.3], vec![0.1, 0.0, 0.4, -0.2]),
        );
        let g = Signal::new(random_piecewise(&mut r, 4), TrigSeries::sin_k(5, 0.7));
        let mut br = f.pw.breakpoints();
        br.extend(g.pw.breakpoints());
        assert_close(f.inner(&g), circle_avg(|t| f.eval(t) * g.eval(t), &br), 1e-13);
        let (a0, w) = (r.random::<f64>() * TAU, r.random::<f64>() * TAU);
        let p = f.arc_projection(a0, w);
        let mut brr = f.pw.breakpoints();
        brr.push(a0);
        let inside = |t: f64| (t - a0).rem_euclid(TAU) < w;
        brr.push(a0 + w);
        let q0 = circle_avg(|t| if inside(t) { f.eval(t) } else { 0.0 }, &brr);
        let q1 = circle_avg(|t| if inside(t) { f.eval(t) * t.cos() } else { 0.0 }, &brr);
        let q2 = circle_avg(|t| if inside(t) { f.eval(t) * t.sin() } else { 0.0 }, &brr);
        assert_close(p[0], q0, 1e-13);
        assert_close(p[1], q1, 1e-13);
        assert_close(p[2], q2, 1e-13);
    }
}

#[test]
fn sector_examples() {
    let s = sectors(&[Vec2::E2]).unwrap();
    assert_eq!(s.arcs.len(), 2);
    assert!(s.arcs.iter().all(|a| (a.width() - PI).abs() < 1e-15));
    let s = sectors(&[Vec2::E1, Vec2::E2]).unwrap();
    assert_eq!(s.arcs.len(), 4);
    assert!(s.arcs.iter().all(|a| (a.width() - FRAC_PI_2).abs() < 1e-15));
    let d = sectors(&[Vec2::E1, Vec2::E1]).unwrap();
    assert!(d.duplicates);
    assert_eq!(d.arcs.len(), 2);
}

#[test]
fn generic_sectors_have_constant_indicator_sum() {
    let mut r = rng(11);
    for n in 1..10 {
        let dirs: Vec<Vec2> = (0..n).map(|_| Vec2::from_angle(r.random::<f64>() * TAU)).collect();
        let s = sectors(&dirs).unwrap();
        assert_eq!(s.arcs.len(), 2 * n);
        let total: f64 = s.arcs.iter().map(|a| a.width()).sum();
        assert_close(total, TAU, 1e-12);
        let count = |t: f64| dirs.iter().filter(|d| d.dot(Vec2::from_angle(t)) >= 0.0).count();
        for a in &s.arcs {
            let c = count(a.mid());
            for k in 1..20 {
                assert_eq!(count(a.start() + a.width() * k as f64 / 20.0), c);
            }
        }
    }
}

#[test]
fn coercivity_constant_is_a_lower_bound() {
    let c = sector_coercivity_constant();
    assert!(c <= 1.0 / (4.0 * PI.powi(3)));
    assert!(c > 0.99 / (4.0 * PI.powi(3)));
    let mut r = rng(12);
    for _ in 0..20_000 {
        let width = r.random::<f64>() * PI;
        let start = r.random::<f64>() * TAU;
        let v = Vec2::from_angle(r.random::<f64>() * TAU);
        let m = arc_moments(&Arc::new(start, width.max(1e-3)).unwrap());
        let q = v.x * v.x * m.mcc + 2.0 * v.x * v.y * m.mcs + v.y * v.y * m.mss;
        assert!(q >= c * width.max(1e-3).powi(3));
    }
    // half circle: left side 1/4 for any unit v
    let m = arc_moments(&Arc::new(0.3, PI).unwrap());
    assert_close(m.mcc + m.mss, 0.5, 1e-15);
    assert!(0.25 >= c * PI.powi(3));
}

#[test]
fn fourier_envelope_on_corpus() {
    let corpus = circnet_core::corpus::corpus();
    assert_eq!(corpus.len(), 12);
    for t in &corpus {
        let bv = t.signal.bv_norm().bv;
        let (a, b) = t.signal.fourier(256);
        for k in 1..=256 {
            let env = 2.0 * bv / k as f64;
            assert!(a[k].abs() <= env && b[k].abs() <= env, "{} k={k}", t.name);
        }
    }
}

#[test]
fn corpus_coefficients_match_quadrature() {
    for t in circnet_core::corpus::corpus() {
        let (a, b) = t.signal.fourier(12);
        let breaks = t.signal.pw.breakpoints();
        for k in [1usize, 2, 5, 12] {
            let kf = k as f64;
            let qa = circle_avg(|th| t.signal.eval(th) * (kf * th).sin(), &breaks) * 2.0;
            let qb = circle_avg(|th| t.signal.eval(th) * (kf * th).cos(), &breaks) * 2.0;
            assert_close(a[k], qa, 1e-12);
            assert_close(b[k], qb, 1e-12);
        }
    }
}
