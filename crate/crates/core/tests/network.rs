mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use circnet_core::{
    realization_bound, realize_closure, reorder_alternating, replicate, ClosureElement, JTerm,
    KTerm, PiecewiseTrig, ReluNetwork, SignPattern, Vec2,
};
use common::*;
use rand::Rng;

#[test]
fn to_piecewise_matches_direct_evaluation() {
    let mut r = rng(11);
    for _ in 0..50 {
        let m = r.random_range(1..9);
        let net = random_network(&mut r, m, 2.0);
        let pw = net.to_piecewise();
        for _ in 0..1000 {
            let t = r.random::<f64>() * TAU;
            assert_close(pw.eval(t), net.eval(t), 1e-12);
        }
    }
}

#[test]
fn single_node_is_clipped_cosine() {
    let net = ReluNetwork::new(SignPattern::new(vec![1]).unwrap(), vec![Vec2::E1]).unwrap();
    let pw = net.to_piecewise();
    assert_eq!(pw.num_pieces(), 2);
    assert_close(pw.eval(0.3), 0.3f64.cos(), 1e-15);
    assert_eq!(pw.eval(PI), 0.0);
    assert_close(pw.norm_sq(), 0.25, 1e-15);
}

#[test]
fn zero_network_is_zero_function() {
    let net = ReluNetwork::zeros(SignPattern::alternating(5).unwrap());
    let pw = net.to_piecewise();
    assert_eq!(pw.num_pieces(), 1);
    assert!(pw.is_zero(0.0));
}

#[test]
fn half_cos_closure_element() {
    let signs = SignPattern::alternating(4).unwrap();
    let g = ClosureElement::new(signs, vec![JTerm { w_hat: Vec2::E2, v: Vec2::E1 }], vec![])
        .unwrap();
    let expected = half_cos().scale(0.5);
    assert!(l2_dist(&g.to_piecewise(), &expected) < 1e-15);
}

fn random_closure(r: &mut impl Rng, m: usize, umax: f64) -> ClosureElement {
    let signs = SignPattern::alternating(m).unwrap();
    let nj = r.random_range(0..=signs.underbar_m());
    let j: Vec<JTerm> = (0..nj)
        .map(|k| {
            let phi = TAU * (k as f64 + r.random::<f64>() * 0.9) / nj as f64;
            let w_hat = Vec2::from_angle(phi);
            let alpha = r.random_range(-umax..umax);
            let u = r.random_range(-umax..umax) * w_hat.perp();
            JTerm { w_hat, v: alpha * w_hat + u }
        })
        .collect();
    let free_plus = signs.plus_count() - nj;
    let nk = r.random_range(0..=free_plus.min(2));
    let k = (0..nk)
        .map(|_| KTerm { a: 1, w: Vec2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)) })
        .collect();
    ClosureElement::new(signs, j, k).unwrap()
}

#[test]
fn closure_antisymmetric_part_is_linear() {
    let mut r = rng(12);
    for _ in 0..100 {
        let m = 2 * r.random_range(1..6);
        let g = random_closure(&mut r, m, 3.0);
        let (_, ga) = g.to_piecewise().sym_decompose();
        let l = PiecewiseTrig::linear(g.antisymmetric_linear());
        assert!(l2_dist(&ga, &l) < 1e-12);
        for _ in 0..50 {
            let t = r.random::<f64>() * TAU;
            assert_close(ga.eval(t), l.eval(t), 1e-12);
        }
    }
}

#[test]
fn closure_eval_matches_piecewise() {
    let mut r = rng(13);
    for _ in 0..30 {
        let g = random_closure(&mut r, 8, 2.0);
        let pw = g.to_piecewise();
        for _ in 0..1000 {
            let t = r.random::<f64>() * TAU;
            assert_close(pw.eval(t), g.eval(t), 1e-12);
        }
    }
}

#[test]
fn homogeneity_and_sup_bound() {
    let mut r = rng(14);
    for _ in 0..100 {
        let m = r.random_range(1..9);
        let net = random_network(&mut r, m, 3.0);
        let lambda = r.random_range(0.01..10.0);
        let a = net.scaled(lambda).to_piecewise();
        let b = net.to_piecewise().scale(lambda);
        assert!(l2_dist(&a, &b) <= 1e-12 * (1.0 + b.norm()));
        let bound = net.weight_norm();
        for _ in 0..200 {
            let t = r.random::<f64>() * TAU;
            assert!(net.eval(t).abs() <= bound + 1e-12);
        }
        assert!(net.to_piecewise().bv_norm().sup <= bound + 1e-12);
    }
}

#[test]
fn reorder_examples() {
    let r = reorder_alternating(&SignPattern::new(vec![1, 1, -1, -1]).unwrap());
    assert_eq!(r.reordered.as_slice(), &[1, -1, 1, -1]);
    assert_eq!(r.underbar_m, 2);
    assert_close(r.c_m, 2f64.sqrt(), 1e-15);
    assert!(!r.flipped);

    let r = reorder_alternating(&SignPattern::new(vec![1, 1, 1]).unwrap());
    assert_eq!(r.underbar_m, 0);
    assert!(r.c_m.is_infinite());

    let r = reorder_alternating(&SignPattern::new(vec![-1, -1, -1, 1]).unwrap());
    assert!(r.flipped);
    assert_eq!(r.underbar_m, 1);
    assert_eq!(r.reordered.as_slice(), &[1, -1, 1, 1]);
}

#[test]
fn reorder_exhaustive_small_m() {
    for m in 1..=6usize {
        for bits in 0..(1u32 << m) {
            let a: Vec<i8> = (0..m).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect();
            let s = SignPattern::new(a.clone()).unwrap();
            let r = reorder_alternating(&s);
            let mu = s.underbar_m();
            assert_eq!(r.underbar_m, mu);
            let mut p = r.permutation.clone();
            p.sort();
            assert_eq!(p, (0..m).collect::<Vec<_>>());
            let ra = r.reordered.as_slice();
            for k in 0..m {
                let expect = if k < 2 * mu && k % 2 == 1 { -1 } else { 1 };
                assert_eq!(ra[k], expect, "pattern {a:?}");
                let orig = a[r.permutation[k]];
                assert_eq!(ra[k], if r.flipped { -orig } else { orig });
            }
        }
    }
}

#[test]
fn realize_bound_holds_and_converges() {
    let signs = SignPattern::alternating(4).unwrap();
    let g = ClosureElement::from_function_terms(signs, &[(Vec2::E2, Vec2::E1)], &[]).unwrap();
    let target = g.to_piecewise();
    let hs = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut errs = vec![];
    for &h in &hs {
        let net = realize_closure(&g, h).unwrap();
        let e = l2_dist(&net.to_piecewise(), &target);
        let (bound, valid) = realization_bound(&g, h);
        assert!(valid);
        assert!(e <= bound, "h={h}: {e} > {bound}");
        errs.push(e);
    }
    // The error is c√h(1 + O(h)): the exponent tends to 1/2 from below.
    let slopes: Vec<f64> = (0..3)
        .map(|k| (errs[k + 1].ln() - errs[k].ln()) / (hs[k + 1].ln() - hs[k].ln()))
        .collect();
    assert!(slopes.iter().all(|&s| s >= 0.49), "{slopes:?}");
    assert!(slopes[2] >= 0.4999, "{slopes:?}");
    assert!(slopes.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{slopes:?}");
}

#[test]
fn realize_bound_random_elements() {
    let mut r = rng(15);
    for _ in 0..40 {
        let g = { let m = 2 * r.random_range(1..5); random_closure(&mut r, m, 10.0) };
        let target = g.to_piecewise();
        for h in [1e-1, 1e-2, 1e-3, 1e-4] {
            let (bound, valid) = realization_bound(&g, h);
            if !valid {
                continue;
            }
            let e = l2_dist(&realize_closure(&g, h).unwrap().to_piecewise(), &target);
            assert!(e <= bound * (1.0 + 1e-9) + 1e-13, "h={h}: {e} > {bound}");
        }
    }
}

#[test]
fn realize_rejects_bad_input() {
    let signs = SignPattern::alternating(2).unwrap();
    let g = ClosureElement::new(signs, vec![JTerm { w_hat: Vec2::E2, v: Vec2::E1 }], vec![])
        .unwrap();
    assert!(realize_closure(&g, 0.0).is_err());
    assert!(realize_closure(&g, -1.0).is_err());
    let signs = SignPattern::alternating(2).unwrap();
    let two = vec![
        JTerm { w_hat: Vec2::E2, v: Vec2::E1 },
        JTerm { w_hat: Vec2::E1, v: Vec2::E1 },
    ];
    assert!(ClosureElement::new(signs.clone(), two, vec![]).is_err());
    let unnormalized = vec![JTerm { w_hat: Vec2::new(0.0, 2.0), v: Vec2::E1 }];
    assert!(ClosureElement::new(signs, unnormalized, vec![]).is_err());
}

#[test]
fn replicate_example() {
    let src = ReluNetwork::new(
        SignPattern::alternating(2).unwrap(),
        vec![Vec2::new(0.3, 1.2), Vec2::new(-0.7, 0.4)],
    )
    .unwrap();
    let signs = SignPattern::alternating(6).unwrap();
    let big = replicate(&src, &signs).unwrap();
    assert_close(big.weight_norm_sq(), src.weight_norm_sq(), 1e-14);
    assert!(l2_dist(&big.to_piecewise(), &src.to_piecewise()) < 1e-14);
    let lambda = 1.0 / 3f64.sqrt();
    assert_close(big.weights[0].x, lambda * 0.3, 1e-15);

    let same = replicate(&src, &SignPattern::alternating(2).unwrap()).unwrap();
    assert_eq!(same.weights, src.weights);
}

#[test]
fn replicate_random() {
    let mut r = rng(16);
    for _ in 0..50 {
        let mp = 2 * r.random_range(1..4);
        let src = ReluNetwork::new(SignPattern::alternating(mp).unwrap(), random_weights(&mut r, mp, 2.0))
            .unwrap();
        let mu = r.random_range(mp / 2..8);
        let extra = r.random_range(0..4);
        let mut a: Vec<i8> = (0..mu).flat_map(|_| [1, -1]).collect();
        a.extend(std::iter::repeat_n(1, extra));
        let signs = SignPattern::new(a).unwrap();
        let big = replicate(&src, &signs).unwrap();
        assert!(l2_dist(&big.to_piecewise(), &src.to_piecewise()) < 1e-12);
        let cm2 = signs.m() as f64 / mu as f64;
        assert!(big.weight_norm_sq() <= cm2 * src.weight_norm_sq() * (1.0 + 1e-12));
    }
    let src = ReluNetwork::new(SignPattern::alternating(4).unwrap(), random_weights(&mut r, 4, 1.0))
        .unwrap();
    assert!(replicate(&src, &SignPattern::new(vec![1, -1, 1]).unwrap()).is_err());
}

#[test]
fn boundary_convention_relu() {
    // σ'(0) = 1: the boundary angle belongs to the active half-circle.
    let net = ReluNetwork::new(SignPattern::new(vec![1]).unwrap(), vec![Vec2::E1]).unwrap();
    let pw = net.to_piecewise();
    let t = 1.5 * PI;
    assert!(pw.eval(t).abs() < 1e-15);
    assert!(pw.eval(FRAC_PI_2).abs() < 1e-15);
}
