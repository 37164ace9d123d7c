use std::f64::consts::{PI, TAU};

use circnet_core::approximation::{lal_decompose, step_pair};
use circnet_core::{
    reorder_alternating, Arc, PiecewiseTrig, ReluNetwork, SignPattern, Signal, TrigPiece, Vec2,
};
use proptest::prelude::*;

fn piecewise() -> impl Strategy<Value = PiecewiseTrig> {
    (1usize..6)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.05f64..1.0, n),
                prop::collection::vec(prop::array::uniform3(-1.0f64..1.0), n),
                0.0..TAU,
            )
        })
        .prop_map(|(widths, coefs, start)| {
            let total: f64 = widths.iter().sum();
            let mut s = start;
            let pieces = widths
                .iter()
                .zip(&coefs)
                .map(|(w, c)| {
                    let width = TAU * w / total;
                    let p = TrigPiece { arc: Arc::new(s, width).unwrap(), c0: c[0], c1: c[1], c2: c[2] };
                    s += width;
                    p
                })
                .collect();
            PiecewiseTrig::from_pieces(pieces).unwrap()
        })
}

fn network() -> impl Strategy<Value = ReluNetwork> {
    (1usize..7).prop_flat_map(|m| {
        (
            prop::collection::vec(prop::bool::ANY, m),
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), m),
        )
            .prop_map(|(s, w)| {
                let signs = SignPattern::new(s.iter().map(|&b| if b { 1 } else { -1 }).collect()).unwrap();
                ReluNetwork::new(signs, w.iter().map(|&(x, y)| Vec2::new(x, y)).collect()).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_split_recombines(f in piecewise(), th in 0.0..TAU) {
        let (s, a) = f.sym_decompose();
        prop_assert!((s.eval(th) + a.eval(th) - f.eval(th)).abs() < 1e-12);
        prop_assert!((s.eval(th) - s.eval(th + PI)).abs() < 1e-12);
        prop_assert!((a.eval(th) + a.eval(th + PI)).abs() < 1e-12);
    }

    #[test]
    fn cauchy_schwarz(f in piecewise(), g in piecewise()) {
        let ip = f.inner(&g);
        prop_assert!((ip - g.inner(&f)).abs() < 1e-13);
        prop_assert!(ip * ip <= f.norm_sq() * g.norm_sq() * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn network_is_positively_homogeneous(net in network(), lam in 0.0f64..5.0, th in 0.0..TAU) {
        let scaled = net.scaled(lam);
        prop_assert!((scaled.eval(th) - lam * net.eval(th)).abs() < 1e-12 * (1.0 + lam));
    }

    #[test]
    fn network_piecewise_agrees_with_eval(net in network(), th in 0.0..TAU) {
        prop_assert!((net.to_piecewise().eval(th) - net.eval(th)).abs() < 1e-12);
    }

    #[test]
    fn all_positive_norm_lower_bound(ws in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..9)) {
        let m = ws.len();
        let net = ReluNetwork::new(
            SignPattern::all_positive(m).unwrap(),
            ws.iter().map(|&(x, y)| Vec2::new(x, y)).collect(),
        )
        .unwrap();
        let lhs = net.to_piecewise().norm_sq();
        prop_assert!(lhs >= net.weight_norm_sq() / (4.0 * m as f64) * (1.0 - 1e-12));
    }

    #[test]
    fn reordering_alternates(s in prop::collection::vec(prop::bool::ANY, 1..12)) {
        let signs = SignPattern::new(s.iter().map(|&b| if b { 1 } else { -1 }).collect()).unwrap();
        let r = reorder_alternating(&signs);
        let a = r.reordered.as_slice();
        for k in 0..r.underbar_m {
            prop_assert_eq!((a[2 * k], a[2 * k + 1]), (1, -1));
        }
        prop_assert!(a[2 * r.underbar_m..].iter().all(|&x| x == 1));
        let mut p = r.permutation.clone();
        p.sort();
        prop_assert_eq!(p, (0..s.len()).collect::<Vec<_>>());
    }

    #[test]
    fn lal_split_is_orthogonal(f in piecewise()) {
        let y: Signal = f.into();
        let d = lal_decompose(&y);
        prop_assert!(d.y1.inner(&d.y2).abs() < 1e-12);
        prop_assert!((d.y1.norm_sq() + d.y2.norm_sq() - y.norm_sq()).abs() < 1e-12);
        prop_assert!(d.bv_ok());
    }

    #[test]
    fn step_pair_bound(t1 in 0.0..TAU, w in 0.01f64..3.1, c in -3.0f64..3.0) {
        let s = step_pair(t1, t1 + w, c).unwrap();
        prop_assert!(s.pass());
        prop_assert!((s.error_sq - s.error_sq_piecewise).abs() <= 1e-13 * (1.0 + c * c));
    }
}
