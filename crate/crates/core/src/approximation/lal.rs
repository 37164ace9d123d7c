use crate::geometry::{PiecewiseTrig, Signal, Vec2};

/// `y = y1 + y2` with `y1 = y^s + l` in `L_al` and `y2 = y^a − l` orthogonal to it, where
/// `l(x) = b·x` is the degree-one Fourier part of `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LalDecomposition {
    pub y1: Signal,
    pub y2: Signal,
    pub linear: Vec2,
    pub bv_y: f64,
    pub bv_y1: f64,
}

impl LalDecomposition {
    /// `‖y1‖_BV ≤ 4‖y‖_BV`.
    pub fn bv_ok(&self) -> bool {
        self.bv_y1 <= 4.0 * self.bv_y
    }
}

pub fn lal_decompose(y: &Signal) -> LalDecomposition {
    let (a, b) = y.fourier(1);
    let linear = Vec2::new(b[1], a[1]);
    let (ys, ya) = y.sym_decompose();
    let lin: Signal = PiecewiseTrig::linear(linear).into();
    let y1 = ys.add(&lin);
    let y2 = ya.sub(&lin);
    LalDecomposition {
        bv_y: y.bv_norm().bv,
        bv_y1: y1.bv_norm().bv,
        y1,
        y2,
        linear,
    }
}
