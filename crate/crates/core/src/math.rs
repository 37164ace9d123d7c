//! Thin wrappers over `libm` so every build (std or not, any platform) uses
//! the same floating-point routines.

pub use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}
#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}
#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}
#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}
#[inline]
pub fn cbrt(x: f64) -> f64 {
    libm::cbrt(x)
}
#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}
#[inline]
pub fn lgamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap(theta: f64) -> f64 {
    let t = theta - TAU * floor(theta / TAU);
    if !(0.0..TAU).contains(&t) {
        0.0
    } else {
        t
    }
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_pm(theta: f64) -> f64 {
    let t = wrap(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// `h - sin h`, accurate for small `h`.
pub fn h_minus_sin(h: f64) -> f64 {
    if h.abs() < 1.0 {
        // h^3/3! - h^5/5! + ...
        let h2 = h * h;
        let mut term = h * h2 / 6.0;
        let mut sum = 0.0;
        let mut n = 3.0;
        for _ in 0..9 {
            sum += term;
            term *= -h2 / ((n + 1.0) * (n + 2.0));
            n += 2.0;
        }
        sum
    } else {
        h - sin(h)
    }
}

/// Pairwise (cascade) summation; result depends only on the slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        s
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Five-point Gauss–Legendre nodes on `[-1, 1]`.
pub const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];

pub const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Composite five-point Gauss–Legendre rule for `∫_a^b f`.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        for k in 0..5 {
            s += GL5_WEIGHTS[k] * f(lo + 0.5 * h * (1.0 + GL5_NODES[k]));
        }
    }
    0.5 * h * s
}
