use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, FRAC_PI_2, PI, TAU};

use super::arc::second_moment;
use super::piecewise::dedup_breaks;
use super::{Arc, Vec2};

/// The arcs on which `Σ_i I{ŵ_i·x ≥ 0}` is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Sectors {
    pub arcs: Vec<Arc>,
    /// Set when two boundaries coincided and were merged.
    pub duplicates: bool,
}

pub fn sectors(directions: &[Vec2]) -> Result<Sectors> {
    if directions.is_empty() {
        return Err(Error::InvalidParameter {
            name: "directions",
            reason: "empty".into(),
        });
    }
    let mut raw = Vec::with_capacity(2 * directions.len());
    for d in directions {
        if d.norm_sq() == 0.0 || !d.is_finite() {
            return Err(Error::InvalidParameter {
                name: "directions",
                reason: "zero or non-finite direction".into(),
            });
        }
        let phi = d.angle();
        raw.push(phi - FRAC_PI_2);
        raw.push(phi + FRAC_PI_2);
    }
    let n_raw = raw.len();
    let b = dedup_breaks(raw);
    let n = b.len();
    let arcs = (0..n)
        .map(|i| {
            let end = if i + 1 < n { b[i + 1] } else { b[0] + TAU };
            Arc::new(b[i], end - b[i]).expect("sorted distinct boundaries")
        })
        .collect();
    Ok(Sectors {
        arcs,
        duplicates: n < n_raw,
    })
}

/// Averaged `∫_S (v·x)²` over an arc of the given width, minimized over unit `v`, divided by
/// `width³`.
fn min_ratio_closed_form(width: f64) -> f64 {
    (width - math::sin(width)) / (2.0 * TAU * width * width * width)
}

/// A constant `c` with `(1/2π)∫_S (v·x)² dθ ≥ c |v|² |S|³` for every arc with `|S| ≤ π`.
///
/// The ratio is evaluated on a grid of arc centers, widths and `v` angles and combined with
/// the closed-form minimum over `v`, which decreases in the width; the worst case is the half
/// circle, `1/(4π³)`.
pub fn sector_coercivity_constant() -> f64 {
    let mut c = min_ratio_closed_form(PI);
    let (n_w, n_c, n_v) = (64, 8, 64);
    for iw in 1..=n_w {
        let width = PI * iw as f64 / n_w as f64;
        c = c.min(min_ratio_closed_form(width));
        for ic in 0..n_c {
            let start = TAU * ic as f64 / n_c as f64;
            let [mcc, mcs, mss] = second_moment(start, width);
            for iv in 0..n_v {
                let (s, co) = math::sin_cos(PI * iv as f64 / n_v as f64);
                let q = co * co * mcc + 2.0 * co * s * mcs + s * s * mss;
                c = c.min(q / (width * width * width));
            }
        }
    }
    c * (1.0 - 1e-9)
}
