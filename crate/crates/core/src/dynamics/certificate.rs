use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    HighNode,
    Generic,
    HypothesesUnmet,
}

/// One scalar inequality `lhs ≤ rhs`; when `log` is set both sides are natural logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct CertCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub log: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoincareCertificate {
    pub m: usize,
    pub r: f64,
    pub eps: f64,
    pub regime: Regime,
    pub ln_c_p: f64,
    pub ln_rate: f64,
    /// `C_P` itself; infinite when it overflows.
    pub c_p_bound: f64,
    /// `2/C_P`; zero when it underflows.
    pub rate_bound: f64,
    /// `ln` of the rate stated in the theorem for the generic regime, `16e^{−(4R²+2)/ε²}`.
    pub ln_rate_stated: f64,
    pub checks: Vec<CertCheck>,
}

impl PoincareCertificate {
    pub fn valid(&self) -> bool {
        self.regime != Regime::HypothesesUnmet && self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &'static str, lhs: f64, rhs: f64, log: bool) -> CertCheck {
    CertCheck { name, lhs, rhs, log, pass: lhs <= rhs }
}

/// Evaluates every scalar inequality used to bound the Poincaré constant of
/// `e^{−Φ_R/ε²}` at `(m, R, ε)`. The functional lemmas are taken as given.
pub fn poincare_certificate(m: usize, r: f64, eps: f64) -> PoincareCertificate {
    let mut cert = PoincareCertificate {
        m,
        r,
        eps,
        regime: Regime::HypothesesUnmet,
        ln_c_p: f64::NAN,
        ln_rate: f64::NAN,
        c_p_bound: f64::NAN,
        rate_bound: f64::NAN,
        ln_rate_stated: f64::NAN,
        checks: Vec::new(),
    };
    if !(eps > 0.0 && eps <= 1.0) || !(r >= 10.0) || !r.is_finite() || m == 0 {
        return cert;
    }
    let e2 = eps * eps;
    let mf = m as f64;
    let osc = (4.0 * r * r + 2.0) / e2;
    let c = &mut cert.checks;
    // F vanishes outside the ball |W|² ≥ 2R²: (|W| + 1)² ≤ 4(|W|² − R²) there.
    let s = math::sqrt(2.0) * r;
    c.push(check("growth_below_penalty", (s + 1.0) * (s + 1.0), 4.0 * (s * s - r * r), false));
    // Generic bound from the oscillation 2|F| ≤ 4R² + 2 of the perturbation.
    let ln_cp_generic = osc - math::ln(8.0);
    cert.ln_rate_stated = math::ln(16.0) - osc;

    let high = mf >= 24.0 * r * r / e2;
    if high {
        cert.regime = Regime::HighNode;
        // ln of the ball volume |B_{√2R}| in ℝ^{2m}, exactly and via Stirling.
        let ln_ball = mf * math::ln(core::f64::consts::PI) - math::lgamma(mf + 1.0)
            + mf * math::ln(2.0 * r * r);
        let ln_ball_stirling = -0.5 * math::ln(2.0 * core::f64::consts::PI * mf)
            + mf * math::ln(2.0 * core::f64::consts::PI * core::f64::consts::E * r * r / mf);
        c.push(check("ball_volume_stirling", ln_ball, ln_ball_stirling, true));
        let ln_c2m = mf * math::ln(4.0 / (e2 * core::f64::consts::PI));
        let ln_aida1 = 1.25 / e2 + ln_c2m + 2.0 * r * r / e2 + ln_ball;
        let ln_aida1_stirling = 1.25 / e2 - 0.5 * math::ln(2.0 * core::f64::consts::PI * mf)
            + 2.0 * r * r / e2
            + mf * math::ln(8.0 * core::f64::consts::E * r * r / (e2 * mf));
        c.push(check("gradient_integral_stirling", ln_aida1, ln_aida1_stirling, true));
        let ratio = math::exp(1.0 / 11.0) * core::f64::consts::E / 3.0;
        let ln_geom = math::ln(0.01) + mf * math::ln(ratio);
        c.push(check("gradient_integral_geometric", ln_aida1_stirling, ln_geom, true));
        c.push(check("geometric_ratio_below_one", ratio, 1.0, false));
        c.push(check("gradient_integral_eighth", ln_geom, math::ln(0.125), true));
        let ln_st5 = -0.5 * math::ln(2.0 * core::f64::consts::PI * mf)
            + mf * math::ln(8.0 * core::f64::consts::E * r * r / (e2 * mf));
        c.push(check("mass_deficit_tenth", ln_st5, math::ln(0.1), true));
        c.push(check("sqrt_nine_tenths", 1.0 - 0.125, math::sqrt(0.9), false));
        // Aida constant with β = 1/4 and C_LS = ε²/8, divided by ε².
        let beta = 0.25;
        let cp = 64.0 * 0.125 * (1.0 + beta) * (1.0 - beta / 2.0) / (beta * beta);
        c.push(check("aida_constant", cp, 140.0, false));
        cert.ln_c_p = math::ln(cp);
        cert.c_p_bound = cp;
    } else {
        cert.regime = Regime::Generic;
        cert.ln_c_p = ln_cp_generic;
        cert.c_p_bound = math::exp(ln_cp_generic);
    }
    cert.ln_rate = math::ln(2.0) - cert.ln_c_p;
    cert.rate_bound = if high { 2.0 / cert.c_p_bound } else { math::exp(cert.ln_rate) };
    if !high {
        let d = (cert.ln_rate - cert.ln_rate_stated).abs();
        cert.checks.push(check("rate_is_two_over_cp", d, 1e-12 * (1.0 + osc), false));
    }
    cert
}
