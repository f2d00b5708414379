//! Integrated output modes leaving the cavity after each pulse.
//!
//! Each detected mode integrates the output field over a flat window of length
//! `Tm` starting at the end of its pulse.

use serde::Serialize;

use crate::moments::Schedule;
use crate::propagators::StageCoefficients;
use crate::{CovMatrix4, DerivedRates, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OutputWindow {
    pub tm: f64,
    pub alpha: f64,
    pub tm_optimal: f64,
    /// True when the optimal window was shortened to keep the two modes apart.
    pub clamped: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum TmChoice {
    Auto,
    Fixed(f64),
}

impl std::str::FromStr for TmChoice {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(Self::Fixed(v)),
            _ => Err(format!("expected `auto` or a positive number of seconds, got `{s}`")),
        }
    }
}

/// Root x* of `2x e^{-x} = 1 - e^{-x}`, the maximiser of `(1 - e^{-x})²/x`.
pub fn optimal_window_factor() -> f64 {
    let mut x = 1.25f64;
    for _ in 0..50 {
        let e = (-x).exp();
        let h = 2.0 * x * e + e - 1.0;
        let dh = 2.0 * e - 2.0 * x * e - e;
        let step = h / dh;
        x -= step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    x
}

pub fn optimal_tm(r: &DerivedRates) -> f64 {
    optimal_window_factor() / r.cavity_decay()
}

/// Overlap of the integrated output mode with the intracavity field.
pub fn alpha(tm: f64, r: &DerivedRates) -> f64 {
    let g = r.cavity_decay();
    (2.0 * r.kappa / tm).sqrt() * -(-g * tm).exp_m1() / g
}

pub fn v_in(alpha: f64) -> CovMatrix4 {
    CovMatrix4(nalgebra::Matrix4::identity() * (0.5 * (1.0 - alpha * alpha)))
}

/// Cross term between the two output modes from the vacuum entering during
/// the first window and leaking into the cavity field at the end of pulse 2.
pub fn v_mix(s: &Schedule, r: &DerivedRates, tm: f64) -> f64 {
    let a = alpha(tm, r);
    let g = StageCoefficients::pulse2(r).g(s.pulse2(), false);
    -0.5 * a * a * g * (-r.cavity_decay() * s.dark()).exp()
}

/// Window for a schedule. `Auto` shortens the optimal window to the pulse
/// separation; an explicit window that is too long is an error.
pub fn choose_window(choice: TmChoice, s: &Schedule, r: &DerivedRates) -> Result<OutputWindow> {
    let tm_optimal = optimal_tm(r);
    let separation = s.dark();
    let (tm, clamped) = match choice {
        TmChoice::Auto if tm_optimal > separation => (separation, true),
        TmChoice::Auto => (tm_optimal, false),
        TmChoice::Fixed(tm) if tm > separation => return Err(Error::OutputOverlap { tm, separation }),
        TmChoice::Fixed(tm) => (tm, false),
    };
    Ok(OutputWindow { tm, alpha: alpha(tm, r), tm_optimal, clamped })
}

pub fn output_cov(v: &CovMatrix4, s: &Schedule, r: &DerivedRates, tm: f64) -> Result<CovMatrix4> {
    if tm > s.dark() {
        return Err(Error::OutputOverlap { tm, separation: s.dark() });
    }
    let a = alpha(tm, r);
    let mut out = v.0 * (a * a) + v_in(a).0;
    let mix = v_mix(s, r, tm);
    for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
        out[(i, j)] += mix;
    }
    Ok(CovMatrix4(out))
}
