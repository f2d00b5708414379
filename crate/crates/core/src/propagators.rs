//! Time-dependence of the cavity and motion amplitudes during each stage.

use serde::Serialize;

use crate::integrals::{cosh_kernel, sinh_kernel, Kernel};
use crate::{DerivedRates, Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// Stokes drive: two-mode squeezing of cavity and motion.
    Pulse1,
    /// Lasers off: independent decay, motion rotates at the residual shift.
    Dark,
    /// Anti-Stokes drive: beam-splitter swap of motion into the cavity.
    Pulse2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StageCoefficients {
    pub stage: Stage,
    pub kappa_s: f64,
    pub kappa_d: f64,
    /// Growth (pulse 1) or oscillation (pulse 2) rate; imaginary when pulse 2 is overdamped.
    pub theta: C64,
    pub chi: C64,
    pub cavity_decay: f64,
    pub motion_decay: f64,
    /// Residual motional rotation while dark.
    pub motion_phase: f64,
}

impl StageCoefficients {
    pub fn pulse1(r: &DerivedRates) -> Self {
        Self {
            stage: Stage::Pulse1,
            kappa_s: r.kappa_1s,
            kappa_d: r.kappa_1d,
            theta: C64::new(r.theta_1, 0.0),
            chi: r.chi1,
            cavity_decay: r.cavity_decay(),
            motion_decay: r.motion_damping_pulse1(),
            motion_phase: 0.0,
        }
    }

    pub fn dark(r: &DerivedRates) -> Self {
        let (cav, mot) = (r.cavity_decay(), r.kappa_b);
        Self {
            stage: Stage::Dark,
            kappa_s: (cav + mot) / 2.0,
            kappa_d: (cav - mot) / 2.0,
            theta: C64::new(((cav - mot) / 2.0).abs(), 0.0),
            chi: C64::new(0.0, 0.0),
            cavity_decay: cav,
            motion_decay: mot,
            motion_phase: r.delta_1b,
        }
    }

    pub fn pulse2(r: &DerivedRates) -> Self {
        Self {
            stage: Stage::Pulse2,
            kappa_s: r.kappa_2s,
            kappa_d: r.kappa_2d,
            theta: r.theta_2,
            chi: r.chi2,
            cavity_decay: r.cavity_decay(),
            motion_decay: r.motion_damping_pulse2(),
            motion_phase: 0.0,
        }
    }

    /// Argument of the hyperbolic kernels; negative when the stage oscillates.
    ///
    /// Without coupling the dark stage reduces to `g+ = e^{-κ_b t}` and
    /// `g- = e^{-(κ+κ_L) t}`.
    pub fn q(&self) -> f64 {
        match self.stage {
            Stage::Pulse1 => self.chi.norm_sqr() + self.kappa_d * self.kappa_d,
            Stage::Dark => self.kappa_d * self.kappa_d,
            Stage::Pulse2 => self.kappa_d * self.kappa_d - self.chi.norm_sqr(),
        }
    }

    pub fn kernel(&self) -> Kernel {
        Kernel { decay: self.kappa_s, split: self.kappa_d, q: self.q() }
    }

    /// `g±` at time `t` after the stage started; `plus` selects the sign.
    pub fn g(&self, t: f64, plus: bool) -> f64 {
        let s = if plus { self.kappa_d } else { -self.kappa_d };
        (-self.kappa_s * t).exp() * (cosh_kernel(self.q(), t) + s * sinh_kernel(self.q(), t))
    }

    pub fn f(&self, t: f64) -> f64 {
        (-self.kappa_s * t).exp() * sinh_kernel(self.q(), t)
    }
}

/// Shortest pulse-2 duration that empties the initial cavity content, i.e. the
/// first positive zero of `g-`.
pub fn optimal_transfer_time(c: &StageCoefficients) -> Result<f64> {
    let q = c.q();
    let d = c.kappa_d;
    let no_root = || Error::NoTransferOptimum { kappa_2d: d, chi2: c.chi.norm() };
    if q < 0.0 {
        let w = (-q).sqrt();
        Ok(w.atan2(d) / w)
    } else if d <= 0.0 {
        Err(no_root())
    } else if q == 0.0 {
        Ok(1.0 / d)
    } else {
        // overdamped swap: tanh(θ t) = θ/κD still has a root while κD > θ
        let w = q.sqrt();
        if w >= d {
            return Err(no_root());
        }
        Ok((w / d).atanh() / w)
    }
}

/// Amplitude factors of cavity and motion after `dt` in the dark.
pub fn dark_decay_factors(dt: f64, c: &StageCoefficients) -> (f64, C64) {
    let cavity = (-c.cavity_decay * dt).exp();
    let motion = (C64::new(-c.motion_decay, c.motion_phase) * dt).exp();
    (cavity, motion)
}
