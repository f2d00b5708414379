//! One full protocol evaluation: rates, schedule, moments, output modes, report.

use serde::Serialize;

use crate::entanglement::{is_physical, EntanglementReport};
use crate::model::{validate_regime, RegimeCheck, Verdict};
use crate::moments::{correlators_after_pulse2, intracavity_cov, moments_after_pulse1, propagate_dark, MomentSet, Schedule, TwoTimeSet};
use crate::output::{choose_window, output_cov, OutputWindow, TmChoice};
use crate::propagators::{optimal_transfer_time, StageCoefficients};
use crate::{derive_rates, ChiMode, CovMatrix4, DerivedRates, PhysicalParams, Result};

/// Commutator drift above which the effective equations are flagged.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Separation {
    /// Dark interval in units of the cavity lifetime 1/(κ+κ_L).
    CavityDecays(f64),
    Seconds(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SecondPulse {
    /// Second-pulse length as a multiple of the optimal transfer time.
    OptimalRatio(f64),
    Seconds(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub t1: f64,
    pub separation: Separation,
    pub second_pulse: SecondPulse,
}

impl Timing {
    /// 40 μs first pulse, two cavity lifetimes dark, optimal swap.
    pub fn reference() -> Self {
        Self { t1: 40e-6, separation: Separation::CavityDecays(2.0), second_pulse: SecondPulse::OptimalRatio(1.0) }
    }

    pub fn schedule(&self, r: &DerivedRates) -> Result<(Schedule, Option<f64>)> {
        let dark = match self.separation {
            Separation::CavityDecays(n) => n / r.cavity_decay(),
            Separation::Seconds(s) => s,
        };
        let optimum = optimal_transfer_time(&StageCoefficients::pulse2(r));
        let pulse2 = match self.second_pulse {
            SecondPulse::OptimalRatio(x) => x * *optimum.as_ref().map_err(clone_err)?,
            SecondPulse::Seconds(s) => s,
        };
        let t = self.t1 + dark;
        Ok((Schedule::new(self.t1, t, t + pulse2)?, optimum.ok()))
    }
}

fn clone_err(e: &crate::Error) -> crate::Error {
    match e {
        crate::Error::NoTransferOptimum { kappa_2d, chi2 } => crate::Error::NoTransferOptimum { kappa_2d: *kappa_2d, chi2: *chi2 },
        other => crate::Error::Schedule(other.to_string()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointRun {
    pub rates: DerivedRates,
    pub regime: Vec<RegimeCheck>,
    pub schedule: Schedule,
    pub window: OutputWindow,
    pub dt2_opt: Option<f64>,
    pub moments_t1: MomentSet,
    pub moments_t: MomentSet,
    pub two_time: TwoTimeSet,
    pub intracavity: CovMatrix4,
    pub vout: CovMatrix4,
    pub report: EntanglementReport,
    pub intracavity_report: EntanglementReport,
    pub warnings: Vec<String>,
}

impl PointRun {
    pub fn regime_failed(&self) -> bool {
        self.regime.iter().any(|c| c.verdict == Verdict::Fail)
    }
}

/// Evaluates one point for already derived rates.
pub fn run_with_rates(p: &PhysicalParams, rates: DerivedRates, timing: &Timing, tm: TmChoice) -> Result<PointRun> {
    let (schedule, dt2_opt) = timing.schedule(&rates)?;
    let window = choose_window(tm, &schedule, &rates)?;
    let m1 = moments_after_pulse1(&rates, schedule.t1);
    let mt = propagate_dark(&m1, schedule.dark(), &rates);
    let two_time = correlators_after_pulse2(&mt, &m1, &rates, &schedule);
    let intracavity = intracavity_cov(&two_time, &m1);
    let vout = output_cov(&intracavity, &schedule, &rates, window.tm)?;
    let report = EntanglementReport::new(&vout);
    let intracavity_report = EntanglementReport::new(&intracavity);

    let regime = validate_regime(p, &rates, m1.n_a);
    let mut warnings = Vec::new();
    for c in regime.iter().filter(|c| c.verdict != Verdict::Pass) {
        warnings.push(format!("regime {}: ratio {:.3} ({:?})", c.name, c.ratio, c.verdict));
    }
    if window.clamped {
        warnings.push(format!("measurement window shortened from {:.6e} s to the pulse separation {:.6e} s", window.tm_optimal, window.tm));
    }
    let defect = m1.commutator_defect().max(mt.commutator_defect()).max((two_time.comm_a_t2 - 1.0).abs());
    if defect > COMMUTATOR_TOLERANCE {
        warnings.push(format!("perturbative validity exceeded: commutator drift {defect:.3e}"));
    }
    if report.clamped {
        warnings.push("negative discriminant clamped in symplectic eigenvalue".into());
    }
    if !is_physical(&vout, 1e-9) {
        warnings.push("output correlation matrix is not physical".into());
    }
    Ok(PointRun {
        rates,
        regime,
        schedule,
        window,
        dt2_opt,
        moments_t1: m1,
        moments_t: mt,
        two_time,
        intracavity,
        vout,
        report,
        intracavity_report,
        warnings,
    })
}

pub fn run_point(p: &PhysicalParams, chi: ChiMode, noiseless: bool, timing: &Timing, tm: TmChoice) -> Result<PointRun> {
    let mut rates = derive_rates(p, chi)?;
    if noiseless {
        rates = rates.noiseless();
    }
    run_with_rates(p, rates, timing, tm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{hz, C64};

    #[test]
    fn reference_point_is_entangled() {
        let p = PhysicalParams::reference(hz(0.8e3));
        let run = run_point(&p, ChiMode::Leading, false, &Timing::reference(), TmChoice::Auto).unwrap();
        assert!(run.report.log_negativity > 0.0);
        assert!((run.moments_t1.n_a / 12.38 - 1.0).abs() < 0.1);
        assert!(!run.regime_failed());
        let eta = run.report.eta_minus;
        assert!((run.report.log_negativity - (-(2.0 * eta).ln()).max(0.0)).abs() < 1e-12);
    }

    #[test]
    fn no_drive_no_entanglement() {
        let mut p = PhysicalParams::reference(hz(0.8e3));
        p.omega1 = C64::new(0.0, 0.0);
        let run = run_point(&p, ChiMode::Leading, false, &Timing::reference(), TmChoice::Auto).unwrap();
        assert_eq!(run.report.log_negativity, 0.0);
    }

    #[test]
    fn long_separation_kills_entanglement() {
        let p = PhysicalParams::reference(hz(6.4e3));
        let t = Timing { separation: Separation::Seconds(2.0 / p.kappa_h), ..Timing::reference() };
        let run = run_point(&p, ChiMode::Leading, false, &t, TmChoice::Auto).unwrap();
        assert_eq!(run.report.log_negativity, 0.0);
    }

    #[test]
    fn explicit_window_too_long() {
        let p = PhysicalParams::reference(hz(6.4e3));
        let res = run_point(&p, ChiMode::Leading, false, &Timing::reference(), TmChoice::Fixed(1.0));
        assert!(matches!(res, Err(crate::Error::OutputOverlap { .. })));
    }
}
