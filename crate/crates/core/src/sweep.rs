//! Parameter sweeps and the three reference figure families.

use rayon::prelude::*;
use serde::Serialize;

use crate::model::REFERENCE_KAPPAS_HZ;
use crate::protocol::{run_with_rates, SecondPulse, Separation, Timing};
use crate::{derive_rates, hz, ChiMode, Error, PhysicalParams, Result, TmChoice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// First-pulse length, s.
    T1,
    /// Dark interval, s.
    TMinusT1,
    /// Second-pulse length over the optimal transfer time.
    T2MinusTRatio,
    /// Cavity decay, Hz.
    Kappa,
    /// Heating rate, Hz.
    KappaH,
    /// First-pulse Rabi frequency magnitude, Hz.
    Omega1,
    Eta,
}

impl std::str::FromStr for SweepParameter {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "T1" | "t1" => Self::T1,
            "T_minus_T1" | "t_minus_t1" => Self::TMinusT1,
            "T2_minus_T_ratio" | "t2_minus_t_ratio" => Self::T2MinusTRatio,
            "kappa" => Self::Kappa,
            "kappa_h" => Self::KappaH,
            "Omega1" | "omega1" => Self::Omega1,
            "eta" => Self::Eta,
            other => return Err(format!("unknown sweep parameter `{other}`")),
        })
    }
}

impl SweepParameter {
    pub fn column_name(&self) -> &'static str {
        match self {
            Self::T1 => "t1_s",
            Self::TMinusT1 => "t_minus_t1_s",
            Self::T2MinusTRatio => "t2_minus_t_ratio",
            Self::Kappa => "kappa_hz",
            Self::KappaH => "kappa_h_hz",
            Self::Omega1 => "omega1_hz",
            Self::Eta => "eta",
        }
    }
}

/// How the schedule is set up around the swept value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// First pulse from the base timing, two cavity lifetimes dark, second pulse swept.
    Fig3,
    /// Optimal second pulse, dark interval swept.
    Fig4,
    /// First pulse swept, two cavity lifetimes dark, optimal second pulse.
    Fig5,
    /// Base timing as given.
    Custom,
}

impl std::str::FromStr for Policy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "fig3" => Self::Fig3,
            "fig4" => Self::Fig4,
            "fig5" => Self::Fig5,
            "custom" => Self::Custom,
            other => return Err(format!("unknown schedule policy `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub policy: Policy,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidParameter { name: "sweep", reason });
        if !(self.from < self.to) {
            return bad(format!("need from < to, got {} and {}", self.from, self.to));
        }
        if self.steps < 2 {
            return bad(format!("need at least 2 steps, got {}", self.steps));
        }
        let required = match self.policy {
            Policy::Fig3 => Some(SweepParameter::T2MinusTRatio),
            Policy::Fig4 => Some(SweepParameter::TMinusT1),
            Policy::Fig5 => Some(SweepParameter::T1),
            Policy::Custom => None,
        };
        if let Some(p) = required {
            if p != self.parameter {
                return bad(format!("policy {:?} sweeps {}", self.policy, p.column_name()));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n).map(|k| self.from + (self.to - self.from) * k as f64 / n as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub e_n: f64,
    pub eta_minus: f64,
    pub xi_epr: f64,
    pub nbar1: f64,
    pub nbar2: f64,
    pub alpha: f64,
    pub dt2_opt: f64,
    /// Intracavity photon number at the end of the first pulse.
    pub n_cavity_t1: f64,
    pub warnings: usize,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(value: f64, e: Error) -> Self {
        Self {
            value,
            e_n: f64::NAN,
            eta_minus: f64::NAN,
            xi_epr: f64::NAN,
            nbar1: f64::NAN,
            nbar2: f64::NAN,
            alpha: f64::NAN,
            dt2_opt: f64::NAN,
            n_cavity_t1: f64::NAN,
            warnings: 0,
            error: Some(e.to_string()),
        }
    }
}

/// Base inputs shared by every point of a sweep.
#[derive(Clone, Debug)]
pub struct SweepBase {
    pub params: PhysicalParams,
    pub chi: ChiMode,
    pub noiseless: bool,
    pub timing: Timing,
    pub tm: TmChoice,
}

fn evaluate(base: &SweepBase, spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let mut p = base.params.clone();
    let mut timing = base.timing;
    match spec.parameter {
        SweepParameter::T1 => timing.t1 = value,
        SweepParameter::TMinusT1 => timing.separation = Separation::Seconds(value),
        SweepParameter::T2MinusTRatio => timing.second_pulse = SecondPulse::OptimalRatio(value),
        SweepParameter::Kappa => p.kappa = hz(value),
        SweepParameter::KappaH => p.kappa_h = hz(value),
        SweepParameter::Omega1 => p.omega1 = p.omega1.unscale(p.omega1.norm().max(f64::MIN_POSITIVE)) * hz(value),
        SweepParameter::Eta => p.eta = value,
    }
    if spec.parameter == SweepParameter::Omega1 && base.params.omega1.norm() == 0.0 {
        p.omega1 = crate::C64::new(hz(value), 0.0);
    }
    match spec.policy {
        Policy::Fig3 | Policy::Fig5 => timing.separation = Separation::CavityDecays(2.0),
        _ => {}
    }
    match spec.policy {
        Policy::Fig4 | Policy::Fig5 => timing.second_pulse = SecondPulse::OptimalRatio(1.0),
        _ => {}
    }
    let mut rates = derive_rates(&p, base.chi)?;
    if base.noiseless {
        rates = rates.noiseless();
    }
    let run = run_with_rates(&p, rates, &timing, base.tm)?;
    Ok(SweepRow {
        value,
        e_n: run.report.log_negativity,
        eta_minus: run.report.eta_minus,
        xi_epr: run.report.xi_epr,
        nbar1: run.report.nbar_pulse1,
        nbar2: run.report.nbar_pulse2,
        alpha: run.window.alpha,
        dt2_opt: run.dt2_opt.unwrap_or(f64::NAN),
        n_cavity_t1: run.moments_t1.n_a,
        warnings: run.warnings.len(),
        error: None,
    })
}

/// One row per grid point in grid order. Failed points are kept with the error text.
pub fn run_sweep(base: &SweepBase, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec.grid().into_par_iter().map(|v| evaluate(base, spec, v).unwrap_or_else(|e| SweepRow::failed(v, e))).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct Curve {
    pub label: String,
    pub kappa_hz: f64,
    pub noiseless: bool,
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureData {
    pub which: u8,
    pub curves: Vec<Curve>,
}

pub const FIG3_STEPS: usize = 101;
pub const FIG4_STEPS: usize = 151;
pub const FIG5_STEPS: usize = 80;

/// Regenerates one figure family: one curve per reference cavity decay plus
/// the noiseless comparison at the smallest decay. `base.params` supplies every
/// other parameter.
pub fn reproduce_figure(which: u8, base: &SweepBase) -> Result<FigureData> {
    if !(3..=5).contains(&which) {
        return Err(Error::InvalidParameter { name: "figure", reason: format!("expected 3, 4 or 5, got {which}") });
    }
    let mut variants: Vec<(f64, bool)> = REFERENCE_KAPPAS_HZ.iter().map(|&k| (k, false)).collect();
    variants.push((REFERENCE_KAPPAS_HZ[3], true));
    let curves = variants
        .into_iter()
        .map(|(kappa_hz, noiseless)| {
            let mut params = base.params.clone();
            params.kappa = hz(kappa_hz);
            let b = SweepBase { params: params.clone(), noiseless, ..base.clone() };
            let spec = match which {
                3 => SweepSpec { parameter: SweepParameter::T2MinusTRatio, from: 0.2, to: 2.0, steps: FIG3_STEPS, policy: Policy::Fig3 },
                4 => {
                    let rates = derive_rates(&params, base.chi)?;
                    let from = 2.0 / rates.cavity_decay();
                    let to = 1.5 / base.params.kappa_h;
                    SweepSpec { parameter: SweepParameter::TMinusT1, from, to, steps: FIG4_STEPS, policy: Policy::Fig4 }
                }
                _ => SweepSpec { parameter: SweepParameter::T1, from: 1e-6, to: 80e-6, steps: FIG5_STEPS, policy: Policy::Fig5 },
            };
            let rows = run_sweep(&b, &spec)?;
            let label = if noiseless { format!("kappa_{kappa_hz:.0}hz_noiseless") } else { format!("kappa_{kappa_hz:.0}hz") };
            Ok(Curve { label, kappa_hz, noiseless, spec, rows })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureData { which, curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SweepBase {
        SweepBase {
            params: PhysicalParams::reference(hz(6.4e3)),
            chi: ChiMode::Leading,
            noiseless: false,
            timing: Timing::reference(),
            tm: TmChoice::Auto,
        }
    }

    #[test]
    fn two_step_sweep_has_two_rows() {
        let spec = SweepSpec { parameter: SweepParameter::T1, from: 10e-6, to: 40e-6, steps: 2, policy: Policy::Fig5 };
        let rows = run_sweep(&base(), &spec).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].value, 10e-6);
        assert_eq!(rows[1].value, 40e-6);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = SweepSpec { parameter: SweepParameter::T1, from: 1.0, to: 0.5, steps: 5, policy: Policy::Custom };
        assert!(run_sweep(&base(), &spec).is_err());
        spec.to = 2.0;
        spec.steps = 1;
        assert!(run_sweep(&base(), &spec).is_err());
        spec.steps = 3;
        spec.policy = Policy::Fig3;
        assert!(run_sweep(&base(), &spec).is_err());
    }

    #[test]
    fn failed_rows_are_kept() {
        // a dark interval shorter than the requested window fails per row
        let mut b = base();
        b.tm = TmChoice::Fixed(50e-6);
        let spec = SweepSpec { parameter: SweepParameter::TMinusT1, from: 10e-6, to: 100e-6, steps: 4, policy: Policy::Fig4 };
        let rows = run_sweep(&b, &spec).unwrap();
        assert!(rows[0].error.is_some());
        assert!(rows[3].error.is_none());
    }

    #[test]
    fn rows_follow_log_negativity_definition() {
        let spec = SweepSpec { parameter: SweepParameter::T2MinusTRatio, from: 0.2, to: 2.0, steps: 7, policy: Policy::Fig3 };
        for r in run_sweep(&base(), &spec).unwrap() {
            assert!((r.e_n - (-(2.0 * r.eta_minus).ln()).max(0.0)).abs() < 1e-12);
        }
    }
}
