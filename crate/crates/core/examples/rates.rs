//! Derived couplings and loss rates for the reference parameters, in both
//! coupling modes, plus the regime checks.

use std::f64::consts::TAU;

use twinpulse::model::{validate_regime, REFERENCE_KAPPAS_HZ};
use twinpulse::{derive_rates, hz, ChiMode, PhysicalParams};

fn main() -> twinpulse::Result<()> {
    let p = PhysicalParams::reference(hz(REFERENCE_KAPPAS_HZ[3]));
    for mode in [ChiMode::Leading, ChiMode::Exact] {
        let r = derive_rates(&p, mode)?;
        let khz = |x: f64| x / TAU / 1e3;
        println!(
            "{mode:?}: |chi1| = {:.4} kHz, |chi2| = {:.4} kHz, kappa_L = {:.4} kHz, motional losses = [{:.4}, {:.4}, {:.4}, {:.4}] kHz",
            khz(r.chi1.norm()),
            khz(r.chi2.norm()),
            khz(r.kappa_l),
            khz(r.kappa_b_p1),
            khz(r.kappa_b_m1),
            khz(r.kappa_b_p2),
            khz(r.kappa_b_m2),
        );
    }
    let r = derive_rates(&p, ChiMode::Leading)?;
    for c in validate_regime(&p, &r, 0.0) {
        println!("{:<22} {:>12.4e} {:?}", c.name, c.ratio, c.verdict);
    }
    Ok(())
}
