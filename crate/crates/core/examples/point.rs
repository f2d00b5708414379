//! One protocol run per reference cavity decay.

use twinpulse::model::REFERENCE_KAPPAS_HZ;
use twinpulse::{hz, run_point, ChiMode, PhysicalParams, Timing, TmChoice};

fn main() -> twinpulse::Result<()> {
    println!("{:>8} {:>9} {:>9} {:>9} {:>8} {:>9}", "kHz", "E_N", "eta-", "xi_EPR", "alpha", "n(T1)");
    for k in REFERENCE_KAPPAS_HZ {
        let run = run_point(&PhysicalParams::reference(hz(k)), ChiMode::Leading, false, &Timing::reference(), TmChoice::Auto)?;
        let r = &run.report;
        println!(
            "{:>8.1} {:>9.4} {:>9.4} {:>9.4} {:>8.4} {:>9.3}",
            k / 1e3,
            r.log_negativity,
            r.eta_minus,
            r.xi_epr,
            run.window.alpha,
            run.moments_t1.n_a
        );
        for w in &run.warnings {
            println!("         warning: {w}");
        }
    }
    Ok(())
}
