//! Closed-form output matrix against direct integration of the moment
//! equations, then the same comparison with a deliberately wrong generator.

use twinpulse::oracle::{oracle_pipeline, oracle_pipeline_with};
use twinpulse::output::optimal_tm;
use twinpulse::{derive_rates, hz, ChiMode, PhysicalParams, Timing};

fn main() -> twinpulse::Result<()> {
    let r = derive_rates(&PhysicalParams::reference(hz(11e3)), ChiMode::Leading)?;
    let (s, _) = Timing::reference().schedule(&r)?;
    let tm = optimal_tm(&r);

    let rep = oracle_pipeline(&r, &s, tm)?;
    println!("max relative error {:.3e} at {:?}", rep.max_rel_err, rep.worst);
    println!("commutator drift   {:.3e}", rep.commutator_defect);
    println!("analytic:\n{}numeric:\n{}", rep.analytic.0, rep.numeric.0);

    let broken = oracle_pipeline_with(&r, &s, tm, |g| g.pulse2.drift[(2, 0)] = -g.pulse2.drift[(2, 0)])?;
    println!("with a flipped swap term: {:.3e}", broken.max_rel_err);
    Ok(())
}
