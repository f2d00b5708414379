//! Log-negativity against the heating rate, written as CSV to stdout.

use twinpulse::report::{sweep_table, Format};
use twinpulse::sweep::{run_sweep, Policy, SweepBase, SweepParameter, SweepSpec};
use twinpulse::{hz, ChiMode, PhysicalParams, Timing, TmChoice};

fn main() -> twinpulse::Result<()> {
    let base = SweepBase {
        params: PhysicalParams::reference(hz(6.4e3)),
        chi: ChiMode::Leading,
        noiseless: false,
        timing: Timing::reference(),
        tm: TmChoice::Auto,
    };
    // heating in Hz, as in config files
    let spec = SweepSpec { parameter: SweepParameter::KappaH, from: 0.0, to: 500.0, steps: 11, policy: Policy::Custom };
    let rows = run_sweep(&base, &spec)?;
    print!("{}", sweep_table(spec.parameter.column_name(), &rows, vec!["heating sweep at kappa = 6.4 kHz".into()]).render(Format::Csv));
    Ok(())
}
