//! Regenerates the three figure families and prints where each curve peaks.
//!
//! Pass a directory to also write one CSV per curve:
//! `cargo run --release --example figures -- out/`

use std::path::PathBuf;

use twinpulse::report::{figure_summary, figure_tables, Format};
use twinpulse::sweep::{reproduce_figure, SweepBase};
use twinpulse::{hz, ChiMode, PhysicalParams, Timing, TmChoice};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let base = SweepBase {
        params: PhysicalParams::reference(hz(0.8e3)),
        chi: ChiMode::Leading,
        noiseless: false,
        timing: Timing::reference(),
        tm: TmChoice::Auto,
    };
    for which in 3..=5 {
        let fig = reproduce_figure(which, &base)?;
        print!("{}", figure_summary(&fig).render(Format::Csv));
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            for (stem, table) in figure_tables(&fig) {
                std::fs::write(dir.join(format!("{stem}.csv")), table.to_csv())?;
            }
        }
    }
    Ok(())
}
