//! Round-trips parameters through the key/value config format.

use twinpulse::config::{parse_config, to_config_text};
use twinpulse::{hz, PhysicalParams};

fn main() -> twinpulse::Result<()> {
    let mut p = PhysicalParams::reference(hz(6.4e3));
    p.eta = 0.08;
    let text = to_config_text(&p);
    print!("{text}");
    let back = parse_config(&text)?;
    // the text carries 13 significant digits
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
    let worst = [
        rel(back.kappa, p.kappa),
        rel(back.eta, p.eta),
        rel(back.theta_c, p.theta_c),
        rel(back.omega1.norm(), p.omega1.norm()),
        rel(back.delta1, p.delta1),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    println!("# round trip relative difference {worst:.1e}");

    match parse_config("kappa = 800\nomega_1 = 10e6\n") {
        Err(e) => println!("# rejected: {e}"),
        Ok(_) => println!("# unexpectedly accepted"),
    }
    Ok(())
}
