//! Entanglement measures on a two-mode squeezed state with added thermal
//! noise, showing where the state stops being entangled.

use nalgebra::{Matrix4, Vector4};
use twinpulse::entanglement::{epr_variance, log_negativity, min_epr_over_rotations, simon_check, symplectic_eigenvalues};
use twinpulse::CovMatrix4;

fn main() {
    let r = 0.6;
    println!("{:>6} {:>9} {:>9} {:>9} {:>9} {:>7}", "noise", "eta-", "E_N", "xi", "xi_min", "simon");
    for i in 0..=10 {
        let n = 0.1 * i as f64;
        let v = CovMatrix4(CovMatrix4::two_mode_squeezed(r).rotated(0.0, 0.8).0 + Matrix4::from_diagonal(&Vector4::repeat(n)));
        let ((eta, _), _) = symplectic_eigenvalues(&v);
        println!(
            "{n:>6.2} {eta:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>7}",
            log_negativity(&v),
            epr_variance(&v),
            min_epr_over_rotations(&v),
            simon_check(&v).entangled
        );
    }
}
