use nalgebra::Matrix4;
use proptest::prelude::*;

use twinpulse::entanglement::{
    epr_variance, eta_minus, is_physical, log_negativity, min_epr_over_rotations, simon_check, state_symplectic_eigenvalues,
};
use twinpulse::protocol::{SecondPulse, Separation};
use twinpulse::{hz, run_point, ChiMode, CovMatrix4, PhysicalParams, Timing, TmChoice};

prop_compose! {
    fn config()(
        kappa in 0.5e3..20e3f64,
        kappa_h in 0.0..100.0f64,
        drive1 in 0.4..1.2f64,
        drive2 in 0.4..1.2f64,
        eta in 0.03..0.15f64,
        detuning in 80e6..200e6f64,
        theta_l in 0.0..std::f64::consts::PI,
        t1 in 2e-6..80e-6f64,
        decays in 1.5..5.0f64,
        ratio in 0.2..2.0f64,
    ) -> (PhysicalParams, Timing) {
        let mut p = PhysicalParams::reference(hz(kappa));
        p.kappa_h = hz(kappa_h);
        p.kappa_b = p.kappa_h / 2000.0;
        p.omega1 *= drive1;
        p.omega2 *= drive2;
        p.eta = eta;
        p.delta1 = -hz(detuning);
        p.theta_l = theta_l;
        let t = Timing { t1, separation: Separation::CavityDecays(decays), second_pulse: SecondPulse::OptimalRatio(ratio) };
        (p, t)
    }
}

/// Thermalised two-mode squeezed state under local rotations: physical by construction.
fn noisy_tms(r: f64, n1: f64, n2: f64, phi1: f64, phi2: f64) -> CovMatrix4 {
    let base = CovMatrix4::two_mode_squeezed(r).0 + Matrix4::from_diagonal(&nalgebra::Vector4::new(n1, n1, n2, n2));
    CovMatrix4(base).rotated(phi1, phi2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn output_state_is_physical((p, t) in config(), exact in any::<bool>()) {
        let chi = if exact { ChiMode::Exact } else { ChiMode::Leading };
        if let Ok(run) = run_point(&p, chi, false, &t, TmChoice::Auto) {
            let (lo, _) = state_symplectic_eigenvalues(&run.vout);
            prop_assert!(lo >= 0.5 - 1e-9, "nu- = {lo}");
            prop_assert!(run.vout.is_symmetric(0.0));
            prop_assert_eq!(simon_check(&run.vout).entangled, eta_minus(&run.vout) < 0.5);
        }
    }

    #[test]
    fn simon_matches_eta(r in 0.0..1.5f64, n1 in 0.0..2.0f64, n2 in 0.0..2.0f64, a in -3.2..3.2f64, b in -3.2..3.2f64) {
        let v = noisy_tms(r, n1, n2, a, b);
        let eta = eta_minus(&v);
        prop_assume!((eta - 0.5).abs() > 1e-9);
        prop_assert_eq!(simon_check(&v).entangled, eta < 0.5);
        prop_assert!(is_physical(&v, 1e-9));
    }

    #[test]
    fn local_rotations_preserve_measures(r in 0.0..1.5f64, n in 0.0..1.0f64, a in -3.2..3.2f64, b in -3.2..3.2f64) {
        let v = noisy_tms(r, n, n, 0.0, 0.0);
        let w = v.rotated(a, b);
        prop_assert!((log_negativity(&v) - log_negativity(&w)).abs() < 1e-9);
        prop_assert!((min_epr_over_rotations(&v) - min_epr_over_rotations(&w)).abs() < 1e-9);
        prop_assert!(min_epr_over_rotations(&w) <= epr_variance(&w) + 1e-12);
    }
}

#[test]
fn squeezed_vacuum_log_negativity() {
    for r in [0.1, 0.5, 1.0] {
        assert!((log_negativity(&CovMatrix4::two_mode_squeezed(r)) - 2.0 * r).abs() < 1e-9);
    }
}
