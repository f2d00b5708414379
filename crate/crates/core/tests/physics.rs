use twinpulse::model::REFERENCE_KAPPAS_HZ;
use twinpulse::{hz, run_point, ChiMode, PhysicalParams, Timing, TmChoice};

fn e_n(p: &PhysicalParams, noiseless: bool) -> f64 {
    run_point(p, ChiMode::Leading, noiseless, &Timing::reference(), TmChoice::Auto).unwrap().report.log_negativity
}

#[test]
fn removing_noise_never_hurts() {
    for k in REFERENCE_KAPPAS_HZ {
        let p = PhysicalParams::reference(hz(k));
        assert!(e_n(&p, true) >= e_n(&p, false), "kappa {k}");
    }
}

#[test]
fn heating_lowers_entanglement() {
    let mut last = f64::INFINITY;
    for h in [0.0, 20.0, 200.0, 2000.0] {
        let mut p = PhysicalParams::reference(hz(6.4e3));
        p.kappa_h = hz(h);
        p.kappa_b = p.kappa_h / 2000.0;
        let e = e_n(&p, false);
        assert!(e <= last, "heating {h} Hz: {e} > {last}");
        last = e;
    }
}

#[test]
fn stronger_cavity_decay_lowers_entanglement() {
    let values: Vec<f64> = REFERENCE_KAPPAS_HZ.iter().map(|&k| e_n(&PhysicalParams::reference(hz(k)), false)).collect();
    // the reference list runs from the largest decay to the smallest
    assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
}

#[test]
fn reference_point_values() {
    // regression against the values recorded when the closed form was checked by the oracle
    let run = run_point(&PhysicalParams::reference(hz(0.8e3)), ChiMode::Leading, false, &Timing::reference(), TmChoice::Auto).unwrap();
    assert!((run.report.log_negativity - 0.727514061517).abs() < 1e-9);
    assert!((run.moments_t1.n_a - 12.8235893130).abs() < 1e-8);
    assert!((run.window.alpha - 0.819332250463).abs() < 1e-10);
}

#[test]
fn separation_costs_entanglement() {
    let p = PhysicalParams::reference(hz(6.4e3));
    let mut t = Timing::reference();
    let near = run_point(&p, ChiMode::Leading, false, &t, TmChoice::Auto).unwrap().report.log_negativity;
    t.separation = twinpulse::protocol::Separation::Seconds(2e-3);
    let far = run_point(&p, ChiMode::Leading, false, &t, TmChoice::Auto).unwrap().report.log_negativity;
    assert!(far < near);
}
