//! Independent numerical path: second-moment equations of the linear Langevin
//! system integrated with an adaptive Runge–Kutta scheme.
//!
//! Operators are tracked as the vector `(a, a†, b, b†, A1, A1†, A2, A2†)` with
//! `A1, A2` the integrated output modes. Equal-time moments `S = ⟨y yᵀ⟩` obey
//! `S' = M S + S Mᵀ + K W Kᵀ`; two-time moments with an earlier operator on the
//! left obey `R' = R Mᵀ`.

use nalgebra::{Matrix2, SMatrix};
use serde::Serialize;

use crate::moments::{correlators_after_pulse2, intracavity_cov, moments_after_pulse1, propagate_dark, MomentSet, Schedule, TwoTimeSet};
use crate::output::output_cov;
use crate::propagators::Stage;
use crate::{CovMatrix4, DerivedRates, Error, Result, C64};

/// Noise channels, in order: cavity input, upper and lower sideband vacuum
/// ports, motional bath. Each appears with its adjoint next to it.
const NOISE_CHANNELS: usize = 8;

type M8 = SMatrix<C64, 8, 8>;
type M4 = SMatrix<C64, 4, 4>;
type M48 = SMatrix<C64, 4, NOISE_CHANNELS>;

#[derive(Clone, Debug, PartialEq)]
pub struct StageGenerator {
    pub stage: Stage,
    /// Drift on `(a, a†, b, b†)`.
    pub drift: M4,
    /// Loading of the noise channels onto `(a, a†, b, b†)`.
    pub loading: M48,
    /// `⟨w_k w_l⟩` white-noise strengths.
    pub noise: M8,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl StageGenerator {
    pub fn build(stage: Stage, r: &DerivedRates) -> Self {
        let zero = c(0.0);
        let ga = c(-r.cavity_decay());
        let s2 = std::f64::consts::SQRT_2;
        let in_amp = c((2.0 * r.kappa).sqrt());
        let mut drift = M4::zeros();
        let mut k = M48::zeros();
        drift[(0, 0)] = ga;
        drift[(1, 1)] = ga;
        k[(0, 0)] = in_amp;
        k[(1, 1)] = in_amp;
        k[(2, 6)] = c(1.0);
        k[(3, 7)] = c(1.0);
        match stage {
            Stage::Pulse1 => {
                let (x, gb) = (r.chi1, c(-r.motion_damping_pulse1()));
                drift[(0, 3)] = x;
                drift[(1, 2)] = x.conj();
                drift[(2, 1)] = x;
                drift[(3, 0)] = x.conj();
                drift[(2, 2)] = gb;
                drift[(3, 3)] = gb;
                k[(0, 4)] = s2 * r.kbar_l.conj();
                k[(1, 5)] = s2 * r.kbar_l;
                k[(2, 2)] = s2 * r.kbar_b_p1;
                k[(3, 3)] = s2 * r.kbar_b_p1.conj();
                k[(2, 5)] = -s2 * r.kbar_b_m1;
                k[(3, 4)] = -s2 * r.kbar_b_m1.conj();
            }
            Stage::Dark => {
                drift[(2, 2)] = C64::new(-r.kappa_b, r.delta_1b);
                drift[(3, 3)] = C64::new(-r.kappa_b, -r.delta_1b);
                k[(0, 4)] = s2 * r.kbar_l.conj();
                k[(1, 5)] = s2 * r.kbar_l;
            }
            Stage::Pulse2 => {
                let (x, gb) = (r.chi2, c(-r.motion_damping_pulse2()));
                drift[(0, 2)] = x;
                drift[(1, 3)] = x.conj();
                drift[(2, 0)] = -x.conj();
                drift[(3, 1)] = -x;
                drift[(2, 2)] = gb;
                drift[(3, 3)] = gb;
                k[(0, 2)] = s2 * r.kbar_l.conj();
                k[(1, 3)] = s2 * r.kbar_l;
                k[(2, 2)] = s2 * r.kbar_b_p2;
                k[(3, 3)] = s2 * r.kbar_b_p2.conj();
                k[(2, 5)] = -s2 * r.kbar_b_m2;
                k[(3, 4)] = -s2 * r.kbar_b_m2.conj();
            }
        }
        let mut w = M8::from_element(zero);
        w[(0, 1)] = c(1.0);
        w[(2, 3)] = c(1.0);
        w[(4, 5)] = c(1.0);
        w[(6, 7)] = c(r.kappa_h + 2.0 * r.kappa_b);
        w[(7, 6)] = c(r.kappa_h);
        Self { stage, drift, loading: k, noise: w }
    }

    /// Drift restricted to the pair of operators the stage couples:
    /// `(a, b†)` while squeezing, `(a, b)` otherwise.
    pub fn reduced_drift(&self) -> Matrix2<C64> {
        let j = if self.stage == Stage::Pulse1 { 3 } else { 2 };
        let d = &self.drift;
        Matrix2::new(d[(0, 0)], d[(0, j)], d[(j, 0)], d[(j, j)])
    }

    pub fn reduced_eigenvalues(&self) -> (C64, C64) {
        let m = self.reduced_drift();
        let tr = m[(0, 0)] + m[(1, 1)];
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let root = (tr * tr / 4.0 - det).sqrt();
        (tr / 2.0 + root, tr / 2.0 - root)
    }
}

/// Which integrated output mode collects light during a segment.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Window {
    None,
    First(f64),
    Second(f64),
}

struct Segment {
    drift: M8,
    diffusion: M8,
    duration: f64,
}

fn segment(g: &StageGenerator, window: Window, kappa: f64, duration: f64) -> Segment {
    let mut m = M8::zeros();
    let mut k = M8::zeros();
    m.fixed_view_mut::<4, 4>(0, 0).copy_from(&g.drift);
    k.fixed_view_mut::<4, 8>(0, 0).copy_from(&g.loading);
    let slot = match window {
        Window::None => None,
        Window::First(tm) => Some((4, tm)),
        Window::Second(tm) => Some((6, tm)),
    };
    if let Some((row, tm)) = slot {
        let gain = c((2.0 * kappa / tm).sqrt());
        let leak = c(-1.0 / tm.sqrt());
        m[(row, 0)] = gain;
        m[(row + 1, 1)] = gain;
        k[(row, 0)] = leak;
        k[(row + 1, 1)] = leak;
    }
    Segment { drift: m, diffusion: k * g.noise * k.transpose(), duration }
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-13 }
    }
}

/// Dormand–Prince 5(4) for `y' = f(y)` on a matrix state.
fn integrate<F>(y0: M8, duration: f64, scale: f64, tol: Tolerance, f: F) -> Result<M8>
where
    F: Fn(&M8) -> M8,
{
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
    if duration <= 0.0 {
        return Ok(y0);
    }
    let mut y = y0;
    let mut t = 0.0;
    let mut h = (0.01 / scale.max(1e-300)).min(duration);
    let mut k1 = f(&y);
    while t < duration {
        let last = t + h >= duration;
        if last {
            h = duration - t;
        }
        let mut k = [k1, M8::zeros(), M8::zeros(), M8::zeros(), M8::zeros(), M8::zeros(), M8::zeros()];
        for s in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                if A[s][j] != 0.0 {
                    ys += kj * c(h * A[s][j]);
                }
            }
            k[s + 1] = f(&ys);
            if s == 5 {
                // stage 7 is evaluated at the fifth-order solution
                let mut err = M8::zeros();
                for (j, kj) in k.iter().enumerate() {
                    if E[j] != 0.0 {
                        err += kj * c(h * E[j]);
                    }
                }
                let mut ratio: f64 = 0.0;
                for i in 0..64 {
                    let sc = tol.atol + tol.rtol * y[i].norm().max(ys[i].norm());
                    ratio = ratio.max(err[i].norm() / sc);
                }
                if ratio <= 1.0 {
                    t = if last { duration } else { t + h };
                    y = ys;
                    k1 = k[6];
                }
                let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
                h *= factor;
                if h < 1e-15 * duration.max(t) {
                    return Err(Error::Integration(format!("step size underflow at t = {t:e} s")));
                }
            }
        }
    }
    Ok(y)
}

fn lyapunov(seg: &Segment, s0: M8, tol: Tolerance) -> Result<M8> {
    let m = seg.drift;
    let d = seg.diffusion;
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    integrate(s0, seg.duration, scale, tol, |s| m * s + s * m.transpose() + d)
}

fn regression(seg: &Segment, r0: M8, tol: Tolerance) -> Result<M8> {
    let mt = seg.drift.transpose();
    let scale = mt.iter().map(|z| z.norm()).fold(0.0, f64::max);
    integrate(r0, seg.duration, scale, tol, |r| r * mt)
}

/// All equal-time moments of `(a, a†, b, b†)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullMoments(pub M4);

impl FullMoments {
    pub fn from_set(m: &MomentSet) -> Self {
        let z = c(0.0);
        let mut s = M4::zeros();
        s[(0, 0)] = m.aa;
        s[(0, 1)] = c(m.n_a + m.comm_a);
        s[(1, 0)] = c(m.n_a);
        s[(1, 1)] = m.aa.conj();
        s[(0, 2)] = m.c_ab;
        s[(2, 0)] = m.c_ab + m.comm_ba;
        s[(1, 3)] = s[(2, 0)].conj();
        s[(3, 1)] = m.c_ab.conj();
        s[(2, 3)] = c(m.n_b + m.comm_b);
        s[(3, 2)] = c(m.n_b);
        s[(0, 3)] = z;
        s[(1, 2)] = z;
        Self(s)
    }

    pub fn to_set(&self, time: f64) -> MomentSet {
        let s = &self.0;
        MomentSet {
            n_a: s[(1, 0)].re,
            n_b: s[(3, 2)].re,
            c_ab: s[(0, 2)],
            aa: s[(0, 0)],
            comm_a: (s[(0, 1)] - s[(1, 0)]).re,
            comm_b: (s[(2, 3)] - s[(3, 2)]).re,
            comm_ba: s[(2, 0)] - s[(0, 2)],
            time,
        }
    }

    /// Moments the reduced set does not carry (⟨a b†⟩, ⟨a† b⟩, ⟨b b⟩).
    pub fn untracked_magnitude(&self) -> f64 {
        let s = &self.0;
        s[(0, 3)].norm().max(s[(1, 2)].norm()).max(s[(2, 2)].norm())
    }
}

fn embed(m: &M4) -> M8 {
    let mut s = M8::zeros();
    s.fixed_view_mut::<4, 4>(0, 0).copy_from(m);
    s
}

fn top(s: &M8) -> M4 {
    s.fixed_view::<4, 4>(0, 0).into_owned()
}

/// Evolves the moments for `t` under one stage generator.
pub fn integrate_moments(g: &StageGenerator, m0: &MomentSet, t: f64, kappa: f64) -> Result<MomentSet> {
    let seg = segment(g, Window::None, kappa, t);
    let s = lyapunov(&seg, embed(&FullMoments::from_set(m0).0), Tolerance::default())?;
    Ok(FullMoments(top(&s)).to_set(m0.time + t))
}

/// Two-time correlators of the field at `T1` with the field at `T2`, given the
/// equal-time moments at `T1`, by regression through the dark and pulse-2 stages.
pub fn regress_two_time(dark: &StageGenerator, pulse2: &StageGenerator, at_t1: &FullMoments, s: &Schedule, kappa: f64) -> Result<M4> {
    let tol = Tolerance::default();
    let r0 = embed(&at_t1.0);
    let r = regression(&segment(dark, Window::None, kappa, s.dark()), r0, tol)?;
    let r = regression(&segment(pulse2, Window::None, kappa, s.pulse2()), r, tol)?;
    Ok(top(&r))
}

/// Stage generators used by the oracle; adjustable for negative controls.
#[derive(Clone, Debug)]
pub struct Generators {
    pub pulse1: StageGenerator,
    pub dark: StageGenerator,
    pub pulse2: StageGenerator,
}

impl Generators {
    pub fn new(r: &DerivedRates) -> Self {
        Self {
            pulse1: StageGenerator::build(Stage::Pulse1, r),
            dark: StageGenerator::build(Stage::Dark, r),
            pulse2: StageGenerator::build(Stage::Pulse2, r),
        }
    }
}

fn block(uv: C64, uvd: C64, udv: C64, udvd: C64) -> [[f64; 2]; 2] {
    let i = C64::i();
    [
        [((uv + uvd + udv + udvd) / 2.0).re, ((uv - uvd + udv - udvd) / (2.0 * i)).re],
        [((uv + uvd - udv - udvd) / (2.0 * i)).re, (-(uv - uvd - udv + udvd) / 2.0).re],
    ]
}

/// Correlation matrix of the two output modes read from the augmented moments.
fn output_from_moments(s: &M8) -> CovMatrix4 {
    let mut v = [[0.0; 4]; 4];
    for (bi, p) in [4usize, 6].iter().enumerate() {
        for (bj, q) in [4usize, 6].iter().enumerate() {
            let b = block(s[(*p, *q)], s[(*p, q + 1)], s[(p + 1, *q)], s[(p + 1, q + 1)]);
            for j in 0..2 {
                for k in 0..2 {
                    v[2 * bi + j][2 * bj + k] = b[j][k];
                }
            }
        }
    }
    CovMatrix4::from_rows(v).symmetrized()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub analytic: CovMatrix4,
    pub numeric: CovMatrix4,
    pub analytic_intracavity: CovMatrix4,
    pub numeric_intracavity: CovMatrix4,
    pub max_rel_err: f64,
    /// Row and column of the worst output element.
    pub worst: (usize, usize),
    pub intracavity_max_rel_err: f64,
    /// Largest |⟨[a,a†]⟩ − 1| or |⟨[b,b†]⟩ − 1| seen at the stage boundaries.
    pub commutator_defect: f64,
    /// Largest |⟨a a⟩| through pulse 1 and the dark stage.
    pub aa_max: f64,
    pub output_commutator_defect: f64,
}

impl OracleReport {
    pub fn passes(&self, threshold: f64) -> bool {
        self.max_rel_err <= threshold
    }
}

/// Elementwise relative error with a floor relative to the largest entry.
pub fn max_relative_error(numeric: &CovMatrix4, analytic: &CovMatrix4) -> (f64, (usize, usize)) {
    let scale = analytic.0.abs().max();
    let mut worst = (0.0, (0, 0));
    for i in 0..4 {
        for j in 0..4 {
            let a = analytic.get(i, j);
            let e = (numeric.get(i, j) - a).abs() / a.abs().max(1e-7 * scale).max(f64::MIN_POSITIVE);
            if e > worst.0 {
                worst = (e, (i, j));
            }
        }
    }
    worst
}

pub fn oracle_pipeline(r: &DerivedRates, s: &Schedule, tm: f64) -> Result<OracleReport> {
    oracle_pipeline_with(r, s, tm, |_| {})
}

/// Runs both paths; `tweak` may alter the oracle generators before integration.
pub fn oracle_pipeline_with<F: FnOnce(&mut Generators)>(r: &DerivedRates, s: &Schedule, tm: f64, tweak: F) -> Result<OracleReport> {
    let m1 = moments_after_pulse1(r, s.t1);
    let mt = propagate_dark(&m1, s.dark(), r);
    let tt = correlators_after_pulse2(&mt, &m1, r, s);
    let analytic_intracavity = intracavity_cov(&tt, &m1);
    let analytic = output_cov(&analytic_intracavity, s, r, tm)?;

    let mut gens = Generators::new(r);
    tweak(&mut gens);
    let tol = Tolerance::default();
    let k = r.kappa;
    let commutator = |m: &M8| ((m[(0, 1)] - m[(1, 0)] - 1.0).norm()).max((m[(2, 3)] - m[(3, 2)] - 1.0).norm());

    let mut sm = M8::zeros();
    sm[(0, 1)] = c(1.0);
    sm[(2, 3)] = c(1.0);
    let s1 = lyapunov(&segment(&gens.pulse1, Window::None, k, s.t1), sm, tol)?;
    let mut defect = commutator(&s1);
    let mut aa_max = s1[(0, 0)].norm();

    let two_time = regress_two_time(&gens.dark, &gens.pulse2, &FullMoments(top(&s1)), s, k)?;

    let sa = lyapunov(&segment(&gens.dark, Window::First(tm), k, tm), s1, tol)?;
    let sb = lyapunov(&segment(&gens.dark, Window::None, k, s.dark() - tm), sa, tol)?;
    defect = defect.max(commutator(&sb));
    aa_max = aa_max.max(sb[(0, 0)].norm());
    let s2 = lyapunov(&segment(&gens.pulse2, Window::None, k, s.pulse2()), sb, tol)?;
    defect = defect.max(commutator(&s2));
    let s_end = lyapunov(&segment(&gens.dark, Window::Second(tm), k, tm), s2, tol)?;

    let numeric_tt = TwoTimeSet {
        a1a2: two_time[(0, 0)],
        a1a2dag: two_time[(0, 1)],
        a1dag_a2: two_time[(1, 0)],
        a1dag_a2dag: two_time[(1, 1)],
        n_a_t2: s2[(1, 0)].re,
        comm_a_t2: (s2[(0, 1)] - s2[(1, 0)]).re,
        aa_t2: s2[(0, 0)],
        a2dag_a2dag: s2[(1, 1)],
    };
    let numeric_intracavity = intracavity_cov(&numeric_tt, &FullMoments(top(&s1)).to_set(s.t1));
    let numeric = output_from_moments(&s_end);
    let (max_rel_err, worst) = max_relative_error(&numeric, &analytic);
    let (intracavity_max_rel_err, _) = max_relative_error(&numeric_intracavity, &analytic_intracavity);
    let output_commutator_defect = [4usize, 6].iter().map(|&p| (s_end[(p, p + 1)] - s_end[(p + 1, p)] - 1.0).norm()).fold(0.0, f64::max);

    Ok(OracleReport {
        analytic,
        numeric,
        analytic_intracavity,
        numeric_intracavity,
        max_rel_err,
        worst,
        intracavity_max_rel_err,
        commutator_defect: defect,
        aa_max,
        output_commutator_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagators::{optimal_transfer_time, StageCoefficients};
    use crate::{derive_rates, hz, ChiMode, PhysicalParams};

    fn rates(kappa_khz: f64) -> DerivedRates {
        derive_rates(&PhysicalParams::reference(hz(kappa_khz * 1e3)), ChiMode::Leading).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn eigenvalues_match_stage_coefficients() {
        let r = rates(6.4);
        let (l1, l2) = StageGenerator::build(Stage::Pulse1, &r).reduced_eigenvalues();
        let (hi, lo) = if l1.re > l2.re { (l1, l2) } else { (l2, l1) };
        assert!((hi - c(-r.kappa_1s + r.theta_1)).norm() < 1e-12 * r.theta_1);
        assert!((lo - c(-r.kappa_1s - r.theta_1)).norm() < 1e-12 * r.theta_1);

        let (l1, l2) = StageGenerator::build(Stage::Pulse2, &r).reduced_eigenvalues();
        let expect = C64::new(-r.kappa_2s, r.theta_2.re);
        let ok = (l1 - expect).norm().min((l2 - expect).norm());
        assert!(ok < 1e-12 * r.theta_2.norm(), "{l1} {l2} {expect}");

        let noiseless = r.noiseless();
        let mut g = StageGenerator::build(Stage::Pulse1, &noiseless);
        g.drift[(0, 0)] = c(0.0);
        g.drift[(1, 1)] = c(0.0);
        let (l1, _) = g.reduced_eigenvalues();
        assert!((l1.norm() - r.chi1.norm()).abs() < 1e-9 * r.chi1.norm());
    }

    #[test]
    fn pulse1_moments_match_closed_form() {
        let r = rates(0.8);
        let g = StageGenerator::build(Stage::Pulse1, &r);
        let num = integrate_moments(&g, &MomentSet::vacuum(0.0), 40e-6, r.kappa).unwrap();
        let ana = moments_after_pulse1(&r, 40e-6);
        assert!(rel(num.n_a, ana.n_a) < 1e-8);
        assert!(rel(num.n_b, ana.n_b) < 1e-8);
        assert!((num.c_ab - ana.c_ab).norm() < 1e-8 * ana.c_ab.norm());
        assert!((num.comm_ba - ana.comm_ba).norm() < 1e-8);
        assert!(num.aa.norm() < 1e-10);
    }

    #[test]
    fn dark_stage_matches_closed_form() {
        let r = rates(11.0);
        let m1 = moments_after_pulse1(&r, 30e-6);
        let g = StageGenerator::build(Stage::Dark, &r);
        let dt = 5e-5;
        let num = integrate_moments(&g, &m1, dt, r.kappa).unwrap();
        let ana = propagate_dark(&m1, dt, &r);
        assert!(rel(num.n_a, ana.n_a) < 1e-7);
        assert!(rel(num.n_b, ana.n_b) < 1e-9);
        assert!((num.c_ab - ana.c_ab).norm() < 1e-8 * ana.c_ab.norm());
    }

    #[test]
    fn zero_generator_is_identity() {
        let r = rates(0.8);
        let mut g = StageGenerator::build(Stage::Dark, &r);
        g.drift = M4::zeros();
        g.loading = M48::zeros();
        let m = moments_after_pulse1(&r, 20e-6);
        let out = integrate_moments(&g, &m, 1e-3, r.kappa).unwrap();
        assert!(rel(out.n_a, m.n_a) < 1e-14);
        assert!(rel(out.n_b, m.n_b) < 1e-14);
    }

    #[test]
    fn shared_loss_port_is_needed_for_cross_moment() {
        // without the common lower-sideband vacuum the populations still agree
        // but the cavity–motion correlation does not
        let r = rates(0.8);
        let mut g = StageGenerator::build(Stage::Pulse1, &r);
        let lost = g.loading[(0, 4)];
        g.loading[(0, 4)] = c(0.0);
        g.loading[(1, 5)] = c(0.0);
        g.loading[(0, 0)] = c((2.0 * r.kappa + lost.norm_sqr()).sqrt());
        g.loading[(1, 1)] = g.loading[(0, 0)];
        let num = integrate_moments(&g, &MomentSet::vacuum(0.0), 40e-6, r.kappa).unwrap();
        let ana = moments_after_pulse1(&r, 40e-6);
        assert!(rel(num.n_a, ana.n_a) < 1e-8);
        assert!((num.c_ab - ana.c_ab).norm() > 1e-6 * ana.c_ab.norm());
    }

    #[test]
    fn full_pipeline_agrees_off_optimum() {
        let r = rates(6.4);
        let dt = optimal_transfer_time(&StageCoefficients::pulse2(&r)).unwrap();
        let gap = 2.0 / r.cavity_decay();
        let s = Schedule::new(40e-6, 40e-6 + gap, 40e-6 + gap + 0.5 * dt).unwrap();
        let rep = oracle_pipeline(&r, &s, crate::output::optimal_tm(&r).min(gap)).unwrap();
        assert!(rep.max_rel_err < 1e-6, "{rep:?}");
        assert!(rep.intracavity_max_rel_err < 1e-6);
        assert!(rep.output_commutator_defect < 1e-8);
    }

    #[test]
    fn corrupted_drift_is_caught() {
        let r = rates(0.8);
        let dt = optimal_transfer_time(&StageCoefficients::pulse2(&r)).unwrap();
        let gap = 2.0 / r.cavity_decay();
        let s = Schedule::new(40e-6, 40e-6 + gap, 40e-6 + gap + dt).unwrap();
        let rep = oracle_pipeline_with(&r, &s, gap.min(crate::output::optimal_tm(&r)), |g| {
            g.pulse2.drift[(2, 0)] = -g.pulse2.drift[(2, 0)];
            g.pulse2.drift[(3, 1)] = -g.pulse2.drift[(3, 1)];
        })
        .unwrap();
        assert!(rep.max_rel_err > 1e-4);
    }
}
