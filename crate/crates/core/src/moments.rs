//! Second moments of the cavity and motion through the three stages, and the
//! intracavity correlation matrix of the field at the end of each pulse.

use serde::Serialize;

use crate::integrals::KernelIntegrals;
use crate::propagators::{dark_decay_factors, StageCoefficients};
use crate::{CovMatrix4, DerivedRates, Error, Result, C64};

/// Protocol times: first pulse on `[0, t1]`, dark until `t`, second pulse until `t2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub t1: f64,
    pub t: f64,
    pub t2: f64,
}

impl Schedule {
    pub fn new(t1: f64, t: f64, t2: f64) -> Result<Self> {
        let ok = t1.is_finite() && t.is_finite() && t2.is_finite();
        if !ok || t1 < 0.0 || t <= t1 || t2 < t {
            return Err(Error::Schedule(format!("need 0 <= T1 < T <= T2, got T1={t1:e}, T={t:e}, T2={t2:e}")));
        }
        Ok(Self { t1, t, t2 })
    }

    pub fn dark(&self) -> f64 {
        self.t - self.t1
    }

    pub fn pulse2(&self) -> f64 {
        self.t2 - self.t
    }
}

/// Equal-time moments. `comm_*` are the expectation values of `[a,a†]`,
/// `[b,b†]` and `[b,a]`; they stay at (1, 1, 0) unless the noise model is
/// inconsistent with the coupling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentSet {
    pub n_a: f64,
    pub n_b: f64,
    /// ⟨a b⟩
    pub c_ab: C64,
    /// ⟨a a⟩
    pub aa: C64,
    pub comm_a: f64,
    pub comm_b: f64,
    pub comm_ba: C64,
    pub time: f64,
}

impl MomentSet {
    pub fn vacuum(time: f64) -> Self {
        Self {
            n_a: 0.0,
            n_b: 0.0,
            c_ab: C64::new(0.0, 0.0),
            aa: C64::new(0.0, 0.0),
            comm_a: 1.0,
            comm_b: 1.0,
            comm_ba: C64::new(0.0, 0.0),
            time,
        }
    }

    /// Largest departure of `⟨[a,a†]⟩` and `⟨[b,b†]⟩` from one.
    ///
    /// The cross commutator `⟨[b,a]⟩` is left out: the shared cavity loss port
    /// makes it nonzero at leading order, and it is reported on its own.
    pub fn commutator_defect(&self) -> f64 {
        (self.comm_a - 1.0).abs().max((self.comm_b - 1.0).abs())
    }
}

/// Correlators of the cavity field at the end of pulse 1 (index 1) and pulse 2 (index 2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoTimeSet {
    pub a1a2: C64,
    pub a1a2dag: C64,
    pub a1dag_a2: C64,
    pub a1dag_a2dag: C64,
    pub n_a_t2: f64,
    pub comm_a_t2: f64,
    pub aa_t2: C64,
    pub a2dag_a2dag: C64,
}

/// `(1 - e^{-x})/x`, finite at zero.
pub fn phi(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x / 2.0 + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

pub fn noise_integrals_pulse1(c: &StageCoefficients, t1: f64) -> KernelIntegrals {
    c.kernel().integrals(t1)
}

pub fn moments_after_pulse1(r: &DerivedRates, t1: f64) -> MomentSet {
    let c = StageCoefficients::pulse1(r);
    let i = noise_integrals_pulse1(&c, t1);
    let (gm, f) = (c.g(t1, false), c.f(t1));
    let chi = r.chi1;
    let chi2 = chi.norm_sqr();
    let gamma_a = r.cavity_decay();
    let heat_up = r.kappa_h + 2.0 * r.kappa_b;
    // the lower-sideband loss port feeds both cavity and motion
    let shared = 2.0 * r.kbar_l * r.kbar_b_m1.conj();
    let defect = (chi * shared).re;

    MomentSet {
        n_a: chi2 * (f * f + (heat_up + 2.0 * r.kappa_b_p1) * i.ff),
        n_b: chi2 * f * f + 2.0 * chi2 * gamma_a * i.ff + (r.kappa_h + 2.0 * r.kappa_b_m1) * i.gpgp - 2.0 * defect * i.fgp,
        c_ab: chi * gm * f + 2.0 * chi * gamma_a * i.fgm - shared.conj() * i.gpgm - chi * chi * shared * i.ff
            + chi * (r.kappa_h + 2.0 * r.kappa_b_m1) * i.fgp,
        aa: C64::new(0.0, 0.0),
        comm_a: 1.0 - 2.0 * defect * i.fgm,
        comm_b: 1.0 + 2.0 * defect * i.fgp,
        comm_ba: chi * chi * shared * i.ff + shared.conj() * i.gpgm,
        time: t1,
    }
}

pub fn propagate_dark(m: &MomentSet, dt: f64, r: &DerivedRates) -> MomentSet {
    let c = StageCoefficients::dark(r);
    let (ca, mb) = dark_decay_factors(dt, &c);
    let ca2 = ca * ca;
    let x = 2.0 * r.kappa_b * dt;
    let fill = dt * phi(x);
    let pair = ca * mb;
    MomentSet {
        n_a: m.n_a * ca2,
        n_b: m.n_b * (-x).exp() + r.kappa_h * fill,
        c_ab: m.c_ab * pair,
        aa: m.aa * ca2,
        comm_a: m.comm_a * ca2 + (1.0 - ca2),
        comm_b: m.comm_b * (-x).exp() + 2.0 * r.kappa_b * fill,
        comm_ba: m.comm_ba * pair,
        time: m.time + dt,
    }
}

pub fn correlators_after_pulse2(at_t: &MomentSet, at_t1: &MomentSet, r: &DerivedRates, s: &Schedule) -> TwoTimeSet {
    let c = StageCoefficients::pulse2(r);
    let dt2 = s.pulse2();
    let i = c.kernel().integrals(dt2);
    let (g, f) = (c.g(dt2, false), c.f(dt2));
    let dark = StageCoefficients::dark(r);
    let (ca, mb) = dark_decay_factors(s.dark(), &dark);
    let chi = r.chi2;
    let shared = 2.0 * r.kbar_l.conj() * r.kbar_b_p2.conj();

    let aa_t2 = g * g * at_t.aa + g * chi * f * (2.0 * at_t.c_ab + at_t.comm_ba);
    TwoTimeSet {
        a1a2: g * ca * at_t1.aa + chi * f * mb * at_t1.c_ab,
        a1a2dag: C64::new(g * ca * (at_t1.n_a + at_t1.comm_a), 0.0),
        a1dag_a2: C64::new(g * ca * at_t1.n_a, 0.0),
        a1dag_a2dag: g * ca * at_t1.aa.conj() + chi.conj() * f * mb.conj() * (at_t1.c_ab + at_t1.comm_ba).conj(),
        n_a_t2: g * g * at_t.n_a + chi.norm_sqr() * f * f * at_t.n_b + chi.norm_sqr() * (r.kappa_h + 2.0 * r.kappa_b_m2) * i.ff,
        comm_a_t2: 1.0
            + g * g * (at_t.comm_a - 1.0)
            + chi.norm_sqr() * f * f * (at_t.comm_b - 1.0)
            + 2.0 * (chi.conj() * shared).re * i.fgm,
        aa_t2,
        a2dag_a2dag: aa_t2.conj(),
    }
}

/// Real symmetric (X, P) block from the four normal/anti-normal correlators of
/// two modes `u` (earlier) and `v`.
fn quadrature_block(uv: C64, uvd: C64, udv: C64, udvd: C64) -> [[f64; 2]; 2] {
    let i = C64::i();
    let xx = (uv + uvd + udv + udvd) / 2.0;
    let xp = (uv - uvd + udv - udvd) / (2.0 * i);
    let px = (uv + uvd - udv - udvd) / (2.0 * i);
    let pp = -(uv - uvd - udv + udvd) / 2.0;
    [[xx.re, xp.re], [px.re, pp.re]]
}

/// Correlation matrix of the cavity field at the ends of the two pulses,
/// ordered (X(T1), P(T1), X(T2), P(T2)).
pub fn intracavity_cov(tt: &TwoTimeSet, at_t1: &MomentSet) -> CovMatrix4 {
    let n1 = C64::new(at_t1.n_a, 0.0);
    let first = quadrature_block(at_t1.aa, n1 + at_t1.comm_a, n1, at_t1.aa.conj());
    let n2 = C64::new(tt.n_a_t2, 0.0);
    let second = quadrature_block(tt.aa_t2, n2 + tt.comm_a_t2, n2, tt.a2dag_a2dag);
    let cross = quadrature_block(tt.a1a2, tt.a1a2dag, tt.a1dag_a2, tt.a1dag_a2dag);
    let mut v = [[0.0; 4]; 4];
    for j in 0..2 {
        for k in 0..2 {
            v[j][k] = first[j][k];
            v[2 + j][2 + k] = second[j][k];
            v[j][2 + k] = cross[j][k];
            v[2 + k][j] = cross[j][k];
        }
    }
    CovMatrix4::from_rows(v).symmetrized()
}
