//! Closed-form time integrals of the stage kernels.
//!
//! Both laser stages evolve the pair (cavity, motion) through
//! `g±(t) = e^{-κS t} (C(t) ± κD S(t))` and `f(t) = e^{-κS t} S(t)`, where
//! `C = cosh(√q t)` and `S = sinh(√q t)/√q`. Negative `q` turns these into
//! the oscillating cos / sin forms, so one set of formulas covers both stages.

use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kernel {
    /// κS, common exponential decay.
    pub decay: f64,
    /// κD, half the difference of the two damping rates.
    pub split: f64,
    /// Squared growth rate; negative for oscillating kernels.
    pub q: f64,
}

/// Integrals over `[0, T]` of the six products of kernel functions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KernelIntegrals {
    pub ff: f64,
    pub gpgp: f64,
    pub gmgm: f64,
    pub gpgm: f64,
    pub fgp: f64,
    pub fgm: f64,
}

/// `cosh(√q t)` continued to q < 0.
pub fn cosh_kernel(q: f64, t: f64) -> f64 {
    if q >= 0.0 {
        (q.sqrt() * t).cosh()
    } else {
        ((-q).sqrt() * t).cos()
    }
}

/// `sinh(√q t)/√q` continued to q ≤ 0.
pub fn sinh_kernel(q: f64, t: f64) -> f64 {
    let r = q.abs().sqrt();
    let x = r * t;
    if x < 1e-6 {
        let z = q * t * t;
        return t * (1.0 + z / 6.0 * (1.0 + z / 20.0));
    }
    if q > 0.0 {
        x.sinh() / r
    } else {
        x.sin() / r
    }
}

impl Kernel {
    pub fn g_plus(&self, t: f64) -> f64 {
        (-self.decay * t).exp() * (cosh_kernel(self.q, t) + self.split * sinh_kernel(self.q, t))
    }

    pub fn g_minus(&self, t: f64) -> f64 {
        (-self.decay * t).exp() * (cosh_kernel(self.q, t) - self.split * sinh_kernel(self.q, t))
    }

    pub fn f(&self, t: f64) -> f64 {
        (-self.decay * t).exp() * sinh_kernel(self.q, t)
    }

    pub fn integrals(&self, t: f64) -> KernelIntegrals {
        if t <= 0.0 {
            return KernelIntegrals::default();
        }
        let a = -2.0 * self.decay;
        let theta = C64::new(self.q, 0.0).sqrt();
        let scale = if a == 0.0 { t } else { t.min(1.0 / a.abs()) };
        let (p0, ps, pcm) = if 2.0 * theta.norm() * scale < 0.2 {
            self.base_integrals_quadrature(t)
        } else {
            let e = |lambda: C64| growth_integral(lambda, t);
            let two = 2.0 * theta;
            let ap = e(C64::new(a, 0.0) + two);
            let am = e(C64::new(a, 0.0) - two);
            let a0 = e(C64::new(a, 0.0));
            ((a0).re, ((ap - am) / (2.0 * two)).re, ((ap + am - 2.0 * a0) / (4.0 * self.q)).re)
        };
        let d = self.split;
        KernelIntegrals {
            ff: pcm,
            gpgp: p0 + self.q * pcm + 2.0 * d * ps + d * d * pcm,
            gmgm: p0 + self.q * pcm - 2.0 * d * ps + d * d * pcm,
            gpgm: p0 + (self.q - d * d) * pcm,
            fgp: ps + d * pcm,
            fgm: ps - d * pcm,
        }
    }

    /// (∫e^{at}, ∫e^{at} C S, ∫e^{at} S²) by Gauss–Legendre panels.
    fn base_integrals_quadrature(&self, t: f64) -> (f64, f64, f64) {
        let a = -2.0 * self.decay;
        let h = 2.0 * self.q.abs().sqrt();
        let panels = (((a.abs() + h) * t / 4.0).ceil() as usize).clamp(16, 4096);
        let mut acc = (0.0, 0.0, 0.0);
        let width = t / panels as f64;
        for k in 0..panels {
            let mid = (k as f64 + 0.5) * width;
            for (x, w) in GL16 {
                let s = mid + 0.5 * width * x;
                let ww = 0.5 * width * w * (a * s).exp();
                let c = cosh_kernel(self.q, s);
                let sh = sinh_kernel(self.q, s);
                acc.0 += ww;
                acc.1 += ww * c * sh;
                acc.2 += ww * sh * sh;
            }
        }
        acc
    }
}

/// `(e^{λT} - 1)/λ`, accurate for small |λT|.
pub fn growth_integral(lambda: C64, t: f64) -> C64 {
    let z = lambda * t;
    if z.norm() < 1e-4 {
        // T (1 + z/2 + z²/6 + z³/24 + z⁴/120)
        return t * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0))));
    }
    expm1(z) / lambda
}

fn expm1(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    C64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    struct Ctx<'a, F> {
        f: &'a F,
        /// Rounding floor: below this a refinement cannot improve the estimate.
        floor: f64,
    }
    fn step<F: Fn(f64) -> f64>(c: &Ctx<F>, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = ((c.f)(lm), (c.f)(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= (15.0 * tol).max(c.floor) {
            return left + right + delta / 15.0;
        }
        step(c, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(c, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let magnitude = (b - a).abs() / 6.0 * (fa.abs() + 4.0 * fm.abs() + fb.abs());
    let ctx = Ctx { f, floor: 1e-16 * magnitude };
    step(&ctx, a, b, fa, fm, fb, whole, tol, 40)
}

const GL16: [(f64, f64); 16] = [
    (-0.989_400_934_991_649_9, 0.027_152_459_411_754_1),
    (-0.944_575_023_073_232_6, 0.062_253_523_938_647_9),
    (-0.865_631_202_387_831_7, 0.095_158_511_682_492_8),
    (-0.755_404_408_355_003_0, 0.124_628_971_255_533_9),
    (-0.617_876_244_402_643_7, 0.149_595_988_816_576_7),
    (-0.458_016_777_657_227_4, 0.169_156_519_395_002_5),
    (-0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (-0.095_012_509_837_637_4, 0.189_450_610_455_068_5),
    (0.095_012_509_837_637_4, 0.189_450_610_455_068_5),
    (0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (0.458_016_777_657_227_4, 0.169_156_519_395_002_5),
    (0.617_876_244_402_643_7, 0.149_595_988_816_576_7),
    (0.755_404_408_355_003_0, 0.124_628_971_255_533_9),
    (0.865_631_202_387_831_7, 0.095_158_511_682_492_8),
    (0.944_575_023_073_232_6, 0.062_253_523_938_647_9),
    (0.989_400_934_991_649_9, 0.027_152_459_411_754_1),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric(k: &Kernel, t: f64) -> KernelIntegrals {
        let tol = 1e-13;
        let q = |h: &dyn Fn(f64) -> f64| adaptive_simpson(&h, 0.0, t, tol);
        KernelIntegrals {
            ff: q(&|s| k.f(s) * k.f(s)),
            gpgp: q(&|s| k.g_plus(s) * k.g_plus(s)),
            gmgm: q(&|s| k.g_minus(s) * k.g_minus(s)),
            gpgm: q(&|s| k.g_plus(s) * k.g_minus(s)),
            fgp: q(&|s| k.f(s) * k.g_plus(s)),
            fgm: q(&|s| k.f(s) * k.g_minus(s)),
        }
    }

    fn assert_close(a: &KernelIntegrals, b: &KernelIntegrals, rel: f64) {
        let pairs = [(a.ff, b.ff), (a.gpgp, b.gpgp), (a.gmgm, b.gmgm), (a.gpgm, b.gpgm), (a.fgp, b.fgp), (a.fgm, b.fgm)];
        let scale = pairs.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        for (x, y) in pairs {
            assert!((x - y).abs() <= rel * scale, "{a:?}\n{b:?}");
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let cases = [
            Kernel { decay: 3.0, split: 2.5, q: 1.2 },
            Kernel { decay: 3.0, split: 2.5, q: -40.0 },
            Kernel { decay: 0.5, split: 0.5, q: 0.24 },
            Kernel { decay: 2.0, split: -1.0, q: 0.0 },
            Kernel { decay: 1.0, split: 0.3, q: 1e-9 },
            Kernel { decay: 1.0, split: 0.3, q: -1e-9 },
        ];
        for k in cases {
            for t in [1e-3, 0.4, 2.0, 7.5] {
                assert_close(&k.integrals(t), &numeric(&k, t), 1e-9);
            }
        }
    }

    #[test]
    fn growing_kernel() {
        // pulse-1 style: θ > κS, amplification
        let k = Kernel { decay: 1.0, split: 0.99, q: 1.5 };
        assert_close(&k.integrals(5.0), &numeric(&k, 5.0), 1e-9);
    }

    #[test]
    fn zero_length_is_zero() {
        let k = Kernel { decay: 1.0, split: 0.3, q: 2.0 };
        assert_eq!(k.integrals(0.0), KernelIntegrals::default());
    }

    #[test]
    fn growth_integral_small_and_zero() {
        let t = 2.0;
        assert_eq!(growth_integral(C64::new(0.0, 0.0), t).re, t);
        let l = C64::new(1e-6, 2e-6);
        let exact = ((l * t).exp() - 1.0) / l;
        assert!((growth_integral(l, t) - exact).norm() < 1e-9);
        let l = C64::new(-3.0, 5.0);
        let exact = ((l * t).exp() - 1.0) / l;
        assert!((growth_integral(l, t) - exact).norm() < 1e-14);
    }

    #[test]
    fn simpson_on_known_integrals() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 30.0, 1e-14);
        assert!((v - (1.0 - (-30f64).exp())).abs() < 1e-12);
    }
}
