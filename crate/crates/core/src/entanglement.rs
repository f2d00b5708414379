//! Two-mode Gaussian entanglement measures in the vacuum = 1/2 convention.

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;

use crate::C64;

/// Real symmetric correlation matrix over (X1, P1, X2, P2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovMatrix4(pub Matrix4<f64>);

impl CovMatrix4 {
    pub fn vacuum() -> Self {
        Self(Matrix4::identity() * 0.5)
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Self(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[(i, j)];
            }
        }
        out
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn symmetrized(&self) -> Self {
        Self((self.0 + self.0.transpose()) * 0.5)
    }

    /// Diagonal blocks of the two modes and their cross block.
    pub fn blocks(&self) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
        let m = &self.0;
        (m.fixed_view::<2, 2>(0, 0).into_owned(), m.fixed_view::<2, 2>(2, 2).into_owned(), m.fixed_view::<2, 2>(0, 2).into_owned())
    }

    /// Product of phase-space rotations by `phi1` on mode 1 and `phi2` on mode 2.
    pub fn rotated(&self, phi1: f64, phi2: f64) -> Self {
        let r = |p: f64| Matrix2::new(p.cos(), -p.sin(), p.sin(), p.cos());
        let mut s = Matrix4::zeros();
        s.fixed_view_mut::<2, 2>(0, 0).copy_from(&r(phi1));
        s.fixed_view_mut::<2, 2>(2, 2).copy_from(&r(phi2));
        Self(s * self.0 * s.transpose())
    }

    /// Two-mode squeezed vacuum with squeezing `r`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let (c, s) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        Self::from_rows([[c, 0.0, s, 0.0], [0.0, c, 0.0, -s], [s, 0.0, c, 0.0], [0.0, -s, 0.0, c]])
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.0 - self.0.transpose()).abs().max() <= tol
    }
}

impl Serialize for CovMatrix4 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// Seralian Σ = det A + det B − 2 det C, invariant under local symplectic maps.
pub fn seralian(v: &CovMatrix4) -> f64 {
    let (a, b, c) = v.blocks();
    a.determinant() + b.determinant() - 2.0 * c.determinant()
}

/// Symplectic eigenvalues (η⁻, η⁺) of the partial transpose. Returns a flag
/// when a slightly negative discriminant had to be clamped.
pub fn symplectic_eigenvalues(v: &CovMatrix4) -> ((f64, f64), bool) {
    let (a, b, c) = v.blocks();
    let sigma = a.determinant() + b.determinant() - 2.0 * c.determinant();
    let det = v.0.determinant();
    let mut disc = sigma * sigma - 4.0 * det;
    let mut clamped = false;
    if disc < 0.0 {
        clamped = disc < -1e-12;
        disc = 0.0;
    }
    let root = disc.sqrt();
    let minus = ((sigma - root) / 2.0).max(0.0).sqrt();
    let plus = ((sigma + root) / 2.0).max(0.0).sqrt();
    ((minus, plus), clamped)
}

/// Symplectic eigenvalues (ν⁻, ν⁺) of the state itself; both ≥ 1/2 for physical states.
///
/// Taken from the Hermitian matrix `i V^{1/2} Ω V^{1/2}`, whose eigenvalues
/// are ±ν. This stays accurate when the two values are degenerate, unlike the
/// invariant formula. Returns (0, 0) when V is not positive semidefinite.
pub fn state_symplectic_eigenvalues(v: &CovMatrix4) -> (f64, f64) {
    let eig = v.0.symmetric_eigen();
    if eig.eigenvalues.min() < 0.0 {
        return (0.0, 0.0);
    }
    let root = &eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let omega = symplectic_form();
    let h = (root * omega * root).map(|x| C64::new(0.0, x));
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().map(|x| x.abs()).collect();
    vals.sort_by(f64::total_cmp);
    (vals[0].min(vals[1]), vals[2].max(vals[3]))
}

/// Ω = diag(J, J) with J = [[0, 1], [-1, 0]].
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0)
}

pub fn eta_minus(v: &CovMatrix4) -> f64 {
    symplectic_eigenvalues(v).0 .0
}

/// `max(0, -ln 2η⁻)`, natural log.
pub fn log_negativity(v: &CovMatrix4) -> f64 {
    log_negativity_from_eta(eta_minus(v))
}

pub fn log_negativity_from_eta(eta: f64) -> f64 {
    (-(2.0 * eta).ln()).max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimonCheck {
    /// 4 det V
    pub lhs: f64,
    /// Σ − 1/4
    pub rhs: f64,
    pub entangled: bool,
}

pub fn simon_check(v: &CovMatrix4) -> SimonCheck {
    let lhs = 4.0 * v.0.determinant();
    let rhs = seralian(v) - 0.25;
    SimonCheck { lhs, rhs, entangled: lhs < rhs }
}

/// ½[Var(X1 − X2) + Var(P1 + P2)].
pub fn epr_variance(v: &CovMatrix4) -> f64 {
    let m = &v.0;
    0.5 * (m[(0, 0)] + m[(2, 2)] - 2.0 * m[(0, 2)] + m[(1, 1)] + m[(3, 3)] + 2.0 * m[(1, 3)])
}

/// Smallest EPR variance reachable by local phase rotations.
///
/// Only the cross block depends on the angles; its two singular values enter
/// with the sign of its determinant.
pub fn min_epr_over_rotations(v: &CovMatrix4) -> f64 {
    let (a, b, c) = v.blocks();
    let svd = c.svd(false, false);
    let (s1, s2) = (svd.singular_values[0], svd.singular_values[1]);
    let best = if c.determinant() <= 0.0 { s1 + s2 } else { s1 - s2 };
    0.5 * (a.trace() + b.trace()) - best
}

/// Both symplectic eigenvalues at least `1/2 - tol` and V positive definite.
pub fn is_physical(v: &CovMatrix4, tol: f64) -> bool {
    let (lo, _) = state_symplectic_eigenvalues(v);
    lo >= 0.5 - tol
}

/// Threshold margin on η⁻ below which the state counts as entangled.
pub const ENTANGLEMENT_MARGIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub eta_minus: f64,
    pub log_negativity: f64,
    pub entangled: bool,
    pub simon_lhs: f64,
    pub simon_rhs: f64,
    pub xi_epr: f64,
    pub nbar_pulse1: f64,
    pub nbar_pulse2: f64,
    /// Set when a negative discriminant had to be clamped.
    pub clamped: bool,
}

impl EntanglementReport {
    pub fn new(v: &CovMatrix4) -> Self {
        let ((eta, _), clamped) = symplectic_eigenvalues(v);
        let simon = simon_check(v);
        Self {
            eta_minus: eta,
            log_negativity: log_negativity_from_eta(eta),
            entangled: eta < 0.5 - ENTANGLEMENT_MARGIN,
            simon_lhs: simon.lhs,
            simon_rhs: simon.rhs,
            xi_epr: epr_variance(v),
            nbar_pulse1: 0.5 * (v.get(0, 0) + v.get(1, 1)) - 0.5,
            nbar_pulse2: 0.5 * (v.get(2, 2) + v.get(3, 3)) - 0.5,
            clamped,
        }
    }
}
