//! Single-qubit density matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::{cr, CMat, C0, C1};
use crate::tol::{HERM_GATE, PSD_FLOOR, STATE_TOL};

/// Validated 2x2 density matrix in the {|e>, |g>} basis.
#[derive(Clone, Copy, Debug)]
pub struct QubitState {
    m: CMat,
}

impl QubitState {
    /// Accepts a Hermitian, unit-trace, positive semidefinite 2x2 matrix.
    pub fn new(m: CMat) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::InvalidState(format!("dimension {} != 2", m.dim())));
        }
        let defect = m.herm_defect();
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let (lo, _) = eig2(&m);
        if lo < PSD_FLOOR {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lo:.3e}"
            )));
        }
        Ok(QubitState { m })
    }

    /// rho = [[a, d], [conj(d), 1 - a]].
    pub fn from_entries(a: f64, d: Complex64) -> Result<Self> {
        let m = CMat::from_rows2([[cr(a), d], [d.conj(), cr(1.0 - a)]]);
        Self::new(m)
    }

    pub fn excited() -> Self {
        QubitState {
            m: CMat::from_rows2([[C1, C0], [C0, C0]]),
        }
    }

    pub fn ground() -> Self {
        QubitState {
            m: CMat::from_rows2([[C0, C0], [C0, C1]]),
        }
    }

    pub fn maximally_mixed() -> Self {
        QubitState {
            m: CMat::from_rows2([[cr(0.5), C0], [C0, cr(0.5)]]),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    /// Population of |e>.
    pub fn a(&self) -> f64 {
        self.m.at(0, 0).re
    }

    /// Coherence rho_12.
    pub fn d(&self) -> Complex64 {
        self.m.at(0, 1)
    }

    /// Eigenvalues, ascending. Always real within rounding for a valid state.
    pub fn eigvals(&self) -> (f64, f64) {
        eig2(&self.m)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        let (lo, _) = self.eigvals();
        binary_entropy(lo.clamp(0.0, 1.0))
    }
}

/// Shannon entropy of a weight-p coin, in bits. Zero at the endpoints.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Closed-form eigenvalues of a (nearly) Hermitian 2x2 matrix, ascending.
fn eig2(m: &CMat) -> (f64, f64) {
    let a = m.at(0, 0).re;
    let d = m.at(1, 1).re;
    let b = 0.5 * (m.at(0, 1) + m.at(1, 0).conj());
    let h = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (h - r, h + r)
}

/// True when the matrix passes the Hermiticity gate used by the eigensolver.
pub fn is_hermitian(m: &CMat) -> bool {
    m.herm_defect() <= HERM_GATE
}
