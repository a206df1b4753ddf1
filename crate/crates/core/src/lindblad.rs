//! Markovian generator of the relaxation dynamics.
//!
//! The dissipative part acts on a qubit operator X as
//!
//!   D(X) = -k1 (s+ s- X + X s+ s- - 2 s- X s+)
//!          -k2 (s- s+ X + X s- s+ - 2 s+ X s-)
//!          -k3 (X - s3 X s3)
//!          -k4 (s+ X s+ + s- X s-)
//!
//! with s- the lowering operator. The prefactors map onto the relaxation
//! rates as k1 = (1 - w_eq)/(4 T1), k2 = (1 + w_eq)/(4 T1),
//! k3 = 1/(2 T2) - 1/(4 T1), k4 = 1/T3; the phase-conjugating k4 term is
//! what a squeezed reservoir adds. The coherent part is -i [H, X] with
//! H = (omega/2)(s+ + s-).

use crate::channels::RateParams;
use crate::error::{Error, Result};
use crate::mat::{self, CMat};

/// Prefactors of the four dissipator terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DissipatorCoeffs {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

pub fn dissipator_coeffs(r: &RateParams) -> DissipatorCoeffs {
    DissipatorCoeffs {
        k1: r.inv_t1() * (1.0 - r.w_eq()) / 4.0,
        k2: r.inv_t1() * (1.0 + r.w_eq()) / 4.0,
        k3: r.inv_t2() / 2.0 - r.inv_t1() / 4.0,
        k4: r.inv_t3(),
    }
}

/// Drive Hamiltonian (omega/2)(s+ + s-) = (omega/2) sigma_x.
pub fn hamiltonian(omega: f64) -> CMat {
    mat::sigma_x().scale(mat::cr(omega / 2.0))
}

/// Dissipative part of the generator applied to a 2x2 operator.
pub fn dissipator(r: &RateParams, x: &CMat) -> CMat {
    assert_eq!(x.dim(), 2, "dissipator acts on qubit operators");
    let DissipatorCoeffs { k1, k2, k3, k4 } = dissipator_coeffs(r);
    let sm = mat::sigma_minus();
    let sp = mat::sigma_plus();
    let s3 = mat::sigma_z();
    let pe = &sp * &sm; // |e><e|
    let pg = &sm * &sp; // |g><g|

    let jump_down = &(&sm * x) * &sp;
    let t1 = (&pe * x).add(&(x * &pe)).sub(&jump_down.scale(mat::cr(2.0)));
    let jump_up = &(&sp * x) * &sm;
    let t2 = (&pg * x).add(&(x * &pg)).sub(&jump_up.scale(mat::cr(2.0)));
    let t3 = x.sub(&(&(&s3 * x) * &s3));
    let t4 = (&(&sp * x) * &sp).add(&(&(&sm * x) * &sm));

    t1.scale(mat::cr(-k1))
        .add(&t2.scale(mat::cr(-k2)))
        .add(&t3.scale(mat::cr(-k3)))
        .add(&t4.scale(mat::cr(-k4)))
}

/// Full generator: -i [H, X] plus the dissipator.
pub fn liouvillian(r: &RateParams, x: &CMat) -> CMat {
    let h = hamiltonian(r.omega());
    let comm = (&h * x).sub(&(x * &h));
    dissipator(r, x).add(&comm.scale(mat::c(0.0, -1.0)))
}

/// Fixed point of the full generator, drive included.
///
/// The u component always relaxes to zero, and the v-w block solves
///
///   v* = -Omega (1/Tw) w_eq / D,   w* = (1/Tv)(1/Tw) w_eq / D,
///   D  = (1/Tv)(1/Tw) + Omega^2.
///
/// Undriven this reduces to (0, 0, w_eq). A drive tilts the stationary
/// Bloch vector into the coherence plane; because the v decay can be far
/// slower than the w decay, a moderate drive parks the fixed point close
/// to the sphere surface. When D = 0 (no drive and 1/Tv 1/Tw = 0) some
/// component is conserved and the fixed point is not unique; the
/// representative (0, 0, w_eq) is returned.
pub fn steady_state(r: &RateParams) -> crate::state::QubitState {
    let b = crate::channels::bloch_rates(r);
    let d = b.inv_tv * b.inv_tw + r.omega() * r.omega();
    let (v, w) = if d == 0.0 {
        (0.0, r.w_eq())
    } else {
        (
            -r.omega() * b.inv_tw * r.w_eq() / d,
            b.inv_tv * b.inv_tw * r.w_eq() / d,
        )
    };
    let m = CMat::identity(2)
        .add(&mat::sigma_y().scale(mat::cr(v)))
        .add(&mat::sigma_z().scale(mat::cr(w)))
        .scale(mat::cr(0.5));
    crate::state::QubitState::new(m).expect("fixed point is a valid state")
}

/// 4x4 matrix of the generator on vectorized operators, entry X_ij at
/// index 2 i + j. Column k holds the action on the k-th entry basis
/// matrix, so exp(t G) propagates any 2x2 operator without touching the
/// eigendecomposition of the generator.
pub fn generator_matrix(r: &RateParams) -> CMat {
    let mut g = CMat::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            let mut e = CMat::zeros(2);
            e.set(i, j, mat::cr(1.0));
            let le = liouvillian(r, &e);
            for a in 0..2 {
                for b in 0..2 {
                    g.set(2 * a + b, 2 * i + j, le.at(a, b));
                }
            }
        }
    }
    g
}

/// Evolves an operator by exponentiating the entry-basis generator
/// matrix. Slower than the closed forms but independent of them.
pub fn evolve_by_exponential(r: &RateParams, t: f64, x: &CMat) -> Result<CMat> {
    if !(t >= 0.0) {
        return Err(crate::error::Error::NegativeTime(t));
    }
    let p = mat::mat_exp(&generator_matrix(r).scale(mat::cr(t)));
    let mut out = CMat::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            let mut z = mat::c(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    z += p.at(2 * a + b, 2 * i + j) * x.at(i, j);
                }
            }
            out.set(a, b, z);
        }
    }
    Ok(out)
}

/// Symmetric coupling matrix of the generator in the {s-, s+, s3} basis:
///
///   [ (1 - w_eq)/(2 T1)   -1/T3                0          ]
///   [ -1/T3                (1 + w_eq)/(2 T1)   0          ]
///   [ 0                    0                   1/T2 - 1/(2 T1) ]
///
/// The generator produces a completely positive semigroup exactly when
/// this matrix is positive semidefinite.
pub fn kossakowski_matrix(r: &RateParams) -> [[f64; 3]; 3] {
    let c11 = r.inv_t1() * (1.0 - r.w_eq()) / 2.0;
    let c22 = r.inv_t1() * (1.0 + r.w_eq()) / 2.0;
    let c12 = -r.inv_t3();
    let c33 = r.inv_t2() - r.inv_t1() / 2.0;
    [[c11, c12, 0.0], [c12, c22, 0.0], [0.0, 0.0, c33]]
}

/// Eigenvalues of the coupling matrix, ascending. The third operator
/// decouples, so the 2x2 block has a closed form.
pub fn kossakowski_eigvals(r: &RateParams) -> [f64; 3] {
    let c = kossakowski_matrix(r);
    let h = 0.5 * (c[0][0] + c[1][1]);
    let d = (0.25 * (c[0][0] - c[1][1]).powi(2) + c[0][1] * c[0][1]).sqrt();
    let mut ev = [h - d, h + d, c[2][2]];
    ev.sort_by(f64::total_cmp);
    ev
}

/// Checks that the rates generate a completely positive semigroup.
pub fn check_cp_generator(r: &RateParams) -> Result<()> {
    let ev = kossakowski_eigvals(r);
    let scale = ev[2].abs().max(1.0);
    if ev[0] < -1e-12 * scale {
        return Err(Error::CompletePositivity(format!(
            "coupling matrix has negative eigenvalue {:.6e}",
            ev[0]
        )));
    }
    Ok(())
}
