//! Exact time evolution in the damping basis.
//!
//! The dissipator is diagonalized by a dual pair of operator bases
//! {L_i}, {R_i} with Tr(L_i R_j) = delta_ij:
//!
//!   L0 = I/sqrt2            R0 = (I + w_eq s3)/sqrt2
//!   L1 = sx/sqrt2           R1 = sx/sqrt2
//!   L2 = (s+ - s-)/sqrt2    R2 = (s- - s+)/sqrt2
//!   L3 = (s3 - w_eq I)/sqrt2  R3 = s3/sqrt2
//!
//! D(R_i) = lam_i R_i with lam = (0, -(1/T2 + 1/T3), -(1/T2 - 1/T3),
//! -1/T1), so expanding a state as sum_i c_i R_i with c_i = Tr(L_i rho)
//! turns the undriven evolution into scalar decays c_i -> e^{lam_i t} c_i.
//! A drive couples the (v, w) pair and the propagator becomes a 4x4
//! matrix exponential in coefficient space.

use num_complex::Complex64;

use crate::channels::RateParams;
use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use crate::state::QubitState;

const SQRT2_INV: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Decay exponents (0, -(1/T2 + 1/T3), -(1/T2 - 1/T3), -1/T1).
pub fn decay_exponents(r: &RateParams) -> [f64; 4] {
    [
        0.0,
        -(r.inv_t2() + r.inv_t3()),
        -(r.inv_t2() - r.inv_t3()),
        -r.inv_t1(),
    ]
}

/// Scale factors exp(lam_i t) of the four damping modes.
pub fn transfer_factors(r: &RateParams, t: f64) -> Result<[f64; 4]> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let lam = decay_exponents(r);
    Ok([1.0, (lam[1] * t).exp(), (lam[2] * t).exp(), (lam[3] * t).exp()])
}

/// Left (dual) basis, rows of the diagonalization.
pub fn left_basis(w_eq: f64) -> [CMat; 4] {
    let root = mat::cr(SQRT2_INV);
    [
        CMat::identity(2).scale(root),
        mat::sigma_x().scale(root),
        mat::sigma_plus().sub(&mat::sigma_minus()).scale(root),
        mat::sigma_z()
            .sub(&CMat::identity(2).scale(mat::cr(w_eq)))
            .scale(root),
    ]
}

/// Right (eigenvector) basis of the dissipator.
pub fn right_basis(w_eq: f64) -> [CMat; 4] {
    let root = mat::cr(SQRT2_INV);
    [
        CMat::identity(2)
            .add(&mat::sigma_z().scale(mat::cr(w_eq)))
            .scale(root),
        mat::sigma_x().scale(root),
        mat::sigma_minus().sub(&mat::sigma_plus()).scale(root),
        mat::sigma_z().scale(root),
    ]
}

/// Expansion coefficients c_i = Tr(L_i X) of an arbitrary 2x2 operator.
pub fn coefficients(x: &CMat, w_eq: f64) -> [Complex64; 4] {
    let l = left_basis(w_eq);
    [
        (&l[0] * x).trace(),
        (&l[1] * x).trace(),
        (&l[2] * x).trace(),
        (&l[3] * x).trace(),
    ]
}

/// Rebuilds sum_i c_i R_i.
pub fn reconstruct(c: &[Complex64; 4], w_eq: f64) -> CMat {
    let r = right_basis(w_eq);
    r[0].scale(c[0])
        .add(&r[1].scale(c[1]))
        .add(&r[2].scale(c[2]))
        .add(&r[3].scale(c[3]))
}

/// Generator in coefficient space: diag(lam) plus the drive coupling
/// of the (v, w) pair, d/dt c = G c.
pub fn generator(r: &RateParams) -> CMat {
    let lam = decay_exponents(r);
    let om = r.omega();
    let mut g = CMat::zeros(4);
    for (i, l) in lam.iter().enumerate() {
        g.set(i, i, mat::cr(*l));
    }
    // c2' += -i omega (c3 + w_eq c0), c3' += -i omega c2
    g.set(2, 0, mat::c(0.0, -om * r.w_eq()));
    g.set(2, 3, mat::c(0.0, -om));
    g.set(3, 2, mat::c(0.0, -om));
    g
}

/// Coefficient-space propagator exp(G t).
pub fn propagator(r: &RateParams, t: f64) -> Result<CMat> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(mat::mat_exp(&generator(r).scale(mat::cr(t))))
}

/// Complex eigenvalues of the driven (v, w) pair,
/// (lam2 + lam3)/2 +- sqrt((lam2 - lam3)^2 - 4 omega^2)/2.
/// Underdamped drives make the pair spiral instead of decaying straight.
pub fn driven_pair_exponents(r: &RateParams) -> (Complex64, Complex64) {
    let lam = decay_exponents(r);
    let mean = 0.5 * (lam[2] + lam[3]);
    let disc = (lam[2] - lam[3]).powi(2) - 4.0 * r.omega().powi(2);
    let root = Complex64::new(disc, 0.0).sqrt().scale(0.5);
    (
        Complex64::new(mean, 0.0) + root,
        Complex64::new(mean, 0.0) - root,
    )
}

/// Undriven closed form on the matrix entries. With X = [[a, d1], [d2, c]]
/// and w = w_eq:
///
///   out11 = (a + c)(1 + w)/2 + L3 (a - c - w(a + c))/2
///   out22 = (a + c)(1 - w)/2 - L3 (a - c - w(a + c))/2
///   out12 = (d2 (L1 - L2) + d1 (L1 + L2))/2
///   out21 = (d1 (L1 - L2) + d2 (L1 + L2))/2
pub fn apply_closed_form(r: &RateParams, t: f64, x: &CMat) -> Result<CMat> {
    if r.omega() != 0.0 {
        return Err(Error::OmegaNotZero(r.omega()));
    }
    assert_eq!(x.dim(), 2, "channel acts on qubit operators");
    let [_, l1, l2, l3] = transfer_factors(r, t)?;
    let w = r.w_eq();
    let a = x.at(0, 0);
    let c = x.at(1, 1);
    let d1 = x.at(0, 1);
    let d2 = x.at(1, 0);

    let tr = a + c;
    let pump = (a - c - tr.scale(w)).scale(0.5 * l3);
    let out11 = tr.scale(0.5 * (1.0 + w)) + pump;
    let out22 = tr.scale(0.5 * (1.0 - w)) - pump;
    let out12 = (d2.scale(l1 - l2) + d1.scale(l1 + l2)).scale(0.5);
    let out21 = (d1.scale(l1 - l2) + d2.scale(l1 + l2)).scale(0.5);
    Ok(CMat::from_rows2([[out11, out12], [out21, out22]]))
}

/// Applies the channel to an arbitrary 2x2 operator: entrywise closed
/// form when there is no drive, coefficient-space propagator otherwise.
pub fn apply(r: &RateParams, t: f64, x: &CMat) -> Result<CMat> {
    if r.omega() == 0.0 {
        return apply_closed_form(r, t, x);
    }
    let p = propagator(r, t)?;
    let c_in = coefficients(x, r.w_eq());
    let mut c_out = [mat::C0; 4];
    for (i, slot) in c_out.iter_mut().enumerate() {
        let mut s = mat::C0;
        for (j, cj) in c_in.iter().enumerate() {
            s += p.at(i, j) * cj;
        }
        *slot = s;
    }
    Ok(reconstruct(&c_out, r.w_eq()))
}

/// Evolves a state for time t.
pub fn evolve(r: &RateParams, t: f64, state: &QubitState) -> Result<QubitState> {
    let out = apply(r, t, state.matrix())?;
    QubitState::new(out)
}

/// Affine action on the Bloch vector, b -> linear b + shift.
#[derive(Clone, Copy, Debug)]
pub struct AffineMap {
    pub linear: [[f64; 3]; 3],
    pub shift: [f64; 3],
}

impl AffineMap {
    pub fn apply(&self, b: [f64; 3]) -> [f64; 3] {
        let mut out = self.shift;
        for i in 0..3 {
            for j in 0..3 {
                out[i] += self.linear[i][j] * b[j];
            }
        }
        out
    }

    /// Signed volume contraction factor.
    pub fn determinant(&self) -> f64 {
        let m = &self.linear;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// Bloch-space form of the channel at time t. Undriven this is
/// diag(L1, L2, L3) with shift (0, 0, w_eq (1 - L3)); a drive mixes the
/// (v, w) block but leaves u decoupled.
pub fn affine_map(r: &RateParams, t: f64) -> Result<AffineMap> {
    if r.omega() == 0.0 {
        let [_, l1, l2, l3] = transfer_factors(r, t)?;
        return Ok(AffineMap {
            linear: [[l1, 0.0, 0.0], [0.0, l2, 0.0], [0.0, 0.0, l3]],
            shift: [0.0, 0.0, r.w_eq() * (1.0 - l3)],
        });
    }
    let p = propagator(r, t)?;
    let push = |b: [f64; 3]| bloch_through(&p, r.w_eq(), b);
    let shift = push([0.0, 0.0, 0.0]);
    let mut linear = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        let img = push(e);
        for i in 0..3 {
            linear[i][j] = img[i] - shift[i];
        }
    }
    Ok(AffineMap { linear, shift })
}

/// Pushes a Bloch vector through the coefficient-space propagator. For a
/// unit-trace Hermitian input, c = (1, u, iv, w - w_eq)/sqrt2 and the
/// realness pattern is preserved, so the output reads off the same way.
fn bloch_through(p: &CMat, w_eq: f64, b: [f64; 3]) -> [f64; 3] {
    let c_in = [
        mat::cr(SQRT2_INV),
        mat::cr(b[0] * SQRT2_INV),
        mat::c(0.0, b[1] * SQRT2_INV),
        mat::cr((b[2] - w_eq) * SQRT2_INV),
    ];
    let mut c_out = [mat::C0; 4];
    for (i, slot) in c_out.iter_mut().enumerate() {
        let mut s = mat::C0;
        for (j, cj) in c_in.iter().enumerate() {
            s += p.at(i, j) * cj;
        }
        *slot = s;
    }
    let root2 = std::f64::consts::SQRT_2;
    [
        root2 * c_out[1].re,
        root2 * c_out[2].im,
        root2 * c_out[3].re + w_eq,
    ]
}
