//! Operator-sum form of the undriven channel.
//!
//! With transfer factors (L1, L2, L3) and shift s = w_eq (1 - L3), four
//! operators reproduce the map:
//!
//!   A1 = m10 I + m13 s3      m10 = s / (2 sqrt(D1)),  m13 = sqrt(D1)/2
//!   A2 = m21 sx + m22 sy     m21 = s / (2 sqrt(D2)),  m22 = -(i/2) sqrt(D2)
//!   A3 = m31 sx              m31 = sqrt(1 + L1 - L2 - L3 - s^2/D2)/2
//!   A4 = m40 I               m40 = sqrt(1 + L1 + L2 + L3 - s^2/D1)/2
//!
//! where D1 = 1 - L1 - L2 + L3 and D2 = 1 - L1 + L2 - L3. The map acts
//! as rho -> sum_k A_k^dag rho A_k and completeness reads
//! sum_k A_k A_k^dag = I. Every radicand staying nonnegative is exactly
//! complete positivity of the map, so construction doubles as a CP
//! certificate: the four sign patterns of +-L1 +- L2 +- L3 <= 1 bound the
//! unital part and the two s^2 radicands bound the shift.

use crate::channels::RateParams;
use crate::damping;
use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use crate::tol::CP_SLACK_TOL;

/// Largest radicand rounding error forgiven as exact zero.
const RADICAND_FLOOR: f64 = -1e-12;

/// Kraus operators with the dagger-on-the-left action convention.
#[derive(Clone, Debug)]
pub struct KrausSet {
    ops: Vec<CMat>,
}

impl KrausSet {
    pub fn ops(&self) -> &[CMat] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// sum_k A_k^dag X A_k
    pub fn apply(&self, x: &CMat) -> CMat {
        let mut out = CMat::zeros(x.dim());
        for a in &self.ops {
            out = out.add(&(&(&a.adjoint() * x) * a));
        }
        out
    }

    /// Largest entry of sum_k A_k A_k^dag - I; zero means trace preserving.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = CMat::zeros(2);
        for a in &self.ops {
            sum = sum.add(&(a * &a.adjoint()));
        }
        sum.max_abs_diff(&CMat::identity(2))
    }
}

/// Slack of the four complete positivity inequalities on the transfer
/// factors, 1 - (s1 L1 + s2 L2 + s3 L3) for sign patterns
/// (+,+,-), (+,-,+), (-,+,+), (-,-,-). All nonnegative iff the unital
/// part of the map is completely positive.
pub fn cp_slacks(transfer: [f64; 3]) -> [f64; 4] {
    let [l1, l2, l3] = transfer;
    [
        1.0 - l1 - l2 + l3,
        1.0 - l1 + l2 - l3,
        1.0 + l1 - l2 - l3,
        1.0 + l1 + l2 + l3,
    ]
}

/// Rejects transfer factors whose unital part is not completely positive.
pub fn check_cp(transfer: [f64; 3]) -> Result<()> {
    let slacks = cp_slacks(transfer);
    for (k, s) in slacks.iter().enumerate() {
        if *s < -CP_SLACK_TOL {
            return Err(Error::CompletePositivity(format!(
                "transfer-factor inequality {} violated by {:.3e}",
                k + 1,
                -s
            )));
        }
    }
    Ok(())
}

/// The six operator coefficients. m22 is the imaginary part of the sy
/// coefficient; all others are real.
#[derive(Clone, Copy, Debug)]
pub struct Constants {
    pub m10: f64,
    pub m13: f64,
    pub m21: f64,
    pub m22_im: f64,
    pub m31: f64,
    pub m40: f64,
}

/// Radicands smaller than this collapse to exact zero so rounding noise
/// cannot conjure spurious near-null operators.
const RADICAND_ZERO: f64 = 1e-13;

pub fn constants(r: &RateParams, t: f64) -> Result<Constants> {
    if r.omega() != 0.0 {
        return Err(Error::OmegaNotZero(r.omega()));
    }
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let lam = damping::decay_exponents(r);
    // complements 1 - L_i, accurate even when L_i is within rounding of 1
    let p = -(lam[1] * t).exp_m1();
    let q = -(lam[2] * t).exp_m1();
    let c3 = -(lam[3] * t).exp_m1();
    let s = r.w_eq() * c3;

    // The differences D1 = 1 - L1 - L2 + L3 and D2 = 1 - L1 + L2 - L3
    // cancel catastrophically near t = 0, where the CP margin itself is
    // only O(t^2) at maximal squeezing. On short horizons use equivalent
    // product forms whose error stays far below the margin; the closure
    // defect lam3 - lam1 - lam2 = 2/T2 - 1/T1 is taken from the rates so
    // the family value is an exact floating-point zero.
    let scale = r.inv_t1().max(r.inv_t2() + r.inv_t3().abs());
    let (d1, d2, base3) = if t * scale <= 0.01 {
        let closure = 2.0 * r.inv_t2() - r.inv_t1();
        let gap23 = r.inv_t1() - r.inv_t2() + r.inv_t3(); // lam2 - lam3
        (
            p * q + (1.0 - p) * (1.0 - q) * (closure * t).exp_m1(),
            p + (1.0 - c3) * (gap23 * t).exp_m1(),
            c3 + (1.0 - q) * (-2.0 * r.inv_t3() * t).exp_m1(),
        )
    } else {
        (p + q - c3, p - q + c3, c3 + q - p)
    };
    let base4 = 4.0 - p - q - c3;

    for (k, slack) in [(1, d1), (2, d2), (3, base3)] {
        if slack < -CP_SLACK_TOL {
            return Err(Error::CompletePositivity(format!(
                "transfer-factor inequality {k} violated by {:.3e}",
                -slack
            )));
        }
    }
    let d1 = d1.max(0.0);
    let d2 = d2.max(0.0);

    // s^2/D diverging means the inversion pump cannot be carried by the
    // contracted coherences: not a CP map.
    let pump1 = if s == 0.0 { 0.0 } else { s * s / d1 };
    let pump2 = if s == 0.0 { 0.0 } else { s * s / d2 };
    let rad3 = base3 - pump2;
    let rad4 = base4 - pump1;
    for rad in [rad3, rad4] {
        if !(rad >= RADICAND_FLOOR) {
            return Err(Error::CompletePositivity(format!(
                "operator weight turned negative ({rad:.3e})"
            )));
        }
    }
    let zero_small = |x: f64| if x < RADICAND_ZERO { 0.0 } else { x };

    Ok(Constants {
        m10: if s == 0.0 { 0.0 } else { s / (2.0 * d1.sqrt()) },
        m13: d1.sqrt() / 2.0,
        m21: if s == 0.0 { 0.0 } else { s / (2.0 * d2.sqrt()) },
        m22_im: -d2.sqrt() / 2.0,
        m31: zero_small(rad3).sqrt() / 2.0,
        m40: zero_small(rad4).sqrt() / 2.0,
    })
}

/// Builds the operator-sum form of the channel at time t. Operators that
/// vanish identically are dropped, so pure dephasing yields two operators
/// and t = 0 collapses to the identity.
pub fn decomposition(r: &RateParams, t: f64) -> Result<KrausSet> {
    let k = constants(r, t)?;
    let eye = CMat::identity(2);
    let candidates = [
        eye.scale(mat::cr(k.m10))
            .add(&mat::sigma_z().scale(mat::cr(k.m13))),
        mat::sigma_x()
            .scale(mat::cr(k.m21))
            .add(&mat::sigma_y().scale(mat::c(0.0, k.m22_im))),
        mat::sigma_x().scale(mat::cr(k.m31)),
        eye.scale(mat::cr(k.m40)),
    ];
    let ops: Vec<CMat> = candidates
        .into_iter()
        .filter(|a| a.max_abs() > 1e-15)
        .collect();
    Ok(KrausSet { ops })
}

/// Checks that the map at time t is completely positive: inequalities on
/// the transfer factors plus existence of real operator weights.
pub fn check_cp_map(r: &RateParams, t: f64) -> Result<()> {
    constants(r, t).map(|_| ())
}
