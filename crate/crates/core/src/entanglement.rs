//! Sending half of an entangled pair through the channel: joint output
//! state, partial transpose, its closed-form spectrum, and the time at
//! which the pair becomes separable.

use crate::channels::RateParams;
use crate::damping::{apply, transfer_factors};
use crate::error::{Error, Result};
use crate::mat::{cr, herm_eigvals, CMat};
use crate::tol::{BISECTION_TOL, JOINT_PSD_FLOOR, JOINT_STATE_TOL};

/// Two-qubit density matrix in the product basis |ee>, |eg>, |ge>, |gg>
/// (first factor stays with the sender, second goes through the channel).
#[derive(Debug, Clone, Copy)]
pub struct TwoQubitState {
    m: CMat,
}

impl TwoQubitState {
    /// Validates: 4x4, Hermitian and unit trace to 1e-12, eigenvalues
    /// above -1e-10.
    pub fn new(m: CMat) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimMismatch(m.dim(), 4));
        }
        let defect = m.herm_defect();
        if defect > JOINT_STATE_TOL {
            return Err(Error::InvalidState(format!(
                "joint state not Hermitian, asymmetry {defect:.3e}"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > JOINT_STATE_TOL || tr.im.abs() > JOINT_STATE_TOL {
            return Err(Error::InvalidState(format!(
                "joint state trace {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let eigs = herm_eigvals(&m)?;
        if eigs[0] < JOINT_PSD_FLOOR {
            return Err(Error::InvalidState(format!(
                "joint state has negative eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn eigvals(&self) -> Result<Vec<f64>> {
        herm_eigvals(&self.m)
    }
}

/// Maximally entangled pair (|ee> + |gg>)/sqrt(2) as a density matrix:
/// one half in each corner of the 4x4 matrix.
pub fn bell_state() -> TwoQubitState {
    let mut m = CMat::zeros(4);
    let h = cr(0.5);
    m.set(0, 0, h);
    m.set(0, 3, h);
    m.set(3, 0, h);
    m.set(3, 3, h);
    TwoQubitState::new(m).expect("Bell state is a valid joint state")
}

/// 2x2 block of the second factor at sender indices (i, j).
fn b_block(m: &CMat, i: usize, j: usize) -> CMat {
    let mut blk = CMat::zeros(2);
    for k in 0..2 {
        for l in 0..2 {
            blk.set(k, l, m.at(2 * i + k, 2 * j + l));
        }
    }
    blk
}

/// Act with the channel on the second qubit only, block by block.
pub fn extend_channel(r: &RateParams, t: f64, rho: &TwoQubitState) -> Result<TwoQubitState> {
    if r.omega() != 0.0 {
        return Err(Error::OmegaNotZero(r.omega()));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let mut out = CMat::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            let blk = apply(r, t, &b_block(rho.matrix(), i, j))?;
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, blk.at(k, l));
                }
            }
        }
    }
    TwoQubitState::new(out)
}

/// Joint state after the channel half of a Bell pair has evolved for time t.
pub fn joint_bell_output(r: &RateParams, t: f64) -> Result<TwoQubitState> {
    extend_channel(r, t, &bell_state())
}

/// Trace out the second factor.
pub fn partial_trace_b(m: &CMat) -> CMat {
    assert_eq!(m.dim(), 4, "partial trace needs a 4x4 matrix");
    let mut out = CMat::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            out.set(i, j, m.at(2 * i, 2 * j) + m.at(2 * i + 1, 2 * j + 1));
        }
    }
    out
}

/// Transpose the second factor in place: within every 2x2 block of the
/// second qubit, swap the off-diagonal entries.
pub fn partial_transpose_b(m: &CMat) -> CMat {
    assert_eq!(m.dim(), 4, "partial transpose needs a 4x4 matrix");
    let mut out = CMat::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, m.at(2 * i + l, 2 * j + k));
                }
            }
        }
    }
    out
}

/// Spectrum of the partial transpose of the evolved Bell pair, in closed
/// form. With kappa = w_eq (1 - L3):
///   e1, e2 = (1 + L3 -/+ sqrt((L1 - L2)^2 + kappa^2)) / 4
///   e3, e4 = (1 - L3 -/+ sqrt((L1 + L2)^2 + kappa^2)) / 4
/// Only e3 can go negative; the pair is nonseparable exactly while it does.
pub fn pt_eigenvalues_closed(r: &RateParams, t: f64) -> Result<[f64; 4]> {
    if r.omega() != 0.0 {
        return Err(Error::OmegaNotZero(r.omega()));
    }
    let f = transfer_factors(r, t)?;
    let kappa = r.w_eq() * (1.0 - f[3]);
    let minus = ((f[1] - f[2]) * (f[1] - f[2]) + kappa * kappa).sqrt();
    let plus = ((f[1] + f[2]) * (f[1] + f[2]) + kappa * kappa).sqrt();
    Ok([
        0.25 * (1.0 + f[3] - minus),
        0.25 * (1.0 + f[3] + minus),
        0.25 * (1.0 - f[3] - plus),
        0.25 * (1.0 - f[3] + plus),
    ])
}

/// True while the evolved Bell pair fails the positive-partial-transpose
/// test, i.e. e3 < -1e-12.
pub fn is_nonseparable(r: &RateParams, t: f64) -> Result<bool> {
    Ok(pt_eigenvalues_closed(r, t)?[2] < -1e-12)
}

/// First time e3 reaches zero: bracket by doubling, then bisect. Errors
/// when e3 never turns positive (zero-temperature and pure-dephasing
/// reservoirs approach zero only asymptotically).
pub fn critical_time(r: &RateParams) -> Result<f64> {
    if pt_eigenvalues_closed(r, 0.0)?[2] >= -1e-12 {
        return Err(Error::NoRootBracket);
    }
    let scale = r
        .inv_t1()
        .max(r.inv_t2())
        .max(r.inv_t3().abs())
        .max(1e-12);
    let cap = 1.0e4 / scale;
    let mut hi = 1.0 / scale;
    // Channels that approach separability only asymptotically drive e3 to an
    // exact floating-point zero from below; such a point is not a crossing, so
    // the bracket search must skip it and eventually hit the cap.
    while pt_eigenvalues_closed(r, hi)?[2] <= 0.0 {
        hi *= 2.0;
        if hi > cap {
            return Err(Error::NoRootBracket);
        }
    }
    let mut lo = 0.0;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if pt_eigenvalues_closed(r, mid)?[2] < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tc = 0.5 * (lo + hi);
    // the verdict is "separable from here on": spot-check well past the root
    for mult in [1.5, 3.0, 10.0, 100.0] {
        if pt_eigenvalues_closed(r, tc * mult)?[2] < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "e3 turns negative again after t = {tc}"
            )));
        }
    }
    Ok(tc)
}

/// Critical time without squeezing, where equal dipole contractions give a
/// quadratic in x = e^(-t/T2): (1 - w^2) (1 - x^2)^2 = 4 x^2, so
/// x = (sqrt(2 - w^2) - 1) / sqrt(1 - w^2) with w the equilibrium
/// inversion -1/(2n+1).
pub fn critical_time_unsqueezed(a: f64, n: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "decay rate must be positive, got {a}"
        )));
    }
    if !(n > 0.0) {
        // w = -1 makes the crossing recede to infinity
        return Err(Error::NoRootBracket);
    }
    let w2 = 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 1.0));
    let x = ((2.0 - w2).sqrt() - 1.0) / (1.0 - w2).sqrt();
    Ok(-x.ln() / (a * (n + 0.5)))
}

/// One row of the e3-against-time table.
#[derive(Debug, Clone, PartialEq)]
pub struct E3Point {
    pub label: String,
    pub t: f64,
    pub e3: f64,
}

/// Tabulate e3 over a strictly increasing time grid for several channels.
pub fn e3_curve(family: &[(&str, RateParams)], t_grid: &[f64]) -> Result<Vec<E3Point>> {
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "time grid must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(family.len() * t_grid.len());
    for (label, r) in family {
        for &t in t_grid {
            rows.push(E3Point {
                label: (*label).to_owned(),
                t,
                e3: pt_eigenvalues_closed(r, t)?[2],
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, phase_damping, rates_from_reservoir, ReservoirParams};
    use crate::mat::{c, kron};
    use crate::state::QubitState;
    use approx::assert_abs_diff_eq;

    fn svc_rates(a: f64, n: f64, m_frac: f64) -> RateParams {
        let m = m_frac * (n * (n + 1.0)).sqrt();
        rates_from_reservoir(&ReservoirParams::new(a, n, m, 0.0).unwrap())
    }

    fn reference_rates() -> RateParams {
        svc_rates(1.0, 1.0, 1.0)
    }

    #[test]
    fn bell_state_shape() {
        let b = bell_state();
        assert_abs_diff_eq!(b.matrix().trace().re, 1.0, epsilon = 1e-15);
        let eigs = b.eigvals().unwrap();
        for (got, want) in eigs.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
        let red = partial_trace_b(b.matrix());
        assert!(red.max_abs_diff(&CMat::identity(2).scale(cr(0.5))) < 1e-15);
    }

    #[test]
    fn no_evolution_leaves_the_bell_state_alone() {
        let out = extend_channel(&reference_rates(), 0.0, &bell_state()).unwrap();
        assert!(out.matrix().max_abs_diff(bell_state().matrix()) < 1e-14);
    }

    #[test]
    fn joint_output_matches_the_closed_form_matrix() {
        let r = reference_rates();
        let t = 1.0;
        let f = transfer_factors(&r, t).unwrap();
        let (l1, l2, l3) = (f[1], f[2], f[3]);
        let w = r.w_eq();
        let mut expect = CMat::zeros(4);
        expect.set(0, 0, cr(0.25 * ((1.0 + w) + l3 * (1.0 - w))));
        expect.set(1, 1, cr(0.25 * (1.0 - w) * (1.0 - l3)));
        expect.set(2, 2, cr(0.25 * (1.0 + w) * (1.0 - l3)));
        expect.set(3, 3, cr(0.25 * ((1.0 - w) + l3 * (1.0 + w))));
        expect.set(0, 3, cr(0.25 * (l1 + l2)));
        expect.set(3, 0, cr(0.25 * (l1 + l2)));
        expect.set(1, 2, cr(0.25 * (l1 - l2)));
        expect.set(2, 1, cr(0.25 * (l1 - l2)));
        let out = joint_bell_output(&r, t).unwrap();
        assert!(out.matrix().max_abs_diff(&expect) < 1e-14);
        assert_abs_diff_eq!(out.matrix().at(0, 3).re, 0.24300922290937344, epsilon = 1e-15);
    }

    #[test]
    fn steady_joint_state_is_diagonal() {
        let out = joint_bell_output(&reference_rates(), 300.0).unwrap();
        let want = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0];
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { want[i] } else { 0.0 };
                assert_abs_diff_eq!(out.matrix().at(i, j).re, expect, epsilon = 1e-10);
                assert_abs_diff_eq!(out.matrix().at(i, j).im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn senders_half_never_changes() {
        let r = reference_rates();
        let half = CMat::identity(2).scale(cr(0.5));
        for t in [0.3, 1.0, 2.5] {
            let out = joint_bell_output(&r, t).unwrap();
            assert!(partial_trace_b(out.matrix()).max_abs_diff(&half) < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_basics() {
        // product state with a real second factor is untouched
        let a = QubitState::from_entries(0.7, c(0.1, -0.2)).unwrap();
        let b = QubitState::from_entries(0.4, c(0.3, 0.0)).unwrap();
        let prod = kron(a.matrix(), b.matrix()).unwrap();
        assert!(partial_transpose_b(&prod).max_abs_diff(&prod) < 1e-15);
        // involution
        let joint = joint_bell_output(&reference_rates(), 0.7).unwrap();
        let twice = partial_transpose_b(&partial_transpose_b(joint.matrix()));
        assert!(twice.max_abs_diff(joint.matrix()) < 1e-15);
        // Bell spectrum picks up a -1/2
        let eigs = herm_eigvals(&partial_transpose_b(bell_state().matrix())).unwrap();
        for (got, want) in eigs.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
    }

    #[test]
    fn closed_form_endpoints() {
        let r = reference_rates();
        let start = pt_eigenvalues_closed(&r, 0.0).unwrap();
        for (got, want) in start.iter().zip([0.5, 0.5, -0.5, 0.5]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let late = pt_eigenvalues_closed(&r, 300.0).unwrap();
        let sixth = [1.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0, 2.0 / 6.0];
        for (got, want) in late.iter().zip(sixth) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn closed_form_reference_values() {
        let e = pt_eigenvalues_closed(&reference_rates(), 1.0).unwrap();
        assert_abs_diff_eq!(e[0], 0.032497019826147844, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], 0.49239651435778413, epsilon = 1e-15);
        assert_abs_diff_eq!(e[2], -0.018031691059675051, epsilon = 1e-15);
        assert_abs_diff_eq!(e[3], 0.49313815687574308, epsilon = 1e-15);
        assert_abs_diff_eq!(e.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_matches_the_eigensolver() {
        for n in [0.3, 1.0, 2.5] {
            for m_frac in [0.0, 0.6, 1.0] {
                for t in [0.2, 1.0, 3.0] {
                    let r = svc_rates(1.0, n, m_frac);
                    let mut closed = pt_eigenvalues_closed(&r, t).unwrap().to_vec();
                    closed.sort_by(f64::total_cmp);
                    let joint = joint_bell_output(&r, t).unwrap();
                    let numeric = herm_eigvals(&partial_transpose_b(joint.matrix())).unwrap();
                    for (c, n) in closed.iter().zip(&numeric) {
                        assert_abs_diff_eq!(*c, *n, epsilon = 1e-10);
                    }
                    // only the third closed-form eigenvalue may dip below zero
                    let e = pt_eigenvalues_closed(&r, t).unwrap();
                    assert!(e[0] >= -1e-12 && e[1] >= -1e-12 && e[3] >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn nonseparability_verdicts() {
        let r = reference_rates();
        assert!(is_nonseparable(&r, 0.0).unwrap());
        assert!(is_nonseparable(&r, 1.0).unwrap());
        assert!(!is_nonseparable(&r, 60.0).unwrap());
    }

    #[test]
    fn critical_time_agrees_with_the_quadratic_reduction() {
        let bisected = critical_time(&svc_rates(1.0, 1.0, 0.0)).unwrap();
        let closed = critical_time_unsqueezed(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(bisected, closed, epsilon = 1e-9);
        assert_abs_diff_eq!(closed, 0.61574869523794595, epsilon = 1e-12);
    }

    #[test]
    fn squeezing_extends_the_nonseparable_window() {
        let t0 = critical_time(&svc_rates(1.0, 1.0, 0.0)).unwrap();
        let t08 = critical_time(&svc_rates(1.0, 1.0, 0.8)).unwrap();
        let t1 = critical_time(&svc_rates(1.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(t08, 0.81087106797195075, epsilon = 1e-9);
        assert_abs_diff_eq!(t1, 1.2678600420218817, epsilon = 1e-9);
        assert!(t0 < t08 && t08 < t1);
    }

    #[test]
    fn hotter_reservoirs_cut_the_window_short() {
        let mut last = f64::INFINITY;
        for n in [0.5, 1.0, 2.0] {
            let tc = critical_time(&svc_rates(1.0, n, 0.5)).unwrap();
            assert!(tc < last);
            last = tc;
        }
    }

    #[test]
    fn asymptotic_channels_never_cross() {
        assert!(matches!(
            critical_time(&amplitude_damping(1.0, 0.0).unwrap()),
            Err(Error::NoRootBracket)
        ));
        assert!(matches!(
            critical_time(&phase_damping(1.0, 0.0).unwrap()),
            Err(Error::NoRootBracket)
        ));
        assert!(matches!(
            critical_time_unsqueezed(1.0, 0.0),
            Err(Error::NoRootBracket)
        ));
    }

    #[test]
    fn e3_table_shape_and_limits() {
        let family = [
            ("M=0", svc_rates(1.0, 1.0, 0.0)),
            ("M=0.8Mmax", svc_rates(1.0, 1.0, 0.8)),
            ("M=Mmax", svc_rates(1.0, 1.0, 1.0)),
        ];
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let rows = e3_curve(&family, &grid).unwrap();
        assert_eq!(rows.len(), 3 * grid.len());
        for chunk in rows.chunks(grid.len()) {
            assert_abs_diff_eq!(chunk[0].e3, -0.5, epsilon = 1e-15);
        }
        // crossing order: less squeezing separates first
        let crossing = |label: &str| {
            rows.iter()
                .filter(|p| p.label == label)
                .position(|p| p.e3 >= 0.0)
                .unwrap()
        };
        let (c0, c8, c1) = (crossing("M=0"), crossing("M=0.8Mmax"), crossing("M=Mmax"));
        assert!(c0 < c8 && c8 < c1);
        // far future at Mmax approaches the steady value
        let tail = e3_curve(&family[2..], &[200.0]).unwrap();
        assert_abs_diff_eq!(tail[0].e3, 1.0 / 6.0, epsilon = 1e-12);
        // grid validation
        assert!(e3_curve(&family, &[0.0, 0.0, 0.1]).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn pt_spectrum_is_consistent(
                a in 0.05..3.0f64,
                n in 0.0..3.0f64,
                msq in 0.0..=1.0f64,
                t in 0.0..5.0f64,
            ) {
                let m = (msq * n * (n + 1.0)).sqrt();
                let res = ReservoirParams::new(a, n, m, 0.0).unwrap();
                let r = rates_from_reservoir(&res);
                let e = pt_eigenvalues_closed(&r, t).unwrap();
                prop_assert!((e.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!(e[0] >= -1e-12);
                prop_assert!(e[1] >= -1e-12);
                prop_assert!(e[3] >= -1e-12);
                let joint = joint_bell_output(&r, t).unwrap();
                let numeric = herm_eigvals(&partial_transpose_b(joint.matrix())).unwrap();
                let mut sorted = e.to_vec();
                sorted.sort_by(f64::total_cmp);
                for (c, nv) in sorted.iter().zip(&numeric) {
                    prop_assert!((c - nv).abs() < 1e-10);
                }
            }
        }
    }
}
