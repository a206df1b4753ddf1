//! Bloch-ball picture of a channel: coordinate helpers, the ellipsoid the
//! unit ball is mapped onto, and a search for the least-entropic output.

use crate::channels::RateParams;
use crate::damping::{affine_map, AffineMap};
use crate::error::{Error, Result};
use crate::mat::{c, cr, CMat};
use crate::state::{binary_entropy, QubitState};
use crate::tol::SPHERE_REFINE_TOL;

/// Bloch coordinates (u, v, w) of a state:
/// u = 2 Re rho01, v = -2 Im rho01, w = rho00 - rho11.
pub fn bloch_vector(state: &QubitState) -> [f64; 3] {
    let d = state.d();
    [2.0 * d.re, -2.0 * d.im, 2.0 * state.a() - 1.0]
}

/// State with the given Bloch coordinates. Vectors longer than 1 by more
/// than rounding error are rejected; marginal overshoot is rescaled onto
/// the sphere so that round trips through floating point stay valid.
pub fn state_from_bloch(b: [f64; 3]) -> Result<QubitState> {
    let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    if norm > 1.0 + 1e-9 {
        return Err(Error::BlochTooLong(norm));
    }
    let s = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    let (u, v, w) = (b[0] * s, b[1] * s, b[2] * s);
    QubitState::new(CMat::from_rows2([
        [cr((1.0 + w) / 2.0), c(u / 2.0, -v / 2.0)],
        [c(u / 2.0, v / 2.0), cr((1.0 - w) / 2.0)],
    ]))
}

/// Image of the unit Bloch ball under the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    /// Semi-axis lengths. Without a drive the map is diagonal and these sit
    /// in (u, v, w) order; with a drive the u entry is still the u
    /// contraction (u never mixes) and the remaining two are the singular
    /// values of the v-w block, larger first.
    pub semi_axes: [f64; 3],
    /// Centre of the ellipsoid, i.e. where the maximally mixed state lands.
    pub center: [f64; 3],
    /// Volume of the image relative to the unit ball.
    pub volume_ratio: f64,
}

/// Ellipsoid traced out by the channel at time t. Errors if any axis has
/// contracted all the way to zero (exponent underflow at very large t).
pub fn image_ellipsoid(r: &RateParams, t: f64) -> Result<Ellipsoid> {
    let map = affine_map(r, t)?;
    let m = &map.linear;
    let (hi, lo) = block_singular_values([[m[1][1], m[1][2]], [m[2][1], m[2][2]]]);
    let semi_axes = if r.omega() == 0.0 {
        [m[0][0], m[1][1], m[2][2]]
    } else {
        [m[0][0], hi, lo]
    };
    let collapsed: Vec<usize> = semi_axes
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == 0.0)
        .map(|(i, _)| i)
        .collect();
    if !collapsed.is_empty() {
        return Err(Error::DegenerateEllipsoid(collapsed));
    }
    Ok(Ellipsoid {
        semi_axes,
        center: map.shift,
        volume_ratio: map.determinant().abs(),
    })
}

/// Singular values of a real 2x2 block, larger first.
fn block_singular_values(b: [[f64; 2]; 2]) -> (f64, f64) {
    let g11 = b[0][0] * b[0][0] + b[1][0] * b[1][0];
    let g22 = b[0][1] * b[0][1] + b[1][1] * b[1][1];
    let g12 = b[0][0] * b[0][1] + b[1][0] * b[1][1];
    let mean = 0.5 * (g11 + g22);
    let root = (0.25 * (g11 - g22) * (g11 - g22) + g12 * g12).sqrt();
    (
        (mean + root).max(0.0).sqrt(),
        (mean - root).max(0.0).sqrt(),
    )
}

/// Result of searching pure inputs for the least-entropic channel output.
#[derive(Debug, Clone)]
pub struct PurityPeak {
    /// Smallest output entropy found, in bits.
    pub min_entropy_bits: f64,
    /// Length of the longest output Bloch vector (the quantity maximized;
    /// entropy decreases strictly as this grows).
    pub output_radius: f64,
    /// Input directions achieving the optimum, one unit vector per distinct
    /// peak. Ties within tolerance all appear.
    pub optima: Vec<[f64; 3]>,
    /// Set when more than two inputs tie, which signals a continuum of
    /// optima (e.g. a ring for axially symmetric channels) rather than the
    /// generic isolated pair.
    pub degenerate: bool,
}

const LATTICE_POINTS: usize = 16_384;
const REFINE_SEEDS: usize = 200;
/// Radius gap below the best peak still counted as a tie.
const PEAK_TIE: f64 = 1e-6;
/// Refined points closer than this are the same peak. Isolated peaks can be
/// quartically flat (e.g. a pole that stays pure), which stalls the climb a
/// few 1e-4 short of the summit, so this is much wider than the climb
/// tolerance yet far below any genuine peak separation.
const CLUSTER_DIST: f64 = 1e-3;

/// Scan pure inputs for the output of least entropy. Deterministic: a fixed
/// spiral lattice seeds a local climb on the output radius.
pub fn min_output_entropy(r: &RateParams, t: f64) -> Result<PurityPeak> {
    let map = affine_map(r, t)?;

    let mut scored: Vec<(f64, [f64; 3])> = fibonacci_sphere(LATTICE_POINTS)
        .into_iter()
        .map(|p| (output_radius(&map, p), p))
        .collect();
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut refined: Vec<(f64, [f64; 3])> = scored
        .iter()
        .take(REFINE_SEEDS)
        .map(|&(_, p)| climb(&map, p))
        .collect();
    refined.sort_by(|x, y| y.0.total_cmp(&x.0));

    let best = refined[0].0;
    let mut optima: Vec<[f64; 3]> = Vec::new();
    for &(f, p) in refined.iter().take_while(|&&(f, _)| f >= best - PEAK_TIE) {
        let _ = f;
        if !optima.iter().any(|q| dist(*q, p) < CLUSTER_DIST) {
            optima.push(p);
        }
    }
    let degenerate = optima.len() > 2;

    Ok(PurityPeak {
        min_entropy_bits: binary_entropy(0.5 * (1.0 + best.min(1.0))),
        output_radius: best,
        optima,
        degenerate,
    })
}

/// Evenly spread lattice on the unit sphere (golden-angle spiral).
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

fn output_radius(map: &AffineMap, p: [f64; 3]) -> f64 {
    let b = map.apply(p);
    (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt()
}

/// Hill climb on the sphere with shrinking tangent steps.
fn climb(map: &AffineMap, start: [f64; 3]) -> (f64, [f64; 3]) {
    let mut p = start;
    let mut f = output_radius(map, p);
    let mut step = 0.1;
    while step > SPHERE_REFINE_TOL {
        let (e1, e2) = tangent_basis(p);
        let mut moved = false;
        for d in [e1, e2, neg(e1), neg(e2)] {
            let q = normalize([p[0] + step * d[0], p[1] + step * d[1], p[2] + step * d[2]]);
            let fq = output_radius(map, q);
            if fq > f {
                p = q;
                f = fq;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (f, p)
}

fn tangent_basis(p: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if p[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let e1 = normalize(cross(p, pick));
    (e1, cross(p, e1))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn neg(v: [f64; 3]) -> [f64; 3] {
    [-v[0], -v[1], -v[2]]
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, phase_damping, rates_from_reservoir, thermal_field, ReservoirParams};
    use crate::damping::transfer_factors;
    use approx::assert_abs_diff_eq;

    fn reference_rates() -> RateParams {
        let res = ReservoirParams::new(1.0, 1.0, 2.0_f64.sqrt(), 0.0).unwrap();
        rates_from_reservoir(&res)
    }

    #[test]
    fn bloch_round_trip() {
        let grid = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.3, -0.4, 0.5],
            [-0.6, 0.2, -0.7],
        ];
        for b in grid {
            let s = state_from_bloch(b).unwrap();
            let back = bloch_vector(&s);
            for k in 0..3 {
                assert_abs_diff_eq!(back[k], b[k], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn unit_vectors_give_pure_states() {
        let s = state_from_bloch([0.0, 1.0, 0.0]).unwrap();
        let (lo, hi) = s.eigvals();
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-14);
        assert_eq!(s.entropy_bits(), 0.0);
    }

    #[test]
    fn overlong_vectors_are_rejected() {
        let err = state_from_bloch([0.8, 0.8, 0.0]).unwrap_err();
        assert!(err.to_string().contains("exceeds"));
        // marginal overshoot from rounding is fine
        state_from_bloch([1.0 + 1e-12, 0.0, 0.0]).unwrap();
    }

    #[test]
    fn reference_ellipsoid_axes_and_center() {
        let r = reference_rates();
        let e = image_ellipsoid(&r, 1.0).unwrap();
        assert_abs_diff_eq!(e.semi_axes[0], 0.054246675889069502, epsilon = 1e-15);
        assert_abs_diff_eq!(e.semi_axes[1], 0.91779021574842427, epsilon = 1e-15);
        assert_abs_diff_eq!(e.semi_axes[2], 0.049787068367863943, epsilon = 1e-15);
        assert_abs_diff_eq!(e.center[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.center[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.center[2], -0.31673764387737869, epsilon = 1e-15);
        let lam = transfer_factors(&r, 1.0).unwrap();
        assert_abs_diff_eq!(e.volume_ratio, lam[1] * lam[2] * lam[3], epsilon = 1e-15);
    }

    #[test]
    fn driven_ellipsoid_keeps_u_axis_and_volume() {
        let res = ReservoirParams::new(1.0, 1.0, 2.0_f64.sqrt(), 2.0).unwrap();
        let r = rates_from_reservoir(&res);
        let lam = transfer_factors(&r, 0.7).unwrap();
        let e = image_ellipsoid(&r, 0.7).unwrap();
        assert_abs_diff_eq!(e.semi_axes[0], lam[1], epsilon = 1e-12);
        assert!(e.semi_axes[1] >= e.semi_axes[2]);
        assert_abs_diff_eq!(
            e.semi_axes[1] * e.semi_axes[2],
            (lam[2] * lam[3]).abs(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(e.volume_ratio, lam[1] * lam[2] * lam[3], epsilon = 1e-12);
    }

    #[test]
    fn squeezed_peak_is_a_tilted_v_pair() {
        // The image ellipsoid is longest along v but sits off-centre along w,
        // so the outputs closest to the sphere surface come from inputs tilted
        // slightly off the v-axis toward the shift.
        let r = reference_rates();
        let peak = min_output_entropy(&r, 1.0).unwrap();
        assert_abs_diff_eq!(peak.output_radius, 0.97106009411271506, epsilon = 1e-9);
        assert_abs_diff_eq!(peak.min_entropy_bits, 0.10914689011726669, epsilon = 1e-9);
        assert!(!peak.degenerate);
        assert_eq!(peak.optima.len(), 2);
        for o in &peak.optima {
            assert!(o[0].abs() < 1e-6);
            assert_abs_diff_eq!(o[2], -0.018776267863732573, epsilon = 1e-6);
            assert_abs_diff_eq!(o[1].abs(), 0.99982371034353319, epsilon = 1e-6);
        }
        assert!(peak.optima[0][1] * peak.optima[1][1] < 0.0, "peaks sit at opposite v");
        // entropy through the full state path agrees with the radius shortcut
        let input = state_from_bloch(peak.optima[0]).unwrap();
        let output = crate::damping::evolve(&r, 1.0, &input).unwrap();
        assert_abs_diff_eq!(output.entropy_bits(), peak.min_entropy_bits, epsilon = 1e-9);
    }

    #[test]
    fn squeezing_purifies_the_best_output() {
        let t = 1.0;
        let mut last = f64::INFINITY;
        for frac in [0.0, 0.5, 1.0] {
            let m = frac * 2.0_f64.sqrt();
            let res = ReservoirParams::new(1.0, 1.0, m, 0.0).unwrap();
            let r = rates_from_reservoir(&res);
            let s = min_output_entropy(&r, t).unwrap().min_entropy_bits;
            assert!(s < last, "entropy should drop as squeezing grows");
            last = s;
        }
    }

    #[test]
    fn every_image_point_sits_on_the_ellipsoid() {
        let r = reference_rates();
        let t = 1.0;
        let e = image_ellipsoid(&r, t).unwrap();
        let map = crate::damping::affine_map(&r, t).unwrap();
        for p in fibonacci_sphere(10_000) {
            let b = map.apply(p);
            let mut q = 0.0;
            for k in 0..3 {
                let z = (b[k] - e.center[k]) / e.semi_axes[k];
                q += z * z;
            }
            assert_abs_diff_eq!(q, 1.0, epsilon = 1e-10);
            let len = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
            assert!(len <= 1.0 + 1e-12, "image must stay inside the ball");
        }
    }

    #[test]
    fn unsqueezed_peak_is_a_ring() {
        let r = thermal_field(1.0, 1.0, 0.0).unwrap();
        let peak = min_output_entropy(&r, 1.0).unwrap();
        assert!(peak.degenerate);
        assert!(peak.optima.len() > 2);
        // a genuine ring: wide spread in the equatorial plane, common height
        let w0 = peak.optima[0][2];
        let mut spread: f64 = 0.0;
        for o in &peak.optima {
            assert_abs_diff_eq!(o[2], w0, epsilon = 1e-5);
            spread = spread.max((o[0] - peak.optima[0][0]).abs() + (o[1] - peak.optima[0][1]).abs());
        }
        assert!(spread > 0.1);
    }

    #[test]
    fn dephasing_peaks_at_both_poles() {
        let r = phase_damping(1.0, 0.0).unwrap();
        let peak = min_output_entropy(&r, 0.5).unwrap();
        assert!(!peak.degenerate);
        assert_eq!(peak.optima.len(), 2);
        assert_abs_diff_eq!(peak.output_radius, 1.0, epsilon = 1e-12);
        assert_eq!(peak.min_entropy_bits, 0.0);
        for o in &peak.optima {
            assert_abs_diff_eq!(o[2].abs(), 1.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn zero_temperature_peak_is_the_ground_state() {
        // the ground pole is a fixed point, so the peak value is 1 exactly,
        // but the summit is quartically flat and the climb stalls nearby
        let r = amplitude_damping(1.0, 0.0).unwrap();
        let peak = min_output_entropy(&r, 0.8).unwrap();
        assert!(!peak.degenerate);
        assert_eq!(peak.optima.len(), 1);
        assert!(peak.output_radius > 1.0 - 1e-9);
        assert!(peak.optima[0][2] < -0.999);
    }

    #[test]
    fn no_evolution_means_every_input_ties() {
        let r = reference_rates();
        let peak = min_output_entropy(&r, 0.0).unwrap();
        assert!(peak.degenerate);
        assert_abs_diff_eq!(peak.output_radius, 1.0, epsilon = 1e-14);
        assert_eq!(peak.min_entropy_bits, 0.0);
    }

    #[test]
    fn driven_minimum_entropy_is_not_monotone_in_the_drive() {
        // A drive converts the fast-decaying inversion into long-lived v
        // coherence. At omega = 0.5 the stationary point sits at Bloch
        // length 0.9999 and the best output is nearly pure; at omega = 2
        // the rotation outpaces the pump and everything mixes instead.
        let base = min_output_entropy(&reference_rates(), 1.0).unwrap();
        let gentle = min_output_entropy(&reference_rates().with_omega(0.5), 1.0).unwrap();
        let hard = min_output_entropy(&reference_rates().with_omega(2.0), 1.0).unwrap();
        assert!(gentle.output_radius > 0.99999);
        assert!(gentle.min_entropy_bits < 1e-4);
        assert!(gentle.min_entropy_bits < base.min_entropy_bits);
        assert!(hard.min_entropy_bits > base.min_entropy_bits);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn outputs_stay_inside_the_ball(
                a in 0.05..3.0f64,
                n in 0.0..3.0f64,
                msq in 0.0..=1.0f64,
                t in 0.0..4.0f64,
            ) {
                let m = (msq * n * (n + 1.0)).sqrt();
                let res = ReservoirParams::new(a, n, m, 0.0).unwrap();
                let r = rates_from_reservoir(&res);
                let peak = min_output_entropy(&r, t).unwrap();
                prop_assert!(peak.output_radius <= 1.0 + 1e-12);
                prop_assert!(peak.min_entropy_bits >= 0.0);
            }
        }
    }
}
