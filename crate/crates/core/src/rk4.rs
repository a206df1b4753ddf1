//! Fixed-step RK4 integrators for the Bloch equations and for the full
//! generator, kept deliberately independent of the closed forms they
//! check: the Bloch path steps three real components, the matrix path
//! steps the generator itself.
//!
//! Drive signs come from rho = (I + u sx + v sy + w sz)/2 together with
//! H = (omega/2) sx, which gives v' = ... - omega w and w' = ... + omega v.

use crate::channels::{bloch_rates, RateParams};
use crate::error::{Error, Result};
use crate::lindblad::liouvillian;
use crate::mat::CMat;
use crate::state::QubitState;

/// Step size and horizon for a fixed-step run. The step is a cap: the
/// run takes ceil(t_end / dt) equal steps, so the horizon is hit exactly.
#[derive(Clone, Copy, Debug)]
pub struct IntegratorConfig {
    dt: f64,
    t_end: f64,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step size must be positive, got {dt}"
            )));
        }
        if !(t_end >= 0.0) {
            return Err(Error::NegativeTime(t_end));
        }
        if t_end > 0.0 && dt > t_end {
            return Err(Error::InvalidParameter(format!(
                "step size {dt} exceeds the horizon {t_end}"
            )));
        }
        Ok(IntegratorConfig { dt, t_end })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of equal steps and the realized step size.
    fn plan(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, 0.0);
        }
        let n = (self.t_end / self.dt).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }
}

/// Right-hand side of the Bloch equations,
///
///   u' = -u / Tu - delta v
///   v' = -v / Tv + delta u - omega w
///   w' = -(w - w_eq) / Tw + omega v.
pub fn bloch_derivative(r: &RateParams, delta: f64, b: [f64; 3]) -> [f64; 3] {
    let g = bloch_rates(r);
    let om = r.omega();
    [
        -g.inv_tu * b[0] - delta * b[1],
        -g.inv_tv * b[1] + delta * b[0] - om * b[2],
        -g.inv_tw * (b[2] - r.w_eq()) + om * b[1],
    ]
}

fn add3(a: [f64; 3], b: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

/// One classical RK4 step of the Bloch equations.
fn bloch_step(r: &RateParams, delta: f64, b: [f64; 3], h: f64) -> [f64; 3] {
    let k1 = bloch_derivative(r, delta, b);
    let k2 = bloch_derivative(r, delta, add3(b, k1, 0.5 * h));
    let k3 = bloch_derivative(r, delta, add3(b, k2, 0.5 * h));
    let k4 = bloch_derivative(r, delta, add3(b, k3, h));
    [
        b[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        b[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        b[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Integrates the Bloch equations with zero detuning.
pub fn integrate_bloch(r: &RateParams, b0: [f64; 3], cfg: &IntegratorConfig) -> [f64; 3] {
    integrate_bloch_detuned(r, 0.0, b0, cfg)
}

/// Integrates the Bloch equations with an explicit detuning coupling the
/// u and v components.
pub fn integrate_bloch_detuned(
    r: &RateParams,
    delta: f64,
    b0: [f64; 3],
    cfg: &IntegratorConfig,
) -> [f64; 3] {
    let (n, h) = cfg.plan();
    let mut b = b0;
    for _ in 0..n {
        b = bloch_step(r, delta, b, h);
    }
    b
}

/// Integrates d rho / dt = L(rho) with the full generator, drive included.
pub fn integrate_master(
    r: &RateParams,
    rho0: &QubitState,
    cfg: &IntegratorConfig,
) -> Result<QubitState> {
    let (n, h) = cfg.plan();
    let mut x = *rho0.matrix();
    for _ in 0..n {
        x = master_step(r, &x, h);
    }
    QubitState::new(x)
}

fn master_step(r: &RateParams, x: &CMat, h: f64) -> CMat {
    let half = crate::mat::cr(0.5 * h);
    let k1 = liouvillian(r, x);
    let k2 = liouvillian(r, &x.add(&k1.scale(half)));
    let k3 = liouvillian(r, &x.add(&k2.scale(half)));
    let k4 = liouvillian(r, &x.add(&k3.scale(crate::mat::cr(h))));
    let sum = k1
        .add(&k2.scale(crate::mat::cr(2.0)))
        .add(&k3.scale(crate::mat::cr(2.0)))
        .add(&k4);
    x.add(&sum.scale(crate::mat::cr(h / 6.0)))
}
