//! Channel families and their relaxation-rate parameterizations.
//!
//! A channel is specified either by reservoir parameters (damping constant
//! A, mean photon number N, squeezing magnitude M, drive Omega) or directly
//! by the three relaxation rates 1/T1, 1/T2, 1/T3 and the equilibrium
//! inversion w_eq. The squeezed vacuum reservoir maps onto rates as
//!
//!   1/T1 = 2A(N + 1/2),  1/T2 = A(N + 1/2),  1/T3 = A M,
//!   w_eq = -1/(2N + 1),
//!
//! so 1/T1 = 2/T2 holds for the whole family and squeezing only feeds the
//! phase-conjugating rate 1/T3.

use serde::Deserialize;

use crate::error::{Error, Result};

/// Squeezed thermal reservoir parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservoirParams {
    a: f64,
    n: f64,
    m: f64,
    omega: f64,
}

impl ReservoirParams {
    /// Requires A > 0, N >= 0, 0 <= M <= sqrt(N(N+1)), Omega >= 0.
    /// The M bound is exactly the positivity condition on the reservoir
    /// correlation matrix, so violating it can never yield a channel.
    pub fn new(a: f64, n: f64, m: f64, omega: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("A must be > 0, got {a}")));
        }
        if !(n >= 0.0) || !n.is_finite() {
            return Err(Error::InvalidParameter(format!("N must be >= 0, got {n}")));
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!("M must be >= 0, got {m}")));
        }
        if m * m > n * (n + 1.0) + 1e-12 {
            return Err(Error::CompletePositivity(format!(
                "M^2 > N(N+1): M = {m}, N = {n}"
            )));
        }
        if !(omega >= 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega must be >= 0, got {omega}"
            )));
        }
        Ok(ReservoirParams { a, n, m, omega })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Largest squeezing compatible with this N.
    pub fn m_max(n: f64) -> f64 {
        (n * (n + 1.0)).sqrt()
    }
}

/// Relaxation rates plus equilibrium inversion and drive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateParams {
    inv_t1: f64,
    inv_t2: f64,
    inv_t3: f64,
    w_eq: f64,
    omega: f64,
}

impl RateParams {
    /// Requires 1/T1 >= 0, 1/T2 >= 0, |1/T3| <= 1/T2, w_eq in [-1, 0].
    pub fn new(inv_t1: f64, inv_t2: f64, inv_t3: f64, w_eq: f64, omega: f64) -> Result<Self> {
        for (name, v) in [
            ("1/T1", inv_t1),
            ("1/T2", inv_t2),
            ("1/T3", inv_t3),
            ("w_eq", w_eq),
            ("omega", omega),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if inv_t1 < 0.0 || inv_t2 < 0.0 {
            return Err(Error::InvalidParameter(
                "relaxation rates 1/T1, 1/T2 must be >= 0".into(),
            ));
        }
        if inv_t3.abs() > inv_t2 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "|1/T3| = {} exceeds 1/T2 = {}",
                inv_t3.abs(),
                inv_t2
            )));
        }
        if !(-1.0..=0.0).contains(&w_eq) {
            return Err(Error::InvalidParameter(format!(
                "w_eq must lie in [-1, 0], got {w_eq}"
            )));
        }
        Ok(RateParams {
            inv_t1,
            inv_t2,
            inv_t3,
            w_eq,
            omega,
        })
    }

    pub fn inv_t1(&self) -> f64 {
        self.inv_t1
    }

    pub fn inv_t2(&self) -> f64 {
        self.inv_t2
    }

    pub fn inv_t3(&self) -> f64 {
        self.inv_t3
    }

    pub fn w_eq(&self) -> f64 {
        self.w_eq
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }
}

/// Rates of the squeezed vacuum family for the given reservoir.
pub fn rates_from_reservoir(p: &ReservoirParams) -> RateParams {
    RateParams {
        inv_t1: 2.0 * p.a * (p.n + 0.5),
        inv_t2: p.a * (p.n + 0.5),
        inv_t3: p.a * p.m,
        w_eq: -1.0 / (2.0 * p.n + 1.0),
        omega: p.omega,
    }
}

/// Spontaneous emission at rate A: N = 0, M = 0, w_eq = -1.
pub fn amplitude_damping(a: f64, omega: f64) -> Result<RateParams> {
    let p = ReservoirParams::new(a, 0.0, 0.0, omega)?;
    Ok(rates_from_reservoir(&p))
}

/// Pure dephasing at rate gamma: no relaxation, unital.
pub fn phase_damping(gamma: f64, omega: f64) -> Result<RateParams> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gamma must be > 0, got {gamma}"
        )));
    }
    RateParams::new(0.0, gamma, 0.0, 0.0, omega)
}

/// Thermal reservoir with mean photon number N, no squeezing.
pub fn thermal_field(a: f64, n: f64, omega: f64) -> Result<RateParams> {
    let p = ReservoirParams::new(a, n, 0.0, omega)?;
    Ok(rates_from_reservoir(&p))
}

/// Decay rates of the three Bloch components:
/// 1/Tu = 1/T2 + 1/T3, 1/Tv = 1/T2 - 1/T3, 1/Tw = 1/T1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochRates {
    pub inv_tu: f64,
    pub inv_tv: f64,
    pub inv_tw: f64,
}

pub fn bloch_rates(r: &RateParams) -> BlochRates {
    BlochRates {
        inv_tu: r.inv_t2 + r.inv_t3,
        inv_tv: r.inv_t2 - r.inv_t3,
        inv_tw: r.inv_t1,
    }
}

/// Channel family tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    AmplitudeDamping,
    PhaseDamping,
    ThermalField,
    SqueezedVacuum,
    Custom,
}

impl ChannelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "amplitude",
            ChannelKind::PhaseDamping => "phase",
            ChannelKind::ThermalField => "thermal",
            ChannelKind::SqueezedVacuum => "svc",
            ChannelKind::Custom => "custom",
        }
    }
}

/// Parsed channel configuration.
///
/// JSON shape: {"kind": "svc", "A": 1.0, "N": 1.0, "M": 1.41421356,
/// "omega": 0.0}. Kinds: "svc" (A, N, M), "thermal" (A, N), "amplitude"
/// (A), "phase" (gamma), "custom" (inv_T1, inv_T2, inv_T3, w_eq). A
/// defaults to 1 and omega to 0; unknown keys are rejected.
#[derive(Clone, Copy, Debug)]
pub enum ChannelConfig {
    AmplitudeDamping { a: f64, omega: f64 },
    PhaseDamping { gamma: f64, omega: f64 },
    ThermalField { a: f64, n: f64, omega: f64 },
    SqueezedVacuum { a: f64, n: f64, m: f64, omega: f64 },
    Custom { inv_t1: f64, inv_t2: f64, inv_t3: f64, w_eq: f64, omega: f64 },
}

fn default_a() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SvcRaw {
    #[serde(rename = "A", default = "default_a")]
    a: f64,
    #[serde(rename = "N")]
    n: f64,
    #[serde(rename = "M")]
    m: f64,
    #[serde(default)]
    omega: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThermalRaw {
    #[serde(rename = "A", default = "default_a")]
    a: f64,
    #[serde(rename = "N")]
    n: f64,
    #[serde(default)]
    omega: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmplitudeRaw {
    #[serde(rename = "A", default = "default_a")]
    a: f64,
    #[serde(default)]
    omega: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseRaw {
    gamma: f64,
    #[serde(default)]
    omega: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomRaw {
    #[serde(rename = "inv_T1")]
    inv_t1: f64,
    #[serde(rename = "inv_T2")]
    inv_t2: f64,
    #[serde(rename = "inv_T3")]
    inv_t3: f64,
    w_eq: f64,
    #[serde(default)]
    omega: f64,
}

impl ChannelConfig {
    /// Parses a JSON config object, rejecting unknown keys.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
        let kind = obj
            .remove("kind")
            .ok_or_else(|| Error::Config("missing \"kind\"".into()))?;
        let kind = kind
            .as_str()
            .ok_or_else(|| Error::Config("\"kind\" must be a string".into()))?
            .to_owned();
        let rest = serde_json::Value::Object(obj.clone());
        let config = match kind.as_str() {
            "svc" => {
                let r: SvcRaw = from_rest(rest)?;
                ChannelConfig::SqueezedVacuum {
                    a: r.a,
                    n: r.n,
                    m: r.m,
                    omega: r.omega,
                }
            }
            "thermal" => {
                let r: ThermalRaw = from_rest(rest)?;
                ChannelConfig::ThermalField {
                    a: r.a,
                    n: r.n,
                    omega: r.omega,
                }
            }
            "amplitude" => {
                let r: AmplitudeRaw = from_rest(rest)?;
                ChannelConfig::AmplitudeDamping {
                    a: r.a,
                    omega: r.omega,
                }
            }
            "phase" => {
                let r: PhaseRaw = from_rest(rest)?;
                ChannelConfig::PhaseDamping {
                    gamma: r.gamma,
                    omega: r.omega,
                }
            }
            "custom" => {
                let r: CustomRaw = from_rest(rest)?;
                ChannelConfig::Custom {
                    inv_t1: r.inv_t1,
                    inv_t2: r.inv_t2,
                    inv_t3: r.inv_t3,
                    w_eq: r.w_eq,
                    omega: r.omega,
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown kind \"{other}\" (expected svc, thermal, amplitude, phase, custom)"
                )))
            }
        };
        Ok(config)
    }

    pub fn kind(&self) -> ChannelKind {
        match self {
            ChannelConfig::AmplitudeDamping { .. } => ChannelKind::AmplitudeDamping,
            ChannelConfig::PhaseDamping { .. } => ChannelKind::PhaseDamping,
            ChannelConfig::ThermalField { .. } => ChannelKind::ThermalField,
            ChannelConfig::SqueezedVacuum { .. } => ChannelKind::SqueezedVacuum,
            ChannelConfig::Custom { .. } => ChannelKind::Custom,
        }
    }

    /// Validates parameters and produces the relaxation rates.
    pub fn rates(&self) -> Result<RateParams> {
        match *self {
            ChannelConfig::AmplitudeDamping { a, omega } => amplitude_damping(a, omega),
            ChannelConfig::PhaseDamping { gamma, omega } => phase_damping(gamma, omega),
            ChannelConfig::ThermalField { a, n, omega } => thermal_field(a, n, omega),
            ChannelConfig::SqueezedVacuum { a, n, m, omega } => {
                Ok(rates_from_reservoir(&ReservoirParams::new(a, n, m, omega)?))
            }
            ChannelConfig::Custom {
                inv_t1,
                inv_t2,
                inv_t3,
                w_eq,
                omega,
            } => RateParams::new(inv_t1, inv_t2, inv_t3, w_eq, omega),
        }
    }
}

fn from_rest<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))
}
