//! Command-line front end for the qubit channel toolkit: parses a channel
//! config, runs the requested computation and emits JSON or CSV.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on domain errors
//! (invalid configs, non-CP parameters, negative times).

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use svchan::capacity::{capacity_decomposition, holevo_capacity};
use svchan::channels::{bloch_rates, ChannelConfig, RateParams};
use svchan::damping::affine_map;
use svchan::entanglement::{critical_time, e3_curve};
use svchan::geometry::{fibonacci_sphere, image_ellipsoid, state_from_bloch};
use svchan::kraus;
use svchan::lindblad::{
    check_cp_generator, evolve_by_exponential, kossakowski_eigvals, kossakowski_matrix,
    steady_state,
};
use svchan::mat::{sigma_x, sigma_y, sigma_z, CMat};
use svchan::rk4::{integrate_bloch, IntegratorConfig};

#[derive(Parser)]
#[command(
    name = "svchan",
    version,
    about = "Qubit Markov channel toolkit: damping-basis evolution, Kraus forms, capacity and separability data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print rates, coupling matrix and positivity verdict for a channel
    Show(ShowArgs),
    /// Evolve a Bloch vector over a time grid (CSV rows t,u,v,w)
    Evolve(EvolveArgs),
    /// Sample the image of the Bloch sphere at chosen times
    Ellipsoid(EllipsoidArgs),
    /// Emit the operator-sum form of the channel at one time
    Kraus(KrausArgs),
    /// Optimize the Holevo quantity and report the capacity
    Capacity(CapacityArgs),
    /// Tabulate the partial-transpose eigenvalue e3 and critical times
    Entangle(EntangleArgs),
    /// Check a config end to end and report a verdict
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Damping-basis closed form
    Closed,
    /// Exponential of the generator in the entry basis
    Exp,
    /// Fixed-step RK4 on the Bloch equations (step 1e-4)
    Rk4,
}

#[derive(Args)]
struct ShowArgs {
    /// Channel config JSON file
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Write output here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Initial Bloch vector as one comma-separated triple, e.g. 0,1,0
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    bloch: Vec<f64>,
    /// Final grid time
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    t_max: f64,
    /// Grid step
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    dt: f64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EllipsoidArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Times at which to image the sphere
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0], allow_negative_numbers = true)]
    times: Vec<f64>,
    /// Number of sphere sample points per time
    #[arg(long, default_value_t = 400, allow_negative_numbers = true)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KrausArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Channel time
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapacityArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    /// Largest ensemble size tried by the optimizer (2 to 4)
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    max_states: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntangleArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Final grid time
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    t_max: f64,
    /// Grid step
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    dt: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Horizon for the time-grid positivity sweep
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(msg) = run(cli) {
        eprintln!("error: {msg}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.cmd {
        Cmd::Show(a) => cmd_show(a),
        Cmd::Evolve(a) => cmd_evolve(a),
        Cmd::Ellipsoid(a) => cmd_ellipsoid(a),
        Cmd::Kraus(a) => cmd_kraus(a),
        Cmd::Capacity(a) => cmd_capacity(a),
        Cmd::Entangle(a) => cmd_entangle(a),
        Cmd::Validate(a) => cmd_validate(a),
    }
}

fn load_config(path: &PathBuf) -> Result<(ChannelConfig, RateParams), String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let cfg = ChannelConfig::from_json(&text).map_err(|e| e.to_string())?;
    let rates = cfg.rates().map_err(|e| e.to_string())?;
    Ok((cfg, rates))
}

fn emit(out: Option<PathBuf>, text: String) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| e.to_string())
}

/// Fixed 12 significant digits, the CSV regression contract.
fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Serialize)]
struct RatesOut {
    #[serde(rename = "inv_T1")]
    inv_t1: f64,
    #[serde(rename = "inv_T2")]
    inv_t2: f64,
    #[serde(rename = "inv_T3")]
    inv_t3: f64,
    w_eq: f64,
    omega: f64,
}

impl RatesOut {
    fn new(r: &RateParams) -> Self {
        RatesOut {
            inv_t1: r.inv_t1(),
            inv_t2: r.inv_t2(),
            inv_t3: r.inv_t3(),
            w_eq: r.w_eq(),
            omega: r.omega(),
        }
    }
}

#[derive(Serialize)]
struct ShowOut {
    kind: &'static str,
    rates: RatesOut,
    bloch_rates: BlochRatesOut,
    coupling_matrix: [[f64; 3]; 3],
    coupling_eigenvalues: [f64; 3],
    completely_positive: bool,
    unital: bool,
    steady_state_bloch: [f64; 3],
}

#[derive(Serialize)]
struct BlochRatesOut {
    #[serde(rename = "inv_Tu")]
    inv_tu: f64,
    #[serde(rename = "inv_Tv")]
    inv_tv: f64,
    #[serde(rename = "inv_Tw")]
    inv_tw: f64,
}

fn cmd_show(a: ShowArgs) -> Result<(), String> {
    let (cfg, r) = load_config(&a.config)?;
    let b = bloch_rates(&r);
    let ss = steady_state(&r);
    let off = ss.matrix().at(0, 1);
    let out = ShowOut {
        kind: cfg.kind().label(),
        rates: RatesOut::new(&r),
        bloch_rates: BlochRatesOut {
            inv_tu: b.inv_tu,
            inv_tv: b.inv_tv,
            inv_tw: b.inv_tw,
        },
        coupling_matrix: kossakowski_matrix(&r),
        coupling_eigenvalues: kossakowski_eigvals(&r),
        completely_positive: check_cp_generator(&r).is_ok(),
        unital: r.w_eq() == 0.0 || r.inv_t1() == 0.0,
        steady_state_bloch: [2.0 * off.re + 0.0, -2.0 * off.im + 0.0, 2.0 * ss.a() - 1.0],
    };
    emit(a.out, to_json(&out)?)
}

fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>, String> {
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(format!("t-max must be finite and non-negative, got {t_max}"));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(format!("dt must be positive and finite, got {dt}"));
    }
    let n = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| k as f64 * dt).collect())
}

#[derive(Serialize)]
struct EvolveRow {
    t: f64,
    u: f64,
    v: f64,
    w: f64,
}

fn evolve_point(r: &RateParams, b0: [f64; 3], t: f64, method: Method) -> Result<[f64; 3], String> {
    match method {
        Method::Closed => Ok(affine_map(r, t).map_err(|e| e.to_string())?.apply(b0)),
        Method::Exp => {
            let rho0 = state_from_bloch(b0).map_err(|e| e.to_string())?;
            let m = evolve_by_exponential(r, t, rho0.matrix()).map_err(|e| e.to_string())?;
            let state = svchan::state::QubitState::new(m).map_err(|e| e.to_string())?;
            Ok(svchan::geometry::bloch_vector(&state))
        }
        Method::Rk4 => {
            let cfg = IntegratorConfig::new(1e-4, t).map_err(|e| e.to_string())?;
            Ok(integrate_bloch(r, b0, &cfg))
        }
    }
}

fn cmd_evolve(a: EvolveArgs) -> Result<(), String> {
    let (_, r) = load_config(&a.config)?;
    if a.bloch.len() != 3 {
        return Err(format!("--bloch needs exactly 3 components, got {}", a.bloch.len()));
    }
    let b0 = [a.bloch[0], a.bloch[1], a.bloch[2]];
    let len2 = b0[0] * b0[0] + b0[1] * b0[1] + b0[2] * b0[2];
    if len2 > 1.0 + 1e-9 {
        return Err(format!("bloch vector length {} exceeds 1", len2.sqrt()));
    }
    let rows: Vec<EvolveRow> = time_grid(a.t_max, a.dt)?
        .into_iter()
        .map(|t| {
            evolve_point(&r, b0, t, a.method).map(|b| EvolveRow {
                t,
                u: b[0],
                v: b[1],
                w: b[2],
            })
        })
        .collect::<Result<_, _>>()?;
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("t,u,v,w\n");
            for row in &rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    sig(row.t),
                    sig(row.u),
                    sig(row.v),
                    sig(row.w)
                ));
            }
            s
        }
        Format::Json => to_json(&rows)?,
    };
    emit(a.out, text)
}

#[derive(Serialize)]
struct EllipsoidOut {
    t: f64,
    semi_axes: [f64; 3],
    center: [f64; 3],
    volume_ratio: f64,
}

fn cmd_ellipsoid(a: EllipsoidArgs) -> Result<(), String> {
    let (_, r) = load_config(&a.config)?;
    if a.samples == 0 {
        return Err("samples must be positive".into());
    }
    let mut times = a.times.clone();
    times.sort_by(f64::total_cmp);
    match a.format {
        Format::Csv => {
            let sphere = fibonacci_sphere(a.samples);
            let mut s = String::from("t,u,v,w\n");
            for &t in &times {
                let map = affine_map(&r, t).map_err(|e| e.to_string())?;
                for &p in &sphere {
                    let b = map.apply(p);
                    s.push_str(&format!(
                        "{},{},{},{}\n",
                        sig(t),
                        sig(b[0]),
                        sig(b[1]),
                        sig(b[2])
                    ));
                }
            }
            emit(a.out, s)
        }
        Format::Json => {
            let summaries: Vec<EllipsoidOut> = times
                .iter()
                .map(|&t| {
                    image_ellipsoid(&r, t)
                        .map(|e| EllipsoidOut {
                            t,
                            semi_axes: e.semi_axes,
                            center: e.center.map(|c| c + 0.0),
                            volume_ratio: e.volume_ratio,
                        })
                        .map_err(|e| e.to_string())
                })
                .collect::<Result<_, _>>()?;
            emit(a.out, to_json(&summaries)?)
        }
    }
}

#[derive(Serialize)]
struct KrausOut {
    t: f64,
    operator_count: usize,
    /// Each operator as rows of [re, im] entry pairs.
    operators: Vec<[[[f64; 2]; 2]; 2]>,
    constants: ConstantsOut,
    completeness_residual: f64,
    equation_residual: f64,
}

#[derive(Serialize)]
struct ConstantsOut {
    m10: f64,
    m13: f64,
    m21: f64,
    m22_im: f64,
    m31: f64,
    m40: f64,
}

fn cmd_kraus(a: KrausArgs) -> Result<(), String> {
    let (_, r) = load_config(&a.config)?;
    let set = kraus::decomposition(&r, a.t).map_err(|e| e.to_string())?;
    let k = kraus::constants(&r, a.t).map_err(|e| e.to_string())?;
    let operators = set
        .ops()
        .iter()
        .map(|op| {
            let mut rows = [[[0.0; 2]; 2]; 2];
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    let z = op.at(i, j);
                    *entry = [z.re, z.im];
                }
            }
            rows
        })
        .collect();
    let basis = [CMat::identity(2), sigma_x(), sigma_y(), sigma_z()];
    let mut equation_residual = 0.0f64;
    for x in &basis {
        let direct = svchan::damping::apply(&r, a.t, x).map_err(|e| e.to_string())?;
        equation_residual = equation_residual.max(set.apply(x).max_abs_diff(&direct));
    }
    let out = KrausOut {
        t: a.t,
        operator_count: set.len(),
        operators,
        constants: ConstantsOut {
            m10: k.m10 + 0.0,
            m13: k.m13 + 0.0,
            m21: k.m21 + 0.0,
            m22_im: k.m22_im + 0.0,
            m31: k.m31 + 0.0,
            m40: k.m40 + 0.0,
        },
        completeness_residual: set.completeness_defect(),
        equation_residual,
    };
    emit(a.out, to_json(&out)?)
}

#[derive(Serialize)]
struct MemberOut {
    probability: f64,
    bloch: [f64; 3],
}

#[derive(Serialize)]
struct DecompositionOut {
    ideal: f64,
    shift_error: f64,
    mixing_error: f64,
}

#[derive(Serialize)]
struct CapacityOut {
    t: f64,
    #[serde(rename = "C")]
    c: f64,
    average_output_entropy: f64,
    mean_member_entropy: f64,
    degenerate_argmax: bool,
    ensemble: Vec<MemberOut>,
    decomposition: DecompositionOut,
    rates: RatesOut,
}

fn cmd_capacity(a: CapacityArgs) -> Result<(), String> {
    let (_, r) = load_config(&a.config)?;
    let result = holevo_capacity(&r, a.t, a.max_states).map_err(|e| e.to_string())?;
    let dec = capacity_decomposition(&r, a.t).map_err(|e| e.to_string())?;
    let out = CapacityOut {
        t: a.t,
        c: result.capacity_bits,
        average_output_entropy: result.average_output_entropy_bits,
        mean_member_entropy: result.mean_member_entropy_bits,
        degenerate_argmax: result.degenerate_argmax,
        ensemble: result
            .ensemble
            .members()
            .iter()
            .map(|m| MemberOut {
                probability: m.probability,
                bloch: m.bloch,
            })
            .collect(),
        decomposition: DecompositionOut {
            ideal: dec.ideal_bits,
            shift_error: dec.shift_error_bits,
            mixing_error: dec.mixing_error_bits,
        },
        rates: RatesOut::new(&r),
    };
    emit(a.out, to_json(&out)?)
}

#[derive(Serialize)]
struct CurveOut {
    label: String,
    points: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct CriticalTimeOut {
    label: String,
    /// None when e3 never crosses zero (the state stays nonseparable
    /// for all finite times or is never nonseparable).
    t_c: Option<f64>,
}

#[derive(Serialize)]
struct EntangleOut {
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "N")]
    n: f64,
    curves: Vec<CurveOut>,
    critical_times: Vec<CriticalTimeOut>,
}

/// Decay rate A and occupation N of the reservoir behind a config; for
/// custom rates they are reconstructed from w_eq and 1/T1.
fn reservoir_of(cfg: &ChannelConfig, r: &RateParams) -> Result<(f64, f64), String> {
    match cfg {
        ChannelConfig::SqueezedVacuum { a, n, .. } | ChannelConfig::ThermalField { a, n, .. } => {
            Ok((*a, *n))
        }
        ChannelConfig::AmplitudeDamping { a, .. } => Ok((*a, 0.0)),
        _ => {
            if r.w_eq() < 0.0 && r.inv_t1() > 0.0 {
                let n = (1.0 / -r.w_eq() - 1.0) / 2.0;
                Ok((r.inv_t1() / (2.0 * n + 1.0), n))
            } else {
                Err("this channel has no thermal occupation to sweep the squeezing over".into())
            }
        }
    }
}

fn cmd_entangle(a: EntangleArgs) -> Result<(), String> {
    let (cfg, r) = load_config(&a.config)?;
    if r.omega() != 0.0 {
        return Err(format!("operation requires omega = 0, got {}", r.omega()));
    }
    let (decay, n) = reservoir_of(&cfg, &r)?;
    let m_max = (n * (n + 1.0)).sqrt();
    let family: Vec<(&str, RateParams)> = [("M=0", 0.0), ("M=0.8Mmax", 0.8), ("M=Mmax", 1.0)]
        .into_iter()
        .map(|(label, frac)| {
            svchan::channels::ReservoirParams::new(decay, n, frac * m_max, 0.0)
                .map(|p| (label, svchan::channels::rates_from_reservoir(&p)))
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    let grid = time_grid(a.t_max, a.dt)?;
    let points = e3_curve(&family, &grid).map_err(|e| e.to_string())?;
    match a.format {
        Format::Csv => {
            let mut s = String::from("label,t,e3\n");
            for p in &points {
                s.push_str(&format!("{},{},{}\n", p.label, sig(p.t), sig(p.e3)));
            }
            emit(a.out, s)
        }
        Format::Json => {
            let curves = family
                .iter()
                .map(|(label, _)| CurveOut {
                    label: (*label).to_string(),
                    points: points
                        .iter()
                        .filter(|p| p.label == *label)
                        .map(|p| [p.t, p.e3])
                        .collect(),
                })
                .collect();
            let critical_times = family
                .iter()
                .map(|(label, rates)| CriticalTimeOut {
                    label: (*label).to_string(),
                    t_c: critical_time(rates).ok(),
                })
                .collect();
            let out = EntangleOut {
                a: decay,
                n,
                curves,
                critical_times,
            };
            emit(a.out, to_json(&out)?)
        }
    }
}

#[derive(Serialize)]
struct ValidateOut {
    kind: &'static str,
    rates: RatesOut,
    coupling_eigenvalues: [f64; 3],
    generator_completely_positive: bool,
    map_grid_t_max: f64,
    map_completely_positive: bool,
    valid: bool,
    problems: Vec<String>,
}

fn cmd_validate(a: ValidateArgs) -> Result<(), String> {
    let (cfg, r) = load_config(&a.config)?;
    let mut problems = Vec::new();
    let generator_cp = match check_cp_generator(&r) {
        Ok(()) => true,
        Err(e) => {
            problems.push(e.to_string());
            false
        }
    };
    if !a.t_max.is_finite() || a.t_max <= 0.0 {
        return Err(format!("t-max must be positive and finite, got {}", a.t_max));
    }
    let mut map_cp = true;
    for k in 0..=50 {
        let t = a.t_max * k as f64 / 50.0;
        if let Err(e) = kraus::check_cp_map(&r, t) {
            problems.push(format!("t = {t}: {e}"));
            map_cp = false;
            break;
        }
    }
    let valid = generator_cp && map_cp;
    let out = ValidateOut {
        kind: cfg.kind().label(),
        rates: RatesOut::new(&r),
        coupling_eigenvalues: kossakowski_eigvals(&r),
        generator_completely_positive: generator_cp,
        map_grid_t_max: a.t_max,
        map_completely_positive: map_cp,
        valid,
        problems,
    };
    let text = to_json(&out)?;
    emit(a.out, text)?;
    if !valid {
        return Err("channel failed validation".into());
    }
    Ok(())
}
