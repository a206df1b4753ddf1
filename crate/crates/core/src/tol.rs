//! Numerical tolerances used across the crate.
//!
//! Each constant states what it gates and why the value is safe for the
//! double-precision formulas involved. Tests pin behaviour at these exact
//! values, so loosening one is an API change, not a tweak.

/// Max |a_ij - conj(a_ji)| accepted before a matrix is rejected as
/// non-Hermitian. Products of a handful of unit-scale matrices keep
/// rounding noise below ~1e-14, so 1e-10 separates noise from bugs.
pub const HERM_GATE: f64 = 1e-10;

/// Off-diagonal magnitude at which the iterative 4x4 Hermitian
/// eigensolver stops. Jacobi converges quadratically, so the diagonal is
/// then accurate to machine precision.
pub const EIG_CONVERGENCE: f64 = 1e-12;

/// Floor for eigenvalues of matrices that must be positive semidefinite.
/// Exact zero eigenvalues (pure states, boundary channels) land within
/// rounding of zero, never below -1e-9 for unit-scale inputs.
pub const PSD_FLOOR: f64 = -1e-9;

/// Hermiticity and unit-trace slack for single-qubit density matrices.
/// Wide enough for RK4 output drift, tight enough to catch wrong states.
pub const STATE_TOL: f64 = 1e-8;

/// Hermiticity and unit-trace slack for two-qubit states, which are only
/// ever produced by exact linear maps here.
pub const JOINT_STATE_TOL: f64 = 1e-12;

/// Eigenvalue floor for two-qubit density matrices.
pub const JOINT_PSD_FLOOR: f64 = -1e-10;

/// Slack on the four complete-positivity inequalities and on Kraus
/// radicands: values in [-1e-12, 0) are treated as boundary cases from
/// rounding, anything lower is a genuine violation.
pub const CP_SLACK_TOL: f64 = 1e-12;

/// Convergence threshold, in bits, for the Holevo capacity optimizer.
pub const CAPACITY_CONVERGENCE: f64 = 1e-6;

/// Absolute bracket width at which separability-time bisection stops.
pub const BISECTION_TOL: f64 = 1e-12;

/// Local refinement step floor for the sphere search in geometry.
pub const SPHERE_REFINE_TOL: f64 = 1e-8;
