//! Dense complex matrices of dimension 2 and 4.
//!
//! Everything in this crate lives on one qubit or two, so the kernel is
//! specialized to those sizes: storage is a fixed inline array, all values
//! are `Copy`, and no allocation happens in hot loops.

pub use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::{EIG_CONVERGENCE, HERM_GATE};

pub(crate) const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const C1: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Real scalar as a complex number.
#[inline]
pub fn cr(x: f64) -> Complex64 {
    Complex64 { re: x, im: 0.0 }
}

/// Complex number from parts.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64 { re, im }
}

/// Square complex matrix, dimension 2 or 4, row-major.
#[derive(Clone, Copy, Debug)]
pub struct CMat {
    dim: usize,
    e: [Complex64; 16],
}

impl CMat {
    /// Builds a matrix from row-major entries. Only dimensions 2 and 4 exist.
    pub fn new(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::BadDim(dim));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch(entries.len(), dim * dim));
        }
        let mut e = [C0; 16];
        e[..entries.len()].copy_from_slice(entries);
        Ok(CMat { dim, e })
    }

    pub fn zeros(dim: usize) -> Self {
        debug_assert!(dim == 2 || dim == 4);
        CMat { dim, e: [C0; 16] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C1);
        }
        m
    }

    pub fn from_rows2(rows: [[Complex64; 2]; 2]) -> Self {
        let mut m = Self::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, rows[i][j]);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.e[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.e[i * self.dim + j] = z;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.at(j, i).conj());
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        let mut t = C0;
        for i in 0..self.dim {
            t += self.at(i, i);
        }
        t
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut m = *self;
        for k in 0..self.dim * self.dim {
            m.e[k] *= z;
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.dim, o.dim);
        let mut m = *self;
        for k in 0..self.dim * self.dim {
            m.e[k] += o.e[k];
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.dim, o.dim);
        let mut m = *self;
        for k in 0..self.dim * self.dim {
            m.e[k] -= o.e[k];
        }
        m
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        let mut n = 0.0f64;
        for k in 0..self.dim * self.dim {
            n = n.max(self.e[k].norm());
        }
        n
    }

    /// Largest entrywise difference |a_ij - b_ij|.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        debug_assert_eq!(self.dim, o.dim);
        let mut n = 0.0f64;
        for k in 0..self.dim * self.dim {
            n = n.max((self.e[k] - o.e[k]).norm());
        }
        n
    }

    /// Largest |a_ij - conj(a_ji)|; zero for an exactly Hermitian matrix.
    pub fn herm_defect(&self) -> f64 {
        let mut n = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                n = n.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        n
    }
}

impl std::ops::Mul for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = C0;
                for k in 0..n {
                    s += self.at(i, k) * rhs.at(k, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }
}

/// Checked matrix product.
pub fn mat_mul(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.dim != b.dim {
        return Err(Error::DimMismatch(a.dim, b.dim));
    }
    Ok(a * b)
}

/// Kronecker product of two 2x2 matrices, `a` as the left factor:
/// out[2i+k][2j+l] = a[i][j] * b[k][l].
pub fn kron(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::DimMismatch(a.dim, b.dim));
    }
    let mut out = CMat::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, a.at(i, j) * b.at(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Dimension 2 uses the closed-form quadratic; dimension 4 runs cyclic
/// Jacobi sweeps with complex rotations until every off-diagonal entry is
/// below [`EIG_CONVERGENCE`]. Rejects input whose Hermiticity defect
/// exceeds [`HERM_GATE`].
pub fn herm_eigvals(m: &CMat) -> Result<Vec<f64>> {
    let defect = m.herm_defect();
    if defect > HERM_GATE {
        return Err(Error::NotHermitian(defect));
    }
    let mut ev = match m.dim {
        2 => {
            let a = m.at(0, 0).re;
            let d = m.at(1, 1).re;
            let b = 0.5 * (m.at(0, 1) + m.at(1, 0).conj());
            let h = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![h - r, h + r]
        }
        4 => jacobi4(m),
        _ => unreachable!("CMat dimensions are 2 or 4"),
    };
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Cyclic complex Jacobi on a 4x4 Hermitian matrix.
fn jacobi4(m: &CMat) -> Vec<f64> {
    // Symmetrize away rounding-level asymmetry so the iteration sees an
    // exactly Hermitian matrix.
    let mut a = CMat::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            a.set(i, j, (m.at(i, j) + m.at(j, i).conj()).scale(0.5));
        }
    }

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off = off.max(a.at(p, q).norm());
            }
        }
        if off <= EIG_CONVERGENCE {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let b = a.at(p, q);
                let babs = b.norm();
                if babs <= 1e-300 {
                    continue;
                }
                let phase = b / babs; // e^{i phi}
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                let tau = (aqq - app) / (2.0 * babs);
                // root of t^2 - 2 tau t - 1 = 0 with |t| <= 1
                let t = -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let co = 1.0 / (1.0 + t * t).sqrt();
                let si = t * co;

                // unitary on columns (p,q): U = diag(1, conj(phase)) . R(theta)
                let upp = cr(co);
                let uqp = phase.conj() * si;
                let upq = cr(-si);
                let uqq = phase.conj() * co;

                // A <- A U
                for i in 0..4 {
                    let aip = a.at(i, p);
                    let aiq = a.at(i, q);
                    a.set(i, p, aip * upp + aiq * uqp);
                    a.set(i, q, aip * upq + aiq * uqq);
                }
                // A <- U^dag A
                for j in 0..4 {
                    let apj = a.at(p, j);
                    let aqj = a.at(q, j);
                    a.set(p, j, upp.conj() * apj + uqp.conj() * aqj);
                    a.set(q, j, upq.conj() * apj + uqq.conj() * aqj);
                }
            }
        }
    }
    (0..4).map(|i| a.at(i, i).re).collect()
}

/// Matrix exponential by scaling and squaring with a truncated series.
pub fn mat_exp(g: &CMat) -> CMat {
    let n = g.dim;
    // crude upper bound on the operator norm
    let norm = g.max_abs() * n as f64;
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = g.scale(cr(0.5f64.powi(s as i32)));

    let mut sum = CMat::identity(n).add(&scaled);
    let mut term = scaled;
    for k in 2..=40u32 {
        term = (&term * &scaled).scale(cr(1.0 / k as f64));
        sum = sum.add(&term);
        if term.max_abs() < 1e-22 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

// Qubit operator set in the {|e>, |g>} basis: sigma = |g><e| lowers the
// excited state, sigma_z = diag(1, -1) so w = +1 is excited.

pub fn sigma_minus() -> CMat {
    CMat::from_rows2([[C0, C0], [C1, C0]])
}

pub fn sigma_plus() -> CMat {
    CMat::from_rows2([[C0, C1], [C0, C0]])
}

pub fn sigma_x() -> CMat {
    CMat::from_rows2([[C0, C1], [C1, C0]])
}

pub fn sigma_y() -> CMat {
    CMat::from_rows2([[C0, c(0.0, -1.0)], [c(0.0, 1.0), C0]])
}

pub fn sigma_z() -> CMat {
    CMat::from_rows2([[C1, C0], [C0, cr(-1.0)]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn frob(m: &CMat) -> f64 {
        let mut s = 0.0;
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                s += m.at(i, j).norm_sqr();
            }
        }
        s.sqrt()
    }

    #[test]
    fn rejects_odd_dimensions() {
        assert!(matches!(CMat::new(3, &[C0; 9]), Err(Error::BadDim(3))));
        assert!(CMat::new(2, &[C0; 4]).is_ok());
    }

    #[test]
    fn mul_dimension_mismatch_is_an_error() {
        let a = CMat::identity(2);
        let b = CMat::identity(4);
        assert!(matches!(mat_mul(&a, &b), Err(Error::DimMismatch(2, 4))));
    }

    #[test]
    fn pauli_algebra() {
        // sigma^dag sigma = |e><e| = diag(1, 0)
        let n_op = &sigma_plus() * &sigma_minus();
        assert_eq!(n_op.at(0, 0), C1);
        assert_eq!(n_op.at(1, 1), C0);
        // sigma_x sigma_y = i sigma_z
        let xy = &sigma_x() * &sigma_y();
        assert!(xy.max_abs_diff(&sigma_z().scale(c(0.0, 1.0))) < 1e-15);
        // each Pauli squares to the identity
        for s in [sigma_x(), sigma_y(), sigma_z()] {
            assert!((&s * &s).max_abs_diff(&CMat::identity(2)) < 1e-15);
        }
    }

    #[test]
    fn kron_left_factor_convention() {
        let k = kron(&sigma_z(), &CMat::identity(2)).unwrap();
        let want = [1.0, 1.0, -1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { want[i] } else { 0.0 };
                assert_relative_eq!(k.at(i, j).re, expect, max_relative = 1e-15);
                assert_eq!(k.at(i, j).im, 0.0);
            }
        }
        assert!(kron(&CMat::identity(4), &CMat::identity(2)).is_err());
    }

    #[test]
    fn eigvals_dim2_closed_form() {
        let m = CMat::from_rows2([[cr(2.0), c(0.0, -1.0)], [c(0.0, 1.0), cr(0.0)]]);
        // eigenvalues of [[2, -i], [i, 0]] are 1 +/- sqrt(2)
        let ev = herm_eigvals(&m).unwrap();
        assert_relative_eq!(ev[0], 1.0 - 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(ev[1], 1.0 + 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn eigvals_rejects_non_hermitian() {
        let m = CMat::from_rows2([[C0, C1], [C0, C0]]);
        assert!(matches!(herm_eigvals(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigvals_dim4_known_matrix() {
        // H = Z (x) Z + 0.5 X (x) I splits into two 2x2 blocks, each with
        // eigenvalues +-sqrt(1.25)
        let zz = kron(&sigma_z(), &sigma_z()).unwrap();
        let xi = kron(&sigma_x(), &CMat::identity(2)).unwrap();
        let h = zz.add(&xi.scale(cr(0.5)));
        let ev = herm_eigvals(&h).unwrap();
        let root = 1.25f64.sqrt();
        for (got, want) in ev.iter().zip([-root, -root, root, root]) {
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn eigvals_dim4_complex_fixture() {
        // eigenvalues cross-checked against an independent dense solver
        let e = [
            cr(0.3), c(0.2, 0.1), c(0.0, -0.4), cr(0.5),
            c(0.2, -0.1), cr(-0.7), c(0.3, 0.3), C0,
            c(0.0, 0.4), c(0.3, -0.3), cr(1.1), c(-0.2, 0.6),
            cr(0.5), C0, c(-0.2, -0.6), cr(0.2),
        ];
        let m = CMat::new(4, &e).unwrap();
        let ev = herm_eigvals(&m).unwrap();
        let want = [
            -0.8783114656605239,
            -0.3050763931731177,
            0.3801635527711109,
            1.7032243060625305,
        ];
        for (got, want) in ev.iter().zip(want) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
        let sum: f64 = ev.iter().sum();
        assert_relative_eq!(sum, m.trace().re, epsilon = 1e-13);
    }

    #[test]
    fn eigvals_sum_matches_trace() {
        // deterministic pseudo-random Hermitian matrices
        let mut s = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..50 {
            let mut m = CMat::zeros(4);
            for i in 0..4 {
                m.set(i, i, cr(next()));
                for j in (i + 1)..4 {
                    let z = c(next(), next());
                    m.set(i, j, z);
                    m.set(j, i, z.conj());
                }
            }
            let ev = herm_eigvals(&m).unwrap();
            let sum: f64 = ev.iter().sum();
            assert_relative_eq!(sum, m.trace().re, epsilon = 1e-12);
            // Frobenius norm is preserved by the diagonalization
            let sq: f64 = ev.iter().map(|x| x * x).sum();
            assert_relative_eq!(sq.sqrt(), frob(&m), epsilon = 1e-11);
        }
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        let z = CMat::zeros(4);
        assert!(mat_exp(&z).max_abs_diff(&CMat::identity(4)) < 1e-15);

        let mut d = CMat::zeros(4);
        for (i, v) in [-3.0, -0.5, 0.0, 1.2].iter().enumerate() {
            d.set(i, i, cr(*v));
        }
        let e = mat_exp(&d);
        for (i, v) in [-3.0f64, -0.5, 0.0, 1.2].iter().enumerate() {
            assert_relative_eq!(e.at(i, i).re, v.exp(), max_relative = 1e-14);
        }
    }

    #[test]
    fn exp_halved_step_refinement() {
        // exp(G) must equal exp(G/2)^2 to working precision
        let e = [
            cr(0.0), C0, C0, C0,
            C0, cr(-2.9), C0, C0,
            c(0.0, 0.7), C0, cr(-0.1), c(0.0, -2.0),
            C0, C0, c(0.0, -2.0), cr(-3.0),
        ];
        let g = CMat::new(4, &e).unwrap();
        let full = mat_exp(&g);
        let half = mat_exp(&g.scale(cr(0.5)));
        let relative = full.max_abs_diff(&(&half * &half)) / full.max_abs();
        assert!(relative <= 1e-12, "relative residual {relative:.3e}");
    }

    #[test]
    fn exp_antihermitian_is_unitary() {
        let g = sigma_y().scale(c(0.0, 0.8));
        let u = mat_exp(&g);
        let uu = &u.adjoint() * &u;
        assert!(uu.max_abs_diff(&CMat::identity(2)) < 1e-14);
    }
}
