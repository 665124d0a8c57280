//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! unitary propagators built from it.

use num_complex::Complex64 as C64;

use super::operator::{DenseOperator, ONE, ZERO};
use super::state::StateVector;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm (relative to `max(1, ||H||_F)`) at which the
/// iteration stops.
pub const OFF_DIAG_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DenseOperator,
}

impl Eigen {
    pub fn vector(&self, j: usize) -> StateVector {
        StateVector::from_parts_unchecked(self.vectors.labels().to_vec(), self.vectors.column(j))
    }

    pub fn ground(&self) -> StateVector {
        self.vector(0)
    }

    /// `values[1] - values[0]`, or infinity for a 1-dim space.
    pub fn gap(&self) -> f64 {
        if self.values.len() < 2 {
            f64::INFINITY
        } else {
            self.values[1] - self.values[0]
        }
    }

    /// `V diag(values) V^dag`.
    pub fn reconstruct(&self) -> DenseOperator {
        self.spectral_map(|l| C64::new(l, 0.0))
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> DenseOperator {
        self.spectral_map(|l| C64::from_polar(1.0, -l * t))
    }

    fn spectral_map(&self, f: impl Fn(f64) -> C64) -> DenseOperator {
        let n = self.vectors.dim();
        let v = self.vectors.data();
        let fl: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|k| v[i * n + k] * fl[k] * v[j * n + k].conj()).sum();
            }
        }
        DenseOperator::from_parts(self.vectors.labels().to_vec(), out, false)
    }

    /// `exp(-i H t) psi` without forming the propagator.
    pub fn evolve(&self, t: f64, psi: &StateVector) -> Result<StateVector> {
        if psi.labels() != self.vectors.labels() {
            return Err(Error::LabelMismatch {
                left: self.vectors.labels().to_vec(),
                right: psi.labels().to_vec(),
            });
        }
        let n = self.vectors.dim();
        let v = self.vectors.data();
        let a = psi.amplitudes();
        let coeffs: Vec<C64> = (0..n)
            .map(|k| {
                let c: C64 = (0..n).map(|i| v[i * n + k].conj() * a[i]).sum();
                c * C64::from_polar(1.0, -self.values[k] * t)
            })
            .collect();
        let out = (0..n).map(|i| (0..n).map(|k| v[i * n + k] * coeffs[k]).sum()).collect();
        StateVector::new(psi.labels().to_vec(), out)
    }
}

/// Diagonalizes a Hermitian operator.
///
/// Eigenvalues come back ascending; exact ties keep their original diagonal
/// order. Each eigenvector is phased so its largest-magnitude entry is real
/// and positive.
pub fn eigh(h: &DenseOperator) -> Result<Eigen> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian { deviation: h.hermitian_deviation() });
    }
    let (values, vecs) = eigh_raw(h.dim(), h.data())?;
    Ok(Eigen {
        values,
        vectors: DenseOperator::from_parts(h.labels().to_vec(), vecs, false),
    })
}

/// Jacobi diagonalization of a row-major `n x n` Hermitian matrix of any
/// size. Returns ascending eigenvalues and row-major eigenvector columns,
/// with the same ordering and phase conventions as [`eigh`]. The caller is
/// responsible for Hermiticity; only the upper triangle's Hermitian part is
/// used.
pub fn eigh_raw(n: usize, data: &[C64]) -> Result<(Vec<f64>, Vec<C64>)> {
    if data.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
    }
    let mut a = data.to_vec();
    // symmetrize so rounding in the input cannot leak into the rotations
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
        for j in i + 1..n {
            let m = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = m;
            a[j * n + i] = m.conj();
        }
    }
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = OFF_DIAG_TOL * scale;
    let mut converged_sweeps = 0;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a, n) <= tol {
            converged_sweeps += 1;
            // one polishing sweep past the threshold
            if converged_sweeps > 1 {
                break;
            }
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if off_norm(&a, n) > tol {
        return Err(Error::domain("Jacobi iteration did not converge"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.partial_cmp(&a[j * n + j].re).expect("finite"));
    let values: Vec<f64> = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vecs = vec![ZERO; n * n];
    for (new, &old) in order.iter().enumerate() {
        let col: Vec<C64> = (0..n).map(|i| v[i * n + old]).collect();
        let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = col.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).copied().unwrap_or(ONE);
        let phase = pivot.conj() / pivot.norm();
        for (i, z) in col.into_iter().enumerate() {
            vecs[i * n + new] = z * phase;
        }
    }
    Ok((values, vecs))
}

fn off_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[i * n + j].norm_sqr();
        }
    }
    s.sqrt()
}

/// Zeroes `a[p][q]` with `a <- G^dag a G`, accumulating `v <- v G`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let ph = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -ph.conj() * s;
    let g_qq = ph.conj() * c;

    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = akp * g_pp + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(app - t * mag, 0.0);
    a[q * n + q] = C64::new(aqq + t * mag, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
        v[k * n + p] = vkp * g_pp + vkq * g_qp;
        v[k * n + q] = vkp * g_pq + vkq * g_qq;
    }
}

/// `exp(-i H t)` through the eigendecomposition.
pub fn propagator(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    Ok(eigh(h)?.propagator(t))
}

/// `exp(-i H t) psi`; `h` and `psi` must share the same register.
pub fn evolve(h: &DenseOperator, t: f64, psi: &StateVector) -> Result<StateVector> {
    if h.labels() != psi.labels() {
        return Err(Error::LabelMismatch { left: h.labels().to_vec(), right: psi.labels().to_vec() });
    }
    eigh(h)?.evolve(t, psi)
}
