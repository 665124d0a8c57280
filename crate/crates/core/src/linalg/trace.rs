use num_complex::Complex64 as C64;

use super::operator::{DenseOperator, ZERO};
use super::state::{shift_in, StateVector};
use crate::error::{Error, Result};

/// Reduction of a state or density matrix onto a subset of its register.
pub trait PartialTrace {
    /// Density matrix on `keep`, with labels in register order.
    fn partial_trace(&self, keep: &[usize]) -> Result<DenseOperator>;
}

/// See [`PartialTrace`].
pub fn partial_trace<T: PartialTrace + ?Sized>(x: &T, keep: &[usize]) -> Result<DenseOperator> {
    x.partial_trace(keep)
}

/// Index bookkeeping: kept labels in register order plus the bit shifts of
/// the kept and traced-out qubits.
struct Split {
    kept: Vec<usize>,
    keep_shifts: Vec<usize>,
    env_shifts: Vec<usize>,
}

impl Split {
    fn new(register: &[usize], keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidLabels { labels: vec![], reason: "keep set is empty" });
        }
        for (i, l) in keep.iter().enumerate() {
            if !register.contains(l) {
                return Err(Error::InvalidLabels { labels: keep.to_vec(), reason: "label not in register" });
            }
            if keep[..i].contains(l) {
                return Err(Error::InvalidLabels { labels: keep.to_vec(), reason: "duplicate label" });
            }
        }
        let kept: Vec<usize> = register.iter().copied().filter(|l| keep.contains(l)).collect();
        let shift = |l: usize| shift_in(register, l).expect("label present");
        let keep_shifts = kept.iter().map(|&l| shift(l)).collect();
        let env_shifts = register.iter().filter(|l| !keep.contains(l)).map(|&l| shift(l)).collect();
        Ok(Split { kept, keep_shifts, env_shifts })
    }

    fn full_index(&self, k: usize, e: usize) -> usize {
        scatter(&self.keep_shifts, k) | scatter(&self.env_shifts, e)
    }

    fn keep_dim(&self) -> usize {
        1 << self.keep_shifts.len()
    }

    fn env_dim(&self) -> usize {
        1 << self.env_shifts.len()
    }
}

/// Places the bits of `local` (msb first) at the given shifts.
fn scatter(shifts: &[usize], local: usize) -> usize {
    let k = shifts.len();
    shifts
        .iter()
        .enumerate()
        .fold(0, |acc, (p, &s)| acc | (((local >> (k - 1 - p)) & 1) << s))
}

impl PartialTrace for StateVector {
    fn partial_trace(&self, keep: &[usize]) -> Result<DenseOperator> {
        let split = Split::new(self.labels(), keep)?;
        let (dk, de) = (split.keep_dim(), split.env_dim());
        let amps = self.amplitudes();
        // m[k][e] = psi(k, e); rho = m m^dag
        let m: Vec<C64> = (0..dk)
            .flat_map(|k| (0..de).map(move |e| (k, e)))
            .map(|(k, e)| amps[split.full_index(k, e)])
            .collect();
        let mut rho = vec![ZERO; dk * dk];
        for i in 0..dk {
            for j in i..dk {
                let s: C64 = (0..de).map(|e| m[i * de + e] * m[j * de + e].conj()).sum();
                rho[i * dk + j] = s;
                rho[j * dk + i] = s.conj();
            }
            rho[i * dk + i].im = 0.0;
        }
        Ok(DenseOperator::from_parts(split.kept, rho, true))
    }
}

impl PartialTrace for DenseOperator {
    fn partial_trace(&self, keep: &[usize]) -> Result<DenseOperator> {
        let split = Split::new(self.labels(), keep)?;
        let (dk, de) = (split.keep_dim(), split.env_dim());
        let mut out = vec![ZERO; dk * dk];
        for i in 0..dk {
            for j in 0..dk {
                out[i * dk + j] = (0..de)
                    .map(|e| self.get(split.full_index(i, e), split.full_index(j, e)))
                    .sum();
            }
        }
        let reduced = DenseOperator::from_parts(split.kept, out, false);
        if self.hermitian_flag() {
            return Ok(reduced.clone().into_hermitian().unwrap_or(reduced));
        }
        Ok(reduced)
    }
}

/// Outer product `|psi><psi|`.
pub fn density_matrix(psi: &StateVector) -> DenseOperator {
    let a = psi.amplitudes();
    let n = a.len();
    let mut data = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = a[i] * a[j].conj();
        }
    }
    DenseOperator::from_parts(psi.labels().to_vec(), data, true)
}
