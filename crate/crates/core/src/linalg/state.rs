use num_complex::Complex64 as C64;

use super::operator::{check_labels, dim_for, DenseOperator, MAX_DIM, ONE, ZERO};
use crate::error::{Error, Result};

/// Allowed deviation of a state's norm from one.
pub const NORM_TOL: f64 = 1e-10;

/// Normalized amplitude vector over the computational basis of a labeled
/// register. Bit order is the same as [`DenseOperator`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    labels: Vec<usize>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(labels: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        check_labels(&labels)?;
        let dim = dim_for(&labels, MAX_DIM)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: amps.len() });
        }
        let norm = l2(&amps);
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { amps, labels })
    }

    /// Normalizes `amps` before wrapping them.
    pub fn normalized(labels: Vec<usize>, mut amps: Vec<C64>) -> Result<Self> {
        let norm = l2(&amps);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::new(labels, amps)
    }

    pub fn from_real(labels: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::normalized(labels, amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(labels: Vec<usize>, index: usize) -> Result<Self> {
        check_labels(&labels)?;
        let dim = dim_for(&labels, MAX_DIM)?;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, got: index });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(StateVector { amps, labels })
    }

    /// `(|0> + |1>)/sqrt 2` on one qubit.
    pub fn plus(label: usize) -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        StateVector { amps: vec![h, h], labels: vec![label] }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amps)
    }

    /// Bit shift of `label` inside a basis index.
    pub fn shift_of(&self, label: usize) -> Option<usize> {
        shift_in(&self.labels, label)
    }

    pub fn relabeled(&self, labels: Vec<usize>) -> Result<Self> {
        check_labels(&labels)?;
        if labels.len() != self.labels.len() {
            return Err(Error::DimensionMismatch { expected: self.labels.len(), got: labels.len() });
        }
        Ok(StateVector { amps: self.amps.clone(), labels })
    }

    /// `self (x) other`, labels concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let labels: Vec<usize> = self.labels.iter().chain(&other.labels).copied().collect();
        check_labels(&labels)?;
        dim_for(&labels, MAX_DIM)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        Ok(StateVector { amps, labels })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch { left: self.labels.clone(), right: other.labels.clone() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `||self - other||_2` on raw amplitudes.
    pub fn distance(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies an operator whose labels are a subset of this register.
    ///
    /// The operator must be unitary; the result is rejected otherwise.
    pub fn apply(&self, op: &DenseOperator) -> Result<Self> {
        let mut out = self.clone();
        out.apply_in_place(op)?;
        Self::new(out.labels, out.amps)
    }

    pub(crate) fn apply_in_place(&mut self, op: &DenseOperator) -> Result<()> {
        let shifts: Vec<usize> = op
            .labels()
            .iter()
            .map(|&l| {
                self.shift_of(l).ok_or_else(|| Error::LabelMismatch {
                    left: self.labels.clone(),
                    right: op.labels().to_vec(),
                })
            })
            .collect::<Result<_>>()?;
        let k = shifts.len();
        let sub = 1usize << k;
        // offsets[j]: full-index bits for local index j (first op label = msb)
        let offsets: Vec<usize> = (0..sub)
            .map(|j| {
                shifts
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (p, &s)| acc | (((j >> (k - 1 - p)) & 1) << s))
            })
            .collect();
        let mask: usize = shifts.iter().fold(0, |m, &s| m | (1 << s));
        let mut local = vec![ZERO; sub];
        let data = op.data();
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (j, &off) in offsets.iter().enumerate() {
                local[j] = self.amps[base | off];
            }
            for (r, &off) in offsets.iter().enumerate() {
                self.amps[base | off] = data[r * sub..(r + 1) * sub]
                    .iter()
                    .zip(&local)
                    .map(|(&a, &b)| a * b)
                    .sum();
            }
        }
        Ok(())
    }

    /// Multiplies each amplitude by `exp(-i phase(index))`.
    pub fn apply_phases(&mut self, phase: impl Fn(usize) -> f64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= C64::from_polar(1.0, -phase(i));
        }
    }

    /// Unnormalized component `<value|_label |self>` on the remaining labels.
    pub fn conditional_component(&self, label: usize, value: usize) -> Result<(Vec<usize>, Vec<C64>)> {
        let shift = self.shift_of(label).ok_or_else(|| Error::InvalidLabels {
            labels: vec![label],
            reason: "label not in register",
        })?;
        let rest: Vec<usize> = self.labels.iter().copied().filter(|&l| l != label).collect();
        let comp = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> shift) & 1 == value)
            .map(|(_, &a)| a)
            .collect();
        Ok((rest, comp))
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<usize>, amps: Vec<C64>) -> Self {
        StateVector { amps, labels }
    }
}

pub(crate) fn shift_in(labels: &[usize], label: usize) -> Option<usize> {
    labels.iter().position(|&l| l == label).map(|p| labels.len() - 1 - p)
}

fn l2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Squared overlap `|<a|b>|^2`, clamped to `[0, 1]`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}
