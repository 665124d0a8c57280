use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest operator dimension the crate will allocate by default.
pub const MAX_DIM: usize = 1 << 14;

/// Tolerance on `max |A - A^dag|` (scaled by `max(1, max |a_ij|)`) for an
/// operator to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Single-qubit Pauli operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Row-major 2x2 matrix.
    pub fn matrix(self) -> [C64; 4] {
        match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        }
    }

    /// For basis bit `b`, returns the bit `b'` and coefficient `c` with
    /// `P|b> = c|b'>`.
    fn act(self, bit: usize) -> (usize, C64) {
        match self {
            Pauli::I => (bit, ONE),
            Pauli::X => (bit ^ 1, ONE),
            Pauli::Y => (bit ^ 1, if bit == 0 { I } else { -I }),
            Pauli::Z => (bit, if bit == 0 { ONE } else { -ONE }),
        }
    }
}

pub(crate) fn check_labels(labels: &[usize]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidLabels {
            labels: labels.to_vec(),
            reason: "register must hold at least one qubit",
        });
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::InvalidLabels {
                labels: labels.to_vec(),
                reason: "duplicate label",
            });
        }
    }
    Ok(())
}

pub(crate) fn dim_for(labels: &[usize], max: usize) -> Result<usize> {
    let n = labels.len();
    if n >= usize::BITS as usize || (1usize << n) > max {
        return Err(Error::Capacity {
            dim: if n >= usize::BITS as usize { usize::MAX } else { 1 << n },
            max,
        });
    }
    Ok(1 << n)
}

/// Square complex matrix acting on a labeled qubit register.
///
/// Basis index bits follow register order: the first label is the most
/// significant bit, so on labels `[1, 2]` index 1 is `|01>`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<C64>,
    labels: Vec<usize>,
    hermitian: bool,
}

impl DenseOperator {
    /// Builds an operator from row-major entries.
    pub fn new(labels: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        check_labels(&labels)?;
        let dim = dim_for(&labels, MAX_DIM)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("operator entries must be finite"));
        }
        Ok(DenseOperator { dim, data, labels, hermitian: false })
    }

    pub fn from_real(labels: Vec<usize>, data: &[f64]) -> Result<Self> {
        Self::new(labels, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(labels: Vec<usize>) -> Result<Self> {
        check_labels(&labels)?;
        let dim = dim_for(&labels, MAX_DIM)?;
        Ok(DenseOperator { dim, data: vec![ZERO; dim * dim], labels, hermitian: true })
    }

    pub fn identity(labels: Vec<usize>) -> Result<Self> {
        let mut op = Self::zeros(labels)?;
        for i in 0..op.dim {
            op.data[i * op.dim + i] = ONE;
        }
        Ok(op)
    }

    /// Single-qubit Pauli on `label`.
    pub fn pauli(p: Pauli, label: usize) -> Self {
        DenseOperator { dim: 2, data: p.matrix().to_vec(), labels: vec![label], hermitian: true }
    }

    /// Product of Paulis on distinct labels of `register`, identity elsewhere.
    ///
    /// Built row by row; a Pauli string has one nonzero per column.
    pub fn pauli_string(register: &[usize], terms: &[(usize, Pauli)]) -> Result<Self> {
        let mut op = Self::zeros(register.to_vec())?;
        let n = register.len();
        let mut shifts = Vec::with_capacity(terms.len());
        for (i, &(label, p)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|&(l, _)| l == label) {
                return Err(Error::InvalidLabels {
                    labels: terms.iter().map(|t| t.0).collect(),
                    reason: "duplicate label in Pauli string",
                });
            }
            let pos = register.iter().position(|&l| l == label).ok_or_else(|| {
                Error::InvalidLabels { labels: vec![label], reason: "label not in register" }
            })?;
            shifts.push((n - 1 - pos, p));
        }
        for col in 0..op.dim {
            let mut row = col;
            let mut coef = ONE;
            for &(shift, p) in &shifts {
                let (b, c) = p.act((col >> shift) & 1);
                row = (row & !(1 << shift)) | (b << shift);
                coef *= c;
            }
            op.data[row * op.dim + col] = coef;
        }
        Ok(op)
    }

    /// Diagonal operator with the given real entries.
    pub fn diagonal(labels: Vec<usize>, diag: &[f64]) -> Result<Self> {
        let mut op = Self::zeros(labels)?;
        if diag.len() != op.dim {
            return Err(Error::DimensionMismatch { expected: op.dim, got: diag.len() });
        }
        for (i, &d) in diag.iter().enumerate() {
            op.data[i * op.dim + i] = C64::new(d, 0.0);
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    /// Sets one entry. Clears the Hermitian flag.
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
        self.hermitian = false;
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    /// Same matrix on a different register of equal size.
    pub fn relabeled(&self, labels: Vec<usize>) -> Result<Self> {
        check_labels(&labels)?;
        if labels.len() != self.labels.len() {
            return Err(Error::DimensionMismatch { expected: self.labels.len(), got: labels.len() });
        }
        Ok(DenseOperator { labels, ..self.clone() })
    }

    fn same_register(&self, other: &Self) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch { left: self.labels.clone(), right: other.labels.clone() });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_register(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseOperator { dim: n, data: out, labels: self.labels.clone(), hermitian: false })
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        DenseOperator { dim: n, data, labels: self.labels.clone(), hermitian: self.hermitian }
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        DenseOperator {
            data: self.data.iter().map(|z| z.conj()).collect(),
            ..self.clone()
        }
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, other: &Self, scale: f64) -> Result<Self> {
        self.same_register(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b * scale).collect();
        Ok(DenseOperator {
            dim: self.dim,
            data,
            labels: self.labels.clone(),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn scaled(&self, scale: C64) -> Self {
        DenseOperator {
            data: self.data.iter().map(|&z| z * scale).collect(),
            hermitian: self.hermitian && scale.im == 0.0,
            ..self.clone()
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Matrix-vector product on raw amplitudes.
    pub fn apply_raw(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self
            .data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        dev
    }

    /// `max |U^dag U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.adjoint().matmul(self).expect("same register");
        let id = Self::identity(self.labels.clone()).expect("valid labels");
        prod.max_abs_diff(&id)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian || self.check_hermitian().is_ok()
    }

    fn check_hermitian(&self) -> Result<()> {
        let scale = self.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Verifies Hermiticity and sets the flag.
    pub fn into_hermitian(mut self) -> Result<Self> {
        if !self.hermitian {
            self.check_hermitian()?;
            self.hermitian = true;
        }
        Ok(self)
    }

    pub fn hermitian_flag(&self) -> bool {
        self.hermitian
    }

    pub(crate) fn from_parts(labels: Vec<usize>, data: Vec<C64>, hermitian: bool) -> Self {
        let dim = 1 << labels.len();
        debug_assert_eq!(data.len(), dim * dim);
        DenseOperator { dim, data, labels, hermitian }
    }
}

/// Kronecker product `a (x) b` with the default capacity.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    kron_with_capacity(a, b, MAX_DIM)
}

/// Kronecker product; labels are concatenated (`a` first) and must be disjoint.
pub fn kron_with_capacity(a: &DenseOperator, b: &DenseOperator, max_dim: usize) -> Result<DenseOperator> {
    let labels: Vec<usize> = a.labels.iter().chain(&b.labels).copied().collect();
    check_labels(&labels)?;
    let dim = dim_for(&labels, max_dim)?;
    let (da, db) = (a.dim, b.dim);
    let mut data = vec![ZERO; dim * dim];
    for i in 0..da {
        for j in 0..da {
            let x = a.data[i * da + j];
            if x == ZERO {
                continue;
            }
            for k in 0..db {
                let row = (i * db + k) * dim + j * db;
                for l in 0..db {
                    data[row + l] = x * b.data[k * db + l];
                }
            }
        }
    }
    Ok(DenseOperator { dim, data, labels, hermitian: a.hermitian && b.hermitian })
}
