//! Gate-level state-vector engine for the two measurement networks.
//!
//! Rotation gates use `RotX(theta) = exp(-i theta sigma_x)` (likewise Y, Z)
//! and `ZZ(theta) = exp(-i theta sigma_z sigma_z)`, so a product-formula
//! factor `exp(-i t A)` maps to a gate with angle `t` times the coefficient.

mod text;

pub use text::{parse_circuit, write_circuit};

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::Range;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{check_labels, DenseOperator, StateVector};
use crate::probe_protocol::{initial_ground_state, x_rotation, ProtocolRun};
use crate::spin_model::{ground_state_analytic, TripletAmplitudes, PROBE};

/// Allowed deviation of a gate matrix from unitarity.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    WalshHadamard { target: usize },
    RotX { target: usize, angle: f64 },
    RotY { target: usize, angle: f64 },
    RotZ { target: usize, angle: f64 },
    ZZ { a: usize, b: usize, angle: f64 },
    /// Applies `unitary` to `targets` when `control` is in `|value>`.
    ControlledUnitary { control: usize, value: usize, targets: Vec<usize>, unitary: DenseOperator },
    /// Arbitrary unitary on `targets`.
    Unitary { targets: Vec<usize>, unitary: DenseOperator },
}

impl Gate {
    /// All labels the gate touches, in matrix order (control first).
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::WalshHadamard { target }
            | Gate::RotX { target, .. }
            | Gate::RotY { target, .. }
            | Gate::RotZ { target, .. } => vec![*target],
            Gate::ZZ { a, b, .. } => vec![*a, *b],
            Gate::ControlledUnitary { control, targets, .. } => {
                std::iter::once(*control).chain(targets.iter().copied()).collect()
            }
            Gate::Unitary { targets, .. } => targets.clone(),
        }
    }

    /// The gate's matrix on [`Gate::qubits`].
    pub fn matrix(&self) -> Result<DenseOperator> {
        let q = self.qubits();
        match self {
            Gate::WalshHadamard { .. } => DenseOperator::from_real(q, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
            Gate::RotX { angle, .. } => x_rotation(*angle).relabeled(q),
            Gate::RotY { angle, .. } => {
                let (s, c) = angle.sin_cos();
                DenseOperator::from_real(q, &[c, -s, s, c])
            }
            Gate::RotZ { angle, .. } => {
                let d = [C64::from_polar(1.0, -angle), C64::from_polar(1.0, *angle)];
                let z = C64::new(0.0, 0.0);
                DenseOperator::new(q, vec![d[0], z, z, d[1]])
            }
            Gate::ZZ { angle, .. } => {
                let (m, p) = (C64::from_polar(1.0, -angle), C64::from_polar(1.0, *angle));
                let mut op = DenseOperator::zeros(q)?;
                for (i, v) in [m, p, p, m].into_iter().enumerate() {
                    op.set(i, i, v);
                }
                Ok(op)
            }
            Gate::ControlledUnitary { value, unitary, .. } => {
                let mut op = DenseOperator::identity(q)?;
                let d = unitary.dim();
                let off = value * d;
                for i in 0..d {
                    for j in 0..d {
                        op.set(off + i, off + j, unitary.get(i, j));
                    }
                }
                Ok(op)
            }
            Gate::Unitary { unitary, .. } => unitary.relabeled(q),
        }
    }

    fn validate(&self, register: &[usize]) -> Result<()> {
        let q = self.qubits();
        check_labels(&q)?;
        if let Some(&bad) = q.iter().find(|l| !register.contains(l)) {
            return Err(Error::InvalidLabels { labels: vec![bad], reason: "gate target outside register" });
        }
        match self {
            Gate::ControlledUnitary { value, targets, unitary, .. } => {
                if *value > 1 {
                    return Err(Error::domain(format!("control value must be 0 or 1, got {value}")));
                }
                check_unitary(unitary, targets.len())?;
            }
            Gate::Unitary { targets, unitary } => check_unitary(unitary, targets.len())?,
            Gate::RotX { angle, .. } | Gate::RotY { angle, .. } | Gate::RotZ { angle, .. } | Gate::ZZ { angle, .. } => {
                if !angle.is_finite() {
                    return Err(Error::domain("gate angle must be finite"));
                }
            }
            Gate::WalshHadamard { .. } => {}
        }
        Ok(())
    }
}

fn check_unitary(u: &DenseOperator, n_targets: usize) -> Result<()> {
    if u.labels().len() != n_targets {
        return Err(Error::DimensionMismatch { expected: 1 << n_targets, got: u.dim() });
    }
    let dev = u.unitarity_deviation();
    if dev > UNITARY_TOL {
        return Err(Error::domain(format!("gate matrix is not unitary (deviation {dev:e})")));
    }
    Ok(())
}

/// Ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    labels: Vec<usize>,
    gates: Vec<Gate>,
    sections: Vec<(String, Range<usize>)>,
}

impl Circuit {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        check_labels(&labels)?;
        Ok(Circuit { labels, gates: Vec::new(), sections: Vec::new() })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Named gate ranges, in order.
    pub fn sections(&self) -> &[(String, Range<usize>)] {
        &self.sections
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(&self.labels)?;
        self.gates.push(gate);
        if let Some((_, r)) = self.sections.last_mut() {
            if r.end == self.gates.len() - 1 {
                r.end += 1;
            }
        }
        Ok(())
    }

    /// Starts a named section; the following pushes extend it.
    pub fn begin_section(&mut self, name: impl Into<String>) {
        let at = self.gates.len();
        self.sections.push((name.into(), at..at));
    }

    /// Product of all gate matrices on the full register.
    pub fn unitary(&self) -> Result<DenseOperator> {
        let dim = 1usize << self.labels.len();
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let out = run_circuit(self, &StateVector::basis(self.labels.clone(), col)?)?;
            for (row, &a) in out.amplitudes().iter().enumerate() {
                data[row * dim + col] = a;
            }
        }
        DenseOperator::new(self.labels.clone(), data)
    }
}

/// Applies the gates in list order.
pub fn run_circuit(c: &Circuit, input: &StateVector) -> Result<StateVector> {
    if input.labels() != c.labels() {
        return Err(Error::LabelMismatch { left: c.labels().to_vec(), right: input.labels().to_vec() });
    }
    let mut state = input.clone();
    for gate in c.gates() {
        state.apply_in_place(&gate.matrix()?)?;
    }
    StateVector::new(state.labels().to_vec(), state.amplitudes().to_vec())
}

/// A unitary whose first column is `target`, completed by Gram-Schmidt over
/// the computational basis.
pub fn state_prep_unitary(target: &StateVector) -> Result<DenseOperator> {
    let dim = target.dim();
    let mut cols: Vec<Vec<C64>> = vec![target.amplitudes().to_vec()];
    for k in 0..dim {
        if cols.len() == dim {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for c in &cols {
                let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(c).for_each(|(x, &y)| *x -= proj * y);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
    }
    let mut data = vec![C64::new(0.0, 0.0); dim * dim];
    for (j, col) in cols.iter().enumerate() {
        for (i, &a) in col.iter().enumerate() {
            data[i * dim + j] = a;
        }
    }
    DenseOperator::new(target.labels().to_vec(), data)
}

/// Conditional-preparation network on labels `[0, 1, 2]`: Walsh-Hadamard on
/// the probe, then `|00> -> psi_g(bz + eps)` if the probe is `|0>` and
/// `|00> -> psi_g(bz - eps)` if it is `|1>`.
pub fn build_lc_network(bz: f64, eps: f64) -> Result<Circuit> {
    let mut c = Circuit::new(vec![PROBE, 1, 2])?;
    c.begin_section("probe superposition");
    c.push(Gate::WalshHadamard { target: PROBE })?;
    c.begin_section("conditional preparation");
    for (value, field) in [(0, bz + eps), (1, bz - eps)] {
        let unitary = state_prep_unitary(&ground_state_analytic(field).state)?;
        c.push(Gate::ControlledUnitary { control: PROBE, value, targets: vec![1, 2], unitary })?;
    }
    Ok(c)
}

/// Census of the avoided-crossing preparation angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrepAngles {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    /// The defining ratio hit a pole (or was 0/0) and a limit value was used.
    pub alpha_saturated: bool,
    pub beta_saturated: bool,
    pub theta_saturated: bool,
}

/// Half-angle from `tan(x/2) = num/den` by principal arctangent, with the
/// limit value at a pole.
fn half_angle(num: f64, den: f64) -> (f64, bool) {
    if den == 0.0 {
        if num == 0.0 {
            (0.0, true)
        } else {
            (PI.copysign(num), true)
        }
    } else {
        (2.0 * (num / den).atan(), false)
    }
}

/// `tan(alpha/2) = -sqrt2 c1/c+`, `tan(beta/2) = -c+/(sqrt2 c0)`,
/// `tan(theta/2) = sin(beta/2)/cos(alpha/2)`.
pub fn prep_angles(c: &TripletAmplitudes) -> PrepAngles {
    let sqrt2 = std::f64::consts::SQRT_2;
    let (alpha, alpha_saturated) = half_angle(-sqrt2 * c.c1, c.c_plus);
    let (beta, beta_saturated) = half_angle(-c.c_plus, sqrt2 * c.c0);
    let cos_a = (alpha / 2.0).cos();
    // cos(alpha/2) vanishes only at the limit alpha = +-pi
    let cos_a = if alpha_saturated && alpha.abs() == PI { 0.0 } else { cos_a };
    let (theta, theta_saturated) = half_angle((beta / 2.0).sin(), cos_a);
    PrepAngles { alpha, beta, theta, alpha_saturated, beta_saturated, theta_saturated }
}

/// Avoided-crossing circuit: exact preparation of `|+>|psi_g>` from
/// `|0...0>`, then the product-formula factors as gates.
pub fn build_ac_circuit(run: &ProtocolRun) -> Result<Circuit> {
    run.validate()?;
    let spec = &run.spec;
    let system = spec.system_labels();
    let mut labels = vec![PROBE];
    labels.extend(&system);
    let mut c = Circuit::new(labels)?;
    let (ground, _) = initial_ground_state(spec)?;

    c.begin_section("preparation");
    c.push(Gate::WalshHadamard { target: PROBE })?;
    c.push(Gate::Unitary { targets: system.clone(), unitary: state_prep_unitary(&ground)? })?;

    let dt = run.tau / run.trotter_steps as f64;
    for _ in 0..run.trotter_steps {
        c.begin_section("exp(-i dt bx sum sx / 2)");
        for &l in &system {
            c.push(Gate::RotX { target: l, angle: dt * spec.bx / 2.0 })?;
        }
        c.begin_section("exp(-i dt bz sum sz)");
        for &l in &system {
            c.push(Gate::RotZ { target: l, angle: dt * spec.bz })?;
        }
        for &l in system.iter().rev() {
            c.begin_section(format!("exp(-i dt eps sz0 sz{l})"));
            c.push(Gate::ZZ { a: PROBE, b: l, angle: dt * spec.eps })?;
        }
        c.begin_section("exp(-i dt sum sz sz)");
        for w in system.windows(2) {
            c.push(Gate::ZZ { a: w[0], b: w[1], angle: dt })?;
        }
        c.begin_section("exp(-i dt bx sum sx / 2)");
        for &l in &system {
            c.push(Gate::RotX { target: l, angle: dt * spec.bx / 2.0 })?;
        }
    }
    Ok(c)
}
