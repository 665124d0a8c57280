//! The two probe-qubit measurements.
//!
//! Level crossing (`bx = 0`): the probe conditionally prepares the system in
//! the ground states at `bz + eps` and `bz - eps`; the probe coherence then
//! reads out their squared overlap.
//!
//! Avoided crossing (`bx > 0`): the system starts in its own ground state
//! and evolves for a time `tau` under the two branch Hamiltonians, either
//! exactly or through a symmetric six-factor product formula.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::exec::{try_map_ordered, Execution};
use crate::linalg::{eigh, overlap, partial_trace, DenseOperator, StateVector};
use crate::spin_model::{
    branch_hamiltonian, ground_state_analytic, ground_state_numeric, hamiltonian_total, Branch, ChainSpec,
    Sector, PROBE,
};

/// Propagator used for the split evolution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    #[default]
    Exact,
    Trotter,
}

/// One avoided-crossing measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolRun {
    pub spec: ChainSpec,
    pub tau: f64,
    pub method: Method,
    /// Repetitions of the product formula over `tau`. The experiment uses 1.
    pub trotter_steps: usize,
}

impl ProtocolRun {
    pub fn new(spec: ChainSpec, tau: f64, method: Method) -> Self {
        ProtocolRun { spec, tau, method, trotter_steps: 1 }
    }

    pub fn with_bz(self, bz: f64) -> Self {
        ProtocolRun { spec: self.spec.with_bz(bz), ..self }
    }

    pub fn with_method(self, method: Method) -> Self {
        ProtocolRun { method, ..self }
    }

    pub fn with_steps(self, trotter_steps: usize) -> Self {
        ProtocolRun { trotter_steps, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::domain(format!("tau must be finite and >= 0, got {}", self.tau)));
        }
        if self.trotter_steps == 0 {
            return Err(Error::domain("trotter_steps must be >= 1"));
        }
        Ok(())
    }
}

/// Squared overlap at a level crossing, with the degeneracy flag raised when
/// either effective field sits exactly on a critical point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelCrossingOverlap {
    pub value: f64,
    pub degenerate: bool,
}

/// `|<psi_g(bz + eps)|psi_g(bz - eps)>|^2` from the piecewise ground states.
pub fn overlap_level_crossing(bz: f64, eps: f64) -> Result<LevelCrossingOverlap> {
    if !(eps > 0.0 && eps.is_finite() && bz.is_finite()) {
        return Err(Error::domain("level-crossing overlap needs finite bz and eps > 0"));
    }
    let g0 = ground_state_analytic(bz + eps);
    let g1 = ground_state_analytic(bz - eps);
    Ok(LevelCrossingOverlap {
        value: overlap(&g0.state, &g1.state)?,
        degenerate: g0.degenerate || g1.degenerate,
    })
}

/// `(|0>|a> + |1>|b>)/sqrt 2` with the probe prepended as label 0.
pub fn branch_superposition(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    if a.labels() != b.labels() {
        return Err(Error::LabelMismatch { left: a.labels().to_vec(), right: b.labels().to_vec() });
    }
    if a.labels().contains(&PROBE) {
        return Err(Error::InvalidLabels { labels: a.labels().to_vec(), reason: "probe label already used" });
    }
    let mut labels = vec![PROBE];
    labels.extend_from_slice(a.labels());
    let amps = a
        .amplitudes()
        .iter()
        .chain(b.amplitudes())
        .map(|&z| z * FRAC_1_SQRT_2)
        .collect();
    StateVector::new(labels, amps)
}

/// Output of the conditional-preparation network on `|000>`.
pub fn build_network_state(bz: f64, eps: f64) -> Result<StateVector> {
    branch_superposition(&ground_state_analytic(bz + eps).state, &ground_state_analytic(bz - eps).state)
}

#[derive(Clone, Debug)]
pub struct ReadoutResult {
    /// `4 |<a|b>|^2` with `a`, `b` the unnormalized probe-conditioned components.
    pub l_direct: f64,
    /// `4 |tr(rho_probe sigma_+)|^2`.
    pub l_probe: f64,
    pub probe_rho: DenseOperator,
}

/// Reads the overlap off the probe's transverse magnetization.
pub fn probe_readout(psi: &StateVector) -> Result<ReadoutResult> {
    let probe_rho = partial_trace(psi, &[PROBE])?;
    // sigma_+ = |0><1|, so tr(rho sigma_+) = rho[1][0]
    let sigma_plus = probe_rho.get(1, 0);
    let l_probe = (4.0 * sigma_plus.norm_sqr()).min(1.0);
    let (_, a) = psi.conditional_component(PROBE, 0)?;
    let (_, b) = psi.conditional_component(PROBE, 1)?;
    let inner: C64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
    let l_direct = (4.0 * inner.norm_sqr()).min(1.0);
    Ok(ReadoutResult { l_direct, l_probe, probe_rho })
}

/// Ground state the avoided-crossing protocol starts from: the triplet
/// ground state for two spins, the full-space ground state otherwise.
pub fn initial_ground_state(spec: &ChainSpec) -> Result<(StateVector, bool)> {
    let sys = spec.system_only();
    let sector = if sys.n == 2 { Sector::Triplet } else { Sector::Full };
    let g = ground_state_numeric(&sys, sector)?;
    Ok((g.state, g.degenerate))
}

/// Evolves the system ground state under both branch Hamiltonians, using the
/// run's method. Returns `(psi_plus, psi_minus)`.
pub fn split_evolution(run: &ProtocolRun) -> Result<(StateVector, StateVector)> {
    run.validate()?;
    let (psi, _) = initial_ground_state(&run.spec)?;
    evolve_branches(run, &psi)
}

fn evolve_branches(run: &ProtocolRun, psi: &StateVector) -> Result<(StateVector, StateVector)> {
    let one = |branch| match run.method {
        Method::Exact => eigh(&branch_hamiltonian(&run.spec, branch)?)?.evolve(run.tau, psi),
        Method::Trotter => trotter_evolution(run, psi, branch),
    };
    Ok((one(Branch::Plus)?, one(Branch::Minus)?))
}

/// Cross-check route: evolve `|+>|psi_g>` with the full probe-plus-system
/// Hamiltonian (or the full-register product formula) and split the result
/// by probe value. Returns `(psi_plus, psi_minus)`.
pub fn split_evolution_full(run: &ProtocolRun) -> Result<(StateVector, StateVector)> {
    run.validate()?;
    let (psi, _) = initial_ground_state(&run.spec)?;
    let start = StateVector::plus(PROBE).tensor(&psi)?;
    let out = match run.method {
        Method::Exact => eigh(&hamiltonian_total(&run.spec.with_probe(run.spec.eps))?)?.evolve(run.tau, &start)?,
        Method::Trotter => {
            let mut s = start;
            trotter_apply(&mut s, run, ProbeTerm::Qubit)?;
            s
        }
    };
    let branch = |v| -> Result<StateVector> {
        let (labels, comp) = out.conditional_component(PROBE, v)?;
        StateVector::normalized(labels, comp)
    };
    Ok((branch(0)?, branch(1)?))
}

/// Applies the product formula to a system state for one probe branch.
///
/// Right to left, each of the `trotter_steps` repetitions (with
/// `dt = tau / steps`) applies `exp(-i dt bx sum sigma_x / 2)`,
/// `exp(-i dt bz sum sigma_z)`, `exp(-i dt eps s sigma_z^i)` for every system
/// spin, `exp(-i dt sum sigma_z^i sigma_z^{i+1})` and again
/// `exp(-i dt bx sum sigma_x / 2)`, where `s = +-1` is the probe eigenvalue
/// selected by `branch`.
pub fn trotter_evolution(run: &ProtocolRun, psi: &StateVector, branch: Branch) -> Result<StateVector> {
    run.validate()?;
    if psi.labels() != run.spec.system_labels().as_slice() {
        return Err(Error::LabelMismatch { left: run.spec.system_labels(), right: psi.labels().to_vec() });
    }
    let mut s = psi.clone();
    trotter_apply(&mut s, run, ProbeTerm::Substituted(branch.sign()))?;
    StateVector::new(s.labels().to_vec(), s.amplitudes().to_vec())
}

#[derive(Clone, Copy)]
enum ProbeTerm {
    /// `sigma_z^0` replaced by a number.
    Substituted(f64),
    /// `sigma_z^0` acting on a probe qubit in the register.
    Qubit,
}

fn trotter_apply(state: &mut StateVector, run: &ProtocolRun, probe: ProbeTerm) -> Result<()> {
    let spec = &run.spec;
    let dt = run.tau / run.trotter_steps as f64;
    let labels = state.labels().to_vec();
    let sys_shifts: Vec<usize> = spec
        .system_labels()
        .iter()
        .map(|&l| state.shift_of(l).ok_or_else(|| Error::LabelMismatch { left: spec.register(), right: labels.clone() }))
        .collect::<Result<_>>()?;
    let probe_shift = match probe {
        ProbeTerm::Qubit => Some(
            state
                .shift_of(PROBE)
                .ok_or_else(|| Error::InvalidLabels { labels: labels.clone(), reason: "probe not in register" })?,
        ),
        ProbeTerm::Substituted(_) => None,
    };
    let spin = |idx: usize, s: usize| if (idx >> s) & 1 == 0 { 1.0 } else { -1.0 };
    let probe_z = |idx: usize| match probe {
        ProbeTerm::Substituted(sign) => sign,
        ProbeTerm::Qubit => spin(idx, probe_shift.expect("probe shift")),
    };
    let half_x = x_rotation(dt * spec.bx / 2.0);

    for _ in 0..run.trotter_steps {
        for &l in &spec.system_labels() {
            state.apply_in_place(&half_x.relabeled(vec![l])?)?;
        }
        state.apply_phases(|idx| dt * spec.bz * sys_shifts.iter().map(|&s| spin(idx, s)).sum::<f64>());
        for &s in sys_shifts.iter().rev() {
            state.apply_phases(|idx| dt * spec.eps * probe_z(idx) * spin(idx, s));
        }
        state.apply_phases(|idx| dt * sys_shifts.windows(2).map(|w| spin(idx, w[0]) * spin(idx, w[1])).sum::<f64>());
        for &l in &spec.system_labels() {
            state.apply_in_place(&half_x.relabeled(vec![l])?)?;
        }
    }
    Ok(())
}

/// `exp(-i angle sigma_x)` on label 0.
pub(crate) fn x_rotation(angle: f64) -> DenseOperator {
    let (s, c) = angle.sin_cos();
    let (c, ms) = (C64::new(c, 0.0), C64::new(0.0, -s));
    DenseOperator::new(vec![0], vec![c, ms, ms, c]).expect("2x2")
}

/// The full-register product-formula propagator, column by column.
pub fn trotter_propagator_full(run: &ProtocolRun) -> Result<DenseOperator> {
    run.validate()?;
    let register = run.spec.with_probe(run.spec.eps).register();
    let dim = 1usize << register.len();
    let mut data = vec![C64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut s = StateVector::basis(register.clone(), col)?;
        trotter_apply(&mut s, run, ProbeTerm::Qubit)?;
        for (row, &a) in s.amplitudes().iter().enumerate() {
            data[row * dim + col] = a;
        }
    }
    DenseOperator::new(register, data)
}

/// Accuracy of the product formula against exact evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterFidelity {
    /// `|<exact|trotter>|^2` for the probe-`|0>` branch.
    pub plus: f64,
    pub minus: f64,
    /// `|tr(U_exact^dag U_trotter)| / dim` over the probe-plus-system register.
    pub gate: f64,
}

impl TrotterFidelity {
    pub fn worst_state(&self) -> f64 {
        self.plus.min(self.minus)
    }
}

pub fn trotter_fidelity(run: &ProtocolRun) -> Result<TrotterFidelity> {
    run.validate()?;
    let (psi, _) = initial_ground_state(&run.spec)?;
    let exact = evolve_branches(&run.with_method(Method::Exact), &psi)?;
    let trot = evolve_branches(&run.with_method(Method::Trotter), &psi)?;
    let u_exact = eigh(&hamiltonian_total(&run.spec.with_probe(run.spec.eps))?)?.propagator(run.tau);
    let u_trot = trotter_propagator_full(run)?;
    let tr = u_exact.adjoint().matmul(&u_trot)?.trace();
    Ok(TrotterFidelity {
        plus: overlap(&exact.0, &trot.0)?,
        minus: overlap(&exact.1, &trot.1)?,
        gate: tr.norm() / u_exact.dim() as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapPoint {
    pub bz: f64,
    pub l: f64,
    /// The initial ground state was degenerate.
    pub degenerate: bool,
}

/// Overlap `|<psi_plus(tau)|psi_minus(tau)>|^2` at every grid point, in grid
/// order. `run.spec.bz` is ignored.
pub fn overlap_avoided(run: &ProtocolRun, bz_grid: &[f64], exec: Execution) -> Result<Vec<OverlapPoint>> {
    if bz_grid.is_empty() {
        return Err(Error::domain("bz grid is empty"));
    }
    run.validate()?;
    try_map_ordered(bz_grid, exec, |&bz| {
        let r = run.with_bz(bz);
        let (psi, degenerate) = initial_ground_state(&r.spec)?;
        let (a, b) = evolve_branches(&r, &psi)?;
        Ok(OverlapPoint { bz, l: overlap(&a, &b)?, degenerate })
    })
}
