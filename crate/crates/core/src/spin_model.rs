//! Ising chain Hamiltonians, their ground states, the two-level model near
//! the avoided crossing, and two-qubit concurrence.
//!
//! Conventions: coupling `J = 1`, `hbar = 1`, `sigma_z|0> = +|0>`. System
//! spins carry labels `1..=n`; the probe, when present, is label 0.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, eigh_raw, overlap, DenseOperator, Eigen, Pauli, PartialTrace, StateVector};

/// Label of the probe qubit.
pub const PROBE: usize = 0;

/// Ground states whose two lowest levels are closer than this are flagged.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Parameters of the chain and its optional probe coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    /// Number of system spins, at least 2.
    pub n: usize,
    pub bz: f64,
    pub bx: f64,
    pub eps: f64,
    pub with_probe: bool,
}

impl ChainSpec {
    /// Two system spins in a longitudinal field, no probe.
    pub fn pair(bz: f64) -> Self {
        ChainSpec { n: 2, bz, bx: 0.0, eps: 0.0, with_probe: false }
    }

    pub fn with_n(self, n: usize) -> Self {
        ChainSpec { n, ..self }
    }

    pub fn with_bz(self, bz: f64) -> Self {
        ChainSpec { bz, ..self }
    }

    pub fn with_bx(self, bx: f64) -> Self {
        ChainSpec { bx, ..self }
    }

    /// Sets `eps` and attaches the probe.
    pub fn with_probe(self, eps: f64) -> Self {
        ChainSpec { eps, with_probe: true, ..self }
    }

    /// Same parameters without the probe qubit.
    pub fn system_only(self) -> Self {
        ChainSpec { with_probe: false, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("chain needs at least 2 spins, got {}", self.n)));
        }
        if ![self.bz, self.bx, self.eps].iter().all(|x| x.is_finite()) {
            return Err(Error::domain("fields and coupling must be finite"));
        }
        if self.bx < 0.0 || self.eps < 0.0 {
            return Err(Error::domain("bx and eps must be non-negative"));
        }
        Ok(())
    }

    pub fn system_labels(&self) -> Vec<usize> {
        (1..=self.n).collect()
    }

    /// Probe first (when attached), then the system spins.
    pub fn register(&self) -> Vec<usize> {
        let mut r = Vec::with_capacity(self.n + 1);
        if self.with_probe {
            r.push(PROBE);
        }
        r.extend(1..=self.n);
        r
    }
}

/// Which probe eigenstate a system branch is correlated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Probe in `|0>`: effective field `bz + eps`.
    Plus,
    /// Probe in `|1>`: effective field `bz - eps`.
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn probe_value(self) -> usize {
        match self {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }
}

fn chain_hamiltonian(spec: &ChainSpec, bz: f64, bx: f64) -> Result<DenseOperator> {
    spec.validate()?;
    let register = spec.register();
    let n_reg = register.len();
    let shift = |label: usize| n_reg - 1 - register.iter().position(|&l| l == label).expect("label");
    let sys_shifts: Vec<usize> = (1..=spec.n).map(shift).collect();
    let probe_shift = spec.with_probe.then(|| shift(PROBE));
    let dim = 1usize << n_reg;
    let spin = |idx: usize, s: usize| if (idx >> s) & 1 == 0 { 1.0 } else { -1.0 };

    let diag: Vec<f64> = (0..dim)
        .map(|idx| {
            let z: Vec<f64> = sys_shifts.iter().map(|&s| spin(idx, s)).collect();
            let bonds: f64 = z.windows(2).map(|w| w[0] * w[1]).sum();
            let total: f64 = z.iter().sum();
            let probe = probe_shift.map_or(0.0, |s| spec.eps * spin(idx, s) * total);
            bonds + bz * total + probe
        })
        .collect();
    let mut h = DenseOperator::diagonal(register.clone(), &diag)?;
    if bx != 0.0 {
        for label in 1..=spec.n {
            let x = DenseOperator::pauli_string(&register, &[(label, Pauli::X)])?;
            h = h.add_scaled(&x, bx)?;
        }
    }
    h.into_hermitian()
}

/// Nearest-neighbour `sigma_z sigma_z` chain in a longitudinal field, plus
/// `eps sigma_z^0 sum_i sigma_z^i` when the probe is attached. Requires
/// `bx == 0`.
pub fn hamiltonian_longitudinal(spec: &ChainSpec) -> Result<DenseOperator> {
    if spec.bx != 0.0 {
        return Err(Error::domain("longitudinal Hamiltonian requires bx = 0"));
    }
    chain_hamiltonian(spec, spec.bz, 0.0)
}

/// Longitudinal Hamiltonian plus `bx sum_i sigma_x^i`.
pub fn hamiltonian_transverse(spec: &ChainSpec) -> Result<DenseOperator> {
    chain_hamiltonian(spec, spec.bz, spec.bx)
}

/// System plus probe: `H_T (x) 1 + eps sigma_z^0 sum_i sigma_z^i`.
pub fn hamiltonian_total(spec: &ChainSpec) -> Result<DenseOperator> {
    if !spec.with_probe {
        return Err(Error::domain("total Hamiltonian needs the probe attached"));
    }
    chain_hamiltonian(spec, spec.bz, spec.bx)
}

/// System-only Hamiltonian seen by one probe branch: the probe's `sigma_z`
/// replaced by its eigenvalue, i.e. `bz -> bz +- eps`.
pub fn branch_hamiltonian(spec: &ChainSpec, branch: Branch) -> Result<DenseOperator> {
    let sys = spec.system_only();
    chain_hamiltonian(&sys, spec.bz + branch.sign() * spec.eps, spec.bx)
}

/// Amplitudes of a two-spin triplet state on `|00>`, `|phi+>`, `|11>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripletAmplitudes {
    pub c0: f64,
    pub c_plus: f64,
    pub c1: f64,
}

impl TripletAmplitudes {
    /// Normalizes and fixes the sign so the largest-magnitude entry is positive.
    pub fn new(c0: f64, c_plus: f64, c1: f64) -> Result<Self> {
        let norm = (c0 * c0 + c_plus * c_plus + c1 * c1).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        let v = [c0 / norm, c_plus / norm, c1 / norm];
        let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let pivot = v.iter().find(|x| x.abs() >= max * (1.0 - 1e-9)).copied().unwrap_or(1.0);
        let s = pivot.signum();
        Ok(TripletAmplitudes { c0: v[0] * s, c_plus: v[1] * s, c1: v[2] * s })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c0, self.c_plus, self.c1]
    }

    /// `c0|00> + c+|phi+> + c1|11>` on labels `[1, 2]`.
    pub fn state(&self) -> StateVector {
        let p = self.c_plus * FRAC_1_SQRT_2;
        StateVector::from_real(vec![1, 2], &[self.c0, p, p, self.c1]).expect("normalized triplet")
    }

    /// Projects a two-spin state onto the triplet basis. Returns `None` when
    /// the state has weight outside the triplet or non-real amplitudes after
    /// removing the global phase.
    pub fn from_state(psi: &StateVector) -> Option<Self> {
        if psi.dim() != 4 {
            return None;
        }
        let a = psi.amplitudes();
        let c = [a[0], (a[1] + a[2]) * FRAC_1_SQRT_2, a[3]];
        let weight: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if (weight - 1.0).abs() > 1e-10 {
            return None;
        }
        let pivot = *c.iter().max_by(|x, y| x.norm().total_cmp(&y.norm()))?;
        let phase = pivot.conj() / pivot.norm();
        let r: Vec<C64> = c.iter().map(|&z| z * phase).collect();
        if r.iter().any(|z| z.im.abs() > 1e-10) {
            return None;
        }
        Self::new(r[0].re, r[1].re, r[2].re).ok()
    }
}

/// The triplet basis `|00>`, `|phi+>`, `|11>` on labels `[1, 2]`.
pub fn triplet_basis() -> [StateVector; 3] {
    let h = FRAC_1_SQRT_2;
    [
        StateVector::basis(vec![1, 2], 0).expect("basis"),
        StateVector::from_real(vec![1, 2], &[0.0, h, h, 0.0]).expect("phi+"),
        StateVector::basis(vec![1, 2], 3).expect("basis"),
    ]
}

/// `(|01> - |10>)/sqrt 2`, the state excluded by the triplet restriction.
pub fn singlet() -> StateVector {
    StateVector::from_real(vec![1, 2], &[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("singlet")
}

/// Longitudinal-field ground state of the two-spin chain with no transverse
/// field.
#[derive(Clone, Debug)]
pub struct AnalyticGround {
    pub state: StateVector,
    /// Set exactly at the critical fields `bz = +-1`.
    pub degenerate: bool,
}

/// Piecewise ground state: `|00>` below `-1`, `|phi+>` on `[-1, 1]`, `|11>`
/// above `1`. At `|bz| = 1` the mid-phase state is returned with the
/// degeneracy flag set.
pub fn ground_state_analytic(bz: f64) -> AnalyticGround {
    let [zero, phi, one] = triplet_basis();
    let state = if bz < -1.0 {
        zero
    } else if bz > 1.0 {
        one
    } else {
        phi
    };
    AnalyticGround { state, degenerate: bz.abs() == 1.0 }
}

/// Subspace searched by [`ground_state_numeric`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Full,
    /// Symmetric two-spin subspace; `n = 2` without probe only.
    Triplet,
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub state: StateVector,
    pub energy: f64,
    /// Distance to the next level in the searched sector.
    pub gap: f64,
    pub degenerate: bool,
    /// Present for two-spin states that lie in the triplet.
    pub triplet: Option<TripletAmplitudes>,
    /// Full-sector, two-spin only: the absolute ground state is the singlet.
    pub singlet_ground: bool,
}

/// Lowest eigenvector of the transverse Hamiltonian in the requested sector.
pub fn ground_state_numeric(spec: &ChainSpec, sector: Sector) -> Result<GroundState> {
    let h = hamiltonian_transverse(spec)?;
    match sector {
        Sector::Full => {
            let e = eigh(&h)?;
            let state = e.ground();
            let two_spin = spec.n == 2 && !spec.with_probe;
            let singlet_ground =
                two_spin && overlap(&state, &singlet())? > 0.5;
            let triplet = if two_spin { TripletAmplitudes::from_state(&state) } else { None };
            Ok(GroundState {
                state,
                energy: e.values[0],
                gap: e.gap(),
                degenerate: e.gap() < DEGENERACY_GAP,
                triplet,
                singlet_ground,
            })
        }
        Sector::Triplet => {
            if spec.n != 2 || spec.with_probe {
                return Err(Error::domain("triplet sector is defined for two system spins without probe"));
            }
            let basis = triplet_basis();
            let hv: Vec<Vec<C64>> =
                basis.iter().map(|b| h.apply_raw(b.amplitudes())).collect::<Result<_>>()?;
            let mut m = vec![C64::new(0.0, 0.0); 9];
            for i in 0..3 {
                for j in 0..3 {
                    m[i * 3 + j] = basis[i].amplitudes().iter().zip(&hv[j]).map(|(a, b)| a.conj() * b).sum();
                }
            }
            let (values, vecs) = eigh_raw(3, &m)?;
            let amps = TripletAmplitudes::new(vecs[0].re, vecs[3].re, vecs[6].re)?;
            let gap = values[1] - values[0];
            Ok(GroundState {
                state: amps.state(),
                energy: values[0],
                gap,
                degenerate: gap < DEGENERACY_GAP,
                triplet: Some(amps),
                singlet_ground: false,
            })
        }
    }
}

/// Mixing angle of the avoided-crossing ground state,
/// `-cos(phi/2)|ll> + sin(phi/2)|phi+>`, in `[0, pi]`.
///
/// Satisfies `tan(phi) = sqrt2 bx / (|bz| - 1)`, with the branch fixed so that
/// `phi -> pi` (pure `|phi+>`) inside the mid phase as `bx -> 0` and
/// `phi = pi/2` at `|bz| = 1`.
pub fn mixing_angle(bz: f64, bx: f64) -> Result<f64> {
    if !(bz.is_finite() && bx.is_finite()) || bx < 0.0 {
        return Err(Error::domain("mixing angle needs finite bz and bx >= 0"));
    }
    if bx == 0.0 && bz.abs() == 1.0 {
        return Err(Error::Degenerate(format!("mixing angle undefined at bx = 0, bz = {bz}")));
    }
    Ok((SQRT_2 * bx).atan2(bz.abs() - 1.0))
}

/// `|d phi / d|bz|| = sqrt2 bx / (2 bx^2 + (1 - |bz|)^2)`.
pub fn sensitivity(bz: f64, bx: f64) -> Result<f64> {
    if !(bz.is_finite() && bx.is_finite()) || bx <= 0.0 {
        return Err(Error::domain("sensitivity needs finite bz and bx > 0"));
    }
    let d = 1.0 - bz.abs();
    Ok(SQRT_2 * bx / (2.0 * bx * bx + d * d))
}

/// Two-level model spanned by `|ll>` and `|phi+>` near `|bz| = 1`, where
/// `|ll>` is `|11>` for `bz >= 0` and `|00>` otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveTwoLevel {
    pub bz: f64,
    pub bx: f64,
    pub splitting_gap: f64,
    pub phi: f64,
}

impl EffectiveTwoLevel {
    pub fn new(bz: f64, bx: f64) -> Result<Self> {
        let phi = mixing_angle(bz, bx)?;
        let d = 1.0 - bz.abs();
        let splitting_gap = 2.0 * (d * d + 2.0 * bx * bx).sqrt();
        Ok(EffectiveTwoLevel { bz, bx, splitting_gap, phi })
    }

    /// `-|bz| 1 + (1 - |bz|) sigma_z + sqrt2 bx sigma_x` in the basis
    /// `(|ll>, |phi+>)`, on a single pseudo-qubit label.
    pub fn hamiltonian(&self) -> DenseOperator {
        let a = self.bz.abs();
        let d = 1.0 - a;
        let b = SQRT_2 * self.bx;
        DenseOperator::from_real(vec![1], &[-a + d, b, b, -a - d])
            .and_then(DenseOperator::into_hermitian)
            .expect("2x2 real symmetric")
    }

    /// Ground state of [`Self::hamiltonian`] embedded in the two-spin space.
    pub fn ground_embedded(&self) -> Result<StateVector> {
        let g = eigh(&self.hamiltonian())?.ground();
        let (ll, phi) = (g.amplitudes()[0].re, g.amplitudes()[1].re);
        let amps = if self.bz >= 0.0 {
            TripletAmplitudes { c0: 0.0, c_plus: phi, c1: ll }
        } else {
            TripletAmplitudes { c0: ll, c_plus: phi, c1: 0.0 }
        };
        Ok(amps.state())
    }

    /// The closed form `-cos(phi/2)|ll> + sin(phi/2)|phi+>`.
    pub fn ground_closed_form(&self) -> StateVector {
        let (s, c) = (self.phi / 2.0).sin_cos();
        let amps = if self.bz >= 0.0 {
            TripletAmplitudes { c0: 0.0, c_plus: s, c1: -c }
        } else {
            TripletAmplitudes { c0: -c, c_plus: s, c1: 0.0 }
        };
        amps.state()
    }
}

const DENSITY_TOL: f64 = 1e-10;

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)` of a two-qubit density
/// matrix, where `l_i` are the descending square roots of the eigenvalues of
/// `rho (Y(x)Y) rho* (Y(x)Y)`.
///
/// Those eigenvalues are taken from the Hermitian form
/// `sqrt(rho) rho~ sqrt(rho)`, which has the same spectrum.
pub fn concurrence(rho: &DenseOperator) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let deviation = rho.hermitian_deviation();
    if deviation > DENSITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let rho = rho.clone().into_hermitian().or_else(|_| symmetrized(rho))?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::domain(format!("density matrix trace {tr} != 1")));
    }
    let e = eigh(&rho)?;
    if e.values[0] < -DENSITY_TOL {
        return Err(Error::domain(format!("density matrix has negative eigenvalue {}", e.values[0])));
    }
    let labels = rho.labels().to_vec();
    let yy = DenseOperator::pauli_string(&labels, &[(labels[0], Pauli::Y), (labels[1], Pauli::Y)])?;
    let flipped = yy.matmul(&rho.conj())?.matmul(&yy)?;
    let sqrt_rho = Eigen {
        values: e.values.iter().map(|&l| l.max(0.0).sqrt()).collect(),
        vectors: e.vectors.clone(),
    }
    .reconstruct();
    let m = sqrt_rho.matmul(&flipped)?.matmul(&sqrt_rho)?;
    let m = symmetrized(&m)?;
    let mut l: Vec<f64> = eigh(&m)?.values.iter().map(|&mu| mu.max(0.0).sqrt()).collect();
    l.reverse();
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

fn symmetrized(a: &DenseOperator) -> Result<DenseOperator> {
    a.add_scaled(&a.adjoint(), 1.0)?.scaled(C64::new(0.5, 0.0)).into_hermitian()
}

/// Concurrence of a pure two-qubit state.
pub fn concurrence_of_state(psi: &StateVector) -> Result<f64> {
    let rho = psi.partial_trace(psi.labels())?;
    concurrence(&rho)
}

/// All eigenvalues of the transverse Hamiltonian, ascending.
pub fn spectrum(spec: &ChainSpec) -> Result<Vec<f64>> {
    Ok(eigh(&hamiltonian_transverse(spec)?)?.values)
}
