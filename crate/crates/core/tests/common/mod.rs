//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's numerics.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64 as C64;
use rand::Rng;

pub type Mat = Vec<Vec<C64>>;

pub fn zeros(n: usize) -> Mat {
    vec![vec![C64::new(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn matvec(a: &Mat, v: &[C64]) -> Vec<C64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn from_rows(rows: &[C64], n: usize) -> Mat {
    rows.chunks(n).map(|r| r.to_vec()).collect()
}

pub fn flatten(m: &Mat) -> Vec<C64> {
    m.iter().flatten().copied().collect()
}

/// Transverse Ising Hamiltonian of an open `n`-spin chain, built element by
/// element from the bit pattern (qubit 0 is the most significant bit; spin up
/// is bit 0). When `probe_eps` is set, qubit 0 is an extra probe coupled by
/// `eps sz0 szi` to every chain spin and the chain occupies qubits `1..`.
pub fn ising(n: usize, bz: f64, bx: f64, probe_eps: Option<f64>) -> Mat {
    let offset = usize::from(probe_eps.is_some());
    let total = n + offset;
    let dim = 1usize << total;
    let z = |idx: usize, q: usize| if (idx >> (total - 1 - q)) & 1 == 0 { 1.0 } else { -1.0 };
    let mut h = zeros(dim);
    for (idx, row) in h.iter_mut().enumerate() {
        let sys: Vec<f64> = (0..n).map(|i| z(idx, i + offset)).collect();
        let mut d: f64 = sys.windows(2).map(|w| w[0] * w[1]).sum();
        d += bz * sys.iter().sum::<f64>();
        if let Some(eps) = probe_eps {
            d += eps * z(idx, 0) * sys.iter().sum::<f64>();
        }
        row[idx] += C64::new(d, 0.0);
        for i in 0..n {
            let flipped = idx ^ (1 << (total - 1 - (i + offset)));
            row[flipped] += C64::new(bx, 0.0);
        }
    }
    h
}

/// `exp(-i h t)` by Taylor series with scaling and squaring.
pub fn expm_taylor(h: &Mat, t: f64) -> Mat {
    let n = h.len();
    let norm: f64 = h.iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max) * t.abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = t / f64::from(1u32 << squarings);
    let a: Mat = h.iter().map(|r| r.iter().map(|&z| z * C64::new(0.0, -scale)).collect()).collect();
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..40 {
        term = matmul(&term, &a);
        let inv = 1.0 / k as f64;
        term.iter_mut().flatten().for_each(|z| *z *= inv);
        sum.iter_mut().flatten().zip(term.iter().flatten()).for_each(|(s, t)| *s += t);
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> Mat {
    let mut m = zeros(n);
    for i in 0..n {
        m[i][i] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[i][j] = z;
            m[j][i] = z.conj();
        }
    }
    m
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random mixed state `A A^dag / tr`, of rank `rank`.
pub fn random_density(rng: &mut impl Rng, n: usize, rank: usize) -> Mat {
    let cols: Vec<Vec<C64>> = (0..rank).map(|_| random_state(rng, n)).collect();
    let w: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut rho = zeros(n);
    for (c, &wk) in cols.iter().zip(&w) {
        for i in 0..n {
            for j in 0..n {
                rho[i][j] += c[i] * c[j].conj() * (wk / total);
            }
        }
    }
    rho
}

/// Phase of the zero-transverse-field two-spin ground state: -1 for `|00>`
/// (below -1), 0 for `|phi+>`, +1 for `|11>`.
pub fn phase_of(bz: f64) -> i32 {
    if bz < -1.0 {
        -1
    } else if bz > 1.0 {
        1
    } else {
        0
    }
}

/// Expected level-crossing overlap: unity when both effective fields share a
/// phase, zero otherwise.
pub fn level_crossing_oracle(bz: f64, eps: f64) -> f64 {
    if phase_of(bz + eps) == phase_of(bz - eps) {
        1.0
    } else {
        0.0
    }
}

/// `sqrt2 bx / (2 bx^2 + (1 - |bz|)^2)`.
pub fn lorentzian(bz: f64, bx: f64) -> f64 {
    let d = 1.0 - bz.abs();
    std::f64::consts::SQRT_2 * bx / (2.0 * bx * bx + d * d)
}

/// Hermitian 3x3 eigenvalues via the trigonometric closed form.
pub fn sym3_eigenvalues(m: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..3).map(|j| (m[i][j] - if i == j { q } else { 0.0 }) / p).collect())
        .collect();
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let mut e = [e3, 3.0 * q - e1 - e3, e1];
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

/// Triplet-sector matrix of the two-spin Hamiltonian in the basis
/// `|00>, (|01>+|10>)/sqrt2, |11>`, written out by hand.
pub fn triplet_matrix(bz: f64, bx: f64) -> [[f64; 3]; 3] {
    let b = std::f64::consts::SQRT_2 * bx;
    [[1.0 + 2.0 * bz, b, 0.0], [b, -1.0, b], [0.0, b, 1.0 - 2.0 * bz]]
}
