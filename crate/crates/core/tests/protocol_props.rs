mod common;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qpt_probe::exec::Execution;
use qpt_probe::linalg::{eigh, StateVector};
use qpt_probe::probe_protocol::{
    build_network_state, initial_ground_state, overlap_avoided, overlap_level_crossing, probe_readout,
    split_evolution, trotter_fidelity, trotter_propagator_full, Method, ProtocolRun,
};
use qpt_probe::spin_model::ChainSpec;

fn grid(steps: usize) -> Vec<f64> {
    (0..steps).map(|i| -2.0 + 4.0 * i as f64 / (steps - 1) as f64).collect()
}

fn run(bz: f64, bx: f64, eps: f64, tau: f64, method: Method) -> ProtocolRun {
    ProtocolRun::new(ChainSpec::pair(bz).with_bx(bx).with_probe(eps), tau, method)
}

fn start_state(r: &ProtocolRun) -> Vec<C64> {
    StateVector::plus(0)
        .tensor(&initial_ground_state(&r.spec).unwrap().0)
        .unwrap()
        .amplitudes()
        .to_vec()
}

#[test]
fn readout_identity_on_network_states() {
    for bz in grid(81) {
        for eps in [0.1, 0.2, 0.3] {
            let r = probe_readout(&build_network_state(bz, eps).unwrap()).unwrap();
            assert!((r.l_probe - r.l_direct).abs() < 1e-10);
            assert!((r.l_direct - overlap_level_crossing(bz, eps).unwrap().value).abs() < 1e-12);
        }
    }
}

#[test]
fn overlap_is_symmetric_in_bz() {
    // mirror points are exact negations so both sides see the same fields
    let g = grid(81);
    let mirrored: Vec<f64> = g.iter().map(|x| -x).collect();
    for (&a, &b) in g.iter().zip(&mirrored) {
        assert_eq!(overlap_level_crossing(a, 0.2).unwrap().value, overlap_level_crossing(b, 0.2).unwrap().value);
    }
    for method in [Method::Exact, Method::Trotter] {
        let r = run(0.0, 0.1, 0.2, 1.6, method);
        let l = overlap_avoided(&r, &g, Execution::Sequential).unwrap();
        let m = overlap_avoided(&r, &mirrored, Execution::Sequential).unwrap();
        for (p, q) in l.iter().zip(&m) {
            assert!((p.l - q.l).abs() < 1e-10, "{method:?} at {}", p.bz);
        }
    }
}

/// The experimental parameter set: bx = 0.1, eps in {0.2, 0.3}, tau = 1.6,
/// 81 points over [-2, 2].
#[test]
fn trotter_fidelity_meets_experimental_bound() {
    let mut worst = (1.0f64, 0.0, 0.0);
    for eps in [0.2, 0.3] {
        for bz in grid(81) {
            let f = trotter_fidelity(&run(bz, 0.1, eps, 1.6, Method::Trotter)).unwrap();
            if f.worst_state() < worst.0 {
                worst = (f.worst_state(), eps, bz);
            }
        }
    }
    assert!(worst.0 >= 0.986, "branch fidelity {:.5} at eps {}, bz {}", worst.0, worst.1, worst.2);
}

#[test]
fn dip_deepens_with_coupling() {
    for bz in [-1.0, 1.0] {
        let depth: Vec<f64> = [0.1, 0.2, 0.3]
            .iter()
            .map(|&eps| {
                let l = overlap_avoided(&run(0.0, 0.1, eps, 1.6, Method::Exact), &[bz], Execution::Sequential).unwrap();
                1.0 - l[0].l
            })
            .collect();
        assert!(depth[0] < depth[1] && depth[1] < depth[2], "{depth:?}");
    }
}

#[test]
fn exact_branches_match_taylor_oracle() {
    for (bz, bx, eps) in [(1.0, 0.1, 0.2), (-0.4, 0.3, 0.3), (1.8, 0.05, 0.1)] {
        let r = run(bz, bx, eps, 1.6, Method::Exact);
        let (plus, minus) = split_evolution(&r).unwrap();
        let u = common::expm_taylor(&common::ising(2, bz, bx, Some(eps)), 1.6);
        let out = common::matvec(&u, &start_state(&r));
        let s = std::f64::consts::SQRT_2;
        for (k, branch) in [plus, minus].iter().enumerate() {
            let err = branch
                .amplitudes()
                .iter()
                .zip(&out[4 * k..4 * k + 4])
                .map(|(a, b)| (a - b * s).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "bz {bz}: branch {k} err {err:e}");
        }
    }
}

/// `exp(-i tau H_x/2) exp(-i tau H_diag) exp(-i tau H_x/2)`, where the
/// diagonal terms commute among themselves so their order is immaterial.
fn reference_product(n: usize, bz: f64, bx: f64, eps: f64, tau: f64) -> common::Mat {
    let full = common::ising(n, bz, bx, Some(eps));
    let diag = common::ising(n, bz, 0.0, Some(eps));
    let x: common::Mat = full
        .iter()
        .zip(&diag)
        .map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q) * 0.5).collect())
        .collect();
    let half = common::expm_taylor(&x, tau);
    common::matmul(&half, &common::matmul(&common::expm_taylor(&diag, tau), &half))
}

#[test]
fn product_formula_matches_reference() {
    for (n, bz, bx, eps) in [(2, 1.0, 0.1, 0.2), (2, -0.3, 0.4, 0.3), (3, 0.7, 0.2, 0.15)] {
        let r = ProtocolRun::new(ChainSpec::pair(bz).with_n(n).with_bx(bx).with_probe(eps), 1.6, Method::Trotter);
        let got = trotter_propagator_full(&r).unwrap();
        let want = reference_product(n, bz, bx, eps, 1.6);
        let err = common::max_diff(&common::from_rows(got.data(), got.dim()), &want);
        assert!(err < 1e-10, "n {n}: {err:e}");
    }
}

#[test]
fn product_formula_error_is_third_order() {
    let (bz, bx, eps) = (0.5, 0.3, 0.2);
    let taus = [0.02, 0.04, 0.08];
    let err: Vec<f64> = taus
        .iter()
        .map(|&tau| {
            let (p_e, _) = split_evolution(&run(bz, bx, eps, tau, Method::Exact)).unwrap();
            let (p_t, _) = split_evolution(&run(bz, bx, eps, tau, Method::Trotter)).unwrap();
            p_e.distance(&p_t)
        })
        .collect();
    for w in 0..2 {
        let slope = (err[w + 1] / err[w]).ln() / (taus[w + 1] / taus[w]).ln();
        assert!((slope - 3.0).abs() < 0.1, "slope {slope} from {err:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn probe_state_is_valid(bz in -2.0f64..2.0, bx in 0.0f64..0.5, eps in 0.0f64..0.5, tau in 0.0f64..4.0, trotter in any::<bool>()) {
        let method = if trotter { Method::Trotter } else { Method::Exact };
        let r = run(bz, bx, eps, tau, method);
        let (plus, minus) = split_evolution(&r).unwrap();
        let psi = qpt_probe::probe_protocol::branch_superposition(&plus, &minus).unwrap();
        let rho = probe_readout(&psi).unwrap().probe_rho;
        prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-10);
        for v in eigh(&rho).unwrap().values {
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&v));
        }
        let readout = probe_readout(&psi).unwrap();
        prop_assert!((readout.l_probe - readout.l_direct).abs() < 1e-10);
    }
}
