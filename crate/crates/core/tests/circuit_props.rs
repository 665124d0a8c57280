mod common;

use proptest::prelude::*;

use qpt_probe::circuit::{
    build_ac_circuit, build_lc_network, parse_circuit, prep_angles, run_circuit, write_circuit, Circuit, Gate,
};
use qpt_probe::linalg::{overlap, DenseOperator, Pauli, StateVector};
use qpt_probe::probe_protocol::{build_network_state, probe_readout, split_evolution, Method, ProtocolRun};
use qpt_probe::spin_model::{ground_state_numeric, ChainSpec, Sector, TripletAmplitudes};

fn zero() -> StateVector {
    StateVector::basis(vec![0, 1, 2], 0).unwrap()
}

#[test]
fn lc_network_reproduces_network_state() {
    for k in 0..41 {
        let bz = -2.0 + 4.0 * k as f64 / 40.0;
        let out = run_circuit(&build_lc_network(bz, 0.2).unwrap(), &zero()).unwrap();
        assert!(overlap(&out, &build_network_state(bz, 0.2).unwrap()).unwrap() > 1.0 - 1e-10);
    }
}

#[test]
fn ac_readout_matches_protocol() {
    let run = ProtocolRun::new(ChainSpec::pair(1.0).with_bx(0.1).with_probe(0.2), 1.6, Method::Trotter);
    let out = run_circuit(&build_ac_circuit(&run).unwrap(), &zero()).unwrap();
    let (a, b) = split_evolution(&run).unwrap();
    assert!((probe_readout(&out).unwrap().l_probe - overlap(&a, &b).unwrap()).abs() < 1e-12);
}

#[test]
fn ac_gate_count() {
    let run = ProtocolRun::new(ChainSpec::pair(0.2).with_bx(0.1).with_probe(0.2), 1.6, Method::Trotter);
    let c = build_ac_circuit(&run).unwrap();
    let evolution = c.sections().iter().filter(|(name, _)| name != "preparation").count();
    assert_eq!(evolution, 6);
}

#[test]
fn prep_angle_identities_hold() {
    let s2 = std::f64::consts::SQRT_2;
    for bz in [1.0, 0.8, -1.1, 0.3] {
        let c = ground_state_numeric(&ChainSpec::pair(bz).with_bx(0.1), Sector::Triplet).unwrap().triplet.unwrap();
        let a = prep_angles(&c);
        assert!(((a.alpha / 2.0).tan() * c.c_plus + s2 * c.c1).abs() < 1e-10);
        assert!(((a.beta / 2.0).tan() * s2 * c.c0 + c.c_plus).abs() < 1e-10);
    }
    let sat = prep_angles(&TripletAmplitudes { c0: 1.0, c_plus: 0.0, c1: 0.0 });
    assert!(sat.alpha_saturated);
}

#[derive(Debug, Clone)]
enum G {
    H(usize),
    X(usize, f64),
    Y(usize, f64),
    Z(usize, f64),
    Zz(usize, usize, f64),
}

fn gate_strategy() -> impl Strategy<Value = G> {
    let q = 0usize..3;
    let a = -3.0f64..3.0;
    prop_oneof![
        q.clone().prop_map(G::H),
        (q.clone(), a.clone()).prop_map(|(t, x)| G::X(t, x)),
        (q.clone(), a.clone()).prop_map(|(t, x)| G::Y(t, x)),
        (q.clone(), a.clone()).prop_map(|(t, x)| G::Z(t, x)),
        (q.clone(), 1usize..3, a).prop_map(|(t, d, x)| G::Zz(t, (t + d) % 3, x)),
    ]
}

/// Reference gate matrix on the whole register from Pauli strings:
/// `exp(-i theta P) = cos(theta) I - i sin(theta) P` for any Pauli string `P`.
fn reference(g: &G) -> DenseOperator {
    let reg = [0, 1, 2];
    let rot = |terms: &[(usize, Pauli)], theta: f64| {
        let p = DenseOperator::pauli_string(&reg, terms).unwrap();
        let i = DenseOperator::identity(reg.to_vec()).unwrap();
        i.scaled(theta.cos().into())
            .add_scaled(&p.scaled(qpt_probe::linalg::C64::new(0.0, -theta.sin())), 1.0)
            .unwrap()
    };
    match *g {
        G::H(t) => DenseOperator::pauli_string(&reg, &[(t, Pauli::X)])
            .unwrap()
            .add_scaled(&DenseOperator::pauli_string(&reg, &[(t, Pauli::Z)]).unwrap(), 1.0)
            .unwrap()
            .scaled(std::f64::consts::FRAC_1_SQRT_2.into()),
        G::X(t, a) => rot(&[(t, Pauli::X)], a),
        G::Y(t, a) => rot(&[(t, Pauli::Y)], a),
        G::Z(t, a) => rot(&[(t, Pauli::Z)], a),
        G::Zz(s, t, a) => rot(&[(s, Pauli::Z), (t, Pauli::Z)], a),
    }
}

fn to_gate(g: &G) -> Gate {
    match *g {
        G::H(target) => Gate::WalshHadamard { target },
        G::X(target, angle) => Gate::RotX { target, angle },
        G::Y(target, angle) => Gate::RotY { target, angle },
        G::Z(target, angle) => Gate::RotZ { target, angle },
        G::Zz(a, b, angle) => Gate::ZZ { a, b, angle },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gate_product_equals_operator_product(gates in prop::collection::vec(gate_strategy(), 0..12)) {
        let mut c = Circuit::new(vec![0, 1, 2]).unwrap();
        let mut want = DenseOperator::identity(vec![0, 1, 2]).unwrap();
        for g in &gates {
            c.push(to_gate(g)).unwrap();
            want = reference(g).matmul(&want).unwrap();
        }
        let got = c.unitary().unwrap();
        prop_assert!(got.max_abs_diff(&want) < 1e-10);
        for g in c.gates() {
            prop_assert!(g.matrix().unwrap().unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn text_round_trip_within_angle_precision(gates in prop::collection::vec(gate_strategy(), 1..12)) {
        let mut c = Circuit::new(vec![0, 1, 2]).unwrap();
        for g in &gates {
            c.push(to_gate(g)).unwrap();
        }
        let back = parse_circuit(&write_circuit(&c)).unwrap();
        prop_assert_eq!(back.len(), c.len());
        // angles carry 12 significant digits
        prop_assert!(back.unitary().unwrap().max_abs_diff(&c.unitary().unwrap()) < 1e-10);
        prop_assert_eq!(write_circuit(&back), write_circuit(&c));
    }
}
