mod common;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpt_probe::linalg::{kron, overlap, DenseOperator, StateVector};
use qpt_probe::spin_model::{
    concurrence, concurrence_of_state, ground_state_analytic, ground_state_numeric, mixing_angle, spectrum,
    ChainSpec, EffectiveTwoLevel, Sector,
};

#[test]
fn numeric_ground_state_follows_phase_diagram() {
    for k in 0..401 {
        let bz = -2.0 + 4.0 * k as f64 / 400.0;
        if bz.abs() == 1.0 {
            continue;
        }
        let numeric = ground_state_numeric(&ChainSpec::pair(bz), Sector::Triplet).unwrap();
        let analytic = ground_state_analytic(bz);
        let o = overlap(&numeric.state, &analytic.state).unwrap();
        assert!(o > 1.0 - 1e-10, "bz {bz}: overlap {o}");
        assert!(!analytic.degenerate);
    }
}

#[test]
fn critical_fields_are_degenerate() {
    for bz in [-1.0, 1.0] {
        let e = spectrum(&ChainSpec::pair(bz)).unwrap();
        assert!((e[1] - e[0]).abs() < 1e-12);
        assert!(ground_state_analytic(bz).degenerate);
    }
}

#[test]
// the trigonometric closed form is ill-conditioned at repeated roots, so
// the cases avoid them
fn triplet_levels_match_closed_form() {
    for (bz, bx) in [(1.0, 0.1), (0.3, 0.25), (-1.7, 0.05), (0.0, 0.2)] {
        let g = ground_state_numeric(&ChainSpec::pair(bz).with_bx(bx), Sector::Triplet).unwrap();
        let e = common::sym3_eigenvalues(common::triplet_matrix(bz, bx));
        assert!((g.energy - e[0]).abs() < 1e-12);
        assert!((g.gap - (e[1] - e[0])).abs() < 1e-12);
    }
}

#[test]
fn effective_two_level_tracks_full_ground_state() {
    let bx = 0.1;
    for k in 0..=100 {
        let a = 0.5 + k as f64 / 100.0;
        for bz in [a, -a] {
            let full = ground_state_numeric(&ChainSpec::pair(bz).with_bx(bx), Sector::Full).unwrap();
            let eff = EffectiveTwoLevel::new(bz, bx).unwrap();
            let o = overlap(&full.state, &eff.ground_embedded().unwrap()).unwrap();
            assert!(o > 0.99, "bz {bz}: overlap {o}");
            let closed = overlap(&eff.ground_closed_form(), &eff.ground_embedded().unwrap()).unwrap();
            assert!(closed > 1.0 - 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn mixing_angle_derivative_is_the_lorentzian(a in 0.05f64..2.0, negative in any::<bool>(), bx in 0.05f64..0.3) {
        let bz = if negative { -a } else { a };
        let h = 1e-5 * a.min(1.0);
        let s = bz.signum();
        let fd = (mixing_angle(bz + s * h, bx).unwrap() - mixing_angle(bz - s * h, bx).unwrap()) / (2.0 * h);
        let want = common::lorentzian(bz, bx);
        prop_assert!((fd.abs() - want).abs() / want < 1e-4, "fd {} vs {}", fd, want);
    }
}

fn op2(m: &common::Mat) -> DenseOperator {
    DenseOperator::new(vec![1, 2], common::flatten(m)).unwrap()
}

#[test]
fn concurrence_bounded_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for k in 0..1000 {
        let rho = common::random_density(&mut rng, 4, 1 + k % 4);
        let c = concurrence(&op2(&rho)).unwrap();
        assert!((0.0..=1.0).contains(&c), "C = {c}");
    }
}

#[test]
fn concurrence_of_pure_states_matches_determinant_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..200 {
        let v = common::random_state(&mut rng, 4);
        let want = 2.0 * (v[0] * v[3] - v[1] * v[2]).norm();
        let got = concurrence_of_state(&StateVector::new(vec![1, 2], v).unwrap()).unwrap();
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }
}

#[test]
fn concurrence_vanishes_on_product_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let rank = 1 + k % 2;
        let a = DenseOperator::new(vec![1], common::flatten(&common::random_density(&mut rng, 2, rank))).unwrap();
        let b = DenseOperator::new(vec![2], common::flatten(&common::random_density(&mut rng, 2, rank))).unwrap();
        worst = worst.max(concurrence(&kron(&a, &b).unwrap()).unwrap());
    }
    // square roots of round-off-sized eigenvalues leave residues near 1e-8
    assert!(worst < 1e-7, "max C on product states {worst:e}");
}

#[test]
fn concurrence_of_known_states() {
    let bell = StateVector::from_real(vec![1, 2], &[0.0, 1.0, 1.0, 0.0]).unwrap();
    assert!((concurrence_of_state(&bell).unwrap() - 1.0).abs() < 1e-7);
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let p: f64 = rng.gen_range(0.0..1.0);
    // Werner state p |bell><bell| + (1-p) I/4 has C = max(0, (3p - 1)/2)
    let mut rho = common::zeros(4);
    let b = bell.amplitudes();
    for i in 0..4 {
        for j in 0..4 {
            rho[i][j] = b[i] * b[j].conj() * p;
        }
        rho[i][i] += C64::new((1.0 - p) / 4.0, 0.0);
    }
    let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
    assert!((concurrence(&op2(&rho)).unwrap() - want).abs() < 1e-7);
}
