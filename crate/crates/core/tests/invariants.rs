//! Property tests for invariants that must hold for every input.

use proptest::prelude::*;
use qcoherence::channels::{random_cptp_channel, random_incoherent_channel, selective_measure};
use qcoherence::entropy::{f_q, t_q_operator};
use qcoherence::linalg::eigh;
use qcoherence::measures::{c_q, c_q_max, l1_coherence, Measure};
use qcoherence::sampling::{random_unitary, trial_rng};
use qcoherence::states::random_density;
use qcoherence::{CMatrix, Complex64, DensityMatrix, EntropyParam, OptimizerConfig};

fn assert_density(rho: &DensityMatrix) -> Result<(), TestCaseError> {
    let s = eigh(rho.hermitian()).unwrap();
    prop_assert!((rho.hermitian().trace_real() - 1.0).abs() < 1e-10);
    prop_assert!(s.min() > -1e-12, "negative eigenvalue {}", s.min());
    Ok(())
}

fn quick() -> OptimizerConfig {
    OptimizerConfig { restarts: 3, ..OptimizerConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn channels_map_states_to_states(d in 2usize..=4, rank in 1usize..=4, env in 1usize..=3, seed in any::<u64>()) {
        let rho = random_density(d, rank.min(d), seed).unwrap();
        let incoherent = random_incoherent_channel(d, env, seed ^ 1).unwrap();
        let general = random_cptp_channel(d, env, seed ^ 2).unwrap();
        assert_density(&incoherent.apply(&rho).unwrap())?;
        assert_density(&general.apply(&rho).unwrap())?;
        let ens = selective_measure(&incoherent, &rho).unwrap();
        let total: f64 = ens.branches().iter().map(|(p, _)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for (_, branch) in ens.branches() {
            assert_density(branch)?;
        }
    }

    #[test]
    fn t_q_is_homogeneous(d in 2usize..=4, q in 0.05f64..0.95, alpha in 0.1f64..5.0, seed in any::<u64>()) {
        let q = EntropyParam::new(q).unwrap();
        let rho = random_density(d, d, seed).unwrap();
        let sigma = random_density(d, d, seed.wrapping_add(1)).unwrap();
        let lhs = t_q_operator(&rho.hermitian().scale(alpha), &sigma.hermitian().scale(alpha), q).unwrap();
        let rhs = t_q_operator(&rho, &sigma, q).unwrap().scale(alpha);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9 * alpha.max(1.0));
    }

    #[test]
    fn t_q_is_unitarily_covariant(d in 2usize..=4, q in 0.05f64..0.95, seed in any::<u64>()) {
        let q = EntropyParam::new(q).unwrap();
        let rho = random_density(d, d, seed).unwrap();
        let sigma = random_density(d, d, seed.wrapping_add(1)).unwrap();
        let u = random_unitary(d, &mut trial_rng(seed, 7));
        let lhs = t_q_operator(
            &rho.hermitian().congruence(&u).unwrap(),
            &sigma.hermitian().congruence(&u).unwrap(),
            q,
        )
        .unwrap();
        let rhs = t_q_operator(&rho, &sigma, q).unwrap().congruence(&u).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn f_q_is_at_most_one(d in 2usize..=4, rank in 1usize..=4, q in 0.05f64..0.95, seed in any::<u64>()) {
        let q = EntropyParam::new(q).unwrap();
        let rho = random_density(d, rank.min(d), seed).unwrap();
        let sigma = random_density(d, d, seed.wrapping_add(1)).unwrap();
        let f = f_q(&rho, &sigma, q).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f), "f = {f}");
        prop_assert!((f_q(&rho, &rho, q).unwrap() - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn c_q_lies_between_zero_and_the_maximum(d in 2usize..=4, rank in 1usize..=4, q in 0.05f64..0.95, seed in any::<u64>()) {
        let q = EntropyParam::measure(q).unwrap();
        let rho = random_density(d, rank.min(d), seed).unwrap();
        let v = c_q(&rho, q, &quick()).unwrap().value;
        prop_assert!(v >= 0.0);
        prop_assert!(v <= c_q_max(d, q).unwrap() + 1e-8, "{v} above maximum");
    }

    #[test]
    fn measures_ignore_diagonal_phases(d in 2usize..=3, q in 0.1f64..0.9, seed in any::<u64>(), phases in proptest::collection::vec(0.0f64..6.3, 3)) {
        let rho = random_density(d, d, seed).unwrap();
        let diag: Vec<Complex64> = phases[..d].iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let u = CMatrix::from_diagonal(&diag);
        let rotated = DensityMatrix::new(rho.hermitian().congruence(&u).unwrap()).unwrap();
        for m in [Measure::Cq, Measure::Cg, Measure::L1, Measure::RelEnt] {
            let a = m.evaluate(&rho, q, &quick()).unwrap().value;
            let b = m.evaluate(&rotated, q, &quick()).unwrap().value;
            prop_assert!((a - b).abs() < 1e-8, "{m}: {a} vs {b}");
        }
    }

    #[test]
    fn incoherent_states_have_zero_coherence(d in 2usize..=4, q in 0.1f64..0.9, seed in any::<u64>()) {
        let rho = random_density(d, d, seed).unwrap().dephase().to_density();
        prop_assert_eq!(l1_coherence(&rho), 0.0);
        prop_assert!(c_q(&rho, EntropyParam::measure(q).unwrap(), &quick()).unwrap().value < 1e-8);
    }

    #[test]
    fn state_files_round_trip(d in 1usize..=5, seed in any::<u64>()) {
        let rho = random_density(d, d, seed).unwrap();
        let back = DensityMatrix::from_json_str(&rho.to_json_string()).unwrap();
        prop_assert_eq!(back.matrix().as_slice(), rho.matrix().as_slice());
    }
}
