mod common;

use common::{cyclic_projector_ensemble, four_state_qutrit, random_ensemble, rng, unit_overlap_states};
use holevo::ensemble::{derived_ensembles, max_pairwise_distance, t_chi};
use holevo::sample::{random_pure_state, random_state};
use holevo::*;
use proptest::prelude::*;

fn h2(x: f64) -> f64 {
    binary_entropy(x).unwrap()
}

#[test]
fn approximation_inequality_on_random_cases() {
    let mut r = rng(2024);
    for case in 0..500 {
        let n = 1 + case % 8;
        let d = 2 + (case / 8) % 5;
        let e = random_ensemble(n, d, &mut r);
        let sigma = if case % 3 == 0 { random_pure_state(d, &mut r) } else { random_state(d, 1 + case % d, &mut r) };
        let eps = metric_divergence(&e, &sigma).unwrap();
        let gap = (holevo_chi(&e) - t_chi(&e, &sigma).unwrap()).abs();
        assert!(gap <= g_func(eps).unwrap() + 1e-9, "case {case}: {gap} > g({eps})");
    }
}

proptest! {
    #[test]
    fn derived_states_reassemble_the_difference(seed in any::<u64>(), n in 1usize..=6, d in 2usize..=5) {
        let mut r = rng(seed);
        let e = random_ensemble(n, d, &mut r);
        let sigma = random_state(d, d, &mut r);
        let derived = derived_ensembles(&e, &sigma).unwrap();
        prop_assume!(derived.epsilon > 0.0);
        prop_assert!((derived.epsilon - metric_divergence(&e, &sigma).unwrap()).abs() < 1e-12);
        prop_assert!((derived.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut lhs = HermitianMatrix::zeros(d);
        for (t, (plus, minus)) in derived.weights.iter().zip(derived.tau_plus.iter().zip(&derived.tau_minus)) {
            prop_assert!(DensityMatrix::new(plus.as_hermitian().clone()).is_ok());
            prop_assert!(DensityMatrix::new(minus.as_hermitian().clone()).is_ok());
            lhs.add_scaled(*t, plus).unwrap();
            lhs.add_scaled(-*t, minus).unwrap();
        }
        let rhs = average_state(&e).sub(&sigma).unwrap().scale(1.0 / derived.epsilon);
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn average_reference_gives_equal_derived_averages(seed in any::<u64>(), n in 2usize..=6, d in 2usize..=5) {
        let mut r = rng(seed);
        let e = random_ensemble(n, d, &mut r);
        let derived = derived_ensembles(&e, &average_state(&e)).unwrap();
        prop_assume!(derived.epsilon > 1e-9);
        let plus = average_state(&derived.plus().unwrap());
        let minus = average_state(&derived.minus().unwrap());
        prop_assert!(plus.sub(&minus).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn average_divergence_below_majorant(seed in any::<u64>(), n in 1usize..=8, d in 2usize..=6) {
        let e = random_ensemble(n, d, &mut rng(seed));
        let collision: f64 = e.probs().iter().map(|p| p * p).sum();
        let eps = metric_divergence(&e, &average_state(&e)).unwrap();
        prop_assert!(eps <= max_pairwise_distance(&e) * (1.0 - collision) + 1e-12);
    }

    #[test]
    fn t_chi_ignores_member_order(seed in any::<u64>(), n in 2usize..=6, d in 2usize..=4) {
        let mut r = rng(seed);
        let e = random_ensemble(n, d, &mut r);
        let sigma = random_state(d, d, &mut r);
        let shift = 1 + seed as usize % (n - 1);
        let mut probs = e.probs().to_vec();
        let mut states = e.states().to_vec();
        probs.rotate_left(shift);
        states.rotate_left(shift);
        let shuffled = DiscreteEnsemble::new(probs, states).unwrap();
        prop_assert!((t_chi(&e, &sigma).unwrap() - t_chi(&shuffled, &sigma).unwrap()).abs() < 1e-10);
        prop_assert!((holevo_chi(&e) - holevo_chi(&shuffled)).abs() < 1e-10);
    }
}

#[test]
fn average_state_examples() {
    let pair = DiscreteEnsemble::uniform(vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)]).unwrap();
    assert!(average_state(&pair).sub(&DensityMatrix::chaotic(2)).unwrap().max_abs() < 1e-15);

    let expected = DensityMatrix::diagonal(&[0.375, 0.375, 0.25]).unwrap();
    assert!(average_state(&four_state_qutrit()).sub(&expected).unwrap().max_abs() < 1e-15);

    let single = DiscreteEnsemble::new(vec![1.0], vec![random_state(3, 2, &mut rng(9))]).unwrap();
    assert!(average_state(&single).sub(&single.states()[0]).unwrap().max_abs() < 1e-15);
}

#[test]
fn chi_of_orthogonal_uniform_states_is_log_n() {
    for n in 1..7 {
        let e = cyclic_projector_ensemble(n, 1);
        assert!((holevo_chi(&e) - (n as f64).ln()).abs() < 1e-12);
    }
}

#[test]
fn chi_of_overlap_family() {
    for &(n, a) in &[(2usize, 0.3f64), (4, 0.3), (5, 0.7), (3, 1.0)] {
        let e = DiscreteEnsemble::uniform(unit_overlap_states(n, a)).unwrap();
        let x = (1.0 - 1.0 / n as f64) * a * a;
        let expected = x * ((n - 1) as f64).ln() + h2(x);
        assert!((holevo_chi(&e) - expected).abs() < 1e-10, "n={n} a={a}");
    }
}

fn orthogonal_ensemble(n: usize, delta: f64) -> DiscreteEnsemble {
    let mut probs = vec![1.0 - delta];
    probs.extend(std::iter::repeat_n(delta / n as f64, n));
    let states = (0..=n).map(|k| DensityMatrix::basis(n + 1, k)).collect();
    DiscreteEnsemble::new(probs, states).unwrap()
}

#[test]
fn chi_of_dominant_state_ensemble() {
    for &(n, delta) in &[(2usize, 0.1f64), (5, 0.3), (8, 0.05)] {
        let e = orthogonal_ensemble(n, delta);
        let expected = delta * (n as f64).ln() + h2(delta);
        assert!((holevo_chi(&e) - expected).abs() < 1e-12);
    }
}

#[test]
fn metric_divergence_examples() {
    let e = four_state_qutrit();
    assert!((metric_divergence(&e, &average_state(&e)).unwrap() - 21.0 / 32.0).abs() < 1e-12);
    let half = DensityMatrix::diagonal(&[0.5, 0.5, 0.0]).unwrap();
    assert!((metric_divergence(&e, &half).unwrap() - 5.0 / 8.0).abs() < 1e-12);

    let rho = random_state(3, 2, &mut rng(3));
    let same = DiscreteEnsemble::uniform(vec![rho.clone(), rho.clone()]).unwrap();
    assert_eq!(metric_divergence(&same, &rho).unwrap(), 0.0);
    assert!(metric_divergence(&same, &DensityMatrix::chaotic(4)).is_err());
}

#[test]
fn derived_ensembles_of_pure_states_at_chaotic_reference() {
    let mut r = rng(11);
    let d = 3;
    let states: Vec<_> = (0..4).map(|_| random_pure_state(d, &mut r)).collect();
    let e = DiscreteEnsemble::new(holevo::sample::random_probabilities(4, &mut r), states).unwrap();
    let derived = derived_ensembles(&e, &DensityMatrix::chaotic(d)).unwrap();
    for (k, &i) in derived.kept_indices.iter().enumerate() {
        let rho = &e.states()[i];
        assert!((derived.weights[k] - e.probs()[i]).abs() < 1e-12);
        assert!(derived.tau_plus[k].sub(rho).unwrap().max_abs() < 1e-10);
        let complement = HermitianMatrix::identity(d).sub(rho).unwrap().scale(1.0 / (d - 1) as f64);
        assert!(derived.tau_minus[k].sub(&complement).unwrap().max_abs() < 1e-10);
    }
}

#[test]
fn derived_ensembles_of_projector_family() {
    for &(d, k) in &[(4usize, 1usize), (4, 2), (6, 2), (6, 3)] {
        let e = cyclic_projector_ensemble(d, k);
        let derived = derived_ensembles(&e, &DensityMatrix::chaotic(d)).unwrap();
        assert!((derived.epsilon - (d - k) as f64 / d as f64).abs() < 1e-12);
        for (j, &i) in derived.kept_indices.iter().enumerate() {
            assert!((derived.weights[j] - e.probs()[i]).abs() < 1e-12);
            assert!(derived.tau_plus[j].sub(&e.states()[i]).unwrap().max_abs() < 1e-12);
        }
    }
}

#[test]
fn derived_ensembles_at_first_orthogonal_state() {
    let e = orthogonal_ensemble(4, 0.4);
    let first = e.states()[0].clone();
    let derived = derived_ensembles(&e, &first).unwrap();
    assert_eq!(derived.dropped_indices, vec![0]);
    assert_eq!(derived.kept_indices, vec![1, 2, 3, 4]);
    for (j, &i) in derived.kept_indices.iter().enumerate() {
        assert!((derived.weights[j] - e.probs()[i] / 0.4).abs() < 1e-12);
        assert!(derived.tau_plus[j].sub(&e.states()[i]).unwrap().max_abs() < 1e-12);
        assert!(derived.tau_minus[j].sub(&first).unwrap().max_abs() < 1e-12);
    }
}

#[test]
fn t_chi_examples() {
    for n in 2..6 {
        let e = cyclic_projector_ensemble(n, 1);
        let expected = holevo_chi(&e) - e.probs().iter().map(|&p| p * h2(p)).sum::<f64>();
        assert!((t_chi(&e, &average_state(&e)).unwrap() - expected).abs() < 1e-10);
    }
    let skewed = orthogonal_ensemble(3, 0.35);
    let expected = holevo_chi(&skewed) - skewed.probs().iter().map(|&p| p * h2(p)).sum::<f64>();
    assert!((t_chi(&skewed, &average_state(&skewed)).unwrap() - expected).abs() < 1e-10);

    let rho = random_state(3, 3, &mut rng(4));
    let single = DiscreteEnsemble::new(vec![1.0], vec![rho.clone()]).unwrap();
    assert_eq!(t_chi(&single, &rho).unwrap(), 0.0);
    let derived = derived_ensembles(&single, &rho).unwrap();
    assert!(derived.weights.is_empty() && derived.epsilon == 0.0);
}
