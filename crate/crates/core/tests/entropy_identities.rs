mod common;

use common::{four_state_qutrit, random_ensemble, rng};
use holevo::entropy::{shannon_entropy_ext, von_neumann_entropy_ext, LogReference};
use holevo::sample::random_state;
use holevo::*;
use proptest::prelude::*;

fn finite(x: ExtendedReal) -> f64 {
    x.finite().expect("finite relative entropy")
}

proptest! {
    #[test]
    fn donald_identity(seed in any::<u64>(), n in 1usize..=6, d in 2usize..=5) {
        let mut r = rng(seed);
        let e = random_ensemble(n, d, &mut r);
        let sigma = random_state(d, d, &mut r);
        let avg = average_state(&e);
        let reference = LogReference::new(&sigma);
        let lhs: f64 = e.iter().map(|(p, rho)| p * finite(reference.relative_entropy(rho).unwrap())).sum();
        let rhs = holevo_chi(&e) + finite(relative_entropy(&avg, &sigma).unwrap());
        prop_assert!((lhs - rhs).abs() < 1e-8, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn subadditivity_chain(seed in any::<u64>(), n in 1usize..=5, d in 2usize..=5) {
        let mut r = rng(seed);
        let parts: Vec<HermitianMatrix> = (0..n)
            .map(|k| random_state(d, 1 + k % d, &mut r).scale(0.1 + k as f64))
            .collect();
        let mut total = HermitianMatrix::zeros(d);
        for a in &parts {
            total.add_scaled(1.0, a).unwrap();
        }
        let each: f64 = parts.iter().map(|a| von_neumann_entropy_ext(a).unwrap()).sum();
        let joint = von_neumann_entropy_ext(&total).unwrap();
        let traces: Vec<f64> = parts.iter().map(|a| a.trace()).collect();
        prop_assert!(each <= joint + 1e-9);
        prop_assert!(joint <= each + shannon_entropy_ext(&traces).unwrap() + 1e-9);
    }

    #[test]
    fn relative_entropy_nonnegative_and_faithful(seed in any::<u64>(), d in 2usize..=5) {
        let mut r = rng(seed);
        let rho = random_state(d, 1 + seed as usize % d, &mut r);
        let sigma = random_state(d, d, &mut r);
        let h = finite(relative_entropy(&rho, &sigma).unwrap());
        prop_assert!(h >= 0.0);
        if trace_distance(&rho, &sigma).unwrap() > 1e-8 {
            prop_assert!(h > 0.0);
        }
        prop_assert!(finite(relative_entropy(&sigma, &sigma).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn g_increasing_and_concave_on_zero_to_three() {
    let vals: Vec<f64> = (0..=300).map(|k| g_func(k as f64 * 0.01).unwrap()).collect();
    for w in vals.windows(2) {
        assert!(w[1] > w[0]);
    }
    for w in vals.windows(3) {
        assert!(w[2] - 2.0 * w[1] + w[0] < 0.0);
    }
}

#[test]
fn example_values() {
    assert!((g_func(1.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
    let half = 1.5 * 1.5f64.ln() - 0.5 * 0.5f64.ln();
    assert!((g_func(0.5).unwrap() - half).abs() < 1e-15);
    assert!((shannon_entropy_ext(&[1.0, 1.0]).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
    let third = -(1.0 / 3.0) * (1.0f64 / 3.0).ln() - (2.0 / 3.0) * (2.0f64 / 3.0).ln();
    assert!((binary_entropy(1.0 / 3.0).unwrap() - third).abs() < 1e-15);
    assert!(binary_entropy(1.2).is_err());
    assert!(g_func(-0.1).is_err());
}

#[test]
fn average_entropy_of_four_state_qutrit() {
    let avg = average_state(&four_state_qutrit());
    let direct = -2.0 * 0.375 * 0.375f64.ln() - 0.25 * 0.25f64.ln();
    assert!((von_neumann_entropy(&avg) - direct).abs() < 1e-12);
    assert!((shannon_entropy_ext(&[0.375, 0.375, 0.25]).unwrap() - direct).abs() < 1e-15);
}

#[test]
fn relative_entropy_support_cases() {
    let a = DensityMatrix::basis(2, 0);
    let b = DensityMatrix::basis(2, 1);
    assert_eq!(relative_entropy(&a, &b).unwrap(), ExtendedReal::Infinite);
    for d in 2..6 {
        let pure = DensityMatrix::basis(d, 1);
        let h = finite(relative_entropy(&pure, &DensityMatrix::chaotic(d)).unwrap());
        assert!((h - (d as f64).ln()).abs() < 1e-12);
    }
}

#[test]
fn positive_parts_of_pure_ensemble_at_chaotic_reference() {
    let mut r = rng(5);
    let d = 4;
    let states: Vec<_> = (0..5).map(|_| holevo::sample::random_pure_state(d, &mut r)).collect();
    let e = DiscreteEnsemble::new(holevo::sample::random_probabilities(5, &mut r), states).unwrap();
    let derived = holevo::ensemble::derived_ensembles(&e, &DensityMatrix::chaotic(d)).unwrap();
    let positive = derived.weighted_positive_part(d);
    let c = 1.0 - 1.0 / d as f64;
    // H is homogeneous: H(cρ̄) = c H(ρ̄)
    let expected = c * von_neumann_entropy(&average_state(&e));
    assert!((von_neumann_entropy_ext(&positive).unwrap() - expected).abs() < 1e-10);
}
