#![allow(dead_code)]

use holevo::sample::{random_probabilities, random_state, random_unitary};
use holevo::{DensityMatrix, DiscreteEnsemble, HermitianMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` states in dimension `d` with ranks cycling through `1..=d`.
pub fn random_ensemble(n: usize, d: usize, rng: &mut impl Rng) -> DiscreteEnsemble {
    let offset = rng.random_range(0..d);
    let states = (0..n).map(|k| random_state(d, 1 + (k + offset) % d, rng)).collect();
    DiscreteEnsemble::new(random_probabilities(n, rng), states).unwrap()
}

pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let u = random_unitary(d, rng);
    let vals: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
    HermitianMatrix::from_spectrum(&vals, &u)
}

pub fn ket(re: &[f64]) -> Vec<Complex64> {
    re.iter().map(|x| Complex64::new(*x, 0.0)).collect()
}

/// Pure states `√(1−a²)|1⟩ + a|i+1⟩` in dimension `n + 1`.
pub fn unit_overlap_states(n: usize, a: f64) -> Vec<DensityMatrix> {
    (0..n)
        .map(|i| {
            let mut v = vec![0.0; n + 1];
            v[0] = (1.0 - a * a).sqrt();
            v[i + 1] = a;
            holevo::state::make_pure_state_real(&v).unwrap()
        })
        .collect()
}

/// `d` states proportional to rank-`k` projectors onto cyclically shifted
/// blocks of the computational basis; their uniform mixture is `I/d`.
pub fn cyclic_projector_ensemble(d: usize, k: usize) -> DiscreteEnsemble {
    let states = (0..d)
        .map(|s| {
            let diag: Vec<f64> = (0..d)
                .map(|i| if (i + d - s) % d < k { 1.0 / k as f64 } else { 0.0 })
                .collect();
            DensityMatrix::diagonal(&diag).unwrap()
        })
        .collect();
    DiscreteEnsemble::uniform(states).unwrap()
}

pub fn four_state_qutrit() -> DiscreteEnsemble {
    let h = 3f64.sqrt() / 2.0;
    let states = vec![
        holevo::state::make_pure_state_real(&[1.0, 0.0, 0.0]).unwrap(),
        holevo::state::make_pure_state_real(&[-0.5, h, 0.0]).unwrap(),
        holevo::state::make_pure_state_real(&[-0.5, -h, 0.0]).unwrap(),
        holevo::state::make_pure_state_real(&[0.0, 0.0, 1.0]).unwrap(),
    ];
    DiscreteEnsemble::uniform(states).unwrap()
}
