use holevo::divergence::{amd_objective, mmd_objective};
use holevo::ensemble::max_pairwise_distance;
use holevo::sample::{random_probabilities, random_state};
use holevo::state::make_pure_state_real;
use holevo::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn example4() -> DiscreteEnsemble {
    let h = 3f64.sqrt() / 2.0;
    let states = vec![
        make_pure_state_real(&[1.0, 0.0, 0.0]).unwrap(),
        make_pure_state_real(&[-0.5, h, 0.0]).unwrap(),
        make_pure_state_real(&[-0.5, -h, 0.0]).unwrap(),
        make_pure_state_real(&[0.0, 0.0, 1.0]).unwrap(),
    ];
    DiscreteEnsemble::uniform(states).unwrap()
}

fn max_entry_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    a.sub(b).unwrap().max_abs()
}

#[test]
fn four_state_qutrit_amd_and_mmd() {
    let e = example4();
    let cfg = SolverConfig::default();
    let avg = average_state(&e);
    assert!((metric_divergence(&e, &avg).unwrap() - 21.0 / 32.0).abs() < 1e-12);

    let amd = amd_optimal(&e, &cfg).unwrap();
    assert!((amd.value - 5.0 / 8.0).abs() < 1e-4, "amd {}", amd.value);
    let expected = DensityMatrix::diagonal(&[0.5, 0.5, 0.0]).unwrap();
    assert!(max_entry_diff(&amd.optimal_state, &expected) < 1e-2);

    let mmd = mmd_optimal(e.states(), &cfg).unwrap();
    assert!((mmd.value - 2.0 / 3.0).abs() < 1e-4, "mmd {}", mmd.value);
    assert!(max_entry_diff(&mmd.optimal_state, &DensityMatrix::chaotic(3)) < 1e-2);
    assert!(mmd.certified_gap < 1e-3, "gap {}", mmd.certified_gap);
}

#[test]
fn two_state_optimum_sits_at_the_likelier_state() {
    let r1 = make_pure_state_real(&[1.0, 0.2, 0.0]).unwrap();
    let r2 = make_pure_state_real(&[0.1, 1.0, 0.5]).unwrap();
    let dist = trace_distance(&r1, &r2).unwrap();
    let e = DiscreteEnsemble::new(vec![0.65, 0.35], vec![r1.clone(), r2.clone()]).unwrap();
    let amd = amd_optimal(&e, &SolverConfig::default()).unwrap();
    assert!((amd.value - 0.35 * dist).abs() < 1e-4);
    assert!(trace_distance(&amd.optimal_state, &r1).unwrap() < 1e-2);

    let mmd = mmd_optimal(&[r1.clone(), r2.clone()], &SolverConfig::default()).unwrap();
    assert!((mmd.value - 0.5 * dist).abs() < 1e-4);
    let mid = DensityMatrix::mixture(&[0.5, 0.5], &[&r1, &r2]).unwrap();
    assert!(trace_distance(&mmd.optimal_state, &mid).unwrap() < 1e-2);
    assert!((chebyshev_radius(&[r1, r2], &SolverConfig::default()).unwrap() - 0.5 * dist).abs() < 1e-4);
}

#[test]
fn value_matches_objective_at_returned_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = SolverConfig {
        max_iters: 20_000,
        restarts: 2,
        ..SolverConfig::default()
    };
    for _ in 0..5 {
        let n = 3;
        let states: Vec<_> = (0..n).map(|_| random_state(3, 2, &mut rng)).collect();
        let e = DiscreteEnsemble::new(random_probabilities(n, &mut rng), states).unwrap();
        let amd = amd_optimal(&e, &cfg).unwrap();
        assert!((amd.value - amd_objective(&e, &amd.optimal_state).unwrap()).abs() < 1e-9);
        let mmd = mmd_optimal(e.states(), &cfg).unwrap();
        assert!((mmd.value - mmd_objective(e.states(), &mmd.optimal_state).unwrap()).abs() < 1e-9);
        assert!(amd.certified_gap >= 0.0 && mmd.certified_gap >= 0.0);
    }
}

#[test]
fn amd_never_worse_than_free_candidates_and_ordering_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = SolverConfig {
        max_iters: 20_000,
        restarts: 2,
        ..SolverConfig::default()
    };
    for trial in 0..8 {
        let n = 2 + trial % 4;
        let d = 2 + trial % 3;
        let states: Vec<_> = (0..n).map(|k| random_state(d, 1 + k % d, &mut rng)).collect();
        let e = DiscreteEnsemble::new(random_probabilities(n, &mut rng), states).unwrap();
        let amd = amd_optimal(&e, &cfg).unwrap();
        let avg = average_state(&e);
        assert!(amd.value <= metric_divergence(&e, &avg).unwrap() + 1e-12);
        for rho in e.states() {
            assert!(amd.value <= metric_divergence(&e, rho).unwrap() + 1e-12);
        }
        let mmd = mmd_optimal(e.states(), &cfg).unwrap();
        let tol = cfg.tolerance;
        let sup_avg = e
            .states()
            .iter()
            .map(|r| trace_distance(r, &avg).unwrap())
            .fold(0.0, f64::max);
        assert!(amd.value <= mmd.value + tol);
        assert!(mmd.value <= sup_avg + tol);
        assert!(sup_avg <= max_pairwise_distance(&e) + 1e-12);
    }
}

/// Qubit states from Bloch vectors; `‖ρ−σ‖₁ = |r−s|` gives an oracle
/// independent of any eigensolver.
fn bloch(r: [f64; 3]) -> DensityMatrix {
    use num_complex::Complex64 as C;
    let m = HermitianMatrix::from_rows(&[
        vec![C::new(0.5 * (1.0 + r[2]), 0.0), C::new(0.5 * r[0], -0.5 * r[1])],
        vec![C::new(0.5 * r[0], 0.5 * r[1]), C::new(0.5 * (1.0 - r[2]), 0.0)],
    ])
    .unwrap();
    DensityMatrix::new(m).unwrap()
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn grid_optimum(vectors: &[[f64; 3]], probs: &[f64]) -> (f64, f64) {
    let step = 0.01;
    let k = (1.0 / step) as i64;
    let (mut amd, mut mmd) = (f64::INFINITY, f64::INFINITY);
    for i in -k..=k {
        for j in -k..=k {
            for l in -k..=k {
                let s = [i as f64 * step, j as f64 * step, l as f64 * step];
                if s[0] * s[0] + s[1] * s[1] + s[2] * s[2] > 1.0 {
                    continue;
                }
                let ds: Vec<f64> = vectors.iter().map(|r| 0.5 * dist(*r, s)).collect();
                amd = amd.min(ds.iter().zip(probs).map(|(d, p)| d * p).sum());
                mmd = mmd.min(ds.iter().copied().fold(0.0, f64::max));
            }
        }
    }
    (amd, mmd)
}

#[test]
fn qubit_optima_match_bloch_grid() {
    let cases: Vec<(Vec<[f64; 3]>, Vec<f64>)> = vec![
        (vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.6, -0.7]], vec![0.5, 0.3, 0.2]),
        (
            vec![[0.3, -0.4, 0.5], [-0.8, 0.1, 0.2], [0.0, 0.9, 0.0], [0.2, 0.2, -0.9]],
            vec![0.25, 0.25, 0.25, 0.25],
        ),
    ];
    for (vectors, probs) in cases {
        let states: Vec<_> = vectors.iter().map(|r| bloch(*r)).collect();
        let e = DiscreteEnsemble::new(probs.clone(), states).unwrap();
        let cfg = SolverConfig::default();
        let amd = amd_optimal(&e, &cfg).unwrap().value;
        let mmd = mmd_optimal(e.states(), &cfg).unwrap().value;
        let (g_amd, g_mmd) = grid_optimum(&vectors, &probs);
        assert!((amd - g_amd).abs() < 2e-2, "amd {amd} vs grid {g_amd}");
        assert!((mmd - g_mmd).abs() < 2e-2, "mmd {mmd} vs grid {g_mmd}");
        assert!(amd <= g_amd + 1e-4 && mmd <= g_mmd + 1e-4);
    }
}

#[test]
fn objectives_are_midpoint_convex() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let states: Vec<_> = (0..4).map(|_| random_state(3, 2, &mut rng)).collect();
    let e = DiscreteEnsemble::new(random_probabilities(4, &mut rng), states).unwrap();
    for _ in 0..50 {
        let a = random_state(3, 3, &mut rng);
        let b = random_state(3, 1, &mut rng);
        let mid = DensityMatrix::mixture(&[0.5, 0.5], &[&a, &b]).unwrap();
        let f = |s: &DensityMatrix| amd_objective(&e, s).unwrap();
        assert!(f(&mid) <= 0.5 * (f(&a) + f(&b)) + 1e-9);
        let m = |s: &DensityMatrix| mmd_objective(e.states(), s).unwrap();
        assert!(m(&mid) <= 0.5 * (m(&a) + m(&b)) + 1e-9);
    }
}

#[test]
fn chebyshev_radius_of_pure_qutrit_states_approaches_two_thirds() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut states: Vec<_> = (0..3).map(|k| DensityMatrix::basis(3, k)).collect();
    states.extend((0..60).map(|_| holevo::sample::random_pure_state(3, &mut rng)));
    let cfg = SolverConfig {
        restarts: 1,
        ..SolverConfig::default()
    };
    let r = chebyshev_radius(&states, &cfg).unwrap();
    assert!(r <= 2.0 / 3.0 + 1e-4);
    assert!(r > 2.0 / 3.0 - 2e-2, "radius {r}");
    assert!(chebyshev_radius(&states[..1], &cfg).unwrap() < 1e-4);
}

#[test]
fn unit_overlap_family_mmd_below_a() {
    let n = 4;
    let a: f64 = 0.3;
    let states: Vec<_> = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n + 1];
            v[0] = (1.0 - a * a).sqrt();
            v[i + 1] = a;
            make_pure_state_real(&v).unwrap()
        })
        .collect();
    let mmd = mmd_optimal(&states, &SolverConfig::default()).unwrap();
    assert!(mmd.value <= a);
}
