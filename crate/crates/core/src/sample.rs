//! Random states, unitaries and probability vectors.
//!
//! Used for solver warm starts and channel probes; tests use the same
//! generators so every random corpus is reproducible from a seed.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::matrix::{CMatrix, HermitianMatrix};
use crate::state::DensityMatrix;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Unit vector distributed uniformly on the complex sphere.
pub fn random_ket(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random pure state.
pub fn random_pure_state(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    DensityMatrix::from_trusted(HermitianMatrix::outer(&random_ket(d, rng)))
}

/// Mixed state `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix.
pub fn random_state(d: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let rank = rank.clamp(1, d);
    let g = CMatrix::from_fn(d, rank, |_, _| gaussian(rng));
    let ggh = g.matmul(&g.adjoint()).expect("shapes agree");
    let h = HermitianMatrix::symmetrized(ggh);
    let tr = h.trace();
    DensityMatrix::from_trusted(h.scale(1.0 / tr))
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Uniform draw from the probability simplex of length `n`.
pub fn random_probabilities(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}
