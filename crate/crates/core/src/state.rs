//! Density matrices and the trace-distance geometry on them.

use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{trace_norm, HermitianMatrix};

/// Eigenvalues down to this value are accepted (and clipped to zero).
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;

/// A positive semidefinite Hermitian matrix of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    base: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let tr = base.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let spec = base.eig();
        let min = spec.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        if min < 0.0 {
            return Ok(Self {
                base: spec.map(|x| x.max(0.0)),
            });
        }
        Ok(Self { base })
    }

    /// Wraps a matrix the caller already knows to be a state.
    pub(crate) fn from_trusted(base: HermitianMatrix) -> Self {
        Self { base }
    }

    /// The maximally mixed state `I/d`.
    pub fn chaotic(d: usize) -> Self {
        Self {
            base: HermitianMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    /// The computational basis state `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut diag = vec![0.0; d];
        diag[k] = 1.0;
        Self {
            base: HermitianMatrix::from_diagonal(&diag),
        }
    }

    /// A diagonal state with the given (validated) populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diagonal(populations))
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[&DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch(weights.len(), states.len()));
        }
        let d = states[0].dim();
        let mut acc = HermitianMatrix::zeros(d);
        for (w, s) in weights.iter().zip(states) {
            acc.add_scaled(*w, s)?;
        }
        Self::new(acc)
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.base
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianMatrix;

    fn deref(&self) -> &HermitianMatrix {
        &self.base
    }
}

/// `|v̂⟩⟨v̂|` for the normalization `v̂` of `v`.
pub fn make_pure_state(v: &[Complex64]) -> Result<DensityMatrix> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if v.is_empty() || norm < 1e-300 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
    Ok(DensityMatrix::from_trusted(HermitianMatrix::outer(&unit)))
}

/// Pure state from real amplitudes.
pub fn make_pure_state_real(v: &[f64]) -> Result<DensityMatrix> {
    let cv: Vec<Complex64> = v.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    make_pure_state(&cv)
}

/// `½‖ρ − σ‖₁`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    Ok(0.5 * trace_norm(&rho.sub(sigma)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_from_basis_vector() {
        let rho = make_pure_state_real(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(rho.as_hermitian(), &HermitianMatrix::from_diagonal(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn pure_state_normalizes() {
        let rho = make_pure_state_real(&[1.0, 1.0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.get(i, j).re - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(matches!(make_pure_state_real(&[0.0, 0.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn pure_vs_chaotic_distance() {
        for d in 2..6 {
            let t = trace_distance(&DensityMatrix::basis(d, 0), &DensityMatrix::chaotic(d)).unwrap();
            assert!((t - (1.0 - 1.0 / d as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn self_distance_is_zero() {
        let rho = make_pure_state_real(&[0.3, 0.4, 0.5]).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_trace_and_negative_spectrum() {
        assert!(matches!(
            DensityMatrix::diagonal(&[0.5, 0.4]),
            Err(Error::InvalidTrace(_))
        ));
        assert!(matches!(
            DensityMatrix::diagonal(&[1.001, -1e-3]),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn tiny_negative_eigenvalue_is_clipped() {
        let rho = DensityMatrix::diagonal(&[1.0 + 5e-10, -5e-10]).unwrap();
        assert!(rho.eig().min_eigenvalue() >= 0.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let r = trace_distance(&DensityMatrix::chaotic(2), &DensityMatrix::chaotic(3));
        assert!(matches!(r, Err(Error::DimensionMismatch(2, 3))));
    }
}
