//! Stinespring dilation and partial traces.
//!
//! Joint spaces are ordered system ⊗ ancilla, so joint index `s·n + e` pairs
//! system basis vector `s` with ancilla basis vector `e`.

use crate::channel::KrausMap;
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix};
use crate::state::DensityMatrix;
use crate::tolerance::Tolerances;

/// Seed for the deterministic unitary completion.
const COMPLETION_SEED: u64 = 0;

/// Factor of a bipartite space `ℋ₁ ⊗ ℋ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A unitary on system ⊗ ancilla realizing a channel after tracing out the ancilla.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    system_dim: usize,
    ancilla_dim: usize,
    unitary: ComplexMatrix,
    /// Index of the ancilla reference vector `|0⟩`.
    ancilla_ref: usize,
}

/// `U(|ψ⟩⊗|0⟩) = Σᵢ Kᵢ|ψ⟩⊗|eᵢ⟩`, with the remaining columns completed to a unitary.
pub fn stinespring_dilate(phi: &KrausMap, tol: &Tolerances) -> Result<Dilation> {
    let n_sys = phi.dim();
    let n_anc = phi.len();
    let joint = n_sys * n_anc;

    let mut iso = ComplexMatrix::zeros(joint, n_sys);
    for (e, k) in phi.ops().iter().enumerate() {
        for a in 0..n_sys {
            for s in 0..n_sys {
                iso[(a * n_anc + e, s)] = k[(a, s)];
            }
        }
    }
    let residual = linalg::isometry_residual(&iso);
    if residual > tol.tp {
        return Err(Error::CompletionFailure { residual });
    }

    let completed = linalg::complete_to_unitary(&iso, COMPLETION_SEED);
    // Column s of the isometry goes to joint column s·n (ancilla in |0⟩);
    // the completion columns fill the remaining slots in order.
    let mut unitary = ComplexMatrix::zeros(joint, joint);
    let mut extra = n_sys..joint;
    for col in 0..joint {
        let src = if col % n_anc == 0 {
            col / n_anc
        } else {
            extra.next().expect("completion column count")
        };
        unitary.set_column(col, &completed.column(src));
    }
    let residual = linalg::isometry_residual(&unitary);
    if residual > tol.tp {
        return Err(Error::CompletionFailure { residual });
    }
    Ok(Dilation {
        system_dim: n_sys,
        ancilla_dim: n_anc,
        unitary,
        ancilla_ref: 0,
    })
}

impl Dilation {
    /// Validates a dilation read from elsewhere; the ancilla reference is `|0⟩`.
    pub fn new(system_dim: usize, ancilla_dim: usize, unitary: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let joint = system_dim * ancilla_dim;
        if unitary.nrows() != unitary.ncols() {
            return Err(Error::NotSquare {
                rows: unitary.nrows(),
                cols: unitary.ncols(),
            });
        }
        if unitary.nrows() != joint || joint == 0 {
            return Err(Error::BadFactorization {
                dim: unitary.nrows(),
                left: system_dim,
                right: ancilla_dim,
            });
        }
        if !linalg::all_finite(&unitary) {
            return Err(Error::NonFinite);
        }
        let residual = linalg::isometry_residual(&unitary);
        if residual > tol.tp {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Dilation {
            system_dim,
            ancilla_dim,
            unitary,
            ancilla_ref: 0,
        })
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn ancilla_ref(&self) -> usize {
        self.ancilla_ref
    }

    pub fn unitarity_residual(&self) -> f64 {
        linalg::isometry_residual(&self.unitary)
    }

    /// `Tr₂{U(ρ⊗|0⟩⟨0|)U†}`
    pub fn replay(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.system_dim {
            return Err(Error::DimMismatch {
                expected: self.system_dim,
                found: rho.dim(),
            });
        }
        let ancilla = DensityMatrix::basis(self.ancilla_dim, self.ancilla_ref);
        let joint = rho.tensor(&ancilla).conjugate_by(&self.unitary)?;
        partial_trace(&joint, self.system_dim, self.ancilla_dim, Subsystem::Second)
    }

    /// Kraus operators read back from the reference columns: `Kₑ[a, s] = U[a·n + e, s·n]`.
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        let (ns, na) = (self.system_dim, self.ancilla_dim);
        (0..na)
            .map(|e| ComplexMatrix::from_fn(ns, ns, |a, s| self.unitary[(a * na + e, s * na + self.ancilla_ref)]))
            .collect()
    }
}

/// Partial trace of an `(left·right)`-dimensional matrix, tracing out `traced`.
pub fn partial_trace_matrix(m: &ComplexMatrix, left: usize, right: usize, traced: Subsystem) -> Result<ComplexMatrix> {
    let dim = m.nrows();
    if m.ncols() != dim || left * right != dim || left == 0 || right == 0 {
        return Err(Error::BadFactorization { dim, left, right });
    }
    let out = match traced {
        Subsystem::Second => ComplexMatrix::from_fn(left, left, |i, j| {
            (0..right).fold(c(0.0, 0.0), |acc, k| acc + m[(i * right + k, j * right + k)])
        }),
        Subsystem::First => ComplexMatrix::from_fn(right, right, |i, j| {
            (0..left).fold(c(0.0, 0.0), |acc, k| acc + m[(k * right + i, k * right + j)])
        }),
    };
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, left: usize, right: usize, traced: Subsystem) -> Result<DensityMatrix> {
    partial_trace_matrix(rho.matrix(), left, right, traced).map(DensityMatrix::from_trusted)
}
