//! Choi matrices, `C = Σᵢⱼ |i⟩⟨j| ⊗ Φ[|i⟩⟨j|]`.
//!
//! The input factor comes first and the output factor second, so trace
//! preservation reads `Tr_out C = I`. Two Kraus lists describe the same channel
//! exactly when their Choi matrices agree.

use crate::channel::dilation::{partial_trace_matrix, Subsystem};
use crate::channel::KrausMap;
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    mat: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates an `N²×N²` matrix as the Choi matrix of a CPTP map.
    pub fn new(dim: usize, mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let size = dim * dim;
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() != size {
            return Err(Error::DimMismatch {
                expected: size,
                found: mat.nrows(),
            });
        }
        if !linalg::all_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let residual = linalg::hermitian_residual(&mat);
        if residual > tol.herm {
            return Err(Error::NotHermitian { residual });
        }
        let mat = linalg::hermitian_part(&mat);
        let min_eigenvalue = linalg::eigvalsh(&mat)?.last().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol.psd {
            return Err(Error::NotCp { min_eigenvalue });
        }
        let reduced = partial_trace_matrix(&mat, dim, dim, Subsystem::Second)?;
        let residual = linalg::max_abs_diff(&reduced, &linalg::identity(dim));
        if residual > tol.tp {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ChoiMatrix { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::eigvalsh(&self.mat)
    }
}

pub fn kraus_to_choi(phi: &KrausMap) -> ChoiMatrix {
    let n = phi.dim();
    let mut mat = ComplexMatrix::zeros(n * n, n * n);
    let mut unit = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            unit[(i, j)] = c(1.0, 0.0);
            let image = phi.apply_linear(&unit);
            unit[(i, j)] = c(0.0, 0.0);
            mat.view_mut((i * n, j * n), (n, n)).copy_from(&image);
        }
    }
    ChoiMatrix { dim: n, mat }
}

/// Minimal Kraus representation read off the Choi eigendecomposition.
///
/// One operator per eigenvalue above `tol.rank`, ordered by descending
/// eigenvalue, with `K[a, i] = √λ · v[i·N + a]`.
pub fn choi_to_kraus(choi: &ChoiMatrix, tol: &Tolerances) -> Result<KrausMap> {
    let n = choi.dim;
    let (values, vectors) = linalg::eigh(&choi.mat)?;
    if let Some(&min_eigenvalue) = values.last() {
        if min_eigenvalue < -tol.psd {
            return Err(Error::NotCp { min_eigenvalue });
        }
    }
    let ops: Vec<ComplexMatrix> = values
        .iter()
        .zip(vectors.column_iter())
        .filter(|(&lambda, _)| lambda > tol.rank)
        .map(|(&lambda, v)| {
            let v: ComplexVector = v.into_owned();
            let scale = lambda.sqrt();
            ComplexMatrix::from_fn(n, n, |a, i| v[i * n + a] * scale)
        })
        .collect();
    if ops.is_empty() {
        return Err(Error::NotTracePreserving { residual: 1.0 });
    }
    let residual = super::tp_residual(&ops);
    if residual > tol.tp {
        return Err(Error::NotTracePreserving { residual });
    }
    Ok(KrausMap::from_trusted(n, ops))
}

/// `‖Choi(Φ₁) − Choi(Φ₂)‖_max`
pub fn choi_distance(phi1: &KrausMap, phi2: &KrausMap) -> Result<f64> {
    if phi1.dim() != phi2.dim() {
        return Err(Error::DimMismatch {
            expected: phi1.dim(),
            found: phi2.dim(),
        });
    }
    Ok(linalg::max_abs_diff(
        kraus_to_choi(phi1).matrix(),
        kraus_to_choi(phi2).matrix(),
    ))
}

pub fn maps_equal(phi1: &KrausMap, phi2: &KrausMap, tol: f64) -> Result<bool> {
    Ok(choi_distance(phi1, phi2)? <= tol)
}

/// Numerical rank of the Choi matrix, the minimal number of Kraus operators.
pub fn kraus_rank(phi: &KrausMap, tol: &Tolerances) -> Result<usize> {
    let values = kraus_to_choi(phi).eigenvalues()?;
    Ok(values.iter().filter(|&&l| l > tol.rank).count())
}
