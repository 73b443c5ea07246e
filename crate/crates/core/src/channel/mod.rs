//! Kraus-representation channels: `Φ[ρ] = Σ Kᵢ ρ Kᵢ†` with `Σ Kᵢ†Kᵢ = I`.

mod choi;
mod dilation;

pub use choi::{choi_distance, choi_to_kraus, kraus_rank, kraus_to_choi, maps_equal, ChoiMatrix};
pub use dilation::{partial_trace, partial_trace_matrix, stinespring_dilate, Dilation, Subsystem};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::state::DensityMatrix;
use crate::tolerance::Tolerances;

/// A trace-preserving list of Kraus operators on an `N`-dimensional system.
///
/// Operator order is preserved exactly as constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    dim: usize,
    ops: Vec<ComplexMatrix>,
}

/// `‖Σ Kᵢ†Kᵢ − I‖_max` for a list of equal-size square operators.
pub fn tp_residual(ops: &[ComplexMatrix]) -> f64 {
    let Some(first) = ops.first() else {
        return f64::INFINITY;
    };
    let n = first.nrows();
    let mut sum = ComplexMatrix::zeros(n, n);
    for k in ops {
        sum += k.adjoint() * k;
    }
    linalg::max_abs_diff(&sum, &linalg::identity(n))
}

/// Checks shape consistency of an operator list and returns the common dimension.
pub(crate) fn check_operator_shapes(ops: &[ComplexMatrix]) -> Result<usize> {
    let first = ops.first().ok_or(Error::EmptyList)?;
    let n = first.nrows();
    for k in ops {
        if k.nrows() != k.ncols() {
            return Err(Error::NotSquare {
                rows: k.nrows(),
                cols: k.ncols(),
            });
        }
        if k.nrows() != n {
            return Err(Error::DimMismatch {
                expected: n,
                found: k.nrows(),
            });
        }
        if !linalg::all_finite(k) {
            return Err(Error::NonFinite);
        }
    }
    Ok(n)
}

/// Validates an operator list and wraps it as a channel.
pub fn make_kraus(ops: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<KrausMap> {
    let dim = check_operator_shapes(&ops)?;
    let residual = tp_residual(&ops);
    if residual > tol.tp {
        return Err(Error::NotTracePreserving { residual });
    }
    Ok(KrausMap { dim, ops })
}

/// Single-operator channel `ρ ↦ UρU†`.
pub fn from_unitary(u: ComplexMatrix, tol: &Tolerances) -> Result<KrausMap> {
    if u.nrows() != u.ncols() {
        return Err(Error::NotSquare {
            rows: u.nrows(),
            cols: u.ncols(),
        });
    }
    let residual = linalg::isometry_residual(&u);
    if residual > tol.tp {
        return Err(Error::NotUnitary { residual });
    }
    Ok(KrausMap {
        dim: u.nrows(),
        ops: vec![u],
    })
}

pub fn apply(phi: &KrausMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if phi.dim != rho.dim() {
        return Err(Error::DimMismatch {
            expected: phi.dim,
            found: rho.dim(),
        });
    }
    Ok(DensityMatrix::from_trusted(phi.apply_linear(rho.matrix())))
}

/// `Φ₂ ∘ Φ₁`: operators `K⁽²⁾ᵢ K⁽¹⁾ⱼ` in lexicographic `(i, j)` order.
pub fn compose(second: &KrausMap, first: &KrausMap) -> Result<KrausMap> {
    if second.dim != first.dim {
        return Err(Error::DimMismatch {
            expected: second.dim,
            found: first.dim,
        });
    }
    let ops = second
        .ops
        .iter()
        .flat_map(|k2| first.ops.iter().map(move |k1| k2 * k1))
        .collect();
    Ok(KrausMap { dim: first.dim, ops })
}

/// Re-mixes the operators with an isometry: `K̃ᵢ = Σⱼ wᵢⱼ Kⱼ`.
///
/// `W` is `m×n` with `n` the current operator count and `W†W = I_n`; the
/// result represents the same channel with `m` operators.
pub fn unitary_mix(phi: &KrausMap, w: &ComplexMatrix, tol: &Tolerances) -> Result<KrausMap> {
    let n = phi.ops.len();
    if w.ncols() != n {
        return Err(Error::DimMismatch {
            expected: n,
            found: w.ncols(),
        });
    }
    if !linalg::all_finite(w) {
        return Err(Error::NonFinite);
    }
    let residual = linalg::isometry_residual(w);
    if residual > tol.tp {
        return Err(Error::BadIsometry { residual });
    }
    let ops = (0..w.nrows())
        .map(|i| {
            phi.ops
                .iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(phi.dim, phi.dim), |acc, (j, k)| {
                    acc + k * w[(i, j)]
                })
        })
        .collect();
    Ok(KrausMap { dim: phi.dim, ops })
}

/// Channel with `n_ops` operators cut from a seeded Haar isometry.
pub fn random_channel(dim: usize, n_ops: usize, seed: u64) -> KrausMap {
    assert!(dim > 0 && n_ops > 0, "random_channel needs dim, n_ops >= 1");
    let mut rng = linalg::seeded_rng(seed);
    let v = linalg::random_isometry(&mut rng, dim * n_ops, dim);
    let ops = (0..n_ops).map(|i| v.rows(i * dim, dim).into_owned()).collect();
    KrausMap { dim, ops }
}

impl KrausMap {
    pub fn new(ops: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        make_kraus(ops, tol)
    }

    pub(crate) fn from_trusted(dim: usize, ops: Vec<ComplexMatrix>) -> Self {
        debug_assert!(!ops.is_empty());
        KrausMap { dim, ops }
    }

    pub fn identity(dim: usize) -> Self {
        KrausMap {
            dim,
            ops: vec![linalg::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<ComplexMatrix> {
        self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn tp_residual(&self) -> f64 {
        tp_residual(&self.ops)
    }

    /// `Σ Kᵢ M Kᵢ†` for an arbitrary `N×N` matrix.
    pub fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            out += k * m * k.adjoint();
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply(self, rho)
    }

    /// `other ∘ self`, i.e. `self` acts first.
    pub fn then(&self, other: &KrausMap) -> Result<KrausMap> {
        compose(other, self)
    }

    /// Drops operators whose max-norm is at or below `threshold`.
    ///
    /// Always keeps at least one operator.
    pub fn pruned(&self, threshold: f64) -> KrausMap {
        let mut ops: Vec<ComplexMatrix> = self
            .ops
            .iter()
            .filter(|k| linalg::max_norm(k) > threshold)
            .cloned()
            .collect();
        if ops.is_empty() {
            ops.push(self.ops[0].clone());
        }
        KrausMap { dim: self.dim, ops }
    }

    pub fn choi(&self) -> ChoiMatrix {
        kraus_to_choi(self)
    }

    pub fn kraus_rank(&self, tol: &Tolerances) -> Result<usize> {
        kraus_rank(self, tol)
    }

    /// Unitary channel iff the Choi rank is one.
    pub fn is_unitary(&self, tol: &Tolerances) -> Result<bool> {
        Ok(kraus_rank(self, tol)? == 1)
    }
}
