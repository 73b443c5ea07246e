//! Density matrices, pure states and their spectra.
//!
//! A [`DensityMatrix`] is only ever built through validation (or internally
//! from an operation known to preserve the invariants), so holders can rely on
//! it being Hermitian, positive semidefinite and of unit trace.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vec: ComplexVector,
}

/// Eigen-decomposition of a state, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<PureState>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMetrics {
    pub trace_distance: f64,
    pub purity1: f64,
    pub purity2: f64,
    pub vn_entropy1: f64,
    pub vn_entropy2: f64,
}

/// Checks the density-matrix invariants and wraps the Hermitian part of `mat`.
pub fn validate_density(mat: &ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::NotSquare {
            rows: mat.nrows(),
            cols: mat.ncols(),
        });
    }
    if !linalg::all_finite(mat) {
        return Err(Error::NonFinite);
    }
    let residual = linalg::hermitian_residual(mat);
    if residual > tol.herm {
        return Err(Error::NotHermitian { residual });
    }
    let herm = linalg::hermitian_part(mat);
    let residual = (linalg::trace(&herm).re - 1.0).abs();
    if residual > tol.tr {
        return Err(Error::TraceNotOne { residual });
    }
    let min_eigenvalue = linalg::eigvalsh(&herm)?.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -tol.psd {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(DensityMatrix { mat: herm })
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        validate_density(&mat, tol)
    }

    /// Wraps the Hermitian part of a matrix the caller knows to be a state.
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        DensityMatrix {
            mat: linalg::hermitian_part(&mat),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix {
            mat: linalg::outer(&psi.vec, &psi.vec),
        }
    }

    /// `I/N`
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: linalg::identity(dim).unscale(dim as f64),
        }
    }

    /// `|k⟩⟨k|`
    pub fn basis(dim: usize, k: usize) -> Self {
        Self::from_pure(&PureState::basis(dim, k))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64], tol: &Tolerances) -> Result<Self> {
        let d = DVector::from_iterator(populations.len(), populations.iter().map(|&p| c(p, 0.0)));
        Self::new(ComplexMatrix::from_diagonal(&d), tol)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn spectrum(&self, tol: &Tolerances) -> Result<Spectrum> {
        spectral_decompose(self, tol)
    }

    /// `−Σ pᵢ ln pᵢ` with `0 ln 0 = 0`.
    pub fn von_neumann_entropy(&self, tol: &Tolerances) -> Result<f64> {
        let spectrum = self.spectrum(tol)?;
        Ok(spectrum
            .eigenvalues
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum())
    }

    /// `self ⊗ other`
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            mat: linalg::kron(&self.mat, &other.mat),
        }
    }

    /// `U ρ U†`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: u.nrows(),
            });
        }
        Ok(Self::from_trusted(u * &self.mat * u.adjoint()))
    }

    pub fn distance_max(&self, other: &DensityMatrix) -> f64 {
        linalg::max_abs_diff(&self.mat, &other.mat)
    }
}

impl PureState {
    pub fn new(vec: ComplexVector, tol: &Tolerances) -> Result<Self> {
        if !vec.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let residual = (vec.norm() - 1.0).abs();
        if residual > tol.tr {
            return Err(Error::NotNormalized { residual });
        }
        Ok(PureState { vec })
    }

    /// Normalizes `vec`; fails only on a zero or non-finite vector.
    pub fn normalized(vec: ComplexVector) -> Result<Self> {
        let norm = vec.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm == 0.0 {
            return Err(Error::NotNormalized { residual: 1.0 });
        }
        Ok(PureState { vec: vec.unscale(norm) })
    }

    pub(crate) fn from_trusted(vec: ComplexVector) -> Self {
        PureState { vec }
    }

    pub fn from_amplitudes(amps: &[Complex64], tol: &Tolerances) -> Result<Self> {
        Self::new(ComplexVector::from_column_slice(amps), tol)
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut vec = ComplexVector::zeros(dim);
        vec[k] = c(1.0, 0.0);
        PureState { vec }
    }

    /// `(|0⟩ + |1⟩)/√2`
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            vec: ComplexVector::from_column_slice(&[c(s, 0.0), c(s, 0.0)]),
        }
    }

    /// Haar-random pure state.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = linalg::seeded_rng(seed);
        PureState {
            vec: linalg::random_unit_vector(&mut rng, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.vec
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.vec.dotc(&other.vec)
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

impl Spectrum {
    /// `Σ pᵢ |φᵢ⟩⟨φᵢ|`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.first().map_or(0, PureState::dim);
        let mut m = ComplexMatrix::zeros(n, n);
        for (p, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m += linalg::outer(&v.vec, &v.vec).scale(*p);
        }
        m
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|&&p| p > threshold).count()
    }
}

/// Spectral decomposition with roundoff-level negative eigenvalues clamped to
/// zero and the spectrum renormalized to sum to one.
pub fn spectral_decompose(rho: &DensityMatrix, tol: &Tolerances) -> Result<Spectrum> {
    let (mut values, vectors) = linalg::eigh(&rho.mat)?;
    for p in values.iter_mut() {
        if *p < -tol.psd {
            return Err(Error::NotPositive { min_eigenvalue: *p });
        }
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let total: f64 = values.iter().sum();
    if total > 0.0 {
        values.iter_mut().for_each(|p| *p /= total);
    }
    let eigenvectors = vectors
        .column_iter()
        .map(|col| PureState::from_trusted(col.into_owned()))
        .collect();
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors,
    })
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimMismatch { expected: a, found: b });
    }
    Ok(())
}

/// `½ Σ |λ(ρ1 − ρ2)|`
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1.dim(), rho2.dim())?;
    let diff = &rho1.mat - &rho2.mat;
    let half_sum: f64 = linalg::eigvalsh(&diff)?.iter().map(|x| x.abs()).sum::<f64>() / 2.0;
    Ok(half_sum.clamp(0.0, 1.0))
}

pub fn state_metrics(rho1: &DensityMatrix, rho2: &DensityMatrix, tol: &Tolerances) -> Result<StateMetrics> {
    Ok(StateMetrics {
        trace_distance: trace_distance(rho1, rho2)?,
        purity1: rho1.purity(),
        purity2: rho2.purity(),
        vn_entropy1: rho1.von_neumann_entropy(tol)?,
        vn_entropy2: rho2.von_neumann_entropy(tol)?,
    })
}

/// Largest elementwise gap between the descending spectra of two states.
pub fn spectrum_gap(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1.dim(), rho2.dim())?;
    let a = linalg::eigvalsh(&rho1.mat)?;
    let b = linalg::eigvalsh(&rho2.mat)?;
    Ok(a.iter().zip(&b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs())))
}

/// Two states are connected by a unitary iff their sorted spectra agree.
pub fn kinematically_equivalent(rho1: &DensityMatrix, rho2: &DensityMatrix, tol: f64) -> Result<bool> {
    Ok(spectrum_gap(rho1, rho2)? <= tol)
}

/// `exp(−βH₀) / Tr exp(−βH₀)` via the eigendecomposition of `H₀`.
pub fn thermal_state(h0: &ComplexMatrix, beta: f64, tol: &Tolerances) -> Result<DensityMatrix> {
    if h0.nrows() != h0.ncols() {
        return Err(Error::NotSquare {
            rows: h0.nrows(),
            cols: h0.ncols(),
        });
    }
    if !linalg::all_finite(h0) || !beta.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = linalg::hermitian_residual(h0);
    if residual > tol.herm {
        return Err(Error::NotHermitian { residual });
    }
    let (energies, vectors) = linalg::eigh(h0)?;
    let exponents: Vec<f64> = energies.iter().map(|e| -beta * e).collect();
    let shift = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = exponents.iter().map(|a| (a - shift).exp()).collect();
    let z: f64 = weights.iter().sum();
    let d = DVector::from_iterator(weights.len(), weights.iter().map(|w| c(w / z, 0.0)));
    let rho = &vectors * ComplexMatrix::from_diagonal(&d) * vectors.adjoint();
    Ok(DensityMatrix::from_trusted(rho))
}

/// Seeded random state of the given rank: `GG†/Tr(GG†)` with `G` an `N×r`
/// matrix of standard complex Gaussians.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let mut rng = linalg::seeded_rng(seed);
    let g = linalg::gaussian_matrix(&mut rng, dim, rank);
    let gg = &g * g.adjoint();
    let t = linalg::trace(&gg).re;
    Ok(DensityMatrix::from_trusted(gg.unscale(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn diag(p: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&DVector::from_iterator(p.len(), p.iter().map(|&x| c(x, 0.0))))
    }

    #[test]
    fn validates_maximally_mixed_and_ground_state() {
        assert!(validate_density(&linalg::identity(2).unscale(2.0), &TOL).is_ok());
        let rho = validate_density(&diag(&[1.0, 0.0]), &TOL).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_trace_with_residual() {
        match validate_density(&diag(&[0.6, 0.6]), &TOL) {
            Err(Error::TraceNotOne { residual }) => assert!((residual - 0.2).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_square_non_hermitian_and_negative() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            validate_density(&m, &TOL),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));

        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(validate_density(&m, &TOL), Err(Error::NotHermitian { .. })));

        match validate_density(&diag(&[1.2, -0.2]), &TOL) {
            Err(Error::NotPositive { min_eigenvalue }) => assert!((min_eigenvalue + 0.2).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symmetrizes_small_antihermitian_noise() {
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = c(1e-12, 0.0);
        let rho = validate_density(&m, &TOL).unwrap();
        assert_eq!(rho.matrix()[(0, 1)], rho.matrix()[(1, 0)].conj());
    }

    #[test]
    fn diagonal_spectrum_is_computational_basis() {
        let rho = DensityMatrix::diagonal(&[0.7, 0.3], &TOL).unwrap();
        let s = spectral_decompose(&rho, &TOL).unwrap();
        assert!((s.eigenvalues[0] - 0.7).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 0.3).abs() < 1e-15);
        assert!((s.eigenvectors[0].inner(&PureState::basis(2, 0)).norm() - 1.0).abs() < 1e-15);
        assert!((s.eigenvectors[1].inner(&PureState::basis(2, 1)).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn plus_projector_spectrum() {
        let rho = PureState::plus().projector();
        let s = spectral_decompose(&rho, &TOL).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(s.eigenvalues[1].abs() < 1e-14);
        // Canonical phase makes the vector equal to |+⟩ itself.
        let diff = s.eigenvectors[0].vector() - PureState::plus().vector();
        assert!(diff.norm() < 1e-14);
    }

    #[test]
    fn spectral_clamps_roundoff_negatives() {
        let m = diag(&[1.0 + 5e-10, -5e-10]);
        let rho = validate_density(&m, &TOL).unwrap();
        let s = spectral_decompose(&rho, &TOL).unwrap();
        assert_eq!(s.eigenvalues[1], 0.0);
        assert!((s.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn metrics_of_orthogonal_pure_states() {
        let m = state_metrics(&DensityMatrix::basis(2, 0), &DensityMatrix::basis(2, 1), &TOL).unwrap();
        assert!((m.trace_distance - 1.0).abs() < 1e-15);
        assert!((m.purity1 - 1.0).abs() < 1e-15 && (m.purity2 - 1.0).abs() < 1e-15);
        assert_eq!(m.vn_entropy1, 0.0);
        assert_eq!(m.vn_entropy2, 0.0);
    }

    #[test]
    fn metrics_ground_vs_mixed() {
        // diff = diag(0.5, -0.5): trace distance 0.5.
        let m = state_metrics(&DensityMatrix::basis(2, 0), &DensityMatrix::maximally_mixed(2), &TOL).unwrap();
        assert!((m.trace_distance - 0.5).abs() < 1e-15);
        assert!((m.purity2 - 0.5).abs() < 1e-15);
        assert!((m.vn_entropy2 - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn metrics_dim_mismatch() {
        let err = state_metrics(
            &DensityMatrix::maximally_mixed(2),
            &DensityMatrix::maximally_mixed(3),
            &TOL,
        );
        assert!(matches!(err, Err(Error::DimMismatch { expected: 2, found: 3 })));
    }

    #[test]
    fn kinematic_equivalence_of_pure_states_only() {
        let zero = DensityMatrix::basis(2, 0);
        assert!(kinematically_equivalent(&zero, &PureState::plus().projector(), 1e-10).unwrap());
        assert!(!kinematically_equivalent(&zero, &DensityMatrix::maximally_mixed(2), 1e-10).unwrap());
    }

    #[test]
    fn thermal_infinite_temperature_and_ground_limit() {
        let h = diag(&[0.0, 1.0, 2.5]);
        let rho = thermal_state(&h, 0.0, &TOL).unwrap();
        assert!(linalg::max_abs_diff(rho.matrix(), &linalg::identity(3).unscale(3.0)) < 1e-15);

        let rho = thermal_state(&diag(&[0.0, 2.0]), 25.0, &TOL).unwrap();
        assert!(linalg::max_abs_diff(rho.matrix(), &diag(&[1.0, 0.0])) < 1e-20);
    }

    #[test]
    fn thermal_two_level_matches_scalar_exponentials() {
        let rho = thermal_state(&diag(&[0.0, 1.0]), 1.0, &TOL).unwrap();
        let e = (-1.0f64).exp();
        let expected = diag(&[1.0 / (1.0 + e), e / (1.0 + e)]);
        assert!(linalg::max_abs_diff(rho.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn thermal_rejects_non_hermitian() {
        let mut h = diag(&[0.0, 1.0]);
        h[(0, 1)] = c(0.0, 1.0);
        assert!(matches!(thermal_state(&h, 1.0, &TOL), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn random_density_rank_and_determinism() {
        let rho = random_density(4, 1, 9).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-10);
        assert_eq!(random_density(2, 2, 42).unwrap(), random_density(2, 2, 42).unwrap());

        let rho = random_density(4, 4, 7).unwrap();
        validate_density(rho.matrix(), &TOL).unwrap();
        let s = spectral_decompose(&rho, &TOL).unwrap();
        assert!(*s.eigenvalues.last().unwrap() > 0.0);

        let rho = random_density(5, 2, 1).unwrap();
        assert_eq!(spectral_decompose(&rho, &TOL).unwrap().rank(TOL.psd), 2);

        assert!(matches!(
            random_density(3, 0, 1),
            Err(Error::BadRank { rank: 0, dim: 3 })
        ));
        assert!(matches!(
            random_density(3, 4, 1),
            Err(Error::BadRank { rank: 4, dim: 3 })
        ));
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        let v = ComplexVector::from_column_slice(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            PureState::new(v.clone(), &TOL),
            Err(Error::NotNormalized { .. })
        ));
        let psi = PureState::normalized(v).unwrap();
        assert!((psi.vector().norm() - 1.0).abs() < 1e-15);
    }
}
