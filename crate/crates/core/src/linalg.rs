//! Dense complex linear algebra helpers shared by every module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Everything here is a free
//! function over that type; the domain types (`DensityMatrix`, `KrausMap`, ...)
//! are thin validated wrappers around it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Components with modulus below this are skipped when fixing the global phase.
const PHASE_EPS: f64 = 1e-10;

const EIGEN_MAX_ITER: usize = 100_000;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Largest entry modulus.
pub fn max_norm(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermitian_residual(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// `(M + M†) / 2`
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Kronecker product `a ⊗ b` (first factor is the slow index).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `|a⟩⟨b|`
pub fn outer(a: &ComplexVector, b: &ComplexVector) -> ComplexMatrix {
    a * b.adjoint()
}

/// `‖A†A − I‖_max`, the unitarity (or isometry) residual of the columns of `a`.
pub fn isometry_residual(a: &ComplexMatrix) -> f64 {
    let gram = a.adjoint() * a;
    max_abs_diff(&gram, &identity(a.ncols()))
}

/// Multiplies `v` by a phase so that its first non-negligible component is real positive.
pub fn canonicalize_phase(v: &mut ComplexVector) {
    if let Some(z) = v.iter().find(|z| z.norm() > PHASE_EPS).copied() {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized first. Eigenvalues come back sorted descending, and
/// the matching eigenvectors (columns) are phase-canonicalized.
pub fn eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let sym = hermitian_part(m);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER).ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v: ComplexVector = eig.eigenvectors.column(src).into_owned();
        canonicalize_phase(&mut v);
        vectors.set_column(dst, &v);
    }
    Ok((values, vectors))
}

/// Eigenvalues only, sorted descending.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eigh(m).map(|(values, _)| values)
}

/// Deterministic generator used for every seeded construction in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of i.i.d. standard complex Gaussians, `(x + iy)/√2`.
pub fn gaussian_matrix<R: rand::Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    // Row-major fill keeps the stream independent of nalgebra's storage order.
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(i, j)] = c(re * scale, im * scale);
        }
    }
    m
}

/// Haar-distributed `rows × cols` isometry (`rows ≥ cols`) from the QR of a Gaussian matrix.
pub fn random_isometry<R: rand::Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = gaussian_matrix(rng, rows, cols);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            q.column_mut(j).iter_mut().for_each(|x| *x *= phase);
        }
    }
    q
}

pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    random_isometry(&mut seeded_rng(seed), n, n)
}

/// Unit-norm random vector.
pub fn random_unit_vector<R: rand::Rng>(rng: &mut R, n: usize) -> ComplexVector {
    let g = gaussian_matrix(rng, n, 1);
    let v: ComplexVector = g.column(0).into_owned();
    let norm = v.norm();
    v.unscale(norm)
}

/// Completes orthonormal columns to a full unitary with Gram–Schmidt.
///
/// Candidate columns are drawn from a seeded generator; each is orthogonalized
/// twice against the accepted columns and discarded (a fresh candidate is
/// drawn) when its residual norm drops below `1e-6`.
pub fn complete_to_unitary(cols: &ComplexMatrix, seed: u64) -> ComplexMatrix {
    let n = cols.nrows();
    let k = cols.ncols();
    let mut u = ComplexMatrix::zeros(n, n);
    for j in 0..k {
        u.set_column(j, &cols.column(j));
    }
    let mut rng = seeded_rng(seed);
    let mut filled = k;
    while filled < n {
        let mut v = random_unit_vector(&mut rng, n);
        for _ in 0..2 {
            for j in 0..filled {
                let q = u.column(j);
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm < 1e-6 {
            continue;
        }
        u.set_column(filled, &v.unscale(norm));
        filled += 1;
    }
    u
}

/// Builds a matrix from row-major entries.
pub fn from_row_major(rows: usize, cols: usize, data: &[Complex64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_row_slice(rows, cols, data)
}

/// Row-major entries of `m`.
pub fn to_row_major(m: &ComplexMatrix) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
