//! Channel synthesis: explicit Kraus maps that carry one state to another.
//!
//! Three families are provided. All-to-one maps ([`all_to_pure`],
//! [`all_to_any`]) send every input to the same target. One-to-one maps
//! ([`pure_to_any`], [`qubit_pure_to_pure`]) hit the target only from a chosen
//! pure input. Unitary maps ([`unitary_transfer`]) connect states with equal
//! spectra. [`synthesize`] picks among them for a given pair.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{self, KrausMap};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix};
use crate::state::{self, DensityMatrix, PureState};
use crate::tolerance::Tolerances;

/// Orthonormal basis `{χⱼ}` used on the input side of all-to-one maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisChoice {
    #[default]
    Computational,
    /// Columns of a seeded Haar-random unitary.
    Seeded(u64),
}

impl BasisChoice {
    /// The basis vectors as the columns of a unitary.
    pub fn matrix(&self, dim: usize) -> ComplexMatrix {
        match *self {
            BasisChoice::Computational => linalg::identity(dim),
            BasisChoice::Seeded(seed) => linalg::random_unitary(dim, seed),
        }
    }
}

/// `Kᵢ = |ψ⟩⟨χᵢ|`: every state goes to `|ψ⟩⟨ψ|`.
pub fn all_to_pure(psi: &PureState, basis: BasisChoice) -> KrausMap {
    let n = psi.dim();
    let chi = basis.matrix(n);
    let ops = chi.column_iter().map(|col| psi.vector() * col.adjoint()).collect();
    KrausMap::from_trusted(n, ops)
}

/// Kept eigenpairs of `rho` (eigenvalue above `tol.rank`) with the weights
/// renormalized to sum to one.
fn support(rho: &DensityMatrix, tol: &Tolerances) -> Result<Vec<(f64, PureState)>> {
    let spectrum = state::spectral_decompose(rho, tol)?;
    let kept: Vec<(f64, PureState)> = spectrum
        .eigenvalues
        .into_iter()
        .zip(spectrum.eigenvectors)
        .filter(|(p, _)| *p > tol.rank)
        .collect();
    let total: f64 = kept.iter().map(|(p, _)| p).sum();
    Ok(kept.into_iter().map(|(p, v)| (p / total, v)).collect())
}

/// `K_{ij} = √pᵢ |φᵢ⟩⟨χⱼ|` over the support of `rho_f`: every state goes to `rho_f`.
///
/// Operators are ordered lexicographically in `(i, j)`.
pub fn all_to_any(rho_f: &DensityMatrix, basis: BasisChoice, tol: &Tolerances) -> Result<KrausMap> {
    let n = rho_f.dim();
    let chi = basis.matrix(n);
    let mut ops = Vec::new();
    for (p, phi) in support(rho_f, tol)? {
        let scaled = phi.vector().scale(p.sqrt());
        for col in chi.column_iter() {
            ops.push(&scaled * col.adjoint());
        }
    }
    Ok(KrausMap::from_trusted(n, ops))
}

/// Unitary `U` with `U|from⟩ = |to⟩` and `⟨to|U|from⟩ = 1`.
///
/// Rotates within `span{from, to}` and acts as the identity on the orthogonal
/// complement; when the two vectors are parallel it is a global phase.
pub fn plane_rotation(from: &PureState, to: &PureState) -> ComplexMatrix {
    let n = from.dim();
    let psi = from.vector();
    let a = from.inner(to);
    let mut r = to.vector() - psi * a;
    let b = r.norm();
    if b <= 1e-14 {
        return linalg::identity(n) * (a / a.norm());
    }
    r.unscale_mut(b);
    // Second pass against cancellation when `to` is nearly parallel to `from`.
    let overlap = psi.dotc(&r);
    r -= psi * overlap;
    let e2 = r.normalize();

    let mut u = linalg::identity(n);
    u += linalg::outer(psi, psi) * (a - 1.0);
    u -= linalg::outer(psi, &e2).scale(b);
    u += linalg::outer(&e2, psi).scale(b);
    u += linalg::outer(&e2, &e2) * (a.conj() - 1.0);
    u
}

/// `Kᵢ = √pᵢ Uᵢ` with `Uᵢ|ψ⟩ = |φᵢ⟩`: sends `|ψ⟩⟨ψ|` to `rho_f`.
pub fn pure_to_any(psi: &PureState, rho_f: &DensityMatrix, tol: &Tolerances) -> Result<KrausMap> {
    if psi.dim() != rho_f.dim() {
        return Err(Error::DimMismatch {
            expected: psi.dim(),
            found: rho_f.dim(),
        });
    }
    let ops = support(rho_f, tol)?
        .into_iter()
        .map(|(p, phi)| plane_rotation(psi, &phi).scale(p.sqrt()))
        .collect();
    Ok(KrausMap::from_trusted(psi.dim(), ops))
}

/// Pure-to-any after all-to-pure through the intermediate `|ψ⟩`; the result is
/// again an all-to-one map onto `rho_f`.
pub fn composed_pta_atp(
    psi: &PureState,
    rho_f: &DensityMatrix,
    basis: BasisChoice,
    tol: &Tolerances,
) -> Result<KrausMap> {
    let pta = pure_to_any(psi, rho_f, tol)?;
    let atp = all_to_pure(psi, basis);
    channel::compose(&pta, &atp)
}

/// Two-operator qubit map between pure states, and whether it is unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitPtp {
    pub channel: KrausMap,
    pub is_unitary: bool,
}

/// `K₁ = x₁|1⟩⟨0| + x₂|0⟩⟨1|`, `K₂ = x₃|1⟩⟨0| + x₄|0⟩⟨1|`, moved into the frame
/// where `|0⟩ → ψ_in` and `|1⟩ → ψ_f`.
///
/// Requires `|x₁|²+|x₃|² = 1` and `|x₂|²+|x₄|² = 1`. The map is unitary when
/// `K₁` and `K₂` are linearly dependent, judged by the second singular value
/// of the stacked operators squared against `tol.rank` (the same threshold
/// that makes the Choi rank one). Zero operators are dropped.
pub fn qubit_pure_to_pure(
    x: [Complex64; 4],
    psi_in: &PureState,
    psi_f: &PureState,
    tol: &Tolerances,
) -> Result<QubitPtp> {
    for psi in [psi_in, psi_f] {
        if psi.dim() != 2 {
            return Err(Error::DimMismatch {
                expected: 2,
                found: psi.dim(),
            });
        }
    }
    if !x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let residual = (x[0].norm_sqr() + x[2].norm_sqr() - 1.0).abs();
    if residual > tol.tp {
        return Err(Error::BadCoefficients {
            constraint: "|x1|^2+|x3|^2=1",
            residual,
        });
    }
    let residual = (x[1].norm_sqr() + x[3].norm_sqr() - 1.0).abs();
    if residual > tol.tp {
        return Err(Error::BadCoefficients {
            constraint: "|x2|^2+|x4|^2=1",
            residual,
        });
    }

    let zero = c(0.0, 0.0);
    let k1 = linalg::from_row_major(2, 2, &[zero, x[1], x[0], zero]);
    let k2 = linalg::from_row_major(2, 2, &[zero, x[3], x[2], zero]);

    let a = plane_rotation(&PureState::basis(2, 0), psi_in);
    let b = plane_rotation(&PureState::basis(2, 1), psi_f);
    let ops: Vec<ComplexMatrix> = [k1, k2].iter().map(|k| &b * k * a.adjoint()).collect();

    let stacked = DMatrix::from_fn(4, 2, |r, col| ops[col][(r / 2, r % 2)]);
    let sigma_min = stacked.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
    let is_unitary = sigma_min * sigma_min <= tol.rank;

    let channel = KrausMap::from_trusted(2, ops).pruned(tol.rank);
    Ok(QubitPtp { channel, is_unitary })
}

/// `U = V₂V₁†` from eigenvectors paired in descending-eigenvalue order.
///
/// Fails unless the sorted spectra agree within `tol.eq`.
pub fn unitary_transfer(rho1: &DensityMatrix, rho2: &DensityMatrix, tol: &Tolerances) -> Result<KrausMap> {
    let gap = state::spectrum_gap(rho1, rho2)?;
    if gap > tol.eq {
        return Err(Error::NotKinematicallyEquivalent { gap });
    }
    let v1 = eigenvector_matrix(rho1, tol)?;
    let v2 = eigenvector_matrix(rho2, tol)?;
    Ok(KrausMap::from_trusted(rho1.dim(), vec![v2 * v1.adjoint()]))
}

fn eigenvector_matrix(rho: &DensityMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let spectrum = state::spectral_decompose(rho, tol)?;
    let cols: Vec<_> = spectrum.eigenvectors.iter().map(|v| v.vector().clone()).collect();
    Ok(ComplexMatrix::from_columns(&cols))
}

/// How [`synthesize`] should build its channel.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Strategy {
    /// Unitary transfer when spectra match, else pure-to-any from a pure
    /// input, else all-to-any.
    #[default]
    Auto,
    UnitaryTransfer,
    PureToAny,
    AllToPure {
        basis: BasisChoice,
    },
    AllToAny {
        basis: BasisChoice,
    },
    /// Pure-to-any after all-to-pure; the intermediate defaults to `|0⟩`.
    ComposedPtaAtp {
        intermediate: Option<PureState>,
        basis: BasisChoice,
    },
    QubitPtp {
        coeffs: [Complex64; 4],
    },
}

/// The construction that produced a synthesized channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyTag {
    UnitaryTransfer,
    PureToAny,
    AllToPure,
    AllToAny,
    ComposedPtaAtp,
    QubitPtp,
}

impl StrategyTag {
    /// Name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            StrategyTag::UnitaryTransfer => "unitary",
            StrategyTag::PureToAny => "pta",
            StrategyTag::AllToPure => "atp",
            StrategyTag::AllToAny => "all-to-any",
            StrategyTag::ComposedPtaAtp => "composed",
            StrategyTag::QubitPtp => "qubit-ptp",
        }
    }
}

impl fmt::Display for StrategyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub strategy: StrategyTag,
    pub channel: KrausMap,
}

/// Dominant eigenvector when `rho` is pure within `tol.tr`.
pub fn as_pure(rho: &DensityMatrix, tol: &Tolerances) -> Result<Option<PureState>> {
    let spectrum = state::spectral_decompose(rho, tol)?;
    if spectrum.eigenvalues.first().copied().unwrap_or(0.0) >= 1.0 - tol.tr {
        Ok(spectrum.eigenvectors.into_iter().next())
    } else {
        Ok(None)
    }
}

fn require_pure(rho: &DensityMatrix, strategy: StrategyTag, which: &str, tol: &Tolerances) -> Result<PureState> {
    as_pure(rho, tol)?.ok_or_else(|| Error::StrategyInapplicable {
        strategy: strategy.name(),
        reason: format!("{which} state is not pure"),
    })
}

/// Builds a channel taking `rho_in` to `rho_f` with the requested strategy.
pub fn synthesize(
    rho_in: &DensityMatrix,
    rho_f: &DensityMatrix,
    strategy: &Strategy,
    tol: &Tolerances,
) -> Result<Synthesis> {
    if rho_in.dim() != rho_f.dim() {
        return Err(Error::DimMismatch {
            expected: rho_in.dim(),
            found: rho_f.dim(),
        });
    }
    let n = rho_in.dim();
    let (tag, channel) = match strategy {
        Strategy::Auto => {
            if state::spectrum_gap(rho_in, rho_f)? <= tol.eq {
                (StrategyTag::UnitaryTransfer, unitary_transfer(rho_in, rho_f, tol)?)
            } else if let Some(psi) = as_pure(rho_in, tol)? {
                (StrategyTag::PureToAny, pure_to_any(&psi, rho_f, tol)?)
            } else {
                (
                    StrategyTag::AllToAny,
                    all_to_any(rho_f, BasisChoice::Computational, tol)?,
                )
            }
        }
        Strategy::UnitaryTransfer => {
            let channel = unitary_transfer(rho_in, rho_f, tol).map_err(|e| match e {
                Error::NotKinematicallyEquivalent { gap } => Error::StrategyInapplicable {
                    strategy: StrategyTag::UnitaryTransfer.name(),
                    reason: format!("spectra differ by {gap:e}; a unitary cannot change the spectrum"),
                },
                other => other,
            })?;
            (StrategyTag::UnitaryTransfer, channel)
        }
        Strategy::PureToAny => {
            let psi = require_pure(rho_in, StrategyTag::PureToAny, "input", tol)?;
            (StrategyTag::PureToAny, pure_to_any(&psi, rho_f, tol)?)
        }
        Strategy::AllToPure { basis } => {
            let psi = require_pure(rho_f, StrategyTag::AllToPure, "target", tol)?;
            (StrategyTag::AllToPure, all_to_pure(&psi, *basis))
        }
        Strategy::AllToAny { basis } => (StrategyTag::AllToAny, all_to_any(rho_f, *basis, tol)?),
        Strategy::ComposedPtaAtp { intermediate, basis } => {
            let psi = intermediate.clone().unwrap_or_else(|| PureState::basis(n, 0));
            if psi.dim() != n {
                return Err(Error::DimMismatch {
                    expected: n,
                    found: psi.dim(),
                });
            }
            (StrategyTag::ComposedPtaAtp, composed_pta_atp(&psi, rho_f, *basis, tol)?)
        }
        Strategy::QubitPtp { coeffs } => {
            if n != 2 {
                return Err(Error::StrategyInapplicable {
                    strategy: StrategyTag::QubitPtp.name(),
                    reason: format!("needs a qubit, got dimension {n}"),
                });
            }
            let psi_in = require_pure(rho_in, StrategyTag::QubitPtp, "input", tol)?;
            let psi_f = require_pure(rho_f, StrategyTag::QubitPtp, "target", tol)?;
            let ptp = qubit_pure_to_pure(*coeffs, &psi_in, &psi_f, tol)?;
            (StrategyTag::QubitPtp, ptp.channel)
        }
    };
    Ok(Synthesis { strategy: tag, channel })
}

/// `‖Φ[ρ_in] − ρ_f‖_max`
pub fn transfer_residual(phi: &KrausMap, rho_in: &DensityMatrix, rho_f: &DensityMatrix) -> Result<f64> {
    let out = phi.apply(rho_in)?;
    if out.dim() != rho_f.dim() {
        return Err(Error::DimMismatch {
            expected: out.dim(),
            found: rho_f.dim(),
        });
    }
    Ok(out.distance_max(rho_f))
}
