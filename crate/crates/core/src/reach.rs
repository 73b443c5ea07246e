//! Breadth-first reachability over finite compositions of a control alphabet.
//!
//! A control set is a finite list of labeled channels. Sequences of generators
//! stand in for time-dependent controls, with sequence length playing the role
//! of control time. [`reach_state`] searches state space from a source state;
//! [`reach_channel`] searches channel space from the identity map. Only
//! per-target questions are answered: whether a control set generates *every*
//! channel has no finite certificate and is not attempted.
//!
//! Visited nodes are deduplicated by linear scan (trace distance for states,
//! Choi max-norm for channels) against the query tolerance. Expansion follows
//! generator declaration order, so the first witness found is the shortest and
//! lexicographically earliest.

use rand::Rng;

use crate::channel::{self, choi_to_kraus, kraus_to_choi, ChoiMatrix, KrausMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{self, random_density, DensityMatrix};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub label: String,
    pub channel: KrausMap,
}

/// Labeled generator channels of one common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSet {
    dim: usize,
    generators: Vec<Generator>,
}

impl ControlSet {
    pub fn new(dim: usize, generators: Vec<Generator>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.channel.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: g.channel.dim(),
                });
            }
            if generators[..i].iter().any(|h| h.label == g.label) {
                return Err(Error::DuplicateLabel(g.label.clone()));
            }
        }
        Ok(ControlSet { dim, generators })
    }

    /// Convenience constructor from `(label, channel)` pairs.
    pub fn from_pairs<S: Into<String>>(dim: usize, pairs: Vec<(S, KrausMap)>) -> Result<Self> {
        let generators = pairs
            .into_iter()
            .map(|(label, channel)| Generator {
                label: label.into(),
                channel,
            })
            .collect();
        Self::new(dim, generators)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, label: &str) -> Option<&KrausMap> {
        self.generators.iter().find(|g| g.label == label).map(|g| &g.channel)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReachabilityReport {
    pub reached: bool,
    /// Generator labels, first applied first.
    pub witness: Vec<String>,
    pub depth_explored: usize,
    /// New (deduplicated) nodes per depth; entry 0 is the root.
    pub frontier_sizes: Vec<usize>,
    /// Trace distance (states) or Choi max-norm distance (channels) from the
    /// nearest visited node to the target.
    pub closest_distance: f64,
}

fn check_query(dim: usize, controls: &ControlSet, tol: f64) -> Result<()> {
    if controls.dim != dim {
        return Err(Error::DimMismatch {
            expected: controls.dim,
            found: dim,
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Trace distance, skipping the eigensolve when half the max-norm gap already
/// exceeds `cutoff` (`‖Δ‖_max ≤ ‖Δ‖₁ = 2·T`).
fn state_distance_within(a: &DensityMatrix, b: &DensityMatrix, cutoff: f64) -> Result<Option<f64>> {
    if a.distance_max(b) / 2.0 > cutoff {
        return Ok(None);
    }
    let d = state::trace_distance(a, b)?;
    Ok((d <= cutoff).then_some(d))
}

fn labels(controls: &ControlSet, path: &[usize]) -> Vec<String> {
    path.iter().map(|&i| controls.generators[i].label.clone()).collect()
}

fn resolve<'a>(controls: &'a ControlSet, witness: &[String]) -> Result<Vec<&'a KrausMap>> {
    witness
        .iter()
        .map(|label| {
            controls
                .get(label)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown generator label {label:?}")))
        })
        .collect()
}

/// Applies the witness generators to `rho0` in order.
pub fn replay_state(controls: &ControlSet, witness: &[String], rho0: &DensityMatrix) -> Result<DensityMatrix> {
    resolve(controls, witness)?
        .into_iter()
        .try_fold(rho0.clone(), |rho, g| g.apply(&rho))
}

/// Composes the witness generators, first applied first, starting from the identity.
pub fn replay_channel(controls: &ControlSet, witness: &[String]) -> Result<KrausMap> {
    resolve(controls, witness)?
        .into_iter()
        .try_fold(KrausMap::identity(controls.dim), |acc, g| channel::compose(g, &acc))
}

/// Searches for a generator sequence taking `rho0` to within trace distance
/// `tol` of `target`.
pub fn reach_state(
    rho0: &DensityMatrix,
    target: &DensityMatrix,
    controls: &ControlSet,
    max_depth: usize,
    tol: f64,
) -> Result<ReachabilityReport> {
    check_query(rho0.dim(), controls, tol)?;
    check_query(target.dim(), controls, tol)?;

    let mut closest = state::trace_distance(rho0, target)?;
    let mut report = ReachabilityReport {
        reached: closest <= tol,
        witness: Vec::new(),
        depth_explored: 0,
        frontier_sizes: vec![1],
        closest_distance: closest,
    };
    if report.reached {
        return Ok(report);
    }

    let mut visited = vec![rho0.clone()];
    let mut frontier: Vec<(DensityMatrix, Vec<usize>)> = vec![(rho0.clone(), Vec::new())];
    for depth in 1..=max_depth {
        let mut next = Vec::new();
        for (rho, path) in &frontier {
            for (gi, g) in controls.generators.iter().enumerate() {
                let out = g.channel.apply(rho)?;
                let d = state::trace_distance(&out, target)?;
                closest = closest.min(d);
                let mut out_path = path.clone();
                out_path.push(gi);
                if d <= tol {
                    report.reached = true;
                    report.witness = labels(controls, &out_path);
                    report.depth_explored = depth;
                    report.frontier_sizes.push(next.len() + 1);
                    report.closest_distance = closest;
                    return Ok(report);
                }
                let mut duplicate = false;
                for v in &visited {
                    if state_distance_within(v, &out, tol)?.is_some() {
                        duplicate = true;
                        break;
                    }
                }
                if !duplicate {
                    visited.push(out.clone());
                    next.push((out, out_path));
                }
            }
        }
        report.frontier_sizes.push(next.len());
        report.depth_explored = depth;
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    report.closest_distance = closest;
    Ok(report)
}

struct ChannelNode {
    channel: KrausMap,
    path: Vec<usize>,
}

/// Searches compositions of the generators, starting from the identity, for
/// one whose Choi matrix is within max-norm `tol` of the target's.
///
/// Intermediate channels are re-expressed in minimal form whenever their
/// operator count exceeds `N²`.
pub fn reach_channel(
    target: &KrausMap,
    controls: &ControlSet,
    max_depth: usize,
    tol: f64,
) -> Result<ReachabilityReport> {
    check_query(target.dim(), controls, tol)?;
    let n = controls.dim;
    let kraus_tol = Tolerances::DEFAULT;
    let target_choi = kraus_to_choi(target);
    let distance = |c: &ChoiMatrix| linalg::max_abs_diff(c.matrix(), target_choi.matrix());

    let root = KrausMap::identity(n);
    let root_choi = kraus_to_choi(&root);
    let mut closest = distance(&root_choi);
    let mut report = ReachabilityReport {
        reached: closest <= tol,
        witness: Vec::new(),
        depth_explored: 0,
        frontier_sizes: vec![1],
        closest_distance: closest,
    };
    if report.reached {
        return Ok(report);
    }

    let mut visited = vec![root_choi];
    let mut frontier = vec![ChannelNode {
        channel: root,
        path: Vec::new(),
    }];
    for depth in 1..=max_depth {
        let mut next: Vec<ChannelNode> = Vec::new();
        for node in &frontier {
            for (gi, g) in controls.generators.iter().enumerate() {
                let mut composed = channel::compose(&g.channel, &node.channel)?;
                let choi = kraus_to_choi(&composed);
                if composed.len() > n * n {
                    composed = choi_to_kraus(&choi, &kraus_tol)?;
                }
                let d = distance(&choi);
                closest = closest.min(d);
                let mut path = node.path.clone();
                path.push(gi);
                if d <= tol {
                    report.reached = true;
                    report.witness = labels(controls, &path);
                    report.depth_explored = depth;
                    report.frontier_sizes.push(next.len() + 1);
                    report.closest_distance = closest;
                    return Ok(report);
                }
                let duplicate = visited
                    .iter()
                    .any(|v| linalg::max_abs_diff(v.matrix(), choi.matrix()) <= tol);
                if !duplicate {
                    visited.push(choi);
                    next.push(ChannelNode {
                        channel: composed,
                        path,
                    });
                }
            }
        }
        report.frontier_sizes.push(next.len());
        report.depth_explored = depth;
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    report.closest_distance = closest;
    Ok(report)
}

/// Fraction of sampled `(ρ₁, ρ₂)` pairs for which [`reach_state`] succeeds.
///
/// Sources are seeded random states of random rank. Targets are drawn the same
/// way, or uniformly from `targets` when given.
pub fn dsc_sample(
    controls: &ControlSet,
    state_samples: usize,
    max_depth: usize,
    tol: f64,
    seed: u64,
    targets: Option<&[DensityMatrix]>,
) -> Result<f64> {
    if state_samples == 0 {
        return Err(Error::InvalidArgument("state_samples must be at least 1".into()));
    }
    if targets.is_some_and(|t| t.is_empty()) {
        return Err(Error::InvalidArgument("target pool is empty".into()));
    }
    let n = controls.dim;
    let mut rng = linalg::seeded_rng(seed);
    let mut hits = 0usize;
    for _ in 0..state_samples {
        let rho1 = random_density(n, rng.random_range(1..=n), rng.random())?;
        let rho2 = match targets {
            Some(pool) => pool[rng.random_range(0..pool.len())].clone(),
            None => random_density(n, rng.random_range(1..=n), rng.random())?,
        };
        if reach_state(&rho1, &rho2, controls, max_depth, tol)?.reached {
            hits += 1;
        }
    }
    Ok(hits as f64 / state_samples as f64)
}
