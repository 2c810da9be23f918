//! Projective measurement in an arbitrary orthonormal basis.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::cr;
use crate::state::StateVector;

/// Orthonormality / completeness tolerance for measurement bases.
pub const BASIS_TOL: f64 = 1e-10;

/// Picks measurement outcomes. [`BornSampler`] draws them with the supplied
/// probabilities; [`ForcedOutcomes`] replays a fixed script so every branch
/// of a protocol can be exercised deterministically.
pub trait OutcomeSelector {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize>;
}

/// Samples outcomes with Born probabilities from the wrapped RNG.
pub struct BornSampler<'a, R: Rng> {
    rng: &'a mut R,
}

impl<'a, R: Rng> BornSampler<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Self { rng }
    }
}

impl<R: Rng> OutcomeSelector for BornSampler<'_, R> {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize> {
        let u: f64 = self.rng.random();
        let mut acc = 0.0;
        for (i, &p) in probabilities.iter().enumerate() {
            acc += p;
            if u < acc {
                return Ok(i);
            }
        }
        Ok(probabilities.len() - 1)
    }
}

/// Replays a scripted outcome sequence; errors if the scripted branch has
/// (numerically) zero probability or the script runs out.
pub struct ForcedOutcomes {
    queue: std::collections::VecDeque<usize>,
}

impl ForcedOutcomes {
    pub fn new(outcomes: impl IntoIterator<Item = usize>) -> Self {
        Self { queue: outcomes.into_iter().collect() }
    }
}

impl OutcomeSelector for ForcedOutcomes {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize> {
        let index = self
            .queue
            .pop_front()
            .ok_or_else(|| Error::InvalidArgument("forced outcome script exhausted".into()))?;
        let p = *probabilities
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("forced outcome {index} out of range")))?;
        if p < 1e-12 {
            return Err(Error::ImpossibleOutcome { index, probability: p });
        }
        Ok(index)
    }
}

/// One projective measurement result.
#[derive(Debug, Clone)]
pub struct Measured {
    pub outcome: usize,
    pub probability: f64,
    /// The renormalized remainder; measured subsystems are gone.
    pub post_state: StateVector,
}

fn check_basis(state: &StateVector, basis: &[StateVector]) -> Result<usize> {
    let first = basis
        .first()
        .ok_or_else(|| Error::InvalidBasis("empty basis".into()))?;
    let target_dim = first.dim();
    for b in basis {
        if b.subsystems() != first.subsystems() {
            return Err(Error::InvalidBasis(
                "basis elements live on different subsystems".into(),
            ));
        }
    }
    for label in first.subsystems() {
        if !state.subsystems().iter().any(|l| l.key() == label.key()) {
            return Err(Error::UnknownLabel(label.to_string()));
        }
    }
    if basis.len() != target_dim {
        return Err(Error::InvalidBasis(format!(
            "{} elements for a {target_dim}-dimensional target",
            basis.len()
        )));
    }
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let overlap = a.inner(b)?;
            let expected = if i == j { 1.0 } else { 0.0 };
            if (overlap.re - expected).abs() > BASIS_TOL || overlap.im.abs() > BASIS_TOL {
                return Err(Error::InvalidBasis(format!(
                    "Gram deviation at ({i}, {j}): {overlap}"
                )));
            }
        }
    }
    Ok(target_dim)
}

/// Outcome probabilities of measuring `state` in `basis` (on the basis's
/// subsystems). Sums to 1 within `BASIS_TOL` for a complete basis.
pub fn outcome_probabilities(state: &StateVector, basis: &[StateVector]) -> Result<Vec<f64>> {
    check_basis(state, basis)?;
    basis
        .iter()
        .map(|b| Ok(state.contract(b)?.1.iter().map(|a| a.norm_sqr()).sum()))
        .collect()
}

/// Measure `state` in the orthonormal, complete `basis`; the outcome index
/// is chosen by `selector`, and the measured subsystems are traced out of
/// the returned post-state.
pub fn measure_in_basis(
    state: &StateVector,
    basis: &[StateVector],
    selector: &mut dyn OutcomeSelector,
) -> Result<Measured> {
    check_basis(state, basis)?;
    let mut residuals = Vec::with_capacity(basis.len());
    let mut probabilities = Vec::with_capacity(basis.len());
    for b in basis {
        let (labels, residual) = state.contract(b)?;
        let p: f64 = residual.iter().map(|a| a.norm_sqr()).sum();
        probabilities.push(p);
        residuals.push((labels, residual));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > BASIS_TOL {
        return Err(Error::InvalidBasis(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    let outcome = selector.select(&probabilities)?;
    let probability = probabilities[outcome];
    if probability < 1e-12 {
        return Err(Error::ImpossibleOutcome { index: outcome, probability });
    }
    let (labels, residual) = residuals.swap_remove(outcome);
    let scale = cr(1.0 / probability.sqrt());
    let post_state = StateVector::assemble(labels, residual * scale);
    Ok(Measured { outcome, probability, post_state })
}
