//! Quantum channels in Kraus form, erasure channels, and coherent
//! information.
//!
//! The erasure channel delivers its input intact with probability 1−ε and
//! otherwise replaces it with a flag state |e⟩ orthogonal to every input
//! level, so the output space is one dimension larger than the input. A
//! photon carrying n qubit DoFs is modeled as a single joint erasure on the
//! full 2ⁿ-dimensional carrier: one loss event takes every qubit riding the
//! photon with it. The independent per-qubit model is a different channel,
//! obtained with [`KrausChannel::product`].

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::label::{Dof, Photon, SubsystemLabel};
use crate::linalg::{cr, CMatrix, C64};
use crate::state::{DensityMatrix, StateVector};

/// Completeness tolerance for Σ K†K = I.
pub const CHANNEL_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map as a list of Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
    input_dim: usize,
    output_dim: usize,
    description: String,
}

impl KrausChannel {
    /// Validates that all operators share one shape and satisfy
    /// Σ K†K = I within `CHANNEL_TOL`.
    pub fn new(operators: Vec<CMatrix>, description: impl Into<String>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let (output_dim, input_dim) = (first.nrows(), first.ncols());
        if operators
            .iter()
            .any(|k| k.nrows() != output_dim || k.ncols() != input_dim)
        {
            return Err(Error::InvalidChannel(
                "Kraus operators have inconsistent shapes".into(),
            ));
        }
        let mut gram = CMatrix::zeros(input_dim, input_dim);
        for k in &operators {
            gram += k.adjoint() * k;
        }
        let dev = crate::linalg::max_abs(&(gram - CMatrix::identity(input_dim, input_dim)));
        if dev > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (completeness deviation {dev:.3e})"
            )));
        }
        Ok(Self { operators, input_dim, output_dim, description: description.into() })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![CMatrix::identity(dim, dim)],
            input_dim: dim,
            output_dim: dim,
            description: format!("identity({dim})"),
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Raw action Σ K m K† on a bare matrix of the input dimension.
    pub fn apply_to_matrix(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.output_dim, self.output_dim);
        for k in &self.operators {
            out += k * m * k.adjoint();
        }
        out
    }

    /// Parallel composition: Kraus set {Kᵢ ⊗ Lⱼ}. Models the two channels
    /// acting on separate carriers.
    pub fn product(&self, other: &Self) -> Self {
        let mut operators = Vec::with_capacity(self.operators.len() * other.operators.len());
        for k in &self.operators {
            for l in &other.operators {
                operators.push(k.kronecker(l));
            }
        }
        Self {
            operators,
            input_dim: self.input_dim * other.input_dim,
            output_dim: self.output_dim * other.output_dim,
            description: format!("{} x {}", self.description, other.description),
        }
    }

    /// Serial composition self ∘ inner: Kraus set {Kᵢ Lⱼ}.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.input_dim != inner.output_dim {
            return Err(Error::InvalidChannel(format!(
                "cannot compose: inner output dim {} vs outer input dim {}",
                inner.output_dim, self.input_dim
            )));
        }
        let mut operators = Vec::with_capacity(self.operators.len() * inner.operators.len());
        for k in &self.operators {
            for l in &inner.operators {
                operators.push(k * l);
            }
        }
        Ok(Self {
            operators,
            input_dim: inner.input_dim,
            output_dim: self.output_dim,
            description: format!("{} after {}", self.description, inner.description),
        })
    }
}

/// Parameters of an erasure channel on a d-dimensional carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureParams {
    pub epsilon: f64,
    pub input_dim: usize,
}

impl ErasureParams {
    pub fn new(epsilon: f64, input_dim: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!(
                "erasure probability {epsilon} outside [0, 1]"
            )));
        }
        if input_dim < 2 {
            return Err(Error::InvalidArgument(format!(
                "erasure input dimension {input_dim} below 2"
            )));
        }
        Ok(Self { epsilon, input_dim })
    }

    /// Output dimension: the input levels plus the erasure flag.
    pub fn output_dim(&self) -> usize {
        self.input_dim + 1
    }
}

/// Erasure channel ρ → (1−ε)·embed(ρ) + ε·|e⟩⟨e| with the flag level |e⟩
/// appended after the input basis.
pub fn erasure_channel(params: ErasureParams) -> Result<KrausChannel> {
    let d = params.input_dim;
    let out = params.output_dim();
    let keep = (1.0 - params.epsilon).sqrt();
    let lose = params.epsilon.sqrt();
    let mut operators = Vec::with_capacity(d + 1);
    let mut embed = CMatrix::zeros(out, d);
    for i in 0..d {
        embed[(i, i)] = cr(keep);
    }
    operators.push(embed);
    for i in 0..d {
        let mut k = CMatrix::zeros(out, d);
        k[(d, i)] = cr(lose);
        operators.push(k);
    }
    KrausChannel::new(operators, format!("erasure(eps={}, d={d})", params.epsilon))
}

/// Joint erasure of a photon carrying `n_dofs` qubits: a single loss event
/// on the 2ⁿ-dimensional carrier.
pub fn joint_carrier_erasure(epsilon: f64, n_dofs: u32) -> Result<KrausChannel> {
    let dim = 1usize << n_dofs;
    erasure_channel(ErasureParams::new(epsilon, dim)?)
}

/// Standard labels for capacity computations: the channel input `A` and the
/// retained ancilla `A1`, each of dimension `dim`.
pub fn capacity_labels(dim: usize) -> (SubsystemLabel, SubsystemLabel) {
    (
        SubsystemLabel { photon: Photon::A, dof: Dof::Generic(0), dim },
        SubsystemLabel { photon: Photon::Named("A1".into()), dof: Dof::Generic(0), dim },
    )
}

/// Maximally entangled input Σᵢ |ii⟩/√d over (A, A1).
pub fn max_entangled_input(dim: usize) -> Result<StateVector> {
    let (a, a1) = capacity_labels(dim);
    let mut amps = vec![C64::new(0.0, 0.0); dim * dim];
    let w = cr(1.0 / (dim as f64).sqrt());
    for i in 0..dim {
        amps[i * dim + i] = w;
    }
    StateVector::new(vec![a, a1], amps)
}

/// Coherent information I_C(A1⟩B) = H(B) − H(BA1) of `channel` acting on
/// the `sender` subsystem of the pure bipartite `input`. May be negative.
pub fn coherent_information(
    channel: &KrausChannel,
    input: &StateVector,
    sender: &SubsystemLabel,
) -> Result<f64> {
    if input.subsystems().len() != 2 {
        return Err(Error::InvalidArgument(
            "coherent information expects a bipartite input".into(),
        ));
    }
    let sender = input
        .subsystems()
        .iter()
        .find(|l| l.key() == sender.key())
        .ok_or_else(|| Error::UnknownLabel(sender.to_string()))?
        .clone();
    if sender.dim != channel.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel input dim {} vs sender dim {}",
            channel.input_dim(),
            sender.dim
        )));
    }
    let output = SubsystemLabel {
        photon: Photon::B,
        dof: Dof::Generic(0),
        dim: channel.output_dim(),
    };
    let omega = input
        .to_density()
        .apply_kraus_into(channel, &[sender], vec![output.clone()])?;
    let omega_b = omega.partial_trace(&[output])?;
    Ok(omega_b.entropy_bits() - omega.entropy_bits())
}

/// Candidate inputs for the coherent-information search.
#[derive(Debug, Clone)]
pub struct InputFamily {
    pub include_max_entangled: bool,
    pub include_product: bool,
    pub random_samples: usize,
    pub interpolations: usize,
}

impl Default for InputFamily {
    fn default() -> Self {
        Self {
            include_max_entangled: true,
            include_product: true,
            random_samples: 8,
            interpolations: 8,
        }
    }
}

impl InputFamily {
    fn candidates(&self, dim: usize, rng: &mut impl Rng) -> Result<Vec<StateVector>> {
        let (a, a1) = capacity_labels(dim);
        let labels = vec![a, a1];
        let mut out = Vec::new();
        if self.include_max_entangled {
            out.push(max_entangled_input(dim)?);
        }
        if self.include_product {
            out.push(StateVector::basis_ket(labels.clone(), &[0, 0])?);
        }
        for _ in 0..self.random_samples {
            out.push(crate::random::haar_random_state(labels.clone(), rng)?);
        }
        let maxent = max_entangled_input(dim)?;
        for k in 0..self.interpolations {
            let lambda = (k + 1) as f64 / (self.interpolations + 1) as f64;
            let random = crate::random::haar_random_state(labels.clone(), rng)?;
            let mut amps: Vec<C64> = maxent
                .amplitudes()
                .iter()
                .zip(random.amplitudes().iter())
                .map(|(m, r)| m * cr(lambda) + r * cr(1.0 - lambda))
                .collect();
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            for z in &mut amps {
                *z /= cr(norm);
            }
            out.push(StateVector::new(labels.clone(), amps)?);
        }
        Ok(out)
    }
}

/// Best coherent information over the family, then a local random-search
/// refinement spending `budget` evaluations. The maximally entangled input
/// is part of the default family, so for erasure channels (degradable, with
/// known optimum there) the result is at least the closed-form value.
pub fn coherent_information_max(
    channel: &KrausChannel,
    family: &InputFamily,
    budget: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let dim = channel.input_dim();
    let candidates = family.candidates(dim, rng)?;
    if candidates.is_empty() {
        return Err(Error::InvalidArgument("empty input family".into()));
    }
    let (a, _) = capacity_labels(dim);
    let mut best_value = f64::NEG_INFINITY;
    let mut best_state = None;
    for cand in candidates {
        let value = coherent_information(channel, &cand, &a)?;
        if value > best_value {
            best_value = value;
            best_state = Some(cand);
        }
    }
    let mut best_state = best_state.expect("nonempty candidate list");
    let labels = best_state.subsystems().to_vec();
    let mut scale = 0.05;
    let mut misses = 0usize;
    for _ in 0..budget {
        let mut amps: Vec<C64> = best_state
            .amplitudes()
            .iter()
            .map(|z| {
                let dr: f64 = StandardNormal.sample(rng);
                let di: f64 = StandardNormal.sample(rng);
                z + C64::new(dr * scale, di * scale)
            })
            .collect();
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        for z in &mut amps {
            *z /= cr(norm);
        }
        let cand = StateVector::new(labels.clone(), amps)?;
        let value = coherent_information(channel, &cand, &a)?;
        if value > best_value {
            best_value = value;
            best_state = cand;
            misses = 0;
        } else {
            misses += 1;
            if misses >= 8 {
                scale *= 0.5;
                misses = 0;
            }
        }
    }
    Ok(best_value)
}

/// Closed-form quantum capacity of the n-DoF joint-carrier erasure channel:
/// max(0, n·(1 − 2ε)).
pub fn erasure_capacity_formula(epsilon: f64, n_dofs: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "erasure probability {epsilon} outside [0, 1]"
        )));
    }
    if n_dofs < 1 {
        return Err(Error::InvalidArgument("n_dofs must be at least 1".into()));
    }
    Ok((n_dofs as f64 * (1.0 - 2.0 * epsilon)).max(0.0))
}

/// Convenience: apply an erasure channel to a density matrix on `targets`.
pub fn apply_erasure(
    rho: &DensityMatrix,
    epsilon: f64,
    targets: &[SubsystemLabel],
) -> Result<DensityMatrix> {
    let dim: usize = targets.iter().map(|l| l.dim).product();
    let channel = erasure_channel(ErasureParams::new(epsilon, dim)?)?;
    rho.apply_kraus(&channel, targets)
}
