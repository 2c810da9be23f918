//! The multiplex/demultiplex teleportation engine.
//!
//! Multiplexing teleports N source qubits (one per degree of freedom) onto
//! the N DoFs of a single carrier photon C, using one Bell pair per DoF
//! anchored on C. The carrier is transmitted through configurable erasure
//! sites and demultiplexed at the receiver onto separate output photons,
//! again one Bell pair per DoF. Every Bell measurement outcome drives a
//! Pauli correction on the far end of its pair; the correction table is
//! derived at startup by exhaustive search rather than assumed, so any
//! consistent phase convention for the resource states works.
//!
//! Erasure is heralded photon loss: each configured site is an independent
//! Bernoulli(ε) event on the carrier, and one loss event takes all of the
//! carrier's DoF qubits at once. A lost carrier is reconstructed as the
//! maximally mixed state for scoring (see [`LostPolicy`]).

use std::sync::OnceLock;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{Dof, Photon, SubsystemLabel};
use crate::measure::{measure_in_basis, ForcedOutcomes, OutcomeSelector};
use crate::state::{fidelity, DensityMatrix, Operator, StateVector};
use crate::states::{
    bell_state, carrier_labels, pauli_operator, protocol_input_labels, protocol_output_labels,
    BellKind, Pairing, PauliKind, ResourceSpec,
};

/// Pauli corrections available to the teleportation decoder. `XZ` is the
/// product X·Z (equal to iY up to phase).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CorrectionPauli {
    I,
    X,
    Z,
    XZ,
}

impl CorrectionPauli {
    pub const ALL: [CorrectionPauli; 4] = [
        CorrectionPauli::I,
        CorrectionPauli::X,
        CorrectionPauli::Z,
        CorrectionPauli::XZ,
    ];

    pub fn operator(self) -> Operator {
        match self {
            CorrectionPauli::I => pauli_operator(PauliKind::I),
            CorrectionPauli::X => pauli_operator(PauliKind::X),
            CorrectionPauli::Z => pauli_operator(PauliKind::Z),
            CorrectionPauli::XZ => {
                let x = pauli_operator(PauliKind::X);
                let z = pauli_operator(PauliKind::Z);
                Operator::unitary(x.matrix() * z.matrix(), vec![2])
                    .expect("product of unitaries is unitary")
            }
        }
    }
}

impl std::fmt::Display for CorrectionPauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Table mapping (resource Bell kind, measured Bell kind) to the Pauli that
/// completes the teleportation. Derived by checking every candidate against
/// three tomographically distinct probes; construction fails loudly if no
/// candidate reconstructs the source, which guards against sign errors in
/// the resource states.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionTable {
    entries: [[CorrectionPauli; 4]; 4],
}

static SHARED_TABLE: OnceLock<CorrectionTable> = OnceLock::new();

impl CorrectionTable {
    pub fn derive() -> Result<Self> {
        let near = SubsystemLabel::qubit(Photon::Named("NEAR".into()), Dof::Sam);
        let far = SubsystemLabel::qubit(Photon::Named("TGT".into()), Dof::Sam);
        let mut entries = [[CorrectionPauli::I; 4]; 4];
        for resource_kind in BellKind::ALL {
            let resource = bell_state(resource_kind, &near, &far)?;
            for outcome in BellKind::ALL {
                entries[resource_kind.index()][outcome.index()] =
                    find_correction(&resource, &near, &far, outcome)?
                        .ok_or(Error::CorrectionNotFound { resource: resource_kind, outcome })?;
            }
        }
        Ok(Self { entries })
    }

    /// Process-wide table; derivation runs once and panics on failure.
    pub fn shared() -> &'static CorrectionTable {
        SHARED_TABLE.get_or_init(|| {
            CorrectionTable::derive().expect("correction table derivation failed")
        })
    }

    pub fn correction(&self, resource: BellKind, outcome: BellKind) -> CorrectionPauli {
        self.entries[resource.index()][outcome.index()]
    }
}

/// Search {I, X, Z, XZ} for the Pauli that completes teleportation through
/// `resource` (a two-qubit state on `near`, `far`) conditioned on the Bell
/// `outcome`. Three tomographically distinct probes pin the map, so a
/// candidate passes only if it reconstructs every source state. Returns
/// `None` when no Pauli works — the signature of a resource that is not a
/// maximally entangled pair (or a sign error in its construction).
pub fn find_correction(
    resource: &StateVector,
    near: &SubsystemLabel,
    far: &SubsystemLabel,
    outcome: BellKind,
) -> Result<Option<CorrectionPauli>> {
    let src = SubsystemLabel::qubit(Photon::Named("SRC".into()), Dof::Sam);
    let h = crate::linalg::cr(std::f64::consts::FRAC_1_SQRT_2);
    let probes = [
        StateVector::basis_ket(vec![src.clone()], &[0])?,
        StateVector::new(vec![src.clone()], vec![h, h])?,
        StateVector::new(vec![src.clone()], vec![h, crate::linalg::c(0.0, 1.0) * h])?,
    ];
    'candidates: for candidate in CorrectionPauli::ALL {
        for probe in &probes {
            let joint = probe.tensor(resource)?;
            let mut forced = ForcedOutcomes::new([outcome.index()]);
            let bsm = match bell_measurement(&joint, (&src, near), &mut forced) {
                Ok(bsm) => bsm,
                // an outcome this resource can never produce
                Err(Error::ImpossibleOutcome { .. }) => return Ok(None),
                Err(err) => return Err(err),
            };
            let corrected =
                bsm.post_state.apply(&candidate.operator(), std::slice::from_ref(far))?;
            let expected = probe.relabeled(&[(src.clone(), far.clone())])?;
            if corrected.overlap_fidelity(&expected)? < 1.0 - 1e-9 {
                continue 'candidates;
            }
        }
        return Ok(Some(candidate));
    }
    Ok(None)
}

/// A prepared resource: its state plus the pairing layout used to consume
/// it.
#[derive(Debug, Clone)]
pub struct Resource {
    pub state: StateVector,
    pub pairings: Vec<Pairing>,
    pub spectators: Vec<(SubsystemLabel, usize)>,
}

impl Resource {
    pub fn prepare(spec: &ResourceSpec) -> Result<Self> {
        Ok(Self {
            state: spec.build()?,
            pairings: spec.pairings.clone(),
            spectators: spec.spectators.clone(),
        })
    }
}

/// Result of one Bell-state measurement.
#[derive(Debug, Clone)]
pub struct BellOutcome {
    pub kind: BellKind,
    pub probability: f64,
    /// State with the measured pair traced out.
    pub post_state: StateVector,
}

/// Project the labeled pair onto the Bell basis; the measured qubits are
/// consumed. Assumes an ideal, complete Bell analyzer.
pub fn bell_measurement(
    state: &StateVector,
    pair: (&SubsystemLabel, &SubsystemLabel),
    selector: &mut dyn OutcomeSelector,
) -> Result<BellOutcome> {
    let basis: Vec<StateVector> = BellKind::ALL
        .iter()
        .map(|&k| bell_state(k, pair.0, pair.1))
        .collect::<Result<_>>()?;
    let measured = measure_in_basis(state, &basis, selector)?;
    Ok(BellOutcome {
        kind: BellKind::from_index(measured.outcome)?,
        probability: measured.probability,
        post_state: measured.post_state,
    })
}

/// One teleported DoF: the measurement outcome and the correction applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DofEvent {
    pub dof: Dof,
    pub outcome: BellKind,
    pub correction: CorrectionPauli,
}

/// Teleport the `source` qubit through the Bell pair (`near`, `far`)
/// prepared in `resource_kind`: Bell-measure (source, near), then apply the
/// table's Pauli to `far`. Entanglement of the source with any spectator
/// subsystems is preserved.
pub fn teleport_dof(
    state: &StateVector,
    source: &SubsystemLabel,
    near: &SubsystemLabel,
    far: &SubsystemLabel,
    resource_kind: BellKind,
    table: &CorrectionTable,
    selector: &mut dyn OutcomeSelector,
) -> Result<(StateVector, DofEvent)> {
    let bsm = bell_measurement(state, (source, near), selector)?;
    let correction = table.correction(resource_kind, bsm.kind);
    let corrected = bsm.post_state.apply(&correction.operator(), std::slice::from_ref(far))?;
    Ok((corrected, DofEvent { dof: far.dof, outcome: bsm.kind, correction }))
}

fn teleport_through(
    state: &StateVector,
    sources: &[SubsystemLabel],
    resource: &Resource,
    table: &CorrectionTable,
    selector: &mut dyn OutcomeSelector,
) -> Result<(StateVector, Vec<DofEvent>)> {
    if sources.len() != resource.pairings.len() {
        return Err(Error::InvalidArgument(format!(
            "{} sources for {} resource pairings",
            sources.len(),
            resource.pairings.len()
        )));
    }
    for (source, pairing) in sources.iter().zip(&resource.pairings) {
        if source.dof != pairing.dof {
            return Err(Error::DimensionMismatch(format!(
                "source {source} does not match resource DoF {}",
                pairing.dof
            )));
        }
    }
    let mut current = state.tensor(&resource.state)?;
    for (label, ket) in &resource.spectators {
        let (p, next) = current.project_basis_ket(label, *ket)?;
        if (p - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "spectator {label} was disturbed (projection probability {p})"
            )));
        }
        current = next;
    }
    let mut events = Vec::with_capacity(sources.len());
    for (source, pairing) in sources.iter().zip(&resource.pairings) {
        let (next, event) = teleport_dof(
            &current,
            source,
            &pairing.left_label(),
            &pairing.right_label(),
            pairing.kind,
            table,
            selector,
        )?;
        current = next;
        events.push(event);
    }
    Ok((current, events))
}

/// Multiplex: teleport each source qubit onto the matching DoF of the
/// carrier photon. `sources[i]` feeds `resource.pairings[i]`; the sources
/// may be arbitrarily entangled among themselves and with bystanders.
pub fn multiplex(
    input: &StateVector,
    sources: &[SubsystemLabel],
    resource: &Resource,
    table: &CorrectionTable,
    selector: &mut dyn OutcomeSelector,
) -> Result<(StateVector, Vec<DofEvent>)> {
    teleport_through(input, sources, resource, table, selector)
}

/// Demultiplex: teleport each carrier DoF onto a separate output photon.
/// `carrier[i]` feeds `resource.pairings[i]`.
pub fn demultiplex(
    state: &StateVector,
    carrier: &[SubsystemLabel],
    resource: &Resource,
    table: &CorrectionTable,
    selector: &mut dyn OutcomeSelector,
) -> Result<(StateVector, Vec<DofEvent>)> {
    teleport_through(state, carrier, resource, table, selector)
}

/// Stage at which an erasure opportunity acts on the carrier photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NoiseSite {
    AfterMultiplex,
    AfterTransmission,
    AfterDemultiplex,
}

impl NoiseSite {
    pub const ALL: [NoiseSite; 3] = [
        NoiseSite::AfterMultiplex,
        NoiseSite::AfterTransmission,
        NoiseSite::AfterDemultiplex,
    ];
}

impl std::fmt::Display for NoiseSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NoiseSite::AfterMultiplex => "after_multiplex",
            NoiseSite::AfterTransmission => "after_transmission",
            NoiseSite::AfterDemultiplex => "after_demultiplex",
        };
        write!(f, "{s}")
    }
}

/// How a lost carrier is scored. `MaximallyMixed` replaces the
/// reconstruction with I/2ⁿ and every run counts; `ConditionOnSurvival`
/// lets aggregation skip lost runs entirely. The recorded per-run fidelity
/// is the maximally mixed value in both cases (that is what the receiver
/// holds); the policy only changes aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LostPolicy {
    MaximallyMixed,
    ConditionOnSurvival,
}

/// Erasure configuration for a protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseConfig {
    pub epsilon: f64,
    pub sites: Vec<NoiseSite>,
    pub lost_policy: LostPolicy,
}

impl NoiseConfig {
    pub fn new(epsilon: f64, sites: Vec<NoiseSite>, lost_policy: LostPolicy) -> Result<Self> {
        let config = Self { epsilon, sites, lost_policy };
        config.validate()?;
        Ok(config)
    }

    pub fn noiseless() -> Self {
        Self {
            epsilon: 0.0,
            sites: NoiseSite::ALL.to_vec(),
            lost_policy: LostPolicy::MaximallyMixed,
        }
    }

    pub fn with_epsilon(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, NoiseSite::ALL.to_vec(), LostPolicy::MaximallyMixed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::InvalidArgument(format!(
                "erasure probability {} outside [0, 1]",
                self.epsilon
            )));
        }
        if self.epsilon > 0.0 && self.sites.is_empty() {
            return Err(Error::InvalidArgument(
                "noise sites must be nonempty when epsilon > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Protocol stage labels for trace records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    Multiplex,
    Demultiplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BsmRecord {
    pub stage: Stage,
    pub dof: Dof,
    pub outcome: BellKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionRecord {
    pub stage: Stage,
    pub dof: Dof,
    pub pauli: CorrectionPauli,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErasureRecord {
    pub site: NoiseSite,
    pub occurred: bool,
}

/// Record of one protocol run: every Bell outcome, every correction, every
/// erasure draw, and the fidelity of the reconstruction against the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolTrace {
    pub bsm_outcomes: Vec<BsmRecord>,
    pub corrections: Vec<CorrectionRecord>,
    pub erasure_events: Vec<ErasureRecord>,
    pub final_fidelity: f64,
}

impl ProtocolTrace {
    pub fn carrier_lost(&self) -> bool {
        self.erasure_events.iter().any(|e| e.occurred)
    }
}

/// Randomness source for a protocol run: Bell outcomes plus erasure draws.
pub trait ProtocolRandomness: OutcomeSelector {
    fn draw_erasure(&mut self, epsilon: f64) -> bool;
}

/// Drives the protocol from an RNG: Born-rule outcomes, Bernoulli erasure.
pub struct RngDriver<'a, R: Rng>(pub &'a mut R);

impl<R: Rng> OutcomeSelector for RngDriver<'_, R> {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize> {
        let u: f64 = self.0.random();
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

impl<R: Rng> ProtocolRandomness for RngDriver<'_, R> {
    fn draw_erasure(&mut self, epsilon: f64) -> bool {
        self.0.random_bool(epsilon)
    }
}

/// Replays scripted Bell outcomes; every erasure site survives. Used to
/// walk all measurement branches of a noiseless run.
pub struct ForcedDriver(pub ForcedOutcomes);

impl ForcedDriver {
    pub fn from_kinds(outcomes: &[BellKind]) -> Self {
        Self(ForcedOutcomes::new(outcomes.iter().map(|k| k.index())))
    }
}

impl OutcomeSelector for ForcedDriver {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize> {
        self.0.select(probabilities)
    }
}

impl ProtocolRandomness for ForcedDriver {
    fn draw_erasure(&mut self, _epsilon: f64) -> bool {
        false
    }
}

fn run_protocol_core(
    input: &StateVector,
    noise: &NoiseConfig,
    driver: &mut dyn ProtocolRandomness,
) -> Result<(ProtocolTrace, DensityMatrix)> {
    noise.validate()?;
    let n = input.subsystems().len() as u32;
    let in_labels = protocol_input_labels(n)?;
    if input.subsystems() != in_labels.as_slice() {
        return Err(Error::InvalidArgument(format!(
            "protocol input must live on {:?}",
            in_labels.iter().map(|l| l.to_string()).collect::<Vec<_>>()
        )));
    }
    let table = CorrectionTable::shared();
    let transmitter = Resource::prepare(&ResourceSpec::transmitter(n)?)?;
    let (state, mux_events) = multiplex(input, &in_labels, &transmitter, table, driver)?;

    let mut erasure_events = Vec::with_capacity(noise.sites.len());
    for &site in &noise.sites {
        let occurred = noise.epsilon > 0.0 && driver.draw_erasure(noise.epsilon);
        erasure_events.push(ErasureRecord { site, occurred });
    }
    let lost = erasure_events.iter().any(|e| e.occurred);

    let mut bsm_outcomes: Vec<BsmRecord> = mux_events
        .iter()
        .map(|e| BsmRecord { stage: Stage::Multiplex, dof: e.dof, outcome: e.outcome })
        .collect();
    let mut corrections: Vec<CorrectionRecord> = mux_events
        .iter()
        .map(|e| CorrectionRecord { stage: Stage::Multiplex, dof: e.dof, pauli: e.correction })
        .collect();

    let (final_fidelity, reconstruction) = if lost {
        let recon = DensityMatrix::maximally_mixed(in_labels.clone())?;
        (fidelity(&input.to_density(), &recon)?, recon)
    } else {
        let receiver = Resource::prepare(&ResourceSpec::receiver(n)?)?;
        let (output, demux_events) =
            demultiplex(&state, &carrier_labels(n)?, &receiver, table, driver)?;
        for e in &demux_events {
            bsm_outcomes.push(BsmRecord { stage: Stage::Demultiplex, dof: e.dof, outcome: e.outcome });
            corrections.push(CorrectionRecord {
                stage: Stage::Demultiplex,
                dof: e.dof,
                pauli: e.correction,
            });
        }
        let rename: Vec<(SubsystemLabel, SubsystemLabel)> = protocol_output_labels(n)?
            .into_iter()
            .zip(in_labels.clone())
            .collect();
        let reconstructed = output.relabeled(&rename)?;
        (input.overlap_fidelity(&reconstructed)?, reconstructed.to_density())
    };

    let trace = ProtocolTrace { bsm_outcomes, corrections, erasure_events, final_fidelity };
    Ok((trace, reconstruction))
}

/// Full protocol run: multiplex the input onto the carrier, pass the
/// configured erasure sites, demultiplex, score against the input.
pub fn run_protocol(
    input: &StateVector,
    noise: &NoiseConfig,
    rng: &mut impl Rng,
) -> Result<ProtocolTrace> {
    let mut driver = RngDriver(rng);
    Ok(run_protocol_core(input, noise, &mut driver)?.0)
}

/// As [`run_protocol`] but with scripted Bell outcomes (2n of them: the
/// multiplex round then the demultiplex round) and no erasure; also returns
/// the reconstruction.
pub fn run_protocol_forced(
    input: &StateVector,
    outcomes: &[BellKind],
) -> Result<(ProtocolTrace, DensityMatrix)> {
    let mut driver = ForcedDriver::from_kinds(outcomes);
    run_protocol_core(input, &NoiseConfig::noiseless(), &mut driver)
}

fn entanglement_generation_core(
    sam_kind: BellKind,
    oam_kind: BellKind,
    noise: &NoiseConfig,
    driver: &mut dyn ProtocolRandomness,
) -> Result<(DensityMatrix, ProtocolTrace)> {
    noise.validate()?;
    let p1_sam = SubsystemLabel::qubit(Photon::P1, Dof::Sam);
    let p2_oam = SubsystemLabel::qubit(Photon::P2, Dof::Oam);
    let p3_sam = SubsystemLabel::qubit(Photon::P3, Dof::Sam);
    let p4_oam = SubsystemLabel::qubit(Photon::P4, Dof::Oam);
    let e_sam = SubsystemLabel::qubit(Photon::E, Dof::Sam);
    let f_oam = SubsystemLabel::qubit(Photon::F, Dof::Oam);

    let initial = bell_state(sam_kind, &p1_sam, &p3_sam)?
        .tensor(&bell_state(oam_kind, &p2_oam, &p4_oam)?)?;
    let target = bell_state(sam_kind, &e_sam, &p3_sam)?
        .tensor(&bell_state(oam_kind, &f_oam, &p4_oam)?)?;

    let table = CorrectionTable::shared();
    let transmitter = Resource::prepare(&ResourceSpec::transmitter(2)?)?;
    let sources = [p1_sam, p2_oam];
    let (state, mux_events) = multiplex(&initial, &sources, &transmitter, table, driver)?;

    let mut erasure_events = Vec::with_capacity(noise.sites.len());
    for &site in &noise.sites {
        let occurred = noise.epsilon > 0.0 && driver.draw_erasure(noise.epsilon);
        erasure_events.push(ErasureRecord { site, occurred });
    }
    let lost = erasure_events.iter().any(|e| e.occurred);

    let mut bsm_outcomes: Vec<BsmRecord> = mux_events
        .iter()
        .map(|e| BsmRecord { stage: Stage::Multiplex, dof: e.dof, outcome: e.outcome })
        .collect();
    let mut corrections: Vec<CorrectionRecord> = mux_events
        .iter()
        .map(|e| CorrectionRecord { stage: Stage::Multiplex, dof: e.dof, pauli: e.correction })
        .collect();

    let (output, final_fidelity) = if lost {
        // the held halves keep whatever state tracing out the carrier leaves
        let held = state
            .to_density()
            .partial_trace(&[p3_sam.clone(), p4_oam.clone()])?;
        let fresh = DensityMatrix::maximally_mixed(vec![e_sam, f_oam])?;
        let output = fresh.tensor(&held)?;
        let f = fidelity(&target.to_density(), &output)?;
        (output, f)
    } else {
        let receiver = Resource::prepare(&ResourceSpec::receiver(2)?)?;
        let (output, demux_events) =
            demultiplex(&state, &carrier_labels(2)?, &receiver, table, driver)?;
        for e in &demux_events {
            bsm_outcomes.push(BsmRecord { stage: Stage::Demultiplex, dof: e.dof, outcome: e.outcome });
            corrections.push(CorrectionRecord {
                stage: Stage::Demultiplex,
                dof: e.dof,
                pauli: e.correction,
            });
        }
        let f = output.overlap_fidelity(&target)?;
        (output.to_density(), f)
    };

    let trace = ProtocolTrace { bsm_outcomes, corrections, erasure_events, final_fidelity };
    Ok((output, trace))
}

/// Double-rate entanglement generation: start from Bell pairs
/// (P1 SAM, P3 SAM) and (P2 OAM, P4 OAM), multiplex the P1/P2 halves onto
/// the carrier, transmit, demultiplex. A single transmitted photon then
/// leaves (E SAM, P3 SAM) and (F OAM, P4 OAM) in the initial Bell kinds.
/// The trace fidelity is measured against that two-pair target state.
pub fn entanglement_generation(
    sam_kind: BellKind,
    oam_kind: BellKind,
    noise: &NoiseConfig,
    rng: &mut impl Rng,
) -> Result<(DensityMatrix, ProtocolTrace)> {
    let mut driver = RngDriver(rng);
    entanglement_generation_core(sam_kind, oam_kind, noise, &mut driver)
}

/// As [`entanglement_generation`] with scripted Bell outcomes and no
/// erasure.
pub fn entanglement_generation_forced(
    sam_kind: BellKind,
    oam_kind: BellKind,
    outcomes: &[BellKind],
) -> Result<(DensityMatrix, ProtocolTrace)> {
    let mut driver = ForcedDriver::from_kinds(outcomes);
    entanglement_generation_core(sam_kind, oam_kind, &NoiseConfig::noiseless(), &mut driver)
}
