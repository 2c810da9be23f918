//! Numerical simulator and analysis library for multiplexed
//! multi-degree-of-freedom quantum teleportation over erasure channels.
//!
//! A transmitter teleports N source qubits — one per photonic degree of
//! freedom (polarization, orbital angular momentum, ...) — onto a single
//! carrier photon, transmits that one photon through a lossy channel, and a
//! receiver teleports the DoFs back out onto separate photons. The crate
//! provides:
//!
//! - [`state`]: complex linear algebra on labeled multi-subsystem states
//!   (tensor products, partial traces, entropy, Uhlmann fidelity, unitary
//!   and Kraus application);
//! - [`states`]: Bell states, the 16-element hyperentangled Bell basis, the
//!   protocol's resource states and the spin–orbit metasurface unitary;
//! - [`teleport`]: the multiplex/demultiplex engine with derived Pauli
//!   correction tables, heralded erasure and full run traces;
//! - [`channel`]: erasure channels in Kraus form, channel products and
//!   composition, and coherent information computed from first principles;
//! - [`experiment`]: deterministic Monte-Carlo fidelity sweeps, the
//!   capacity verification table, and CSV/JSON emission.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod label;
pub mod linalg;
pub mod measure;
pub mod random;
pub mod state;
pub mod states;
pub mod teleport;

pub use channel::{
    coherent_information, coherent_information_max, erasure_capacity_formula, erasure_channel,
    joint_carrier_erasure, max_entangled_input, ErasureParams, InputFamily, KrausChannel,
};
pub use error::{Error, Result};
pub use label::{oam, sam, Dof, Photon, SubsystemLabel};
pub use measure::{measure_in_basis, BornSampler, ForcedOutcomes, Measured, OutcomeSelector};
pub use random::{haar_random_state, haar_random_unitary};
pub use state::{fidelity, trace_distance, DensityMatrix, Operator, StateVector};
pub use states::{
    bell_state, hyper_bell_basis, metasurface_operator, pauli_operator, protocol_input_labels,
    protocol_output_labels, BellKind, Pairing, PauliKind, ResourceSpec,
};
pub use teleport::{
    bell_measurement, demultiplex, entanglement_generation, entanglement_generation_forced,
    find_correction, multiplex, run_protocol, run_protocol_forced, teleport_dof, CorrectionPauli,
    CorrectionTable, LostPolicy, NoiseConfig, NoiseSite, ProtocolTrace, Resource,
};
pub use experiment::{
    run_capacity_table, run_fidelity_sweep, run_fidelity_sweep_serial, CapacityRow, EpsilonGrid,
    ExperimentConfig, OutputFormat, SweepPoint, SweepResult,
};
