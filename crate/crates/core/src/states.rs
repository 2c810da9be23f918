//! Named states and gates of the multiplexing protocol: Bell states, the
//! 16-element hyperentangled Bell basis, the transmitter/receiver resource
//! states, Pauli operators and the spin–orbit metasurface unitary.
//!
//! Qubit encodings: SAM {σ₊, σ₋} → {0, 1}; for a two-level OAM space,
//! {+1, −1} → {0, 1}. The metasurface acts on a cyclic OAM ladder of
//! `l_dim` levels indexed by l mod l_dim.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{Dof, Photon, SubsystemLabel};
use crate::linalg::{c, cr, CMatrix, C64, C_ONE};
use crate::state::{Operator, StateVector};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// The four Bell states of a qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn index(self) -> usize {
        match self {
            BellKind::PhiPlus => 0,
            BellKind::PhiMinus => 1,
            BellKind::PsiPlus => 2,
            BellKind::PsiMinus => 3,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        Self::ALL
            .get(index)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("Bell index {index} out of range")))
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellKind::PhiPlus => "Phi+",
            BellKind::PhiMinus => "Phi-",
            BellKind::PsiPlus => "Psi+",
            BellKind::PsiMinus => "Psi-",
        };
        write!(f, "{s}")
    }
}

/// Bell state on a labeled qubit pair, with amplitudes over the `(left,
/// right)` order as written (canonical reordering may flip the sign of Ψ⁻,
/// which is the same state up to global phase).
pub fn bell_state(
    kind: BellKind,
    left: &SubsystemLabel,
    right: &SubsystemLabel,
) -> Result<StateVector> {
    if left.dim != 2 || right.dim != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bell states need qubits, got dims {} and {}",
            left.dim, right.dim
        )));
    }
    let h = cr(FRAC_1_SQRT_2);
    let amps = match kind {
        BellKind::PhiPlus => vec![h, C64::new(0.0, 0.0), C64::new(0.0, 0.0), h],
        BellKind::PhiMinus => vec![h, C64::new(0.0, 0.0), C64::new(0.0, 0.0), -h],
        BellKind::PsiPlus => vec![C64::new(0.0, 0.0), h, h, C64::new(0.0, 0.0)],
        BellKind::PsiMinus => vec![C64::new(0.0, 0.0), h, -h, C64::new(0.0, 0.0)],
    };
    StateVector::new(vec![left.clone(), right.clone()], amps)
}

/// The 16 hyperentangled Bell states Bellᵢ(sam pair) ⊗ Bellⱼ(oam pair),
/// enumerated with the SAM kind as the slow index.
pub fn hyper_bell_basis(
    sam_pair: (&SubsystemLabel, &SubsystemLabel),
    oam_pair: (&SubsystemLabel, &SubsystemLabel),
) -> Result<Vec<StateVector>> {
    let mut basis = Vec::with_capacity(16);
    for sam_kind in BellKind::ALL {
        let sam_state = bell_state(sam_kind, sam_pair.0, sam_pair.1)?;
        for oam_kind in BellKind::ALL {
            let oam_state = bell_state(oam_kind, oam_pair.0, oam_pair.1)?;
            basis.push(sam_state.tensor(&oam_state)?);
        }
    }
    Ok(basis)
}

/// Single-qubit Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl fmt::Display for PauliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn pauli_operator(which: PauliKind) -> Operator {
    let mut m = CMatrix::zeros(2, 2);
    match which {
        PauliKind::I => {
            m[(0, 0)] = C_ONE;
            m[(1, 1)] = C_ONE;
        }
        PauliKind::X => {
            m[(0, 1)] = C_ONE;
            m[(1, 0)] = C_ONE;
        }
        PauliKind::Y => {
            m[(0, 1)] = c(0.0, -1.0);
            m[(1, 0)] = c(0.0, 1.0);
        }
        PauliKind::Z => {
            m[(0, 0)] = C_ONE;
            m[(1, 1)] = -C_ONE;
        }
    }
    Operator::unitary(m, vec![2]).expect("Pauli matrices are unitary")
}

/// Spin–orbit metasurface unitary on SAM ⊗ OAM(l_dim):
/// |σ₊, l⟩ → |σ₋, l+Δl⟩ and |σ₋, l⟩ → |σ₊, l−Δl⟩ with cyclic wrap on the
/// truncated l ladder. Index order is (sam, oam) with OAM index l mod l_dim.
pub fn metasurface_operator(delta_l: u32, l_dim: usize) -> Result<Operator> {
    if l_dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "l_dim must be at least 2, got {l_dim}"
        )));
    }
    if delta_l < 1 {
        return Err(Error::InvalidArgument("delta_l must be at least 1".into()));
    }
    if delta_l as usize >= l_dim {
        return Err(Error::InvalidArgument(format!(
            "delta_l {delta_l} must be smaller than l_dim {l_dim}"
        )));
    }
    let d = l_dim;
    let shift = delta_l as usize;
    let n = 2 * d;
    let mut m = CMatrix::zeros(n, n);
    for l in 0..d {
        // sigma+ (index 0): flip spin, l -> l + delta
        m[(d + (l + shift) % d, l)] = C_ONE;
        // sigma- (index 1): flip spin, l -> l - delta
        m[((l + d - shift) % d, d + l)] = C_ONE;
    }
    Operator::unitary(m, vec![2, d])
}

/// OAM basis index of topological charge `l` on a cyclic ladder of
/// `l_dim` levels.
pub fn oam_index(l: i64, l_dim: usize) -> usize {
    (l.rem_euclid(l_dim as i64)) as usize
}

/// One Bell pairing of a resource state: a `(dof, left, right)` qubit pair
/// prepared in `kind`. For transmitter resources the left photon is the one
/// consumed by the Bell measurement and the right photon is the carrier;
/// for receiver resources the left photon is the anchor measured against
/// the carrier and the right photon is an output.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub dof: Dof,
    pub left: Photon,
    pub right: Photon,
    pub kind: BellKind,
}

impl Pairing {
    pub fn left_label(&self) -> SubsystemLabel {
        SubsystemLabel::qubit(self.left.clone(), self.dof)
    }

    pub fn right_label(&self) -> SubsystemLabel {
        SubsystemLabel::qubit(self.right.clone(), self.dof)
    }
}

/// Declarative description of a resource state: Bell pairings plus fixed
/// spectator kets that ride along without participating in any measurement.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResourceSpec {
    pub pairings: Vec<Pairing>,
    pub spectators: Vec<(SubsystemLabel, usize)>,
}

impl ResourceSpec {
    /// Transmitter resource for `n_dofs` multiplexed qubits: a Ψ⁻ pair per
    /// DoF, far ends all on carrier photon C. The two-DoF default also
    /// carries the spectator kets (B SAM and A OAM fixed to |0⟩) present in
    /// the physical three-photon state.
    pub fn transmitter(n_dofs: u32) -> Result<Self> {
        let dofs = protocol_dofs(n_dofs)?;
        let near = near_photons(n_dofs)?;
        let pairings = dofs
            .iter()
            .zip(near)
            .map(|(&dof, left)| Pairing { dof, left, right: Photon::C, kind: BellKind::PsiMinus })
            .collect();
        let spectators = if n_dofs == 2 {
            vec![
                (SubsystemLabel::qubit(Photon::B, Dof::Sam), 0),
                (SubsystemLabel::qubit(Photon::A, Dof::Oam), 0),
            ]
        } else {
            Vec::new()
        };
        Ok(Self { pairings, spectators })
    }

    /// The default two-DoF transmitter state (photons A, B and carrier C).
    pub fn transmitter_default() -> Self {
        Self::transmitter(2).expect("2 DoFs always valid")
    }

    /// Receiver resource: Bell pairs anchored on photon D, one output
    /// photon per DoF (E for SAM, F for OAM, then E3, E4, ...).
    pub fn receiver(n_dofs: u32) -> Result<Self> {
        let dofs = protocol_dofs(n_dofs)?;
        let outs = output_photons(n_dofs)?;
        let pairings = dofs
            .iter()
            .zip(outs)
            .map(|(&dof, right)| Pairing { dof, left: Photon::D, right, kind: BellKind::PsiMinus })
            .collect();
        Ok(Self { pairings, spectators: Vec::new() })
    }

    fn validate(&self) -> Result<()> {
        let mut seen: Vec<SubsystemLabel> = Vec::new();
        let mut push = |label: SubsystemLabel| -> Result<()> {
            if seen.iter().any(|s| s.key() == label.key()) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            seen.push(label);
            Ok(())
        };
        for p in &self.pairings {
            push(p.left_label())?;
            push(p.right_label())?;
        }
        for (label, ket) in &self.spectators {
            if *ket >= label.dim {
                return Err(Error::InvalidArgument(format!(
                    "spectator ket {ket} out of range for {label}"
                )));
            }
            push(label.clone())?;
        }
        Ok(())
    }

    /// Build the resource state: the tensor product of all Bell pairings
    /// and spectator kets.
    pub fn build(&self) -> Result<StateVector> {
        self.validate()?;
        let mut state: Option<StateVector> = None;
        for p in &self.pairings {
            let pair = bell_state(p.kind, &p.left_label(), &p.right_label())?;
            state = Some(match state {
                Some(s) => s.tensor(&pair)?,
                None => pair,
            });
        }
        for (label, ket) in &self.spectators {
            let spec = StateVector::basis_ket(vec![label.clone()], &[*ket])?;
            state = Some(match state {
                Some(s) => s.tensor(&spec)?,
                None => spec,
            });
        }
        state.ok_or_else(|| Error::InvalidArgument("empty resource spec".into()))
    }
}

/// DoF assignment for an n-DoF protocol run: SAM, OAM, then generic
/// two-level DoFs.
pub fn protocol_dofs(n_dofs: u32) -> Result<Vec<Dof>> {
    if !(1..=4).contains(&n_dofs) {
        return Err(Error::InvalidArgument(format!(
            "n_dofs must be in 1..=4, got {n_dofs}"
        )));
    }
    Ok((0..n_dofs)
        .map(|k| match k {
            0 => Dof::Sam,
            1 => Dof::Oam,
            k => Dof::Generic(k + 1),
        })
        .collect())
}

fn near_photons(n_dofs: u32) -> Result<Vec<Photon>> {
    protocol_dofs(n_dofs)?
        .iter()
        .enumerate()
        .map(|(k, _)| {
            Ok(match k {
                0 => Photon::A,
                1 => Photon::B,
                k => Photon::Named(format!("A{}", k + 1)),
            })
        })
        .collect()
}

fn output_photons(n_dofs: u32) -> Result<Vec<Photon>> {
    protocol_dofs(n_dofs)?
        .iter()
        .enumerate()
        .map(|(k, _)| {
            Ok(match k {
                0 => Photon::E,
                1 => Photon::F,
                k => Photon::Named(format!("E{}", k + 1)),
            })
        })
        .collect()
}

/// Input labels for an n-DoF protocol run: P1 carries SAM, P2 carries OAM,
/// and so on.
pub fn protocol_input_labels(n_dofs: u32) -> Result<Vec<SubsystemLabel>> {
    let dofs = protocol_dofs(n_dofs)?;
    dofs.iter()
        .enumerate()
        .map(|(k, &dof)| {
            let photon = match k {
                0 => Photon::P1,
                1 => Photon::P2,
                2 => Photon::P3,
                3 => Photon::P4,
                _ => unreachable!(),
            };
            Ok(SubsystemLabel::qubit(photon, dof))
        })
        .collect()
}

/// Output labels matching [`protocol_input_labels`] after demultiplexing.
pub fn protocol_output_labels(n_dofs: u32) -> Result<Vec<SubsystemLabel>> {
    let dofs = protocol_dofs(n_dofs)?;
    Ok(dofs
        .iter()
        .zip(output_photons(n_dofs)?)
        .map(|(&dof, photon)| SubsystemLabel::qubit(photon, dof))
        .collect())
}

/// Carrier labels: photon C holding every multiplexed DoF.
pub fn carrier_labels(n_dofs: u32) -> Result<Vec<SubsystemLabel>> {
    Ok(protocol_dofs(n_dofs)?
        .iter()
        .map(|&dof| SubsystemLabel::qubit(Photon::C, dof))
        .collect())
}
