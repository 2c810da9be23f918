//! Labels identifying the subsystems of a multi-photon state.
//!
//! Every qubit (or qudit) in a state is addressed by a `(photon, dof)` pair,
//! e.g. the spin of photon C or the orbital angular momentum of photon B.
//! Labels order canonically so that states assembled in different orders
//! compare equal.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Photon identity. The named variants are the cast of the multiplexing
/// protocol; `Named` covers ancillas introduced by generalized runs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Photon {
    A,
    B,
    C,
    D,
    E,
    F,
    P1,
    P2,
    P3,
    P4,
    Named(String),
}

impl fmt::Display for Photon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Photon::Named(name) => write!(f, "{name}"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Degree of freedom carried by a photon. `Generic(k)` numbers additional
/// two-level DoFs when more than spin and orbital angular momentum are
/// multiplexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Dof {
    Sam,
    Oam,
    Generic(u32),
}

impl fmt::Display for Dof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dof::Sam => write!(f, "SAM"),
            Dof::Oam => write!(f, "OAM"),
            Dof::Generic(k) => write!(f, "DOF{k}"),
        }
    }
}

/// A labeled subsystem: which photon, which degree of freedom, and the
/// dimension of the attached Hilbert space (2 for qubits).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubsystemLabel {
    pub photon: Photon,
    pub dof: Dof,
    pub dim: usize,
}

impl SubsystemLabel {
    pub fn new(photon: Photon, dof: Dof, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimension must be at least 2, got {dim}"
            )));
        }
        Ok(Self { photon, dof, dim })
    }

    /// Two-level subsystem, the common case.
    pub fn qubit(photon: Photon, dof: Dof) -> Self {
        Self { photon, dof, dim: 2 }
    }

    /// Identity key; unique within any one state regardless of dimension.
    pub fn key(&self) -> (&Photon, &Dof) {
        (&self.photon, &self.dof)
    }
}

impl fmt::Display for SubsystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 2 {
            write!(f, "{}.{}", self.photon, self.dof)
        } else {
            write!(f, "{}.{}[{}]", self.photon, self.dof, self.dim)
        }
    }
}

/// Spin qubit of a photon.
pub fn sam(photon: Photon) -> SubsystemLabel {
    SubsystemLabel::qubit(photon, Dof::Sam)
}

/// Orbital-angular-momentum qubit of a photon.
pub fn oam(photon: Photon) -> SubsystemLabel {
    SubsystemLabel::qubit(photon, Dof::Oam)
}
