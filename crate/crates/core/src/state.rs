//! Pure states, density matrices and operators on labeled subsystems.
//!
//! States carry an ordered list of [`SubsystemLabel`]s; the amplitude (or
//! matrix) index runs big-endian over that list. Constructors sort the
//! subsystems into canonical `(photon, dof)` order and permute the data to
//! match, so two states assembled in different orders compare equal.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::label::SubsystemLabel;
use crate::linalg::{cr, hermitian_sqrt, max_abs, CMatrix, CVector, C64, C_ONE};

/// Unit-norm / unit-trace / Hermiticity tolerance.
pub const STATE_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix may dip this far below zero before the
/// state is rejected; smaller negatives are treated as rounding noise.
pub const PSD_TOL: f64 = 1e-10;

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    strides
}

/// Flat-index contribution of each composite index over the subsystems at
/// `positions`, enumerated big-endian in the given position order.
fn subset_offsets(dims: &[usize], positions: &[usize]) -> Vec<usize> {
    let strides = strides(dims);
    let sel_dims: Vec<usize> = positions.iter().map(|&p| dims[p]).collect();
    let count: usize = sel_dims.iter().product();
    let mut offsets = vec![0usize; count];
    for (ci, slot) in offsets.iter_mut().enumerate() {
        let mut rem = ci;
        let mut flat = 0;
        for (k, &p) in positions.iter().enumerate().rev() {
            flat += (rem % sel_dims[k]) * strides[p];
            rem /= sel_dims[k];
        }
        *slot = flat;
    }
    offsets
}

fn check_unique(labels: &[SubsystemLabel]) -> Result<()> {
    for (i, a) in labels.iter().enumerate() {
        for b in labels.iter().skip(i + 1) {
            if a.key() == b.key() {
                return Err(Error::DuplicateLabel(a.to_string()));
            }
        }
    }
    Ok(())
}

/// Permutation sorting `labels` canonically; `perm[new] = old`.
fn canonical_permutation(labels: &[SubsystemLabel]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..labels.len()).collect();
    perm.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    perm
}

/// Flat-index map for reordering subsystems; `map[old_flat] = new_flat`.
fn flat_index_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let old_strides = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    let total: usize = dims.iter().product();
    let mut map = vec![0usize; total];
    for (old_flat, slot) in map.iter_mut().enumerate() {
        let mut new_flat = 0;
        for (k, &p) in perm.iter().enumerate() {
            new_flat += ((old_flat / old_strides[p]) % dims[p]) * new_strides[k];
        }
        *slot = new_flat;
    }
    map
}

fn label_positions(have: &[SubsystemLabel], want: &[SubsystemLabel]) -> Result<Vec<usize>> {
    want.iter()
        .map(|w| {
            have.iter()
                .position(|h| h.key() == w.key())
                .ok_or_else(|| Error::UnknownLabel(w.to_string()))
        })
        .collect()
}

/// Pure quantum state over labeled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    subsystems: Vec<SubsystemLabel>,
    amplitudes: CVector,
}

impl StateVector {
    /// Build and validate: amplitude count must equal the product of the
    /// subsystem dimensions, with unit norm within `STATE_TOL`.
    pub fn new(subsystems: Vec<SubsystemLabel>, amplitudes: Vec<C64>) -> Result<Self> {
        check_unique(&subsystems)?;
        let expected: usize = subsystems.iter().map(|l| l.dim).product();
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for total dimension {expected}",
                amplitudes.len()
            )));
        }
        let state = Self::assemble(subsystems, CVector::from_vec(amplitudes));
        let norm_sq: f64 = state.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL * expected as f64 {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sq} is not 1"
            )));
        }
        Ok(state)
    }

    /// Canonicalize without validity checks; internal fast path.
    pub(crate) fn assemble(subsystems: Vec<SubsystemLabel>, amplitudes: CVector) -> Self {
        let perm = canonical_permutation(&subsystems);
        if perm.iter().enumerate().all(|(k, &p)| k == p) {
            return Self { subsystems, amplitudes };
        }
        let dims: Vec<usize> = subsystems.iter().map(|l| l.dim).collect();
        let map = flat_index_map(&dims, &perm);
        let mut out = CVector::zeros(amplitudes.len());
        for (old, &new) in map.iter().enumerate() {
            out[new] = amplitudes[old];
        }
        let sorted: Vec<SubsystemLabel> = perm.iter().map(|&p| subsystems[p].clone()).collect();
        Self { subsystems: sorted, amplitudes: out }
    }

    /// Computational basis ket |indices⟩.
    pub fn basis_ket(subsystems: Vec<SubsystemLabel>, indices: &[usize]) -> Result<Self> {
        if indices.len() != subsystems.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} indices for {} subsystems",
                indices.len(),
                subsystems.len()
            )));
        }
        for (label, &ix) in subsystems.iter().zip(indices) {
            if ix >= label.dim {
                return Err(Error::InvalidArgument(format!(
                    "basis index {ix} out of range for {label}"
                )));
            }
        }
        let dims: Vec<usize> = subsystems.iter().map(|l| l.dim).collect();
        let st = strides(&dims);
        let flat: usize = indices.iter().zip(&st).map(|(&ix, &s)| ix * s).sum();
        let total: usize = dims.iter().product();
        let mut amps = CVector::zeros(total);
        amps[flat] = C_ONE;
        check_unique(&subsystems)?;
        Ok(Self::assemble(subsystems, amps))
    }

    pub fn subsystems(&self) -> &[SubsystemLabel] {
        &self.subsystems
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|l| l.dim).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩; requires identical subsystem structure.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.subsystems != other.subsystems {
            return Err(Error::DimensionMismatch(
                "inner product of states with different subsystems".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|², the fidelity between two pure states.
    pub fn overlap_fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Tensor product; label sets must be disjoint.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.subsystems.clone();
        labels.extend(other.subsystems.iter().cloned());
        check_unique(&labels)?;
        let mut amps = CVector::zeros(self.dim() * other.dim());
        for (i, a) in self.amplitudes.iter().enumerate() {
            for (j, b) in other.amplitudes.iter().enumerate() {
                amps[i * other.dim() + j] = a * b;
            }
        }
        Ok(Self::assemble(labels, amps))
    }

    /// Apply `op` to `targets` (identity on the rest). Unitary application
    /// preserves the norm; projectors and other contractions do not.
    pub fn apply(&self, op: &Operator, targets: &[SubsystemLabel]) -> Result<Self> {
        let positions = label_positions(&self.subsystems, targets)?;
        let target_dims: Vec<usize> = positions.iter().map(|&p| self.subsystems[p].dim).collect();
        if target_dims != op.dims {
            return Err(Error::DimensionMismatch(format!(
                "operator expects dims {:?}, targets have {:?}",
                op.dims, target_dims
            )));
        }
        let dims = self.dims();
        let t_off = subset_offsets(&dims, &positions);
        let rest: Vec<usize> = (0..dims.len()).filter(|p| !positions.contains(p)).collect();
        let r_off = subset_offsets(&dims, &rest);
        let d = t_off.len();
        let mut out = CVector::zeros(self.dim());
        for &ro in &r_off {
            for tn in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for (to, &toff) in t_off.iter().enumerate() {
                    let m = op.matrix[(tn, to)];
                    if m != C64::new(0.0, 0.0) {
                        acc += m * self.amplitudes[toff + ro];
                    }
                }
                out[t_off[tn] + ro] = acc;
            }
        }
        Ok(Self { subsystems: self.subsystems.clone(), amplitudes: out })
    }

    /// Contract a bra over a subset of subsystems: (⟨bra| ⊗ I)|self⟩.
    /// Returns the unnormalized residual on the remaining subsystems.
    pub(crate) fn contract(&self, bra: &StateVector) -> Result<(Vec<SubsystemLabel>, CVector)> {
        let positions = label_positions(&self.subsystems, bra.subsystems())?;
        for (&p, b) in positions.iter().zip(bra.subsystems()) {
            if self.subsystems[p].dim != b.dim {
                return Err(Error::DimensionMismatch(format!(
                    "bra subsystem {b} has dim {}, state has {}",
                    b.dim, self.subsystems[p].dim
                )));
            }
        }
        let dims = self.dims();
        let t_off = subset_offsets(&dims, &positions);
        let rest: Vec<usize> = (0..dims.len()).filter(|p| !positions.contains(p)).collect();
        let r_off = subset_offsets(&dims, &rest);
        let mut out = CVector::zeros(r_off.len());
        for (ri, &ro) in r_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (ti, &toff) in t_off.iter().enumerate() {
                acc += bra.amplitudes[ti].conj() * self.amplitudes[toff + ro];
            }
            out[ri] = acc;
        }
        let rest_labels: Vec<SubsystemLabel> =
            rest.iter().map(|&p| self.subsystems[p].clone()).collect();
        Ok((rest_labels, out))
    }

    /// Project one subsystem onto a computational basis ket and drop it.
    /// Returns the projection probability and the renormalized remainder.
    pub fn project_basis_ket(&self, label: &SubsystemLabel, index: usize) -> Result<(f64, Self)> {
        let target = self
            .subsystems
            .iter()
            .find(|l| l.key() == label.key())
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?
            .clone();
        let bra = StateVector::basis_ket(vec![target], &[index])?;
        let (labels, residual) = self.contract(&bra)?;
        let prob: f64 = residual.iter().map(|a| a.norm_sqr()).sum();
        if prob < 1e-12 {
            return Err(Error::ImpossibleOutcome { index, probability: prob });
        }
        let scale = cr(1.0 / prob.sqrt());
        Ok((prob, Self { subsystems: labels, amplitudes: residual * scale }))
    }

    /// Rename subsystems; dimensions must be preserved.
    pub fn relabeled(&self, map: &[(SubsystemLabel, SubsystemLabel)]) -> Result<Self> {
        let labels = relabel(&self.subsystems, map)?;
        Ok(Self::assemble(labels, self.amplitudes.clone()))
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix { subsystems: self.subsystems.clone(), matrix: m }
    }

    /// Reduced density matrix on `keep`, directly from the pure state.
    pub fn reduced(&self, keep: &[SubsystemLabel]) -> Result<DensityMatrix> {
        let keep_pos = sorted_positions(&self.subsystems, keep)?;
        let dims = self.dims();
        let k_off = subset_offsets(&dims, &keep_pos);
        let rest: Vec<usize> = (0..dims.len()).filter(|p| !keep_pos.contains(p)).collect();
        let r_off = subset_offsets(&dims, &rest);
        let k = k_off.len();
        let mut m = CMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let mut acc = C64::new(0.0, 0.0);
                for &ro in &r_off {
                    acc += self.amplitudes[k_off[i] + ro] * self.amplitudes[k_off[j] + ro].conj();
                }
                m[(i, j)] = acc;
            }
        }
        let labels: Vec<SubsystemLabel> =
            keep_pos.iter().map(|&p| self.subsystems[p].clone()).collect();
        Ok(DensityMatrix { subsystems: labels, matrix: m })
    }
}

/// Positions of `want` labels, returned ascending so that the subset keeps
/// canonical order.
fn sorted_positions(have: &[SubsystemLabel], want: &[SubsystemLabel]) -> Result<Vec<usize>> {
    let mut positions = label_positions(have, want)?;
    let before = positions.len();
    positions.sort_unstable();
    positions.dedup();
    if positions.len() != before {
        return Err(Error::DuplicateLabel("repeated label in selection".into()));
    }
    Ok(positions)
}

fn relabel(
    labels: &[SubsystemLabel],
    map: &[(SubsystemLabel, SubsystemLabel)],
) -> Result<Vec<SubsystemLabel>> {
    let mut out = labels.to_vec();
    for (from, to) in map {
        let pos = out
            .iter()
            .position(|l| l.key() == from.key())
            .ok_or_else(|| Error::UnknownLabel(from.to_string()))?;
        if out[pos].dim != to.dim {
            return Err(Error::DimensionMismatch(format!(
                "relabel {from} -> {to} changes dimension"
            )));
        }
        out[pos] = to.clone();
    }
    check_unique(&out)?;
    Ok(out)
}

/// Mixed quantum state over labeled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    subsystems: Vec<SubsystemLabel>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Build and validate: Hermitian and unit trace within `STATE_TOL`,
    /// positive semidefinite within `PSD_TOL`.
    pub fn new(subsystems: Vec<SubsystemLabel>, matrix: CMatrix) -> Result<Self> {
        check_unique(&subsystems)?;
        let expected: usize = subsystems.iter().map(|l| l.dim).product();
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for total dimension {expected}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_dev = max_abs(&(&matrix - matrix.adjoint()));
        if herm_dev > STATE_TOL * 10.0 {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL * expected as f64 || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let state = Self::assemble(subsystems, matrix);
        let min_eig = state
            .eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(state)
    }

    pub(crate) fn assemble(subsystems: Vec<SubsystemLabel>, matrix: CMatrix) -> Self {
        let perm = canonical_permutation(&subsystems);
        if perm.iter().enumerate().all(|(k, &p)| k == p) {
            return Self { subsystems, matrix };
        }
        let dims: Vec<usize> = subsystems.iter().map(|l| l.dim).collect();
        let map = flat_index_map(&dims, &perm);
        let n = matrix.nrows();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(map[i], map[j])] = matrix[(i, j)];
            }
        }
        let sorted: Vec<SubsystemLabel> = perm.iter().map(|&p| subsystems[p].clone()).collect();
        Self { subsystems: sorted, matrix: out }
    }

    /// I/d on the given subsystems.
    pub fn maximally_mixed(subsystems: Vec<SubsystemLabel>) -> Result<Self> {
        check_unique(&subsystems)?;
        let dim: usize = subsystems.iter().map(|l| l.dim).product();
        let m = CMatrix::identity(dim, dim) * cr(1.0 / dim as f64);
        Ok(Self::assemble(subsystems, m))
    }

    pub fn subsystems(&self) -> &[SubsystemLabel] {
        &self.subsystems
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|l| l.dim).collect()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// Von Neumann entropy in bits, with eigenvalues in [−`PSD_TOL`, 0)
    /// clamped to zero before the logarithm.
    pub fn entropy_bits(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|&lambda| lambda.max(0.0))
            .filter(|&lambda| lambda > 0.0)
            .map(|lambda| -lambda * lambda.log2())
            .sum()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.subsystems.clone();
        labels.extend(other.subsystems.iter().cloned());
        check_unique(&labels)?;
        let m = self.matrix.kronecker(&other.matrix);
        Ok(Self::assemble(labels, m))
    }

    /// Trace out everything except `keep`. An empty `keep` yields the scalar
    /// 1×1 state.
    pub fn partial_trace(&self, keep: &[SubsystemLabel]) -> Result<Self> {
        let keep_pos = sorted_positions(&self.subsystems, keep)?;
        let dims = self.dims();
        let k_off = subset_offsets(&dims, &keep_pos);
        let rest: Vec<usize> = (0..dims.len()).filter(|p| !keep_pos.contains(p)).collect();
        let r_off = subset_offsets(&dims, &rest);
        let k = k_off.len();
        let mut m = CMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let mut acc = C64::new(0.0, 0.0);
                for &ro in &r_off {
                    acc += self.matrix[(k_off[i] + ro, k_off[j] + ro)];
                }
                m[(i, j)] = acc;
            }
        }
        let labels: Vec<SubsystemLabel> =
            keep_pos.iter().map(|&p| self.subsystems[p].clone()).collect();
        Ok(Self { subsystems: labels, matrix: m })
    }

    /// Conjugate by `op` embedded on `targets`: (E ⊗ I) ρ (E ⊗ I)†.
    pub fn apply(&self, op: &Operator, targets: &[SubsystemLabel]) -> Result<Self> {
        let (front, rest_dim, labels) = self.to_front(targets)?;
        let d: usize = op.dims.iter().product();
        if front.nrows() != d * rest_dim {
            return Err(Error::DimensionMismatch(format!(
                "operator expects target dim {d}"
            )));
        }
        let embedded = op.matrix.kronecker(&CMatrix::identity(rest_dim, rest_dim));
        let out = &embedded * front * embedded.adjoint();
        Ok(Self::assemble(labels, out))
    }

    /// Apply a channel to `targets`. If the channel changes the dimension,
    /// the targeted subsystems are replaced by a single output subsystem
    /// labeled like the first target with the channel's output dimension.
    pub fn apply_kraus(&self, channel: &KrausChannel, targets: &[SubsystemLabel]) -> Result<Self> {
        let positions = label_positions(&self.subsystems, targets)?;
        let in_dim: usize = positions.iter().map(|&p| self.subsystems[p].dim).product();
        if channel.output_dim() == in_dim && !targets.is_empty() {
            let kept: Vec<SubsystemLabel> =
                positions.iter().map(|&p| self.subsystems[p].clone()).collect();
            return self.apply_kraus_into(channel, targets, kept);
        }
        let first = self.subsystems[positions[0]].clone();
        let merged = SubsystemLabel { photon: first.photon, dof: first.dof, dim: channel.output_dim() };
        self.apply_kraus_into(channel, targets, vec![merged])
    }

    /// Apply a channel to `targets`, replacing them with `output` subsystems
    /// whose total dimension equals the channel's output dimension.
    pub fn apply_kraus_into(
        &self,
        channel: &KrausChannel,
        targets: &[SubsystemLabel],
        output: Vec<SubsystemLabel>,
    ) -> Result<Self> {
        let (front, rest_dim, labels) = self.to_front(targets)?;
        let d_in: usize = channel.input_dim();
        if front.nrows() != d_in * rest_dim {
            return Err(Error::DimensionMismatch(format!(
                "channel expects input dim {d_in}, targets give {}",
                front.nrows() / rest_dim
            )));
        }
        let out_total: usize = output.iter().map(|l| l.dim).product();
        if out_total != channel.output_dim() {
            return Err(Error::DimensionMismatch(format!(
                "output subsystems have dim {out_total}, channel produces {}",
                channel.output_dim()
            )));
        }
        let eye = CMatrix::identity(rest_dim, rest_dim);
        let d_out = channel.output_dim();
        let mut acc = CMatrix::zeros(d_out * rest_dim, d_out * rest_dim);
        for k in channel.operators() {
            let embedded = k.kronecker(&eye);
            acc += &embedded * &front * embedded.adjoint();
        }
        let mut out_labels = output;
        out_labels.extend(labels.into_iter().skip(targets.len()));
        check_unique(&out_labels)?;
        Ok(Self::assemble(out_labels, acc))
    }

    /// Permute so that `targets` come first (in the given order); returns
    /// the permuted matrix, the dimension of the remainder, and the new
    /// label order.
    fn to_front(&self, targets: &[SubsystemLabel]) -> Result<(CMatrix, usize, Vec<SubsystemLabel>)> {
        let positions = label_positions(&self.subsystems, targets)?;
        let mut order = positions.clone();
        for p in 0..self.subsystems.len() {
            if !positions.contains(&p) {
                order.push(p);
            }
        }
        let dims = self.dims();
        let map = flat_index_map(&dims, &order);
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        let labels: Vec<SubsystemLabel> = order.iter().map(|&p| self.subsystems[p].clone()).collect();
        let target_dim: usize = positions.iter().map(|&p| dims[p]).product();
        Ok((out, n / target_dim, labels))
    }

    pub fn relabeled(&self, map: &[(SubsystemLabel, SubsystemLabel)]) -> Result<Self> {
        let labels = relabel(&self.subsystems, map)?;
        Ok(Self::assemble(labels, self.matrix.clone()))
    }
}

/// Uhlmann fidelity F(ρ, σ) = (Tr √(√ρ σ √ρ))², clamped to [0, 1].
/// For pure ρ = |ψ⟩⟨ψ| this reduces to ⟨ψ|σ|ψ⟩, which is also the route
/// taken numerically when either argument is pure: eigen-noise under the
/// square root would otherwise cost several digits.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.subsystems != sigma.subsystems {
        return Err(Error::DimensionMismatch(
            "fidelity of states with different subsystems".into(),
        ));
    }
    if rho.purity() > 1.0 - 1e-12 {
        return Ok(pure_expectation(rho, sigma));
    }
    if sigma.purity() > 1.0 - 1e-12 {
        return Ok(pure_expectation(sigma, rho));
    }
    let sqrt_rho = hermitian_sqrt(&rho.matrix);
    let inner = &sqrt_rho * &sigma.matrix * &sqrt_rho;
    let eigs = crate::linalg::hermitian_eigenvalues(&inner);
    let floor = eigs.last().copied().unwrap_or(0.0).max(0.0) * 1e-13;
    let trace: f64 = eigs
        .iter()
        .filter(|&&lambda| lambda > floor)
        .map(|&lambda| lambda.sqrt())
        .sum();
    Ok((trace * trace).clamp(0.0, 1.0))
}

/// ⟨ψ|σ|ψ⟩ with ψ the dominant eigenvector of the (numerically pure) first
/// argument.
fn pure_expectation(pure: &DensityMatrix, other: &DensityMatrix) -> f64 {
    let (values, vectors) = crate::linalg::hermitian_eigen(&pure.matrix);
    let top = values.len() - 1;
    let psi = vectors.column(top);
    let mut value = C64::new(0.0, 0.0);
    for i in 0..other.matrix.nrows() {
        for j in 0..other.matrix.ncols() {
            value += psi[i].conj() * other.matrix[(i, j)] * psi[j];
        }
    }
    value.re.clamp(0.0, 1.0)
}

/// Trace distance ½‖ρ − σ‖₁.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.subsystems != sigma.subsystems {
        return Err(Error::DimensionMismatch(
            "trace distance of states with different subsystems".into(),
        ));
    }
    let diff = &rho.matrix - &sigma.matrix;
    Ok(0.5 * crate::linalg::hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>())
}

/// A matrix acting on a fixed arrangement of subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
    dims: Vec<usize>,
    unitary: bool,
}

impl Operator {
    pub fn new(matrix: CMatrix, dims: Vec<usize>, unitary: bool) -> Result<Self> {
        let total: usize = dims.iter().product();
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for operator dims {:?}",
                matrix.nrows(),
                matrix.ncols(),
                dims
            )));
        }
        if unitary {
            let dev = crate::linalg::unitarity_deviation(&matrix);
            if dev > STATE_TOL {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(Self { matrix, dims, unitary })
    }

    pub fn unitary(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::new(matrix, dims, true)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }
}
