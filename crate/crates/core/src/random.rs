//! Haar-distributed random states and unitaries.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::label::SubsystemLabel;
use crate::linalg::{cr, CMatrix, CVector, C64};
use crate::state::{Operator, StateVector};

/// Haar-random pure state on the given subsystems: a complex Gaussian
/// vector, normalized. Invariant in distribution under any fixed unitary.
pub fn haar_random_state(
    subsystems: Vec<SubsystemLabel>,
    rng: &mut impl Rng,
) -> Result<StateVector> {
    let dim: usize = subsystems.iter().map(|l| l.dim).product();
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        amps.push(C64::new(re, im));
    }
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= cr(norm);
    }
    StateVector::new(subsystems, amps)
}

/// Haar-random unitary via QR of a complex Ginibre matrix, with the R
/// diagonal phases absorbed so the distribution is exactly Haar.
pub fn haar_random_unitary(dims: Vec<usize>, rng: &mut impl Rng) -> Result<Operator> {
    let n: usize = dims.iter().product();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            g[(i, j)] = C64::new(re, im);
        }
    }
    let qr = g.qr();
    let r = qr.r();
    let mut phases = CVector::zeros(n);
    for i in 0..n {
        let d = r[(i, i)];
        phases[i] = if d.norm() > 0.0 { d / cr(d.norm()) } else { cr(1.0) };
    }
    let mut q = qr.q();
    for j in 0..n {
        let p = phases[j];
        for i in 0..n {
            q[(i, j)] *= p;
        }
    }
    Operator::unitary(q, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{Dof, Photon, SubsystemLabel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubits(n: usize) -> Vec<SubsystemLabel> {
        (0..n)
            .map(|k| SubsystemLabel::qubit(Photon::Named(format!("q{k}")), Dof::Sam))
            .collect()
    }

    #[test]
    fn sampled_states_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let st = haar_random_state(qubits(2), &mut rng).unwrap();
            assert!((st.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_seed_reproduces_the_state_bit_for_bit() {
        let mut a = ChaCha8Rng::seed_from_u64(1234);
        let mut b = ChaCha8Rng::seed_from_u64(1234);
        let sa = haar_random_state(qubits(3), &mut a).unwrap();
        let sb = haar_random_state(qubits(3), &mut b).unwrap();
        assert_eq!(sa.amplitudes(), sb.amplitudes());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = haar_random_unitary(vec![2, 2], &mut rng).unwrap();
            assert!(crate::linalg::unitarity_deviation(u.matrix()) < 1e-12);
        }
    }
}
