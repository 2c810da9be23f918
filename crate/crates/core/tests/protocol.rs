//! End-to-end protocol checks: noiseless round trips over every forced
//! measurement branch, entanglement preservation, noise scoring, the
//! Monte-Carlo oracle and the entanglement-generation variant.

use hypermux::label::{Dof, Photon, SubsystemLabel};
use hypermux::states::carrier_labels;
use hypermux::teleport::{ForcedDriver, RngDriver};
use hypermux::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_branches(n_bsm: usize) -> Vec<Vec<BellKind>> {
    let mut branches = vec![Vec::new()];
    for _ in 0..n_bsm {
        branches = branches
            .into_iter()
            .flat_map(|prefix| {
                BellKind::ALL.iter().map(move |&k| {
                    let mut next = prefix.clone();
                    next.push(k);
                    next
                })
            })
            .collect();
    }
    branches
}

#[test]
fn noiseless_round_trip_for_haar_inputs() {
    let labels = protocol_input_labels(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let input = haar_random_state(labels.clone(), &mut rng).unwrap();
        let trace = run_protocol(&input, &NoiseConfig::noiseless(), &mut rng).unwrap();
        assert!(
            trace.final_fidelity >= 1.0 - 1e-9,
            "fidelity {}",
            trace.final_fidelity
        );
    }
}

#[test]
fn every_forced_branch_reconstructs_identically() {
    // all 16 x 16 outcome combinations, three Haar inputs: the corrections
    // fully compensate, so every branch returns the same state
    let labels = protocol_input_labels(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..3 {
        let input = haar_random_state(labels.clone(), &mut rng).unwrap();
        for branch in all_branches(4) {
            let (trace, recon) = run_protocol_forced(&input, &branch).unwrap();
            assert!(
                trace.final_fidelity >= 1.0 - 1e-9,
                "branch {branch:?}: fidelity {}",
                trace.final_fidelity
            );
            let f = fidelity(&input.to_density(), &recon).unwrap();
            assert!(f >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn teleport_dof_reconstructs_over_all_four_outcomes() {
    // |sigma+> through a Psi- resource teleports exactly for any outcome
    let src = SubsystemLabel::qubit(Photon::P1, Dof::Sam);
    let near = sam(Photon::A);
    let far = sam(Photon::C);
    let table = CorrectionTable::derive().unwrap();
    for outcome in BellKind::ALL {
        let state = StateVector::basis_ket(vec![src.clone()], &[0])
            .unwrap()
            .tensor(&bell_state(BellKind::PsiMinus, &near, &far).unwrap())
            .unwrap();
        let mut driver = ForcedDriver::from_kinds(&[outcome]);
        let (out, event) =
            teleport_dof(&state, &src, &near, &far, BellKind::PsiMinus, &table, &mut driver)
                .unwrap();
        assert_eq!(event.outcome, outcome);
        let expected = StateVector::basis_ket(vec![far.clone()], &[0]).unwrap();
        assert!(out.overlap_fidelity(&expected).unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn teleporting_half_a_bell_pair_swaps_the_entanglement() {
    // source is half of an external pair; afterwards the target carries
    // the entanglement (entropy of the reduced external qubit stays 1 bit)
    let external = SubsystemLabel::qubit(Photon::Named("R".into()), Dof::Sam);
    let src = SubsystemLabel::qubit(Photon::P1, Dof::Sam);
    let near = sam(Photon::A);
    let far = sam(Photon::C);
    let state = bell_state(BellKind::PhiPlus, &external, &src)
        .unwrap()
        .tensor(&bell_state(BellKind::PsiMinus, &near, &far).unwrap())
        .unwrap();
    let table = CorrectionTable::derive().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut driver = RngDriver(&mut rng);
    let (out, _) =
        teleport_dof(&state, &src, &near, &far, BellKind::PsiMinus, &table, &mut driver).unwrap();
    let red = out.reduced(&[external.clone()]).unwrap();
    assert!((red.entropy_bits() - 1.0).abs() < 1e-9);
    // and the joint (external, far) state is exactly the original Bell pair
    let expected = bell_state(BellKind::PhiPlus, &external, &far).unwrap();
    assert!(out.overlap_fidelity(&expected).unwrap() >= 1.0 - 1e-9);
}

#[test]
fn multiplex_carries_basis_inputs_onto_the_carrier() {
    // |sigma+>_P1 ⊗ |+1>_P2 lands on C as |sigma+, +1> = |0, 0>
    let labels = protocol_input_labels(2).unwrap();
    let input = StateVector::basis_ket(labels.clone(), &[0, 0]).unwrap();
    let resource = Resource::prepare(&ResourceSpec::transmitter(2).unwrap()).unwrap();
    let table = CorrectionTable::derive().unwrap();
    for branch in all_branches(2) {
        let mut driver = ForcedDriver::from_kinds(&branch);
        let (state, events) = multiplex(&input, &labels, &resource, &table, &mut driver).unwrap();
        assert_eq!(events.len(), 2);
        let expected = StateVector::basis_ket(carrier_labels(2).unwrap(), &[0, 0]).unwrap();
        assert!(state.overlap_fidelity(&expected).unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn multiplex_preserves_entanglement_between_the_sources() {
    // a Bell state across (P1 SAM, P2 OAM) becomes the same Bell state
    // across the two DoFs of the single carrier photon
    let labels = protocol_input_labels(2).unwrap();
    let input = bell_state(BellKind::PsiPlus, &labels[0], &labels[1]).unwrap();
    let resource = Resource::prepare(&ResourceSpec::transmitter(2).unwrap()).unwrap();
    let table = CorrectionTable::derive().unwrap();
    for branch in all_branches(2) {
        let mut driver = ForcedDriver::from_kinds(&branch);
        let (state, _) = multiplex(&input, &labels, &resource, &table, &mut driver).unwrap();
        let c = carrier_labels(2).unwrap();
        let expected = bell_state(BellKind::PsiPlus, &c[0], &c[1]).unwrap();
        assert!(state.overlap_fidelity(&expected).unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn single_dof_multiplex_reduces_to_teleport_dof() {
    let labels = protocol_input_labels(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let input = haar_random_state(labels.clone(), &mut rng).unwrap();
    let resource = Resource::prepare(&ResourceSpec::transmitter(1).unwrap()).unwrap();
    let table = CorrectionTable::derive().unwrap();
    for outcome in BellKind::ALL {
        let mut driver = ForcedDriver::from_kinds(&[outcome]);
        let (via_multiplex, _) =
            multiplex(&input, &labels, &resource, &table, &mut driver).unwrap();

        let joint = input.tensor(&resource.state).unwrap();
        let mut driver = ForcedDriver::from_kinds(&[outcome]);
        let pairing = &resource.pairings[0];
        let (via_teleport, _) = teleport_dof(
            &joint,
            &labels[0],
            &pairing.left_label(),
            &pairing.right_label(),
            pairing.kind,
            &table,
            &mut driver,
        )
        .unwrap();
        assert!(via_multiplex.overlap_fidelity(&via_teleport).unwrap() >= 1.0 - 1e-12);
    }
}

#[test]
fn demultiplex_separates_basis_and_bell_carriers() {
    let c = carrier_labels(2).unwrap();
    let receiver = Resource::prepare(&ResourceSpec::receiver(2).unwrap()).unwrap();
    let table = CorrectionTable::derive().unwrap();
    let out_labels = protocol_output_labels(2).unwrap();

    // carrier |sigma-, -1> = |1, 1> -> E SAM |1>, F OAM |1>
    let carrier = StateVector::basis_ket(c.clone(), &[1, 1]).unwrap();
    for branch in all_branches(2) {
        let mut driver = ForcedDriver::from_kinds(&branch);
        let (state, _) = demultiplex(&carrier, &c, &receiver, &table, &mut driver).unwrap();
        let expected = StateVector::basis_ket(out_labels.clone(), &[1, 1]).unwrap();
        assert!(state.overlap_fidelity(&expected).unwrap() >= 1.0 - 1e-9);
    }

    // a Psi+ correlation between the carrier DoFs ends up between the two
    // distinct output photons
    let carrier = bell_state(BellKind::PsiPlus, &c[0], &c[1]).unwrap();
    for branch in all_branches(2) {
        let mut driver = ForcedDriver::from_kinds(&branch);
        let (state, _) = demultiplex(&carrier, &c, &receiver, &table, &mut driver).unwrap();
        let expected = bell_state(BellKind::PsiPlus, &out_labels[0], &out_labels[1]).unwrap();
        assert!(state.overlap_fidelity(&expected).unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn round_trip_preserves_entanglement_with_a_reference() {
    // input entangled with a held-out reference qubit R: after multiplex +
    // demultiplex the output-R joint state equals the input-R state
    let reference = SubsystemLabel::qubit(Photon::Named("R".into()), Dof::Generic(9));
    let labels = protocol_input_labels(2).unwrap();
    let table = CorrectionTable::derive().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);

    for _ in 0..20 {
        // Haar state over (P1 SAM, P2 OAM, R): inputs entangled with R
        let mut all = labels.clone();
        all.push(reference.clone());
        let joint_input = haar_random_state(all, &mut rng).unwrap();

        let transmitter = Resource::prepare(&ResourceSpec::transmitter(2).unwrap()).unwrap();
        let receiver = Resource::prepare(&ResourceSpec::receiver(2).unwrap()).unwrap();
        let mut driver = RngDriver(&mut rng);
        let (mid, _) = multiplex(&joint_input, &labels, &transmitter, &table, &mut driver).unwrap();
        let (out, _) =
            demultiplex(&mid, &carrier_labels(2).unwrap(), &receiver, &table, &mut driver)
                .unwrap();

        let rename: Vec<(SubsystemLabel, SubsystemLabel)> = protocol_output_labels(2)
            .unwrap()
            .into_iter()
            .zip(labels.clone())
            .collect();
        let out = out.relabeled(&rename).unwrap();
        assert!(out.overlap_fidelity(&joint_input).unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn three_dof_runs_reconstruct_noiselessly() {
    // the generalized layout: SAM, OAM and one generic two-level DoF
    let labels = protocol_input_labels(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..5 {
        let input = haar_random_state(labels.clone(), &mut rng).unwrap();
        let trace = run_protocol(&input, &NoiseConfig::noiseless(), &mut rng).unwrap();
        assert!(trace.final_fidelity >= 1.0 - 1e-9);
        assert_eq!(trace.bsm_outcomes.len(), 6);
    }
    // and a lost three-qubit carrier scores 1/8
    let input = haar_random_state(labels, &mut rng).unwrap();
    let trace = run_protocol(&input, &NoiseConfig::with_epsilon(1.0).unwrap(), &mut rng).unwrap();
    assert!((trace.final_fidelity - 0.125).abs() < 1e-9);
}

#[test]
fn run_protocol_rejects_misnamed_inputs() {
    let wrong = vec![sam(Photon::A), oam(Photon::B)];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let input = haar_random_state(wrong, &mut rng).unwrap();
    assert!(run_protocol(&input, &NoiseConfig::noiseless(), &mut rng).is_err());
}

#[test]
fn bsm_outcomes_are_uniform_in_teleportation() {
    // every Bell outcome occurs with probability 1/4; 10^4 runs, 3 sigma
    let labels = protocol_input_labels(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let input = haar_random_state(labels.clone(), &mut rng).unwrap();
    let mut counts = [0usize; 4];
    let shots = 10_000;
    for _ in 0..shots {
        let trace = run_protocol(&input, &NoiseConfig::noiseless(), &mut rng).unwrap();
        counts[trace.bsm_outcomes[0].outcome.index()] += 1;
    }
    let expected = shots as f64 / 4.0;
    let sigma = (shots as f64 * 0.25 * 0.75).sqrt();
    for (k, &count) in counts.iter().enumerate() {
        assert!(
            (count as f64 - expected).abs() < 3.0 * sigma,
            "outcome {k}: {count} vs {expected} +- {sigma}"
        );
    }
}

#[test]
fn mean_fidelity_matches_the_closed_form_oracle() {
    // oracle derived before implementation: the carrier survives all K
    // configured sites with probability s = (1-eps)^K and reconstructs
    // perfectly; otherwise it scores the maximally mixed 1/4. So
    // E[F] = s + (1 - s)/4.
    let epsilon = 0.2;
    let trials = 70;
    let noise = NoiseConfig::with_epsilon(epsilon).unwrap();
    let k = noise.sites.len() as i32;
    let survival = (1.0 - epsilon).powi(k);
    let oracle = survival + (1.0 - survival) * 0.25;

    let labels = protocol_input_labels(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7777);
    let mut values = Vec::with_capacity(trials);
    for _ in 0..trials {
        let input = haar_random_state(labels.clone(), &mut rng).unwrap();
        let trace = run_protocol(&input, &noise, &mut rng).unwrap();
        values.push(trace.final_fidelity);
    }
    let mean: f64 = values.iter().sum::<f64>() / trials as f64;
    let var: f64 =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials as f64 - 1.0);
    let se = (var / trials as f64).sqrt();
    assert!(
        (mean - oracle).abs() <= 3.0 * se,
        "mean {mean} vs oracle {oracle} (se {se})"
    );
}

#[test]
fn mean_fidelity_is_monotone_in_epsilon() {
    // non-increasing on a 6-point grid up to 3 standard errors, 500 trials
    let config = ExperimentConfig {
        seed: 314,
        trials_per_point: 500,
        epsilon_grid: EpsilonGrid { min: 0.0, max: 0.5, steps: 6 },
        ..ExperimentConfig::default()
    };
    let result = run_fidelity_sweep(&config).unwrap();
    for pair in result.points.windows(2) {
        let tolerance = 3.0 * (pair[0].std_error + pair[1].std_error);
        assert!(
            pair[1].mean_fidelity <= pair[0].mean_fidelity + tolerance,
            "mean rose from {} to {} between eps {} and {}",
            pair[0].mean_fidelity,
            pair[1].mean_fidelity,
            pair[0].epsilon,
            pair[1].epsilon
        );
    }
}

#[test]
fn traces_are_reproducible_byte_for_byte() {
    let labels = protocol_input_labels(2).unwrap();
    let noise = NoiseConfig::with_epsilon(0.3).unwrap();
    let run = || {
        let mut rng = ChaCha8Rng::seed_from_u64(555);
        let input = haar_random_state(labels.clone(), &mut rng).unwrap();
        let trace = run_protocol(&input, &noise, &mut rng).unwrap();
        serde_json::to_vec(&trace).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn entanglement_generation_noiseless_yields_two_bell_pairs() {
    let e_sam = sam(Photon::E);
    let p3_sam = sam(Photon::P3);
    let f_oam = oam(Photon::F);
    let p4_oam = oam(Photon::P4);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (output, trace) = entanglement_generation(
        BellKind::PhiPlus,
        BellKind::PhiPlus,
        &NoiseConfig::noiseless(),
        &mut rng,
    )
    .unwrap();
    assert!(trace.final_fidelity >= 1.0 - 1e-9);

    for (pair, kind) in [
        ([e_sam.clone(), p3_sam.clone()], BellKind::PhiPlus),
        ([f_oam.clone(), p4_oam.clone()], BellKind::PhiPlus),
    ] {
        let reduced = output.partial_trace(&pair).unwrap();
        let target = bell_state(kind, &pair[0], &pair[1]).unwrap().to_density();
        assert!(fidelity(&target, &reduced).unwrap() >= 1.0 - 1e-9);
        // one bit of entanglement within the pair
        let half = reduced.partial_trace(&pair[..1]).unwrap();
        assert!((half.entropy_bits() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn entanglement_generation_forced_branches_all_succeed() {
    for branch in all_branches(4) {
        let (_, trace) =
            entanglement_generation_forced(BellKind::PsiMinus, BellKind::PhiMinus, &branch)
                .unwrap();
        assert!(trace.final_fidelity >= 1.0 - 1e-9, "branch {branch:?}");
    }
}

#[test]
fn entanglement_generation_under_certain_loss_is_separable() {
    let e_sam = sam(Photon::E);
    let p3_sam = sam(Photon::P3);
    let f_oam = oam(Photon::F);
    let p4_oam = oam(Photon::P4);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (output, trace) = entanglement_generation(
        BellKind::PhiPlus,
        BellKind::PhiPlus,
        &NoiseConfig::with_epsilon(1.0).unwrap(),
        &mut rng,
    )
    .unwrap();
    assert!(trace.carrier_lost());

    for pair in [[e_sam, p3_sam], [f_oam, p4_oam]] {
        let reduced = output.partial_trace(&pair).unwrap();
        // the pair is exactly I/4: fidelity with any maximally entangled
        // state is 1/4, comfortably under the separable bound 1/2
        for kind in BellKind::ALL {
            let target = bell_state(kind, &pair[0], &pair[1]).unwrap().to_density();
            let f = fidelity(&target, &reduced).unwrap();
            assert!(f <= 0.5 + 1e-9, "pair {pair:?} kind {kind}: fidelity {f}");
        }
    }
}

#[test]
fn lost_policy_flags_are_respected_in_the_sweep() {
    // under conditional scoring every scored run is a survivor with
    // fidelity 1
    let config = ExperimentConfig {
        seed: 77,
        trials_per_point: 60,
        epsilon_grid: EpsilonGrid { min: 0.4, max: 0.4, steps: 1 },
        lost_policy: LostPolicy::ConditionOnSurvival,
        ..ExperimentConfig::default()
    };
    let result = run_fidelity_sweep(&config).unwrap();
    let point = &result.points[0];
    assert!(point.trials < 60, "some trials must be lost at eps = 0.4");
    assert!(point.trials > 0);
    assert!((point.mean_fidelity - 1.0).abs() < 1e-9);
}
