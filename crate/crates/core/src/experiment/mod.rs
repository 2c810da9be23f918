//! Reproducible experiments: the fidelity-vs-erasure Monte Carlo sweep and
//! the capacity verification table.
//!
//! Determinism contract: the master seed expands into one counter-indexed
//! ChaCha substream per (grid point, trial), so results are bit-identical
//! regardless of execution order. With the `parallel` feature the trials of
//! each grid point fan out across a rayon pool; the sequential path is
//! always available and produces the same bytes.

mod config;
mod output;

pub use config::{EpsilonGrid, ExperimentConfig, OutputFormat};
pub use output::{capacity_to_csv, capacity_to_json, format_sig12, sweep_to_csv, sweep_to_json};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{
    capacity_labels, coherent_information, erasure_capacity_formula, joint_carrier_erasure,
    max_entangled_input,
};
use crate::error::Result;
use crate::random::haar_random_state;
use crate::states::protocol_input_labels;
use crate::teleport::{run_protocol, LostPolicy, NoiseConfig};

/// Aggregated statistics of one grid point. `trials` counts the runs that
/// were actually scored (lost runs are excluded under
/// [`LostPolicy::ConditionOnSurvival`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub epsilon: f64,
    pub mean_fidelity: f64,
    pub std_error: f64,
    pub trials: u32,
}

/// Full sweep output: one record per grid point plus the config echo and
/// the software version.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    #[serde(rename = "results")]
    pub points: Vec<SweepPoint>,
    pub version: String,
}

#[derive(Debug, Clone, Copy)]
struct TrialScore {
    fidelity: f64,
    lost: bool,
}

fn run_trial(config: &ExperimentConfig, point: usize, trial: u32, epsilon: f64) -> Result<TrialScore> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    let labels = protocol_input_labels(config.n_dofs)?;
    let input = haar_random_state(labels, &mut rng)?;
    let noise = NoiseConfig::new(epsilon, config.noise_sites.clone(), config.lost_policy)?;
    let trace = run_protocol(&input, &noise, &mut rng)?;
    Ok(TrialScore { fidelity: trace.final_fidelity, lost: trace.carrier_lost() })
}

/// Mean and standard error (sample std with the n−1 denominator, divided
/// by √n) over the scored trials, in trial order.
fn aggregate(epsilon: f64, scores: &[TrialScore], policy: LostPolicy) -> SweepPoint {
    let scored: Vec<f64> = scores
        .iter()
        .filter(|s| policy == LostPolicy::MaximallyMixed || !s.lost)
        .map(|s| s.fidelity)
        .collect();
    let n = scored.len();
    if n == 0 {
        return SweepPoint { epsilon, mean_fidelity: 0.0, std_error: 0.0, trials: 0 };
    }
    let mean = scored.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = scored.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (n as f64 - 1.0);
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    SweepPoint { epsilon, mean_fidelity: mean, std_error, trials: n as u32 }
}

fn sweep_with<F>(config: &ExperimentConfig, run_point: F) -> Result<SweepResult>
where
    F: Fn(&ExperimentConfig, usize, f64) -> Result<Vec<TrialScore>>,
{
    config.validate()?;
    let mut points = Vec::new();
    for (index, epsilon) in config.epsilon_grid.points().into_iter().enumerate() {
        let scores = run_point(config, index, epsilon)?;
        points.push(aggregate(epsilon, &scores, config.lost_policy));
    }
    Ok(SweepResult {
        config: config.clone(),
        points,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Sequential sweep; the reference for the determinism contract.
pub fn run_fidelity_sweep_serial(config: &ExperimentConfig) -> Result<SweepResult> {
    sweep_with(config, |config, index, epsilon| {
        (0..config.trials_per_point)
            .map(|trial| run_trial(config, index, trial, epsilon))
            .collect()
    })
}

/// Parallel sweep: trials fan out across the rayon pool. Scores are
/// collected in trial order, so the aggregation matches the serial path
/// bit for bit.
#[cfg(feature = "parallel")]
pub fn run_fidelity_sweep_parallel(config: &ExperimentConfig) -> Result<SweepResult> {
    sweep_with(config, |config, index, epsilon| {
        (0..config.trials_per_point)
            .into_par_iter()
            .map(|trial| run_trial(config, index, trial, epsilon))
            .collect()
    })
}

/// Run the fidelity sweep with the best available backend.
pub fn run_fidelity_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    #[cfg(feature = "parallel")]
    {
        run_fidelity_sweep_parallel(config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_fidelity_sweep_serial(config)
    }
}

/// One row of the capacity table: the closed-form capacity against the
/// coherent information computed from first principles at the maximally
/// entangled input. The two agree for ε ≤ 1/2; beyond that the closed form
/// clamps to zero while the raw coherent information goes negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityRow {
    pub epsilon: f64,
    pub n: u32,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_diff: f64,
}

/// Cross-check the capacity formula on a grid of erasure rates and DoF
/// counts.
pub fn run_capacity_table(epsilons: &[f64], n_list: &[u32]) -> Result<Vec<CapacityRow>> {
    let mut rows = Vec::with_capacity(epsilons.len() * n_list.len());
    for &n in n_list {
        let dim = 1usize << n;
        let input = max_entangled_input(dim)?;
        let (sender, _) = capacity_labels(dim);
        for &epsilon in epsilons {
            let channel = joint_carrier_erasure(epsilon, n)?;
            let numeric = coherent_information(&channel, &input, &sender)?;
            let analytic = erasure_capacity_formula(epsilon, n)?;
            rows.push(CapacityRow {
                epsilon,
                n,
                analytic,
                numeric,
                abs_diff: (analytic - numeric).abs(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            trials_per_point: 8,
            epsilon_grid: EpsilonGrid { min: 0.0, max: 0.4, steps: 3 },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn zero_epsilon_point_is_perfect() {
        let result = run_fidelity_sweep_serial(&small_config()).unwrap();
        let p0 = &result.points[0];
        assert!((p0.mean_fidelity - 1.0).abs() < 1e-9);
        assert!(p0.std_error < 1e-9);
        assert_eq!(p0.trials, 8);
    }

    #[test]
    fn same_seed_gives_identical_results() {
        let a = run_fidelity_sweep_serial(&small_config()).unwrap();
        let b = run_fidelity_sweep_serial(&small_config()).unwrap();
        assert_eq!(a, b);
        assert_eq!(sweep_to_csv(&a), sweep_to_csv(&b));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_serial_agree_bit_for_bit() {
        let serial = run_fidelity_sweep_serial(&small_config()).unwrap();
        let parallel = run_fidelity_sweep_parallel(&small_config()).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(sweep_to_json(&serial), sweep_to_json(&parallel));
    }

    #[test]
    fn std_error_matches_its_definition() {
        let scores: Vec<TrialScore> = [0.2, 0.4, 0.6, 0.8]
            .iter()
            .map(|&fidelity| TrialScore { fidelity, lost: false })
            .collect();
        let point = aggregate(0.1, &scores, LostPolicy::MaximallyMixed);
        let mean = 0.5;
        let var = [0.2_f64, 0.4, 0.6, 0.8]
            .iter()
            .map(|f| (f - mean) * (f - mean))
            .sum::<f64>()
            / 3.0;
        let expected = (var / 4.0).sqrt();
        assert!((point.std_error - expected).abs() < 1e-12);
        assert!((point.mean_fidelity - mean).abs() < 1e-12);
    }

    #[test]
    fn conditional_policy_skips_lost_trials() {
        let scores = vec![
            TrialScore { fidelity: 1.0, lost: false },
            TrialScore { fidelity: 0.25, lost: true },
            TrialScore { fidelity: 1.0, lost: false },
        ];
        let point = aggregate(0.3, &scores, LostPolicy::ConditionOnSurvival);
        assert_eq!(point.trials, 2);
        assert!((point.mean_fidelity - 1.0).abs() < 1e-12);
        let all = aggregate(0.3, &scores, LostPolicy::MaximallyMixed);
        assert_eq!(all.trials, 3);
        assert!((all.mean_fidelity - 0.75).abs() < 1e-12);
    }

    #[test]
    fn capacity_table_spot_values() {
        let rows = run_capacity_table(&[0.0, 0.1, 0.5], &[1, 2]).unwrap();
        let find = |eps: f64, n: u32| {
            *rows
                .iter()
                .find(|r| (r.epsilon - eps).abs() < 1e-12 && r.n == n)
                .unwrap()
        };
        let r = find(0.1, 2);
        assert!((r.analytic - 1.6).abs() < 1e-12);
        assert!(r.abs_diff < 1e-9);
        let r = find(0.5, 1);
        assert_eq!(r.analytic, 0.0);
        assert!(r.numeric.abs() < 1e-9);
        let r = find(0.0, 1);
        assert!((r.analytic - 1.0).abs() < 1e-12);
        assert!((r.numeric - 1.0).abs() < 1e-9);
    }
}
