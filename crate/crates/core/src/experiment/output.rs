//! Plot-ready CSV and JSON emission.
//!
//! CSV columns and JSON key names are part of the tool's contract:
//! sweep CSV is `epsilon,mean_fidelity,std_error,trials`; capacity CSV is
//! `epsilon,n,analytic,numeric,abs_diff`. Sweep JSON is a top-level object
//! `{config, results, version}`; capacity JSON is an array of row objects.

use super::{CapacityRow, SweepResult};

/// Decimal rendering with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000".into();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

pub fn sweep_to_csv(result: &SweepResult) -> String {
    let mut out = String::from("epsilon,mean_fidelity,std_error,trials\n");
    for p in &result.points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_sig12(p.epsilon),
            format_sig12(p.mean_fidelity),
            format_sig12(p.std_error),
            p.trials
        ));
    }
    out
}

pub fn sweep_to_json(result: &SweepResult) -> String {
    let mut text = serde_json::to_string_pretty(result).expect("sweep result serializes");
    text.push('\n');
    text
}

pub fn capacity_to_csv(rows: &[CapacityRow]) -> String {
    let mut out = String::from("epsilon,n,analytic,numeric,abs_diff\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_sig12(r.epsilon),
            r.n,
            format_sig12(r.analytic),
            format_sig12(r.numeric),
            format_sig12(r.abs_diff)
        ));
    }
    out
}

pub fn capacity_to_json(rows: &[CapacityRow]) -> String {
    let mut text = serde_json::to_string_pretty(rows).expect("capacity rows serialize");
    text.push('\n');
    text
}
