//! Lower bounds for F̄ on all-subsets families too large to sweep.
//!
//! For each phase φ the real objective Re(e^{−iφ} Σ v_θ)/ν(Q) is maximized
//! under ν(Q) ≥ λ by a Dinkelbach iteration. Its inner problem
//! max Σ (a_θ − r w_θ) x_θ subject to Σ w_θ x_θ ≥ λ is solved by taking every
//! positive item and then filling capacity greedily by (a_θ − r w_θ)/w_θ.
//! Both rules select a prefix of the items sorted by a_θ/w_θ, so each phase
//! sorts once and the iteration only moves a prefix length.
//!
//! Every candidate is scored with the exact engine's summation, so on
//! lattices where both engines run the heuristic never exceeds the exact value.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::averaging::{score, LevelValue};
use super::net::CoefficientNet;

const COMPLEX_PHASES: usize = 64;
const MAX_ITERATIONS: usize = 100;

pub(crate) fn phases(real: bool) -> Vec<f64> {
    if real {
        vec![0.0, PI]
    } else {
        (0..COMPLEX_PHASES).map(|k| 2.0 * PI * k as f64 / COMPLEX_PHASES as f64).collect()
    }
}

struct PhaseResult {
    order: Vec<usize>,
    /// Per level: (score, prefix length) of the candidate, if capacity allows one.
    picks: Vec<Option<(f64, usize)>>,
}

pub(crate) fn levels(net: &CoefficientNet, values: &[Complex64], levels: &[f64]) -> Vec<LevelValue> {
    let masses: Vec<u64> = net.lattice().elements().iter().map(|e| e.mass()).collect();
    let results: Vec<PhaseResult> = phases(net.is_real())
        .into_par_iter()
        .map(|phi| run_phase(values, &masses, levels, phi))
        .collect();

    // Best phase per level, earliest phase on ties.
    let mut best: Vec<Option<(f64, usize, usize)>> = vec![None; levels.len()];
    for (pi, res) in results.iter().enumerate() {
        for (slot, pick) in best.iter_mut().zip(&res.picks) {
            if let Some((s, k)) = *pick {
                if slot.is_none_or(|(b, ..)| s > b) {
                    *slot = Some((s, pi, k));
                }
            }
        }
    }
    // A candidate for a higher level is admissible at every lower level.
    for i in (0..levels.len().saturating_sub(1)).rev() {
        if let (Some(upper), lower) = (best[i + 1], best[i]) {
            if lower.is_none_or(|(b, ..)| upper.0 > b) {
                best[i] = Some(upper);
            }
        }
    }
    levels
        .iter()
        .zip(best)
        .map(|(&level, b)| match b {
            Some((value, pi, k)) => {
                let mut ids = results[pi].order[..k].to_vec();
                ids.sort_unstable();
                let nu = ids.iter().map(|&i| masses[i]).sum::<u64>() as f64;
                LevelValue { level, value, witness: Some(ids), witness_nu: Some(nu) }
            }
            None => LevelValue { level, value: 0.0, witness: None, witness_nu: None },
        })
        .collect()
}

fn run_phase(values: &[Complex64], masses: &[u64], levels: &[f64], phi: f64) -> PhaseResult {
    let rot = Complex64::from_polar(1.0, -phi);
    let a: Vec<f64> = values.iter().map(|v| (v * rot).re).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        let (ri, rj) = (a[i] / masses[i] as f64, a[j] / masses[j] as f64);
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    let mut cap = vec![0u64; order.len() + 1];
    let mut num = vec![0.0f64; order.len() + 1];
    for (k, &i) in order.iter().enumerate() {
        cap[k + 1] = cap[k] + masses[i];
        num[k + 1] = num[k] + a[i];
    }
    let mut cache: Vec<Option<f64>> = vec![None; order.len() + 1];
    let mut prefix_score = |k: usize| -> f64 {
        *cache[k].get_or_insert_with(|| {
            let mut ids = order[..k].to_vec();
            ids.sort_unstable();
            score(values, &ids, cap[k] as f64)
        })
    };

    let picks = levels
        .iter()
        .map(|&level| {
            // Shortest prefix meeting the capacity floor.
            let k_cap = cap.partition_point(|&c| (c as f64) < level);
            if k_cap > order.len() {
                return None;
            }
            let k_cap = k_cap.max(1);
            let mut r = 0.0;
            let mut k = usize::MAX;
            for _ in 0..MAX_ITERATIONS {
                let k_pos = order.partition_point(|&i| a[i] - r * masses[i] as f64 > 0.0);
                let next = k_pos.max(k_cap);
                if next == k {
                    break;
                }
                k = next;
                r = num[k] / cap[k] as f64;
            }
            Some((prefix_score(k), k))
        })
        .collect();
    PhaseResult { order, picks }
}
