use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::Serialize;

use super::heuristic;
use super::net::{subset_sum, CoefficientNet};
use crate::error::{NetspaceError, Result};
use crate::families::{FamilyKind, SubsetFamily, EXACT_SUBSET_CAP};

static TABLES_CHECKED: AtomicU64 = AtomicU64::new(0);
static MONOTONICITY_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide `(tables checked, monotonicity violations)` counts.
pub fn monotonicity_counters() -> (u64, u64) {
    (TABLES_CHECKED.load(Ordering::Relaxed), MONOTONICITY_VIOLATIONS.load(Ordering::Relaxed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Exact,
    Heuristic,
    /// Exact when the family can be enumerated, heuristic otherwise.
    #[default]
    Auto,
}

impl FromStr for Engine {
    type Err = NetspaceError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Engine::Exact),
            "heuristic" => Ok(Engine::Heuristic),
            "auto" => Ok(Engine::Auto),
            _ => Err(NetspaceError::Parse(format!(
                "unknown engine {s:?} (expected exact, heuristic or auto)"
            ))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Exact => "exact",
            Engine::Heuristic => "heuristic",
            Engine::Auto => "auto",
        })
    }
}

impl Engine {
    /// The engine actually run for `family`.
    pub fn resolve(self, family: &SubsetFamily) -> Engine {
        match self {
            Engine::Auto
                if family.kind() == FamilyKind::AllSubsets
                    && family.lattice().len() > EXACT_SUBSET_CAP =>
            {
                Engine::Heuristic
            }
            Engine::Auto => Engine::Exact,
            e => e,
        }
    }
}

/// F̄[λ] at one level with the subset attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelValue {
    pub level: f64,
    pub value: f64,
    /// `None` when no member has measure ≥ λ (then `value` is 0).
    pub witness: Option<Vec<usize>>,
    pub witness_nu: Option<f64>,
}

/// F̄ on a set of increasing levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragingTable {
    pub engine: Engine,
    /// Set when values are certified lower bounds rather than exact sups.
    pub lower_bound: bool,
    pub levels: Vec<LevelValue>,
}

impl AveragingTable {
    /// Value at `level`, which must be one of the table's levels.
    pub fn value_at(&self, level: f64) -> Option<f64> {
        self.levels
            .binary_search_by(|lv| lv.level.total_cmp(&level))
            .ok()
            .map(|i| self.levels[i].value)
    }

    fn check_monotone(&self) -> Result<()> {
        TABLES_CHECKED.fetch_add(1, Ordering::Relaxed);
        for w in self.levels.windows(2) {
            if w[1].value > w[0].value {
                MONOTONICITY_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
                return Err(NetspaceError::InternalConsistency(format!(
                    "averaging increased from {} at level {} to {} at level {}",
                    w[0].value, w[0].level, w[1].value, w[1].level
                )));
            }
        }
        Ok(())
    }
}

/// Ratio |Σ_{θ∈Q} v_θ| / ν(Q) with the shared summation order.
pub(crate) fn score(values: &[Complex64], ids: &[usize], nu: f64) -> f64 {
    subset_sum(values, ids).norm() / nu
}

/// F̄[λ, M] at a single level.
pub fn averaging(
    net: &CoefficientNet,
    level: f64,
    family: &SubsetFamily,
    engine: Engine,
) -> Result<LevelValue> {
    let table = averaging_table(net, &[level], family, engine)?;
    Ok(table.levels.into_iter().next().expect("one level requested"))
}

/// F̄[λ, M] at every level in `levels`, which are sorted and deduplicated first.
pub fn averaging_table(
    net: &CoefficientNet,
    levels: &[f64],
    family: &SubsetFamily,
    engine: Engine,
) -> Result<AveragingTable> {
    if let Some(bad) = levels.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        return Err(NetspaceError::domain(format!("averaging level must be > 0, got {bad}")));
    }
    if net.lattice().as_ref() != family.lattice().as_ref() {
        return Err(NetspaceError::Shape("net and family live on different lattices".into()));
    }
    let mut levels = levels.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let values = net.weighted_traces();
    let table = match engine.resolve(family) {
        Engine::Heuristic => {
            if family.kind() != FamilyKind::AllSubsets {
                return Err(NetspaceError::domain(format!(
                    "heuristic engine needs an all-subsets family, got {}",
                    family.describe()
                )));
            }
            AveragingTable {
                engine: Engine::Heuristic,
                lower_bound: true,
                levels: heuristic::levels(net, &values, &levels),
            }
        }
        _ => AveragingTable { engine: Engine::Exact, lower_bound: false, levels: exact(&values, &levels, family)? },
    };
    table.check_monotone()?;
    Ok(table)
}

/// Single sweep over the family. Each member is credited to the highest level
/// its measure reaches; a suffix max then gives the sup at every level.
fn exact(values: &[Complex64], levels: &[f64], family: &SubsetFamily) -> Result<Vec<LevelValue>> {
    let Some(&lowest) = levels.first() else {
        return Ok(Vec::new());
    };
    // (score, enumeration index, ids, nu)
    type Best = Option<(f64, usize, Vec<usize>, f64)>;
    let mut best: Vec<Best> = vec![None; levels.len()];
    for (index, member) in family.enumerate_with_capacity(lowest)?.enumerate() {
        let bucket = levels.partition_point(|&l| l <= member.nu) - 1;
        let s = score(values, &member.ids, member.nu);
        let better = match &best[bucket] {
            None => true,
            Some((b, ..)) => s > *b,
        };
        if better {
            best[bucket] = Some((s, index, member.ids, member.nu));
        }
    }
    for i in (0..levels.len().saturating_sub(1)).rev() {
        let take_upper = match (&best[i], &best[i + 1]) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some((a, ia, ..)), Some((b, ib, ..))) => b > a || (b == a && ib < ia),
        };
        if take_upper {
            best[i] = best[i + 1].clone();
        }
    }
    Ok(levels
        .iter()
        .zip(best)
        .map(|(&level, b)| match b {
            Some((value, _, ids, nu)) => {
                LevelValue { level, value, witness: Some(ids), witness_nu: Some(nu) }
            }
            None => LevelValue { level, value: 0.0, witness: None, witness_nu: None },
        })
        .collect())
}
