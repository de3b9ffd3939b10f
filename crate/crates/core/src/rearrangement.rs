//! Decreasing rearrangements of finitely supported (or finitely sampled)
//! functions, and the Lorentz norms computed from them.

use serde::Serialize;

use crate::error::{NetspaceError, Result};
use crate::numeric::CompensatedSum;

/// f* as a finite list of steps `(value, mass)` with strictly decreasing values.
///
/// f*(t) = value_i for t in [T_{i-1}, T_i), where T_i is the cumulative mass,
/// and f*(t) = 0 beyond the total mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    steps: Vec<(f64, f64)>,
    total_mass: f64,
}

impl StepFunction {
    /// Builds f* from atoms `(|value|, mass)`. Atoms of zero mass are dropped
    /// and atoms with equal values are merged.
    pub fn from_atoms(atoms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut atoms: Vec<(f64, f64)> = atoms
            .into_iter()
            .filter(|&(_, m)| m > 0.0)
            .map(|(v, m)| (v.abs(), m))
            .collect();
        atoms.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut steps: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        let mut masses: Vec<CompensatedSum> = Vec::with_capacity(atoms.len());
        for (v, m) in atoms {
            match steps.last() {
                Some(&(last, _)) if last == v => masses.last_mut().unwrap().add(m),
                _ => {
                    steps.push((v, 0.0));
                    let mut acc = CompensatedSum::new();
                    acc.add(m);
                    masses.push(acc);
                }
            }
        }
        for (step, acc) in steps.iter_mut().zip(&masses) {
            step.1 = acc.value();
        }
        let total_mass = masses.iter().map(|m| m.value()).collect::<CompensatedSum>().value();
        StepFunction { steps, total_mass }
    }

    /// Rearrangement of equally weighted samples.
    pub fn from_samples(values: impl IntoIterator<Item = f64>, mass_each: f64) -> Self {
        Self::from_atoms(values.into_iter().map(|v| (v, mass_each)))
    }

    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// f*(t).
    pub fn value_at(&self, t: f64) -> f64 {
        let mut cum = 0.0;
        for &(v, m) in &self.steps {
            cum += m;
            if t < cum {
                return v;
            }
        }
        0.0
    }

    /// (∫ (f*)^p)^{1/p}, or the largest value for p = ∞.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.steps.first().map_or(0.0, |s| s.0);
        }
        let s: CompensatedSum = self.steps.iter().map(|&(v, m)| m * v.powf(p)).collect();
        s.value().powf(1.0 / p)
    }

    /// sup_t t^a f*(t) for a ≥ 0, attained at the right end of a step.
    pub fn sup_weighted(&self, a: f64) -> f64 {
        let mut cum = 0.0;
        let mut best: f64 = 0.0;
        for &(v, m) in &self.steps {
            cum += m;
            best = best.max(v * cum.powf(a));
        }
        best
    }

    /// ‖t^{1/p} f*(t)‖_{L^q(dt/t)}, integrated in closed form on each step:
    /// ∫_{T_{i-1}}^{T_i} t^{q/p - 1} dt = (p/q)(T_i^{q/p} − T_{i-1}^{q/p}).
    pub fn lorentz_norm(&self, p: f64, q: f64) -> Result<f64> {
        if !(p >= 1.0) || p.is_infinite() || !(q >= 1.0) {
            return Err(NetspaceError::domain(format!(
                "Lorentz norm needs 1 <= p < inf and q >= 1, got p={p}, q={q}"
            )));
        }
        if q.is_infinite() {
            return Ok(self.sup_weighted(1.0 / p));
        }
        let r = q / p;
        let mut acc = CompensatedSum::new();
        let mut prev_cum = 0.0;
        let mut prev_pow = 0.0;
        for &(v, m) in &self.steps {
            let cum = prev_cum + m;
            let pow = cum.powf(r);
            if v > 0.0 {
                acc.add(v.powf(q) * (pow - prev_pow));
            }
            prev_cum = cum;
            prev_pow = pow;
        }
        Ok((acc.value() / r).powf(1.0 / q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn canonical_form_merges_and_sorts() {
        let f = StepFunction::from_atoms([(1.0, 0.5), (-3.0, 0.25), (1.0, 0.25), (2.0, 0.0)]);
        assert_eq!(f.steps(), &[(3.0, 0.25), (1.0, 0.75)]);
        assert_eq!(f.total_mass(), 1.0);
        assert_eq!(f.value_at(0.1), 3.0);
        assert_eq!(f.value_at(0.25), 1.0);
        assert_eq!(f.value_at(2.0), 0.0);
    }

    #[test]
    fn single_atom_lorentz_closed_form() {
        let f = StepFunction::from_atoms([(2.0, 1.0)]);
        for (p, q) in [(2.0, 1.0), (1.5, 3.0), (3.0, 2.0)] {
            assert_relative_eq!(
                f.lorentz_norm(p, q).unwrap(),
                2.0 * (p / q).powf(1.0 / q),
                max_relative = 1e-14
            );
        }
        assert_eq!(f.lorentz_norm(2.0, f64::INFINITY).unwrap(), 2.0);
    }

    #[test]
    fn lorentz_pp_is_lp() {
        let f = StepFunction::from_atoms([(3.0, 0.1), (1.0, 2.0), (0.5, 0.7)]);
        for p in [1.0, 1.5, 2.0, 4.0] {
            assert_relative_eq!(f.lorentz_norm(p, p).unwrap(), f.lp_norm(p), max_relative = 1e-13);
        }
    }

    #[test]
    fn lorentz_rejects_bad_exponents() {
        let f = StepFunction::from_atoms([(1.0, 1.0)]);
        assert!(f.lorentz_norm(0.5, 1.0).is_err());
        assert!(f.lorentz_norm(2.0, 0.5).is_err());
        assert!(f.lorentz_norm(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn zero_function() {
        let f = StepFunction::from_samples([0.0, 0.0], 0.5);
        assert_eq!(f.lorentz_norm(2.0, 1.0).unwrap(), 0.0);
        assert_eq!(f.lp_norm(3.0), 0.0);
        assert_eq!(f.total_mass(), 1.0);
    }
}
