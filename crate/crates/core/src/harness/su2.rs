use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::corpus::{Item, TorusPoly};
use super::report::{ReportRow, Stability, TrendPoint, VerificationReport};
use crate::dirichlet::{characterization_constant, Frontend};
use crate::error::{NetspaceError, Result};
use crate::families::{SegmentMeasure, SubsetFamily};
use crate::group_fourier::{
    default_panels, su2_class_fourier_on, su2_lp_norm, torus_fourier, SU2ClassFunction, TorusFunction,
};
use crate::lattice::{Lattice, LatticeKind, Spin};
use crate::netnorm::{net_norm, CoefficientNet, Engine, NormParams};
use crate::numeric::{conjugate_exponent, CompensatedSum};

/// Relative agreement required between the closed form and the engine.
pub const CONVERSE_CROSS_CHECK: f64 = 1e-9;

/// Tolerance on the forward characterization bound, covering quadrature error.
pub const FORWARD_TOLERANCE: f64 = 1e-6;

/// Exponent of (2ξ+1) obtained by expanding N_{p',p}^p on the SU(2) dual
/// with the top-λ segment family.
pub fn converse_weight(p: f64) -> f64 {
    3.0 * p - 4.0
}

/// Exponent as it appears in the printed statement of the converse bound.
pub fn printed_converse_weight(p: f64) -> f64 {
    2.5 * p - 4.0
}

/// Σ_ξ (2ξ+1)^w ( max_{k ≥ ξ} |Σ_{l ≤ k} (2l+1) c_l| / (2k+1)³ )^p for
/// `coeffs[2l] = c_l`.
pub fn su2_converse_lhs_weighted(coeffs: &[Complex64], p: f64, weight: f64) -> f64 {
    let mut prefix = Complex64::ZERO;
    let ratios: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(t, c)| {
            let d = t as f64 + 1.0;
            prefix += c * d;
            prefix.norm() / d.powi(3)
        })
        .collect();
    let mut inner = vec![0.0; ratios.len()];
    let mut running: f64 = 0.0;
    for t in (0..ratios.len()).rev() {
        running = running.max(ratios[t]);
        inner[t] = running;
    }
    inner
        .iter()
        .enumerate()
        .map(|(t, v)| (t as f64 + 1.0).powf(weight) * v.powf(p))
        .collect::<CompensatedSum>()
        .value()
}

pub fn su2_converse_lhs(coeffs: &[Complex64], p: f64) -> f64 {
    su2_converse_lhs_weighted(coeffs, p, converse_weight(p))
}

fn spin_lattice(l_max: Spin, f: &SU2ClassFunction) -> (Arc<Lattice>, usize) {
    let top = l_max.twice().max(f.l_max().twice());
    let panels = f.panels().max(default_panels(top));
    (Arc::new(Lattice::su2_dual(l_max)), panels)
}

/// Converse direction on SU(2), 1 < p ≤ 2: the closed-form LHS on the dual
/// truncated at `l_max` against ‖f‖_p^p. Each row also carries the same
/// quantity routed through the exact averaging engine (which must agree to
/// `CONVERSE_CROSS_CHECK`) and the LHS with the printed weight.
pub fn verify_su2_converse(
    corpus: &[Item<SU2ClassFunction>],
    corpus_desc: &str,
    p: f64,
    l_max: Spin,
) -> Result<VerificationReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(NetspaceError::domain(format!("SU(2) converse needs 1 < p <= 2, got {p}")));
    }
    let pp = conjugate_exponent(p);
    let rows = corpus
        .par_iter()
        .map(|item| {
            let f = &item.value;
            let (lattice, panels) = spin_lattice(l_max, f);
            let net = su2_class_fourier_on(f, lattice.clone(), panels)?;
            let coeffs: Vec<Complex64> = (0..lattice.len()).map(|i| net.trace(i)).collect();
            let lhs = su2_converse_lhs(&coeffs, p);
            let fam = SubsetFamily::segments_with_measure(lattice, SegmentMeasure::TopLambda);
            let engine = net_norm(&net, &NormParams::new(pp, p, fam)?.with_engine(Engine::Exact))?.value.powf(p);
            if (lhs - engine).abs() > CONVERSE_CROSS_CHECK * lhs.abs().max(engine.abs()) {
                return Err(NetspaceError::InternalConsistency(format!(
                    "{}: closed-form converse sum {lhs} disagrees with the engine value {engine}",
                    item.name
                )));
            }
            let norm = su2_lp_norm(&f.clone().with_panels(panels), p)?;
            Ok(ReportRow::new(&item.name, lhs, norm.value.powf(p))
                .with("lhs_engine", engine)
                .with("lhs_printed_weight", su2_converse_lhs_weighted(&coeffs, p, printed_converse_weight(p)))
                .with("lp_error_estimate", norm.error_estimate))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "su2-converse",
        corpus_desc.to_string(),
        json!({ "p": p, "l_max": l_max.as_f64(), "weight_exponent": converse_weight(p) }),
        Some("exact".into()),
        None,
        rows,
    ))
}

/// Runs the converse campaign at each truncation, with `corpus_for(l_max)`
/// supplying the functions, and attaches the trend of empirical constants.
/// The returned report is the one at the largest l_max.
pub fn su2_converse_trend<C>(
    mut corpus_for: C,
    corpus_desc: &str,
    p: f64,
    l_maxes: &[Spin],
    threshold: f64,
) -> Result<VerificationReport>
where
    C: FnMut(Spin) -> Result<Vec<Item<SU2ClassFunction>>>,
{
    let mut sizes = l_maxes.to_vec();
    sizes.sort();
    sizes.dedup();
    let mut points = Vec::with_capacity(sizes.len());
    let mut report = None;
    for &l in &sizes {
        let r = verify_su2_converse(&corpus_for(l)?, corpus_desc, p, l)?;
        points.push(TrendPoint { size: l.as_f64(), empirical_constant: r.empirical_constant });
        report = Some(r);
    }
    let report = report.ok_or_else(|| NetspaceError::domain("trend needs at least one truncation"))?;
    Ok(report.with_stability(Stability::new(points, threshold)))
}

fn forward_report(
    id: &str,
    corpus_desc: &str,
    p: f64,
    family: &SubsetFamily,
    constant: f64,
    uncertainty: f64,
    engine: Engine,
    rows: Vec<ReportRow>,
) -> VerificationReport {
    let lower = rows.iter().any(|r| r.lower_bound);
    VerificationReport::with_tolerance(
        id,
        corpus_desc.to_string(),
        json!({
            "p": p,
            "family": family.describe(),
            "characterization_constant": constant,
            "characterization_uncertainty": uncertainty,
        }),
        Some(if lower { "heuristic".into() } else { engine.resolve(family).to_string() }),
        Some(1.0),
        FORWARD_TOLERANCE,
        rows,
    )
}

fn forward_row(name: &str, net: &CoefficientNet, family: &SubsetFamily, p: f64, engine: Engine, rhs: f64) -> Result<ReportRow> {
    let resolved = engine.resolve(family);
    let params = NormParams::new(conjugate_exponent(p), f64::INFINITY, family.clone())?.with_engine(resolved);
    let lhs = net_norm(net, &params)?;
    let mut row = ReportRow::new(name, lhs.value, rhs);
    row.lower_bound = lhs.lower_bound;
    Ok(row)
}

/// Forward characterization on SU(2): ‖f̂‖_{N_{p',∞}(M)} ≤ C_{pM} ‖f‖_p over
/// the family's truncation, with C_{pM} computed from Dirichlet kernels.
pub fn verify_char_forward_su2(
    corpus: &[Item<SU2ClassFunction>],
    corpus_desc: &str,
    family: &SubsetFamily,
    p: f64,
    engine: Engine,
) -> Result<VerificationReport> {
    let lattice = family.lattice().clone();
    if lattice.kind() != LatticeKind::Su2Dual {
        return Err(NetspaceError::domain("SU(2) forward check needs an SU(2) dual lattice"));
    }
    let ch = characterization_constant(family, p, Frontend::Su2 { panels: None })?;
    let l_max = Spin::from_twice(lattice.len() as u32 - 1);
    let rows = corpus
        .par_iter()
        .map(|item| {
            let (_, panels) = spin_lattice(l_max, &item.value);
            let net = su2_class_fourier_on(&item.value, lattice.clone(), panels)?;
            let norm = su2_lp_norm(&item.value.clone().with_panels(panels), p)?;
            forward_row(&item.name, &net, family, p, engine, ch.value * norm.value)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(forward_report("char-forward-su2", corpus_desc, p, family, ch.value, ch.uncertainty, engine, rows))
}

/// Forward characterization on T^n, sampling each polynomial on a `grid`^n grid.
pub fn verify_char_forward_torus(
    corpus: &[Item<TorusPoly>],
    corpus_desc: &str,
    family: &SubsetFamily,
    p: f64,
    grid: usize,
    engine: Engine,
) -> Result<VerificationReport> {
    let lattice = family.lattice().clone();
    if lattice.kind() != LatticeKind::IntegerLattice {
        return Err(NetspaceError::domain("torus forward check needs an integer lattice"));
    }
    let ch = characterization_constant(family, p, Frontend::Torus { grid })?;
    let rows = corpus
        .par_iter()
        .map(|item| {
            let f = TorusFunction::from_coefficients(item.value.n, grid, &item.value.coeffs)?;
            let net = torus_fourier(&f, lattice.clone())?;
            forward_row(&item.name, &net, family, p, engine, ch.value * f.lp_norm(p)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(forward_report("char-forward-torus", corpus_desc, p, family, ch.value, ch.uncertainty, engine, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus::{su2_corpus, torus_corpus, CorpusSpec};
    use approx::assert_relative_eq;

    #[test]
    fn constant_function_closed_form() {
        // c = (1, 0, ...): every prefix is 1, inner sup at ξ is (2ξ+1)^{-3}
        let mut coeffs = vec![Complex64::ZERO; 5];
        coeffs[0] = Complex64::ONE;
        for p in [1.25, 1.5, 2.0] {
            let want: f64 = (1..=5).map(|j| (j as f64).powf(-4.0)).sum();
            assert_relative_eq!(su2_converse_lhs(&coeffs, p), want, max_relative = 1e-14);
        }
    }

    #[test]
    fn converse_engine_agrees() {
        let corpus = su2_corpus(&CorpusSpec::Deterministic, Spin::from_twice(6)).unwrap();
        let r = verify_su2_converse(&corpus, "deterministic", 1.5, Spin::from_twice(6)).unwrap();
        for row in &r.rows {
            assert_relative_eq!(row.lhs, row.extra["lhs_engine"], max_relative = 1e-9);
        }
        assert!(r.rows.iter().all(|row| row.ratio.is_finite()));
    }

    #[test]
    fn converse_trend_has_points() {
        let spec = "random:4:seed=3".parse().unwrap();
        let sizes = [Spin::from_twice(8), Spin::from_twice(4)];
        let r = su2_converse_trend(|l| su2_corpus(&spec, l), "r", 2.0, &sizes, 10.0).unwrap();
        assert_eq!(r.stability.as_ref().unwrap().points.len(), 2);
        assert_eq!(r.parameters["l_max"], 4.0);
    }

    #[test]
    fn forward_bound_holds_on_small_truncations() {
        let lat = Arc::new(Lattice::su2_dual(Spin::from_twice(4)));
        let fam = SubsetFamily::all_subsets(lat);
        let corpus = su2_corpus(&"random:6:seed=9".parse().unwrap(), Spin::from_twice(4)).unwrap();
        let r = verify_char_forward_su2(&corpus, "r", &fam, 3.0, Engine::Exact).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.rows);

        let lat = Arc::new(Lattice::integer(1, 3, crate::lattice::LambdaRule::Rank).unwrap());
        let fam = SubsetFamily::progressions(lat).unwrap();
        let corpus = torus_corpus(&"random:6:seed=9".parse().unwrap(), 1, 3).unwrap();
        let r = verify_char_forward_torus(&corpus, "r", &fam, 1.5, 64, Engine::Exact).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.rows);
    }
}
