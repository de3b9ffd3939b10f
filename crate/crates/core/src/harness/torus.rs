use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::corpus::{Item, TorusPoly};
use super::report::{exponent_json, ReportRow, VerificationReport};
use crate::error::{NetspaceError, Result};
use crate::families::SubsetFamily;
use crate::group_fourier::{torus_fourier, TorusFunction};
use crate::lattice::{LambdaRule, Lattice, Site};
use crate::netnorm::{lorentz_discrete_norm, net_norm, CoefficientNet, Engine, NormParams};
use crate::numeric::{conjugate_exponent, CompensatedSum};

fn analyze(f: &TorusPoly, grid: usize, radius: usize) -> Result<(TorusFunction, CoefficientNet)> {
    let samples = TorusFunction::from_coefficients(f.n, grid, &f.coeffs)?;
    let lattice = Arc::new(Lattice::integer(f.n, radius as u32, LambdaRule::Rank)?);
    let net = torus_fourier(&samples, lattice)?;
    Ok((samples, net))
}

/// Σ_m (1+|m|)^{p−2} |f̂(m)|^p against ‖f‖_p^p. For p ≤ 2 the ratio is
/// coefficients over function; for p ≥ 2 (the dual form) function over
/// coefficients. Only p = 2 has a declared bound (Plancherel, equality).
pub fn verify_hl_torus(corpus: &[Item<TorusPoly>], corpus_desc: &str, p: f64, grid: usize) -> Result<VerificationReport> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(NetspaceError::domain(format!("Hardy-Littlewood campaign needs 1 < p < inf, got {p}")));
    }
    let rows = corpus
        .par_iter()
        .map(|item| {
            let (f, net) = analyze(&item.value, grid, item.value.bandwidth())?;
            let coeff_side: CompensatedSum = net
                .lattice()
                .elements()
                .iter()
                .map(|e| {
                    let Site::Integer(m) = &e.site else { unreachable!("integer lattice") };
                    let norm = m.iter().map(|x| (x * x) as f64).sum::<f64>().sqrt();
                    (1.0 + norm).powf(p - 2.0) * net.trace(e.id).norm().powf(p)
                })
                .collect();
            let coeff_side = coeff_side.value();
            let fn_side = f.lp_norm(p)?.powf(p);
            Ok(if p <= 2.0 {
                ReportRow::new(&item.name, coeff_side, fn_side)
            } else {
                ReportRow::new(&item.name, fn_side, coeff_side)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let id = if p <= 2.0 { "hl-torus" } else { "hl-torus-dual" };
    Ok(VerificationReport::new(
        id,
        corpus_desc.to_string(),
        json!({ "p": p, "grid": grid }),
        None,
        (p == 2.0).then_some(1.0),
        rows,
    ))
}

/// ‖f̂‖_{N_{p',q}(Z^n, progressions)} against ‖f‖_{L^{p,q}(T^n)}. The net norm
/// runs on the rank-ordered lattice of radius `radius` (at least the
/// bandwidth), so the progression sup only sees progressions inside it and the
/// LHS is a lower bound for the untruncated one.
pub fn verify_ned_torus(
    corpus: &[Item<TorusPoly>],
    corpus_desc: &str,
    p: f64,
    q: f64,
    grid: usize,
    radius: usize,
) -> Result<VerificationReport> {
    if !(p > 1.0) || p.is_infinite() || !(q >= 1.0) {
        return Err(NetspaceError::domain(format!("NED campaign needs 1 < p < inf and q >= 1, got p={p}, q={q}")));
    }
    let pp = conjugate_exponent(p);
    let rows = corpus
        .par_iter()
        .map(|item| {
            if radius < item.value.bandwidth() {
                return Err(NetspaceError::domain(format!(
                    "truncation radius {radius} is below the bandwidth {} of {}",
                    item.value.bandwidth(),
                    item.name
                )));
            }
            let (f, net) = analyze(&item.value, grid, radius)?;
            let fam = SubsetFamily::progressions(net.lattice().clone())?;
            let lhs = net_norm(&net, &NormParams::new(pp, q, fam)?.with_engine(Engine::Exact))?;
            let rhs = f.lorentz_norm(p, q)?;
            Ok(ReportRow::new(&item.name, lhs.value, rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "ned-torus",
        corpus_desc.to_string(),
        json!({ "p": p, "q": exponent_json(q), "grid": grid, "radius": radius, "family": "arithmetic-progressions" }),
        Some("exact".into()),
        None,
        rows,
    ))
}

/// The comparison chain for 1 < p < 2:
/// N_{p',p}(progressions) ≤ N_{p',p}(all subsets) ≈ ℓ^{p',p} ≲ ‖f‖_p.
/// The first step holds exactly (family monotonicity) and is the declared
/// check; the other two ratios are reported per function.
pub fn verify_comparison_torus(
    corpus: &[Item<TorusPoly>],
    corpus_desc: &str,
    p: f64,
    grid: usize,
) -> Result<VerificationReport> {
    if !(p > 1.0 && p < 2.0) {
        return Err(NetspaceError::domain(format!("comparison chain needs 1 < p < 2, got {p}")));
    }
    let pp = conjugate_exponent(p);
    let rows = corpus
        .par_iter()
        .map(|item| {
            let (f, net) = analyze(&item.value, grid, item.value.bandwidth())?;
            let lattice = net.lattice().clone();
            let n0 = net_norm(
                &net,
                &NormParams::new(pp, p, SubsetFamily::progressions(lattice.clone())?)?.with_engine(Engine::Exact),
            )?
            .value;
            let n1 = net_norm(
                &net,
                &NormParams::new(pp, p, SubsetFamily::all_subsets(lattice))?.with_engine(Engine::Exact),
            )?
            .value;
            let lorentz = lorentz_discrete_norm(&net, pp, p)?;
            let lp = f.lp_norm(p)?;
            let mut row = ReportRow::new(&item.name, n0, lp)
                .with("n_all_subsets", n1)
                .with("lorentz", lorentz)
                .with("progressions_over_all", crate::numeric::safe_ratio(n0, n1))
                .with("all_over_lorentz", crate::numeric::safe_ratio(n1, lorentz))
                .with("lorentz_over_lp", crate::numeric::safe_ratio(lorentz, lp));
            row.violation = n0 > n1 * (1.0 + 1e-12);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "comparison-torus",
        corpus_desc.to_string(),
        json!({ "p": p, "grid": grid }),
        Some("exact".into()),
        None,
        rows,
    ))
}
