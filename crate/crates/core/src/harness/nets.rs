use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::corpus::{CorpusSpec, Item};
use super::report::{exponent_json, ReportRow, Stability, TrendPoint, VerificationReport};
use crate::error::{NetspaceError, Result};
use crate::families::SubsetFamily;
use crate::lattice::{ElementSpec, Lattice, LatticeKind, Site};
use crate::netnorm::{averaging_table, norm_from_table, CoefficientNet, Engine, NetNorm};

/// Slack allowed in the K-functional check: 1e−12 · (1 + RHS).
pub const KFUNC_SLACK: f64 = 1e-12;

/// Coefficient nets on `lattice`: seeded Gaussian nets for `random:`, a
/// single JSON net for `file:`, and for `deterministic` unit traces at the
/// first few elements plus the all-ones trace net.
pub fn net_corpus(spec: &CorpusSpec, lattice: &Arc<Lattice>) -> Result<Vec<Item<CoefficientNet>>> {
    match spec {
        CorpusSpec::Deterministic => {
            let n = lattice.len();
            let mut items: Vec<Item<CoefficientNet>> = (0..n.min(3))
                .map(|i| {
                    let mut t = vec![Complex64::ZERO; n];
                    t[i] = Complex64::ONE;
                    Ok(Item {
                        name: format!("delta-{}", lattice.elements()[i].label),
                        value: CoefficientNet::from_traces(lattice.clone(), &t)?,
                    })
                })
                .collect::<Result<_>>()?;
            items.push(Item {
                name: "ones".into(),
                value: CoefficientNet::from_traces(lattice.clone(), &vec![Complex64::ONE; n])?,
            });
            let alternating: Vec<Complex64> =
                (0..n).map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
            items.push(Item { name: "alternating".into(), value: CoefficientNet::from_traces(lattice.clone(), &alternating)? });
            Ok(items)
        }
        CorpusSpec::Random { size, seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..*size)
                .map(|i| {
                    let decay = spec.decay_for(i);
                    Item {
                        name: format!("random-{i}-decay{decay}"),
                        value: CoefficientNet::random(lattice.clone(), &mut rng, decay, false),
                    }
                })
                .collect())
        }
        CorpusSpec::File(path) => {
            let net = CoefficientNet::from_json_file(lattice.clone(), path)?;
            Ok(vec![Item { name: path.display().to_string(), value: net }])
        }
    }
}

/// ‖F‖_{N_{p,q1}} and ‖F‖_{N_{p,q2}} from one averaging table.
pub(crate) fn two_norms(
    net: &CoefficientNet,
    family: &SubsetFamily,
    engine: Engine,
    p: f64,
    q1: f64,
    q2: f64,
) -> Result<(NetNorm, NetNorm)> {
    let table = averaging_table(net, &net.lattice().distinct_levels(), family, engine)?;
    let a = norm_from_table(net, table.clone(), p, q1)?;
    let b = norm_from_table(net, table, p, q2)?;
    Ok((a, b))
}

/// Ratios ‖F‖_{N_{p,q2}}/‖F‖_{N_{p,q1}} for q1 ≤ q2 over a net corpus.
pub fn verify_embedding(
    corpus: &[Item<CoefficientNet>],
    corpus_desc: &str,
    family: &SubsetFamily,
    p: f64,
    q1: f64,
    q2: f64,
    engine: Engine,
) -> Result<VerificationReport> {
    if !(q1 <= q2) {
        return Err(NetspaceError::domain(format!("embedding needs q1 <= q2, got q1={q1}, q2={q2}")));
    }
    let resolved = engine.resolve(family);
    let rows = corpus
        .par_iter()
        .map(|item| {
            let (small, large) = two_norms(&item.value, family, resolved, p, q1, q2)?;
            let mut row = ReportRow::new(&item.name, large.value, small.value);
            row.lower_bound = large.lower_bound;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "embedding",
        corpus_desc.to_string(),
        json!({ "p": p, "q1": exponent_json(q1), "q2": exponent_json(q2), "family": family.describe(), "lattice_size": family.lattice().len() }),
        Some(resolved.to_string()),
        None,
        rows,
    ))
}

/// Embedding ratios across several truncations. `setup(size)` builds the
/// family and corpus for each truncation; the report at the last size is
/// returned with the trend attached.
pub fn embedding_trend<S>(
    sizes: &[f64],
    corpus_desc: &str,
    p: f64,
    q1: f64,
    q2: f64,
    engine: Engine,
    threshold: f64,
    mut setup: S,
) -> Result<VerificationReport>
where
    S: FnMut(f64) -> Result<(SubsetFamily, Vec<Item<CoefficientNet>>)>,
{
    let mut points = Vec::with_capacity(sizes.len());
    let mut last = None;
    for &size in sizes {
        let (family, corpus) = setup(size)?;
        let r = verify_embedding(&corpus, corpus_desc, &family, p, q1, q2, engine)?;
        points.push(TrendPoint { size, empirical_constant: r.empirical_constant });
        last = Some(r);
    }
    let report = last.ok_or_else(|| NetspaceError::domain("trend needs at least one truncation"))?;
    Ok(report.with_stability(Stability::new(points, threshold)))
}

/// A generic lattice of `n` elements with integer λ in 1..=20 (ties allowed)
/// and δ, κ in 1..=3.
pub fn random_generic_lattice<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Lattice> {
    let specs = (0..n)
        .map(|i| ElementSpec {
            label: format!("g{i}"),
            lambda: f64::from(rng.random_range(1..=20u32)),
            delta: rng.random_range(1..=3),
            kappa: rng.random_range(1..=3),
            site: Site::Generic,
        })
        .collect();
    Lattice::new(LatticeKind::Generic, 1, specs)
}

struct KfuncTrial {
    f: CoefficientNet,
    f1: CoefficientNet,
    f2: CoefficientNet,
    t: f64,
}

fn kfunc_trial(rng: &mut ChaCha8Rng, index: usize, lattice: Option<&Arc<Lattice>>, size: usize) -> Result<KfuncTrial> {
    let lattice = match lattice {
        Some(l) => l.clone(),
        None => Arc::new(random_generic_lattice(rng, size)?),
    };
    let decay = super::corpus::DECAYS[index % super::corpus::DECAYS.len()];
    let f = CoefficientNet::random(lattice.clone(), rng, decay, false);
    let f1 = match index % 10 {
        0 => f.clone(),
        1 => CoefficientNet::zeros(lattice),
        _ => {
            let alpha = rng.random_range(-1.0..2.0);
            let noise = CoefficientNet::random(lattice, rng, 0.0, false).scaled(Complex64::new(rng.random_range(0.0..2.0), 0.0));
            f.scaled(Complex64::new(alpha, 0.0)).try_add(&noise)?
        }
    };
    let f2 = f.try_sub(&f1)?;
    let t = 10f64.powf(rng.random_range(-3.0..3.0));
    Ok(KfuncTrial { f, f1, f2, t })
}

/// sup_{λ ≤ v(t)} λ^{1/p1} F̄[λ] ≤ ‖F1‖_{N_{p1,∞}} + t‖F2‖_{N_{p2,∞}} with
/// v(t) = t^{1/(1/p1 − 1/p2)}, over random F, splits F = F1 + F2 and t. Trials
/// are drawn sequentially from `seed`; without a `lattice` each trial gets a
/// fresh random generic lattice of `size` elements.
pub fn verify_kfunc_upper(
    lattice: Option<Arc<Lattice>>,
    size: usize,
    p1: f64,
    p2: f64,
    trials: usize,
    seed: u64,
    family_kind: fn(Arc<Lattice>) -> SubsetFamily,
) -> Result<VerificationReport> {
    if !(p1 >= 1.0 && p1 < p2) || p2.is_infinite() {
        return Err(NetspaceError::domain(format!("K-functional check needs 1 <= p1 < p2 < inf, got p1={p1}, p2={p2}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let setups = (0..trials).map(|i| kfunc_trial(&mut rng, i, lattice.as_ref(), size)).collect::<Result<Vec<_>>>()?;
    let exponent = 1.0 / (1.0 / p1 - 1.0 / p2);
    let rows = setups
        .par_iter()
        .enumerate()
        .map(|(i, tr)| {
            let lat = tr.f.lattice().clone();
            let fam = family_kind(lat.clone());
            let levels = lat.distinct_levels();
            let table = averaging_table(&tr.f, &levels, &fam, Engine::Exact)?;
            let v = tr.t.powf(exponent);
            let mut lhs: f64 = 0.0;
            for e in lat.elements().iter().filter(|e| e.lambda <= v) {
                let fb = table.value_at(e.lambda).expect("table covers lattice levels");
                lhs = lhs.max(e.lambda.powf(1.0 / p1) * fb);
            }
            let n1 = norm_from_table(&tr.f1, averaging_table(&tr.f1, &levels, &fam, Engine::Exact)?, p1, f64::INFINITY)?;
            let n2 = norm_from_table(&tr.f2, averaging_table(&tr.f2, &levels, &fam, Engine::Exact)?, p2, f64::INFINITY)?;
            let rhs = n1.value + tr.t * n2.value;
            let mut row = ReportRow::new(format!("trial-{i}"), lhs, rhs).with("t", tr.t).with("v", v);
            row.violation = lhs > rhs + KFUNC_SLACK * (1.0 + rhs);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "kfunc-upper",
        format!("random:{trials}:seed={seed}"),
        json!({ "p1": p1, "p2": p2, "trials": trials, "lattice_size": size, "slack": KFUNC_SLACK }),
        Some("exact".into()),
        None,
        rows,
    ))
}
