//! Dirichlet kernels D_Q = Σ_{π∈Q} d_π Tr π(x), their L^{p'} norms, the
//! characterization constant C_{pM}, and the torus rearrangement bound.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{NetspaceError, Result};
use crate::families::{Member, SubsetFamily};
use crate::group_fourier::{characters, default_panels, HaarRule, TorusFunction};
use crate::lattice::{Lattice, LatticeKind, Site, Spin};
use crate::numeric::{conjugate_exponent, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "frontend")]
pub enum Frontend {
    /// Uniform grid of size `grid` per axis.
    Torus { grid: usize },
    /// Conjugacy-class quadrature; `None` picks the default panel count.
    Su2 { panels: Option<usize> },
}

impl Frontend {
    pub fn for_lattice(lattice: &Lattice, grid: usize) -> Result<Self> {
        match lattice.kind() {
            LatticeKind::IntegerLattice => Ok(Frontend::Torus { grid }),
            LatticeKind::Su2Dual => Ok(Frontend::Su2 { panels: None }),
            LatticeKind::Generic => {
                Err(NetspaceError::domain("Dirichlet kernels need a torus or SU(2) lattice"))
            }
        }
    }
}

/// A norm value with its numerical uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub uncertainty: f64,
}

/// Evaluates ‖D_Q‖_{L^{p'}} for many Q on one lattice, reusing node tables.
pub struct KernelNorms {
    lattice: Arc<Lattice>,
    inner: KernelInner,
}

enum KernelInner {
    Torus { grid: usize, points: Vec<Vec<i64>> },
    Su2 { spins: Vec<Spin>, fine: NodeTable, coarse: NodeTable },
}

/// Characters (2l+1)χ_l at the nodes of a Haar rule, one row per node.
struct NodeTable {
    weights: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl NodeTable {
    fn new(rule: &HaarRule, spins: &[Spin], with_endpoints: bool) -> Self {
        let top = spins.iter().map(|s| s.twice()).max().unwrap_or(0);
        let row = |theta: f64| {
            let chi = characters(top, theta);
            spins.iter().map(|s| f64::from(s.dim()) * chi[s.twice() as usize]).collect()
        };
        let mut weights = rule.weights().to_vec();
        let mut values: Vec<Vec<f64>> = rule.nodes().iter().map(|&t| row(t)).collect();
        if with_endpoints {
            // zero-weight rows so the sup norm sees θ = 0 and θ = π
            for t in [0.0, std::f64::consts::PI] {
                weights.push(0.0);
                values.push(row(t));
            }
        }
        NodeTable { weights, values }
    }

    fn norm(&self, ids: &[usize], p: f64) -> f64 {
        let kernel = self.values.iter().map(|row| ids.iter().map(|&i| row[i]).sum::<f64>().abs());
        if p.is_infinite() {
            kernel.fold(0.0, f64::max)
        } else {
            let s: CompensatedSum = kernel.zip(&self.weights).map(|(v, w)| w * v.powf(p)).collect();
            s.value().powf(1.0 / p)
        }
    }
}

impl KernelNorms {
    pub fn new(lattice: Arc<Lattice>, frontend: Frontend) -> Result<Self> {
        let inner = match frontend {
            Frontend::Torus { grid } => {
                if lattice.kind() != LatticeKind::IntegerLattice {
                    return Err(NetspaceError::domain("torus kernels need an integer lattice"));
                }
                let points = lattice
                    .elements()
                    .iter()
                    .map(|e| match &e.site {
                        Site::Integer(m) => Ok(m.clone()),
                        _ => Err(NetspaceError::domain(format!("{:?} is not a frequency", e.label))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let radius =
                    points.iter().flat_map(|m| m.iter().map(|x| x.unsigned_abs() as usize)).max().unwrap_or(0);
                if 2 * radius + 1 > grid {
                    return Err(NetspaceError::Aliasing { radius, grid });
                }
                KernelInner::Torus { grid, points }
            }
            Frontend::Su2 { panels } => {
                if lattice.kind() != LatticeKind::Su2Dual {
                    return Err(NetspaceError::domain("SU(2) kernels need an SU(2) dual lattice"));
                }
                let spins = lattice
                    .elements()
                    .iter()
                    .map(|e| match e.site {
                        Site::Spin(s) => Ok(s),
                        _ => Err(NetspaceError::domain(format!("{:?} is not a spin", e.label))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let top = spins.iter().map(|s| s.twice()).max().unwrap_or(0);
                let panels = panels.unwrap_or_else(|| default_panels(top));
                KernelInner::Su2 {
                    fine: NodeTable::new(&HaarRule::new(2 * panels), &spins, true),
                    coarse: NodeTable::new(&HaarRule::new(panels), &spins, true),
                    spins,
                }
            }
        };
        Ok(KernelNorms { lattice, inner })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// D_Q sampled on the torus grid.
    pub fn torus_kernel(&self, ids: &[usize], grid: usize) -> Result<TorusFunction> {
        let KernelInner::Torus { points, .. } = &self.inner else {
            return Err(NetspaceError::domain("not a torus kernel"));
        };
        let n = self.lattice.dimension();
        let coeffs: Vec<(Vec<i64>, Complex64)> =
            ids.iter().map(|&i| (points[i].clone(), Complex64::ONE)).collect();
        TorusFunction::from_coefficients(n, grid, &coeffs)
    }

    /// ‖D_Q‖_{L^{p'}}. Sup norms take the finer of two resolutions plus one
    /// Richardson step (error ∝ h²), never reporting less than the sampled max.
    pub fn norm(&self, ids: &[usize], p_prime: f64) -> Result<NormValue> {
        if ids.is_empty() {
            return Err(NetspaceError::domain("Dirichlet kernel of an empty set"));
        }
        if !(p_prime >= 1.0) {
            return Err(NetspaceError::domain(format!("kernel norm needs p' >= 1, got {p_prime}")));
        }
        if let Some(&bad) = ids.iter().find(|&&i| i >= self.lattice.len()) {
            return Err(NetspaceError::InvalidId { id: bad, len: self.lattice.len() });
        }
        match &self.inner {
            KernelInner::Torus { grid, .. } => {
                let fine = self.torus_kernel(ids, *grid)?.lp_norm(p_prime)?;
                if p_prime.is_infinite() {
                    let coarse = self.torus_kernel(ids, *grid / 2)
                        .and_then(|f| f.lp_norm(p_prime))
                        .unwrap_or(fine);
                    Ok(richardson(fine, coarse))
                } else {
                    Ok(NormValue { value: fine, uncertainty: 0.0 })
                }
            }
            KernelInner::Su2 { fine, coarse, .. } => {
                let f = fine.norm(ids, p_prime);
                let c = coarse.norm(ids, p_prime);
                if p_prime.is_infinite() {
                    Ok(richardson(f, c))
                } else {
                    Ok(NormValue { value: f, uncertainty: (f - c).abs() })
                }
            }
        }
    }

    pub fn spins(&self) -> Option<&[Spin]> {
        match &self.inner {
            KernelInner::Su2 { spins, .. } => Some(spins),
            KernelInner::Torus { .. } => None,
        }
    }
}

fn richardson(fine: f64, coarse: f64) -> NormValue {
    let extrapolated = fine + (fine - coarse) / 3.0;
    NormValue { value: extrapolated.max(fine), uncertainty: (fine - coarse).abs() / 3.0 }
}

/// ‖D_Q‖_{L^{p'}} for a single Q.
pub fn dirichlet_norm(
    lattice: Arc<Lattice>,
    ids: &[usize],
    p_prime: f64,
    frontend: Frontend,
) -> Result<NormValue> {
    KernelNorms::new(lattice, frontend)?.norm(ids, p_prime)
}

/// One row of the characterization table: element π with the Q attaining
/// sup_{ν(Q) ≥ λ_π} ‖D_Q‖/ν(Q).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizationRow {
    pub pi_label: String,
    pub q_encoding: String,
    pub nu_q: f64,
    pub dq_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Characterization {
    pub p: f64,
    pub p_prime: f64,
    pub value: f64,
    /// (π label, Q encoding) attaining the sup, first on ties.
    pub witness: Option<(String, String)>,
    /// Largest quadrature uncertainty among the witnesses.
    pub uncertainty: f64,
    pub rows: Vec<CharacterizationRow>,
}

impl Characterization {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["pi_label", "Q_encoding", "nu_Q", "DQ_norm", "ratio"])?;
        for r in &self.rows {
            w.write_record([
                r.pi_label.clone(),
                r.q_encoding.clone(),
                r.nu_q.to_string(),
                r.dq_norm.to_string(),
                r.ratio.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Labels of `ids` joined by ';'.
pub fn encode_members(lattice: &Lattice, ids: &[usize]) -> String {
    ids.iter().map(|&i| lattice.elements()[i].label.as_str()).collect::<Vec<_>>().join(";")
}

/// C_{pM} = sup_π λ_π^{1/p'} sup_{Q∈M, ν(Q) ≥ λ_π} ‖D_Q‖_{L^{p'}}/ν(Q), over the truncation.
pub fn characterization_constant(
    family: &SubsetFamily,
    p: f64,
    frontend: Frontend,
) -> Result<Characterization> {
    if !(p > 1.0) {
        return Err(NetspaceError::domain(format!("characterization needs 1 < p <= inf, got {p}")));
    }
    let p_prime = conjugate_exponent(p);
    let lattice = family.lattice().clone();
    let kernels = KernelNorms::new(lattice.clone(), frontend)?;
    let levels = lattice.distinct_levels();
    let Some(&lowest) = levels.first() else {
        return Ok(Characterization { p, p_prime, value: 0.0, witness: None, uncertainty: 0.0, rows: vec![] });
    };
    let members: Vec<Member> = family.enumerate_with_capacity(lowest)?.collect();
    let norms: Vec<NormValue> =
        members.par_iter().map(|m| kernels.norm(&m.ids, p_prime)).collect::<Result<_>>()?;

    // best[level] = (ratio, member index); a member counts for every level ≤ ν(Q)
    let mut best: Vec<Option<(f64, usize)>> = vec![None; levels.len()];
    for (i, (m, nv)) in members.iter().zip(&norms).enumerate() {
        let bucket = levels.partition_point(|&l| l <= m.nu) - 1;
        let r = nv.value / m.nu;
        if best[bucket].is_none_or(|(b, _)| r > b) {
            best[bucket] = Some((r, i));
        }
    }
    for i in (0..levels.len().saturating_sub(1)).rev() {
        if let Some((u, ui)) = best[i + 1] {
            let take = match best[i] {
                None => true,
                Some((b, bi)) => u > b || (u == b && ui < bi),
            };
            if take {
                best[i] = Some((u, ui));
            }
        }
    }

    let mut rows = Vec::with_capacity(lattice.len());
    let mut value = 0.0;
    let mut witness = None;
    let mut uncertainty: f64 = 0.0;
    for e in lattice.elements() {
        let li = levels.partition_point(|&l| l < e.lambda);
        let Some((g, mi)) = best[li] else {
            rows.push(CharacterizationRow {
                pi_label: e.label.clone(),
                q_encoding: String::new(),
                nu_q: 0.0,
                dq_norm: 0.0,
                ratio: 0.0,
            });
            continue;
        };
        let m = &members[mi];
        let ratio = e.lambda.powf(1.0 / p_prime) * g;
        let q_encoding = encode_members(&lattice, &m.ids);
        if witness.is_none() || ratio > value {
            value = ratio;
            witness = Some((e.label.clone(), q_encoding.clone()));
        }
        uncertainty = uncertainty.max(e.lambda.powf(1.0 / p_prime) * norms[mi].uncertainty / m.nu);
        rows.push(CharacterizationRow {
            pi_label: e.label.clone(),
            q_encoding,
            nu_q: m.nu,
            dq_norm: norms[mi].value,
            ratio,
        });
    }
    Ok(Characterization { p, p_prime, value, witness, uncertainty, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RearrangementBound {
    pub value: f64,
    /// Right end of the step of D*_Q where the sup is approached.
    pub t_at: f64,
}

/// sup_t D*_Q(t) t^{1/p'} / |Q|^{1/p} over t ∈ (1/M, 1], with D*_Q the grid
/// rearrangement of the kernel of a progression Q ⊂ Z^n.
pub fn rearrangement_bound_check(q: &[Vec<i64>], p: f64, grid: usize) -> Result<RearrangementBound> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(NetspaceError::domain(format!("rearrangement bound needs 1 < p < inf, got {p}")));
    }
    let Some(first) = q.first() else {
        return Err(NetspaceError::domain("Dirichlet kernel of an empty set"));
    };
    let n = first.len();
    if n == 0 || q.iter().any(|m| m.len() != n) {
        return Err(NetspaceError::Shape("progression points must share one dimension".into()));
    }
    if q.len() > 1 {
        let step: Vec<i64> = q[1].iter().zip(&q[0]).map(|(a, b)| a - b).collect();
        let is_ap = q.windows(2).all(|w| w[1].iter().zip(&w[0]).zip(&step).all(|((a, b), s)| a - b == *s));
        if !is_ap || step.iter().all(|&s| s == 0) {
            return Err(NetspaceError::domain("Q is not an arithmetic progression"));
        }
    }
    let coeffs: Vec<(Vec<i64>, Complex64)> = q.iter().map(|m| (m.clone(), Complex64::ONE)).collect();
    let f = TorusFunction::from_coefficients(n as u32, grid, &coeffs)?;
    let star = f.rearrangement();
    let a = 1.0 - 1.0 / p;
    let mut cum = CompensatedSum::new();
    let mut best = RearrangementBound { value: 0.0, t_at: 0.0 };
    for &(v, m) in star.steps() {
        cum.add(m);
        let t = cum.value().min(1.0);
        let val = v * t.powf(a);
        if val > best.value {
            best = RearrangementBound { value: val, t_at: t };
        }
    }
    best.value /= (q.len() as f64).powf(1.0 / p);
    Ok(best)
}
