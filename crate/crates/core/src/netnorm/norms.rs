use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::averaging::{averaging_table, AveragingTable, Engine};
use super::net::{compensated, CoefficientNet};
use crate::error::{NetspaceError, Result};
use crate::families::SubsetFamily;
use crate::numeric::conjugate_exponent;
use crate::rearrangement::StepFunction;

#[derive(Debug, Clone)]
pub struct NormParams {
    pub p: f64,
    pub q: f64,
    pub family: SubsetFamily,
    pub engine: Engine,
}

impl NormParams {
    pub fn new(p: f64, q: f64, family: SubsetFamily) -> Result<Self> {
        if !(p >= 1.0) || p.is_infinite() {
            return Err(NetspaceError::domain(format!("net norm needs 1 <= p < inf, got {p}")));
        }
        if !(q >= 1.0) {
            return Err(NetspaceError::domain(format!("net norm needs q >= 1 or q = inf, got {q}")));
        }
        Ok(NormParams { p, q, family, engine: Engine::Auto })
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetNorm {
    pub value: f64,
    pub p: f64,
    pub q: f64,
    /// True when the averaging values are heuristic lower bounds, in which
    /// case `value` is a lower bound too.
    pub lower_bound: bool,
    pub table: AveragingTable,
    /// For q = ∞, the element where λ^{1/p} F̄[λ] is largest (first on ties).
    pub sup_at: Option<usize>,
}

/// ‖F‖_{N_{p,q}(Γ, M)}.
pub fn net_norm(net: &CoefficientNet, params: &NormParams) -> Result<NetNorm> {
    let table = averaging_table(net, &net.lattice().distinct_levels(), &params.family, params.engine)?;
    norm_from_table(net, table, params.p, params.q)
}

/// N_{p,q} norm from a precomputed averaging table covering every level of
/// the net's lattice, so one table can serve several (p, q).
pub fn norm_from_table(net: &CoefficientNet, table: AveragingTable, p: f64, q: f64) -> Result<NetNorm> {
    if !(p >= 1.0) || p.is_infinite() || !(q >= 1.0) {
        return Err(NetspaceError::domain(format!("net norm needs 1 <= p < inf and q >= 1, got p={p}, q={q}")));
    }
    let lattice = net.lattice();
    let mut fbar = Vec::with_capacity(lattice.len());
    for e in lattice.elements() {
        fbar.push(table.value_at(e.lambda).ok_or_else(|| {
            NetspaceError::Shape(format!("averaging table lacks level {}", e.lambda))
        })?);
    }
    let (value, sup_at) = if q.is_infinite() {
        let mut best = 0.0;
        let mut at = None;
        for (e, fb) in lattice.elements().iter().zip(&fbar) {
            let v = e.lambda.powf(1.0 / p) * fb;
            if at.is_none() || v > best {
                best = v;
                at = Some(e.id);
            }
        }
        (best, at)
    } else {
        let sum = compensated(lattice.elements().iter().zip(&fbar).map(|(e, fb)| {
            let t = e.lambda.powf(1.0 / p) * fb;
            t.powf(q) * e.mass() as f64 / e.lambda
        }));
        (sum.powf(1.0 / q), None)
    };
    Ok(NetNorm { value, p, q, lower_bound: table.lower_bound, table, sup_at })
}

/// Weight δ κ^{1 − p/2} of ‖F(π)‖_HS^p in the ℓ^p sum.
fn ellp_weight(delta: u32, kappa: u32, p: f64) -> f64 {
    f64::from(delta) * f64::from(kappa).powf(1.0 - p / 2.0)
}

/// ‖F‖_{ℓ^p(Γ, ν, Σ)} = (Σ δ κ^{p(1/p − 1/2)} ‖F(π)‖_HS^p)^{1/p}.
pub fn ellp_norm(net: &CoefficientNet, p: f64) -> Result<f64> {
    if !(p >= 1.0) || p.is_infinite() {
        return Err(NetspaceError::domain(format!("ell^p norm needs 1 <= p < inf, got {p}")));
    }
    let sum = compensated(
        net.lattice()
            .elements()
            .iter()
            .map(|e| ellp_weight(e.delta, e.kappa, p) * net.hs_norm(e.id).powf(p)),
    );
    Ok(sum.powf(1.0 / p))
}

/// ⟨h, g⟩ = Σ δ_π Tr(h(π) g(π)*).
pub fn duality_pairing(h: &CoefficientNet, g: &CoefficientNet) -> Result<Complex64> {
    h.check_same_lattice(g)?;
    let mut re = Vec::with_capacity(h.lattice().len());
    let mut im = Vec::with_capacity(h.lattice().len());
    for e in h.lattice().elements() {
        let tr: Complex64 =
            h.matrix(e.id).iter().zip(g.matrix(e.id)).map(|(a, b)| a * b.conj()).sum();
        let z = tr * f64::from(e.delta);
        re.push(z.re);
        im.push(z.im);
    }
    Ok(Complex64::new(compensated(re), compensated(im)))
}

/// |⟨h, g⟩| / ‖g‖_{ℓ^{p'}}, or 0 for g = 0.
pub fn duality_quotient(h: &CoefficientNet, g: &CoefficientNet, p: f64) -> Result<f64> {
    let denom = ellp_norm(g, conjugate_exponent(p))?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(duality_pairing(h, g)?.norm() / denom)
}

/// g*(π) = κ^{(p'−p)/(2p')} ‖h(π)‖_HS^{p−2} h(π), the equality case of Hölder's
/// inequality for the pairing against the κ-weighted ℓ^{p'} norm.
pub fn duality_extremizer(h: &CoefficientNet, p: f64) -> Result<CoefficientNet> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(NetspaceError::domain(format!("duality needs 1 < p < inf, got {p}")));
    }
    let pp = conjugate_exponent(p);
    let matrices: Vec<Array2<Complex64>> = h
        .lattice()
        .elements()
        .iter()
        .map(|e| {
            let n = h.hs_norm(e.id);
            if n == 0.0 {
                return Array2::zeros((e.kappa as usize, e.delta as usize));
            }
            let c = f64::from(e.kappa).powf((pp - p) / (2.0 * pp)) * n.powf(p - 2.0);
            h.matrix(e.id).mapv(|z| z * c)
        })
        .collect();
    CoefficientNet::new(h.lattice().clone(), matrices)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityGap {
    pub p: f64,
    pub norm: f64,
    pub extremizer_quotient: f64,
    /// |quotient(g*) − ‖h‖_{ℓ^p}|.
    pub gap: f64,
    pub random_trials: usize,
    pub max_random_quotient: f64,
    /// Random quotients exceeding ‖h‖(1 + 1e−12).
    pub random_violations: usize,
}

/// Compares the extremizer's quotient with ‖h‖_{ℓ^p} and probes the upper
/// bound with `trials` Gaussian test nets.
pub fn ellp_duality_gap<R: Rng + ?Sized>(
    h: &CoefficientNet,
    p: f64,
    trials: usize,
    rng: &mut R,
) -> Result<DualityGap> {
    let g_star = duality_extremizer(h, p)?;
    let norm = ellp_norm(h, p)?;
    let (extremizer_quotient, gap) = if h.is_zero() {
        (0.0, 0.0)
    } else {
        let qv = duality_quotient(h, &g_star, p)?;
        (qv, (qv - norm).abs())
    };
    let mut max_random_quotient: f64 = 0.0;
    let mut random_violations = 0;
    for _ in 0..trials {
        let g = random_like(h, rng);
        let qv = duality_quotient(h, &g, p)?;
        max_random_quotient = max_random_quotient.max(qv);
        if qv > norm * (1.0 + 1e-12) {
            random_violations += 1;
        }
    }
    Ok(DualityGap {
        p,
        norm,
        extremizer_quotient,
        gap,
        random_trials: trials,
        max_random_quotient,
        random_violations,
    })
}

fn random_like<R: Rng + ?Sized>(h: &CoefficientNet, rng: &mut R) -> CoefficientNet {
    let matrices = h
        .matrices()
        .iter()
        .map(|m| {
            Array2::from_shape_simple_fn(m.dim(), || {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
        })
        .collect();
    CoefficientNet::new(h.lattice().clone(), matrices).expect("shapes copied from h")
}

/// Decreasing rearrangement of a_π = κ_π^{−1/2} ‖F(π)‖_HS over atoms of mass δ_π κ_π.
pub fn rearrangement(net: &CoefficientNet) -> StepFunction {
    StepFunction::from_atoms(net.lattice().elements().iter().map(|e| {
        (net.hs_norm(e.id) / f64::from(e.kappa).sqrt(), e.mass() as f64)
    }))
}

/// ‖F‖_{ℓ^{p,q}(Γ)}: the Lorentz norm of the atom sequence on (Γ, ν_Γ).
pub fn lorentz_discrete_norm(net: &CoefficientNet, p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(NetspaceError::domain(format!("discrete Lorentz norm needs 1 < p < inf, got {p}")));
    }
    rearrangement(net).lorentz_norm(p, q)
}
