use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::quadrature::{default_panels, HaarRule};
use crate::error::{NetspaceError, Result};
use crate::lattice::{Lattice, LatticeKind, Site, Spin};
use crate::netnorm::CoefficientNet;
use crate::numeric::CompensatedSum;

/// χ_l(θ) = sin((2l+1)θ)/sin θ for 2l = 0..=twice_max, computed as the
/// Chebyshev polynomials U_{2l}(cos θ) so θ = 0 and θ = π need no special case.
pub fn characters(twice_max: u32, theta: f64) -> Vec<f64> {
    let x = theta.cos();
    let mut out = Vec::with_capacity(twice_max as usize + 1);
    out.push(1.0);
    if twice_max >= 1 {
        out.push(2.0 * x);
    }
    for n in 2..=twice_max as usize {
        out.push(2.0 * x * out[n - 1] - out[n - 2]);
    }
    out
}

pub fn character(l: Spin, theta: f64) -> f64 {
    characters(l.twice(), theta)[l.twice() as usize]
}

/// f(θ) = Σ_l c_l χ_l(θ), a class function on SU(2) given by its character
/// coefficients. `coeffs[2l]` holds c_l.
#[derive(Debug, Clone, PartialEq)]
pub struct SU2ClassFunction {
    coeffs: Vec<Complex64>,
    panels: Option<usize>,
}

impl SU2ClassFunction {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(NetspaceError::domain("class function needs at least one coefficient"));
        }
        Ok(SU2ClassFunction { coeffs, panels: None })
    }

    pub fn constant(c: Complex64) -> Self {
        SU2ClassFunction { coeffs: vec![c], panels: None }
    }

    pub fn character(l: Spin) -> Self {
        let mut coeffs = vec![Complex64::ZERO; l.twice() as usize + 1];
        coeffs[l.twice() as usize] = Complex64::ONE;
        SU2ClassFunction { coeffs, panels: None }
    }

    /// D_Q = Σ_{l∈Q} (2l+1) χ_l.
    pub fn dirichlet(spins: &[Spin]) -> Result<Self> {
        let top = spins
            .iter()
            .map(|s| s.twice())
            .max()
            .ok_or_else(|| NetspaceError::domain("Dirichlet kernel of an empty set"))?;
        let mut coeffs = vec![Complex64::ZERO; top as usize + 1];
        for s in spins {
            coeffs[s.twice() as usize] = Complex64::new(f64::from(s.dim()), 0.0);
        }
        Ok(SU2ClassFunction { coeffs, panels: None })
    }

    /// Gaussian coefficients c_l scaled by (2l+1)^{−decay}.
    pub fn random<R: Rng + ?Sized>(l_max: Spin, rng: &mut R, decay: f64, real: bool) -> Self {
        let coeffs = (0..=l_max.twice())
            .map(|t| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = if real { 0.0 } else { StandardNormal.sample(rng) };
                Complex64::new(re, im) * f64::from(t + 1).powf(-decay)
            })
            .collect();
        SU2ClassFunction { coeffs, panels: None }
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = Some(panels.max(1));
        self
    }

    pub fn l_max(&self) -> Spin {
        Spin::from_twice(self.coeffs.len() as u32 - 1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: Spin) -> Complex64 {
        self.coeffs.get(l.twice() as usize).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn panels(&self) -> usize {
        self.panels.unwrap_or_else(|| default_panels(self.l_max().twice()))
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let chi = characters(self.l_max().twice(), theta);
        self.coeffs.iter().zip(&chi).map(|(c, x)| c * x).sum()
    }

    /// JSON object `{"2l": [re, im], ...}`; the key is twice the spin.
    pub fn from_json_str(json: &str) -> Result<Self> {
        let raw: BTreeMap<String, [f64; 2]> = serde_json::from_str(json)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for (k, [re, im]) in raw {
            let twice: u32 = k
                .trim()
                .parse()
                .map_err(|_| NetspaceError::Parse(format!("class-function key {k:?} is not 2l")))?;
            pairs.push((twice, Complex64::new(re, im)));
        }
        let top = pairs
            .iter()
            .map(|p| p.0)
            .max()
            .ok_or_else(|| NetspaceError::domain("class function needs at least one coefficient"))?;
        let mut coeffs = vec![Complex64::ZERO; top as usize + 1];
        for (t, c) in pairs {
            coeffs[t as usize] = c;
        }
        Self::new(coeffs)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let map: BTreeMap<String, [f64; 2]> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::ZERO)
            .map(|(t, c)| (t.to_string(), [c.re, c.im]))
            .collect();
        Ok(serde_json::to_string(&map)?)
    }
}

fn required_nodes(twice_l_max: u32) -> usize {
    4 * (twice_l_max as usize + 1)
}

/// f̂(l) = (c_l/(2l+1)) I on the SU(2) dual truncated at the function's l_max.
pub fn su2_class_fourier(f: &SU2ClassFunction) -> Result<CoefficientNet> {
    let lattice = Arc::new(Lattice::su2_dual(f.l_max()));
    su2_class_fourier_on(f, lattice, f.panels())
}

/// Fourier coefficients of `f` on an arbitrary SU(2)-dual truncation, with
/// c_l = (2/π) ∫₀^π f(θ) χ_l(θ) sin²θ dθ computed by quadrature.
pub fn su2_class_fourier_on(
    f: &SU2ClassFunction,
    lattice: Arc<Lattice>,
    panels: usize,
) -> Result<CoefficientNet> {
    if lattice.kind() != LatticeKind::Su2Dual {
        return Err(NetspaceError::domain("class-function transform needs an SU(2) dual lattice"));
    }
    let spins: Vec<Spin> = lattice
        .elements()
        .iter()
        .map(|e| match e.site {
            Site::Spin(s) => Ok(s),
            _ => Err(NetspaceError::domain(format!("element {:?} is not a spin", e.label))),
        })
        .collect::<Result<_>>()?;
    let top = spins.iter().map(|s| s.twice()).max().unwrap_or(0).max(f.l_max().twice());
    let rule = HaarRule::new(panels);
    let required = required_nodes(top);
    if rule.len() < required {
        return Err(NetspaceError::InsufficientNodes { given: rule.len(), required });
    }
    let mut sums = vec![(Vec::new(), Vec::new()); top as usize + 1];
    for (&theta, &w) in rule.nodes().iter().zip(rule.weights()) {
        let chi = characters(top, theta);
        let fv: Complex64 = f.coeffs.iter().zip(&chi).map(|(c, x)| c * x).sum();
        for (acc, x) in sums.iter_mut().zip(&chi) {
            let z = fv * (w * x);
            acc.0.push(z.re);
            acc.1.push(z.im);
        }
    }
    let c: Vec<Complex64> = sums
        .into_iter()
        .map(|(re, im)| {
            Complex64::new(
                re.into_iter().collect::<CompensatedSum>().value(),
                im.into_iter().collect::<CompensatedSum>().value(),
            )
        })
        .collect();
    let traces: Vec<Complex64> = spins.iter().map(|s| c[s.twice() as usize]).collect();
    CoefficientNet::from_traces(lattice, &traces)
}

/// A quadrature value with the difference to the half-resolution rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes: usize,
}

/// ‖f‖_{L^p(SU(2))} = ((2/π) ∫₀^π |f(θ)|^p sin²θ dθ)^{1/p}. For p = ∞ the
/// maximum of |f| over the quadrature nodes and the endpoints.
pub fn su2_lp_norm(f: &SU2ClassFunction, p: f64) -> Result<QuadratureEstimate> {
    if !(p >= 1.0) {
        return Err(NetspaceError::domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    let panels = f.panels();
    let eval = |panels: usize| -> (f64, usize) {
        let rule = HaarRule::new(panels);
        if p.is_infinite() {
            let m = rule
                .nodes()
                .iter()
                .chain(&[0.0, std::f64::consts::PI])
                .map(|&t| f.eval(t).norm())
                .fold(0.0, f64::max);
            (m, rule.len() + 2)
        } else {
            (rule.integrate(|t| f.eval(t).norm().powf(p)).powf(1.0 / p), rule.len())
        }
    };
    let (fine, nodes) = eval(2 * panels);
    let (coarse, _) = eval(panels);
    Ok(QuadratureEstimate { value: fine, error_estimate: (fine - coarse).abs(), nodes })
}
