use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{NetspaceError, Result};
use crate::lattice::{Lattice, LatticeKind, Site};
use crate::netnorm::CoefficientNet;
use crate::numeric::CompensatedSum;
use crate::rearrangement::StepFunction;

/// Samples of f on the uniform grid {j/M : j ∈ {0..M−1}^n} of T^n, stored
/// row-major (last coordinate fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusFunction {
    n: u32,
    m: usize,
    samples: Vec<Complex64>,
}

impl TorusFunction {
    pub fn from_samples(n: u32, m: usize, samples: Vec<Complex64>) -> Result<Self> {
        let want = grid_len(n, m)?;
        if samples.len() != want {
            return Err(NetspaceError::Shape(format!(
                "{} samples for a {m}^{n} grid",
                samples.len()
            )));
        }
        Ok(TorusFunction { n, m, samples })
    }

    pub fn from_fn(n: u32, m: usize, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let len = grid_len(n, m)?;
        let mut x = vec![0.0; n as usize];
        let samples = (0..len)
            .map(|idx| {
                let mut rest = idx;
                for k in (0..n as usize).rev() {
                    x[k] = (rest % m) as f64 / m as f64;
                    rest /= m;
                }
                f(&x)
            })
            .collect();
        Ok(TorusFunction { n, m, samples })
    }

    /// f(x) = Σ c_k e^{2πi k·x}, sampled on the M-grid. Refuses frequencies
    /// that would alias (|k|_∞ > (M−1)/2).
    pub fn from_coefficients(n: u32, m: usize, coeffs: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        let len = grid_len(n, m)?;
        let radius = coeffs.iter().map(|(k, _)| sup_norm(k)).max().unwrap_or(0);
        check_alias(radius, m)?;
        let mut grid = vec![Complex64::ZERO; len];
        for (k, c) in coeffs {
            if k.len() != n as usize {
                return Err(NetspaceError::Shape(format!(
                    "frequency {k:?} is not in Z^{n}"
                )));
            }
            grid[wrap_index(k, m)] += c;
        }
        fft_nd(&mut grid, n, m, FftDirection::Inverse);
        Ok(TorusFunction { n, m, samples: grid })
    }

    /// Synthesis from a scalar net on an integer lattice: f = Σ_m Tr F(m) e^{2πi m·x}.
    pub fn synthesize(net: &CoefficientNet, m: usize) -> Result<Self> {
        let lattice = net.lattice();
        let n = lattice.dimension();
        let coeffs = integer_points(lattice)?
            .into_iter()
            .map(|(id, k)| (k, net.trace(id)))
            .collect::<Vec<_>>();
        check_alias(lattice_radius(lattice)?, m)?;
        Self::from_coefficients(n, m, &coeffs)
    }

    /// JSON object `{"k1,k2,...": [re, im]}` of Fourier coefficients.
    pub fn from_coefficient_json(n: u32, m: usize, json: &str) -> Result<Self> {
        let raw: BTreeMap<String, [f64; 2]> = serde_json::from_str(json)?;
        let mut coeffs = Vec::with_capacity(raw.len());
        for (key, [re, im]) in raw {
            let k = key
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|s| s.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| NetspaceError::Parse(format!("bad frequency key {key:?}")))?;
            coeffs.push((k, Complex64::new(re, im)));
        }
        Self::from_coefficients(n, m, &coeffs)
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn grid_size(&self) -> usize {
        self.m
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Mass 1/M^n carried by each grid sample.
    pub fn cell_mass(&self) -> f64 {
        1.0 / self.samples.len() as f64
    }

    /// (M^{−n} Σ |f|^p)^{1/p}; the max of |f| for p = ∞.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(NetspaceError::domain(format!("L^p norm needs p >= 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        let s: CompensatedSum = self.samples.iter().map(|z| z.norm().powf(p)).collect();
        Ok((s.value() * self.cell_mass()).powf(1.0 / p))
    }

    pub fn rearrangement(&self) -> StepFunction {
        StepFunction::from_samples(self.samples.iter().map(|z| z.norm()), self.cell_mass())
    }

    pub fn lorentz_norm(&self, p: f64, q: f64) -> Result<f64> {
        self.rearrangement().lorentz_norm(p, q)
    }
}

/// f̂(k) = M^{−n} Σ_j f(j/M) e^{−2πi k·j/M} for every point of an integer lattice.
pub fn torus_fourier(f: &TorusFunction, lattice: Arc<Lattice>) -> Result<CoefficientNet> {
    if lattice.dimension() != f.n {
        return Err(NetspaceError::Shape(format!(
            "lattice in Z^{} for a function on T^{}",
            lattice.dimension(),
            f.n
        )));
    }
    check_alias(lattice_radius(&lattice)?, f.m)?;
    let mut grid = f.samples.clone();
    fft_nd(&mut grid, f.n, f.m, FftDirection::Forward);
    let scale = f.cell_mass();
    let mut traces = vec![Complex64::ZERO; lattice.len()];
    for (id, k) in integer_points(&lattice)? {
        traces[id] = grid[wrap_index(&k, f.m)] * scale;
    }
    CoefficientNet::from_traces(lattice, &traces)
}

fn grid_len(n: u32, m: usize) -> Result<usize> {
    if n == 0 || m == 0 {
        return Err(NetspaceError::domain("torus grid needs n >= 1 and M >= 1"));
    }
    m.checked_pow(n).ok_or_else(|| NetspaceError::domain(format!("grid {m}^{n} is too large")))
}

fn check_alias(radius: usize, m: usize) -> Result<()> {
    if 2 * radius + 1 > m {
        Err(NetspaceError::Aliasing { radius, grid: m })
    } else {
        Ok(())
    }
}

fn sup_norm(k: &[i64]) -> usize {
    k.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
}

fn wrap_index(k: &[i64], m: usize) -> usize {
    k.iter().fold(0, |acc, &x| acc * m + x.rem_euclid(m as i64) as usize)
}

fn integer_points(lattice: &Lattice) -> Result<Vec<(usize, Vec<i64>)>> {
    if lattice.kind() != LatticeKind::IntegerLattice {
        return Err(NetspaceError::domain("torus analysis needs an integer lattice"));
    }
    lattice
        .elements()
        .iter()
        .map(|e| match &e.site {
            Site::Integer(k) if e.delta == 1 && e.kappa == 1 => Ok((e.id, k.clone())),
            _ => Err(NetspaceError::domain(format!("element {:?} is not a scalar frequency", e.label))),
        })
        .collect()
}

fn lattice_radius(lattice: &Lattice) -> Result<usize> {
    Ok(integer_points(lattice)?.iter().map(|(_, k)| sup_norm(k)).max().unwrap_or(0))
}

/// Unnormalized n-dimensional DFT along every axis.
fn fft_nd(data: &mut [Complex64], n: u32, m: usize, direction: FftDirection) {
    let fft = FftPlanner::new().plan_fft(m, direction);
    let mut line = vec![Complex64::ZERO; m];
    for axis in 0..n {
        let stride = m.pow(n - 1 - axis);
        let block = stride * m;
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + t * stride];
                }
                fft.process(&mut line);
                for (t, v) in line.iter().enumerate() {
                    data[base + t * stride] = *v;
                }
            }
        }
    }
}
