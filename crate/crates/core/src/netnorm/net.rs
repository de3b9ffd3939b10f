use std::path::Path;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{NetspaceError, Result};
use crate::lattice::Lattice;
use crate::numeric::CompensatedSum;

/// A net π ↦ F(π) ∈ C^{κ_π × δ_π} over a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientNet {
    lattice: Arc<Lattice>,
    matrices: Vec<Array2<Complex64>>,
}

impl CoefficientNet {
    pub fn new(lattice: Arc<Lattice>, matrices: Vec<Array2<Complex64>>) -> Result<Self> {
        if matrices.len() != lattice.len() {
            return Err(NetspaceError::Shape(format!(
                "{} matrices for a {}-element lattice",
                matrices.len(),
                lattice.len()
            )));
        }
        for (e, m) in lattice.elements().iter().zip(&matrices) {
            let want = (e.kappa as usize, e.delta as usize);
            if m.dim() != want {
                return Err(NetspaceError::Shape(format!(
                    "element {:?} needs a {}x{} matrix, got {}x{}",
                    e.label,
                    want.0,
                    want.1,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(CoefficientNet { lattice, matrices })
    }

    pub fn zeros(lattice: Arc<Lattice>) -> Self {
        let matrices = lattice
            .elements()
            .iter()
            .map(|e| Array2::zeros((e.kappa as usize, e.delta as usize)))
            .collect();
        CoefficientNet { lattice, matrices }
    }

    /// Net whose matrix at π is a multiple of the (rectangular) identity with trace `traces[π]`.
    pub fn from_traces(lattice: Arc<Lattice>, traces: &[Complex64]) -> Result<Self> {
        if traces.len() != lattice.len() {
            return Err(NetspaceError::Shape(format!(
                "{} traces for a {}-element lattice",
                traces.len(),
                lattice.len()
            )));
        }
        let matrices = lattice
            .elements()
            .iter()
            .zip(traces)
            .map(|(e, &t)| {
                let (k, d) = (e.kappa as usize, e.delta as usize);
                let r = k.min(d);
                let mut m = Array2::zeros((k, d));
                for j in 0..r {
                    m[(j, j)] = t / r as f64;
                }
                m
            })
            .collect();
        Ok(CoefficientNet { lattice, matrices })
    }

    /// Gaussian entries scaled by (rank + 1)^{−decay}; real entries when `real` is set.
    pub fn random<R: Rng + ?Sized>(lattice: Arc<Lattice>, rng: &mut R, decay: f64, real: bool) -> Self {
        let matrices = lattice
            .elements()
            .iter()
            .map(|e| {
                let scale = ((e.id + 1) as f64).powf(-decay);
                Array2::from_shape_simple_fn((e.kappa as usize, e.delta as usize), || {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = if real { 0.0 } else { StandardNormal.sample(rng) };
                    Complex64::new(re, im) * scale
                })
            })
            .collect();
        CoefficientNet { lattice, matrices }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn matrices(&self) -> &[Array2<Complex64>] {
        &self.matrices
    }

    pub fn matrix(&self, id: usize) -> &Array2<Complex64> {
        &self.matrices[id]
    }

    /// Tr F(θ) = Σ_{j < min(κ, δ)} F(θ)_{jj}.
    pub fn trace(&self, id: usize) -> Complex64 {
        self.matrices[id].diag().iter().sum()
    }

    /// v_θ = δ_θ Tr F(θ), the summands of the averaging function.
    pub fn weighted_traces(&self) -> Vec<Complex64> {
        self.lattice
            .elements()
            .iter()
            .map(|e| self.trace(e.id) * f64::from(e.delta))
            .collect()
    }

    pub fn hs_norm(&self, id: usize) -> f64 {
        self.matrices[id].iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.matrices.iter().all(|m| m.iter().all(|z| z.im == 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.iter().all(|m| m.iter().all(|z| *z == Complex64::ZERO))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        CoefficientNet {
            lattice: self.lattice.clone(),
            matrices: self.matrices.iter().map(|m| m.mapv(|z| z * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &CoefficientNet) -> Result<Self> {
        self.check_same_lattice(other)?;
        Ok(CoefficientNet {
            lattice: self.lattice.clone(),
            matrices: self.matrices.iter().zip(&other.matrices).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &CoefficientNet) -> Result<Self> {
        self.check_same_lattice(other)?;
        Ok(CoefficientNet {
            lattice: self.lattice.clone(),
            matrices: self.matrices.iter().zip(&other.matrices).map(|(a, b)| a - b).collect(),
        })
    }

    pub(crate) fn check_same_lattice(&self, other: &CoefficientNet) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(NetspaceError::Shape("nets live on different lattices".into()))
        }
    }

    /// JSON: `{"entries": [{"label": ..., "matrix": [[[re, im], ...], ...]}, ...]}`.
    pub fn to_json_string(&self) -> Result<String> {
        let entries = self
            .lattice
            .elements()
            .iter()
            .zip(&self.matrices)
            .map(|(e, m)| NetEntry {
                label: e.label.clone(),
                matrix: m
                    .rows()
                    .into_iter()
                    .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            })
            .collect();
        Ok(serde_json::to_string(&NetFile { entries })?)
    }

    /// Parses the JSON form against `lattice`. Entries are matched by label;
    /// elements without an entry are zero.
    pub fn from_json_str(lattice: Arc<Lattice>, json: &str) -> Result<Self> {
        let file: NetFile = serde_json::from_str(json)?;
        let mut net = CoefficientNet::zeros(lattice.clone());
        let mut seen = vec![false; lattice.len()];
        for entry in file.entries {
            let id = lattice.id_of_label(&entry.label).ok_or_else(|| {
                NetspaceError::domain(format!("unknown element label {:?}", entry.label))
            })?;
            if std::mem::replace(&mut seen[id], true) {
                return Err(NetspaceError::domain(format!("duplicate entry {:?}", entry.label)));
            }
            let rows = entry.matrix.len();
            let cols = entry.matrix.first().map_or(0, Vec::len);
            if entry.matrix.iter().any(|r| r.len() != cols) {
                return Err(NetspaceError::Shape(format!("ragged matrix for {:?}", entry.label)));
            }
            let flat: Vec<Complex64> =
                entry.matrix.into_iter().flatten().map(|[re, im]| Complex64::new(re, im)).collect();
            let m = Array2::from_shape_vec((rows, cols), flat)
                .map_err(|e| NetspaceError::Shape(e.to_string()))?;
            net.matrices[id] = m;
        }
        CoefficientNet::new(lattice, net.matrices)
    }

    pub fn from_json_file(lattice: Arc<Lattice>, path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(lattice, &std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct NetFile {
    entries: Vec<NetEntry>,
}

#[derive(Serialize, Deserialize)]
struct NetEntry {
    label: String,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Σ_{θ∈ids} v_θ, accumulated in the order of `ids` starting from zero.
///
/// Both averaging engines evaluate candidate sets through this function, so
/// a set found by either engine gets a bit-identical score.
pub(crate) fn subset_sum(values: &[Complex64], ids: &[usize]) -> Complex64 {
    ids.iter().fold(Complex64::ZERO, |acc, &i| acc + values[i])
}

pub(crate) fn compensated(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}
