use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::numeric::CompensatedSum;

pub const POINTS_PER_PANEL: usize = 64;

/// Composite Gauss–Legendre rule on [0, π] carrying the SU(2) Haar density,
/// so that Σ w_i g(θ_i) ≈ (2/π) ∫₀^π g(θ) sin²θ dθ.
#[derive(Debug, Clone)]
pub struct HaarRule {
    panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HaarRule {
    pub fn new(panels: usize) -> Self {
        let panels = panels.max(1);
        let rule = GaussLegendre::new(NonZeroUsize::new(POINTS_PER_PANEL).expect("nonzero"));
        let width = PI / panels as f64;
        let mut nodes = Vec::with_capacity(panels * POINTS_PER_PANEL);
        let mut weights = Vec::with_capacity(panels * POINTS_PER_PANEL);
        for k in 0..panels {
            let a = k as f64 * width;
            for &(x, w) in rule.as_node_weight_pairs() {
                let theta = a + 0.5 * width * (x + 1.0);
                nodes.push(theta);
                weights.push(0.5 * width * w * (2.0 / PI) * theta.sin().powi(2));
            }
        }
        HaarRule { panels, nodes, weights }
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Σ w_i g(θ_i), compensated.
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * g(t)).collect::<CompensatedSum>().value()
    }
}

/// Default panel count for characters up to `twice_l_max`: two panels per
/// period of the fastest oscillation sin((2l+1)θ).
pub fn default_panels(twice_l_max: u32) -> usize {
    2 * (twice_l_max as usize + 1)
}
