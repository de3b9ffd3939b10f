//! Test-only reference implementations, written straight from the
//! definitions without the library's enumeration or bucketing machinery.

#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netspace_core::lattice::{ElementSpec, LambdaRule, Lattice, LatticeKind, Site};
use netspace_core::CoefficientNet;

/// δ·Tr F(π) and δκ for every element, read off the raw matrices.
pub fn raw(net: &CoefficientNet) -> Vec<(Complex64, f64)> {
    net.lattice()
        .elements()
        .iter()
        .map(|e| {
            let m = net.matrix(e.id);
            let mut tr = Complex64::new(0.0, 0.0);
            for i in 0..m.nrows().min(m.ncols()) {
                tr += m[(i, i)];
            }
            (tr * f64::from(e.delta), f64::from(e.delta) * f64::from(e.kappa))
        })
        .collect()
}

/// sup over the given subsets with ν ≥ level of |Σ δ Tr| / ν, 0 when none qualifies.
pub fn brute_sup(net: &CoefficientNet, subsets: &[Vec<usize>], level: f64) -> f64 {
    let data = raw(net);
    let mut best: f64 = 0.0;
    for s in subsets {
        let nu: f64 = s.iter().map(|&i| data[i].1).sum();
        if nu < level {
            continue;
        }
        let sum: Complex64 = s.iter().map(|&i| data[i].0).sum();
        best = best.max(sum.norm() / nu);
    }
    best
}

pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n)).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

/// Arithmetic progressions {a, a+d, …} of points of a 1-D integer lattice,
/// singletons included, given as element ids.
pub fn progressions_1d(lattice: &Lattice) -> Vec<Vec<usize>> {
    let pts: Vec<(i64, usize)> = lattice
        .elements()
        .iter()
        .map(|e| match &e.site {
            Site::Integer(m) => (m[0], e.id),
            _ => panic!("1-D integer lattice expected"),
        })
        .collect();
    let find = |x: i64| pts.iter().find(|(p, _)| *p == x).map(|(_, id)| *id);
    let mut out = Vec::new();
    for &(a, id) in &pts {
        out.push(vec![id]);
        for d in 1..=64i64 {
            let mut ids = vec![id];
            let mut x = a + d;
            while let Some(j) = find(x) {
                ids.push(j);
                out.push(ids.clone());
                x += d;
            }
        }
    }
    out
}

/// Σ δ κ^{1−p/2} ‖F‖_HS^p, to the power 1/p.
pub fn ellp(net: &CoefficientNet, p: f64) -> f64 {
    let mut s = 0.0;
    for e in net.lattice().elements() {
        let hs: f64 = net.matrix(e.id).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        s += f64::from(e.delta) * f64::from(e.kappa).powf(1.0 - p / 2.0) * hs.powf(p);
    }
    s.powf(1.0 / p)
}

/// Σ δ Σ_ij h_ij conj(g_ij).
pub fn pairing(h: &CoefficientNet, g: &CoefficientNet) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for e in h.lattice().elements() {
        let a = h.matrix(e.id);
        let b = g.matrix(e.id);
        for (x, y) in a.iter().zip(b.iter()) {
            s += x * y.conj() * f64::from(e.delta);
        }
    }
    s
}

pub fn generic_lattice(spec: &[(u32, u32, u32)]) -> Arc<Lattice> {
    let specs = spec
        .iter()
        .enumerate()
        .map(|(i, &(lambda, delta, kappa))| ElementSpec {
            label: format!("e{i}"),
            lambda: f64::from(lambda),
            delta,
            kappa,
            site: Site::Generic,
        })
        .collect();
    Arc::new(Lattice::new(LatticeKind::Generic, 1, specs).unwrap())
}

pub fn z_lattice(radius: u32) -> Arc<Lattice> {
    Arc::new(Lattice::integer(1, radius, LambdaRule::Rank).unwrap())
}

/// (λ, δ, κ) triples for lattices of 1..=max elements; λ small so ties occur.
pub fn lattice_strategy(max: usize) -> impl Strategy<Value = Vec<(u32, u32, u32)>> {
    prop::collection::vec((1u32..=8, 1u32..=3, 1u32..=3), 1..=max)
}

pub fn random_net(lattice: &Arc<Lattice>, seed: u64, decay: f64, real: bool) -> CoefficientNet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CoefficientNet::random(lattice.clone(), &mut rng, decay, real)
}
