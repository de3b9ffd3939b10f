mod support;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netspace_core::dirichlet::{characterization_constant, Frontend, KernelNorms};
use netspace_core::group_fourier::{
    default_panels, su2_class_fourier, su2_lp_norm, torus_fourier, HaarRule, SU2ClassFunction, TorusFunction,
};
use netspace_core::lattice::{LambdaRule, Lattice, Spin};
use netspace_core::SubsetFamily;
use support::*;

fn random_coeffs(n: u32, k: i64, seed: u64) -> Vec<(Vec<i64>, Complex64)> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![vec![]];
    for _ in 0..n {
        pts = pts.into_iter().flat_map(|p: Vec<i64>| (-k..=k).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    pts.into_iter()
        .map(|p| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            (p, Complex64::new(re, im))
        })
        .collect()
}

fn random_su2(twice: u32, seed: u64) -> SU2ClassFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SU2ClassFunction::random(Spin::from_twice(twice), &mut rng, 0.0, false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn torus_plancherel(n in 1u32..=2, k in 0i64..=6, seed in any::<u64>()) {
        let coeffs = random_coeffs(n, k, seed);
        let f = TorusFunction::from_coefficients(n, 16, &coeffs).unwrap();
        let lat = Arc::new(Lattice::integer(n, k as u32, LambdaRule::Rank).unwrap());
        let net = torus_fourier(&f, lat).unwrap();
        let l2 = f.lp_norm(2.0).unwrap();
        prop_assert!((l2 - ellp(&net, 2.0)).abs() <= 1e-9 * l2);
        // coefficients come back exactly (up to FFT rounding)
        for (m, c) in &coeffs {
            let id = net.lattice().id_of_point(m).unwrap();
            prop_assert!((net.trace(id) - c).norm() <= 1e-12 * (1.0 + c.norm()));
        }
    }

    #[test]
    fn su2_plancherel(twice in 0u32..=16, seed in any::<u64>()) {
        let f = random_su2(twice, seed);
        let net = su2_class_fourier(&f).unwrap();
        let l2 = su2_lp_norm(&f, 2.0).unwrap().value;
        prop_assert!((l2 - ellp(&net, 2.0)).abs() <= 1e-9 * l2);
    }

    #[test]
    fn hausdorff_young(p in 1.05f64..=2.0, twice in 0u32..=10, k in 0i64..=8, seed in any::<u64>()) {
        let pp = p / (p - 1.0);
        let f = TorusFunction::from_coefficients(1, 32, &random_coeffs(1, k, seed)).unwrap();
        let net = torus_fourier(&f, Arc::new(Lattice::integer(1, k as u32, LambdaRule::Rank).unwrap())).unwrap();
        prop_assert!(ellp(&net, pp) <= f.lp_norm(p).unwrap() * (1.0 + 1e-9));
        let g = random_su2(twice, seed);
        let net = su2_class_fourier(&g).unwrap();
        prop_assert!(ellp(&net, pp) <= su2_lp_norm(&g, p).unwrap().value * (1.0 + 1e-9));
    }

    #[test]
    fn translation_preserves_lorentz_norms(k in 1i64..=6, shift in 0usize..32, seed in any::<u64>(), p in 1.1f64..4.0, q in 1.0f64..4.0) {
        let m = 32;
        let coeffs = random_coeffs(1, k, seed);
        let shifted: Vec<_> = coeffs
            .iter()
            .map(|(kk, c)| (kk.clone(), c * Complex64::from_polar(1.0, -2.0 * PI * (kk[0] * shift as i64) as f64 / m as f64)))
            .collect();
        let f = TorusFunction::from_coefficients(1, m, &coeffs).unwrap();
        let g = TorusFunction::from_coefficients(1, m, &shifted).unwrap();
        let a = f.lorentz_norm(p, q).unwrap();
        let b = g.lorentz_norm(p, q).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a);
        prop_assert!((f.lorentz_norm(p, p).unwrap() - f.lp_norm(p).unwrap()).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn torus_pairing_with_dirichlet_kernels(k in 1u32..=5, seed in any::<u64>(), mask in 1u32..1024) {
        let m = 32;
        let lat = Arc::new(Lattice::integer(1, k, LambdaRule::Rank).unwrap());
        let f = TorusFunction::from_coefficients(1, m, &random_coeffs(1, k as i64, seed)).unwrap();
        let net = torus_fourier(&f, lat.clone()).unwrap();
        let ids: Vec<usize> = (0..lat.len()).filter(|i| mask >> (i % 10) & 1 == 1).collect();
        prop_assume!(!ids.is_empty());
        let d = KernelNorms::new(lat.clone(), Frontend::Torus { grid: m }).unwrap().torus_kernel(&ids, m).unwrap();
        let lhs: Complex64 = f.samples().iter().zip(d.samples()).map(|(a, b)| a * b.conj()).sum::<Complex64>() / m as f64;
        let rhs: Complex64 = ids.iter().map(|&i| net.trace(i)).sum();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn su2_pairing_with_dirichlet_kernels(twice in 1u32..=10, seed in any::<u64>(), mask in 1u32..2048) {
        let f = random_su2(twice, seed);
        let net = su2_class_fourier(&f).unwrap();
        let spins: Vec<u32> = (0..=twice).filter(|t| mask >> t & 1 == 1).collect();
        prop_assume!(!spins.is_empty());
        let rule = HaarRule::new(default_panels(twice));
        let kernel = |theta: f64| -> f64 {
            spins.iter().map(|&t| f64::from(t + 1) * ((f64::from(t) + 1.0) * theta).sin() / theta.sin()).sum()
        };
        let re = rule.integrate(|t| f.eval(t).re * kernel(t));
        let im = rule.integrate(|t| f.eval(t).im * kernel(t));
        let rhs: Complex64 = spins.iter().map(|&t| net.trace(t as usize) * f64::from(t + 1)).sum();
        prop_assert!((Complex64::new(re, im) - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }
}

#[test]
fn plancherel_on_one_hundred_functions_per_frontend() {
    for i in 0..100u64 {
        let k = (i % 65) as i64;
        let f = TorusFunction::from_coefficients(1, 256, &random_coeffs(1, k, i)).unwrap();
        let net = torus_fourier(&f, Arc::new(Lattice::integer(1, k as u32, LambdaRule::Rank).unwrap())).unwrap();
        let l2 = f.lp_norm(2.0).unwrap();
        assert!((l2 - ellp(&net, 2.0)).abs() <= 1e-9 * l2, "torus {i}");

        let g = random_su2((i % 41) as u32, i);
        let l2 = su2_lp_norm(&g, 2.0).unwrap().value;
        assert!((l2 - ellp(&su2_class_fourier(&g).unwrap(), 2.0)).abs() <= 1e-9 * l2, "su2 {i}");
    }
}

#[test]
fn su2_characterization_constant_is_at_most_one() {
    let lat = Arc::new(Lattice::su2_dual(Spin::from_twice(6)));
    let fam = SubsetFamily::all_subsets(lat);
    for p in [1.25, 1.5, 2.0] {
        let c = characterization_constant(&fam, p, Frontend::Su2 { panels: None }).unwrap();
        assert!(c.value <= 1.0 + 1e-6, "p={p}: {}", c.value);
        assert!(c.value > 0.0);
    }
}

#[test]
fn torus_progression_constant_at_p2_is_one() {
    // Plancherel: ‖D_Q‖_2 = |Q|^{1/2}, so the sup is attained at k = |Q| with value 1
    let lat = Arc::new(Lattice::integer(1, 6, LambdaRule::Rank).unwrap());
    let fam = SubsetFamily::progressions(lat).unwrap();
    let c = characterization_constant(&fam, 2.0, Frontend::Torus { grid: 64 }).unwrap();
    assert!((c.value - 1.0).abs() <= 1e-9);
}

#[test]
fn fourier_of_zero_is_zero() {
    let f = SU2ClassFunction::new(vec![Complex64::new(0.0, 0.0); 4]).unwrap();
    assert!(su2_class_fourier(&f).unwrap().is_zero());
    let g = TorusFunction::from_coefficients(2, 8, &[]).unwrap();
    let net = torus_fourier(&g, Arc::new(Lattice::integer(2, 3, LambdaRule::Rank).unwrap())).unwrap();
    assert!(net.is_zero());
}
