mod support;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netspace_core::harness::verify_kfunc_upper;
use netspace_core::netnorm::{
    averaging_table, duality_extremizer, duality_pairing, ellp_duality_gap, ellp_norm, lorentz_discrete_norm,
    net_norm, norm_from_table, rearrangement,
};
use netspace_core::{CoefficientNet, Engine, NormParams, SubsetFamily};
use support::*;

fn norm(net: &CoefficientNet, fam: &SubsetFamily, p: f64, q: f64) -> f64 {
    net_norm(net, &NormParams::new(p, q, fam.clone()).unwrap().with_engine(Engine::Exact)).unwrap().value
}

/// Straight from the definition: levels are the lattice λ's, F̄ from the
/// brute-force sup.
fn brute_norm(net: &CoefficientNet, p: f64, q: f64) -> f64 {
    let subsets = all_subsets(net.lattice().len());
    let terms = net.lattice().elements().iter().map(|e| {
        let fb = brute_sup(net, &subsets, e.lambda);
        (e.lambda.powf(1.0 / p) * fb, f64::from(e.delta) * f64::from(e.kappa) / e.lambda)
    });
    if q.is_infinite() {
        terms.map(|(t, _)| t).fold(0.0, f64::max)
    } else {
        terms.map(|(t, w)| t.powf(q) * w).sum::<f64>().powf(1.0 / q)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn net_norm_matches_definition(spec in lattice_strategy(8), seed in any::<u64>(), p in 1.0f64..4.0, q in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY])) {
        let lat = generic_lattice(&spec);
        let net = random_net(&lat, seed, 0.0, false);
        let got = norm(&net, &SubsetFamily::all_subsets(lat), p, q);
        let want = brute_norm(&net, p, q);
        prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0), "{got} vs {want}");
    }

    #[test]
    fn net_norm_is_absolutely_homogeneous(spec in lattice_strategy(8), seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let lat = generic_lattice(&spec);
        let net = random_net(&lat, seed, 1.0, false);
        let fam = SubsetFamily::all_subsets(lat);
        let c = Complex64::new(re, im);
        for (p, q) in [(2.0, 2.0), (1.5, f64::INFINITY), (3.0, 1.0)] {
            let a = norm(&net, &fam, p, q);
            let b = norm(&net.scaled(c), &fam, p, q);
            prop_assert!((b - c.norm() * a).abs() <= 1e-12 * (1.0 + b));
        }
    }

    #[test]
    fn net_norm_triangle_inequality(spec in lattice_strategy(8), s1 in any::<u64>(), s2 in any::<u64>()) {
        let lat = generic_lattice(&spec);
        let a = random_net(&lat, s1, 0.0, false);
        let b = random_net(&lat, s2, 1.0, false);
        let fam = SubsetFamily::all_subsets(lat);
        for (p, q) in [(2.0, 2.0), (1.5, f64::INFINITY), (3.0, 1.0)] {
            let lhs = norm(&a.try_add(&b).unwrap(), &fam, p, q);
            prop_assert!(lhs <= (norm(&a, &fam, p, q) + norm(&b, &fam, p, q)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn larger_family_gives_larger_norm(radius in 1u32..=4, seed in any::<u64>(), p in 1.0f64..4.0) {
        let lat = z_lattice(radius);
        let net = random_net(&lat, seed, (seed % 3) as f64, false);
        let all = SubsetFamily::all_subsets(lat.clone());
        let aps = SubsetFamily::progressions(lat.clone()).unwrap();
        let seg = SubsetFamily::segments(lat);
        for q in [1.0, 2.0, f64::INFINITY] {
            let n_all = norm(&net, &all, p, q);
            prop_assert!(norm(&net, &aps, p, q) <= n_all);
            prop_assert!(norm(&net, &seg, p, q) <= n_all);
        }
    }

    #[test]
    fn ellp_matches_oracle_and_lorentz_diagonal(spec in lattice_strategy(10), seed in any::<u64>(), p in 1.0f64..5.0) {
        let lat = generic_lattice(&spec);
        let net = random_net(&lat, seed, 0.0, false);
        let got = ellp_norm(&net, p).unwrap();
        prop_assert!((got - ellp(&net, p)).abs() <= 1e-12 * got.max(1.0));
        if p > 1.0 {
            let l = lorentz_discrete_norm(&net, p, p).unwrap();
            prop_assert!((l - got).abs() <= 1e-12 * got.max(1.0));
        }
    }

    #[test]
    fn lorentz_holder_inequality(spec in lattice_strategy(10), s1 in any::<u64>(), s2 in any::<u64>(), p in 1.1f64..4.0, q in 1.1f64..4.0) {
        let lat = generic_lattice(&spec);
        let h = random_net(&lat, s1, 0.0, false);
        let g = random_net(&lat, s2, 1.0, false);
        let pp = p / (p - 1.0);
        let qq = q / (q - 1.0);
        let lhs = pairing(&h, &g).norm();
        let rhs = lorentz_discrete_norm(&h, p, q).unwrap() * lorentz_discrete_norm(&g, pp, qq).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }

    #[test]
    fn lorentz_nesting(spec in lattice_strategy(10), seed in any::<u64>(), p in 1.1f64..4.0) {
        // ‖f‖_{p,r} ≤ (q/p)^{1/q − 1/r} ‖f‖_{p,q} for q < r, equality on indicators when r = ∞
        let lat = generic_lattice(&spec);
        let net = random_net(&lat, seed, 0.0, false);
        let qs = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
        for (i, &q) in qs.iter().enumerate() {
            for &r in &qs[i + 1..] {
                let c = (q / p).powf(1.0 / q - if r.is_infinite() { 0.0 } else { 1.0 / r });
                let lhs = lorentz_discrete_norm(&net, p, r).unwrap();
                let rhs = c * lorentz_discrete_norm(&net, p, q).unwrap();
                prop_assert!(lhs <= rhs * (1.0 + 1e-12), "q={q} r={r}: {lhs} > {rhs}");
            }
        }
        let mass: f64 = lat.elements().iter().map(|e| f64::from(e.delta * e.kappa)).sum();
        prop_assert!(rearrangement(&net).total_mass() <= mass * (1.0 + 1e-12));
    }

    #[test]
    fn duality_pairing_matches_oracle(spec in lattice_strategy(8), s1 in any::<u64>(), s2 in any::<u64>()) {
        let lat = generic_lattice(&spec);
        let h = random_net(&lat, s1, 0.0, false);
        let g = random_net(&lat, s2, 0.0, false);
        let got = duality_pairing(&h, &g).unwrap();
        let want = pairing(&h, &g);
        prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));
    }

    #[test]
    fn kfunc_upper_bound_on_random_splits(seed in any::<u64>(), p1 in 1.0f64..2.5, gap in 0.25f64..3.0) {
        let r = verify_kfunc_upper(None, 6, p1, p1 + gap, 25, seed, SubsetFamily::all_subsets).unwrap();
        prop_assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}

/// Quotient |(h, g)| / ‖g‖_{ℓ^{p'}} computed with the oracle formulas.
fn quotient(h: &CoefficientNet, g: &CoefficientNet, p: f64) -> f64 {
    pairing(h, g).norm() / ellp(g, p / (p - 1.0))
}

#[test]
fn duality_extremizer_attains_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for p in [1.5, 2.0, 3.0] {
        for i in 0..100u64 {
            let n = rng.random_range(1..=10);
            let spec: Vec<(u32, u32, u32)> =
                (0..n).map(|_| (rng.random_range(1..=20), rng.random_range(1..=3), rng.random_range(1..=3))).collect();
            let lat = generic_lattice(&spec);
            let h = random_net(&lat, i, (i % 3) as f64, false);
            let g = duality_extremizer(&h, p).unwrap();
            let want = ellp(&h, p);
            assert!((quotient(&h, &g, p) - want).abs() <= 1e-8 * want, "p={p} net {i}");
            let gap = ellp_duality_gap(&h, p, 200, &mut rng).unwrap();
            assert!(gap.gap <= 1e-8 * want);
            assert_eq!(gap.random_violations, 0);
        }
    }
}

/// Random search with local refinement never beats the norm and gets close to it.
#[test]
fn random_search_approaches_norm_from_below() {
    let lat = generic_lattice(&[(1, 1, 1), (2, 2, 2), (3, 1, 3), (5, 3, 1)]);
    let h = random_net(&lat, 77, 0.0, false);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [1.5, 3.0] {
        let target = ellp(&h, p);
        let mut best_g = random_net(&lat, 1, 0.0, false);
        let mut best = quotient(&h, &best_g, p);
        for _ in 0..10_000 {
            let g = random_net(&lat, rng.random(), 0.0, false);
            let qv = quotient(&h, &g, p);
            assert!(qv <= target * (1.0 + 1e-12));
            if qv > best {
                best = qv;
                best_g = g;
            }
        }
        let mut step = 0.5;
        for _ in 0..20_000 {
            let noise = random_net(&lat, rng.random(), 0.0, false).scaled(Complex64::new(step, 0.0));
            let g = best_g.try_add(&noise).unwrap();
            let qv = quotient(&h, &g, p);
            assert!(qv <= target * (1.0 + 1e-12));
            if qv > best {
                best = qv;
                best_g = g;
            } else {
                step *= 0.999;
            }
        }
        assert!(best >= 0.99 * target, "p={p}: {best} vs {target}");
    }
}

#[test]
fn one_table_serves_several_exponents() {
    let lat = z_lattice(3);
    let net = random_net(&lat, 8, 1.0, false);
    let fam = SubsetFamily::progressions(lat.clone()).unwrap();
    let table = averaging_table(&net, &lat.distinct_levels(), &fam, Engine::Exact).unwrap();
    for (p, q) in [(2.0, 1.0), (1.5, 3.0), (4.0, f64::INFINITY)] {
        let a = norm_from_table(&net, table.clone(), p, q).unwrap().value;
        assert_eq!(a, norm(&net, &fam, p, q));
    }
}

#[test]
fn single_element_norms_are_explicit() {
    // one element, λ = 2, δ = 2, κ = 1: F̄ = |2 t| / 2 = |t|
    let lat = generic_lattice(&[(2, 2, 1)]);
    let net = CoefficientNet::from_traces(lat.clone(), &[Complex64::new(3.0, 4.0)]).unwrap();
    let fam = SubsetFamily::all_subsets(lat);
    let n = norm(&net, &fam, 2.0, 2.0);
    // (2^{1/2}·5)^2 · 2/2 = 50
    assert!((n - 50f64.sqrt()).abs() < 1e-12);
    assert!((norm(&net, &fam, 2.0, f64::INFINITY) - 50f64.sqrt()).abs() < 1e-12);
    // at λ = 4 no subset has ν ≥ λ, so the averaging and the norm vanish
    let lat = generic_lattice(&[(4, 2, 1)]);
    let net = CoefficientNet::from_traces(lat.clone(), &[Complex64::new(3.0, 4.0)]).unwrap();
    assert_eq!(norm(&net, &SubsetFamily::all_subsets(lat), 2.0, 2.0), 0.0);
}
