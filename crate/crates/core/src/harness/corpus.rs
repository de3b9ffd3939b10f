use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;

use crate::error::{NetspaceError, Result};
use crate::group_fourier::SU2ClassFunction;
use crate::lattice::Spin;

/// Decay exponents cycled through by random corpora.
pub const DECAYS: [f64; 3] = [0.0, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSpec {
    /// Characters or exponentials, Dirichlet kernels and Fejér-type kernels.
    Deterministic,
    /// `size` functions with seeded Gaussian coefficients; item i decays
    /// like (1+|m|)^{−DECAYS[i mod 3]} unless `decay` fixes the exponent.
    Random { size: usize, seed: u64, decay: Option<f64> },
    File(PathBuf),
}

impl FromStr for CorpusSpec {
    type Err = NetspaceError;

    /// `deterministic`, `random:N[:seed=S][:decay=D]` or `file:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            NetspaceError::Parse(format!(
                "bad corpus {s:?} (expected deterministic, random:N[:seed=S][:decay=D] or file:PATH)"
            ))
        };
        if s == "deterministic" {
            return Ok(CorpusSpec::Deterministic);
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(CorpusSpec::File(PathBuf::from(path)));
        }
        let rest = s.strip_prefix("random:").ok_or_else(bad)?;
        let mut parts = rest.split(':');
        let size: usize = parts.next().and_then(|n| n.parse().ok()).ok_or_else(bad)?;
        let mut seed = 0;
        let mut decay = None;
        for part in parts {
            match part.split_once('=') {
                Some(("seed", v)) => seed = v.parse().map_err(|_| bad())?,
                Some(("decay", v)) => decay = Some(v.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        Ok(CorpusSpec::Random { size, seed, decay })
    }
}

impl fmt::Display for CorpusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusSpec::Deterministic => f.write_str("deterministic"),
            CorpusSpec::Random { size, seed, decay: None } => write!(f, "random:{size}:seed={seed}"),
            CorpusSpec::Random { size, seed, decay: Some(d) } => {
                write!(f, "random:{size}:seed={seed}:decay={d}")
            }
            CorpusSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl CorpusSpec {
    pub(crate) fn decay_for(&self, index: usize) -> f64 {
        match self {
            CorpusSpec::Random { decay: Some(d), .. } => *d,
            _ => DECAYS[index % DECAYS.len()],
        }
    }
}

/// A named corpus member.
#[derive(Debug, Clone, PartialEq)]
pub struct Item<T> {
    pub name: String,
    pub value: T,
}

/// Trigonometric polynomial Σ c_k e^{2πi k·x} on T^n.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoly {
    pub n: u32,
    pub coeffs: Vec<(Vec<i64>, Complex64)>,
}

impl TorusPoly {
    pub fn bandwidth(&self) -> usize {
        self.coeffs
            .iter()
            .flat_map(|(k, _)| k.iter().map(|x| x.unsigned_abs() as usize))
            .max()
            .unwrap_or(0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        TorusPoly { n: self.n, coeffs: self.coeffs.iter().map(|(k, z)| (k.clone(), z * c)).collect() }
    }
}

/// All frequencies in [−K, K]^n in lexicographic order.
fn cube(n: u32, k: usize) -> Vec<Vec<i64>> {
    let k = k as i64;
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-k..=k).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn euclid(k: &[i64]) -> f64 {
    (k.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt()
}

/// Torus corpus with frequencies in [−K, K]^n.
pub fn torus_corpus(spec: &CorpusSpec, n: u32, bandwidth: usize) -> Result<Vec<Item<TorusPoly>>> {
    match spec {
        CorpusSpec::Deterministic => Ok(torus_deterministic(n, bandwidth)),
        CorpusSpec::Random { size, seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let freqs = cube(n, bandwidth);
            Ok((0..*size)
                .map(|i| {
                    let decay = spec.decay_for(i);
                    let coeffs = freqs
                        .iter()
                        .map(|k| (k.clone(), gaussian(&mut rng) * (1.0 + euclid(k)).powf(-decay)))
                        .collect();
                    Item { name: format!("random-{i}-decay{decay}"), value: TorusPoly { n, coeffs } }
                })
                .collect())
        }
        CorpusSpec::File(path) => torus_corpus_json(&std::fs::read_to_string(path)?, n),
    }
}

fn torus_deterministic(n: u32, bandwidth: usize) -> Vec<Item<TorusPoly>> {
    let k = bandwidth as i64;
    let axis = |m: i64| {
        let mut v = vec![0; n as usize];
        v[0] = m;
        v
    };
    let mut items = vec![Item {
        name: "constant".into(),
        value: TorusPoly { n, coeffs: vec![(vec![0; n as usize], Complex64::ONE)] },
    }];
    for m in [1, k].into_iter().filter(|&m| m >= 1).collect::<std::collections::BTreeSet<_>>() {
        items.push(Item {
            name: format!("exponential-{m}"),
            value: TorusPoly { n, coeffs: vec![(axis(m), Complex64::ONE)] },
        });
    }
    let mut big = 1;
    while big <= k {
        let pts = cube(n, big as usize);
        items.push(Item {
            name: format!("dirichlet-{big}"),
            value: TorusPoly { n, coeffs: pts.iter().map(|p| (p.clone(), Complex64::ONE)).collect() },
        });
        items.push(Item {
            name: format!("fejer-{big}"),
            value: TorusPoly {
                n,
                coeffs: pts
                    .iter()
                    .map(|p| {
                        let w: f64 = p.iter().map(|x| 1.0 - x.abs() as f64 / (big + 1) as f64).product();
                        (p.clone(), Complex64::new(w, 0.0))
                    })
                    .collect(),
            },
        });
        big *= 2;
    }
    items
}

#[derive(Deserialize)]
struct JsonItem<T> {
    #[serde(default)]
    name: Option<String>,
    coeffs: T,
}

/// A JSON array of `{"name": ..., "coeffs": {"k1,k2": [re, im], ...}}`.
pub fn torus_corpus_json(json: &str, n: u32) -> Result<Vec<Item<TorusPoly>>> {
    let raw: Vec<JsonItem<BTreeMap<String, [f64; 2]>>> = serde_json::from_str(json)?;
    raw.into_iter()
        .enumerate()
        .map(|(i, it)| {
            let mut coeffs = Vec::with_capacity(it.coeffs.len());
            for (key, [re, im]) in it.coeffs {
                let k = key
                    .trim_matches(|c| c == '(' || c == ')')
                    .split(',')
                    .map(|s| s.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| NetspaceError::Parse(format!("bad frequency key {key:?}")))?;
                if k.len() != n as usize {
                    return Err(NetspaceError::Shape(format!("frequency {key:?} is not in Z^{n}")));
                }
                coeffs.push((k, Complex64::new(re, im)));
            }
            Ok(Item { name: it.name.unwrap_or_else(|| format!("file-{i}")), value: TorusPoly { n, coeffs } })
        })
        .collect()
}

/// SU(2) class-function corpus up to `l_max`.
pub fn su2_corpus(spec: &CorpusSpec, l_max: Spin) -> Result<Vec<Item<SU2ClassFunction>>> {
    match spec {
        CorpusSpec::Deterministic => Ok(su2_deterministic(l_max)),
        CorpusSpec::Random { size, seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..*size)
                .map(|i| {
                    let decay = spec.decay_for(i);
                    let coeffs =
                        (0..=l_max.twice()).map(|t| gaussian(&mut rng) * f64::from(t + 1).powf(-decay)).collect();
                    Item {
                        name: format!("random-{i}-decay{decay}"),
                        value: SU2ClassFunction::new(coeffs).expect("l_max >= 0 gives one coefficient"),
                    }
                })
                .collect())
        }
        CorpusSpec::File(path) => su2_corpus_json(&std::fs::read_to_string(path)?),
    }
}

fn su2_deterministic(l_max: Spin) -> Vec<Item<SU2ClassFunction>> {
    let top = l_max.twice();
    let mut twice: Vec<u32> = vec![0, 1, 2, top];
    twice.retain(|&t| t <= top);
    twice.sort_unstable();
    twice.dedup();
    let mut items: Vec<Item<SU2ClassFunction>> = twice
        .into_iter()
        .map(|t| {
            let l = Spin::from_twice(t);
            Item { name: format!("character-{l}"), value: SU2ClassFunction::character(l) }
        })
        .collect();
    let mut k = 1;
    while k <= top {
        let spins: Vec<Spin> = (0..=k).map(Spin::from_twice).collect();
        items.push(Item {
            name: format!("dirichlet-{}", Spin::from_twice(k)),
            value: SU2ClassFunction::dirichlet(&spins).expect("nonempty"),
        });
        let fejer = (0..=k)
            .map(|t| Complex64::new(f64::from(t + 1) * (1.0 - f64::from(t) / f64::from(k + 1)), 0.0))
            .collect();
        items.push(Item {
            name: format!("fejer-{}", Spin::from_twice(k)),
            value: SU2ClassFunction::new(fejer).expect("nonempty"),
        });
        k *= 2;
    }
    items
}

/// A JSON array of `{"name": ..., "coeffs": {"2l": [re, im], ...}}`.
pub fn su2_corpus_json(json: &str) -> Result<Vec<Item<SU2ClassFunction>>> {
    let raw: Vec<JsonItem<serde_json::Value>> = serde_json::from_str(json)?;
    raw.into_iter()
        .enumerate()
        .map(|(i, it)| {
            Ok(Item {
                name: it.name.unwrap_or_else(|| format!("file-{i}")),
                value: SU2ClassFunction::from_json_str(&it.coeffs.to_string())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        assert_eq!("deterministic".parse::<CorpusSpec>().unwrap(), CorpusSpec::Deterministic);
        assert_eq!(
            "random:50:seed=7".parse::<CorpusSpec>().unwrap(),
            CorpusSpec::Random { size: 50, seed: 7, decay: None }
        );
        assert_eq!(
            "random:3:decay=1.5".parse::<CorpusSpec>().unwrap(),
            CorpusSpec::Random { size: 3, seed: 0, decay: Some(1.5) }
        );
        assert_eq!("file:a/b.json".parse::<CorpusSpec>().unwrap(), CorpusSpec::File("a/b.json".into()));
        for bad in ["random", "random:x", "random:5:sed=1", "other"] {
            assert!(bad.parse::<CorpusSpec>().is_err(), "{bad}");
        }
        let s = CorpusSpec::Random { size: 5, seed: 2, decay: None };
        assert_eq!(s.to_string().parse::<CorpusSpec>().unwrap(), s);
    }

    #[test]
    fn random_corpora_are_reproducible() {
        let spec: CorpusSpec = "random:6:seed=3".parse().unwrap();
        let a = torus_corpus(&spec, 1, 4).unwrap();
        assert_eq!(a, torus_corpus(&spec, 1, 4).unwrap());
        assert_eq!(a.len(), 6);
        assert_eq!(a[0].value.coeffs.len(), 9);
        assert!(a[2].name.ends_with("decay2"));
        let b = su2_corpus(&spec, Spin::from_twice(5)).unwrap();
        assert_eq!(b, su2_corpus(&spec, Spin::from_twice(5)).unwrap());
        assert_eq!(b[0].value.coeffs().len(), 6);
    }

    #[test]
    fn deterministic_corpora() {
        let t = torus_corpus(&CorpusSpec::Deterministic, 1, 8).unwrap();
        let names: Vec<&str> = t.iter().map(|i| i.name.as_str()).collect();
        assert!(names.contains(&"constant") && names.contains(&"exponential-8"));
        assert!(names.contains(&"dirichlet-8") && names.contains(&"fejer-4"));
        assert!(t.iter().all(|i| i.value.bandwidth() <= 8));
        let s = su2_corpus(&CorpusSpec::Deterministic, Spin::from_twice(4)).unwrap();
        assert_eq!(s[0].name, "character-0");
        assert!(s.iter().all(|i| i.value.l_max().twice() <= 4));
    }

    #[test]
    fn json_corpora() {
        let t = torus_corpus_json(r#"[{"name": "a", "coeffs": {"1": [1, 0], "-2": [0, 1]}}, {"coeffs": {}}]"#, 1)
            .unwrap();
        assert_eq!(t[0].name, "a");
        assert_eq!(t[1].name, "file-1");
        assert_eq!(t[0].value.bandwidth(), 2);
        assert!(torus_corpus_json(r#"[{"coeffs": {"1,2": [1, 0]}}]"#, 1).is_err());
        let s = su2_corpus_json(r#"[{"coeffs": {"0": [1, 0], "2": [0.5, 0]}}]"#).unwrap();
        assert_eq!(s[0].value.l_max(), Spin::from_twice(2));
    }
}
