//! Finite truncations of weighted ordered lattices Γ.
//!
//! Every element π carries a weight λ_π and two multiplicities δ_π, κ_π
//! (column and row counts of the coefficient matrix at π). Elements are kept
//! sorted by λ, so the element order realizes the partial order on Γ and
//! element 0 is the minimal element. The measure of a subset is
//! ν_Γ(Q) = Σ_{θ∈Q} δ_θ κ_θ.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NetspaceError, Result};
use crate::numeric::{median, CompensatedSum};

/// Half-integer spin `l ∈ ½ℕ₀`, stored as `2l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);

    pub fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    /// `2l`.
    pub fn twice(self) -> u32 {
        self.0
    }

    /// Dimension `2l + 1` of the representation t^l.
    pub fn dim(self) -> u32 {
        self.0 + 1
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Spin {
    type Err = NetspaceError;

    /// Accepts `"3/2"`, `"1.5"` or `"2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || NetspaceError::Parse(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(Spin(num)),
                "1" => Ok(Spin(2 * num)),
                _ => Err(bad()),
            }
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let twice = 2.0 * x;
            if x < 0.0 || twice.fract() != 0.0 || twice > f64::from(u32::MAX) {
                return Err(bad());
            }
            Ok(Spin(twice as u32))
        }
    }
}

/// Where an element lives, for frontends that need more than the weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Site {
    /// A frequency `m ∈ Z^n` (the character e^{2πi m·x} of T^n).
    Integer(Vec<i64>),
    /// The SU(2) representation t^l.
    Spin(Spin),
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeElement {
    pub id: usize,
    pub label: String,
    pub lambda: f64,
    pub delta: u32,
    pub kappa: u32,
    pub site: Site,
}

impl LatticeElement {
    /// Contribution δκ of this element to ν_Γ.
    pub fn mass(&self) -> u64 {
        u64::from(self.delta) * u64::from(self.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    IntegerLattice,
    Su2Dual,
    Generic,
}

/// How λ is assigned on Z^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaRule {
    /// λ = 1-based position in the |m|-sorted enumeration.
    #[default]
    Rank,
    /// λ = max(|m|, 1) with the Euclidean |m|.
    Euclidean,
}

impl FromStr for LambdaRule {
    type Err = NetspaceError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank" => Ok(LambdaRule::Rank),
            "euclidean" => Ok(LambdaRule::Euclidean),
            _ => Err(NetspaceError::Parse(format!(
                "unknown lambda rule {s:?} (expected rank or euclidean)"
            ))),
        }
    }
}

/// Unsorted element description used by [`Lattice::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSpec {
    pub label: String,
    pub lambda: f64,
    pub delta: u32,
    pub kappa: u32,
    pub site: Site,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lattice {
    elements: Vec<LatticeElement>,
    dimension_n: u32,
    kind: LatticeKind,
    #[serde(skip)]
    points: BTreeMap<Vec<i64>, usize>,
}

impl Lattice {
    /// Builds a lattice from element specs, stable-sorting them by λ.
    pub fn new(kind: LatticeKind, dimension_n: u32, specs: Vec<ElementSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(NetspaceError::domain("a lattice needs at least one element"));
        }
        for s in &specs {
            if !(s.lambda > 0.0) || !s.lambda.is_finite() {
                return Err(NetspaceError::domain(format!(
                    "element {:?}: lambda must be positive and finite, got {}",
                    s.label, s.lambda
                )));
            }
            if s.delta == 0 || s.kappa == 0 {
                return Err(NetspaceError::domain(format!(
                    "element {:?}: delta and kappa must be >= 1",
                    s.label
                )));
            }
        }
        let mut specs = specs;
        specs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        let elements: Vec<LatticeElement> = specs
            .into_iter()
            .enumerate()
            .map(|(id, s)| LatticeElement {
                id,
                label: s.label,
                lambda: s.lambda,
                delta: s.delta,
                kappa: s.kappa,
                site: s.site,
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        for e in &elements {
            if !seen.insert(e.label.as_str()) {
                return Err(NetspaceError::domain(format!("duplicate label {:?}", e.label)));
            }
        }
        let points = elements
            .iter()
            .filter_map(|e| match &e.site {
                Site::Integer(m) => Some((m.clone(), e.id)),
                _ => None,
            })
            .collect();
        Ok(Lattice { elements, dimension_n, kind, points })
    }

    /// The SU(2) dual truncated at `l_max`: l = 0, ½, …, l_max with
    /// δ = κ = 2l+1 and λ = (2l+1)³.
    pub fn su2_dual(l_max: Spin) -> Self {
        let specs = (0..=l_max.twice())
            .map(|twice| {
                let l = Spin::from_twice(twice);
                let d = l.dim();
                ElementSpec {
                    label: format!("l={l}"),
                    lambda: f64::from(d).powi(3),
                    delta: d,
                    kappa: d,
                    site: Site::Spin(l),
                }
            })
            .collect();
        Lattice::new(LatticeKind::Su2Dual, 3, specs).expect("su2 dual specs are valid")
    }

    /// All m ∈ Z^n with |m|_∞ ≤ radius, ordered by Euclidean |m| with
    /// lexicographic tie-breaking; δ = κ = 1.
    pub fn integer(n: u32, radius: u32, rule: LambdaRule) -> Result<Self> {
        if n == 0 {
            return Err(NetspaceError::domain("dimension must be >= 1"));
        }
        let side = 2 * u64::from(radius) + 1;
        let count = side
            .checked_pow(n)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| NetspaceError::domain("integer lattice too large"))?;
        let r = i64::from(radius);
        let mut points: Vec<Vec<i64>> = (0..count)
            .map(|mut idx| {
                let mut m = vec![0i64; n as usize];
                for slot in m.iter_mut().rev() {
                    *slot = (idx % side) as i64 - r;
                    idx /= side;
                }
                m
            })
            .collect();
        points.sort_by(|a, b| norm_sq(a).cmp(&norm_sq(b)).then_with(|| a.cmp(b)));
        let specs = points
            .into_iter()
            .enumerate()
            .map(|(pos, m)| {
                let lambda = match rule {
                    LambdaRule::Rank => (pos + 1) as f64,
                    LambdaRule::Euclidean => (norm_sq(&m) as f64).sqrt().max(1.0),
                };
                ElementSpec {
                    label: integer_label(&m),
                    lambda,
                    delta: 1,
                    kappa: 1,
                    site: Site::Integer(m),
                }
            })
            .collect();
        Lattice::new(LatticeKind::IntegerLattice, n, specs)
    }

    /// Loads a generic lattice from a JSON array of `{label, lambda, delta, kappa}`.
    pub fn from_json_str(json: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Record {
            label: String,
            lambda: f64,
            delta: i64,
            kappa: i64,
        }
        let records: Vec<Record> = serde_json::from_str(json)?;
        let specs = records
            .into_iter()
            .map(|r| {
                let to_mult = |v: i64, name: &str| {
                    u32::try_from(v).ok().filter(|&v| v >= 1).ok_or_else(|| {
                        NetspaceError::domain(format!(
                            "element {:?}: {name} must be a positive integer, got {v}",
                            r.label
                        ))
                    })
                };
                Ok(ElementSpec {
                    delta: to_mult(r.delta, "delta")?,
                    kappa: to_mult(r.kappa, "kappa")?,
                    label: r.label,
                    lambda: r.lambda,
                    site: Site::Generic,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Lattice::new(LatticeKind::Generic, 1, specs)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Keeps the first `n` elements in λ order.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(NetspaceError::domain(format!(
                "cannot truncate a {}-element lattice to {n}",
                self.len()
            )));
        }
        let specs = self.elements[..n]
            .iter()
            .map(|e| ElementSpec {
                label: e.label.clone(),
                lambda: e.lambda,
                delta: e.delta,
                kappa: e.kappa,
                site: e.site.clone(),
            })
            .collect();
        Lattice::new(self.kind, self.dimension_n, specs)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[LatticeElement] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> Result<&LatticeElement> {
        self.elements
            .get(id)
            .ok_or(NetspaceError::InvalidId { id, len: self.len() })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn dimension(&self) -> u32 {
        self.dimension_n
    }

    pub fn id_of_label(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.label == label)
    }

    /// Element id of the frequency `m` on an integer lattice.
    pub fn id_of_point(&self, m: &[i64]) -> Option<usize> {
        self.points.get(m).copied()
    }

    /// ν_Γ(Q) = Σ δ_θ κ_θ. The sum is carried out in integers and is exact.
    pub fn nu(&self, ids: &[usize]) -> Result<f64> {
        let mut total: u64 = 0;
        for &id in ids {
            total += self.element(id)?.mass();
        }
        Ok(total as f64)
    }

    pub fn total_nu(&self) -> f64 {
        self.elements.iter().map(LatticeElement::mass).sum::<u64>() as f64
    }

    /// Distinct λ values in increasing order.
    pub fn distinct_levels(&self) -> Vec<f64> {
        let mut levels: Vec<f64> = self.elements.iter().map(|e| e.lambda).collect();
        levels.dedup();
        levels
    }

    /// Checks that λ is nondecreasing along the element order.
    pub fn is_lambda_monotone(&self) -> bool {
        self.elements.windows(2).all(|w| w[0].lambda <= w[1].lambda)
    }
}

fn norm_sq(m: &[i64]) -> i64 {
    m.iter().map(|x| x * x).sum()
}

fn integer_label(m: &[i64]) -> String {
    if m.len() == 1 {
        format!("m={}", m[0])
    } else {
        let parts: Vec<String> = m.iter().map(i64::to_string).collect();
        format!("m=({})", parts.join(","))
    }
}

/// Which side of the Assumption-3 sums to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Σ_{λ_θ ≤ λ_π} λ_θ^β δκ, for β > −1.
    Below,
    /// Σ_{λ_θ ≥ λ_π} λ_θ^β δκ, for β < −1.
    Above,
}

impl Side {
    /// The side on which the growth relation is stated for a given β.
    pub fn for_beta(beta: f64) -> Result<Side> {
        if beta > -1.0 {
            Ok(Side::Below)
        } else if beta < -1.0 {
            Ok(Side::Above)
        } else {
            Err(NetspaceError::domain("beta = -1 is excluded"))
        }
    }
}

impl FromStr for Side {
    type Err = NetspaceError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "below" => Ok(Side::Below),
            "above" => Ok(Side::Above),
            _ => Err(NetspaceError::Parse(format!("unknown side {s:?}"))),
        }
    }
}

/// Min/max/median of a ratio over a window of ranks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl Band {
    fn of(values: &[f64]) -> Band {
        let mut v = values.to_vec();
        Band {
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            median: median(&mut v),
        }
    }

    /// max / min; the spread of the band.
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assumption3Report {
    pub beta: f64,
    pub side: Side,
    /// R(π) for every element, in element order.
    pub ratios: Vec<f64>,
    /// Half-open rank window `[start, end)` treated as the interior.
    pub window: (usize, usize),
    /// Band over the interior window.
    pub interior: Band,
    /// Band over the whole truncation, edge effects included.
    pub full: Band,
}

/// The interior half `[N/4, ⌈3N/4⌉)` of `n` ranks, never empty.
pub fn interior_window(n: usize) -> (usize, usize) {
    let start = n / 4;
    let end = (3 * n).div_ceil(4).max(start + 1).min(n);
    (start, end)
}

/// Evaluates R(π) = (Σ λ_θ^β δ_θ κ_θ) / λ_π^{β+1} with the sum taken over
/// λ_θ ≤ λ_π (`Below`) or λ_θ ≥ λ_π (`Above`), within the truncation.
pub fn check_assumption3(lat: &Lattice, beta: f64, side: Side) -> Result<Assumption3Report> {
    if beta == -1.0 || !beta.is_finite() {
        return Err(NetspaceError::domain("beta must be finite and != -1"));
    }
    match side {
        Side::Below if beta <= -1.0 => {
            return Err(NetspaceError::domain("side=below requires beta > -1"))
        }
        Side::Above if beta >= -1.0 => {
            return Err(NetspaceError::domain("side=above requires beta < -1"))
        }
        _ => {}
    }
    let els = lat.elements();
    let n = els.len();
    let terms: Vec<f64> = els
        .iter()
        .map(|e| e.lambda.powf(beta) * e.mass() as f64)
        .collect();

    // Sums are over closed λ-intervals, so ties with λ_π are always included.
    let mut sums = vec![0.0; n];
    match side {
        Side::Below => {
            let mut acc = CompensatedSum::new();
            let mut i = 0;
            while i < n {
                let mut j = i;
                while j < n && els[j].lambda == els[i].lambda {
                    acc.add(terms[j]);
                    j += 1;
                }
                sums[i..j].fill(acc.value());
                i = j;
            }
        }
        Side::Above => {
            let mut acc = CompensatedSum::new();
            let mut j = n;
            while j > 0 {
                let mut i = j;
                while i > 0 && els[i - 1].lambda == els[j - 1].lambda {
                    acc.add(terms[i - 1]);
                    i -= 1;
                }
                sums[i..j].fill(acc.value());
                j = i;
            }
        }
    }
    let ratios: Vec<f64> = els
        .iter()
        .zip(&sums)
        .map(|(e, s)| s / e.lambda.powf(beta + 1.0))
        .collect();
    let window = interior_window(n);
    Ok(Assumption3Report {
        beta,
        side,
        interior: Band::of(&ratios[window.0..window.1]),
        full: Band::of(&ratios),
        window,
        ratios,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    /// Number of eigenvalues counted with multiplicity.
    pub eigenvalue_count: u64,
    /// Range of m_k / k over all k.
    pub full: (f64, f64),
    /// Range of m_k / k over the interior half of k.
    pub interior: (f64, f64),
    /// Whether m_k is nondecreasing in k.
    pub monotone: bool,
}

/// Enumerates the eigenvalues m_k = λ_π, each with multiplicity δ_π κ_π, and
/// reports the band of m_k / k.
///
/// Within one block of equal eigenvalues m_k / k is decreasing in k, so each
/// block contributes its first and last index only.
pub fn weyl_count_check(lat: &Lattice) -> WeylReport {
    let total: u64 = lat.elements().iter().map(LatticeElement::mass).sum();
    let (lo_k, hi_k) = {
        let (s, e) = interior_window(total as usize);
        (s as u64 + 1, e as u64)
    };
    let mut full = (f64::INFINITY, f64::NEG_INFINITY);
    let mut interior = (f64::INFINITY, f64::NEG_INFINITY);
    let mut before = 0u64;
    for e in lat.elements() {
        let first = before + 1;
        let last = before + e.mass();
        full.0 = full.0.min(e.lambda / last as f64);
        full.1 = full.1.max(e.lambda / first as f64);
        let a = first.max(lo_k);
        let b = last.min(hi_k);
        if a <= b {
            interior.0 = interior.0.min(e.lambda / b as f64);
            interior.1 = interior.1.max(e.lambda / a as f64);
        }
        before = last;
    }
    WeylReport {
        eigenvalue_count: total,
        full,
        interior,
        monotone: lat.is_lambda_monotone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(lat: &Lattice, labels: &[&str]) -> Vec<usize> {
        labels.iter().map(|l| lat.id_of_label(l).unwrap()).collect()
    }

    #[test]
    fn spin_parsing_and_display() {
        assert_eq!("3/2".parse::<Spin>().unwrap(), Spin::from_twice(3));
        assert_eq!("1.5".parse::<Spin>().unwrap(), Spin::from_twice(3));
        assert_eq!("2".parse::<Spin>().unwrap(), Spin::from_twice(4));
        assert!("1.25".parse::<Spin>().is_err());
        assert!("-1".parse::<Spin>().is_err());
        assert_eq!(Spin::from_twice(3).to_string(), "3/2");
        assert_eq!(Spin::from_twice(4).to_string(), "2");
    }

    #[test]
    fn nu_examples() {
        let z = Lattice::integer(1, 2, LambdaRule::Rank).unwrap();
        assert_eq!(z.nu(&[0, 1, 2, 3, 4]).unwrap(), 5.0);
        assert_eq!(z.nu(&[]).unwrap(), 0.0);
        let su2 = Lattice::su2_dual(Spin::from_twice(2));
        assert_eq!(su2.nu(&ids(&su2, &["l=0", "l=1/2", "l=1"])).unwrap(), 14.0);
    }

    #[test]
    fn nu_rejects_invalid_id() {
        let z = Lattice::integer(1, 1, LambdaRule::Rank).unwrap();
        let err = z.nu(&[0, 7]).unwrap_err();
        assert!(err.to_string().contains('7'), "{err}");
    }

    #[test]
    fn su2_dual_weights() {
        let lat = Lattice::su2_dual(Spin::from_twice(2));
        let w: Vec<(f64, u32, u32)> =
            lat.elements().iter().map(|e| (e.lambda, e.delta, e.kappa)).collect();
        assert_eq!(w, vec![(1.0, 1, 1), (8.0, 2, 2), (27.0, 3, 3)]);
        assert_eq!(Lattice::su2_dual(Spin::ZERO).len(), 1);
        assert_eq!(Lattice::su2_dual(Spin::from_twice(1)).total_nu(), 5.0);
        assert_eq!(lat.kind(), LatticeKind::Su2Dual);
    }

    #[test]
    fn integer_lattice_rank_rule() {
        let z = Lattice::integer(1, 2, LambdaRule::Rank).unwrap();
        let got: Vec<(String, f64)> =
            z.elements().iter().map(|e| (e.label.clone(), e.lambda)).collect();
        let want = [("m=0", 1.0), ("m=-1", 2.0), ("m=1", 3.0), ("m=-2", 4.0), ("m=2", 5.0)];
        assert_eq!(got.len(), want.len());
        for ((gl, gv), (wl, wv)) in got.iter().zip(want) {
            assert_eq!((gl.as_str(), *gv), (wl, wv));
        }
        assert_eq!(Lattice::integer(1, 0, LambdaRule::Rank).unwrap().len(), 1);
        let z2 = Lattice::integer(2, 1, LambdaRule::Rank).unwrap();
        assert_eq!(z2.len(), 9);
        assert_eq!(z2.total_nu(), 9.0);
        assert_eq!(z2.id_of_point(&[0, 0]), Some(0));
        assert_eq!(z2.elements()[1].label, "m=(-1,0)");
    }

    #[test]
    fn integer_lattice_euclidean_rule() {
        let z = Lattice::integer(1, 2, LambdaRule::Euclidean).unwrap();
        let lambdas: Vec<f64> = z.elements().iter().map(|e| e.lambda).collect();
        assert_eq!(lambdas, vec![1.0, 1.0, 1.0, 2.0, 2.0]);
        assert!(z.is_lambda_monotone());
        assert_eq!(z.distinct_levels(), vec![1.0, 2.0]);
    }

    #[test]
    fn json_loader_sorts_and_validates() {
        let lat = Lattice::from_json_str(
            r#"[{"label":"b","lambda":3,"delta":2,"kappa":1},
                {"label":"a","lambda":1,"delta":1,"kappa":1}]"#,
        )
        .unwrap();
        assert_eq!(lat.elements()[0].label, "a");
        assert_eq!(lat.elements()[1].id, 1);
        assert_eq!(lat.total_nu(), 3.0);
        for bad in [
            r#"[{"label":"a","lambda":0,"delta":1,"kappa":1}]"#,
            r#"[{"label":"a","lambda":1,"delta":0,"kappa":1}]"#,
            r#"[{"label":"a","lambda":1,"delta":1,"kappa":-2}]"#,
            r#"[]"#,
        ] {
            assert!(Lattice::from_json_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn assumption3_rank_rule_is_exact() {
        let z = Lattice::integer(1, 10, LambdaRule::Rank).unwrap();
        let r = check_assumption3(&z, 0.0, Side::Below).unwrap();
        assert!(r.ratios.iter().all(|&x| x == 1.0));
        assert_eq!((r.interior.min, r.interior.max), (1.0, 1.0));
    }

    #[test]
    fn assumption3_su2_below_matches_closed_form() {
        // Σ_{j≤J} j² = J(J+1)(2J+1)/6 with j = 2l+1 running over all of 1..J.
        let lat = Lattice::su2_dual(Spin::from_twice(200));
        let r = check_assumption3(&lat, 0.0, Side::Below).unwrap();
        for (e, ratio) in lat.elements().iter().zip(&r.ratios) {
            let j = f64::from(e.delta);
            let exact = j * (j + 1.0) * (2.0 * j + 1.0) / 6.0 / j.powi(3);
            assert!((ratio - exact).abs() < 1e-14, "{ratio} vs {exact}");
        }
        assert!(r.interior.min > 1.0 / 3.0 && r.interior.max < 0.35);
    }

    #[test]
    fn assumption3_rejects_bad_beta() {
        let lat = Lattice::su2_dual(Spin::from_twice(4));
        assert!(check_assumption3(&lat, -1.0, Side::Below).is_err());
        assert!(check_assumption3(&lat, -2.0, Side::Below).is_err());
        assert!(check_assumption3(&lat, 0.0, Side::Above).is_err());
        assert_eq!(Side::for_beta(-2.0).unwrap(), Side::Above);
        assert!(Side::for_beta(-1.0).is_err());
    }

    #[test]
    fn assumption3_above_includes_ties() {
        let z = Lattice::integer(1, 2, LambdaRule::Euclidean).unwrap();
        let r = check_assumption3(&z, -2.0, Side::Above).unwrap();
        // λ = 1,1,1,2,2: tail at λ=1 is 3·1 + 2·¼ = 3.5, divided by 1^{-1}.
        assert_eq!(r.ratios[0], 3.5);
        assert_eq!(r.ratios[2], 3.5);
        assert_eq!(r.ratios[3], 0.5 * 2.0);
    }

    #[test]
    fn weyl_trivial_and_monotone() {
        let r = weyl_count_check(&Lattice::su2_dual(Spin::ZERO));
        assert_eq!(r.eigenvalue_count, 1);
        assert_eq!(r.full, (1.0, 1.0));
        assert!(r.monotone);
    }

    #[test]
    fn weyl_band_matches_enumeration() {
        let lat = Lattice::su2_dual(Spin::from_twice(100));
        let r = weyl_count_check(&lat);
        let mut eigen = Vec::new();
        for e in lat.elements() {
            eigen.extend(std::iter::repeat_n(e.lambda, e.mass() as usize));
        }
        let quot: Vec<f64> = eigen.iter().enumerate().map(|(i, m)| m / (i + 1) as f64).collect();
        let lo = quot.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = quot.iter().copied().fold(0.0, f64::max);
        assert_eq!(r.full, (lo, hi));
        // The largest quotient is at the first eigenvalue of l=1: 27/6.
        assert_eq!(hi, 4.5);
        let (s, e) = interior_window(quot.len());
        let ilo = quot[s..e].iter().copied().fold(f64::INFINITY, f64::min);
        let ihi = quot[s..e].iter().copied().fold(0.0, f64::max);
        assert_eq!(r.interior, (ilo, ihi));
        assert!(eigen.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn truncate_keeps_prefix() {
        let z = Lattice::integer(1, 5, LambdaRule::Rank).unwrap();
        let t = z.truncate(10).unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t.elements()[9].label, "m=-5");
        assert_eq!(t.id_of_point(&[5]), None);
        assert!(z.truncate(0).is_err());
    }
}
