//! Collections M of finite subsets of a lattice, enumerated with a floor on
//! the subset measure.
//!
//! Enumeration order is deterministic and follows each kind's canonical
//! encoding: bitmask order for all subsets, `(start, step, length)` for
//! progressions, cutoff order for segments, sorted id lists for explicit
//! families.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{NetspaceError, Result};
use crate::lattice::{Lattice, LatticeKind, Site};

/// Largest lattice on which all 2^N − 1 subsets are enumerated.
pub const EXACT_SUBSET_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    AllSubsets,
    ArithmeticProgressions,
    Segments,
    ExplicitList,
}

/// Measure assigned to an initial λ-segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentMeasure {
    /// ν_Γ of the segment (Σ δκ).
    #[default]
    Lattice,
    /// λ of the segment's largest element. On SU(2) with λ_l = (2l+1)³ this
    /// is the (2k+1)³ normalization of the explicit converse formula.
    TopLambda,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_cardinality: Option<usize>,
    pub max_count: Option<usize>,
}

/// One family member with its measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    /// Sorted, duplicate-free element ids.
    pub ids: Vec<usize>,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Spec {
    AllSubsets,
    Progressions { directions: Option<Vec<Vec<i64>>> },
    Segments { measure: SegmentMeasure },
    Explicit { sets: Vec<Vec<usize>> },
}

#[derive(Debug, Clone)]
pub struct SubsetFamily {
    lattice: Arc<Lattice>,
    spec: Spec,
    caps: Caps,
}

impl SubsetFamily {
    /// M₁: every nonempty subset of the truncation.
    pub fn all_subsets(lattice: Arc<Lattice>) -> Self {
        SubsetFamily { lattice, spec: Spec::AllSubsets, caps: Caps::default() }
    }

    /// Finite arithmetic progressions {a + kv : 0 ≤ k < L} inside an integer
    /// lattice, over every direction v whose first nonzero coordinate is positive.
    pub fn progressions(lattice: Arc<Lattice>) -> Result<Self> {
        require_integer(&lattice)?;
        Ok(SubsetFamily {
            lattice,
            spec: Spec::Progressions { directions: None },
            caps: Caps::default(),
        })
    }

    /// Progressions restricted to the given step vectors (singletons are always members).
    pub fn progressions_along(lattice: Arc<Lattice>, directions: Vec<Vec<i64>>) -> Result<Self> {
        require_integer(&lattice)?;
        let n = lattice.dimension() as usize;
        let mut dirs = Vec::with_capacity(directions.len());
        for v in directions {
            if v.len() != n || !lex_positive(&v) {
                return Err(NetspaceError::domain(format!(
                    "direction {v:?} must have {n} coordinates with first nonzero positive"
                )));
            }
            dirs.push(v);
        }
        dirs.sort();
        dirs.dedup();
        Ok(SubsetFamily {
            lattice,
            spec: Spec::Progressions { directions: Some(dirs) },
            caps: Caps::default(),
        })
    }

    /// Initial λ-segments {θ : λ_θ ≤ c}, one per distinct λ.
    pub fn segments(lattice: Arc<Lattice>) -> Self {
        Self::segments_with_measure(lattice, SegmentMeasure::Lattice)
    }

    pub fn segments_with_measure(lattice: Arc<Lattice>, measure: SegmentMeasure) -> Self {
        SubsetFamily { lattice, spec: Spec::Segments { measure }, caps: Caps::default() }
    }

    /// An explicit list of subsets given by element ids.
    pub fn explicit(lattice: Arc<Lattice>, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut canonical = Vec::with_capacity(sets.len());
        let mut seen = HashSet::new();
        for set in sets {
            let set = canonicalize(&lattice, &set)?;
            if set.is_empty() {
                return Err(NetspaceError::domain("explicit family contains an empty subset"));
            }
            if seen.insert(set.clone()) {
                canonical.push(set);
            }
        }
        canonical.sort();
        Ok(SubsetFamily { lattice, spec: Spec::Explicit { sets: canonical }, caps: Caps::default() })
    }

    /// Explicit family from a JSON array of arrays of element labels.
    pub fn explicit_from_json_str(lattice: Arc<Lattice>, json: &str) -> Result<Self> {
        let raw: Vec<Vec<String>> = serde_json::from_str(json)?;
        let sets = raw
            .iter()
            .map(|labels| {
                labels
                    .iter()
                    .map(|l| {
                        lattice.id_of_label(l).ok_or_else(|| {
                            NetspaceError::domain(format!("unknown element label {l:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::explicit(lattice, sets)
    }

    pub fn explicit_from_json_file(lattice: Arc<Lattice>, path: impl AsRef<Path>) -> Result<Self> {
        Self::explicit_from_json_str(lattice, &std::fs::read_to_string(path)?)
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn kind(&self) -> FamilyKind {
        match self.spec {
            Spec::AllSubsets => FamilyKind::AllSubsets,
            Spec::Progressions { .. } => FamilyKind::ArithmeticProgressions,
            Spec::Segments { .. } => FamilyKind::Segments,
            Spec::Explicit { .. } => FamilyKind::ExplicitList,
        }
    }

    /// Human-readable descriptor used in reports.
    pub fn describe(&self) -> String {
        match &self.spec {
            Spec::AllSubsets => "all-subsets".into(),
            Spec::Progressions { directions: None } => "arithmetic-progressions".into(),
            Spec::Progressions { directions: Some(d) } => {
                format!("arithmetic-progressions(directions={d:?})")
            }
            Spec::Segments { measure: SegmentMeasure::Lattice } => "segments".into(),
            Spec::Segments { measure: SegmentMeasure::TopLambda } => {
                "segments(top-lambda-measure)".into()
            }
            Spec::Explicit { sets } => format!("explicit-list({})", sets.len()),
        }
    }

    /// Measure the family assigns to a member.
    pub fn measure(&self, ids: &[usize]) -> Result<f64> {
        match self.spec {
            Spec::Segments { measure: SegmentMeasure::TopLambda } => {
                let top = ids
                    .iter()
                    .max()
                    .ok_or_else(|| NetspaceError::domain("empty subset has no top element"))?;
                Ok(self.lattice.element(*top)?.lambda)
            }
            _ => self.lattice.nu(ids),
        }
    }

    /// Members Q with measure ≥ `min_nu`, within the caps, in canonical order.
    pub fn enumerate_with_capacity(&self, min_nu: f64) -> Result<Members<'_>> {
        if !(min_nu >= 0.0) {
            return Err(NetspaceError::domain(format!("min_nu must be >= 0, got {min_nu}")));
        }
        let inner = match &self.spec {
            Spec::AllSubsets => {
                let n = self.lattice.len();
                if n > EXACT_SUBSET_CAP {
                    return Err(NetspaceError::ExactCapExceeded { len: n, cap: EXACT_SUBSET_CAP });
                }
                Inner::Masks { next: 1, end: 1u64 << n }
            }
            Spec::Progressions { directions } => {
                Inner::List(self.progression_members(directions.as_deref())?.into_iter())
            }
            Spec::Segments { .. } => Inner::List(self.segment_members()?.into_iter()),
            Spec::Explicit { sets } => Inner::List(
                sets.iter()
                    .map(|s| Ok(Member { ids: s.clone(), nu: self.measure(s)? }))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter(),
            ),
        };
        Ok(Members { family: self, min_nu, inner, emitted: 0 })
    }

    /// Structural membership test.
    pub fn contains(&self, ids: &[usize]) -> bool {
        let Ok(set) = canonicalize(&self.lattice, ids) else {
            return false;
        };
        if set.is_empty() || set.len() != ids.len() {
            return false;
        }
        if let Some(cap) = self.caps.max_cardinality {
            if set.len() > cap {
                return false;
            }
        }
        match &self.spec {
            Spec::AllSubsets => true,
            Spec::Segments { .. } => {
                let top = self.lattice.elements()[*set.last().unwrap()].lambda;
                let end = self.lattice.elements().partition_point(|e| e.lambda <= top);
                set.len() == end && set.iter().enumerate().all(|(i, &id)| i == id)
            }
            Spec::Explicit { sets } => sets.binary_search(&set).is_ok(),
            Spec::Progressions { directions } => {
                let mut points: Vec<&Vec<i64>> = set
                    .iter()
                    .map(|&id| match &self.lattice.elements()[id].site {
                        Site::Integer(m) => m,
                        _ => unreachable!("progression families live on integer lattices"),
                    })
                    .collect();
                if points.len() == 1 {
                    return true;
                }
                points.sort();
                let step = sub(points[1], points[0]);
                if let Some(dirs) = directions {
                    if dirs.binary_search(&step).is_err() {
                        return false;
                    }
                }
                points.windows(2).all(|w| sub(w[1], w[0]) == step)
            }
        }
    }

    fn segment_members(&self) -> Result<Vec<Member>> {
        let els = self.lattice.elements();
        let mut out = Vec::new();
        let mut end = 0;
        while end < els.len() {
            let level = els[end].lambda;
            while end < els.len() && els[end].lambda == level {
                end += 1;
            }
            let ids: Vec<usize> = (0..end).collect();
            let nu = self.measure(&ids)?;
            out.push(Member { ids, nu });
        }
        Ok(out)
    }

    fn progression_members(&self, directions: Option<&[Vec<i64>]>) -> Result<Vec<Member>> {
        let lat = &self.lattice;
        let n = lat.dimension() as usize;
        let mut starts: Vec<(&Vec<i64>, usize)> = lat
            .elements()
            .iter()
            .map(|e| match &e.site {
                Site::Integer(m) => (m, e.id),
                _ => unreachable!("progression families live on integer lattices"),
            })
            .collect();
        starts.sort();

        let dirs: Vec<Vec<i64>> = match directions {
            Some(d) => d.to_vec(),
            None => {
                // Every lex-positive difference of two lattice points.
                let (lo, hi) = bounding_box(starts.iter().map(|(m, _)| *m), n);
                let span: Vec<i64> = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
                let total: i64 = span.iter().map(|s| 2 * s + 1).product();
                let mut all: Vec<Vec<i64>> = (0..total)
                    .map(|mut idx| {
                        let mut v = vec![0i64; n];
                        for (slot, s) in v.iter_mut().zip(&span).rev() {
                            *slot = idx % (2 * s + 1) - s;
                            idx /= 2 * s + 1;
                        }
                        v
                    })
                    .filter(|v| lex_positive(v))
                    .collect();
                all.sort();
                all
            }
        };

        let mut out = Vec::new();
        for (a, a_id) in &starts {
            out.push(Member { ids: vec![*a_id], nu: lat.nu(&[*a_id])? });
            for v in &dirs {
                let mut ids = vec![*a_id];
                let mut p = (*a).clone();
                loop {
                    for (x, dx) in p.iter_mut().zip(v) {
                        *x += dx;
                    }
                    match lat.id_of_point(&p) {
                        Some(id) => ids.push(id),
                        None => break,
                    }
                    let mut sorted = ids.clone();
                    sorted.sort_unstable();
                    let nu = lat.nu(&sorted)?;
                    out.push(Member { ids: sorted, nu });
                }
            }
        }
        Ok(out)
    }
}

/// Streaming enumeration returned by [`SubsetFamily::enumerate_with_capacity`].
pub struct Members<'a> {
    family: &'a SubsetFamily,
    min_nu: f64,
    inner: Inner,
    emitted: usize,
}

enum Inner {
    Masks { next: u64, end: u64 },
    List(std::vec::IntoIter<Member>),
}

impl Iterator for Members<'_> {
    type Item = Member;

    fn next(&mut self) -> Option<Member> {
        if let Some(max) = self.family.caps.max_count {
            if self.emitted >= max {
                return None;
            }
        }
        let max_card = self.family.caps.max_cardinality.unwrap_or(usize::MAX);
        let member = match &mut self.inner {
            Inner::Masks { next, end } => loop {
                if *next >= *end {
                    return None;
                }
                let mask = *next;
                *next += 1;
                if mask.count_ones() as usize > max_card {
                    continue;
                }
                let els = self.family.lattice.elements();
                let mut ids = Vec::with_capacity(mask.count_ones() as usize);
                let mut total = 0u64;
                let mut bits = mask;
                while bits != 0 {
                    let id = bits.trailing_zeros() as usize;
                    ids.push(id);
                    total += els[id].mass();
                    bits &= bits - 1;
                }
                let nu = total as f64;
                if nu >= self.min_nu {
                    break Member { ids, nu };
                }
            },
            Inner::List(it) => loop {
                let m = it.next()?;
                if m.ids.len() <= max_card && m.nu >= self.min_nu {
                    break m;
                }
            },
        };
        self.emitted += 1;
        Some(member)
    }
}

/// True iff every member of `a` is a member of `b`.
pub fn family_contains(a: &SubsetFamily, b: &SubsetFamily) -> Result<bool> {
    if !Arc::ptr_eq(&a.lattice, &b.lattice) && a.lattice != b.lattice {
        return Err(NetspaceError::domain("families live on different lattices"));
    }
    for m in a.enumerate_with_capacity(0.0)? {
        if !b.contains(&m.ids) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_integer(lattice: &Lattice) -> Result<()> {
    if lattice.kind() != LatticeKind::IntegerLattice {
        return Err(NetspaceError::domain(
            "arithmetic progressions require an integer lattice",
        ));
    }
    Ok(())
}

fn canonicalize(lattice: &Lattice, ids: &[usize]) -> Result<Vec<usize>> {
    let mut set = ids.to_vec();
    for &id in &set {
        lattice.element(id)?;
    }
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn bounding_box<'a>(points: impl Iterator<Item = &'a Vec<i64>>, n: usize) -> (Vec<i64>, Vec<i64>) {
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for p in points {
        for d in 0..n {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    (lo, hi)
}
