//! Input model: branch-point depth data, field invariants, Galois data.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::depth::RationalDepth;
use crate::error::{Error, Result};

/// Depth data of the branch locus together with the field invariants.
///
/// The depth function is a symmetric matrix over the labels; the diagonal is
/// never read. Ultrametricity (the minimum of the three pairwise depths of
/// any triple is attained at least twice) is what makes the threshold balls
/// nested, and is checked by [`BranchDatum::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDatum {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    depth: Vec<Vec<RationalDepth>>,
    pub v_phi: i64,
    pub field_degree_e: u32,
    pub ram_index: u32,
    pub residue_char: u32,
    pub genus_y: u32,
}

impl BranchDatum {
    /// Builds the datum from explicit pairwise entries; pairs not listed
    /// default to depth zero. Entries for the same unordered pair must agree.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        labels: Vec<String>,
        entries: &[(String, String, RationalDepth)],
        v_phi: i64,
        field_degree_e: u32,
        ram_index: u32,
        residue_char: u32,
        genus_y: u32,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if field_degree_e == 0 {
            return Err(Error::InvalidInput("e must be positive".into()));
        }
        if ram_index == 0 {
            return Err(Error::InvalidInput("ram_index must be positive".into()));
        }
        if field_degree_e % ram_index != 0 {
            return Err(Error::InvalidInput(format!(
                "ram_index {ram_index} must divide e = {field_degree_e}"
            )));
        }
        if !is_odd_prime(residue_char as u64) {
            return Err(Error::NotOddPrime(residue_char as u64));
        }
        let n = labels.len();
        let mut depth = vec![vec![RationalDepth::zero(); n]; n];
        let mut seen: BTreeMap<(usize, usize), RationalDepth> = BTreeMap::new();
        for (a, b, d) in entries {
            let i = *index.get(a).ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownLabel(b.clone()))?;
            if i == j {
                return Err(Error::InvalidInput(format!(
                    "depth entry for ({a}, {a}) is meaningless"
                )));
            }
            let key = (i.min(j), i.max(j));
            match seen.get(&key) {
                Some(prev) if prev != d => {
                    // A pair listed twice with different values is either a
                    // conflicting duplicate or a symmetry violation.
                    return Err(Error::AsymmetricDepth(a.clone(), b.clone()));
                }
                Some(_) => {}
                None => {
                    seen.insert(key, *d);
                }
            }
            depth[i][j] = *d;
            depth[j][i] = *d;
        }
        Ok(BranchDatum {
            labels,
            index,
            depth,
            v_phi,
            field_degree_e,
            ram_index,
            residue_char,
            genus_y,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn depth_ij(&self, i: usize, j: usize) -> RationalDepth {
        self.depth[i][j]
    }

    pub fn depth_between(&self, a: &str, b: &str) -> Result<RationalDepth> {
        Ok(self.depth_ij(self.label_index(a)?, self.label_index(b)?))
    }

    pub fn depth_matrix(&self) -> &Vec<Vec<RationalDepth>> {
        &self.depth
    }

    /// Lists every violated invariant; empty means the datum is valid input
    /// for the cluster engine.
    pub fn validate(&self) -> Vec<BranchViolation> {
        let mut out = Vec::new();
        let n = self.len();
        if n < 2 || n % 2 != 0 {
            out.push(BranchViolation::OddBranchLocus(n));
        }
        let e = self.field_degree_e as i64;
        for i in 0..n {
            for j in (i + 1)..n {
                if e % self.depth[i][j].denom() != 0 {
                    out.push(BranchViolation::DenominatorNotDividingE {
                        a: self.labels[i].clone(),
                        b: self.labels[j].clone(),
                        denom: self.depth[i][j].denom(),
                        e: self.field_degree_e,
                    });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (x, y, z) = (self.depth[i][j], self.depth[j][k], self.depth[i][k]);
                    let min = x.min(y).min(z);
                    let hits = [x, y, z].iter().filter(|d| **d == min).count();
                    if hits < 2 {
                        out.push(BranchViolation::UltrametricViolation(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            self.labels[k].clone(),
                        ));
                    }
                }
            }
        }
        out
    }
}

/// A violated [`BranchDatum`] invariant, naming the offending pair or triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchViolation {
    /// The branch locus of a degree-two cover has even size at least two.
    OddBranchLocus(usize),
    DenominatorNotDividingE {
        a: String,
        b: String,
        denom: i64,
        e: u32,
    },
    UltrametricViolation(String, String, String),
}

impl fmt::Display for BranchViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchViolation::OddBranchLocus(n) => {
                write!(f, "branch locus must have even size >= 2, got {n}")
            }
            BranchViolation::DenominatorNotDividingE { a, b, denom, e } => {
                write!(f, "depth({a}, {b}) has denominator {denom} not dividing e = {e}")
            }
            BranchViolation::UltrametricViolation(a, b, c) => {
                write!(f, "ultrametric law fails on triple ({a}, {b}, {c})")
            }
        }
    }
}

/// A point of the branch locus presented on the projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalPoint {
    Finite(Ratio<i64>),
    Infinity,
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Finite(r) => write!(f, "{r}"),
            RationalPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// p-adic valuation of a nonzero rational.
fn valuation(r: Ratio<i64>, p: i64) -> i64 {
    let mut v = 0i64;
    let mut n = r.numer().abs();
    debug_assert!(n != 0);
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    let mut d = *r.denom();
    while d % p == 0 {
        d /= p;
        v -= 1;
    }
    v
}

/// Pairwise depth matrix of a point list: depth(r, r') = v_p(r - r') for
/// finite points, clamped below at zero, and zero against the point at
/// infinity. Clamped entries are reported as warnings, not errors.
pub fn depths_from_rational_points(
    points: &[RationalPoint],
    p: u64,
) -> Result<(Vec<Vec<RationalDepth>>, Vec<String>)> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let mut inf_seen = false;
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            if a == b {
                return Err(Error::DuplicatePoint(a.to_string()));
            }
        }
        if *a == RationalPoint::Infinity {
            if inf_seen {
                return Err(Error::DuplicatePoint("inf".to_string()));
            }
            inf_seen = true;
        }
    }
    let n = points.len();
    let mut out = vec![vec![RationalDepth::zero(); n]; n];
    let mut warnings = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = match (points[i], points[j]) {
                (RationalPoint::Finite(a), RationalPoint::Finite(b)) => {
                    let diff = a - b;
                    debug_assert!(!diff.is_zero());
                    let v = valuation(diff, p as i64);
                    if v < 0 {
                        warnings.push(format!(
                            "v_{p}({a} - {b}) = {v} < 0; clamped to 0 (points are not integral)"
                        ));
                        0
                    } else {
                        v
                    }
                }
                _ => 0,
            };
            let d = RationalDepth::from_integer(d)?;
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok((out, warnings))
}

/// Convenience wrapper: label the points and assemble a full [`BranchDatum`].
#[allow(clippy::too_many_arguments)]
pub fn branch_from_rational_points(
    labels: Vec<String>,
    points: &[RationalPoint],
    p: u32,
    v_phi: i64,
    field_degree_e: u32,
    ram_index: u32,
    genus_y: u32,
) -> Result<(BranchDatum, Vec<String>)> {
    if labels.len() != points.len() {
        return Err(Error::InvalidInput(format!(
            "{} labels for {} points",
            labels.len(),
            points.len()
        )));
    }
    let (matrix, warnings) = depths_from_rational_points(points, p as u64)?;
    let mut entries = Vec::new();
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            if !matrix[i][j].is_zero() {
                entries.push((labels[i].clone(), labels[j].clone(), matrix[i][j]));
            }
        }
    }
    let b = BranchDatum::new(labels, &entries, v_phi, field_degree_e, ram_index, p, genus_y)?;
    Ok((b, warnings))
}

pub(crate) fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Permutation of the branch labels, stored by label position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Entries missing from the map are fixed points.
    pub fn from_map(labels: &[String], map: &BTreeMap<String, String>) -> Result<Self> {
        let index: BTreeMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut images: Vec<usize> = (0..labels.len()).collect();
        for (from, to) in map {
            let i = *index
                .get(from.as_str())
                .ok_or_else(|| Error::UnknownLabel(from.clone()))?;
            let j = *index
                .get(to.as_str())
                .ok_or_else(|| Error::UnknownLabel(to.clone()))?;
            images[i] = j;
        }
        let mut seen = vec![false; labels.len()];
        for &im in &images {
            if seen[im] {
                return Err(Error::InvalidPermutation(format!(
                    "label `{}` has two preimages",
                    labels[im]
                )));
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds the permutation sending `labels[i]` to `images[i]`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &im in &images {
            if im >= images.len() || seen[im] {
                return Err(Error::InvalidPermutation("not a bijection".into()));
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Map form over the given labels, listing non-fixed points only.
    pub fn to_map(&self, labels: &[String]) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (i, &j) in self.images.iter().enumerate() {
            if i != j {
                out.insert(labels[i].clone(), labels[j].clone());
            }
        }
        out
    }
}

/// Galois-side input: the Frobenius permutation of the branch labels, the
/// component signs for even clusters, and inertia generators.
///
/// `eps` maps canonical cluster identifiers (the lexicographically sorted
/// member list joined by commas) to +1/-1. `None` means the split choice:
/// every sign is taken to be +1. An explicit map is validated strictly: it
/// must be defined exactly on the even clusters of the picture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisDatum {
    pub frobenius: Permutation,
    pub eps: Option<BTreeMap<String, i8>>,
    pub inertia: Vec<Permutation>,
}

impl GaloisDatum {
    pub fn trivial(n: usize) -> Self {
        GaloisDatum {
            frobenius: Permutation::identity(n),
            eps: None,
            inertia: Vec::new(),
        }
    }
}

/// Full input for one cover: depth data plus Galois data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    pub branch: BranchDatum,
    pub galois: GaloisDatum,
}

impl CoverSpec {
    pub fn new(branch: BranchDatum, galois: GaloisDatum) -> Result<Self> {
        let n = branch.len();
        if galois.frobenius.len() != n {
            return Err(Error::InvalidPermutation(
                "frobenius is not defined on the label set".into(),
            ));
        }
        for pi in &galois.inertia {
            if pi.len() != n {
                return Err(Error::InvalidPermutation(
                    "inertia element is not defined on the label set".into(),
                ));
            }
        }
        if let Some(eps) = &galois.eps {
            for (k, v) in eps {
                if *v != 1 && *v != -1 {
                    return Err(Error::BadEpsValue(k.clone()));
                }
            }
        }
        Ok(CoverSpec { branch, galois })
    }

    pub fn with_trivial_galois(branch: BranchDatum) -> Self {
        let n = branch.len();
        CoverSpec {
            branch,
            galois: GaloisDatum::trivial(n),
        }
    }
}
