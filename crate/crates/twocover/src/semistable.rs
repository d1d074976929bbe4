//! Semi-stability verdict and reduction type of the cover.

use std::fmt;

use num_integer::Integer;

use crate::branch::{BranchDatum, GaloisDatum};
use crate::cluster::ClusterPicture;
use crate::error::{Error, Result};

/// A failed condition of the four-part semi-stability criterion. Cluster
/// conditions carry the canonical identifier of the offending cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationCode {
    VPhiOdd,
    RamIndexGt2,
    PrincipalNotInertiaInvariant(String),
    VSOdd(String),
    DSNonIntegral(String),
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationCode::VPhiOdd => write!(f, "V_PHI_ODD"),
            ViolationCode::RamIndexGt2 => write!(f, "RAM_INDEX_GT_2"),
            ViolationCode::PrincipalNotInertiaInvariant(s) => {
                write!(f, "PRINCIPAL_NOT_INERTIA_INVARIANT({s})")
            }
            ViolationCode::VSOdd(s) => write!(f, "V_S_ODD({s})"),
            ViolationCode::DSNonIntegral(s) => write!(f, "D_S_NON_INTEGRAL({s})"),
        }
    }
}

/// Outcome of the semi-stability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub semistable: bool,
    pub violations: Vec<ViolationCode>,
}

/// Checks the four conditions: v_phi even; ramification index at most 2;
/// every principal cluster fixed setwise by every inertia element; and for
/// every principal cluster, v_s an even integer and d_s an integer.
///
/// Errors when the base curve has genus zero: the criterion is proved under
/// positive genus and is false without it.
pub fn check_semistable(
    pic: &ClusterPicture,
    galois: &GaloisDatum,
    branch: &BranchDatum,
) -> Result<Verdict> {
    if branch.genus_y == 0 {
        return Err(Error::GenusZero);
    }
    let mut violations = Vec::new();
    if branch.v_phi.rem_euclid(2) != 0 {
        violations.push(ViolationCode::VPhiOdd);
    }
    if branch.ram_index > 2 {
        violations.push(ViolationCode::RamIndexGt2);
    }
    for id in pic.ids_canonical() {
        if !pic.classify(id).principal {
            continue;
        }
        let c = pic.cluster(id);
        for pi in &galois.inertia {
            let mut image: Vec<usize> = c.members.iter().map(|&m| pi.apply(m)).collect();
            image.sort_unstable();
            if image != c.members {
                violations.push(ViolationCode::PrincipalNotInertiaInvariant(
                    pic.canonical_id(id),
                ));
                break;
            }
        }
        let v = pic.v_of(id);
        if !(v.is_integer() && v.to_integer().is_even()) {
            violations.push(ViolationCode::VSOdd(pic.canonical_id(id)));
        }
        if !c.depth.is_integer() {
            violations.push(ViolationCode::DSNonIntegral(pic.canonical_id(id)));
        }
    }
    Ok(Verdict {
        semistable: violations.is_empty(),
        violations,
    })
}

/// Twin clusters of a semi-stable picture should have depth in (1/2)Z so
/// that the twin chains of the dual graph get integral length; anything
/// else is reported here as a warning rather than a violation.
pub fn twin_depth_warnings(pic: &ClusterPicture, verdict: &Verdict) -> Vec<String> {
    let mut out = Vec::new();
    if !verdict.semistable {
        return out;
    }
    for id in pic.ids_canonical() {
        if pic.classify(id).twin {
            let d = pic.cluster(id).depth;
            if d.denom() > 2 {
                out.push(format!(
                    "twin cluster {} has depth {} outside (1/2)Z",
                    pic.canonical_id(id),
                    d
                ));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    Good,
    Semistable,
    PotentiallyTameSemistable,
    PotentiallyTameGood,
    Wild,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ReductionKind::Good => "GOOD",
            ReductionKind::Semistable => "SEMISTABLE",
            ReductionKind::PotentiallyTameSemistable => "POTENTIALLY_TAME_SEMISTABLE",
            ReductionKind::PotentiallyTameGood => "POTENTIALLY_TAME_GOOD",
            ReductionKind::Wild => "WILD",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionType {
    pub kind: ReductionKind,
    pub note: Option<String>,
}

/// Classifies the reduction type from the verdict and picture shape; cases
/// are tried from most to least specific. A picture consisting of the
/// single depth-zero cluster always has potentially tame good reduction,
/// whether or not the cover is semi-stable as given; the verdict travels
/// alongside the kind in every report.
pub fn reduction_type(pic: &ClusterPicture, branch: &BranchDatum, verdict: &Verdict) -> ReductionType {
    let single_depth_zero = pic.len() == 1;
    let v_even = branch.v_phi.rem_euclid(2) == 0;
    if single_depth_zero {
        if branch.field_degree_e == 1 && v_even {
            return ReductionType {
                kind: ReductionKind::Good,
                note: None,
            };
        }
        let note = if !v_even {
            Some("good after a degree two extension".to_string())
        } else {
            None
        };
        return ReductionType {
            kind: ReductionKind::PotentiallyTameGood,
            note,
        };
    }
    if verdict.semistable {
        return ReductionType {
            kind: ReductionKind::Semistable,
            note: None,
        };
    }
    if (branch.field_degree_e as u64).gcd(&(branch.residue_char as u64)) == 1 {
        return ReductionType {
            kind: ReductionKind::PotentiallyTameSemistable,
            note: None,
        };
    }
    ReductionType {
        kind: ReductionKind::Wild,
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{BranchDatum, Permutation};
    use crate::cluster::build_cluster_picture;
    use crate::depth::RationalDepth;
    use std::collections::BTreeMap;

    fn rd(n: i64, d: i64) -> RationalDepth {
        RationalDepth::new(n, d).unwrap()
    }

    fn rn(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn cp_a_branch() -> BranchDatum {
        let e = |a: &str, b: &str, n: i64| (a.to_string(), b.to_string(), rd(n, 1));
        BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8"]),
            &[
                e("r1", "r5", 1),
                e("r1", "r6", 3),
                e("r1", "r7", 3),
                e("r5", "r6", 1),
                e("r5", "r7", 1),
                e("r6", "r7", 3),
                e("r2", "r3", 2),
                e("r2", "r4", 2),
                e("r3", "r4", 2),
            ],
            0,
            1,
            1,
            3,
            1,
        )
        .unwrap()
    }

    #[test]
    fn cp_a_is_semistable() {
        let b = cp_a_branch();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(8);
        let v = check_semistable(&pic, &g, &b).unwrap();
        assert!(v.semistable, "{:?}", v.violations);
    }

    #[test]
    fn odd_v_phi_is_flagged() {
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 1, 1, 1, 3, 1).unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(4);
        let v = check_semistable(&pic, &g, &b).unwrap();
        assert!(v.violations.contains(&ViolationCode::VPhiOdd));
        // v of the root equals v_phi, so the principal root is flagged too.
        assert!(v
            .violations
            .contains(&ViolationCode::VSOdd("r1,r2,r3,r4".into())));

        // On a twin-only picture the root is not principal and the odd
        // v_phi is the single violation.
        let b = BranchDatum::new(rn(&["r1", "r2"]), &[], 1, 1, 1, 3, 1).unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(2);
        let v = check_semistable(&pic, &g, &b).unwrap();
        assert_eq!(v.violations, vec![ViolationCode::VPhiOdd]);
    }

    #[test]
    fn moved_principal_cluster_is_flagged() {
        let b = cp_a_branch();
        let pic = build_cluster_picture(&b).unwrap();
        let mut map = BTreeMap::new();
        map.insert("r1".to_string(), "r2".to_string());
        map.insert("r2".to_string(), "r1".to_string());
        let swap = Permutation::from_map(b.labels(), &map).unwrap();
        let g = crate::branch::GaloisDatum {
            frobenius: Permutation::identity(8),
            eps: None,
            inertia: vec![swap],
        };
        let v = check_semistable(&pic, &g, &b).unwrap();
        assert!(!v.semistable);
        assert!(v.violations.iter().any(|c| matches!(
            c,
            ViolationCode::PrincipalNotInertiaInvariant(id) if id == "r1,r5,r6,r7"
        )));
    }

    #[test]
    fn genus_zero_is_an_error() {
        let b = BranchDatum::new(rn(&["r1", "r2"]), &[], 0, 1, 1, 3, 0).unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(2);
        assert!(matches!(
            check_semistable(&pic, &g, &b),
            Err(Error::GenusZero)
        ));
    }

    #[test]
    fn half_integer_twin_depth_is_allowed() {
        // Condition 4 applies to principal clusters only.
        let b = BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4", "r5", "r6"]),
            &[("r1".into(), "r2".into(), rd(3, 2))],
            0,
            2,
            2,
            3,
            1,
        )
        .unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(6);
        let v = check_semistable(&pic, &g, &b).unwrap();
        assert!(v.semistable, "{:?}", v.violations);
        assert!(twin_depth_warnings(&pic, &v).is_empty());
    }

    #[test]
    fn reduction_kinds() {
        // Single depth-zero cluster, e = 1, v_phi even: good reduction.
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 0, 1, 1, 3, 1).unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(4);
        let v = check_semistable(&pic, &g, &b).unwrap();
        let r = reduction_type(&pic, &b, &v);
        assert_eq!(r.kind, ReductionKind::Good);

        // Same picture with odd v_phi: good over a degree-two extension.
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 1, 1, 1, 3, 1).unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let v = check_semistable(&pic, &g, &b).unwrap();
        let r = reduction_type(&pic, &b, &v);
        assert_eq!(r.kind, ReductionKind::PotentiallyTameGood);
        assert_eq!(r.note.as_deref(), Some("good after a degree two extension"));

        // CP-A: semistable, and tame since gcd(1, 3) = 1.
        let b = cp_a_branch();
        let pic = build_cluster_picture(&b).unwrap();
        let g8 = crate::branch::GaloisDatum::trivial(8);
        let v = check_semistable(&pic, &g8, &b).unwrap();
        let r = reduction_type(&pic, &b, &v);
        assert_eq!(r.kind, ReductionKind::Semistable);

        // Non-semistable, proper clusters, e sharing the residue char: wild.
        let b = BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4"]),
            &[("r1".into(), "r2".into(), rd(1, 3))],
            1,
            3,
            3,
            3,
            1,
        )
        .unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(4);
        let v = check_semistable(&pic, &g, &b).unwrap();
        assert!(!v.semistable);
        let r = reduction_type(&pic, &b, &v);
        assert_eq!(r.kind, ReductionKind::Wild);

        // Same shape but residue char coprime to e: potentially tame.
        let b = BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4"]),
            &[("r1".into(), "r2".into(), rd(1, 3))],
            1,
            3,
            3,
            5,
            1,
        )
        .unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let v = check_semistable(&pic, &g, &b).unwrap();
        let r = reduction_type(&pic, &b, &v);
        assert_eq!(r.kind, ReductionKind::PotentiallyTameSemistable);
    }

    #[test]
    fn good_implies_semistable_conditions() {
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 0, 1, 1, 3, 1).unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(4);
        let v = check_semistable(&pic, &g, &b).unwrap();
        let r = reduction_type(&pic, &b, &v);
        if r.kind == ReductionKind::Good {
            assert!(v.semistable);
        }
    }

    #[test]
    fn single_cluster_pictures_stay_in_the_good_kinds() {
        // Even when the cover is semi-stable as given, a bare depth-zero
        // picture reports the potential-good kind; the verdict still says
        // semistable separately.
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 0, 2, 2, 5, 1).unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        let g = crate::branch::GaloisDatum::trivial(4);
        let v = check_semistable(&pic, &g, &b).unwrap();
        assert!(v.semistable);
        let r = reduction_type(&pic, &b, &v);
        assert_eq!(r.kind, ReductionKind::PotentiallyTameGood);
        assert!(r.note.is_none());
    }

    #[test]
    fn inertia_monotonicity() {
        // Adding inertia generators never removes invariance violations.
        let b = cp_a_branch();
        let pic = build_cluster_picture(&b).unwrap();
        let mut map = BTreeMap::new();
        map.insert("r1".to_string(), "r2".to_string());
        map.insert("r2".to_string(), "r1".to_string());
        let swap = Permutation::from_map(b.labels(), &map).unwrap();
        let small = crate::branch::GaloisDatum {
            frobenius: Permutation::identity(8),
            eps: None,
            inertia: vec![swap.clone()],
        };
        let big = crate::branch::GaloisDatum {
            frobenius: Permutation::identity(8),
            eps: None,
            inertia: vec![Permutation::identity(8), swap],
        };
        let vs = check_semistable(&pic, &small, &b).unwrap();
        let vb = check_semistable(&pic, &big, &b).unwrap();
        let inertia_violations = |v: &Verdict| {
            v.violations
                .iter()
                .filter(|c| matches!(c, ViolationCode::PrincipalNotInertiaInvariant(_)))
                .cloned()
                .collect::<Vec<_>>()
        };
        for c in inertia_violations(&vs) {
            assert!(inertia_violations(&vb).contains(&c));
        }
    }
}
