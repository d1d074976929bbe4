//! End-to-end pipeline: cover data to Tamagawa number and normalized
//! volume report, plus the rank-2 spectral-data convenience hook.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::branch::CoverSpec;
use crate::cluster::{build_cluster_picture, ClusterPicture};
use crate::error::{Error, Result};
use crate::graph::{
    build_dual_graph, frobenius_automorphism, lift_automorphism, subdivide, MetricGraph,
};
use crate::jacobian::{
    component_group, cycle_basis, fixed_point_count, fixed_point_count_algebraic, induced_action,
    spanning_tree_count,
};
use crate::semistable::{check_semistable, reduction_type, ReductionType, Verdict};

/// Knobs for the fixed-point computation.
#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    /// Largest component-group order handled by direct enumeration.
    pub max_enum: u64,
    /// Fall back to congruence solving above the bound.
    pub allow_algebraic: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_enum: 10_000_000,
            allow_algebraic: false,
        }
    }
}

/// Everything the pipeline produces on the way to the Tamagawa number.
#[derive(Clone, Debug)]
pub struct TamagawaDetail {
    pub verdict: Verdict,
    pub reduction: ReductionType,
    pub warnings: Vec<String>,
    pub picture: ClusterPicture,
    pub graph: MetricGraph,
    pub invariant_factors: Vec<BigInt>,
    pub group_order: BigInt,
    pub action_on_phi: crate::matrix::IntMatrix,
    pub tamagawa: u64,
    pub spanning_trees: BigInt,
}

/// Runs the whole pipeline: cluster picture, semi-stability check, dual
/// graph, Frobenius action, cycle lattice, component group, fixed points.
/// Errors with [`Error::NotSemistable`] when the verdict fails.
pub fn tamagawa_detailed(spec: &CoverSpec, options: &PipelineOptions) -> Result<TamagawaDetail> {
    let picture = build_cluster_picture(&spec.branch)?;
    let verdict = check_semistable(&picture, &spec.galois, &spec.branch)?;
    if !verdict.semistable {
        return Err(Error::NotSemistable(verdict.violations));
    }
    let reduction = reduction_type(&picture, &spec.branch, &verdict);
    let mut warnings = picture.warnings.clone();
    warnings.extend(crate::semistable::twin_depth_warnings(&picture, &verdict));
    let graph = build_dual_graph(&picture)?;
    let aut = frobenius_automorphism(&graph, &picture, &spec.galois)?;
    let unit = subdivide(&graph);
    let unit_aut = lift_automorphism(&graph, &unit, &aut)?;
    let lattice = cycle_basis(&unit)?;
    let group = component_group(&lattice)?;
    let action = induced_action(&lattice, &group, &unit_aut)?;
    let tamagawa = match fixed_point_count(&group, &action, options.max_enum) {
        Ok(n) => n,
        Err(Error::EnumerationBoundExceeded(order, bound)) if options.allow_algebraic => {
            let n = fixed_point_count_algebraic(&group, &action);
            n.to_u64().ok_or(Error::EnumerationBoundExceeded(order, bound))?
        }
        Err(e) => return Err(e),
    };
    let spanning_trees = spanning_tree_count(&unit)?;
    debug_assert_eq!(group.order(), spanning_trees);
    Ok(TamagawaDetail {
        verdict,
        reduction,
        warnings,
        invariant_factors: group.invariant_factors(),
        group_order: group.order(),
        action_on_phi: action.on_phi_block(group.diagonal()),
        tamagawa,
        spanning_trees,
        picture,
        graph,
    })
}

/// The number of Frobenius-fixed elements of the component group.
pub fn tamagawa_number(spec: &CoverSpec) -> Result<u64> {
    Ok(tamagawa_detailed(spec, &PipelineOptions::default())?.tamagawa)
}

/// Arithmetic inputs that upgrade a Tamagawa number to a volume: the
/// residue field size, the dimension, the point count of the identity
/// component, and the conductor constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationInputs {
    pub q: u64,
    pub dim_d: u32,
    pub identity_component_points: u64,
    pub conductor_c: BigRational,
}

impl NormalizationInputs {
    pub fn new(q: u64, dim_d: u32, identity_component_points: u64, conductor_c: BigRational) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput("q must be at least 2".into()));
        }
        if dim_d == 0 {
            return Err(Error::InvalidInput("dim must be positive".into()));
        }
        if identity_component_points == 0 {
            return Err(Error::InvalidInput("a0 must be positive".into()));
        }
        if !conductor_c.is_positive() {
            return Err(Error::InvalidInput("conductor must be positive".into()));
        }
        Ok(NormalizationInputs {
            q,
            dim_d,
            identity_component_points,
            conductor_c,
        })
    }
}

/// conductor * a0 * tamagawa / q^dim, exactly.
pub fn normalized_volume(tamagawa: u64, n: &NormalizationInputs) -> BigRational {
    let numer = &n.conductor_c
        * BigRational::from_integer(BigInt::from(n.identity_component_points))
        * BigRational::from_integer(BigInt::from(tamagawa));
    let denom = BigRational::from_integer(BigInt::from(n.q).pow(n.dim_d));
    numer / denom
}

/// Zero locus of a rank-2 spectral discriminant, after the change of
/// variable killing the trace term. The first argument carries the trace
/// data and must be empty or all zeros; the second is the point list of
/// the squared section's zero locus, validated and passed through for
/// depth extraction.
pub fn hitchin_discriminant_points(
    alpha1_roots_shift: &[Ratio<i64>],
    alpha2_data: &[Ratio<i64>],
    p: u64,
) -> Result<Vec<Ratio<i64>>> {
    if !crate::branch::is_odd_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if alpha1_roots_shift.iter().any(|r| !r.is_zero()) {
        return Err(Error::TraceNotZero);
    }
    if alpha2_data.is_empty() {
        return Err(Error::EmptyBranchLocus);
    }
    for (i, a) in alpha2_data.iter().enumerate() {
        for b in alpha2_data.iter().skip(i + 1) {
            if a == b {
                return Err(Error::DuplicatePoint(a.to_string()));
            }
        }
    }
    Ok(alpha2_data.to_vec())
}

/// Final report of one pipeline run.
#[derive(Clone, Debug)]
pub struct VolumeReport {
    pub verdict: Verdict,
    pub reduction: ReductionType,
    pub invariant_factors: Vec<BigInt>,
    pub tamagawa: u64,
    pub volume: Option<BigRational>,
    pub graph_summary: String,
}

#[derive(Serialize)]
struct JsonReport {
    verdict: JsonVerdict,
    reduction: String,
    invariant_factors: Vec<String>,
    tamagawa: u64,
    volume: Option<String>,
}

#[derive(Serialize)]
struct JsonVerdict {
    semistable: bool,
    violations: Vec<String>,
}

impl VolumeReport {
    pub fn from_detail(detail: &TamagawaDetail, normalization: Option<&NormalizationInputs>) -> Self {
        let volume = normalization.map(|n| normalized_volume(detail.tamagawa, n));
        let graph_summary = format!(
            "{} vertices, {} chains, betti {}",
            detail.graph.vertices.len(),
            detail.graph.chains.len(),
            detail.graph.betti()
        );
        VolumeReport {
            verdict: detail.verdict.clone(),
            reduction: detail.reduction.clone(),
            invariant_factors: detail.invariant_factors.clone(),
            tamagawa: detail.tamagawa,
            volume,
            graph_summary,
        }
    }

    pub fn describe_group(&self) -> String {
        if self.invariant_factors.is_empty() {
            "trivial".to_string()
        } else {
            self.invariant_factors
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" x ")
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "verdict: {}\n",
            if self.verdict.semistable {
                "semistable"
            } else {
                "not semistable"
            }
        ));
        out.push_str(&format!("reduction: {}\n", self.reduction.kind));
        if let Some(note) = &self.reduction.note {
            out.push_str(&format!("note: {note}\n"));
        }
        out.push_str(&format!("graph: {}\n", self.graph_summary));
        out.push_str(&format!("Phi = {}\n", self.describe_group()));
        out.push_str(&format!("tamagawa = {}\n", self.tamagawa));
        match &self.volume {
            Some(v) => out.push_str(&format!("volume = {v}\n")),
            None => out.push_str("volume = (tamagawa; no normalization inputs supplied)\n"),
        }
        out
    }

    pub fn render_json(&self) -> String {
        let rep = JsonReport {
            verdict: JsonVerdict {
                semistable: self.verdict.semistable,
                violations: self.verdict.violations.iter().map(|v| v.to_string()).collect(),
            },
            reduction: self.reduction.kind.to_string(),
            invariant_factors: self.invariant_factors.iter().map(|d| d.to_string()).collect(),
            tamagawa: self.tamagawa,
            volume: self.volume.as_ref().map(|v| v.to_string()),
        };
        serde_json::to_string_pretty(&rep).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{BranchDatum, GaloisDatum, Permutation};
    use crate::depth::RationalDepth;
    use num_traits::One;
    use std::collections::BTreeMap;

    fn rd(n: i64, d: i64) -> RationalDepth {
        RationalDepth::new(n, d).unwrap()
    }

    fn rn(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn cp_a_spec() -> CoverSpec {
        let e = |a: &str, b: &str, n: i64| (a.to_string(), b.to_string(), rd(n, 1));
        let b = BranchDatum::new(
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
        .unwrap();
        CoverSpec::with_trivial_galois(b)
    }

    fn cp_b_spec() -> CoverSpec {
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 0, 1, 1, 3, 1).unwrap();
        CoverSpec::with_trivial_galois(b)
    }

    fn cp_d_swap_spec() -> CoverSpec {
        let b = BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4"]),
            &[
                ("r1".into(), "r2".into(), rd(1, 1)),
                ("r3".into(), "r4".into(), rd(1, 1)),
            ],
            0,
            1,
            1,
            3,
            1,
        )
        .unwrap();
        let mut map = BTreeMap::new();
        map.insert("r1".to_string(), "r3".to_string());
        map.insert("r3".to_string(), "r1".to_string());
        map.insert("r2".to_string(), "r4".to_string());
        map.insert("r4".to_string(), "r2".to_string());
        let frobenius = Permutation::from_map(b.labels(), &map).unwrap();
        let mut eps = BTreeMap::new();
        eps.insert("r1,r2,r3,r4".to_string(), 1);
        eps.insert("r1,r2".to_string(), 1);
        eps.insert("r3,r4".to_string(), 1);
        CoverSpec::new(
            b,
            GaloisDatum {
                frobenius,
                eps: Some(eps),
                inertia: vec![],
            },
        )
        .unwrap()
    }

    #[test]
    fn tamagawa_of_fixtures() {
        assert_eq!(tamagawa_number(&cp_a_spec()).unwrap(), 2);
        assert_eq!(tamagawa_number(&cp_b_spec()).unwrap(), 1);
        assert_eq!(tamagawa_number(&cp_d_swap_spec()).unwrap(), 2);
    }

    #[test]
    fn non_semistable_input_is_rejected() {
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 1, 1, 1, 3, 1).unwrap();
        let spec = CoverSpec::with_trivial_galois(b);
        assert!(matches!(
            tamagawa_number(&spec),
            Err(Error::NotSemistable(_))
        ));
    }

    #[test]
    fn normalized_volume_examples() {
        // Factors cancel when a0 = q^d and c = 1.
        let n = NormalizationInputs::new(5, 1, 5, BigRational::one()).unwrap();
        assert_eq!(normalized_volume(2, &n), BigRational::from_integer(2.into()));
        assert_eq!(normalized_volume(1, &n), BigRational::one());
        // (1/2) * 9 * 4 / 3^2 = 2.
        let n = NormalizationInputs::new(
            3,
            2,
            9,
            BigRational::new(BigInt::one(), BigInt::from(2)),
        )
        .unwrap();
        assert_eq!(normalized_volume(4, &n), BigRational::from_integer(2.into()));
    }

    #[test]
    fn normalization_inputs_validated() {
        assert!(NormalizationInputs::new(1, 1, 1, BigRational::one()).is_err());
        assert!(NormalizationInputs::new(5, 0, 1, BigRational::one()).is_err());
        assert!(NormalizationInputs::new(5, 1, 0, BigRational::one()).is_err());
        assert!(NormalizationInputs::new(5, 1, 1, BigRational::zero()).is_err());
    }

    #[test]
    fn hitchin_point_validation() {
        let roots: Vec<Ratio<i64>> = [0, 1, 10, -8, 3, 27, -27]
            .iter()
            .map(|&n| Ratio::from_integer(n))
            .collect();
        let out = hitchin_discriminant_points(&[], &roots, 3).unwrap();
        assert_eq!(out, roots);
        let zeros = vec![Ratio::from_integer(0); 2];
        assert!(hitchin_discriminant_points(&zeros, &roots, 3).is_ok());

        let dup = vec![Ratio::from_integer(1), Ratio::from_integer(1)];
        assert!(matches!(
            hitchin_discriminant_points(&[], &dup, 3),
            Err(Error::DuplicatePoint(_))
        ));
        assert!(matches!(
            hitchin_discriminant_points(&[], &[], 3),
            Err(Error::EmptyBranchLocus)
        ));
        let shift = vec![Ratio::from_integer(2)];
        assert!(matches!(
            hitchin_discriminant_points(&shift, &roots, 3),
            Err(Error::TraceNotZero)
        ));
    }

    #[test]
    fn report_renders_both_ways() {
        let detail = tamagawa_detailed(&cp_a_spec(), &PipelineOptions::default()).unwrap();
        let n = NormalizationInputs::new(3, 1, 3, BigRational::one()).unwrap();
        let report = VolumeReport::from_detail(&detail, Some(&n));
        let text = report.render_text();
        assert!(text.contains("Phi = Z/2"));
        assert!(text.contains("tamagawa = 2"));
        assert!(text.contains("volume = 2"));
        let json = report.render_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["tamagawa"], 2);
        assert_eq!(v["invariant_factors"][0], "2");
        assert_eq!(v["volume"], "2");
        assert_eq!(v["reduction"], "SEMISTABLE");
    }

    #[test]
    fn forced_root_pipeline_end_to_end() {
        // Every pairwise depth positive: a depth-zero root is added above
        // the full-set ball and the two chains between them carry no
        // homology.
        let e = |a: &str, b: &str| (a.to_string(), b.to_string(), rd(1, 1));
        let b = BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4"]),
            &[
                e("r1", "r2"),
                e("r1", "r3"),
                e("r1", "r4"),
                e("r2", "r3"),
                e("r2", "r4"),
                e("r3", "r4"),
            ],
            0,
            1,
            1,
            3,
            1,
        )
        .unwrap();
        let spec = CoverSpec::with_trivial_galois(b);
        let detail = tamagawa_detailed(&spec, &PipelineOptions::default()).unwrap();
        assert!(!detail.warnings.is_empty());
        assert_eq!(detail.tamagawa, 1);
        assert!(detail.invariant_factors.is_empty());
        assert_eq!(detail.graph.betti(), 0);
    }

    #[test]
    fn algebraic_fallback_above_the_bound() {
        let b = BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4", "r5", "r6"]),
            &[("r5".into(), "r6".into(), rd(2, 1))],
            0,
            1,
            1,
            3,
            1,
        )
        .unwrap();
        let spec = CoverSpec::with_trivial_galois(b);
        let tight = PipelineOptions {
            max_enum: 2,
            allow_algebraic: false,
        };
        assert!(matches!(
            tamagawa_detailed(&spec, &tight),
            Err(Error::EnumerationBoundExceeded(_, 2))
        ));
        let fallback = PipelineOptions {
            max_enum: 2,
            allow_algebraic: true,
        };
        assert_eq!(tamagawa_detailed(&spec, &fallback).unwrap().tamagawa, 4);
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn check<T: Send + Sync>() {}
        check::<CoverSpec>();
        check::<crate::cluster::ClusterPicture>();
        check::<crate::disc::DiscCollection>();
        check::<crate::graph::MetricGraph>();
        check::<crate::jacobian::AbelianGroup>();
        check::<TamagawaDetail>();
        check::<VolumeReport>();
    }

    #[test]
    fn trivial_galois_matches_spanning_trees() {
        for spec in [cp_a_spec(), cp_b_spec()] {
            let detail = tamagawa_detailed(&spec, &PipelineOptions::default()).unwrap();
            let order = detail
                .invariant_factors
                .iter()
                .product::<BigInt>()
                .max(BigInt::one());
            assert_eq!(order, detail.spanning_trees);
            assert_eq!(BigInt::from(detail.tamagawa), detail.group_order);
        }
    }
}
