//! The JSON input format and its canonical writer.
//!
//! A document is one object with keys `labels`, `depths`, `v_phi`, `e`,
//! `ram_index`, `residue_char`, `genus_Y`, and optionally `frobenius`,
//! `eps`, `inertia`. Depths are triples `[label, label, "num/den"]`;
//! unlisted pairs default to zero. Unknown keys are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::branch::{BranchDatum, BranchViolation, CoverSpec, GaloisDatum, Permutation};
use crate::depth::RationalDepth;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    depths: Vec<(String, String, String)>,
    v_phi: i64,
    e: u32,
    ram_index: u32,
    residue_char: u32,
    #[serde(rename = "genus_Y")]
    genus_y: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frobenius: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<BTreeMap<String, i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inertia: Option<Vec<BTreeMap<String, String>>>,
}

/// Parses a UTF-8 document into a [`CoverSpec`]. Depth denominators are
/// checked against `e` here; the ultrametric law is left to the cluster
/// builder, which reports offending triples.
pub fn parse_cover_spec(text: &str) -> Result<CoverSpec> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut entries = Vec::new();
    for (a, b, d) in &doc.depths {
        let depth: RationalDepth = d.parse()?;
        entries.push((a.clone(), b.clone(), depth));
    }
    let branch = BranchDatum::new(
        doc.labels,
        &entries,
        doc.v_phi,
        doc.e,
        doc.ram_index,
        doc.residue_char,
        doc.genus_y,
    )?;
    for violation in branch.validate() {
        if matches!(violation, BranchViolation::DenominatorNotDividingE { .. }) {
            return Err(Error::InvalidBranchData(violation.to_string()));
        }
    }
    let n = branch.len();
    let frobenius = match &doc.frobenius {
        Some(map) => Permutation::from_map(branch.labels(), map)?,
        None => Permutation::identity(n),
    };
    let inertia = match &doc.inertia {
        Some(list) => list
            .iter()
            .map(|m| Permutation::from_map(branch.labels(), m))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    CoverSpec::new(
        branch,
        GaloisDatum {
            frobenius,
            eps: doc.eps,
            inertia,
        },
    )
}

/// Canonical writer: each unordered pair once in label order, zero depths
/// omitted, identity permutations omitted. `parse(render(s)) == s`.
pub fn render_cover_spec(spec: &CoverSpec) -> String {
    let b = &spec.branch;
    let labels = b.labels();
    let mut depths = Vec::new();
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            let d = b.depth_ij(i, j);
            if !d.is_zero() {
                depths.push((labels[i].clone(), labels[j].clone(), d.to_string()));
            }
        }
    }
    let frobenius = if spec.galois.frobenius.is_identity() {
        None
    } else {
        Some(spec.galois.frobenius.to_map(labels))
    };
    let inertia = if spec.galois.inertia.is_empty() {
        None
    } else {
        Some(
            spec.galois
                .inertia
                .iter()
                .map(|p| p.to_map(labels))
                .collect(),
        )
    };
    let doc = Document {
        labels: labels.to_vec(),
        depths,
        v_phi: b.v_phi,
        e: b.field_degree_e,
        ram_index: b.ram_index,
        residue_char: b.residue_char,
        genus_y: b.genus_y,
        frobenius,
        eps: spec.galois.eps.clone(),
        inertia,
    };
    serde_json::to_string_pretty(&doc).expect("documents serialize")
}
