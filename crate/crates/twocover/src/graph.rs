//! Metric dual graph of the minimal regular model: one or two vertices per
//! principal cluster, chains with integer lengths, and the Frobenius action.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::branch::GaloisDatum;
use crate::cluster::{ClusterId, ClusterPicture};
use crate::error::{Error, Result};

/// Sign tag for the one or two components above a cluster. `None` is the
/// single vertex of a non-uebereven cluster, which both signs alias.
pub type Sign = i8;

#[derive(Clone, Debug)]
pub struct Vertex {
    pub name: String,
    pub cluster: ClusterId,
    /// +1 / -1 for the two vertices of an uebereven cluster, 0 otherwise.
    pub sign: Sign,
}

/// Where a chain comes from; the Galois action is defined cluster-side and
/// transported along this tag.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    /// Chain from an odd principal child to its parent, length delta/2.
    OddChild(ClusterId),
    /// One of the two chains of an even principal child, length delta.
    EvenChild(ClusterId, Sign),
    /// Chain between the two component vertices above a twin's parent,
    /// length 2 delta.
    Twin(ClusterId),
    /// Appended by hand (loop insensitivity experiments).
    Extra(usize),
}

#[derive(Clone, Debug)]
pub struct Chain {
    pub id: String,
    pub a: usize,
    pub b: usize,
    pub length: u64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct MetricGraph {
    pub vertices: Vec<Vertex>,
    pub chains: Vec<Chain>,
    vertex_of: BTreeMap<(ClusterId, Sign), usize>,
    by_provenance: BTreeMap<Provenance, usize>,
}

impl MetricGraph {
    pub fn vertex_of(&self, cluster: ClusterId, sign: Sign) -> Option<usize> {
        self.vertex_of
            .get(&(cluster, sign))
            .or_else(|| self.vertex_of.get(&(cluster, 0)))
            .copied()
    }

    pub fn chain_by_provenance(&self, p: &Provenance) -> Option<usize> {
        self.by_provenance.get(p).copied()
    }

    /// First Betti number (the graph is connected by construction).
    pub fn betti(&self) -> usize {
        self.chains.len() + 1 - self.vertices.len()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for c in &self.chains {
                for (x, y) in [(c.a, c.b), (c.b, c.a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Copy of the graph with a self-chain of the given length appended at
    /// a vertex. Unit-length loops do not change the component group.
    pub fn with_extra_loop(&self, vertex: usize, length: u64) -> MetricGraph {
        let mut g = self.clone();
        let k = g
            .chains
            .iter()
            .filter(|c| matches!(c.provenance, Provenance::Extra(_)))
            .count();
        let id = format!("extra{k}");
        g.by_provenance.insert(Provenance::Extra(k), g.chains.len());
        g.chains.push(Chain {
            id,
            a: vertex,
            b: vertex,
            length,
            provenance: Provenance::Extra(k),
        });
        g
    }

    /// Deterministic DOT document: vertices then chains, each sorted by
    /// identifier; chain lengths as edge labels; component signs tinted.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("graph dual_graph {\n");
        let mut vs: Vec<&Vertex> = self.vertices.iter().collect();
        vs.sort_by(|x, y| x.name.cmp(&y.name));
        for v in vs {
            match v.sign {
                1 => out.push_str(&format!("  \"{}\" [color=blue];\n", v.name)),
                -1 => out.push_str(&format!("  \"{}\" [color=red];\n", v.name)),
                _ => out.push_str(&format!("  \"{}\";\n", v.name)),
            }
        }
        let mut cs: Vec<&Chain> = self.chains.iter().collect();
        cs.sort_by(|x, y| x.id.cmp(&y.id));
        for c in cs {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                self.vertices[c.a].name, self.vertices[c.b].name, c.length
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the metric dual graph of a semi-stable picture.
///
/// Vertices: one per principal cluster, two when it is uebereven. Chains:
/// for a principal child s' of a principal parent s, one chain of length
/// delta/2 when s' is odd and a pair of chains of length delta when s' is
/// even; for a twin below a principal parent, one chain of length 2 delta
/// between the parent's two component vertices (a loop when they alias).
/// Non-integral lengths abort: silent rescaling would corrupt the pairing.
pub fn build_dual_graph(pic: &ClusterPicture) -> Result<MetricGraph> {
    let mut vertices = Vec::new();
    let mut vertex_of = BTreeMap::new();
    let principal: Vec<ClusterId> = pic
        .ids_canonical()
        .into_iter()
        .filter(|&id| pic.classify(id).principal)
        .collect();
    if principal.is_empty() {
        let root = pic.root();
        vertices.push(Vertex {
            name: format!("v({})", pic.canonical_id(root)),
            cluster: root,
            sign: 0,
        });
        vertex_of.insert((root, 0), 0);
        return Ok(MetricGraph {
            vertices,
            chains: Vec::new(),
            vertex_of,
            by_provenance: BTreeMap::new(),
        });
    }
    for &s in &principal {
        let id = pic.canonical_id(s);
        if pic.classify(s).uebereven {
            for sign in [1i8, -1] {
                let idx = vertices.len();
                vertices.push(Vertex {
                    name: format!("v({}){}", id, if sign > 0 { "+" } else { "-" }),
                    cluster: s,
                    sign,
                });
                vertex_of.insert((s, sign), idx);
            }
        } else {
            let idx = vertices.len();
            vertices.push(Vertex {
                name: format!("v({id})"),
                cluster: s,
                sign: 0,
            });
            vertex_of.insert((s, 0), idx);
        }
    }
    let vertex = |s: ClusterId, sign: Sign| -> usize {
        *vertex_of
            .get(&(s, sign))
            .or_else(|| vertex_of.get(&(s, 0)))
            .expect("vertex exists for every principal cluster")
    };
    let mut chains = Vec::new();
    let mut by_provenance = BTreeMap::new();
    let mut push = |chains: &mut Vec<Chain>, chain: Chain| {
        by_provenance.insert(chain.provenance.clone(), chains.len());
        chains.push(chain);
    };
    let chain_length = |delta: Ratio<i64>, scale: Ratio<i64>, id: &str| -> Result<u64> {
        let len = delta * scale;
        if !len.is_integer() || len <= Ratio::from_integer(0) {
            return Err(Error::ChainLengthNotIntegral(id.to_string(), len.to_string()));
        }
        Ok(len.to_integer() as u64)
    };
    for &s in &principal {
        let Some(p) = pic.cluster(s).parent else {
            continue;
        };
        debug_assert!(pic.classify(p).principal, "parents of principal clusters are principal");
        let delta = pic.relative_depth(s)?;
        let id = pic.canonical_id(s);
        if pic.cluster(s).members.len() % 2 == 1 {
            let length = chain_length(delta, Ratio::new(1, 2), &id)?;
            push(
                &mut chains,
                Chain {
                    id: format!("L({id})"),
                    a: vertex(s, 1),
                    b: vertex(p, 1),
                    length,
                    provenance: Provenance::OddChild(s),
                },
            );
        } else {
            let length = chain_length(delta, Ratio::from_integer(1), &id)?;
            for sign in [1i8, -1] {
                push(
                    &mut chains,
                    Chain {
                        id: format!("L({}){}", id, if sign > 0 { "+" } else { "-" }),
                        a: vertex(s, sign),
                        b: vertex(p, sign),
                        length,
                        provenance: Provenance::EvenChild(s, sign),
                    },
                );
            }
        }
    }
    for t in pic.ids_canonical() {
        if !pic.classify(t).twin {
            continue;
        }
        let Some(p) = pic.cluster(t).parent else {
            continue;
        };
        if !pic.classify(p).principal {
            continue;
        }
        let delta = pic.relative_depth(t)?;
        let id = pic.canonical_id(t);
        let length = chain_length(delta, Ratio::from_integer(2), &id)?;
        push(
            &mut chains,
            Chain {
                id: format!("L({id})"),
                a: vertex(p, -1),
                b: vertex(p, 1),
                length,
                provenance: Provenance::Twin(t),
            },
        );
    }
    let g = MetricGraph {
        vertices,
        chains,
        vertex_of,
        by_provenance,
    };
    debug_assert!(g.is_connected());
    Ok(g)
}

/// Length- and incidence-preserving bijection of a metric graph. Chains map
/// with an orientation sign; -1 traverses the image chain backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAutomorphism {
    pub vertex_map: Vec<usize>,
    pub chain_map: Vec<(usize, i8)>,
}

impl GraphAutomorphism {
    pub fn identity(g: &MetricGraph) -> Self {
        GraphAutomorphism {
            vertex_map: (0..g.vertices.len()).collect(),
            chain_map: (0..g.chains.len()).map(|i| (i, 1)).collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        GraphAutomorphism {
            vertex_map: self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect(),
            chain_map: self
                .chain_map
                .iter()
                .map(|&(c, s)| {
                    let (c2, s2) = other.chain_map[c];
                    (c2, s * s2)
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> GraphAutomorphism {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (i, &j) in self.vertex_map.iter().enumerate() {
            vertex_map[j] = i;
        }
        let mut chain_map = vec![(0, 1i8); self.chain_map.len()];
        for (i, &(j, s)) in self.chain_map.iter().enumerate() {
            chain_map[j] = (i, s);
        }
        GraphAutomorphism {
            vertex_map,
            chain_map,
        }
    }

    /// Checks bijectivity, incidence and length preservation.
    pub fn validate(&self, g: &MetricGraph) -> Result<()> {
        let mut seen_v = vec![false; g.vertices.len()];
        for &v in &self.vertex_map {
            if v >= seen_v.len() || seen_v[v] {
                return Err(Error::InvalidInput("vertex map is not a bijection".into()));
            }
            seen_v[v] = true;
        }
        let mut seen_c = vec![false; g.chains.len()];
        for (i, &(c, s)) in self.chain_map.iter().enumerate() {
            if c >= seen_c.len() || seen_c[c] || (s != 1 && s != -1) {
                return Err(Error::InvalidInput("chain map is not a bijection".into()));
            }
            seen_c[c] = true;
            let src = &g.chains[i];
            let dst = &g.chains[c];
            if src.length != dst.length {
                return Err(Error::InvalidInput(format!(
                    "chain {} maps to {} of different length",
                    src.id, dst.id
                )));
            }
            let (ta, tb) = if s > 0 { (dst.a, dst.b) } else { (dst.b, dst.a) };
            if self.vertex_map[src.a] != ta || self.vertex_map[src.b] != tb {
                return Err(Error::EndpointMismatch(src.id.clone()));
            }
        }
        Ok(())
    }
}

/// Per-cluster component signs, resolved against the picture. Missing maps
/// mean the split choice (+1 everywhere); explicit maps must be defined
/// exactly on the even clusters.
pub fn resolve_eps(pic: &ClusterPicture, galois: &GaloisDatum) -> Result<Vec<i8>> {
    let mut out = vec![1i8; pic.len()];
    let Some(map) = &galois.eps else {
        return Ok(out);
    };
    let mut even_ids: BTreeMap<String, usize> = BTreeMap::new();
    for id in pic.ids() {
        if pic.classify(id).even {
            even_ids.insert(pic.canonical_id(id), id);
        }
    }
    for key in map.keys() {
        if !even_ids.contains_key(key) {
            return Err(Error::EpsUnexpected(key.clone()));
        }
    }
    for (canonical, id) in even_ids {
        match map.get(&canonical) {
            Some(&v) if v == 1 || v == -1 => out[id] = v,
            Some(_) => return Err(Error::BadEpsValue(canonical)),
            None => return Err(Error::EpsMissing(canonical)),
        }
    }
    Ok(out)
}

/// Realizes the Frobenius permutation as an automorphism of the dual graph:
/// vertices map by the cluster image with the sign twisted by eps, the two
/// chains of an even child swap accordingly, and twin chains reverse
/// orientation when their eps is -1. Inconsistent eps data surfaces as an
/// endpoint mismatch.
pub fn frobenius_automorphism(
    g: &MetricGraph,
    pic: &ClusterPicture,
    galois: &GaloisDatum,
) -> Result<GraphAutomorphism> {
    let cluster_map = pic.apply_label_permutation(&galois.frobenius)?;
    let eps = resolve_eps(pic, galois)?;
    let mut vertex_map = vec![0usize; g.vertices.len()];
    for (i, v) in g.vertices.iter().enumerate() {
        let target_cluster = cluster_map[v.cluster];
        let target_sign = v.sign * eps[v.cluster];
        vertex_map[i] = g
            .vertex_of(target_cluster, target_sign)
            .expect("cluster automorphisms preserve the vertex set");
    }
    let mut chain_map = vec![(0usize, 1i8); g.chains.len()];
    for (i, c) in g.chains.iter().enumerate() {
        let (target, sign) = match &c.provenance {
            Provenance::OddChild(s) => (Provenance::OddChild(cluster_map[*s]), 1),
            Provenance::EvenChild(s, sg) => (
                Provenance::EvenChild(cluster_map[*s], sg * eps[*s]),
                1,
            ),
            Provenance::Twin(t) => (Provenance::Twin(cluster_map[*t]), eps[*t]),
            Provenance::Extra(k) => (Provenance::Extra(*k), 1),
        };
        let j = g
            .chain_by_provenance(&target)
            .expect("cluster automorphisms permute the chain set");
        chain_map[i] = (j, sign);
    }
    let aut = GraphAutomorphism {
        vertex_map,
        chain_map,
    };
    aut.validate(g)?;
    Ok(aut)
}

/// Signs for the composite of two Frobenius elements: the twist of the
/// composite at s multiplies the twist of the first at s by the twist of
/// the second at the image of s.
pub fn compose_eps(
    pic: &ClusterPicture,
    first_map: &[ClusterId],
    first_eps: &[i8],
    second_eps: &[i8],
) -> Vec<i8> {
    pic.ids()
        .map(|id| first_eps[id] * second_eps[first_map[id]])
        .collect()
}

/// The metric graph subdivided into unit edges. Original vertices keep
/// their indices; every chain of length n contributes n - 1 fresh interior
/// vertices and n consecutive edges.
#[derive(Clone, Debug)]
pub struct UnitGraph {
    pub names: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub chain_edges: Vec<Vec<usize>>,
    pub chain_inner: Vec<Vec<usize>>,
    pub base_vertices: usize,
}

impl UnitGraph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count()
    }

    /// Same graph with the listed edges reversed. The homology pipeline
    /// must not depend on the choice of orientations.
    pub fn with_flipped_edges(&self, flips: &[bool]) -> UnitGraph {
        let mut g = self.clone();
        for (e, flip) in flips.iter().enumerate() {
            if *flip {
                let (a, b) = g.edges[e];
                g.edges[e] = (b, a);
            }
        }
        g
    }
}

/// Expands every chain into unit edges through fresh interior vertices.
pub fn subdivide(g: &MetricGraph) -> UnitGraph {
    let mut names: Vec<String> = g.vertices.iter().map(|v| v.name.clone()).collect();
    let base_vertices = names.len();
    let mut edges = Vec::new();
    let mut chain_edges = Vec::new();
    let mut chain_inner = Vec::new();
    for c in &g.chains {
        let n = c.length as usize;
        let mut inner = Vec::new();
        for i in 0..n.saturating_sub(1) {
            inner.push(names.len());
            names.push(format!("{}#{}", c.id, i));
        }
        let mut es = Vec::new();
        let mut prev = c.a;
        for (i, &m) in inner.iter().enumerate() {
            es.push(edges.len());
            edges.push((prev, m));
            prev = m;
            let _ = i;
        }
        es.push(edges.len());
        edges.push((prev, c.b));
        chain_edges.push(es);
        chain_inner.push(inner);
    }
    UnitGraph {
        names,
        edges,
        chain_edges,
        chain_inner,
        base_vertices,
    }
}

/// Vertex permutation plus signed edge map on the unit graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitAutomorphism {
    pub vertex_perm: Vec<usize>,
    pub edge_map: Vec<(usize, i8)>,
}

/// Lifts a metric automorphism through the subdivision: interior vertex i
/// of a chain of length n maps to interior vertex i, or n - 2 - i when the
/// chain reverses. Edge signs are read off the stored orientations, so the
/// lift is valid for any orientation assignment.
pub fn lift_automorphism(
    g: &MetricGraph,
    unit: &UnitGraph,
    aut: &GraphAutomorphism,
) -> Result<UnitAutomorphism> {
    let mut vertex_perm = vec![usize::MAX; unit.vertex_count()];
    for (v, &img) in aut.vertex_map.iter().enumerate() {
        vertex_perm[v] = img;
    }
    for (c, &(c2, sign)) in aut.chain_map.iter().enumerate() {
        let inner = &unit.chain_inner[c];
        let inner2 = &unit.chain_inner[c2];
        debug_assert_eq!(inner.len(), inner2.len());
        for (i, &m) in inner.iter().enumerate() {
            let j = if sign > 0 { i } else { inner.len() - 1 - i };
            vertex_perm[m] = inner2[j];
        }
    }
    let mut edge_map = vec![(0usize, 1i8); unit.edges.len()];
    for (c, &(c2, sign)) in aut.chain_map.iter().enumerate() {
        let es = &unit.chain_edges[c];
        let es2 = &unit.chain_edges[c2];
        for (k, &e) in es.iter().enumerate() {
            let k2 = if sign > 0 { k } else { es.len() - 1 - k };
            let e2 = es2[k2];
            let (a, b) = unit.edges[e];
            let (ta, tb) = unit.edges[e2];
            let (ia, ib) = (vertex_perm[a], vertex_perm[b]);
            let s = if (ia, ib) == (ta, tb) {
                1
            } else if (ia, ib) == (tb, ta) {
                -1
            } else {
                return Err(Error::EndpointMismatch(g.chains[c].id.clone()));
            };
            edge_map[e] = (e2, s);
        }
    }
    Ok(UnitAutomorphism {
        vertex_perm,
        edge_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{BranchDatum, GaloisDatum, Permutation};
    use crate::cluster::build_cluster_picture;
    use crate::depth::RationalDepth;

    fn rd(n: i64, d: i64) -> RationalDepth {
        RationalDepth::new(n, d).unwrap()
    }

    fn rn(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn cp_a() -> ClusterPicture {
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
        build_cluster_picture(&b).unwrap()
    }

    fn cp_b() -> ClusterPicture {
        let b = BranchDatum::new(rn(&["r1", "r2", "r3", "r4"]), &[], 0, 1, 1, 3, 1).unwrap();
        build_cluster_picture(&b).unwrap()
    }

    fn cp_c() -> ClusterPicture {
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
        build_cluster_picture(&b).unwrap()
    }

    fn cp_d() -> ClusterPicture {
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
        build_cluster_picture(&b).unwrap()
    }

    #[test]
    fn cp_a_graph_structure() {
        let pic = cp_a();
        let g = build_dual_graph(&pic).unwrap();
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(g.chains.len(), 4);
        assert!(g.chains.iter().all(|c| c.length == 1));
        assert_eq!(g.betti(), 1);
        assert!(g.is_connected());
    }

    #[test]
    fn cp_b_graph_is_one_vertex() {
        let g = build_dual_graph(&cp_b()).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(g.chains.is_empty());
    }

    #[test]
    fn cp_c_graph_is_one_loop() {
        let g = build_dual_graph(&cp_c()).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.chains.len(), 1);
        assert_eq!(g.chains[0].length, 4);
        assert_eq!(g.chains[0].a, g.chains[0].b);
    }

    #[test]
    fn cp_d_graph_is_a_double_chain() {
        let g = build_dual_graph(&cp_d()).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.chains.len(), 2);
        assert!(g.chains.iter().all(|c| c.length == 2));
        assert!(g.chains.iter().all(|c| c.a != c.b));
    }

    #[test]
    fn odd_relative_depth_of_odd_child_is_rejected() {
        // Odd principal child with delta = 1 would need a chain of length 1/2.
        let b = BranchDatum::new(
            rn(&["r1", "r2", "r3", "r4", "r5", "r6"]),
            &[
                ("r1".into(), "r2".into(), rd(1, 1)),
                ("r1".into(), "r3".into(), rd(1, 1)),
                ("r2".into(), "r3".into(), rd(1, 1)),
            ],
            0,
            1,
            1,
            3,
            1,
        )
        .unwrap();
        let pic = build_cluster_picture(&b).unwrap();
        assert!(matches!(
            build_dual_graph(&pic),
            Err(Error::ChainLengthNotIntegral(_, _))
        ));
    }

    fn swap_frobenius(pic: &ClusterPicture) -> GaloisDatum {
        let mut map = std::collections::BTreeMap::new();
        map.insert("r1".to_string(), "r3".to_string());
        map.insert("r3".to_string(), "r1".to_string());
        map.insert("r2".to_string(), "r4".to_string());
        map.insert("r4".to_string(), "r2".to_string());
        let frobenius = Permutation::from_map(pic.labels(), &map).unwrap();
        let mut eps = std::collections::BTreeMap::new();
        eps.insert("r1,r2,r3,r4".to_string(), 1);
        eps.insert("r1,r2".to_string(), 1);
        eps.insert("r3,r4".to_string(), 1);
        GaloisDatum {
            frobenius,
            eps: Some(eps),
            inertia: vec![],
        }
    }

    #[test]
    fn cp_d_swap_exchanges_the_chains() {
        let pic = cp_d();
        let g = build_dual_graph(&pic).unwrap();
        let galois = swap_frobenius(&pic);
        let aut = frobenius_automorphism(&g, &pic, &galois).unwrap();
        // Vertices fixed, chains swapped with positive orientation.
        assert!(aut.vertex_map.iter().enumerate().all(|(i, &j)| i == j));
        assert_eq!(aut.chain_map[0].0, 1);
        assert_eq!(aut.chain_map[1].0, 0);
        assert!(aut.chain_map.iter().all(|&(_, s)| s == 1));
        aut.validate(&g).unwrap();
    }

    #[test]
    fn identity_frobenius_gives_identity() {
        let pic = cp_a();
        let g = build_dual_graph(&pic).unwrap();
        let aut = frobenius_automorphism(&g, &pic, &GaloisDatum::trivial(8)).unwrap();
        assert_eq!(aut, GraphAutomorphism::identity(&g));
    }

    #[test]
    fn twin_eps_minus_one_reverses_the_loop() {
        let pic = cp_c();
        let g = build_dual_graph(&pic).unwrap();
        let mut eps = std::collections::BTreeMap::new();
        eps.insert("r1,r2,r3,r4,r5,r6".to_string(), 1);
        eps.insert("r5,r6".to_string(), -1);
        let galois = GaloisDatum {
            frobenius: Permutation::identity(6),
            eps: Some(eps),
            inertia: vec![],
        };
        let aut = frobenius_automorphism(&g, &pic, &galois).unwrap();
        assert_eq!(aut.chain_map[0], (0, -1));
    }

    #[test]
    fn eps_must_cover_even_clusters() {
        let pic = cp_c();
        let g = build_dual_graph(&pic).unwrap();
        let galois = GaloisDatum {
            frobenius: Permutation::identity(6),
            eps: Some(std::collections::BTreeMap::new()),
            inertia: vec![],
        };
        assert!(matches!(
            frobenius_automorphism(&g, &pic, &galois),
            Err(Error::EpsMissing(_))
        ));
    }

    #[test]
    fn contradictory_eps_is_an_endpoint_mismatch() {
        // Uebereven parent fixed with +1 while one twin chain reverses:
        // the reversed chain would have to start at the other component.
        let pic = cp_d();
        let g = build_dual_graph(&pic).unwrap();
        let mut eps = std::collections::BTreeMap::new();
        eps.insert("r1,r2,r3,r4".to_string(), 1);
        eps.insert("r1,r2".to_string(), -1);
        eps.insert("r3,r4".to_string(), 1);
        let galois = GaloisDatum {
            frobenius: Permutation::identity(4),
            eps: Some(eps),
            inertia: vec![],
        };
        assert!(matches!(
            frobenius_automorphism(&g, &pic, &galois),
            Err(Error::EndpointMismatch(_))
        ));
    }

    #[test]
    fn eps_keys_must_name_even_clusters() {
        let pic = cp_c();
        let g = build_dual_graph(&pic).unwrap();
        let mut eps = std::collections::BTreeMap::new();
        eps.insert("r1,r2,r3,r4,r5,r6".to_string(), 1);
        eps.insert("r5,r6".to_string(), 1);
        eps.insert("bogus".to_string(), 1);
        let galois = GaloisDatum {
            frobenius: Permutation::identity(6),
            eps: Some(eps),
            inertia: vec![],
        };
        assert!(matches!(
            frobenius_automorphism(&g, &pic, &galois),
            Err(Error::EpsUnexpected(_))
        ));
    }

    #[test]
    fn subdivision_shapes() {
        let g = build_dual_graph(&cp_d()).unwrap();
        let u = subdivide(&g);
        assert_eq!(u.vertex_count(), 4); // 2 base + 1 interior per chain
        assert_eq!(u.edges.len(), 4);
        assert_eq!(u.betti(), 1);

        let g = build_dual_graph(&cp_c()).unwrap();
        let u = subdivide(&g);
        assert_eq!(u.vertex_count(), 4); // 1 base + 3 interior
        assert_eq!(u.edges.len(), 4);
        assert_eq!(u.betti(), 1);

        let g = build_dual_graph(&cp_a()).unwrap();
        let u = subdivide(&g);
        // All chains have length 1: subdivision is the graph itself.
        assert_eq!(u.vertex_count(), 4);
        assert_eq!(u.edges.len(), 4);
    }

    #[test]
    fn squared_frobenius_matches_composition() {
        let pic = cp_d();
        let g = build_dual_graph(&pic).unwrap();
        let galois = swap_frobenius(&pic);
        let aut = frobenius_automorphism(&g, &pic, &galois).unwrap();
        let composed = aut.then(&aut);

        let cluster_map = pic.apply_label_permutation(&galois.frobenius).unwrap();
        let eps = resolve_eps(&pic, &galois).unwrap();
        let eps2 = compose_eps(&pic, &cluster_map, &eps, &eps);
        let frob2 = galois.frobenius.then(&galois.frobenius);
        let eps2_map: std::collections::BTreeMap<String, i8> = pic
            .ids()
            .filter(|&id| pic.classify(id).even)
            .map(|id| (pic.canonical_id(id), eps2[id]))
            .collect();
        let galois2 = GaloisDatum {
            frobenius: frob2,
            eps: Some(eps2_map),
            inertia: vec![],
        };
        let aut2 = frobenius_automorphism(&g, &pic, &galois2).unwrap();
        assert_eq!(aut2, composed);
    }

    #[test]
    fn dot_output_is_deterministic() {
        let g = build_dual_graph(&cp_a()).unwrap();
        let d1 = g.export_dot();
        let d2 = g.export_dot();
        assert_eq!(d1, d2);
        assert_eq!(d1.matches(" -- ").count(), 4);
        assert_eq!(d1.matches("label=\"1\"").count(), 4);

        let g = build_dual_graph(&cp_b()).unwrap();
        let dot = g.export_dot();
        assert_eq!(dot.matches(" -- ").count(), 0);
        assert_eq!(dot.lines().count(), 3); // header, one vertex, closer

        let g = build_dual_graph(&cp_d()).unwrap();
        let dot = g.export_dot();
        assert_eq!(dot.matches("label=\"2\"").count(), 2);
        assert!(dot.contains("color=blue") && dot.contains("color=red"));
    }
}
