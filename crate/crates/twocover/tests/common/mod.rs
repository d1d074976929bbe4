//! Shared helpers for the integration suites: fixture loading and seeded
//! random generators for semi-stable pictures and unit multigraphs.
#![allow(dead_code)]

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use twocover::{
    AsciiNode, BranchDatum, ClusterPicture, CoverSpec, GaloisDatum, Permutation, RationalDepth,
    UnitGraph,
};

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"))
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_spec(name: &str) -> CoverSpec {
    twocover::parse_cover_spec(&fixture_text(name)).unwrap()
}

const MAX_DEPTH: i64 = 5;

/// Random branch datum whose cluster picture is semi-stable by
/// construction: v_phi = 0, no inertia, integral depths on principal
/// clusters, and every odd-sized cluster enters at an even depth step so
/// all principal v stay even. At most 10 branch points, depths at most 5.
pub fn random_semistable_branch(rng: &mut ChaCha8Rng) -> BranchDatum {
    let n = 2 * rng.gen_range(2..=5usize);
    let labels: Vec<String> = (1..=n).map(|i| format!("r{i:02}")).collect();
    let node = grow(rng, labels, 0);
    let (labels, entries, e) = node.realize().unwrap();
    BranchDatum::new(labels, &entries, 0, e, 1, 5, 1).unwrap()
}

fn grow(rng: &mut ChaCha8Rng, mut members: Vec<String>, depth: i64) -> AsciiNode {
    members.shuffle(rng);
    let total = members.len();
    let mut children = Vec::new();
    let mut singles = Vec::new();
    let mut idx = 0;
    while idx < total {
        let remaining = total - idx;
        let max_chunk = remaining.min(total - 1).min(6);
        if max_chunk >= 2 && rng.gen_bool(0.55) {
            let size = rng.gen_range(2..=max_chunk);
            let chunk: Vec<String> = members[idx..idx + size].to_vec();
            if let Some(child) = nest(rng, chunk, depth) {
                children.push(child);
                idx += size;
                continue;
            }
        }
        singles.push(members[idx].clone());
        idx += 1;
    }
    AsciiNode {
        depth: RationalDepth::from_integer(depth).unwrap(),
        children,
        labels: singles,
    }
}

fn nest(rng: &mut ChaCha8Rng, chunk: Vec<String>, parent_depth: i64) -> Option<AsciiNode> {
    let size = chunk.len();
    if size == 2 {
        let choices: Vec<Ratio<i64>> = [
            Ratio::new(1, 2),
            Ratio::from_integer(1),
            Ratio::new(3, 2),
            Ratio::from_integer(2),
        ]
        .into_iter()
        .filter(|d| Ratio::from_integer(parent_depth) + d <= Ratio::from_integer(MAX_DEPTH))
        .collect();
        let delta = *choices.choose(rng)?;
        let depth = Ratio::from_integer(parent_depth) + delta;
        return Some(AsciiNode {
            depth: RationalDepth::from_ratio(depth).unwrap(),
            children: Vec::new(),
            labels: chunk,
        });
    }
    // Odd-sized clusters must enter with an even depth step to keep their
    // v invariant even; even-sized ones are free.
    let delta = if size % 2 == 1 {
        2
    } else {
        *[1i64, 2].choose(rng).unwrap()
    };
    if parent_depth + delta > MAX_DEPTH {
        return None;
    }
    Some(grow(rng, chunk, parent_depth + delta))
}

/// Random connected unit multigraph (loops and parallel edges allowed),
/// with arbitrary edge orientations, presented as its own subdivision.
pub fn random_unit_multigraph(rng: &mut ChaCha8Rng) -> UnitGraph {
    let n = rng.gen_range(1..=7usize);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        let p = rng.gen_range(0..v);
        edges.push(if rng.gen() { (p, v) } else { (v, p) });
    }
    let extra = rng.gen_range(0..=6usize);
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        edges.push((a, b));
    }
    UnitGraph {
        names: (0..n).map(|i| format!("n{i:03}")).collect(),
        edges: edges.clone(),
        chain_edges: (0..edges.len()).map(|i| vec![i]).collect(),
        chain_inner: (0..edges.len()).map(|_| Vec::new()).collect(),
        base_vertices: n,
    }
}

/// Identity Frobenius with random component signs. Children of uebereven
/// clusters inherit the parent sign, which is exactly the compatibility
/// the chain endpoints demand.
pub fn random_eps_galois(pic: &ClusterPicture, rng: &mut ChaCha8Rng) -> GaloisDatum {
    let mut eps = vec![1i8; pic.len()];
    for id in pic.ids() {
        if pic.classify(id).even {
            eps[id] = if rng.gen() { 1 } else { -1 };
        }
    }
    let mut order: Vec<usize> = pic.ids().collect();
    order.sort_by_key(|&id| pic.cluster(id).depth);
    for id in order {
        if pic.classify(id).uebereven {
            for &ch in &pic.cluster(id).children {
                eps[ch] = eps[id];
            }
        }
    }
    let map = pic
        .ids()
        .filter(|&id| pic.classify(id).even)
        .map(|id| (pic.canonical_id(id), eps[id]))
        .collect();
    GaloisDatum {
        frobenius: Permutation::identity(pic.label_count()),
        eps: Some(map),
        inertia: Vec::new(),
    }
}
