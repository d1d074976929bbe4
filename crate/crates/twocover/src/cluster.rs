//! Cluster pictures: the nested family of threshold balls of the branch
//! locus, with per-cluster invariants and classification.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::branch::{BranchDatum, Permutation};
use crate::depth::RationalDepth;
use crate::error::{Error, Result};

pub type ClusterId = usize;

/// One cluster: a subset of the branch labels of size >= 2 with its depth.
///
/// `v` is the invariant v_phi + sum over all labels r of the depth of the
/// smallest cluster containing r and this cluster.
#[derive(Clone, Debug)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub depth: RationalDepth,
    pub parent: Option<ClusterId>,
    pub children: Vec<ClusterId>,
    /// Members lying in no child cluster.
    pub singletons: Vec<usize>,
    pub v: Ratio<i64>,
}

/// Size and parity classification of a cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassificationFlags {
    pub principal: bool,
    pub twin: bool,
    pub even: bool,
    pub uebereven: bool,
    pub maximal: bool,
}

/// The rooted tree of clusters built from a [`BranchDatum`].
#[derive(Clone, Debug)]
pub struct ClusterPicture {
    labels: Vec<String>,
    depth_matrix: Vec<Vec<RationalDepth>>,
    pub v_phi: i64,
    clusters: Vec<Cluster>,
    root: ClusterId,
    by_key: BTreeMap<(Vec<usize>, RationalDepth), ClusterId>,
    pub warnings: Vec<String>,
}

/// Enumerates the threshold balls of the depth matrix and assembles the
/// cluster tree. The root is always present with depth zero; if even the
/// full label set has positive pairwise depth, a separate depth-zero root
/// is added above it and a warning is recorded.
pub fn build_cluster_picture(b: &BranchDatum) -> Result<ClusterPicture> {
    let violations = b.validate();
    if !violations.is_empty() {
        let msg = violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::InvalidBranchData(msg));
    }
    let n = b.len();
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for r in 0..n {
        let mut thresholds: BTreeSet<RationalDepth> = BTreeSet::new();
        for x in 0..n {
            if x != r {
                thresholds.insert(b.depth_ij(r, x));
            }
        }
        for &c in &thresholds {
            let ball: Vec<usize> = (0..n)
                .filter(|&x| x == r || b.depth_ij(r, x) >= c)
                .collect();
            if ball.len() >= 2 {
                sets.insert(ball);
            }
        }
    }
    let mut warnings = Vec::new();
    let depth_of = |set: &[usize]| -> RationalDepth {
        let mut d: Option<RationalDepth> = None;
        for (k, &i) in set.iter().enumerate() {
            for &j in set.iter().skip(k + 1) {
                let dij = b.depth_ij(i, j);
                d = Some(match d {
                    None => dij,
                    Some(cur) => cur.min(dij),
                });
            }
        }
        d.expect("cluster has at least two members")
    };
    let mut nodes: Vec<(Vec<usize>, RationalDepth)> = Vec::new();
    let full: Vec<usize> = (0..n).collect();
    for set in sets {
        let d = depth_of(&set);
        nodes.push((set, d));
    }
    // The ball at the smallest realized threshold is the full set, so it is
    // always present; force its node to depth zero when needed.
    let full_depth = nodes
        .iter()
        .find(|(s, _)| *s == full)
        .map(|(_, d)| *d)
        .expect("full label set is always a threshold ball");
    if !full_depth.is_zero() {
        warnings.push(format!(
            "all pairwise depths are positive (minimum {full_depth}); adding a depth-zero root above the full set"
        ));
        nodes.push((full.clone(), RationalDepth::zero()));
    }
    // Sort by (size desc, depth asc): every node's ancestors precede it.
    nodes.sort_by(|a, b_| b_.0.len().cmp(&a.0.len()).then(a.1.cmp(&b_.1)));
    let mut clusters: Vec<Cluster> = Vec::with_capacity(nodes.len());
    let mut by_key = BTreeMap::new();
    for (set, d) in nodes {
        let mut parent = None;
        for (id, c) in clusters.iter().enumerate() {
            let contains = is_subset(&set, &c.members) && (c.members.len() > set.len() || c.depth < d);
            if contains {
                parent = match parent {
                    None => Some(id),
                    Some(p) => {
                        let pc: &Cluster = &clusters[p];
                        // Containing nodes are totally ordered; prefer the deepest.
                        if c.depth > pc.depth || (c.depth == pc.depth && c.members.len() < pc.members.len()) {
                            Some(id)
                        } else {
                            Some(p)
                        }
                    }
                };
            }
        }
        let id = clusters.len();
        by_key.insert((set.clone(), d), id);
        if let Some(p) = parent {
            clusters[p].children.push(id);
        }
        clusters.push(Cluster {
            members: set,
            depth: d,
            parent,
            children: Vec::new(),
            singletons: Vec::new(),
            v: Ratio::from_integer(0),
        });
    }
    let root = clusters
        .iter()
        .position(|c| c.parent.is_none())
        .expect("a root cluster exists");
    debug_assert!(clusters[root].depth.is_zero());
    for id in 0..clusters.len() {
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        for &ch in &clusters[id].children {
            covered.extend(clusters[ch].members.iter().copied());
        }
        clusters[id].singletons = clusters[id]
            .members
            .iter()
            .copied()
            .filter(|m| !covered.contains(m))
            .collect();
    }
    let mut pic = ClusterPicture {
        labels: b.labels().to_vec(),
        depth_matrix: b.depth_matrix().clone(),
        v_phi: b.v_phi,
        clusters,
        root,
        by_key,
        warnings,
    };
    for id in 0..pic.clusters.len() {
        let mut v = Ratio::from_integer(pic.v_phi);
        for r in 0..n {
            v += pic.clusters[pic.join(r, id)].depth.ratio();
        }
        pic.clusters[id].v = v;
    }
    Ok(pic)
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // Both sorted.
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

impl ClusterPicture {
    pub fn from_branch(b: &BranchDatum) -> Result<Self> {
        build_cluster_picture(b)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn root(&self) -> ClusterId {
        self.root
    }

    pub fn cluster(&self, id: ClusterId) -> &Cluster {
        &self.clusters[id]
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ClusterId> {
        0..self.clusters.len()
    }

    /// Ids sorted by canonical identifier, then depth. Deterministic
    /// iteration order for reports and violation lists.
    pub fn ids_canonical(&self) -> Vec<ClusterId> {
        let mut ids: Vec<ClusterId> = self.ids().collect();
        ids.sort_by_key(|&id| (self.canonical_id(id), self.clusters[id].depth));
        ids
    }

    pub fn depth_between(&self, i: usize, j: usize) -> RationalDepth {
        self.depth_matrix[i][j]
    }

    /// Canonical identifier: lexicographically sorted member labels joined
    /// by commas. The forced depth-zero root above a positive-depth full
    /// set shares its member set with its child; the deeper node gets an
    /// `@depth` suffix to keep identifiers unique.
    pub fn canonical_id(&self, id: ClusterId) -> String {
        let c = &self.clusters[id];
        let mut ls: Vec<&str> = c.members.iter().map(|&m| self.labels[m].as_str()).collect();
        ls.sort_unstable();
        let base = ls.join(",");
        let duplicated = self
            .clusters
            .iter()
            .enumerate()
            .any(|(other, o)| other != id && o.members == c.members);
        if duplicated && !c.depth.is_zero() {
            format!("{base}@{}", c.depth)
        } else {
            base
        }
    }

    pub fn find_by_id(&self, canonical: &str) -> Option<ClusterId> {
        self.ids().find(|&id| self.canonical_id(id) == canonical)
    }

    /// Finds the cluster with exactly these member labels (ignoring the
    /// duplicated-root corner, where it returns the deeper node).
    pub fn find_by_members(&self, members: &[&str]) -> Option<ClusterId> {
        let mut want: Vec<usize> = members
            .iter()
            .filter_map(|l| self.labels.iter().position(|x| x == l))
            .collect();
        if want.len() != members.len() {
            return None;
        }
        want.sort_unstable();
        let mut found: Option<ClusterId> = None;
        for id in self.ids() {
            if self.clusters[id].members == want {
                found = Some(match found {
                    None => id,
                    Some(prev) => {
                        if self.clusters[id].depth > self.clusters[prev].depth {
                            id
                        } else {
                            prev
                        }
                    }
                });
            }
        }
        found
    }

    /// Smallest cluster containing the label `r` together with cluster `s`;
    /// equals `s` when `r` is a member.
    pub fn join(&self, r: usize, s: ClusterId) -> ClusterId {
        let mut cur = s;
        loop {
            if self.clusters[cur].members.binary_search(&r).is_ok() {
                return cur;
            }
            cur = self.clusters[cur]
                .parent
                .expect("root contains every label");
        }
    }

    pub fn join_label(&self, label: &str, s: ClusterId) -> Result<ClusterId> {
        let r = self
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        Ok(self.join(r, s))
    }

    /// v_phi + sum over all labels of the join depth with `s`.
    pub fn v_of(&self, s: ClusterId) -> Ratio<i64> {
        self.clusters[s].v
    }

    pub fn classify(&self, s: ClusterId) -> ClassificationFlags {
        let c = &self.clusters[s];
        let size = c.members.len();
        let even = size % 2 == 0;
        let uebereven = even
            && c.singletons.is_empty()
            && c.children
                .iter()
                .all(|&ch| self.clusters[ch].members.len() % 2 == 0);
        ClassificationFlags {
            principal: size >= 3,
            twin: size == 2,
            even,
            uebereven,
            maximal: c.parent == Some(self.root),
        }
    }

    /// d_s - d_{P(s)}; errors on the root.
    pub fn relative_depth(&self, s: ClusterId) -> Result<Ratio<i64>> {
        let c = &self.clusters[s];
        let p = c.parent.ok_or(Error::RootCluster)?;
        Ok(c.depth.ratio() - self.clusters[p].depth.ratio())
    }

    /// Applies a label permutation if it preserves the depth matrix and
    /// returns the induced map on clusters, indexed by cluster id. Otherwise
    /// reports a witness pair on which depths disagree.
    pub fn apply_label_permutation(&self, perm: &Permutation) -> Result<Vec<ClusterId>> {
        let n = self.labels.len();
        if perm.len() != n {
            return Err(Error::InvalidPermutation(
                "permutation size does not match the label set".into(),
            ));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.depth_matrix[perm.apply(i)][perm.apply(j)] != self.depth_matrix[i][j] {
                    return Err(Error::NotAnAutomorphism(
                        self.labels[i].clone(),
                        self.labels[j].clone(),
                    ));
                }
            }
        }
        let mut map = vec![0; self.clusters.len()];
        for (id, c) in self.clusters.iter().enumerate() {
            let mut image: Vec<usize> = c.members.iter().map(|&m| perm.apply(m)).collect();
            image.sort_unstable();
            let target = self
                .by_key
                .get(&(image, c.depth))
                .copied()
                .expect("depth-preserving bijections map clusters to clusters");
            map[id] = target;
        }
        Ok(map)
    }

    /// Nested-parenthesis notation: "(" children and singleton labels ")_depth",
    /// child clusters first (ordered by least member label), labels sorted.
    pub fn render_ascii(&self) -> Result<String> {
        for l in &self.labels {
            if l.is_empty()
                || l.chars()
                    .any(|ch| ch.is_whitespace() || ch == '(' || ch == ')' || ch == '_')
            {
                return Err(Error::AsciiUnsafeLabel(l.clone()));
            }
        }
        Ok(self.render_node(self.root))
    }

    fn render_node(&self, id: ClusterId) -> String {
        let c = &self.clusters[id];
        let mut children: Vec<ClusterId> = c.children.clone();
        children.sort_by_key(|&ch| self.least_label(ch).to_string());
        let mut parts: Vec<String> = children.iter().map(|&ch| self.render_node(ch)).collect();
        let mut singles: Vec<&str> = c
            .singletons
            .iter()
            .map(|&m| self.labels[m].as_str())
            .collect();
        singles.sort_unstable();
        parts.extend(singles.iter().map(|s| s.to_string()));
        format!("({})_{}", parts.join(" "), c.depth)
    }

    fn least_label(&self, id: ClusterId) -> &str {
        self.clusters[id]
            .members
            .iter()
            .map(|&m| self.labels[m].as_str())
            .min()
            .expect("clusters are non-empty")
    }

    /// Builds a picture from cluster notation by realizing a depth matrix
    /// for the parsed tree (pairwise depth = depth of the least common
    /// ancestor).
    pub fn from_ascii(text: &str) -> Result<ClusterPicture> {
        let skeleton = parse_ascii(text)?;
        let (labels, entries, e) = skeleton.realize()?;
        let b = BranchDatum::new(labels, &entries, 0, e, 1, 3, 1)?;
        build_cluster_picture(&b)
    }
}

/// Parsed cluster-notation tree: depths and label placement only, no matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsciiNode {
    pub depth: RationalDepth,
    pub children: Vec<AsciiNode>,
    pub labels: Vec<String>,
}

impl AsciiNode {
    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a str>) {
        for c in &self.children {
            c.collect_labels(out);
        }
        for l in &self.labels {
            out.push(l);
        }
    }

    /// Produces labels and depth entries realizing this tree, plus the
    /// least e making every depth lie in (1/e)Z.
    #[allow(clippy::type_complexity)]
    pub fn realize(&self) -> Result<(Vec<String>, Vec<(String, String, RationalDepth)>, u32)> {
        let mut all: Vec<&str> = Vec::new();
        self.collect_labels(&mut all);
        let mut seen = BTreeSet::new();
        for l in &all {
            if !seen.insert(*l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        let labels: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        let mut entries = Vec::new();
        self.depth_entries(&mut entries);
        let mut e: i64 = 1;
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            e = num_integer::lcm(e, node.depth.denom());
            stack.extend(node.children.iter());
        }
        Ok((labels, entries, e as u32))
    }

    fn depth_entries(&self, out: &mut Vec<(String, String, RationalDepth)>) {
        // Pairs meeting first in this node get its depth.
        let mut groups: Vec<Vec<&str>> = Vec::new();
        for c in &self.children {
            let mut g = Vec::new();
            c.collect_labels(&mut g);
            groups.push(g);
        }
        for l in &self.labels {
            groups.push(vec![l]);
        }
        for (i, gi) in groups.iter().enumerate() {
            for gj in groups.iter().skip(i + 1) {
                for a in gi {
                    for b in gj {
                        if !self.depth.is_zero() {
                            out.push((a.to_string(), b.to_string(), self.depth));
                        }
                    }
                }
            }
        }
        for c in &self.children {
            c.depth_entries(out);
        }
    }
}

/// Parses the nested-parenthesis notation. The root must carry depth zero
/// and depths must strictly increase from parent to child.
pub fn parse_ascii(text: &str) -> Result<AsciiNode> {
    let mut tokens = tokenize(text)?;
    tokens.reverse();
    let node = parse_node(&mut tokens)?;
    if let Some(t) = tokens.pop() {
        return Err(Error::AsciiParse(format!("trailing input at `{t}`")));
    }
    if !node.depth.is_zero() {
        return Err(Error::AsciiParse(format!(
            "root cluster must have depth 0, got {}",
            node.depth
        )));
    }
    check_depths(&node)?;
    Ok(node)
}

fn check_depths(node: &AsciiNode) -> Result<()> {
    for c in &node.children {
        if c.depth <= node.depth {
            return Err(Error::AsciiParse(format!(
                "child depth {} does not exceed parent depth {}",
                c.depth, node.depth
            )));
        }
        check_depths(c)?;
    }
    Ok(())
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' | '_' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    if out.is_empty() {
        return Err(Error::AsciiParse("empty input".into()));
    }
    Ok(out)
}

fn parse_node(tokens: &mut Vec<String>) -> Result<AsciiNode> {
    match tokens.pop() {
        Some(t) if t == "(" => {}
        Some(t) => return Err(Error::AsciiParse(format!("expected `(`, got `{t}`"))),
        None => return Err(Error::AsciiParse("unbalanced parentheses".into())),
    }
    let mut children = Vec::new();
    let mut labels = Vec::new();
    loop {
        match tokens.last().map(|s| s.as_str()) {
            Some("(") => children.push(parse_node(tokens)?),
            Some(")") => {
                tokens.pop();
                break;
            }
            Some("_") => {
                return Err(Error::AsciiParse("unexpected `_` inside cluster".into()));
            }
            Some(_) => labels.push(tokens.pop().unwrap()),
            None => return Err(Error::AsciiParse("unbalanced parentheses".into())),
        }
    }
    match tokens.pop() {
        Some(t) if t == "_" => {}
        _ => return Err(Error::AsciiParse("cluster is missing its `_depth`".into())),
    }
    let depth_token = tokens
        .pop()
        .ok_or_else(|| Error::AsciiParse("missing depth token".into()))?;
    let depth: RationalDepth = depth_token
        .parse()
        .map_err(|_| Error::AsciiParse(format!("non-rational depth token `{depth_token}`")))?;
    if children.is_empty() && labels.len() < 2 && labels.len() + children.len() < 2 {
        return Err(Error::AsciiParse("clusters have at least two members".into()));
    }
    Ok(AsciiNode {
        depth,
        children,
        labels,
    })
}
