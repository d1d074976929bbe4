//! Admissible disc collection of a cluster picture, its rooted tree, the
//! disc invariants, and the classification of special-fiber components.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;

use crate::cluster::{ClusterId, ClusterPicture};
use crate::error::{Error, Result};

pub type DiscId = usize;

/// An integral disc: the ball of the origin cluster's members at an integer
/// depth d with d_{P(s)} < d <= d_s. The member set equals the origin
/// cluster's member set; `defining` marks d = d_s.
#[derive(Clone, Debug)]
pub struct Disc {
    pub origin: ClusterId,
    pub depth: i64,
    pub defining: bool,
    pub parent: Option<DiscId>,
    pub children: Vec<DiscId>,
    pub v: i64,
}

/// The complete nested collection of integral discs over the picture,
/// rooted at the depth-zero disc containing every label.
#[derive(Clone, Debug)]
pub struct DiscCollection {
    discs: Vec<Disc>,
    root: DiscId,
    by_key: BTreeMap<(ClusterId, i64), DiscId>,
}

/// Builds the collection. For each non-root cluster s the discs are
/// (s, d) for every integer d with d_{P(s)} < d <= floor(d_s); the root
/// cluster contributes the depth-zero disc. Parent links follow the
/// depth-minus-one rule, so consecutive depths along any path differ by
/// exactly one.
pub fn build_disc_collection(pic: &ClusterPicture) -> Result<DiscCollection> {
    for id in pic.ids() {
        if pic.classify(id).principal && !pic.cluster(id).depth.is_integer() {
            return Err(Error::NonIntegralPrincipalDepth(pic.canonical_id(id)));
        }
    }
    let mut discs: Vec<Disc> = Vec::new();
    let mut by_key: BTreeMap<(ClusterId, i64), DiscId> = BTreeMap::new();
    // Deterministic order: clusters by canonical id, depths ascending.
    for cid in pic.ids_canonical() {
        let c = pic.cluster(cid);
        let (lo, hi) = match c.parent {
            None => (0, 0),
            Some(p) => {
                let pd = pic.cluster(p).depth;
                debug_assert!(pd.is_integer(), "parents of proper clusters are integral");
                (pd.floor_int() + 1, c.depth.floor_int())
            }
        };
        for d in lo..=hi {
            let defining = c.depth.is_integer() && c.depth.floor_int() == d;
            let id = discs.len();
            by_key.insert((cid, d), id);
            discs.push(Disc {
                origin: cid,
                depth: d,
                defining,
                parent: None,
                children: Vec::new(),
                v: 0,
            });
        }
    }
    let root = by_key
        .get(&(pic.root(), 0))
        .copied()
        .expect("root disc exists");
    for id in 0..discs.len() {
        if id == root {
            continue;
        }
        let cid = discs[id].origin;
        let d = discs[id].depth;
        let parent = if let Some(&p) = by_key.get(&(cid, d - 1)) {
            p
        } else {
            let pc = pic.cluster(cid).parent.expect("non-root disc origin has a parent");
            *by_key
                .get(&(pc, d - 1))
                .expect("complete collections contain the depth d - 1 disc")
        };
        discs[id].parent = Some(parent);
        discs[parent].children.push(id);
    }
    let mut dc = DiscCollection { discs, root, by_key };
    for id in 0..dc.discs.len() {
        dc.discs[id].v = disc_invariant_v(&dc, pic, id)?;
    }
    Ok(dc)
}

/// v_phi plus, over every label r, the depth of the join of r with the
/// disc: the disc depth for members, and the depth of the smallest cluster
/// containing r and the origin (capped at the disc depth) otherwise.
fn disc_invariant_v(dc: &DiscCollection, pic: &ClusterPicture, id: DiscId) -> Result<i64> {
    let disc = &dc.discs[id];
    let cap = Ratio::from_integer(disc.depth);
    let mut v = Ratio::from_integer(pic.v_phi);
    for r in 0..pic.label_count() {
        let join = pic.join(r, disc.origin);
        v += pic.cluster(join).depth.ratio().min(cap);
    }
    if !v.is_integer() {
        return Err(Error::InvalidInput(format!(
            "disc invariant v is not integral ({v}); principal depths must be integers"
        )));
    }
    Ok(v.to_integer())
}

impl DiscCollection {
    pub fn root(&self) -> DiscId {
        self.root
    }

    pub fn disc(&self, id: DiscId) -> &Disc {
        &self.discs[id]
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = DiscId> {
        0..self.discs.len()
    }

    pub fn find(&self, origin: ClusterId, depth: i64) -> Option<DiscId> {
        self.by_key.get(&(origin, depth)).copied()
    }

    pub fn members<'a>(&self, pic: &'a ClusterPicture, id: DiscId) -> &'a [usize] {
        &pic.cluster(self.discs[id].origin).members
    }

    /// Rooted tree view: preorder traversal with tree depth, children in
    /// construction order.
    pub fn tree(&self) -> DiscTree {
        let mut order = Vec::with_capacity(self.discs.len());
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, level)) = stack.pop() {
            order.push((id, level));
            for &ch in self.discs[id].children.iter().rev() {
                stack.push((ch, level + 1));
            }
        }
        DiscTree { order }
    }

    /// Whether the component above this disc splits in two: the disc is
    /// even and every ball of its members at the next depth is even. For a
    /// disc strictly above its origin's depth the single ball is the origin
    /// itself; for a defining disc the balls are the child clusters and the
    /// stray singleton members.
    pub fn uebereven(&self, pic: &ClusterPicture, id: DiscId) -> bool {
        let disc = &self.discs[id];
        let c = pic.cluster(disc.origin);
        if c.members.len() % 2 != 0 {
            return false;
        }
        if c.depth.ratio() > Ratio::from_integer(disc.depth) {
            return true; // one ball, the origin itself, of even size
        }
        c.singletons.is_empty()
            && c.children
                .iter()
                .all(|&ch| pic.cluster(ch).members.len() % 2 == 0)
    }

    /// Twins inside the disc sitting exactly half a step deeper; each one
    /// contributes a node on (or between) the components above the disc.
    pub fn half_step_twins(&self, pic: &ClusterPicture, id: DiscId) -> Vec<ClusterId> {
        let disc = &self.discs[id];
        let target = Ratio::from_integer(disc.depth) + Ratio::new(1, 2);
        let set = &pic.cluster(disc.origin).members;
        pic.ids()
            .filter(|&t| {
                pic.classify(t).twin
                    && pic.cluster(t).depth.ratio() == target
                    && is_subset_sorted(&pic.cluster(t).members, set)
            })
            .collect()
    }
}

fn is_subset_sorted(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// Preorder view of the disc tree.
#[derive(Clone, Debug)]
pub struct DiscTree {
    order: Vec<(DiscId, usize)>,
}

impl DiscTree {
    pub fn preorder(&self) -> &[(DiscId, usize)] {
        &self.order
    }

    pub fn render_text(&self, dc: &DiscCollection, pic: &ClusterPicture) -> String {
        let mut out = String::new();
        for &(id, level) in &self.order {
            let disc = dc.disc(id);
            let members: Vec<&str> = dc
                .members(pic, id)
                .iter()
                .map(|&m| pic.labels()[m].as_str())
                .collect();
            let mut sorted = members.clone();
            sorted.sort_unstable();
            out.push_str(&"  ".repeat(level));
            out.push_str(&format!(
                "[{}] depth {} v {}{}\n",
                sorted.join(" "),
                disc.depth,
                disc.v,
                if disc.defining { " defining" } else { "" }
            ));
        }
        out
    }
}

/// How the special fiber sits above one disc's component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberKind {
    /// Root disc, not uebereven: one component, a self-intersection per
    /// depth-1/2 twin.
    RootSingle,
    /// Root disc, uebereven: two components meeting at each depth-1/2 twin.
    RootPair,
    /// Defining disc of an uebereven cluster: two smooth curves meeting at
    /// each half-step twin.
    UeberevenPair,
    /// Defining disc of a non-uebereven cluster: one component with a
    /// self-intersection per half-step twin.
    DefiningSingle,
    /// Disc whose members are exactly a twin half a step deeper: two
    /// projective lines meeting at one point.
    HalfTwinPair,
    /// Odd v: one projective line of multiplicity two, self-intersection
    /// -1, contracted in the minimal model.
    OddExceptional,
    /// Remaining chain discs: two components when even, one when odd.
    Generic,
}

impl FiberKind {
    pub fn case_number(&self) -> u8 {
        match self {
            FiberKind::RootSingle => 1,
            FiberKind::RootPair => 2,
            FiberKind::UeberevenPair => 3,
            FiberKind::DefiningSingle => 4,
            FiberKind::HalfTwinPair => 5,
            FiberKind::OddExceptional => 6,
            FiberKind::Generic => 7,
        }
    }
}

/// Description of the fiber above one disc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDescriptor {
    pub kind: FiberKind,
    pub component_count: u8,
    pub multiplicity: u8,
    pub self_chains: u32,
    pub exceptional: bool,
}

/// Classifies the fiber above a disc; cases are tried in order from most
/// specific to generic, first match wins. Errors when the collection shows
/// an impossible parity (odd v on a defining or even disc), which signals a
/// non-semi-stable input.
pub fn classify_fiber(
    dc: &DiscCollection,
    pic: &ClusterPicture,
    id: DiscId,
) -> Result<FiberDescriptor> {
    let disc = dc.disc(id);
    let origin = pic.cluster(disc.origin);
    let size = origin.members.len();
    let v_odd = disc.v.is_odd();
    if v_odd && (disc.defining || size % 2 == 0) {
        return Err(Error::NotSemistable(vec![]));
    }
    let uebereven_disc = dc.uebereven(pic, id);
    let self_chains = dc.half_step_twins(pic, id).len() as u32;
    let kind = if id == dc.root() {
        if pic.classify(disc.origin).uebereven {
            FiberKind::RootPair
        } else {
            FiberKind::RootSingle
        }
    } else if disc.defining {
        if pic.classify(disc.origin).uebereven {
            FiberKind::UeberevenPair
        } else {
            FiberKind::DefiningSingle
        }
    } else if pic.classify(disc.origin).twin
        && origin.depth.ratio() == Ratio::from_integer(disc.depth) + Ratio::new(1, 2)
    {
        FiberKind::HalfTwinPair
    } else if v_odd {
        FiberKind::OddExceptional
    } else {
        FiberKind::Generic
    };
    let component_count = if uebereven_disc { 2 } else { 1 };
    debug_assert_eq!(
        component_count,
        match kind {
            FiberKind::RootSingle | FiberKind::DefiningSingle | FiberKind::OddExceptional => 1,
            FiberKind::RootPair | FiberKind::UeberevenPair | FiberKind::HalfTwinPair => 2,
            FiberKind::Generic =>
                if size % 2 == 0 {
                    2
                } else {
                    1
                },
        }
    );
    Ok(FiberDescriptor {
        kind,
        component_count,
        multiplicity: if v_odd { 2 } else { 1 },
        self_chains,
        exceptional: v_odd,
    })
}
