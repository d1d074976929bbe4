//! Component group of the graph Jacobian: cycle lattice with the length
//! pairing, invariant factors, the induced Frobenius action, and fixed
//! point counts, with a matrix-tree oracle alongside.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{UnitAutomorphism, UnitGraph};
use crate::matrix::{smith_normal_form, IntMatrix, RatMatrix, Snf};

/// Fundamental cycle basis of a connected unit multigraph and the pairing
/// matrix of the basis cycles (number of shared unit edges, signed).
#[derive(Clone, Debug)]
pub struct CycleLattice {
    /// One signed edge-incidence vector per basis cycle.
    pub cycles: Vec<Vec<i64>>,
    /// Edge indices of the non-tree edges, one per basis cycle.
    pub nontree: Vec<usize>,
    pub gram: IntMatrix,
}

/// Spanning-tree based cycle basis: breadth-first from the lexicographically
/// least vertex, one fundamental cycle per non-tree edge. Deterministic for
/// a fixed graph.
pub fn cycle_basis(g: &UnitGraph) -> Result<CycleLattice> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Disconnected);
    }
    let root = (0..n)
        .min_by_key(|&v| &g.names[v])
        .expect("graph has a vertex");
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        adjacency[a].push((b, e));
        if a != b {
            adjacency[b].push((a, e));
        }
    }
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut depth = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut tree_edge = vec![false; g.edges.len()];
    let mut queue = std::collections::VecDeque::new();
    visited[root] = true;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adjacency[v] {
            if !visited[w] {
                visited[w] = true;
                parent[w] = v;
                parent_edge[w] = Some(e);
                depth[w] = depth[v] + 1;
                tree_edge[e] = true;
                queue.push_back(w);
            }
        }
    }
    if visited.iter().any(|v| !v) {
        return Err(Error::Disconnected);
    }
    let mut cycles = Vec::new();
    let mut nontree = Vec::new();
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let mut vec = vec![0i64; g.edges.len()];
        vec[e] += 1;
        // Close up through the tree: walk b and a to their common ancestor.
        let (mut x, mut y) = (b, a);
        while depth[x] > depth[y] {
            vec[parent_edge[x].unwrap()] += tree_step_sign(g, parent_edge[x].unwrap(), x);
            x = parent[x];
        }
        while depth[y] > depth[x] {
            vec[parent_edge[y].unwrap()] -= tree_step_sign(g, parent_edge[y].unwrap(), y);
            y = parent[y];
        }
        while x != y {
            vec[parent_edge[x].unwrap()] += tree_step_sign(g, parent_edge[x].unwrap(), x);
            x = parent[x];
            vec[parent_edge[y].unwrap()] -= tree_step_sign(g, parent_edge[y].unwrap(), y);
            y = parent[y];
        }
        nontree.push(e);
        cycles.push(vec);
    }
    let k = cycles.len();
    let mut gram = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let mut s = 0i64;
            for e in 0..g.edges.len() {
                s += cycles[i][e] * cycles[j][e];
            }
            gram.set(i, j, BigInt::from(s));
        }
    }
    Ok(CycleLattice {
        cycles,
        nontree,
        gram,
    })
}

/// Sign of traversing tree edge `e` from child `child` toward its parent.
fn tree_step_sign(g: &UnitGraph, e: usize, child: usize) -> i64 {
    let (a, b) = g.edges[e];
    if b == child {
        // Edge points parent -> child; walking child -> parent goes against it.
        -1
    } else {
        debug_assert_eq!(a, child);
        1
    }
}

/// Finite abelian group presented by invariant factors, with the Smith
/// transforms that produced them.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    snf: Snf,
    diagonal: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        let empty = IntMatrix::zeros(0, 0);
        AbelianGroup {
            snf: smith_normal_form(&empty),
            diagonal: Vec::new(),
        }
    }

    /// All diagonal entries, including the trivial ones.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    /// The invariant factors greater than one.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }

    pub fn order(&self) -> BigInt {
        self.diagonal.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors().is_empty()
    }

    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    /// "Z/d1 x Z/d2 x ..." or "trivial".
    pub fn describe(&self) -> String {
        let fs = self.invariant_factors();
        if fs.is_empty() {
            "trivial".to_string()
        } else {
            fs.iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" x ")
        }
    }
}

/// The quotient of the dual lattice by the cycle lattice, as invariant
/// factors of the pairing matrix. Its order is the pairing determinant.
pub fn component_group(cl: &CycleLattice) -> Result<AbelianGroup> {
    if cl.gram.rows() > 0 && !cl.gram.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let snf = smith_normal_form(&cl.gram);
    let diagonal = snf.d.diagonal();
    Ok(AbelianGroup { snf, diagonal })
}

/// Action of a graph automorphism on the cycle lattice and on the component
/// group, in invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct InducedAction {
    /// Matrix on the cycle lattice in the fundamental basis.
    pub on_lambda: IntMatrix,
    /// Matrix on the component group in invariant-factor coordinates,
    /// rows reduced modulo the matching factor.
    pub on_phi: IntMatrix,
}

impl InducedAction {
    pub fn identity(rank: usize) -> Self {
        InducedAction {
            on_lambda: IntMatrix::identity(rank),
            on_phi: IntMatrix::identity(rank),
        }
    }

    /// Action matrix restricted to the nontrivial factors (for display).
    pub fn on_phi_block(&self, diagonal: &[BigInt]) -> IntMatrix {
        let idx: Vec<usize> = (0..diagonal.len())
            .filter(|&i| diagonal[i] > BigInt::one())
            .collect();
        let mut m = IntMatrix::zeros(idx.len(), idx.len());
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                m.set(r, c, self.on_phi.get(i, j).clone());
            }
        }
        m
    }
}

/// Transports an automorphism of the unit graph to the component group.
/// The image of each basis cycle is re-expressed in the basis by reading
/// its non-tree-edge coordinates; the pairing must be preserved exactly.
/// On the dual side the matrix is conjugated by the pairing and must stay
/// integral, and the Smith transform carries it to invariant coordinates.
pub fn induced_action(
    cl: &CycleLattice,
    group: &AbelianGroup,
    aut: &UnitAutomorphism,
) -> Result<InducedAction> {
    let k = cl.cycles.len();
    let ne = cl.cycles.first().map_or(0, |c| c.len());
    let mut a = IntMatrix::zeros(k, k);
    let mut images: Vec<Vec<i64>> = Vec::with_capacity(k);
    for basis_cycle in &cl.cycles {
        let mut image = vec![0i64; ne];
        for (e, &coef) in basis_cycle.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            let (e2, s) = aut.edge_map[e];
            image[e2] += coef * s as i64;
        }
        images.push(image);
    }
    for (col, image) in images.iter().enumerate() {
        for (row, &edge) in cl.nontree.iter().enumerate() {
            a.set(row, col, BigInt::from(image[edge]));
        }
    }
    // The coordinates must reproduce the image exactly.
    for (col, image) in images.iter().enumerate() {
        let mut recon = vec![0i64; ne];
        for (row, cycle) in cl.cycles.iter().enumerate() {
            let coef = a
                .get(row, col)
                .to_i64()
                .ok_or(Error::NotACycleImage)?;
            for (e, &c) in cycle.iter().enumerate() {
                recon[e] += coef * c;
            }
        }
        if recon != *image {
            return Err(Error::NotACycleImage);
        }
    }
    let gram = &cl.gram;
    if a.transpose().mul(gram).mul(&a) != *gram {
        return Err(Error::PairingNotPreserved);
    }
    let on_phi = if k == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        let g_inv = gram.inverse_rational()?;
        let b = RatMatrix::from_int(&gram.mul(&a)).mul(&g_inv).to_int()?;
        let u = &group.snf().u;
        let u_inv = u.inverse_rational()?;
        let m = RatMatrix::from_int(&u.mul(&b)).mul(&u_inv).to_int()?;
        reduce_rows_mod(&m, group.diagonal())
    };
    Ok(InducedAction { on_lambda: a, on_phi })
}

fn reduce_rows_mod(m: &IntMatrix, diagonal: &[BigInt]) -> IntMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let d = &diagonal[i];
        if d.is_zero() {
            continue;
        }
        for j in 0..m.cols() {
            out.set(i, j, m.get(i, j).mod_floor(d));
        }
    }
    out
}

/// Counts the elements of the component group fixed by the action, by
/// direct enumeration. Errors when the group order exceeds `max_enum`.
pub fn fixed_point_count(
    group: &AbelianGroup,
    action: &InducedAction,
    max_enum: u64,
) -> Result<u64> {
    let order = group.order();
    if order > BigInt::from(max_enum) {
        return Err(Error::EnumerationBoundExceeded(order.to_string(), max_enum));
    }
    let idx: Vec<usize> = (0..group.diagonal().len())
        .filter(|&i| group.diagonal()[i] > BigInt::one())
        .collect();
    let factors: Vec<i64> = idx
        .iter()
        .map(|&i| group.diagonal()[i].to_i64().expect("bounded by max_enum"))
        .collect();
    let m: Vec<Vec<i64>> = idx
        .iter()
        .map(|&i| {
            idx.iter()
                .map(|&j| {
                    action
                        .on_phi
                        .get(i, j)
                        .to_i64()
                        .expect("entries are reduced modulo the factors")
                })
                .collect()
        })
        .collect();
    let k = factors.len();
    if k == 0 {
        return Ok(1);
    }
    let mut x = vec![0i64; k];
    let mut count = 0u64;
    loop {
        let mut fixed = true;
        for i in 0..k {
            let mut s: i128 = 0;
            for j in 0..k {
                s += m[i][j] as i128 * x[j] as i128;
            }
            s -= x[i] as i128;
            if s.rem_euclid(factors[i] as i128) != 0 {
                fixed = false;
                break;
            }
        }
        if fixed {
            count += 1;
        }
        // Odometer.
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(count);
            }
            x[pos] += 1;
            if x[pos] < factors[pos] {
                break;
            }
            x[pos] = 0;
            pos += 1;
        }
    }
}

/// Fixed points by congruence solving: the kernel size of (action - 1) on
/// the group equals the product of the invariant factors of the block
/// matrix [action - 1 | diag]. Agrees with enumeration wherever both run.
pub fn fixed_point_count_algebraic(group: &AbelianGroup, action: &InducedAction) -> BigInt {
    let idx: Vec<usize> = (0..group.diagonal().len())
        .filter(|&i| group.diagonal()[i] > BigInt::one())
        .collect();
    let k = idx.len();
    if k == 0 {
        return BigInt::one();
    }
    let mut stacked = IntMatrix::zeros(k, 2 * k);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            let mut v = action.on_phi.get(i, j).clone();
            if i == j {
                v -= BigInt::one();
            }
            stacked.set(r, c, v);
        }
        stacked.set(r, k + r, group.diagonal()[i].clone());
    }
    let snf = smith_normal_form(&stacked);
    snf.nonzero_diagonal().iter().map(|d| d.abs()).product()
}

/// Kirchhoff count: any cofactor of the graph Laplacian, in exact integer
/// arithmetic. Loops do not contribute.
pub fn spanning_tree_count(g: &UnitGraph) -> Result<BigInt> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Disconnected);
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let mut lap = IntMatrix::zeros(n, n);
    for &(a, b) in &g.edges {
        if a == b {
            continue;
        }
        let v = lap.get(a, a) + 1;
        lap.set(a, a, v);
        let v = lap.get(b, b) + 1;
        lap.set(b, b, v);
        let v = lap.get(a, b) - 1;
        lap.set(a, b, v);
        let v = lap.get(b, a) - 1;
        lap.set(b, a, v);
    }
    let mut minor = IntMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            minor.set(i, j, lap.get(i, j).clone());
        }
    }
    Ok(minor.det())
}
