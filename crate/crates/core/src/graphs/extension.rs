//! d-dimensional k-extensions, random generation of (n−1, n)-tight multigraphs
//! from K₂ⁿ⁻², and the reverse search that decomposes a tight multigraph.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sparsity::{is_sparse, PebbleGame};
use super::Multigraph;
use crate::error::{bail, Result};
use crate::rng::rng_from_seed;

/// A d-dimensional k-extension: delete the k listed edges, add a new vertex v*
/// joined twice to the endpoints of each deleted edge and once to each attach vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionMove {
    pub dim: usize,
    pub deleted_edges: Vec<usize>,
    pub attach_vertices: Vec<usize>,
}

impl ExtensionMove {
    pub fn order(&self) -> usize {
        self.deleted_edges.len()
    }

    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        let k = self.order();
        if k > self.dim {
            bail!(Precondition, "extension order k = {k} exceeds dimension d = {}", self.dim);
        }
        if self.attach_vertices.len() + k != self.dim {
            bail!(
                Precondition,
                "need d − k = {} attach vertices, got {}",
                self.dim - k,
                self.attach_vertices.len()
            );
        }
        let mut seen = HashSet::new();
        for &e in &self.deleted_edges {
            if e >= g.edge_count() {
                bail!(Precondition, "deleted edge {e} does not exist");
            }
            if !seen.insert(e) {
                bail!(Precondition, "edge {e} deleted twice");
            }
        }
        if let Some(&v) = self.attach_vertices.iter().find(|&&v| v >= g.vertex_count()) {
            bail!(Precondition, "attach vertex {v} does not exist");
        }
        Ok(())
    }

    /// Id the new vertex will get in `g`.
    pub fn new_vertex(&self, g: &Multigraph) -> usize {
        g.vertex_count()
    }

    /// Old ids of the surviving edges, in their order in the extended graph.
    pub fn kept_edges(&self, edge_count: usize) -> Vec<usize> {
        (0..edge_count).filter(|e| !self.deleted_edges.contains(e)).collect()
    }

    /// Endpoints of f₁ … f_{d+k}: (v*, u_j), (v*, u_j') for each deleted edge,
    /// then (v*, v_j) for each attach vertex.
    pub fn new_edges(&self, g: &Multigraph) -> Vec<(usize, usize)> {
        let star = self.new_vertex(g);
        let mut out = Vec::with_capacity(self.dim + self.order());
        for &e in &self.deleted_edges {
            let (u, w) = g.edge(e);
            out.push((star, u));
            out.push((star, w));
        }
        out.extend(self.attach_vertices.iter().map(|&v| (star, v)));
        out
    }
}

/// Kept edges keep their relative order; f₁ … f_{d+k} are appended.
pub fn apply_extension(g: &Multigraph, m: &ExtensionMove) -> Result<Multigraph> {
    m.validate(g)?;
    let fresh = m.new_edges(g);
    let mut out = g.clone();
    out.add_vertex();
    let kept = m.kept_edges(g.edge_count());
    let mut edges: Vec<(usize, usize)> = kept.iter().map(|&e| g.edge(e)).collect();
    edges.extend(fresh);
    Multigraph::new(out.labels().to_vec(), edges)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightGeneration {
    pub graph: Multigraph,
    pub moves: Vec<ExtensionMove>,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn respects_parallel_bound(g: &Multigraph, bound: usize) -> bool {
    g.max_multiplicity() <= bound
}

/// Builds an (n−1, n)-tight multigraph on `target_vertices` vertices by random
/// (n−1)-dimensional k-extensions of K₂ⁿ⁻², keeping at most n − 2 parallel
/// edges per pair. Each step is uniform over the valid moves, where a move is a
/// set of deleted edges and a multiset of attach vertices.
pub fn generate_tight(n: usize, target_vertices: usize, seed: u64) -> Result<TightGeneration> {
    if n < 3 {
        bail!(Precondition, "need n ≥ 3, got {n}");
    }
    if target_vertices < 2 {
        bail!(Precondition, "need at least 2 vertices, got {target_vertices}");
    }
    let d = n - 1;
    let mut rng = rng_from_seed(seed);
    let mut g = Multigraph::k2(n - 2);
    let mut moves = Vec::new();
    while g.vertex_count() < target_vertices {
        let m = sample_valid_move(&g, d, n - 2, &mut rng)?;
        g = apply_extension(&g, &m)?;
        moves.push(m);
    }
    let rep = is_sparse(&g, d, n)?;
    if !rep.tight {
        bail!(Internal, "generated graph is not ({d}, {n})-tight");
    }
    Ok(TightGeneration { graph: g, moves })
}

fn sample_valid_move<R: Rng + ?Sized>(g: &Multigraph, d: usize, bound: usize, rng: &mut R) -> Result<ExtensionMove> {
    let (ne, nv) = (g.edge_count(), g.vertex_count());
    // Weight of order k: (#edge subsets) × (#attach multisets).
    let weights: Vec<u128> = (0..=d)
        .map(|k| binomial(ne as u128, k as u128) * binomial((nv + d - k - 1) as u128, (d - k) as u128))
        .collect();
    let total: u128 = weights.iter().sum();
    for _ in 0..100_000 {
        let mut pick = rng.gen_range(0..total);
        let k = weights
            .iter()
            .position(|&w| {
                if pick < w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .expect("pick < total");
        let mut deleted = sample(rng, ne, k).into_vec();
        deleted.sort_unstable();
        let m = d - k;
        let mut slots = sample(rng, nv + m - 1, m).into_vec();
        slots.sort_unstable();
        let attach = slots.iter().enumerate().map(|(i, &p)| p - i).collect();
        let mv = ExtensionMove {
            dim: d,
            deleted_edges: deleted,
            attach_vertices: attach,
        };
        if respects_parallel_bound(&apply_extension(g, &mv)?, bound) {
            return Ok(mv);
        }
    }
    bail!(Internal, "no valid extension found after 100000 proposals")
}

/// A replayable decomposition: `moves` rebuild the graph from K₂ⁿ⁻², and replay
/// vertex i corresponds to input vertex `vertex_order[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub moves: Vec<ExtensionMove>,
    pub vertex_order: Vec<usize>,
    /// replay edge id → input edge id
    pub edge_order: Vec<usize>,
}

/// One reverse step in input-vertex names.
#[derive(Clone, Debug)]
struct Reduction {
    vertex: usize,
    pairs: Vec<(usize, usize)>,
    attach: Vec<usize>,
}

/// Default node budget for [`decompose_tight`].
pub const DECOMPOSE_BUDGET: usize = 200_000;

/// Backtracking search over reverse k-extensions down to K₂ⁿ⁻². Returns
/// `Ok(None)` only when `budget` search nodes were spent without an answer.
pub fn decompose_tight(g: &Multigraph, n: usize, budget: usize) -> Result<Option<Decomposition>> {
    if n < 3 {
        bail!(Precondition, "need n ≥ 3, got {n}");
    }
    let d = n - 1;
    if g.vertex_count() < 2 || !is_sparse(g, d, n)?.tight {
        bail!(Precondition, "graph is not ({d}, {n})-tight");
    }
    if g.max_multiplicity() > n - 2 {
        bail!(Precondition, "more than {} parallel edges on a pair", n - 2);
    }
    let vertices: Vec<usize> = (0..g.vertex_count()).collect();
    let edges = g.edge_multiset();
    let mut state = Search {
        d,
        n,
        budget,
        failed: HashSet::new(),
    };
    // Reductions come back innermost first, which is already forward order.
    let Some(reductions) = state.run(&vertices, &edges)? else {
        if state.budget > 0 {
            bail!(Internal, "exhaustive search found no decomposition of a tight graph");
        }
        return Ok(None);
    };
    replay(g, n, &vertices, &reductions).map(Some)
}

struct Search {
    d: usize,
    n: usize,
    budget: usize,
    failed: HashSet<Vec<(usize, usize)>>,
}

impl Search {
    fn run(&mut self, vertices: &[usize], edges: &[(usize, usize)]) -> Result<Option<Vec<Reduction>>> {
        if vertices.len() == 2 {
            return Ok(Some(Vec::new()));
        }
        if self.failed.contains(edges) {
            return Ok(None);
        }
        let mut order: Vec<(usize, usize)> = vertices
            .iter()
            .map(|&v| (edges.iter().filter(|&&(a, b)| a == v || b == v).count(), v))
            .filter(|&(deg, _)| deg >= self.d && deg <= 2 * self.d)
            .collect();
        order.sort_unstable();
        for (deg, star) in order {
            let k = deg - self.d;
            let nbrs: Vec<usize> = edges
                .iter()
                .filter_map(|&(a, b)| {
                    if a == star {
                        Some(b)
                    } else if b == star {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect();
            let rest: Vec<(usize, usize)> = edges.iter().copied().filter(|&(a, b)| a != star && b != star).collect();
            let remaining: Vec<usize> = vertices.iter().copied().filter(|&v| v != star).collect();
            for (pairs, attach) in pairings(&nbrs, k) {
                if self.budget == 0 {
                    return Ok(None);
                }
                self.budget -= 1;
                let mut next = rest.clone();
                next.extend(pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))));
                next.sort_unstable();
                if !self.admissible(&remaining, &next)? {
                    continue;
                }
                match self.run(&remaining, &next)? {
                    Some(mut path) => {
                        path.push(Reduction { vertex: star, pairs, attach });
                        return Ok(Some(path));
                    }
                    None if self.budget == 0 => return Ok(None),
                    None => {}
                }
            }
        }
        self.failed.insert(edges.to_vec());
        Ok(None)
    }

    fn admissible(&self, vertices: &[usize], edges: &[(usize, usize)]) -> Result<bool> {
        if edges.chunk_by(|a, b| a == b).any(|c| c.len() > self.n - 2) {
            return Ok(false);
        }
        let mut index = std::collections::HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            index.insert(v, i);
        }
        let mut game = PebbleGame::new(vertices.len(), self.d, self.n)?;
        Ok(edges.iter().all(|(a, b)| game.try_insert(index[a], index[b]).is_ok()))
    }
}

/// All ways to pick k disjoint pairs (of distinct vertices) out of the neighbour
/// multiset, up to reordering; the leftover neighbours are the attach vertices.
fn pairings(nbrs: &[usize], k: usize) -> Vec<(Vec<(usize, usize)>, Vec<usize>)> {
    let mut sorted = nbrs.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut used = vec![false; sorted.len()];
    let mut pairs = Vec::new();
    fn rec(
        sorted: &[usize],
        k: usize,
        start: usize,
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        seen: &mut HashSet<Vec<(usize, usize)>>,
        out: &mut Vec<(Vec<(usize, usize)>, Vec<usize>)>,
    ) {
        if pairs.len() == k {
            let mut key = pairs.clone();
            key.sort_unstable();
            if seen.insert(key.clone()) {
                let attach = (0..sorted.len()).filter(|&i| !used[i]).map(|i| sorted[i]).collect();
                out.push((key, attach));
            }
            return;
        }
        for i in start..sorted.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            for j in i + 1..sorted.len() {
                if used[j] || sorted[j] == sorted[i] {
                    continue;
                }
                used[j] = true;
                pairs.push((sorted[i], sorted[j]));
                rec(sorted, k, i + 1, used, pairs, seen, out);
                pairs.pop();
                used[j] = false;
            }
            used[i] = false;
        }
    }
    rec(&sorted, k, 0, &mut used, &mut pairs, &mut seen, &mut out);
    out
}

fn replay(g: &Multigraph, n: usize, vertices: &[usize], reductions: &[Reduction]) -> Result<Decomposition> {
    let removed: HashSet<usize> = reductions.iter().map(|r| r.vertex).collect();
    let mut vertex_order: Vec<usize> = vertices.iter().copied().filter(|v| !removed.contains(v)).collect();
    let mut current = Multigraph::k2(n - 2);
    let mut moves = Vec::with_capacity(reductions.len());
    for red in reductions {
        let local = |v: usize| vertex_order.iter().position(|&x| x == v).expect("vertex already placed");
        let mut deleted = Vec::with_capacity(red.pairs.len());
        for &(a, b) in &red.pairs {
            let (la, lb) = (local(a), local(b));
            let e = (0..current.edge_count())
                .find(|e| {
                    let (x, y) = current.edge(*e);
                    !deleted.contains(e) && ((x, y) == (la, lb) || (x, y) == (lb, la))
                })
                .ok_or_else(|| crate::error::Error::Internal("replay lost a paired edge".into()))?;
            deleted.push(e);
        }
        let mv = ExtensionMove {
            dim: n - 1,
            deleted_edges: deleted,
            attach_vertices: red.attach.iter().map(|&v| local(v)).collect(),
        };
        current = apply_extension(&current, &mv)?;
        moves.push(mv);
        vertex_order.push(red.vertex);
    }
    // Match replay edges to input edges pair by pair.
    let mut pool: Vec<Option<(usize, usize)>> = g.edges().iter().map(|&(a, b)| Some((a.min(b), a.max(b)))).collect();
    let mut edge_order = Vec::with_capacity(current.edge_count());
    for &(x, y) in current.edges() {
        let (a, b) = (vertex_order[x], vertex_order[y]);
        let key = (a.min(b), a.max(b));
        let Some(pos) = pool.iter().position(|p| *p == Some(key)) else {
            bail!(Internal, "replayed graph differs from the input");
        };
        pool[pos] = None;
        edge_order.push(pos);
    }
    if pool.iter().any(Option::is_some) {
        bail!(Internal, "replayed graph differs from the input");
    }
    Ok(Decomposition {
        moves,
        vertex_order,
        edge_order,
    })
}

/// Multigraph isomorphism by backtracking; intended for small graphs.
pub fn are_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let adj = |g: &Multigraph| {
        let mut m = vec![vec![0usize; n]; n];
        for &(u, v) in g.edges() {
            m[u][v] += 1;
            m[v][u] += 1;
        }
        m
    };
    let (ma, mb) = (adj(a), adj(b));
    let deg = |m: &Vec<Vec<usize>>, v: usize| m[v].iter().sum::<usize>();
    let mut da: Vec<usize> = (0..n).map(|v| deg(&ma, v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| deg(&mb, v)).collect();
    let (ra, rb) = (da.clone(), db.clone());
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    fn extend(i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, ma: &[Vec<usize>], mb: &[Vec<usize>], ra: &[usize], rb: &[usize]) -> bool {
        let n = ma.len();
        if i == n {
            return true;
        }
        for t in 0..n {
            if used[t] || ra[i] != rb[t] || ma[i][i] != mb[t][t] {
                continue;
            }
            if (0..i).any(|j| ma[i][j] != mb[t][map[j]]) {
                continue;
            }
            used[t] = true;
            map.push(t);
            if extend(i + 1, map, used, ma, mb, ra, rb) {
                return true;
            }
            map.pop();
            used[t] = false;
        }
        false
    }
    extend(0, &mut Vec::new(), &mut vec![false; n], &ma, &mb, &ra, &rb)
}
