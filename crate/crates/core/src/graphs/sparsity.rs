//! (d, ℓ)-sparsity. Multigraphs use the pebble game (valid for 0 ≤ ℓ < 2d);
//! hypergraphs of higher rank fall back to subset enumeration.

use serde::Serialize;

use super::{Hypergraph, Multigraph};
use crate::error::{bail, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsityReport {
    pub sparse: bool,
    pub tight: bool,
    /// A vertex set spanning more than d|V'| − ℓ edges, when not sparse.
    pub violating_set: Option<Vec<usize>>,
}

/// Incremental pebble game. Each vertex holds d pebbles; an accepted edge is
/// directed away from the vertex whose pebble covers it.
#[derive(Clone, Debug)]
pub struct PebbleGame {
    l: usize,
    pebbles: Vec<usize>,
    out: Vec<Vec<usize>>,
    accepted: usize,
}

impl PebbleGame {
    pub fn new(vertices: usize, d: usize, l: usize) -> Result<Self> {
        if d == 0 || l >= 2 * d {
            bail!(Precondition, "pebble game needs 0 ≤ ℓ < 2d, got d = {d}, ℓ = {l}; use the brute-force oracle");
        }
        Ok(PebbleGame {
            l,
            pebbles: vec![d; vertices],
            out: vec![Vec::new(); vertices],
            accepted: 0,
        })
    }

    pub fn accepted(&self) -> usize {
        self.accepted
    }

    /// Moves one pebble to `root` along a directed path avoiding `keep`.
    fn fetch_pebble(&mut self, root: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        seen[keep] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for i in 0..self.out[x].len() {
                let y = self.out[x][i];
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    // Reverse the path root → … → y.
                    self.pebbles[y] -= 1;
                    self.pebbles[root] += 1;
                    let mut head = y;
                    while head != root {
                        let tail = parent[head];
                        let pos = self.out[tail].iter().position(|&h| h == head).expect("path edge exists");
                        self.out[tail].swap_remove(pos);
                        self.out[head].push(tail);
                        head = tail;
                    }
                    return true;
                }
                stack.push(y);
            }
        }
        false
    }

    fn reach(&self, starts: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack: Vec<usize> = starts.to_vec();
        for &s in starts {
            seen[s] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// Accepts uv if it stays independent; otherwise returns the blocking vertex set.
    pub fn try_insert(&mut self, u: usize, v: usize) -> std::result::Result<(), Vec<usize>> {
        while self.pebbles[u] + self.pebbles[v] < self.l + 1 {
            if !self.fetch_pebble(u, v) && !self.fetch_pebble(v, u) {
                return Err(self.reach(&[u, v]));
            }
        }
        if self.pebbles[u] > 0 {
            self.pebbles[u] -= 1;
            self.out[u].push(v);
        } else {
            self.pebbles[v] -= 1;
            self.out[v].push(u);
        }
        self.accepted += 1;
        Ok(())
    }

    /// Independence test without committing the edge.
    pub fn would_accept(&self, u: usize, v: usize) -> bool {
        self.clone().try_insert(u, v).is_ok()
    }
}

fn tight_count(vertices: usize, edges: usize, d: usize, l: usize) -> bool {
    (edges + l) as i64 == (d * vertices) as i64
}

/// (d, ℓ)-sparsity of a multigraph via the pebble game.
pub fn is_sparse(g: &Multigraph, d: usize, l: usize) -> Result<SparsityReport> {
    let mut game = PebbleGame::new(g.vertex_count(), d, l)?;
    for &(u, v) in g.edges() {
        if let Err(set) = game.try_insert(u, v) {
            return Ok(SparsityReport {
                sparse: false,
                tight: false,
                violating_set: Some(set),
            });
        }
    }
    Ok(SparsityReport {
        sparse: true,
        tight: tight_count(g.vertex_count(), g.edge_count(), d, l),
        violating_set: None,
    })
}

/// Largest vertex count accepted by the subset-enumeration path.
pub const ENUMERATION_LIMIT: usize = 20;

/// (d, ℓ)-sparsity of an r-uniform hypergraph: only subsets with |V'| ≥ r count.
pub fn is_sparse_hypergraph(g: &Hypergraph, d: usize, l: usize) -> Result<SparsityReport> {
    let Some(r) = g.uniformity() else {
        bail!(Precondition, "sparsity is defined here for uniform hypergraphs only");
    };
    if l + 1 > d * r {
        bail!(Precondition, "need ℓ ≤ d·r − 1, got d = {d}, ℓ = {l}, r = {r}");
    }
    if r == 2 && l < 2 * d {
        return is_sparse(&g.to_multigraph()?, d, l);
    }
    let n = g.vertex_count();
    if n > ENUMERATION_LIMIT {
        bail!(Budget, "subset enumeration limited to {ENUMERATION_LIMIT} vertices, got {n}");
    }
    let masks: Vec<u32> = g.hyperedges().iter().map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
    for set in 1u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size < r {
            continue;
        }
        let inside = masks.iter().filter(|&&m| m & set == m).count();
        if inside + l > d * size {
            let members = (0..n).filter(|&v| set & (1 << v) != 0).collect();
            return Ok(SparsityReport {
                sparse: false,
                tight: false,
                violating_set: Some(members),
            });
        }
    }
    Ok(SparsityReport {
        sparse: true,
        tight: tight_count(n, g.edge_count(), d, l),
        violating_set: None,
    })
}
