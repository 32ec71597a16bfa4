//! Brute-force baselines for cross-checking the main paths: the classical
//! rigidity matrix, the parallel-redrawing system, sparsity by subset
//! enumeration, and h0 of a motion sheaf as one dense linear system. Nothing here calls into `linalg` elimination.

use serde::Serialize;

use crate::error::{bail, Result};
use crate::graphs::Multigraph;
use crate::lie::Framework;
use crate::linalg::Rational;
use crate::motion::MotionSheafSpec;

/// Size caps for the exponential and dense oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_unknowns: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 12,
            max_unknowns: 200,
        }
    }
}

impl OracleBudget {
    /// Reads `SHEAFRIG_BUDGET` as `vertices` or `vertices,unknowns`.
    pub fn from_env() -> Self {
        let mut b = OracleBudget::default();
        if let Ok(raw) = std::env::var("SHEAFRIG_BUDGET") {
            let mut parts = raw.split(',').map(|p| p.trim().parse::<usize>());
            if let Some(Ok(v)) = parts.next() {
                b.max_vertices = v;
            }
            if let Some(Ok(u)) = parts.next() {
                b.max_unknowns = u;
            }
        }
        b
    }
}

/// Plain Gaussian elimination, first nonzero pivot.
fn dense_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let zero = Rational::default();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != zero) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c] == zero {
                continue;
            }
            let factor = &rows[r][c] / &pivot;
            for k in c..cols {
                let delta = &factor * &rows[rank][k];
                rows[r][k] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityMatrix {
    pub d: usize,
    pub vertex_count: usize,
    pub rows: Vec<Vec<Rational>>,
}

impl RigidityMatrix {
    pub fn rank(&self) -> usize {
        dense_rank(self.rows.clone())
    }

    /// d|V| − rank: the dimension of the infinitesimal motions.
    pub fn motions(&self) -> usize {
        self.d * self.vertex_count - self.rank()
    }
}

/// Row uv holds p(u) − p(v) in the u-block and p(v) − p(u) in the v-block.
pub fn rigidity_matrix(fw: &Framework) -> Result<RigidityMatrix> {
    if !fw.graph().is_graph() {
        bail!(Precondition, "the rigidity matrix needs a graph");
    }
    let (d, nv) = (fw.dim(), fw.graph().vertex_count());
    let p = fw.positions();
    let rows = fw
        .graph()
        .hyperedges()
        .iter()
        .map(|e| {
            let (u, v) = (e[0], e[1]);
            if p[u] == p[v] {
                return Err(crate::Error::InvalidInput(format!("vertices {u} and {v} coincide")));
            }
            let mut row = vec![Rational::default(); d * nv];
            for k in 0..d {
                row[u * d + k] = &p[u][k] - &p[v][k];
                row[v * d + k] = &p[v][k] - &p[u][k];
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(RigidityMatrix { d, vertex_count: nv, rows })
}

/// Parallel redrawings of a point framework in ℚⁿ: velocities q with
/// q(v) − q(u) parallel to p(v) − p(u) on every edge, written as the vanishing
/// of all 2×2 minors.
pub fn parallel_redrawing_matrix(fw: &Framework) -> Result<RigidityMatrix> {
    if !fw.graph().is_graph() {
        bail!(Precondition, "parallel redrawings need a graph");
    }
    let (n, nv) = (fw.dim(), fw.graph().vertex_count());
    let p = fw.positions();
    let mut rows = Vec::new();
    for e in fw.graph().hyperedges() {
        let (u, v) = (e[0], e[1]);
        let dir: Vec<Rational> = (0..n).map(|k| &p[v][k] - &p[u][k]).collect();
        for i in 0..n {
            for j in i + 1..n {
                // (q_v − q_u)_i dir_j − (q_v − q_u)_j dir_i = 0
                let mut row = vec![Rational::default(); n * nv];
                row[v * n + i] = dir[j].clone();
                row[u * n + i] = -dir[j].clone();
                row[v * n + j] = -dir[i].clone();
                row[u * n + j] = dir[i].clone();
                rows.push(row);
            }
        }
    }
    Ok(RigidityMatrix { d: n, vertex_count: nv, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteSparsity {
    pub sparse: bool,
    pub tight: bool,
    pub witness: Option<Vec<usize>>,
}

/// Checks |E(V')| ≤ d|V'| − ℓ for every V' with |V'| ≥ 2, smallest sets first.
pub fn brute_sparsity(g: &Multigraph, d: usize, l: usize) -> Result<BruteSparsity> {
    brute_sparsity_with(g, d, l, OracleBudget::from_env())
}

pub fn brute_sparsity_with(g: &Multigraph, d: usize, l: usize, budget: OracleBudget) -> Result<BruteSparsity> {
    let n = g.vertex_count();
    if n > budget.max_vertices || n >= 32 {
        bail!(Budget, "subset enumeration capped at {} vertices, got {n}", budget.max_vertices);
    }
    let mut sets: Vec<u32> = (0u32..(1u32 << n)).filter(|m| m.count_ones() >= 2).collect();
    sets.sort_by_key(|m| (m.count_ones(), *m));
    for set in sets {
        let inside = g.edges().iter().filter(|&&(u, v)| set & (1 << u) != 0 && set & (1 << v) != 0).count() as i64;
        if inside > (d * set.count_ones() as usize) as i64 - l as i64 {
            let witness = (0..n).filter(|&v| set & (1 << v) != 0).collect();
            return Ok(BruteSparsity {
                sparse: false,
                tight: false,
                witness: Some(witness),
            });
        }
    }
    let tight = g.edge_count() as i64 == (d * n) as i64 - l as i64;
    Ok(BruteSparsity {
        sparse: true,
        tight,
        witness: None,
    })
}

/// dim of ∩ span(B_i): the solutions of B_1ᵀc_1 = B_iᵀc_i for all i.
fn intersection_dim(n: usize, bases: &[Vec<Vec<Rational>>]) -> usize {
    let Some((first, rest)) = bases.split_first() else { return n };
    if rest.is_empty() {
        return first.len();
    }
    let widths: Vec<usize> = bases.iter().map(Vec::len).collect();
    let total: usize = widths.iter().sum();
    let mut rows = Vec::new();
    let mut offset = first.len();
    for (i, b) in rest.iter().enumerate() {
        for coord in 0..n {
            let mut row = vec![Rational::default(); total];
            for (k, v) in first.iter().enumerate() {
                row[k] = v[coord].clone();
            }
            for (k, v) in b.iter().enumerate() {
                row[offset + k] = -v[coord].clone();
            }
            rows.push(row);
        }
        offset += widths[i + 1];
    }
    // Each solution is determined by its common vector, since every basis is independent.
    total - dense_rank(rows)
}

/// h0 from the system w_e − w_v = Σ c·(basis of S_v) over all incidences v ∼ e,
/// minus the part ⊕S(v) ⊕ S(e) that lies in every solution space.
pub fn brute_h0(spec: &MotionSheafSpec) -> Result<usize> {
    brute_h0_with(spec, OracleBudget::from_env())
}

pub fn brute_h0_with(spec: &MotionSheafSpec, budget: OracleBudget) -> Result<usize> {
    let n = spec.ambient_dim();
    let g = spec.base();
    let (nv, ne) = (g.vertex_count(), g.edge_count());
    let bases: Vec<Vec<Vec<Rational>>> = spec.subspaces().iter().map(|s| s.basis().to_rows()).collect();
    let incidences: Vec<(usize, usize)> = g
        .hyperedges()
        .iter()
        .enumerate()
        .flat_map(|(e, members)| members.iter().map(move |&v| (v, e)))
        .collect();
    let slack: usize = incidences.iter().map(|&(v, _)| bases[v].len()).sum();
    let unknowns = n * (nv + ne) + slack;
    if unknowns > budget.max_unknowns {
        bail!(Budget, "dense h0 system has {unknowns} unknowns, cap is {}", budget.max_unknowns);
    }
    let mut rows = Vec::with_capacity(n * incidences.len());
    let mut col = n * (nv + ne);
    for &(v, e) in &incidences {
        for coord in 0..n {
            let mut row = vec![Rational::default(); unknowns];
            row[n * (nv + e) + coord] = Rational::from_integer(1.into());
            row[n * v + coord] = Rational::from_integer((-1).into());
            for (k, b) in bases[v].iter().enumerate() {
                row[col + k] = -b[coord].clone();
            }
            rows.push(row);
        }
        col += bases[v].len();
    }
    let solutions = unknowns - if rows.is_empty() { 0 } else { dense_rank(rows) };
    // Slack coordinates are determined by w because each basis is independent.
    let trivial: usize = bases.iter().map(Vec::len).sum::<usize>()
        + g.hyperedges()
            .iter()
            .map(|members| intersection_dim(n, &members.iter().map(|&v| bases[v].clone()).collect::<Vec<_>>()))
            .sum::<usize>();
    match solutions.checked_sub(trivial) {
        Some(h0) => Ok(h0),
        None => bail!(Internal, "dense system smaller than its trivial part"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::subspace::Subspace;

    fn pts(xs: &[[i64; 2]]) -> Vec<Vec<Rational>> {
        xs.iter().map(|p| vec![rat(p[0]), rat(p[1])]).collect()
    }

    #[test]
    fn rigidity_matrix_examples() {
        let tri = Framework::from_graph(&Multigraph::complete(3), 2, pts(&[[0, 0], [5, 1], [2, 7]])).unwrap();
        let m = rigidity_matrix(&tri).unwrap();
        assert_eq!((m.rank(), m.motions()), (3, 3));
        let edge = Framework::from_graph(&Multigraph::k2(1), 2, pts(&[[0, 0], [1, 0]])).unwrap();
        assert_eq!(rigidity_matrix(&edge).unwrap().motions(), 3);
        let sq = Framework::from_graph(&Multigraph::cycle(4), 2, pts(&[[0, 0], [5, 1], [6, 7], [-1, 4]])).unwrap();
        let m = rigidity_matrix(&sq).unwrap();
        assert_eq!((m.rank(), m.motions()), (4, 4));
    }

    #[test]
    fn parallel_redrawings_of_a_triangle() {
        // Three points in the plane: translations and dilations only.
        let tri = Framework::from_graph(&Multigraph::complete(3), 2, pts(&[[0, 0], [5, 1], [2, 7]])).unwrap();
        assert_eq!(parallel_redrawing_matrix(&tri).unwrap().motions(), 3);
        let path = Framework::from_graph(&Multigraph::with_vertices(3, vec![(0, 1), (1, 2)]).unwrap(), 2, pts(&[[0, 0], [5, 1], [2, 7]])).unwrap();
        assert_eq!(parallel_redrawing_matrix(&path).unwrap().motions(), 4);
    }

    #[test]
    fn brute_sparsity_examples() {
        let k3 = brute_sparsity(&Multigraph::complete(3), 2, 3).unwrap();
        assert!(k3.sparse && k3.tight);
        let k4 = brute_sparsity(&Multigraph::complete(4), 2, 3).unwrap();
        assert_eq!(k4.witness, Some(vec![0, 1, 2, 3]));
        let small = OracleBudget {
            max_vertices: 3,
            max_unknowns: 0,
        };
        assert!(brute_sparsity_with(&Multigraph::complete(4), 2, 3, small).is_err());
    }

    #[test]
    fn brute_h0_on_k3_configurations() {
        let line = |v: [i64; 3]| Subspace::span(3, vec![v.iter().map(|&x| rat(x)).collect()]).unwrap();
        let k3 = Multigraph::complete(3).to_hypergraph();
        let equal = MotionSheafSpec::new(k3.clone(), 3, vec![line([1, 0, 0]); 3]).unwrap();
        assert_eq!(brute_h0(&equal).unwrap(), 2);
        let spanning = MotionSheafSpec::new(k3.clone(), 3, vec![line([1, 0, 0]), line([0, 1, 0]), line([0, 0, 1])]).unwrap();
        assert_eq!(brute_h0(&spanning).unwrap(), 3);
        let coplanar = MotionSheafSpec::new(k3, 3, vec![line([1, 0, 0]), line([0, 1, 0]), line([1, 1, 0])]).unwrap();
        assert_eq!(brute_h0(&coplanar).unwrap(), 4);
    }

    #[test]
    fn intersection_dims() {
        let e = |i: usize| (0..3).map(|j| rat((i == j) as i64)).collect::<Vec<_>>();
        assert_eq!(intersection_dim(3, &[vec![e(0), e(1)], vec![e(1), e(2)]]), 1);
        assert_eq!(intersection_dim(3, &[vec![e(0)], vec![e(1)]]), 0);
        assert_eq!(intersection_dim(3, &[vec![e(0)], vec![e(0)], vec![e(0), e(2)]]), 1);
    }
}
