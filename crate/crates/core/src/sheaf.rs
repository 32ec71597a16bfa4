//! Cellular sheaves on multigraphs and their cohomology.

use rand::Rng;
use serde::Serialize;

use crate::error::{bail, Result};
use crate::graphs::Multigraph;
use crate::linalg::{rat, Matrix, Rational};
use crate::rng::rng_from_seed;

/// Stalk dimensions on every cell plus one restriction matrix per
/// vertex-edge incidence. Edge e = (u, v) stores `[r^u_e, r^v_e]`, each of
/// shape dim F(e) × dim F(endpoint).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularSheaf {
    base: Multigraph,
    vertex_dims: Vec<usize>,
    edge_dims: Vec<usize>,
    restrictions: Vec<[Matrix; 2]>,
    /// [u : e] for the first endpoint u; the second endpoint gets the opposite sign.
    orientation: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub h0: usize,
    pub h1: usize,
    pub coboundary_rank: usize,
    /// Basis of ker d in reduced echelon form, indexed by concatenated vertex stalks.
    pub sections: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictionKind {
    /// A sheaf on the subgraph itself.
    OnSubgraph,
    /// Same base, zero stalks outside the subgraph.
    ZeroExtended,
}

/// A subgraph given by vertex ids and edge ids of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphSelector {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl CellularSheaf {
    /// Canonical orientation: the lower-numbered endpoint gets +1.
    pub fn new(base: Multigraph, vertex_dims: Vec<usize>, edge_dims: Vec<usize>, restrictions: Vec<[Matrix; 2]>) -> Result<Self> {
        if vertex_dims.len() != base.vertex_count() || edge_dims.len() != base.edge_count() || restrictions.len() != base.edge_count() {
            bail!(DimensionMismatch, "stalk or restriction count does not match the base graph");
        }
        for (e, (&(u, v), [ru, rv])) in base.edges().iter().zip(&restrictions).enumerate() {
            for (end, r) in [(u, ru), (v, rv)] {
                if r.nrows() != edge_dims[e] || r.ncols() != vertex_dims[end] {
                    bail!(
                        DimensionMismatch,
                        "restriction from vertex {end} to edge {e} is {}x{}, expected {}x{}",
                        r.nrows(),
                        r.ncols(),
                        edge_dims[e],
                        vertex_dims[end]
                    );
                }
            }
        }
        let orientation = base.edges().iter().map(|&(u, v)| if u < v { 1 } else { -1 }).collect();
        Ok(CellularSheaf {
            base,
            vertex_dims,
            edge_dims,
            restrictions,
            orientation,
        })
    }

    /// Replaces the signs; `signs[e]` is [u : e] for the first endpoint of e.
    pub fn with_orientation(mut self, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != self.base.edge_count() || signs.iter().any(|&s| s != 1 && s != -1) {
            bail!(InvalidInput, "orientation needs one ±1 per edge");
        }
        self.orientation = signs;
        Ok(self)
    }

    pub fn with_random_orientation(self, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let signs = (0..self.base.edge_count()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        self.with_orientation(signs).expect("one sign per edge")
    }

    pub fn base(&self) -> &Multigraph {
        &self.base
    }

    pub fn vertex_dims(&self) -> &[usize] {
        &self.vertex_dims
    }

    pub fn edge_dims(&self) -> &[usize] {
        &self.edge_dims
    }

    pub fn restrictions(&self) -> &[[Matrix; 2]] {
        &self.restrictions
    }

    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }

    /// Σ_V dim − Σ_E dim, which equals h0 − h1.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_dims.iter().sum::<usize>() as i64 - self.edge_dims.iter().sum::<usize>() as i64
    }

    fn offsets(dims: &[usize]) -> Vec<usize> {
        let mut acc = 0;
        dims.iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// d : ⊕F(v) → ⊕F(e); block (e, v) = [v:e]·r^v_e.
    pub fn coboundary(&self) -> Matrix {
        let cols = self.vertex_dims.iter().sum();
        let rows = self.edge_dims.iter().sum();
        let (vo, eo) = (Self::offsets(&self.vertex_dims), Self::offsets(&self.edge_dims));
        let mut d = Matrix::zeros(rows, cols);
        for (e, &(u, v)) in self.base.edges().iter().enumerate() {
            let sign = self.orientation[e] as i64;
            for (end, r, s) in [(u, &self.restrictions[e][0], sign), (v, &self.restrictions[e][1], -sign)] {
                let s = rat(s);
                for i in 0..r.nrows() {
                    for j in 0..r.ncols() {
                        let x = r.get(i, j);
                        if *x != Rational::default() {
                            let cur = d.get(eo[e] + i, vo[end] + j) + &s * x;
                            d.set(eo[e] + i, vo[end] + j, cur);
                        }
                    }
                }
            }
        }
        d
    }

    pub fn cohomology_dims(&self) -> CohomologyDims {
        let rank = self.coboundary().rank();
        CohomologyDims {
            h0: self.vertex_dims.iter().sum::<usize>() - rank,
            h1: self.edge_dims.iter().sum::<usize>() - rank,
            rank,
        }
    }

    pub fn cohomology(&self) -> CohomologyReport {
        let d = self.coboundary();
        let rank = d.rank();
        let sections = d.nullspace().rref().0;
        let h0 = self.vertex_dims.iter().sum::<usize>() - rank;
        debug_assert_eq!(sections.nrows(), h0);
        CohomologyReport {
            h0,
            h1: self.edge_dims.iter().sum::<usize>() - rank,
            coboundary_rank: rank,
            sections,
        }
    }

    pub fn restrict(&self, sub: &SubgraphSelector, kind: RestrictionKind) -> Result<CellularSheaf> {
        let n = self.base.vertex_count();
        let mut keep_v = vec![false; n];
        for &v in &sub.vertices {
            if v >= n {
                bail!(InvalidInput, "selector vertex {v} is not in the base");
            }
            keep_v[v] = true;
        }
        let mut keep_e = vec![false; self.base.edge_count()];
        for &e in &sub.edges {
            if e >= self.base.edge_count() {
                bail!(InvalidInput, "selector edge {e} is not in the base");
            }
            let (u, v) = self.base.edge(e);
            if !keep_v[u] || !keep_v[v] {
                bail!(InvalidInput, "selector edge {e} has an endpoint outside the selected vertices");
            }
            keep_e[e] = true;
        }
        match kind {
            RestrictionKind::OnSubgraph => {
                let vertices: Vec<usize> = (0..n).filter(|&v| keep_v[v]).collect();
                let edges: Vec<usize> = (0..self.base.edge_count()).filter(|&e| keep_e[e]).collect();
                let base = self.base.subgraph(&vertices, &edges)?;
                let sheaf = CellularSheaf::new(
                    base,
                    vertices.iter().map(|&v| self.vertex_dims[v]).collect(),
                    edges.iter().map(|&e| self.edge_dims[e]).collect(),
                    edges.iter().map(|&e| self.restrictions[e].clone()).collect(),
                )?;
                sheaf.with_orientation(edges.iter().map(|&e| self.orientation[e]).collect())
            }
            RestrictionKind::ZeroExtended => {
                let vertex_dims: Vec<usize> = (0..n).map(|v| if keep_v[v] { self.vertex_dims[v] } else { 0 }).collect();
                let edge_dims: Vec<usize> = (0..self.base.edge_count()).map(|e| if keep_e[e] { self.edge_dims[e] } else { 0 }).collect();
                let restrictions = self
                    .base
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(e, &(u, v))| {
                        if keep_e[e] {
                            self.restrictions[e].clone()
                        } else {
                            [Matrix::zeros(0, vertex_dims[u]), Matrix::zeros(0, vertex_dims[v])]
                        }
                    })
                    .collect();
                let sheaf = CellularSheaf::new(self.base.clone(), vertex_dims, edge_dims, restrictions)?;
                sheaf.with_orientation(self.orientation.clone())
            }
        }
    }
}

/// Every stalk ℚ^k, every restriction the identity.
pub fn constant_sheaf(base: &Multigraph, k: usize) -> CellularSheaf {
    let restrictions = base.edges().iter().map(|_| [Matrix::identity(k), Matrix::identity(k)]).collect();
    CellularSheaf::new(base.clone(), vec![k; base.vertex_count()], vec![k; base.edge_count()], restrictions)
        .expect("identity restrictions have matching shapes")
}
