//! Motion sheaves: a hypergraph with one s-dimensional subspace S(v) ⊆ ℚⁿ per
//! vertex, turned into a sheaf on the incidence graph with stalks ℚⁿ/S(v) at
//! vertices and ℚⁿ/S(e), S(e) = ∩_{v∈e} S(v), at edges.

use serde::Serialize;

use crate::error::{bail, Result};
use crate::graphs::{incidence_graph, is_sparse, is_sparse_hypergraph, multiply_edges, multiply_hyperedges, Hypergraph, Multigraph};
use crate::linalg::Matrix;
use crate::rng::{derive_seed, rng_from_seed};
use crate::sheaf::CellularSheaf;
use crate::subspace::{intersect, projection_of, sample_subspace_with, Subspace};

/// A point of M_{s,n}(Γ): the base hypergraph and one subspace per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotionSheafSpec {
    base: Hypergraph,
    ambient: usize,
    subspaces: Vec<Subspace>,
}

impl MotionSheafSpec {
    pub fn new(base: Hypergraph, ambient: usize, subspaces: Vec<Subspace>) -> Result<Self> {
        if subspaces.len() != base.vertex_count() {
            bail!(InvalidInput, "{} subspaces for {} vertices", subspaces.len(), base.vertex_count());
        }
        if let Some(s) = subspaces.iter().find(|s| s.ambient_dim() != ambient) {
            bail!(DimensionMismatch, "subspace of ℚ^{} in a spec over ℚ^{ambient}", s.ambient_dim());
        }
        if subspaces.windows(2).any(|w| w[0].dim() != w[1].dim()) {
            bail!(InvalidInput, "vertex subspaces must share one dimension");
        }
        Ok(MotionSheafSpec { base, ambient, subspaces })
    }

    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// The common dimension s (0 for an empty vertex set).
    pub fn subspace_dim(&self) -> usize {
        self.subspaces.first().map_or(0, Subspace::dim)
    }

    /// S(e) = ∩_{v∈e} S(v).
    pub fn edge_subspace(&self, e: usize) -> Subspace {
        let parts: Vec<&Subspace> = self.base.edge(e).iter().map(|&v| &self.subspaces[v]).collect();
        intersect(self.ambient, &parts).expect("ambient checked at construction")
    }

    pub fn edge_subspaces(&self) -> Vec<Subspace> {
        (0..self.base.edge_count()).map(|e| self.edge_subspace(e)).collect()
    }

    /// The spec on the sub-hypergraph with the given vertices and edges (renumbered).
    pub fn sub_spec(&self, vertices: &[usize], edges: &[usize]) -> Result<MotionSheafSpec> {
        let mut map = vec![usize::MAX; self.base.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= map.len() || map[v] != usize::MAX {
                bail!(InvalidInput, "vertex {v} is missing or repeated");
            }
            map[v] = i;
        }
        let mut hyperedges = Vec::with_capacity(edges.len());
        for &e in edges {
            if e >= self.base.edge_count() {
                bail!(InvalidInput, "edge {e} does not exist");
            }
            let members: Option<Vec<usize>> = self.base.edge(e).iter().map(|&v| (map[v] != usize::MAX).then_some(map[v])).collect();
            let Some(members) = members else {
                bail!(InvalidInput, "edge {e} leaves the selected vertices");
            };
            hyperedges.push(members);
        }
        let labels = vertices.iter().map(|&v| self.base.labels()[v].clone()).collect();
        MotionSheafSpec::new(
            Hypergraph::new(labels, hyperedges)?,
            self.ambient,
            vertices.iter().map(|&v| self.subspaces[v].clone()).collect(),
        )
    }
}

/// The motion sheaf on I(Γ). Incidence (v, e) has stalk ℚⁿ/S(v); the map from
/// the vertex node is the identity and the map from the edge node is the
/// reduction ℚⁿ/S(e) → ℚⁿ/S(v), solved from A·Q_{S(e)} = Q_{S(v)}.
pub fn build_motion_sheaf(spec: &MotionSheafSpec) -> Result<CellularSheaf> {
    let inc = incidence_graph(&spec.base);
    let n = spec.ambient;
    let vertex_q: Vec<Matrix> = spec.subspaces.iter().map(Subspace::quotient_matrix).collect();
    let edge_q: Vec<Matrix> = spec.edge_subspaces().iter().map(Subspace::quotient_matrix).collect();
    let mut node_dims: Vec<usize> = vertex_q.iter().map(Matrix::nrows).collect();
    node_dims.extend(edge_q.iter().map(Matrix::nrows));
    let mut inc_dims = Vec::with_capacity(inc.incidence_count());
    let mut restrictions = Vec::with_capacity(inc.incidence_count());
    for &(v, e) in inc.incidences() {
        let Some(a) = Matrix::solve_left(&vertex_q[v], &edge_q[e])? else {
            bail!(Internal, "S(e) is not contained in S(v) for incidence ({v}, {e})");
        };
        inc_dims.push(n - spec.subspaces[v].dim());
        restrictions.push([Matrix::identity(vertex_q[v].nrows()), a]);
    }
    CellularSheaf::new(inc.as_multigraph(), node_dims, inc_dims, restrictions)
}

/// Σ_{x ∈ V ∪ E} dim M(x) − Σ_{v∼e} dim M(v), which equals h0 − h1.
pub fn maxwell_defect(spec: &MotionSheafSpec) -> i64 {
    let n = spec.ambient as i64;
    let vertex: i64 = spec.subspaces.iter().map(|s| n - s.dim() as i64).sum();
    let edge: i64 = spec.edge_subspaces().iter().map(|s| n - s.dim() as i64).sum();
    let incidence: i64 = spec.base.hyperedges().iter().flatten().map(|&v| n - spec.subspaces[v].dim() as i64).sum();
    vertex + edge - incidence
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityVerdict {
    pub h0: usize,
    pub h1: usize,
    /// Dimension of the trivial motions, summed over components.
    pub trivial_dim: usize,
    pub connected: bool,
    pub independent: bool,
    pub rigid: bool,
    pub minimally_rigid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Σ over components C of n − dim ∩_{v∈C} S(v).
pub fn trivial_motion_dim(spec: &MotionSheafSpec) -> usize {
    spec.base
        .components()
        .iter()
        .map(|c| {
            let parts: Vec<&Subspace> = c.iter().map(|&v| &spec.subspaces[v]).collect();
            spec.ambient - intersect(spec.ambient, &parts).expect("ambient checked").dim()
        })
        .sum()
}

pub fn analyze(spec: &MotionSheafSpec) -> Result<RigidityVerdict> {
    let dims = build_motion_sheaf(spec)?.cohomology_dims();
    if dims.h0 as i64 - dims.h1 as i64 != maxwell_defect(spec) {
        bail!(Internal, "Maxwell count disagrees with cohomology");
    }
    let trivial_dim = trivial_motion_dim(spec);
    let connected = spec.base.is_connected();
    let independent = dims.h1 == 0;
    let rigid = connected && dims.h0 == trivial_dim;
    let note = (!connected).then(|| "rigidity is only defined for a connected base".to_string());
    Ok(RigidityVerdict {
        h0: dims.h0,
        h1: dims.h1,
        trivial_dim,
        connected,
        independent,
        rigid,
        minimally_rigid: rigid && independent,
        note,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionMode {
    Sparsity,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgraphWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessaryCondition {
    pub holds: bool,
    pub witness: Option<SubgraphWitness>,
    pub mode: ConditionMode,
}

/// Exact-mode vertex limit.
pub const EXACT_CONDITION_LIMIT: usize = 8;

/// Sparsity mode when its hypotheses hold, exact mode otherwise.
pub fn necessary_condition(spec: &MotionSheafSpec) -> Result<NecessaryCondition> {
    if sparsity_multiplier(spec).is_some() {
        necessary_condition_with(spec, ConditionMode::Sparsity)
    } else {
        necessary_condition_with(spec, ConditionMode::Exact)
    }
}

/// (r−1)n − rs, when the spec is r-uniform, every S(e) is zero and the
/// multiplier is positive.
fn sparsity_multiplier(spec: &MotionSheafSpec) -> Option<usize> {
    let r = spec.base.uniformity()?;
    let (n, s) = (spec.ambient, spec.subspace_dim());
    if (r - 1) * n <= r * s || spec.edge_subspaces().iter().any(|se| se.dim() != 0) {
        return None;
    }
    Some((r - 1) * n - r * s)
}

pub fn necessary_condition_with(spec: &MotionSheafSpec, mode: ConditionMode) -> Result<NecessaryCondition> {
    let (n, s) = (spec.ambient, spec.subspace_dim());
    match mode {
        ConditionMode::Sparsity => {
            let Some(m) = sparsity_multiplier(spec) else {
                bail!(
                    Precondition,
                    "sparsity mode needs a uniform base, trivial edge intersections and s < (r−1)n/r; use exact mode"
                );
            };
            let rep = if spec.base.is_graph() {
                is_sparse(&multiply_edges(&spec.base.to_multigraph()?, m)?, n - s, n)?
            } else {
                is_sparse_hypergraph(&multiply_hyperedges(&spec.base, m)?, n - s, n)?
            };
            let witness = rep.violating_set.map(|vertices| {
                let edges = induced_hyperedges(&spec.base, &vertices);
                SubgraphWitness { vertices, edges }
            });
            Ok(NecessaryCondition {
                holds: rep.sparse,
                witness,
                mode,
            })
        }
        ConditionMode::Exact => {
            let nv = spec.base.vertex_count();
            if nv > EXACT_CONDITION_LIMIT {
                bail!(Budget, "exact mode is limited to {EXACT_CONDITION_LIMIT} vertices, got {nv}");
            }
            let vertex_dim = |v: usize| (n - spec.subspaces[v].dim()) as i64;
            let edge_gain: Vec<i64> = spec
                .edge_subspaces()
                .iter()
                .enumerate()
                .map(|(e, se)| spec.base.edge(e).iter().map(|&v| vertex_dim(v)).sum::<i64>() - (n - se.dim()) as i64)
                .collect();
            for mask in 1u32..(1u32 << nv) {
                let vertices: Vec<usize> = (0..nv).filter(|&v| mask & (1 << v) != 0).collect();
                let parts: Vec<&Subspace> = vertices.iter().map(|&v| &spec.subspaces[v]).collect();
                if intersect(n, &parts)?.dim() != 0 {
                    continue;
                }
                let edges: Vec<usize> = induced_hyperedges(&spec.base, &vertices).into_iter().filter(|&e| edge_gain[e] > 0).collect();
                let lhs: i64 = edges.iter().map(|&e| edge_gain[e]).sum();
                let rhs: i64 = vertices.iter().map(|&v| vertex_dim(v)).sum::<i64>() - n as i64;
                if lhs > rhs {
                    return Ok(NecessaryCondition {
                        holds: false,
                        witness: Some(SubgraphWitness { vertices, edges }),
                        mode,
                    });
                }
            }
            Ok(NecessaryCondition {
                holds: true,
                witness: None,
                mode,
            })
        }
    }
}

fn induced_hyperedges(g: &Hypergraph, vertices: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    (0..g.edge_count()).filter(|&e| g.edge(e).iter().all(|&v| inside[v])).collect()
}

/// Independent random s-dimensional subspaces at every vertex.
pub fn sample_generic_spec(g: &Hypergraph, s: usize, n: usize, seed: u64) -> Result<MotionSheafSpec> {
    if s > n {
        bail!(Precondition, "subspace dimension {s} exceeds ambient dimension {n}");
    }
    let mut rng = rng_from_seed(seed);
    let subspaces = (0..g.vertex_count()).map(|_| sample_subspace_with(s, n, &mut rng)).collect::<Result<_>>()?;
    MotionSheafSpec::new(g.clone(), n, subspaces)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub h0: usize,
    pub h1: usize,
    pub independent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    /// Whether (n−2)Γ is (n−1, n)-sparse.
    pub sparse: bool,
    pub agrees: bool,
    pub trials: Vec<TrialOutcome>,
}

/// Samples M_{1,n} specs and compares independence with the sparsity of (n−2)Γ.
pub fn check_main_theorem(g: &Multigraph, n: usize, trials: usize, seed: u64) -> Result<MainTheoremReport> {
    if n < 3 {
        bail!(Precondition, "the main theorem needs n ≥ 3, got {n}");
    }
    let sparse = is_sparse(&multiply_edges(g, n - 2)?, n - 1, n)?.sparse;
    let h = g.to_hypergraph();
    let mut outcomes = Vec::with_capacity(trials);
    for t in 0..trials {
        let trial_seed = derive_seed(seed, t as u64);
        let spec = sample_generic_spec(&h, 1, n, trial_seed)?;
        let dims = build_motion_sheaf(&spec)?.cohomology_dims();
        outcomes.push(TrialOutcome {
            seed: trial_seed,
            h0: dims.h0,
            h1: dims.h1,
            independent: dims.h1 == 0,
        });
    }
    let agrees = outcomes.iter().all(|o| o.independent == sparse);
    Ok(MainTheoremReport {
        sparse,
        agrees,
        trials: outcomes,
    })
}

/// The auxiliary sheaf on I(Γ) with every stalk ℚⁿ and both maps at an
/// incidence (v, e) equal to the orthogonal projection with kernel S(v).
pub fn projection_trick_sheaf(spec: &MotionSheafSpec) -> Result<CellularSheaf> {
    let inc = incidence_graph(&spec.base);
    let n = spec.ambient;
    let kill: Vec<Matrix> = spec.subspaces.iter().map(|s| projection_of(s).complement().matrix().clone()).collect();
    let restrictions = inc.incidences().iter().map(|&(v, _)| [kill[v].clone(), kill[v].clone()]).collect();
    CellularSheaf::new(inc.as_multigraph(), vec![n; inc.node_count()], vec![n; inc.incidence_count()], restrictions)
}

/// h0 of the motion sheaf through the projection sheaf, whose sections split
/// as ⊕ S(v) ⊕ ⊕ S(e) ⊕ H⁰(M).
pub fn h0_via_projection_trick(spec: &MotionSheafSpec) -> Result<usize> {
    let h0 = projection_trick_sheaf(spec)?.cohomology_dims().h0;
    let extra: usize = spec.subspaces.iter().map(Subspace::dim).sum::<usize>() + spec.edge_subspaces().iter().map(Subspace::dim).sum::<usize>();
    if h0 < extra {
        bail!(Internal, "projection sheaf has fewer sections than its trivial part");
    }
    Ok(h0 - extra)
}
