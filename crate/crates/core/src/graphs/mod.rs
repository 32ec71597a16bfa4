//! Hypergraphs, multigraphs and incidence graphs.
//!
//! Vertices and edges are dense indices in input order; the original vertex
//! names are kept as [`Label`]s for serialization only.

pub mod enumerate;
pub mod extension;
pub mod sparsity;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

pub use extension::{apply_extension, are_isomorphic, decompose_tight, generate_tight, Decomposition, ExtensionMove, TightGeneration, DECOMPOSE_BUDGET};
pub use sparsity::{is_sparse, is_sparse_hypergraph, PebbleGame, SparsityReport};

/// External vertex name, as it appeared in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => write!(f, "{s}"),
        }
    }
}

pub fn default_labels(n: usize) -> Vec<Label> {
    (0..n as i64).map(Label::Int).collect()
}

/// A fresh integer label not already used.
fn fresh_label(labels: &[Label]) -> Label {
    let next = labels
        .iter()
        .filter_map(|l| if let Label::Int(i) = l { Some(*i + 1) } else { None })
        .max()
        .unwrap_or(0);
    Label::Int(next.max(labels.len() as i64))
}

fn union_find_components(n: usize, groups: impl Iterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in groups {
        for w in g.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[index[r]].push(v);
    }
    comps
}

/// Vertices plus a list of hyperedges, each a sorted set of at least two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    labels: Vec<Label>,
    hyperedges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(labels: Vec<Label>, hyperedges: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let mut edges = Vec::with_capacity(hyperedges.len());
        for (i, mut e) in hyperedges.into_iter().enumerate() {
            e.sort_unstable();
            e.dedup();
            if e.len() < 2 {
                bail!(InvalidInput, "hyperedge {i} has fewer than two distinct vertices");
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                bail!(InvalidInput, "hyperedge {i} uses vertex {v}, but only {n} vertices exist");
            }
            edges.push(e);
        }
        Ok(Hypergraph { labels, hyperedges: edges })
    }

    pub fn with_vertices(n: usize, hyperedges: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(default_labels(n), hyperedges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.hyperedges[e]
    }

    /// `Some(r)` when every hyperedge has exactly r vertices.
    pub fn uniformity(&self) -> Option<usize> {
        let r = self.hyperedges.first().map_or(2, Vec::len);
        self.hyperedges.iter().all(|e| e.len() == r).then_some(r)
    }

    pub fn is_graph(&self) -> bool {
        self.uniformity() == Some(2)
    }

    pub fn to_multigraph(&self) -> Result<Multigraph> {
        if !self.is_graph() {
            bail!(Precondition, "hypergraph is not 2-uniform");
        }
        Multigraph::new(self.labels.clone(), self.hyperedges.iter().map(|e| (e[0], e[1])).collect())
    }

    /// Vertex sets of the connected components; isolated vertices are their own component.
    pub fn components(&self) -> Vec<Vec<usize>> {
        union_find_components(self.vertex_count(), self.hyperedges.iter().cloned())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Vertices plus a list of edges (u, v), u ≠ v; repeated pairs are parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    labels: Vec<Label>,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(labels: Vec<Label>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                bail!(InvalidInput, "edge {i} = ({u}, {v}) references a missing vertex (have {n})");
            }
            if u == v {
                bail!(InvalidInput, "edge {i} is a loop at vertex {u}");
            }
        }
        Ok(Multigraph { labels, edges })
    }

    pub fn with_vertices(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(default_labels(n), edges)
    }

    /// K₂ with `copies` parallel edges.
    pub fn k2(copies: usize) -> Self {
        Multigraph {
            labels: default_labels(2),
            edges: vec![(0, 1); copies],
        }
    }

    /// Complete simple graph on n vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Multigraph {
            labels: default_labels(n),
            edges,
        }
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph {
            labels: default_labels(n),
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn add_vertex(&mut self) -> usize {
        self.labels.push(fresh_label(&self.labels));
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        let n = self.vertex_count();
        if u >= n || v >= n || u == v {
            bail!(InvalidInput, "cannot add edge ({u}, {v}) to a graph on {n} vertices");
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)).count()
    }

    pub fn max_multiplicity(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        pairs.chunk_by(|a, b| a == b).map(<[_]>::len).max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.max_multiplicity() <= 1
    }

    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph {
            labels: self.labels.clone(),
            hyperedges: self.edges.iter().map(|&(u, v)| vec![u.min(v), u.max(v)]).collect(),
        }
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        union_find_components(self.vertex_count(), self.edges.iter().map(|&(u, v)| vec![u, v]))
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Edge multiset as sorted (min, max) pairs, for comparisons that ignore edge ids.
    pub fn edge_multiset(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        pairs
    }

    /// Sub-multigraph on `vertices` keeping `edges`, both renumbered in the given order.
    pub fn subgraph(&self, vertices: &[usize], edges: &[usize]) -> Result<Multigraph> {
        let mut map = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.vertex_count() || map[v] != usize::MAX {
                bail!(InvalidInput, "subgraph vertex {v} is missing or repeated");
            }
            map[v] = i;
        }
        let mut new_edges = Vec::with_capacity(edges.len());
        for &e in edges {
            if e >= self.edge_count() {
                bail!(InvalidInput, "subgraph edge {e} does not exist");
            }
            let (u, v) = self.edges[e];
            if map[u] == usize::MAX || map[v] == usize::MAX {
                bail!(InvalidInput, "subgraph edge {e} has an endpoint outside the vertex selection");
            }
            new_edges.push((map[u], map[v]));
        }
        Multigraph::new(vertices.iter().map(|&v| self.labels[v].clone()).collect(), new_edges)
    }

    /// Edge ids with both endpoints in the vertex set.
    pub fn induced_edges(&self, vertices: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.vertex_count()];
        for &v in vertices {
            inside[v] = true;
        }
        (0..self.edge_count()).filter(|&e| inside[self.edges[e].0] && inside[self.edges[e].1]).collect()
    }
}

/// aΓ: each edge replaced by `a` parallel copies. Copy i (1-based) of edge e gets id e·a + i − 1.
pub fn multiply_edges(g: &Multigraph, a: usize) -> Result<Multigraph> {
    if a == 0 {
        bail!(Precondition, "edge multiplier must be positive");
    }
    let edges = g.edges.iter().flat_map(|&e| std::iter::repeat(e).take(a)).collect();
    Ok(Multigraph {
        labels: g.labels.clone(),
        edges,
    })
}

/// Hypergraph version of [`multiply_edges`], same id convention.
pub fn multiply_hyperedges(g: &Hypergraph, a: usize) -> Result<Hypergraph> {
    if a == 0 {
        bail!(Precondition, "edge multiplier must be positive");
    }
    let hyperedges = g.hyperedges.iter().flat_map(|e| std::iter::repeat(e.clone()).take(a)).collect();
    Ok(Hypergraph {
        labels: g.labels.clone(),
        hyperedges,
    })
}

/// A node of I(Γ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Vertex(usize),
    Edge(usize),
}

/// Bipartite incidence graph I(Γ). Node ids: vertices 0..|V| first, then edges.
/// Incidence i joins vertex v and edge e; the vertex end has sign +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    vertex_count: usize,
    edge_count: usize,
    incidences: Vec<(usize, usize)>,
}

pub fn incidence_graph(g: &Hypergraph) -> IncidenceGraph {
    let incidences = g.hyperedges.iter().enumerate().flat_map(|(e, vs)| vs.iter().map(move |&v| (v, e))).collect();
    IncidenceGraph {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        incidences,
    }
}

impl IncidenceGraph {
    pub fn node_count(&self) -> usize {
        self.vertex_count + self.edge_count
    }

    pub fn incidence_count(&self) -> usize {
        self.incidences.len()
    }

    /// (vertex, edge) pairs in incidence order.
    pub fn incidences(&self) -> &[(usize, usize)] {
        &self.incidences
    }

    pub fn node(&self, id: usize) -> Node {
        if id < self.vertex_count {
            Node::Vertex(id)
        } else {
            Node::Edge(id - self.vertex_count)
        }
    }

    pub fn node_id(&self, node: Node) -> usize {
        match node {
            Node::Vertex(v) => v,
            Node::Edge(e) => self.vertex_count + e,
        }
    }

    /// [x : i] for an endpoint x of incidence i.
    pub fn sign(&self, node: Node, incidence: usize) -> Option<i8> {
        let (v, e) = self.incidences[incidence];
        match node {
            Node::Vertex(x) if x == v => Some(1),
            Node::Edge(x) if x == e => Some(-1),
            _ => None,
        }
    }

    /// I(Γ) as a plain multigraph: incidence i becomes edge (v, |V| + e).
    pub fn as_multigraph(&self) -> Multigraph {
        let mut labels: Vec<Label> = (0..self.vertex_count).map(|v| Label::Str(format!("v{v}"))).collect();
        labels.extend((0..self.edge_count).map(|e| Label::Str(format!("e{e}"))));
        let edges = self.incidences.iter().map(|&(v, e)| (v, self.vertex_count + e)).collect();
        Multigraph { labels, edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_counts() {
        let k3 = Multigraph::complete(3).to_hypergraph();
        let i = incidence_graph(&k3);
        assert_eq!((i.node_count(), i.incidence_count()), (6, 6));
        let tri = Hypergraph::with_vertices(3, vec![vec![0, 1, 2]]).unwrap();
        let i = incidence_graph(&tri);
        assert_eq!((i.node_count(), i.incidence_count()), (4, 3));
        let path = Multigraph::with_vertices(3, vec![(0, 1), (1, 2)]).unwrap().to_hypergraph();
        let i = incidence_graph(&path);
        assert_eq!((i.node_count(), i.incidence_count()), (5, 4));
        assert_eq!(i.sign(Node::Vertex(1), 1), Some(1));
        assert_eq!(i.sign(Node::Edge(0), 1), Some(-1));
        assert_eq!(i.sign(Node::Vertex(0), 2), None);
    }

    #[test]
    fn multiply_examples() {
        let k3 = Multigraph::complete(3);
        assert_eq!(multiply_edges(&k3, 1).unwrap(), k3);
        let two = multiply_edges(&k3, 2).unwrap();
        assert_eq!(two.edge_count(), 6);
        assert_eq!(two.max_multiplicity(), 2);
        assert_eq!(two.edge(3), k3.edge(1));
        let k2 = Multigraph::with_vertices(2, vec![(0, 1)]).unwrap();
        assert_eq!(multiply_edges(&k2, 4).unwrap(), Multigraph::k2(4));
        assert!(multiply_edges(&k3, 0).is_err());
    }

    #[test]
    fn rejects_loops_and_small_hyperedges() {
        assert!(Multigraph::with_vertices(2, vec![(1, 1)]).is_err());
        assert!(Multigraph::with_vertices(2, vec![(0, 2)]).is_err());
        assert!(Hypergraph::with_vertices(3, vec![vec![1, 1]]).is_err());
        assert!(Hypergraph::with_vertices(3, vec![vec![0, 5]]).is_err());
    }

    #[test]
    fn components_count_isolated_vertices() {
        let g = Multigraph::with_vertices(5, vec![(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        assert!(Multigraph::cycle(4).is_connected());
    }

    #[test]
    fn subgraph_renumbers() {
        let k4 = Multigraph::complete(4);
        let sub = k4.subgraph(&[1, 2, 3], &k4.induced_edges(&[1, 2, 3])).unwrap();
        assert_eq!(sub.edge_multiset(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(k4.subgraph(&[0, 1], &[5]).is_err());
    }
}
