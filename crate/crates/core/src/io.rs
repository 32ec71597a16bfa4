//! JSON encodings. Rationals are written as "p/q" strings (plain "p" for
//! integers) and read from either strings or JSON integers.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::associated::AssociatedSheafSpec;
use crate::error::{bail, Result};
use crate::graphs::{Hypergraph, Label, Multigraph};
use crate::lie::{AffineSubspace, Arrangement, Framework};
use crate::linalg::{Matrix, Rational};
use crate::motion::MotionSheafSpec;
use crate::sheaf::CellularSheaf;
use crate::subspace::{LinearForm, Subspace};

/// A rational as it appears in JSON input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRational(pub Rational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(JsonRational(Rational::from_integer(i.into()))),
            Raw::Text(t) => parse_rational(&t).map(JsonRational).map_err(de::Error::custom),
        }
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => match (num_bigint::BigInt::from_str(p.trim()), num_bigint::BigInt::from_str(q.trim())) {
            (Ok(p), Ok(q)) if q != num_bigint::BigInt::from(0) => Some(Rational::new(p, q)),
            _ => None,
        },
        None => num_bigint::BigInt::from_str(t).ok().map(Rational::from_integer),
    };
    match parsed {
        Some(r) => Ok(r),
        None => bail!(InvalidInput, "not a rational number: {text:?}"),
    }
}

pub(crate) fn rows_to_json(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

pub(crate) fn rows_from_json(rows: &[Vec<JsonRational>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rows_to_json(&self.to_rows()).serialize(s)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Subspace", 3)?;
        st.serialize_field("ambient", &self.ambient_dim())?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", self.basis())?;
        st.end()
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }
}

/// Spanning rows for a subspace, in JSON.
pub fn subspace_from_json(ambient: usize, rows: &[Vec<JsonRational>]) -> Result<Subspace> {
    if let Some(r) = rows.iter().find(|r| r.len() != ambient) {
        bail!(DimensionMismatch, "basis row of length {} in ℚ^{ambient}", r.len());
    }
    Subspace::span(ambient, rows_from_json(rows))
}

fn form_from_json(ambient: usize, coeffs: &[JsonRational]) -> Result<LinearForm> {
    if coeffs.len() != ambient {
        bail!(DimensionMismatch, "form with {} coefficients on ℚ^{ambient}", coeffs.len());
    }
    Ok(LinearForm::new(coeffs.iter().map(|x| x.0.clone()).collect()))
}

/// `{"vertices": [...], "edges": [[u, v], ...]}` or with `"hyperedges"`
/// instead of `"edges"`. Edges refer to vertices by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[Label; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperedges: Option<Vec<Vec<Label>>>,
}

impl GraphJson {
    pub fn from_multigraph(g: &Multigraph) -> Self {
        let l = g.labels();
        GraphJson {
            vertices: l.to_vec(),
            edges: Some(g.edges().iter().map(|&(u, v)| [l[u].clone(), l[v].clone()]).collect()),
            hyperedges: None,
        }
    }

    pub fn from_hypergraph(g: &Hypergraph) -> Self {
        let l = g.labels();
        let hyperedges = g.hyperedges().iter().map(|e| e.iter().map(|&v| l[v].clone()).collect()).collect();
        GraphJson {
            vertices: l.to_vec(),
            edges: None,
            hyperedges: Some(hyperedges),
        }
    }

    fn index(&self) -> Result<HashMap<&Label, usize>> {
        let mut map = HashMap::with_capacity(self.vertices.len());
        for (i, l) in self.vertices.iter().enumerate() {
            if map.insert(l, i).is_some() {
                bail!(InvalidInput, "vertex label {l} appears twice");
            }
        }
        Ok(map)
    }

    fn resolve(map: &HashMap<&Label, usize>, l: &Label) -> Result<usize> {
        match map.get(l) {
            Some(&i) => Ok(i),
            None => bail!(InvalidInput, "edge refers to unknown vertex {l}"),
        }
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        let map = self.index()?;
        let hyperedges = match (&self.edges, &self.hyperedges) {
            (Some(_), Some(_)) => bail!(InvalidInput, "give either edges or hyperedges, not both"),
            (Some(edges), None) => edges
                .iter()
                .map(|[u, v]| Ok(vec![Self::resolve(&map, u)?, Self::resolve(&map, v)?]))
                .collect::<Result<Vec<_>>>()?,
            (None, Some(h)) => h
                .iter()
                .map(|e| e.iter().map(|l| Self::resolve(&map, l)).collect())
                .collect::<Result<Vec<_>>>()?,
            (None, None) => Vec::new(),
        };
        Hypergraph::new(self.vertices.clone(), hyperedges)
    }

    pub fn to_multigraph(&self) -> Result<Multigraph> {
        if self.hyperedges.is_some() {
            bail!(InvalidInput, "expected a graph with \"edges\", got hyperedges");
        }
        let map = self.index()?;
        let edges = self
            .edges
            .iter()
            .flatten()
            .map(|[u, v]| Ok((Self::resolve(&map, u)?, Self::resolve(&map, v)?)))
            .collect::<Result<Vec<_>>>()?;
        Multigraph::new(self.vertices.clone(), edges)
    }
}

/// A motion-sheaf spec: one list of spanning rows per vertex, in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSpecJson {
    pub graph: GraphJson,
    pub n: usize,
    pub subspaces: Vec<Vec<Vec<JsonRational>>>,
}

impl MotionSpecJson {
    pub fn to_spec(&self) -> Result<MotionSheafSpec> {
        let subspaces = self.subspaces.iter().map(|rows| subspace_from_json(self.n, rows)).collect::<Result<_>>()?;
        MotionSheafSpec::new(self.graph.to_hypergraph()?, self.n, subspaces)
    }

    pub fn from_spec(spec: &MotionSheafSpec) -> Self {
        MotionSpecJson {
            graph: GraphJson::from_hypergraph(spec.base()),
            n: spec.ambient_dim(),
            subspaces: spec.subspaces().iter().map(|s| rationals_to_json(&s.basis().to_rows())).collect(),
        }
    }
}

fn rationals_to_json(rows: &[Vec<Rational>]) -> Vec<Vec<JsonRational>> {
    rows.iter().map(|r| r.iter().cloned().map(JsonRational).collect()).collect()
}

/// An associated-sheaf spec: subspaces per vertex and one form per edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssociatedSpecJson {
    pub graph: GraphJson,
    pub n: usize,
    pub subspaces: Vec<Vec<Vec<JsonRational>>>,
    pub forms: Vec<Vec<JsonRational>>,
}

impl AssociatedSpecJson {
    pub fn to_spec(&self) -> Result<AssociatedSheafSpec> {
        let subspaces = self.subspaces.iter().map(|rows| subspace_from_json(self.n, rows)).collect::<Result<_>>()?;
        let forms = self.forms.iter().map(|f| form_from_json(self.n, f)).collect::<Result<_>>()?;
        AssociatedSheafSpec::new(self.graph.to_multigraph()?, self.n, subspaces, forms)
    }

    pub fn from_spec(spec: &AssociatedSheafSpec) -> Self {
        AssociatedSpecJson {
            graph: GraphJson::from_multigraph(spec.base()),
            n: spec.ambient_dim(),
            subspaces: spec.subspaces().iter().map(|s| rationals_to_json(&s.basis().to_rows())).collect(),
            forms: spec.forms().iter().map(|f| f.coeffs.iter().cloned().map(JsonRational).collect()).collect(),
        }
    }
}

/// `{"graph": ..., "dim": d, "positions": {"label": [x, y, ...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkJson {
    pub graph: GraphJson,
    pub dim: usize,
    pub positions: BTreeMap<String, Vec<JsonRational>>,
}

fn per_vertex<'a, T>(labels: &[Label], map: &'a BTreeMap<String, T>, what: &str) -> Result<Vec<&'a T>> {
    if map.len() != labels.len() {
        bail!(InvalidInput, "{} {what} for {} vertices", map.len(), labels.len());
    }
    labels
        .iter()
        .map(|l| match map.get(&l.to_string()) {
            Some(x) => Ok(x),
            None => bail!(InvalidInput, "no {what} for vertex {l}"),
        })
        .collect()
}

impl FrameworkJson {
    pub fn to_framework(&self) -> Result<Framework> {
        let graph = self.graph.to_hypergraph()?;
        let positions = per_vertex(graph.labels(), &self.positions, "positions")?
            .into_iter()
            .map(|p| p.iter().map(|x| x.0.clone()).collect())
            .collect();
        Framework::new(graph, self.dim, positions)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineJson {
    pub point: Vec<JsonRational>,
    #[serde(default)]
    pub directions: Vec<Vec<JsonRational>>,
}

/// `{"graph": ..., "n": n, "subspaces": {"label": {"point": [...], "directions": [[...]]}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementJson {
    pub graph: GraphJson,
    pub n: usize,
    pub subspaces: BTreeMap<String, AffineJson>,
}

impl ArrangementJson {
    pub fn to_arrangement(&self) -> Result<Arrangement> {
        let graph = self.graph.to_hypergraph()?;
        let subspaces = per_vertex(graph.labels(), &self.subspaces, "affine subspaces")?
            .into_iter()
            .map(|a| {
                let point: Vec<Rational> = a.point.iter().map(|x| x.0.clone()).collect();
                AffineSubspace::new(point, subspace_from_json(self.n, &a.directions)?)
            })
            .collect::<Result<_>>()?;
        Arrangement::new(graph, self.n, subspaces)
    }
}

/// A cellular sheaf for reports: stalk dimensions, signed incidences and restriction matrices.
#[derive(Clone, Debug, Serialize)]
pub struct SheafJson {
    pub vertex_dims: Vec<usize>,
    pub edge_dims: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub orientation: Vec<i8>,
    pub restrictions: Vec<[Matrix; 2]>,
}

impl SheafJson {
    pub fn from_sheaf(f: &CellularSheaf) -> Self {
        SheafJson {
            vertex_dims: f.vertex_dims().to_vec(),
            edge_dims: f.edge_dims().to_vec(),
            edges: f.base().edges().iter().map(|&(u, v)| [u, v]).collect(),
            orientation: f.orientation().to_vec(),
            restrictions: f.restrictions().to_vec(),
        }
    }
}

fn dot_id(l: &Label) -> String {
    format!("\"{}\"", l.to_string().replace('"', "\\\""))
}

/// Undirected DOT; parallel edges are drawn separately.
pub fn multigraph_to_dot(g: &Multigraph) -> String {
    let mut out = String::from("graph G {\n");
    for l in g.labels() {
        let _ = writeln!(out, "  {};", dot_id(l));
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", dot_id(&g.labels()[u]), dot_id(&g.labels()[v]));
    }
    out.push_str("}\n");
    out
}

/// The incidence graph I(Γ): vertices as circles, hyperedges as boxes.
pub fn incidence_to_dot(g: &Hypergraph) -> String {
    let mut out = String::from("graph I {\n");
    for l in g.labels() {
        let _ = writeln!(out, "  {} [shape=circle];", dot_id(l));
    }
    for (e, members) in g.hyperedges().iter().enumerate() {
        let _ = writeln!(out, "  \"e{e}\" [shape=box];");
        for &v in members {
            let _ = writeln!(out, "  {} -- \"e{e}\";", dot_id(&g.labels()[v]));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    #[test]
    fn rationals_round_trip() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), frac(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let v: Vec<JsonRational> = serde_json::from_str(r#"[1, "2/4", "-5"]"#).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1","1/2","-5"]"#);
    }

    #[test]
    fn graph_json() {
        let j: GraphJson = serde_json::from_str(r#"{"vertices": ["a", "b", 3], "edges": [["a", "b"], ["b", 3], [3, "a"]]}"#).unwrap();
        let g = j.to_multigraph().unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(GraphJson::from_multigraph(&g), j);
        let bad: GraphJson = serde_json::from_str(r#"{"vertices": [0, 1], "edges": [[0, 2]]}"#).unwrap();
        assert!(bad.to_multigraph().is_err());
        let dup: GraphJson = serde_json::from_str(r#"{"vertices": [0, 0], "edges": []}"#).unwrap();
        assert!(dup.to_hypergraph().is_err());
        assert!(multigraph_to_dot(&g).contains("\"a\" -- \"b\";"));
    }

    #[test]
    fn motion_spec_json() {
        let text = r#"{"graph": {"vertices": [0, 1, 2], "edges": [[0, 1], [1, 2], [0, 2]]},
                       "n": 3, "subspaces": [[[1, 0, 0]], [[1, 0, 0]], [["2", 0, 0]]]}"#;
        let j: MotionSpecJson = serde_json::from_str(text).unwrap();
        let spec = j.to_spec().unwrap();
        assert_eq!(crate::motion::analyze(&spec).unwrap().h0, 2);
        assert_eq!(MotionSpecJson::from_spec(&spec).to_spec().unwrap(), spec);
    }

    #[test]
    fn framework_json() {
        let text = r#"{"graph": {"vertices": ["p", "q"], "edges": [["p", "q"]]}, "dim": 2,
                       "positions": {"p": [0, 0], "q": ["1/2", 3]}}"#;
        let fw = serde_json::from_str::<FrameworkJson>(text).unwrap().to_framework().unwrap();
        assert_eq!(fw.positions()[1][0], crate::linalg::frac(1, 2));
        let missing = r#"{"graph": {"vertices": ["p", "q"], "edges": []}, "dim": 2, "positions": {"p": [0, 0]}}"#;
        assert!(serde_json::from_str::<FrameworkJson>(missing).unwrap().to_framework().is_err());
    }
}
