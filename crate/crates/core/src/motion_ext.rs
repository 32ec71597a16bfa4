//! k-extensions of motion sheaves: exact checks of the subspace conditions
//! that guarantee independence survives, and the certified extension itself.

use serde::Serialize;

use crate::error::{bail, Result};
use crate::graphs::{apply_extension, ExtensionMove, Multigraph};
use crate::motion::{build_motion_sheaf, MotionSheafSpec};
use crate::subspace::{intersect, sum, Subspace};

/// Outcome of checking one move with a proposed subspace for the new vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MotionExtensionCertificate {
    #[serde(rename = "move")]
    pub mv: ExtensionMove,
    pub new_subspace: Subspace,
    /// Per deleted edge u_i u_i': S(v*) + S(u_i) = S(v*) + S(u_i') = S(u_i) + S(u_i').
    pub vertex_conditions: Vec<bool>,
    /// Per attach vertex v_j: the spanning condition completed by S(v_j).
    pub attach_conditions: Vec<bool>,
    /// Per deleted edge e_j: the spanning condition completed by S(u_j).
    pub deleted_conditions: Vec<bool>,
}

impl MotionExtensionCertificate {
    pub fn valid(&self) -> bool {
        self.vertex_conditions
            .iter()
            .chain(&self.attach_conditions)
            .chain(&self.deleted_conditions)
            .all(|&b| b)
    }
}

fn graph_base(spec: &MotionSheafSpec) -> Result<Multigraph> {
    if !spec.base().is_graph() {
        bail!(Precondition, "motion extensions need a graph base");
    }
    spec.base().to_multigraph()
}

/// Evaluates every condition exactly. Intersections over empty index sets are ℚⁿ.
pub fn check_motion_extension(spec: &MotionSheafSpec, mv: &ExtensionMove, new_subspace: &Subspace) -> Result<MotionExtensionCertificate> {
    let g = graph_base(spec)?;
    mv.validate(&g)?;
    let n = spec.ambient_dim();
    if new_subspace.ambient_dim() != n || new_subspace.dim() != spec.subspace_dim() {
        bail!(InvalidInput, "new vertex subspace must be {}-dimensional in ℚ^{n}", spec.subspace_dim());
    }
    let mut ends: Vec<usize> = mv.new_edges(&g).iter().map(|&(_, x)| x).collect();
    ends.sort_unstable();
    if ends.windows(2).any(|w| w[0] == w[1]) {
        bail!(Precondition, "the move creates parallel edges at the new vertex");
    }
    let s = spec.subspaces();
    let star = new_subspace;
    let full = Subspace::full(n);
    let pairs: Vec<(usize, usize)> = mv.deleted_edges.iter().map(|&e| g.edge(e)).collect();

    let mut vertex_conditions = Vec::with_capacity(pairs.len());
    for &(u, w) in &pairs {
        let a = sum(star, &s[u])?;
        let b = sum(star, &s[w])?;
        let c = sum(&s[u], &s[w])?;
        vertex_conditions.push(a == b && b == c);
    }

    let attach_sums: Vec<Subspace> = mv.attach_vertices.iter().map(|&v| sum(&s[v], star)).collect::<Result<_>>()?;
    let edge_sums: Vec<Subspace> = pairs.iter().map(|&(u, w)| sum(&s[u], &s[w])).collect::<Result<_>>()?;
    let meet_except = |parts: &[Subspace], skip: Option<usize>| -> Result<Subspace> {
        let chosen: Vec<&Subspace> = parts.iter().enumerate().filter(|&(i, _)| Some(i) != skip).map(|(_, p)| p).collect();
        intersect(n, &chosen)
    };
    let spans = |core: Subspace, last: &Subspace| -> Result<bool> { Ok(sum(&core, last)? == full) };

    let mut attach_conditions = Vec::with_capacity(mv.attach_vertices.len());
    let all_edges = meet_except(&edge_sums, None)?;
    for (j, &v) in mv.attach_vertices.iter().enumerate() {
        let core = intersect(n, &[&meet_except(&attach_sums, Some(j))?, &all_edges])?;
        attach_conditions.push(spans(core, &s[v])?);
    }

    let mut deleted_conditions = Vec::with_capacity(pairs.len());
    let all_attach = meet_except(&attach_sums, None)?;
    for (j, &(u, _)) in pairs.iter().enumerate() {
        let core = intersect(n, &[&all_attach, &meet_except(&edge_sums, Some(j))?])?;
        deleted_conditions.push(spans(core, &s[u])?);
    }

    Ok(MotionExtensionCertificate {
        mv: mv.clone(),
        new_subspace: new_subspace.clone(),
        vertex_conditions,
        attach_conditions,
        deleted_conditions,
    })
}

/// Applies a validated certificate to an independent spec and re-verifies
/// that the extended spec is independent.
pub fn extend_motion(spec: &MotionSheafSpec, cert: &MotionExtensionCertificate) -> Result<MotionSheafSpec> {
    let fresh = check_motion_extension(spec, &cert.mv, &cert.new_subspace)?;
    if fresh != *cert {
        bail!(InvalidInput, "certificate does not match this spec");
    }
    if !cert.valid() {
        bail!(Precondition, "certificate has a failing condition");
    }
    if build_motion_sheaf(spec)?.cohomology_dims().h1 != 0 {
        bail!(Precondition, "input motion sheaf is not independent");
    }
    let g = apply_extension(&graph_base(spec)?, &cert.mv)?;
    let mut subspaces = spec.subspaces().to_vec();
    subspaces.push(cert.new_subspace.clone());
    let out = MotionSheafSpec::new(g.to_hypergraph(), spec.ambient_dim(), subspaces)?;
    if build_motion_sheaf(&out)?.cohomology_dims().h1 != 0 {
        bail!(Internal, "certified extension produced h1 > 0");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    /// Point stabilizers in e(2), coordinates (ω, t): stab(x, y) = span(1, y, −x).
    fn stab(x: i64, y: i64) -> Subspace {
        Subspace::span(3, vec![vec![rat(1), rat(y), rat(-x)]]).unwrap()
    }

    fn triangle() -> MotionSheafSpec {
        MotionSheafSpec::new(Multigraph::complete(3).to_hypergraph(), 3, vec![stab(0, 0), stab(4, 0), stab(1, 3)]).unwrap()
    }

    #[test]
    fn zero_extension_generic_point() {
        let spec = triangle();
        let mv = ExtensionMove {
            dim: 2,
            deleted_edges: vec![],
            attach_vertices: vec![0, 1],
        };
        let cert = check_motion_extension(&spec, &mv, &stab(2, -5)).unwrap();
        assert!(cert.valid());
        let out = extend_motion(&spec, &cert).unwrap();
        assert_eq!(out.base().vertex_count(), 4);
        // Collinear with both attach vertices.
        let cert = check_motion_extension(&spec, &mv, &stab(7, 0)).unwrap();
        assert!(!cert.valid());
        assert!(extend_motion(&spec, &cert).is_err());
    }

    #[test]
    fn one_extension_needs_collinear_placement() {
        let spec = triangle();
        // Edge 0 is (0, 1) on the x-axis.
        let mv = ExtensionMove {
            dim: 2,
            deleted_edges: vec![0],
            attach_vertices: vec![2],
        };
        let on_line = check_motion_extension(&spec, &mv, &stab(2, 0)).unwrap();
        assert!(on_line.valid());
        assert!(extend_motion(&spec, &on_line).is_ok());
        let off_line = check_motion_extension(&spec, &mv, &stab(2, 1)).unwrap();
        assert_eq!(off_line.vertex_conditions, vec![false]);
    }

    #[test]
    fn degenerate_and_parallel_moves() {
        let spec = triangle();
        let mv = ExtensionMove {
            dim: 2,
            deleted_edges: vec![0],
            attach_vertices: vec![2],
        };
        assert!(!check_motion_extension(&spec, &mv, &stab(0, 0)).unwrap().valid());
        let parallel = ExtensionMove {
            dim: 2,
            deleted_edges: vec![],
            attach_vertices: vec![1, 1],
        };
        assert!(check_motion_extension(&spec, &parallel, &stab(2, -5)).is_err());
    }
}
