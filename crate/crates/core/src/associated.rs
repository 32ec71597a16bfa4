//! Associated sheaves: a multigraph with an s-dimensional S_v ⊆ ℚⁿ at every
//! vertex and a linear form α_e at every edge vanishing on both endpoint
//! subspaces. Vertex stalks are ℚⁿ/S_v and edge stalks are ℚ.

use rand::seq::SliceRandom;

use crate::error::{bail, Result};
use crate::graphs::{decompose_tight, is_sparse, multiply_edges, ExtensionMove, Multigraph, PebbleGame, DECOMPOSE_BUDGET};
use crate::linalg::{rat, Matrix, Rational};
use crate::motion::{build_motion_sheaf, MotionSheafSpec};
use crate::rng::{derive_seed, random_vector, rng_from_seed, SeedRng};
use crate::sheaf::{CellularSheaf, CohomologyDims, CohomologyReport};
use crate::subspace::{
    annihilator_basis, common_kernel, forms_independent, intersect, projection_of, sample_form_annihilating, sample_subspace_with, sample_subspace_within, sum,
    LinearForm, Subspace,
};

/// A point of Z_{s,n}(Γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedSheafSpec {
    base: Multigraph,
    ambient: usize,
    subspaces: Vec<Subspace>,
    forms: Vec<LinearForm>,
}

impl AssociatedSheafSpec {
    /// Checks α_e(S_v) = 0 for v ∈ e and S_u ∩ S_v = 0 along every edge.
    pub fn new(base: Multigraph, ambient: usize, subspaces: Vec<Subspace>, forms: Vec<LinearForm>) -> Result<Self> {
        if subspaces.len() != base.vertex_count() || forms.len() != base.edge_count() {
            bail!(InvalidInput, "need one subspace per vertex and one form per edge");
        }
        if subspaces.iter().any(|s| s.ambient_dim() != ambient) || forms.iter().any(|f| f.ambient_dim() != ambient) {
            bail!(DimensionMismatch, "subspaces and forms must live over ℚ^{ambient}");
        }
        if subspaces.windows(2).any(|w| w[0].dim() != w[1].dim()) {
            bail!(InvalidInput, "vertex subspaces must share one dimension");
        }
        for (e, &(u, v)) in base.edges().iter().enumerate() {
            if !forms[e].annihilates(&subspaces[u]) || !forms[e].annihilates(&subspaces[v]) {
                bail!(InvalidInput, "form on edge {e} does not vanish on its endpoint subspaces");
            }
            if intersect(ambient, &[&subspaces[u], &subspaces[v]])?.dim() != 0 {
                bail!(InvalidInput, "endpoint subspaces of edge {e} intersect nontrivially");
            }
        }
        Ok(AssociatedSheafSpec {
            base,
            ambient,
            subspaces,
            forms,
        })
    }

    pub fn base(&self) -> &Multigraph {
        &self.base
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn subspace_dim(&self) -> usize {
        self.subspaces.first().map_or(0, Subspace::dim)
    }

    /// (n − s)|V| − |E|, which equals h0 − h1.
    pub fn euler_characteristic(&self) -> i64 {
        ((self.ambient - self.subspace_dim()) * self.base.vertex_count()) as i64 - self.base.edge_count() as i64
    }
}

/// Sheaf on a graph base with stalks ℚⁿ/S(v) and ℚⁿ/(S(u) + S(v)).
pub fn collapse_to_graph_sheaf(spec: &MotionSheafSpec) -> Result<CellularSheaf> {
    if !spec.base().is_graph() {
        bail!(Precondition, "collapsing needs a graph base");
    }
    let base = spec.base().to_multigraph()?;
    let q: Vec<Matrix> = spec.subspaces().iter().map(Subspace::quotient_matrix).collect();
    let mut edge_dims = Vec::with_capacity(base.edge_count());
    let mut restrictions = Vec::with_capacity(base.edge_count());
    for &(u, v) in base.edges() {
        let target = sum(&spec.subspaces()[u], &spec.subspaces()[v])?.quotient_matrix();
        let (Some(ru), Some(rv)) = (Matrix::solve_left(&target, &q[u])?, Matrix::solve_left(&target, &q[v])?) else {
            bail!(Internal, "quotient map onto ℚⁿ/(S(u) + S(v)) does not factor");
        };
        edge_dims.push(target.nrows());
        restrictions.push([ru, rv]);
    }
    CellularSheaf::new(base, q.iter().map(Matrix::nrows).collect(), edge_dims, restrictions)
}

/// Replaces each edge uv by n − 2s copies carrying the echelon annihilator
/// basis of S(u) + S(v). Copy i of edge e gets id e·(n − 2s) + i. Errors
/// with `Internal` if its cohomology differs from the motion sheaf's.
pub fn expand_to_multigraph(spec: &MotionSheafSpec) -> Result<AssociatedSheafSpec> {
    let (n, s) = (spec.ambient_dim(), spec.subspace_dim());
    if 2 * s >= n {
        bail!(Precondition, "expansion needs s < n/2, got s = {s}, n = {n}");
    }
    let base = spec.base().to_multigraph()?;
    let mut forms = Vec::with_capacity(base.edge_count() * (n - 2 * s));
    for (e, &(u, v)) in base.edges().iter().enumerate() {
        let joined = sum(&spec.subspaces()[u], &spec.subspaces()[v])?;
        if joined.dim() != 2 * s {
            bail!(Precondition, "endpoint subspaces of edge {e} intersect nontrivially");
        }
        forms.extend(annihilator_basis(&joined));
    }
    let out = AssociatedSheafSpec::new(multiply_edges(&base, n - 2 * s)?, n, spec.subspaces().to_vec(), forms)?;
    let (a, m) = (associated_dims(&out)?, build_motion_sheaf(spec)?.cohomology_dims());
    if (a.h0, a.h1) != (m.h0, m.h1) {
        bail!(
            Internal,
            "expanded sheaf has (h0, h1) = ({}, {}), motion sheaf ({}, {})",
            a.h0,
            a.h1,
            m.h0,
            m.h1
        );
    }
    Ok(out)
}

/// The direct sheaf: ℚⁿ/S_v → ℚ is the row c with c·Q_{S_v} = α_e.
pub fn associated_sheaf(spec: &AssociatedSheafSpec) -> Result<CellularSheaf> {
    let q: Vec<Matrix> = spec.subspaces.iter().map(Subspace::quotient_matrix).collect();
    let mut restrictions = Vec::with_capacity(spec.base.edge_count());
    for (e, &(u, v)) in spec.base.edges().iter().enumerate() {
        let alpha = Matrix::from_rows(spec.ambient, vec![spec.forms[e].coeffs.clone()])?;
        let (Some(ru), Some(rv)) = (Matrix::solve_left(&alpha, &q[u])?, Matrix::solve_left(&alpha, &q[v])?) else {
            bail!(Internal, "form on edge {e} does not factor through its endpoint quotients");
        };
        restrictions.push([ru, rv]);
    }
    CellularSheaf::new(
        spec.base.clone(),
        q.iter().map(Matrix::nrows).collect(),
        vec![1; spec.base.edge_count()],
        restrictions,
    )
}

/// The |E| × n|V| matrix whose row e holds ±α_e∘(I − P_v) in the block of each endpoint v.
pub fn r_matrix(spec: &AssociatedSheafSpec) -> Matrix {
    let n = spec.ambient;
    let kill: Vec<Matrix> = spec.subspaces.iter().map(|s| projection_of(s).complement().matrix().clone()).collect();
    let mut r = Matrix::zeros(spec.base.edge_count(), n * spec.base.vertex_count());
    for (e, &(u, v)) in spec.base.edges().iter().enumerate() {
        let sign = if u < v { 1 } else { -1 };
        for (end, sgn) in [(u, sign), (v, -sign)] {
            let sgn = rat(sgn);
            for j in 0..n {
                let entry: Rational = (0..n).map(|i| &spec.forms[e].coeffs[i] * kill[end].get(i, j)).sum();
                r.set(e, end * n + j, &sgn * entry);
            }
        }
    }
    r
}

fn r_matrix_dims(spec: &AssociatedSheafSpec) -> CohomologyDims {
    let rank = r_matrix(spec).rank();
    let kernel = spec.ambient * spec.base.vertex_count() - rank;
    CohomologyDims {
        h0: kernel - spec.subspace_dim() * spec.base.vertex_count(),
        h1: spec.base.edge_count() - rank,
        rank,
    }
}

fn agree(direct: &CohomologyDims, other: &CohomologyDims) -> Result<()> {
    if (direct.h0, direct.h1) != (other.h0, other.h1) {
        bail!(
            Internal,
            "associated cohomology paths disagree: direct (h0, h1) = ({}, {}), R-matrix ({}, {})",
            direct.h0,
            direct.h1,
            other.h0,
            other.h1
        );
    }
    Ok(())
}

/// h0 and h1 through both the direct sheaf and the R matrix.
pub fn associated_dims(spec: &AssociatedSheafSpec) -> Result<CohomologyDims> {
    let direct = associated_sheaf(spec)?.cohomology_dims();
    agree(&direct, &r_matrix_dims(spec))?;
    Ok(direct)
}

/// Full report from the direct sheaf, cross-checked against the R matrix.
pub fn cohomology_associated(spec: &AssociatedSheafSpec) -> Result<CohomologyReport> {
    let report = associated_sheaf(spec)?.cohomology();
    let direct = CohomologyDims {
        h0: report.h0,
        h1: report.h1,
        rank: report.coboundary_rank,
    };
    agree(&direct, &r_matrix_dims(spec))?;
    Ok(report)
}

/// The extended point without any cohomology check.
fn extend_unverified(spec: &AssociatedSheafSpec, mv: &ExtensionMove, fresh: &[LinearForm]) -> Result<AssociatedSheafSpec> {
    let (n, s) = (spec.ambient, spec.subspace_dim());
    if mv.dim + s != n {
        bail!(Precondition, "extensions of Z_{{{s},{n}}} need d = n − s = {}, got {}", n - s, mv.dim);
    }
    mv.validate(&spec.base)?;
    if fresh.len() != mv.attach_vertices.len() {
        bail!(Precondition, "need {} fresh forms, got {}", mv.attach_vertices.len(), fresh.len());
    }
    for (j, (f, &v)) in fresh.iter().zip(&mv.attach_vertices).enumerate() {
        if f.ambient_dim() != n {
            bail!(DimensionMismatch, "fresh form {j} lives over ℚ^{}", f.ambient_dim());
        }
        if !f.annihilates(&spec.subspaces[v]) {
            bail!(Precondition, "fresh form {j} does not vanish on the subspace of attach vertex {v}");
        }
    }
    let mut all: Vec<LinearForm> = mv.deleted_edges.iter().map(|&e| spec.forms[e].clone()).collect();
    all.extend_from_slice(fresh);
    if !forms_independent(n, &all) {
        bail!(Precondition, "the {} forms of the extension are linearly dependent", all.len());
    }
    let new_subspace = common_kernel(n, &all);
    if new_subspace.dim() != s {
        bail!(Internal, "new vertex subspace has dimension {}, expected {s}", new_subspace.dim());
    }
    let mut forms: Vec<LinearForm> = mv.kept_edges(spec.base.edge_count()).iter().map(|&e| spec.forms[e].clone()).collect();
    for &e in &mv.deleted_edges {
        forms.push(spec.forms[e].clone());
        forms.push(spec.forms[e].clone());
    }
    forms.extend_from_slice(fresh);
    let base = crate::graphs::apply_extension(&spec.base, mv)?;
    let mut subspaces = spec.subspaces.clone();
    subspaces.push(new_subspace);
    AssociatedSheafSpec::new(base, n, subspaces, forms).map_err(|e| crate::Error::Precondition(format!("extended point leaves Z_{{{s},{n}}}: {e}")))
}

/// Applies `mv` with the given fresh forms (one per attach vertex). When the
/// input has h1 = 0 the output is re-verified to have h1 = 0.
pub fn extend_associated_with_forms(spec: &AssociatedSheafSpec, mv: &ExtensionMove, fresh: &[LinearForm]) -> Result<AssociatedSheafSpec> {
    let out = extend_unverified(spec, mv, fresh)?;
    if associated_dims(spec)?.h1 == 0 && associated_dims(&out)?.h1 != 0 {
        bail!(Internal, "extension of an independent associated sheaf produced h1 > 0");
    }
    Ok(out)
}

/// Fresh-form sampling attempts per extension.
pub const FORM_RETRIES: usize = 64;

fn sample_fresh(spec: &AssociatedSheafSpec, mv: &ExtensionMove, rng: &mut SeedRng) -> Result<AssociatedSheafSpec> {
    let mut last = None;
    for _ in 0..FORM_RETRIES {
        let fresh: Vec<LinearForm> = mv.attach_vertices.iter().map(|&v| sample_form_annihilating(&spec.subspaces[v], rng)).collect();
        match extend_unverified(spec, mv, &fresh) {
            Ok(out) => return Ok(out),
            Err(e @ crate::Error::Precondition(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Samples fresh forms from the annihilators of the attach vertices until the
/// extension is valid, then re-verifies h1 = 0 when the input has it.
pub fn extend_associated(spec: &AssociatedSheafSpec, mv: &ExtensionMove, seed: u64) -> Result<AssociatedSheafSpec> {
    let deleted: Vec<LinearForm> = mv.deleted_edges.iter().filter_map(|&e| spec.forms.get(e).cloned()).collect();
    if !forms_independent(spec.ambient, &deleted) {
        bail!(Precondition, "forms on the deleted edges are linearly dependent");
    }
    let out = sample_fresh(spec, mv, &mut rng_from_seed(seed))?;
    if associated_dims(spec)?.h1 == 0 && associated_dims(&out)?.h1 != 0 {
        bail!(Internal, "extension of an independent associated sheaf produced h1 > 0");
    }
    Ok(out)
}

/// Attempts per stage of [`find_independent_forms`].
const REASSIGN_ATTEMPTS: usize = 16;

fn forms_of(spec: &AssociatedSheafSpec, edges: &[usize]) -> Vec<LinearForm> {
    edges.iter().map(|&e| spec.forms[e].clone()).collect()
}

/// Reassigns forms, and if needed vertex subspaces, so that the forms on
/// `edges` are independent without raising h1. Forms on the selected edges
/// are resampled first; failing that, independent forms are fixed and every
/// S_v is redrawn inside the common kernel of its selected edges.
pub fn find_independent_forms(spec: &AssociatedSheafSpec, edges: &[usize], seed: u64) -> Result<Option<AssociatedSheafSpec>> {
    let (n, s) = (spec.ambient, spec.subspace_dim());
    let mut selected = edges.to_vec();
    selected.sort_unstable();
    if selected.windows(2).any(|w| w[0] == w[1]) || selected.last().is_some_and(|&e| e >= spec.base.edge_count()) {
        bail!(InvalidInput, "edge selection has repeats or unknown edges");
    }
    if selected.len() > n - s {
        bail!(Precondition, "{} edges selected, at most n − s = {} allowed", selected.len(), n - s);
    }
    let mut at_vertex = vec![0usize; spec.base.vertex_count()];
    for &e in &selected {
        let (u, v) = spec.base.edge(e);
        at_vertex[u] += 1;
        at_vertex[v] += 1;
    }
    if at_vertex.iter().any(|&c| c > n - 2 * s) {
        bail!(Precondition, "more than n − 2s = {} selected edges meet at one vertex", n - 2 * s);
    }
    if forms_independent(n, &forms_of(spec, &selected)) {
        return Ok(Some(spec.clone()));
    }
    let h1 = associated_dims(spec)?.h1;
    let mut rng = rng_from_seed(seed);
    let accept = |cand: AssociatedSheafSpec| -> Result<Option<AssociatedSheafSpec>> {
        let ok = forms_independent(n, &forms_of(&cand, &selected)) && associated_dims(&cand)?.h1 <= h1;
        Ok(ok.then_some(cand))
    };
    for _ in 0..REASSIGN_ATTEMPTS {
        let mut forms = spec.forms.clone();
        for &e in &selected {
            let (u, v) = spec.base.edge(e);
            forms[e] = sample_form_annihilating(&sum(&spec.subspaces[u], &spec.subspaces[v])?, &mut rng);
        }
        if let Ok(cand) = AssociatedSheafSpec::new(spec.base.clone(), n, spec.subspaces.clone(), forms) {
            if let Some(found) = accept(cand)? {
                return Ok(Some(found));
            }
        }
    }
    for _ in 0..REASSIGN_ATTEMPTS {
        let chosen = loop {
            let cand: Vec<LinearForm> = selected.iter().map(|_| LinearForm::new(random_vector(&mut rng, n))).collect();
            if forms_independent(n, &cand) {
                break cand;
            }
        };
        let mut forms = spec.forms.clone();
        for (&e, f) in selected.iter().zip(&chosen) {
            forms[e] = f.clone();
        }
        let mut subspaces = Vec::with_capacity(spec.base.vertex_count());
        for v in 0..spec.base.vertex_count() {
            let local: Vec<LinearForm> = selected
                .iter()
                .zip(&chosen)
                .filter(|(&e, _)| {
                    let (a, b) = spec.base.edge(e);
                    a == v || b == v
                })
                .map(|(_, f)| f.clone())
                .collect();
            subspaces.push(sample_subspace_within(&common_kernel(n, &local), s, &mut rng)?);
        }
        for (e, &(u, v)) in spec.base.edges().iter().enumerate() {
            if selected.binary_search(&e).is_err() {
                forms[e] = sample_form_annihilating(&sum(&subspaces[u], &subspaces[v])?, &mut rng);
            }
        }
        if let Ok(cand) = AssociatedSheafSpec::new(spec.base.clone(), n, subspaces, forms) {
            if let Some(found) = accept(cand)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// Generic point: random S_v and random forms vanishing on both endpoints.
pub fn sample_associated_spec(g: &Multigraph, s: usize, n: usize, seed: u64) -> Result<AssociatedSheafSpec> {
    if 2 * s >= n {
        bail!(Precondition, "edge forms need s < n/2, got s = {s}, n = {n}");
    }
    let mut rng = rng_from_seed(seed);
    loop {
        let subspaces: Vec<Subspace> = (0..g.vertex_count()).map(|_| sample_subspace_with(s, n, &mut rng)).collect::<Result<_>>()?;
        let mut forms = Vec::with_capacity(g.edge_count());
        for &(u, v) in g.edges() {
            forms.push(sample_form_annihilating(&sum(&subspaces[u], &subspaces[v])?, &mut rng));
        }
        if let Ok(spec) = AssociatedSheafSpec::new(g.clone(), n, subspaces, forms) {
            return Ok(spec);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependentSheaf {
    Built { spec: AssociatedSheafSpec, via: Construction },
    NotSparse { witness: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Induction,
    Sampling,
}

/// Random sampling attempts when the inductive construction is unavailable.
const SAMPLING_FALLBACK: usize = 8;

/// Adds edges accepted by the (n−1, n) pebble game until the graph is tight.
/// New edges are appended after the original ones.
fn augment_to_tight(g: &Multigraph, n: usize, rng: &mut SeedRng) -> Result<Multigraph> {
    let mut game = PebbleGame::new(g.vertex_count(), n - 1, n)?;
    for &(u, v) in g.edges() {
        if game.try_insert(u, v).is_err() {
            bail!(Internal, "sparse graph rejected by the pebble game");
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..g.vertex_count()).flat_map(|u| (u + 1..g.vertex_count()).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut out = g.clone();
    for (u, v) in pairs {
        while game.try_insert(u, v).is_ok() {
            out.add_edge(u, v)?;
        }
    }
    Ok(out)
}

/// Z_{1,n} point on K₂ⁿ⁻² with independent forms.
fn base_case(n: usize, rng: &mut SeedRng) -> Result<AssociatedSheafSpec> {
    let base = Multigraph::k2(n - 2);
    loop {
        let subspaces = vec![sample_subspace_with(1, n, rng)?, sample_subspace_with(1, n, rng)?];
        let joined = sum(&subspaces[0], &subspaces[1])?;
        let forms: Vec<LinearForm> = (0..n - 2).map(|_| sample_form_annihilating(&joined, rng)).collect();
        if let Ok(spec) = AssociatedSheafSpec::new(base.clone(), n, subspaces, forms) {
            if associated_dims(&spec)?.h1 == 0 {
                return Ok(spec);
            }
        }
    }
}

fn replay_moves(n: usize, moves: &[ExtensionMove], seed: u64) -> Result<Option<AssociatedSheafSpec>> {
    let mut rng = rng_from_seed(seed);
    let mut spec = base_case(n, &mut rng)?;
    for (i, mv) in moves.iter().enumerate() {
        let deleted = forms_of(&spec, &mv.deleted_edges);
        if !forms_independent(n, &deleted) {
            match find_independent_forms(&spec, &mv.deleted_edges, derive_seed(seed, i as u64)) {
                Ok(Some(fixed)) => spec = fixed,
                Ok(None) | Err(crate::Error::Precondition(_)) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        let next = match sample_fresh(&spec, mv, &mut rng) {
            Ok(next) => next,
            Err(crate::Error::Precondition(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if associated_dims(&next)?.h1 != 0 {
            bail!(Internal, "extension step {i} produced h1 > 0");
        }
        spec = next;
    }
    Ok(Some(spec))
}

/// A Z_{1,n} point on `g` with h1 = 0, built by completing g to an
/// (n−1, n)-tight graph, replaying its extension sequence from K₂ⁿ⁻² and
/// deleting the added edges. Falls back to random sampling when the
/// decomposition runs out of budget.
pub fn build_independent_sheaf(g: &Multigraph, n: usize, seed: u64) -> Result<IndependentSheaf> {
    if n < 3 {
        bail!(Precondition, "need n ≥ 3, got {n}");
    }
    let report = is_sparse(g, n - 1, n)?;
    if let Some(witness) = report.violating_set {
        return Ok(IndependentSheaf::NotSparse { witness });
    }
    let mut rng = rng_from_seed(seed);
    if g.vertex_count() >= 2 {
        let tight = augment_to_tight(g, n, &mut rng)?;
        if let Some(dec) = decompose_tight(&tight, n, DECOMPOSE_BUDGET)? {
            if let Some(replayed) = replay_moves(n, &dec.moves, derive_seed(seed, 1))? {
                let mut subspaces = vec![Subspace::zero(n); g.vertex_count()];
                for (i, &v) in dec.vertex_order.iter().enumerate() {
                    subspaces[v] = replayed.subspaces[i].clone();
                }
                let mut forms = vec![LinearForm::new(vec![Rational::default(); n]); tight.edge_count()];
                for (j, &e) in dec.edge_order.iter().enumerate() {
                    let (a, b) = replayed.base.edge(j);
                    let (x, y) = (dec.vertex_order[a], dec.vertex_order[b]);
                    if (x.min(y), x.max(y)) != {
                        let (p, q) = tight.edge(e);
                        (p.min(q), p.max(q))
                    } {
                        bail!(Internal, "decomposition edge map is inconsistent");
                    }
                    forms[e] = replayed.forms[j].clone();
                }
                forms.truncate(g.edge_count());
                let spec = AssociatedSheafSpec::new(g.clone(), n, subspaces, forms)?;
                if associated_dims(&spec)?.h1 == 0 {
                    return Ok(IndependentSheaf::Built {
                        spec,
                        via: Construction::Induction,
                    });
                }
            }
        }
    }
    for t in 0..SAMPLING_FALLBACK {
        let spec = sample_associated_spec(g, 1, n, derive_seed(seed, 100 + t as u64))?;
        if associated_dims(&spec)?.h1 == 0 {
            return Ok(IndependentSheaf::Built {
                spec,
                via: Construction::Sampling,
            });
        }
    }
    bail!(Internal, "no independent associated sheaf found on a sparse graph")
}
