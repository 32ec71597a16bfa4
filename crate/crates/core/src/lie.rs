//! Coordinatized Lie algebras for two group actions on ℚ^d: the Euclidean
//! group (bar-joint frameworks) and dilations plus translations (parallel
//! redrawings), together with the frameworks that feed them into motion sheaves.
//!
//! An element of e(d) is a pair (Ω, t) with Ω skew. Its coordinate vector
//! lists Ω_{ji} for the pairs i < j in lexicographic order, then t. In the
//! plane this is (ω, t₁, t₂) with Ω = [[0, −ω], [ω, 0]].

use serde::Serialize;

use crate::error::{bail, Result};
use crate::graphs::{Hypergraph, Multigraph};
use crate::linalg::{Matrix, Rational};
use crate::motion::MotionSheafSpec;
use crate::rng::{random_vector, rng_from_seed};
use crate::subspace::{sum, Subspace};

fn zero() -> Rational {
    Rational::default()
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn check_point(q: &[Rational], d: usize) -> Result<()> {
    if q.len() != d {
        bail!(DimensionMismatch, "point has {} coordinates, expected {d}", q.len());
    }
    Ok(())
}

fn minus(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The Euclidean group of ℚ^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EuclideanModel {
    pub d: usize,
}

impl EuclideanModel {
    pub fn new(d: usize) -> Result<Self> {
        if d < 1 {
            bail!(InvalidInput, "dimension must be positive");
        }
        Ok(EuclideanModel { d })
    }

    pub fn rotation_dim(&self) -> usize {
        self.d * (self.d - 1) / 2
    }

    /// C(d + 1, 2).
    pub fn algebra_dim(&self) -> usize {
        self.rotation_dim() + self.d
    }

    /// (i, j) with i < j, indexing the rotation coordinates.
    pub fn rotation_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.d).flat_map(|i| (i + 1..self.d).map(move |j| (i, j))).collect()
    }

    pub fn skew_from_coords(&self, coords: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.d, self.d);
        for (k, (i, j)) in self.rotation_pairs().into_iter().enumerate() {
            m.set(j, i, coords[k].clone());
            m.set(i, j, -coords[k].clone());
        }
        m
    }

    pub fn coords_from_skew(&self, omega: &Matrix) -> Vec<Rational> {
        self.rotation_pairs().into_iter().map(|(i, j)| omega.get(j, i).clone()).collect()
    }

    /// Coordinates of (Ω, t).
    pub fn element(&self, omega: &Matrix, t: &[Rational]) -> Vec<Rational> {
        let mut out = self.coords_from_skew(omega);
        out.extend_from_slice(t);
        out
    }

    fn split(&self, x: &[Rational]) -> (Matrix, Vec<Rational>) {
        let r = self.rotation_dim();
        (self.skew_from_coords(&x[..r]), x[r..].to_vec())
    }

    /// Rotation coordinates of the skew matrix v ↦ ω × v in ℚ³.
    pub fn axial_to_coords(omega: &[Rational; 3]) -> Vec<Rational> {
        vec![omega[2].clone(), -omega[1].clone(), omega[0].clone()]
    }

    /// Stabilizer of q: {(Ω, −Ωq)}, of dimension C(d, 2).
    pub fn point_stabilizer_algebra(&self, q: &[Rational]) -> Result<Subspace> {
        check_point(q, self.d)?;
        let rows = (0..self.rotation_dim())
            .map(|k| {
                let mut coords = vec![zero(); self.rotation_dim()];
                coords[k] = one();
                let omega = self.skew_from_coords(&coords);
                let t: Vec<Rational> = omega.mul_vec(q).expect("square").into_iter().map(|x| -x).collect();
                self.element(&omega, &t)
            })
            .collect();
        Subspace::span(self.algebra_dim(), rows)
    }

    /// Common stabilizer of two distinct points, of dimension C(d − 1, 2).
    pub fn edge_stabilizer_algebra(&self, q1: &[Rational], q2: &[Rational]) -> Result<Subspace> {
        if q1 == q2 {
            bail!(InvalidInput, "edge endpoints coincide");
        }
        let a = self.point_stabilizer_algebra(q1)?;
        let b = self.point_stabilizer_algebra(q2)?;
        crate::subspace::intersect(self.algebra_dim(), &[&a, &b])
    }

    /// span{(q₁ − q₂, q₂ × q₁)} in e(3): rotations about the line through both points.
    pub fn edge_stabilizer_closed_form(q1: &[Rational; 3], q2: &[Rational; 3]) -> Result<Subspace> {
        let axis: [Rational; 3] = std::array::from_fn(|i| &q1[i] - &q2[i]);
        let mut row = Self::axial_to_coords(&axis);
        row.extend(cross(q2, q1));
        Subspace::span(6, vec![row])
    }

    /// x, y, z collinear, decided by h_x ⊆ h_y + h_z and cross-checked
    /// against the rank of [y − x; z − x].
    pub fn collinear(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Result<bool> {
        if x == y || y == z || x == z {
            bail!(InvalidInput, "collinearity needs three distinct points");
        }
        let hx = self.point_stabilizer_algebra(x)?;
        let algebraic = hx.is_subspace_of(&sum(&self.point_stabilizer_algebra(y)?, &self.point_stabilizer_algebra(z)?)?);
        let geometric = Matrix::from_rows(self.d, vec![minus(y, x), minus(z, x)])?.rank() <= 1;
        if algebraic != geometric {
            bail!(Internal, "stabilizer containment disagrees with geometric collinearity");
        }
        Ok(algebraic)
    }

    /// [(Ω₁, t₁), (Ω₂, t₂)] = (Ω₁Ω₂ − Ω₂Ω₁, Ω₁t₂ − Ω₂t₁).
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let (a, s) = self.split(x);
        let (b, t) = self.split(y);
        let omega = a.mul(&b).and_then(|ab| ab.sub(&b.mul(&a)?)).expect("square");
        let trans = minus(&a.mul_vec(&t).expect("square"), &b.mul_vec(&s).expect("square"));
        self.element(&omega, &trans)
    }

    /// Matrix of Ad(R, b) on coordinate columns: (Ω, t) ↦ (RΩRᵀ, −RΩRᵀb + Rt).
    pub fn adjoint_matrix(&self, rotation: &Matrix, shift: &[Rational]) -> Result<Matrix> {
        if rotation.nrows() != self.d || rotation.ncols() != self.d {
            bail!(DimensionMismatch, "rotation must be {0}x{0}", self.d);
        }
        check_point(shift, self.d)?;
        let n = self.algebra_dim();
        let rt = rotation.transpose();
        let mut ad = Matrix::zeros(n, n);
        for k in 0..n {
            let mut e = vec![zero(); n];
            e[k] = one();
            let (omega, t) = self.split(&e);
            let conj = rotation.mul(&omega)?.mul(&rt)?;
            let moved = conj.mul_vec(shift)?;
            let image_t: Vec<Rational> = rotation.mul_vec(&t)?.iter().zip(&moved).map(|(a, b)| a - b).collect();
            for (i, x) in self.element(&conj, &image_t).into_iter().enumerate() {
                ad.set(i, k, x);
            }
        }
        Ok(ad)
    }
}

fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

/// (I − K)⁻¹(I + K), a rational rotation for skew K.
pub fn cayley_rotation(skew: &Matrix) -> Result<Matrix> {
    let n = skew.nrows();
    if skew.transpose() != skew.scaled(&-one()) {
        bail!(InvalidInput, "Cayley transform needs a skew-symmetric matrix");
    }
    let id = Matrix::identity(n);
    let Some(inv) = id.sub(skew)?.inverse() else {
        bail!(Internal, "I − K is singular for skew K");
    };
    let plus = Matrix::identity(n).sub(&skew.scaled(&-one()))?;
    inv.mul(&plus)
}

/// Image of a subspace under a linear map given on coordinate columns.
pub fn transform_subspace(map: &Matrix, s: &Subspace) -> Result<Subspace> {
    Ok(Subspace::from_matrix(&s.basis().mul(&map.transpose())?))
}

/// A group with a distinguished subalgebra and a sampler of adjoint matrices.
pub trait OrbitModel {
    fn algebra_dim(&self) -> usize;
    fn base_subalgebra(&self) -> Result<Subspace>;
    fn sample_adjoint(&self, rng: &mut dyn rand::RngCore) -> Result<Matrix>;
}

impl OrbitModel for EuclideanModel {
    fn algebra_dim(&self) -> usize {
        EuclideanModel::algebra_dim(self)
    }

    /// so(d), the stabilizer of the origin.
    fn base_subalgebra(&self) -> Result<Subspace> {
        self.point_stabilizer_algebra(&vec![zero(); self.d])
    }

    fn sample_adjoint(&self, rng: &mut dyn rand::RngCore) -> Result<Matrix> {
        let coords = random_vector(rng, self.rotation_dim());
        let rotation = cayley_rotation(&self.skew_from_coords(&coords))?;
        let shift = random_vector(rng, self.d);
        self.adjoint_matrix(&rotation, &shift)
    }
}

/// Vertex subspaces Ad(g_v)(h) for independently sampled group elements.
pub fn sample_orbit_spec(model: &dyn OrbitModel, g: &Hypergraph, seed: u64) -> Result<MotionSheafSpec> {
    let mut rng = rng_from_seed(seed);
    let base = model.base_subalgebra()?;
    let subspaces = (0..g.vertex_count())
        .map(|_| transform_subspace(&model.sample_adjoint(&mut rng)?, &base))
        .collect::<Result<Vec<_>>>()?;
    MotionSheafSpec::new(g.clone(), model.algebra_dim(), subspaces)
}

/// A graph with a point of ℚ^d at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Framework {
    graph: Hypergraph,
    dim: usize,
    positions: Vec<Vec<Rational>>,
}

impl Framework {
    pub fn new(graph: Hypergraph, dim: usize, positions: Vec<Vec<Rational>>) -> Result<Self> {
        if positions.len() != graph.vertex_count() {
            bail!(InvalidInput, "{} positions for {} vertices", positions.len(), graph.vertex_count());
        }
        for p in &positions {
            check_point(p, dim)?;
        }
        for (e, members) in graph.hyperedges().iter().enumerate() {
            for (i, &u) in members.iter().enumerate() {
                if members[i + 1..].iter().any(|&v| positions[u] == positions[v]) {
                    bail!(InvalidInput, "edge {e} has coincident endpoints");
                }
            }
        }
        Ok(Framework { graph, dim, positions })
    }

    pub fn from_graph(g: &Multigraph, dim: usize, positions: Vec<Vec<Rational>>) -> Result<Self> {
        Framework::new(g.to_hypergraph(), dim, positions)
    }

    /// Integer positions drawn from the sampling box.
    pub fn random(g: &Multigraph, dim: usize, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        loop {
            let positions = (0..g.vertex_count()).map(|_| random_vector(&mut rng, dim)).collect();
            if let Ok(fw) = Framework::from_graph(g, dim, positions) {
                return Ok(fw);
            }
        }
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn positions(&self) -> &[Vec<Rational>] {
        &self.positions
    }
}

/// Point stabilizers at every vertex.
pub fn bar_joint_spec(model: &EuclideanModel, fw: &Framework) -> Result<MotionSheafSpec> {
    if fw.dim != model.d {
        bail!(DimensionMismatch, "framework in ℚ^{} for a model of ℚ^{}", fw.dim, model.d);
    }
    let subspaces = fw.positions.iter().map(|p| model.point_stabilizer_algebra(p)).collect::<Result<_>>()?;
    MotionSheafSpec::new(fw.graph.clone(), model.algebra_dim(), subspaces)
}

/// Dilations and translations of ℚⁿ, coordinates (ℓ, t₁, …, tₙ) for x ↦ ℓx + t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParallelModel {
    pub n: usize,
}

/// p + span(directions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub point: Vec<Rational>,
    pub directions: Subspace,
}

impl AffineSubspace {
    pub fn new(point: Vec<Rational>, directions: Subspace) -> Result<Self> {
        check_point(&point, directions.ambient_dim())?;
        Ok(AffineSubspace { point, directions })
    }

    pub fn point(point: Vec<Rational>) -> Self {
        let n = point.len();
        AffineSubspace {
            point,
            directions: Subspace::zero(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    /// Smallest affine subspace containing both.
    pub fn join(&self, other: &AffineSubspace) -> Result<AffineSubspace> {
        let n = self.point.len();
        let gap = Subspace::span(n, vec![minus(&other.point, &self.point)])?;
        let dirs = sum(&sum(&self.directions, &other.directions)?, &gap)?;
        AffineSubspace::new(self.point.clone(), dirs)
    }
}

impl ParallelModel {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            bail!(InvalidInput, "dimension must be positive");
        }
        Ok(ParallelModel { n })
    }

    pub fn algebra_dim(&self) -> usize {
        self.n + 1
    }

    /// [(a, x), (b, y)] = (0, a·y − b·x).
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![zero()];
        out.extend((1..=self.n).map(|i| &x[0] * &y[i] - &y[0] * &x[i]));
        out
    }

    /// {(ℓ, t) : ℓp + t ∈ span(directions)}, spanned by (1, −p) and (0, v).
    pub fn affine_stabilizer_algebra(&self, a: &AffineSubspace) -> Result<Subspace> {
        check_point(&a.point, self.n)?;
        let mut dilation = vec![one()];
        dilation.extend(a.point.iter().map(|x| -x.clone()));
        let mut rows = vec![dilation];
        for v in a.directions.basis().to_rows() {
            let mut r = vec![zero()];
            r.extend(v);
            rows.push(r);
        }
        Subspace::span(self.algebra_dim(), rows)
    }
}

/// A graph with an affine subspace of uniform dimension at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    graph: Hypergraph,
    ambient: usize,
    subspaces: Vec<AffineSubspace>,
}

impl Arrangement {
    pub fn new(graph: Hypergraph, ambient: usize, subspaces: Vec<AffineSubspace>) -> Result<Self> {
        if subspaces.len() != graph.vertex_count() {
            bail!(InvalidInput, "{} affine subspaces for {} vertices", subspaces.len(), graph.vertex_count());
        }
        for a in &subspaces {
            check_point(&a.point, ambient)?;
        }
        if subspaces.windows(2).any(|w| w[0].dim() != w[1].dim()) {
            bail!(InvalidInput, "arrangement subspaces must share one dimension");
        }
        Ok(Arrangement { graph, ambient, subspaces })
    }

    /// Random s-dimensional affine subspaces with integer data.
    pub fn random(g: &Hypergraph, n: usize, s: usize, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        let subspaces = (0..g.vertex_count())
            .map(|_| {
                let point = random_vector(&mut rng, n);
                Ok(AffineSubspace::new(point, crate::subspace::sample_subspace_with(s, n, &mut rng)?)?)
            })
            .collect::<Result<_>>()?;
        Arrangement::new(g.clone(), n, subspaces)
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn subspaces(&self) -> &[AffineSubspace] {
        &self.subspaces
    }
}

/// Affine stabilizers at every vertex, inside the (n + 1)-dimensional algebra.
pub fn parallel_spec(model: &ParallelModel, arr: &Arrangement) -> Result<MotionSheafSpec> {
    if arr.ambient != model.n {
        bail!(DimensionMismatch, "arrangement in ℚ^{} for a model of ℚ^{}", arr.ambient, model.n);
    }
    let subspaces = arr.subspaces.iter().map(|a| model.affine_stabilizer_algebra(a)).collect::<Result<_>>()?;
    MotionSheafSpec::new(arr.graph.clone(), model.algebra_dim(), subspaces)
}

/// True when `s` is closed under `bracket`, tested on pairs of basis rows.
pub fn is_subalgebra(s: &Subspace, bracket: impl Fn(&[Rational], &[Rational]) -> Vec<Rational>) -> bool {
    let rows = s.basis().to_rows();
    rows.iter().all(|x| rows.iter().all(|y| s.contains(&bracket(x, y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::motion::analyze;

    fn pt(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn plane_stabilizer_matches_closed_form() {
        let m = EuclideanModel::new(2).unwrap();
        let s = m.point_stabilizer_algebra(&pt(&[3, -7])).unwrap();
        assert_eq!(s, Subspace::span(3, vec![pt(&[1, -7, -3])]).unwrap());
        assert_eq!(m.edge_stabilizer_algebra(&pt(&[0, 0]), &pt(&[1, 2])).unwrap().dim(), 0);
    }

    #[test]
    fn space_stabilizers() {
        let m = EuclideanModel::new(3).unwrap();
        let origin = m.point_stabilizer_algebra(&pt(&[0, 0, 0])).unwrap();
        assert_eq!(origin.dim(), 3);
        assert!((0..3).all(|i| origin.basis().row(i)[3..].iter().all(|x| *x == zero())));
        let q = [rat(2), rat(-1), rat(5)];
        let s = m.point_stabilizer_algebra(&q).unwrap();
        // (ω, −ω × q) with ω = e₂.
        let omega = [rat(0), rat(1), rat(0)];
        let mut row = EuclideanModel::axial_to_coords(&omega);
        row.extend(cross(&q, &omega));
        assert!(s.contains(&row));
        let axis = m.edge_stabilizer_algebra(&pt(&[0, 0, 0]), &pt(&[1, 0, 0])).unwrap();
        let mut e1 = EuclideanModel::axial_to_coords(&[rat(1), rat(0), rat(0)]);
        e1.extend(pt(&[0, 0, 0]));
        assert_eq!(axis, Subspace::span(6, vec![e1]).unwrap());
    }

    #[test]
    fn collinearity() {
        let m2 = EuclideanModel::new(2).unwrap();
        assert!(m2.collinear(&pt(&[0, 0]), &pt(&[1, 1]), &pt(&[2, 2])).unwrap());
        let m3 = EuclideanModel::new(3).unwrap();
        assert!(!m3.collinear(&pt(&[0, 0, 0]), &pt(&[1, 0, 0]), &pt(&[0, 1, 0])).unwrap());
        assert!(m3.collinear(&pt(&[0, 0, 0]), &pt(&[0, 0, 0]), &pt(&[0, 1, 0])).is_err());
    }

    #[test]
    fn translation_conjugates_stabilizers() {
        let m = EuclideanModel::new(2).unwrap();
        let ad = m.adjoint_matrix(&Matrix::identity(2), &pt(&[4, -9])).unwrap();
        let moved = transform_subspace(&ad, &m.point_stabilizer_algebra(&pt(&[0, 0])).unwrap()).unwrap();
        assert_eq!(moved, m.point_stabilizer_algebra(&pt(&[4, -9])).unwrap());
    }

    #[test]
    fn cayley_gives_rotations() {
        let m = EuclideanModel::new(3).unwrap();
        let r = cayley_rotation(&m.skew_from_coords(&pt(&[1, 2, -3]))).unwrap();
        assert_eq!(r.mul(&r.transpose()).unwrap(), Matrix::identity(3));
        // A rotation about the origin followed by a shift moves stab(0) to stab(shift).
        let ad = m.adjoint_matrix(&r, &pt(&[1, 1, 2])).unwrap();
        let moved = transform_subspace(&ad, &m.base_subalgebra().unwrap()).unwrap();
        assert_eq!(moved, m.point_stabilizer_algebra(&pt(&[1, 1, 2])).unwrap());
    }

    #[test]
    fn bar_joint_triangle_and_square() {
        let m = EuclideanModel::new(2).unwrap();
        let tri = Framework::from_graph(&Multigraph::complete(3), 2, vec![pt(&[0, 0]), pt(&[5, 1]), pt(&[2, 7])]).unwrap();
        let v = analyze(&bar_joint_spec(&m, &tri).unwrap()).unwrap();
        assert_eq!((v.h0, v.h1), (3, 0));
        assert!(v.minimally_rigid);
        let sq = Framework::from_graph(&Multigraph::cycle(4), 2, vec![pt(&[0, 0]), pt(&[5, 1]), pt(&[6, 7]), pt(&[-1, 4])]).unwrap();
        assert_eq!(analyze(&bar_joint_spec(&m, &sq).unwrap()).unwrap().h0, 4);
        let clash = Framework::from_graph(&Multigraph::complete(3), 2, vec![pt(&[0, 0]), pt(&[0, 0]), pt(&[2, 7])]);
        assert!(clash.is_err());
    }

    #[test]
    fn affine_stabilizers_and_lattice() {
        let m = ParallelModel::new(3).unwrap();
        let p = AffineSubspace::point(pt(&[1, 2, 3]));
        let lp = m.affine_stabilizer_algebra(&p).unwrap();
        assert_eq!(lp, Subspace::span(4, vec![pt(&[1, -1, -2, -3])]).unwrap());
        let full = AffineSubspace::new(pt(&[0, 0, 0]), Subspace::full(3)).unwrap();
        assert_eq!(m.affine_stabilizer_algebra(&full).unwrap().dim(), 4);
        let q = AffineSubspace::point(pt(&[4, 0, -1]));
        let lq = m.affine_stabilizer_algebra(&q).unwrap();
        let line = m.affine_stabilizer_algebra(&p.join(&q).unwrap()).unwrap();
        assert_eq!(line.dim(), 2);
        assert_eq!(sum(&lp, &lq).unwrap(), line);
        assert!(is_subalgebra(&line, |x, y| m.bracket(x, y)));
    }
}
