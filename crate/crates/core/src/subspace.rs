//! Linear subspaces of ℚⁿ in canonical (reduced row echelon) form, with the
//! operations the sheaf constructions need: intersection, sum, annihilators,
//! orthogonal projections and random sampling.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{bail, Result};
use crate::linalg::{dot, is_zero_vec, Matrix, Rational};
use crate::rng::{random_vector, rng_from_seed};

/// A subspace of ℚⁿ. The basis is always the reduced row echelon form of any
/// spanning set, so two subspaces are equal iff their fields are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given rows (any spanning set, dependent rows allowed).
    pub fn span(ambient: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(Self::from_matrix(&Matrix::from_rows(ambient, rows)?))
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let (basis, pivots) = m.rref();
        Subspace {
            ambient: m.ncols(),
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, b) in r.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x = &*x - &f * b;
                }
            }
        }
        is_zero_vec(&r)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Rows of the echelon annihilator basis: an (n − s) × n matrix whose kernel is
    /// this subspace. Used as the coordinate map ℚⁿ → ℚⁿ/S.
    pub fn quotient_matrix(&self) -> Matrix {
        self.basis.nullspace()
    }
}

/// A linear functional on ℚⁿ, stored as its coefficient row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn apply(&self, v: &[Rational]) -> Rational {
        dot(&self.coeffs, v)
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    pub fn annihilates(&self, s: &Subspace) -> bool {
        (0..s.dim()).all(|i| self.apply(s.basis().row(i)).is_zero())
    }

    pub fn kernel(&self) -> Subspace {
        common_kernel(self.ambient_dim(), std::slice::from_ref(self))
    }
}

pub(crate) fn forms_matrix(ambient: usize, forms: &[LinearForm]) -> Matrix {
    Matrix::from_rows(ambient, forms.iter().map(|f| f.coeffs.clone()).collect()).expect("forms share the ambient dimension")
}

/// True when the forms are linearly independent.
pub fn forms_independent(ambient: usize, forms: &[LinearForm]) -> bool {
    forms_matrix(ambient, forms).rank() == forms.len()
}

/// Common kernel of a list of forms (all of ℚⁿ for an empty list).
pub fn common_kernel(ambient: usize, forms: &[LinearForm]) -> Subspace {
    Subspace::from_matrix(&forms_matrix(ambient, forms).nullspace())
}

fn check_ambient(n: usize, s: &Subspace) -> Result<()> {
    if s.ambient != n {
        bail!(DimensionMismatch, "subspace of ℚ^{} where ℚ^{n} was expected", s.ambient);
    }
    Ok(())
}

/// ∩ of the subspaces, as the kernel of their stacked annihilators. The empty
/// intersection is all of ℚⁿ.
pub fn intersect(ambient: usize, subspaces: &[&Subspace]) -> Result<Subspace> {
    let mut rows = Vec::new();
    for s in subspaces {
        check_ambient(ambient, s)?;
        rows.extend(s.quotient_matrix().to_rows());
    }
    Ok(Subspace::from_matrix(&Matrix::from_rows(ambient, rows)?.nullspace()))
}

pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_ambient(a.ambient, b)?;
    Ok(Subspace::from_matrix(&a.basis.vstack(&b.basis)?))
}

pub fn sum_all(ambient: usize, subspaces: &[&Subspace]) -> Result<Subspace> {
    let mut acc = Subspace::zero(ambient);
    for s in subspaces {
        acc = sum(&acc, s)?;
    }
    Ok(acc)
}

pub fn annihilator_basis(s: &Subspace) -> Vec<LinearForm> {
    s.quotient_matrix().to_rows().into_iter().map(LinearForm::new).collect()
}

/// Orthogonal projection onto a subspace, for the standard inner product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionOperator {
    matrix: Matrix,
}

impl ProjectionOperator {
    /// Checks P = Pᵗ and P² = P exactly.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            bail!(InvalidInput, "projection must be square, got {}x{}", matrix.nrows(), matrix.ncols());
        }
        if matrix.transpose() != matrix {
            bail!(InvalidInput, "projection is not symmetric");
        }
        if matrix.mul(&matrix)? != matrix {
            bail!(InvalidInput, "projection is not idempotent");
        }
        Ok(ProjectionOperator { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// I − P: the projection onto the orthogonal complement.
    pub fn complement(&self) -> ProjectionOperator {
        let n = self.matrix.nrows();
        ProjectionOperator {
            matrix: Matrix::identity(n).sub(&self.matrix).expect("square"),
        }
    }
}

/// P = Bᵗ (B Bᵗ)⁻¹ B for the canonical basis B.
pub fn projection_of(s: &Subspace) -> ProjectionOperator {
    let n = s.ambient;
    if s.dim() == 0 {
        return ProjectionOperator { matrix: Matrix::zeros(n, n) };
    }
    let b = s.basis();
    let bt = b.transpose();
    let gram_inv = b.mul(&bt).expect("shapes agree").inverse().expect("Gram matrix of a basis is invertible");
    let matrix = bt.mul(&gram_inv).and_then(|m| m.mul(b)).expect("shapes agree");
    ProjectionOperator { matrix }
}

pub fn subspace_of(p: &ProjectionOperator) -> Result<Subspace> {
    let s = Subspace::from_matrix(&p.matrix);
    if p.matrix.trace() != Rational::from_integer(s.dim().into()) {
        bail!(Internal, "trace of projection differs from its rank");
    }
    Ok(s)
}

/// Random s-dimensional subspace with integer basis entries in the sampling box,
/// resampled until the basis has full rank.
pub fn sample_subspace_with<R: Rng + ?Sized>(s: usize, n: usize, rng: &mut R) -> Result<Subspace> {
    if s > n {
        bail!(Precondition, "cannot sample a {s}-dimensional subspace of ℚ^{n}");
    }
    loop {
        let rows: Vec<Vec<Rational>> = (0..s).map(|_| random_vector(rng, n)).collect();
        let sub = Subspace::span(n, rows)?;
        if sub.dim() == s {
            return Ok(sub);
        }
    }
}

pub fn sample_subspace(s: usize, n: usize, seed: u64) -> Result<Subspace> {
    sample_subspace_with(s, n, &mut rng_from_seed(seed))
}

/// Random s-dimensional subspace of `container`, via random integer combinations
/// of its basis.
pub fn sample_subspace_within<R: Rng + ?Sized>(container: &Subspace, s: usize, rng: &mut R) -> Result<Subspace> {
    let k = container.dim();
    if s > k {
        bail!(Precondition, "cannot sample dimension {s} inside a {k}-dimensional subspace");
    }
    loop {
        let coeffs = Matrix::from_rows(k, (0..s).map(|_| random_vector(rng, k)).collect())?;
        let sub = Subspace::from_matrix(&coeffs.mul(container.basis())?);
        if sub.dim() == s {
            return Ok(sub);
        }
    }
}

/// Random form vanishing on `s`: a random combination of its annihilator basis.
pub fn sample_form_annihilating<R: Rng + ?Sized>(s: &Subspace, rng: &mut R) -> LinearForm {
    let q = s.quotient_matrix();
    let c = random_vector(rng, q.nrows());
    let mut coeffs = vec![Rational::zero(); s.ambient];
    for (i, ci) in c.iter().enumerate() {
        for (x, qv) in coeffs.iter_mut().zip(q.row(i)) {
            *x = &*x + ci * qv;
        }
    }
    LinearForm::new(coeffs)
}

/// Standard basis vector eᵢ of ℚⁿ.
pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn span(n: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::span(n, rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let e1 = span(3, &[&[1, 0, 0]]);
        let e2 = span(3, &[&[0, 1, 0]]);
        assert_eq!(intersect(3, &[&e1, &e1]).unwrap(), e1);
        assert_eq!(intersect(3, &[&e1, &e2]).unwrap().dim(), 0);
        assert_eq!(intersect(3, &[]).unwrap(), Subspace::full(3));
        assert!(intersect(3, &[&span(2, &[&[1, 0]])]).is_err());
    }

    #[test]
    fn sum_examples() {
        let s = span(3, &[&[1, 2, 3]]);
        assert_eq!(sum(&s, &Subspace::zero(3)).unwrap(), s);
        let plane = sum(&span(3, &[&[1, 0, 0]]), &span(3, &[&[0, 1, 0]])).unwrap();
        assert_eq!(plane, span(3, &[&[1, 0, 0], &[0, 1, 0]]));
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(annihilator_basis(&Subspace::zero(2)).len(), 2);
        let forms = annihilator_basis(&span(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(forms.len(), 1);
        assert!(forms[0].coeffs[0].is_zero() && forms[0].coeffs[1].is_zero() && !forms[0].coeffs[2].is_zero());
    }

    #[test]
    fn projection_examples() {
        let p = projection_of(&span(2, &[&[1, 0]]));
        assert_eq!(p.matrix(), &Matrix::from_i64(2, &[vec![1, 0], vec![0, 0]]).unwrap());
        assert_eq!(projection_of(&Subspace::full(3)).matrix(), &Matrix::identity(3));
        let half = frac(1, 2);
        let expected = Matrix::from_rows(2, vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]).unwrap();
        assert_eq!(projection_of(&span(2, &[&[1, 1]])).matrix(), &expected);
    }

    #[test]
    fn non_projection_rejected() {
        let m = Matrix::from_i64(2, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(ProjectionOperator::new(m).is_err());
        let m = Matrix::from_i64(2, &[vec![2, 0], vec![0, 0]]).unwrap();
        assert!(ProjectionOperator::new(m).is_err());
    }

    #[test]
    fn sampling_edge_cases_and_determinism() {
        assert_eq!(sample_subspace(0, 4, 1).unwrap(), Subspace::zero(4));
        assert_eq!(sample_subspace(4, 4, 1).unwrap(), Subspace::full(4));
        assert_eq!(sample_subspace(2, 5, 3).unwrap(), sample_subspace(2, 5, 3).unwrap());
        assert!(sample_subspace(3, 2, 0).is_err());
    }

    #[test]
    fn form_kernel_and_sampling_within() {
        let mut rng = rng_from_seed(5);
        let big = sample_subspace(3, 5, 11).unwrap();
        let inner = sample_subspace_within(&big, 2, &mut rng).unwrap();
        assert!(inner.is_subspace_of(&big));
        let f = sample_form_annihilating(&inner, &mut rng);
        assert!(f.annihilates(&inner));
        assert_eq!(f.kernel().dim(), 4);
        assert!(inner.is_subspace_of(&f.kernel()));
    }
}
