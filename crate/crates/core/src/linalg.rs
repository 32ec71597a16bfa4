//! Dense matrices over ℚ.
//!
//! Rank goes through an integer, fraction-free elimination that skips rows
//! already zero in the pivot column, which keeps the sparse coboundaries cheap.
//! Echelon forms and kernels use plain Gauss–Jordan over `BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{bail, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Row-major rational matrix. Zero rows or zero columns are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds from rows; `cols` is needed so that an empty row list keeps its width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                bail!(DimensionMismatch, "row {i} has length {}, expected {cols}", r.len());
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            bail!(
                DimensionMismatch,
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            );
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            bail!(DimensionMismatch, "vector of length {} against {} columns", v.len(), self.cols);
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            bail!(
                DimensionMismatch,
                "cannot subtract {}x{} and {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            );
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scaled(&self, k: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            bail!(DimensionMismatch, "cannot stack widths {} and {}", self.cols, other.cols);
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn rank(&self) -> usize {
        let rows = (0..self.rows).map(|r| integer_row(self.row(r))).collect();
        integer_rank(rows, self.cols)
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = gauss_jordan(&mut rows, self.cols);
        rows.truncate(pivots.len());
        (Matrix::from_rows(self.cols, rows).expect("rows keep their width"), pivots)
    }

    /// Basis of the right kernel {x : M x = 0}, one vector per row, with a 1 in
    /// each free column and zeros in the other free columns.
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        Matrix::from_rows(self.cols, basis).expect("kernel vectors have full width")
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let pivots = gauss_jordan(&mut rows, n);
        if pivots.len() < n {
            return None;
        }
        let inv = rows.into_iter().take(n).map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(n, inv).expect("square"))
    }

    /// Finds `A` with `A · basis = target`, or `None` when some row of `target`
    /// is outside the row space of `basis`.
    pub fn solve_left(target: &Matrix, basis: &Matrix) -> Result<Option<Matrix>> {
        if target.cols != basis.cols {
            bail!(DimensionMismatch, "target width {} vs basis width {}", target.cols, basis.cols);
        }
        let k = basis.rows;
        // Columns of the augmented system: basis rows (unknowns), then one per target row.
        let mut rows: Vec<Vec<Rational>> = (0..basis.cols)
            .map(|c| {
                let mut row: Vec<Rational> = (0..k).map(|r| basis.get(r, c).clone()).collect();
                row.extend((0..target.rows).map(|r| target.get(r, c).clone()));
                row
            })
            .collect();
        let pivots = gauss_jordan(&mut rows, k);
        for row in rows.iter().skip(pivots.len()) {
            if row[k..].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
        }
        let mut a = Matrix::zeros(target.rows, k);
        for (i, &p) in pivots.iter().enumerate() {
            for t in 0..target.rows {
                a.set(t, p, rows[i][k + t].clone());
            }
        }
        Ok(Some(a))
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Gauss–Jordan on the leading `pivot_cols` columns; trailing columns ride along.
/// Nonzero rows end up first. Returns pivot columns.
fn gauss_jordan(rows: &mut [Vec<Rational>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..pivot_cols {
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][c].recip();
        for x in rows[next].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        pivots.push(c);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    pivots
}

/// Scales a rational row by the lcm of its denominators.
pub(crate) fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, x| if x.is_zero() { g } else { g.gcd(x) })
}

/// Rank of an integer matrix by fraction-free elimination. Each pivot column
/// takes the sparsest, smallest candidate row; rows untouched by a column are
/// never rescaled, and updated rows are divided by their content.
pub(crate) fn integer_rank(rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut active: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut rank = 0;
    for c in 0..cols {
        if active.is_empty() {
            break;
        }
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, r) in active.iter().enumerate() {
            if r[c].is_zero() {
                continue;
            }
            let nnz = r[c..].iter().filter(|x| !x.is_zero()).count();
            let bits = r[c].bits();
            if best.map_or(true, |(_, n, b)| (nnz, bits) < (n, b)) {
                best = Some((i, nnz, bits));
            }
        }
        let Some((pi, _, _)) = best else { continue };
        let pivot = active.swap_remove(pi);
        rank += 1;
        let p = &pivot[c];
        let mut kept = Vec::with_capacity(active.len());
        for mut r in active.drain(..) {
            if !r[c].is_zero() {
                let g = p.gcd(&r[c]);
                let mp = p / &g;
                let mr = &r[c] / &g;
                for j in c..cols {
                    if pivot[j].is_zero() {
                        if !r[j].is_zero() {
                            r[j] = &r[j] * &mp;
                        }
                    } else {
                        r[j] = &r[j] * &mp - &mr * &pivot[j];
                    }
                }
                let g = content(&r[c..]);
                if g.is_zero() {
                    continue;
                }
                if !g.is_one() {
                    for x in r[c..].iter_mut() {
                        if !x.is_zero() {
                            *x = &*x / &g;
                        }
                    }
                }
            }
            kept.push(r);
        }
        active = kept;
    }
    rank
}

pub(crate) fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
