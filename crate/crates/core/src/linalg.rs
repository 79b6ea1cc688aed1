//! Exact vectors, matrices, and linear solvers.
//!
//! Square systems are solved by fraction-free Gaussian elimination in the
//! style of Bareiss: rows are cleared to integers, eliminated with exact
//! integer division against the previous pivot, and back-substituted in
//! rationals. A singular matrix is a valid outcome reported as `None`.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{EncodingLength, Rational};

/// Dense vector of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rational::zero(); dim])
    }

    /// Standard basis vector `e_i` (0-based) in `dim`-space.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&n| Rational::from_int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot product dimension mismatch");
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            acc += &(a * b);
        }
        acc
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * s).collect())
    }

    /// Midpoint of two points; the workhorse of vertex cutting.
    pub fn midpoint(&self, other: &RatVector) -> RatVector {
        self.add(other).scale(&Rational::new(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// Squared Euclidean norm, exact.
    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn push(&mut self, value: Rational) {
        self.0.push(value);
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl EncodingLength for RatVector {
    fn encoding_length(&self) -> usize {
        self.0.iter().map(EncodingLength::encoding_length).sum()
    }
}

/// Dense row-major matrix of rationals; rows all share one dimension.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatMatrix {
    rows: Vec<RatVector>,
}

impl RatMatrix {
    pub fn new(rows: Vec<RatVector>) -> Self {
        if let Some(first) = rows.first() {
            let dim = first.dim();
            assert!(rows.iter().all(|r| r.dim() == dim), "ragged rows in matrix");
        }
        RatMatrix { rows }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        RatMatrix::new(rows.iter().map(|r| RatVector::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix::new((0..n).map(|i| RatVector::unit(n, i)).collect())
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.rows.first().map_or(0, RatVector::dim)
    }

    pub fn row(&self, i: usize) -> &RatVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[RatVector] {
        &self.rows
    }

    pub fn is_square(&self) -> bool {
        self.row_count() == self.col_count()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        RatVector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// Sub-matrix formed by the given row indices, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        RatMatrix::new(idx.iter().map(|&i| self.rows[i].clone()).collect())
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

impl EncodingLength for RatMatrix {
    fn encoding_length(&self) -> usize {
        self.rows.iter().map(EncodingLength::encoding_length).sum()
    }
}

/// Clears a rational row to integers by multiplying with the lcm of the
/// denominators.
fn clear_row(row: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        lcm = lcm.lcm(x.denom());
    }
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Solves `M x = rhs` for square `M` exactly; `None` when `M` is singular.
pub fn solve_square(m: &RatMatrix, rhs: &RatVector) -> Option<RatVector> {
    assert!(m.is_square(), "solve_square requires a square matrix");
    assert_eq!(m.row_count(), rhs.dim(), "rhs dimension mismatch");
    let n = m.row_count();
    if n == 0 {
        return Some(RatVector::zeros(0));
    }

    // Augmented integer matrix [M | rhs], one lcm clearing per row.
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = m.row(i).entries().to_vec();
            row.push(rhs[i].clone());
            clear_row(&row)
        })
        .collect();

    // Fraction-free (Bareiss) forward elimination.
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, pivot_row);
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_slice = &head[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in (k + 1)..=n {
                let t = &row[j] * &pivot_slice[k] - &factor * &pivot_slice[j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }

    // Back substitution in rationals.
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_int(a[i][n].clone());
        for j in (i + 1)..n {
            acc -= &(&Rational::from_int(a[i][j].clone()) * &x[j]);
        }
        x[i] = acc / Rational::from_int(a[i][i].clone());
    }
    Some(RatVector::new(x))
}

/// Rank of a matrix by fraction-free elimination.
pub fn rank(m: &RatMatrix) -> usize {
    let rows = m.row_count();
    let cols = m.col_count();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| clear_row(m.row(i).entries())).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..cols {
                let t = &row[j] * &pivot[c] - &factor * &pivot[j];
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero());
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Affine rank of a point set: rank of differences against the first point.
/// A set spanning a hyperplane in `d`-space has affine rank `d - 1`.
pub fn affine_rank(points: &[RatVector]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => {
            if rest.is_empty() {
                return 0;
            }
            let diffs = RatMatrix::new(rest.iter().map(|p| p.sub(first)).collect());
            rank(&diffs)
        }
    }
}

/// Fits the unique hyperplane `w . x = alpha` through `d` affinely
/// independent points in `d`-space. The output is canonical: the first
/// nonzero entry of `w` is exactly one.
pub fn hyperplane_through_points(points: &[RatVector]) -> Result<(RatVector, Rational)> {
    let d = points
        .first()
        .map(RatVector::dim)
        .ok_or(Error::AffinelyDependent)?;
    if points.len() != d || points.iter().any(|p| p.dim() != d) {
        return Err(Error::InvalidPolytope(format!(
            "hyperplane fit needs exactly {d} points of dimension {d}"
        )));
    }

    // w is orthogonal to every difference p_i - p_0; require a 1-dim kernel.
    let first = &points[0];
    let diff_rows: Vec<RatVector> = points[1..].iter().map(|p| p.sub(first)).collect();
    let kernel = kernel_vector(&diff_rows, d).ok_or(Error::AffinelyDependent)?;

    let lead = kernel
        .iter()
        .find(|x| !x.is_zero())
        .expect("kernel vector is nonzero")
        .clone();
    let w = kernel.scale(&lead.recip());
    let alpha = w.dot(first);
    Ok((w, alpha))
}

/// One nonzero kernel vector of the row space, provided the kernel has
/// dimension exactly one; `None` otherwise.
fn kernel_vector(rows: &[RatVector], dim: usize) -> Option<RatVector> {
    let m = RatMatrix::new(rows.to_vec());
    if !rows.is_empty() && rank(&m) != dim - 1 {
        return None;
    }
    if rows.is_empty() {
        // Zero constraints: kernel is the whole space; unique only in dim 1.
        return if dim == 1 {
            Some(RatVector::new(vec![Rational::one()]))
        } else {
            None
        };
    }

    // Rational RREF to read off the single free column.
    let mut a: Vec<Vec<Rational>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let nrows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    let t = p * &f;
                    *x = &*x - &t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let free_col = (0..dim).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![Rational::zero(); dim];
    v[free_col] = Rational::one();
    for (row_i, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -a[row_i][free_col].clone();
    }
    Some(RatVector::new(v))
}

/// Clears a rational functional `(w, alpha)` to a primitive integer row.
/// The sign is preserved.
pub fn primitive_integer_row(w: &RatVector, alpha: &Rational) -> (RatVector, Rational) {
    let mut all: Vec<Rational> = w.entries().to_vec();
    all.push(alpha.clone());
    let ints = clear_row(&all);
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        g = BigInt::one();
    }
    let scaled: Vec<Rational> = ints.iter().map(|x| Rational::from_int(x / &g)).collect();
    let alpha_out = scaled.last().unwrap().clone();
    (
        RatVector::new(scaled[..scaled.len() - 1].to_vec()),
        alpha_out,
    )
}
