use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, rat, to_f64, Rational, RationalLiteral};

use super::LinalgError;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of exact Gauss-Jordan elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: RatMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn scalar(n: usize, lambda: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = lambda.clone();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                found: data.len(),
            });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    /// Builds a matrix from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Block-diagonal sum of square or rectangular blocks.
    pub fn block_diag(blocks: &[RatMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &RatMatrix, f: impl Fn(&Rational, &Rational) -> Rational) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> RatMatrix {
        self.scale(&rat(-1))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &RatMatrix) -> RatMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, k: u32) -> RatMatrix {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square());
        (0..self.rows).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Exact determinant by fraction-valued elimination.
    pub fn det(&self) -> Rational {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pivot;
                for c in col..n {
                    let v = &f * &m[(col, c)];
                    m[(r, c)] -= v;
                }
            }
        }
        det
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && !self.det().is_zero()
    }

    /// True when `self` equals `lambda * I` for some rational `lambda` (possibly zero).
    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let d = if n > 0 { self[(0, 0)].clone() } else { Rational::zero() };
        (0..n).all(|i| (0..n).all(|j| if i == j { self[(i, j)] == d } else { self[(i, j)].is_zero() }))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Exact reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, row);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let v = &f * &m[(row, c)];
                    m[(r, c)] -= v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref {
            reduced: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column in ascending order.
    ///
    /// The vector for free column `f` has a 1 in position `f` and a 0 in every
    /// other free position, so coordinates with respect to this basis can be read
    /// off at the free columns.
    pub fn nullspace_basis(&self) -> Vec<Vec<Rational>> {
        self.nullspace_with_free_columns().0
    }

    pub fn nullspace_with_free_columns(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(r, f)].clone();
                }
                v
            })
            .collect();
        (basis, free)
    }

    /// Solves `self * x = b`; returns one solution (free variables zero) or `None`.
    pub fn solve_linear(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let r = aug.rref();
        if r.pivots.iter().take(n).copied().ne(0..n) || r.rank < n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r.reduced[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Column-stacking vectorization: entry `(i, j)` goes to position `i + j * rows`.
    pub fn vectorize(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)].clone());
            }
        }
        v
    }

    /// Inverse of [`RatMatrix::vectorize`].
    pub fn unvectorize(v: &[Rational], rows: usize, cols: usize) -> RatMatrix {
        assert_eq!(v.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = v[i + j * rows].clone();
            }
        }
        m
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(&self[(i, j)]))
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&format_rational(&self[(i, j)]))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<RationalLiteral>,
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .data
                .iter()
                .map(|r| RationalLiteral::Text(format_rational(r)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = MatrixJson::deserialize(d)?;
        let data = raw
            .entries
            .into_iter()
            .map(|e| e.into_rational().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        RatMatrix::from_entries(raw.rows, raw.cols, data).map_err(D::Error::custom)
    }
}

/// Expresses vectors in the span of a fixed list of rows.
///
/// Elimination is done once; each query reduces the target against the
/// echelon rows while tracking the combination of original rows used.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    len: usize,
    count: usize,
    // (pivot column, echelon row, combination of original rows)
    echelon: Vec<(usize, Vec<Rational>, Vec<Rational>)>,
}

impl SpanSolver {
    pub fn new(rows: &[Vec<Rational>]) -> Self {
        let len = rows.first().map_or(0, Vec::len);
        let count = rows.len();
        let mut echelon: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
        for (idx, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), len, "ragged span rows");
            let mut v = row.clone();
            let mut comb = vec![Rational::zero(); count];
            comb[idx] = Rational::one();
            Self::reduce(&echelon, &mut v, &mut comb);
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                let inv = v[p].recip();
                v.iter_mut().for_each(|x| *x *= &inv);
                comb.iter_mut().for_each(|x| *x *= &inv);
                echelon.push((p, v, comb));
            }
        }
        SpanSolver { len, count, echelon }
    }

    fn reduce(echelon: &[(usize, Vec<Rational>, Vec<Rational>)], v: &mut [Rational], comb: &mut [Rational]) {
        for (p, row, rcomb) in echelon {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
            for (x, r) in comb.iter_mut().zip(rcomb) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.count
    }

    /// Coefficients `c` with `sum c_i * rows[i] == target`, or `None` when the
    /// target is outside the span.
    pub fn express(&self, target: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(target.len(), self.len);
        let mut v = target.to_vec();
        let mut comb = vec![Rational::zero(); self.count];
        Self::reduce(&self.echelon, &mut v, &mut comb);
        if v.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(comb.into_iter().map(|c| -c).collect())
    }

    pub fn contains(&self, target: &[Rational]) -> bool {
        self.express(target).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn rref_identity_is_fixed() {
        let r = RatMatrix::identity(2).rref();
        assert_eq!(r.reduced, RatMatrix::identity(2));
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_rank_one() {
        let r = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.reduced, RatMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_zero() {
        let r = RatMatrix::zeros(3, 3).rref();
        assert_eq!(r.reduced, RatMatrix::zeros(3, 3));
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn nullspace_examples() {
        assert!(RatMatrix::identity(3).nullspace_basis().is_empty());
        assert_eq!(RatMatrix::zeros(2, 3).nullspace_basis().len(), 3);
        let m = RatMatrix::from_i64(&[&[1, 1, 0]]);
        let ns = m.nullspace_basis();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = RatMatrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det(), rat(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        assert!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(RatMatrix::diagonal(&[ratio(1, 2), rat(3)]).det(), ratio(3, 2));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = RatMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(m.solve_linear(&[rat(3), rat(1)]).unwrap(), vec![rat(2), rat(1)]);
        let s = RatMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(s.solve_linear(&[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.vectorize(), vec![rat(1), rat(3), rat(2), rat(4)]);
        assert_eq!(RatMatrix::unvectorize(&m.vectorize(), 2, 2), m);
    }

    #[test]
    fn span_solver_expresses_combinations() {
        let rows = vec![
            vec![rat(1), rat(0), rat(1)],
            vec![rat(0), rat(1), rat(1)],
            vec![rat(1), rat(1), rat(2)],
        ];
        let s = SpanSolver::new(&rows);
        assert_eq!(s.rank(), 2);
        assert!(!s.is_independent());
        let c = s.express(&[rat(2), rat(3), rat(5)]).unwrap();
        let recon: Vec<Rational> = (0..3)
            .map(|k| (0..3).fold(Rational::zero(), |acc, i| acc + &c[i] * &rows[i][k]))
            .collect();
        assert_eq!(recon, vec![rat(2), rat(3), rat(5)]);
        assert!(s.express(&[rat(1), rat(0), rat(0)]).is_none());
    }

    #[test]
    fn json_round_trip_uses_text_rationals() {
        let m = RatMatrix::from_rows(vec![vec![ratio(1, 2), rat(-3)]]);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"rows":1,"cols":2,"entries":["1/2","-3"]}"#);
        let back: RatMatrix = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        let bad: Result<RatMatrix, _> = serde_json::from_str(r#"{"rows":2,"cols":2,"entries":["1"]}"#);
        assert!(bad.is_err());
    }
}
