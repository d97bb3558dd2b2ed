use num_traits::Zero;

use crate::rational::Rational;

use super::{LinalgError, RatMatrix};

/// Basis of the kernel of a linear operator on `n x n` matrices.
///
/// For commutant pairs each basis matrix `R` carries the scalar `H` of the
/// pair; for the anticommutant `h` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorNullspace {
    pub n: usize,
    pub basis: Vec<RatMatrix>,
    pub h: Option<Vec<Rational>>,
    /// Free columns of the vectorized system; coordinates of a kernel element
    /// with respect to `basis` are its entries at these positions.
    pub free_columns: Vec<usize>,
}

impl OperatorNullspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `(m, h)` in the basis, or `None` if it is not in the span.
    pub fn coordinates(&self, m: &RatMatrix, h: &Rational) -> Option<Vec<Rational>> {
        let mut v = m.vectorize();
        if self.h.is_some() {
            v.push(h.clone());
        } else if !h.is_zero() {
            return None;
        }
        let coords: Vec<Rational> = self.free_columns.iter().map(|&f| v[f].clone()).collect();
        // Reconstruct and compare so out-of-span inputs are rejected.
        let mut recon = vec![Rational::zero(); v.len()];
        for (c, (b, hb)) in coords.iter().zip(self.pairs()) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in recon.iter_mut().zip(b.vectorize()) {
                *r += c * x;
            }
            if self.h.is_some() {
                *recon.last_mut().unwrap() += c * hb;
            }
        }
        (recon == v).then_some(coords)
    }

    /// Basis elements paired with their `H` (zero for the anticommutant).
    pub fn pairs(&self) -> impl Iterator<Item = (&RatMatrix, Rational)> {
        self.basis.iter().enumerate().map(move |(k, b)| {
            let h = self.h.as_ref().map_or_else(Rational::zero, |hs| hs[k].clone());
            (b, h)
        })
    }
}

fn check_square(a: &RatMatrix) -> Result<usize, LinalgError> {
    if a.is_square() {
        Ok(a.rows())
    } else {
        Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// All `P` with `A P + P A = 0`.
pub fn anticommutant(a: &RatMatrix) -> Result<OperatorNullspace, LinalgError> {
    let n = check_square(a)?;
    let nn = n * n;
    // Column for unknown E_kl (index k + l*n) holds vec(A E_kl + E_kl A).
    let mut op = RatMatrix::zeros(nn, nn);
    for l in 0..n {
        for k in 0..n {
            let col = k + l * n;
            for i in 0..n {
                // (A E_kl)_{i,l} = A[i][k]
                op[(i + l * n, col)] += &a[(i, k)];
            }
            for j in 0..n {
                // (E_kl A)_{k,j} = A[l][j]
                op[(k + j * n, col)] += &a[(l, j)];
            }
        }
    }
    let (vecs, free) = op.nullspace_with_free_columns();
    Ok(OperatorNullspace {
        n,
        basis: vecs.iter().map(|v| RatMatrix::unvectorize(v, n, n)).collect(),
        h: None,
        free_columns: free,
    })
}

/// All pairs `(R, H)` with `R A - A R = H A`.
pub fn commutant_pairs(a: &RatMatrix) -> Result<OperatorNullspace, LinalgError> {
    let n = check_square(a)?;
    let nn = n * n;
    let mut op = RatMatrix::zeros(nn, nn + 1);
    for l in 0..n {
        for k in 0..n {
            let col = k + l * n;
            for j in 0..n {
                // (E_kl A)_{k,j} = A[l][j]
                op[(k + j * n, col)] += &a[(l, j)];
            }
            for i in 0..n {
                // -(A E_kl)_{i,l} = -A[i][k]
                op[(i + l * n, col)] -= &a[(i, k)];
            }
        }
    }
    for (idx, v) in a.vectorize().into_iter().enumerate() {
        op[(idx, nn)] = -v;
    }
    let (vecs, free) = op.nullspace_with_free_columns();
    let basis = vecs.iter().map(|v| RatMatrix::unvectorize(&v[..nn], n, n)).collect();
    let h = vecs.iter().map(|v| v[nn].clone()).collect();
    Ok(OperatorNullspace {
        n,
        basis,
        h: Some(h),
        free_columns: free,
    })
}
