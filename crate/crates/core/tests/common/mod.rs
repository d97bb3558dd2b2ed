//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use liesym::lie::LieAlgebra;
use liesym::linalg::RatMatrix;
use liesym::rational::{rat, ratio, Rational};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn small_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    ratio(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// Unit lower times unit upper triangular integer matrix: determinant one.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let mut l = RatMatrix::identity(n);
    let mut u = RatMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = rat(rng.gen_range(-1..=1));
            u[(j, i)] = rat(rng.gen_range(-1..=1));
        }
    }
    l.mul(&u)
}

/// A random nonsingular matrix with nonzero trace. The mix favours
/// repeated eigenvalues, opposite pairs and scalar matrices so the special
/// strata of the symmetry count are actually visited.
pub fn fuzz_matrix<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let spectrum = [rat(-2), rat(-1), rat(1), rat(2), rat(3), ratio(1, 2)];
    loop {
        let a = match rng.gen_range(0..5) {
            0 => RatMatrix::from_rows(
                (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect(),
            ),
            1 => RatMatrix::diagonal(&(0..n).map(|_| spectrum.choose(rng).unwrap().clone()).collect::<Vec<_>>()),
            2 => RatMatrix::scalar(n, spectrum.choose(rng).unwrap().clone()),
            3 => {
                let mut d = RatMatrix::diagonal(&(0..n).map(|_| spectrum.choose(rng).unwrap().clone()).collect::<Vec<_>>());
                for i in 0..n - 1 {
                    if d[(i, i)] == d[(i + 1, i + 1)] && rng.gen_bool(0.5) {
                        d[(i, i + 1)] = rat(1);
                    }
                }
                let s = unimodular(rng, n);
                s.mul(&d).mul(&s.inverse().unwrap())
            }
            _ => {
                let b = rat(rng.gen_range(-1..=1));
                let c = rat(rng.gen_range(1..=2));
                let mut m = RatMatrix::zeros(n, n);
                m[(0, 0)] = b.clone();
                m[(0, 1)] = c.clone();
                m[(1, 0)] = -c;
                m[(1, 1)] = b;
                for i in 2..n {
                    m[(i, i)] = spectrum.choose(rng).unwrap().clone();
                }
                m
            }
        };
        if a.is_nonsingular() && !a.trace().is_zero() {
            return a;
        }
    }
}

/// Rank by plain Gaussian elimination, independent of the library's RREF.
pub fn brute_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= p * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Matrix of `X -> X A + sign * A X` on row-major `vec(X)`.
fn kron_operator(a: &RatMatrix, sign: i64) -> Vec<Vec<Rational>> {
    let n = a.rows();
    let delta = |i: usize, j: usize| if i == j { Rational::one() } else { Rational::zero() };
    let mut m = vec![vec![Rational::zero(); n * n]; n * n];
    for i in 0..n {
        for j in 0..n {
            for p in 0..n {
                for q in 0..n {
                    m[i * n + j][p * n + q] = delta(i, p) * a[(q, j)].clone() + rat(sign) * a[(i, p)].clone() * delta(q, j);
                }
            }
        }
    }
    m
}

/// `dim {P : AP + PA = 0}` from the Kronecker form.
pub fn kron_anticommutant_dim(a: &RatMatrix) -> usize {
    let n = a.rows();
    n * n - brute_rank(kron_operator(a, 1))
}

/// `dim {R : RA - AR = 0}`.
pub fn kron_commutant_dim(a: &RatMatrix) -> usize {
    let n = a.rows();
    n * n - brute_rank(kron_operator(a, -1))
}

/// `dim {(R, h) : RA - AR = h A}`; the unknown `h` is one extra column.
pub fn kron_commutant_pairs_dim(a: &RatMatrix) -> usize {
    let n = a.rows();
    let mut m = kron_operator(a, -1);
    for (idx, row) in m.iter_mut().enumerate() {
        row.push(-a[(idx / n, idx % n)].clone());
    }
    n * n + 1 - brute_rank(m)
}

/// Structure constants in the basis `f_i = sum_k S[k][i] e_k`.
pub fn change_basis(l: &LieAlgebra, s: &RatMatrix) -> LieAlgebra {
    let d = l.dim();
    let sinv = s.inverse().expect("invertible change of basis");
    let cols: Vec<Vec<Rational>> = (0..d).map(|i| s.column(i)).collect();
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let v = l.bracket(&cols[i], &cols[j]);
            brackets.push((i, j, sinv.mul_vec(&v)));
        }
    }
    LieAlgebra::from_brackets(d, &brackets).unwrap()
}

pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let mut brackets = Vec::new();
    for (alg, off, dim) in [(a, 0, da), (b, da, db)] {
        for i in 0..dim {
            for j in i + 1..dim {
                let mut v = vec![Rational::zero(); d];
                for (k, c) in alg.bracket_basis(i, j).iter().enumerate() {
                    v[off + k] = c.clone();
                }
                brackets.push((off + i, off + j, v));
            }
        }
    }
    LieAlgebra::from_brackets(d, &brackets).unwrap()
}
