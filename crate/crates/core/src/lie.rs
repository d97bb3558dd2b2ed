//! Structure-constant level Lie algebra computations.
//!
//! A [`LieAlgebra`] stores `C^k_{ij}` with `[e_i, e_j] = C^k_{ij} e_k`.
//! Everything here is exact: subspaces are kept as reduced row-echelon bases
//! and all spans, kernels and annihilators come from rational elimination.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{LinalgError, RatMatrix};
use crate::rational::{format_rational, half, rat, Rational, RationalLiteral};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("structure constants are not antisymmetric at (i={i}, j={j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Jacobi identity fails for basis triple ({i}, {j}, {k})")]
    Jacobi { i: usize, j: usize, k: usize },
    #[error("vector has length {found}, expected {dim}")]
    Length { found: usize, dim: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Finite-dimensional Lie algebra given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Rational>,
}

/// Symmetric bilinear form on a Lie algebra (Killing form, Ricci tensor).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BilinearForm {
    pub dim: usize,
    pub entries: RatMatrix,
}

impl BilinearForm {
    pub fn is_symmetric(&self) -> bool {
        self.entries == self.entries.transpose()
    }

    pub fn rank(&self) -> usize {
        self.entries.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn scale(&self, s: &Rational) -> BilinearForm {
        BilinearForm {
            dim: self.dim,
            entries: self.entries.scale(s),
        }
    }
}

/// Linear subspace of `Q^ambient` with a reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let m = RatMatrix::from_rows(vectors.to_vec());
        let r = m.rref();
        let basis = (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient: usize) -> Subspace {
        Subspace::span(ambient, &unit_vectors(ambient))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        RatMatrix::from_rows(rows).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}

fn unit_vectors(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = rat(1);
            v
        })
        .collect()
}

impl LieAlgebra {
    /// Builds an algebra from a dense `dim^3` table indexed `[i][j][k] = C^k_{ij}`.
    pub fn new(dim: usize, c: Vec<Rational>) -> Result<LieAlgebra, LieError> {
        assert_eq!(c.len(), dim * dim * dim, "structure constant table size");
        let alg = LieAlgebra { dim, c };
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    if *alg.constant(i, j, k) != -alg.constant(j, i, k).clone() {
                        return Err(LieError::NotAntisymmetric { i, j });
                    }
                }
            }
        }
        Ok(alg)
    }

    /// Builds an algebra from the brackets `[e_i, e_j]` with `i < j` (0-based).
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Rational>)]) -> Result<LieAlgebra, LieError> {
        let mut c = vec![Rational::zero(); dim * dim * dim];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            for idx in [i, j] {
                if idx >= dim {
                    return Err(LieError::IndexOutOfRange { index: idx, dim });
                }
            }
            if coeffs.len() != dim {
                return Err(LieError::Length {
                    found: coeffs.len(),
                    dim,
                });
            }
            for (k, v) in coeffs.iter().enumerate() {
                c[(i * dim + j) * dim + k] = v.clone();
                c[(j * dim + i) * dim + k] = -v.clone();
            }
        }
        LieAlgebra::new(dim, c)
    }

    pub fn abelian(dim: usize) -> LieAlgebra {
        LieAlgebra {
            dim,
            c: vec![Rational::zero(); dim * dim * dim],
        }
    }

    /// Three-dimensional Heisenberg algebra `[e_1, e_2] = e_3`.
    pub fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, vec![rat(0), rat(0), rat(1)])]).expect("valid")
    }

    /// `sl(2)` in the basis `h, e, f`.
    pub fn sl2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            3,
            &[
                (0, 1, vec![rat(0), rat(2), rat(0)]),
                (0, 2, vec![rat(0), rat(0), rat(-2)]),
                (1, 2, vec![rat(1), rat(0), rat(0)]),
            ],
        )
        .expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.dim + j) * self.dim;
        &self.c[start..start + self.dim]
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let f = xi * yj;
                for (o, c) in out.iter_mut().zip(self.bracket_basis(i, j)) {
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    fn check_index(&self, index: usize) -> Result<(), LieError> {
        if index < self.dim {
            Ok(())
        } else {
            Err(LieError::IndexOutOfRange { index, dim: self.dim })
        }
    }

    /// Checks every basis triple; reports the first violation.
    pub fn validate_jacobi(&self) -> Result<(), LieError> {
        let e = unit_vectors(self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let ij = self.bracket_basis(i, j).to_vec();
                for k in j + 1..self.dim {
                    let a = self.bracket(&ij, &e[k]);
                    let b = self.bracket(self.bracket_basis(j, k), &e[i]);
                    let c = self.bracket(self.bracket_basis(k, i), &e[j]);
                    if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Err(LieError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// `R(e_i, e_j) e_k = 1/4 [[e_i, e_j], e_k]` for the canonical connection.
    pub fn curvature(&self, i: usize, j: usize, k: usize) -> Result<Vec<Rational>, LieError> {
        for idx in [i, j, k] {
            self.check_index(idx)?;
        }
        let mut ek = vec![Rational::zero(); self.dim];
        ek[k] = rat(1);
        let v = self.bracket(self.bracket_basis(i, j), &ek);
        let quarter = rat(1) / rat(4);
        Ok(v.into_iter().map(|x| x * &quarter).collect())
    }

    /// The canonical connection is flat exactly when `[[g, g], g] = 0`.
    pub fn is_flat(&self) -> bool {
        let e = unit_vectors(self.dim);
        (0..self.dim).all(|i| {
            (i + 1..self.dim).all(|j| {
                let ij = self.bracket_basis(i, j);
                e.iter().all(|ek| self.bracket(ij, ek).iter().all(Zero::is_zero))
            })
        })
    }

    /// Matrix of `ad e_i`: column `m` holds `[e_i, e_m]`.
    pub fn ad(&self, i: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            for (row, v) in self.bracket_basis(i, col).iter().enumerate() {
                m[(row, col)] = v.clone();
            }
        }
        m
    }

    /// `K_ij = tr(ad e_i ad e_j)`.
    pub fn killing_form(&self) -> BilinearForm {
        let ads: Vec<RatMatrix> = (0..self.dim).map(|i| self.ad(i)).collect();
        let mut k = RatMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let t = trace_of_product(&ads[i], &ads[j]);
                k[(j, i)] = t.clone();
                k[(i, j)] = t;
            }
        }
        BilinearForm {
            dim: self.dim,
            entries: k,
        }
    }

    /// Ricci tensor of the canonical connection as the contraction
    /// `R_jk = sum_i (R(e_i, e_j) e_k)^i` of the curvature tensor.
    pub fn ricci(&self) -> BilinearForm {
        let mut r = RatMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                let mut acc = Rational::zero();
                for i in 0..self.dim {
                    let v = self.curvature(i, j, k).expect("in range");
                    acc += &v[i];
                }
                r[(j, k)] = acc;
            }
        }
        BilinearForm {
            dim: self.dim,
            entries: r,
        }
    }

    pub fn is_semisimple(&self) -> bool {
        self.dim > 0 && self.killing_form().is_nondegenerate()
    }

    /// Span of `[a, b]` over basis vectors of `a` and `b`.
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                let v = self.bracket(x, y);
                if v.iter().any(|c| !c.is_zero()) {
                    vs.push(v);
                }
            }
        }
        Subspace::span(self.dim, &vs)
    }

    pub fn derived_algebra(&self) -> Subspace {
        let vs: Vec<Vec<Rational>> = (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| self.bracket_basis(i, j).to_vec())
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect();
        Subspace::span(self.dim, &vs)
    }

    /// `g, [g, g], [[g, g], [g, g]], ...` until the dimension stops dropping.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::whole(self.dim)];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(last, last);
            if next.dim() == last.dim() {
                return series;
            }
            let done = next.dim() == 0;
            series.push(next);
            if done {
                return series;
            }
        }
    }

    /// `g, [g, g], [g, [g, g]], ...` until the dimension stops dropping.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let whole = Subspace::whole(self.dim);
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(&whole, last);
            if next.dim() == last.dim() {
                return series;
            }
            let done = next.dim() == 0;
            series.push(next);
            if done {
                return series;
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|s| s.dim() == 0)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(|s| s.dim() == 0)
    }

    /// `{z : [e_i, z] = 0 for all i}`.
    pub fn center(&self) -> Subspace {
        // Rows: coefficient k of [e_i, z] as a linear function of z.
        let mut rows = Vec::new();
        for i in 0..self.dim {
            for k in 0..self.dim {
                rows.push((0..self.dim).map(|m| self.constant(i, m, k).clone()).collect::<Vec<_>>());
            }
        }
        kernel(self.dim, rows)
    }

    /// Covectors annihilating the derived algebra; these are exactly the
    /// closed (hence bi-invariant) invariant one-forms.
    pub fn biinvariant_oneforms(&self) -> Vec<Vec<Rational>> {
        let derived = self.derived_algebra();
        kernel(self.dim, derived.basis().to_vec()).basis().to_vec()
    }

    /// Solvable radical as the Killing-orthogonal complement of `[g, g]`.
    pub fn radical_via_killing(&self) -> Subspace {
        let k = self.killing_form();
        let derived = self.derived_algebra();
        let rows: Vec<Vec<Rational>> = derived.basis().iter().map(|d| k.entries.mul_vec(d)).collect();
        kernel(self.dim, rows)
    }

    /// Checks that `candidate` spans an ideal on which the lower central series
    /// reaches zero.
    pub fn verify_nilpotent_ideal(&self, candidate: &[Vec<Rational>]) -> Result<bool, LieError> {
        if let Some(v) = candidate.iter().find(|v| v.len() != self.dim) {
            return Err(LieError::Length {
                found: v.len(),
                dim: self.dim,
            });
        }
        let sub = Subspace::span(self.dim, candidate);
        let whole = Subspace::whole(self.dim);
        if !self.bracket_span(&whole, &sub).is_subspace_of(&sub) {
            return Ok(false);
        }
        let mut term = sub.clone();
        while term.dim() > 0 {
            let next = self.bracket_span(&sub, &term);
            if next.dim() == term.dim() {
                return Ok(false);
            }
            term = next;
        }
        Ok(true)
    }

    /// Structure constants of the subalgebra spanned by `basis` (expressed in
    /// that basis), or `None` if the span is not closed under the bracket.
    pub fn subalgebra(&self, basis: &[Vec<Rational>]) -> Option<LieAlgebra> {
        let m = basis.len();
        let solver = crate::linalg::SpanSolver::new(basis);
        if !solver.is_independent() {
            return None;
        }
        let mut c = vec![Rational::zero(); m * m * m];
        for i in 0..m {
            for j in i + 1..m {
                let coords = solver.express(&self.bracket(&basis[i], &basis[j]))?;
                for (k, v) in coords.into_iter().enumerate() {
                    c[(j * m + i) * m + k] = -v.clone();
                    c[(i * m + j) * m + k] = v;
                }
            }
        }
        Some(LieAlgebra { dim: m, c })
    }
}

fn trace_of_product(a: &RatMatrix, b: &RatMatrix) -> Rational {
    let n = a.rows();
    let mut acc = Rational::zero();
    for l in 0..n {
        for m in 0..n {
            let x = &a[(l, m)];
            if x.is_zero() {
                continue;
            }
            let y = &b[(m, l)];
            if !y.is_zero() {
                acc += x * y;
            }
        }
    }
    acc
}

/// Common kernel of the given linear functionals on `Q^dim`.
fn kernel(dim: usize, rows: Vec<Vec<Rational>>) -> Subspace {
    if rows.is_empty() {
        return Subspace::whole(dim);
    }
    let basis = RatMatrix::from_rows(rows).nullspace_basis();
    Subspace::span(dim, &basis)
}

/// Lie algebra with a codimension-one abelian ideal, determined by `A`.
///
/// `A[i][j]` is the coefficient `a^i_j` in the geodesic equations
/// `x''^i = a^i_j x'^j w'`. The matching brackets are
/// `[e_i, e_{n+1}] = sum_k A[k][i] e_k`, i.e. `ad(e_{n+1})` restricted to the
/// ideal is `-A`. This is the orientation of the right-invariant fields
/// `X_i = d/dx^i`, `W = d/dw + a^k_j x^j d/dx^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodimOneAlgebra {
    a: RatMatrix,
}

impl CodimOneAlgebra {
    pub fn new(a: RatMatrix) -> Result<CodimOneAlgebra, LieError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            }
            .into());
        }
        Ok(CodimOneAlgebra { a })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.a
    }

    pub fn is_nonsingular(&self) -> bool {
        self.a.is_nonsingular()
    }

    pub fn trace(&self) -> Rational {
        self.a.trace()
    }

    pub fn is_unimodular(&self) -> bool {
        self.trace().is_zero()
    }

    pub fn lie_algebra(&self) -> LieAlgebra {
        let n = self.n();
        let dim = n + 1;
        let brackets: Vec<(usize, usize, Vec<Rational>)> = (0..n)
            .filter_map(|i| {
                let mut coeffs = vec![Rational::zero(); dim];
                for (k, c) in coeffs.iter_mut().take(n).enumerate() {
                    *c = self.a[(k, i)].clone();
                }
                coeffs.iter().any(|c| !c.is_zero()).then_some((i, n, coeffs))
            })
            .collect();
        let alg = LieAlgebra::from_brackets(dim, &brackets).expect("codimension-one table is well formed");
        debug_assert!(alg.validate_jacobi().is_ok());
        alg
    }
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    coeffs: Vec<RationalLiteral>,
}

#[derive(Serialize, Deserialize)]
struct LieAlgebraJson {
    dim: usize,
    brackets: Vec<BracketJson>,
}

/// JSON form `{dim, brackets: [{i, j, coeffs}]}` with 1-based `i < j` and
/// only nonzero brackets listed.
impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|c| !c.is_zero()) {
                    brackets.push(BracketJson {
                        i: i + 1,
                        j: j + 1,
                        coeffs: v.iter().map(|c| RationalLiteral::Text(format_rational(c))).collect(),
                    });
                }
            }
        }
        LieAlgebraJson { dim: self.dim, brackets }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = LieAlgebraJson::deserialize(d)?;
        let mut brackets = Vec::new();
        for b in raw.brackets {
            if b.i == 0 || b.j == 0 || b.i >= b.j {
                return Err(D::Error::custom(format!("bracket indices must satisfy 1 <= i < j, got ({}, {})", b.i, b.j)));
            }
            let coeffs = b
                .coeffs
                .into_iter()
                .map(|c| c.into_rational().map_err(D::Error::custom))
                .collect::<Result<Vec<_>, _>>()?;
            brackets.push((b.i - 1, b.j - 1, coeffs));
        }
        LieAlgebra::from_brackets(raw.dim, &brackets).map_err(D::Error::custom)
    }
}

/// Ricci tensor evaluated straight from the contraction
/// `R_ij = 1/4 C^l_{jm} C^m_{il}`; kept separate from [`LieAlgebra::ricci`]
/// so the two can be checked against each other.
pub fn ricci_from_constants(alg: &LieAlgebra) -> BilinearForm {
    let n = alg.dim();
    let quarter = half() * half();
    let mut r = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Rational::zero();
            for l in 0..n {
                for m in 0..n {
                    let a = alg.constant(j, m, l);
                    if a.is_zero() {
                        continue;
                    }
                    let b = alg.constant(i, l, m);
                    if !b.is_zero() {
                        acc += a * b;
                    }
                }
            }
            r[(i, j)] = acc * &quarter;
        }
    }
    BilinearForm { dim: n, entries: r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn codim1(a: RatMatrix) -> LieAlgebra {
        CodimOneAlgebra::new(a).unwrap().lie_algebra()
    }

    fn e(dim: usize, i: usize) -> Vec<Rational> {
        unit_vectors(dim)[i].clone()
    }

    #[test]
    fn one_dimensional_ideal() {
        let alg = codim1(RatMatrix::from_i64(&[&[2]]));
        assert_eq!(alg.bracket_basis(0, 1), &[rat(2), rat(0)]);
        assert_eq!(alg.bracket_basis(1, 0), &[rat(-2), rat(0)]);
        assert!(alg.validate_jacobi().is_ok());
    }

    #[test]
    fn identity_gives_diagonal_action() {
        let alg = codim1(RatMatrix::identity(3));
        for i in 0..3 {
            assert_eq!(alg.bracket_basis(i, 3), e(4, i).as_slice());
        }
    }

    #[test]
    fn orientation_follows_columns_of_a() {
        // Geodesics x'' = x' w', y'' = (y' + z') w', z'' = z' w'.
        let a = RatMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]);
        let alg = codim1(a);
        // [e_3, e_4] = e_2 + e_3: column 3 of A.
        assert_eq!(alg.bracket_basis(2, 3), &[rat(0), rat(1), rat(1), rat(0)]);
        assert_eq!(alg.bracket_basis(1, 3), &[rat(0), rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn jacobi_examples() {
        assert!(LieAlgebra::abelian(4).validate_jacobi().is_ok());
        assert!(LieAlgebra::heisenberg().validate_jacobi().is_ok());
        // [e_1, e_2] = e_1 and [e_2, e_3] = e_2 leave -e_1 in the cyclic sum.
        let bad = LieAlgebra::from_brackets(
            3,
            &[
                (0, 1, vec![rat(1), rat(0), rat(0)]),
                (1, 2, vec![rat(0), rat(1), rat(0)]),
            ],
        )
        .unwrap();
        assert_eq!(bad.validate_jacobi(), Err(LieError::Jacobi { i: 0, j: 1, k: 2 }));
    }

    #[test]
    fn antisymmetry_enforced() {
        let mut c = vec![rat(0); 8];
        // [e0, e1] = e0 with [e1, e0] left at zero.
        c[2] = rat(1);
        assert!(LieAlgebra::new(2, c).is_err());
    }

    #[test]
    fn curvature_examples() {
        let ab = LieAlgebra::abelian(3);
        let h = LieAlgebra::heisenberg();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(ab.curvature(i, j, k).unwrap().iter().all(Zero::is_zero));
                    assert!(h.curvature(i, j, k).unwrap().iter().all(Zero::is_zero));
                }
            }
        }
        // [e_1, e_2] = e_1, so 1/4 [[e_1, e_2], e_2] = 1/4 e_1.
        let alg = codim1(RatMatrix::identity(1));
        assert_eq!(alg.curvature(0, 1, 1).unwrap(), vec![ratio(1, 4), rat(0)]);
        assert!(alg.curvature(0, 1, 2).is_err());
    }

    #[test]
    fn flatness() {
        assert!(LieAlgebra::heisenberg().is_flat());
        assert!(LieAlgebra::abelian(2).is_flat());
        assert!(!codim1(RatMatrix::identity(3)).is_flat());
        // A^2 = 0 gives a flat member of the family.
        assert!(codim1(RatMatrix::from_i64(&[&[0, 1], &[0, 0]])).is_flat());
    }

    #[test]
    fn ricci_of_codim_one_family() {
        let a = RatMatrix::from_i64(&[&[1, 2, 0], &[0, 3, 1], &[1, 0, -1]]);
        let alg = codim1(a.clone());
        let r = alg.ricci();
        let mut want = RatMatrix::zeros(4, 4);
        want[(3, 3)] = a.mul(&a).trace() / rat(4);
        assert_eq!(r.entries, want);
        assert_eq!(alg.killing_form().scale(&ratio(1, 4)), r);
        assert_eq!(ricci_from_constants(&alg), r);
    }

    #[test]
    fn abelian_forms_vanish() {
        let ab = LieAlgebra::abelian(3);
        assert!(ab.ricci().entries.is_zero());
        assert!(ab.killing_form().entries.is_zero());
    }

    #[test]
    fn sl2_is_semisimple() {
        let s = LieAlgebra::sl2();
        assert!(s.validate_jacobi().is_ok());
        assert!(s.is_semisimple());
        assert_eq!(s.radical_via_killing().dim(), 0);
        assert_eq!(s.derived_algebra().dim(), 3);
        assert!(s.biinvariant_oneforms().is_empty());
    }

    #[test]
    fn derived_and_center_of_codim_one() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[0, 2]]);
        let alg = codim1(a);
        let d = alg.derived_algebra();
        assert_eq!(d, Subspace::span(3, &[e(3, 0), e(3, 1)]));
        assert_eq!(alg.center().dim(), 0);
        assert!(alg.is_solvable());
        assert!(!alg.is_nilpotent());
        assert_eq!(alg.biinvariant_oneforms(), vec![e(3, 2)]);
        assert_eq!(alg.radical_via_killing().dim(), 3);
    }

    #[test]
    fn heisenberg_structure() {
        let h = LieAlgebra::heisenberg();
        assert_eq!(h.center(), Subspace::span(3, &[e(3, 2)]));
        assert!(h.is_nilpotent());
        assert_eq!(h.biinvariant_oneforms().len(), 2);
        assert_eq!(h.lower_central_series().iter().map(Subspace::dim).collect::<Vec<_>>(), vec![3, 1, 0]);
    }

    #[test]
    fn abelian_everything_trivial() {
        let ab = LieAlgebra::abelian(4);
        assert_eq!(ab.derived_algebra().dim(), 0);
        assert_eq!(ab.center().dim(), 4);
        assert_eq!(ab.biinvariant_oneforms().len(), 4);
        assert_eq!(ab.radical_via_killing().dim(), 4);
        assert!(ab.is_nilpotent());
    }

    #[test]
    fn nilpotent_ideal_checks() {
        let h = LieAlgebra::heisenberg();
        assert!(h.verify_nilpotent_ideal(&unit_vectors(3)).unwrap());
        let alg = codim1(RatMatrix::diagonal(&[rat(1), rat(2)]));
        assert!(alg.verify_nilpotent_ideal(&[e(3, 0), e(3, 1)]).unwrap());
        assert!(!alg.verify_nilpotent_ideal(&unit_vectors(3)).unwrap());
        // span{e_3} is a subalgebra but not an ideal.
        assert!(!alg.verify_nilpotent_ideal(&[e(3, 2)]).unwrap());
        assert!(alg.verify_nilpotent_ideal(&[vec![rat(1)]]).is_err());
    }

    #[test]
    fn subalgebra_restriction() {
        let alg = codim1(RatMatrix::identity(2));
        let sub = alg.subalgebra(&[e(3, 0), e(3, 2)]).unwrap();
        assert_eq!(sub.bracket_basis(0, 1), &[rat(1), rat(0)]);
        assert!(alg.subalgebra(&[e(3, 0), e(3, 0)]).is_none());
    }

    #[test]
    fn json_lists_nonzero_brackets_one_based() {
        let h = LieAlgebra::heisenberg();
        let js = serde_json::to_string(&h).unwrap();
        assert_eq!(js, r#"{"dim":3,"brackets":[{"i":1,"j":2,"coeffs":["0","0","1"]}]}"#);
        let back: LieAlgebra = serde_json::from_str(&js).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<LieAlgebra>(r#"{"dim":2,"brackets":[{"i":2,"j":1,"coeffs":["1","0"]}]}"#).is_err());
    }
}
