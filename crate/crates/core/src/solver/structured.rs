use nalgebra::DMatrix;
use num_traits::Zero;

use crate::determining::JetSource;
use crate::linalg::{matrix_exp, RatMatrix};
use crate::rational::{rat, to_f64, Rational};
use crate::symbolic::{Jet2, ScalarExpr, Var, VectorField};

/// Member of the closed-form solution family
///
/// ```text
/// xi    = g w + k + l t
/// eta^w = h w + j
/// eta^x = R x + s + e^{wA} (P x + T)
/// ```
///
/// with `[R, A] = h A` and `A P + P A = 0`. For nonsingular `A` these
/// coordinates are unique, so linear algebra on fields reduces to linear
/// algebra on the parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredField {
    pub k: Rational,
    pub l: Rational,
    pub g: Rational,
    pub j: Rational,
    pub h: Rational,
    pub s: Vec<Rational>,
    pub tt: Vec<Rational>,
    pub r: RatMatrix,
    pub p: RatMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructuredError {
    #[error("bracket rules assume h = 0, which holds for every nonsingular A")]
    NonzeroH,
}

impl StructuredField {
    pub fn zero(n: usize) -> StructuredField {
        StructuredField {
            k: Rational::zero(),
            l: Rational::zero(),
            g: Rational::zero(),
            j: Rational::zero(),
            h: Rational::zero(),
            s: vec![Rational::zero(); n],
            tt: vec![Rational::zero(); n],
            r: RatMatrix::zeros(n, n),
            p: RatMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn is_zero(&self) -> bool {
        [&self.k, &self.l, &self.g, &self.j, &self.h].iter().all(|x| x.is_zero())
            && self.s.iter().chain(&self.tt).all(Zero::is_zero)
            && self.r.is_zero()
            && self.p.is_zero()
    }

    /// The two matrix identities that make the field a symmetry:
    /// `R A - A R - h A` and `A P + P A`, both zero exactly for symmetries.
    pub fn identity_residuals(&self, a: &RatMatrix) -> (RatMatrix, RatMatrix) {
        let comm = self.r.mul(a).sub(&a.mul(&self.r)).sub(&a.scale(&self.h));
        let anti = a.mul(&self.p).add(&self.p.mul(a));
        (comm, anti)
    }

    pub fn satisfies_identities(&self, a: &RatMatrix) -> bool {
        let (c, p) = self.identity_residuals(a);
        c.is_zero() && p.is_zero()
    }

    /// Exact bracket within the family, for `h = 0` on both sides.
    pub fn bracket(&self, other: &StructuredField, a: &RatMatrix) -> Result<StructuredField, StructuredError> {
        if !self.h.is_zero() || !other.h.is_zero() {
            return Err(StructuredError::NonzeroH);
        }
        let (x, y) = (self, other);
        let vsub = |u: Vec<Rational>, v: Vec<Rational>| u.into_iter().zip(v).map(|(p, q)| p - q).collect::<Vec<_>>();
        let vadd = |u: Vec<Rational>, v: Vec<Rational>| u.into_iter().zip(v).map(|(p, q)| p + q).collect::<Vec<_>>();

        let r = y.r.mul(&x.r).sub(&x.r.mul(&y.r)).add(&y.p.mul(&x.p)).sub(&x.p.mul(&y.p));
        let s = vsub(
            vadd(y.r.mul_vec(&x.s), y.p.mul_vec(&x.tt)),
            vadd(x.r.mul_vec(&y.s), x.p.mul_vec(&y.tt)),
        );
        let ap_y = a.mul(&y.p);
        let ap_x = a.mul(&x.p);
        let p = ap_y
            .scale(&x.j)
            .sub(&ap_x.scale(&y.j))
            .add(&y.r.mul(&x.p))
            .sub(&x.r.mul(&y.p))
            .add(&y.p.mul(&x.r))
            .sub(&x.p.mul(&y.r));
        let at_y: Vec<Rational> = a.mul_vec(&y.tt).into_iter().map(|v| v * &x.j).collect();
        let at_x: Vec<Rational> = a.mul_vec(&x.tt).into_iter().map(|v| v * &y.j).collect();
        let tt = vadd(
            vsub(at_y, at_x),
            vsub(
                vadd(y.r.mul_vec(&x.tt), y.p.mul_vec(&x.s)),
                vadd(x.r.mul_vec(&y.tt), x.p.mul_vec(&y.s)),
            ),
        );
        Ok(StructuredField {
            k: &x.k * &y.l - &y.k * &x.l + &x.j * &y.g - &y.j * &x.g,
            l: Rational::zero(),
            g: &x.g * &y.l - &y.g * &x.l,
            j: Rational::zero(),
            h: Rational::zero(),
            s,
            tt,
            r,
            p,
        })
    }

    /// Expression form, given the exact entries of `e^{wA}`.
    pub fn to_vector_field(&self, exp: &[Vec<ScalarExpr>]) -> VectorField {
        let n = self.n();
        let c = |r: &Rational| ScalarExpr::constant(r.clone());
        let xi = ScalarExpr::w().scale(&self.g).add(&c(&self.k)).add(&ScalarExpr::t().scale(&self.l));
        let etaw = ScalarExpr::w().scale(&self.h).add(&c(&self.j));
        // inner = P x + T
        let inner: Vec<ScalarExpr> = (0..n)
            .map(|i| {
                let mut e = c(&self.tt[i]);
                for m in 0..n {
                    if !self.p[(i, m)].is_zero() {
                        e.add_assign(&ScalarExpr::x(m).scale(&self.p[(i, m)]));
                    }
                }
                e
            })
            .collect();
        let eta = (0..n)
            .map(|i| {
                let mut e = c(&self.s[i]);
                for m in 0..n {
                    if !self.r[(i, m)].is_zero() {
                        e.add_assign(&ScalarExpr::x(m).scale(&self.r[(i, m)]));
                    }
                    if !inner[m].is_zero() && !exp[i][m].is_zero() {
                        e.add_assign(&exp[i][m].mul(&inner[m]));
                    }
                }
                e
            })
            .collect();
        VectorField::new(xi, eta, etaw)
    }

    /// Pairs the field with its matrix for floating evaluation.
    pub fn with_matrix<'a>(&'a self, a: &'a RatMatrix) -> NumericStructured<'a> {
        NumericStructured { field: self, a }
    }
}

/// A [`StructuredField`] evaluated numerically through `e^{wA}` and its
/// `w`-derivatives `A e^{wA}`, `A^2 e^{wA}`; works for any rational `A`.
pub struct NumericStructured<'a> {
    field: &'a StructuredField,
    a: &'a RatMatrix,
}

impl JetSource for NumericStructured<'_> {
    fn n(&self) -> usize {
        self.field.n()
    }

    fn jets_at(&self, point: &[f64]) -> Vec<Jet2> {
        let f = self.field;
        let n = f.n();
        let m = n + 2;
        let (t, w) = (point[0], point[n + 1]);
        let x = DMatrix::from_column_slice(n, 1, &point[1..=n]);
        let fl = |r: &Rational| to_f64(r);
        let e = matrix_exp(self.a, w);
        let af = self.a.to_f64();
        let ae = &af * &e;
        let aae = &af * &ae;
        let pf = f.p.to_f64();
        let rf = f.r.to_f64();
        let tf = DMatrix::from_iterator(n, 1, f.tt.iter().map(fl));
        let inner = &pf * &x + &tf;
        let value = &rf * &x + DMatrix::from_iterator(n, 1, f.s.iter().map(fl)) + &e * &inner;
        let dw = &ae * &inner;
        let dww = &aae * &inner;
        let dx = &rf + &e * &pf;
        let dxw = &ae * &pf;

        let wi = Var::W.index(n);
        let mut out = Vec::with_capacity(m);
        let mut xi = Jet2::constant(m, fl(&f.g) * w + fl(&f.k) + fl(&f.l) * t);
        xi.grad[0] = fl(&f.l);
        xi.grad[wi] = fl(&f.g);
        out.push(xi);
        for i in 0..n {
            let mut jet = Jet2::constant(m, value[(i, 0)]);
            for c in 0..n {
                jet.grad[1 + c] = dx[(i, c)];
                jet.hess[(1 + c) * m + wi] = dxw[(i, c)];
                jet.hess[wi * m + 1 + c] = dxw[(i, c)];
            }
            jet.grad[wi] = dw[(i, 0)];
            jet.hess[wi * m + wi] = dww[(i, 0)];
            out.push(jet);
        }
        let mut ew = Jet2::constant(m, fl(&f.h) * w + fl(&f.j));
        ew.grad[wi] = fl(&f.h);
        out.push(ew);
        out
    }
}

/// Unit vector helper for building generators.
pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = rat(1);
    v
}
