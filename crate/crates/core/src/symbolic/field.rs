use std::fmt;

use crate::rational::Rational;

use super::expr::{join_signed, Jet2, ScalarExpr};
use super::{coordinate_names, derivative_names, SymbolicError, Var};

/// Point vector field `xi d/dt + eta^i d/dx^i + eta^w d/dw` on `(t, x^1..x^n, w)`.
///
/// Components are stored in coordinate order `[xi, eta^1, ..., eta^n, eta^w]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorField {
    n: usize,
    comps: Vec<ScalarExpr>,
}

impl VectorField {
    pub fn zero(n: usize) -> VectorField {
        VectorField {
            n,
            comps: vec![ScalarExpr::zero(); n + 2],
        }
    }

    pub fn new(xi: ScalarExpr, eta: Vec<ScalarExpr>, etaw: ScalarExpr) -> VectorField {
        let n = eta.len();
        let mut comps = Vec::with_capacity(n + 2);
        comps.push(xi);
        comps.extend(eta);
        comps.push(etaw);
        VectorField { n, comps }
    }

    /// `coef * d/d(var)`.
    pub fn along(n: usize, var: Var, coef: ScalarExpr) -> VectorField {
        let mut f = VectorField::zero(n);
        f.comps[var.index(n)] = coef;
        f
    }

    pub fn from_components(n: usize, comps: Vec<ScalarExpr>) -> VectorField {
        assert_eq!(comps.len(), n + 2, "component count");
        VectorField { n, comps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn xi(&self) -> &ScalarExpr {
        &self.comps[0]
    }

    pub fn eta(&self, i: usize) -> &ScalarExpr {
        &self.comps[1 + i]
    }

    pub fn etaw(&self) -> &ScalarExpr {
        &self.comps[self.n + 1]
    }

    /// Component along coordinate `k` (0 is `t`, `n + 1` is `w`).
    pub fn component(&self, k: usize) -> &ScalarExpr {
        &self.comps[k]
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ScalarExpr::is_zero)
    }

    fn check(&self, other: &VectorField) -> Result<(), SymbolicError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(SymbolicError::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField, SymbolicError> {
        self.check(other)?;
        Ok(VectorField {
            n: self.n,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField, SymbolicError> {
        self.check(other)?;
        Ok(VectorField {
            n: self.n,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> VectorField {
        VectorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn mul_scalar(&self, f: &ScalarExpr) -> VectorField {
        VectorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.differentiate(Var::from_index(k, self.n));
            if !d.is_zero() {
                out.add_assign(&c.mul(&d));
            }
        }
        out
    }

    /// `[X, Y]^k = X(Y^k) - Y(X^k)`.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField, SymbolicError> {
        self.check(other)?;
        let comps = (0..self.n + 2)
            .map(|k| self.apply(&other.comps[k]).sub(&other.apply(&self.comps[k])))
            .collect();
        Ok(VectorField { n: self.n, comps })
    }

    /// Hyper-dual evaluation of every component at `point = [t, x.., w]`.
    pub fn jets_at(&self, point: &[f64]) -> Vec<Jet2> {
        let seed = Jet2::seed(point);
        self.comps.iter().map(|c| c.eval_with(&seed)).collect()
    }

    /// Linear coordinates over the atom basis, keyed by `(component, atom)`.
    pub fn linear_terms(&self) -> impl Iterator<Item = ((usize, &super::Atom), &Rational)> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(k, c)| c.terms().map(move |(a, r)| ((k, a), r)))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = coordinate_names(self.n);
        let ds = derivative_names(self.n);
        let mut pieces = Vec::new();
        for (k, c) in self.comps.iter().enumerate() {
            pieces.extend(c.signed_pieces(&names, &ds[k]));
        }
        f.write_str(&join_signed(&pieces))
    }
}
