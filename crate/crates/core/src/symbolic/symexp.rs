use crate::linalg::{minimal_polynomial, RatMatrix, RationalRoot};
use crate::rational::{rat, Rational};

use super::{ScalarExpr, Var};

/// Exact `e^{wA}` as a matrix of expressions in `w`, or `None` when the
/// minimal polynomial of `A` does not split into rational roots and
/// Gaussian-rational conjugate pairs.
///
/// Each entry solves `mu(d/dw) f = 0` for the minimal polynomial `mu`, so
/// `e^{wA} = sum_j phi_j(w) M_j` over a basis `phi_j` of that solution space.
/// The matrices `M_j` follow from matching the first `deg mu` derivatives at
/// `w = 0`, where `e^{wA}` has derivatives `A^k`.
pub fn exp_wa(a: &RatMatrix) -> Option<Vec<Vec<ScalarExpr>>> {
    let n = a.rows();
    let mu = minimal_polynomial(a).ok()?;
    let d = mu.degree();
    let roots = mu.split_rational()?;

    let mut basis: Vec<ScalarExpr> = Vec::with_capacity(d);
    for root in &roots {
        match root {
            RationalRoot::Real { value, multiplicity } => {
                for k in 0..*multiplicity {
                    basis.push(ScalarExpr::w().pow(k as u32).mul(&ScalarExpr::exp_w(value.clone())));
                }
            }
            RationalRoot::ComplexPair { re, im, multiplicity } => {
                for k in 0..*multiplicity {
                    let base = ScalarExpr::w().pow(k as u32).mul(&ScalarExpr::exp_w(re.clone()));
                    basis.push(base.mul(&ScalarExpr::cos_w(im.clone())));
                    basis.push(base.mul(&ScalarExpr::sin_w(im.clone())));
                }
            }
        }
    }
    assert_eq!(basis.len(), d, "root multiplicities must add up to the degree");

    // wronskian[k][j] = phi_j^{(k)}(0)
    let mut derivs = basis.clone();
    let mut wronskian = RatMatrix::zeros(d, d);
    for k in 0..d {
        for (j, f) in derivs.iter().enumerate() {
            wronskian[(k, j)] = f.value_at_w_zero().expect("functions of w only");
        }
        derivs = derivs.iter().map(|f| f.differentiate(Var::W)).collect();
    }
    let winv = wronskian.inverse().expect("fundamental system has an invertible Wronskian");

    let powers: Vec<RatMatrix> = (0..d).map(|k| a.pow(k as u32)).collect();
    let mut out = vec![vec![ScalarExpr::zero(); n]; n];
    for (j, phi) in basis.iter().enumerate() {
        let mut mj = RatMatrix::zeros(n, n);
        for (k, pk) in powers.iter().enumerate() {
            mj = mj.add(&pk.scale(&winv[(j, k)]));
        }
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                if mj[(r, c)] != rat(0) {
                    entry.add_assign(&phi.scale(&mj[(r, c)]));
                }
            }
        }
    }
    debug_assert!(check_exp(a, &out));
    Some(out)
}

/// `E' = A E` and `E(0) = I`.
fn check_exp(a: &RatMatrix, e: &[Vec<ScalarExpr>]) -> bool {
    let n = a.rows();
    for r in 0..n {
        for c in 0..n {
            let want = if r == c { rat(1) } else { rat(0) };
            if e[r][c].value_at_w_zero() != Some(want) {
                return false;
            }
            let mut ae = ScalarExpr::zero();
            for (k, row) in e.iter().enumerate() {
                if a[(r, k)] != Rational::from_integer(0.into()) {
                    ae.add_assign(&row[c].scale(&a[(r, k)]));
                }
            }
            if e[r][c].differentiate(Var::W) != ae {
                return false;
            }
        }
    }
    true
}
