use nalgebra::DMatrix;

use crate::rational::{rat, Rational};

use super::RatMatrix;

/// `exp(M)` and `phi(M) = sum_k M^k / (k+1)!` by scaling and squaring.
///
/// `M` is scaled by `2^-s` until its 1-norm is at most 1/2, both series are
/// summed until the next term is below `1e-17` of the running sum, and the
/// results are brought back with `exp(2M) = exp(M)^2` and
/// `phi(2M) = phi(M) (exp(M) + I) / 2`.
pub fn exp_and_phi(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    assert!(m.is_square(), "exp_and_phi needs a square matrix");
    let n = m.nrows();
    let norm = one_norm(m);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = m / 2f64.powi(squarings as i32);
    let id = DMatrix::<f64>::identity(n, n);

    let mut exp = id.clone();
    let mut phi = id.clone();
    // term_k = scaled^k / k!
    let mut term = id.clone();
    for k in 1..64 {
        term = &term * &scaled / (k as f64);
        let phi_term = &term / ((k + 1) as f64);
        exp += &term;
        phi += &phi_term;
        if one_norm(&term) <= 1e-17 * one_norm(&exp).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    for _ in 0..squarings {
        phi = &phi * (&exp + &id) * 0.5;
        exp = &exp * &exp;
    }
    (exp, phi)
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Floating approximation of `exp(s A)`.
///
/// Nilpotent `A` (detected exactly) takes the terminating series: the rational
/// coefficients `A^k / k!` are formed exactly and only then converted.
pub fn matrix_exp(a: &RatMatrix, s: f64) -> DMatrix<f64> {
    assert!(a.is_square(), "matrix_exp needs a square matrix");
    let n = a.rows();
    if let Some(terms) = nilpotent_series(a) {
        let mut out = DMatrix::<f64>::zeros(n, n);
        for (k, t) in terms.iter().enumerate() {
            out += t.to_f64() * s.powi(k as i32);
        }
        return out;
    }
    exp_and_phi(&(a.to_f64() * s)).0
}

/// `[A^0/0!, A^1/1!, ...]` up to the last nonzero power, if `A` is nilpotent.
fn nilpotent_series(a: &RatMatrix) -> Option<Vec<RatMatrix>> {
    let n = a.rows();
    let mut terms = vec![RatMatrix::identity(n)];
    let mut power = RatMatrix::identity(n);
    let mut fact = Rational::from_integer(1.into());
    for k in 1..=n {
        power = power.mul(a);
        if power.is_zero() {
            return Some(terms);
        }
        fact *= rat(k as i64);
        terms.push(power.scale(&fact.recip()));
    }
    None
}
