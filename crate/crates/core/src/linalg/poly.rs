use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{format_rational, rat, rational_sqrt, Rational};

use super::{LinalgError, RatMatrix};

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

/// A root of a real polynomial whose real and imaginary parts are rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalRoot {
    Real { value: Rational, multiplicity: usize },
    /// The conjugate pair `re ± i*im` with `im > 0`.
    ComplexPair { re: Rational, im: Rational, multiplicity: usize },
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        RatPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_matrix(&self, a: &RatMatrix) -> RatMatrix {
        let n = a.rows();
        self.coeffs
            .iter()
            .rev()
            .fold(RatMatrix::zeros(n, n), |acc, c| acc.mul(a).add(&RatMatrix::scalar(n, c.clone())))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lc = divisor.leading();
        if self.is_zero() || self.degree() < dd {
            return (RatPoly::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Roots with rational real and imaginary parts, with multiplicities.
    ///
    /// Returns `None` unless the polynomial splits completely into linear
    /// factors over the rationals and irreducible quadratics whose roots have
    /// rational real and imaginary parts.
    pub fn split_rational(&self) -> Option<Vec<RationalRoot>> {
        if self.is_zero() {
            return None;
        }
        let mut rest = self.monic();
        let mut roots = Vec::new();
        for r in rest.rational_root_candidates()? {
            let lin = RatPoly::new(vec![-r.clone(), Rational::one()]);
            let mut mult = 0;
            loop {
                let (q, rem) = rest.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push(RationalRoot::Real {
                    value: r,
                    multiplicity: mult,
                });
            }
        }
        // What remains has no rational roots; peel repeated quadratic factors.
        while rest.degree() > 0 {
            let sqfree = {
                let g = rest.gcd(&rest.derivative());
                rest.div_rem(&g).0.monic()
            };
            // Only a single irreducible quadratic factor is handled.
            if sqfree.degree() != 2 {
                return None;
            }
            let b = &sqfree.coeffs[1];
            let c = &sqfree.coeffs[0];
            let re = -b / rat(2);
            let im_sq = c - &re * &re;
            if !im_sq.is_positive() {
                return None;
            }
            let im = rational_sqrt(&im_sq)?;
            let mut mult = 0;
            loop {
                let (q, rem) = rest.div_rem(&sqfree);
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            roots.push(RationalRoot::ComplexPair {
                re,
                im,
                multiplicity: mult,
            });
        }
        Some(roots)
    }

    /// Candidate rational roots by the rational root theorem, or `None` when the
    /// integer coefficients are too large to enumerate divisors.
    fn rational_root_candidates(&self) -> Option<Vec<Rational>> {
        const LIMIT: u64 = 1_000_000_000_000;
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let low = ints.iter().position(|c| !c.is_zero())?;
        let mut cands = Vec::new();
        if low > 0 {
            cands.push(Rational::zero());
        }
        let a0 = ints[low].abs().to_u64().filter(|&v| v <= LIMIT)?;
        let an = ints.last()?.abs().to_u64().filter(|&v| v <= LIMIT)?;
        if ints.len() - low == 1 {
            return Some(cands);
        }
        let ps = divisors(a0);
        let qs = divisors(an);
        let mut seen = std::collections::BTreeSet::new();
        for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let r = Rational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                    if seen.insert(r.clone()) && self.eval(&r).is_zero() {
                        cands.push(r);
                    }
                }
            }
        }
        Some(cands)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                f.write_str(&format_rational(&mag))?;
                if k > 0 {
                    f.write_str("*")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Monic minimal polynomial: the first linear dependence among `I, A, A^2, ...`.
pub fn minimal_polynomial(a: &RatMatrix) -> Result<RatPoly, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut powers: Vec<Vec<Rational>> = vec![RatMatrix::identity(n).vectorize()];
    let mut current = RatMatrix::identity(n);
    for k in 1..=n {
        current = current.mul(a);
        let target = current.vectorize();
        // Columns are the previous powers; solve sum c_i A^i = A^k.
        let mut m = RatMatrix::zeros(n * n, powers.len());
        for (j, p) in powers.iter().enumerate() {
            for (i, v) in p.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        if let Some(c) = m.solve_linear(&target) {
            let mut coeffs: Vec<Rational> = c.into_iter().map(|x| -x).collect();
            coeffs.push(Rational::one());
            debug_assert_eq!(coeffs.len(), k + 1);
            return Ok(RatPoly::new(coeffs));
        }
        powers.push(target);
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
}

/// A matrix is derogatory when its minimal polynomial has degree below its size.
pub fn is_derogatory(a: &RatMatrix) -> Result<bool, LinalgError> {
    Ok(minimal_polynomial(a)?.degree() < a.rows())
}

/// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier recursion.
pub fn charpoly(a: &RatMatrix) -> Result<RatPoly, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&RatMatrix::scalar(n, coeffs[n - k + 1].clone()));
        let c = -a.mul(&m).trace() / rat(k as i64);
        coeffs[n - k] = c;
    }
    Ok(RatPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn jordan2(l: i64) -> RatMatrix {
        RatMatrix::from_i64(&[&[l, 1], &[0, l]])
    }

    #[test]
    fn minpoly_scalar_matrix_is_linear() {
        let p = minimal_polynomial(&RatMatrix::identity(2)).unwrap();
        assert_eq!(p, RatPoly::from_i64(&[-1, 1]));
        assert!(is_derogatory(&RatMatrix::identity(2)).unwrap());
    }

    #[test]
    fn minpoly_jordan_block() {
        let p = minimal_polynomial(&jordan2(1)).unwrap();
        assert_eq!(p, RatPoly::from_i64(&[1, -2, 1]));
        assert!(!is_derogatory(&jordan2(1)).unwrap());
    }

    #[test]
    fn minpoly_block_diag_shared_eigenvalue() {
        let a = RatMatrix::block_diag(&[RatMatrix::identity(1), jordan2(1)]);
        let p = minimal_polynomial(&a).unwrap();
        assert_eq!(p, RatPoly::from_i64(&[1, -2, 1]));
        assert!(is_derogatory(&a).unwrap());
        assert!(p.eval_matrix(&a).is_zero());
    }

    #[test]
    fn charpoly_matches_known() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 3]]);
        assert_eq!(charpoly(&a).unwrap(), RatPoly::from_i64(&[5, -5, 1]));
        let d = RatMatrix::diagonal(&[rat(1), rat(2), rat(3)]);
        assert_eq!(charpoly(&d).unwrap(), RatPoly::from_i64(&[-6, 11, -6, 1]));
    }

    #[test]
    fn non_square_rejected() {
        assert!(minimal_polynomial(&RatMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn split_real_and_complex_roots() {
        // (x - 1)^2 (x^2 + 1)
        let p = RatPoly::from_i64(&[1, -2, 1]).mul(&RatPoly::from_i64(&[1, 0, 1]));
        let roots = p.split_rational().unwrap();
        assert_eq!(
            roots,
            vec![
                RationalRoot::Real { value: rat(1), multiplicity: 2 },
                RationalRoot::ComplexPair { re: rat(0), im: rat(1), multiplicity: 1 },
            ]
        );
        // (x - 1/2)(x + 3)
        let q = RatPoly::new(vec![ratio(-3, 2), ratio(5, 2), rat(1)]);
        let r = q.split_rational().unwrap();
        assert_eq!(r.len(), 2);
        // x^2 - 2 has irrational roots
        assert!(RatPoly::from_i64(&[-2, 0, 1]).split_rational().is_none());
        // x^2 + 2 has irrational imaginary part
        assert!(RatPoly::from_i64(&[2, 0, 1]).split_rational().is_none());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(RatPoly::from_i64(&[1, -2, 1]).to_string(), "x^2 - 2*x + 1");
        assert_eq!(RatPoly::from_i64(&[-1, 1]).to_string(), "x - 1");
    }
}
