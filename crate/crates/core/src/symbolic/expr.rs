use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, half, rat, to_f64, Rational};

use super::{coordinate_names, Var};

/// Trigonometric factor `1`, `sin(s w)` or `cos(s w)` with `s > 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    One,
    Sin(Rational),
    Cos(Rational),
}

/// Monomial `t^t * w^w * prod (x^i)^{x_i} * exp(rho w) * trig`.
///
/// `x` never carries trailing zero exponents, so structural equality is
/// equality of atoms. The derived order is lexicographic in field order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub t: u32,
    pub w: u32,
    pub x: Vec<u32>,
    pub rho: Rational,
    pub trig: Trig,
}

impl Atom {
    pub fn unit() -> Atom {
        Atom {
            t: 0,
            w: 0,
            x: Vec::new(),
            rho: Rational::zero(),
            trig: Trig::One,
        }
    }

    pub fn is_unit(&self) -> bool {
        *self == Atom::unit()
    }

    pub fn x_power(&self, i: usize) -> u32 {
        self.x.get(i).copied().unwrap_or(0)
    }

    fn set_x_power(&mut self, i: usize, p: u32) {
        if self.x.len() <= i {
            self.x.resize(i + 1, 0);
        }
        self.x[i] = p;
        while self.x.last() == Some(&0) {
            self.x.pop();
        }
    }

    /// True when the atom depends on nothing but `w`.
    pub fn only_w(&self) -> bool {
        self.t == 0 && self.x.is_empty()
    }

    fn power_of(&self, var: Var) -> u32 {
        match var {
            Var::T => self.t,
            Var::W => self.w,
            Var::X(i) => self.x_power(i),
        }
    }

    fn with_power(&self, var: Var, p: u32) -> Atom {
        let mut a = self.clone();
        match var {
            Var::T => a.t = p,
            Var::W => a.w = p,
            Var::X(i) => a.set_x_power(i, p),
        }
        a
    }

    /// Human readable factors, empty for the unit atom.
    fn factors(&self, names: &[String]) -> Vec<String> {
        let mut out = Vec::new();
        let pow = |name: &str, p: u32| if p == 1 { name.to_string() } else { format!("{name}^{p}") };
        if self.t > 0 {
            out.push(pow("t", self.t));
        }
        for (i, &p) in self.x.iter().enumerate() {
            if p > 0 {
                out.push(pow(&names[i + 1], p));
            }
        }
        if self.w > 0 {
            out.push(pow("w", self.w));
        }
        if !self.rho.is_zero() {
            out.push(format!("exp({})", rate_times_w(&self.rho)));
        }
        match &self.trig {
            Trig::One => {}
            Trig::Sin(s) => out.push(format!("sin({})", rate_times_w(s))),
            Trig::Cos(s) => out.push(format!("cos({})", rate_times_w(s))),
        }
        out
    }
}

fn rate_times_w(r: &Rational) -> String {
    if r.is_one() {
        "w".into()
    } else if *r == -Rational::one() {
        "-w".into()
    } else {
        format!("{}*w", format_rational(r))
    }
}

/// Exact linear combination of [`Atom`]s with rational coefficients.
///
/// Distinct atoms are linearly independent functions, so an expression is
/// the zero function exactly when it has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct ScalarExpr {
    terms: BTreeMap<Atom, Rational>,
}

impl ScalarExpr {
    pub fn zero() -> ScalarExpr {
        ScalarExpr::default()
    }

    pub fn constant(c: Rational) -> ScalarExpr {
        ScalarExpr::term(c, Atom::unit())
    }

    pub fn one() -> ScalarExpr {
        ScalarExpr::constant(rat(1))
    }

    pub fn term(c: Rational, atom: Atom) -> ScalarExpr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(atom, c);
        }
        ScalarExpr { terms }
    }

    pub fn var(v: Var) -> ScalarExpr {
        ScalarExpr::term(rat(1), Atom::unit().with_power(v, 1))
    }

    pub fn t() -> ScalarExpr {
        ScalarExpr::var(Var::T)
    }

    pub fn w() -> ScalarExpr {
        ScalarExpr::var(Var::W)
    }

    pub fn x(i: usize) -> ScalarExpr {
        ScalarExpr::var(Var::X(i))
    }

    /// `exp(rho w)`.
    pub fn exp_w(rho: Rational) -> ScalarExpr {
        let mut a = Atom::unit();
        a.rho = rho;
        ScalarExpr::term(rat(1), a)
    }

    /// `sin(sigma w)`.
    pub fn sin_w(sigma: Rational) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (c, trig) in normalize_sin(sigma) {
            out.add_term(c, Atom { trig, ..Atom::unit() });
        }
        out
    }

    /// `cos(sigma w)`.
    pub fn cos_w(sigma: Rational) -> ScalarExpr {
        let (c, trig) = normalize_cos(sigma);
        ScalarExpr::term(c, Atom { trig, ..Atom::unit() })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value when the expression has no variable dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (a, c) = self.terms.iter().next().unwrap();
                a.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some(r)` when the expression equals `r w` (including `r = 0`).
    pub fn as_multiple_of_w(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (a, c) = self.terms.iter().next().unwrap();
                (*a == Atom::unit().with_power(Var::W, 1)).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest `x` index appearing plus one.
    pub fn x_extent(&self) -> usize {
        self.terms.keys().map(|a| a.x.len()).max().unwrap_or(0)
    }

    fn add_term(&mut self, c: Rational, atom: Atom) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(atom);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &ScalarExpr) {
        for (a, c) in &other.terms {
            self.add_term(c.clone(), a.clone());
        }
    }

    pub fn sub(&self, other: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(-c.clone(), a.clone());
        }
        out
    }

    pub fn neg(&self) -> ScalarExpr {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> ScalarExpr {
        if s.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let coef = c * d;
                for (k, atom) in mul_atoms(a, b) {
                    out.add_term(&coef * k, atom);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ScalarExpr {
        let mut out = ScalarExpr::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn differentiate(&self, var: Var) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (a, c) in &self.terms {
            let p = a.power_of(var);
            if p > 0 {
                out.add_term(c * rat(p as i64), a.with_power(var, p - 1));
            }
            if var == Var::W {
                if !a.rho.is_zero() {
                    out.add_term(c * &a.rho, a.clone());
                }
                match &a.trig {
                    Trig::One => {}
                    Trig::Sin(s) => out.add_term(c * s, Atom { trig: Trig::Cos(s.clone()), ..a.clone() }),
                    Trig::Cos(s) => out.add_term(-(c * s), Atom { trig: Trig::Sin(s.clone()), ..a.clone() }),
                }
            }
        }
        out
    }

    /// Exact value at `w = 0` of an expression in `w` alone.
    pub fn value_at_w_zero(&self) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (a, c) in &self.terms {
            if !a.only_w() {
                return None;
            }
            if a.w == 0 && !matches!(a.trig, Trig::Sin(_)) {
                acc += c;
            }
        }
        Some(acc)
    }

    /// Evaluates with `vars = [t, x^1, ..., x^n, w]` in any [`Real`] type.
    pub fn eval_with<T: Real>(&self, vars: &[T]) -> T {
        let n = vars.len() - 2;
        let t = &vars[0];
        let w = &vars[n + 1];
        let mut acc = t.lift(0.0);
        for (a, c) in &self.terms {
            let mut f = t.lift(to_f64(c));
            if a.t > 0 {
                f = f.mul(&t.powi(a.t));
            }
            for (i, &p) in a.x.iter().enumerate() {
                if p > 0 {
                    assert!(i < n, "expression uses x^{} but only {n} coordinates supplied", i + 1);
                    f = f.mul(&vars[i + 1].powi(p));
                }
            }
            if a.w > 0 {
                f = f.mul(&w.powi(a.w));
            }
            if !a.rho.is_zero() {
                f = f.mul(&w.scale(to_f64(&a.rho)).exp());
            }
            match &a.trig {
                Trig::One => {}
                Trig::Sin(s) => f = f.mul(&w.scale(to_f64(s)).sin()),
                Trig::Cos(s) => f = f.mul(&w.scale(to_f64(s)).cos()),
            }
            acc = acc.add(&f);
        }
        acc
    }

    pub fn eval(&self, vars: &[f64]) -> f64 {
        self.eval_with(vars)
    }

    /// Text form using the coordinate names for `n` spatial `x` variables.
    pub fn to_text(&self, n: usize) -> String {
        let names = coordinate_names(n.max(self.x_extent()));
        let pieces: Vec<(bool, String)> = self
            .terms
            .iter()
            .map(|(a, c)| (c.is_negative(), term_text(&c.abs(), &a.factors(&names), None)))
            .collect();
        join_signed(&pieces)
    }

    /// Pieces used by vector field rendering: one `(negative, text)` per term,
    /// each multiplied by `suffix`.
    pub(crate) fn signed_pieces(&self, names: &[String], suffix: &str) -> Vec<(bool, String)> {
        self.terms
            .iter()
            .map(|(a, c)| (c.is_negative(), term_text(&c.abs(), &a.factors(names), Some(suffix))))
            .collect()
    }
}

fn term_text(mag: &Rational, factors: &[String], suffix: Option<&str>) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_one() || (factors.is_empty() && suffix.is_none()) {
        parts.push(format_rational(mag));
    }
    parts.extend(factors.iter().cloned());
    if let Some(s) = suffix {
        parts.push(s.to_string());
    }
    parts.join("*")
}

pub(crate) fn join_signed(pieces: &[(bool, String)]) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (neg, p)) in pieces.iter().enumerate() {
        match (k, neg) {
            (0, false) => s.push_str(p),
            (0, true) => {
                s.push('-');
                s.push_str(p);
            }
            (_, false) => {
                s.push_str(" + ");
                s.push_str(p);
            }
            (_, true) => {
                s.push_str(" - ");
                s.push_str(p);
            }
        }
    }
    s
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(0))
    }
}

fn normalize_sin(s: Rational) -> Vec<(Rational, Trig)> {
    if s.is_zero() {
        Vec::new()
    } else if s.is_negative() {
        vec![(-Rational::one(), Trig::Sin(-s))]
    } else {
        vec![(Rational::one(), Trig::Sin(s))]
    }
}

fn normalize_cos(s: Rational) -> (Rational, Trig) {
    if s.is_zero() {
        (Rational::one(), Trig::One)
    } else {
        (Rational::one(), Trig::Cos(s.abs()))
    }
}

/// Product of two trig factors as a signed sum of trig factors.
fn mul_trig(a: &Trig, b: &Trig) -> Vec<(Rational, Trig)> {
    let h = half();
    let scaled = |k: &Rational, v: Vec<(Rational, Trig)>| v.into_iter().map(|(c, t)| (c * k, t)).collect::<Vec<_>>();
    let cos = |s: Rational| vec![normalize_cos(s)];
    match (a, b) {
        (Trig::One, t) | (t, Trig::One) => vec![(Rational::one(), t.clone())],
        (Trig::Sin(x), Trig::Sin(y)) => {
            let mut v = scaled(&h, cos(x - y));
            v.extend(scaled(&-h.clone(), cos(x + y)));
            v
        }
        (Trig::Cos(x), Trig::Cos(y)) => {
            let mut v = scaled(&h, cos(x - y));
            v.extend(scaled(&h, cos(x + y)));
            v
        }
        (Trig::Sin(x), Trig::Cos(y)) | (Trig::Cos(y), Trig::Sin(x)) => {
            let mut v = scaled(&h, normalize_sin(x + y));
            v.extend(scaled(&h, normalize_sin(x - y)));
            v
        }
    }
}

fn mul_atoms(a: &Atom, b: &Atom) -> Vec<(Rational, Atom)> {
    let len = a.x.len().max(b.x.len());
    let mut x: Vec<u32> = (0..len).map(|i| a.x_power(i) + b.x_power(i)).collect();
    while x.last() == Some(&0) {
        x.pop();
    }
    let base = Atom {
        t: a.t + b.t,
        w: a.w + b.w,
        x,
        rho: &a.rho + &b.rho,
        trig: Trig::One,
    };
    mul_trig(&a.trig, &b.trig)
        .into_iter()
        .map(|(c, trig)| (c, Atom { trig, ..base.clone() }))
        .collect()
}

/// Minimal real-number interface for evaluating expressions generically.
pub trait Real: Clone {
    /// A constant of the same shape as `self`.
    fn lift(&self, c: f64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: f64) -> Self;
    fn powi(&self, k: u32) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
}

impl Real for f64 {
    fn lift(&self, c: f64) -> f64 {
        c
    }
    fn add(&self, other: &f64) -> f64 {
        self + other
    }
    fn mul(&self, other: &f64) -> f64 {
        self * other
    }
    fn scale(&self, c: f64) -> f64 {
        self * c
    }
    fn powi(&self, k: u32) -> f64 {
        f64::powi(*self, k as i32)
    }
    fn exp(&self) -> f64 {
        f64::exp(*self)
    }
    fn sin(&self) -> f64 {
        f64::sin(*self)
    }
    fn cos(&self) -> f64 {
        f64::cos(*self)
    }
}

/// Second-order hyper-dual number: value, gradient and Hessian with respect
/// to `m` seed variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: Vec<f64>,
    /// Row-major `m x m`.
    pub hess: Vec<f64>,
}

impl Jet2 {
    pub fn constant(m: usize, c: f64) -> Jet2 {
        Jet2 {
            value: c,
            grad: vec![0.0; m],
            hess: vec![0.0; m * m],
        }
    }

    /// The `idx`-th coordinate function evaluated at `value`.
    pub fn variable(m: usize, idx: usize, value: f64) -> Jet2 {
        let mut j = Jet2::constant(m, value);
        j.grad[idx] = 1.0;
        j
    }

    /// Seeds all coordinates of a point.
    pub fn seed(point: &[f64]) -> Vec<Jet2> {
        let m = point.len();
        point.iter().enumerate().map(|(i, &v)| Jet2::variable(m, i, v)).collect()
    }

    pub fn m(&self) -> usize {
        self.grad.len()
    }

    pub fn second(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.m() + j]
    }

    /// `f(self)` given `f`, `f'`, `f''` at the value.
    fn compose(&self, f: f64, df: f64, ddf: f64) -> Jet2 {
        let m = self.m();
        let grad = self.grad.iter().map(|g| df * g).collect();
        let mut hess = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                hess[i * m + j] = df * self.hess[i * m + j] + ddf * self.grad[i] * self.grad[j];
            }
        }
        Jet2 { value: f, grad, hess }
    }
}

impl Real for Jet2 {
    fn lift(&self, c: f64) -> Jet2 {
        Jet2::constant(self.m(), c)
    }

    fn add(&self, other: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value + other.value,
            grad: self.grad.iter().zip(&other.grad).map(|(a, b)| a + b).collect(),
            hess: self.hess.iter().zip(&other.hess).map(|(a, b)| a + b).collect(),
        }
    }

    fn mul(&self, other: &Jet2) -> Jet2 {
        let m = self.m();
        let (a, b) = (self.value, other.value);
        let grad = (0..m).map(|i| a * other.grad[i] + b * self.grad[i]).collect();
        let mut hess = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let k = i * m + j;
                hess[k] = a * other.hess[k]
                    + b * self.hess[k]
                    + self.grad[i] * other.grad[j]
                    + self.grad[j] * other.grad[i];
            }
        }
        Jet2 { value: a * b, grad, hess }
    }

    fn scale(&self, c: f64) -> Jet2 {
        Jet2 {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }

    fn powi(&self, k: u32) -> Jet2 {
        let v = self.value;
        let k_f = k as f64;
        match k {
            0 => self.lift(1.0),
            1 => self.clone(),
            _ => self.compose(v.powi(k as i32), k_f * v.powi(k as i32 - 1), k_f * (k_f - 1.0) * v.powi(k as i32 - 2)),
        }
    }

    fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn derivative_examples() {
        let e2w = ScalarExpr::exp_w(rat(2));
        assert_eq!(e2w.differentiate(Var::W), e2w.scale(&rat(2)));

        let wsin = ScalarExpr::w().mul(&ScalarExpr::sin_w(rat(1)));
        let want = ScalarExpr::sin_w(rat(1)).add(&ScalarExpr::w().mul(&ScalarExpr::cos_w(rat(1))));
        assert_eq!(wsin.differentiate(Var::W), want);

        let t2x = ScalarExpr::t().pow(2).mul(&ScalarExpr::x(0));
        assert_eq!(t2x.differentiate(Var::T), ScalarExpr::t().mul(&ScalarExpr::x(0)).scale(&rat(2)));
        assert!(t2x.differentiate(Var::X(1)).is_zero());
    }

    #[test]
    fn trig_products_reduce() {
        let s = ScalarExpr::sin_w(rat(1));
        let c = ScalarExpr::cos_w(rat(1));
        // sin^2 + cos^2 = 1
        assert_eq!(s.mul(&s).add(&c.mul(&c)), ScalarExpr::one());
        // 2 sin cos = sin 2w
        assert_eq!(s.mul(&c).scale(&rat(2)), ScalarExpr::sin_w(rat(2)));
        assert_eq!(ScalarExpr::sin_w(rat(-3)), ScalarExpr::sin_w(rat(3)).neg());
        assert_eq!(ScalarExpr::cos_w(rat(-3)), ScalarExpr::cos_w(rat(3)));
        assert!(ScalarExpr::sin_w(rat(0)).is_zero());
        assert_eq!(ScalarExpr::cos_w(rat(0)), ScalarExpr::one());
    }

    #[test]
    fn exponentials_combine() {
        let a = ScalarExpr::exp_w(rat(1)).mul(&ScalarExpr::exp_w(rat(-1)));
        assert_eq!(a, ScalarExpr::one());
    }

    #[test]
    fn canonical_cancellation() {
        let x = ScalarExpr::x(2);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.terms().next().unwrap().0.x, vec![0, 0, 1]);
        assert!(x.differentiate(Var::X(2)).differentiate(Var::X(2)).is_zero());
    }

    #[test]
    fn text_form() {
        let e = ScalarExpr::x(0)
            .mul(&ScalarExpr::exp_w(rat(1)))
            .sub(&ScalarExpr::t().pow(2).scale(&ratio(1, 2)))
            .add(&ScalarExpr::cos_w(ratio(3, 2)));
        assert_eq!(e.to_text(3), "cos(3/2*w) + x*exp(w) - 1/2*t^2");
        assert_eq!(ScalarExpr::zero().to_text(2), "0");
        assert_eq!(ScalarExpr::exp_w(rat(-1)).to_text(1), "exp(-w)");
        assert_eq!(ScalarExpr::x(3).to_text(4), "x4");
    }

    #[test]
    fn value_at_zero() {
        let e = ScalarExpr::cos_w(rat(2))
            .add(&ScalarExpr::sin_w(rat(1)))
            .add(&ScalarExpr::w().mul(&ScalarExpr::exp_w(rat(3))))
            .add(&ScalarExpr::exp_w(rat(5)).scale(&rat(4)));
        assert_eq!(e.value_at_w_zero(), Some(rat(5)));
        assert_eq!(ScalarExpr::t().value_at_w_zero(), None);
    }

    #[test]
    fn float_evaluation() {
        let e = ScalarExpr::x(0).mul(&ScalarExpr::exp_w(rat(1))).add(&ScalarExpr::t().pow(3));
        let v = e.eval(&[2.0, 3.0, 0.5]);
        assert!((v - (3.0 * 0.5f64.exp() + 8.0)).abs() < 1e-14);
    }

    #[test]
    fn jet_matches_symbolic_derivatives() {
        let e = ScalarExpr::x(0)
            .pow(2)
            .mul(&ScalarExpr::sin_w(rat(2)))
            .add(&ScalarExpr::t().mul(&ScalarExpr::w()).mul(&ScalarExpr::exp_w(ratio(-1, 2))))
            .add(&ScalarExpr::cos_w(rat(1)).mul(&ScalarExpr::x(0)));
        let p = [0.3, -1.1, 0.7];
        let j = e.eval_with(&Jet2::seed(&p));
        let vars = [Var::T, Var::X(0), Var::W];
        assert!((j.value - e.eval(&p)).abs() < 1e-13);
        for (a, va) in vars.iter().enumerate() {
            let da = e.differentiate(*va);
            assert!((j.grad[a] - da.eval(&p)).abs() < 1e-12);
            for (b, vb) in vars.iter().enumerate() {
                let dab = da.differentiate(*vb);
                assert!((j.second(a, b) - dab.eval(&p)).abs() < 1e-12, "({a},{b})");
            }
        }
    }
}
