//! Geodesic systems `x'' = (A x') w'`, `w'' = 0` and the determining equations
//! for their Lie point symmetries.
//!
//! Two independent routes produce the same residuals:
//! * [`determining_residuals`] evaluates the fifteen families of linear
//!   conditions on second derivatives of `(xi, eta^i, eta^w)`;
//! * [`prolong`] / [`spray_residuals`] compute `[X~, Gamma] - lambda Gamma`
//!   directly as polynomials in the velocities.
//!
//! The condition formulas are generic over [`Coeff`], so the same code also
//! runs on floating hyper-dual jets for [`numeric_residual`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{LinalgError, RatMatrix};
use crate::rational::{half, rat, to_f64, Rational};
use crate::symbolic::{coordinate_names, Jet2, ScalarExpr, Var, VectorField};

/// The geodesic equations of the canonical connection for a codimension-one
/// algebra with matrix `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicSystem {
    a: RatMatrix,
}

impl GeodesicSystem {
    pub fn new(a: RatMatrix) -> Result<GeodesicSystem, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        Ok(GeodesicSystem { a })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.a
    }

    /// `Gamma^i_{jk}` with spatial indices `0..n` for `x` and `n` for `w`.
    pub fn connection(&self, i: usize, j: usize, k: usize) -> Rational {
        let n = self.n();
        if i == n {
            return Rational::zero();
        }
        let minus_half = -half();
        match (j == n, k == n) {
            (false, true) => &self.a[(i, j)] * &minus_half,
            (true, false) => &self.a[(i, k)] * &minus_half,
            _ => Rational::zero(),
        }
    }

    /// `f^a = -Gamma^a_{jk} v^j v^k` for `v = (u, q)`.
    pub fn acceleration(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.n();
        (0..=n)
            .map(|a| {
                let mut acc = Rational::zero();
                for j in 0..=n {
                    for k in 0..=n {
                        let g = self.connection(a, j, k);
                        if !g.is_zero() {
                            acc -= g * &v[j] * &v[k];
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

/// Coefficient ring for the determining conditions: anything closed under
/// addition and rational scaling.
pub trait Coeff: Clone {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, r: &Rational) -> Self;
}

impl Coeff for ScalarExpr {
    fn zero_like(&self) -> Self {
        ScalarExpr::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}

impl Coeff for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, r: &Rational) -> Self {
        self * to_f64(r)
    }
}

/// First and second derivatives of every component of a vector field, in
/// coordinate order `[t, x^1..x^n, w]`.
#[derive(Debug, Clone)]
pub struct FieldJet<C> {
    n: usize,
    d1: Vec<Vec<C>>,
    d2: Vec<Vec<C>>,
}

impl<C: Coeff> FieldJet<C> {
    fn m(&self) -> usize {
        self.n + 2
    }

    fn d(&self, comp: usize, a: usize) -> &C {
        &self.d1[comp][a]
    }

    fn dd(&self, comp: usize, a: usize, b: usize) -> &C {
        &self.d2[comp][a * self.m() + b]
    }
}

impl FieldJet<ScalarExpr> {
    pub fn symbolic(x: &VectorField) -> FieldJet<ScalarExpr> {
        let n = x.n();
        let m = n + 2;
        let vars: Vec<Var> = (0..m).map(|k| Var::from_index(k, n)).collect();
        let mut d1 = Vec::with_capacity(m);
        let mut d2 = Vec::with_capacity(m);
        for c in x.components() {
            let first: Vec<ScalarExpr> = vars.iter().map(|v| c.differentiate(*v)).collect();
            let mut second = Vec::with_capacity(m * m);
            for f in &first {
                second.extend(vars.iter().map(|v| f.differentiate(*v)));
            }
            d1.push(first);
            d2.push(second);
        }
        FieldJet { n, d1, d2 }
    }
}

impl FieldJet<f64> {
    pub fn from_jets(n: usize, jets: &[Jet2]) -> FieldJet<f64> {
        assert_eq!(jets.len(), n + 2, "one jet per component");
        FieldJet {
            n,
            d1: jets.iter().map(|j| j.grad.clone()).collect(),
            d2: jets.iter().map(|j| j.hess.clone()).collect(),
        }
    }
}

/// Which determining condition a residual belongs to. Indices are 0-based;
/// `j`, `k`, `m` run over the `x` directions and `i` over equations `x''^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionLabel {
    I { j: usize, k: usize },
    II { k: usize },
    III,
    IV,
    V { k: usize },
    VI { k: usize, m: usize },
    VII { k: usize },
    VIII,
    IX,
    X { i: usize },
    XI { i: usize },
    XII { i: usize },
    XIII { i: usize, k: usize },
    XIV { i: usize, k: usize, m: usize },
    XV { i: usize, k: usize },
}

impl fmt::Display for ConditionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConditionLabel::*;
        match *self {
            I { j, k } => write!(f, "(i)_{{{},{}}}", j + 1, k + 1),
            II { k } => write!(f, "(ii)_{}", k + 1),
            III => write!(f, "(iii)"),
            IV => write!(f, "(iv)"),
            V { k } => write!(f, "(v)_{}", k + 1),
            VI { k, m } => write!(f, "(vi)_{{{},{}}}", k + 1, m + 1),
            VII { k } => write!(f, "(vii)_{}", k + 1),
            VIII => write!(f, "(viii)"),
            IX => write!(f, "(ix)"),
            X { i } => write!(f, "(x)^{}", i + 1),
            XI { i } => write!(f, "(xi)^{}", i + 1),
            XII { i } => write!(f, "(xii)^{}", i + 1),
            XIII { i, k } => write!(f, "(xiii)^{}_{}", i + 1, k + 1),
            XIV { i, k, m } => write!(f, "(xiv)^{}_{{{},{}}}", i + 1, k + 1, m + 1),
            XV { i, k } => write!(f, "(xv)^{}_{}", i + 1, k + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition<C> {
    pub label: ConditionLabel,
    pub value: C,
}

/// `sum r_k c_k`, skipping zero weights.
fn lc<C: Coeff>(zero: &C, terms: &[(Rational, &C)]) -> C {
    let mut acc = zero.zero_like();
    for (r, c) in terms {
        if !r.is_zero() {
            acc = acc.plus(&c.times(r));
        }
    }
    acc
}

/// Evaluates every determining condition on a field jet. A field is a
/// symmetry exactly when every returned value vanishes.
pub fn conditions<C: Coeff>(jet: &FieldJet<C>, a: &RatMatrix) -> Vec<Condition<C>> {
    use ConditionLabel::*;
    let n = jet.n;
    assert_eq!(a.rows(), n, "matrix size must match the field");
    let (t, w) = (0usize, n + 1);
    let x = |k: usize| 1 + k;
    let (xi, ew) = (0usize, n + 1);
    let eta = |i: usize| 1 + i;
    let zero = jet.d(0, 0).zero_like();
    let one = rat(1);
    let h = half();
    let mh = -half();
    let delta = |i: usize, k: usize| if i == k { rat(1) } else { rat(0) };

    let mut out = Vec::new();
    let mut push = |label, value| out.push(Condition { label, value });

    for j in 0..n {
        for k in j..n {
            push(I { j, k }, jet.dd(xi, x(j), x(k)).clone());
        }
    }
    for k in 0..n {
        let mut terms = vec![(one.clone(), jet.dd(xi, x(k), w))];
        terms.extend((0..n).map(|j| (&a[(j, k)] * &h, jet.d(xi, x(j)))));
        push(II { k }, lc(&zero, &terms));
    }
    push(III, jet.dd(xi, w, w).clone());
    push(IV, jet.dd(ew, t, t).clone());
    for k in 0..n {
        push(V { k }, jet.dd(ew, t, x(k)).clone());
    }
    for k in 0..n {
        for m in k..n {
            push(VI { k, m }, jet.dd(ew, x(k), x(m)).clone());
        }
    }
    for k in 0..n {
        let mut terms = vec![(one.clone(), jet.dd(ew, x(k), w)), (-one.clone(), jet.dd(xi, t, x(k)))];
        terms.extend((0..n).map(|j| (&a[(j, k)] * &h, jet.d(ew, x(j)))));
        push(VII { k }, lc(&zero, &terms));
    }
    push(VIII, lc(&zero, &[(one.clone(), jet.dd(ew, w, w)), (rat(-2), jet.dd(xi, t, w))]));
    push(IX, lc(&zero, &[(rat(2), jet.dd(ew, t, w)), (-one.clone(), jet.dd(xi, t, t))]));
    for i in 0..n {
        push(X { i }, jet.dd(eta(i), t, t).clone());
    }
    for i in 0..n {
        let mut terms = vec![(one.clone(), jet.dd(eta(i), t, w))];
        terms.extend((0..n).map(|k| (&a[(i, k)] * &mh, jet.d(eta(k), t))));
        push(XI { i }, lc(&zero, &terms));
    }
    for i in 0..n {
        let mut terms = vec![(one.clone(), jet.dd(eta(i), w, w))];
        terms.extend((0..n).map(|j| (-a[(i, j)].clone(), jet.d(eta(j), w))));
        push(XII { i }, lc(&zero, &terms));
    }
    for i in 0..n {
        for k in 0..n {
            let terms = [
                (rat(2), jet.dd(eta(i), t, x(k))),
                (-delta(i, k), jet.dd(xi, t, t)),
                (-a[(i, k)].clone(), jet.d(ew, t)),
            ];
            push(XIII { i, k }, lc(&zero, &terms));
        }
    }
    for i in 0..n {
        for k in 0..n {
            for m in k..n {
                let terms = [
                    (one.clone(), jet.dd(eta(i), x(k), x(m))),
                    (&a[(i, m)] * &mh, jet.d(ew, x(k))),
                    (&a[(i, k)] * &mh, jet.d(ew, x(m))),
                    (-delta(i, k), jet.dd(xi, t, x(m))),
                    (-delta(i, m), jet.dd(xi, t, x(k))),
                ];
                push(XIV { i, k, m }, lc(&zero, &terms));
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            let mut terms = vec![
                (one.clone(), jet.dd(eta(i), x(k), w)),
                (&a[(i, k)] * &mh, jet.d(ew, w)),
                (-delta(i, k), jet.dd(xi, t, w)),
            ];
            terms.extend((0..n).map(|j| (&a[(i, j)] * &mh, jet.d(eta(j), x(k)))));
            terms.extend((0..n).map(|j| (&a[(j, k)] * &h, jet.d(eta(i), x(j)))));
            push(XV { i, k }, lc(&zero, &terms));
        }
    }
    out
}

/// All determining residuals of `x` on `sys`, computed symbolically.
pub fn determining_residuals(x: &VectorField, sys: &GeodesicSystem) -> Vec<Condition<ScalarExpr>> {
    conditions(&FieldJet::symbolic(x), sys.matrix())
}

/// Polynomial in the velocities `v = (u^1..u^n, q)` with expression
/// coefficients. Keys are exponent vectors of length `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JetPoly {
    nv: usize,
    terms: BTreeMap<Vec<u32>, ScalarExpr>,
}

impl JetPoly {
    pub fn zero(n: usize) -> JetPoly {
        JetPoly {
            nv: n + 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: ScalarExpr) -> JetPoly {
        let mut p = JetPoly::zero(n);
        p.add_term(vec![0; n + 1], c);
        p
    }

    /// The velocity `v^b` (`b = n` is `q`).
    pub fn velocity(n: usize, b: usize) -> JetPoly {
        let mut e = vec![0; n + 1];
        e[b] = 1;
        let mut p = JetPoly::zero(n);
        p.add_term(e, ScalarExpr::one());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        slot.add_assign(&c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &JetPoly) -> JetPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> JetPoly {
        self.map(|c| c.neg())
    }

    fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> JetPoly {
        let mut out = JetPoly { nv: self.nv, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn mul(&self, other: &JetPoly) -> JetPoly {
        let mut out = JetPoly { nv: self.nv, terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> JetPoly {
        self.map(|c| c.scale(r))
    }

    /// Partial derivative in a position coordinate.
    pub fn diff_coord(&self, v: Var) -> JetPoly {
        self.map(|c| c.differentiate(v))
    }

    /// Partial derivative in the velocity `v^b`.
    pub fn diff_velocity(&self, b: usize) -> JetPoly {
        let mut out = JetPoly { nv: self.nv, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[b] > 0 {
                let mut e2 = e.clone();
                e2[b] -= 1;
                out.add_term(e2, c.scale(&rat(e[b] as i64)));
            }
        }
        out
    }

    /// Total derivative `d/dt + v^b d/dy^b` (positions only).
    pub fn total_derivative(&self) -> JetPoly {
        let n = self.nv - 1;
        let mut out = self.diff_coord(Var::T);
        for b in 0..=n {
            let y = Var::from_index(b + 1, n);
            out = out.add(&JetPoly::velocity(n, b).mul(&self.diff_coord(y)));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let n = self.nv - 1;
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = coordinate_names(n);
        let vel: Vec<String> = names[1..].iter().map(|s| format!("d{s}")).collect();
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(b, p)| if *p == 1 { vel[b].clone() } else { format!("{}^{p}", vel[b]) })
                .collect();
            let coef = c.to_text(n);
            parts.push(match (mono.is_empty(), c.term_count() > 1) {
                (true, _) => coef,
                (false, true) => format!("({coef})*{}", mono.join("*")),
                (false, false) if coef == "1" => mono.join("*"),
                (false, false) if coef == "-1" => format!("-{}", mono.join("*")),
                (false, false) => format!("{coef}*{}", mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// First prolongation of a point field along the geodesic spray.
#[derive(Debug, Clone, PartialEq)]
pub struct Prolongation {
    /// `P^b = D eta^b - v^b D xi` for `b` over `x^1..x^n, w`.
    pub p: Vec<JetPoly>,
    /// `lambda = -D xi` in `[X~, Gamma] = lambda Gamma`.
    pub lambda: JetPoly,
}

pub fn prolong(x: &VectorField, sys: &GeodesicSystem) -> Prolongation {
    let n = sys.n();
    assert_eq!(x.n(), n, "field and system dimensions differ");
    let dxi = JetPoly::constant(n, x.xi().clone()).total_derivative();
    let p = (0..=n)
        .map(|b| {
            let comp = x.component(b + 1).clone();
            JetPoly::constant(n, comp)
                .total_derivative()
                .sub(&JetPoly::velocity(n, b).mul(&dxi))
        })
        .collect();
    Prolongation { p, lambda: dxi.neg() }
}

/// `f^b` of the spray as velocity polynomials.
fn spray_force(sys: &GeodesicSystem) -> Vec<JetPoly> {
    let n = sys.n();
    let a = sys.matrix();
    let q = JetPoly::velocity(n, n);
    let mut f: Vec<JetPoly> = (0..n)
        .map(|i| {
            let mut acc = JetPoly::zero(n);
            for k in 0..n {
                if !a[(i, k)].is_zero() {
                    acc = acc.add(&JetPoly::velocity(n, k).scale(&a[(i, k)]));
                }
            }
            acc.mul(&q)
        })
        .collect();
    f.push(JetPoly::zero(n));
    f
}

/// Velocity components of `[X~, Gamma] - lambda Gamma`; the other components
/// vanish by construction of `P` and `lambda`.
pub fn spray_residuals(x: &VectorField, sys: &GeodesicSystem) -> Vec<JetPoly> {
    let n = sys.n();
    let pr = prolong(x, sys);
    let f = spray_force(sys);
    (0..=n)
        .map(|alpha| {
            let mut xf = JetPoly::zero(n);
            for b in 0..=n {
                xf = xf.add(&pr.p[b].mul(&f[alpha].diff_velocity(b)));
            }
            let mut gp = pr.p[alpha].total_derivative();
            for (b, fb) in f.iter().enumerate() {
                gp = gp.add(&fb.mul(&pr.p[alpha].diff_velocity(b)));
            }
            xf.sub(&gp).sub(&pr.lambda.mul(&f[alpha]))
        })
        .collect()
}

/// Reassembles the conditions into the velocity polynomials they are the
/// coefficients of: `D P^a - f^a D xi - X~(f^a)` on solutions, for `a` over
/// `x^1..x^n, w`. This equals the negative of [`spray_residuals`].
pub fn assemble_residuals(n: usize, conds: &[Condition<ScalarExpr>]) -> Vec<JetPoly> {
    use ConditionLabel::*;
    let u = |k: usize| JetPoly::velocity(n, k);
    let q = JetPoly::velocity(n, n);
    let c = |e: &ScalarExpr| JetPoly::constant(n, e.clone());
    let sym = |j: usize, k: usize| if j == k { rat(1) } else { rat(2) };

    // -[sum m (i) u^j u^k + 2 sum (ii)_k u^k q + (iii) q^2], shared cubic part.
    let mut cubic = JetPoly::zero(n);
    let mut out = vec![JetPoly::zero(n); n + 1];
    let mut add = |idx: usize, p: JetPoly| out[idx] = out[idx].add(&p);
    for cond in conds {
        let v = &cond.value;
        match cond.label {
            I { j, k } => cubic = cubic.add(&c(v).mul(&u(j)).mul(&u(k)).scale(&sym(j, k))),
            II { k } => cubic = cubic.add(&c(v).mul(&u(k)).mul(&q).scale(&rat(2))),
            III => cubic = cubic.add(&c(v).mul(&q).mul(&q)),
            IV => add(n, c(v)),
            V { k } => add(n, c(v).mul(&u(k)).scale(&rat(2))),
            VI { k, m } => add(n, c(v).mul(&u(k)).mul(&u(m)).scale(&sym(k, m))),
            VII { k } => add(n, c(v).mul(&u(k)).mul(&q).scale(&rat(2))),
            VIII => add(n, c(v).mul(&q).mul(&q)),
            IX => add(n, c(v).mul(&q)),
            X { i } => add(i, c(v)),
            XI { i } => add(i, c(v).mul(&q).scale(&rat(2))),
            XII { i } => add(i, c(v).mul(&q).mul(&q)),
            XIII { i, k } => add(i, c(v).mul(&u(k))),
            XIV { i, k, m } => add(i, c(v).mul(&u(k)).mul(&u(m)).scale(&sym(k, m))),
            XV { i, k } => add(i, c(v).mul(&u(k)).mul(&q).scale(&rat(2))),
        }
    }
    for (idx, slot) in out.iter_mut().enumerate() {
        let vel = if idx == n { q.clone() } else { u(idx) };
        *slot = slot.sub(&vel.mul(&cubic));
    }
    out
}

/// Outcome of an exact symmetry check.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryCheck {
    pub is_symmetry: bool,
    /// `lambda = -D xi`.
    pub lambda: JetPoly,
    /// Labels of the nonzero residuals.
    pub failing: Vec<ConditionLabel>,
}

pub fn is_symmetry(x: &VectorField, sys: &GeodesicSystem) -> SymmetryCheck {
    let failing: Vec<ConditionLabel> = determining_residuals(x, sys)
        .into_iter()
        .filter(|c| !c.value.is_zero())
        .map(|c| c.label)
        .collect();
    SymmetryCheck {
        is_symmetry: failing.is_empty(),
        lambda: prolong(x, sys).lambda,
        failing,
    }
}

/// Anything whose components can be differentiated twice at a point.
pub trait JetSource {
    fn n(&self) -> usize;
    /// Hyper-dual values of `[xi, eta^1..eta^n, eta^w]` at `[t, x.., w]`.
    fn jets_at(&self, point: &[f64]) -> Vec<Jet2>;
}

impl JetSource for VectorField {
    fn n(&self) -> usize {
        VectorField::n(self)
    }
    fn jets_at(&self, point: &[f64]) -> Vec<Jet2> {
        VectorField::jets_at(self, point)
    }
}

/// Sampling settings for [`numeric_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    /// Half-width of the sampling box around the origin.
    pub radius: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            samples: 50,
            seed: 0,
            radius: 2.0,
        }
    }
}

/// Uniform sample points in `[-r, r]^dim`, deterministic in the seed.
pub fn sample_points(dim: usize, sampling: &Sampling) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let r = sampling.radius;
    (0..sampling.samples)
        .map(|_| (0..dim).map(|_| rng.gen_range(-r..=r)).collect())
        .collect()
}

/// Largest absolute determining residual over seeded sample points, with
/// derivatives taken by forward-mode automatic differentiation.
pub fn numeric_residual<F: JetSource + ?Sized>(x: &F, sys: &GeodesicSystem, sampling: &Sampling) -> f64 {
    let n = sys.n();
    assert_eq!(x.n(), n, "field and system dimensions differ");
    let mut worst = 0.0f64;
    for p in sample_points(n + 2, sampling) {
        let jet = FieldJet::from_jets(n, &x.jets_at(&p));
        for c in conditions(&jet, sys.matrix()) {
            worst = worst.max(c.value.abs());
        }
    }
    worst
}
