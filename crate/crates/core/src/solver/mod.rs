//! Closed-form Lie point symmetries of the geodesic system for nonsingular `A`.
//!
//! Every symmetry has the form described on [`StructuredField`]. The free
//! data are seven scalars and vectors plus a commutant pair `(R, h)` and an
//! anticommutant `P`; for nonsingular `A` the pair always has `h = 0` (traces
//! of `A^k [R, A] = h A^{k+1}` would force every power trace of `A` to vanish).
//! The symmetry algebra therefore has dimension
//! `4 + 2n + dim{R : [R, A] = 0} + dim{P : AP + PA = 0}`.

mod span;
mod structured;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::lie::{LieAlgebra, Subspace};
use crate::linalg::{anticommutant, commutant_pairs, is_derogatory, minimal_polynomial, OperatorNullspace, RatMatrix};
use crate::rational::{format_rational, rat, Rational};
use crate::symbolic::{derivative_names, exp_wa, ScalarExpr, VectorField};

pub use span::{ast_structure_constants, compare_spans, ClosureError, FieldSpan, SpanComparison};
pub use structured::{NumericStructured, StructuredError, StructuredField};
use structured::unit;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error(
        "matrix A is singular (det A = 0); the closed-form symmetry solution needs a nonsingular A. \
         Candidate fields can still be checked with the determining-equation verifier"
    )]
    Singular,
    #[error("parameter grid is empty")]
    EmptyGrid,
}

/// Which part of the solution family a generator comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorClass {
    /// `d/dt`
    TimeTranslate,
    /// `t d/dt`
    TimeDilate,
    /// `w d/dt`
    WTime,
    /// `d/dw`
    WTranslate,
    /// `d/dx^i`
    RightInvariant,
    /// Columns of `e^{wA}` along `d/dx`.
    LeftInvariant,
    /// `(R x) . d/dx` with `[R, A] = 0`.
    RType,
    /// `(e^{wA} P x) . d/dx` with `AP + PA = 0`.
    PType,
}

impl GeneratorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorClass::TimeTranslate => "time-translate",
            GeneratorClass::TimeDilate => "time-dilate",
            GeneratorClass::WTime => "w-time",
            GeneratorClass::WTranslate => "w-translate",
            GeneratorClass::RightInvariant => "right-invariant",
            GeneratorClass::LeftInvariant => "left-invariant",
            GeneratorClass::RType => "r-type",
            GeneratorClass::PType => "p-type",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub class: GeneratorClass,
    pub structured: StructuredField,
    /// Expression form, when `e^{wA}` is exactly representable (or not needed).
    pub field: Option<VectorField>,
}

impl Generator {
    /// Canonical text: the expression form if available, otherwise a
    /// description in terms of `exp(w*A)`.
    pub fn text(&self) -> String {
        if let Some(f) = &self.field {
            return f.to_string();
        }
        let n = self.structured.n();
        let ds = derivative_names(n)[1..=n].join(", ");
        match self.class {
            GeneratorClass::LeftInvariant => {
                let k = self.structured.tt.iter().position(|v| !v.is_zero()).unwrap_or(0);
                format!("exp(w*A)[:, {}] . ({ds})", k + 1)
            }
            _ => format!("exp(w*A)*P*x . ({ds}) with P = {}", self.structured.p),
        }
    }
}

/// Exact facts about `A` that control the symmetry count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixClass {
    pub n: usize,
    pub nonsingular: bool,
    #[serde(serialize_with = "crate::rational::serde_rational::serialize")]
    pub trace: Rational,
    pub unimodular: bool,
    pub derogatory: bool,
    pub scalar_multiple_of_identity: bool,
    pub minimal_polynomial: String,
    /// Whether `e^{wA}` has an exact expression form.
    pub rational_spectrum: bool,
}

pub fn classify_matrix(a: &RatMatrix) -> Result<MatrixClass, SolveError> {
    let n = square(a)?;
    let mu = minimal_polynomial(a).expect("square");
    let trace = a.trace();
    Ok(MatrixClass {
        n,
        nonsingular: a.is_nonsingular(),
        unimodular: trace.is_zero(),
        trace,
        derogatory: is_derogatory(a).expect("square"),
        scalar_multiple_of_identity: a.is_scalar_multiple_of_identity() && a.is_nonsingular(),
        minimal_polynomial: mu.to_string(),
        rational_spectrum: mu.split_rational().is_some(),
    })
}

fn square(a: &RatMatrix) -> Result<usize, SolveError> {
    if a.is_square() {
        Ok(a.rows())
    } else {
        Err(SolveError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// `(3n + 4, n^2 + 2n + 4)`: the range of symmetry dimensions for nonsingular
/// `A` with nonzero trace.
pub fn dimension_bounds(n: usize) -> (usize, usize) {
    (3 * n + 4, n * n + 2 * n + 4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
    /// Nonsingular with nonzero trace; the bounds are only asserted then.
    pub hypotheses_hold: bool,
    pub within: bool,
}

/// Symmetry dimension from the two operator nullspaces alone.
pub fn symmetry_dimension(a: &RatMatrix) -> Result<usize, SolveError> {
    let n = square(a)?;
    if !a.is_nonsingular() {
        return Err(SolveError::Singular);
    }
    let c = commutant_pairs(a).expect("square").dimension();
    let p = anticommutant(a).expect("square").dimension();
    Ok(4 + 2 * n + c + p)
}

#[derive(Debug, Clone)]
pub struct SymmetrySolution {
    pub n: usize,
    pub a: RatMatrix,
    pub classification: MatrixClass,
    pub commutant: OperatorNullspace,
    pub anticommutant: OperatorNullspace,
    /// Exact entries of `e^{wA}` when the spectrum allows it.
    pub exp: Option<Vec<Vec<ScalarExpr>>>,
    pub generators: Vec<Generator>,
}

pub fn solve(a: &RatMatrix) -> Result<SymmetrySolution, SolveError> {
    let n = square(a)?;
    if !a.is_nonsingular() {
        return Err(SolveError::Singular);
    }
    let classification = classify_matrix(a)?;
    let commutant = commutant_pairs(a).expect("square");
    let anti = anticommutant(a).expect("square");
    let exp = exp_wa(a);

    let mut structured: Vec<(GeneratorClass, StructuredField)> = Vec::new();
    let zero = StructuredField::zero(n);
    structured.push((GeneratorClass::TimeTranslate, StructuredField { k: rat(1), ..zero.clone() }));
    structured.push((GeneratorClass::TimeDilate, StructuredField { l: rat(1), ..zero.clone() }));
    structured.push((GeneratorClass::WTime, StructuredField { g: rat(1), ..zero.clone() }));
    structured.push((GeneratorClass::WTranslate, StructuredField { j: rat(1), ..zero.clone() }));
    for i in 0..n {
        structured.push((GeneratorClass::RightInvariant, StructuredField { s: unit(n, i), ..zero.clone() }));
    }
    for i in 0..n {
        structured.push((GeneratorClass::LeftInvariant, StructuredField { tt: unit(n, i), ..zero.clone() }));
    }
    for (r, h) in commutant.pairs() {
        structured.push((GeneratorClass::RType, StructuredField { r: r.clone(), h, ..zero.clone() }));
    }
    for p in &anti.basis {
        structured.push((GeneratorClass::PType, StructuredField { p: p.clone(), ..zero.clone() }));
    }

    let identity_exp = vec![vec![ScalarExpr::zero(); n]; n];
    let generators = structured
        .into_iter()
        .map(|(class, s)| {
            let needs_exp = !s.p.is_zero() || s.tt.iter().any(|v| !v.is_zero());
            let field = match (&exp, needs_exp) {
                (Some(e), _) => Some(s.to_vector_field(e)),
                (None, false) => Some(s.to_vector_field(&identity_exp)),
                (None, true) => None,
            };
            Generator { class, structured: s, field }
        })
        .collect();

    Ok(SymmetrySolution {
        n,
        a: a.clone(),
        classification,
        commutant,
        anticommutant: anti,
        exp,
        generators,
    })
}

impl SymmetrySolution {
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn bounds(&self) -> Bounds {
        let (lower, upper) = dimension_bounds(self.n);
        let d = self.dimension();
        Bounds {
            lower,
            upper,
            hypotheses_hold: self.classification.nonsingular && !self.classification.trace.is_zero(),
            within: (lower..=upper).contains(&d),
        }
    }

    /// Expression forms of all generators, if every one has one.
    pub fn ast_fields(&self) -> Option<Vec<VectorField>> {
        self.generators.iter().map(|g| g.field.clone()).collect()
    }

    /// Coordinates of a family member in the generator basis.
    pub fn coordinates(&self, f: &StructuredField) -> Option<Vec<Rational>> {
        let n = self.n;
        let mut v = vec![f.k.clone(), f.l.clone(), f.g.clone(), f.j.clone()];
        v.extend(f.s.iter().cloned());
        v.extend(f.tt.iter().cloned());
        if f.r.is_zero() && f.h.is_zero() {
            v.extend(std::iter::repeat_n(Rational::zero(), self.commutant.dimension()));
        } else {
            v.extend(self.commutant.coordinates(&f.r, &f.h)?);
        }
        if f.p.is_zero() {
            v.extend(std::iter::repeat_n(Rational::zero(), self.anticommutant.dimension()));
        } else {
            v.extend(self.anticommutant.coordinates(&f.p, &Rational::zero())?);
        }
        debug_assert_eq!(v.len(), 4 + 2 * n + self.commutant.dimension() + self.anticommutant.dimension());
        Some(v)
    }

    /// Structure constants from the exact bracket rules of the family;
    /// fails if any bracket leaves the generator span.
    pub fn structure_constants(&self) -> Result<LieAlgebra, ClosureError> {
        let d = self.dimension();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let not_closed = ClosureError::NotClosed { i: i + 1, j: j + 1 };
                let b = self.generators[i]
                    .structured
                    .bracket(&self.generators[j].structured, &self.a)
                    .map_err(|_| not_closed.clone())?;
                if b.is_zero() {
                    continue;
                }
                let coords = self.coordinates(&b).ok_or(not_closed)?;
                brackets.push((i, j, coords));
            }
        }
        Ok(LieAlgebra::from_brackets(d, &brackets).expect("valid table"))
    }

    /// Every generator satisfies `[R, A] = h A` and `AP + PA = 0` exactly.
    pub fn identities_hold(&self) -> bool {
        self.generators.iter().all(|g| g.structured.satisfies_identities(&self.a))
    }

    pub fn record(&self, exact: &[bool], algebra: Option<&AlgebraReport>) -> SolutionRecord {
        SolutionRecord {
            n: self.n,
            a: self.a.clone(),
            classification: self.classification.clone(),
            dimension: self.dimension(),
            dimension_formula: DimensionFormula {
                base: 4 + 2 * self.n,
                commutant: self.commutant.dimension(),
                anticommutant: self.anticommutant.dimension(),
            },
            bounds: self.bounds(),
            generators: self
                .generators
                .iter()
                .zip(exact.iter().chain(std::iter::repeat(&false)))
                .map(|(g, e)| GeneratorRecord {
                    class: g.class,
                    field: g.text(),
                    exact: *e,
                })
                .collect(),
            algebra: algebra.cloned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionFormula {
    pub base: usize,
    pub commutant: usize,
    pub anticommutant: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorRecord {
    pub class: GeneratorClass,
    pub field: String,
    pub exact: bool,
}

/// Serializable summary of a solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: RatMatrix,
    pub classification: MatrixClass,
    pub dimension: usize,
    pub dimension_formula: DimensionFormula,
    pub bounds: Bounds,
    pub generators: Vec<GeneratorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraReport>,
}

/// Radical, Levi and series data of a Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub dim: usize,
    pub radical_dim: usize,
    pub levi_dim: usize,
    pub solvable: bool,
    pub nilpotent: bool,
    pub derived_series: Vec<usize>,
    pub lower_central_series: Vec<usize>,
    pub center_dim: usize,
}

pub fn analyze_symmetry_algebra(l: &LieAlgebra) -> AlgebraReport {
    let radical = l.radical_via_killing().dim();
    let derived: Vec<usize> = l.derived_series().iter().map(Subspace::dim).collect();
    let lower: Vec<usize> = l.lower_central_series().iter().map(Subspace::dim).collect();
    AlgebraReport {
        dim: l.dim(),
        radical_dim: radical,
        levi_dim: l.dim() - radical,
        solvable: derived.last() == Some(&0),
        nilpotent: lower.last() == Some(&0),
        derived_series: derived,
        lower_central_series: lower,
        center_dim: l.center().dim(),
    }
}

/// Parameter assignment for one grid point.
pub type ParamPoint = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepPoint {
    pub params: BTreeMap<String, String>,
    pub dimension: Option<usize>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    /// Smallest dimension seen on the grid.
    pub generic_dimension: Option<usize>,
    /// Points whose dimension exceeds the generic one.
    pub special: Vec<BTreeMap<String, String>>,
}

/// Evaluates the symmetry dimension at each grid point. Singular or
/// inadmissible points are reported and skipped.
pub fn sweep<F>(grid: &[ParamPoint], build: F) -> Result<SweepReport, SolveError>
where
    F: Fn(&ParamPoint) -> Result<RatMatrix, String>,
{
    if grid.is_empty() {
        return Err(SolveError::EmptyGrid);
    }
    let mut points = Vec::with_capacity(grid.len());
    for p in grid {
        let params: BTreeMap<String, String> = p.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect();
        let (dimension, status) = match build(p) {
            Err(e) => (None, format!("skipped: {e}")),
            Ok(a) => match symmetry_dimension(&a) {
                Ok(d) => (Some(d), "ok".to_string()),
                Err(SolveError::Singular) => (None, "skipped: singular A".to_string()),
                Err(e) => (None, format!("skipped: {e}")),
            },
        };
        points.push(SweepPoint { params, dimension, status });
    }
    let generic_dimension = points.iter().filter_map(|p| p.dimension).min();
    let special = points
        .iter()
        .filter(|p| matches!((p.dimension, generic_dimension), (Some(d), Some(g)) if d > g))
        .map(|p| p.params.clone())
        .collect();
    Ok(SweepReport {
        points,
        generic_dimension,
        special,
    })
}
