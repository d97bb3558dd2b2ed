//! The five four-dimensional families with a codimension-one abelian
//! nilradical, as runnable fixtures: bracket tables, geodesic systems,
//! parameter domains, expected symmetry dimensions and the published
//! generator lists.
//!
//! The defining matrix is read off the displayed geodesic right-hand sides
//! (one linear form in the velocities `x, y, z` per row, the factor `w'`
//! left implicit). The bracket table, relabelled through `coordinates`, is an
//! independent construction of the same algebra and is checked against it.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::determining::{is_symmetry, numeric_residual, GeodesicSystem, Sampling};
use crate::lie::{CodimOneAlgebra, LieAlgebra};
use crate::linalg::RatMatrix;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::solver::{analyze_symmetry_algebra, ast_structure_constants, compare_spans, solve, AlgebraReport, FieldSpan, SpanComparison};
use crate::symbolic::{parse_field, parse_scalar, Params, Trig, VectorField};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown family {0:?}; known families: A4.2, A4.3, A4.4, A4.5, A4.6")]
    UnknownFamily(String),
    #[error("family {family} has no case named {case:?}")]
    UnknownCase { family: String, case: String },
    #[error("parameter {param} = {value} is outside the admissible range of {family}: {rule}")]
    OutOfRange {
        family: String,
        param: String,
        value: String,
        rule: String,
    },
    #[error("family {family} expects parameters {expected:?}, got {got:?}")]
    Parameters {
        family: String,
        expected: Vec<String>,
        got: Vec<String>,
    },
    #[error("malformed parameter list: {0}")]
    ParamSyntax(String),
    #[error("catalog entry {0} is malformed: {1}")]
    Fixture(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct CatalogFile {
    families: Vec<FamilyData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct FamilyData {
    name: String,
    params: Vec<String>,
    constraints: Vec<Constraint>,
    brackets: Vec<BracketData>,
    coordinates: Vec<usize>,
    geodesics: Vec<String>,
    cases: Vec<CaseData>,
    #[serde(default)]
    shared_lists: BTreeMap<String, ListData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct Constraint {
    pub param: String,
    #[serde(default)]
    pub nonzero: bool,
    pub min: Option<String>,
    pub max: Option<String>,
}

impl Constraint {
    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.nonzero {
            parts.push(format!("{} != 0", self.param));
        }
        if let Some(m) = &self.min {
            parts.push(format!("{} >= {m}", self.param));
        }
        if let Some(m) = &self.max {
            parts.push(format!("{} <= {m}", self.param));
        }
        parts.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct BracketData {
    i: usize,
    j: usize,
    coeffs: BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct CaseData {
    name: String,
    when: BTreeMap<String, String>,
    sample: BTreeMap<String, String>,
    expected_dimension: usize,
    shares: Option<String>,
    #[serde(default)]
    generators: Vec<ListedGenerator>,
    #[serde(default)]
    claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct ListData {
    generators: Vec<ListedGenerator>,
    claims: Vec<Claim>,
}

/// One published generator, possibly with a transcription correction.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct ListedGenerator {
    /// Parseable field, after any correction.
    pub text: String,
    /// The printed form, kept when `text` corrects it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub original: Option<String>,
    /// Parseable literal reading of `original`, when it has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ListedGenerator {
    pub fn is_corrected(&self) -> bool {
        self.original.is_some()
    }
}

/// A published statement about the structure of a symmetry algebra. Spans
/// are 1-based indices into the case's generator list.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    Solvable { value: bool },
    LeviDim { value: usize },
    RadicalDim { value: usize },
    NilpotentIdeal { span: Vec<usize> },
    Abelian { span: Vec<usize> },
    Semisimple { span: Vec<usize> },
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let span = |s: &[usize]| s.iter().map(|i| format!("e{i}")).collect::<Vec<_>>().join(",");
        match self {
            Claim::Solvable { value: true } => write!(f, "solvable"),
            Claim::Solvable { value: false } => write!(f, "not solvable"),
            Claim::LeviDim { value } => write!(f, "Levi factor of dimension {value}"),
            Claim::RadicalDim { value } => write!(f, "radical of dimension {value}"),
            Claim::NilpotentIdeal { span: s } => write!(f, "<{}> is a nilpotent ideal", span(s)),
            Claim::Abelian { span: s } => write!(f, "<{}> is abelian", span(s)),
            Claim::Semisimple { span: s } => write!(f, "<{}> is a semisimple subalgebra", span(s)),
        }
    }
}

/// A named parameter regime of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    /// Parameter equalities selecting this case; empty for the generic case.
    pub when: Params,
    /// Parameters at which the case is exercised.
    pub sample: Params,
    pub expected_dimension: usize,
    pub generators: Vec<ListedGenerator>,
    pub claims: Vec<Claim>,
}

impl Case {
    fn matches(&self, params: &Params) -> bool {
        self.when.iter().all(|(k, v)| params.get(k) == Some(v))
    }

    pub fn parsed_generators(&self, params: &Params) -> Result<Vec<VectorField>, CatalogError> {
        self.generators
            .iter()
            .map(|g| parse_field(&g.text, 3, params).map_err(|e| CatalogError::Fixture(g.text.clone(), e.to_string())))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub params: Vec<String>,
    pub constraints: Vec<Constraint>,
    brackets: Vec<BracketData>,
    /// Bracket-table index (1-based) of the basis element dual to each of `x, y, z`.
    pub coordinates: Vec<usize>,
    /// Right-hand sides of `x'', y'', z''` divided by `w'`.
    pub geodesics: Vec<String>,
    pub cases: Vec<Case>,
}

pub struct Catalog {
    families: Vec<Family>,
}

fn parse_params(map: &BTreeMap<String, String>, origin: &str) -> Params {
    map.iter()
        .map(|(k, v)| {
            let r = parse_rational(v).unwrap_or_else(|e| panic!("{origin}: bad rational {v:?}: {e}"));
            (k.clone(), r)
        })
        .collect()
}

impl Catalog {
    /// The embedded fixture set.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| {
            let file: CatalogFile = serde_json::from_str(CATALOG_JSON).expect("embedded catalog parses");
            let families = file
                .families
                .into_iter()
                .map(|f| {
                    let cases = f
                        .cases
                        .iter()
                        .map(|c| {
                            let origin = format!("{}/{}", f.name, c.name);
                            let (generators, claims) = match &c.shares {
                                Some(key) => {
                                    let list = f.shared_lists.get(key).unwrap_or_else(|| panic!("{origin}: no list {key}"));
                                    (list.generators.clone(), list.claims.clone())
                                }
                                None => (c.generators.clone(), c.claims.clone()),
                            };
                            Case {
                                name: c.name.clone(),
                                when: parse_params(&c.when, &origin),
                                sample: parse_params(&c.sample, &origin),
                                expected_dimension: c.expected_dimension,
                                generators,
                                claims,
                            }
                        })
                        .collect();
                    Family {
                        name: f.name,
                        params: f.params,
                        constraints: f.constraints,
                        brackets: f.brackets,
                        coordinates: f.coordinates,
                        geodesics: f.geodesics,
                        cases,
                    }
                })
                .collect();
            Catalog { families }
        })
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    /// Case-insensitive lookup; `A4.2a`-style suffixes naming the parameters
    /// are accepted.
    pub fn family(&self, name: &str) -> Result<&Family, CatalogError> {
        let key = name.trim().to_ascii_uppercase();
        self.families
            .iter()
            .find(|f| {
                let base = f.name.to_ascii_uppercase();
                key == base || (key.starts_with(&base) && key[base.len()..].chars().all(|c| c == 'A' || c == 'B'))
            })
            .ok_or_else(|| CatalogError::UnknownFamily(name.to_string()))
    }
}

impl Family {
    /// Checks names and admissible ranges. The ordering `a <= b` of A4.5 is
    /// not enforced because one published case header violates it.
    pub fn check_params(&self, params: &Params) -> Result<(), CatalogError> {
        let got: Vec<String> = params.keys().cloned().collect();
        let mut expected = self.params.clone();
        expected.sort();
        if got != expected {
            return Err(CatalogError::Parameters {
                family: self.name.clone(),
                expected: self.params.clone(),
                got,
            });
        }
        for c in &self.constraints {
            let v = &params[&c.param];
            let bound = |s: &Option<String>| s.as_deref().map(|s| parse_rational(s).expect("fixture bound"));
            let ok = !(c.nonzero && v.is_zero())
                && bound(&c.min).is_none_or(|m| *v >= m)
                && bound(&c.max).is_none_or(|m| *v <= m);
            if !ok {
                return Err(CatalogError::OutOfRange {
                    family: self.name.clone(),
                    param: c.param.clone(),
                    value: format_rational(v),
                    rule: c.describe(),
                });
            }
        }
        Ok(())
    }

    /// `A` read off the geodesic display.
    pub fn matrix(&self, params: &Params) -> Result<RatMatrix, CatalogError> {
        self.check_params(params)?;
        let n = self.geodesics.len();
        let mut rows = Vec::with_capacity(n);
        for text in &self.geodesics {
            let bad = |msg: &str| CatalogError::Fixture(format!("{} geodesic {text:?}", self.name), msg.to_string());
            let e = parse_scalar(text, n, params).map_err(|e| bad(&e.to_string()))?;
            let mut row = vec![Rational::zero(); n];
            for (atom, c) in e.terms() {
                let linear = atom.t == 0 && atom.w == 0 && atom.rho.is_zero() && atom.trig == Trig::One;
                let var = (atom.x.iter().sum::<u32>() == 1).then(|| atom.x.iter().position(|&p| p == 1)).flatten();
                match (linear, var) {
                    (true, Some(k)) => row[k] = c.clone(),
                    _ => return Err(bad("not a linear form in the velocities")),
                }
            }
            rows.push(row);
        }
        Ok(RatMatrix::from_rows(rows))
    }

    /// The published bracket table, relabelled to coordinate order.
    pub fn bracket_table(&self, params: &Params) -> Result<LieAlgebra, CatalogError> {
        let n = self.coordinates.len();
        let dim = n + 1;
        let bad = |msg: String| CatalogError::Fixture(format!("{} brackets", self.name), msg);
        let mut table = Vec::new();
        for b in &self.brackets {
            let mut coeffs = vec![Rational::zero(); dim];
            for (k, v) in &b.coeffs {
                let value = parse_scalar(v, n, params)
                    .map_err(|e| bad(e.to_string()))?
                    .as_constant()
                    .ok_or_else(|| bad(format!("{v} is not constant")))?;
                coeffs[k - 1] = value;
            }
            table.push((b.i - 1, b.j - 1, coeffs));
        }
        let printed = LieAlgebra::from_brackets(dim, &table).map_err(|e| bad(e.to_string()))?;
        // coordinate c carries printed basis element perm[c]
        let perm: Vec<usize> = self.coordinates.iter().map(|c| c - 1).chain([n]).collect();
        let mut relabelled = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                let coeffs: Vec<Rational> = (0..dim).map(|k| printed.constant(perm[a], perm[b], perm[k]).clone()).collect();
                relabelled.push((a, b, coeffs));
            }
        }
        LieAlgebra::from_brackets(dim, &relabelled).map_err(|e| bad(e.to_string()))
    }

    /// The most specific case whose conditions hold at `params`.
    pub fn case_for(&self, params: &Params) -> &Case {
        self.cases
            .iter()
            .filter(|c| c.matches(params))
            .max_by_key(|c| c.when.len())
            .expect("every family has an unconditional case")
    }

    pub fn case(&self, name: &str) -> Result<&Case, CatalogError> {
        self.cases.iter().find(|c| c.name == name).ok_or_else(|| CatalogError::UnknownCase {
            family: self.name.clone(),
            case: name.to_string(),
        })
    }
}

/// Parses `a=1,b=-1/2` (commas or whitespace separate entries).
pub fn parse_param_list(text: &str) -> Result<Params, CatalogError> {
    let mut out = Params::new();
    for item in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CatalogError::ParamSyntax(format!("expected name=value, got {item:?}")))?;
        let r = parse_rational(v.trim()).map_err(|e| CatalogError::ParamSyntax(format!("{item:?}: {e}")))?;
        if out.insert(k.trim().to_string(), r).is_some() {
            return Err(CatalogError::ParamSyntax(format!("{k} given twice")));
        }
    }
    Ok(out)
}

pub fn display_params(params: &Params) -> BTreeMap<String, String> {
    params.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect()
}

/// A family at concrete parameters.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub family: &'static Family,
    pub params: Params,
    pub algebra: CodimOneAlgebra,
    pub case: &'static Case,
}

impl FamilyInstance {
    pub fn expected_dimension(&self) -> usize {
        self.case.expected_dimension
    }
}

pub fn get_family(name: &str, params: &Params) -> Result<FamilyInstance, CatalogError> {
    let family = Catalog::builtin().family(name)?;
    let a = family.matrix(params)?;
    Ok(FamilyInstance {
        family,
        params: params.clone(),
        algebra: CodimOneAlgebra::new(a).expect("square by construction"),
        case: family.case_for(params),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub sampling: Sampling,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sampling: Sampling::default(),
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorVerdict {
    pub index: usize,
    pub field: String,
    pub corrected: bool,
    /// All determining conditions vanish identically.
    pub exact: bool,
    pub numeric_residual: f64,
    /// The exact and sampled verdicts coincide.
    pub routes_agree: bool,
    /// For corrected entries: whether the printed reading is a symmetry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_is_symmetry: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SolverOutcome {
    Solved { dimension: usize },
    Refused { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub case: String,
    pub params: BTreeMap<String, String>,
    #[serde(rename = "A")]
    pub a: RatMatrix,
    pub bracket_table_matches: bool,
    pub expected_dimension: usize,
    pub listed_count: usize,
    pub solver: SolverOutcome,
    pub generators: Vec<GeneratorVerdict>,
    pub listed_independent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<SpanComparison>,
    pub findings: Vec<String>,
    pub passed: bool,
}

/// Runs every check available for the family at `params`. Mismatches are
/// recorded as findings; only unknown names and inadmissible parameters are
/// errors.
pub fn verify_family(name: &str, params: &Params, opts: &VerifyOptions) -> Result<FamilyReport, CatalogError> {
    let inst = get_family(name, params)?;
    let a = inst.algebra.matrix().clone();
    let sys = GeodesicSystem::new(a.clone()).expect("square");
    let listed = inst.case.parsed_generators(params)?;
    let mut findings = Vec::new();

    let bracket_table_matches = inst.family.bracket_table(params)? == inst.algebra.lie_algebra();
    if !bracket_table_matches {
        findings.push("bracket table and geodesic display define different algebras".to_string());
    }

    let mut generators = Vec::with_capacity(listed.len());
    for (k, (g, f)) in inst.case.generators.iter().zip(&listed).enumerate() {
        let exact = is_symmetry(f, &sys).is_symmetry;
        let numeric = numeric_residual(f, &sys, &opts.sampling);
        let routes_agree = exact == (numeric < opts.tol);
        let literal_is_symmetry = g
            .literal
            .as_ref()
            .map(|lit| parse_field(lit, 3, params).map(|lf| is_symmetry(&lf, &sys).is_symmetry))
            .transpose()
            .map_err(|e| CatalogError::Fixture(g.text.clone(), e.to_string()))?;
        if !exact {
            findings.push(format!("e{} = {} is not a symmetry", k + 1, g.text));
        }
        if !routes_agree {
            findings.push(format!("e{}: exact and sampled verdicts disagree (residual {numeric:e})", k + 1));
        }
        generators.push(GeneratorVerdict {
            index: k + 1,
            field: f.to_string(),
            corrected: g.is_corrected(),
            exact,
            numeric_residual: numeric,
            routes_agree,
            literal_is_symmetry,
        });
    }

    let listed_independent = FieldSpan::new(3, &listed).is_independent();
    if !listed_independent {
        findings.push("listed generators are linearly dependent".to_string());
    }
    if listed.len() != inst.expected_dimension() {
        findings.push(format!(
            "{} generators listed, {} expected",
            listed.len(),
            inst.expected_dimension()
        ));
    }

    let (solver, span) = match solve(&a) {
        Ok(sol) => {
            let dimension = sol.dimension();
            if dimension != inst.expected_dimension() {
                findings.push(format!("solver dimension {dimension}, expected {}", inst.expected_dimension()));
            }
            let span = match sol.ast_fields() {
                Some(fields) => {
                    let cmp = compare_spans(3, &listed, &fields);
                    if !cmp.equal() {
                        findings.push(format!(
                            "spans differ: listed rank {}, solver rank {}, union rank {}",
                            cmp.rank_left, cmp.rank_right, cmp.rank_union
                        ));
                    }
                    Some(cmp)
                }
                None => {
                    findings.push("solver generators have no expression form; spans not compared".to_string());
                    None
                }
            };
            (SolverOutcome::Solved { dimension }, span)
        }
        Err(e) => (SolverOutcome::Refused { reason: e.to_string() }, None),
    };

    let passed = findings.is_empty();
    Ok(FamilyReport {
        family: inst.family.name.clone(),
        case: inst.case.name.clone(),
        params: display_params(params),
        a,
        bracket_table_matches,
        expected_dimension: inst.expected_dimension(),
        listed_count: listed.len(),
        solver,
        generators,
        listed_independent,
        span,
        findings,
        passed,
    })
}

/// Verifies every case of every family at its sample parameters.
pub fn verify_catalog(opts: &VerifyOptions) -> Vec<FamilyReport> {
    Catalog::builtin()
        .families()
        .iter()
        .flat_map(|f| f.cases.iter().map(move |c| (f, c)))
        .map(|(f, c)| verify_family(&f.name, &c.sample, opts).expect("fixture samples are admissible"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: Claim,
    pub statement: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub family: String,
    pub case: String,
    pub params: BTreeMap<String, String>,
    /// Analysis of the algebra built by the solver (nonsingular `A` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<AlgebraReport>,
    /// Analysis of the algebra spanned by the listed generators.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listed: Option<AlgebraReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listed_closure_error: Option<String>,
    pub claims: Vec<ClaimResult>,
}

impl StructureReport {
    pub fn all_claims_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }
}

/// Checks the published structure statements against the algebra of the
/// listed generators, and reports the solver's own analysis alongside.
pub fn structure_report(name: &str, params: &Params) -> Result<StructureReport, CatalogError> {
    let inst = get_family(name, params)?;
    let listed_fields = inst.case.parsed_generators(params)?;
    let solver = solve(inst.algebra.matrix())
        .ok()
        .and_then(|s| s.structure_constants().ok())
        .map(|l| analyze_symmetry_algebra(&l));
    let (listed_alg, listed_closure_error) = match ast_structure_constants(&listed_fields) {
        Ok(l) => (Some(l), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let listed = listed_alg.as_ref().map(analyze_symmetry_algebra);

    let claims = inst
        .case
        .claims
        .iter()
        .map(|claim| {
            let (holds, detail) = match (&listed_alg, &listed) {
                (Some(l), Some(rep)) => evaluate_claim(claim, l, rep),
                _ => (false, "listed generators do not close".to_string()),
            };
            ClaimResult {
                claim: claim.clone(),
                statement: claim.to_string(),
                holds,
                detail,
            }
        })
        .collect();

    Ok(StructureReport {
        family: inst.family.name.clone(),
        case: inst.case.name.clone(),
        params: display_params(params),
        solver,
        listed,
        listed_closure_error,
        claims,
    })
}

fn units(dim: usize, span: &[usize]) -> Vec<Vec<Rational>> {
    span.iter()
        .map(|&i| {
            let mut v = vec![Rational::zero(); dim];
            v[i - 1] = Rational::from_integer(1.into());
            v
        })
        .collect()
}

fn evaluate_claim(claim: &Claim, l: &LieAlgebra, rep: &AlgebraReport) -> (bool, String) {
    match claim {
        Claim::Solvable { value } => (rep.solvable == *value, format!("derived series {:?}", rep.derived_series)),
        Claim::LeviDim { value } => (rep.levi_dim == *value, format!("Levi dimension {}", rep.levi_dim)),
        Claim::RadicalDim { value } => (rep.radical_dim == *value, format!("radical dimension {}", rep.radical_dim)),
        Claim::NilpotentIdeal { span } => {
            let ok = l.verify_nilpotent_ideal(&units(l.dim(), span)).unwrap_or(false);
            (ok, if ok { "ideal, nilpotent".into() } else { "not a nilpotent ideal".into() })
        }
        Claim::Abelian { span } => {
            let nonzero: Vec<String> = span
                .iter()
                .enumerate()
                .flat_map(|(a, &i)| span[a + 1..].iter().map(move |&j| (i, j)))
                .filter(|&(i, j)| l.bracket_basis(i - 1, j - 1).iter().any(|c| !c.is_zero()))
                .map(|(i, j)| format!("[e{i},e{j}]"))
                .collect();
            if nonzero.is_empty() {
                (true, "all brackets vanish".into())
            } else {
                (false, format!("nonzero brackets {}", nonzero.join(" ")))
            }
        }
        Claim::Semisimple { span } => match l.subalgebra(&units(l.dim(), span)) {
            None => (false, "span is not closed under the bracket".into()),
            Some(sub) => {
                let ss = sub.is_semisimple();
                let rank = sub.killing_form().rank();
                (ss, format!("subalgebra of dimension {}, Killing form rank {rank}", sub.dim()))
            }
        },
    }
}
