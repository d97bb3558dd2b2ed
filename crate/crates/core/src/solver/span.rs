use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::lie::LieAlgebra;
use crate::linalg::SpanSolver;
use crate::rational::Rational;
use crate::symbolic::{Atom, VectorField};

/// Exact linear span of a list of vector fields over the atom basis.
#[derive(Debug, Clone)]
pub struct FieldSpan {
    n: usize,
    keys: BTreeMap<(usize, Atom), usize>,
    solver: SpanSolver,
    count: usize,
}

impl FieldSpan {
    pub fn new(n: usize, fields: &[VectorField]) -> FieldSpan {
        let mut keys = BTreeMap::new();
        for f in fields {
            assert_eq!(f.n(), n, "all fields must live on the same space");
            for ((k, a), _) in f.linear_terms() {
                let next = keys.len();
                keys.entry((k, a.clone())).or_insert(next);
            }
        }
        let rows: Vec<Vec<Rational>> = fields.iter().map(|f| row(&keys, f).expect("keys cover inputs")).collect();
        FieldSpan {
            n,
            solver: SpanSolver::new(&rows),
            keys,
            count: fields.len(),
        }
    }

    pub fn rank(&self) -> usize {
        if self.count == 0 {
            0
        } else {
            self.solver.rank()
        }
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.count
    }

    /// Coefficients of `f` in the spanning list, if `f` lies in the span.
    pub fn express(&self, f: &VectorField) -> Option<Vec<Rational>> {
        if f.n() != self.n {
            return None;
        }
        if f.is_zero() {
            return Some(vec![Rational::zero(); self.count]);
        }
        if self.count == 0 {
            return None;
        }
        self.solver.express(&row(&self.keys, f)?)
    }

    pub fn contains(&self, f: &VectorField) -> bool {
        self.express(f).is_some()
    }
}

fn row(keys: &BTreeMap<(usize, Atom), usize>, f: &VectorField) -> Option<Vec<Rational>> {
    let mut v = vec![Rational::zero(); keys.len()];
    for ((k, a), c) in f.linear_terms() {
        let idx = *keys.get(&(k, a.clone()))?;
        v[idx] = c.clone();
    }
    Some(v)
}

/// Ranks of two field lists and of their union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanComparison {
    pub rank_left: usize,
    pub rank_right: usize,
    pub rank_union: usize,
}

impl SpanComparison {
    pub fn equal(&self) -> bool {
        self.rank_left == self.rank_union && self.rank_right == self.rank_union
    }
}

pub fn compare_spans(n: usize, left: &[VectorField], right: &[VectorField]) -> SpanComparison {
    let union: Vec<VectorField> = left.iter().chain(right).cloned().collect();
    SpanComparison {
        rank_left: FieldSpan::new(n, left).rank(),
        rank_right: FieldSpan::new(n, right).rank(),
        rank_union: FieldSpan::new(n, &union).rank(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosureError {
    #[error("generators are linearly dependent (rank {rank} of {count})")]
    Dependent { rank: usize, count: usize },
    #[error("bracket of generators {i} and {j} leaves their span")]
    NotClosed { i: usize, j: usize },
}

/// Structure constants of the algebra spanned by independent `fields`,
/// computed with the expression-level Lie bracket. Indices in errors are
/// 1-based.
pub fn ast_structure_constants(fields: &[VectorField]) -> Result<LieAlgebra, ClosureError> {
    let d = fields.len();
    let n = fields.first().map_or(0, VectorField::n);
    let span = FieldSpan::new(n, fields);
    if !span.is_independent() {
        return Err(ClosureError::Dependent {
            rank: span.rank(),
            count: d,
        });
    }
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let b = fields[i].lie_bracket(&fields[j]).expect("same space");
            let coords = span.express(&b).ok_or(ClosureError::NotClosed { i: i + 1, j: j + 1 })?;
            if coords.iter().any(|c| !c.is_zero()) {
                brackets.push((i, j, coords));
            }
        }
    }
    Ok(LieAlgebra::from_brackets(d, &brackets).expect("valid table"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::symbolic::{parse_field, Params};

    fn fields(list: &[&str], n: usize) -> Vec<VectorField> {
        list.iter().map(|s| parse_field(s, n, &Params::new()).unwrap()).collect()
    }

    #[test]
    fn span_membership() {
        let f = fields(&["Dx", "x*Dx + exp(w)*Dw"], 1);
        let span = FieldSpan::new(1, &f);
        assert_eq!(span.rank(), 2);
        let g = parse_field("2*Dx - 3*x*Dx - 3*exp(w)*Dw", 1, &Params::new()).unwrap();
        assert_eq!(span.express(&g), Some(vec![rat(2), rat(-3)]));
        assert!(!span.contains(&parse_field("x*Dx", 1, &Params::new()).unwrap()));
        assert!(span.contains(&VectorField::zero(1)));
    }

    #[test]
    fn comparison() {
        let a = fields(&["Dx", "Dw"], 1);
        let b = fields(&["Dx + Dw", "Dx - Dw"], 1);
        assert!(compare_spans(1, &a, &b).equal());
        let c = fields(&["Dx", "t*Dw"], 1);
        assert_eq!(compare_spans(1, &a, &c).rank_union, 3);
    }

    #[test]
    fn sl2_from_fields() {
        let f = fields(&["Dx", "x*Dx", "x^2*Dx"], 1);
        let alg = ast_structure_constants(&f).unwrap();
        assert!(alg.is_semisimple());
        assert!(matches!(
            ast_structure_constants(&fields(&["Dx", "x^2*Dx"], 1)),
            Err(ClosureError::NotClosed { i: 1, j: 2 })
        ));
        assert!(matches!(ast_structure_constants(&fields(&["Dx", "2*Dx"], 1)), Err(ClosureError::Dependent { .. })));
    }
}
