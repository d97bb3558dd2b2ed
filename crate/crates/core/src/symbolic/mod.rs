//! Closed-form expressions in `(t, x^1..x^n, w)` and point vector fields.

mod expr;
mod field;
mod parse;
mod symexp;

pub use expr::{Atom, Jet2, Real, ScalarExpr, Trig};
pub use field::VectorField;
pub use parse::{parse_field, parse_fields, parse_scalar, Params};
pub use symexp::exp_wa;

/// A coordinate: time, one of the `x^i` (0-based), or `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    X(usize),
    W,
}

impl Var {
    /// Position in `[t, x^1, ..., x^n, w]`.
    pub fn index(self, n: usize) -> usize {
        match self {
            Var::T => 0,
            Var::X(i) => 1 + i,
            Var::W => n + 1,
        }
    }

    pub fn from_index(k: usize, n: usize) -> Var {
        match k {
            0 => Var::T,
            k if k == n + 1 => Var::W,
            k => Var::X(k - 1),
        }
    }

    /// Resolves a coordinate name (`t`, `w`, `x`/`y`/`z` for `n <= 3`, `x1..xn`).
    pub fn parse(name: &str, n: usize) -> Result<Var, SymbolicError> {
        let unknown = || SymbolicError::UnknownVariable(name.to_string());
        match name {
            "t" => return Ok(Var::T),
            "w" => return Ok(Var::W),
            _ => {}
        }
        if n <= 3 {
            if let Some(i) = ["x", "y", "z"].iter().position(|s| *s == name) {
                return if i < n { Ok(Var::X(i)) } else { Err(unknown()) };
            }
        }
        let idx: usize = name.strip_prefix('x').and_then(|d| d.parse().ok()).ok_or_else(unknown)?;
        if (1..=n).contains(&idx) && !name[1..].starts_with('0') {
            Ok(Var::X(idx - 1))
        } else {
            Err(unknown())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("vector fields live on different spaces (n = {left} vs n = {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `["t", x-names..., "w"]`: `x, y, z` when `n <= 3`, otherwise `x1..xn`.
pub fn coordinate_names(n: usize) -> Vec<String> {
    let mut v = vec!["t".to_string()];
    if n <= 3 {
        v.extend(["x", "y", "z"].iter().take(n).map(|s| s.to_string()));
    } else {
        v.extend((1..=n).map(|i| format!("x{i}")));
    }
    v.push("w".into());
    v
}

/// `["Dt", "Dx", ..., "Dw"]` matching [`coordinate_names`].
pub fn derivative_names(n: usize) -> Vec<String> {
    coordinate_names(n).into_iter().map(|s| format!("D{s}")).collect()
}
