//! Text grammar for scalar expressions and vector fields.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := integer | name | func '(' expr ')' | '(' expr ')'
//! func   := exp | sin | cos            argument must be a rational multiple of w
//! name   := t | w | coordinate | parameter | Dt | Dw | D<coordinate> | D_<coordinate>
//! ```
//!
//! Division is only by nonzero constants and exponents are nonnegative
//! integers. A derivative symbol turns the surrounding product into a
//! vector field; sums may not mix fields and nonzero scalars.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::{rat, Rational};

use super::{ScalarExpr, SymbolicError, Var, VectorField};

/// Named rational constants such as the family parameters `a` and `b`.
pub type Params = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, SymbolicError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits: num_bigint::BigInt = s[start..i].parse().expect("digits");
            out.push((start, Tok::Num(Rational::from_integer(digits))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(SymbolicError::Parse {
                pos: i,
                msg: format!("unexpected character `{}`", s[i..].chars().next().unwrap()),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(ScalarExpr),
    Field(VectorField),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    n: usize,
    params: &'a Params,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SymbolicError> {
        let pos = self.toks.get(self.pos).map_or(self.end, |t| t.0);
        Err(SymbolicError::Parse { pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value, SymbolicError> {
        let mut acc = self.term()?;
        loop {
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            let rhs = if sign < 0 { self.negate(rhs) } else { rhs };
            acc = self.add(acc, rhs)?;
        }
    }

    fn term(&mut self) -> Result<Value, SymbolicError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.mul(acc, rhs)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let d = match rhs {
                    Value::Scalar(s) => s.as_constant(),
                    Value::Field(_) => None,
                };
                match d {
                    Some(d) if !d.is_zero() => acc = self.mul(acc, Value::Scalar(ScalarExpr::constant(d.recip())))?,
                    _ => return self.err("division is only by nonzero constants"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, SymbolicError> {
        if self.eat('-') {
            let v = self.unary()?;
            Ok(self.negate(v))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Value, SymbolicError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = self.unary()?;
        let k = match exp {
            Value::Scalar(s) => s.as_constant().filter(|c| c.is_integer() && !c.is_negative()),
            Value::Field(_) => None,
        };
        let Some(k) = k.and_then(|k| k.to_integer().to_u32()).filter(|k| *k <= 64) else {
            return self.err("exponent must be an integer between 0 and 64");
        };
        match base {
            Value::Scalar(s) => Ok(Value::Scalar(s.pow(k))),
            Value::Field(_) => self.err("cannot raise a vector field to a power"),
        }
    }

    fn atom(&mut self) -> Result<Value, SymbolicError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Num(r) => {
                self.pos += 1;
                Ok(Value::Scalar(ScalarExpr::constant(r)))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(v)
            }
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
            Tok::Name(name) => {
                self.pos += 1;
                if matches!(name.as_str(), "exp" | "sin" | "cos") {
                    return self.function(&name);
                }
                self.name(&name)
            }
        }
    }

    fn function(&mut self, name: &str) -> Result<Value, SymbolicError> {
        if !self.eat('(') {
            return self.err(format!("expected `(` after {name}"));
        }
        let arg = self.expr()?;
        if !self.eat(')') {
            return self.err("expected `)`");
        }
        let rate = match arg {
            Value::Scalar(s) => s.as_multiple_of_w(),
            Value::Field(_) => None,
        };
        let Some(r) = rate else {
            return self.err(format!("argument of {name} must be a rational multiple of w"));
        };
        Ok(Value::Scalar(match name {
            "exp" => ScalarExpr::exp_w(r),
            "sin" => ScalarExpr::sin_w(r),
            _ => ScalarExpr::cos_w(r),
        }))
    }

    fn name(&mut self, name: &str) -> Result<Value, SymbolicError> {
        if let Ok(v) = Var::parse(name, self.n) {
            return Ok(Value::Scalar(ScalarExpr::var(v)));
        }
        if let Some(coord) = name.strip_prefix("D_").or_else(|| name.strip_prefix('D')) {
            if let Ok(v) = Var::parse(coord, self.n) {
                return Ok(Value::Field(VectorField::along(self.n, v, ScalarExpr::one())));
            }
        }
        if let Some(p) = self.params.get(name) {
            return Ok(Value::Scalar(ScalarExpr::constant(p.clone())));
        }
        self.err(format!("unknown name `{name}`"))
    }

    fn negate(&self, v: Value) -> Value {
        match v {
            Value::Scalar(s) => Value::Scalar(s.neg()),
            Value::Field(f) => Value::Field(f.scale(&rat(-1))),
        }
    }

    fn add(&self, a: Value, b: Value) -> Result<Value, SymbolicError> {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.add(&y))),
            (Value::Field(x), Value::Field(y)) => Ok(Value::Field(x.add(&y)?)),
            (Value::Field(f), Value::Scalar(s)) | (Value::Scalar(s), Value::Field(f)) if s.is_zero() => Ok(Value::Field(f)),
            _ => self.err("cannot add a scalar to a vector field"),
        }
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value, SymbolicError> {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.mul(&y))),
            (Value::Scalar(s), Value::Field(f)) | (Value::Field(f), Value::Scalar(s)) => Ok(Value::Field(f.mul_scalar(&s))),
            (Value::Field(_), Value::Field(_)) => self.err("cannot multiply two vector fields"),
        }
    }
}

fn run(text: &str, n: usize, params: &Params) -> Result<Value, SymbolicError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        n,
        params,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// Parses a scalar expression on `n` spatial coordinates.
pub fn parse_scalar(text: &str, n: usize, params: &Params) -> Result<ScalarExpr, SymbolicError> {
    match run(text, n, params)? {
        Value::Scalar(s) => Ok(s),
        Value::Field(_) => Err(SymbolicError::Parse {
            pos: 0,
            msg: "expected a scalar expression, found a vector field".into(),
        }),
    }
}

/// Parses a vector field such as `x*exp(w)*Dy + sin(w)*Dx`. A bare `0` is the
/// zero field.
pub fn parse_field(text: &str, n: usize, params: &Params) -> Result<VectorField, SymbolicError> {
    match run(text, n, params)? {
        Value::Field(f) => Ok(f),
        Value::Scalar(s) if s.is_zero() => Ok(VectorField::zero(n)),
        Value::Scalar(_) => Err(SymbolicError::Parse {
            pos: 0,
            msg: "expected a vector field, found a scalar expression".into(),
        }),
    }
}

/// Parses one field per nonblank line; lines starting with `#` are skipped.
pub fn parse_fields(text: &str, n: usize, params: &Params) -> Result<Vec<VectorField>, SymbolicError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_field(l, n, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn no_params() -> Params {
        Params::new()
    }

    #[test]
    fn parses_field_example() {
        let f = parse_field("x*exp(w)*Dy + sin(w)*Dx", 3, &no_params()).unwrap();
        assert_eq!(f.eta(1), &ScalarExpr::x(0).mul(&ScalarExpr::exp_w(rat(1))));
        assert_eq!(f.eta(0), &ScalarExpr::sin_w(rat(1)));
        assert!(f.xi().is_zero() && f.etaw().is_zero());
    }

    #[test]
    fn round_trip() {
        let texts = [
            "t^2*Dt + t*x*Dx - 1/2*w*exp(-3/2*w)*cos(2*w)*Dz",
            "Dw",
            "-x*Dx - y*Dy",
            "x*sin(w)*exp(w)*Dx + 3*Dw",
        ];
        for s in texts {
            let f = parse_field(s, 3, &no_params()).unwrap();
            let again = parse_field(&f.to_string(), 3, &no_params()).unwrap();
            assert_eq!(f, again, "{s} -> {f}");
        }
    }

    #[test]
    fn parameters_and_aliases() {
        let mut p = Params::new();
        p.insert("a".into(), ratio(1, 2));
        let f = parse_field("exp(a*w)*D_x + (a - 1)*D_w", 3, &p).unwrap();
        assert_eq!(f.eta(0), &ScalarExpr::exp_w(ratio(1, 2)));
        assert_eq!(f.etaw(), &ScalarExpr::constant(ratio(-1, 2)));
        let g = parse_field("x2*Dx4", 4, &p).unwrap();
        assert_eq!(g.eta(3), &ScalarExpr::x(1));
    }

    #[test]
    fn fields_distribute() {
        let f = parse_field("(x + y)*(Dx - Dy)", 2, &no_params()).unwrap();
        let want = parse_field("x*Dx + y*Dx - x*Dy - y*Dy", 2, &no_params()).unwrap();
        assert_eq!(f, want);
        assert_eq!(parse_field("0", 2, &no_params()).unwrap(), VectorField::zero(2));
    }

    #[test]
    fn rejections() {
        let p = no_params();
        for bad in ["x + Dx", "Dx*Dy", "exp(x)", "sin(w^2)", "x/y", "x^-1", "Dq", "x y", "(x", "x $ y", "1/0", "Dz"] {
            assert!(parse_field(bad, 2, &p).is_err(), "{bad}");
        }
        assert!(parse_scalar("Dx", 2, &p).is_err());
        assert!(parse_field("x", 2, &p).is_err());
    }

    #[test]
    fn scalar_parsing() {
        let s = parse_scalar("(t + 1)^2 - t^2 - 2*t", 1, &no_params()).unwrap();
        assert_eq!(s, ScalarExpr::one());
        let c = parse_scalar("cos(-w) + sin(-w)", 1, &no_params()).unwrap();
        assert_eq!(c, ScalarExpr::cos_w(rat(1)).sub(&ScalarExpr::sin_w(rat(1))));
    }

    #[test]
    fn multi_line() {
        let v = parse_fields("# header\nDt\n\n t*Dt \n", 1, &no_params()).unwrap();
        assert_eq!(v.len(), 2);
    }
}
