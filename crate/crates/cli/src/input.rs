//! Loading matrices, parameter grids, fields and initial states from files.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use liesym::catalog::{get_family, parse_param_list};
use liesym::geodesics::GeodesicState;
use liesym::linalg::RatMatrix;
use liesym::rational::{parse_rational, rat, Rational};
use liesym::solver::ParamPoint;
use liesym::symbolic::{parse_fields, Params, VectorField};
use serde_json::Value;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(rat(i)),
            None => bail!("{n} is not an integer; write non-integers as strings like \"1/2\""),
        },
        other => bail!("expected a rational, got {other}"),
    }
}

/// Accepts `{rows, cols, entries}`, a nested array of rows, or either of
/// those under a top-level key `"A"`.
pub fn matrix_from_json(text: &str) -> Result<RatMatrix> {
    let v: Value = serde_json::from_str(text).context("matrix file is not valid JSON")?;
    matrix_from_value(&v)
}

fn matrix_from_value(v: &Value) -> Result<RatMatrix> {
    match v {
        Value::Object(map) if map.contains_key("A") => matrix_from_value(&map["A"]),
        Value::Object(_) => Ok(serde_json::from_value(v.clone()).context("malformed matrix object")?),
        Value::Array(rows) => {
            let rows: Vec<Vec<Rational>> = rows
                .iter()
                .map(|r| match r {
                    Value::Array(cells) => cells.iter().map(rational).collect(),
                    other => bail!("matrix row must be an array, got {other}"),
                })
                .collect::<Result<_>>()?;
            let cols = rows.first().map_or(0, Vec::len);
            if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
                bail!("matrix rows must be nonempty and of equal length");
            }
            Ok(RatMatrix::from_rows(rows))
        }
        other => bail!("expected a matrix, got {other}"),
    }
}

/// The system under study: either `--matrix FILE` or `--family NAME` with
/// `--params`.
pub fn system(matrix: Option<&Path>, family: Option<&str>, params: Option<&str>) -> Result<(RatMatrix, Params)> {
    match (matrix, family) {
        (Some(path), None) => {
            let a = matrix_from_json(&read(path)?)?;
            let params = params.map(parse_param_list).transpose()?.unwrap_or_default();
            Ok((a, params))
        }
        (None, Some(name)) => {
            let params = params.map(parse_param_list).transpose()?.unwrap_or_default();
            let inst = get_family(name, &params)?;
            Ok((inst.algebra.matrix().clone(), params))
        }
        (Some(_), Some(_)) => bail!("give either --matrix or --family, not both"),
        (None, None) => bail!("one of --matrix or --family is required"),
    }
}

pub fn fields(path: &Path, n: usize, params: &Params) -> Result<Vec<VectorField>> {
    let fields = parse_fields(&read(path)?, n, params).with_context(|| format!("in {}", path.display()))?;
    if fields.is_empty() {
        bail!("{} contains no fields", path.display());
    }
    Ok(fields)
}

/// Grid files are either an object of value lists (expanded as a cartesian
/// product in key order) or an array of point objects. `fixed` fills in
/// parameters the grid does not mention.
pub fn grid(text: &str, fixed: &Params) -> Result<Vec<ParamPoint>> {
    let v: Value = serde_json::from_str(text).context("grid file is not valid JSON")?;
    let mut points: Vec<ParamPoint> = match &v {
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::Object(map) => map.iter().map(|(k, v)| Ok((k.clone(), rational(v)?))).collect(),
                other => bail!("grid point must be an object, got {other}"),
            })
            .collect::<Result<_>>()?,
        Value::Object(axes) => {
            let mut points = vec![ParamPoint::new()];
            for (name, values) in axes {
                let Value::Array(values) = values else {
                    bail!("grid axis {name} must be an array");
                };
                let values: Vec<Rational> = values.iter().map(rational).collect::<Result<_>>()?;
                points = points
                    .into_iter()
                    .flat_map(|p| {
                        values.iter().map(move |v| {
                            let mut q = p.clone();
                            q.insert(name.clone(), v.clone());
                            q
                        })
                    })
                    .collect();
            }
            points
        }
        other => bail!("grid must be an object or an array, got {other}"),
    };
    for p in &mut points {
        for (k, v) in fixed {
            p.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    Ok(points)
}

/// `--init` is either inline JSON (starting with `{`) or a path to it.
pub fn initial_state(arg: &str) -> Result<GeodesicState> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    serde_json::from_str(&text).context("initial state must look like {\"x\": [..], \"w\": 0, \"u\": [..], \"q\": 1}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use liesym::rational::ratio;

    #[test]
    fn matrix_formats() {
        let nested = matrix_from_json(r#"[[1, "1/2"], [0, -3]]"#).unwrap();
        assert_eq!(nested[(0, 1)], ratio(1, 2));
        let object = matrix_from_json(r#"{"rows": 2, "cols": 2, "entries": ["1", "1/2", "0", "-3"]}"#).unwrap();
        assert_eq!(nested, object);
        assert_eq!(matrix_from_json(r#"{"A": [[1, "1/2"], [0, -3]]}"#).unwrap(), nested);
        assert!(matrix_from_json("[[1, 2], [3]]").is_err());
        assert!(matrix_from_json("[[0.5]]").is_err());
    }

    #[test]
    fn grid_formats() {
        let fixed = Params::from([("a".to_string(), rat(1))]);
        let g = grid(r#"{"b": ["0", 1], "c": [2, 3]}"#, &fixed).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|p| p["a"] == rat(1)));
        let g = grid(r#"[{"a": "2"}, {"b": "1/2"}]"#, &fixed).unwrap();
        assert_eq!(g[0]["a"], rat(2));
        assert_eq!(g[1]["a"], rat(1));
        assert!(grid(r#"{"a": 3}"#, &fixed).is_err());
    }
}
