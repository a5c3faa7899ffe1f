//! Text and JSON formats: polynomials, point lists, jet-field documents and
//! group documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use whitney_core::actions::{group_closure, ActingGroup, CircleAction, OrthogonalElement};
use whitney_core::jetcalc::{JetField, PointCloud};
use whitney_core::matrix::Matrix;
use whitney_core::symbolic::{PolyMap, Polynomial};
use whitney_core::{Error, MultiIndex, Result, Scalar};

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A JSON scalar given either as a string (`"1/2"`) or a number.
pub fn scalar_from_json<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => S::parse_text(s),
        Value::Number(n) => S::parse_text(&n.to_string()),
        other => Err(parse_error(format!("expected a number, found {other}"))),
    }
}

pub fn scalar_to_json<S: Scalar>(v: &S) -> Value {
    Value::String(v.to_text())
}

/// `"0,1; 2,3"` -> `[[0, 1], [2, 3]]`. An empty string is the empty list.
pub fn parse_points<S: Scalar>(text: &str) -> Result<Vec<Vec<S>>> {
    text.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_point)
        .collect()
}

pub fn parse_point<S: Scalar>(text: &str) -> Result<Vec<S>> {
    text.split(',').map(|c| S::parse_text(c.trim())).collect()
}

pub fn parse_indices(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| parse_error(format!("not a non-negative integer: {c:?}")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(String),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            'x' => {
                let start = i + 1;
                i = start;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let k: usize = digits
                    .parse()
                    .map_err(|_| parse_error(format!("variable needs an index, e.g. x1, in {text:?}")))?;
                if k == 0 {
                    return Err(parse_error("variables are numbered from x1"));
                }
                out.push(Token::Var(k - 1));
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() {
                    let d = chars[i];
                    let exponent_sign =
                        (d == '-' || d == '+') && matches!(chars[i - 1], 'e' | 'E') && i > start;
                    if d.is_ascii_digit() || matches!(d, '.' | '/' | 'e' | 'E') || exponent_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token::Number(chars[start..i].iter().collect()));
            }
            other => return Err(parse_error(format!("unexpected character {other:?} in {text:?}"))),
        }
    }
    Ok(out)
}

/// Parses a sum of terms `c * x1^a1*..*xn^an` in `dim` variables. The
/// coefficient may be omitted, and factors may appear in any order.
pub fn parse_polynomial<S: Scalar>(text: &str, dim: usize) -> Result<Polynomial<S>> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(parse_error("empty polynomial"));
    }
    let mut result = Polynomial::zero(dim);
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = S::one();
        match tokens[pos] {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -S::one();
                pos += 1;
            }
            _ if first => {}
            _ => return Err(parse_error(format!("expected + or - in {text:?}"))),
        }
        first = false;
        let mut coeff = sign;
        let mut alpha = vec![0u32; dim];
        let mut expect_factor = true;
        while pos < tokens.len() && !matches!(tokens[pos], Token::Plus | Token::Minus) {
            if !expect_factor {
                if tokens[pos] != Token::Star {
                    return Err(parse_error(format!("expected * between factors in {text:?}")));
                }
                pos += 1;
                expect_factor = true;
                continue;
            }
            match &tokens[pos] {
                Token::Number(n) => {
                    coeff = coeff * S::parse_text(n)?;
                    pos += 1;
                }
                Token::Var(k) => {
                    if *k >= dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            got: k + 1,
                        });
                    }
                    pos += 1;
                    let mut power = 1;
                    if pos < tokens.len() && tokens[pos] == Token::Caret {
                        let Some(Token::Number(p)) = tokens.get(pos + 1) else {
                            return Err(parse_error(format!("expected an exponent in {text:?}")));
                        };
                        power = p
                            .parse::<u32>()
                            .map_err(|_| parse_error(format!("bad exponent {p:?}")))?;
                        pos += 2;
                    }
                    alpha[*k] += power;
                }
                _ => return Err(parse_error(format!("unexpected operator in {text:?}"))),
            }
            expect_factor = false;
        }
        if expect_factor {
            return Err(parse_error(format!("dangling operator in {text:?}")));
        }
        result = result.add(&Polynomial::monomial(dim, MultiIndex::new(alpha), coeff))?;
    }
    Ok(result)
}

/// Largest variable index used (1-based), 0 for constants.
pub fn variables_used(text: &str) -> Result<usize> {
    Ok(tokenize(text)?
        .iter()
        .filter_map(|t| match t {
            Token::Var(k) => Some(k + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0))
}

/// Components separated by `;`.
pub fn parse_polymap<S: Scalar>(text: &str, dim: usize) -> Result<PolyMap<S>> {
    let comps = text
        .split(';')
        .map(|c| parse_polynomial(c, dim))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::new(dim, comps)
}

pub fn format_polymap<S: Scalar>(phi: &PolyMap<S>) -> String {
    phi.components()
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientDoc {
    pub alpha: Vec<u32>,
    pub values: Vec<Value>,
}

/// Jet field on disk: every listed `alpha` carries one value per point;
/// omitted multi-indices are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetDoc {
    pub dimension: usize,
    pub order: u32,
    pub points: Vec<Vec<Value>>,
    pub coefficients: Vec<CoefficientDoc>,
}

impl JetDoc {
    pub fn from_field<S: Scalar>(f: &JetField<S>) -> Self {
        JetDoc {
            dimension: f.dim(),
            order: f.order(),
            points: f
                .cloud()
                .points()
                .iter()
                .map(|p| p.iter().map(scalar_to_json).collect())
                .collect(),
            coefficients: f
                .indices()
                .iter()
                .map(|a| CoefficientDoc {
                    alpha: a.exponents().to_vec(),
                    values: (0..f.len()).map(|p| scalar_to_json(&f.get(p, a))).collect(),
                })
                .collect(),
        }
    }

    pub fn to_field<S: Scalar>(&self, tol: f64) -> Result<JetField<S>> {
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(scalar_from_json).collect::<Result<Vec<S>>>())
            .collect::<Result<Vec<_>>>()?;
        let cloud = PointCloud::with_tolerance(self.dimension, points, if S::EXACT { 0.0 } else { tol })?;
        let mut tables = vec![BTreeMap::new(); cloud.len()];
        for c in &self.coefficients {
            if c.alpha.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    got: c.alpha.len(),
                });
            }
            if c.values.len() != cloud.len() {
                return Err(parse_error(format!(
                    "alpha {:?} has {} values for {} points",
                    c.alpha,
                    c.values.len(),
                    cloud.len()
                )));
            }
            let alpha = MultiIndex::new(c.alpha.clone());
            for (p, v) in c.values.iter().enumerate() {
                if tables[p].insert(alpha.clone(), scalar_from_json(v)?).is_some() {
                    return Err(parse_error(format!("alpha {:?} listed twice", c.alpha)));
                }
            }
        }
        JetField::from_sparse(cloud, self.order, tables)
    }
}

/// Group on disk: `type` is `finite` (generator matrices, closed on load) or
/// `circle` (rotation weights plus fixed coordinates). Optional `lie` lists
/// extra Lie algebra generators for the infinitesimal check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<i64>,
    #[serde(default)]
    pub fixed: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lie: Vec<Vec<Vec<Value>>>,
}

fn matrix_from_json<S: Scalar>(rows: &[Vec<Value>]) -> Result<Matrix<S>> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(scalar_from_json).collect::<Result<Vec<S>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn matrix_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

/// A loaded group document.
#[derive(Debug)]
pub struct LoadedGroup<S: Scalar> {
    pub group: ActingGroup<S>,
    pub lie: Vec<Matrix<S>>,
}

impl GroupDoc {
    pub fn load<S: Scalar>(&self, tol: f64, max_order: usize) -> Result<LoadedGroup<S>> {
        let mut lie = self
            .lie
            .iter()
            .map(|m| matrix_from_json(m))
            .collect::<Result<Vec<Matrix<S>>>>()?;
        let group = match self.kind.as_str() {
            "finite" => {
                let gens = self
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(k, m)| {
                        let g = OrthogonalElement::new(matrix_from_json(m)?, tol)?;
                        Ok(match self.labels.get(k) {
                            Some(l) => g.labeled(l.clone()),
                            None => g,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if gens.is_empty() {
                    let n = self
                        .dimension
                        .ok_or_else(|| parse_error("finite group without generators needs a dimension"))?;
                    ActingGroup::Finite(whitney_core::actions::FiniteGroup::trivial(n))
                } else {
                    ActingGroup::Finite(group_closure(&gens, tol, max_order)?)
                }
            }
            "circle" => {
                let weights = if self.weights.is_empty() { vec![1] } else { self.weights.clone() };
                let c = CircleAction::new(weights, self.fixed)?;
                lie.insert(0, c.generator());
                ActingGroup::Circle(c)
            }
            other => return Err(parse_error(format!("unknown group type {other:?}"))),
        };
        if let Some(n) = self.dimension {
            whitney_core::error::check_dim(n, group.dim())?;
        }
        for m in &lie {
            whitney_core::error::check_dim(group.dim(), m.nrows())?;
            if !m.is_antisymmetric(tol) {
                return Err(parse_error("Lie algebra generators must be antisymmetric"));
            }
        }
        Ok(LoadedGroup { group, lie })
    }
}
