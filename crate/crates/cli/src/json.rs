//! A minimal JSON tree with a fixed float format (`{:.16e}`, i.e. 17
//! significant digits), so identical inputs give byte-identical output.

use std::fmt::{self, Write};

use equiquot::numeric::format_rational;
use equiquot::{Matrix, Partition, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj<K: Into<String>>(fields: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn floats(v: &[f64]) -> Json {
        Json::Arr(v.iter().map(|&x| Json::Float(x)).collect())
    }

    pub fn matrix(m: &Matrix<f64>) -> Json {
        Json::Arr((0..m.rows()).map(|i| Json::floats(m.row(i))).collect())
    }

    /// Exact entries as strings (`"3/2"`).
    pub fn exact_matrix(m: &Matrix<Rational>) -> Json {
        Json::Arr(
            (0..m.rows())
                .map(|i| Json::Arr(m.row(i).iter().map(|x| Json::Str(format_rational(x))).collect()))
                .collect(),
        )
    }

    pub fn partition(p: &Partition) -> Json {
        Json::Arr(p.cells().iter().map(|c| Json::indices(c)).collect())
    }

    pub fn indices(v: &[usize]) -> Json {
        Json::Arr(v.iter().map(|&i| Json::Int(i as i64)).collect())
    }

    pub fn opt(v: Option<Json>) -> Json {
        v.unwrap_or(Json::Null)
    }
}

impl From<bool> for Json {
    fn from(b: bool) -> Self {
        Json::Bool(b)
    }
}

impl From<usize> for Json {
    fn from(v: usize) -> Self {
        Json::Int(v as i64)
    }
}

impl From<f64> for Json {
    fn from(v: f64) -> Self {
        Json::Float(v)
    }
}

impl From<&str> for Json {
    fn from(s: &str) -> Self {
        Json::Str(s.to_string())
    }
}

impl From<String> for Json {
    fn from(s: String) -> Self {
        Json::Str(s)
    }
}

fn write_str(f: &mut impl Write, s: &str) -> fmt::Result {
    f.write_str(&serde_json::to_string(s).expect("strings serialize"))
}

impl fmt::Display for Json {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Json::Null => f.write_str("null"),
            Json::Bool(b) => write!(f, "{b}"),
            Json::Int(i) => write!(f, "{i}"),
            Json::Float(x) if x.is_finite() => write!(f, "{x:.16e}"),
            Json::Float(_) => f.write_str("null"),
            Json::Str(s) => write_str(f, s),
            Json::Arr(items) => {
                f.write_char('[')?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_char(']')
            }
            Json::Obj(fields) => {
                f.write_char('{')?;
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write_str(f, k)?;
                    write!(f, ":{v}")?;
                }
                f.write_char('}')
            }
        }
    }
}
