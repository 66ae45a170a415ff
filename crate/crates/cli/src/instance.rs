//! Instance file format: JSON with rationals written as "p/q" strings and
//! matrices as row-major nested arrays. Parse failures carry the path of the
//! offending field so scripts can pinpoint bad input.

use std::fmt;

use derham_core::{Generator, GeneratorKind, RatMatrix, Rational, Representation};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(path: &str, message: impl fmt::Display) -> ParseError {
    ParseError { path: path.to_string(), message: message.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub name: String,
    pub dimension: usize,
    pub gram: RatMatrix,
    pub generators: Vec<Generator>,
    /// Named rival decompositions, each part given by a raw basis matrix.
    /// Kept verbatim so export reproduces the file exactly.
    pub decompositions: Vec<(String, Vec<RatMatrix>)>,
}

impl InstanceFile {
    pub fn representation(&self) -> Result<Representation, derham_core::holonomy_action::ActionError> {
        Representation::from_gram(self.gram.clone(), self.generators.clone())
    }

    pub fn decomposition(&self, name: &str) -> Option<&[RatMatrix]> {
        self.decompositions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, parts)| parts.as_slice())
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| err("(file)", e))?;
    let top = as_object(&value, "(file)")?;

    let name = string_field(top, "name")?.to_string();
    let dimension = count_field(top, "dimension")?;

    let gram = matrix_field(field(top, "gram")?, "gram", Some(dimension), dimension)?;

    let mut generators = Vec::new();
    let gens = as_array(field(top, "generators")?, "generators")?;
    for (i, g) in gens.iter().enumerate() {
        let path = format!("generators[{i}]");
        let obj = as_object(g, &path)?;
        let kind_path = format!("{path}.kind");
        let kind = match field_at(obj, &path, "kind").and_then(|v| as_string(v, &kind_path))? {
            "group" => GeneratorKind::Group,
            "infinitesimal" => GeneratorKind::Infinitesimal,
            other => {
                return Err(err(
                    &kind_path,
                    format!("unknown generator kind {other:?} (want \"group\" or \"infinitesimal\")"),
                ))
            }
        };
        let matrix = matrix_field(
            field_at(obj, &path, "matrix")?,
            &format!("{path}.matrix"),
            Some(dimension),
            dimension,
        )?;
        generators.push(Generator { kind, matrix });
    }

    let mut decompositions = Vec::new();
    if let Some(raw) = top.get("decompositions") {
        let map = as_object(raw, "decompositions")?;
        for (decomp_name, parts_value) in map {
            let path = format!("decompositions.{decomp_name}");
            let parts_array = as_array(parts_value, &path)?;
            let mut parts = Vec::new();
            for (j, part) in parts_array.iter().enumerate() {
                let part_path = format!("{path}[{j}]");
                parts.push(matrix_field(part, &part_path, None, dimension)?);
            }
            decompositions.push((decomp_name.clone(), parts));
        }
    }

    Ok(InstanceFile { name, dimension, gram, generators, decompositions })
}

pub fn export_instance(file: &InstanceFile) -> String {
    let mut top = Map::new();
    top.insert("name".into(), Value::String(file.name.clone()));
    top.insert("dimension".into(), Value::from(file.dimension as u64));
    top.insert("gram".into(), matrix_value(&file.gram));

    let generators: Vec<Value> = file
        .generators
        .iter()
        .map(|g| {
            let mut obj = Map::new();
            let kind = match g.kind {
                GeneratorKind::Group => "group",
                GeneratorKind::Infinitesimal => "infinitesimal",
            };
            obj.insert("kind".into(), Value::String(kind.into()));
            obj.insert("matrix".into(), matrix_value(&g.matrix));
            Value::Object(obj)
        })
        .collect();
    top.insert("generators".into(), Value::Array(generators));

    if !file.decompositions.is_empty() {
        let mut map = Map::new();
        for (name, parts) in &file.decompositions {
            let parts: Vec<Value> = parts.iter().map(matrix_value).collect();
            map.insert(name.clone(), Value::Array(parts));
        }
        top.insert("decompositions".into(), Value::Object(map));
    }

    crate::render::pretty(&Value::Object(top))
}

pub fn matrix_value(m: &RatMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| {
            let row: Vec<Value> = (0..m.cols())
                .map(|c| Value::String(m.get(r, c).to_string()))
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, ParseError> {
    v.as_object().ok_or_else(|| err(path, "expected a JSON object"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| err(path, "expected a JSON array"))
}

fn as_string<'v>(v: &'v Value, path: &str) -> Result<&'v str, ParseError> {
    v.as_str().ok_or_else(|| err(path, "expected a JSON string"))
}

fn field<'v>(top: &'v Map<String, Value>, key: &str) -> Result<&'v Value, ParseError> {
    top.get(key).ok_or_else(|| err(key, "missing field"))
}

fn field_at<'v>(
    obj: &'v Map<String, Value>,
    path: &str,
    key: &str,
) -> Result<&'v Value, ParseError> {
    obj.get(key).ok_or_else(|| err(&format!("{path}.{key}"), "missing field"))
}

fn string_field<'v>(top: &'v Map<String, Value>, key: &str) -> Result<&'v str, ParseError> {
    as_string(field(top, key)?, key)
}

fn count_field(top: &Map<String, Value>, key: &str) -> Result<usize, ParseError> {
    let v = field(top, key)?;
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| err(key, "expected a nonnegative integer"))
}

fn rational(v: &Value, path: &str) -> Result<Rational, ParseError> {
    let s = as_string(v, path)?;
    s.parse::<Rational>()
        .map_err(|e| err(path, format!("invalid rational {s:?}: {e}")))
}

fn matrix_field(
    v: &Value,
    path: &str,
    rows_expected: Option<usize>,
    cols_expected: usize,
) -> Result<RatMatrix, ParseError> {
    let rows_value = as_array(v, path)?;
    if let Some(n) = rows_expected {
        if rows_value.len() != n {
            return Err(err(path, format!("expected {n} rows, found {}", rows_value.len())));
        }
    }
    if rows_value.is_empty() {
        return Err(err(path, "matrix needs at least one row"));
    }
    let mut rows = Vec::with_capacity(rows_value.len());
    for (i, row_value) in rows_value.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = as_array(row_value, &row_path)?;
        if entries.len() != cols_expected {
            return Err(err(
                &row_path,
                format!("expected {cols_expected} entries, found {}", entries.len()),
            ));
        }
        let mut row = Vec::with_capacity(entries.len());
        for (j, entry) in entries.iter().enumerate() {
            row.push(rational(entry, &format!("{row_path}[{j}]"))?);
        }
        rows.push(row);
    }
    Ok(RatMatrix::from_rows(rows))
}
