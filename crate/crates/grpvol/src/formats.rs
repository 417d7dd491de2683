//! JSON file formats for triangulations, cover specifications, cochains,
//! coset tables and presentation maps. Rationals travel as `"p/q"` strings
//! in lowest terms.

use std::collections::BTreeMap;

use grpvol_core::linalg::Rational;
use grpvol_core::presentations::{Presentation, Word};
use grpvol_core::simplicial::{Cochain, CoverSpec, Triangulation};
use grpvol_core::subgroups::CosetTable;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct FormatError(pub String);

impl FormatError {
    fn new(msg: impl ToString) -> Self {
        FormatError(msg.to_string())
    }
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(FormatError::new)
}

/// Accepts `"p/q"`, `"p"` or a JSON integer.
pub fn parse_rational(s: &str) -> Result<Rational, FormatError> {
    let s = s.trim();
    let bad = || FormatError(format!("invalid rational `{}`", s));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(FormatError(format!("zero denominator in `{}`", s)));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn rational_value(v: &Value) -> Result<Rational, FormatError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(FormatError(format!("expected a rational string, got {}", other))),
    }
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationFile {
    pub vertices: usize,
    pub tetrahedra: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Certified first homology, for generated fixtures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<String>,
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation, FormatError> {
    let f: TriangulationFile = from_json(text)?;
    Triangulation::new(f.vertices, &f.tetrahedra).map_err(FormatError::new)
}

pub fn triangulation_json(t: &Triangulation, name: Option<&str>, h1: Option<&str>) -> Value {
    let mut m = Map::new();
    if let Some(n) = name {
        m.insert("name".into(), json!(n));
    }
    if let Some(h) = h1 {
        m.insert("h1".into(), json!(h));
    }
    m.insert("vertices".into(), json!(t.vertex_count()));
    m.insert("tetrahedra".into(), json!(t.tetrahedra()));
    Value::Object(m)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverSpecFile {
    d: usize,
    #[serde(default)]
    labels: BTreeMap<String, i64>,
}

fn edge_key(key: &str) -> Result<(usize, usize), FormatError> {
    let bad = || FormatError(format!("edge key `{}` is not of the form \"u-v\"", key));
    let (u, v) = key.split_once('-').ok_or_else(bad)?;
    let u = u.trim().parse().map_err(|_| bad())?;
    let v = v.trim().parse().map_err(|_| bad())?;
    if u >= v {
        return Err(FormatError(format!("edge key `{}` must have u < v", key)));
    }
    Ok((u, v))
}

fn cover_spec_from(f: CoverSpecFile) -> Result<CoverSpec, FormatError> {
    let labels = f
        .labels
        .iter()
        .map(|(k, &v)| edge_key(k).map(|e| (e, v)))
        .collect::<Result<Vec<_>, _>>()?;
    CoverSpec::new(f.d, labels).map_err(FormatError::new)
}

pub fn parse_cover_spec(text: &str) -> Result<CoverSpec, FormatError> {
    cover_spec_from(from_json(text)?)
}

/// A JSON array of cover specifications.
pub fn parse_cover_family(text: &str) -> Result<Vec<CoverSpec>, FormatError> {
    let files: Vec<CoverSpecFile> = from_json(text)?;
    files.into_iter().map(cover_spec_from).collect()
}

pub fn cover_spec_json(spec: &CoverSpec) -> Value {
    let labels: Map<String, Value> = spec
        .labels()
        .iter()
        .map(|(e, &k)| (format!("{}-{}", e[0], e[1]), json!(k)))
        .collect();
    json!({"d": spec.degree(), "labels": labels})
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainFile {
    degree: usize,
    #[serde(default)]
    values: BTreeMap<String, Value>,
}

pub fn parse_cochain(text: &str) -> Result<Cochain, FormatError> {
    let f: CochainFile = from_json(text)?;
    let mut values = Vec::with_capacity(f.values.len());
    for (k, v) in &f.values {
        let i: usize = k
            .trim()
            .parse()
            .map_err(|_| FormatError(format!("simplex index `{}` is not a nonnegative integer", k)))?;
        values.push((i, rational_value(v)?));
    }
    Cochain::new(f.degree, values).map_err(FormatError::new)
}

/// Keys in increasing numeric order; zero values omitted.
pub fn cochain_json(c: &Cochain) -> Value {
    let values: Map<String, Value> = c
        .values()
        .iter()
        .map(|(i, v)| (i.to_string(), json!(rational_string(v))))
        .collect();
    json!({"degree": c.degree(), "values": values})
}

/// `{"index": d, "action": {"gen": [images…]}}`, cosets 0-indexed.
pub fn coset_table_json(t: &CosetTable) -> Value {
    let p = t.base();
    let action: Map<String, Value> = t
        .action()
        .iter()
        .enumerate()
        .map(|(g, images)| (p.generator_name(g).to_string(), json!(images)))
        .collect();
    json!({"index": t.index(), "action": action})
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    images: BTreeMap<String, String>,
}

/// Generator images of a map `source → target`:
/// `{"images": {"a": "x y^-1", …}}` with words over the target's generators.
pub fn parse_map(text: &str, source: &Presentation, target: &Presentation) -> Result<Vec<Word>, FormatError> {
    let f: MapFile = from_json(text)?;
    if let Some(unknown) = f.images.keys().find(|k| source.generator_id(k).is_none()) {
        return Err(FormatError(format!("`{}` is not a source generator", unknown)));
    }
    source
        .generators()
        .iter()
        .map(|g| {
            let w = f
                .images
                .get(&g.name)
                .ok_or_else(|| FormatError(format!("no image for generator `{}`", g.name)))?;
            target
                .parse_word(w)
                .map_err(|e| FormatError(format!("image of `{}`: {}", g.name, e)))
        })
        .collect()
}
