//! JSON file formats for spaces, maps, colorings, and whole instances.
//!
//! All payloads are deterministic: object keys come out in a fixed order,
//! exact values are rendered canonically (`"p/q"` rationals, `"a+b*sqrt(m)"`
//! surds), and nothing carries timestamps. Parse errors name the offending
//! field; semantic validation is delegated to the constructors.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::coloring::{ColorKind, Coloring};
use crate::dynamics::{ImagePoints, MultiMap};
use crate::error::{Error, Result};
use crate::geometry::{GridSpace, Point, PointId, Resolution, Subspace};
use crate::harness::{GenModel, GenSpec};
use crate::scalar::{rat_from_str, rat_to_string, Scalar};

fn inv(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| inv(format!("malformed JSON: {e}")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| inv(format!("{what} must be a JSON object")))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| inv(format!("missing field {key:?}")))
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    get(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| inv(format!("field {key:?} must be a nonnegative integer")))
}

fn index_array(v: &Value, what: &str, len: usize) -> Result<Vec<PointId>> {
    let arr = v
        .as_array()
        .ok_or_else(|| inv(format!("{what} must be an array of indices")))?;
    arr.iter()
        .map(|e| {
            let i = e
                .as_u64()
                .ok_or_else(|| inv(format!("{what} entries must be integers")))?
                as usize;
            if i >= len {
                return Err(inv(format!("{what} index {i} out of range (space has {len} points)")));
            }
            Ok(PointId(i))
        })
        .collect()
}

/// Parses `{"dim": n, "points": [[ints]], "X": [indices]}`.
pub fn parse_space(text: &str) -> Result<(Arc<GridSpace>, Subspace)> {
    let v = parse_json(text)?;
    let obj = as_object(&v, "space file")?;
    let dim = get_usize(obj, "dim")?;
    let pts = get(obj, "points")?
        .as_array()
        .ok_or_else(|| inv("field \"points\" must be an array of coordinate lists"))?;
    let mut points = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        let row = p
            .as_array()
            .ok_or_else(|| inv(format!("points[{i}] must be a coordinate list")))?;
        let coords = row
            .iter()
            .map(|c| {
                c.as_i64()
                    .ok_or_else(|| inv(format!("points[{i}] must hold integers")))
            })
            .collect::<Result<Vec<i64>>>()?;
        points.push(coords);
    }
    let space = Arc::new(GridSpace::new(dim, points)?);
    let members = index_array(get(obj, "X")?, "\"X\"", space.len())?;
    let sub = Subspace::new(space.clone(), members)?;
    Ok((space, sub))
}

pub fn space_to_value(space: &GridSpace, x: &Subspace) -> Value {
    json!({
        "dim": space.dim(),
        "points": space.ids().map(|i| space.coords(i).to_vec()).collect::<Vec<_>>(),
        "X": x.members().iter().map(|m| m.0).collect::<Vec<_>>(),
    })
}

fn parse_image_entry(v: &Value, space: &GridSpace, ctx: &str) -> Result<Point> {
    match v {
        Value::Number(_) => {
            let i = v
                .as_u64()
                .ok_or_else(|| inv(format!("{ctx}: image index must be nonnegative")))?
                as usize;
            if i >= space.len() {
                return Err(inv(format!("{ctx}: image index {i} out of range")));
            }
            Ok(space.point(PointId(i)))
        }
        Value::Array(coords) => {
            let parsed = coords
                .iter()
                .map(|c| match c {
                    Value::Number(_) => c
                        .as_i64()
                        .map(Scalar::from_int)
                        .ok_or_else(|| inv(format!("{ctx}: coordinate must be an integer"))),
                    Value::String(s) => Scalar::from_str(s),
                    _ => Err(inv(format!("{ctx}: coordinate must be a number or string"))),
                })
                .collect::<Result<Vec<Scalar>>>()?;
            if parsed.len() != space.dim() {
                return Err(Error::DimMismatch {
                    expected: space.dim(),
                    found: parsed.len(),
                });
            }
            Ok(Point::new(parsed))
        }
        _ => Err(inv(format!(
            "{ctx}: image entries must be indices or coordinate lists"
        ))),
    }
}

/// Parses `{"k": k, "X": [indices], "images": {"i": [entries]}}` against an
/// already-loaded space. Entries are grid indices or explicit coordinate
/// lists (integers or exact scalar strings).
pub fn parse_map(text: &str, space: &Arc<GridSpace>) -> Result<MultiMap> {
    let v = parse_json(text)?;
    let obj = as_object(&v, "map file")?;
    let k = get_usize(obj, "k")?;
    let members = index_array(get(obj, "X")?, "\"X\"", space.len())?;
    let domain = Subspace::new(space.clone(), members)?;
    let images = as_object(get(obj, "images")?, "field \"images\"")?;
    let mut table = BTreeMap::new();
    for (key, val) in images {
        let idx: usize = key
            .parse()
            .map_err(|_| inv(format!("images key {key:?} is not an index")))?;
        if idx >= space.len() {
            return Err(inv(format!("images key {idx} out of range")));
        }
        let ctx = format!("images.{key}");
        let arr = val
            .as_array()
            .ok_or_else(|| inv(format!("{ctx} must be an array")))?;
        let points = arr
            .iter()
            .map(|e| parse_image_entry(e, space, &ctx))
            .collect::<Result<Vec<Point>>>()?;
        table.insert(PointId(idx), ImagePoints::resolve(space, points));
    }
    MultiMap::new(domain, k, table)
}

pub fn map_to_value(f: &MultiMap) -> Value {
    let mut images = Map::new();
    for &x in f.domain().members() {
        let img = f.image(x).expect("domain member");
        let mut entries: Vec<Value> = img.ids().iter().map(|y| json!(y.0)).collect();
        for p in img.free() {
            let coords: Vec<Value> = p
                .coords()
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect();
            entries.push(Value::Array(coords));
        }
        images.insert(x.0.to_string(), Value::Array(entries));
    }
    json!({
        "k": f.k(),
        "X": f.domain().members().iter().map(|m| m.0).collect::<Vec<_>>(),
        "images": images,
    })
}

/// Parses a self-contained `{"space": ..., "map": ...}` instance.
pub fn parse_instance(text: &str) -> Result<MultiMap> {
    let v = parse_json(text)?;
    let obj = as_object(&v, "instance file")?;
    let (space, _) = parse_space(&get(obj, "space")?.to_string())?;
    parse_map(&get(obj, "map")?.to_string(), &space)
}

pub fn instance_to_value(f: &MultiMap) -> Value {
    json!({
        "space": space_to_value(f.ambient(), f.domain()),
        "map": map_to_value(f),
    })
}

/// Parses `{"eps": "p/q", "kind": "plain|bright|nbright", "N": int?,
/// "sets": [[indices]]}`.
pub fn parse_coloring(text: &str, space_len: usize) -> Result<Coloring> {
    let v = parse_json(text)?;
    let obj = as_object(&v, "coloring file")?;
    let eps = get(obj, "eps")?
        .as_str()
        .ok_or_else(|| inv("field \"eps\" must be a rational string"))
        .and_then(rat_from_str)?;
    let resolution = Resolution::new(eps)?;
    let kind = match get(obj, "kind")?.as_str() {
        Some("plain") => ColorKind::Plain,
        Some("bright") => ColorKind::Bright,
        Some("nbright") => {
            let n = get_usize(obj, "N")?;
            if n == 0 {
                return Err(inv("field \"N\" must be positive"));
            }
            ColorKind::NBright(n)
        }
        _ => return Err(inv("field \"kind\" must be \"plain\", \"bright\", or \"nbright\"")),
    };
    let sets = get(obj, "sets")?
        .as_array()
        .ok_or_else(|| inv("field \"sets\" must be an array of index arrays"))?
        .iter()
        .enumerate()
        .map(|(i, s)| index_array(s, &format!("sets[{i}]"), space_len))
        .collect::<Result<Vec<_>>>()?;
    Ok(Coloring::new(sets, resolution, kind))
}

pub fn coloring_to_value(c: &Coloring) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "eps".into(),
        Value::String(rat_to_string(c.resolution().eps())),
    );
    let kind = match c.kind() {
        ColorKind::Plain => "plain",
        ColorKind::Bright => "bright",
        ColorKind::NBright(n) => {
            obj.insert("N".into(), json!(n));
            "nbright"
        }
    };
    obj.insert("kind".into(), Value::String(kind.into()));
    obj.insert(
        "sets".into(),
        json!(c
            .sets()
            .iter()
            .map(|s| s.iter().map(|p| p.0).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    Value::Object(obj)
}

pub fn spec_to_value(spec: &GenSpec) -> Value {
    let mut obj = Map::new();
    obj.insert("model".into(), json!(spec.model.name()));
    if let GenModel::PlantedCycles(lengths) = &spec.model {
        obj.insert("lengths".into(), json!(lengths));
    }
    obj.insert("dim".into(), json!(spec.dim));
    obj.insert("size".into(), json!(spec.size));
    obj.insert("k".into(), json!(spec.k));
    obj.insert("seed".into(), json!(spec.seed));
    Value::Object(obj)
}

pub fn parse_spec(v: &Value) -> Result<GenSpec> {
    let obj = as_object(v, "generator spec")?;
    let model = match get(obj, "model")?.as_str() {
        Some("uniform_k") => GenModel::UniformK,
        Some("fpf_uniform") => GenModel::FpfUniform,
        Some("planted_cycles") => {
            let lengths = get(obj, "lengths")?
                .as_array()
                .ok_or_else(|| inv("field \"lengths\" must be an array"))?
                .iter()
                .map(|l| {
                    l.as_u64()
                        .map(|v| v as usize)
                        .ok_or_else(|| inv("cycle lengths must be integers"))
                })
                .collect::<Result<Vec<_>>>()?;
            GenModel::PlantedCycles(lengths)
        }
        Some("geometric") => GenModel::Geometric,
        _ => return Err(inv("unknown generator model")),
    };
    Ok(GenSpec {
        model,
        dim: get_usize(obj, "dim")?,
        size: get_usize(obj, "size")?,
        k: get_usize(obj, "k")?,
        seed: get(obj, "seed")?
            .as_u64()
            .ok_or_else(|| inv("field \"seed\" must be a nonnegative integer"))?,
    })
}

/// Self-contained generator output: the parameters that produced the
/// instance plus the instance itself. This is both the `gen` subcommand's
/// stdout and the golden fixture format.
pub fn fixture_to_value(spec: &GenSpec, f: &MultiMap) -> Value {
    json!({
        "spec": spec_to_value(spec),
        "instance": instance_to_value(f),
    })
}

/// Canonical text rendering used for files and stdout: pretty, stable key
/// order, trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are tree-shaped");
    s.push('\n');
    s
}
