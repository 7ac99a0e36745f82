//! Input loaders: decomposition files (optionally with move scripts),
//! point literals, profile files, curve literals and rationals.
//!
//! A decomposition argument is a path to a JSON file or inline JSON.  Two
//! forms are accepted: the plain serialization
//! `{"tail": {"period": [...]}, "overrides": {...}}`, and a script form
//! `{"base": <decomposition or path>, "moves": [{"site": j, "to": "p/q"},
//! ...]}` applying an ordered move list.
//!
//! Point literals are `{"vertex": <decomposition>}` or
//! `{"edge": [<decomposition>, "2/5", <decomposition>]}`, where each
//! decomposition is inline JSON or a file path.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use serde_json::Value;

use pantsgraph::curve::Curve;
use pantsgraph::decomposition::{apply_move, ElementaryMove, PantsDecomposition};
use pantsgraph::metric::Rat;
use pantsgraph::model::SurfaceModel;
use pantsgraph::pspace::{CertifiedPointStream, Clause, PantsPoint};
use pantsgraph::slope::Slope;
use pantsgraph::twist::{CertifiedProfileStream, TwistProfile};

/// Parses the argument as inline JSON, falling back to reading a file.
fn load_json(arg: &str) -> Result<Value> {
    if let Ok(v) = serde_json::from_str(arg) {
        return Ok(v);
    }
    let path = PathBuf::from(arg);
    let text =
        fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_decomposition(model: &SurfaceModel, arg: &str) -> Result<PantsDecomposition> {
    decomposition_from_value(model, &load_json(arg)?)
}

fn decomposition_from_value(model: &SurfaceModel, v: &Value) -> Result<PantsDecomposition> {
    if let Some(base) = v.get("base") {
        let mut x = match base {
            Value::String(path) => load_decomposition(model, path)?,
            other => decomposition_from_value(model, other)?,
        };
        if let Some(moves) = v.get("moves").and_then(Value::as_array) {
            for mv in moves {
                let site = mv["site"]
                    .as_u64()
                    .ok_or_else(|| anyhow!("move entries need a numeric `site`"))?;
                let to: Slope = mv["to"]
                    .as_str()
                    .ok_or_else(|| anyhow!("move entries need a slope string `to`"))?
                    .parse()?;
                let from = x.occupant(site);
                x = apply_move(model, &x, &ElementaryMove { site, from, to })?;
            }
        }
        return Ok(x);
    }
    Ok(PantsDecomposition::from_json(model, v)?)
}

pub fn load_point(model: &SurfaceModel, arg: &str) -> Result<PantsPoint> {
    let v = load_json(arg)?;
    point_from_value(model, &v)
}

fn point_from_value(model: &SurfaceModel, v: &Value) -> Result<PantsPoint> {
    if let Some(vertex) = v.get("vertex") {
        let x = match vertex {
            Value::String(path) => load_decomposition(model, path)?,
            other => decomposition_from_value(model, other)?,
        };
        return Ok(PantsPoint::Vertex(x));
    }
    if let Some(edge) = v.get("edge").and_then(Value::as_array) {
        if edge.len() != 3 {
            return Err(anyhow!("edge literals are [X, \"a\", Y]"));
        }
        let x = match &edge[0] {
            Value::String(path) => load_decomposition(model, path)?,
            other => decomposition_from_value(model, other)?,
        };
        let a = load_rat(
            edge[1]
                .as_str()
                .ok_or_else(|| anyhow!("edge parameter must be a rational string"))?,
        )?;
        let y = match &edge[2] {
            Value::String(path) => load_decomposition(model, path)?,
            other => decomposition_from_value(model, other)?,
        };
        return Ok(PantsPoint::normalize(x, a, y)?);
    }
    Err(anyhow!("point literals are {{\"vertex\": ...}} or {{\"edge\": [...]}}"))
}

pub fn point_to_json(model: &SurfaceModel, p: &PantsPoint) -> Value {
    match p {
        PantsPoint::Vertex(x) => serde_json::json!({ "vertex": x.to_json(model) }),
        PantsPoint::Edge { x, a, y } => serde_json::json!({
            "edge": [x.to_json(model), a.to_string(), y.to_json(model)]
        }),
    }
}

pub fn load_rat(arg: &str) -> Result<Rat> {
    let arg = arg.trim();
    if let Some((num, den)) = arg.split_once('/') {
        let num: i64 = num.trim().parse().context("rational numerator")?;
        let den: i64 = den.trim().parse().context("rational denominator")?;
        if den == 0 {
            return Err(anyhow!("rational denominators must be nonzero"));
        }
        return Ok(Rat::new(num, den));
    }
    let whole: i64 = arg.parse().context("rational value")?;
    Ok(Rat::new(whole, 1))
}

pub fn parse_curve(arg: &str) -> Result<Curve> {
    Ok(Curve::from_str(arg)?)
}

pub fn load_profile(arg: &str) -> Result<TwistProfile> {
    let v = load_json(arg)?;
    profile_from_value(&v)
}

fn profile_from_value(v: &Value) -> Result<TwistProfile> {
    let period: Vec<i64> = match v.get("tail").and_then(|t| t.get("period")) {
        Some(Value::Array(entries)) => entries
            .iter()
            .map(|e| e.as_i64().ok_or_else(|| anyhow!("period entries must be integers")))
            .collect::<Result<_>>()?,
        _ => vec![0],
    };
    let mut overrides = std::collections::BTreeMap::new();
    if let Some(map) = v.get("overrides").and_then(Value::as_object) {
        for (k, e) in map {
            let site: u64 = k.parse().with_context(|| format!("override site `{k}`"))?;
            let exp = e
                .as_i64()
                .ok_or_else(|| anyhow!("override exponents must be integers"))?;
            overrides.insert(site, exp);
        }
    }
    Ok(TwistProfile::new(period, overrides)?)
}

pub fn load_profile_stream(path: &Path) -> Result<CertifiedProfileStream> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text)?;
    let terms = v["terms"]
        .as_array()
        .ok_or_else(|| anyhow!("profile streams need a `terms` array"))?
        .iter()
        .map(profile_from_value)
        .collect::<Result<Vec<_>>>()?;
    let stabilization = stab_pairs(&v["stabilization"])?;
    Ok(CertifiedProfileStream { terms, stabilization })
}

pub fn load_point_stream(model: &SurfaceModel, path: &Path) -> Result<CertifiedPointStream> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text)?;
    let reps = v["reps"]
        .as_array()
        .ok_or_else(|| anyhow!("point streams need a `reps` array"))?
        .iter()
        .map(|entry| -> Result<_> {
            let arr = entry
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| anyhow!("stream reps are [X, \"a\", Y]"))?;
            let x = decomposition_from_value(model, &arr[0])?;
            let a = load_rat(arr[1].as_str().ok_or_else(|| anyhow!("parameter string"))?)?;
            let y = decomposition_from_value(model, &arr[2])?;
            Ok((x, a, y))
        })
        .collect::<Result<Vec<_>>>()?;
    let clause = match v["clause"].as_u64() {
        Some(1) => Clause::Components,
        Some(2) => Clause::VertexShrink,
        Some(3) => Clause::VertexSqueeze,
        _ => return Err(anyhow!("stream clause must be 1, 2 or 3")),
    };
    Ok(CertifiedPointStream {
        reps,
        clause,
        x_stab: stab_pairs(&v["x_stab"])?,
        y_stab: stab_pairs(&v["y_stab"])?,
        a_mod: stab_pairs(&v["a_mod"])?,
        a_limit: load_rat(v["a_limit"].as_str().unwrap_or("0/1"))?,
    })
}

fn stab_pairs(v: &Value) -> Result<Vec<(u32, usize)>> {
    match v {
        Value::Null => Ok(Vec::new()),
        Value::Array(entries) => entries
            .iter()
            .map(|e| {
                let pair = e
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| anyhow!("stabilization entries are [n, index]"))?;
                Ok((
                    pair[0].as_u64().ok_or_else(|| anyhow!("bad index"))? as u32,
                    pair[1].as_u64().ok_or_else(|| anyhow!("bad index"))? as usize,
                ))
            })
            .collect(),
        _ => Err(anyhow!("stabilization must be an array of pairs")),
    }
}
