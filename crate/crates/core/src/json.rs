//! JSON formats for complexes, (co)chains, layers and descent tuples.
//!
//! Simplex keys are vertex indices (positions in `"vertices"`) joined by
//! `","`; coefficients are `"num/den"` strings.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::complex::{simplex_key, Chain, Cochain, Kind, Simplex, SimplicialComplex, Sparse};
use crate::cover::Layer;
use crate::currents::{DualGaugeCurrent, DualGaugeField, GaugeCurrent};
use crate::cycles::CycleDecomposition;
use crate::error::{Error, Result};
use crate::gauge::GaugeField;
use crate::rmodz::{format_q, parse_q, Q};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_key(s: &str) -> Result<Simplex> {
    let mut v: Simplex = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| perr(format!("bad simplex key {s:?}"))))
        .collect::<Result<_>>()?;
    let sorted = v.windows(2).all(|w| w[0] < w[1]);
    if !sorted {
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(perr(format!("repeated vertex in key {s:?}")));
        }
    }
    Ok(v)
}

fn coeff(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Q::from_integer(i.into()))
            .ok_or_else(|| perr(format!("non-integer numeric coefficient {n}"))),
        _ => Err(perr("coefficient must be a string \"num/den\" or an integer")),
    }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| perr(format!("missing field {name:?}")))
}

fn uint(v: &Value, name: &str) -> Result<usize> {
    field(v, name)?.as_u64().map(|x| x as usize).ok_or_else(|| perr(format!("{name:?} must be a nonnegative integer")))
}

fn int(v: &Value, name: &str) -> Result<i64> {
    field(v, name)?.as_i64().ok_or_else(|| perr(format!("{name:?} must be an integer")))
}

pub fn complex_to_json(k: &SimplicialComplex) -> Value {
    let mut simplices = Map::new();
    for d in 0..=k.dim() {
        simplices.insert(d.to_string(), json!(k.simplices(d)));
    }
    let orientation: Map<String, Value> =
        k.orientation().iter().map(|(s, o)| (simplex_key(s), json!(o))).collect();
    json!({
        "n": k.dim(),
        "vertices": k.names(),
        "simplices": simplices,
        "orientation": orientation,
    })
}

fn vertex_ref(v: &Value, names: &BTreeMap<&str, usize>) -> Result<usize> {
    match v {
        Value::Number(x) => x.as_u64().map(|x| x as usize).ok_or_else(|| perr("bad vertex index")),
        Value::String(s) => names.get(s.as_str()).copied().ok_or_else(|| perr(format!("unknown vertex {s:?}"))),
        _ => Err(perr("vertices are indices or names")),
    }
}

/// Reads the complex format; top simplices generate the complex and the
/// orientation is installed if given, computed otherwise.
pub fn complex_from_json(v: &Value) -> Result<SimplicialComplex> {
    let n = uint(v, "n")?;
    let names: Vec<String> = field(v, "vertices")?
        .as_array()
        .ok_or_else(|| perr("\"vertices\" must be an array"))?
        .iter()
        .map(|x| match x {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    let lookup: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let simplices = field(v, "simplices")?;
    let tops = simplices
        .get(n.to_string())
        .and_then(|x| x.as_array())
        .ok_or_else(|| perr(format!("missing simplices of dimension {n}")))?;
    let facets: Vec<Simplex> = tops
        .iter()
        .map(|s| {
            s.as_array()
                .ok_or_else(|| perr("a simplex is an array of vertices"))?
                .iter()
                .map(|x| vertex_ref(x, &lookup))
                .collect::<Result<Simplex>>()
        })
        .collect::<Result<_>>()?;
    let mut k = SimplicialComplex::from_facets(names, &facets)?;
    if k.dim() != n {
        return Err(Error::InvalidComplex(format!("declared n={n} but facets have dimension {}", k.dim())));
    }
    match v.get("orientation").and_then(|o| o.as_object()) {
        Some(o) if !o.is_empty() => {
            let mut map = BTreeMap::new();
            for (key, val) in o {
                let s = parse_key(key)?;
                let sign = val.as_i64().ok_or_else(|| perr("orientation values are ±1"))?;
                map.insert(s, sign);
            }
            k.set_orientation(map)?;
        }
        _ => k.orient()?,
    }
    Ok(k)
}

pub fn sparse_to_json<K: Kind>(c: &Sparse<K>) -> Value {
    let coeffs: Map<String, Value> = c.iter().map(|(s, x)| (simplex_key(s), json!(format_q(x)))).collect();
    json!({ "degree": c.degree(), "coeffs": coeffs })
}

pub fn sparse_from_json<K: Kind>(v: &Value) -> Result<Sparse<K>> {
    let degree = uint(v, "degree")?;
    let coeffs = field(v, "coeffs")?.as_object().ok_or_else(|| perr("\"coeffs\" must be an object"))?;
    let mut out = Sparse::new(degree);
    for (key, x) in coeffs {
        let s = parse_key(key)?;
        if s.len() != degree + 1 {
            return Err(perr(format!("simplex {key:?} does not have degree {degree}")));
        }
        out.add_term(s, &coeff(x)?);
    }
    Ok(out)
}

/// Integer Čech cochains as a plain `{"key": int}` map.
fn int_map_to_json<K: Kind>(c: &Sparse<K>) -> Value {
    let m: Map<String, Value> = c
        .iter()
        .map(|(s, x)| {
            let v = if x.is_integer() { json!(x.to_integer().to_string().parse::<i64>().ok()) } else { json!(format_q(x)) };
            (simplex_key(s), v)
        })
        .collect();
    Value::Object(m)
}

fn int_map_from_json<K: Kind>(v: &Value, degree: usize) -> Result<Sparse<K>> {
    let obj = v.as_object().ok_or_else(|| perr("expected an object of simplex keys"))?;
    let mut out = Sparse::new(degree);
    for (key, x) in obj {
        let s = parse_key(key)?;
        if s.len() != degree + 1 {
            return Err(perr(format!("simplex {key:?} does not have degree {degree}")));
        }
        out.add_term(s, &coeff(x)?);
    }
    Ok(out)
}

pub fn layer_to_json<K: Kind>(l: &Layer<K>) -> Value {
    let entries: Map<String, Value> = l.iter().map(|(s, x)| (simplex_key(s), sparse_to_json(x))).collect();
    json!({ "cech_degree": l.cech_degree, "de_rham_degree": l.degree, "entries": entries })
}

pub fn layer_from_json<K: Kind>(v: &Value) -> Result<Layer<K>> {
    let cech = uint(v, "cech_degree")?;
    let degree = uint(v, "de_rham_degree")?;
    let entries = field(v, "entries")?.as_object().ok_or_else(|| perr("\"entries\" must be an object"))?;
    let mut out = Layer::new(cech, degree);
    for (key, x) in entries {
        let s = parse_key(key)?;
        if s.len() != cech + 1 {
            return Err(perr(format!("index {key:?} does not have Čech degree {cech}")));
        }
        let piece: Sparse<K> = sparse_from_json(x)?;
        if !piece.is_zero() && piece.degree() != degree {
            return Err(perr(format!("entry {key:?} has degree {} not {degree}", piece.degree())));
        }
        out.add_to(s, &piece);
    }
    Ok(out)
}

fn layers_from_json<K: Kind>(v: &Value) -> Result<Vec<Layer<K>>> {
    field(v, "layers")?
        .as_array()
        .ok_or_else(|| perr("\"layers\" must be an array"))?
        .iter()
        .map(layer_from_json)
        .collect()
}

pub fn field_to_json(a: &GaugeField) -> Value {
    json!({
        "p": a.p,
        "layers": a.layers.iter().map(layer_to_json).collect::<Vec<_>>(),
        "top": int_map_to_json(&a.top),
    })
}

pub fn field_from_json(v: &Value) -> Result<GaugeField> {
    let p = int(v, "p")?;
    if p < -1 {
        return Err(perr("\"p\" must be at least -1"));
    }
    let layers = layers_from_json(v)?;
    if layers.len() != (p + 1) as usize {
        return Err(perr(format!("a {p}-field has {} layers", p + 1)));
    }
    let top: Cochain = int_map_from_json(field(v, "top")?, (p + 1) as usize)?;
    Ok(GaugeField { p, layers, top })
}

pub fn current_to_json(c: &GaugeCurrent) -> Value {
    json!({
        "q": c.q,
        "layers": c.layers.iter().map(layer_to_json).collect::<Vec<_>>(),
        "top": int_map_to_json(&c.top),
    })
}

pub fn current_from_json(v: &Value) -> Result<GaugeCurrent> {
    let q = int(v, "q")?;
    let layers = layers_from_json(v)?;
    let top: Cochain = int_map_from_json(field(v, "top")?, layers.len())?;
    Ok(GaugeCurrent { q, layers, top })
}

pub fn dual_field_to_json(c: &DualGaugeField) -> Value {
    json!({
        "q": c.q,
        "layers": c.layers.iter().map(layer_to_json).collect::<Vec<_>>(),
        "bottom": int_map_to_json(&c.bottom),
    })
}

pub fn dual_field_from_json(v: &Value) -> Result<DualGaugeField> {
    let q = int(v, "q")?;
    let layers = layers_from_json(v)?;
    let p = layers.len().checked_sub(1).ok_or_else(|| perr("no layers"))?;
    let bottom: Chain = int_map_from_json(field(v, "bottom")?, p)?;
    Ok(DualGaugeField { q, layers, bottom })
}

pub fn dual_current_to_json(c: &DualGaugeCurrent) -> Value {
    json!({
        "p": c.p,
        "layers": c.layers.iter().map(layer_to_json).collect::<Vec<_>>(),
        "bottom": int_map_to_json(&c.bottom),
    })
}

pub fn dual_current_from_json(v: &Value) -> Result<DualGaugeCurrent> {
    let p = uint(v, "p")?;
    let layers = layers_from_json(v)?;
    let bottom: Chain = int_map_from_json(field(v, "bottom")?, p)?;
    Ok(DualGaugeCurrent { p, layers, bottom })
}

pub fn decomposition_to_json(d: &CycleDecomposition) -> Value {
    json!({
        "p": d.p,
        "layers": d.layers.iter().map(layer_to_json).collect::<Vec<_>>(),
        "bottom": int_map_to_json(&d.bottom),
    })
}

pub fn decomposition_from_json(v: &Value) -> Result<CycleDecomposition> {
    let p = uint(v, "p")?;
    let layers = layers_from_json(v)?;
    let bottom: Chain = int_map_from_json(field(v, "bottom")?, 0)?;
    Ok(CycleDecomposition { p, layers, bottom })
}
