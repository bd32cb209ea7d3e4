//! Interchange formats.
//!
//! ```text
//! groupoid: {"objects":[id…], "arrows":[{"id","l","r"}…],
//!            "identity":{object:arrow}, "inverse":{arrow:arrow},
//!            "compose":[[g,h,gh]…]}
//! weights:  {"a":{object:"p/q"}, "b":{object:"p/q"}}
//! bibundle: {"elements":[id…], "leftAnchor":{element:object},
//!            "rightAnchor":{element:object},
//!            "leftAction":[[g,b,b′]…], "rightAction":[[b,h,b′]…]}
//! ```
//!
//! Ids may be JSON strings or numbers; numbers are read as their decimal
//! spelling. Rationals are strings `"p/q"` or `"p"`; integer literals are
//! accepted as well.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, WeightData};
use crate::morita::Bibundle;
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

/// Parse JSON text, reporting syntax errors with their position.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::Malformed(format!("line {}, column {}: {}", e.line(), e.column(), e))
    })
}

fn malformed(path: &str, what: &str) -> Error {
    Error::Malformed(format!("{path}: {what}"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| malformed(key, "missing field"))
}

fn id(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(malformed(path, "expected a string or number id")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(path, "expected an array"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| malformed(path, "expected an object"))
}

fn ids(v: &Value, path: &str) -> Result<Vec<String>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| id(x, &format!("{path}[{i}]")))
        .collect()
}

fn pairs(v: &Value, path: &str) -> Result<Vec<(String, String)>> {
    object(v, path)?
        .iter()
        .map(|(k, x)| Ok((k.clone(), id(x, &format!("{path}.{k}"))?)))
        .collect()
}

fn triples(v: &Value, path: &str) -> Result<Vec<(String, String, String)>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{path}[{i}]");
            match array(t, &p)?.as_slice() {
                [a, b, c] => Ok((id(a, &p)?, id(b, &p)?, id(c, &p)?)),
                _ => Err(malformed(&p, "expected a triple")),
            }
        })
        .collect()
}

pub fn groupoid_from_value(v: &Value) -> Result<FiniteGroupoid> {
    let objects = ids(field(v, "objects")?, "objects")?;
    let arrows = array(field(v, "arrows")?, "arrows")?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let p = format!("arrows[{i}]");
            let get = |k: &str| a.get(k).ok_or_else(|| malformed(&p, &format!("missing {k:?}")));
            Ok((id(get("id")?, &p)?, id(get("l")?, &p)?, id(get("r")?, &p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let identity = pairs(field(v, "identity")?, "identity")?;
    let inverse = pairs(field(v, "inverse")?, "inverse")?;
    let compose = triples(field(v, "compose")?, "compose")?;
    FiniteGroupoid::from_tables(objects, arrows, &identity, &inverse, &compose)
}

pub fn groupoid_from_json(text: &str) -> Result<FiniteGroupoid> {
    groupoid_from_value(&parse(text)?)
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> Value {
    let arrows: Vec<Value> = (0..g.arrow_count())
        .map(|a| json!({"id": g.arrow_id(a), "l": g.object_id(g.source(a)), "r": g.object_id(g.target(a))}))
        .collect();
    let identity: Map<String, Value> = (0..g.object_count())
        .map(|x| (g.object_id(x).to_string(), json!(g.arrow_id(g.identity(x)))))
        .collect();
    let inverse: Map<String, Value> = (0..g.arrow_count())
        .map(|a| (g.arrow_id(a).to_string(), json!(g.arrow_id(g.inverse(a)))))
        .collect();
    let compose: Vec<Value> = g
        .composition_entries()
        .into_iter()
        .map(|(a, b, c)| json!([g.arrow_id(a), g.arrow_id(b), g.arrow_id(c)]))
        .collect();
    json!({
        "objects": g.objects(),
        "arrows": arrows,
        "identity": identity,
        "inverse": inverse,
        "compose": compose,
    })
}

fn rational(v: &Value, path: &str) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(malformed(path, "expected a rational string \"p/q\"")),
    };
    parse_rational(&text).ok_or_else(|| malformed(path, &format!("{text:?} is not a rational")))
}

fn weight_map(v: &Value, key: &str, g: &FiniteGroupoid) -> Result<Vec<Rational>> {
    let map = object(field(v, key)?, key)?;
    if let Some(unknown) = map.keys().find(|k| g.object_index(k).is_none()) {
        return Err(Error::UnknownObject(unknown.clone()));
    }
    (0..g.object_count())
        .map(|x| {
            let name = g.object_id(x);
            let p = format!("{key}.{name}");
            rational(map.get(name).ok_or_else(|| malformed(&p, "missing weight"))?, &p)
        })
        .collect()
}

pub fn weights_from_value(v: &Value, g: &FiniteGroupoid) -> Result<WeightData<Rational>> {
    Ok(WeightData::new(weight_map(v, "a", g)?, weight_map(v, "b", g)?))
}

pub fn weights_from_json(text: &str, g: &FiniteGroupoid) -> Result<WeightData<Rational>> {
    weights_from_value(&parse(text)?, g)
}

pub fn weights_to_json(w: &WeightData<Rational>, g: &FiniteGroupoid) -> Value {
    let side = |vals: &[Rational]| -> Map<String, Value> {
        vals.iter()
            .enumerate()
            .map(|(x, q)| (g.object_id(x).to_string(), json!(format_rational(q))))
            .collect()
    };
    json!({"a": side(&w.a), "b": side(&w.b)})
}

/// Map from object id to rational, e.g. an invariant section.
pub fn section_to_json(values: &[Rational], g: &FiniteGroupoid) -> Value {
    Value::Object(
        values
            .iter()
            .enumerate()
            .map(|(x, q)| (g.object_id(x).to_string(), json!(format_rational(q))))
            .collect(),
    )
}

pub fn bibundle_from_value(v: &Value, left: &FiniteGroupoid, right: &FiniteGroupoid) -> Result<Bibundle> {
    let elements = ids(field(v, "elements")?, "elements")?;
    let index = |e: &str, p: &str| {
        elements
            .iter()
            .position(|x| x == e)
            .ok_or_else(|| malformed(p, &format!("unknown element {e}")))
    };
    let anchor = |key: &str, g: &FiniteGroupoid| -> Result<Vec<usize>> {
        let map = pairs(field(v, key)?, key)?;
        let mut out = vec![None; elements.len()];
        for (e, x) in map {
            let i = index(&e, key)?;
            out[i] = Some(g.object_index(&x).ok_or(Error::UnknownObject(x))?);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| malformed(key, &format!("no anchor for {}", elements[i]))))
            .collect()
    };
    let arrow = |g: &FiniteGroupoid, a: &str, p: &str| {
        g.arrow_index(a).ok_or_else(|| malformed(p, &format!("unknown arrow {a}")))
    };
    let la = anchor("leftAnchor", left)?;
    let ra = anchor("rightAnchor", right)?;
    let left_action = triples(field(v, "leftAction")?, "leftAction")?
        .into_iter()
        .map(|(g, b, gb)| Ok((arrow(left, &g, "leftAction")?, index(&b, "leftAction")?, index(&gb, "leftAction")?)))
        .collect::<Result<Vec<_>>>()?;
    let right_action = triples(field(v, "rightAction")?, "rightAction")?
        .into_iter()
        .map(|(b, h, bh)| Ok((index(&b, "rightAction")?, arrow(right, &h, "rightAction")?, index(&bh, "rightAction")?)))
        .collect::<Result<Vec<_>>>()?;
    Bibundle::new(elements, la, ra, left_action, right_action)
}

pub fn bibundle_from_json(text: &str, left: &FiniteGroupoid, right: &FiniteGroupoid) -> Result<Bibundle> {
    bibundle_from_value(&parse(text)?, left, right)
}

pub fn bibundle_to_json(bundle: &Bibundle, left: &FiniteGroupoid, right: &FiniteGroupoid) -> Value {
    let el = bundle.elements();
    let anchor = |f: &dyn Fn(usize) -> usize, g: &FiniteGroupoid| -> Map<String, Value> {
        (0..el.len()).map(|b| (el[b].clone(), json!(g.object_id(f(b))))).collect()
    };
    let left_action: Vec<Value> = bundle
        .left_action_entries()
        .into_iter()
        .map(|(g, b, gb)| json!([left.arrow_id(g), el[b], el[gb]]))
        .collect();
    let right_action: Vec<Value> = bundle
        .right_action_entries()
        .into_iter()
        .map(|(b, h, bh)| json!([el[b], right.arrow_id(h), el[bh]]))
        .collect();
    json!({
        "elements": el,
        "leftAnchor": anchor(&|b| bundle.left_anchor(b), left),
        "rightAnchor": anchor(&|b| bundle.right_anchor(b), right),
        "leftAction": left_action,
        "rightAction": right_action,
    })
}
