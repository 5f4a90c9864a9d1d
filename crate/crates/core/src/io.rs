//! Instance files: graphs (JSON or DIMACS-like), sponge lists, classical
//! specs, ±1 weightings, terminal sets and explicit jump systems.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::jump::ExplicitJumpSystem;
use crate::sponge::{ClassicalSpec, Sponge, SpongeSpec, SpongeVector};
use crate::tjoin::PmWeighting;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}

/// A graph from JSON (`{"n", "edges", "labels"?}`) or DIMACS-like text
/// (`p edge n m` then `e u v`, 1-indexed). The format is detected from the
/// first non-blank character.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        graph_from_json(&parse_json(text)?)
    } else {
        parse_dimacs(text)
    }
}

fn as_index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("{what}: expected a non-negative integer, got {v}")))
}

fn as_int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(format!("{what}: expected an integer, got {v}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what}: expected an array")))
}

/// Resolves a vertex given as an index or as a label.
pub fn vertex_ref(g_labels: Option<&[String]>, n: usize, v: &Value) -> Result<Vertex> {
    let idx = match v {
        Value::String(s) => {
            let labels = g_labels.ok_or_else(|| parse_err(format!("vertex {s:?} given by name but the graph has no labels")))?;
            labels.iter().position(|l| l == s).ok_or_else(|| parse_err(format!("unknown vertex {s:?}")))?
        }
        _ => as_index(v, "vertex")?,
    };
    if idx >= n {
        return Err(Error::VertexOutOfRange { vertex: idx, n });
    }
    Ok(idx)
}

pub fn graph_from_json(v: &Value) -> Result<Graph> {
    let obj = v.as_object().ok_or_else(|| parse_err("graph: expected an object"))?;
    for key in obj.keys() {
        if !["n", "edges", "labels"].contains(&key.as_str()) {
            return Err(parse_err(format!("graph: unknown field {key:?}")));
        }
    }
    let labels: Option<Vec<String>> = match obj.get("labels") {
        None | Some(Value::Null) => None,
        Some(l) => Some(
            as_array(l, "labels")?
                .iter()
                .map(|s| s.as_str().map(str::to_owned).ok_or_else(|| parse_err("labels: expected strings")))
                .collect::<Result<_>>()?,
        ),
    };
    let n = match (obj.get("n"), &labels) {
        (Some(n), _) => as_index(n, "n")?,
        (None, Some(l)) => l.len(),
        (None, None) => return Err(parse_err("graph: missing \"n\"")),
    };
    let mut edges = Vec::new();
    for (i, e) in as_array(obj.get("edges").unwrap_or(&Value::Array(vec![])), "edges")?.iter().enumerate() {
        let pair = as_array(e, "edge")?;
        if pair.len() != 2 {
            return Err(parse_err(format!("edge {i}: expected two endpoints")));
        }
        edges.push((vertex_ref(labels.as_deref(), n, &pair[0])?, vertex_ref(labels.as_deref(), n, &pair[1])?));
    }
    let g = Graph::new(n, edges)?;
    match labels {
        Some(l) => g.with_labels(l),
        None => Ok(g),
    }
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let t: Vec<&str> = line.split_whitespace().collect();
        let bad = || parse_err(format!("line {}: cannot parse {line:?}", no + 1));
        match t.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() || t.len() != 4 {
                    return Err(bad());
                }
                let n = t[2].parse().map_err(|_| bad())?;
                let m = t[3].parse().map_err(|_| bad())?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| parse_err("edge line before the \"p\" line"))?;
                if t.len() != 3 {
                    return Err(bad());
                }
                let u: usize = t[1].parse().map_err(|_| bad())?;
                let v: usize = t[2].parse().map_err(|_| bad())?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(parse_err(format!("line {}: endpoint out of 1..={n}", no + 1)));
                }
                edges.push((u - 1, v - 1));
            }
            Some(_) => return Err(bad()),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err("missing \"p edge n m\" line"))?;
    if edges.len() != m {
        return Err(parse_err(format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn graph_to_json(g: &Graph) -> Value {
    let mut v = json!({ "n": g.n(), "edges": g.edges() });
    if let Some(l) = g.labels() {
        v["labels"] = json!(l);
    }
    v
}

/// A vertex for output: its label if the graph has labels, else its index.
pub fn vertex_out(g: &Graph, v: Vertex) -> Value {
    match g.labels() {
        Some(_) => Value::String(g.name(v)),
        None => json!(v),
    }
}

pub fn vertices_out(g: &Graph, vs: &[Vertex]) -> Value {
    Value::Array(vs.iter().map(|&v| vertex_out(g, v)).collect())
}

pub fn parse_sponge(v: &Value) -> Result<Sponge> {
    if let Value::Array(items) = v {
        let vals = items.iter().map(|x| as_int(x, "sponge element")).collect::<Result<Vec<_>>>()?;
        return Sponge::new(vals);
    }
    let spec: SpongeSpec =
        serde_json::from_value(v.clone()).map_err(|e| parse_err(format!("sponge {v}: {e}")))?;
    spec.build()
}

/// Sponges as a JSON array (one per vertex) or an object keyed by label.
pub fn sponges_from_json(v: &Value, g: &Graph) -> Result<SpongeVector> {
    let list: Vec<Sponge> = match v {
        Value::Array(items) => items.iter().map(parse_sponge).collect::<Result<_>>()?,
        Value::Object(map) => {
            let mut out: Vec<Option<Sponge>> = vec![None; g.n()];
            for (k, s) in map {
                let i = vertex_ref(g.labels(), g.n(), &Value::String(k.clone()))?;
                out[i] = Some(parse_sponge(s)?);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| parse_err(format!("no sponge for vertex {}", g.name(i)))))
                .collect::<Result<_>>()?
        }
        _ => return Err(parse_err("sponges: expected an array or an object")),
    };
    if list.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: list.len() });
    }
    Ok(SpongeVector(list))
}

/// Plain sponge list (no graph), for jump systems.
pub fn sponge_list(v: &Value) -> Result<SpongeVector> {
    let items = as_array(v, "sponges")?;
    Ok(SpongeVector(items.iter().map(parse_sponge).collect::<Result<_>>()?))
}

pub fn sponges_to_json(h: &SpongeVector) -> Value {
    serde_json::to_value(h).expect("sponges serialize")
}

/// `{"l": [...], "u": [...], "parity": [...]}`; `parity` is a list of
/// booleans or of vertices, and defaults to no parity vertices.
pub fn spec_from_json(v: &Value, g: &Graph) -> Result<ClassicalSpec> {
    let obj = v.as_object().ok_or_else(|| parse_err("spec: expected an object"))?;
    let ints = |key: &str| -> Result<Vec<i64>> {
        let arr = obj.get(key).ok_or_else(|| parse_err(format!("spec: missing {key:?}")))?;
        as_array(arr, key)?.iter().map(|x| as_int(x, key)).collect()
    };
    let l = ints("l")?;
    let u = ints("u")?;
    let mut parity = vec![false; l.len()];
    if let Some(p) = obj.get("parity") {
        let items = as_array(p, "parity")?;
        if items.iter().all(Value::is_boolean) && items.len() == l.len() {
            parity = items.iter().map(|b| b.as_bool().unwrap()).collect();
        } else {
            for x in items {
                let i = vertex_ref(g.labels(), g.n(), x)?;
                if i < parity.len() {
                    parity[i] = true;
                }
            }
        }
    }
    if l.len() != g.n() || u.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: l.len().max(u.len()) });
    }
    ClassicalSpec::new(l, u, parity)
}

pub fn spec_to_json(s: &ClassicalSpec) -> Value {
    json!({ "l": s.l, "u": s.u, "parity": s.parity })
}

/// A JSON array of ±1 edge weights.
pub fn weights_from_json(v: &Value, m: usize) -> Result<PmWeighting> {
    let w = as_array(v, "weights")?.iter().map(|x| as_int(x, "weight")).collect::<Result<Vec<_>>>()?;
    if w.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: w.len() });
    }
    PmWeighting::new(w)
}

pub fn weights_to_json(w: &PmWeighting, m: usize) -> Value {
    json!((0..m).map(|e| w.get(e)).collect::<Vec<_>>())
}

/// A comma-separated list of vertex labels or indices; empty means ∅.
pub fn parse_vertex_list(s: &str, g: &Graph) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v = match g.labels().and_then(|l| l.iter().position(|x| x == tok)) {
            Some(i) => i,
            None => {
                let i: usize = tok.parse().map_err(|_| parse_err(format!("unknown vertex {tok:?}")))?;
                g.check_vertex(i)?;
                i
            }
        };
        out.push(v);
    }
    Ok(out)
}

/// `{"dim": n, "points": [[...], ...]}`, validated against the 2-step axiom.
pub fn jump_system_from_json(v: &Value) -> Result<ExplicitJumpSystem> {
    let obj = v.as_object().ok_or_else(|| parse_err("system: expected an object"))?;
    let dim = as_index(obj.get("dim").ok_or_else(|| parse_err("system: missing \"dim\""))?, "dim")?;
    let pts = as_array(obj.get("points").ok_or_else(|| parse_err("system: missing \"points\""))?, "points")?;
    let mut points = Vec::new();
    for p in pts {
        let coords = as_array(p, "point")?.iter().map(|x| as_int(x, "coordinate")).collect::<Result<Vec<_>>>()?;
        if coords.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: coords.len() });
        }
        points.push(coords);
    }
    ExplicitJumpSystem::new(points)
}

pub fn jump_system_to_json(j: &ExplicitJumpSystem) -> Value {
    let dim = j.points().iter().next().map_or(0, Vec::len);
    json!({ "dim": dim, "points": j.points() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_dimacs_agree() {
        let a = parse_graph(r#"{"n": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap();
        let b = parse_graph("c path\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(graph_from_json(&graph_to_json(&a)).unwrap().edges(), a.edges());
    }

    #[test]
    fn labelled_edges() {
        let g = parse_graph(r#"{"labels": ["a", "b", "c"], "edges": [["a", "b"], [1, 2]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(parse_vertex_list("a,c", &g).unwrap(), vec![0, 2]);
        assert_eq!(vertex_out(&g, 2), json!("c"));
    }

    #[test]
    fn malformed() {
        assert!(matches!(parse_graph("p edge 2 1\ne 1 3\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("p edge 2 2\ne 1 2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph(r#"{"n": 2, "edges": [[0, 5]]}"#), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(parse_graph(r#"{"n": 2, "vertices": 3}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn sponges() {
        let g = parse_graph(r#"{"n": 2, "edges": []}"#).unwrap();
        let h = sponges_from_json(&parse_json(r#"[[0, 1, 3], {"parity": [2, 8]}]"#).unwrap(), &g).unwrap();
        assert_eq!(h.0[1].values(), &[2, 4, 6, 8]);
        assert_eq!(sponges_from_json(&sponges_to_json(&h), &g).unwrap(), h);
        assert!(matches!(
            sponges_from_json(&parse_json("[[0, 3], [1]]").unwrap(), &g),
            Err(Error::NotASponge { .. })
        ));
    }

    #[test]
    fn jump_files() {
        let j = jump_system_from_json(&parse_json(r#"{"dim": 2, "points": [[0, 0], [1, 1]]}"#).unwrap()).unwrap();
        assert_eq!(j.len(), 2);
        assert!(matches!(
            jump_system_from_json(&parse_json(r#"{"dim": 1, "points": [[0], [3]]}"#).unwrap()),
            Err(Error::NotJumpSystem(_))
        ));
    }
}
