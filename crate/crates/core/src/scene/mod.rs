//! Construction scenes: free points and lines plus derived nodes, evaluated in
//! topological order with explicit statuses for degenerate inputs.
//!
//! Scene JSON, version 1:
//!
//! ```json
//! {"version": 1, "nodes": [
//!   {"id": "a", "kind": "FreeLine", "params": {"u": "0/1", "v": "1/1", "c": "0/1"}},
//!   {"id": "x", "kind": "FreePoint", "params": {"x": "0/1", "y": "1/1"}},
//!   {"id": "w", "kind": "Trapezoid", "inputs": ["x", "y", "z"], "params": {"anchor": "a"}}
//! ]}
//! ```
//!
//! Coordinates are JSON numbers or strings `"n/d"`, `"n"` or decimals. Node
//! ids named in `params` (`anchor`, `origin`, `aux`) are dependencies just
//! like `inputs` and must be defined earlier.

mod eval;

pub use eval::{evaluate, Backend, EvalResult, NodeResult, NodeStatus, Num, OutValue};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::scalars::{rational_from_f64, ScalarField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SceneError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown object id '{0}'")]
    UnknownId(String),
    #[error("object '{id}' is a {kind}, not a free object")]
    NotFree { id: String, kind: &'static str },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> SceneError {
    SceneError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Limits that keep exact evaluation at desk scale.
pub const MAX_POWER: i64 = 1000;
pub const MAX_LATTICE_POINTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    FreePoint { x: BigRational, y: BigRational },
    FreeLine { u: BigRational, v: BigRational, c: BigRational },
    Join,
    Meet,
    ParallelThrough,
    Parallelogram,
    PerspectiveParallelogram { anchor: String },
    Trapezoid { anchor: String },
    CollinearProduct { anchor: String, aux: String },
    GroupProduct { anchor: String, origin: String },
    Inverse { anchor: String, origin: String },
    Power { anchor: String, origin: String, n: i64 },
    BoundaryImage { anchor: String, origin: String },
    CosetLine { anchor: String, origin: String, side: Side },
    SemidirectParts { anchor: String, origin: String },
    PowerLattice {
        anchor: String,
        origin: String,
        n_range: (i64, i64),
        m_range: (i64, i64),
    },
}

/// What a node produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueType {
    Point,
    Line,
    Points,
    Parts,
}

use ValueType::{Line as L, Point as P};

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::FreePoint { .. } => "FreePoint",
            NodeKind::FreeLine { .. } => "FreeLine",
            NodeKind::Join => "Join",
            NodeKind::Meet => "Meet",
            NodeKind::ParallelThrough => "ParallelThrough",
            NodeKind::Parallelogram => "Parallelogram",
            NodeKind::PerspectiveParallelogram { .. } => "PerspectiveParallelogram",
            NodeKind::Trapezoid { .. } => "Trapezoid",
            NodeKind::CollinearProduct { .. } => "CollinearProduct",
            NodeKind::GroupProduct { .. } => "GroupProduct",
            NodeKind::Inverse { .. } => "Inverse",
            NodeKind::Power { .. } => "Power",
            NodeKind::BoundaryImage { .. } => "BoundaryImage",
            NodeKind::CosetLine { .. } => "CosetLine",
            NodeKind::SemidirectParts { .. } => "SemidirectParts",
            NodeKind::PowerLattice { .. } => "PowerLattice",
        }
    }

    pub fn output(&self) -> ValueType {
        match self {
            NodeKind::FreeLine { .. } | NodeKind::Join | NodeKind::ParallelThrough | NodeKind::CosetLine { .. } => L,
            NodeKind::SemidirectParts { .. } => ValueType::Parts,
            NodeKind::PowerLattice { .. } => ValueType::Points,
            _ => P,
        }
    }

    fn input_types(&self) -> &'static [ValueType] {
        match self {
            NodeKind::FreePoint { .. } | NodeKind::FreeLine { .. } => &[],
            NodeKind::Join => &[P, P],
            NodeKind::Meet => &[L, L],
            NodeKind::ParallelThrough => &[L, P],
            NodeKind::Parallelogram
            | NodeKind::PerspectiveParallelogram { .. }
            | NodeKind::Trapezoid { .. }
            | NodeKind::CollinearProduct { .. } => &[P, P, P],
            NodeKind::GroupProduct { .. }
            | NodeKind::BoundaryImage { .. }
            | NodeKind::CosetLine { .. }
            | NodeKind::PowerLattice { .. } => &[P, P],
            NodeKind::Inverse { .. } | NodeKind::Power { .. } | NodeKind::SemidirectParts { .. } => &[P],
        }
    }

    /// Node references held in params, with their expected types.
    fn param_refs(&self) -> Vec<(&'static str, &str, ValueType)> {
        let mut refs = Vec::new();
        match self {
            NodeKind::PerspectiveParallelogram { anchor } | NodeKind::Trapezoid { anchor } => {
                refs.push(("anchor", anchor.as_str(), L));
            }
            NodeKind::CollinearProduct { anchor, aux } => {
                refs.push(("anchor", anchor.as_str(), L));
                refs.push(("aux", aux.as_str(), P));
            }
            NodeKind::GroupProduct { anchor, origin }
            | NodeKind::Inverse { anchor, origin }
            | NodeKind::Power { anchor, origin, .. }
            | NodeKind::BoundaryImage { anchor, origin }
            | NodeKind::CosetLine { anchor, origin, .. }
            | NodeKind::SemidirectParts { anchor, origin }
            | NodeKind::PowerLattice { anchor, origin, .. } => {
                refs.push(("anchor", anchor.as_str(), L));
                refs.push(("origin", origin.as_str(), P));
            }
            _ => {}
        }
        refs
    }

    pub fn is_free(&self) -> bool {
        matches!(self, NodeKind::FreePoint { .. } | NodeKind::FreeLine { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub inputs: Vec<String>,
}

impl Node {
    /// Inputs followed by the node references in params.
    pub fn dependencies(&self) -> Vec<&str> {
        let mut deps: Vec<&str> = self.inputs.iter().map(String::as_str).collect();
        deps.extend(self.kind.param_refs().into_iter().map(|(_, id, _)| id));
        deps
    }
}

/// A validated construction: ids are unique and every dependency precedes
/// the node that uses it.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    nodes: Vec<Node>,
}

pub const NODE_KINDS: [&str; 16] = [
    "FreePoint",
    "FreeLine",
    "Join",
    "Meet",
    "ParallelThrough",
    "Parallelogram",
    "PerspectiveParallelogram",
    "Trapezoid",
    "CollinearProduct",
    "GroupProduct",
    "Inverse",
    "Power",
    "BoundaryImage",
    "CosetLine",
    "SemidirectParts",
    "PowerLattice",
];

impl Scene {
    pub fn new(nodes: Vec<Node>) -> Result<Self, SceneError> {
        let mut types: HashMap<&str, ValueType> = HashMap::new();
        for (i, node) in nodes.iter().enumerate() {
            let path = format!("nodes[{i}]");
            if node.id.is_empty() {
                return Err(schema(format!("{path}.id"), "empty id"));
            }
            if types.contains_key(node.id.as_str()) {
                return Err(schema(format!("{path}.id"), format!("duplicate id '{}'", node.id)));
            }
            let want = node.kind.input_types();
            if node.inputs.len() != want.len() {
                return Err(schema(
                    format!("{path}.inputs"),
                    format!(
                        "node '{}' of kind {} takes {} inputs, found {}",
                        node.id,
                        node.kind.name(),
                        want.len(),
                        node.inputs.len()
                    ),
                ));
            }
            let refs = node
                .inputs
                .iter()
                .enumerate()
                .map(|(j, id)| (format!("{path}.inputs[{j}]"), id.as_str(), want[j]))
                .chain(
                    node.kind
                        .param_refs()
                        .into_iter()
                        .map(|(name, id, t)| (format!("{path}.params.{name}"), id, t)),
                );
            for (p, id, t) in refs {
                match types.get(id) {
                    None => {
                        return Err(schema(
                            p,
                            format!("node '{}' refers to '{id}', which is not defined earlier", node.id),
                        ))
                    }
                    Some(&found) if found != t => {
                        return Err(schema(p, format!("'{id}' is a {found:?}, expected a {t:?}")));
                    }
                    Some(_) => {}
                }
            }
            types.insert(node.id.as_str(), node.kind.output());
        }
        Ok(Scene { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn from_json(v: &Value) -> Result<Self, SceneError> {
        let obj = v.as_object().ok_or_else(|| schema("$", "scene must be an object"))?;
        for key in obj.keys() {
            if !["version", "name", "nodes"].contains(&key.as_str()) {
                return Err(schema(format!("$.{key}"), "unknown field"));
            }
        }
        if let Some(ver) = obj.get("version") {
            if ver.as_u64() != Some(1) {
                return Err(schema("$.version", "only version 1 is supported"));
            }
        }
        let nodes = obj
            .get("nodes")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("$.nodes", "expected an array of nodes"))?;
        let nodes = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| parse_node(n, &format!("nodes[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Scene::new(nodes)
    }

    pub fn from_json_str(s: &str) -> Result<Self, SceneError> {
        let v: Value = serde_json::from_str(s).map_err(|e| schema("$", format!("invalid JSON: {e}")))?;
        Scene::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self.nodes.iter().map(node_to_json).collect();
        json!({"version": 1, "nodes": nodes})
    }

    /// Moves a free point (`{"x", "y"}`) or replaces a free line (`{"u", "v", "c"}`).
    pub fn set_free_object(&mut self, id: &str, value: &Value) -> Result<(), SceneError> {
        let node = self
            .nodes
            .iter_mut()
            .find(|n| n.id == id)
            .ok_or_else(|| SceneError::UnknownId(id.to_string()))?;
        let new_kind = match &node.kind {
            NodeKind::FreePoint { .. } => {
                let (x, y) = (number_field(value, "x", "$")?, number_field(value, "y", "$")?);
                NodeKind::FreePoint { x, y }
            }
            NodeKind::FreeLine { .. } => free_line(value, "$")?,
            other => {
                return Err(SceneError::NotFree {
                    id: id.to_string(),
                    kind: other.name(),
                })
            }
        };
        node.kind = new_kind;
        Ok(())
    }

    /// Ids of the free points and lines, in scene order.
    pub fn free_objects(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| n.kind.is_free())
            .map(|n| n.id.as_str())
            .collect()
    }
}

fn parse_number(v: &Value, path: &str) -> Result<BigRational, SceneError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                let f = n.as_f64().ok_or_else(|| schema(path, "number out of range"))?;
                rational_from_f64(f).map_err(|e| schema(path, e.to_string()))
            }
        }
        Value::String(s) => ScalarField::rationals()
            .parse(s)
            .map_err(|e| schema(path, e.to_string()))
            .map(|q| q.as_rational().cloned().expect("rational field")),
        _ => Err(schema(path, "expected a number or a \"n/d\" string")),
    }
}

fn number_field(obj: &Value, key: &str, path: &str) -> Result<BigRational, SceneError> {
    let p = format!("{path}.{key}");
    let v = obj.get(key).ok_or_else(|| schema(&p, "missing"))?;
    parse_number(v, &p)
}

fn free_line(params: &Value, path: &str) -> Result<NodeKind, SceneError> {
    let u = number_field(params, "u", path)?;
    let v = number_field(params, "v", path)?;
    let c = number_field(params, "c", path)?;
    if u.is_zero() && v.is_zero() && c.is_zero() {
        return Err(schema(path, "line coefficients are all zero"));
    }
    Ok(NodeKind::FreeLine { u, v, c })
}

fn id_field(params: &Value, key: &str, path: &str) -> Result<String, SceneError> {
    params
        .get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| schema(format!("{path}.{key}"), "expected a node id"))
}

fn int_field(params: &Value, key: &str, path: &str) -> Result<i64, SceneError> {
    params
        .get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| schema(format!("{path}.{key}"), "expected an integer"))
}

fn range_field(params: &Value, key: &str, path: &str) -> Result<(i64, i64), SceneError> {
    let p = format!("{path}.{key}");
    let Some(v) = params.get(key) else {
        return Ok((-10, 10));
    };
    match v.as_array().map(|a| a.iter().map(Value::as_i64).collect::<Vec<_>>()).as_deref() {
        Some([Some(lo), Some(hi)]) if lo <= hi => {
            if lo.abs() > MAX_POWER || hi.abs() > MAX_POWER {
                Err(schema(p, format!("exponents are limited to ±{MAX_POWER}")))
            } else {
                Ok((*lo, *hi))
            }
        }
        _ => Err(schema(p, "expected [lo, hi] with lo ≤ hi")),
    }
}

fn parse_node(v: &Value, path: &str) -> Result<Node, SceneError> {
    let obj = v.as_object().ok_or_else(|| schema(path, "node must be an object"))?;
    for key in obj.keys() {
        if !["id", "kind", "inputs", "params"].contains(&key.as_str()) {
            return Err(schema(format!("{path}.{key}"), "unknown field"));
        }
    }
    let id = obj
        .get("id")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(format!("{path}.id"), "expected a string id"))?
        .to_string();
    let kind_str = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(format!("{path}.kind"), format!("node '{id}' needs a kind string")))?;
    let inputs = match obj.get("inputs") {
        None => Vec::new(),
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(j, x)| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| schema(format!("{path}.inputs[{j}]"), "expected a node id"))
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(schema(format!("{path}.inputs"), "expected an array of ids")),
    };
    let empty = Value::Object(Map::new());
    let params = obj.get("params").unwrap_or(&empty);
    let params_map = params
        .as_object()
        .ok_or_else(|| schema(format!("{path}.params"), "expected an object"))?;
    let pp = format!("{path}.params");
    let kind = match kind_str {
        "FreePoint" => NodeKind::FreePoint {
            x: number_field(params, "x", &pp)?,
            y: number_field(params, "y", &pp)?,
        },
        "FreeLine" => free_line(params, &pp)?,
        "Join" => NodeKind::Join,
        "Meet" => NodeKind::Meet,
        "ParallelThrough" => NodeKind::ParallelThrough,
        "Parallelogram" => NodeKind::Parallelogram,
        "PerspectiveParallelogram" => NodeKind::PerspectiveParallelogram {
            anchor: id_field(params, "anchor", &pp)?,
        },
        "Trapezoid" => NodeKind::Trapezoid {
            anchor: id_field(params, "anchor", &pp)?,
        },
        "CollinearProduct" => NodeKind::CollinearProduct {
            anchor: id_field(params, "anchor", &pp)?,
            aux: id_field(params, "aux", &pp)?,
        },
        "GroupProduct" => NodeKind::GroupProduct {
            anchor: id_field(params, "anchor", &pp)?,
            origin: id_field(params, "origin", &pp)?,
        },
        "Inverse" => NodeKind::Inverse {
            anchor: id_field(params, "anchor", &pp)?,
            origin: id_field(params, "origin", &pp)?,
        },
        "Power" => {
            let n = int_field(params, "n", &pp)?;
            if n.abs() > MAX_POWER {
                return Err(schema(format!("{pp}.n"), format!("exponents are limited to ±{MAX_POWER}")));
            }
            NodeKind::Power {
                anchor: id_field(params, "anchor", &pp)?,
                origin: id_field(params, "origin", &pp)?,
                n,
            }
        }
        "BoundaryImage" => NodeKind::BoundaryImage {
            anchor: id_field(params, "anchor", &pp)?,
            origin: id_field(params, "origin", &pp)?,
        },
        "CosetLine" => {
            let side = match params.get("side").and_then(Value::as_str) {
                Some("left") => Side::Left,
                Some("right") => Side::Right,
                _ => return Err(schema(format!("{pp}.side"), "expected \"left\" or \"right\"")),
            };
            NodeKind::CosetLine {
                anchor: id_field(params, "anchor", &pp)?,
                origin: id_field(params, "origin", &pp)?,
                side,
            }
        }
        "SemidirectParts" => NodeKind::SemidirectParts {
            anchor: id_field(params, "anchor", &pp)?,
            origin: id_field(params, "origin", &pp)?,
        },
        "PowerLattice" => {
            let n_range = range_field(params, "n_range", &pp)?;
            let m_range = range_field(params, "m_range", &pp)?;
            let count = (n_range.1 - n_range.0 + 1) as usize * (m_range.1 - m_range.0 + 1) as usize;
            if count > MAX_LATTICE_POINTS {
                return Err(schema(&pp, format!("lattice of {count} points exceeds {MAX_LATTICE_POINTS}")));
            }
            NodeKind::PowerLattice {
                anchor: id_field(params, "anchor", &pp)?,
                origin: id_field(params, "origin", &pp)?,
                n_range,
                m_range,
            }
        }
        other => {
            return Err(schema(
                format!("{path}.kind"),
                format!("node '{id}' has unknown kind '{other}'"),
            ))
        }
    };
    let allowed = allowed_params(&kind);
    if let Some(key) = params_map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(
            format!("{pp}.{key}"),
            format!("not a parameter of {}", kind.name()),
        ));
    }
    Ok(Node { id, kind, inputs })
}

fn allowed_params(kind: &NodeKind) -> &'static [&'static str] {
    match kind {
        NodeKind::FreePoint { .. } => &["x", "y"],
        NodeKind::FreeLine { .. } => &["u", "v", "c"],
        NodeKind::Join | NodeKind::Meet | NodeKind::ParallelThrough | NodeKind::Parallelogram => &[],
        NodeKind::PerspectiveParallelogram { .. } | NodeKind::Trapezoid { .. } => &["anchor"],
        NodeKind::CollinearProduct { .. } => &["anchor", "aux"],
        NodeKind::Power { .. } => &["anchor", "origin", "n"],
        NodeKind::CosetLine { .. } => &["anchor", "origin", "side"],
        NodeKind::PowerLattice { .. } => &["anchor", "origin", "n_range", "m_range"],
        _ => &["anchor", "origin"],
    }
}

fn rational_str(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn node_to_json(n: &Node) -> Value {
    let params = match &n.kind {
        NodeKind::FreePoint { x, y } => json!({"x": rational_str(x), "y": rational_str(y)}),
        NodeKind::FreeLine { u, v, c } => {
            json!({"u": rational_str(u), "v": rational_str(v), "c": rational_str(c)})
        }
        NodeKind::Join | NodeKind::Meet | NodeKind::ParallelThrough | NodeKind::Parallelogram => json!({}),
        NodeKind::PerspectiveParallelogram { anchor } | NodeKind::Trapezoid { anchor } => json!({"anchor": anchor}),
        NodeKind::CollinearProduct { anchor, aux } => json!({"anchor": anchor, "aux": aux}),
        NodeKind::GroupProduct { anchor, origin }
        | NodeKind::Inverse { anchor, origin }
        | NodeKind::BoundaryImage { anchor, origin }
        | NodeKind::SemidirectParts { anchor, origin } => json!({"anchor": anchor, "origin": origin}),
        NodeKind::Power { anchor, origin, n } => json!({"anchor": anchor, "origin": origin, "n": n}),
        NodeKind::CosetLine { anchor, origin, side } => json!({
            "anchor": anchor,
            "origin": origin,
            "side": if *side == Side::Left { "left" } else { "right" },
        }),
        NodeKind::PowerLattice {
            anchor,
            origin,
            n_range,
            m_range,
        } => json!({
            "anchor": anchor,
            "origin": origin,
            "n_range": [n_range.0, n_range.1],
            "m_range": [m_range.0, m_range.1],
        }),
    };
    json!({"id": n.id, "kind": n.kind.name(), "inputs": n.inputs, "params": params})
}

/// Bundled demo scenes by name.
pub fn demo(name: &str) -> Option<&'static str> {
    DEMOS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub const DEMOS: [(&str, &str); 6] = [
    ("parallelogram", include_str!("../../../../demo/parallelogram.json")),
    ("trapezoid", include_str!("../../../../demo/trapezoid.json")),
    ("associativity", include_str!("../../../../demo/associativity.json")),
    ("cosets", include_str!("../../../../demo/cosets.json")),
    ("powers", include_str!("../../../../demo/powers.json")),
    ("boundary", include_str!("../../../../demo/boundary.json")),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demos_parse_and_round_trip() {
        for (name, text) in DEMOS {
            let scene = Scene::from_json_str(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let back = Scene::from_json(&scene.to_json()).unwrap();
            assert_eq!(back, scene, "{name}");
        }
    }

    #[test]
    fn unknown_kind_names_the_node() {
        let err = Scene::from_json(&json!({"nodes": [
            {"id": "p", "kind": "FreePoint", "params": {"x": 0, "y": 0}},
            {"id": "q", "kind": "Circle", "inputs": ["p"]}
        ]}))
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("nodes[1].kind"), "{msg}");
        assert!(msg.contains("'q'") && msg.contains("Circle"), "{msg}");
    }

    #[test]
    fn forward_references_are_rejected() {
        let err = Scene::from_json(&json!({"nodes": [
            {"id": "w", "kind": "Parallelogram", "inputs": ["x", "x", "x"]},
            {"id": "x", "kind": "FreePoint", "params": {"x": 0, "y": 0}}
        ]}))
        .unwrap_err();
        assert!(err.to_string().starts_with("nodes[0].inputs[0]"), "{err}");
    }

    #[test]
    fn type_and_arity_errors_carry_paths() {
        let base = |extra: Value| {
            json!({"nodes": [
                {"id": "x", "kind": "FreePoint", "params": {"x": "1/2", "y": 3}},
                {"id": "l", "kind": "FreeLine", "params": {"u": 0, "v": 1, "c": 0}},
                extra
            ]})
        };
        let cases = [
            (json!({"id": "m", "kind": "Meet", "inputs": ["x", "l"]}), "nodes[2].inputs[0]"),
            (json!({"id": "m", "kind": "Join", "inputs": ["x"]}), "nodes[2].inputs"),
            (json!({"id": "x", "kind": "Join", "inputs": ["x", "x"]}), "nodes[2].id"),
            (
                json!({"id": "t", "kind": "Trapezoid", "inputs": ["x", "x", "x"], "params": {"anchor": "x"}}),
                "nodes[2].params.anchor",
            ),
            (
                json!({"id": "t", "kind": "Trapezoid", "inputs": ["x", "x", "x"], "params": {"anchor": "l", "color": "red"}}),
                "nodes[2].params.color",
            ),
            (
                json!({"id": "p", "kind": "FreePoint", "params": {"x": "a/b", "y": 0}}),
                "nodes[2].params.x",
            ),
        ];
        for (node, path) in cases {
            let err = Scene::from_json(&base(node)).unwrap_err().to_string();
            assert!(err.starts_with(path), "{err} (expected {path})");
        }
    }

    #[test]
    fn exact_coordinates_survive_round_trip() {
        let scene = Scene::from_json(&json!({"nodes": [
            {"id": "x", "kind": "FreePoint", "params": {"x": "-7/3", "y": 0.5}}
        ]}))
        .unwrap();
        let v = scene.to_json();
        assert_eq!(v["nodes"][0]["params"]["x"], "-7/3");
        assert_eq!(v["nodes"][0]["params"]["y"], "1/2");
    }

    #[test]
    fn set_free_object_checks_kind_and_id() {
        let mut scene = Scene::from_json_str(demo("trapezoid").unwrap()).unwrap();
        scene.set_free_object("x", &json!({"x": 3, "y": "1/2"})).unwrap();
        match &scene.node("x").unwrap().kind {
            NodeKind::FreePoint { x, y } => {
                assert_eq!(rational_str(x), "3/1");
                assert_eq!(rational_str(y), "1/2");
            }
            k => panic!("{k:?}"),
        }
        assert_eq!(
            scene.set_free_object("nope", &json!({"x": 0, "y": 0})),
            Err(SceneError::UnknownId("nope".into()))
        );
        assert!(matches!(
            scene.set_free_object("w", &json!({"x": 0, "y": 0})),
            Err(SceneError::NotFree { .. })
        ));
        assert!(scene.set_free_object("x", &json!({"x": 0})).is_err());
        assert!(scene.set_free_object("a", &json!({"u": 0, "v": 0, "c": 0})).is_err());
    }
}
