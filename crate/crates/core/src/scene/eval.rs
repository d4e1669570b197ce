use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{Node, NodeKind, Scene, Side};
use crate::incidence::{join_proj, meet, parallel_through, IncidenceError, Line2, Point2, ProjPoint};
use crate::scalars::{FieldElement, Scalar};
use crate::trapezoid::{self as tz, AffineFunctional, SubgroupLine, TrapezoidError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend '{other}' (expected exact or float)")),
        }
    }
}

/// A coordinate: a double on the float backend, `"num/den"` on the exact one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Float(f64),
    Exact(String),
}

impl Num {
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Float(f) => *f,
            Num::Exact(s) => {
                let (n, d) = s.split_once('/').unwrap_or((s, "1"));
                let q = BigRational::new(
                    n.parse::<BigInt>().expect("numerator"),
                    d.parse::<BigInt>().expect("denominator"),
                );
                q.to_f64().unwrap_or(f64::NAN)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutValue {
    /// Affine point `[x1, x2]`.
    Point(Vec<Num>),
    /// Point at infinity, given by a direction `[d1, d2]`.
    Direction(Vec<Num>),
    /// Line `[u, v, c]` meaning `u·x1 + v·x2 + c = 0`.
    Line(Vec<Num>),
    Points(Vec<Vec<Num>>),
    Parts(Vec<(String, Vec<Num>)>),
}

impl OutValue {
    /// All coordinates in a fixed order, for numeric comparison.
    pub fn flatten(&self) -> Vec<f64> {
        let f = |v: &Vec<Num>| v.iter().map(Num::to_f64).collect::<Vec<_>>();
        match self {
            OutValue::Point(v) | OutValue::Direction(v) | OutValue::Line(v) => f(v),
            OutValue::Points(ps) => ps.iter().flat_map(f).collect(),
            OutValue::Parts(ps) => ps.iter().flat_map(|(_, v)| f(v)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeStatus {
    Ok,
    AtInfinity,
    Undefined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeResult {
    pub id: String,
    pub kind: String,
    pub status: NodeStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<OutValue>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub backend: Backend,
    pub nodes: Vec<NodeResult>,
}

impl EvalResult {
    pub fn get(&self, id: &str) -> Option<&NodeResult> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// The affine coordinates of a point node with status ok.
    pub fn point(&self, id: &str) -> Option<Vec<f64>> {
        match &self.get(id)?.value {
            Some(OutValue::Point(v)) => Some(v.iter().map(Num::to_f64).collect()),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("result serializes")
    }
}

/// Scalars a scene can be evaluated over.
trait SceneNum: FieldElement {
    fn from_rational(q: &BigRational) -> Self;
    /// `None` for values that cannot be shown, such as a non-finite double.
    fn to_num(&self) -> Option<Num>;
}

impl SceneNum for Scalar {
    fn from_rational(q: &BigRational) -> Self {
        Scalar::Rational(q.clone())
    }

    fn to_num(&self) -> Option<Num> {
        Some(Num::Exact(self.to_string()))
    }
}

impl SceneNum for f64 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn to_num(&self) -> Option<Num> {
        self.is_finite().then_some(Num::Float(*self))
    }
}

#[derive(Clone)]
enum Val<F> {
    Point(ProjPoint<F>),
    Line(Line2<F>),
    Points(Vec<Vec<F>>),
    Parts(Vec<(&'static str, Vec<F>)>),
}

enum State<F> {
    Ok(Val<F>),
    Undefined,
}

type Step<F> = Result<(Val<F>, Option<&'static str>), String>;

/// Evaluates every node in order. Degenerate inputs give node statuses;
/// nodes that depend on an undefined node are undefined as well.
pub fn evaluate(scene: &Scene, backend: Backend) -> EvalResult {
    let nodes = match backend {
        Backend::Exact => run::<Scalar>(scene),
        Backend::Float => run::<f64>(scene),
    };
    EvalResult { backend, nodes }
}

fn run<F: SceneNum>(scene: &Scene) -> Vec<NodeResult> {
    let mut states: HashMap<&str, State<F>> = HashMap::new();
    let mut out = Vec::with_capacity(scene.nodes().len());
    for node in scene.nodes() {
        let upstream = node
            .dependencies()
            .into_iter()
            .find(|d| matches!(states.get(d), Some(State::Undefined)));
        let step = match upstream {
            Some(d) => Err(format!("UpstreamUndefined({d})")),
            None => eval_node(node, &states),
        };
        let (result, state) = finish(node, step);
        out.push(result);
        states.insert(node.id.as_str(), state);
    }
    out
}

fn finish<F: SceneNum>(node: &Node, step: Step<F>) -> (NodeResult, State<F>) {
    let mut r = NodeResult {
        id: node.id.clone(),
        kind: node.kind.name().to_string(),
        status: NodeStatus::Undefined,
        value: None,
        diagnostic: None,
        note: None,
    };
    match step.and_then(|(val, note)| render(&val).map(|(status, v)| (val, note, status, v))) {
        Ok((val, note, status, value)) => {
            r.status = status;
            r.value = Some(value);
            r.note = note.map(str::to_string);
            (r, State::Ok(val))
        }
        Err(diag) => {
            r.diagnostic = Some(diag);
            (r, State::Undefined)
        }
    }
}

fn nums<F: SceneNum>(v: &[F]) -> Result<Vec<Num>, String> {
    v.iter()
        .map(|c| c.to_num().ok_or_else(|| "NonFinite".to_string()))
        .collect()
}

fn render<F: SceneNum>(val: &Val<F>) -> Result<(NodeStatus, OutValue), String> {
    Ok(match val {
        Val::Point(p) => match p.to_affine() {
            Some(a) => (NodeStatus::Ok, OutValue::Point(nums(&a.to_vec())?)),
            None => (NodeStatus::AtInfinity, OutValue::Direction(nums(&p.coords()[..2])?)),
        },
        Val::Line(l) => (NodeStatus::Ok, OutValue::Line(nums(l.coeffs())?)),
        Val::Points(ps) => (
            NodeStatus::Ok,
            OutValue::Points(ps.iter().map(|p| nums(p)).collect::<Result<_, _>>()?),
        ),
        Val::Parts(ps) => (
            NodeStatus::Ok,
            OutValue::Parts(
                ps.iter()
                    .map(|(k, p)| Ok((k.to_string(), nums(p)?)))
                    .collect::<Result<_, String>>()?,
            ),
        ),
    })
}

fn incidence_diag(e: IncidenceError) -> String {
    match e {
        IncidenceError::DegenerateJoin => "DegenerateJoin",
        IncidenceError::DegenerateMeet => "DegenerateMeet",
        IncidenceError::LineAtInfinity => "LineAtInfinity",
        IncidenceError::ZeroVector => "ZeroVector",
        IncidenceError::Field(_) => "FieldError",
    }
    .to_string()
}

fn tz_diag(e: TrapezoidError) -> String {
    e.diagnostic().to_string()
}

struct Inputs<'a, F> {
    states: &'a HashMap<&'a str, State<F>>,
}

impl<F: SceneNum> Inputs<'_, F> {
    fn val(&self, id: &str) -> &Val<F> {
        match self.states.get(id) {
            Some(State::Ok(v)) => v,
            _ => unreachable!("dependencies are evaluated and defined"),
        }
    }

    fn proj(&self, id: &str) -> ProjPoint<F> {
        match self.val(id) {
            Val::Point(p) => p.clone(),
            _ => unreachable!("validated as a point"),
        }
    }

    fn point(&self, id: &str) -> Result<Vec<F>, String> {
        self.proj(id)
            .to_affine()
            .map(|p| p.to_vec())
            .ok_or_else(|| format!("AtInfinity({id})"))
    }

    fn line(&self, id: &str) -> Line2<F> {
        match self.val(id) {
            Val::Line(l) => l.clone(),
            _ => unreachable!("validated as a line"),
        }
    }

    fn alpha(&self, anchor: &str) -> Result<AffineFunctional<F>, String> {
        let line = self.line(anchor);
        if line.is_at_infinity() {
            return Err("AnchorAtInfinity".into());
        }
        AffineFunctional::from_line(&line).map_err(tz_diag)
    }

    /// The functional of `anchor` scaled so that it equals one at the origin.
    fn alpha_at(&self, anchor: &str, origin: &[F]) -> Result<AffineFunctional<F>, String> {
        let a = self.alpha(anchor)?;
        let k = a
            .eval(origin)
            .inv()
            .map_err(|_| TrapezoidError::NotMember("e").diagnostic().to_string())?;
        let coeffs = a.coeffs().iter().map(|c| c.clone() * k.clone()).collect();
        AffineFunctional::new(coeffs, a.constant().clone() * k).map_err(tz_diag)
    }
}

fn affine<F: SceneNum>(v: Vec<F>) -> Val<F> {
    Val::Point(Point2::from_slice(&v).to_proj())
}

fn line_through<F: SceneNum>(l: &SubgroupLine<F>) -> Result<Line2<F>, String> {
    let p = Point2::from_slice(&l.base);
    let q = Point2::from_slice(&tz::add(&l.base, &l.direction));
    join_proj(&p.to_proj(), &q.to_proj()).map_err(incidence_diag)
}

fn eval_node<F: SceneNum>(node: &Node, states: &HashMap<&str, State<F>>) -> Step<F> {
    let inp = Inputs { states };
    let i = |k: usize| node.inputs[k].as_str();
    let val = match &node.kind {
        NodeKind::FreePoint { x, y } => affine(vec![F::from_rational(x), F::from_rational(y)]),
        NodeKind::FreeLine { u, v, c } => Val::Line(
            Line2::new(F::from_rational(u), F::from_rational(v), F::from_rational(c)).map_err(incidence_diag)?,
        ),
        NodeKind::Join => Val::Line(join_proj(&inp.proj(i(0)), &inp.proj(i(1))).map_err(incidence_diag)?),
        NodeKind::Meet => Val::Point(meet(&inp.line(i(0)), &inp.line(i(1))).map_err(incidence_diag)?),
        NodeKind::ParallelThrough => {
            let p = Point2::from_slice(&inp.point(i(1))?);
            Val::Line(parallel_through(&inp.line(i(0)), &p).map_err(incidence_diag)?)
        }
        NodeKind::Parallelogram => affine(tz::parallelogram(&inp.point(i(0))?, &inp.point(i(1))?, &inp.point(i(2))?)),
        NodeKind::PerspectiveParallelogram { anchor } => affine(
            tz::perspective_parallelogram(&inp.point(i(0))?, &inp.point(i(1))?, &inp.point(i(2))?, &inp.alpha(anchor)?)
                .map_err(tz_diag)?,
        ),
        NodeKind::Trapezoid { anchor } => {
            let (x, y, z) = (inp.point(i(0))?, inp.point(i(1))?, inp.point(i(2))?);
            let w = tz::trapezoid(&x, &y, &z, &inp.alpha(anchor)?).map_err(tz_diag)?;
            let note = (x == y || z == y).then_some("idempotent");
            return Ok((affine(w), note));
        }
        NodeKind::CollinearProduct { anchor, aux } => affine(
            tz::collinear_product(
                &inp.point(i(0))?,
                &inp.point(i(1))?,
                &inp.point(i(2))?,
                &inp.alpha(anchor)?,
                &inp.point(aux)?,
            )
            .map_err(tz_diag)?,
        ),
        NodeKind::GroupProduct { anchor, origin } => {
            let e = inp.point(origin)?;
            affine(tz::group_product(&inp.point(i(0))?, &inp.point(i(1))?, &e, &inp.alpha(anchor)?).map_err(tz_diag)?)
        }
        NodeKind::Inverse { anchor, origin } => {
            let e = inp.point(origin)?;
            affine(tz::inverse(&inp.point(i(0))?, &e, &inp.alpha(anchor)?).map_err(tz_diag)?)
        }
        NodeKind::Power { anchor, origin, n } => {
            let e = inp.point(origin)?;
            affine(tz::power(&inp.point(i(0))?, *n, &e, &inp.alpha(anchor)?).map_err(tz_diag)?)
        }
        NodeKind::BoundaryImage { anchor, origin } => {
            let e = inp.point(origin)?;
            let alpha = inp.alpha_at(anchor, &e)?;
            affine(tz::boundary_action(&inp.point(i(0))?, &e, &inp.point(i(1))?, &alpha).map_err(tz_diag)?)
        }
        NodeKind::CosetLine { anchor, origin, side } => {
            let e = inp.point(origin)?;
            let alpha = inp.alpha_at(anchor, &e)?;
            let h = SubgroupLine::through(&e, &inp.point(i(1))?).map_err(tz_diag)?;
            let cosets = tz::coset_lines(&inp.point(i(0))?, &h, &e, &alpha).map_err(tz_diag)?;
            let line = match side {
                Side::Left => &cosets.left,
                Side::Right => &cosets.right,
            };
            let note = cosets.coincide.then_some("cosets coincide");
            return Ok((Val::Line(line_through(line)?), note));
        }
        NodeKind::SemidirectParts { anchor, origin } => {
            let e = inp.point(origin)?;
            let alpha = inp.alpha_at(anchor, &e)?;
            let parts = tz::semidirect_decompose(&inp.point(i(0))?, &e, &alpha, None).map_err(tz_diag)?;
            Val::Parts(vec![("n", parts.n), ("k", parts.k), ("n_right", parts.n_right)])
        }
        NodeKind::PowerLattice {
            anchor,
            origin,
            n_range,
            m_range,
        } => {
            let e = inp.point(origin)?;
            let alpha = inp.alpha(anchor)?;
            let (x, z) = (inp.point(i(0))?, inp.point(i(1))?);
            let zs = (m_range.0..=m_range.1)
                .map(|m| tz::power(&z, m, &e, &alpha))
                .collect::<Result<Vec<_>, _>>()
                .map_err(tz_diag)?;
            let mut pts = Vec::new();
            for n in n_range.0..=n_range.1 {
                let xn = tz::power(&x, n, &e, &alpha).map_err(tz_diag)?;
                // xⁿ and zᵐ are members whenever x, z and e are, so no
                // re-check; a tolerance test would reject tiny α(xⁿ) on floats
                for zm in &zs {
                    pts.push(tz::trapezoid(&xn, &e, zm, &alpha).map_err(tz_diag)?);
                }
            }
            Val::Points(pts)
        }
    };
    Ok((val, None))
}
