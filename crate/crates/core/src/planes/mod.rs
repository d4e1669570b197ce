//! Finite incidence geometry: affine and projective planes given by their
//! lines, axiom checkers, projective completion, two-parallel planes, the
//! lattice ternary law, Desargues configurations and the Hall plane of order 9.

mod desargues;
mod hall;
mod law;
mod two_parallel;

pub use desargues::{
    check_desargues, replay_desargues_witness, DesarguesMode, DesarguesReport, DesarguesStatus, DesarguesWitness,
};
pub use hall::{build_hall_affine_plane_9, build_hall_plane_9};
pub use law::{
    check_associativity, check_associativity_with, equivalence_experiment, formula_b, EquivalenceSummary, ExperimentConfig,
    PairReport, ProjectiveLaw, ScanMode,
};
pub use two_parallel::{
    check_two_parallel_axioms, puncture, puncture_projective, LineKind, TpLaw, TwoParallelPlane,
};

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{FieldError, Scalar, ScalarField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("point index {0} out of range")]
    BadPoint(u32),
    #[error("line index {0} out of range")]
    BadLine(u32),
    #[error("expected an affine plane: {0}")]
    NotAffine(String),
    #[error("expected a projective plane: {0}")]
    NotProjective(String),
    #[error("invalid plane: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// How ternary laws treat `x = y` and `z = y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `(xxz) = z` and `(xzz) = x`.
    Idempotent,
    /// Degenerate joins are undefined.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneKind {
    Affine,
    Projective,
}

const NONE: u32 = u32::MAX;
const TABLE_LIMIT: usize = 256;

/// An incidence structure on points `0..n` with lines stored as sorted point lists.
#[derive(Clone, Debug)]
pub struct FinitePlane {
    order: u32,
    kind: PlaneKind,
    n_points: usize,
    lines: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
    line_sets: Vec<FixedBitSet>,
    join_table: Option<Vec<u32>>,
    meet_table: Option<Vec<u32>>,
    coords: Vec<Option<[Scalar; 2]>>,
    infinity_line: Option<u32>,
}

impl PartialEq for FinitePlane {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.kind == other.kind
            && self.n_points == other.n_points
            && self.lines == other.lines
    }
}

impl FinitePlane {
    /// Builds the incidence indexes. Axioms are not checked here.
    pub fn new(kind: PlaneKind, order: u32, n_points: usize, lines: Vec<Vec<u32>>) -> Result<Self, PlaneError> {
        let mut lines = lines;
        let mut point_lines = vec![Vec::new(); n_points];
        let mut line_sets = Vec::with_capacity(lines.len());
        for (li, line) in lines.iter_mut().enumerate() {
            line.sort_unstable();
            line.dedup();
            let mut set = FixedBitSet::with_capacity(n_points);
            for &p in line.iter() {
                if p as usize >= n_points {
                    return Err(PlaneError::BadPoint(p));
                }
                set.insert(p as usize);
                point_lines[p as usize].push(li as u32);
            }
            line_sets.push(set);
        }
        let mut plane = FinitePlane {
            order,
            kind,
            n_points,
            lines,
            point_lines,
            line_sets,
            join_table: None,
            meet_table: None,
            coords: vec![None; n_points],
            infinity_line: None,
        };
        plane.build_tables();
        Ok(plane)
    }

    fn build_tables(&mut self) {
        let n = self.n_points;
        if n <= TABLE_LIMIT {
            let mut t = vec![NONE; n * n];
            for (li, line) in self.lines.iter().enumerate().rev() {
                for &p in line {
                    for &q in line {
                        if p != q {
                            t[p as usize * n + q as usize] = li as u32;
                        }
                    }
                }
            }
            self.join_table = Some(t);
        }
        let m = self.lines.len();
        if m <= TABLE_LIMIT {
            let mut t = vec![NONE; m * m];
            for (p, ls) in self.point_lines.iter().enumerate().rev() {
                for &l in ls {
                    for &k in ls {
                        if l != k {
                            t[l as usize * m + k as usize] = p as u32;
                        }
                    }
                }
            }
            self.meet_table = Some(t);
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kind(&self) -> PlaneKind {
        self.kind
    }

    pub fn num_points(&self) -> usize {
        self.n_points
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn line(&self, l: u32) -> &[u32] {
        &self.lines[l as usize]
    }

    pub fn lines_through(&self, p: u32) -> &[u32] {
        &self.point_lines[p as usize]
    }

    pub fn incident(&self, p: u32, l: u32) -> bool {
        self.line_sets[l as usize].contains(p as usize)
    }

    /// The line added by [`projective_completion`], if any.
    pub fn infinity_line(&self) -> Option<u32> {
        self.infinity_line
    }

    /// Field coordinates of a point that came from `𝕂²`.
    pub fn coordinates(&self, p: u32) -> Option<&[Scalar; 2]> {
        self.coords.get(p as usize)?.as_ref()
    }

    pub fn point_at(&self, x: &Scalar, y: &Scalar) -> Option<u32> {
        self.coords
            .iter()
            .position(|c| c.as_ref().is_some_and(|[a, b]| a == x && b == y))
            .map(|p| p as u32)
    }

    /// The first line through two distinct points.
    pub fn join(&self, p: u32, q: u32) -> Option<u32> {
        if p == q {
            return None;
        }
        if let Some(t) = &self.join_table {
            let l = t[p as usize * self.n_points + q as usize];
            return (l != NONE).then_some(l);
        }
        first_common(&self.point_lines[p as usize], &self.point_lines[q as usize])
    }

    /// The first common point of two distinct lines.
    pub fn meet(&self, l: u32, m: u32) -> Option<u32> {
        if l == m {
            return None;
        }
        if let Some(t) = &self.meet_table {
            let p = t[l as usize * self.lines.len() + m as usize];
            return (p != NONE).then_some(p);
        }
        first_common(&self.lines[l as usize], &self.lines[m as usize])
    }

    /// True when some line contains all three points.
    pub fn collinear(&self, p: u32, q: u32, r: u32) -> bool {
        if p == q || p == r || q == r {
            return true;
        }
        self.join(p, q).is_some_and(|l| self.incident(r, l))
    }

    /// Lines `l` and `m` are parallel when equal or disjoint.
    pub fn parallel(&self, l: u32, m: u32) -> bool {
        l == m || self.line_sets[l as usize].is_disjoint(&self.line_sets[m as usize])
    }

    /// The line containing exactly the given points, if present.
    pub fn find_line(&self, points: &[u32]) -> Option<u32> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        self.lines.iter().position(|l| *l == pts).map(|l| l as u32)
    }

    /// Classes of mutually parallel lines, each sorted, in order of first member.
    pub fn parallel_classes(&self) -> Vec<Vec<u32>> {
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for l in 0..self.lines.len() as u32 {
            match classes.iter_mut().find(|c| self.parallel(c[0], l)) {
                Some(c) => c.push(l),
                None => classes.push(vec![l]),
            }
        }
        classes
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PlaneJson {
            order: self.order,
            kind: self.kind,
            lines: self.lines.clone(),
        })
        .expect("plane serializes")
    }

    /// Reads `{"order", "kind", "lines"}` and checks the axioms for the stated kind.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, PlaneError> {
        let pj: PlaneJson = serde_json::from_value(v.clone()).map_err(|e| PlaneError::Invalid(e.to_string()))?;
        let n = pj.lines.iter().flatten().map(|&p| p as usize + 1).max().unwrap_or(0);
        let plane = FinitePlane::new(pj.kind, pj.order, n, pj.lines)?;
        let report = match pj.kind {
            PlaneKind::Affine => check_affine_axioms(&plane),
            PlaneKind::Projective => check_projective_axioms(&plane),
        };
        if !report.passed() {
            return Err(PlaneError::Invalid(report.summary()));
        }
        Ok(plane)
    }
}

#[derive(Serialize, Deserialize)]
struct PlaneJson {
    order: u32,
    kind: PlaneKind,
    lines: Vec<Vec<u32>>,
}

fn first_common(a: &[u32], b: &[u32]) -> Option<u32> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} fails: {}", c.axiom, c.witness.as_deref().unwrap_or("")))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn axiom(name: &str, witness: Option<String>) -> AxiomCheck {
    AxiomCheck {
        axiom: name.to_string(),
        pass: witness.is_none(),
        witness,
    }
}

fn lines_on_both(plane: &FinitePlane, p: u32, q: u32) -> usize {
    plane.point_lines[p as usize]
        .iter()
        .filter(|&&l| plane.incident(q, l))
        .count()
}

/// Any two distinct points lie on exactly one line.
fn unique_joins(plane: &FinitePlane) -> Option<String> {
    (0..plane.n_points as u32).find_map(|p| {
        (p + 1..plane.n_points as u32).find_map(|q| {
            let k = lines_on_both(plane, p, q);
            (k != 1).then(|| format!("points {p} and {q} lie on {k} lines"))
        })
    })
}

fn non_collinear_triple(plane: &FinitePlane) -> Option<String> {
    let n = plane.n_points as u32;
    let found = (0..n).any(|p| {
        (p + 1..n).any(|q| {
            (q + 1..n).any(|r| {
                !plane
                    .lines
                    .iter()
                    .enumerate()
                    .any(|(l, _)| [p, q, r].iter().all(|&x| plane.incident(x, l as u32)))
            })
        })
    });
    (!found).then(|| "all points are collinear".to_string())
}

/// Exhaustive check of A1 (unique joins), A2 (unique parallels) and A3
/// (three non-collinear points).
pub fn check_affine_axioms(plane: &FinitePlane) -> AxiomReport {
    let a2 = (0..plane.n_points as u32).find_map(|p| {
        (0..plane.lines.len() as u32).find_map(|m| {
            let k = plane.point_lines[p as usize]
                .iter()
                .filter(|&&l| plane.parallel(l, m))
                .count();
            (k != 1).then(|| format!("{k} lines through point {p} parallel to line {m}"))
        })
    });
    AxiomReport {
        checks: vec![
            axiom("A1", unique_joins(plane)),
            axiom("A2", a2),
            axiom("A3", non_collinear_triple(plane)),
        ],
    }
}

/// Unique joins, unique meets, four points in general position, and the
/// counts `q²+q+1` points and lines with `q+1` points on each line.
pub fn check_projective_axioms(plane: &FinitePlane) -> AxiomReport {
    let m = plane.lines.len() as u32;
    let meets = (0..m).find_map(|l| {
        (l + 1..m).find_map(|k| {
            let c = plane.line_sets[l as usize]
                .intersection(&plane.line_sets[k as usize])
                .count();
            (c != 1).then(|| format!("lines {l} and {k} share {c} points"))
        })
    });
    let q = plane.order as usize;
    let n = q * q + q + 1;
    let counts = if plane.n_points != n || plane.lines.len() != n {
        Some(format!(
            "{} points and {} lines, expected {n}",
            plane.n_points,
            plane.lines.len()
        ))
    } else {
        plane
            .lines
            .iter()
            .position(|l| l.len() != q + 1)
            .map(|l| format!("line {l} has {} points, expected {}", plane.lines[l].len(), q + 1))
    };
    AxiomReport {
        checks: vec![
            axiom("P1", unique_joins(plane)),
            axiom("P2", meets),
            axiom("P3", non_collinear_triple(plane)),
            axiom("counts", counts),
        ],
    }
}

/// `q²` points, `q²+q` lines, `q` points per line, `q+1` parallel classes.
pub fn check_affine_counts(plane: &FinitePlane) -> AxiomReport {
    let q = plane.order as usize;
    let mut w = None;
    if plane.n_points != q * q || plane.lines.len() != q * q + q {
        w = Some(format!("{} points, {} lines", plane.n_points, plane.lines.len()));
    } else if let Some(l) = plane.lines.iter().position(|l| l.len() != q) {
        w = Some(format!("line {l} has {} points", plane.lines[l].len()));
    } else if plane.parallel_classes().len() != q + 1 {
        w = Some(format!("{} parallel classes", plane.parallel_classes().len()));
    }
    AxiomReport {
        checks: vec![axiom("counts", w)],
    }
}

/// The plane `𝕂²` over a finite field, with lines `y = mx + b` and `x = c`.
/// Point `(x, y)` has index `ix·q + iy` in field enumeration order.
pub fn build_affine_plane(field: &ScalarField) -> Result<FinitePlane, PlaneError> {
    let els = field.elements()?;
    let q = els.len();
    let idx = |i: usize, j: usize| (i * q + j) as u32;
    let pos = |s: &Scalar| els.iter().position(|e| e == s).expect("field element");
    let mut lines = Vec::with_capacity(q * q + q);
    for m in &els {
        for b in &els {
            lines.push(
                els.iter()
                    .enumerate()
                    .map(|(i, x)| idx(i, pos(&(m * x + b.clone()))))
                    .collect(),
            );
        }
    }
    for i in 0..q {
        lines.push((0..q).map(|j| idx(i, j)).collect());
    }
    let mut plane = FinitePlane::new(PlaneKind::Affine, q as u32, q * q, lines)?;
    for (i, x) in els.iter().enumerate() {
        for (j, y) in els.iter().enumerate() {
            plane.coords[idx(i, j) as usize] = Some([x.clone(), y.clone()]);
        }
    }
    Ok(plane)
}

/// Adds one point per parallel class and the line through them.
pub fn projective_completion(plane: &FinitePlane) -> Result<FinitePlane, PlaneError> {
    let report = check_affine_axioms(plane);
    if plane.kind != PlaneKind::Affine || !report.passed() {
        return Err(PlaneError::NotAffine(report.summary()));
    }
    let n = plane.n_points as u32;
    let classes = plane.parallel_classes();
    let mut class_of = vec![0u32; plane.lines.len()];
    for (c, members) in classes.iter().enumerate() {
        for &l in members {
            class_of[l as usize] = c as u32;
        }
    }
    let mut lines: Vec<Vec<u32>> = plane
        .lines
        .iter()
        .enumerate()
        .map(|(l, pts)| {
            let mut v = pts.clone();
            v.push(n + class_of[l]);
            v
        })
        .collect();
    lines.push((0..classes.len() as u32).map(|c| n + c).collect());
    let total = plane.n_points + classes.len();
    let mut out = FinitePlane::new(PlaneKind::Projective, plane.order, total, lines)?;
    out.coords[..plane.n_points].clone_from_slice(&plane.coords);
    out.infinity_line = Some(out.lines.len() as u32 - 1);
    Ok(out)
}

/// The affine plane left after deleting line `b` and its points. Returns the
/// plane and the original index of each surviving point; surviving lines keep
/// their order.
pub fn affine_part(plane: &FinitePlane, b: u32) -> Result<(FinitePlane, Vec<u32>), PlaneError> {
    if plane.kind != PlaneKind::Projective {
        return Err(PlaneError::NotProjective("affine part needs a projective plane".into()));
    }
    if b as usize >= plane.lines.len() {
        return Err(PlaneError::BadLine(b));
    }
    let kept: Vec<u32> = (0..plane.n_points as u32).filter(|&p| !plane.incident(p, b)).collect();
    let mut new_index = vec![NONE; plane.n_points];
    for (i, &p) in kept.iter().enumerate() {
        new_index[p as usize] = i as u32;
    }
    let lines = plane
        .lines
        .iter()
        .enumerate()
        .filter(|&(l, _)| l as u32 != b)
        .map(|(_, pts)| {
            pts.iter()
                .filter(|&&p| new_index[p as usize] != NONE)
                .map(|&p| new_index[p as usize])
                .collect()
        })
        .collect();
    let mut out = FinitePlane::new(PlaneKind::Affine, plane.order, kept.len(), lines)?;
    for (i, &p) in kept.iter().enumerate() {
        out.coords[i] = plane.coords[p as usize].clone();
    }
    Ok((out, kept))
}

/// Searches for a point bijection `a → b` that maps lines onto lines.
pub fn find_isomorphism(a: &FinitePlane, b: &FinitePlane) -> Option<Vec<u32>> {
    if a.n_points != b.n_points || a.lines.len() != b.lines.len() {
        return None;
    }
    let mut a_sizes: Vec<usize> = a.lines.iter().map(Vec::len).collect();
    let mut b_sizes: Vec<usize> = b.lines.iter().map(Vec::len).collect();
    a_sizes.sort_unstable();
    b_sizes.sort_unstable();
    if a_sizes != b_sizes {
        return None;
    }
    let mut search = IsoSearch {
        a,
        b,
        point_map: vec![NONE; a.n_points],
        used: vec![false; b.n_points],
        line_map: BTreeMap::new(),
        line_used: BTreeMap::new(),
    };
    if search.extend(0) {
        Some(search.point_map)
    } else {
        None
    }
}

struct IsoSearch<'a> {
    a: &'a FinitePlane,
    b: &'a FinitePlane,
    point_map: Vec<u32>,
    used: Vec<bool>,
    line_map: BTreeMap<u32, u32>,
    line_used: BTreeMap<u32, u32>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, p: usize) -> bool {
        if p == self.a.n_points {
            return self.lines_preserved();
        }
        for cand in 0..self.b.n_points {
            if self.used[cand] {
                continue;
            }
            let mut added = Vec::new();
            let mut ok = true;
            for q in 0..p {
                let (Some(la), Some(lb)) = (
                    self.a.join(p as u32, q as u32),
                    self.b.join(cand as u32, self.point_map[q]),
                ) else {
                    ok = false;
                    break;
                };
                match (self.line_map.get(&la), self.line_used.get(&lb)) {
                    (Some(&m), _) if m != lb => ok = false,
                    (None, Some(_)) => ok = false,
                    (None, None) => {
                        self.line_map.insert(la, lb);
                        self.line_used.insert(lb, la);
                        added.push(la);
                    }
                    _ => {}
                }
                if !ok {
                    break;
                }
            }
            if ok {
                self.point_map[p] = cand as u32;
                self.used[cand] = true;
                if self.extend(p + 1) {
                    return true;
                }
                self.used[cand] = false;
                self.point_map[p] = NONE;
            }
            for la in added {
                if let Some(lb) = self.line_map.remove(&la) {
                    self.line_used.remove(&lb);
                }
            }
        }
        false
    }

    fn lines_preserved(&self) -> bool {
        let image: Vec<Vec<u32>> = self
            .a
            .lines
            .iter()
            .map(|l| {
                let mut v: Vec<u32> = l.iter().map(|&p| self.point_map[p as usize]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        image.iter().all(|l| self.b.lines.contains(l))
    }
}
