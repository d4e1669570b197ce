use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::{affine_part, axiom, AxiomReport, Convention, FinitePlane, PlaneError, PlaneKind};
use crate::scalars::Scalar;
use crate::torsor::{TernaryLaw, Undefined};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineKind {
    /// One parallel through an outside point.
    L1,
    /// Two parallels through an outside point.
    L2,
}

/// Points, lines of two kinds and the split `P = P_a ∪ P_b` of
/// `ℒ₂`-parallelism. Pairs are stored as `(min, max)` line indices.
#[derive(Clone, Debug)]
pub struct TwoParallelPlane {
    n_points: usize,
    lines: Vec<Vec<u32>>,
    kinds: Vec<LineKind>,
    line_sets: Vec<FixedBitSet>,
    point_lines: Vec<Vec<u32>>,
    pa: BTreeSet<(u32, u32)>,
    pb: BTreeSet<(u32, u32)>,
    coords: Vec<Option<[Scalar; 2]>>,
    base_points: Vec<u32>,
    removed_line: Option<u32>,
}

fn ordered(l: u32, m: u32) -> (u32, u32) {
    (l.min(m), l.max(m))
}

impl TwoParallelPlane {
    pub fn from_parts(
        n_points: usize,
        lines: Vec<Vec<u32>>,
        kinds: Vec<LineKind>,
        pa: BTreeSet<(u32, u32)>,
        pb: BTreeSet<(u32, u32)>,
    ) -> Result<Self, PlaneError> {
        if kinds.len() != lines.len() {
            return Err(PlaneError::Invalid(format!(
                "{} lines but {} kinds",
                lines.len(),
                kinds.len()
            )));
        }
        let mut point_lines = vec![Vec::new(); n_points];
        let mut line_sets = Vec::with_capacity(lines.len());
        for (li, line) in lines.iter().enumerate() {
            let mut set = FixedBitSet::with_capacity(n_points);
            for &p in line {
                if p as usize >= n_points {
                    return Err(PlaneError::BadPoint(p));
                }
                set.insert(p as usize);
                point_lines[p as usize].push(li as u32);
            }
            line_sets.push(set);
        }
        let normalize = |s: BTreeSet<(u32, u32)>| -> Result<BTreeSet<(u32, u32)>, PlaneError> {
            s.into_iter()
                .map(|(l, m)| {
                    for x in [l, m] {
                        if x as usize >= lines.len() {
                            return Err(PlaneError::BadLine(x));
                        }
                    }
                    Ok(ordered(l, m))
                })
                .collect()
        };
        let pa = normalize(pa)?;
        let pb = normalize(pb)?;
        Ok(TwoParallelPlane {
            n_points,
            kinds,
            line_sets,
            point_lines,
            pa,
            pb,
            coords: vec![None; n_points],
            base_points: (0..n_points as u32).collect(),
            removed_line: None,
            lines,
        })
    }

    pub fn num_points(&self) -> usize {
        self.n_points
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn kind(&self, l: u32) -> LineKind {
        self.kinds[l as usize]
    }

    pub fn count_kind(&self, kind: LineKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    pub fn pa(&self) -> &BTreeSet<(u32, u32)> {
        &self.pa
    }

    pub fn pb(&self) -> &BTreeSet<(u32, u32)> {
        &self.pb
    }

    /// Moves one pair between `P_a` and `P_b`. Returns false if the pair is in neither.
    pub fn swap_pair(&mut self, l: u32, m: u32) -> bool {
        let key = ordered(l, m);
        if self.pa.remove(&key) {
            self.pb.insert(key);
            true
        } else if self.pb.remove(&key) {
            self.pa.insert(key);
            true
        } else {
            false
        }
    }

    pub fn coordinates(&self, p: u32) -> Option<&[Scalar; 2]> {
        self.coords.get(p as usize)?.as_ref()
    }

    pub fn point_at(&self, x: &Scalar, y: &Scalar) -> Option<u32> {
        self.coords
            .iter()
            .position(|c| c.as_ref().is_some_and(|[a, b]| a == x && b == y))
            .map(|p| p as u32)
    }

    /// Index of each point in the plane it was cut from.
    pub fn base_points(&self) -> &[u32] {
        &self.base_points
    }

    /// The removed line, as an index of the plane it was cut from.
    pub fn removed_line(&self) -> Option<u32> {
        self.removed_line
    }

    pub fn incident(&self, p: u32, l: u32) -> bool {
        self.line_sets[l as usize].contains(p as usize)
    }

    fn disjoint(&self, l: u32, m: u32) -> bool {
        self.line_sets[l as usize].is_disjoint(&self.line_sets[m as usize])
    }

    pub fn join(&self, p: u32, q: u32) -> Option<u32> {
        if p == q {
            return None;
        }
        self.point_lines[p as usize]
            .iter()
            .copied()
            .find(|&l| self.incident(q, l))
    }

    /// Lines through `p` disjoint from `l`.
    fn parallels_through(&self, l: u32, p: u32) -> impl Iterator<Item = u32> + '_ {
        self.point_lines[p as usize]
            .iter()
            .copied()
            .filter(move |&m| m != l && self.disjoint(l, m))
    }

    fn split_parallel(&self, l: u32, p: u32, side: &BTreeSet<(u32, u32)>) -> Option<u32> {
        if self.incident(p, l) {
            return Some(l);
        }
        match self.kinds[l as usize] {
            LineKind::L1 => self.parallels_through(l, p).next(),
            LineKind::L2 => self
                .point_lines[p as usize]
                .iter()
                .copied()
                .find(|&m| side.contains(&ordered(l, m))),
        }
    }

    /// The `a`-parallel of `l` through `p`.
    pub fn a_parallel(&self, l: u32, p: u32) -> Option<u32> {
        self.split_parallel(l, p, &self.pa)
    }

    /// The `b`-parallel of `l` through `p`.
    pub fn b_parallel(&self, l: u32, p: u32) -> Option<u32> {
        self.split_parallel(l, p, &self.pb)
    }

    /// The `a`-parallel of `y∨x` through `z` met with the `b`-parallel of `y∨z` through `x`.
    pub fn ternary(&self, x: u32, y: u32, z: u32, convention: Convention) -> Result<u32, Undefined> {
        if convention == Convention::Idempotent {
            if x == y {
                return Ok(z);
            }
            if z == y {
                return Ok(x);
            }
        }
        let l1 = self.join(y, x).ok_or_else(|| Undefined("y∨x: x = y".into()))?;
        let l2 = self.join(y, z).ok_or_else(|| Undefined("y∨z: z = y".into()))?;
        let m1 = self
            .a_parallel(l1, z)
            .ok_or_else(|| Undefined("no a-parallel of y∨x through z".into()))?;
        let m2 = self
            .b_parallel(l2, x)
            .ok_or_else(|| Undefined("no b-parallel of y∨z through x".into()))?;
        if m1 == m2 {
            return Err(Undefined("collinear: both parallels coincide".into()));
        }
        let mut common = self.lines[m1 as usize]
            .iter()
            .copied()
            .filter(|&p| self.incident(p, m2));
        common
            .next()
            .ok_or_else(|| Undefined("the two parallels do not meet".into()))
    }
}

/// Removes line `a` from an affine plane. Lines parallel to `a` form `ℒ₁`,
/// the rest `ℒ₂`; `P_b` holds pairs parallel in the plane and `P_a` pairs
/// meeting on `a`.
pub fn puncture(plane: &FinitePlane, a: u32) -> Result<TwoParallelPlane, PlaneError> {
    if plane.kind() != PlaneKind::Affine {
        return Err(PlaneError::NotAffine("puncture needs an affine plane".into()));
    }
    if a as usize >= plane.num_lines() {
        return Err(PlaneError::BadLine(a));
    }
    let kept: Vec<u32> = (0..plane.num_points() as u32)
        .filter(|&p| !plane.incident(p, a))
        .collect();
    let mut new_index = vec![u32::MAX; plane.num_points()];
    for (i, &p) in kept.iter().enumerate() {
        new_index[p as usize] = i as u32;
    }
    let old_lines: Vec<u32> = (0..plane.num_lines() as u32).filter(|&l| l != a).collect();
    let lines: Vec<Vec<u32>> = old_lines
        .iter()
        .map(|&l| {
            plane
                .line(l)
                .iter()
                .filter(|&&p| new_index[p as usize] != u32::MAX)
                .map(|&p| new_index[p as usize])
                .collect()
        })
        .collect();
    let kinds: Vec<LineKind> = old_lines
        .iter()
        .map(|&l| if plane.parallel(l, a) { LineKind::L1 } else { LineKind::L2 })
        .collect();
    let mut pa = BTreeSet::new();
    let mut pb = BTreeSet::new();
    for (i, &l) in old_lines.iter().enumerate() {
        for (j, &m) in old_lines.iter().enumerate().skip(i + 1) {
            if kinds[i] != LineKind::L2 || kinds[j] != LineKind::L2 {
                continue;
            }
            if plane.parallel(l, m) {
                pb.insert((i as u32, j as u32));
            } else if plane.meet(l, m).is_some_and(|p| plane.incident(p, a)) {
                pa.insert((i as u32, j as u32));
            }
        }
    }
    let mut tp = TwoParallelPlane::from_parts(kept.len(), lines, kinds, pa, pb)?;
    for (i, &p) in kept.iter().enumerate() {
        tp.coords[i] = plane.coordinates(p).cloned();
    }
    tp.base_points = kept;
    tp.removed_line = Some(a);
    Ok(tp)
}

/// Removes `b` to get an affine plane, then punctures along `a`.
pub fn puncture_projective(plane: &FinitePlane, a: u32, b: u32) -> Result<TwoParallelPlane, PlaneError> {
    if a == b {
        return Err(PlaneError::Invalid("a and b must differ".into()));
    }
    if a as usize >= plane.num_lines() {
        return Err(PlaneError::BadLine(a));
    }
    let (affine, kept) = affine_part(plane, b)?;
    let a_affine = if a < b { a } else { a - 1 };
    let mut tp = puncture(&affine, a_affine)?;
    tp.base_points = tp.base_points.iter().map(|&p| kept[p as usize]).collect();
    tp.removed_line = Some(a);
    Ok(tp)
}

/// Exhaustive check of TP1–TP4 with a witness for each failure.
pub fn check_two_parallel_axioms(u: &TwoParallelPlane) -> AxiomReport {
    let n = u.n_points as u32;
    let m = u.lines.len() as u32;
    let tp1 = (0..n).find_map(|p| {
        (p + 1..n).find_map(|q| {
            let k = u.point_lines[p as usize].iter().filter(|&&l| u.incident(q, l)).count();
            (k != 1).then(|| format!("points {p} and {q} lie on {k} lines"))
        })
    });
    let tp2 = (0..m).find_map(|l| {
        let want = match u.kinds[l as usize] {
            LineKind::L1 => 1,
            LineKind::L2 => 2,
        };
        (0..n).filter(|&p| !u.incident(p, l)).find_map(|p| {
            let k = u.parallels_through(l, p).count();
            (k != want).then(|| format!("{k} parallels to line {l} through point {p}, expected {want}"))
        })
    });
    AxiomReport {
        checks: vec![
            axiom("TP1", tp1),
            axiom("TP2", tp2),
            axiom("TP3", check_tp3(u)),
            axiom("TP4", check_tp4(u)),
        ],
    }
}

fn check_tp3(u: &TwoParallelPlane) -> Option<String> {
    let m = u.lines.len() as u32;
    let l2 = |l: u32| u.kinds[l as usize] == LineKind::L2;
    let mut parallel_pairs = BTreeSet::new();
    for l in (0..m).filter(|&l| l2(l)) {
        for k in (l + 1..m).filter(|&k| l2(k)) {
            if u.disjoint(l, k) {
                parallel_pairs.insert((l, k));
            }
        }
    }
    if let Some(p) = u.pa.intersection(&u.pb).next() {
        return Some(format!("pair {p:?} is both a- and b-parallel"));
    }
    let union: BTreeSet<_> = u.pa.union(&u.pb).copied().collect();
    if let Some(p) = union.symmetric_difference(&parallel_pairs).next() {
        return Some(format!("pair {p:?} breaks the partition of parallel ℒ₂ pairs"));
    }
    for l in (0..m).filter(|&l| l2(l)) {
        for p in (0..u.n_points as u32).filter(|&p| !u.incident(p, l)) {
            for (name, side) in [("a", &u.pa), ("b", &u.pb)] {
                let k = u.point_lines[p as usize]
                    .iter()
                    .filter(|&&k| side.contains(&ordered(l, k)))
                    .count();
                if k != 1 {
                    return Some(format!("{k} {name}-parallels to line {l} through point {p}"));
                }
            }
        }
    }
    None
}

fn check_tp4(u: &TwoParallelPlane) -> Option<String> {
    let n = u.n_points as u32;
    let collinear = |p: u32, q: u32, r: u32| {
        u.point_lines[p as usize]
            .iter()
            .any(|&l| u.incident(q, l) && u.incident(r, l))
    };
    let found = (0..n).any(|p| (p + 1..n).any(|q| (q + 1..n).any(|r| !collinear(p, q, r))));
    (!found).then(|| format!("all {n} points are collinear"))
}

/// The two-parallel ternary law as a [`TernaryLaw`] on point indices.
pub struct TpLaw<'a> {
    pub plane: &'a TwoParallelPlane,
    pub convention: Convention,
}

impl TernaryLaw for TpLaw<'_> {
    type Elem = u32;

    fn name(&self) -> String {
        "two-parallel".into()
    }

    fn eval(&self, x: &u32, y: &u32, z: &u32) -> Result<u32, Undefined> {
        self.plane.ternary(*x, *y, *z, self.convention)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u32 {
        rng.random_range(0..self.plane.n_points as u32)
    }

    fn contains(&self, x: &u32) -> bool {
        (*x as usize) < self.plane.n_points
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.plane.n_points as u32).collect())
    }
}
