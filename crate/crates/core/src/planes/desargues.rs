use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FinitePlane, PlaneError, PlaneKind};
use crate::torsor::sample_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum DesarguesMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

/// Two triangles in perspective from `center` whose corresponding sides meet
/// in three non-collinear points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesarguesWitness {
    pub center: u32,
    pub first: [u32; 3],
    pub second: [u32; 3],
    /// Meets of sides `01`, `12`, `20` of the two triangles.
    pub side_meets: [u32; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesarguesStatus {
    Desarguesian,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesarguesReport {
    pub status: DesarguesStatus,
    pub exhaustive: bool,
    /// Centrally perspective configurations examined.
    pub configurations: usize,
    pub witness: Option<DesarguesWitness>,
}

impl DesarguesReport {
    pub fn is_desarguesian(&self) -> bool {
        self.status == DesarguesStatus::Desarguesian
    }
}

/// Triangles on three lines through the center, one vertex pair per line.
struct Config {
    center: u32,
    first: [u32; 3],
    second: [u32; 3],
}

enum Verdict {
    Skip,
    Axial,
    Fails(DesarguesWitness),
}

fn judge(plane: &FinitePlane, c: &Config) -> Verdict {
    let [a, b, cc] = c.first;
    let [a2, b2, c2] = c.second;
    if plane.collinear(a, b, cc) || plane.collinear(a2, b2, c2) {
        return Verdict::Skip;
    }
    let side = |p: u32, q: u32, p2: u32, q2: u32| {
        let l = plane.join(p, q).expect("distinct vertices");
        let m = plane.join(p2, q2).expect("distinct vertices");
        plane.meet(l, m).expect("sides differ")
    };
    let meets = [side(a, b, a2, b2), side(b, cc, b2, c2), side(cc, a, c2, a2)];
    if plane.collinear(meets[0], meets[1], meets[2]) {
        Verdict::Axial
    } else {
        Verdict::Fails(DesarguesWitness {
            center: c.center,
            first: c.first,
            second: c.second,
            side_meets: meets,
        })
    }
}

fn others_on(plane: &FinitePlane, l: u32, center: u32) -> Vec<u32> {
    plane.line(l).iter().copied().filter(|&p| p != center).collect()
}

/// Searches centrally perspective triangle pairs for one that is not axially
/// perspective. Exhaustive mode visits every ordered configuration.
pub fn check_desargues(plane: &FinitePlane, mode: DesarguesMode) -> Result<DesarguesReport, PlaneError> {
    if plane.kind() != PlaneKind::Projective {
        return Err(PlaneError::NotProjective("Desargues search needs a projective plane".into()));
    }
    match mode {
        DesarguesMode::Exhaustive => Ok(exhaustive(plane)),
        DesarguesMode::Sampled { samples, seed } => Ok(sampled(plane, samples, seed)),
    }
}

fn exhaustive(plane: &FinitePlane) -> DesarguesReport {
    let per_center: Vec<(usize, Option<DesarguesWitness>)> = (0..plane.num_points() as u32)
        .into_par_iter()
        .map(|o| {
            let through = plane.lines_through(o);
            let mut count = 0;
            for (i, &l1) in through.iter().enumerate() {
                for (j, &l2) in through.iter().enumerate().skip(i + 1) {
                    for &l3 in &through[j + 1..] {
                        let ps = [l1, l2, l3].map(|l| others_on(plane, l, o));
                        for &a in &ps[0] {
                            for &a2 in ps[0].iter().filter(|&&p| p != a) {
                                for &b in &ps[1] {
                                    for &b2 in ps[1].iter().filter(|&&p| p != b) {
                                        for &c in &ps[2] {
                                            for &c2 in ps[2].iter().filter(|&&p| p != c) {
                                                let cfg = Config {
                                                    center: o,
                                                    first: [a, b, c],
                                                    second: [a2, b2, c2],
                                                };
                                                match judge(plane, &cfg) {
                                                    Verdict::Skip => {}
                                                    Verdict::Axial => count += 1,
                                                    Verdict::Fails(w) => return (count + 1, Some(w)),
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            (count, None)
        })
        .collect();
    let configurations = per_center.iter().map(|(c, _)| c).sum();
    let witness = per_center.into_iter().find_map(|(_, w)| w);
    DesarguesReport {
        status: if witness.is_some() {
            DesarguesStatus::Counterexample
        } else {
            DesarguesStatus::Desarguesian
        },
        exhaustive: true,
        configurations,
        witness,
    }
}

fn random_config(plane: &FinitePlane, index: usize, seed: u64) -> Config {
    let mut rng = sample_rng(seed, index);
    let center = rng.random_range(0..plane.num_points() as u32);
    let through = plane.lines_through(center);
    let mut chosen: Vec<u32> = Vec::with_capacity(3);
    while chosen.len() < 3 {
        let l = through[rng.random_range(0..through.len())];
        if !chosen.contains(&l) {
            chosen.push(l);
        }
    }
    let mut pick_pair = |l: u32| {
        let pts = others_on(plane, l, center);
        let i = rng.random_range(0..pts.len());
        let mut j = rng.random_range(0..pts.len() - 1);
        if j >= i {
            j += 1;
        }
        (pts[i], pts[j])
    };
    let (a, a2) = pick_pair(chosen[0]);
    let (b, b2) = pick_pair(chosen[1]);
    let (c, c2) = pick_pair(chosen[2]);
    Config {
        center,
        first: [a, b, c],
        second: [a2, b2, c2],
    }
}

fn sampled(plane: &FinitePlane, samples: usize, seed: u64) -> DesarguesReport {
    let first_failure = (0..samples).into_par_iter().find_map_first(|i| {
        match judge(plane, &random_config(plane, i, seed)) {
            Verdict::Fails(w) => Some((i, w)),
            _ => None,
        }
    });
    match first_failure {
        Some((i, w)) => DesarguesReport {
            status: DesarguesStatus::Counterexample,
            exhaustive: false,
            configurations: i + 1,
            witness: Some(w),
        },
        None => DesarguesReport {
            status: DesarguesStatus::Desarguesian,
            exhaustive: false,
            configurations: samples,
            witness: None,
        },
    }
}

/// Re-checks a witness by scanning the line list directly. `Ok` means the
/// witness is a genuine violation of Desargues' theorem.
pub fn replay_desargues_witness(plane: &FinitePlane, w: &DesarguesWitness) -> Result<(), String> {
    let line_through = |p: u32, q: u32| -> Result<&Vec<u32>, String> {
        plane
            .lines()
            .iter()
            .find(|l| l.contains(&p) && l.contains(&q))
            .ok_or_else(|| format!("no line through {p} and {q}"))
    };
    let on_one_line = |pts: [u32; 3]| plane.lines().iter().any(|l| pts.iter().all(|p| l.contains(p)));
    let all = [w.center, w.first[0], w.first[1], w.first[2], w.second[0], w.second[1], w.second[2]];
    for (i, p) in all.iter().enumerate() {
        if all[..i].contains(p) {
            return Err(format!("point {p} repeats"));
        }
    }
    for i in 0..3 {
        if !on_one_line([w.center, w.first[i], w.second[i]]) {
            return Err(format!("vertex pair {i} is not on a line through the center"));
        }
    }
    if on_one_line(w.first) || on_one_line(w.second) {
        return Err("a triangle is degenerate".into());
    }
    for (k, (i, j)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        let s = w.side_meets[k];
        let l = line_through(w.first[i], w.first[j])?;
        let m = line_through(w.second[i], w.second[j])?;
        if !l.contains(&s) || !m.contains(&s) {
            return Err(format!("side meet {k} is not on both sides"));
        }
    }
    if on_one_line(w.side_meets) {
        return Err("side meets are collinear".into());
    }
    Ok(())
}
