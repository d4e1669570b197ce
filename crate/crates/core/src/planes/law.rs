use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_desargues, Convention, DesarguesMode, DesarguesReport, FinitePlane, PlaneError, PlaneKind};
use crate::torsor::{run_indexed, sample_rng, Outcome, PropertyReport, TernaryLaw, Undefined};

/// `(((x∨y)∧a)∨z) ∧ (((z∨y)∧b)∨x)` on point indices of a projective plane.
pub fn formula_b(
    plane: &FinitePlane,
    x: u32,
    y: u32,
    z: u32,
    a: u32,
    b: u32,
    convention: Convention,
) -> Result<u32, Undefined> {
    if convention == Convention::Idempotent {
        if x == y {
            return Ok(z);
        }
        if z == y {
            return Ok(x);
        }
    }
    let undefined = |step: &str| Undefined(format!("degenerate step {step}"));
    let xy = plane.join(x, y).ok_or_else(|| undefined("x∨y"))?;
    let pa = plane.meet(xy, a).ok_or_else(|| undefined("(x∨y)∧a"))?;
    let l1 = plane.join(pa, z).ok_or_else(|| undefined("((x∨y)∧a)∨z"))?;
    let zy = plane.join(z, y).ok_or_else(|| undefined("z∨y"))?;
    let pb = plane.meet(zy, b).ok_or_else(|| undefined("(z∨y)∧b"))?;
    let l2 = plane.join(pb, x).ok_or_else(|| undefined("((z∨y)∧b)∨x"))?;
    plane.meet(l1, l2).ok_or_else(|| undefined("w"))
}

/// The law `(xyz)_{ab}` on `U = 𝒫 ∖ (a ∪ b)`.
#[derive(Clone, Debug)]
pub struct ProjectiveLaw<'a> {
    plane: &'a FinitePlane,
    a: u32,
    b: u32,
    convention: Convention,
    carrier: Vec<u32>,
}

impl<'a> ProjectiveLaw<'a> {
    pub fn new(plane: &'a FinitePlane, a: u32, b: u32, convention: Convention) -> Result<Self, PlaneError> {
        if plane.kind() != PlaneKind::Projective {
            return Err(PlaneError::NotProjective("the law needs a projective plane".into()));
        }
        for l in [a, b] {
            if l as usize >= plane.num_lines() {
                return Err(PlaneError::BadLine(l));
            }
        }
        if a == b {
            return Err(PlaneError::Invalid("a and b must differ".into()));
        }
        let carrier = (0..plane.num_points() as u32)
            .filter(|&p| !plane.incident(p, a) && !plane.incident(p, b))
            .collect();
        Ok(ProjectiveLaw {
            plane,
            a,
            b,
            convention,
            carrier,
        })
    }

    pub fn carrier(&self) -> &[u32] {
        &self.carrier
    }

    pub fn lines(&self) -> (u32, u32) {
        (self.a, self.b)
    }
}

impl TernaryLaw for ProjectiveLaw<'_> {
    type Elem = u32;

    fn name(&self) -> String {
        format!("projective(a={}, b={})", self.a, self.b)
    }

    fn eval(&self, x: &u32, y: &u32, z: &u32) -> Result<u32, Undefined> {
        let w = formula_b(self.plane, *x, *y, *z, self.a, self.b, self.convention)?;
        if self.contains(&w) {
            Ok(w)
        } else {
            Err(Undefined(format!("result {w} lies on a or b")))
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u32 {
        self.carrier[rng.random_range(0..self.carrier.len())]
    }

    fn contains(&self, x: &u32) -> bool {
        (*x as usize) < self.plane.num_points()
            && !self.plane.incident(*x, self.a)
            && !self.plane.incident(*x, self.b)
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some(self.carrier.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Sampled { budget: usize, seed: u64 },
}

/// Compares `(xo(upv))` with `((xou)pv)` on quintuples where both sides are defined.
pub fn check_associativity(plane: &FinitePlane, a: u32, b: u32, mode: ScanMode) -> Result<PropertyReport, PlaneError> {
    let law = ProjectiveLaw::new(plane, a, b, Convention::Idempotent)?;
    Ok(check_associativity_with(&law, mode))
}

pub fn check_associativity_with(law: &ProjectiveLaw<'_>, mode: ScanMode) -> PropertyReport {
    let carrier = law.carrier();
    let n = carrier.len();
    let quintuple = |i: usize| -> [u32; 5] {
        match mode {
            ScanMode::Exhaustive => {
                let mut r = i;
                std::array::from_fn(|_| {
                    let p = carrier[r % n];
                    r /= n;
                    p
                })
            }
            ScanMode::Sampled { seed, .. } => {
                let mut rng = sample_rng(seed, i);
                std::array::from_fn(|_| carrier[rng.random_range(0..n)])
            }
        }
    };
    let count = match (n, mode) {
        (0, _) => 0,
        (_, ScanMode::Exhaustive) => n.pow(5),
        (_, ScanMode::Sampled { budget, .. }) => budget,
    };
    run_indexed("associativity", &law.name(), count, |i| {
        let [x, o, u, p, v] = quintuple(i);
        let lhs = law.eval(&u, &p, &v).and_then(|upv| law.eval(&x, &o, &upv));
        let rhs = law.eval(&x, &o, &u).and_then(|xou| law.eval(&xou, &p, &v));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => Outcome::Holds,
            (Ok(l), Ok(r)) => Outcome::Fails {
                inputs: [x, o, u, p, v].iter().map(u32::to_string).collect(),
                detail: format!("(xo(upv)) = {l}, ((xou)pv) = {r}"),
            },
            _ => Outcome::Vacuous,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub desargues: DesarguesMode,
    pub associativity: ScanMode,
    /// Line pairs `(a, b)`; empty means `pair_count` pairs drawn with `seed`.
    pub pairs: Vec<(u32, u32)>,
    pub pair_count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub a: u32,
    pub b: u32,
    pub report: PropertyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceSummary {
    pub desargues: DesarguesReport,
    pub pairs: Vec<PairReport>,
    pub quintuples: usize,
    pub defined: usize,
    pub vacuous: usize,
    pub associativity_failures: usize,
    /// Desarguesian with no associativity failure, or a Desargues
    /// counterexample together with at least one associativity failure.
    pub consistent: bool,
}

/// Runs the Desargues search and the associativity scan on several `(a, b)`
/// pairs and checks that both agree.
pub fn equivalence_experiment(plane: &FinitePlane, config: &ExperimentConfig) -> Result<EquivalenceSummary, PlaneError> {
    let desargues = check_desargues(plane, config.desargues)?;
    let pairs = if config.pairs.is_empty() {
        draw_pairs(plane.num_lines() as u32, config.pair_count, config.seed)
    } else {
        config.pairs.clone()
    };
    let pairs = pairs
        .into_iter()
        .map(|(a, b)| {
            Ok(PairReport {
                a,
                b,
                report: check_associativity(plane, a, b, config.associativity)?,
            })
        })
        .collect::<Result<Vec<_>, PlaneError>>()?;
    let quintuples = pairs.iter().map(|p| p.report.samples).sum::<usize>();
    let defined = pairs.iter().map(|p| p.report.defined).sum::<usize>();
    let associativity_failures = pairs.iter().map(|p| p.report.failure_count).sum();
    let consistent = desargues.is_desarguesian() == (associativity_failures == 0);
    Ok(EquivalenceSummary {
        desargues,
        pairs,
        quintuples,
        defined,
        vacuous: quintuples - defined,
        associativity_failures,
        consistent,
    })
}

fn draw_pairs(lines: u32, count: usize, seed: u64) -> Vec<(u32, u32)> {
    let total = lines as usize * (lines as usize - 1);
    if count >= total {
        return (0..lines)
            .flat_map(|a| (0..lines).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.random_range(0..lines);
        let b = rng.random_range(0..lines);
        if a != b && !out.contains(&(a, b)) {
            out.push((a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{join, meet, Line2, Point2};
    use crate::planes::{build_affine_plane, projective_completion};
    use crate::scalars::{Scalar, ScalarField};

    fn pg(q: u32) -> FinitePlane {
        projective_completion(&build_affine_plane(&ScalarField::gf(q).unwrap()).unwrap()).unwrap()
    }

    /// The same formula evaluated with homogeneous coordinates over ℚ.
    fn formula_b_rational(x: (i64, i64), y: (i64, i64), z: (i64, i64), a: Line2<Scalar>, b: Line2<Scalar>) -> Point2<Scalar> {
        let f = ScalarField::rationals();
        let pt = |(u, v): (i64, i64)| Point2::new(f.from_int(u), f.from_int(v));
        let (x, y, z) = (pt(x), pt(y), pt(z));
        let pa = meet(&join(&x, &y).unwrap(), &a).unwrap();
        let l1 = crate::incidence::join_proj(&pa, &z.to_proj()).unwrap();
        let pb = meet(&join(&z, &y).unwrap(), &b).unwrap();
        let l2 = crate::incidence::join_proj(&pb, &x.to_proj()).unwrap();
        meet(&l1, &l2).unwrap().to_affine().unwrap()
    }

    fn line(u: i64, v: i64, c: i64) -> Line2<Scalar> {
        let f = ScalarField::rationals();
        Line2::new(f.from_int(u), f.from_int(v), f.from_int(c)).unwrap()
    }

    fn rpt(u: i64, v: i64) -> Point2<Scalar> {
        let f = ScalarField::rationals();
        Point2::new(f.from_int(u), f.from_int(v))
    }

    #[test]
    fn rational_examples() {
        let axis = line(0, 1, 0);
        let inf = Line2::at_infinity(&ScalarField::rationals().zero());
        // literal slot order (a, b) = (x₂ = 0, i)
        assert_eq!(formula_b_rational((0, 1), (1, 1), (2, 2), axis.clone(), inf.clone()), rpt(1, 2));
        // swapped slots reproduce the trapezoid law at (x, y, z)
        assert_eq!(formula_b_rational((0, 1), (1, 1), (2, 2), inf, axis.clone()), rpt(0, 2));
        assert_eq!(formula_b_rational((1, 1), (2, 1), (2, 2), axis, line(1, 0, 0)), rpt(1, 2));
    }

    #[test]
    fn finite_formula_matches_rational_trace_pattern() {
        // over GF(5) with b at infinity the law is Main(z, y, x)
        let field = ScalarField::gf(5).unwrap();
        let ag = build_affine_plane(&field).unwrap();
        let plane = projective_completion(&ag).unwrap();
        let b = plane.infinity_line().unwrap();
        let zero = field.zero();
        let axis: Vec<u32> = field.elements().unwrap().iter().map(|x| plane.point_at(x, &zero).unwrap()).collect();
        let a = plane.join(axis[0], axis[1]).unwrap();
        let alpha = crate::trapezoid::AffineFunctional::coordinate(2, 1, &zero);
        let law = ProjectiveLaw::new(&plane, a, b, Convention::Strict).unwrap();
        let c = |p: u32| plane.coordinates(p).unwrap().to_vec();
        let mut checked = 0;
        for &x in law.carrier() {
            for &y in law.carrier() {
                for &z in law.carrier() {
                    if let Ok(w) = law.eval(&x, &y, &z) {
                        let expected = crate::trapezoid::trapezoid(&c(z), &c(y), &c(x), &alpha).unwrap();
                        assert_eq!(c(w), expected);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn strict_convention_leaves_x_eq_y_undefined() {
        let plane = pg(3);
        let law = ProjectiveLaw::new(&plane, 0, 1, Convention::Strict).unwrap();
        let x = law.carrier()[0];
        let z = law.carrier()[1];
        assert!(law.eval(&x, &x, &z).is_err());
        let idem = ProjectiveLaw::new(&plane, 0, 1, Convention::Idempotent).unwrap();
        assert_eq!(idem.eval(&x, &x, &z), Ok(z));
        assert_eq!(idem.eval(&x, &z, &z), Ok(x));
    }

    #[test]
    fn law_rejects_bad_lines() {
        let plane = pg(2);
        assert!(ProjectiveLaw::new(&plane, 1, 1, Convention::Strict).is_err());
        assert!(ProjectiveLaw::new(&plane, 0, 99, Convention::Strict).is_err());
        let affine = build_affine_plane(&ScalarField::gf(2).unwrap()).unwrap();
        assert!(matches!(
            ProjectiveLaw::new(&affine, 0, 1, Convention::Strict),
            Err(PlaneError::NotProjective(_))
        ));
    }

    #[test]
    fn pg2_and_pg3_are_associative() {
        for (q, pairs) in [(2u32, vec![(0, 1), (3, 6)]), (3, vec![(0, 1), (5, 12), (12, 2)])] {
            let plane = pg(q);
            for (a, b) in pairs {
                let r = check_associativity(&plane, a, b, ScanMode::Exhaustive).unwrap();
                assert!(r.passed(), "q = {q} ({a}, {b}): {:?}", r.failures);
                assert!(r.defined > 0);
            }
        }
    }

    #[test]
    fn sampled_scan_is_deterministic() {
        let plane = pg(4);
        let mode = ScanMode::Sampled { budget: 2000, seed: 9 };
        let r1 = check_associativity(&plane, 2, 7, mode).unwrap();
        let r2 = check_associativity(&plane, 2, 7, mode).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.passed());
    }
}
