//! Abstract ternary laws and the property checkers run against them.
//!
//! Samples are drawn from a ChaCha stream keyed by `(seed, sample index)`, so a
//! report is identical no matter how rayon schedules the work.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// An evaluation that has no value, with a short reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Undefined(pub String);

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Undefined {}

/// A partial map `(x, y, z) ↦ (xyz)` on a sampleable carrier.
pub trait TernaryLaw: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn name(&self) -> String;

    fn eval(&self, x: &Self::Elem, y: &Self::Elem, z: &Self::Elem) -> Result<Self::Elem, Undefined>;

    /// A random carrier element.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn contains(&self, x: &Self::Elem) -> bool;

    /// Every carrier element, when the carrier is finite and small.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub sample: usize,
    pub inputs: Vec<String>,
    pub detail: String,
}

pub const MAX_WITNESSES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub law: String,
    pub samples: usize,
    /// Samples on which every sub-expression was defined.
    pub defined: usize,
    /// Total number of failing samples; `failures` keeps the first few.
    pub failure_count: usize,
    pub failures: Vec<Witness>,
    pub status: Status,
    /// Set when the property is expected to fail (a counterexample search).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_failure: bool,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// True when the outcome is the expected one.
    pub fn as_expected(&self) -> bool {
        if self.expect_failure {
            self.status == Status::Fail
        } else {
            self.passed()
        }
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expect_failure = true;
        self
    }

    pub const CSV_HEADER: &'static str =
        "property,law,samples,defined,failures,status,expect_failure,first_witness";

    pub fn csv_row(&self) -> String {
        let witness = self
            .failures
            .first()
            .map(|w| format!("{} -> {}", w.inputs.join(" "), w.detail))
            .unwrap_or_default();
        [
            csv_field(&self.property),
            csv_field(&self.law),
            self.samples.to_string(),
            self.defined.to_string(),
            self.failure_count.to_string(),
            self.status.to_string(),
            self.expect_failure.to_string(),
            csv_field(&witness),
        ]
        .join(",")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Result of one sample in a property run.
pub enum Outcome {
    Vacuous,
    Holds,
    Fails { inputs: Vec<String>, detail: String },
}

/// Deterministic per-sample generator.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `check` on `samples` indices in parallel and merges the outcomes in
/// index order.
pub fn run_property<C>(property: &str, law: &str, samples: usize, seed: u64, check: C) -> PropertyReport
where
    C: Fn(&mut ChaCha8Rng, usize) -> Outcome + Sync,
{
    run_indexed(property, law, samples, |i| {
        let mut rng = sample_rng(seed, i);
        check(&mut rng, i)
    })
}

/// Like [`run_property`] over an explicit list of cases.
pub fn run_cases<T, C>(property: &str, law: &str, cases: &[T], check: C) -> PropertyReport
where
    T: Sync,
    C: Fn(&T) -> Outcome + Sync,
{
    run_indexed(property, law, cases.len(), |i| check(&cases[i]))
}

/// Evaluates `check(i)` for `i < count`, keeping only counts and the
/// lowest-indexed witnesses.
pub fn run_indexed<C>(property: &str, law: &str, count: usize, check: C) -> PropertyReport
where
    C: Fn(usize) -> Outcome + Sync,
{
    let tally = (0..count)
        .into_par_iter()
        .fold(Tally::default, |mut t, i| {
            t.add(i, check(i));
            t
        })
        .reduce(Tally::default, Tally::merge);
    let status = if tally.failure_count > 0 {
        Status::Fail
    } else if tally.defined == 0 {
        Status::Vacuous
    } else {
        Status::Pass
    };
    PropertyReport {
        property: property.to_string(),
        law: law.to_string(),
        samples: count,
        defined: tally.defined,
        failure_count: tally.failure_count,
        failures: tally.failures,
        status,
        expect_failure: false,
    }
}

#[derive(Default)]
struct Tally {
    defined: usize,
    failure_count: usize,
    failures: Vec<Witness>,
}

impl Tally {
    fn add(&mut self, i: usize, o: Outcome) {
        match o {
            Outcome::Vacuous => {}
            Outcome::Holds => self.defined += 1,
            Outcome::Fails { inputs, detail } => {
                self.defined += 1;
                self.failure_count += 1;
                if self.failures.len() < MAX_WITNESSES {
                    self.failures.push(Witness {
                        sample: i,
                        inputs,
                        detail,
                    });
                }
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.defined += other.defined;
        self.failure_count += other.failure_count;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|w| w.sample);
        self.failures.truncate(MAX_WITNESSES);
        self
    }
}

fn show<E: fmt::Debug>(xs: &[&E]) -> Vec<String> {
    xs.iter().map(|x| format!("{x:?}")).collect()
}

/// Checks `(xyy) = x` and `(yyx) = x`.
pub fn check_idempotent<L: TernaryLaw>(law: &L, samples: usize, seed: u64) -> PropertyReport {
    run_property("idempotent", &law.name(), samples, seed, |rng, _| {
        let x = law.sample(rng);
        let y = law.sample(rng);
        let (Ok(a), Ok(b)) = (law.eval(&x, &y, &y), law.eval(&y, &y, &x)) else {
            return Outcome::Vacuous;
        };
        if a == x && b == x {
            Outcome::Holds
        } else {
            Outcome::Fails {
                inputs: show(&[&x, &y]),
                detail: format!("(xyy) = {a:?}, (yyx) = {b:?}"),
            }
        }
    })
}

/// Checks `(xw(vuz)) = (x(uvw)z) = ((xwv)uz)`.
pub fn check_para_associative<L: TernaryLaw>(law: &L, samples: usize, seed: u64) -> PropertyReport {
    run_property("para-associative", &law.name(), samples, seed, |rng, _| {
        let [x, w, v, u, z] = std::array::from_fn(|_| law.sample(rng));
        let eval = || -> Result<_, Undefined> {
            let left = law.eval(&x, &w, &law.eval(&v, &u, &z)?)?;
            let mid = law.eval(&x, &law.eval(&u, &v, &w)?, &z)?;
            let right = law.eval(&law.eval(&x, &w, &v)?, &u, &z)?;
            Ok((left, mid, right))
        };
        match eval() {
            Err(_) => Outcome::Vacuous,
            Ok((l, m, r)) if l == m && m == r => Outcome::Holds,
            Ok((l, m, r)) => Outcome::Fails {
                inputs: show(&[&x, &w, &v, &u, &z]),
                detail: format!("(xw(vuz)) = {l:?}, (x(uvw)z) = {m:?}, ((xwv)uz) = {r:?}"),
            },
        }
    })
}

/// For `w = (xyz)` with `x, y, z, w` pairwise distinct, checks
/// `(zwx) = y`, `(yxw) = z` and `(wzy) = x`.
pub fn check_klein_symmetry<L: TernaryLaw>(law: &L, samples: usize, seed: u64) -> PropertyReport {
    run_property("klein-symmetry", &law.name(), samples, seed, |rng, _| {
        let [x, y, z] = std::array::from_fn(|_| law.sample(rng));
        let Ok(w) = law.eval(&x, &y, &z) else {
            return Outcome::Vacuous;
        };
        let quad = [&x, &y, &z, &w];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| quad[i] != quad[j]));
        if !distinct {
            return Outcome::Vacuous;
        }
        let eval = || -> Result<_, Undefined> {
            Ok((
                law.eval(&z, &w, &x)?,
                law.eval(&y, &x, &w)?,
                law.eval(&w, &z, &y)?,
            ))
        };
        match eval() {
            Err(_) => Outcome::Vacuous,
            Ok((a, b, c)) if a == y && b == z && c == x => Outcome::Holds,
            Ok((a, b, c)) => Outcome::Fails {
                inputs: show(&[&x, &y, &z]),
                detail: format!("w = {w:?}; (zwx) = {a:?}, (yxw) = {b:?}, (wzy) = {c:?}"),
            },
        }
    })
}

/// Checks `(zyx) = (xyz)`, which only commutative torsors satisfy.
pub fn check_commutative<L: TernaryLaw>(law: &L, samples: usize, seed: u64) -> PropertyReport {
    run_property("commutative", &law.name(), samples, seed, |rng, _| {
        let [x, y, z] = std::array::from_fn(|_| law.sample(rng));
        match (law.eval(&x, &y, &z), law.eval(&z, &y, &x)) {
            (Ok(a), Ok(b)) if a == b => Outcome::Holds,
            (Ok(a), Ok(b)) => Outcome::Fails {
                inputs: show(&[&x, &y, &z]),
                detail: format!("(xyz) = {a:?}, (zyx) = {b:?}"),
            },
            _ => Outcome::Vacuous,
        }
    })
}

/// Checks that `L_{yx}` undoes `L_{xy}` and `R_{xy}` undoes `R_{yx}` pointwise,
/// so both translations are bijections of the carrier.
pub fn check_translations_invertible<L: TernaryLaw>(
    law: &L,
    samples: usize,
    seed: u64,
) -> PropertyReport {
    run_property("translations-invertible", &law.name(), samples, seed, |rng, _| {
        let [x, y, z] = std::array::from_fn(|_| law.sample(rng));
        let eval = || -> Result<_, Undefined> {
            let l = law.eval(&y, &x, &law.eval(&x, &y, &z)?)?;
            let r = law.eval(&law.eval(&z, &y, &x)?, &x, &y)?;
            Ok((l, r))
        };
        match eval() {
            Err(_) => Outcome::Vacuous,
            Ok((l, r)) if l == z && r == z => Outcome::Holds,
            Ok((l, r)) => Outcome::Fails {
                inputs: show(&[&x, &y, &z]),
                detail: format!("L_yx L_xy z = {l:?}, R_xy R_yx z = {r:?}"),
            },
        }
    })
}

/// Left translation `L_{xy}: z ↦ (xyz)`.
pub fn left_translation<'a, L: TernaryLaw>(
    law: &'a L,
    x: L::Elem,
    y: L::Elem,
) -> impl Fn(&L::Elem) -> Result<L::Elem, Undefined> + 'a {
    move |z| law.eval(&x, &y, z)
}

/// Right translation `R_{zy}: x ↦ (xyz)`.
pub fn right_translation<'a, L: TernaryLaw>(
    law: &'a L,
    z: L::Elem,
    y: L::Elem,
) -> impl Fn(&L::Elem) -> Result<L::Elem, Undefined> + 'a {
    move |x| law.eval(x, &y, &z)
}

/// True when `map` is a permutation of `elements`.
pub fn is_permutation<E, M>(elements: &[E], map: M) -> bool
where
    E: PartialEq,
    M: Fn(&E) -> Result<E, Undefined>,
{
    let mut hit = vec![false; elements.len()];
    for e in elements {
        let Ok(img) = map(e) else {
            return false;
        };
        match elements.iter().position(|f| *f == img) {
            Some(i) if !hit[i] => hit[i] = true,
            _ => return false,
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq)]
pub struct Subtorsor<E> {
    pub stable: bool,
    /// A triple whose product leaves the subset.
    pub witness: Option<(E, E, E)>,
}

/// Exhaustive stability check of a finite subset. Undefined products are skipped.
pub fn is_subtorsor<L: TernaryLaw>(law: &L, subset: &[L::Elem]) -> Subtorsor<L::Elem> {
    for x in subset {
        for y in subset {
            for z in subset {
                if let Ok(w) = law.eval(x, y, z) {
                    if !subset.contains(&w) {
                        return Subtorsor {
                            stable: false,
                            witness: Some((x.clone(), y.clone(), z.clone())),
                        };
                    }
                }
            }
        }
    }
    Subtorsor {
        stable: true,
        witness: None,
    }
}

/// A group with sampleable elements.
pub trait Group: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn name(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn contains(&self, a: &Self::Elem) -> bool;

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// The torsor `(xyz) = x y⁻¹ z` of a group.
pub struct GroupTorsor<G>(pub G);

pub fn torsor_from_group<G: Group>(group: G) -> GroupTorsor<G> {
    GroupTorsor(group)
}

impl<G: Group> TernaryLaw for GroupTorsor<G> {
    type Elem = G::Elem;

    fn name(&self) -> String {
        format!("torsor({})", self.0.name())
    }

    fn eval(&self, x: &G::Elem, y: &G::Elem, z: &G::Elem) -> Result<G::Elem, Undefined> {
        let g = &self.0;
        Ok(g.product(&g.product(x, &g.inverse(y)), z))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> G::Elem {
        self.0.sample(rng)
    }

    fn contains(&self, x: &G::Elem) -> bool {
        self.0.contains(x)
    }

    fn elements(&self) -> Option<Vec<G::Elem>> {
        self.0.elements()
    }
}

/// The group obtained from a torsor by fixing an origin `e`.
pub struct GroupView<'a, L: TernaryLaw> {
    law: &'a L,
    e: L::Elem,
}

pub fn group_from_torsor<L: TernaryLaw>(law: &L, e: L::Elem) -> GroupView<'_, L> {
    GroupView { law, e }
}

impl<L: TernaryLaw> GroupView<'_, L> {
    pub fn identity(&self) -> &L::Elem {
        &self.e
    }

    /// `x·z = (xez)`.
    pub fn product(&self, x: &L::Elem, z: &L::Elem) -> Result<L::Elem, Undefined> {
        self.law.eval(x, &self.e, z)
    }

    /// `x⁻¹ = (exe)`.
    pub fn inverse(&self, x: &L::Elem) -> Result<L::Elem, Undefined> {
        self.law.eval(&self.e, x, &self.e)
    }
}

/// `(ℤ, +)`, sampled from a bounded window.
pub struct IntegerAddition;

impl Group for IntegerAddition {
    type Elem = i64;

    fn name(&self) -> String {
        "Z,+".into()
    }

    fn identity(&self) -> i64 {
        0
    }

    fn product(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inverse(&self, a: &i64) -> i64 {
        -a
    }

    fn sample(&self, rng: &mut dyn RngCore) -> i64 {
        use rand::Rng;
        rng.random_range(-1000..=1000)
    }

    fn contains(&self, _: &i64) -> bool {
        true
    }
}

/// `(𝕂^×, ·)` for an exact field.
pub struct Multiplicative(pub crate::scalars::ScalarField);

impl Group for Multiplicative {
    type Elem = crate::scalars::Scalar;

    fn name(&self) -> String {
        format!("{}^x", self.0)
    }

    fn identity(&self) -> Self::Elem {
        self.0.one()
    }

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a * b
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        use crate::scalars::FieldElement;
        a.inv().expect("nonzero element")
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        self.0.sample_nonzero(rng)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        use crate::scalars::FieldElement;
        !a.is_zero()
    }
}

/// A total law given by a closure, handy for counterexamples.
pub struct FnLaw<E, F, S> {
    pub name: String,
    pub eval: F,
    pub sample: S,
    _elem: std::marker::PhantomData<fn() -> E>,
}

impl<E, F, S> FnLaw<E, F, S> {
    pub fn new(name: &str, eval: F, sample: S) -> Self {
        FnLaw {
            name: name.to_string(),
            eval,
            sample,
            _elem: std::marker::PhantomData,
        }
    }
}

impl<E, F, S> TernaryLaw for FnLaw<E, F, S>
where
    E: Clone + PartialEq + fmt::Debug + Send + Sync,
    F: Fn(&E, &E, &E) -> E + Sync,
    S: Fn(&mut dyn RngCore) -> E + Sync,
{
    type Elem = E;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn eval(&self, x: &E, y: &E, z: &E) -> Result<E, Undefined> {
        Ok((self.eval)(x, y, z))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> E {
        (self.sample)(rng)
    }

    fn contains(&self, _: &E) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FieldElement, ScalarField};
    use rand::Rng;

    fn ints(rng: &mut dyn RngCore) -> i64 {
        rng.random_range(-50..=50)
    }

    #[test]
    fn projection_law_is_not_idempotent() {
        let law = FnLaw::new("z", |_: &i64, _: &i64, z: &i64| *z, ints);
        let r = check_idempotent(&law, 200, 1);
        assert_eq!(r.status, Status::Fail);
        let w = &r.failures[0];
        assert_ne!(w.inputs[0], w.inputs[1]);
        assert!(r.failures.len() <= MAX_WITNESSES);
        assert!(r.failures.windows(2).all(|p| p[0].sample < p[1].sample));
    }

    #[test]
    fn sum_law_is_a_semitorsor() {
        let law = FnLaw::new("x+y+z", |x: &i64, y: &i64, z: &i64| x + y + z, ints);
        assert_eq!(check_para_associative(&law, 100, 3).status, Status::Pass);
        assert_eq!(check_idempotent(&law, 100, 3).status, Status::Fail);
    }

    #[test]
    fn difference_law_is_not_para_associative() {
        let law = FnLaw::new("x-y-z", |x: &i64, y: &i64, z: &i64| x - y - z, ints);
        let r = check_para_associative(&law, 100, 3);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.failures[0].inputs.len(), 5);
    }

    #[test]
    fn group_torsors_pass() {
        let z = torsor_from_group(IntegerAddition);
        for r in [
            check_idempotent(&z, 1000, 5),
            check_para_associative(&z, 1000, 5),
            check_klein_symmetry(&z, 1000, 5),
            check_commutative(&z, 1000, 5),
            check_translations_invertible(&z, 1000, 5),
        ] {
            assert_eq!(r.status, Status::Pass, "{}", r.property);
        }
        assert_eq!(z.eval(&7, &3, &10).unwrap(), 14);

        let q = torsor_from_group(Multiplicative(ScalarField::rationals()));
        assert_eq!(check_para_associative(&q, 1000, 9).status, Status::Pass);
        assert_eq!(check_klein_symmetry(&q, 1000, 9).status, Status::Pass);
    }

    #[test]
    fn round_trip_through_group_view() {
        let f = ScalarField::rationals();
        let law = torsor_from_group(Multiplicative(f.clone()));
        let g = group_from_torsor(&law, f.one());
        let mut rng = sample_rng(11, 0);
        for _ in 0..200 {
            let a = f.sample_nonzero(&mut rng);
            let b = f.sample_nonzero(&mut rng);
            assert_eq!(g.product(&a, &b).unwrap(), &a * &b);
            assert_eq!(g.inverse(&a).unwrap(), a.inv().unwrap());
        }
        assert_eq!(g.inverse(g.identity()).unwrap(), f.one());
    }

    #[test]
    fn reports_are_deterministic() {
        let law = FnLaw::new("z", |_: &i64, _: &i64, z: &i64| *z, ints);
        assert_eq!(check_idempotent(&law, 500, 42), check_idempotent(&law, 500, 42));
    }

    #[test]
    fn vacuous_when_nothing_is_defined() {
        struct Never;
        impl TernaryLaw for Never {
            type Elem = u8;
            fn name(&self) -> String {
                "never".into()
            }
            fn eval(&self, _: &u8, _: &u8, _: &u8) -> Result<u8, Undefined> {
                Err(Undefined("never".into()))
            }
            fn sample(&self, _: &mut dyn RngCore) -> u8 {
                0
            }
            fn contains(&self, _: &u8) -> bool {
                true
            }
        }
        let r = check_para_associative(&Never, 10, 0);
        assert_eq!((r.status, r.defined), (Status::Vacuous, 0));
    }

    #[test]
    fn subtorsor_detection() {
        let law = torsor_from_group(IntegerAddition);
        let evens: Vec<i64> = (-4..=4).map(|k| 2 * k).collect();
        // (4)-(-4)+(4) leaves the window
        let r = is_subtorsor(&law, &evens);
        assert!(!r.stable);
        let (x, y, z) = r.witness.unwrap();
        assert!(!evens.contains(&(x - y + z)));
        assert!(is_subtorsor(&law, &[5]).stable);
    }

    #[test]
    fn csv_quotes_commas() {
        let law = FnLaw::new("a,b", |_: &i64, _: &i64, z: &i64| *z, ints);
        let row = check_idempotent(&law, 5, 0).csv_row();
        assert!(row.starts_with("idempotent,\"a,b\",5,"));
    }
}
