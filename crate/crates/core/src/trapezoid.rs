//! The trapezoid law `(xyz) = α(z)α(y)⁻¹(x − y) + z` on 𝕂ⁿ minus the hyperplane
//! `a = {α = 0}`, the group it induces once an origin `e` is fixed, and the
//! planar join/meet construction it comes from.
//!
//! `α` may carry a constant term, which moves `a` off the origin. Wherever a
//! difference of points is fed to `α` the linear part is used, so all formulas
//! hold verbatim for affine `α`.

use rand::RngCore;
use thiserror::Error;

use crate::incidence::{self, IncidenceError, Line2, Point2, ProjPoint};
use crate::scalars::{FieldElement, FieldError, Scalar, ScalarField, Sign};
use crate::torsor::{TernaryLaw, Undefined};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrapezoidError {
    #[error("middle argument lies on the removed hyperplane")]
    YOnBoundary,
    #[error("perspective denominator vanishes")]
    VanishingDenominator,
    #[error("line through x and e is parallel to the removed hyperplane")]
    ParallelLine,
    #[error("{0} is not in G (α vanishes)")]
    NotMember(&'static str),
    #[error("{0} is not on the removed hyperplane")]
    NotOnBoundary(&'static str),
    #[error("origin must satisfy α(e) = 1")]
    OriginNotNormalized,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("origin is not on the subgroup line")]
    NotOnSubgroupLine,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("direction is parallel to the removed hyperplane")]
    DirectionInBoundary,
    #[error("auxiliary point is collinear with the inputs")]
    AuxiliaryCollinear,
    #[error("functional has zero linear part")]
    ZeroFunctional,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl TrapezoidError {
    /// Stable short name, used as the scene diagnostic.
    pub fn diagnostic(&self) -> &'static str {
        match self {
            TrapezoidError::YOnBoundary => "YOnBoundary",
            TrapezoidError::VanishingDenominator => "VanishingDenominator",
            TrapezoidError::ParallelLine => "ParallelLine",
            TrapezoidError::NotMember(_) => "NotMember",
            TrapezoidError::NotOnBoundary(_) => "NotOnBoundary",
            TrapezoidError::OriginNotNormalized => "OriginNotNormalized",
            TrapezoidError::DimensionMismatch { .. } => "DimensionMismatch",
            TrapezoidError::NotOnSubgroupLine => "NotOnSubgroupLine",
            TrapezoidError::ZeroDirection => "ZeroDirection",
            TrapezoidError::DirectionInBoundary => "DirectionInBoundary",
            TrapezoidError::AuxiliaryCollinear => "AuxiliaryCollinear",
            TrapezoidError::ZeroFunctional => "ZeroFunctional",
            TrapezoidError::ZeroParameter => "ZeroParameter",
            TrapezoidError::Field(FieldError::UnorderedField) => "UnorderedField",
            TrapezoidError::Field(_) => "FieldError",
        }
    }
}

type Result<T> = std::result::Result<T, TrapezoidError>;

/// `α(x) = Σ aᵢxᵢ + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFunctional<F> {
    coeffs: Vec<F>,
    constant: F,
}

impl<F: FieldElement> AffineFunctional<F> {
    pub fn new(coeffs: Vec<F>, constant: F) -> Result<Self> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(TrapezoidError::ZeroFunctional);
        }
        Ok(AffineFunctional { coeffs, constant })
    }

    /// `α(x) = x_i` on 𝕂ⁿ.
    pub fn coordinate(n: usize, i: usize, like: &F) -> Self {
        assert!(i < n, "coordinate index out of range");
        let coeffs = (0..n)
            .map(|j| if j == i { like.one_like() } else { like.zero_like() })
            .collect();
        AffineFunctional {
            coeffs,
            constant: like.zero_like(),
        }
    }

    /// The functional `u·x1 + v·x2 + c` of a planar line.
    pub fn from_line(a: &Line2<F>) -> Result<Self> {
        Self::new(vec![a.u().clone(), a.v().clone()], a.c().clone())
    }

    pub fn to_line(&self) -> std::result::Result<Line2<F>, IncidenceError> {
        assert_eq!(self.dim(), 2, "only planar functionals define a line");
        Line2::new(self.coeffs[0].clone(), self.coeffs[1].clone(), self.constant.clone())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn constant(&self) -> &F {
        &self.constant
    }

    pub fn eval(&self, x: &[F]) -> F {
        self.linear(x) + self.constant.clone()
    }

    /// The linear part applied to a displacement vector.
    pub fn linear(&self, v: &[F]) -> F {
        debug_assert_eq!(v.len(), self.coeffs.len());
        self.coeffs
            .iter()
            .zip(v)
            .fold(self.constant.zero_like(), |acc, (a, x)| acc + a.clone() * x.clone())
    }

    fn check_dim(&self, x: &[F]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(TrapezoidError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            })
        }
    }

    fn member(&self, x: &[F], name: &'static str) -> Result<F> {
        self.check_dim(x)?;
        let v = self.eval(x);
        if v.is_zero() {
            Err(TrapezoidError::NotMember(name))
        } else {
            Ok(v)
        }
    }

    /// `α(e)`, required to equal one.
    fn normalized_origin(&self, e: &[F]) -> Result<()> {
        self.check_dim(e)?;
        if self.eval(e).is_one() {
            Ok(())
        } else {
            Err(TrapezoidError::OriginNotNormalized)
        }
    }
}

pub(crate) fn sub<F: FieldElement>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub(crate) fn add<F: FieldElement>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub(crate) fn scale<F: FieldElement>(k: &F, x: &[F]) -> Vec<F> {
    x.iter().map(|a| k.clone() * a.clone()).collect()
}

fn is_zero_vec<F: FieldElement>(v: &[F]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// True when the vectors `u` and `v` are linearly dependent.
pub fn dependent<F: FieldElement>(u: &[F], v: &[F]) -> bool {
    (0..u.len()).all(|i| {
        (i + 1..u.len()).all(|j| (u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone()).is_zero())
    })
}

/// True when the three points lie on a common line.
pub fn collinear<F: FieldElement>(x: &[F], y: &[F], z: &[F]) -> bool {
    dependent(&sub(y, x), &sub(z, x))
}

/// `x − y + z`.
pub fn parallelogram<F: FieldElement>(x: &[F], y: &[F], z: &[F]) -> Vec<F> {
    add(&sub(x, y), z)
}

/// The barycentric formula for the perspective parallelogram with horizon `a`.
pub fn perspective_parallelogram<F: FieldElement>(
    x: &[F],
    y: &[F],
    z: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<Vec<F>> {
    for p in [x, y, z] {
        alpha.check_dim(p)?;
    }
    let (ax, ay, az) = (alpha.eval(x), alpha.eval(y), alpha.eval(z));
    let d = ay.clone() * ax.clone() - ax.clone() * az.clone() + ay.clone() * az.clone();
    let dinv = d.inv().map_err(|_| TrapezoidError::VanishingDenominator)?;
    let cx = ay.clone() * az.clone() * dinv.clone();
    let cy = ax.clone() * az * dinv.clone();
    let cz = ay * ax * dinv;
    Ok(add(&sub(&scale(&cx, x), &scale(&cy, y)), &scale(&cz, z)))
}

/// `(xyz) = α(z)α(y)⁻¹(x − y) + z`.
pub fn trapezoid<F: FieldElement>(
    x: &[F],
    y: &[F],
    z: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<Vec<F>> {
    for p in [x, y, z] {
        alpha.check_dim(p)?;
    }
    let ay = alpha.eval(y);
    let k = alpha.eval(z) * ay.inv().map_err(|_| TrapezoidError::YOnBoundary)?;
    Ok(add(&scale(&k, &sub(x, y)), z))
}

/// `((xyp)pz)`, the product routed through an auxiliary point `p`.
pub fn collinear_product<F: FieldElement>(
    x: &[F],
    y: &[F],
    z: &[F],
    alpha: &AffineFunctional<F>,
    p: &[F],
) -> Result<Vec<F>> {
    alpha.check_dim(p)?;
    if alpha.eval(p).is_zero() {
        return Err(TrapezoidError::NotMember("p"));
    }
    if collinear(x, y, z) {
        let dir = [sub(y, x), sub(z, x)]
            .into_iter()
            .find(|d| !is_zero_vec(d));
        if let Some(d) = dir {
            if dependent(&d, &sub(p, x)) {
                return Err(TrapezoidError::AuxiliaryCollinear);
            }
        }
    }
    let u = trapezoid(x, y, p, alpha)?;
    trapezoid(&u, p, z, alpha)
}

/// `x·z = (xez)`.
pub fn group_product<F: FieldElement>(
    x: &[F],
    z: &[F],
    e: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<Vec<F>> {
    alpha.member(x, "x")?;
    alpha.member(z, "z")?;
    alpha.member(e, "e")?;
    trapezoid(x, e, z, alpha)
}

/// `x⁻¹ = (exe) = α(e)α(x)⁻¹(e − x) + e`.
pub fn inverse<F: FieldElement>(x: &[F], e: &[F], alpha: &AffineFunctional<F>) -> Result<Vec<F>> {
    alpha.member(e, "e")?;
    alpha.member(x, "x")?;
    trapezoid(e, x, e, alpha)
}

/// `xⁿ` in closed form.
///
/// With `c = α(x)ⁿ α(e)¹⁻ⁿ`, `xⁿ = ((c − α(e))x + (α(x) − c)e) / (α(x) − α(e))`,
/// and `xⁿ = e + n(x − e)` when `α(x) = α(e)`.
pub fn power<F: FieldElement>(x: &[F], n: i64, e: &[F], alpha: &AffineFunctional<F>) -> Result<Vec<F>> {
    let ae = alpha.member(e, "e")?;
    let ax = alpha.member(x, "x")?;
    let diff = ax.clone() - ae.clone();
    if diff.is_zero() {
        let k = x[0].from_int_like(n);
        return Ok(add(e, &scale(&k, &sub(x, e))));
    }
    let c = ax.powi(n)? * ae.powi(1 - n)?;
    let dinv = diff.inv()?;
    let cx = (c.clone() - ae) * dinv.clone();
    let ce = (ax - c) * dinv;
    Ok(add(&scale(&cx, x), &scale(&ce, e)))
}

/// `xⁿ` by repeated multiplication with `x` or `x⁻¹`.
pub fn power_iterated<F: FieldElement>(
    x: &[F],
    n: i64,
    e: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<Vec<F>> {
    let step = if n < 0 { inverse(x, e, alpha)? } else { x.to_vec() };
    let mut acc = e.to_vec();
    for _ in 0..n.unsigned_abs() {
        acc = group_product(&step, &acc, e, alpha)?;
    }
    Ok(acc)
}

/// The section `φ(t) = ((t − α(e))x + (α(x) − t)e) / (α(x) − α(e))` of `α`
/// along the line `x ∨ e`.
pub fn section_phi<F: FieldElement>(
    t: &F,
    x: &[F],
    e: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<Vec<F>> {
    let ae = alpha.member(e, "e")?;
    let ax = alpha.member(x, "x")?;
    if t.is_zero() {
        return Err(TrapezoidError::ZeroParameter);
    }
    let dinv = (ax.clone() - ae.clone())
        .inv()
        .map_err(|_| TrapezoidError::ParallelLine)?;
    let cx = (t.clone() - ae) * dinv.clone();
    let ce = (ax - t.clone()) * dinv;
    Ok(add(&scale(&cx, x), &scale(&ce, e)))
}

/// A line `{base + s·direction}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupLine<F> {
    pub base: Vec<F>,
    pub direction: Vec<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineSubgroupKind {
    /// Parallel to `a`; isomorphic to `(𝕂, +)`.
    Additive,
    /// Meets `a`; isomorphic to `(𝕂^×, ·)`.
    Multiplicative,
}

impl<F: FieldElement> SubgroupLine<F> {
    pub fn new(base: Vec<F>, direction: Vec<F>) -> Result<Self> {
        if is_zero_vec(&direction) {
            return Err(TrapezoidError::ZeroDirection);
        }
        Ok(SubgroupLine { base, direction })
    }

    pub fn through(p: &[F], q: &[F]) -> Result<Self> {
        Self::new(p.to_vec(), sub(q, p))
    }

    pub fn contains(&self, p: &[F]) -> bool {
        dependent(&self.direction, &sub(p, &self.base))
    }

    pub fn point(&self, s: &F) -> Vec<F> {
        add(&self.base, &scale(s, &self.direction))
    }

    pub fn same_line(&self, other: &SubgroupLine<F>) -> bool {
        dependent(&self.direction, &other.direction) && self.contains(&other.base)
    }

    pub fn kind(&self, alpha: &AffineFunctional<F>) -> LineSubgroupKind {
        if alpha.linear(&self.direction).is_zero() {
            LineSubgroupKind::Additive
        } else {
            LineSubgroupKind::Multiplicative
        }
    }
}

pub fn classify_line_subgroup<F: FieldElement>(
    line: &SubgroupLine<F>,
    e: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<LineSubgroupKind> {
    alpha.normalized_origin(e)?;
    alpha.check_dim(&line.base)?;
    if !line.contains(e) {
        return Err(TrapezoidError::NotOnSubgroupLine);
    }
    Ok(line.kind(alpha))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosetLines<F> {
    /// `xH`.
    pub left: SubgroupLine<F>,
    /// `Hx`.
    pub right: SubgroupLine<F>,
    pub coincide: bool,
    pub is_normal: bool,
}

/// The cosets `xH` and `Hx` of a line subgroup `H = e + 𝕂d`.
///
/// `x·(e + sd) = x + s(α(d)(x − e) + d)` and `(e + sd)·x = x + sα(x)d`, so `Hx`
/// is parallel to `H` while `xH` turns towards `x − e` unless `d` is parallel to `a`.
pub fn coset_lines<F: FieldElement>(
    x: &[F],
    h: &SubgroupLine<F>,
    e: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<CosetLines<F>> {
    classify_line_subgroup(h, e, alpha)?;
    alpha.member(x, "x")?;
    let ad = alpha.linear(&h.direction);
    let left_dir = add(&scale(&ad, &sub(x, e)), &h.direction);
    let left = SubgroupLine::new(x.to_vec(), left_dir)?;
    let right = SubgroupLine::new(x.to_vec(), h.direction.clone())?;
    Ok(CosetLines {
        coincide: left.same_line(&right),
        is_normal: ad.is_zero(),
        left,
        right,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemidirectParts<F> {
    /// `g = n·k` with `n ∈ N = {α = 1}` and `k ∈ K`.
    pub n: Vec<F>,
    pub k: Vec<F>,
    /// `g = k·n_right` in the opposite order; the `K` factor is the same.
    pub n_right: Vec<F>,
}

/// Splits `g` along `N = {α = 1}` and the dilation line `K = e + 𝕂k`.
///
/// `k_dir` defaults to `e` itself, the line `𝕂^×e` of a homogeneous `α`.
pub fn semidirect_decompose<F: FieldElement>(
    g: &[F],
    e: &[F],
    alpha: &AffineFunctional<F>,
    k_dir: Option<&[F]>,
) -> Result<SemidirectParts<F>> {
    alpha.normalized_origin(e)?;
    let ag = alpha.member(g, "g")?;
    let k_dir = k_dir.unwrap_or(e);
    alpha.check_dim(k_dir)?;
    let ak = alpha.linear(k_dir);
    let akinv = ak.inv().map_err(|_| TrapezoidError::DirectionInBoundary)?;
    let one = ag.one_like();
    let k = add(e, &scale(&((ag.clone() - one) * akinv), k_dir));
    let n = add(e, &scale(&ag.inv()?, &sub(g, &k)));
    let n_right = add(&sub(g, &k), e);
    Ok(SemidirectParts { n, k, n_right })
}

/// Affine chart `t ↦ point` of the planar boundary line `a`: `x1 = t` unless
/// `a` is vertical, in which case `x2 = t`.
pub fn boundary_chart<F: FieldElement>(alpha: &AffineFunctional<F>, t: &F) -> Vec<F> {
    assert_eq!(alpha.dim(), 2, "boundary chart is planar");
    let [u, v] = [&alpha.coeffs[0], &alpha.coeffs[1]];
    let c = &alpha.constant;
    if !v.is_zero() {
        let x2 = -(u.clone() * t.clone() + c.clone()) * v.inv().expect("nonzero");
        vec![t.clone(), x2]
    } else {
        let x1 = -c.clone() * u.inv().expect("nonzero linear part");
        vec![x1, t.clone()]
    }
}

/// Inverse of [`boundary_chart`].
pub fn boundary_coordinate<F: FieldElement>(alpha: &AffineFunctional<F>, p: &[F]) -> F {
    if alpha.coeffs[1].is_zero() {
        p[1].clone()
    } else {
        p[0].clone()
    }
}

/// `ρ(z): x ↦ (xez)` on the boundary, as the matrix `[[r, s], [0, 1]]` of
/// `t ↦ rt + s` acting on column vectors `(t, 1)`. Since `ρ(z·z') = ρ(z')∘ρ(z)`,
/// the matrix of `z·z'` is `M(z')·M(z)`.
pub fn ga1_matrix<F: FieldElement>(z: &[F], e: &[F], alpha: &AffineFunctional<F>) -> Result<[[F; 2]; 2]> {
    if alpha.dim() != 2 {
        return Err(TrapezoidError::DimensionMismatch {
            expected: 2,
            found: alpha.dim(),
        });
    }
    alpha.normalized_origin(e)?;
    alpha.member(z, "z")?;
    let zero = alpha.constant.zero_like();
    let one = zero.one_like();
    let image = |t: &F| -> Result<F> {
        let p = boundary_chart(alpha, t);
        Ok(boundary_coordinate(alpha, &trapezoid(&p, e, z, alpha)?))
    };
    let s = image(&zero)?;
    let r = image(&one)? - s.clone();
    Ok([[r, s], [zero.clone(), one]])
}

/// `(xez)` for a boundary point `x`; the result is again on the boundary.
pub fn boundary_action<F: FieldElement>(
    x: &[F],
    e: &[F],
    z: &[F],
    alpha: &AffineFunctional<F>,
) -> Result<Vec<F>> {
    alpha.check_dim(x)?;
    if !alpha.eval(x).is_zero() {
        return Err(TrapezoidError::NotOnBoundary("x"));
    }
    alpha.normalized_origin(e)?;
    alpha.member(z, "z")?;
    trapezoid(x, e, z, alpha)
}

/// The group law recentred so that the unit is the zero vector:
/// `x ∗ z = x + λ(z)x + z` on `{λ ≠ −1}`, where `λ` is the linear part of `α`.
/// A zero `λ` gives vector addition.
pub fn change_origin_product<F: FieldElement>(x: &[F], z: &[F], lambda: &[F]) -> Result<Vec<F>> {
    let lz = centred_member(z, lambda, "z")?;
    centred_member(x, lambda, "x")?;
    Ok(add(&add(x, &scale(&lz, x)), z))
}

/// Inverse for [`change_origin_product`]: `−x / (1 + λ(x))`.
pub fn change_origin_inverse<F: FieldElement>(x: &[F], lambda: &[F]) -> Result<Vec<F>> {
    let lx = centred_member(x, lambda, "x")?;
    let k = -(lx.one_like() + lx).inv()?;
    Ok(scale(&k, x))
}

fn centred_member<F: FieldElement>(x: &[F], lambda: &[F], name: &'static str) -> Result<F> {
    if x.len() != lambda.len() {
        return Err(TrapezoidError::DimensionMismatch {
            expected: lambda.len(),
            found: x.len(),
        });
    }
    let l = x
        .iter()
        .zip(lambda)
        .fold(x[0].zero_like(), |acc, (a, b)| acc + a.clone() * b.clone());
    if (l.one_like() + l.clone()).is_zero() {
        Err(TrapezoidError::NotMember(name))
    } else {
        Ok(l)
    }
}

/// 𝕂ⁿ⁺¹ → 𝕂ⁿ, dropping the last coordinate; a torsor morphism when `α` is the
/// first coordinate on both sides.
pub fn projection_homomorphism<F: FieldElement>(x: &[F], n: usize) -> Result<Vec<F>> {
    if x.len() != n + 1 {
        return Err(TrapezoidError::DimensionMismatch {
            expected: n + 1,
            found: x.len(),
        });
    }
    Ok(x[..n].to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Plus,
    Minus,
}

/// The half-space of `G` containing `x`, by the sign of `α(x)`.
pub fn connected_component<F: FieldElement>(x: &[F], alpha: &AffineFunctional<F>) -> Result<Component> {
    let v = alpha.member(x, "x")?;
    Ok(match v.sign()? {
        Sign::Positive => Component::Plus,
        Sign::Negative => Component::Minus,
        Sign::Zero => unreachable!("members have nonzero α"),
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometricError {
    #[error("y lies on a")]
    YOnBoundary,
    #[error("degenerate step {step}: {cause}")]
    Degenerate {
        step: &'static str,
        cause: IncidenceError,
    },
    #[error("the construction ends at infinity")]
    AtInfinity,
    #[error("no auxiliary point off the line and off a")]
    NoAuxiliaryPoint,
}

fn step<T>(name: &'static str, r: std::result::Result<T, IncidenceError>) -> std::result::Result<T, GeometricError> {
    r.map_err(|cause| GeometricError::Degenerate { step: name, cause })
}

/// `(((x∨y)∧a)∨z) ∧ (((z∨y)∧a)∨x)`.
pub fn perspective_geometric<F: FieldElement>(
    x: &Point2<F>,
    y: &Point2<F>,
    z: &Point2<F>,
    a: &Line2<F>,
) -> std::result::Result<Point2<F>, GeometricError> {
    use incidence::{join, join_proj, meet};
    let p = step("(x∨y)∧a", meet(&step("x∨y", join(x, y))?, a))?;
    let l1 = step("((x∨y)∧a)∨z", join_proj(&p, &z.to_proj()))?;
    let q = step("(z∨y)∧a", meet(&step("z∨y", join(z, y))?, a))?;
    let l2 = step("((z∨y)∧a)∨x", join_proj(&q, &x.to_proj()))?;
    let w = step("w", meet(&l1, &l2))?;
    w.to_affine().ok_or(GeometricError::AtInfinity)
}

/// `(((x∨y)∧i)∨z) ∧ (((z∨y)∧a)∨x)` built from joins and meets only.
///
/// Meets with the line at infinity stay homogeneous, so when `z∨y ∥ a` the
/// second line is the parallel through `x` and the result is `x − y + z`.
/// Collinear triples go through `((xyp)pz)` for a fixed auxiliary `p`, and
/// `x = y`, `z = y` return `z`, `x`.
pub fn trapezoid_geometric<F: FieldElement>(
    x: &Point2<F>,
    y: &Point2<F>,
    z: &Point2<F>,
    a: &Line2<F>,
) -> std::result::Result<Point2<F>, GeometricError> {
    if a.contains_affine(y) {
        return Err(GeometricError::YOnBoundary);
    }
    if x == y {
        return Ok(z.clone());
    }
    if z == y {
        return Ok(x.clone());
    }
    if !incidence::collinear(x, y, z) {
        return generic_construction(x, y, z, a);
    }
    let p = auxiliary_point(x, y, a).ok_or(GeometricError::NoAuxiliaryPoint)?;
    let u = generic_construction(x, y, &p, a)?;
    generic_construction(&u, &p, z, a)
}

fn generic_construction<F: FieldElement>(
    x: &Point2<F>,
    y: &Point2<F>,
    z: &Point2<F>,
    a: &Line2<F>,
) -> std::result::Result<Point2<F>, GeometricError> {
    use incidence::{join, join_proj, meet};
    let i = Line2::at_infinity(&x.x1);
    let d = step("(x∨y)∧i", meet(&step("x∨y", join(x, y))?, &i))?;
    let l1 = step("((x∨y)∧i)∨z", join_proj(&d, &z.to_proj()))?;
    let q = step("(z∨y)∧a", meet(&step("z∨y", join(z, y))?, a))?;
    let l2 = step("((z∨y)∧a)∨x", join_proj(&q, &x.to_proj()))?;
    let w: ProjPoint<F> = step("w", meet(&l1, &l2))?;
    w.to_affine().ok_or(GeometricError::AtInfinity)
}

/// First point of a small integer grid that is off the line `x∨y` and off `a`.
fn auxiliary_point<F: FieldElement>(x: &Point2<F>, y: &Point2<F>, a: &Line2<F>) -> Option<Point2<F>> {
    let like = &x.x1;
    let grid = [0i64, 1, -1, 2, -2, 3];
    grid.iter()
        .flat_map(|&i| grid.iter().map(move |&j| (i, j)))
        .map(|(i, j)| Point2::new(like.from_int_like(i), like.from_int_like(j)))
        .find(|p| !a.contains_affine(p) && !incidence::collinear(x, y, p))
}

/// The trapezoid law over an exact field, as a [`TernaryLaw`] on `G = {α ≠ 0}`.
pub struct TrapezoidTorsor {
    field: ScalarField,
    alpha: AffineFunctional<Scalar>,
}

impl TrapezoidTorsor {
    pub fn new(field: ScalarField, alpha: AffineFunctional<Scalar>) -> Self {
        TrapezoidTorsor { field, alpha }
    }

    /// The plane with `α(x) = x₂`.
    pub fn standard(field: ScalarField) -> Self {
        let alpha = AffineFunctional::coordinate(2, 1, &field.zero());
        TrapezoidTorsor { field, alpha }
    }

    pub fn alpha(&self) -> &AffineFunctional<Scalar> {
        &self.alpha
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn sample_point(&self, rng: &mut dyn RngCore) -> Vec<Scalar> {
        (0..self.alpha.dim()).map(|_| self.field.sample(rng)).collect()
    }
}

impl TernaryLaw for TrapezoidTorsor {
    type Elem = Vec<Scalar>;

    fn name(&self) -> String {
        format!("trapezoid over {}^{}", self.field, self.alpha.dim())
    }

    fn eval(&self, x: &Vec<Scalar>, y: &Vec<Scalar>, z: &Vec<Scalar>) -> std::result::Result<Vec<Scalar>, Undefined> {
        trapezoid(x, y, z, &self.alpha).map_err(|e| Undefined(e.diagnostic().to_string()))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<Scalar> {
        loop {
            let p = self.sample_point(rng);
            if !self.alpha.eval(&p).is_zero() {
                return p;
            }
        }
    }

    fn contains(&self, x: &Vec<Scalar>) -> bool {
        x.len() == self.alpha.dim() && !self.alpha.eval(x).is_zero()
    }

    fn elements(&self) -> Option<Vec<Vec<Scalar>>> {
        let els = self.field.elements().ok()?;
        let mut pts: Vec<Vec<Scalar>> = vec![vec![]];
        for _ in 0..self.alpha.dim() {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    els.iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(c.clone());
                        q
                    })
                })
                .collect();
        }
        pts.retain(|p| !self.alpha.eval(p).is_zero());
        Some(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> ScalarField {
        ScalarField::rationals()
    }

    fn p(c: &[(i64, i64)]) -> Vec<Scalar> {
        c.iter().map(|&(n, d)| f().ratio(n, d)).collect()
    }

    fn ip(c: &[i64]) -> Vec<Scalar> {
        c.iter().map(|&n| f().from_int(n)).collect()
    }

    fn alpha2() -> AffineFunctional<Scalar> {
        AffineFunctional::coordinate(2, 1, &f().zero())
    }

    #[test]
    fn parallelogram_examples() {
        assert_eq!(parallelogram(&ip(&[0, 0]), &ip(&[1, 0]), &ip(&[1, 1])), ip(&[0, 1]));
        assert_eq!(parallelogram(&ip(&[0, 0]), &ip(&[1, 0]), &ip(&[3, 0])), ip(&[2, 0]));
    }

    #[test]
    fn perspective_examples() {
        let a = alpha2();
        let w = perspective_parallelogram(&ip(&[0, 1]), &ip(&[1, 1]), &ip(&[3, 2]), &a).unwrap();
        assert_eq!(w, ip(&[1, 2]));
        assert_eq!(
            perspective_parallelogram(&ip(&[0, 2]), &ip(&[1, 1]), &ip(&[3, 2]), &a),
            Err(TrapezoidError::VanishingDenominator)
        );
    }

    #[test]
    fn trapezoid_examples() {
        let a = alpha2();
        let (x, y, z) = (ip(&[0, 1]), ip(&[1, 1]), ip(&[2, 2]));
        assert_eq!(trapezoid(&x, &y, &z, &a).unwrap(), ip(&[0, 2]));
        assert_eq!(trapezoid(&x, &y, &y, &a).unwrap(), x);
        assert_eq!(trapezoid(&y, &y, &z, &a).unwrap(), z);
        assert_eq!(
            trapezoid(&ip(&[0, 1]), &ip(&[1, 2]), &ip(&[3, 2]), &a).unwrap(),
            ip(&[2, 1])
        );
        assert_eq!(
            trapezoid(&x, &ip(&[4, 0]), &z, &a),
            Err(TrapezoidError::YOnBoundary)
        );
    }

    #[test]
    fn group_examples() {
        let a = alpha2();
        let e = ip(&[0, 1]);
        let prod = group_product(&ip(&[1, 2]), &ip(&[2, 3]), &e, &a).unwrap();
        assert_eq!(prod, ip(&[5, 6]));
        assert_eq!(a.eval(&prod), f().from_int(6));
        assert_eq!(inverse(&ip(&[1, 2]), &e, &a).unwrap(), p(&[(-1, 2), (1, 2)]));
        assert_eq!(inverse(&e, &e, &a).unwrap(), e);
    }

    #[test]
    fn power_examples() {
        let a = alpha2();
        let e = ip(&[0, 1]);
        let x = ip(&[1, 2]);
        assert_eq!(power(&x, 2, &e, &a).unwrap(), ip(&[3, 4]));
        assert_eq!(power(&x, -1, &e, &a).unwrap(), p(&[(-1, 2), (1, 2)]));
        assert_eq!(power(&x, 0, &e, &a).unwrap(), e);
        assert_eq!(power(&ip(&[1, 1]), 7, &e, &a).unwrap(), ip(&[7, 1]));
        let t = f().from_int(4);
        assert_eq!(section_phi(&t, &x, &e, &a).unwrap(), ip(&[3, 4]));
        assert_eq!(
            section_phi(&t, &ip(&[3, 1]), &e, &a),
            Err(TrapezoidError::ParallelLine)
        );
    }

    #[test]
    fn subgroup_and_cosets() {
        let a = alpha2();
        let e = ip(&[0, 1]);
        let horiz = SubgroupLine::new(e.clone(), ip(&[1, 0])).unwrap();
        assert_eq!(classify_line_subgroup(&horiz, &e, &a).unwrap(), LineSubgroupKind::Additive);
        let dil = SubgroupLine::through(&e, &ip(&[1, 2])).unwrap();
        assert_eq!(classify_line_subgroup(&dil, &e, &a).unwrap(), LineSubgroupKind::Multiplicative);
        let off = SubgroupLine::new(ip(&[0, 2]), ip(&[1, 0])).unwrap();
        assert_eq!(classify_line_subgroup(&off, &e, &a), Err(TrapezoidError::NotOnSubgroupLine));

        let x = ip(&[3, 2]);
        let c = coset_lines(&x, &horiz, &e, &a).unwrap();
        assert!(c.is_normal && c.coincide);
        let c = coset_lines(&x, &dil, &e, &a).unwrap();
        assert!(!c.is_normal && !c.coincide);
        let c = coset_lines(&e, &dil, &e, &a).unwrap();
        assert!(c.left.same_line(&dil) && c.right.same_line(&dil));
    }

    #[test]
    fn semidirect_example() {
        let a = alpha2();
        let e = ip(&[0, 1]);
        let parts = semidirect_decompose(&ip(&[5, 6]), &e, &a, None).unwrap();
        assert_eq!(parts.k, ip(&[0, 6]));
        assert_eq!(parts.n, p(&[(5, 6), (1, 1)]));
        assert_eq!(group_product(&parts.n, &parts.k, &e, &a).unwrap(), ip(&[5, 6]));
        assert_eq!(group_product(&parts.k, &parts.n_right, &e, &a).unwrap(), ip(&[5, 6]));
        let in_n = semidirect_decompose(&ip(&[4, 1]), &e, &a, None).unwrap();
        assert_eq!(in_n.k, e);
        let in_k = semidirect_decompose(&ip(&[0, 3]), &e, &a, None).unwrap();
        assert_eq!(in_k.n, e);
    }

    #[test]
    fn ga1_and_boundary() {
        let a = alpha2();
        let e = ip(&[0, 1]);
        let m = ga1_matrix(&ip(&[2, 3]), &e, &a).unwrap();
        assert_eq!(m, [[f().from_int(3), f().from_int(2)], [f().zero(), f().one()]]);
        let id = ga1_matrix(&e, &e, &a).unwrap();
        assert_eq!(id, [[f().one(), f().zero()], [f().zero(), f().one()]]);
        assert_eq!(boundary_action(&ip(&[1, 0]), &e, &ip(&[2, 3]), &a).unwrap(), ip(&[5, 0]));
        // t ↦ 3t + 2 fixes t = −1
        assert_eq!(boundary_action(&ip(&[-1, 0]), &e, &ip(&[2, 3]), &a).unwrap(), ip(&[-1, 0]));
        assert_eq!(
            boundary_action(&ip(&[1, 1]), &e, &ip(&[2, 3]), &a),
            Err(TrapezoidError::NotOnBoundary("x"))
        );
    }

    #[test]
    fn change_of_origin() {
        let lam = ip(&[0, 1]);
        let (x, z) = (ip(&[2, 3]), ip(&[-1, 5]));
        assert_eq!(change_origin_product(&ip(&[0, 0]), &z, &lam).unwrap(), z);
        assert_eq!(change_origin_product(&x, &ip(&[0, 0]), &lam).unwrap(), x);
        assert_eq!(change_origin_product(&x, &z, &ip(&[0, 0])).unwrap(), ip(&[1, 8]));
        let inv = change_origin_inverse(&x, &lam).unwrap();
        assert_eq!(change_origin_product(&x, &inv, &lam).unwrap(), ip(&[0, 0]));
        assert!(change_origin_product(&ip(&[0, -1]), &z, &lam).is_err());
    }

    #[test]
    fn projection_and_components() {
        let x = ip(&[1, 2, 3]);
        assert_eq!(projection_homomorphism(&x, 2).unwrap(), ip(&[1, 2]));
        assert!(projection_homomorphism(&ip(&[1, 2]), 2).is_err());
        let a = alpha2();
        assert_eq!(connected_component(&ip(&[3, 5]), &a).unwrap(), Component::Plus);
        assert_eq!(connected_component(&ip(&[1, -2]), &a).unwrap(), Component::Minus);
        let gf = ScalarField::gf(5).unwrap();
        let ag = AffineFunctional::coordinate(2, 1, &gf.zero());
        assert_eq!(
            connected_component(&[gf.one(), gf.one()], &ag),
            Err(TrapezoidError::Field(FieldError::UnorderedField))
        );
    }

    #[test]
    fn geometric_construction_examples() {
        let a = Line2::new(f().zero(), f().one(), f().zero()).unwrap();
        let pt = |x: i64, y: i64| Point2::new(f().from_int(x), f().from_int(y));
        assert_eq!(trapezoid_geometric(&pt(0, 1), &pt(1, 1), &pt(2, 2), &a).unwrap(), pt(0, 2));
        // y∨z parallel to a: true parallelogram
        assert_eq!(trapezoid_geometric(&pt(0, 1), &pt(1, 2), &pt(3, 2), &a).unwrap(), pt(2, 1));
        // collinear on x₂ = 1
        assert_eq!(trapezoid_geometric(&pt(0, 1), &pt(1, 1), &pt(2, 1), &a).unwrap(), pt(1, 1));
        // x on a
        let w = trapezoid_geometric(&pt(1, 0), &pt(0, 1), &pt(2, 2), &a).unwrap();
        assert!(a.contains_affine(&w));
        assert_eq!(w, pt(4, 0));
        assert_eq!(
            trapezoid_geometric(&pt(0, 1), &pt(1, 0), &pt(2, 2), &a),
            Err(GeometricError::YOnBoundary)
        );
        assert_eq!(
            perspective_geometric(&pt(0, 1), &pt(1, 1), &pt(3, 2), &a).unwrap(),
            pt(1, 2)
        );
    }

    #[test]
    fn collinear_product_examples() {
        let a = alpha2();
        let (x, y, z) = (ip(&[0, 1]), ip(&[1, 1]), ip(&[2, 1]));
        assert_eq!(collinear_product(&x, &y, &z, &a, &ip(&[0, 2])).unwrap(), ip(&[1, 1]));
        assert_eq!(collinear_product(&x, &y, &z, &a, &ip(&[5, 3])).unwrap(), ip(&[1, 1]));
        assert_eq!(
            collinear_product(&x, &y, &z, &a, &ip(&[7, 1])),
            Err(TrapezoidError::AuxiliaryCollinear)
        );
    }
}
