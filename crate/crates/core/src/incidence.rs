//! Planar incidence in homogeneous coordinates.
//!
//! A projective point `(h1 : h2 : h0)` is affine when `h0 != 0`; a line `[u, v, c]`
//! is the locus `u·h1 + v·h2 + c·h0 = 0`. The line at infinity is `[0, 0, 1]`.
//! Both are stored normalized (first nonzero coordinate equal to one), so
//! structural equality is geometric equality.

use thiserror::Error;

use crate::scalars::{FieldElement, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("join of two equal points")]
    DegenerateJoin,
    #[error("meet of two equal lines")]
    DegenerateMeet,
    #[error("line has no affine points")]
    LineAtInfinity,
    #[error("all homogeneous coordinates vanish")]
    ZeroVector,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point2<F> {
    pub x1: F,
    pub x2: F,
}

impl<F: FieldElement> Point2<F> {
    pub fn new(x1: F, x2: F) -> Self {
        Point2 { x1, x2 }
    }

    pub fn to_proj(&self) -> ProjPoint<F> {
        ProjPoint::affine(self)
    }

    pub fn to_vec(&self) -> Vec<F> {
        vec![self.x1.clone(), self.x2.clone()]
    }

    /// Panics unless `v` has exactly two entries.
    pub fn from_slice(v: &[F]) -> Self {
        assert_eq!(v.len(), 2, "planar point needs two coordinates");
        Point2::new(v[0].clone(), v[1].clone())
    }
}

fn cross<F: FieldElement>(a: [&F; 3], b: [&F; 3]) -> [F; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn normalize<F: FieldElement>(v: [F; 3]) -> Result<[F; 3], IncidenceError> {
    let lead = v
        .iter()
        .find(|c| !c.is_zero())
        .ok_or(IncidenceError::ZeroVector)?
        .inv()?;
    Ok(v.map(|c| if c.is_zero() { c.zero_like() } else { c * lead.clone() }))
}

/// Homogeneous point `(h1 : h2 : h0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint<F> {
    h: [F; 3],
}

impl<F: FieldElement> ProjPoint<F> {
    pub fn new(h1: F, h2: F, h0: F) -> Result<Self, IncidenceError> {
        Ok(ProjPoint {
            h: normalize([h1, h2, h0])?,
        })
    }

    pub fn affine(p: &Point2<F>) -> Self {
        let one = p.x1.one_like();
        ProjPoint::new(p.x1.clone(), p.x2.clone(), one).expect("h0 = 1")
    }

    /// Point at infinity in the direction `(d1, d2)`.
    pub fn direction(d1: F, d2: F) -> Result<Self, IncidenceError> {
        let zero = d1.zero_like();
        ProjPoint::new(d1, d2, zero)
    }

    pub fn coords(&self) -> &[F; 3] {
        &self.h
    }

    pub fn is_at_infinity(&self) -> bool {
        self.h[2].is_zero()
    }

    pub fn to_affine(&self) -> Option<Point2<F>> {
        let k = self.h[2].inv().ok()?;
        Some(Point2::new(
            self.h[0].clone() * k.clone(),
            self.h[1].clone() * k,
        ))
    }
}

/// Homogeneous line `[u, v, c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Line2<F> {
    l: [F; 3],
}

impl<F: FieldElement> Line2<F> {
    pub fn new(u: F, v: F, c: F) -> Result<Self, IncidenceError> {
        Ok(Line2 {
            l: normalize([u, v, c])?,
        })
    }

    pub fn at_infinity(like: &F) -> Self {
        Line2 {
            l: [like.zero_like(), like.zero_like(), like.one_like()],
        }
    }

    pub fn coeffs(&self) -> &[F; 3] {
        &self.l
    }

    pub fn u(&self) -> &F {
        &self.l[0]
    }

    pub fn v(&self) -> &F {
        &self.l[1]
    }

    pub fn c(&self) -> &F {
        &self.l[2]
    }

    pub fn is_at_infinity(&self) -> bool {
        self.l[0].is_zero() && self.l[1].is_zero()
    }

    /// `u·x1 + v·x2 + c`, the affine functional whose zero set is this line.
    pub fn eval(&self, p: &Point2<F>) -> F {
        self.l[0].clone() * p.x1.clone() + self.l[1].clone() * p.x2.clone() + self.l[2].clone()
    }

    pub fn contains(&self, p: &ProjPoint<F>) -> bool {
        let h = p.coords();
        (self.l[0].clone() * h[0].clone()
            + self.l[1].clone() * h[1].clone()
            + self.l[2].clone() * h[2].clone())
        .is_zero()
    }

    pub fn contains_affine(&self, p: &Point2<F>) -> bool {
        self.eval(p).is_zero()
    }

    /// The point at infinity of this line.
    pub fn point_at_infinity(&self) -> Result<ProjPoint<F>, IncidenceError> {
        meet(self, &Line2::at_infinity(&self.l[0]))
    }
}

/// Line through two projective points.
pub fn join_proj<F: FieldElement>(
    p: &ProjPoint<F>,
    q: &ProjPoint<F>,
) -> Result<Line2<F>, IncidenceError> {
    let [a, b, c] = &p.h;
    let [d, e, f] = &q.h;
    let l = cross([a, b, c], [d, e, f]);
    Line2::new(l[0].clone(), l[1].clone(), l[2].clone()).map_err(|e| match e {
        IncidenceError::ZeroVector => IncidenceError::DegenerateJoin,
        other => other,
    })
}

pub fn join<F: FieldElement>(p: &Point2<F>, q: &Point2<F>) -> Result<Line2<F>, IncidenceError> {
    join_proj(&p.to_proj(), &q.to_proj())
}

/// Common point of two lines; parallel lines meet at infinity.
pub fn meet<F: FieldElement>(l: &Line2<F>, m: &Line2<F>) -> Result<ProjPoint<F>, IncidenceError> {
    let [a, b, c] = &l.l;
    let [d, e, f] = &m.l;
    let h = cross([a, b, c], [d, e, f]);
    let [h1, h2, h0] = h;
    ProjPoint::new(h1, h2, h0).map_err(|e| match e {
        IncidenceError::ZeroVector => IncidenceError::DegenerateMeet,
        other => other,
    })
}

/// The line through `p` parallel to `l`.
pub fn parallel_through<F: FieldElement>(
    l: &Line2<F>,
    p: &Point2<F>,
) -> Result<Line2<F>, IncidenceError> {
    if l.is_at_infinity() {
        return Err(IncidenceError::LineAtInfinity);
    }
    join_proj(&p.to_proj(), &l.point_at_infinity()?)
}

pub fn is_parallel<F: FieldElement>(l: &Line2<F>, m: &Line2<F>) -> bool {
    (l.l[0].clone() * m.l[1].clone() - l.l[1].clone() * m.l[0].clone()).is_zero()
}

pub fn collinear<F: FieldElement>(p: &Point2<F>, q: &Point2<F>, r: &Point2<F>) -> bool {
    let d1 = (q.x1.clone() - p.x1.clone(), q.x2.clone() - p.x2.clone());
    let d2 = (r.x1.clone() - p.x1.clone(), r.x2.clone() - p.x2.clone());
    (d1.0 * d2.1 - d1.1 * d2.0).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Scalar, ScalarField};

    fn q(n: i64) -> Scalar {
        ScalarField::rationals().from_int(n)
    }

    fn pt(a: i64, b: i64) -> Point2<Scalar> {
        Point2::new(q(a), q(b))
    }

    fn line(u: i64, v: i64, c: i64) -> Line2<Scalar> {
        Line2::new(q(u), q(v), q(c)).unwrap()
    }

    #[test]
    fn joins() {
        assert_eq!(join(&pt(0, 0), &pt(1, 0)).unwrap(), line(0, 1, 0));
        assert_eq!(join(&pt(0, 0), &pt(0, 1)).unwrap(), line(1, 0, 0));
        let l = join(&pt(1, 1), &pt(2, 3)).unwrap();
        assert_eq!(l, line(2, -1, -1));
        assert!(l.contains_affine(&pt(1, 1)) && l.contains_affine(&pt(2, 3)));
        assert_eq!(join(&pt(1, 1), &pt(1, 1)), Err(IncidenceError::DegenerateJoin));
    }

    #[test]
    fn meets() {
        assert_eq!(
            meet(&line(0, 1, 0), &line(1, 0, 0)).unwrap().to_affine(),
            Some(pt(0, 0))
        );
        let inf = meet(&line(0, 1, 0), &line(0, 1, -1)).unwrap();
        assert!(inf.is_at_infinity());
        assert_eq!(inf, ProjPoint::new(q(1), q(0), q(0)).unwrap());
        assert_eq!(
            meet(&line(1, 1, -2), &line(1, -1, 0)).unwrap().to_affine(),
            Some(pt(1, 1))
        );
        assert_eq!(
            meet(&line(1, 1, -2), &line(2, 2, -4)),
            Err(IncidenceError::DegenerateMeet)
        );
    }

    #[test]
    fn parallels() {
        assert_eq!(parallel_through(&line(0, 1, 0), &pt(2, 5)).unwrap(), line(0, 1, -5));
        assert_eq!(parallel_through(&line(1, 1, 0), &pt(2, 0)).unwrap(), line(1, 1, -2));
        let l = line(1, 2, 3);
        assert_eq!(parallel_through(&l, &pt(-3, 0)).unwrap(), l);
        assert!(is_parallel(&line(0, 1, 0), &line(0, 1, 3)));
        assert!(!is_parallel(&line(0, 1, 0), &line(1, 0, 0)));
        assert!(is_parallel(&line(1, 2, 0), &line(2, 4, -7)));
        assert_eq!(
            parallel_through(&Line2::at_infinity(&q(0)), &pt(0, 0)),
            Err(IncidenceError::LineAtInfinity)
        );
    }

    #[test]
    fn float_backend_agrees() {
        let l = join(&Point2::new(1.0, 1.0), &Point2::new(2.0, 3.0)).unwrap();
        let m = join(&Point2::new(0.0, 2.0), &Point2::new(2.0, 0.0)).unwrap();
        let p = meet(&l, &m).unwrap().to_affine().unwrap();
        assert!((p.x1 - 1.0).abs() < 1e-12 && (p.x2 - 1.0).abs() < 1e-12);
    }
}
