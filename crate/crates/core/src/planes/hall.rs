use std::collections::BTreeSet;

use super::{projective_completion, FinitePlane, PlaneError, PlaneKind};
use crate::scalars::{FieldElement, Scalar, ScalarField};

/// The affine Hall plane of order 9 on `GF(9)²`, with point `(x, y)` at
/// index `ix·9 + iy`.
///
/// The regular spread of `GF(9)²` viewed as `GF(3)⁴` consists of the ten
/// `GF(9)`-lines through the origin. The regulus `{y = mx : m ∈ GF(3)} ∪ {x = 0}`
/// is replaced by its opposite regulus `{(c₁t, c₂t) : c₁, c₂ ∈ GF(3)}` for
/// `t ∈ GF(9)^× / GF(3)^×`. Lines are the translates of the ten spread members.
pub fn build_hall_affine_plane_9() -> Result<FinitePlane, PlaneError> {
    let field = ScalarField::gf(9)?;
    let els = field.elements()?;
    let pos = |s: &Scalar| els.iter().position(|e| e == s).expect("field element");
    let idx = |x: &Scalar, y: &Scalar| (pos(x) * 9 + pos(y)) as u32;
    // indices 0, 1, 2 are the constant polynomials
    let in_prime_field = |s: &Scalar| pos(s) < 3;
    debug_assert!((0..3).all(|i| in_prime_field(&field.from_int(i))));

    let mut spread: Vec<Vec<(Scalar, Scalar)>> = Vec::new();
    for m in els.iter().filter(|m| !in_prime_field(m)) {
        spread.push(els.iter().map(|x| (x.clone(), m * x)).collect());
    }
    let gf3: Vec<Scalar> = (0..3).map(|i| field.from_int(i)).collect();
    let mut seen = BTreeSet::new();
    for t in els.iter().filter(|t| !t.is_zero()) {
        let member: BTreeSet<u32> = gf3
            .iter()
            .flat_map(|c1| gf3.iter().map(move |c2| (c1 * t, c2 * t)))
            .map(|(x, y)| idx(&x, &y))
            .collect();
        if seen.insert(member.clone()) {
            spread.push(
                member
                    .iter()
                    .map(|&p| (els[p as usize / 9].clone(), els[p as usize % 9].clone()))
                    .collect(),
            );
        }
    }
    if spread.len() != 10 {
        return Err(PlaneError::Invalid(format!("spread has {} members", spread.len())));
    }

    let mut lines: Vec<Vec<u32>> = Vec::with_capacity(90);
    let mut found = BTreeSet::new();
    for member in &spread {
        for vx in &els {
            for vy in &els {
                let mut line: Vec<u32> = member
                    .iter()
                    .map(|(x, y)| idx(&(x + vx), &(y + vy)))
                    .collect();
                line.sort_unstable();
                if found.insert(line.clone()) {
                    lines.push(line);
                }
            }
        }
    }
    let mut plane = FinitePlane::new(PlaneKind::Affine, 9, 81, lines)?;
    for x in &els {
        for y in &els {
            plane.coords[idx(x, y) as usize] = Some([x.clone(), y.clone()]);
        }
    }
    Ok(plane)
}

/// Projective completion of [`build_hall_affine_plane_9`]: 91 points and lines.
pub fn build_hall_plane_9() -> Result<FinitePlane, PlaneError> {
    projective_completion(&build_hall_affine_plane_9()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planes::{
        build_affine_plane, check_affine_axioms, check_affine_counts, check_projective_axioms,
    };

    #[test]
    fn hall_affine_plane_is_an_affine_plane() {
        let h = build_hall_affine_plane_9().unwrap();
        assert_eq!((h.num_points(), h.num_lines()), (81, 90));
        assert!(check_affine_axioms(&h).passed());
        assert!(check_affine_counts(&h).passed());
    }

    #[test]
    fn hall_plane_invariants() {
        let h = build_hall_plane_9().unwrap();
        assert_eq!((h.num_points(), h.num_lines()), (91, 91));
        assert!(h.lines().iter().all(|l| l.len() == 10));
        let r = check_projective_axioms(&h);
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn hall_affine_differs_from_ag29_parallel_structure() {
        // same counts as AG(2,9), but the spread differs from the regular one
        let h = build_hall_affine_plane_9().unwrap();
        let ag = build_affine_plane(&ScalarField::gf(9).unwrap()).unwrap();
        let origin_lines = |p: &FinitePlane| -> BTreeSet<Vec<u32>> {
            p.lines_through(0).iter().map(|&l| p.line(l).to_vec()).collect()
        };
        assert_ne!(origin_lines(&h), origin_lines(&ag));
    }
}
