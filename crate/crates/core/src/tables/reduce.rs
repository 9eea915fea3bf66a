//! Moving `f` to its reduced form: normal form cubic part, designated quadratic
//! monomials removed, constant term zero, and for the non-reduced cubics the roots
//! of `f2` on the singular line moved to standard position.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::cubic::{CubicType, Normalization};
use crate::linalg::{self, Matrix};
use crate::poly::{Mono, Poly};
use crate::rat::Rat;

use super::TableError;

/// Exponents of the monomials carrying `a0..a8`.
pub const COEFF_MONOS: [[u16; 3]; 9] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
];

/// Coefficients `a0..a8` of the linear and quadratic parts.
pub fn coeffs_of(g: &Poly<Rat>) -> [Rat; 9] {
    COEFF_MONOS.map(|e| g.coeff(&Mono::from_exps(&e)))
}

/// Indices of the quadratic coefficients removed by translation.
pub fn designated(ct: CubicType) -> &'static [usize] {
    match ct {
        CubicType::General => &[],
        CubicType::Nodal | CubicType::ConicTangent => &[3, 4, 6],
        CubicType::Cuspidal => &[3, 6, 7],
        CubicType::ThreeLines => &[3, 6],
        CubicType::ConicChord | CubicType::Triangle => &[4, 5, 7],
        CubicType::DoubleLine => &[4, 6],
        CubicType::TripleLine => &[6],
    }
}

/// Coordinate permutations preserving the normal form, identity first.
pub fn symmetries(ct: CubicType) -> &'static [[usize; 3]] {
    match ct {
        CubicType::Nodal | CubicType::ThreeLines => &[[0, 1, 2], [1, 0, 2]],
        CubicType::ConicChord => &[[0, 1, 2], [0, 2, 1]],
        CubicType::Triangle => &[[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]],
        _ => &[[0, 1, 2]],
    }
}

/// `f` in reduced coordinates together with the map producing it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedForm {
    pub f_reduced: Poly<Rat>,
    pub coeffs: [Rat; 9],
    pub applied: AffineMap,
    pub cubic_type: CubicType,
    /// Coordinate permutation applied for a symmetric table lookup.
    pub permutation: [usize; 3],
}

impl ReducedForm {
    fn new(f: &Poly<Rat>, applied: AffineMap, ct: CubicType, permutation: [usize; 3]) -> Self {
        let g = applied.apply(f);
        ReducedForm {
            coeffs: coeffs_of(&g),
            f_reduced: g,
            applied,
            cubic_type: ct,
            permutation,
        }
    }

    /// Cubic part of the reduced form.
    pub fn cubic_part(&self) -> Poly<Rat> {
        self.f_reduced.homogeneous_part(3)
    }

    /// The same form after the substitution `y_i -> y_perm[i]`.
    pub fn permuted(&self, f: &Poly<Rat>, perm: [usize; 3]) -> ReducedForm {
        let mut p: Matrix<Rat> = vec![vec![Rat::zero(); 3]; 3];
        for (i, &j) in perm.iter().enumerate() {
            p[i][j] = Rat::one();
        }
        let applied = self.applied.then(&AffineMap::linear_substitution(p));
        ReducedForm::new(f, applied, self.cubic_type, perm)
    }
}

/// Translation removing the designated monomials, then the constant term.
fn translation(g: &Poly<Rat>, ct: CubicType) -> Result<AffineMap, TableError> {
    let f3 = g.homogeneous_part(3);
    let grads = f3.gradient();
    let idx = designated(ct);
    let rows: Matrix<Rat> = idx
        .iter()
        .map(|&k| {
            let m = Mono::from_exps(&COEFF_MONOS[k]);
            grads.iter().map(|d| d.coeff(&m)).collect()
        })
        .collect();
    let rhs: Vec<Rat> = idx
        .iter()
        .map(|&k| -g.coeff(&Mono::from_exps(&COEFF_MONOS[k])))
        .collect();
    let h = if idx.is_empty() {
        vec![Rat::zero(); 3]
    } else {
        linalg::solve(&rows, &rhs)?
            .ok_or_else(|| TableError::Inconsistent(format!("no translation removes the quadratic terms of {ct}")))?
    };
    let shift = AffineMap::translation_by(h);
    let moved = shift.apply(g);
    Ok(shift.then(&AffineMap::target(Rat::one(), -moved.constant_term())))
}

fn sub_x2(c: &Rat, k: &Rat) -> AffineMap {
    // x2 -> x2 + c x0 + k x1
    AffineMap::linear_substitution(vec![
        vec![Rat::one(), Rat::zero(), Rat::zero()],
        vec![Rat::zero(), Rat::one(), Rat::zero()],
        vec![c.clone(), k.clone(), Rat::one()],
    ])
}

/// Roots of `f2` restricted to the line `x1 = 0`, as `(x0, x2)` pairs.
/// `None` for irrational roots; a double root is returned once.
fn line_roots(a: &[Rat; 9]) -> Option<Vec<[Rat; 2]>> {
    let (a3, a5, a8) = (&a[3], &a[5], &a[8]);
    let two = Rat::from_int(2);
    if a8.is_zero() {
        if a5.is_zero() {
            return Some(vec![[Rat::zero(), Rat::one()]]);
        }
        return Some(vec![[Rat::zero(), Rat::one()], [a5.clone(), -a3]]);
    }
    let gamma = a5 * a5 - Rat::from_int(4) * a3 * a8;
    if gamma.is_zero() {
        return Some(vec![[Rat::one(), -a5 / (&two * a8)]]);
    }
    let s = gamma.sqrt()?;
    let r1 = (-a5 - &s) / (&two * a8);
    let r2 = (-a5 + s) / (&two * a8);
    Some(vec![[Rat::one(), r1], [Rat::one(), r2]])
}

/// Adjustments for the double line `x0 x1^2`.
fn double_line(f: &Poly<Rat>, map: AffineMap) -> Result<AffineMap, TableError> {
    let a = coeffs_of(&map.apply(f));
    let (a3, a5, a8) = (&a[3], &a[5], &a[8]);
    if a3.is_zero() && a5.is_zero() && a8.is_zero() {
        return Err(TableError::NotB("f2 vanishes on the singular line of the cubic part".into()));
    }
    let two = Rat::from_int(2);
    let gamma = a5 * a5 - Rat::from_int(4) * a3 * a8;
    let step = if !gamma.is_zero() {
        if a8.is_zero() {
            Some(sub_x2(&(-a3 / a5), &Rat::zero()))
        } else {
            // Irrational roots stay where they are: the two points are conjugate.
            gamma
                .sqrt()
                .map(|s| sub_x2(&((-a5 + s) / (&two * a8)), &Rat::zero()))
        }
    } else if !a8.is_zero() {
        Some(sub_x2(&(-a5 / (&two * a8)), &(-&a[7] / (&two * a8))))
    } else {
        None
    };
    let Some(step) = step else {
        return Ok(map);
    };
    let map = map.then(&step);
    let g = map.apply(f);
    Ok(map.then(&translation(&g, CubicType::DoubleLine)?))
}

/// Adjustments for the triple line `x1^3`.
fn triple_line(f: &Poly<Rat>, map: AffineMap) -> Result<AffineMap, TableError> {
    let a = coeffs_of(&map.apply(f));
    if a[3].is_zero() && a[5].is_zero() && a[8].is_zero() {
        return Err(TableError::NotB("f2 vanishes on the line of the cubic part".into()));
    }
    // Conjugate irrational roots stay where they are.
    let Some(roots) = line_roots(&a) else {
        return Ok(map);
    };
    let r1 = &roots[0];
    let r2 = match roots.get(1) {
        Some(r) => r.clone(),
        None if r1[0].is_zero() => [Rat::one(), Rat::zero()],
        None => [Rat::zero(), Rat::one()],
    };
    let b = vec![
        vec![r1[0].clone(), Rat::zero(), r2[0].clone()],
        vec![Rat::zero(), Rat::one(), Rat::zero()],
        vec![r1[1].clone(), Rat::zero(), r2[1].clone()],
    ];
    let map = map.then(&AffineMap::linear_substitution(b));
    let g = map.apply(f);
    Ok(map.then(&translation(&g, CubicType::TripleLine)?))
}

/// Reduced form of `f` starting from a normalization of its cubic part.
pub fn reduce_coefficients(f: &Poly<Rat>, nm: &Normalization) -> Result<ReducedForm, TableError> {
    let ct = nm.cubic_type;
    let f = f.with_nvars(3);
    let g = nm.map.apply(&f);
    if g.homogeneous_part(3) != ct.normal_form() && ct != CubicType::General {
        return Err(TableError::Inconsistent(format!("normalization does not reach the {ct} normal form")));
    }
    let mut map = nm.map.then(&translation(&g, ct)?);
    match ct {
        CubicType::DoubleLine => map = double_line(&f, map)?,
        CubicType::TripleLine => map = triple_line(&f, map)?,
        _ => {}
    }
    Ok(ReducedForm::new(&f, map, ct, [0, 1, 2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::normalizing_map;
    use crate::parse::parse_poly;
    use crate::poly::XNAMES;

    fn reduce(s: &str) -> Result<ReducedForm, TableError> {
        let f = parse_poly(s, &XNAMES[..3]).unwrap();
        let nm = normalizing_map(&f.homogeneous_part(3)).unwrap();
        reduce_coefficients(&f, &nm)
    }

    #[test]
    fn nodal_translation() {
        let rf = reduce("x0^2 + x0^3 + x1^3 + x0*x1*x2").unwrap();
        for &k in designated(CubicType::Nodal) {
            assert!(rf.coeffs[k].is_zero());
        }
        // x0 -> x0 - 1/3 removes x0^2
        assert_eq!(rf.applied.shift[0], Rat::new(1, 3));
        assert_eq!(rf.f_reduced, rf.applied.apply(&parse_poly("x0^2 + x0^3 + x1^3 + x0*x1*x2", &XNAMES[..3]).unwrap()));
    }

    #[test]
    fn reduced_input_is_fixed() {
        let rf = reduce("x0^3 + x1^3 + x0*x1*x2 + x0*x2 + x2").unwrap();
        assert_eq!(rf.applied, AffineMap::identity());
    }

    #[test]
    fn double_line_without_roots_is_not_b() {
        assert!(matches!(reduce("x0 + x1^2 + x0*x1^2"), Err(TableError::NotB(_))));
    }

    #[test]
    fn double_line_roots_to_standard_position() {
        // f2 on x1 = 0 is (x2 - x0)(x2 - 2 x0)
        let rf = reduce("x0*x1^2 + x2^2 - 3*x0*x2 + 2*x0^2 + x1").unwrap();
        assert!(rf.coeffs[3].is_zero());
        assert!(!rf.coeffs[8].is_zero());
        let rf = reduce("x0*x1^2 + x2^2 - 2*x0*x2 + x0^2 + x1*x2 + x2").unwrap();
        assert!(rf.coeffs[3].is_zero() && rf.coeffs[5].is_zero() && rf.coeffs[7].is_zero());
    }

    #[test]
    fn triple_line_roots_to_standard_position() {
        let rf = reduce("x1^3 + x0^2 - x2^2 + x1").unwrap();
        assert!(rf.coeffs[3].is_zero() && rf.coeffs[8].is_zero() && !rf.coeffs[5].is_zero());
        let rf = reduce("x1^3 + x0^2 + 2*x0*x2 + x2^2 + x0*x1").unwrap();
        assert!(rf.coeffs[3].is_zero() && rf.coeffs[5].is_zero() && !rf.coeffs[8].is_zero());
        let rf = reduce("x1^3 + x0^2 - 2*x2^2").unwrap();
        assert_eq!((rf.coeffs[3].clone(), rf.coeffs[8].clone()), (Rat::one(), Rat::from_int(-2)));
    }

    #[test]
    fn designated_monomials_vanish_for_all_types() {
        let extra = " + 2*x0^2 - x0*x1 + 3*x0*x2 + x1^2 - 5*x1*x2 + x2^2 + x0 - x1 + x2 + 4";
        for ct in CubicType::ALL.into_iter().filter(|c| *c != CubicType::General) {
            let rf = reduce(&format!("{}{}", ct.normal_form_text(), extra)).unwrap();
            for &k in designated(ct) {
                assert!(rf.coeffs[k].is_zero(), "{ct} a{k}");
            }
            assert!(rf.f_reduced.constant_term().is_zero());
            assert_eq!(rf.cubic_part(), ct.normal_form());
        }
    }
}
