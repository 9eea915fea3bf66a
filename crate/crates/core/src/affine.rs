//! Affine coordinate changes of `C^3` combined with affine changes of the target.

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::rat::Rat;

/// The transformation `f -> scale * f(T^-1(x)) + offset` with `T(x) = linear * x + shift`.
///
/// A fiber `f = t` of the source becomes the fiber `g = scale * t + offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: Matrix<Rat>,
    pub shift: Vec<Rat>,
    pub scale: Rat,
    pub offset: Rat,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            linear: linalg::identity(3),
            shift: vec![Rat::zero(); 3],
            scale: Rat::one(),
            offset: Rat::zero(),
        }
    }

    /// The map with `g(y) = f(B y + c)`.
    pub fn substitution(b: Matrix<Rat>, c: Vec<Rat>) -> Self {
        let a = linalg::inverse(&b).unwrap().expect("invertible substitution");
        let shift = linalg::mat_vec(&a, &c).into_iter().map(|x| -x).collect();
        AffineMap {
            linear: a,
            shift,
            scale: Rat::one(),
            offset: Rat::zero(),
        }
    }

    /// `g(y) = f(y + h)`.
    pub fn translation_by(h: Vec<Rat>) -> Self {
        AffineMap::substitution(linalg::identity(3), h)
    }

    /// The linear map with `g(y) = f(B y)`.
    pub fn linear_substitution(b: Matrix<Rat>) -> Self {
        AffineMap::substitution(b, vec![Rat::zero(); 3])
    }

    /// `g = scale * f + offset` with no change of coordinates.
    pub fn target(scale: Rat, offset: Rat) -> Self {
        assert!(!scale.is_zero());
        AffineMap {
            scale,
            offset,
            ..AffineMap::identity()
        }
    }

    /// Applies `self` first, then `next`.
    pub fn then(&self, next: &AffineMap) -> AffineMap {
        let linear = linalg::mat_mul(&next.linear, &self.linear);
        let shift = linalg::mat_vec(&next.linear, &self.shift)
            .into_iter()
            .zip(next.shift.iter())
            .map(|(a, b)| a + b)
            .collect();
        AffineMap {
            linear,
            shift,
            scale: &next.scale * &self.scale,
            offset: &next.scale * &self.offset + &next.offset,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let a = linalg::inverse(&self.linear).unwrap().expect("invertible map");
        let shift = linalg::mat_vec(&a, &self.shift).into_iter().map(|x| -x).collect();
        let scale = self.scale.recip().unwrap();
        let offset = -(&self.offset * &scale);
        AffineMap {
            linear: a,
            shift,
            scale,
            offset,
        }
    }

    /// Coordinates substituted into `f`: the components of `T^-1(x)`.
    fn preimage_coords(&self) -> Vec<Poly<Rat>> {
        let a = linalg::inverse(&self.linear).unwrap().expect("invertible map");
        let b = linalg::mat_vec(&a, &self.shift);
        (0..3)
            .map(|i| {
                let mut p = Poly::constant(3, -&b[i]);
                for j in 0..3 {
                    p = p.plus(&Poly::var(3, j).scale(&a[i][j]));
                }
                p
            })
            .collect()
    }

    /// `scale * f(T^-1(x)) + offset`.
    pub fn apply(&self, f: &Poly<Rat>) -> Poly<Rat> {
        let g = f.with_nvars(3).substitute(&self.preimage_coords());
        g.scale(&self.scale).plus(&Poly::constant(3, self.offset.clone()))
    }

    /// Image of a fiber value.
    pub fn map_value(&self, t: &Rat) -> Rat {
        &self.scale * t + &self.offset
    }

    /// Image of a direction (a point at infinity) under the linear part.
    pub fn map_direction<F: Field>(&self, p: &[F]) -> Vec<F> {
        let a: Matrix<F> = self
            .linear
            .iter()
            .map(|r| r.iter().map(F::from_rat).collect())
            .collect();
        linalg::mat_vec(&a, p)
    }

    /// Preimage of a direction under the linear part.
    pub fn unmap_direction<F: Field>(&self, p: &[F]) -> Vec<F> {
        let inv = linalg::inverse(&self.linear).unwrap().expect("invertible map");
        let a: Matrix<F> = inv
            .iter()
            .map(|r| r.iter().map(F::from_rat).collect())
            .collect();
        linalg::mat_vec(&a, p)
    }
}

/// Convenience alias used by the pipeline.
pub fn substitute_affine(f: &Poly<Rat>, m: &AffineMap) -> Poly<Rat> {
    m.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::XNAMES;

    #[test]
    fn translation_sign_convention() {
        // x0 under x0 -> x0 + 1 (T(x) = x + e0) becomes x0 - 1
        let m = AffineMap {
            shift: vec![Rat::one(), Rat::zero(), Rat::zero()],
            ..AffineMap::identity()
        };
        let g = m.apply(&Poly::var(3, 0));
        assert_eq!(g.render(&XNAMES), "x0 - 1");
    }

    #[test]
    fn composition_matches_sequential_application() {
        let f = Poly::var(3, 0)
            .pow(3)
            .plus(&Poly::var(3, 1).times(&Poly::var(3, 2)));
        let m1 = AffineMap::translation_by(vec![Rat::one(), Rat::from_int(2), Rat::zero()]);
        let b = vec![
            vec![Rat::one(), Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::from_int(3), Rat::one()],
        ];
        let m2 = AffineMap::linear_substitution(b).then(&AffineMap::target(Rat::from_int(2), Rat::one()));
        assert_eq!(m1.then(&m2).apply(&f), m2.apply(&m1.apply(&f)));
        let back = m1.then(&m2).inverse().apply(&m1.then(&m2).apply(&f));
        assert_eq!(back, f);
    }
}
