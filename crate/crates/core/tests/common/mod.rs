//! Helpers shared by the integration tests.

#![allow(dead_code)]

use cubinf::affine::AffineMap;
use cubinf::linalg::{det, Matrix};
use cubinf::poly::Poly;
use cubinf::rat::Rat;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random invertible integer matrix with entries in `-r..=r`.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Matrix<Rat> {
    loop {
        let m: Matrix<Rat> = (0..n)
            .map(|_| (0..n).map(|_| Rat::from_int(rng.gen_range(-r..=r))).collect())
            .collect();
        if !det(&m).unwrap().is_zero() {
            return m;
        }
    }
}

/// Random affine change of coordinates with small integer entries.
pub fn random_affine(rng: &mut ChaCha8Rng) -> AffineMap {
    let b = random_invertible(rng, 3, 2);
    let c = (0..3).map(|_| Rat::from_int(rng.gen_range(-2..=2))).collect();
    AffineMap::substitution(b, c)
}

/// `g(y) = g(B y)` for a germ in `n` variables.
pub fn linear_change(g: &Poly<Rat>, b: &Matrix<Rat>) -> Poly<Rat> {
    let n = g.nvars();
    let subs: Vec<Poly<Rat>> = (0..n)
        .map(|i| {
            let mut p = Poly::zero(n);
            for (j, c) in b[i].iter().enumerate() {
                p = p.plus(&Poly::var(n, j).scale(c));
            }
            p
        })
        .collect();
    g.substitute(&subs)
}
