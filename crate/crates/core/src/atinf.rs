//! The fibers of `f` closed up in projective space and their germs at points at infinity.
//!
//! For a fiber value `t` the closure is `F_t = F - t * x3^3` with `F` the
//! homogenization of `f`. Points at infinity have `x3 = 0`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::Ring;
use crate::germ::{ade_classify, chart_germ, GermAnalysis, OracleError, N_MAX};
use crate::numfield::{AlgNum, NumberField};
use crate::poly::{Mono, Poly};
use crate::rat::Rat;
use crate::unipoly::{LowFactor, UniPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AtInfError {
    /// The point and the fiber value live in different extensions.
    #[error("point field {point} and fiber value field {value} differ")]
    Tower { point: String, value: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// The closure `F - t x3^3` of the fiber `f = t`, over the field of `t`.
pub fn fiber_closure(f: &Poly<Rat>, t: &AlgNum) -> Poly<AlgNum> {
    let big = f.with_nvars(3).homogenize();
    let mut ft: Poly<AlgNum> = big.lift();
    ft.add_term(Mono::var(3).mul(&Mono::var(3)).mul(&Mono::var(3)), t.negate());
    ft
}

fn field_name(a: &[AlgNum]) -> Option<String> {
    a.iter()
        .find_map(|c| c.field())
        .map(|k| k.modulus().render("r"))
}

/// Oracle analysis of the fiber `f = t` at the point at infinity `(p0 : p1 : p2 : 0)`.
pub fn analyze_at(f: &Poly<Rat>, point: &[AlgNum], t: &AlgNum) -> Result<GermAnalysis, AtInfError> {
    assert_eq!(point.len(), 3);
    if let (Some(pk), Some(tk)) = (field_name(point), field_name(std::slice::from_ref(t))) {
        if pk != tk {
            return Err(AtInfError::Tower { point: pk, value: tk });
        }
    }
    let ft = fiber_closure(f, t);
    let mut p4 = point.to_vec();
    p4.push(AlgNum::zero());
    let germ = chart_germ(&ft, &p4).map_err(OracleError::from)?;
    Ok(ade_classify(&germ, N_MAX)?)
}

/// A random rational `p/q` with small height, avoiding the given values.
pub fn random_value(rng: &mut ChaCha8Rng, avoid: impl Fn(&Rat) -> bool) -> Rat {
    loop {
        let p: i64 = rng.gen_range(-97..=97);
        let q: i64 = rng.gen_range(1..=9);
        let t = Rat::new(p, q);
        if !avoid(&t) {
            return t;
        }
    }
}

/// One value per irreducible factor, with the factor it is a root of.
pub fn locus_values(p: &UniPoly<Rat>) -> Vec<(AlgNum, UniPoly<Rat>)> {
    let (factors, rest) = p.factor_low_degree();
    let mut out = Vec::new();
    for fac in factors {
        match fac {
            LowFactor::Root(r) => out.push((AlgNum::rational(r.clone()), UniPoly::new(vec![-r, Rat::one()]))),
            LowFactor::Quadratic(m) => out.push((AlgNum::generator(&NumberField::new(m.clone())), m.primitive())),
        }
    }
    if let Some(m) = rest {
        // Irreducible when cubic; a split of a higher degree factor surfaces as a
        // zero divisor once the oracle computes with the value.
        out.push((AlgNum::generator(&NumberField::new(m.clone())), m.primitive()));
    }
    out
}
