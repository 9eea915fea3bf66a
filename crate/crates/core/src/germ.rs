//! Local analysis of hypersurface germs: Milnor number, corank and ADE type.
//!
//! The Milnor number is read off the dimension of `K[x]/(J + m^N)` once it stops
//! growing in `N`. Equality of two consecutive dimensions forces equality of all
//! later ones, so probing a few values of `N` suffices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::field::{ArithError, Field};
use crate::groebner::{groebner_truncated, MonomialOrder, QuotientDim};
use crate::linalg::{self, Matrix};
use crate::poly::{Mono, Poly};
use crate::unipoly::UniPoly;

/// Default truncation bound for the local Milnor number.
pub const N_MAX: u32 = 16;

/// Local type of a germ, or of a hypersurface at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalType {
    A(u32),
    D(u32),
    E(u32),
    /// Isolated but not simple.
    NonSimple,
    NonIsolated,
}

impl LocalType {
    /// Milnor number determined by the type, `None` when the type does not fix it.
    pub fn milnor(&self) -> Option<u32> {
        match *self {
            LocalType::A(k) | LocalType::D(k) | LocalType::E(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_isolated(&self) -> bool {
        !matches!(self, LocalType::NonIsolated)
    }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalType::A(k) => write!(f, "A{k}"),
            LocalType::D(k) => write!(f, "D{k}"),
            LocalType::E(k) => write!(f, "E{k}"),
            LocalType::NonSimple => write!(f, "non-simple"),
            LocalType::NonIsolated => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown singularity type '{0}'")]
pub struct ParseTypeError(pub String);

impl FromStr for LocalType {
    type Err = ParseTypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseTypeError(s.to_string());
        match s {
            "inf" => return Ok(LocalType::NonIsolated),
            "non-simple" => return Ok(LocalType::NonSimple),
            _ => {}
        }
        let (head, num) = s.split_at(1);
        let k: u32 = num.parse().map_err(|_| bad())?;
        match head {
            "A" => Ok(LocalType::A(k)),
            "D" if k >= 4 => Ok(LocalType::D(k)),
            "E" if (6..=8).contains(&k) => Ok(LocalType::E(k)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for LocalType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LocalType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Local Milnor number, or the witness that the singularity is not isolated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Milnor {
    Finite(u32),
    NonIsolated,
}

/// Root multiplicity pattern of a binary cubic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootStructure {
    Zero,
    ThreeDistinct,
    DoubleSimple,
    Triple,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("germ analysis is inconsistent: {0}")]
    Inconsistent(String),
}

/// Everything the oracle learns about one germ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GermAnalysis {
    pub milnor: Milnor,
    pub corank: usize,
    pub residual: Option<RootStructure>,
    pub local_type: LocalType,
}

/// `dim K[x]/(J + m^n)` for the Jacobian ideal of `g`.
pub fn truncated_dim<F: Field>(g: &Poly<F>, n: u32) -> Result<usize, ArithError> {
    let gb = groebner_truncated(&g.gradient(), MonomialOrder::GRevLex, n)?;
    match gb.quotient_dim() {
        QuotientDim::Finite(d) => Ok(d),
        QuotientDim::Infinite => unreachable!("truncated ideals are zero-dimensional"),
    }
}

/// The sequence of truncated dimensions for `n = 1..=nmax`, used by tests and audits.
pub fn truncated_dims<F: Field>(g: &Poly<F>, nmax: u32) -> Result<Vec<usize>, ArithError> {
    (1..=nmax).map(|n| truncated_dim(g, n)).collect()
}

/// Local Milnor number of `g` at the origin.
pub fn local_milnor<F: Field>(g: &Poly<F>, nmax: u32) -> Result<Milnor, ArithError> {
    let mut probes: Vec<u32> = Vec::new();
    let mut n = 2;
    while n < nmax {
        probes.push(n);
        n *= 2;
    }
    probes.push(nmax);
    for n in probes {
        let a = truncated_dim(g, n)?;
        let b = truncated_dim(g, n + 1)?;
        if a == b {
            return Ok(Milnor::Finite(a as u32));
        }
    }
    Ok(Milnor::NonIsolated)
}

/// Hessian matrix of `g` at the origin.
pub fn hessian_at_origin<F: Field>(g: &Poly<F>) -> Matrix<F> {
    let n = g.nvars();
    let mut h = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut m = Mono::one();
            m.0[i] += 1;
            m.0[j] += 1;
            let c = g.coeff(&m);
            h[i][j] = if i == j { c.times(&F::from_i64(2)) } else { c };
        }
    }
    h
}

pub fn corank<F: Field>(g: &Poly<F>) -> Result<usize, ArithError> {
    Ok(g.nvars() - linalg::rank(&hessian_at_origin(g))?)
}

/// Cubic part of `g` restricted to the Hessian kernel, for corank two.
/// Coefficients are returned for `u^3, u^2 v, u v^2, v^3`.
pub fn residual_cubic<F: Field>(g: &Poly<F>) -> Result<Option<[F; 4]>, ArithError> {
    let n = g.nvars();
    let ker = linalg::kernel(&hessian_at_origin(g), n)?;
    if ker.len() != 2 {
        return Ok(None);
    }
    let u = Poly::var(2, 0);
    let v = Poly::var(2, 1);
    let subs: Vec<Poly<F>> = (0..n)
        .map(|i| u.scale(&ker[0][i]).plus(&v.scale(&ker[1][i])))
        .collect();
    let c = g.homogeneous_part(3).substitute(&subs);
    let get = |a: u16, b: u16| c.coeff(&Mono::from_exps(&[a, b]));
    Ok(Some([get(3, 0), get(2, 1), get(1, 2), get(0, 3)]))
}

/// Root pattern of `c0 u^3 + c1 u^2 v + c2 u v^2 + c3 v^3`, from the discriminant and
/// the degree of `gcd(q, q')` of a dehomogenization.
pub fn binary_cubic_roots<F: Field>(c: &[F; 4]) -> Result<RootStructure, ArithError> {
    if c.iter().all(|x| x.is_zero()) {
        return Ok(RootStructure::Zero);
    }
    let disc = crate::unipoly::binary_cubic_discriminant(&c[0], &c[1], &c[2], &c[3]);
    if !disc.is_zero() {
        return Ok(RootStructure::ThreeDistinct);
    }
    // dehomogenize at v = 1; a root at infinity of multiplicity k lowers the degree by k
    let q = UniPoly::new(vec![c[3].clone(), c[2].clone(), c[1].clone(), c[0].clone()]);
    let deg = q.degree().unwrap();
    let at_inf = 3 - deg;
    let g = q.gcd(&q.derivative())?;
    let gdeg = g.degree().unwrap_or(0);
    // finite repeated roots add gcd degree plus one; the point at infinity adds `at_inf`
    let max_mult = at_inf.max(gdeg + 1);
    Ok(match max_mult {
        3 => RootStructure::Triple,
        2 => RootStructure::DoubleSimple,
        _ => RootStructure::ThreeDistinct,
    })
}

/// Recognizes the type of the germ `g` at the origin, assuming `g(0) = 0`.
pub fn ade_classify<F: Field>(g: &Poly<F>, nmax: u32) -> Result<GermAnalysis, OracleError> {
    let n = g.nvars();
    let linear_nonzero = (0..n).any(|i| !g.coeff(&Mono::var(i)).is_zero());
    if linear_nonzero {
        return Ok(GermAnalysis {
            milnor: Milnor::Finite(0),
            corank: 0,
            residual: None,
            local_type: LocalType::A(0),
        });
    }
    let milnor = local_milnor(g, nmax)?;
    let r = corank(g)?;
    let residual = if r == 2 {
        residual_cubic(g)?
            .map(|c| binary_cubic_roots(&c))
            .transpose()?
    } else {
        None
    };
    let mu = match milnor {
        Milnor::NonIsolated => {
            return Ok(GermAnalysis {
                milnor,
                corank: r,
                residual,
                local_type: LocalType::NonIsolated,
            })
        }
        Milnor::Finite(m) => m,
    };
    let bad = |msg: String| Err(OracleError::Inconsistent(msg));
    let local_type = match (r, residual) {
        (0, _) => {
            if mu != 1 {
                return bad(format!("corank 0 with Milnor number {mu}"));
            }
            LocalType::A(1)
        }
        (1, _) => LocalType::A(mu),
        (2, Some(RootStructure::ThreeDistinct)) => {
            if mu != 4 {
                return bad(format!("D4 residual with Milnor number {mu}"));
            }
            LocalType::D(4)
        }
        (2, Some(RootStructure::DoubleSimple)) => {
            if mu < 5 {
                return bad(format!("D residual with Milnor number {mu}"));
            }
            LocalType::D(mu)
        }
        (2, Some(RootStructure::Triple)) if (6..=8).contains(&mu) => LocalType::E(mu),
        _ => LocalType::NonSimple,
    };
    Ok(GermAnalysis {
        milnor,
        corank: r,
        residual,
        local_type,
    })
}

/// Outcome of a weighted homogeneity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quasihomogeneity {
    Quasihomogeneous,
    SemiQuasihomogeneous,
    Neither,
}

/// Compares `g` against the weights `w` and the weighted degree `d`.
///
/// Semi-quasihomogeneous means no term sits below degree `d` and the degree `d`
/// part has an isolated singularity at the origin.
pub fn quasihomogeneous_check<F: Field>(g: &Poly<F>, w: &[u32], d: u32) -> Result<Quasihomogeneity, ArithError> {
    let weight = |m: &Mono| -> u32 { w.iter().enumerate().map(|(i, wi)| wi * m.get(i) as u32).sum() };
    if g.terms().any(|(m, _)| weight(m) < d) {
        return Ok(Quasihomogeneity::Neither);
    }
    if g.terms().all(|(m, _)| weight(m) == d) {
        return Ok(Quasihomogeneity::Quasihomogeneous);
    }
    let principal = Poly::from_terms(
        g.nvars(),
        g.terms().filter(|(m, _)| weight(m) == d).map(|(m, c)| (*m, c.clone())),
    );
    Ok(match local_milnor(&principal, N_MAX)? {
        Milnor::Finite(_) if !principal.is_zero() => Quasihomogeneity::SemiQuasihomogeneous,
        _ => Quasihomogeneity::Neither,
    })
}

/// Affine chart of a homogeneous polynomial at a projective point, centred at the origin.
/// The chart drops the first coordinate where the point is nonzero.
pub fn chart_germ<F: Field>(h: &Poly<F>, point: &[F]) -> Result<Poly<F>, ArithError> {
    let n = h.nvars();
    assert_eq!(point.len(), n);
    let i = point
        .iter()
        .position(|x| !x.is_zero())
        .expect("projective point has a nonzero coordinate");
    let inv = point[i].inverse()?;
    let p: Vec<F> = point.iter().map(|x| x.times(&inv)).collect();
    let m = n - 1;
    let mut subs = Vec::with_capacity(n);
    let mut k = 0;
    for (j, pj) in p.iter().enumerate() {
        if j == i {
            subs.push(Poly::one(m));
        } else {
            subs.push(Poly::var(m, k).plus(&Poly::constant(m, pj.clone())));
            k += 1;
        }
    }
    Ok(h.substitute(&subs).with_nvars(m))
}

/// Milnor number of the plane curve `h = 0` (homogeneous, three variables) at a point.
pub fn curve_local_milnor<F: Field>(h: &Poly<F>, point: &[F]) -> Result<Milnor, ArithError> {
    let g = chart_germ(h, point)?;
    local_milnor(&g, N_MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::rat::Rat;

    fn germ(s: &str) -> Poly<Rat> {
        parse_poly(s, &["x", "y", "z"]).unwrap()
    }

    fn ty(s: &str) -> LocalType {
        ade_classify(&germ(s), N_MAX).unwrap().local_type
    }

    #[test]
    fn normal_forms() {
        assert_eq!(ty("x^2 + y^2 + z^2"), LocalType::A(1));
        assert_eq!(ty("x^4 + y^2 + z^2"), LocalType::A(3));
        assert_eq!(ty("x^2*y + y^3 + z^2"), LocalType::D(4));
        assert_eq!(ty("x^2*y + y^5 + z^2"), LocalType::D(6));
        assert_eq!(ty("x^3 + y^4 + z^2"), LocalType::E(6));
        assert_eq!(ty("x^3 + x*y^3 + z^2"), LocalType::E(7));
        assert_eq!(ty("x^3 + y^5 + z^2"), LocalType::E(8));
        assert_eq!(ty("x + y^2"), LocalType::A(0));
    }

    #[test]
    fn non_isolated_and_non_simple() {
        assert_eq!(ty("x^2 + y^2"), LocalType::NonIsolated);
        assert_eq!(ty("x^3 + y^3 + z^3"), LocalType::NonSimple);
        let a = ade_classify(&germ("x^3 + y^3 + z^3"), N_MAX).unwrap();
        assert_eq!(a.milnor, Milnor::Finite(8));
    }

    #[test]
    fn residual_patterns() {
        let r = |v: [i64; 4]| binary_cubic_roots(&v.map(Rat::from_int)).unwrap();
        assert_eq!(r([0, 0, 0, 0]), RootStructure::Zero);
        assert_eq!(r([1, 0, -1, 0]), RootStructure::ThreeDistinct);
        assert_eq!(r([0, 1, 0, 0]), RootStructure::DoubleSimple);
        assert_eq!(r([1, 0, 0, 0]), RootStructure::Triple);
        assert_eq!(r([0, 0, 0, 1]), RootStructure::Triple);
        assert_eq!(r([1, 3, 3, 1]), RootStructure::Triple);
        assert_eq!(r([0, 0, 1, 0]), RootStructure::DoubleSimple);
    }

    #[test]
    fn weighted_homogeneity() {
        use Quasihomogeneity::*;
        let e6 = germ("x^3 + y^4 + z^2");
        assert_eq!(quasihomogeneous_check(&e6, &[4, 3, 6], 12).unwrap(), Quasihomogeneous);
        assert_eq!(quasihomogeneous_check(&germ("x^2 + y^2 + z^2"), &[1, 1, 1], 2).unwrap(), Quasihomogeneous);
        let semi = germ("x^3 + y^4 + z^2 + y^5");
        assert_eq!(quasihomogeneous_check(&semi, &[4, 3, 6], 12).unwrap(), SemiQuasihomogeneous);
        assert_eq!(quasihomogeneous_check(&germ("x^2 + x*y"), &[3, 2, 1], 6).unwrap(), Neither);
    }

    #[test]
    fn curve_node() {
        // nodal cubic x^3 + y^3 + x y z has a node at (0:0:1)
        let h = germ("x^3 + y^3 + x*y*z");
        let p = [Rat::zero(), Rat::zero(), Rat::one()];
        assert_eq!(curve_local_milnor(&h, &p).unwrap(), Milnor::Finite(1));
    }
}
