//! Projective plane cubics: singular locus, type among the nine normal forms,
//! and an exact linear change of coordinates onto the normal form.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::field::{ArithError, Ring};
use crate::germ::{curve_local_milnor, Milnor};
use crate::groebner::{groebner, MonomialOrder};
use crate::linalg::{self, Matrix};
use crate::numfield::{AlgNum, NumberField};
use crate::parse::parse_poly;
use crate::poly::{Mono, Poly, XNAMES};
use crate::rat::Rat;
use crate::unipoly::{LowFactor, UniPoly};

/// The nine projective types of a ternary cubic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubicType {
    General,
    Nodal,
    Cuspidal,
    ConicTangent,
    ConicChord,
    ThreeLines,
    Triangle,
    DoubleLine,
    TripleLine,
}

impl CubicType {
    pub const ALL: [CubicType; 9] = [
        CubicType::General,
        CubicType::Nodal,
        CubicType::Cuspidal,
        CubicType::ConicTangent,
        CubicType::ConicChord,
        CubicType::ThreeLines,
        CubicType::Triangle,
        CubicType::DoubleLine,
        CubicType::TripleLine,
    ];

    /// Normal form text; the general type uses the Hesse family member with parameter zero.
    pub fn normal_form_text(&self) -> &'static str {
        match self {
            CubicType::General => "x0^3 + x1^3 + x2^3",
            CubicType::Nodal => "x0^3 + x1^3 + x0*x1*x2",
            CubicType::Cuspidal => "-x0^3 + x1^2*x2",
            CubicType::ConicTangent => "x0^2*x1 + x1^2*x2",
            CubicType::ThreeLines => "x0^3 + x1^3",
            CubicType::ConicChord => "x0^3 + x0*x1*x2",
            CubicType::Triangle => "x0*x1*x2",
            CubicType::DoubleLine => "x0*x1^2",
            CubicType::TripleLine => "x1^3",
        }
    }

    pub fn normal_form(&self) -> Poly<Rat> {
        parse_poly(self.normal_form_text(), &XNAMES[..3]).expect("built-in normal form")
    }

    /// The Hesse family member `x0^3 + x1^3 + x2^3 + lambda x0 x1 x2`.
    pub fn hesse(lambda: &Rat) -> Poly<Rat> {
        let mut f = CubicType::General.normal_form();
        f.add_term(Mono::from_exps(&[1, 1, 1]), lambda.clone());
        f
    }

    /// Euler characteristic of the curve `f3 = 0`.
    pub fn chi_infinity(&self) -> i64 {
        match self {
            CubicType::General => 0,
            CubicType::Nodal => 1,
            CubicType::Cuspidal => 2,
            CubicType::ConicTangent => 3,
            CubicType::ConicChord => 2,
            CubicType::ThreeLines => 4,
            CubicType::Triangle => 3,
            CubicType::DoubleLine => 3,
            CubicType::TripleLine => 2,
        }
    }

    /// True for curves without multiple components.
    pub fn is_reduced(&self) -> bool {
        !matches!(self, CubicType::DoubleLine | CubicType::TripleLine)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CubicType::General => "general",
            CubicType::Nodal => "nodal",
            CubicType::Cuspidal => "cuspidal",
            CubicType::ConicTangent => "conic-tangent",
            CubicType::ConicChord => "conic-chord",
            CubicType::ThreeLines => "three-lines",
            CubicType::Triangle => "triangle",
            CubicType::DoubleLine => "double-line",
            CubicType::TripleLine => "triple-line",
        }
    }
}

impl fmt::Display for CubicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CubicError {
    #[error("expected a nonzero homogeneous cubic in x0, x1, x2")]
    Shape,
    #[error("points need an extension of degree above two, minimal polynomial {minpoly}")]
    UnsupportedExtension { minpoly: String },
    #[error("normal form unavailable: {0}")]
    Unavailable(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A singular point of the curve together with its curve Milnor number.
#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub coords: Vec<AlgNum>,
    pub milnor: Milnor,
}

/// Singular locus of `f3 = 0`.
#[derive(Clone, Debug)]
pub struct CurveSingularLocus {
    /// `None` for an empty locus.
    pub dimension: Option<u8>,
    pub points: Vec<CurvePoint>,
    /// The singular line `l = 0` of a non-reduced cubic.
    pub line: Option<[Rat; 3]>,
}

/// Points of a zero-dimensional homogeneous ideal in three variables.
#[derive(Clone, Debug)]
pub struct PointSolve {
    /// Number of distinct points over the algebraic closure.
    pub count: usize,
    /// Points with rational or quadratic coordinates; conjugate pairs are both listed.
    pub points: Vec<Vec<AlgNum>>,
    /// Factor of the eliminant whose roots were not made explicit.
    pub unsupported: Option<UniPoly<Rat>>,
}

fn rat(n: i64) -> Rat {
    Rat::from_int(n)
}

fn check_cubic(f3: &Poly<Rat>) -> Result<Poly<Rat>, CubicError> {
    let f = f3.with_nvars(3);
    if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(3) {
        return Err(CubicError::Shape);
    }
    Ok(f)
}

/// Coefficients of a linear form in three variables.
pub fn linear_coeffs(p: &Poly<Rat>) -> [Rat; 3] {
    [0, 1, 2].map(|i| p.coeff(&Mono::var(i)))
}

fn linear_form(v: &[Rat]) -> Poly<Rat> {
    let mut p = Poly::zero(3);
    for (i, c) in v.iter().enumerate() {
        p.add_term(Mono::var(i), c.clone());
    }
    p
}

/// Adds standard basis vectors to `cols` until the columns form an invertible matrix.
fn complete_columns(cols: &[Vec<Rat>]) -> Matrix<Rat> {
    let mut chosen: Vec<Vec<Rat>> = cols.to_vec();
    for i in 0..3 {
        if chosen.len() == 3 {
            break;
        }
        let mut e = vec![Rat::zero(); 3];
        e[i] = Rat::one();
        let mut trial = chosen.clone();
        trial.push(e);
        let m: Matrix<Rat> = trial.clone();
        if linalg::rank(&m).unwrap() == trial.len() {
            chosen = trial;
        }
    }
    // columns -> matrix
    (0..3).map(|r| (0..3).map(|c| chosen[c][r].clone()).collect()).collect()
}

/// Square matrix whose rows extend the given independent rows.
fn complete_rows(rows: &[Vec<Rat>]) -> Matrix<Rat> {
    let m = complete_columns(rows);
    (0..3).map(|r| (0..3).map(|c| m[c][r].clone()).collect()).collect()
}

fn to_uni_in(p: &Poly<Rat>, var: usize) -> UniPoly<Rat> {
    let d = p.degree_in(var) as usize;
    let mut c = vec![Rat::zero(); d + 1];
    for (m, v) in p.terms() {
        c[m.get(var) as usize] = &c[m.get(var) as usize] + v;
    }
    UniPoly::new(c)
}

fn uni_to_poly(u: &UniPoly<Rat>, nvars: usize, var: usize) -> Poly<Rat> {
    let mut p = Poly::zero(nvars);
    for (k, c) in u.coeffs().iter().enumerate() {
        let mut m = Mono::one();
        m.0[var] = k as u16;
        p.add_term(m, c.clone());
    }
    p
}

/// Deterministic sequence of coordinate changes used to reach a generic position.
fn generic_changes() -> Vec<Matrix<Rat>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = vec![linalg::identity(3)];
    while out.len() < 40 {
        let b: Matrix<Rat> = (0..3)
            .map(|_| (0..3).map(|_| rat(rng.gen_range(-3..=3))).collect())
            .collect();
        if !linalg::det(&b).unwrap().is_zero() {
            out.push(b);
        }
    }
    out
}

/// Solves a homogeneous ideal in `x0, x1, x2` with finitely many projective zeros.
pub fn projective_points(gens: &[Poly<Rat>]) -> Result<PointSolve, CubicError> {
    let gens: Vec<Poly<Rat>> = gens.iter().map(|g| g.with_nvars(3)).filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Err(CubicError::Shape);
    }
    for b in generic_changes() {
        let map = AffineMap::linear_substitution(b.clone());
        let g: Vec<Poly<Rat>> = gens.iter().map(|p| map.apply(p)).collect();
        // no zeros on the line y2 = 0
        if g.iter().all(|p| p.eval(&[rat(1), rat(0), rat(0)]).is_zero()) {
            continue;
        }
        let mut common = UniPoly::zero();
        for p in &g {
            let r = to_uni_in(&p.specialize(2, &Rat::zero()).specialize(1, &Rat::one()), 0);
            common = if common.is_zero() { r } else { common.gcd(&r)? };
        }
        if common.degree().unwrap_or(0) > 0 || common.is_zero() {
            continue;
        }
        // chart y2 = 1, variables (y0, y1)
        let chart: Vec<Poly<Rat>> = g
            .iter()
            .map(|p| p.specialize(2, &Rat::one()).with_nvars(2))
            .collect();
        let gb = groebner(&chart, MonomialOrder::Lex)?;
        if gb.is_unit() {
            return Ok(PointSolve {
                count: 0,
                points: Vec::new(),
                unsupported: None,
            });
        }
        let polys = gb.polys();
        let Some(elim) = polys.iter().find(|p| p.degree_in(0) == 0) else {
            return Err(CubicError::Shape);
        };
        let s = to_uni_in(elim, 1).squarefree()?;
        let mut radical = chart.clone();
        radical.push(uni_to_poly(&s, 2, 1));
        let rgb = groebner(&radical, MonomialOrder::Lex)?.polys();
        let shape = rgb.len() == 2
            && rgb.iter().any(|p| p.degree_in(0) == 0)
            && rgb.iter().any(|p| {
                p.degree_in(0) == 1
                    && p.coeff(&Mono::var(0)).is_one()
                    && p.terms().all(|(m, _)| m.get(0) == 0 || *m == Mono::var(0))
            });
        if !shape {
            continue;
        }
        let lin = rgb.iter().find(|p| p.degree_in(0) == 1).unwrap();
        // y0 = h(y1)
        let h = to_uni_in(&lin.minus(&Poly::var(2, 0)).negate(), 1);
        let (factors, leftover) = s.factor_low_degree();
        let mut points = Vec::new();
        let lift = |y0: AlgNum, y1: AlgNum| -> Vec<AlgNum> {
            let y = [y0, y1, AlgNum::rational(Rat::one())];
            (0..3)
                .map(|i| {
                    (0..3).fold(AlgNum::rational(Rat::zero()), |acc, j| {
                        acc.plus(&AlgNum::rational(b[i][j].clone()).times(&y[j]))
                    })
                })
                .collect()
        };
        for fac in factors {
            match fac {
                LowFactor::Root(r) => {
                    let y0 = h.eval(&r);
                    points.push(lift(AlgNum::rational(y0), AlgNum::rational(r)));
                }
                LowFactor::Quadratic(m) => {
                    let k = NumberField::new(m);
                    let a = AlgNum::generator(&k);
                    let y0 = AlgNum::from_poly(&k, h.clone());
                    let pt = lift(y0, a);
                    let conj = pt.iter().map(|c| c.conjugate()).collect();
                    points.push(pt);
                    points.push(conj);
                }
            }
        }
        return Ok(PointSolve {
            count: s.degree().unwrap_or(0),
            points,
            unsupported: leftover,
        });
    }
    Err(CubicError::Unavailable("no generic position found".into()))
}

fn second_partials(f3: &Poly<Rat>) -> Vec<[Rat; 3]> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            out.push(linear_coeffs(&f3.partial(i).partial(j)));
        }
    }
    out
}

/// Rank of the span of the second partial derivatives, and a common zero when the rank is two.
fn partials_span(f3: &Poly<Rat>) -> (usize, Option<Vec<Rat>>) {
    let m: Matrix<Rat> = second_partials(f3).into_iter().map(|r| r.to_vec()).collect();
    let r = linalg::rank(&m).unwrap();
    let v = if r == 2 {
        linalg::kernel(&m, 3).unwrap().into_iter().next()
    } else {
        None
    };
    (r, v)
}

/// Binary quadratic `q0 y0^2 + q1 y0 y1 + q2 y1^2` as `k * l1 * l2`, when it splits over the rationals.
fn split_quadratic(q: [Rat; 3]) -> Option<(Rat, [Rat; 2], [Rat; 2])> {
    let [a, b, c] = q;
    if a.is_zero() {
        if b.is_zero() {
            // c y1^2
            return Some((c, [rat(0), rat(1)], [rat(0), rat(1)]));
        }
        return Some((Rat::one(), [rat(0), rat(1)], [b, c]));
    }
    let disc = &b * &b - rat(4) * &a * &c;
    let s = disc.sqrt()?;
    let two_a = rat(2) * &a;
    let r1 = (-&b + &s) / &two_a;
    let r2 = (-&b - &s) / &two_a;
    // a (y0 - r1 y1)(y0 - r2 y1)
    Some((a, [rat(1), -r1], [rat(1), -r2]))
}

/// Hessian covariant of a binary cubic, as quadratic coefficients.
fn binary_hessian(g: &Poly<Rat>) -> [Rat; 3] {
    let h = g
        .partial(0)
        .partial(0)
        .times(&g.partial(1).partial(1))
        .minus(&g.partial(0).partial(1).pow(2));
    [
        h.coeff(&Mono::from_exps(&[2, 0, 0])),
        h.coeff(&Mono::from_exps(&[1, 1, 0])),
        h.coeff(&Mono::from_exps(&[0, 2, 0])),
    ]
}

/// Cone reduction: a map after which `f3` depends on `y0, y1` only.
fn cone_map(v: &[Rat]) -> AffineMap {
    let b = complete_columns(&[v.to_vec()]);
    // the vertex must become (0:0:1): put it last
    let b: Matrix<Rat> = (0..3)
        .map(|r| vec![b[r][1].clone(), b[r][2].clone(), b[r][0].clone()])
        .collect();
    AffineMap::linear_substitution(b)
}

/// Singular locus of the plane cubic `f3 = 0`.
pub fn singular_locus(f3: &Poly<Rat>) -> Result<CurveSingularLocus, CubicError> {
    let f = check_cubic(f3)?;
    let (rank, vertex) = partials_span(&f);
    if rank == 1 {
        let l = second_partials(&f).into_iter().find(|r| r.iter().any(|c| !c.is_zero())).unwrap();
        return Ok(CurveSingularLocus {
            dimension: Some(1),
            points: Vec::new(),
            line: Some(l),
        });
    }
    if rank == 2 {
        let v = vertex.unwrap();
        let m = cone_map(&v);
        let g = m.apply(&f);
        let h = binary_hessian(&g);
        let disc = &h[1] * &h[1] - rat(4) * &h[0] * &h[2];
        if disc.is_zero() {
            // double line: the Hessian is a multiple of the square of the double factor
            let (_, l, _) = split_quadratic(h).expect("square splits");
            let form = linear_form(&[l[0].clone(), l[1].clone(), Rat::zero()]);
            let back = linear_coeffs(&m.inverse().apply(&form));
            return Ok(CurveSingularLocus {
                dimension: Some(1),
                points: Vec::new(),
                line: Some(back),
            });
        }
        let coords: Vec<AlgNum> = v.iter().cloned().map(AlgNum::rational).collect();
        let milnor = curve_local_milnor(&f.lift::<AlgNum>(), &coords)?;
        return Ok(CurveSingularLocus {
            dimension: Some(0),
            points: vec![CurvePoint { coords, milnor }],
            line: None,
        });
    }
    let sol = projective_points(&f.gradient())?;
    if let Some(m) = sol.unsupported {
        return Err(CubicError::UnsupportedExtension {
            minpoly: m.render("r"),
        });
    }
    let lifted = f.lift::<AlgNum>();
    let mut points = Vec::new();
    for p in sol.points {
        let milnor = curve_local_milnor(&lifted, &p)?;
        points.push(CurvePoint { coords: p, milnor });
    }
    Ok(CurveSingularLocus {
        dimension: if sol.count == 0 { None } else { Some(0) },
        points,
        line: None,
    })
}

/// Type of the cubic among the nine normal forms.
pub fn classify_cubic(f3: &Poly<Rat>) -> Result<CubicType, CubicError> {
    let f = check_cubic(f3)?;
    let (rank, vertex) = partials_span(&f);
    match rank {
        1 => return Ok(CubicType::TripleLine),
        2 => {
            let g = cone_map(&vertex.unwrap()).apply(&f);
            let h = binary_hessian(&g);
            let disc = &h[1] * &h[1] - rat(4) * &h[0] * &h[2];
            return Ok(if disc.is_zero() {
                CubicType::DoubleLine
            } else {
                CubicType::ThreeLines
            });
        }
        _ => {}
    }
    let sol = projective_points(&f.gradient())?;
    Ok(match sol.count {
        0 => CubicType::General,
        1 => {
            // a single singular point is rational
            let p = &sol.points[0];
            match curve_local_milnor(&f.lift::<AlgNum>(), p)? {
                Milnor::Finite(1) => CubicType::Nodal,
                Milnor::Finite(2) => CubicType::Cuspidal,
                Milnor::Finite(3) => CubicType::ConicTangent,
                other => {
                    return Err(CubicError::Unavailable(format!(
                        "unexpected curve singularity {other:?}"
                    )))
                }
            }
        }
        2 => CubicType::ConicChord,
        3 => CubicType::Triangle,
        n => return Err(CubicError::Unavailable(format!("{n} singular points"))),
    })
}

/// A map carrying the cubic onto its normal form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub cubic_type: CubicType,
    pub map: AffineMap,
    /// Hesse parameter for the general type.
    pub lambda: Option<Rat>,
}

/// Running composition of coordinate changes.
struct Builder {
    g: Poly<Rat>,
    map: AffineMap,
}

impl Builder {
    fn new(f: &Poly<Rat>) -> Self {
        Builder {
            g: f.clone(),
            map: AffineMap::identity(),
        }
    }

    fn push(&mut self, m: AffineMap) {
        self.g = m.apply(&self.g);
        self.map = self.map.then(&m);
    }

    /// New coordinates given as linear forms of the current ones.
    fn coords(&mut self, rows: Matrix<Rat>) {
        self.push(AffineMap {
            linear: rows,
            ..AffineMap::identity()
        });
    }

    /// `x = B y`.
    fn subst(&mut self, b: Matrix<Rat>) {
        self.push(AffineMap::linear_substitution(b));
    }

    fn scale_vars(&mut self, s: [Rat; 3]) {
        let [a, b, c] = s;
        self.subst(vec![
            vec![a, rat(0), rat(0)],
            vec![rat(0), b, rat(0)],
            vec![rat(0), rat(0), c],
        ]);
    }

    fn scale_target(&mut self, s: Rat) {
        self.push(AffineMap::target(s, Rat::zero()));
    }

    fn c(&self, e: [u16; 3]) -> Rat {
        self.g.coeff(&Mono::from_exps(&e))
    }

    /// Moves the rational point `p` to `(0:0:1)`.
    fn move_to_last(&mut self, p: &[Rat]) {
        let b = complete_columns(&[p.to_vec()]);
        let b: Matrix<Rat> = (0..3)
            .map(|r| vec![b[r][1].clone(), b[r][2].clone(), b[r][0].clone()])
            .collect();
        self.subst(b);
    }

    fn finish(self, ct: CubicType, target: &Poly<Rat>, lambda: Option<Rat>) -> Result<Normalization, CubicError> {
        if &self.g != target {
            return Err(CubicError::Unavailable(format!(
                "internal normalization mismatch: got {}",
                self.g
            )));
        }
        Ok(Normalization {
            cubic_type: ct,
            map: self.map,
            lambda,
        })
    }
}

fn rational_point(p: &CurvePoint) -> Option<Vec<Rat>> {
    p.coords
        .iter()
        .map(|c| if c.field().is_none() { Some(c.coords().coeff(0)) } else { None })
        .collect()
}

fn unavailable<T>(msg: &str) -> Result<T, CubicError> {
    Err(CubicError::Unavailable(msg.to_string()))
}

/// Rotates the tangent cone at `(0:0:1)` so that its square root becomes `y1`.
fn tangent_square_to_y1(b: &mut Builder) {
    let q = [b.c([2, 0, 1]), b.c([1, 1, 1]), b.c([0, 2, 1])];
    let l: [Rat; 2] = if !q[0].is_zero() {
        [rat(1), &q[1] / &(rat(2) * &q[0])]
    } else {
        [rat(0), rat(1)]
    };
    let other = if l[0].is_zero() { [rat(1), rat(0)] } else { [rat(0), rat(1)] };
    b.coords(vec![
        vec![other[0].clone(), other[1].clone(), rat(0)],
        vec![l[0].clone(), l[1].clone(), rat(0)],
        vec![rat(0), rat(0), rat(1)],
    ]);
}

/// An exact linear map onto the normal form, or `Unavailable` when irrational data is needed.
pub fn normalizing_map(f3: &Poly<Rat>) -> Result<Normalization, CubicError> {
    let f = check_cubic(f3)?;
    let ct = classify_cubic(&f)?;
    let nf = ct.normal_form();
    if f == nf {
        return Ok(Normalization {
            cubic_type: ct,
            map: AffineMap::identity(),
            lambda: (ct == CubicType::General).then(Rat::zero),
        });
    }
    let mut b = Builder::new(&f);
    match ct {
        CubicType::General => {
            let allowed = [[3, 0, 0], [0, 3, 0], [0, 0, 3], [1, 1, 1]];
            if f.terms().any(|(m, _)| !allowed.iter().any(|e| Mono::from_exps(e) == *m)) {
                return unavailable("general cubic not in diagonal Hesse shape");
            }
            let a = b.c([3, 0, 0]);
            let q = b.c([0, 3, 0]) / &a;
            let r = b.c([0, 0, 3]) / &a;
            let (Some(q3), Some(r3)) = ((Rat::one() / q).cbrt(), (Rat::one() / r).cbrt()) else {
                return unavailable("cube roots needed for the general normal form");
            };
            b.scale_target(Rat::one() / &a);
            b.scale_vars([rat(1), q3, r3]);
            let lambda = b.c([1, 1, 1]);
            let target = CubicType::hesse(&lambda);
            b.finish(ct, &target, Some(lambda))
        }
        CubicType::Nodal => {
            let loc = singular_locus(&f)?;
            let p = rational_point(&loc.points[0]).unwrap();
            b.move_to_last(&p);
            let q = [b.c([2, 0, 1]), b.c([1, 1, 1]), b.c([0, 2, 1])];
            let Some((_, l1, l2)) = split_quadratic(q) else {
                return unavailable("node with irrational tangents");
            };
            b.coords(vec![
                vec![l1[0].clone(), l1[1].clone(), rat(0)],
                vec![l2[0].clone(), l2[1].clone(), rat(0)],
                vec![rat(0), rat(0), rat(1)],
            ]);
            let k = b.c([1, 1, 1]);
            let (beta, gamma) = (b.c([2, 1, 0]), b.c([1, 2, 0]));
            b.subst(vec![
                vec![rat(1), rat(0), rat(0)],
                vec![rat(0), rat(1), rat(0)],
                vec![-(beta / &k), -(gamma / &k), rat(1)],
            ]);
            let (alpha, delta) = (b.c([3, 0, 0]), b.c([0, 3, 0]));
            let (p0, p1) = match (alpha.cbrt(), delta.cbrt()) {
                (Some(a), Some(d)) => (Rat::one() / a, Rat::one() / d),
                _ => {
                    let Some(q) = (&alpha / &delta).cbrt() else {
                        return unavailable("nodal normal form needs an irrational cube root");
                    };
                    b.scale_target(Rat::one() / &alpha);
                    (rat(1), q)
                }
            };
            b.scale_vars([p0, p1, rat(1)]);
            let k = b.c([1, 1, 1]);
            b.scale_vars([rat(1), rat(1), Rat::one() / k]);
            b.finish(ct, &nf, None)
        }
        CubicType::Cuspidal | CubicType::ConicTangent => {
            let loc = singular_locus(&f)?;
            let p = rational_point(&loc.points[0]).unwrap();
            b.move_to_last(&p);
            tangent_square_to_y1(&mut b);
            if ct == CubicType::Cuspidal {
                let (alpha, beta) = (b.c([3, 0, 0]), b.c([2, 1, 0]));
                b.subst(vec![
                    vec![rat(1), -(beta / (rat(3) * &alpha)), rat(0)],
                    vec![rat(0), rat(1), rat(0)],
                    vec![rat(0), rat(0), rat(1)],
                ]);
            }
            let (k, gamma, delta) = (b.c([0, 2, 1]), b.c([1, 2, 0]), b.c([0, 3, 0]));
            b.subst(vec![
                vec![rat(1), rat(0), rat(0)],
                vec![rat(0), rat(1), rat(0)],
                vec![-(gamma / &k), -(delta / &k), rat(1)],
            ]);
            if ct == CubicType::Cuspidal {
                let alpha = b.c([3, 0, 0]);
                b.scale_target(-(Rat::one() / alpha));
            } else {
                let beta = b.c([2, 1, 0]);
                b.scale_target(Rat::one() / beta);
            }
            let k = b.c([0, 2, 1]);
            b.scale_vars([rat(1), rat(1), Rat::one() / k]);
            b.finish(ct, &nf, None)
        }
        CubicType::ConicChord => {
            let loc = singular_locus(&f)?;
            let (Some(n1), Some(n2)) = (rational_point(&loc.points[0]), rational_point(&loc.points[1])) else {
                return unavailable("conjugate nodes");
            };
            let m = complete_columns(&[n1, n2]);
            // columns (n1, n2, p) -> (p, n1, n2)
            let m: Matrix<Rat> = (0..3)
                .map(|r| vec![m[r][2].clone(), m[r][0].clone(), m[r][1].clone()])
                .collect();
            b.subst(m);
            let (bb, cc, d) = (b.c([2, 1, 0]), b.c([2, 0, 1]), b.c([1, 1, 1]));
            b.subst(vec![
                vec![rat(1), rat(0), rat(0)],
                vec![-(cc / &d), rat(1), rat(0)],
                vec![-(bb / &d), rat(0), rat(1)],
            ]);
            let a = b.c([3, 0, 0]);
            b.scale_target(Rat::one() / a);
            let d = b.c([1, 1, 1]);
            b.scale_vars([rat(1), rat(1), Rat::one() / d]);
            b.finish(ct, &nf, None)
        }
        CubicType::Triangle => {
            let loc = singular_locus(&f)?;
            let pts: Option<Vec<Vec<Rat>>> = loc.points.iter().map(rational_point).collect();
            let Some(pts) = pts else {
                return unavailable("irrational vertices");
            };
            let m: Matrix<Rat> = (0..3).map(|r| (0..3).map(|c| pts[c][r].clone()).collect()).collect();
            b.subst(m);
            let k = b.c([1, 1, 1]);
            b.scale_target(Rat::one() / k);
            b.finish(ct, &nf, None)
        }
        CubicType::ThreeLines | CubicType::DoubleLine => {
            let (_, v) = partials_span(&f);
            b.push(cone_map(&v.unwrap()));
            let h = binary_hessian(&b.g);
            let Some((_, l1, l2)) = split_quadratic(h) else {
                return unavailable("three lines with irrational Hessian factors");
            };
            if ct == CubicType::DoubleLine {
                // l1 = l2 is the double factor; the quotient gives the simple one
                let other = if l1[0].is_zero() { [rat(1), rat(0)] } else { [rat(0), rat(1)] };
                b.coords(vec![
                    vec![other[0].clone(), other[1].clone(), rat(0)],
                    vec![l1[0].clone(), l1[1].clone(), rat(0)],
                    vec![rat(0), rat(0), rat(1)],
                ]);
                let (m0, m1) = (b.c([1, 2, 0]), b.c([0, 3, 0]));
                b.coords(vec![
                    vec![m0.clone(), m1, rat(0)],
                    vec![rat(0), rat(1), rat(0)],
                    vec![rat(0), rat(0), rat(1)],
                ]);
                let c = b.c([1, 2, 0]);
                b.scale_target(Rat::one() / c);
                return b.finish(ct, &nf, None);
            }
            b.coords(vec![
                vec![l1[0].clone(), l1[1].clone(), rat(0)],
                vec![l2[0].clone(), l2[1].clone(), rat(0)],
                vec![rat(0), rat(0), rat(1)],
            ]);
            let (alpha, beta) = (b.c([3, 0, 0]), b.c([0, 3, 0]));
            match (alpha.cbrt(), beta.cbrt()) {
                (Some(a), Some(c)) => b.scale_vars([Rat::one() / a, Rat::one() / c, rat(1)]),
                _ => {
                    let Some(q) = (&alpha / &beta).cbrt() else {
                        return unavailable("three lines normal form needs an irrational cube root");
                    };
                    b.scale_target(Rat::one() / &alpha);
                    b.scale_vars([rat(1), q, rat(1)]);
                }
            }
            b.finish(ct, &nf, None)
        }
        CubicType::TripleLine => {
            let l = second_partials(&f).into_iter().find(|r| r.iter().any(|c| !c.is_zero())).unwrap();
            let rows = complete_rows(&[l.to_vec()]);
            // l becomes y1
            let rows: Matrix<Rat> = vec![rows[1].clone(), rows[0].clone(), rows[2].clone()];
            b.coords(rows);
            let c = b.c([0, 3, 0]);
            b.scale_target(Rat::one() / c);
            b.finish(ct, &nf, None)
        }
    }
}

/// Renders a projective point with exact coordinates.
pub fn render_point(p: &[AlgNum]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(" : "))
}

/// The field generated by the coordinates, if any.
pub fn point_field(p: &[AlgNum]) -> Option<Arc<NumberField>> {
    p.iter().find_map(|c| c.field().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly<Rat> {
        parse_poly(s, &XNAMES[..3]).unwrap()
    }

    #[test]
    fn normal_forms_classify_as_themselves() {
        for ct in CubicType::ALL {
            assert_eq!(classify_cubic(&ct.normal_form()).unwrap(), ct, "{ct}");
        }
    }

    #[test]
    fn normal_forms_map_to_themselves() {
        for ct in CubicType::ALL {
            let n = normalizing_map(&ct.normal_form()).unwrap();
            assert_eq!(n.map.apply(&ct.normal_form()), if ct == CubicType::General {
                CubicType::hesse(n.lambda.as_ref().unwrap())
            } else {
                ct.normal_form()
            });
        }
    }

    #[test]
    fn locus_examples() {
        assert_eq!(singular_locus(&p("x0^3 + x1^3 + x2^3")).unwrap().dimension, None);
        let node = singular_locus(&p("x0^3 + x1^3 + x0*x1*x2")).unwrap();
        assert_eq!(node.points.len(), 1);
        assert_eq!(node.points[0].milnor, Milnor::Finite(1));
        assert_eq!(render_point(&node.points[0].coords), "(0 : 0 : 1)");
        let tri = singular_locus(&p("x0*x1*x2")).unwrap();
        assert_eq!(tri.points.len(), 3);
        assert!(tri.points.iter().all(|q| q.milnor == Milnor::Finite(1)));
        assert_eq!(singular_locus(&p("x0*x1^2")).unwrap().dimension, Some(1));
    }

    #[test]
    fn spec_examples() {
        assert_eq!(classify_cubic(&p("-x0^3 + x2*x1^2")).unwrap(), CubicType::Cuspidal);
        assert_eq!(classify_cubic(&p("x0^2*x1 + x1^2*x2")).unwrap(), CubicType::ConicTangent);
        assert_eq!(classify_cubic(&p("x0*x1^2")).unwrap(), CubicType::DoubleLine);
        let f = p("8x0^3 + x1^3 + 2x0*x1*x2");
        let n = normalizing_map(&f).unwrap();
        assert_eq!(n.map.apply(&f), CubicType::Nodal.normal_form());
        assert_eq!(n.map.scale, Rat::one());
    }

    #[test]
    fn conjugate_nodes_are_counted() {
        // (x0^2 - 2 x1^2 + x0 x2) x0 ... a conic meeting the line x2 = 0 in conjugate points
        let f = p("x0^2*x2 - 2*x1^2*x2 + x0*x2^2");
        assert_eq!(classify_cubic(&f).unwrap(), CubicType::ConicChord);
        let loc = singular_locus(&f).unwrap();
        assert_eq!(loc.points.len(), 2);
        assert!(point_field(&loc.points[0].coords).is_some());
        assert!(matches!(normalizing_map(&f), Err(CubicError::Unavailable(_))));
    }
}

#[cfg(test)]
mod random_changes {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn classification_is_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for ct in CubicType::ALL {
            let mut unavailable = 0;
            for _ in 0..25 {
                let b: Matrix<Rat> = loop {
                    let b: Matrix<Rat> = (0..3)
                        .map(|_| (0..3).map(|_| rat(rng.gen_range(-2..=2))).collect())
                        .collect();
                    if !linalg::det(&b).unwrap().is_zero() {
                        break b;
                    }
                };
                let f = AffineMap::linear_substitution(b).apply(&ct.normal_form());
                assert_eq!(classify_cubic(&f).unwrap(), ct, "{f}");
                match normalizing_map(&f) {
                    Ok(n) => {
                        let g = n.map.apply(&f);
                        assert_eq!(n.cubic_type, ct);
                        if ct != CubicType::General {
                            assert_eq!(g, ct.normal_form());
                        }
                    }
                    Err(CubicError::Unavailable(_)) => unavailable += 1,
                    Err(e) => panic!("{ct}: {e}"),
                }
            }
            if ct != CubicType::General {
                assert_eq!(unavailable, 0, "{ct}");
            }
        }
    }
}
