//! Global invariants: Euler characteristics, the second Betti number of the
//! generic fiber, the affine Milnor number, critical and atypical values, and the
//! Broughton and global fibration tests.

use serde::{Deserialize, Serialize};

use crate::cubic::CubicType;
use crate::field::ArithError;
use crate::germ::LocalType;
use crate::groebner::{eliminate, groebner, MonomialOrder, QuotientDim};
use crate::poly::{Mono, Poly};
use crate::rat::Rat;
use crate::tables::{ClassTag, Verdict};
use crate::unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvariantError {
    #[error("Euler characteristic formula is not integral at n={n}, d={d}")]
    NonIntegral { n: u32, d: u32 },
    #[error("negative Betti number: {0}")]
    Negative(String),
    #[error("Betti defect {defect} disagrees with 8 - b2 = {expected}")]
    DefectMismatch { defect: i64, expected: i64 },
    #[error("critical values form a positive dimensional set")]
    ZeroEliminant,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Euler characteristic of a smooth degree `d` hypersurface in `P^n`.
pub fn chi_smooth(n: u32, d: u32) -> Result<i64, InvariantError> {
    assert!(n >= 1 && d >= 1);
    let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
    let num = 1 + sign * (d as i64 - 1).pow(n + 1);
    if num % d as i64 != 0 {
        return Err(InvariantError::NonIntegral { n, d });
    }
    Ok(n as i64 + 1 - num / d as i64)
}

/// `b2 = 8 - sum (mu_gen + mu_inf)` and `mu = b2 - lambda` for F-type polynomials.
pub fn b2_f(lambda: u32, mu_pairs: &[(u32, u32)]) -> Result<(u32, i64), InvariantError> {
    let b2 = 8 - mu_pairs.iter().map(|(g, i)| (g + i) as i64).sum::<i64>();
    if b2 < 0 {
        return Err(InvariantError::Negative(format!("b2 = {b2}")));
    }
    let mu = b2 - lambda as i64;
    if mu < 0 {
        return Err(InvariantError::Negative(format!("mu = {mu}")));
    }
    Ok((b2 as u32, mu))
}

/// `b2 = (chi(3,3) - 1) - sum mu_gen - chi_inf` for B-type polynomials.
pub fn b2_b(mu_gen_sum: u32, chi_inf: i64) -> Result<u32, InvariantError> {
    let b2 = chi_smooth(3, 3)? - 1 - mu_gen_sum as i64 - chi_inf;
    if b2 < 0 {
        return Err(InvariantError::Negative(format!("b2 = {b2}")));
    }
    Ok(b2 as u32)
}

/// Betti defect `sum mu_p - delta_chi_inf` in dimension three, checked against `8 - b2`.
pub fn betti_defect(mu_boundary_sum: u32, delta_chi_inf: i64, b2: u32) -> Result<i64, InvariantError> {
    let defect = mu_boundary_sum as i64 - delta_chi_inf;
    let expected = 8 - b2 as i64;
    if defect != expected {
        return Err(InvariantError::DefectMismatch { defect, expected });
    }
    Ok(defect)
}

/// `chi(3-1, 3) - chi(f3 = 0)`.
pub fn delta_chi_infinity(ct: CubicType) -> Result<i64, InvariantError> {
    Ok(chi_smooth(2, 3)? - ct.chi_infinity())
}

/// Total affine Milnor number; `None` when the critical set is not finite.
pub fn affine_milnor_total(f: &Poly<Rat>) -> Result<Option<u32>, InvariantError> {
    let grad = f.with_nvars(3).gradient();
    let gb = groebner(&grad, MonomialOrder::GRevLex)?;
    Ok(match gb.quotient_dim() {
        QuotientDim::Finite(n) => Some(n as u32),
        QuotientDim::Infinite => None,
    })
}

/// Critical values: the squarefree generator of `<grad f, w - f>` in `Q[w]`,
/// `None` when there are no critical points.
pub fn critical_values(f: &Poly<Rat>) -> Result<Option<UniPoly<Rat>>, InvariantError> {
    let f4 = f.with_nvars(3).with_nvars(4);
    let mut gens: Vec<Poly<Rat>> = f4.gradient().into_iter().take(3).collect();
    gens.push(Poly::var(4, 3).minus(&f4));
    let elim = eliminate(&gens, 3)?;
    let Some(g) = elim.into_iter().min_by_key(|p| p.total_degree()) else {
        return Err(InvariantError::ZeroEliminant);
    };
    let deg = g.degree_in(3) as usize;
    let coeffs = (0..=deg)
        .map(|k| g.coeff(&Mono::from_exps(&[0, 0, 0, k as u16])))
        .collect();
    let u = UniPoly::new(coeffs);
    if u.degree() == Some(0) {
        return Ok(None);
    }
    Ok(Some(u.squarefree()?.primitive()))
}

/// Atypical values: critical values together with the jump loci.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atyp {
    /// `None` when `f` has no critical points.
    pub critical_values: Option<UniPoly<Rat>>,
    pub jump_loci: Vec<UniPoly<Rat>>,
}

impl Atyp {
    pub fn is_empty(&self) -> bool {
        self.critical_values.is_none() && self.jump_loci.is_empty()
    }
}

/// Outcome of one of the two case checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCheck {
    pub holds: bool,
    /// Case label from the list of known cases, or `unlisted combination`.
    pub case: Option<String>,
}

impl CaseCheck {
    fn no() -> Self {
        CaseCheck { holds: false, case: None }
    }
}

/// Global invariants of one polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalReport {
    pub verdict: Verdict,
    /// `None` when the affine critical set is not finite.
    pub mu_affine: Option<u32>,
    pub atyp: Atyp,
    pub b2: Option<u32>,
    pub broughton: CaseCheck,
    pub global_fibration: CaseCheck,
    pub findings: Vec<String>,
}

pub const UNLISTED: &str = "unlisted combination";

fn specials(v: &Verdict) -> Vec<LocalType> {
    v.events.iter().map(|e| e.special).collect()
}

fn count_generic(v: &Verdict, t: LocalType) -> usize {
    v.points.iter().filter(|p| p.generic == t).count()
}

/// No affine critical points but nonempty atypical set, matched against the known cases.
pub fn broughton_check(r: &GlobalReport) -> CaseCheck {
    let v = &r.verdict;
    if v.class_tag == ClassTag::NotB {
        return CaseCheck::no();
    }
    let holds = r.mu_affine == Some(0) && r.atyp.critical_values.is_none() && !r.atyp.is_empty();
    if !holds {
        return CaseCheck::no();
    }
    let sp = specials(v);
    let has = |t: LocalType| sp.contains(&t);
    let case = match v.cubic_type {
        CubicType::Cuspidal if has(LocalType::D(5)) || has(LocalType::E(6)) => "(i)",
        CubicType::ConicTangent if has(LocalType::D(5)) => "(ii)",
        CubicType::ConicChord if has(LocalType::A(5)) && count_generic(v, LocalType::A(1)) == 1 => "(iii)",
        CubicType::Triangle if has(LocalType::A(3)) && count_generic(v, LocalType::A(1)) == 2 => "(iv)",
        CubicType::DoubleLine if has(LocalType::D(5)) => "(v)",
        _ => UNLISTED,
    };
    CaseCheck {
        holds,
        case: Some(case.to_string()),
    }
}

/// `lambda = 0` and no affine critical points, matched against the known cases.
pub fn global_fibration_check(r: &GlobalReport) -> CaseCheck {
    let v = &r.verdict;
    if v.class_tag == ClassTag::NotB {
        return CaseCheck::no();
    }
    let holds = v.lambda_total == 0 && r.mu_affine == Some(0) && r.atyp.critical_values.is_none();
    if !holds {
        return CaseCheck::no();
    }
    let has = |t: LocalType| count_generic(v, t) > 0;
    let case = match v.cubic_type {
        CubicType::ConicTangent if has(LocalType::D(5)) => "(i)",
        CubicType::ThreeLines if has(LocalType::D(4)) || has(LocalType::A(4)) => "(ii)",
        CubicType::DoubleLine if has(LocalType::A(4)) || has(LocalType::D(5)) => "(iii)",
        _ => UNLISTED,
    };
    CaseCheck {
        holds,
        case: Some(case.to_string()),
    }
}

/// Computes the global invariants around a verdict.
///
/// An affine critical set that is not finite puts a non-isolated singularity on
/// some fiber, so the verdict moves outside the B class.
pub fn global_report(f: &Poly<Rat>, mut verdict: Verdict) -> Result<GlobalReport, InvariantError> {
    let mu_affine = affine_milnor_total(f)?;
    if mu_affine.is_none() && verdict.class_tag != ClassTag::NotB {
        verdict.class_tag = ClassTag::NotB;
        verdict.non_isolated = true;
        verdict.mu_table = None;
        verdict.b2_table = None;
        verdict
            .findings
            .push("affine critical set is not finite; some fiber has a non-isolated singularity".into());
    }
    let critical = match mu_affine {
        Some(0) => None,
        _ => critical_values(f)?,
    };
    let atyp = Atyp {
        critical_values: critical,
        jump_loci: verdict
            .events
            .iter()
            .map(|e| e.t_locus.clone())
            .collect(),
    };
    let b2 = match (verdict.non_isolated, verdict.b2_formula) {
        (false, Some(b)) if b >= 0 => Some(b as u32),
        _ => None,
    };
    let mut r = GlobalReport {
        verdict,
        mu_affine,
        atyp,
        b2,
        broughton: CaseCheck::no(),
        global_fibration: CaseCheck::no(),
        findings: Vec::new(),
    };
    r.broughton = broughton_check(&r);
    r.global_fibration = global_fibration_check(&r);
    let v = &r.verdict;
    if !v.non_isolated {
        if let Some(mu) = v.mu_table {
            if r.mu_affine != Some(mu) {
                r.findings.push(format!(
                    "affine Milnor number {} differs from the tabulated mu = {mu}",
                    r.mu_affine.map_or("infinite".to_string(), |m| m.to_string())
                ));
            }
        }
    }
    for (name, c) in [("Broughton", &r.broughton), ("global fibration", &r.global_fibration)] {
        if c.case.as_deref() == Some(UNLISTED) {
            r.findings.push(format!("{name} instance outside the listed cases"));
        }
    }
    if r.global_fibration.holds && !r.atyp.is_empty() {
        r.findings.push("global fibration with a nonempty atypical set".into());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::XNAMES;

    fn p(s: &str) -> Poly<Rat> {
        parse_poly(s, &XNAMES[..3]).unwrap()
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(chi_smooth(2, 3).unwrap(), 0);
        assert_eq!(chi_smooth(3, 3).unwrap(), 9);
        assert_eq!(chi_smooth(1, 2).unwrap(), 2);
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(b2_f(1, &[(2, 1)]).unwrap(), (5, 4));
        assert_eq!(b2_f(0, &[]).unwrap(), (8, 8));
        assert_eq!(b2_f(0, &[(4, 4)]).unwrap().0, 0);
        assert_eq!(b2_b(2, 3).unwrap(), 3);
        assert_eq!(b2_b(4, 2).unwrap(), 2);
        assert_eq!(b2_b(5, 3).unwrap(), 0);
        assert!(b2_f(0, &[(5, 4)]).is_err());
    }

    #[test]
    fn betti_defects() {
        let dl = delta_chi_infinity(CubicType::DoubleLine).unwrap();
        let tl = delta_chi_infinity(CubicType::TripleLine).unwrap();
        assert_eq!((dl, tl), (-3, -2));
        for k in 1..=4 {
            assert_eq!(betti_defect(1 + k, dl, 8 - (k + 4)).unwrap(), 1 + k as i64 + 3);
        }
        assert_eq!(betti_defect(4, tl, 2).unwrap(), 6);
        assert!(betti_defect(4, tl, 3).is_err());
    }

    #[test]
    fn affine_milnor_numbers() {
        assert_eq!(affine_milnor_total(&p("x0^3 + x1^3 + x2^3 - 3*x0 - 3*x1 - 3*x2")).unwrap(), Some(8));
        assert_eq!(affine_milnor_total(&p("x0 + x1^2 + x2^2")).unwrap(), Some(0));
        assert_eq!(affine_milnor_total(&p("x0^2*x1")).unwrap(), None);
    }

    #[test]
    fn critical_value_polynomials() {
        assert_eq!(critical_values(&p("x0^2 + x1^2 + x2^2")).unwrap().unwrap().render("w"), "w");
        assert_eq!(critical_values(&p("x0^3 - 3*x0 + x1^2 + x2^2")).unwrap().unwrap().render("w"), "w^2 - 4");
        assert_eq!(critical_values(&p("x1 - x0^3 + x1^2*x2")).unwrap(), None);
    }
}
