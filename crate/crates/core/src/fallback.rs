//! Oracle-only classification for inputs no table row covers.
//!
//! Points at infinity come from the singular locus of the cubic part, generic
//! types from the germ oracle at random fiber values, and special fibers from the
//! table loci evaluated on the instance. `b2` comes from the counting formula and
//! `mu = b2 - lambda`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::atinf::{analyze_at, locus_values, random_value, AtInfError};
use crate::cubic::{projective_points, render_point, singular_locus, CubicType};
use crate::field::ArithError;
use crate::germ::{LocalType, OracleError};
use crate::linalg;
use crate::numfield::{AlgNum, NumberField};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::tables::{
    b2_formula, class_of, curve_milnor, normalize_point, pull_back_locus, table_for, table_rows, JumpEvent,
    PointReport, ReducedForm, TableError, Verdict,
};
use crate::unipoly::UniPoly;

/// Seed of the generic fiber samples used by the oracle-only path.
pub const FALLBACK_SEED: u64 = 0x0f1b_e25e;

/// Points at infinity with their curve Milnor numbers, in input coordinates.
fn points_at_infinity(f: &Poly<Rat>, ct: CubicType) -> Result<Vec<(Vec<AlgNum>, u32)>, TableError> {
    let f3 = f.homogeneous_part(3);
    let sl = singular_locus(&f3)?;
    if ct.is_reduced() {
        return sl
            .points
            .into_iter()
            .map(|p| {
                let mu = curve_milnor(&f3, &p.coords)?.unwrap_or(0);
                Ok((normalize_point(&p.coords), mu))
            })
            .collect();
    }
    let l = sl
        .line
        .ok_or_else(|| TableError::Inconsistent("non-reduced cubic without a singular line".into()))?;
    let f2 = f.homogeneous_part(2);
    // Restrict f2 to the line through a basis of its direction space.
    let basis = linalg::kernel(&vec![l.to_vec()], 3)?;
    let (u, v) = (&basis[0], &basis[1]);
    let on_line = |s: &Rat| -> Vec<Rat> { (0..3).map(|i| &u[i] + &(s * &v[i])).collect() };
    let restricted_zero = (0..3).all(|k| f2.eval(&on_line(&Rat::from_int(k))).is_zero()) && f2.eval(v).is_zero();
    if restricted_zero {
        return Err(TableError::NotB("f2 vanishes on the singular line of the cubic part".into()));
    }
    let mut lin = Poly::zero(3);
    for (i, c) in l.iter().enumerate() {
        lin = lin.plus(&Poly::var(3, i).scale(c));
    }
    let sol = projective_points(&[lin, f2])?;
    if let Some(u) = sol.unsupported {
        return Err(TableError::UnsupportedExtension {
            minpoly: u.render("s"),
        });
    }
    let mut out = Vec::new();
    for p in sol.points {
        let mu = curve_milnor(&f3, &p)?.unwrap_or(0);
        out.push((normalize_point(&p), mu));
    }
    Ok(out)
}

fn field_of(p: &[AlgNum]) -> Option<Arc<NumberField>> {
    p.iter().find_map(|c| c.field().cloned())
}

/// Candidate special fiber values: each row locus of the table and the fiber `t = 0`, in input coordinates.
fn candidate_loci(rf: Option<&ReducedForm>) -> Vec<UniPoly<Rat>> {
    let Some(rf) = rf else {
        return Vec::new();
    };
    let (s, o) = (&rf.applied.scale, &rf.applied.offset);
    let mut out: Vec<UniPoly<Rat>> = vec![pull_back_locus(&UniPoly::x(), s, o)];
    if let Some(table) = table_for(rf.cubic_type) {
        for row in table_rows(table) {
            if let Some(recipe) = &row.locus {
                let l = recipe.eval_t(&rf.coeffs);
                if l.degree().unwrap_or(0) >= 1 {
                    let p = pull_back_locus(&l, s, o);
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn oracle_error(e: AtInfError) -> TableError {
    match e {
        AtInfError::Tower { point, value } => TableError::UnsupportedExtension {
            minpoly: format!("{point} with {value}"),
        },
        AtInfError::Oracle(o) => TableError::Inconsistent(o.to_string()),
    }
}

/// Rank of a local type for the semicontinuity order, non-isolated last.
fn rank(t: LocalType) -> u32 {
    t.milnor().unwrap_or(u32::MAX)
}

/// Verdict from the oracle alone.
pub fn oracle_verdict(
    f: &Poly<Rat>,
    ct: CubicType,
    rf: Option<&ReducedForm>,
    mu_affine: Option<u32>,
    reason: &str,
) -> Result<Verdict, TableError> {
    let f = f.with_nvars(3);
    let mut findings = vec![format!("row not tabulated: {reason}")];
    let pts = points_at_infinity(&f, ct)?;
    let mut rng = ChaCha8Rng::seed_from_u64(FALLBACK_SEED);
    let loci = candidate_loci(rf);
    let on_locus = |t: &Rat| loci.iter().any(|l| l.eval(t).is_zero());
    let samples: Vec<Rat> = (0..3).map(|_| random_value(&mut rng, on_locus)).collect();
    let oracle = |p: &[AlgNum], t: &AlgNum| -> Result<LocalType, TableError> {
        analyze_at(&f, p, t).map(|g| g.local_type).map_err(oracle_error)
    };
    let mut points = Vec::new();
    for (i, (p, mu_curve)) in pts.iter().enumerate() {
        let types: Vec<LocalType> = samples
            .iter()
            .map(|t| oracle(p, &AlgNum::rational(t.clone())))
            .collect::<Result<_, _>>()?;
        let generic = *types.iter().min_by_key(|t| rank(**t)).expect("three samples");
        if types.iter().any(|t| *t != generic) {
            findings.push(format!("generic samples disagree at {}", render_point(p)));
        }
        let reduced = match rf {
            Some(r) => normalize_point(&r.applied.map_direction(p)),
            None => p.clone(),
        };
        points.push(PointReport {
            label: format!("P{}", i + 1),
            display: render_point(p),
            coords: p.clone(),
            reduced,
            generic,
            mu_curve: *mu_curve,
        });
    }
    let mut events: Vec<JumpEvent> = Vec::new();
    let mut values = Vec::new();
    for l in &loci {
        for (tau, fac) in locus_values(l) {
            if !values.iter().any(|(_, g): &(AlgNum, UniPoly<Rat>)| *g == fac) {
                values.push((tau, fac));
            }
        }
    }
    for pr in &points {
        for (tau, fac) in &values {
            if let (Some(a), Some(b)) = (field_of(&pr.coords), tau.field()) {
                if a.modulus() != b.modulus() {
                    findings.push(format!(
                        "fiber {} at {} needs a field tower; not examined",
                        fac.render("t"),
                        pr.display
                    ));
                    continue;
                }
            }
            let special = match analyze_at(&f, &pr.coords, tau) {
                Ok(g) => g.local_type,
                Err(AtInfError::Oracle(OracleError::Arith(ArithError::ZeroDivisor { .. }))) => {
                    findings.push(format!("special values {} not separated", fac.render("t")));
                    continue;
                }
                Err(e) => return Err(oracle_error(e)),
            };
            if rank(special) > rank(pr.generic) {
                events.push(JumpEvent {
                    point: pr.label.clone(),
                    t_locus: fac.clone(),
                    generic: pr.generic,
                    special,
                    jump: match (pr.generic.milnor(), special.milnor()) {
                        (Some(g), Some(s)) => Some(s - g),
                        _ => None,
                    },
                });
            }
        }
    }
    let non_isolated = points.iter().any(|p| !p.generic.is_isolated()) || events.iter().any(|e| e.jump.is_none());
    let lambda: u32 = events
        .iter()
        .filter_map(|e| e.jump.map(|j| j * e.fiber_count()))
        .sum();
    let b2f = b2_formula(ct, &points);
    if ct.is_reduced() {
        let chi: u32 = points.iter().map(|p| p.mu_curve).sum();
        if chi as i64 != ct.chi_infinity() {
            findings.push(format!(
                "curve Milnor numbers sum to {chi}, expected {}",
                ct.chi_infinity()
            ));
        }
    }
    let (mu, b2) = match (non_isolated, b2f) {
        (false, Some(b2)) => {
            let mu = b2 - lambda as i64;
            if mu < 0 {
                return Err(TableError::Inconsistent(format!(
                    "oracle-only path gives b2 = {b2} below lambda = {lambda}"
                )));
            }
            if let Some(m) = mu_affine {
                if m as i64 != mu {
                    findings.push(format!(
                        "affine Milnor number {m} differs from b2 - lambda = {mu}; jump loci may be incomplete"
                    ));
                }
            }
            (Some(mu as u32), Some(b2 as u32))
        }
        _ => (None, None),
    };
    Ok(Verdict {
        class_tag: class_of(ct, non_isolated),
        cubic_type: ct,
        row: None,
        points,
        events,
        lambda_total: lambda,
        mu_table: mu,
        b2_table: b2,
        b2_formula: b2f,
        non_isolated,
        oracle_only: true,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::normalizing_map;
    use crate::parse::parse_poly;
    use crate::poly::XNAMES;
    use crate::tables::reduce_coefficients;

    #[test]
    fn oracle_path_reproduces_a_tabulated_row() {
        let f = parse_poly("x0^3 + x1^3 + x0*x1*x2 + x0*x2 + x1*x2 + x2 + x0 + x1", &XNAMES[..3]).unwrap();
        let nm = normalizing_map(&f.homogeneous_part(3)).unwrap();
        let rf = reduce_coefficients(&f, &nm).unwrap();
        let v = oracle_verdict(&f, CubicType::Nodal, Some(&rf), Some(4), "test").unwrap();
        assert_eq!(v.points.len(), 1);
        assert_eq!(v.points[0].generic, LocalType::A(2));
        assert_eq!(v.events.len(), 1);
        assert_eq!(v.events[0].special, LocalType::A(3));
        assert_eq!((v.lambda_total, v.mu_table, v.b2_table), (1, Some(4), Some(5)));
    }

    #[test]
    fn conjugate_points_on_the_double_line() {
        // f2 on x1 = 0 is x2^2 - 2 x0^2
        let f = parse_poly("x0*x1^2 + x2^2 - 2*x0^2 + x1", &XNAMES[..3]).unwrap();
        let v = oracle_verdict(&f, CubicType::DoubleLine, None, None, "test").unwrap();
        assert_eq!(v.points.len(), 2);
        assert!(v.points.iter().all(|p| p.generic == LocalType::A(1)));
        assert_eq!(v.b2_table, Some(3));
    }
}
