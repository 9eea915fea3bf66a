//! Oracle cross-check of a verdict.
//!
//! Every claimed generic type is checked at random rational fiber values, every
//! claimed special type at each root of its jump locus, the affine Milnor number
//! against `mu`, and the set of singular points at infinity against an
//! independent solve of `grad f3 = f2 = 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atinf::{analyze_at, locus_values, random_value, AtInfError};
use crate::cubic::projective_points;
use crate::germ::LocalType;
use crate::numfield::AlgNum;
use crate::pipeline::PipelineError;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::tables::{ClassTag, Verdict};

/// Number of random generic fiber values per point.
pub const GENERIC_SAMPLES: usize = 3;

/// One oracle run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub point: String,
    /// Fiber value: a rational or `root of <factor>`.
    pub t: String,
    pub expected: LocalType,
    pub observed: LocalType,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Affine Milnor number against the verdict's `mu`, when both are defined.
    pub mu_agree: Option<bool>,
    /// Independent count of singular points at infinity against the verdict.
    pub point_count_agree: Option<bool>,
    /// Fibers that could not be examined, with the reason.
    pub skipped: Vec<String>,
    pub failures: Vec<String>,
}

fn run(f: &Poly<Rat>, p: &[AlgNum], t: &AlgNum) -> Result<Option<LocalType>, PipelineError> {
    match analyze_at(f, p, t) {
        Ok(g) => Ok(Some(g.local_type)),
        Err(AtInfError::Tower { .. }) => Ok(None),
        Err(AtInfError::Oracle(e)) => Err(PipelineError::Inconsistent(e.to_string())),
    }
}

/// Number of points at infinity that are singular on every fiber closure.
fn independent_point_count(f: &Poly<Rat>) -> Result<Option<usize>, PipelineError> {
    let f3 = f.homogeneous_part(3);
    let mut gens = f3.gradient();
    gens.push(f.homogeneous_part(2));
    gens.retain(|g| !g.is_zero());
    match projective_points(&gens) {
        Ok(sol) => Ok(Some(sol.count)),
        // Positive dimensional: a curve of singular points, nothing to count.
        Err(_) => Ok(None),
    }
}

/// Cross-checks the verdict with the germ oracle.
pub fn verify(f: &Poly<Rat>, v: &Verdict, mu_affine: Option<u32>, seed: u64) -> Result<Verification, PipelineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let loci: Vec<_> = v.events.iter().map(|e| e.t_locus.clone()).collect();
    let avoid = |t: &Rat| loci.iter().any(|l| l.eval(t).is_zero());
    let samples: Vec<Rat> = (0..GENERIC_SAMPLES).map(|_| random_value(&mut rng, avoid)).collect();
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for p in &v.points {
        for t in &samples {
            if let Some(obs) = run(f, &p.coords, &AlgNum::rational(t.clone()))? {
                checks.push(Check {
                    point: p.label.clone(),
                    t: t.to_string(),
                    expected: p.generic,
                    observed: obs,
                    agree: obs == p.generic,
                });
            }
        }
    }
    for e in &v.events {
        let Some(p) = v.points.iter().find(|p| p.label == e.point) else {
            return Err(PipelineError::Inconsistent(format!("jump at unknown point {}", e.point)));
        };
        for (tau, fac) in locus_values(&e.t_locus) {
            let t = match fac.degree() {
                Some(1) => tau.to_string(),
                _ => format!("root of {}", fac.render("t")),
            };
            match run(f, &p.coords, &tau)? {
                Some(obs) => checks.push(Check {
                    point: p.label.clone(),
                    t,
                    expected: e.special,
                    observed: obs,
                    agree: obs == e.special,
                }),
                None => skipped.push(format!("{t} at {}: point and value need a field tower", p.label)),
            }
        }
    }
    let mut failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.agree)
        .map(|c| format!("{} at t = {}: expected {}, oracle {}", c.point, c.t, c.expected, c.observed))
        .collect();
    let mu_agree = match (v.class_tag, v.mu_table) {
        (ClassTag::NotB, _) | (_, None) => None,
        (_, Some(mu)) => Some(mu_affine == Some(mu)),
    };
    if mu_agree == Some(false) {
        failures.push(format!(
            "affine Milnor number {:?} differs from mu = {:?}",
            mu_affine, v.mu_table
        ));
    }
    let claimed = v.points.iter().filter(|p| p.generic != LocalType::A(0)).count();
    let point_count_agree = independent_point_count(f)?.map(|n| n == claimed);
    if point_count_agree == Some(false) {
        failures.push(format!("independent solve disagrees with {claimed} singular points at infinity"));
    }
    Ok(Verification {
        seed,
        passed: failures.is_empty(),
        checks,
        mu_agree,
        point_count_agree,
        skipped,
        failures,
    })
}
