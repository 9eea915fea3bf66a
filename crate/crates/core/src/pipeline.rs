//! The full classification pipeline and its serializable report.
//!
//! Parse, classify the cubic part, normalize, reduce, look up the table row (or
//! fall back to the oracle), compute global invariants and optionally verify
//! every claim with the germ oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cubic::{classify_cubic, normalizing_map, CubicError, CubicType, Normalization};
use crate::fallback::oracle_verdict;
use crate::invariants::{global_report, CaseCheck, InvariantError};
use crate::parse::{parse_poly, ParseError};
use crate::poly::{Poly, XNAMES};
use crate::rat::{format_sig, Rat};
use crate::tables::{class_of, general_verdict, reduce_coefficients, row_overridden, table_classify, ClassTag, ReducedForm, TableError, Verdict};
use crate::unipoly::UniPoly;
use crate::verify::{verify, Verification};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits of decimal renderings.
pub const DISPLAY_DIGITS: usize = 6;

pub const APPROX_NOTE: &str = "decimal values are approximate; the polynomials are exact";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("input must have total degree 3 in x0, x1, x2: {0}")]
    Shape(String),
    #[error("unsupported algebraic extension: {0}")]
    UnsupportedExtension(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl PipelineError {
    /// Process exit code for the error.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse(_) | PipelineError::Shape(_) => 1,
            PipelineError::UnsupportedExtension(_) => 3,
            PipelineError::Inconsistent(_) => 4,
        }
    }
}

impl From<TableError> for PipelineError {
    fn from(e: TableError) -> Self {
        match e {
            TableError::UnsupportedExtension { minpoly } => PipelineError::UnsupportedExtension(minpoly),
            TableError::Cubic(c) => c.into(),
            other => PipelineError::Inconsistent(other.to_string()),
        }
    }
}

impl From<CubicError> for PipelineError {
    fn from(e: CubicError) -> Self {
        match e {
            CubicError::Shape => PipelineError::Shape("cubic part is not a nonzero ternary cubic".into()),
            CubicError::UnsupportedExtension { minpoly } => PipelineError::UnsupportedExtension(minpoly),
            other => PipelineError::Inconsistent(other.to_string()),
        }
    }
}

impl From<InvariantError> for PipelineError {
    fn from(e: InvariantError) -> Self {
        PipelineError::Inconsistent(e.to_string())
    }
}

/// Options of one classification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    pub verify: bool,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { verify: false, seed: 1 }
    }
}

/// Reduced coordinates of the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedSection {
    pub polynomial: String,
    pub coeffs: BTreeMap<String, Rat>,
    pub map: crate::affine::AffineMap,
    pub permutation: [usize; 3],
}

impl ReducedSection {
    fn new(rf: &ReducedForm) -> Self {
        ReducedSection {
            polynomial: rf.f_reduced.render(&XNAMES[..3]),
            coeffs: rf
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("a{i}"), c.clone()))
                .collect(),
            map: rf.applied.clone(),
            permutation: rf.permutation,
        }
    }
}

/// A polynomial whose roots are fiber values, with a decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueSet {
    /// Label of the point at infinity, absent for critical values.
    pub point: Option<String>,
    pub polynomial: String,
    pub exact: UniPoly<Rat>,
    pub approx_real_roots: Vec<String>,
}

impl ValueSet {
    fn new(point: Option<String>, p: &UniPoly<Rat>) -> Self {
        ValueSet {
            point,
            polynomial: p.render("t"),
            exact: p.clone(),
            approx_real_roots: p
                .approx_real_roots()
                .into_iter()
                .map(|x| format_sig(x, DISPLAY_DIGITS))
                .collect(),
        }
    }
}

/// The atypical values of `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtypicalSection {
    /// Critical values `f(Sing f)`; absent when there are no critical points.
    pub critical_values: Option<ValueSet>,
    /// Values contributed by singularities at infinity.
    pub at_infinity: Vec<ValueSet>,
    pub note: String,
}

fn real_roots(v: &ValueSet) -> String {
    if v.approx_real_roots.is_empty() {
        "no real roots".into()
    } else {
        format!("approx. {}", v.approx_real_roots.join(", "))
    }
}

/// Everything known about one input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub input: String,
    pub polynomial: String,
    pub cubic_type: CubicType,
    pub normalization: Option<Normalization>,
    pub reduced: Option<ReducedSection>,
    pub verdict: Verdict,
    /// `None` when the affine critical set is not finite.
    pub mu_affine: Option<u32>,
    pub b2: Option<u32>,
    pub atypical: AtypicalSection,
    pub broughton: CaseCheck,
    pub global_fibration: CaseCheck,
    pub verification: Option<Verification>,
    pub findings: Vec<String>,
}

impl Report {
    /// Process exit code: 0 success, 2 outside the B class, 4 failed verification.
    pub fn exit_code(&self) -> i32 {
        if self.verification.as_ref().is_some_and(|v| !v.passed) {
            4
        } else if self.verdict.class_tag == ClassTag::NotB {
            2
        } else {
            0
        }
    }

    /// Human readable summary.
    pub fn render_text(&self) -> String {
        let v = &self.verdict;
        let mut out = String::new();
        let opt = |x: Option<u32>| x.map_or("undefined".to_string(), |n| n.to_string());
        out.push_str(&format!("polynomial   {}\n", self.polynomial));
        out.push_str(&format!("cubic type   {}\n", self.cubic_type));
        if self.cubic_type == CubicType::General {
            out.push_str("general at infinity: no singular points at infinity\n");
        }
        if let Some(r) = &self.reduced {
            out.push_str(&format!("reduced form {}\n", r.polynomial));
        }
        out.push_str(&format!("class        {}\n", v.class_tag));
        match (&v.row, v.oracle_only) {
            (Some(row), _) => out.push_str(&format!("table row    {row}\n")),
            (None, true) => out.push_str("table row    none (oracle-only classification)\n"),
            _ => {}
        }
        for p in &v.points {
            out.push_str(&format!("point {} {}  generic {}\n", p.label, p.display, p.generic));
        }
        for e in &v.events {
            let jump = e.jump.map_or("inf".to_string(), |j| j.to_string());
            out.push_str(&format!(
                "jump at {}: {} -> {} (+{jump}) on {} = 0\n",
                e.point,
                e.generic,
                e.special,
                e.t_locus.render("t")
            ));
        }
        out.push_str(&format!(
            "lambda = {}, mu = {}, b2 = {}\n",
            v.lambda_total,
            opt(v.mu_table),
            opt(v.b2_table)
        ));
        out.push_str(&format!("affine Milnor number {}\n", opt(self.mu_affine)));
        match &self.atypical.critical_values {
            Some(c) => out.push_str(&format!("critical values: {} = 0 ({})\n", c.polynomial, real_roots(c))),
            None => out.push_str("critical values: none\n"),
        }
        for s in &self.atypical.at_infinity {
            out.push_str(&format!("atypical at infinity: {} = 0 ({})\n", s.polynomial, real_roots(s)));
        }
        let case = |c: &CaseCheck| {
            if c.holds {
                format!("yes {}", c.case.clone().unwrap_or_default())
            } else {
                "no".to_string()
            }
        };
        out.push_str(&format!("Broughton type: {}\n", case(&self.broughton)));
        out.push_str(&format!("global fibration: {}\n", case(&self.global_fibration)));
        if let Some(ver) = &self.verification {
            out.push_str(&format!(
                "verification: {} ({} oracle checks)\n",
                if ver.passed { "PASSED" } else { "FAILED" },
                ver.checks.len()
            ));
            for f in &ver.failures {
                out.push_str(&format!("  failure: {f}\n"));
            }
        }
        for f in &self.findings {
            out.push_str(&format!("finding: {f}\n"));
        }
        out
    }
}

/// Parses and checks the input shape.
pub fn parse_input(text: &str) -> Result<Poly<Rat>, PipelineError> {
    let f = parse_poly(text, &XNAMES[..3])?;
    match f.total_degree() {
        Some(3) => Ok(f),
        d => Err(PipelineError::Shape(format!(
            "total degree is {}",
            d.map_or("undefined".to_string(), |d| d.to_string())
        ))),
    }
}

fn not_b_verdict(ct: CubicType, reason: String) -> Verdict {
    Verdict {
        class_tag: class_of(ct, true),
        cubic_type: ct,
        row: None,
        points: Vec::new(),
        events: Vec::new(),
        lambda_total: 0,
        mu_table: None,
        b2_table: None,
        b2_formula: None,
        non_isolated: true,
        oracle_only: false,
        findings: vec![reason],
    }
}

/// Verdict plus the reduced form used, trying the tables first.
fn verdict_for(
    f: &Poly<Rat>,
    ct: CubicType,
    normalization: &Option<Normalization>,
) -> Result<(Verdict, Option<ReducedForm>), PipelineError> {
    if ct == CubicType::General {
        return Ok((general_verdict(), None));
    }
    let mu_affine = || crate::invariants::affine_milnor_total(f);
    let Some(nm) = normalization else {
        let v = oracle_verdict(f, ct, None, mu_affine()?, "normal form needs irrational coordinates")?;
        return Ok((v, None));
    };
    let rf = match reduce_coefficients(f, nm) {
        Ok(rf) => rf,
        Err(TableError::NotB(reason)) => return Ok((not_b_verdict(ct, reason), None)),
        Err(TableError::NotNormalizable(reason)) => {
            return Ok((oracle_verdict(f, ct, None, mu_affine()?, &reason)?, None));
        }
        Err(e) => return Err(e.into()),
    };
    match table_classify(f, &rf) {
        Ok((v, used)) => match v.row.clone() {
            Some(id) if row_overridden(&id, &used.coeffs) => {
                let mut o = oracle_verdict(f, ct, Some(&used), mu_affine()?, "printed types contradicted by the oracle")?;
                o.row = Some(id);
                o.findings.extend(v.findings);
                Ok((o, Some(used)))
            }
            _ => Ok((v, Some(used))),
        },
        Err(TableError::IncompleteTable { .. }) => {
            let v = oracle_verdict(f, ct, Some(&rf), mu_affine()?, "coefficients match no row")?;
            Ok((v, Some(rf)))
        }
        Err(TableError::NotB(reason)) => Ok((not_b_verdict(ct, reason), Some(rf))),
        Err(e) => Err(e.into()),
    }
}

/// Runs the pipeline on a parsed polynomial.
pub fn classify_poly(f: &Poly<Rat>, input: &str, opts: Options) -> Result<Report, PipelineError> {
    let f = f.with_nvars(3);
    if f.total_degree() != Some(3) {
        return Err(PipelineError::Shape("total degree must be 3".into()));
    }
    let f3 = f.homogeneous_part(3);
    let ct = classify_cubic(&f3)?;
    let normalization = match normalizing_map(&f3) {
        Ok(nm) => Some(nm),
        Err(CubicError::Unavailable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let (verdict, rf) = verdict_for(&f, ct, &normalization)?;
    let gr = global_report(&f, verdict)?;
    let mut findings = gr.verdict.findings.clone();
    findings.extend(gr.findings.iter().cloned());
    let atypical = AtypicalSection {
        critical_values: gr.atyp.critical_values.as_ref().map(|p| ValueSet::new(None, p)),
        at_infinity: gr
            .verdict
            .events
            .iter()
            .map(|e| ValueSet::new(Some(e.point.clone()), &e.t_locus))
            .collect(),
        note: APPROX_NOTE.to_string(),
    };
    let verification = if opts.verify {
        Some(verify(&f, &gr.verdict, gr.mu_affine, opts.seed)?)
    } else {
        None
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        input: input.to_string(),
        polynomial: f.render(&XNAMES[..3]),
        cubic_type: ct,
        normalization,
        reduced: rf.as_ref().map(ReducedSection::new),
        mu_affine: gr.mu_affine,
        b2: gr.b2,
        broughton: gr.broughton,
        global_fibration: gr.global_fibration,
        verdict: gr.verdict,
        atypical,
        verification,
        findings,
    })
}

/// Parses the text and runs the pipeline.
pub fn classify_text(text: &str, opts: Options) -> Result<Report, PipelineError> {
    let f = parse_input(text)?;
    classify_poly(&f, text.trim(), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::LocalType;

    #[test]
    fn worked_example_report() {
        let r = classify_text("x0^3 + x1^3 + x0*x1*x2 + x0*x2 + x1*x2 + x2 + x0 + x1", Options::default()).unwrap();
        assert_eq!(r.verdict.lambda_total, 1);
        assert_eq!(r.verdict.mu_table, Some(4));
        assert_eq!(r.b2, Some(5));
        assert_eq!(r.mu_affine, Some(4));
        assert_eq!(r.atypical.at_infinity[0].approx_real_roots, vec!["-4.00000".to_string()]);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn general_cubic() {
        let r = classify_text("x0^3+x1^3+x2^3+x0*x1*x2", Options::default()).unwrap();
        assert_eq!(r.cubic_type, CubicType::General);
        assert!(r.verdict.points.is_empty());
        assert!(r.render_text().contains("general at infinity"));
    }

    #[test]
    fn broughton_cuspidal() {
        let r = classify_text("x1 - x0^3 + x1^2*x2", Options { verify: true, seed: 7 }).unwrap();
        assert!(r.broughton.holds);
        assert_eq!(r.broughton.case.as_deref(), Some("(i)"));
        assert!(r.atypical.critical_values.is_none());
        assert!(r.verification.as_ref().unwrap().passed, "{:?}", r.verification);
    }

    #[test]
    fn shape_errors() {
        assert_eq!(classify_text("0", Options::default()).unwrap_err().exit_code(), 1);
        assert_eq!(classify_text("x0^4", Options::default()).unwrap_err().exit_code(), 1);
        assert_eq!(classify_text("x3^3", Options::default()).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn not_b_exit_code() {
        let r = classify_text("x0 + x1^2 + x0*x1^2", Options::default()).unwrap();
        assert_eq!(r.verdict.class_tag, ClassTag::NotB);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn report_round_trips() {
        let r = classify_text("x0*x1*x2 + x0 + x1 + x2", Options { verify: true, seed: 3 }).unwrap();
        assert!(r.verdict.points.iter().all(|p| p.generic == LocalType::A(1)));
        let json = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
