//! The embedded table file and its parser.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cubic::CubicType;
use crate::germ::LocalType;
use crate::parse::{parse_terms, Term};
use crate::rat::Rat;
use crate::unipoly::UniPoly;

/// The table file shipped with the library, dumped verbatim by `tables-dump`.
pub const TABLE_DATA: &str = include_str!("../../data/tables.dat");

/// Format version the parser understands.
pub const FORMAT_VERSION: u32 = 1;

/// Variables of condition and recipe polynomials.
pub const COND_VARS: [&str; 10] = ["a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "t"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("table data line {line}: {message}")]
pub struct TableFormatError {
    pub line: usize,
    pub message: String,
}

/// A polynomial in `a0..a8` and `t`, kept with its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct CondPoly {
    text: String,
    terms: Vec<Term>,
}

impl CondPoly {
    pub fn parse(text: &str) -> Result<Self, String> {
        let terms = parse_terms(text, &COND_VARS).map_err(|e| format!("{e} in '{text}'"))?;
        Ok(CondPoly {
            text: text.trim().to_string(),
            terms,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn involves_t(&self) -> bool {
        self.terms.iter().any(|(_, e)| e[9] > 0)
    }

    /// Substitutes the coefficients, leaving a polynomial in `t`.
    pub fn eval_t(&self, a: &[Rat; 9]) -> UniPoly<Rat> {
        let deg = self.terms.iter().map(|(_, e)| e[9] as usize).max().unwrap_or(0);
        let mut c = vec![Rat::zero(); deg + 1];
        for (k, e) in &self.terms {
            let mut v = k.clone();
            for i in 0..9 {
                if e[i] > 0 {
                    v = v * a[i].pow(e[i] as i32);
                }
            }
            let j = e[9] as usize;
            c[j] = &c[j] + &v;
        }
        UniPoly::new(c)
    }

    /// Value at the coefficients; the polynomial must not involve `t`.
    pub fn eval(&self, a: &[Rat; 9]) -> Rat {
        debug_assert!(!self.involves_t());
        self.eval_t(a).coeff(0)
    }
}

impl fmt::Display for CondPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Behaviour of one point at infinity across the family of fibers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeSpec {
    /// The same type on every fiber.
    Fixed(LocalType),
    /// `generic` away from the roots of the row recipe, `special` on them.
    Jump { generic: LocalType, special: LocalType },
}

impl TypeSpec {
    pub fn generic(&self) -> LocalType {
        match *self {
            TypeSpec::Fixed(t) => t,
            TypeSpec::Jump { generic, .. } => generic,
        }
    }

    pub fn special(&self) -> Option<LocalType> {
        match *self {
            TypeSpec::Fixed(_) => None,
            TypeSpec::Jump { special, .. } => Some(special),
        }
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeSpec::Fixed(t) => write!(f, "{t}"),
            TypeSpec::Jump { generic, special } => write!(f, "{generic}>{special}"),
        }
    }
}

/// One row of a classification table.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub table: u8,
    pub label: String,
    pub zero: Vec<CondPoly>,
    pub nonzero: Vec<CondPoly>,
    pub points: Vec<(String, TypeSpec)>,
    pub lambda: Option<u32>,
    pub mu: Option<u32>,
    pub b2: Option<u32>,
    pub locus: Option<CondPoly>,
    /// A rule for the point `Q` alone rather than a printed row.
    pub point_rule: bool,
    /// Line number in the data file.
    pub line: usize,
}

impl TableRow {
    /// Identifier such as `T1/A2>A3`.
    pub fn id(&self) -> String {
        let q = if self.point_rule { "Q" } else { "" };
        format!("T{}{q}/{}", self.table, self.label)
    }

    pub fn cubic_type(&self) -> CubicType {
        table_cubic_type(self.table)
    }

    /// Exact evaluation of the row conditions.
    pub fn matches(&self, a: &[Rat; 9]) -> bool {
        self.zero.iter().all(|c| c.eval(a).is_zero()) && self.nonzero.iter().all(|c| !c.eval(a).is_zero())
    }

    /// True when no point is ever a non-isolated singularity.
    pub fn is_isolated(&self) -> bool {
        self.points.iter().all(|(_, s)| {
            s.generic().is_isolated() && s.special().map_or(true, |t| t.is_isolated())
        })
    }

    pub fn spec_for(&self, label: &str) -> Option<TypeSpec> {
        self.points.iter().find(|(l, _)| l == label).map(|(_, s)| *s)
    }
}

/// Cubic type handled by a table.
pub fn table_cubic_type(table: u8) -> CubicType {
    match table {
        1 => CubicType::Nodal,
        2 => CubicType::Cuspidal,
        3 => CubicType::ConicTangent,
        4 => CubicType::ThreeLines,
        5 => CubicType::ConicChord,
        6 => CubicType::Triangle,
        7 => CubicType::DoubleLine,
        8 => CubicType::TripleLine,
        _ => panic!("no table {table}"),
    }
}

/// Table number for a cubic type; the general type has none.
pub fn table_for(ct: CubicType) -> Option<u8> {
    (1..=8).find(|&k| table_cubic_type(k) == ct)
}

fn parse_list(field: &str, line: usize) -> Result<Vec<CondPoly>, TableFormatError> {
    let field = field.trim();
    if field == "-" {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|s| CondPoly::parse(s).map_err(|message| TableFormatError { line, message }))
        .collect()
}

fn parse_count(field: &str, line: usize) -> Result<Option<u32>, TableFormatError> {
    match field.trim() {
        "*" | "-" => Ok(None),
        s => s.parse().map(Some).map_err(|_| TableFormatError {
            line,
            message: format!("bad count '{s}'"),
        }),
    }
}

fn parse_points(field: &str, line: usize) -> Result<Vec<(String, TypeSpec)>, TableFormatError> {
    let err = |message: String| TableFormatError { line, message };
    field
        .split(',')
        .map(|item| {
            let (label, spec) = item.split_once('=').ok_or_else(|| err(format!("bad point '{item}'")))?;
            let ty = |s: &str| s.parse::<LocalType>().map_err(|e| err(e.to_string()));
            let spec = match spec.split_once('>') {
                Some((g, s)) => TypeSpec::Jump {
                    generic: ty(g)?,
                    special: ty(s)?,
                },
                None => TypeSpec::Fixed(ty(spec)?),
            };
            Ok((label.trim().to_string(), spec))
        })
        .collect()
}

/// Parses the table file format.
pub fn parse_tables(text: &str) -> Result<Vec<TableRow>, TableFormatError> {
    let mut rows = Vec::new();
    let mut version = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if let Some(v) = s.strip_prefix("# format-version:") {
            version = v.trim().parse::<u32>().ok();
            continue;
        }
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split('|').collect();
        if fields.len() != 9 {
            return Err(TableFormatError {
                line,
                message: format!("expected 9 fields, found {}", fields.len()),
            });
        }
        let id = fields[0].trim();
        let point_rule = id.ends_with('Q');
        let table = id
            .strip_prefix('T')
            .map(|k| k.trim_end_matches('Q'))
            .and_then(|k| k.parse::<u8>().ok())
            .filter(|k| (1..=8).contains(k))
            .ok_or_else(|| TableFormatError {
                line,
                message: format!("bad table id '{}'", fields[0].trim()),
            })?;
        let locus = match fields[8].trim() {
            "-" => None,
            s => Some(CondPoly::parse(s).map_err(|message| TableFormatError { line, message })?),
        };
        rows.push(TableRow {
            table,
            label: fields[1].trim().to_string(),
            zero: parse_list(fields[2], line)?,
            nonzero: parse_list(fields[3], line)?,
            points: parse_points(fields[4], line)?,
            lambda: parse_count(fields[5], line)?,
            mu: parse_count(fields[6], line)?,
            b2: parse_count(fields[7], line)?,
            locus,
            point_rule,
            line,
        });
    }
    if version != Some(FORMAT_VERSION) {
        return Err(TableFormatError {
            line: 1,
            message: "missing or unsupported format-version".into(),
        });
    }
    Ok(rows)
}

fn all_records() -> &'static (Vec<TableRow>, Vec<TableRow>) {
    static RECORDS: OnceLock<(Vec<TableRow>, Vec<TableRow>)> = OnceLock::new();
    RECORDS.get_or_init(|| {
        parse_tables(TABLE_DATA)
            .expect("embedded table data is well formed")
            .into_iter()
            .partition(|r| !r.point_rule)
    })
}

/// The printed rows of the embedded tables.
pub fn rows() -> &'static [TableRow] {
    &all_records().0
}

/// Point rules of the embedded tables.
pub fn point_rules() -> &'static [TableRow] {
    &all_records().1
}

/// Printed rows of one table in file order.
pub fn table_rows(table: u8) -> impl Iterator<Item = &'static TableRow> {
    rows().iter().filter(move |r| r.table == table)
}

/// Point rules of one table in file order.
pub fn table_point_rules(table: u8) -> impl Iterator<Item = &'static TableRow> {
    point_rules().iter().filter(move |r| r.table == table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_parse() {
        let rows = rows();
        assert_eq!(rows.len(), 58);
        for k in 1..=8 {
            assert!(table_rows(k).count() >= 3);
        }
        let isolated = rows.iter().filter(|r| r.is_isolated()).count();
        assert_eq!(isolated, 49);
    }

    #[test]
    fn recipe_evaluation() {
        let row = rows().iter().find(|r| r.id() == "T1/A2>A3").unwrap();
        let a: [Rat; 9] = [1, 1, 1, 0, 0, 1, 0, 1, 0].map(Rat::from_int);
        assert!(row.matches(&a));
        let locus = row.locus.as_ref().unwrap().eval_t(&a);
        // t - gamma with gamma = -4
        assert_eq!(locus.render("t"), "t + 4");
    }

    #[test]
    fn format_errors_are_located() {
        let bad = "# format-version: 1\nT9 | x | - | - | Q=A0 | 0 | 0 | 0 | -\n";
        assert_eq!(parse_tables(bad).unwrap_err().line, 2);
        assert!(parse_tables("T1 | A0 | - | a8 | Q=A0 | 0 | 7 | 7 | -\n").is_err());
    }
}
