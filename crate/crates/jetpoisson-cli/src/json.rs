//! JSON documents for series, maps, bi-fields, integer matrices, and
//! bracket tables, with exact round-trip guarantees.
//!
//! Rational coefficients travel as `"p"` or `"p/q"` strings in lowest terms
//! with a positive denominator; polynomial coefficients travel as explicit
//! monomial lists. Every emitted document re-parses to an equal value.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use jetpoisson_core::bialgebra::BiField;
use jetpoisson_core::classify::IntegerMatrix;
use jetpoisson_core::coeff::{CoeffPoly, Indeterminate, Monomial};
use jetpoisson_core::homspace::{BiVectorOnSpace, JetBiField};
use jetpoisson_core::jetgroup::FormalMap;
use jetpoisson_core::rational;
use jetpoisson_core::{Rational, Series, Truncation};

/// Truncation ring: total-degree cutoff plus per-variable lower bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncDoc {
    pub max_total_degree: i32,
    pub min_exponent: Vec<i32>,
}

/// One monomial factor `[[family, component, index], power]`.
pub type FactorDoc = ((String, u32, Vec<u32>), i32);

/// One term of a polynomial coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTermDoc {
    pub mono: Vec<FactorDoc>,
    pub c: String,
}

/// A polynomial coefficient in jet coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyDoc {
    pub poly: Vec<PolyTermDoc>,
}

/// A coefficient: a rational string or a polynomial document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffDoc {
    Rational(String),
    Poly(PolyDoc),
}

/// One series term: exponent vector and coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub e: Vec<i32>,
    pub c: CoeffDoc,
}

/// A truncated series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub nvars: usize,
    pub trunc: TruncDoc,
    pub terms: Vec<TermDoc>,
}

/// A formal map between coordinate spaces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDoc {
    pub source_dim: usize,
    pub target_dim: usize,
    pub components: Vec<SeriesDoc>,
}

/// An `n × n` bi-field (or bi-vector) with an optional certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiFieldDoc {
    pub dim: usize,
    pub components: Vec<Vec<SeriesDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified_degree: Option<i32>,
}

/// A jet-space bivector: `n × n` components over source-pair variables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JetFieldDoc {
    pub source_dim: usize,
    pub dim: usize,
    pub components: Vec<Vec<SeriesDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified_degree: Option<i32>,
}

/// An integer matrix labeling an orbit representative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub rows: Vec<Vec<i32>>,
}

/// One bracket-table entry `{x^a, x^b}`: 1-based components with
/// multi-indices, and the bracket polynomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDoc {
    pub a: (usize, Vec<i32>),
    pub b: (usize, Vec<i32>),
    pub poly: PolyDoc,
}

/// A bracket table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketsDoc {
    pub pairs: Vec<PairDoc>,
}

// ---------------------------------------------------------------------------
// Core type → document
// ---------------------------------------------------------------------------

fn trunc_to_doc(trunc: &Truncation) -> TruncDoc {
    TruncDoc {
        max_total_degree: trunc.max_total_degree(),
        min_exponent: trunc.min_exponent().to_vec(),
    }
}

pub fn poly_to_doc(poly: &CoeffPoly) -> PolyDoc {
    let mut terms = Vec::new();
    for (monomial, coefficient) in poly.terms() {
        let mono = monomial
            .factors()
            .iter()
            .map(|(ind, power)| {
                (
                    (ind.family.to_string(), ind.component, ind.index.clone()),
                    *power,
                )
            })
            .collect();
        terms.push(PolyTermDoc {
            mono,
            c: rational::format_ratio(coefficient),
        });
    }
    PolyDoc { poly: terms }
}

pub fn series_to_doc(series: &Series<Rational>) -> SeriesDoc {
    SeriesDoc {
        nvars: series.nvars(),
        trunc: trunc_to_doc(series.truncation()),
        terms: series
            .terms()
            .map(|(e, c)| TermDoc {
                e: e.to_vec(),
                c: CoeffDoc::Rational(rational::format_ratio(c)),
            })
            .collect(),
    }
}

pub fn poly_series_to_doc(series: &Series<CoeffPoly>) -> SeriesDoc {
    SeriesDoc {
        nvars: series.nvars(),
        trunc: trunc_to_doc(series.truncation()),
        terms: series
            .terms()
            .map(|(e, c)| TermDoc {
                e: e.to_vec(),
                c: CoeffDoc::Poly(poly_to_doc(c)),
            })
            .collect(),
    }
}

pub fn map_to_doc(map: &FormalMap<Rational>) -> MapDoc {
    MapDoc {
        source_dim: map.source_dim(),
        target_dim: map.target_dim(),
        components: map.components().iter().map(series_to_doc).collect(),
    }
}

pub fn bifield_to_doc(field: &BiField<Rational>) -> BiFieldDoc {
    BiFieldDoc {
        dim: field.dim(),
        components: field
            .components()
            .iter()
            .map(|row| row.iter().map(series_to_doc).collect())
            .collect(),
        certified_degree: Some(field.certified_degree()),
    }
}

pub fn alpha_to_doc(alpha: &BiVectorOnSpace<Rational>) -> BiFieldDoc {
    BiFieldDoc {
        dim: alpha.dim(),
        components: alpha
            .components()
            .iter()
            .map(|row| row.iter().map(series_to_doc).collect())
            .collect(),
        certified_degree: Some(alpha.certified_degree()),
    }
}

pub fn jet_field_to_doc(field: &JetBiField<Rational>) -> JetFieldDoc {
    JetFieldDoc {
        source_dim: field.source_dim(),
        dim: field.target_dim(),
        components: field
            .components()
            .iter()
            .map(|row| row.iter().map(series_to_doc).collect())
            .collect(),
        certified_degree: Some(field.certified_degree()),
    }
}

pub fn matrix_to_doc(matrix: &IntegerMatrix) -> MatrixDoc {
    MatrixDoc {
        n: matrix.dim(),
        rows: matrix.rows().to_vec(),
    }
}

// ---------------------------------------------------------------------------
// Document → core type
// ---------------------------------------------------------------------------

fn rational_from_doc(coeff: &CoeffDoc) -> Result<Rational> {
    match coeff {
        CoeffDoc::Rational(text) => Ok(rational::parse(text)?),
        CoeffDoc::Poly(_) => bail!(
            "polynomial coefficients are output-only; inputs take rational \
             coefficients as \"p\" or \"p/q\" strings"
        ),
    }
}

pub fn poly_from_doc(doc: &PolyDoc) -> Result<CoeffPoly> {
    let mut poly = CoeffPoly::zero();
    for term in &doc.poly {
        let factors = term
            .mono
            .iter()
            .map(|((family, component, index), power)| {
                let mut chars = family.chars();
                let letter = chars
                    .next()
                    .filter(|_| chars.next().is_none())
                    .ok_or_else(|| anyhow!("indeterminate family must be one character"))?;
                Ok((
                    Indeterminate::new(letter, *component, index.clone()),
                    *power,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        poly.add_term(Monomial::new(factors), rational::parse(&term.c)?);
    }
    Ok(poly)
}

pub fn series_from_doc(doc: &SeriesDoc) -> Result<Series<Rational>> {
    if doc.trunc.min_exponent.len() != doc.nvars {
        bail!(
            "min_exponent lists {} bounds for {} variables",
            doc.trunc.min_exponent.len(),
            doc.nvars
        );
    }
    let trunc = Truncation::laurent(
        doc.nvars,
        doc.trunc.max_total_degree,
        doc.trunc.min_exponent.clone(),
    )?;
    let terms = doc
        .terms
        .iter()
        .map(|term| Ok((term.e.clone(), rational_from_doc(&term.c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Series::from_terms(trunc, terms)?)
}

pub fn map_from_doc(doc: &MapDoc) -> Result<FormalMap<Rational>> {
    let components = doc
        .components
        .iter()
        .map(series_from_doc)
        .collect::<Result<Vec<_>>>()?;
    let map = FormalMap::new(components)?;
    if map.source_dim() != doc.source_dim || map.target_dim() != doc.target_dim {
        bail!(
            "document claims a map {}→{} but its components form {}→{}",
            doc.source_dim,
            doc.target_dim,
            map.source_dim(),
            map.target_dim()
        );
    }
    Ok(map)
}

pub fn bifield_from_doc(doc: &BiFieldDoc) -> Result<BiField<Rational>> {
    let components = doc
        .components
        .iter()
        .map(|row| row.iter().map(series_from_doc).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let field = BiField::new(components)?;
    if field.dim() != doc.dim {
        bail!(
            "document claims dimension {} but lists {} component rows",
            doc.dim,
            field.dim()
        );
    }
    Ok(match doc.certified_degree {
        Some(certified) => field.with_certified(certified),
        None => field,
    })
}

pub fn matrix_from_doc(doc: &MatrixDoc) -> Result<IntegerMatrix> {
    let matrix = IntegerMatrix::new(doc.rows.clone())?;
    if matrix.dim() != doc.n {
        bail!(
            "document claims a {0}×{0} matrix but lists {1} rows",
            doc.n,
            matrix.dim()
        );
    }
    Ok(matrix)
}

/// Reads and parses a JSON document from a file, reporting the parse
/// location on malformed input.
pub fn read_doc<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
