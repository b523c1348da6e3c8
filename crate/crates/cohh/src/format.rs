//! The on-disk coalgebra format: versioned JSON with exact coefficients as
//! strings (decimal integers or `a/b` fractions). Floats never appear in
//! interchange.
//!
//! Loading is two-phase: `parse_presentation` builds the presentation and
//! validates well-formedness (names resolve, degrees add up); `load` also
//! runs the axiom checker and fails with the report attached.

use serde::{Deserialize, Serialize};

use crate::coalgebra::{check_coalgebra, AxiomReport, CoalgebraError, CoalgebraPresentation, ElemId};
use crate::field::{FieldError, FieldSpec};
use crate::graded::{GradedError, GradedMap, GradedSpace};
use crate::matrix::SparseMatrix;

pub const FORMAT_VERSION: u32 = 1;

/// Parse-time ceiling on the truncation window: allocations scale with
/// `max_degree`, so untrusted files must not pick it freely.
pub const MAX_TRUNCATION: usize = 4096;

#[derive(thiserror::Error, Debug)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error("unknown basis element {0:?}")]
    UnknownElement(String),
    #[error("basis degree {0} exceeds max_degree {1}")]
    DegreeOutOfRange(usize, usize),
    #[error("max_degree {0} exceeds the supported ceiling {MAX_TRUNCATION}")]
    TruncationTooLarge(usize),
    #[error("coalgebra axioms fail: {0}")]
    Axioms(String),
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CoalgebraFile {
    pub format: u32,
    pub field: String,
    pub max_degree: usize,
    pub basis: Vec<BasisElement>,
    pub counit: String,
    pub comultiplication: Vec<ComultEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DifferentialEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BasisElement {
    pub name: String,
    pub degree: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ComultEntry {
    pub of: String,
    pub terms: Vec<ComultTerm>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ComultTerm {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DifferentialEntry {
    pub of: String,
    pub terms: Vec<DifferentialTerm>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DifferentialTerm {
    pub elem: String,
    pub coeff: String,
}

/// Builds the presentation from parsed JSON, validating references and
/// degrees but not the coalgebra axioms.
pub fn presentation_from_file(file: &CoalgebraFile) -> Result<CoalgebraPresentation, FormatError> {
    if file.format != FORMAT_VERSION {
        return Err(FormatError::Version(file.format));
    }
    if file.max_degree > MAX_TRUNCATION {
        return Err(FormatError::TruncationTooLarge(file.max_degree));
    }
    let field = FieldSpec::parse(&file.field)?;
    let d = file.max_degree;
    let mut names: Vec<Vec<String>> = vec![Vec::new(); d + 1];
    for b in &file.basis {
        if b.degree > d {
            return Err(FormatError::DegreeOutOfRange(b.degree, d));
        }
        names[b.degree].push(b.name.clone());
    }
    let space = GradedSpace::from_names(d, names)?;
    let lookup = |name: &str| -> Result<ElemId, FormatError> {
        for degree in 0..=d {
            if let Some(index) = space.index_of(degree, name) {
                return Ok(ElemId { degree, index });
            }
        }
        Err(FormatError::UnknownElement(name.to_string()))
    };

    let mut comult_terms = Vec::new();
    for entry in &file.comultiplication {
        let of = lookup(&entry.of)?;
        let mut terms = Vec::new();
        for t in &entry.terms {
            let left = lookup(&t.left)?;
            let right = lookup(&t.right)?;
            let coeff = field.parse_scalar(&t.coeff)?;
            terms.push((left, right, coeff));
        }
        comult_terms.push((of, terms));
    }

    let differential = if file.differential.is_empty() {
        None
    } else {
        let mut triples_by_degree: Vec<Vec<(usize, usize, crate::field::Scalar)>> =
            vec![Vec::new(); d + 1];
        for entry in &file.differential {
            let of = lookup(&entry.of)?;
            for t in &entry.terms {
                let target = lookup(&t.elem)?;
                if target.degree != of.degree + 1 {
                    return Err(FormatError::Coalgebra(CoalgebraError::BadPresentation(
                        format!(
                            "differential term {} -> {} does not raise the degree by 1",
                            entry.of, t.elem
                        ),
                    )));
                }
                let coeff = field.parse_scalar(&t.coeff)?;
                triples_by_degree[of.degree].push((target.index, of.index, coeff));
            }
        }
        let mut map = GradedMap::zero(field, 1, &space, &space);
        for (t, triples) in triples_by_degree.into_iter().enumerate() {
            if t + 1 > d {
                continue;
            }
            map.set_block(
                t,
                SparseMatrix::from_triples(field, space.dim(t + 1), space.dim(t), triples),
            );
        }
        Some(map)
    };

    Ok(CoalgebraPresentation::new(
        field,
        space,
        &file.counit,
        comult_terms,
        differential,
    )?)
}

pub fn parse_presentation(json: &str) -> Result<CoalgebraPresentation, FormatError> {
    let file: CoalgebraFile = serde_json::from_str(json)?;
    presentation_from_file(&file)
}

/// Parses and runs the axiom checker; returns the report alongside the
/// presentation, failing when a required axiom does not hold.
pub fn load(json: &str) -> Result<(CoalgebraPresentation, AxiomReport), FormatError> {
    let c = parse_presentation(json)?;
    let report = check_coalgebra(&c);
    if !report.ok() {
        let summary: Vec<String> = report
            .witnesses
            .iter()
            .map(|(axiom, who)| format!("{axiom} fails on {who}"))
            .collect();
        return Err(FormatError::Axioms(summary.join("; ")));
    }
    Ok((c, report))
}

/// Serializes a presentation back to the file schema: same coefficient
/// table after normalization, deterministic output bytes.
pub fn file_from_presentation(c: &CoalgebraPresentation) -> CoalgebraFile {
    let field = c.field();
    let basis: Vec<BasisElement> = c
        .elems()
        .map(|e| BasisElement {
            name: c.name(e).to_string(),
            degree: e.degree,
        })
        .collect();
    let comultiplication: Vec<ComultEntry> = c
        .elems()
        .map(|e| ComultEntry {
            of: c.name(e).to_string(),
            terms: c
                .comult_terms(e)
                .iter()
                .map(|(a, b, v)| ComultTerm {
                    left: c.name(*a).to_string(),
                    right: c.name(*b).to_string(),
                    coeff: field.format_scalar(v),
                })
                .collect(),
        })
        .collect();
    let differential = match c.differential() {
        None => Vec::new(),
        Some(map) => c
            .elems()
            .filter_map(|e| {
                let image = map.apply(e.degree, &vec![(e.index, field.one())]);
                if image.is_empty() {
                    return None;
                }
                Some(DifferentialEntry {
                    of: c.name(e).to_string(),
                    terms: image
                        .iter()
                        .map(|(i, v)| DifferentialTerm {
                            elem: c
                                .space()
                                .name_of(e.degree + 1, *i)
                                .to_string(),
                            coeff: field.format_scalar(v),
                        })
                        .collect(),
                })
            })
            .collect(),
    };
    CoalgebraFile {
        format: FORMAT_VERSION,
        field: field.to_string(),
        max_degree: c.truncation(),
        basis,
        counit: c.name(c.unit()).to_string(),
        comultiplication,
        differential,
    }
}

pub fn to_json(c: &CoalgebraPresentation) -> String {
    serde_json::to_string_pretty(&file_from_presentation(c)).expect("schema serializes")
}
