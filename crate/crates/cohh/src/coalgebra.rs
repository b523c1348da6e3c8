//! Coalgebra presentations over an exact field: the axiom checker, the
//! cofree functors (tensor words and divided-power/exterior monomials), named
//! coalgebras, tensor products, and structural analysis (primitives,
//! cogeneration).
//!
//! All objects are truncated at an internal degree bound `D`; counits are
//! basis-compatible (exactly one basis element carries the counit), which is
//! what the constructive matching-space section needs.

use std::collections::HashMap;

use crate::field::{FieldSpec, Scalar};
use crate::graded::{tensor_index, tensor_space, GradedError, GradedMap, GradedSpace};
use crate::matrix::{SparseMatrix, SparseVec};

/// A basis element: internal degree plus position within that degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ElemId {
    pub degree: usize,
    pub index: usize,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoalgebraError {
    #[error("cogenerator {0:?} has degree zero; degree slices would be infinite")]
    DegreeZeroCogenerator(String),
    #[error("generator {0:?} violates the parity constraint for this construction")]
    ParityViolation(String),
    #[error("presentations live over different fields")]
    FieldMismatch,
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("invalid presentation: {0}")]
    BadPresentation(String),
    #[error("operation requires a connected coalgebra (degree 0 spanned by the counit element)")]
    NotConnected,
    #[error("operation requires a cocommutative coalgebra")]
    NotCocommutative,
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Provenance of a constructor output, used by the cofree-type recognizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CofreeShape {
    /// Deconcatenation words on the recorded cogenerators.
    TensorWords { gens: Vec<(String, usize)> },
    /// Monomial model: divided-power, exterior and polynomial generators.
    Monomials {
        gamma: Vec<(String, usize)>,
        lambda: Vec<(String, usize)>,
        poly: Vec<(String, usize)>,
    },
}

/// A counital coaugmented coalgebra given by coefficient tables on a named
/// graded basis, with an optional internal differential of degree +1.
#[derive(Clone, Debug)]
pub struct CoalgebraPresentation {
    field: FieldSpec,
    space: GradedSpace,
    counit_elem: ElemId,
    /// comult[degree][index]: terms (left, right, coefficient), normalized.
    comult: Vec<Vec<Vec<(ElemId, ElemId, Scalar)>>>,
    differential: Option<GradedMap>,
    pub shape: Option<CofreeShape>,
}

fn normalize_terms(
    field: &FieldSpec,
    terms: Vec<(ElemId, ElemId, Scalar)>,
) -> Vec<(ElemId, ElemId, Scalar)> {
    let mut acc: std::collections::BTreeMap<(ElemId, ElemId), Scalar> = Default::default();
    for (a, b, c) in terms {
        match acc.entry((a, b)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
    acc.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

impl CoalgebraPresentation {
    /// Builds and validates an ad-hoc presentation. Degrees of comult terms
    /// must add up; the counit element must live in degree 0.
    pub fn new(
        field: FieldSpec,
        space: GradedSpace,
        counit_name: &str,
        comult_terms: Vec<(ElemId, Vec<(ElemId, ElemId, Scalar)>)>,
        differential: Option<GradedMap>,
    ) -> Result<Self, CoalgebraError> {
        let counit_index = space.index_of(0, counit_name).ok_or_else(|| {
            CoalgebraError::BadPresentation(format!(
                "counit element {counit_name:?} not found in degree 0"
            ))
        })?;
        let counit_elem = ElemId {
            degree: 0,
            index: counit_index,
        };
        let mut comult: Vec<Vec<Vec<(ElemId, ElemId, Scalar)>>> = (0..=space.truncation())
            .map(|t| vec![Vec::new(); space.dim(t)])
            .collect();
        for (of, terms) in comult_terms {
            if of.degree > space.truncation() || of.index >= space.dim(of.degree) {
                return Err(CoalgebraError::BadPresentation(format!(
                    "comultiplication entry for unknown element {of:?}"
                )));
            }
            for (a, b, _) in &terms {
                if a.degree + b.degree != of.degree {
                    return Err(CoalgebraError::BadPresentation(format!(
                        "comultiplication term of {:?} has mismatched degrees {} + {} != {}",
                        space.name_of(of.degree, of.index),
                        a.degree,
                        b.degree,
                        of.degree
                    )));
                }
                for e in [a, b] {
                    if e.degree > space.truncation() || e.index >= space.dim(e.degree) {
                        return Err(CoalgebraError::BadPresentation(format!(
                            "comultiplication term references unknown element {e:?}"
                        )));
                    }
                }
            }
            let slot = &mut comult[of.degree][of.index];
            slot.extend(terms);
            *slot = normalize_terms(&field, std::mem::take(slot));
        }
        if let Some(d) = &differential {
            if d.shift() != 1 {
                return Err(CoalgebraError::BadPresentation(
                    "differential must have degree +1".into(),
                ));
            }
        }
        Ok(CoalgebraPresentation {
            field,
            space,
            counit_elem,
            comult,
            differential,
            shape: None,
        })
    }

    /// The trivial coalgebra `k`.
    pub fn trivial(field: FieldSpec, truncation: usize) -> Self {
        let space = GradedSpace::unit(truncation);
        let one = ElemId { degree: 0, index: 0 };
        CoalgebraPresentation {
            field,
            space,
            counit_elem: one,
            comult: {
                let mut c: Vec<Vec<Vec<(ElemId, ElemId, Scalar)>>> =
                    vec![vec![Vec::new()]; 1];
                c[0][0] = vec![(one, one, field.one())];
                c.resize(truncation + 1, Vec::new());
                for t in 1..=truncation {
                    c[t] = Vec::new();
                }
                c
            },
            differential: None,
            shape: Some(CofreeShape::Monomials {
                gamma: vec![],
                lambda: vec![],
                poly: vec![],
            }),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn truncation(&self) -> usize {
        self.space.truncation()
    }

    pub fn dim(&self, t: usize) -> usize {
        self.space.dim(t)
    }

    pub fn unit(&self) -> ElemId {
        self.counit_elem
    }

    pub fn is_unit(&self, e: ElemId) -> bool {
        e == self.counit_elem
    }

    pub fn counit_scalar(&self, e: ElemId) -> Scalar {
        if self.is_unit(e) {
            self.field.one()
        } else {
            self.field.zero()
        }
    }

    pub fn name(&self, e: ElemId) -> &str {
        self.space.name_of(e.degree, e.index)
    }

    pub fn elem_by_name(&self, name: &str) -> Option<ElemId> {
        for degree in 0..=self.truncation() {
            if let Some(index) = self.space.index_of(degree, name) {
                return Some(ElemId { degree, index });
            }
        }
        None
    }

    pub fn elems(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..=self.truncation()).flat_map(move |degree| {
            (0..self.dim(degree)).map(move |index| ElemId { degree, index })
        })
    }

    pub fn comult_terms(&self, e: ElemId) -> &[(ElemId, ElemId, Scalar)] {
        &self.comult[e.degree][e.index]
    }

    pub fn differential(&self) -> Option<&GradedMap> {
        self.differential.as_ref()
    }

    pub fn set_differential(&mut self, d: Option<GradedMap>) {
        self.differential = d;
    }

    /// Degree-0 component is spanned by the counit element alone.
    pub fn is_connected(&self) -> bool {
        self.dim(0) == 1 && self.counit_elem == ElemId { degree: 0, index: 0 }
    }

    /// The comultiplication as a graded map `C -> C ⊗ C` (pair basis order
    /// of [`tensor_space`]).
    pub fn comult_map(&self) -> GradedMap {
        let square = tensor_space(&self.space, &self.space).expect("same truncation");
        let mut m = GradedMap::zero(self.field, 0, &self.space, &square);
        for t in 0..=self.truncation() {
            let mut triples = Vec::new();
            for i in 0..self.dim(t) {
                for (a, b, c) in &self.comult[t][i] {
                    let row = tensor_index(
                        &self.space,
                        &self.space,
                        a.degree,
                        a.index,
                        b.degree,
                        b.index,
                    );
                    triples.push((row, i, c.clone()));
                }
            }
            m.set_block(
                t,
                SparseMatrix::from_triples(self.field, square.dim(t), self.dim(t), triples),
            );
        }
        m
    }

    /// Restricts the presentation to a smaller truncation window. Fails if
    /// `d` exceeds the current window.
    pub fn truncate(&self, d: usize) -> Result<CoalgebraPresentation, CoalgebraError> {
        if d > self.truncation() {
            return Err(CoalgebraError::TruncationMismatch(self.truncation(), d));
        }
        let names: Vec<Vec<String>> = (0..=d)
            .map(|t| self.space.names(t).to_vec())
            .collect();
        let space = GradedSpace::from_names(d, names)?;
        let comult_terms: Vec<(ElemId, Vec<(ElemId, ElemId, Scalar)>)> = self
            .elems()
            .filter(|e| e.degree <= d)
            .map(|e| (e, self.comult_terms(e).to_vec()))
            .collect();
        let differential = self.differential.as_ref().map(|map| {
            let mut out = GradedMap::zero(self.field, 1, &space, &space);
            for t in 0..d {
                out.set_block(t, map.block(t));
            }
            out
        });
        let mut c = CoalgebraPresentation::new(
            self.field,
            space,
            self.name(self.counit_elem).to_string().as_str(),
            comult_terms,
            differential,
        )?;
        c.shape = match &self.shape {
            Some(CofreeShape::Monomials { gamma, lambda, poly }) => {
                Some(CofreeShape::Monomials {
                    gamma: gamma.iter().filter(|(_, gd)| *gd <= d).cloned().collect(),
                    lambda: lambda.iter().filter(|(_, gd)| *gd <= d).cloned().collect(),
                    poly: poly.iter().filter(|(_, gd)| *gd <= d).cloned().collect(),
                })
            }
            Some(CofreeShape::TensorWords { gens }) => Some(CofreeShape::TensorWords {
                gens: gens.iter().filter(|(_, gd)| *gd <= d).cloned().collect(),
            }),
            None => None,
        };
        Ok(c)
    }

    /// Reduced coproduct terms of a non-unit element: `△(c) - 1⊗c - c⊗1`.
    pub fn reduced_comult_terms(&self, e: ElemId) -> Vec<(ElemId, ElemId, Scalar)> {
        let mut terms: Vec<(ElemId, ElemId, Scalar)> = self.comult_terms(e).to_vec();
        let one = self.field.one();
        terms.push((self.counit_elem, e, self.field.neg(&one)));
        terms.push((e, self.counit_elem, self.field.neg(&one)));
        normalize_terms(&self.field, terms)
    }
}

/// Outcome of the axiom checker. Failures are reported with witnesses, never
/// thrown.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub coassociative: bool,
    pub counital: bool,
    pub coaugmented: bool,
    pub cocommutative: bool,
    pub conilpotent: bool,
    /// True when there is no differential or it passes the coderivation and
    /// square-zero checks.
    pub differential_ok: bool,
    pub witnesses: Vec<(String, String)>,
}

impl AxiomReport {
    /// Cocommutativity is informational; everything else is required.
    pub fn ok(&self) -> bool {
        self.coassociative
            && self.counital
            && self.coaugmented
            && self.conilpotent
            && self.differential_ok
    }

    fn witness(&mut self, axiom: &str, who: String) {
        self.witnesses.push((axiom.to_string(), who));
    }
}

/// Checks every coalgebra axiom exactly, element by element: coassociativity,
/// counitality, the coaugmentation identities, cocommutativity and truncated
/// conilpotency, plus the coderivation laws when a differential is present.
pub fn check_coalgebra(c: &CoalgebraPresentation) -> AxiomReport {
    let field = c.field;
    let mut report = AxiomReport {
        coassociative: true,
        counital: true,
        coaugmented: true,
        cocommutative: true,
        conilpotent: true,
        differential_ok: true,
        witnesses: Vec::new(),
    };

    // Counitality: (ε⊗id)△ = id = (id⊗ε)△.
    for e in c.elems() {
        let mut left: HashMap<ElemId, Scalar> = HashMap::new();
        let mut right: HashMap<ElemId, Scalar> = HashMap::new();
        for (a, b, v) in c.comult_terms(e) {
            if c.is_unit(*a) {
                let s = field.add(left.get(b).unwrap_or(&field.zero()), v);
                left.insert(*b, s);
            }
            if c.is_unit(*b) {
                let s = field.add(right.get(a).unwrap_or(&field.zero()), v);
                right.insert(*a, s);
            }
        }
        let is_delta = |m: &HashMap<ElemId, Scalar>| {
            m.iter()
                .all(|(k, v)| if *k == e { v.is_one() } else { v.is_zero() })
                && m.get(&e).map(|v| v.is_one()).unwrap_or(false)
        };
        if !is_delta(&left) || !is_delta(&right) {
            report.counital = false;
            report.witness("counitality", c.name(e).to_string());
        }
    }

    // Coassociativity: (△⊗id)△ = (id⊗△)△.
    for e in c.elems() {
        let mut lhs: HashMap<(ElemId, ElemId, ElemId), Scalar> = HashMap::new();
        let mut rhs: HashMap<(ElemId, ElemId, ElemId), Scalar> = HashMap::new();
        for (a, b, v) in c.comult_terms(e) {
            for (a1, a2, w) in c.comult_terms(*a) {
                let coeff = field.mul(v, w);
                let s = field.add(lhs.get(&(*a1, *a2, *b)).unwrap_or(&field.zero()), &coeff);
                lhs.insert((*a1, *a2, *b), s);
            }
            for (b1, b2, w) in c.comult_terms(*b) {
                let coeff = field.mul(v, w);
                let s = field.add(rhs.get(&(*a, *b1, *b2)).unwrap_or(&field.zero()), &coeff);
                rhs.insert((*a, *b1, *b2), s);
            }
        }
        let equal = lhs
            .iter()
            .all(|(k, v)| field.sub(v, rhs.get(k).unwrap_or(&field.zero())).is_zero())
            && rhs
                .iter()
                .all(|(k, v)| field.sub(v, lhs.get(k).unwrap_or(&field.zero())).is_zero());
        if !equal {
            report.coassociative = false;
            report.witness("coassociativity", c.name(e).to_string());
        }
    }

    // Coaugmentation: △(1) = 1 ⊗ 1 (εη = 1 holds by the basis convention).
    {
        let one = c.unit();
        let terms = c.comult_terms(one);
        let good = terms.len() == 1 && terms[0].0 == one && terms[0].1 == one && terms[0].2.is_one();
        if !good {
            report.coaugmented = false;
            report.witness("coaugmentation", c.name(one).to_string());
        }
    }

    // Cocommutativity: τ△ = △ with the Koszul sign on the swap.
    for e in c.elems() {
        let mut table: HashMap<(ElemId, ElemId), Scalar> = HashMap::new();
        for (a, b, v) in c.comult_terms(e) {
            table.insert((*a, *b), v.clone());
        }
        for (a, b, v) in c.comult_terms(e) {
            let swapped = table.get(&(*b, *a)).cloned().unwrap_or_else(|| field.zero());
            let expected = field.mul(&field.sign(a.degree * b.degree), v);
            if field.sub(&swapped, &expected) != field.zero() {
                report.cocommutative = false;
                report.witness("cocommutativity", c.name(e).to_string());
                break;
            }
        }
    }

    // Truncated conilpotency: iterating the reduced coproduct kills every
    // basis element. Degree-t elements must die within t steps once the
    // degree-0 part is exhausted. Expansion is budgeted; exceeding the
    // budget refuses the certificate rather than claiming success.
    const CONILPOTENCY_BUDGET: usize = 200_000;
    let reduced_dim0 = c.dim(0).saturating_sub(1);
    for e in c.elems() {
        if c.is_unit(e) {
            continue;
        }
        let cap = e.degree + reduced_dim0 + 1;
        let mut words: HashMap<Vec<ElemId>, Scalar> = HashMap::new();
        words.insert(vec![e], field.one());
        let mut died = false;
        for _ in 0..cap {
            // Expand the first tensor slot with the reduced coproduct.
            let mut next: HashMap<Vec<ElemId>, Scalar> = HashMap::new();
            for (word, coeff) in &words {
                for (a, b, v) in c.reduced_comult_terms(word[0]) {
                    let mut w = Vec::with_capacity(word.len() + 1);
                    w.push(a);
                    w.push(b);
                    w.extend_from_slice(&word[1..]);
                    let s = field.add(
                        next.get(&w).unwrap_or(&field.zero()),
                        &field.mul(coeff, &v),
                    );
                    if s.is_zero() {
                        next.remove(&w);
                    } else {
                        next.insert(w, s);
                    }
                }
            }
            next.retain(|_, v| !v.is_zero());
            if next.is_empty() {
                died = true;
                break;
            }
            if next.len() > CONILPOTENCY_BUDGET {
                break;
            }
            words = next;
        }
        if !died {
            report.conilpotent = false;
            report.witness("conilpotency", c.name(e).to_string());
        }
    }

    // Differential: square to zero, coderivation law, vanishing on the
    // coaugmentation and under the counit.
    if let Some(d) = c.differential() {
        let dd = d.compose(d).expect("same space");
        if !dd.is_zero() {
            report.differential_ok = false;
            report.witness("d∘d = 0", "differential".into());
        }
        let one_vec: SparseVec = vec![(c.unit().index, field.one())];
        if !d.apply(0, &one_vec).is_empty() {
            report.differential_ok = false;
            report.witness("d(1) = 0", c.name(c.unit()).to_string());
        }
        // △ d = (d⊗id + id⊗d) △, with (id⊗d)(a⊗b) = (-1)^{|a|} a⊗d(b).
        let comult = c.comult_map();
        let d_sq = {
            let id = GradedMap::identity(field, &c.space);
            let d_id = crate::graded::tensor_map_koszul(d, &id, &c.space, &c.space, &c.space, &c.space)
                .expect("same truncation");
            let id_d = crate::graded::tensor_map_koszul(&id, d, &c.space, &c.space, &c.space, &c.space)
                .expect("same truncation");
            d_id.add(&id_d).expect("same shape")
        };
        let lhs = comult.compose(d).expect("shapes agree");
        let rhs = d_sq.compose(&comult).expect("shapes agree");
        if !lhs.equal(&rhs) {
            report.differential_ok = false;
            report.witness("coderivation law", "differential".into());
        }
    }

    report
}

// ---------------------------------------------------------------------------
// Cofree functors and named coalgebras.
// ---------------------------------------------------------------------------

fn check_positive_degrees(gens: &[(String, usize)]) -> Result<(), CoalgebraError> {
    for (name, d) in gens {
        if *d == 0 {
            return Err(CoalgebraError::DegreeZeroCogenerator(name.clone()));
        }
    }
    Ok(())
}

/// Cofree conilpotent coalgebra `T^c(X)` on positive-degree cogenerators:
/// words with the deconcatenation coproduct. The counit is supported on the
/// empty word.
pub fn cofree_tensor(
    field: FieldSpec,
    gens: &[(String, usize)],
    truncation: usize,
) -> Result<CoalgebraPresentation, CoalgebraError> {
    check_positive_degrees(gens)?;
    // Enumerate words by degree; within a degree order by (length, lexicographic letters).
    let mut words_by_degree: Vec<Vec<Vec<usize>>> = vec![Vec::new(); truncation + 1];
    fn extend(
        gens: &[(String, usize)],
        truncation: usize,
        word: &mut Vec<usize>,
        degree: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        out[degree].push(word.clone());
        for (g, (_, gd)) in gens.iter().enumerate() {
            if degree + gd <= truncation {
                word.push(g);
                extend(gens, truncation, word, degree + gd, out);
                word.pop();
            }
        }
    }
    extend(gens, truncation, &mut Vec::new(), 0, &mut words_by_degree);
    for level in &mut words_by_degree {
        level.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    }

    let word_name = |w: &[usize]| {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.iter()
                .map(|g| gens[*g].0.clone())
                .collect::<Vec<_>>()
                .join("·")
        }
    };
    let names: Vec<Vec<String>> = words_by_degree
        .iter()
        .map(|level| level.iter().map(|w| word_name(w)).collect())
        .collect();
    let space = GradedSpace::from_names(truncation, names)?;

    let word_degree =
        |w: &[usize]| -> usize { w.iter().map(|g| gens[*g].1).sum() };
    let id_of = |w: &[usize]| -> ElemId {
        let degree = word_degree(w);
        let index = words_by_degree[degree]
            .binary_search_by(|x| (x.len(), x.as_slice()).cmp(&(w.len(), w)))
            .expect("word enumerated");
        ElemId { degree, index }
    };

    let mut comult_terms = Vec::new();
    for (degree, level) in words_by_degree.iter().enumerate() {
        for w in level {
            let mut terms = Vec::new();
            for k in 0..=w.len() {
                terms.push((id_of(&w[..k]), id_of(&w[k..]), field.one()));
            }
            let index = id_of(w).index;
            comult_terms.push((ElemId { degree, index }, terms));
        }
    }
    let mut c = CoalgebraPresentation::new(field, space, "1", comult_terms, None)?;
    c.shape = Some(CofreeShape::TensorWords {
        gens: gens.to_vec(),
    });
    Ok(c)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GenKind {
    /// Divided power: `△γ_j = Σ_{a+b=j} γ_a ⊗ γ_b`.
    Gamma,
    /// Exterior: square-free, odd parity signs.
    Lambda,
    /// Polynomial: `△(w^j) = Σ_k C(j,k) w^k ⊗ w^{j-k}`.
    Poly,
}

struct MonomialModel {
    gens: Vec<(String, usize, GenKind)>,
    /// Per degree, monomial exponent vectors ordered by (weight, lex).
    monomials: Vec<Vec<Vec<u32>>>,
}

impl MonomialModel {
    fn build(gens: Vec<(String, usize, GenKind)>, truncation: usize) -> Self {
        let mut monomials: Vec<Vec<Vec<u32>>> = vec![Vec::new(); truncation + 1];
        fn extend(
            gens: &[(String, usize, GenKind)],
            truncation: usize,
            g: usize,
            exps: &mut Vec<u32>,
            degree: usize,
            out: &mut Vec<Vec<Vec<u32>>>,
        ) {
            if g == gens.len() {
                out[degree].push(exps.clone());
                return;
            }
            let (_, gd, kind) = &gens[g];
            let max = match kind {
                GenKind::Lambda => 1usize.min((truncation - degree) / gd),
                _ => (truncation - degree) / gd,
            };
            for e in 0..=max {
                exps.push(e as u32);
                extend(gens, truncation, g + 1, exps, degree + e * gd, out);
                exps.pop();
            }
        }
        extend(&gens, truncation, 0, &mut Vec::new(), 0, &mut monomials);
        for level in &mut monomials {
            level.sort_by_key(|e| {
                (e.iter().map(|x| *x as u64).sum::<u64>(), e.clone())
            });
        }
        MonomialModel { gens, monomials }
    }

    fn name(&self, exps: &[u32]) -> String {
        let mut parts = Vec::new();
        for (e, (name, _, kind)) in exps.iter().zip(&self.gens) {
            if *e == 0 {
                continue;
            }
            match kind {
                GenKind::Gamma => parts.push(format!("γ{e}({name})")),
                GenKind::Lambda => parts.push(name.clone()),
                GenKind::Poly => {
                    if *e == 1 {
                        parts.push(name.clone())
                    } else {
                        parts.push(format!("{name}^{e}"))
                    }
                }
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }

    fn degree(&self, exps: &[u32]) -> usize {
        exps.iter()
            .zip(&self.gens)
            .map(|(e, (_, d, _))| *e as usize * d)
            .sum()
    }

    fn id_of(&self, exps: &[u32]) -> ElemId {
        let degree = self.degree(exps);
        let key = (
            exps.iter().map(|x| *x as u64).sum::<u64>(),
            exps.to_vec(),
        );
        let index = self.monomials[degree]
            .binary_search_by_key(&key, |e| {
                (e.iter().map(|x| *x as u64).sum::<u64>(), e.clone())
            })
            .expect("monomial enumerated");
        ElemId { degree, index }
    }

    /// Koszul sign for splitting a monomial: odd-degree generator pairs
    /// i < j where i's factor goes right and j's goes left contribute -1.
    fn split_sign(&self, field: &FieldSpec, left: &[u32], right: &[u32]) -> Scalar {
        let odd: Vec<usize> = self
            .gens
            .iter()
            .enumerate()
            .filter(|(_, (_, d, _))| d % 2 == 1)
            .map(|(i, _)| i)
            .collect();
        let mut crossings = 0usize;
        for (pos_i, &i) in odd.iter().enumerate() {
            for &j in &odd[pos_i + 1..] {
                crossings += right[i] as usize * left[j] as usize;
            }
        }
        field.sign(crossings)
    }

    fn comult_coeff(&self, field: &FieldSpec, left: &[u32], right: &[u32]) -> Scalar {
        let mut coeff = self.split_sign(field, left, right);
        for (g, (_, _, kind)) in self.gens.iter().enumerate() {
            if let GenKind::Poly = kind {
                let j = (left[g] + right[g]) as u64;
                coeff = field.mul(&coeff, &field.binomial(j, left[g] as u64));
            }
        }
        coeff
    }
}

fn monomial_coalgebra(
    field: FieldSpec,
    gens: Vec<(String, usize, GenKind)>,
    truncation: usize,
) -> Result<CoalgebraPresentation, CoalgebraError> {
    let named: Vec<(String, usize)> = gens.iter().map(|(n, d, _)| (n.clone(), *d)).collect();
    check_positive_degrees(&named)?;
    if field.characteristic() != 2 {
        for (name, d, kind) in &gens {
            let even = d % 2 == 0;
            let ok = match kind {
                GenKind::Gamma | GenKind::Poly => even,
                GenKind::Lambda => !even,
            };
            if !ok {
                return Err(CoalgebraError::ParityViolation(name.clone()));
            }
        }
    }
    let model = MonomialModel::build(gens, truncation);
    let names: Vec<Vec<String>> = model
        .monomials
        .iter()
        .map(|level| level.iter().map(|e| model.name(e)).collect())
        .collect();
    let space = GradedSpace::from_names(truncation, names)?;

    let mut comult_terms = Vec::new();
    for level in &model.monomials {
        for exps in level {
            let of = model.id_of(exps);
            // All splittings exps = left + right, generator by generator.
            let mut terms = Vec::new();
            let mut split = vec![0u32; exps.len()];
            loop {
                let left = split.clone();
                let right: Vec<u32> = exps.iter().zip(&left).map(|(e, l)| e - l).collect();
                let coeff = model.comult_coeff(&field, &left, &right);
                terms.push((model.id_of(&left), model.id_of(&right), coeff));
                // Next split in mixed-radix order.
                let mut g = 0;
                loop {
                    if g == exps.len() {
                        break;
                    }
                    if split[g] < exps[g] {
                        split[g] += 1;
                        break;
                    }
                    split[g] = 0;
                    g += 1;
                }
                if g == exps.len() {
                    break;
                }
            }
            comult_terms.push((of, terms));
        }
    }
    let mut c = CoalgebraPresentation::new(field, space, "1", comult_terms, None)?;
    let pick = |kind: GenKind| -> Vec<(String, usize)> {
        model
            .gens
            .iter()
            .filter(|(_, _, k)| *k == kind)
            .map(|(n, d, _)| (n.clone(), *d))
            .collect()
    };
    c.shape = Some(CofreeShape::Monomials {
        gamma: pick(GenKind::Gamma),
        lambda: pick(GenKind::Lambda),
        poly: pick(GenKind::Poly),
    });
    Ok(c)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NamedKind {
    DividedPower,
    Exterior,
    Polynomial,
}

/// The named coalgebras of the computational catalog: divided power
/// `Γ_k[x_i]`, exterior `Λ_k(y_i)`, polynomial `k[w_i]`. Parity constraints
/// apply away from characteristic 2; degree-0 generators are rejected.
pub fn named_coalgebra(
    kind: NamedKind,
    gens: &[(String, usize)],
    field: FieldSpec,
    truncation: usize,
) -> Result<CoalgebraPresentation, CoalgebraError> {
    let gen_kind = match kind {
        NamedKind::DividedPower => GenKind::Gamma,
        NamedKind::Exterior => GenKind::Lambda,
        NamedKind::Polynomial => GenKind::Poly,
    };
    monomial_coalgebra(
        field,
        gens.iter()
            .map(|(n, d)| (n.clone(), *d, gen_kind))
            .collect(),
        truncation,
    )
}

/// Cofree cocommutative conilpotent coalgebra `S^c(X)`, realized via the
/// divided-power/exterior monomial model: divided powers on even cogenerators
/// and exterior generators on odd ones (divided powers on everything in
/// characteristic 2).
pub fn cofree_cocommutative(
    field: FieldSpec,
    gens: &[(String, usize)],
    truncation: usize,
) -> Result<CoalgebraPresentation, CoalgebraError> {
    check_positive_degrees(gens)?;
    let tagged: Vec<(String, usize, GenKind)> = gens
        .iter()
        .map(|(n, d)| {
            let kind = if field.characteristic() == 2 || d % 2 == 0 {
                GenKind::Gamma
            } else {
                GenKind::Lambda
            };
            (n.clone(), *d, kind)
        })
        .collect();
    monomial_coalgebra(field, tagged, truncation)
}

/// Tensor product of coalgebras: middle-swap coproduct with the Koszul sign
/// from τ, counit ε ⊗ ε, differential `d ⊗ id + id ⊗ d`.
pub fn coalgebra_tensor(
    c1: &CoalgebraPresentation,
    c2: &CoalgebraPresentation,
) -> Result<CoalgebraPresentation, CoalgebraError> {
    if c1.field != c2.field {
        return Err(CoalgebraError::FieldMismatch);
    }
    if c1.truncation() != c2.truncation() {
        return Err(CoalgebraError::TruncationMismatch(
            c1.truncation(),
            c2.truncation(),
        ));
    }
    let field = c1.field;
    let space = tensor_space(&c1.space, &c2.space)?;
    let truncation = c1.truncation();

    let pair_id = |a: ElemId, b: ElemId| -> ElemId {
        ElemId {
            degree: a.degree + b.degree,
            index: tensor_index(&c1.space, &c2.space, a.degree, a.index, b.degree, b.index),
        }
    };

    let mut comult_terms = Vec::new();
    for a in c1.elems() {
        for b in c2.elems() {
            if a.degree + b.degree > truncation {
                continue;
            }
            let of = pair_id(a, b);
            let mut terms = Vec::new();
            for (a1, a2, v) in c1.comult_terms(a) {
                for (b1, b2, w) in c2.comult_terms(b) {
                    // (id ⊗ τ ⊗ id): a2 crosses b1.
                    let sign = field.sign(a2.degree * b1.degree);
                    let coeff = field.mul(&sign, &field.mul(v, w));
                    terms.push((pair_id(*a1, *b1), pair_id(*a2, *b2), coeff));
                }
            }
            comult_terms.push((of, terms));
        }
    }

    let counit_pair = pair_id(c1.unit(), c2.unit());
    let counit_name = space.name_of(0, counit_pair.index).to_string();
    let differential = match (c1.differential(), c2.differential()) {
        (None, None) => None,
        (d1, d2) => {
            let id1 = GradedMap::identity(field, &c1.space);
            let id2 = GradedMap::identity(field, &c2.space);
            let zero1 = GradedMap::zero(field, 1, &c1.space, &c1.space);
            let zero2 = GradedMap::zero(field, 1, &c2.space, &c2.space);
            let d1 = d1.unwrap_or(&zero1);
            let d2 = d2.unwrap_or(&zero2);
            let left = crate::graded::tensor_map_koszul(d1, &id2, &c1.space, &c2.space, &c1.space, &c2.space)?;
            let right = crate::graded::tensor_map_koszul(&id1, d2, &c1.space, &c2.space, &c1.space, &c2.space)?;
            Some(left.add(&right)?)
        }
    };

    CoalgebraPresentation::new(field, space, &counit_name, comult_terms, differential)
}

// ---------------------------------------------------------------------------
// Iterated comultiplication and structural analysis.
// ---------------------------------------------------------------------------

/// `△^n : C -> C^{⊗ n+1}` as a formal word expansion per basis element,
/// following `△^0 = id`, `△^{n+1} = (△ ⊗ id^{⊗n}) △^n`.
pub fn iterated_comult_words(
    c: &CoalgebraPresentation,
    e: ElemId,
    n: usize,
) -> HashMap<Vec<ElemId>, Scalar> {
    let field = c.field();
    let mut words: HashMap<Vec<ElemId>, Scalar> = HashMap::new();
    words.insert(vec![e], field.one());
    for _ in 0..n {
        let mut next: HashMap<Vec<ElemId>, Scalar> = HashMap::new();
        for (word, coeff) in &words {
            for (a, b, v) in c.comult_terms(word[0]) {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(*a);
                w.push(*b);
                w.extend_from_slice(&word[1..]);
                let s = field.add(next.get(&w).unwrap_or(&field.zero()), &field.mul(coeff, v));
                if s.is_zero() {
                    next.remove(&w);
                } else {
                    next.insert(w, s);
                }
            }
        }
        words = next;
    }
    words
}

/// The primitive elements: per-degree kernel of the reduced coproduct on the
/// coaugmentation coideal. Returns canonical representative vectors in the
/// coordinates of the non-unit basis of each degree, with rendered names.
pub struct Primitives {
    /// (degree, representative vectors, rendered names)
    pub by_degree: Vec<(usize, Vec<SparseVec>, Vec<String>)>,
}

pub fn primitives(c: &CoalgebraPresentation) -> Result<Primitives, CoalgebraError> {
    if !c.is_connected() {
        return Err(CoalgebraError::NotConnected);
    }
    let field = c.field();
    let mut by_degree = Vec::new();
    for t in 1..=c.truncation() {
        let dim = c.dim(t);
        if dim == 0 {
            continue;
        }
        // Pairs (a, b) of non-unit elements with |a| + |b| = t.
        let mut pair_index: HashMap<(ElemId, ElemId), usize> = HashMap::new();
        for ta in 1..t {
            for ia in 0..c.dim(ta) {
                for ib in 0..c.dim(t - ta) {
                    let a = ElemId { degree: ta, index: ia };
                    let b = ElemId { degree: t - ta, index: ib };
                    let k = pair_index.len();
                    pair_index.insert((a, b), k);
                }
            }
        }
        let mut triples = Vec::new();
        for i in 0..dim {
            let e = ElemId { degree: t, index: i };
            for (a, b, v) in c.reduced_comult_terms(e) {
                let row = *pair_index
                    .get(&(a, b))
                    .expect("reduced terms avoid the unit for counital inputs");
                triples.push((row, i, v));
            }
        }
        let m = SparseMatrix::from_triples(field, pair_index.len(), dim, triples);
        let kernel = m.row_reduce().kernel_basis();
        let names = kernel
            .iter()
            .map(|v| crate::graded::render_vector(&field, v, c.space.names(t)))
            .collect();
        by_degree.push((t, kernel, names));
    }
    Ok(Primitives { by_degree })
}

/// Whether `proj : C -> Y` exhibits `Y` as a cogenerating space: the
/// composite `C -> T^c(C) -> T^c(Y)` must be injective in every degree
/// `<= D`, checked as a rank condition. `Y` must be concentrated in positive
/// degrees.
pub fn cogenerated_by_check(
    c: &CoalgebraPresentation,
    proj: &GradedMap,
    target: &GradedSpace,
) -> Result<bool, CoalgebraError> {
    if !c.is_connected() {
        return Err(CoalgebraError::NotConnected);
    }
    if target.dim(0) > 0 {
        return Err(CoalgebraError::BadPresentation(
            "cogenerator space must be concentrated in positive degrees".into(),
        ));
    }
    let field = c.field();
    for t in 1..=c.truncation() {
        let dim = c.dim(t);
        if dim == 0 {
            continue;
        }
        // Stack π^{⊗n} △^{n-1} blocks for n = 1..=t; higher weights vanish
        // in degree t because Y is positive.
        let mut rows: Vec<SparseVec> = Vec::new();
        let mut row_index: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
        let mut cols: Vec<HashMap<usize, Scalar>> = vec![HashMap::new(); dim];
        for n in 1..=t {
            for i in 0..dim {
                let e = ElemId { degree: t, index: i };
                for (word, coeff) in iterated_comult_words(c, e, n - 1) {
                    // Apply proj to every slot; expand the product.
                    let mut partial: Vec<(Vec<(usize, usize)>, Scalar)> =
                        vec![(Vec::new(), coeff)];
                    for slot in &word {
                        let img = proj.apply(
                            slot.degree,
                            &vec![(slot.index, field.one())],
                        );
                        let mut grown = Vec::new();
                        for (prefix, pc) in &partial {
                            for (yi, yv) in &img {
                                let mut p = prefix.clone();
                                p.push((slot.degree, *yi));
                                grown.push((p, field.mul(pc, yv)));
                            }
                        }
                        partial = grown;
                        if partial.is_empty() {
                            break;
                        }
                    }
                    for (yword, v) in partial {
                        let key = (n, yword);
                        let next = row_index.len();
                        let r = *row_index.entry(key).or_insert(next);
                        if r == rows.len() {
                            rows.push(Vec::new());
                        }
                        let s = field.add(cols[i].get(&r).unwrap_or(&field.zero()), &v);
                        cols[i].insert(r, s);
                    }
                }
            }
        }
        let triples = cols.iter().enumerate().flat_map(|(i, col)| {
            col.iter()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(r, v)| (*r, i, v.clone()))
        });
        let m = SparseMatrix::from_triples(field, row_index.len().max(1), dim, triples);
        if m.rank() < dim {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimensions of the Σ_n-invariants `(X^{⊗n})^{Σ_n}` per internal degree,
/// computed from the honest permutation action with Koszul signs. This is
/// the independent cross-check for the monomial model of `S^c`.
pub fn symmetric_invariants_dims(
    field: FieldSpec,
    x: &GradedSpace,
    n: usize,
) -> Vec<usize> {
    let d = x.truncation();
    if n == 0 {
        let mut out = vec![0; d + 1];
        out[0] = 1;
        return out;
    }
    // Enumerate degree-t words of length n in the basis of x.
    let mut out = vec![0usize; d + 1];
    for t in 0..=d {
        let mut words: Vec<Vec<(usize, usize)>> = Vec::new();
        fn extend(
            x: &GradedSpace,
            n: usize,
            t: usize,
            word: &mut Vec<(usize, usize)>,
            used: usize,
            out: &mut Vec<Vec<(usize, usize)>>,
        ) {
            if word.len() == n {
                if used == t {
                    out.push(word.clone());
                }
                return;
            }
            for deg in 0..=(t - used) {
                for i in 0..x.dim(deg) {
                    word.push((deg, i));
                    extend(x, n, t, word, used + deg, out);
                    word.pop();
                }
            }
        }
        extend(x, n, t, &mut Vec::new(), 0, &mut words);
        if words.is_empty() {
            continue;
        }
        let index: HashMap<Vec<(usize, usize)>, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        // Stack (φ_s - id) for every adjacent transposition s.
        let mut triples = Vec::new();
        let mut row_offset = 0;
        for s in 0..n - 1 {
            for (col, w) in words.iter().enumerate() {
                let mut swapped = w.clone();
                swapped.swap(s, s + 1);
                let sign = field.sign(w[s].0 * w[s + 1].0);
                triples.push((row_offset + index[&swapped], col, sign));
                triples.push((
                    row_offset + col,
                    col,
                    field.neg(&field.one()),
                ));
            }
            row_offset += words.len();
        }
        let m = SparseMatrix::from_triples(field, row_offset.max(1), words.len(), triples);
        out[t] = m.row_reduce().kernel_basis().len();
    }
    out
}
