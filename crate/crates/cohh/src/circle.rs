//! The simplicial-circle model of the cyclic cobar object and the induced
//! coproduct on coHH.
//!
//! A cocommutative coalgebra is a functor out of finite sets (tensor the
//! coalgebra over the set, pull back along maps by iterated
//! comultiplication, counit on empty preimages). Applied to the simplicial
//! circle this recovers the cyclic cobar object; applied to the codiagonal
//! `S¹ ⊔ S¹ -> S¹` and composed with the Alexander–Whitney quasi-isomorphism
//! it induces the coproduct on the bigraded homology.

use std::collections::HashMap;

use crate::coalgebra::{check_coalgebra, CoalgebraPresentation};
use crate::complex::{bigraded_homology, normalized_bicomplex, BigradedTable, ComplexError};
use crate::field::Scalar;
use crate::graded::GradedMap;
use crate::matrix::{solve, SparseMatrix, SparseVec};
use crate::coalgebra::iterated_comult_words;
use crate::tensor::{coface_word, TensorLevel, Word, WordSum};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CircleError {
    #[error("the set-functor construction needs a cocommutative coalgebra")]
    NotCocommutative,
    #[error("input must be connected")]
    NotConnected,
    #[error("coproduct computation needs a zero internal differential")]
    HasDifferential,
    #[error("representatives not closed under the coproduct within the truncation window at (s={0}, t={1})")]
    TruncationOverflow(usize, usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

// ---------------------------------------------------------------------------
// The simplicial circle.
// ---------------------------------------------------------------------------

/// Face map `d_i : S¹_m -> S¹_{m-1}` on simplex indices, from the interval
/// rule (keep `x_t` for `t <= i`, shift down past `i`) with the endpoint
/// identification folded in.
pub fn circle_face(m: usize, i: usize) -> Vec<usize> {
    assert!(m >= 1 && i <= m);
    (0..=m)
        .map(|t| {
            let image = if t <= i { t } else { t - 1 };
            if image == m { 0 } else { image }
        })
        .collect()
}

/// Degeneracy `s_i : S¹_m -> S¹_{m+1}` on simplex indices.
pub fn circle_degeneracy(m: usize, i: usize) -> Vec<usize> {
    assert!(i <= m);
    (0..=m).map(|t| if t <= i { t } else { t + 1 }).collect()
}

// ---------------------------------------------------------------------------
// Hom(-, C) on finite sets.
// ---------------------------------------------------------------------------

/// Koszul sign of reordering homogeneous factors: `positions[k]` is the
/// target slot of the k-th produced factor, `degrees[k]` its degree.
fn reorder_sign(
    field: &crate::field::FieldSpec,
    positions: &[usize],
    degrees: &[usize],
) -> Scalar {
    let mut swaps = 0usize;
    for u in 0..positions.len() {
        for v in u + 1..positions.len() {
            if positions[u] > positions[v] {
                swaps += degrees[u] * degrees[v];
            }
        }
    }
    field.sign(swaps)
}

/// The map `C^{⊗ ylen} -> C^{⊗ f.len()}` induced by a set map
/// `f : X -> Y` (given as the image index of each `x`): iterated
/// comultiplication over each fiber, counit on empty fibers, with the
/// Koszul sign of routing the outputs to their slots.
pub fn hom_set_map_word(
    c: &CoalgebraPresentation,
    f: &[usize],
    ylen: usize,
    word: &Word,
    coeff: &Scalar,
) -> WordSum {
    assert_eq!(word.len(), ylen);
    let field = c.field();
    let xlen = f.len();
    let fibers: Vec<Vec<usize>> = {
        let mut fb = vec![Vec::new(); ylen];
        for (x, y) in f.iter().enumerate() {
            fb[*y].push(x);
        }
        fb
    };
    // Expand each input factor over its fiber.
    let mut partial: Vec<(Vec<(usize, crate::coalgebra::ElemId)>, Scalar)> =
        vec![(Vec::new(), coeff.clone())];
    for y in 0..ylen {
        let fiber = &fibers[y];
        if fiber.is_empty() {
            // Counit factor: kills everything but the coaugmentation.
            if !c.is_unit(word[y]) {
                return WordSum::new();
            }
            continue;
        }
        let expansion = iterated_comult_words(c, word[y], fiber.len() - 1);
        let mut grown = Vec::new();
        for (prefix, pc) in &partial {
            for (w, v) in &expansion {
                let mut p = prefix.clone();
                for (slot, e) in fiber.iter().zip(w.iter()) {
                    p.push((*slot, *e));
                }
                grown.push((p, field.mul(pc, v)));
            }
        }
        partial = grown;
    }
    let mut out = WordSum::new();
    for (placed, v) in partial {
        let positions: Vec<usize> = placed.iter().map(|(slot, _)| *slot).collect();
        let degrees: Vec<usize> = placed.iter().map(|(_, e)| e.degree).collect();
        let sign = reorder_sign(&field, &positions, &degrees);
        let mut word_out: Word = vec![c.unit(); xlen];
        for (slot, e) in placed {
            word_out[slot] = e;
        }
        crate::tensor::add_word(c, &mut out, word_out, field.mul(&v, &sign));
    }
    out
}

/// Matrix form of [`hom_set_map_word`] between tensor levels.
pub fn hom_set_map_matrix(
    source: &TensorLevel<'_>,
    target: &TensorLevel<'_>,
    f: &[usize],
) -> GradedMap {
    let c = source.coalg;
    let field = c.field();
    assert_eq!(f.len(), target.factors);
    let ylen = source.factors;
    let mut m = GradedMap::from_dims(field, 0, c.truncation(), source.dims(), target.dims());
    for t in 0..=c.truncation() {
        let mut triples = Vec::new();
        for (col, w) in source.words(t).iter().enumerate() {
            for (nw, v) in hom_set_map_word(c, f, ylen, w, &field.one()) {
                let row = target.index_of(&nw).expect("degree preserved");
                triples.push((row, col, v));
            }
        }
        m.set_block(
            t,
            SparseMatrix::from_triples(field, target.dim(t), source.dim(t), triples),
        );
    }
    m
}

/// Level `n` of the circle model: the underlying tensor power `C^{⊗ n+1}`
/// together with the cofaces out of it and the codegeneracies into it, both
/// obtained by applying `Hom(-, C)` to the simplicial circle.
pub struct CircleLevel<'c> {
    pub level: TensorLevel<'c>,
    /// `δ_i : C^{⊗ n+1} -> C^{⊗ n+2}` for `0 <= i <= n+1`.
    pub cofaces: Vec<GradedMap>,
    /// `σ_i : C^{⊗ n+2} -> C^{⊗ n+1}` for `0 <= i <= n`.
    pub codegeneracies: Vec<GradedMap>,
}

pub fn circle_construction<'c>(
    c: &'c CoalgebraPresentation,
    n: usize,
) -> Result<CircleLevel<'c>, CircleError> {
    if !check_coalgebra(c).cocommutative {
        return Err(CircleError::NotCocommutative);
    }
    let level = TensorLevel::new(c, n + 1);
    let upper = TensorLevel::new(c, n + 2);
    let cofaces = (0..=n + 1)
        .map(|i| hom_set_map_matrix(&level, &upper, &circle_face(n + 1, i)))
        .collect();
    let codegeneracies = (0..=n)
        .map(|i| hom_set_map_matrix(&upper, &level, &circle_degeneracy(n, i)))
        .collect();
    Ok(CircleLevel {
        level,
        cofaces,
        codegeneracies,
    })
}

// ---------------------------------------------------------------------------
// The coproduct on coHH via codiagonal and Alexander–Whitney.
// ---------------------------------------------------------------------------

/// A homology class index: bidegree plus position.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClassId {
    pub s: usize,
    pub t: usize,
    pub index: usize,
}

/// The bigraded homology together with its induced coalgebra structure.
pub struct CohhCoalgebra {
    pub table: BigradedTable,
    /// `coproduct[z] = Σ coeff · (a ⊗ b)` over class pairs.
    pub coproduct: std::collections::BTreeMap<ClassId, Vec<(ClassId, ClassId, Scalar)>>,
}

impl CohhCoalgebra {
    pub fn classes(&self) -> Vec<ClassId> {
        let mut out = Vec::new();
        for s in 0..=self.table.s_max {
            for t in 0..=self.table.d_max {
                for index in 0..self.table.dims[s][t] {
                    out.push(ClassId { s, t, index });
                }
            }
        }
        out
    }

    /// The class of the coaugmentation.
    pub fn unit_class(&self) -> ClassId {
        ClassId {
            s: 0,
            t: 0,
            index: 0,
        }
    }

    /// Counit coefficient of a class (supported on the unit class).
    pub fn is_grouplike_unit(&self) -> bool {
        let u = self.unit_class();
        match self.coproduct.get(&u) {
            Some(terms) => {
                terms.len() == 1 && terms[0].0 == u && terms[0].1 == u && terms[0].2.is_one()
            }
            None => false,
        }
    }
}

/// Pair-word cells of the diagonal object `n ↦ C^{⊗ n+1} ⊗ C^{⊗ n+1}`,
/// normalized: no middle slot may carry the unit in both factors.
struct DiagCells {
    /// per degree: ordered pair-words
    pairs: Vec<Vec<(Word, Word)>>,
    index: Vec<HashMap<(Word, Word), usize>>,
}

fn diag_cells(c: &CoalgebraPresentation, s: usize) -> DiagCells {
    let d = c.truncation();
    let level = TensorLevel::new(c, s + 1);
    let mut pairs: Vec<Vec<(Word, Word)>> = vec![Vec::new(); d + 1];
    for t in 0..=d {
        for t1 in 0..=t {
            for v in level.words(t1) {
                for w in level.words(t - t1) {
                    let ok = (1..=s).all(|u| !(c.is_unit(v[u]) && c.is_unit(w[u])));
                    if ok {
                        pairs[t].push((v.clone(), w.clone()));
                    }
                }
            }
        }
    }
    let index = pairs
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), i))
                .collect()
        })
        .collect();
    DiagCells { pairs, index }
}

fn diag_is_normalized(c: &CoalgebraPresentation, v: &Word, w: &Word) -> bool {
    (1..v.len()).all(|u| !(c.is_unit(v[u]) && c.is_unit(w[u])))
}

/// `Σ (-1)^i (δ_i ⊗ δ_i)` on a pair-word at diagonal level `s`.
fn diag_diff_pair(
    c: &CoalgebraPresentation,
    s: usize,
    v: &Word,
    w: &Word,
) -> HashMap<(Word, Word), Scalar> {
    let field = c.field();
    let mut out: HashMap<(Word, Word), Scalar> = HashMap::new();
    for i in 0..=s + 1 {
        let dv = coface_word(c, s, i, v, &field.sign(i));
        let dw = coface_word(c, s, i, w, &field.one());
        for (nv, cv) in &dv {
            for (nw, cw) in &dw {
                let coeff = field.mul(cv, cw);
                let key = (nv.clone(), nw.clone());
                let s0 = field.add(out.get(&key).unwrap_or(&field.zero()), &coeff);
                if s0.is_zero() {
                    out.remove(&key);
                } else {
                    out.insert(key, s0);
                }
            }
        }
    }
    out
}

/// Matrix of the diagonal differential `N_diag^{s,t} -> N_diag^{s+1,t}`.
fn diag_diff_matrix(
    c: &CoalgebraPresentation,
    s: usize,
    t: usize,
    source: &DiagCells,
    target: &DiagCells,
) -> Result<SparseMatrix, CircleError> {
    let field = c.field();
    let src = &source.pairs[t];
    let mut triples = Vec::new();
    for (col, (v, w)) in src.iter().enumerate() {
        for ((nv, nw), coeff) in diag_diff_pair(c, s, v, w) {
            match target.index[t].get(&(nv.clone(), nw.clone())) {
                Some(row) => triples.push((*row, col, coeff)),
                None => {
                    // Double-unit middle slots must cancel in the
                    // alternating sum.
                    if !diag_is_normalized(c, &nv, &nw) {
                        return Err(CircleError::Complex(ComplexError::NotNormalized(s, t)));
                    }
                    unreachable!("normalized pair missing from the index");
                }
            }
        }
    }
    Ok(SparseMatrix::from_triples(
        field,
        target.pairs[t].len(),
        src.len(),
        triples,
    ))
}

/// Alexander–Whitney image of a class pair: the front cofaces (all top,
/// applied `q` times) on the first factor and `δ_0^p` on the second,
/// assembled as a pair-word vector at diagonal level `p+q`.
fn aw_pair(
    c: &CoalgebraPresentation,
    p: usize,
    q: usize,
    a: &WordSum,
    b: &WordSum,
) -> HashMap<(Word, Word), Scalar> {
    let field = c.field();
    // Front: top coface at each level from p to p+q-1.
    let mut front = a.clone();
    for l in p..p + q {
        front = crate::tensor::map_sum(c, &front, |w, v| coface_word(c, l, l + 1, w, v));
    }
    // Back: δ_0 at each level from q to p+q-1.
    let mut back = b.clone();
    for l in q..p + q {
        back = crate::tensor::map_sum(c, &back, |w, v| coface_word(c, l, 0, w, v));
    }
    let mut out = HashMap::new();
    for (v, cv) in &front {
        for (w, cw) in &back {
            let coeff = field.mul(cv, cw);
            let key = (v.clone(), w.clone());
            let s0 = field.add(out.get(&key).unwrap_or(&field.zero()), &coeff);
            if s0.is_zero() {
                out.remove(&key);
            } else {
                out.insert(key, s0);
            }
        }
    }
    out
}

/// The codiagonal `S¹ ⊔ S¹ -> S¹` applied to a normalized representative:
/// comultiply every slot and split into the two copies.
fn nabla_word(c: &CoalgebraPresentation, s: usize, rep: &WordSum) -> HashMap<(Word, Word), Scalar> {
    let f: Vec<usize> = (0..2 * (s + 1)).map(|x| x % (s + 1)).collect();
    let field = c.field();
    let mut out = HashMap::new();
    for (w, coeff) in rep {
        for (big, v) in hom_set_map_word(c, &f, s + 1, w, coeff) {
            let key = (big[..s + 1].to_vec(), big[s + 1..].to_vec());
            let s0 = field.add(out.get(&key).unwrap_or(&field.zero()), &v);
            if s0.is_zero() {
                out.remove(&key);
            } else {
                out.insert(key, s0);
            }
        }
    }
    out
}

/// Computes the coassociative counital coproduct induced on `coHH` by the
/// codiagonal and the Alexander–Whitney quasi-isomorphism. Requires a
/// cocommutative connected input with zero internal differential.
pub fn cohh_coproduct(c: &CoalgebraPresentation) -> Result<CohhCoalgebra, CircleError> {
    if !c.is_connected() {
        return Err(CircleError::NotConnected);
    }
    if c.differential().is_some() {
        return Err(CircleError::HasDifferential);
    }
    if !check_coalgebra(c).cocommutative {
        return Err(CircleError::NotCocommutative);
    }
    let field = c.field();
    let d_max = c.truncation();
    let b = normalized_bicomplex(c, d_max)?;
    let table = bigraded_homology(&b)?;

    // Representatives as word sums, indexed by class.
    let rep_words = |id: ClassId| -> WordSum {
        let mut out = WordSum::new();
        for (i, v) in &table.reps[id.s][id.t][id.index].vector {
            out.insert(b.cell_words(id.s, id.t)[*i].clone(), v.clone());
        }
        out
    };

    let mut coproduct = std::collections::BTreeMap::new();
    // Diagonal cells are built lazily per cosimplicial level.
    let mut cells_cache: HashMap<usize, DiagCells> = HashMap::new();

    for s in 0..=table.s_max {
        let any = (0..=d_max).any(|t| table.dims[s][t] > 0);
        if !any {
            continue;
        }
        for l in s.saturating_sub(1)..=s {
            cells_cache
                .entry(l)
                .or_insert_with(|| diag_cells(c, l));
        }
        for t in 0..=d_max {
            for index in 0..table.dims[s][t] {
                let id = ClassId { s, t, index };
                let rep = rep_words(id);
                let nabla = nabla_word(c, s, &rep);

                let cells_s = &cells_cache[&s];
                let pair_index = &cells_s.index[t];
                let ambient = cells_s.pairs[t].len();
                let to_vec = |sum: &HashMap<(Word, Word), Scalar>| -> SparseVec {
                    let mut acc: std::collections::BTreeMap<usize, Scalar> = Default::default();
                    for (key, v) in sum {
                        let idx = pair_index
                            .get(key)
                            .expect("image lands in normalized diagonal cells");
                        acc.insert(*idx, v.clone());
                    }
                    acc.into_iter().collect()
                };
                let nabla_vec = to_vec(&nabla);

                // Boundaries out of level s-1.
                let boundary_matrix = if s > 0 {
                    diag_diff_matrix(c, s - 1, t, &cells_cache[&(s - 1)], cells_s)?
                } else {
                    SparseMatrix::zero(field, ambient, 0)
                };

                // Künneth basis: Alexander-Whitney images of class pairs.
                let mut aw_columns: Vec<SparseVec> = Vec::new();
                let mut aw_labels: Vec<(ClassId, ClassId)> = Vec::new();
                for p in 0..=s {
                    let q = s - p;
                    for t1 in 0..=t {
                        let t2 = t - t1;
                        if t2 > d_max {
                            continue;
                        }
                        for ia in 0..table.dims.get(p).map(|r| r[t1]).unwrap_or(0) {
                            for ib in 0..table.dims.get(q).map(|r| r[t2]).unwrap_or(0) {
                                let a = ClassId { s: p, t: t1, index: ia };
                                let bb = ClassId { s: q, t: t2, index: ib };
                                let aw = aw_pair(c, p, q, &rep_words(a), &rep_words(bb));
                                aw_columns.push(to_vec(&aw));
                                aw_labels.push((a, bb));
                            }
                        }
                    }
                }

                // Solve ∇(rep) = Σ coeffs · AW + boundary.
                let mut triples = Vec::new();
                for (col, v) in aw_columns.iter().enumerate() {
                    for (r, x) in v {
                        triples.push((*r, col, x.clone()));
                    }
                }
                let n_aw = aw_columns.len();
                for bcol in 0..boundary_matrix.cols() {
                    for r in 0..boundary_matrix.rows() {
                        let x = boundary_matrix.entry(r, bcol);
                        if !x.is_zero() {
                            triples.push((r, n_aw + bcol, x));
                        }
                    }
                }
                let system = SparseMatrix::from_triples(
                    field,
                    ambient,
                    n_aw + boundary_matrix.cols(),
                    triples,
                );
                let solution = solve(&system, &nabla_vec)
                    .ok_or(CircleError::TruncationOverflow(s, t))?;
                let terms: Vec<(ClassId, ClassId, Scalar)> = aw_labels
                    .iter()
                    .zip(solution.iter())
                    .filter(|(_, v)| !v.is_zero())
                    .map(|((a, bb), v)| (*a, *bb, v.clone()))
                    .collect();
                coproduct.insert(id, terms);
            }
        }
    }
    Ok(CohhCoalgebra { table, coproduct })
}

/// Checks coassociativity and counitality of the induced coproduct,
/// coefficientwise over all classes.
pub fn verify_cohh_coproduct(h: &CohhCoalgebra, field: &crate::field::FieldSpec) -> bool {
    let unit = h.unit_class();
    // Counit: the unit-class components recover the identity.
    for z in h.classes() {
        let terms = match h.coproduct.get(&z) {
            Some(t) => t,
            None => return false,
        };
        let mut left = field.zero();
        let mut right = field.zero();
        for (a, b, v) in terms {
            if *a == unit && *b == z {
                left = field.add(&left, v);
            }
            if *b == unit && *a == z {
                right = field.add(&right, v);
            }
            // No other unit-component may hit a different class.
            if *a == unit && *b != z && !v.is_zero() && b.s == z.s && b.t == z.t {
                return false;
            }
        }
        if !left.is_one() || !right.is_one() {
            return false;
        }
    }
    // Coassociativity: (ψ ⊗ id) ψ = (id ⊗ ψ) ψ.
    for z in h.classes() {
        let mut lhs: HashMap<(ClassId, ClassId, ClassId), Scalar> = HashMap::new();
        let mut rhs: HashMap<(ClassId, ClassId, ClassId), Scalar> = HashMap::new();
        for (a, b, v) in &h.coproduct[&z] {
            for (a1, a2, w) in &h.coproduct[a] {
                let coeff = field.mul(v, w);
                let e = lhs.entry((*a1, *a2, *b)).or_insert_with(|| field.zero());
                *e = field.add(e, &coeff);
            }
            for (b1, b2, w) in &h.coproduct[b] {
                let coeff = field.mul(v, w);
                let e = rhs.entry((*a, *b1, *b2)).or_insert_with(|| field.zero());
                *e = field.add(e, &coeff);
            }
        }
        for (k, v) in &lhs {
            if !field.sub(v, rhs.get(k).unwrap_or(&field.zero())).is_zero() {
                return false;
            }
        }
        for (k, v) in &rhs {
            if !field.sub(v, lhs.get(k).unwrap_or(&field.zero())).is_zero() {
                return false;
            }
        }
    }
    true
}
